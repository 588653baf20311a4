//! The Sklyanin algebra in its difference-operator realization, and the
//! elliptic L-operator built from it.
//!
//! The four generators are the two-term operators
//!
//! ```text
//! s_a = theta_{a+1}(2z - 2 l eta)/theta_1(2z) e^{eta d/dz}
//!     - theta_{a+1}(-2z - 2 l eta)/theta_1(2z) e^{-eta d/dz}
//! ```
//!
//! with complex spin `l`, satisfying six quadratic relations with structure
//! constants `I_ab = theta_{a+1}(0) theta_{b+1}(2 eta)`. The L-operator is
//! the 2x2 matrix pairing the generators with theta functions of the
//! spectral parameter; its kernel factorizes through the `V`-matrices of
//! half-period theta functions, which is checked here entry by entry.

use num_complex::Complex64 as C64;
use std::sync::Arc;

use crate::diffop::{operators_equal, DifferenceOperator, EqualityStats, SampledEqualityPolicy};
use crate::error::{Error, Result};
use crate::moduli::{ModuliContext, EPS_LATTICE, I, ONE};
use crate::sampling::Sampler;

/// Representation spin; `d = 2 l + 1` is the natural finite-dimension label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spin {
    pub ell: C64,
}

impl Spin {
    pub fn new(ell: C64) -> Self {
        Spin { ell }
    }

    pub fn of_re(ell: f64) -> Self {
        Spin {
            ell: C64::new(ell, 0.0),
        }
    }

    pub fn d(&self) -> C64 {
        2.0 * self.ell + ONE
    }

    /// `d = 2 l + 1` as a positive integer, when it is one.
    pub fn d_positive_integer(&self) -> Option<usize> {
        let d = self.d();
        let n = d.re.round();
        if n >= 1.0 && (d - C64::new(n, 0.0)).norm() < EPS_LATTICE {
            Some(n as usize)
        } else {
            None
        }
    }

    pub fn is_half_integer(&self) -> bool {
        self.d_positive_integer().is_some()
    }

    /// The spin of the intertwined partner representation, `-l - 1`.
    pub fn partner(&self) -> Spin {
        Spin {
            ell: -self.ell - ONE,
        }
    }
}

/// `I_ab = theta_{a+1}(0) theta_{b+1}(2 eta)`.
pub fn structure_constant(ctx: &ModuliContext, a: u8, b: u8) -> Result<C64> {
    Ok(ctx.theta(a + 1, C64::new(0.0, 0.0))? * ctx.theta(b + 1, ctx.two_eta())?)
}

#[derive(Debug, Clone)]
pub struct SklyaninGenerators {
    pub s: [DifferenceOperator; 4],
    pub spin: Spin,
}

/// Build the four generators for the given spin.
pub fn make_generators(ctx: &ModuliContext, spin: Spin) -> SklyaninGenerators {
    let s = [0u8, 1, 2, 3].map(|a| generator(ctx, spin, a));
    SklyaninGenerators { s, spin }
}

fn generator(ctx: &ModuliContext, spin: Spin, a: u8) -> DifferenceOperator {
    // term k=0 shifts by -eta, term k=1 by +eta
    let mut op = DifferenceOperator::new(-ctx.eta);
    let c = ctx.clone();
    let ell = spin.ell;
    op.set_term(
        0,
        Arc::new(move |z| {
            let th = c.theta1(2.0 * z)?;
            if th.norm() < 1e-250 {
                return Err(Error::Pole {
                    what: "sklyanin generator coefficient",
                    z,
                });
            }
            Ok(-c.theta(a + 1, -2.0 * z - 2.0 * ell * c.eta)? / th)
        }),
    );
    let c = ctx.clone();
    op.set_term(
        1,
        Arc::new(move |z| {
            let th = c.theta1(2.0 * z)?;
            if th.norm() < 1e-250 {
                return Err(Error::Pole {
                    what: "sklyanin generator coefficient",
                    z,
                });
            }
            Ok(c.theta(a + 1, 2.0 * z - 2.0 * ell * c.eta)? / th)
        }),
    );
    op
}

/// All six quadratic relations, verified as sampled operator identities.
///
/// For each cyclic `(alpha, beta, gamma)` of `(1,2,3)`:
///
/// ```text
/// (-1)^{alpha+1} I_{alpha 0} s_alpha s_0 = I_{beta gamma} s_beta s_gamma - I_{gamma beta} s_gamma s_beta
/// (-1)^{alpha+1} I_{alpha 0} s_0 s_alpha = I_{gamma beta} s_beta s_gamma - I_{beta gamma} s_gamma s_beta
/// ```
pub fn check_commutation(
    ctx: &ModuliContext,
    spin: Spin,
    policy: &SampledEqualityPolicy,
    seed: u64,
) -> Result<EqualityStats> {
    let gen = make_generators(ctx, spin);
    check_commutation_with(ctx, &gen, &structure_matrix(ctx)?, policy, seed)
}

/// The 4x4 table `I_ab`.
pub fn structure_matrix(ctx: &ModuliContext) -> Result<[[C64; 4]; 4]> {
    let mut m = [[C64::new(0.0, 0.0); 4]; 4];
    for a in 0..4u8 {
        for b in 0..4u8 {
            m[a as usize][b as usize] = structure_constant(ctx, a, b)?;
        }
    }
    Ok(m)
}

/// Relation check against an explicit structure-constant table; the table
/// argument exists so tests can feed perturbed constants and watch the
/// relations fail.
pub fn check_commutation_with(
    ctx: &ModuliContext,
    gen: &SklyaninGenerators,
    iab: &[[C64; 4]; 4],
    policy: &SampledEqualityPolicy,
    seed: u64,
) -> Result<EqualityStats> {
    let mut stats = EqualityStats::zero();
    let s = &gen.s;
    for (i, &(al, be, ga)) in [(1usize, 2usize, 3usize), (2, 3, 1), (3, 1, 2)].iter().enumerate() {
        let sign = if al % 2 == 1 { ONE } else { -ONE };
        let ss = |x: usize, y: usize| s[x].compose(ctx, &s[y]);
        let lhs1 = ss(al, 0).scaled(sign * iab[al][0]);
        let rhs1 = ss(be, ga)
            .scaled(iab[be][ga])
            .sub(ctx, &ss(ga, be).scaled(iab[ga][be]))?;
        stats = stats.merge(operators_equal(ctx, &lhs1, &rhs1, policy, seed ^ (i as u64 * 2 + 1))?);
        let lhs2 = ss(0, al).scaled(sign * iab[al][0]);
        let rhs2 = ss(be, ga)
            .scaled(iab[ga][be])
            .sub(ctx, &ss(ga, be).scaled(iab[be][ga]))?;
        stats = stats.merge(operators_equal(ctx, &lhs2, &rhs2, policy, seed ^ (i as u64 * 2 + 2))?);
    }
    Ok(stats)
}

/// The elliptic L-operator: a 2x2 matrix of two-term difference operators.
#[derive(Debug, Clone)]
pub struct LOperator {
    pub entries: [[DifferenceOperator; 2]; 2],
    pub spin: Spin,
    pub lambda: C64,
}

impl LOperator {
    pub fn lambda_pm(&self, ctx: &ModuliContext) -> (C64, C64) {
        let half = (self.spin.ell + 0.5) * ctx.eta;
        (self.lambda + half, self.lambda - half)
    }
}

/// Spectral-parameter weights attached to the generators inside L.
fn l_entry_weights(ctx: &ModuliContext, lambda: C64, i: usize, j: usize) -> Result<[C64; 4]> {
    let t = |a: u8| ctx.theta(a, 2.0 * lambda);
    let half = C64::new(0.5, 0.0);
    Ok(match (i, j) {
        (0, 0) => [half * t(1)?, C64::new(0.0, 0.0), C64::new(0.0, 0.0), half * t(4)?],
        (0, 1) => [C64::new(0.0, 0.0), half * t(2)?, half * t(3)?, C64::new(0.0, 0.0)],
        (1, 0) => [C64::new(0.0, 0.0), half * t(2)?, -half * t(3)?, C64::new(0.0, 0.0)],
        (1, 1) => [half * t(1)?, C64::new(0.0, 0.0), C64::new(0.0, 0.0), -half * t(4)?],
        _ => unreachable!(),
    })
}

/// Direct construction from the generator combination in each entry.
pub fn make_l(ctx: &ModuliContext, spin: Spin, lambda: C64) -> Result<LOperator> {
    let gen = make_generators(ctx, spin);
    let entry = |i: usize, j: usize| -> Result<DifferenceOperator> {
        let w = l_entry_weights(ctx, lambda, i, j)?;
        let mut acc: Option<DifferenceOperator> = None;
        for a in 0..4 {
            if w[a].norm() == 0.0 {
                continue;
            }
            let t = gen.s[a].scaled(w[a]);
            acc = Some(match acc {
                None => t,
                Some(cur) => cur.add(ctx, &t)?,
            });
        }
        Ok(acc.expect("every L entry has nonzero weights"))
    };
    Ok(LOperator {
        entries: [[entry(0, 0)?, entry(0, 1)?], [entry(1, 0)?, entry(1, 1)?]],
        spin,
        lambda,
    })
}

/// The intertwining-vector matrix
/// `V(lambda, z) = [[tb4(z+lambda), tb3(z+lambda)], [tb4(z-lambda), tb3(z-lambda)]]`.
pub fn v_matrix(ctx: &ModuliContext, lambda: C64, z: C64) -> Result<[[C64; 2]; 2]> {
    Ok([
        [ctx.theta_bar(4, z + lambda)?, ctx.theta_bar(3, z + lambda)?],
        [ctx.theta_bar(4, z - lambda)?, ctx.theta_bar(3, z - lambda)?],
    ])
}

/// Unnormalized inverse: `V(lambda, z) . v_adjugate = 2 theta_1(2z) theta_1(2 lambda) Id`.
pub fn v_adjugate(ctx: &ModuliContext, lambda: C64, z: C64) -> Result<[[C64; 2]; 2]> {
    Ok([
        [ctx.theta_bar(3, z - lambda)?, -ctx.theta_bar(3, z + lambda)?],
        [-ctx.theta_bar(4, z - lambda)?, ctx.theta_bar(4, z + lambda)?],
    ])
}

/// True matrix inverse of `V(lambda, z)`.
pub fn v_inverse(ctx: &ModuliContext, lambda: C64, z: C64) -> Result<[[C64; 2]; 2]> {
    let adj = v_adjugate(ctx, lambda, z)?;
    let det = 2.0 * ctx.theta1(2.0 * z)? * ctx.theta1(2.0 * lambda)?;
    if det.norm() < 1e-250 {
        return Err(Error::Pole {
            what: "V matrix inverse",
            z,
        });
    }
    Ok([
        [adj[0][0] / det, adj[0][1] / det],
        [adj[1][0] / det, adj[1][1] / det],
    ])
}

/// Factorized kernel coefficients: for each entry `(i, j)` the pair of
/// coefficients multiplying `delta(z - zeta + eta)` and `delta(z - zeta - eta)`:
///
/// `theta_1(2 lambda + 2 l eta) [Vinv(lambda + l eta, z)]_{i, s} [V(lambda - l eta, z)]_{s, j}`
///
/// with `s = 0` for the `+eta` shift and `s = 1` for `-eta`.
pub fn l_kernel_factorized(
    ctx: &ModuliContext,
    spin: Spin,
    lambda: C64,
    z: C64,
) -> Result<[[[C64; 2]; 2]; 2]> {
    let pref = ctx.theta1(2.0 * lambda + 2.0 * spin.ell * ctx.eta)?;
    let vinv = v_inverse(ctx, lambda + spin.ell * ctx.eta, z)?;
    let v = v_matrix(ctx, lambda - spin.ell * ctx.eta, z)?;
    let mut out = [[[C64::new(0.0, 0.0); 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for s in 0..2 {
                out[s][i][j] = pref * vinv[i][s] * v[s][j];
            }
        }
    }
    Ok(out)
}

/// Max relative deviation between the direct L-operator coefficients and the
/// factorized kernel at one sample point.
pub fn l_factorization_residual(
    ctx: &ModuliContext,
    spin: Spin,
    lambda: C64,
    z: C64,
) -> Result<f64> {
    let l = make_l(ctx, spin, lambda)?;
    let fact = l_kernel_factorized(ctx, spin, lambda, z)?;
    let mut max = 0.0f64;
    let mut scale = 0.0f64;
    let mut diffs = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            // operator index 1 is the +eta shift, index 0 is -eta
            let plus = l.entries[i][j].coeff_at(1, z)?;
            let minus = l.entries[i][j].coeff_at(0, z)?;
            for (direct, factored) in [(plus, fact[0][i][j]), (minus, fact[1][i][j])] {
                scale = scale.max(direct.norm()).max(factored.norm());
                diffs.push((direct - factored).norm());
            }
        }
    }
    for d in diffs {
        max = max.max(d / scale.max(1e-300));
    }
    Ok(max)
}

/// Pauli matrices `sigma_0..sigma_3`.
pub fn pauli(a: usize) -> [[C64; 2]; 2] {
    let zero = C64::new(0.0, 0.0);
    let one = ONE;
    match a {
        0 => [[one, zero], [zero, one]],
        1 => [[zero, one], [one, zero]],
        2 => [[zero, -I], [I, zero]],
        3 => [[one, zero], [zero, -one]],
        _ => panic!("pauli index out of range"),
    }
}

/// Expand the image of the spin-1/2 basis functions `(tb4, tb3)` in that
/// same basis by collocation at two points, with a residual check at a
/// third point certifying the image lies in the span.
pub fn expand_in_theta_basis<F>(ctx: &ModuliContext, f: F) -> Result<(C64, C64, f64)>
where
    F: Fn(C64) -> Result<C64>,
{
    let z1 = C64::new(0.23, 0.05);
    let z2 = C64::new(-0.17, 0.12);
    let z3 = C64::new(0.05, -0.08);
    let b = |a: u8, z: C64| ctx.theta_bar(a, z);
    let det = b(4, z1)? * b(3, z2)? - b(3, z1)? * b(4, z2)?;
    let v1 = f(z1)?;
    let v2 = f(z2)?;
    let c4 = (v1 * b(3, z2)? - b(3, z1)? * v2) / det;
    let c3 = (b(4, z1)? * v2 - v1 * b(4, z2)?) / det;
    let probe = f(z3)?;
    let recon = c4 * b(4, z3)? + c3 * b(3, z3)?;
    let resid = (probe - recon).norm() / probe.norm().max(1e-300);
    Ok((c4, c3, resid))
}

/// Matrix of `s_a` at spin 1/2 in the basis `(tb4, tb3)`.
///
/// Columns are the expansions of the generator images of the two basis
/// functions. Numerically this equals
/// `theta_1(2 eta) (-i)^{delta_{a,2}} theta_{a+1}(eta)^{-1} sigma_a`;
/// note the `theta_1(2 eta)` normalization accompanying the Pauli form.
pub fn spin_half_matrix(ctx: &ModuliContext, a: usize) -> Result<[[C64; 2]; 2]> {
    let gen = make_generators(ctx, Spin::of_re(0.5));
    let op = &gen.s[a];
    let img4 = |z: C64| op.apply_value(ctx, |w| ctx.theta_bar(4, w), z);
    let img3 = |z: C64| op.apply_value(ctx, |w| ctx.theta_bar(3, w), z);
    let (m11, m21, r1) = expand_in_theta_basis(ctx, img4)?;
    let (m12, m22, r2) = expand_in_theta_basis(ctx, img3)?;
    if r1.max(r2) > 1e-9 {
        return Err(Error::Domain(format!(
            "spin-1/2 image left the theta basis span: residuals {r1:e}, {r2:e}"
        )));
    }
    Ok([[m11, m12], [m21, m22]])
}

/// Expected spin-1/2 matrix: `theta_1(2 eta) (-i)^{delta_{a,2}} sigma_a / theta_{a+1}(eta)`.
pub fn spin_half_matrix_expected(ctx: &ModuliContext, a: usize) -> Result<[[C64; 2]; 2]> {
    let mut pref = ctx.theta1(ctx.two_eta())? / ctx.theta(a as u8 + 1, ctx.eta)?;
    if a == 2 {
        pref *= -I;
    }
    let sg = pauli(a);
    Ok([
        [pref * sg[0][0], pref * sg[0][1]],
        [pref * sg[1][0], pref * sg[1][1]],
    ])
}

/// The 8-vertex R-matrix as a 4x4 table over `aux x aux`:
/// `R(lambda) = sum_a theta_{a+1}(2 lambda + eta)/theta_{a+1}(eta) sigma_a x sigma_a`.
pub fn r_matrix_8vertex(ctx: &ModuliContext, lambda: C64) -> Result<[[C64; 4]; 4]> {
    let mut m = [[C64::new(0.0, 0.0); 4]; 4];
    for a in 0..4 {
        let w = ctx.theta(a as u8 + 1, 2.0 * lambda + ctx.eta)? / ctx.theta(a as u8 + 1, ctx.eta)?;
        let sg = pauli(a);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        m[2 * i + k][2 * j + l] += w * sg[i][j] * sg[k][l];
                    }
                }
            }
        }
    }
    Ok(m)
}

/// Acting on the theta basis, the spin-1/2 L-operator is the 8-vertex
/// R-matrix at shifted argument, scaled by `theta_1(2 eta)/2`:
/// `L(lambda) = (theta_1(2 eta)/2) R(lambda - eta/2)` entry by entry.
/// Returns the max relative deviation.
pub fn l_spin_half_vs_r_residual(ctx: &ModuliContext, lambda: C64) -> Result<f64> {
    let l = make_l(ctx, Spin::of_re(0.5), lambda)?;
    let r = r_matrix_8vertex(ctx, lambda - 0.5 * ctx.eta)?;
    let pref = 0.5 * ctx.theta1(ctx.two_eta())?;
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let op = &l.entries[i][j];
            let img4 = |z: C64| op.apply_value(ctx, |w| ctx.theta_bar(4, w), z);
            let img3 = |z: C64| op.apply_value(ctx, |w| ctx.theta_bar(3, w), z);
            let (m11, m21, r1) = expand_in_theta_basis(ctx, img4)?;
            let (m12, m22, r2) = expand_in_theta_basis(ctx, img3)?;
            if r1.max(r2) > 1e-9 {
                return Err(Error::Domain("L image left the theta basis span".into()));
            }
            let got = [[m11, m12], [m21, m22]];
            for k in 0..2 {
                for q in 0..2 {
                    let want = pref * r[2 * i + k][2 * j + q];
                    let d = (got[k][q] - want).norm();
                    let scale = want.norm().max(got[k][q].norm());
                    if scale > 1e-12 {
                        worst = worst.max(d / scale);
                    } else {
                        worst = worst.max(d);
                    }
                }
            }
        }
    }
    Ok(worst)
}

/// `R(lambda - mu) L_1(lambda) L_2(mu) = L_2(mu) L_1(lambda) R(lambda - mu)`
/// with both L's at the given spin sharing one quantum variable and `R`
/// acting in the two auxiliary spaces. Residual over sampled points and a
/// fixed probe function.
pub fn rll_check(
    ctx: &ModuliContext,
    spin: Spin,
    lambda: C64,
    mu: C64,
    n_samples: usize,
    seed: u64,
) -> Result<EqualityStats> {
    let l_lam = make_l(ctx, spin, lambda)?;
    let l_mu = make_l(ctx, spin, mu)?;
    let r = r_matrix_8vertex(ctx, lambda - mu)?;
    let probe = |z: C64| -> Result<C64> { Ok((0.9 * z).exp() + 0.3 * (-1.1 * z).exp()) };
    let mut sampler = Sampler::new(seed);
    let w = Window::default_for_rll();
    let mut diffs = Vec::new();
    let mut scale = 0.0f64;
    for _ in 0..n_samples {
        let z = sampler.draw_z(ctx, &w, 1e-3);
        for i in 0..2 {
            for k in 0..2 {
                for j in 0..2 {
                    for l in 0..2 {
                        let mut lhs = C64::new(0.0, 0.0);
                        let mut rhs = C64::new(0.0, 0.0);
                        for m in 0..2 {
                            for n in 0..2 {
                                // LHS: R_{(ik),(mn)} (L(lam)_{mj} . L(mu)_{nl}) f
                                let v = l_lam.entries[m][j].apply_value(
                                    ctx,
                                    |u| l_mu.entries[n][l].apply_value(ctx, probe, u),
                                    z,
                                )?;
                                lhs += r[2 * i + k][2 * m + n] * v;
                                // RHS: (L(mu)_{kn} . L(lam)_{im}) f  R_{(mn),(jl)}
                                let v = l_mu.entries[k][n].apply_value(
                                    ctx,
                                    |u| l_lam.entries[i][m].apply_value(ctx, probe, u),
                                    z,
                                )?;
                                rhs += v * r[2 * m + n][2 * j + l];
                            }
                        }
                        scale = scale.max(lhs.norm()).max(rhs.norm());
                        diffs.push((lhs - rhs).norm());
                    }
                }
            }
        }
    }
    let scale = scale.max(1e-300);
    Ok(EqualityStats {
        max_residual: diffs.iter().cloned().fold(0.0, f64::max) / scale,
        mean_residual: diffs.iter().sum::<f64>() / diffs.len() as f64 / scale,
        samples: diffs.len(),
    })
}

use crate::sampling::Window;

trait RllWindow {
    fn default_for_rll() -> Window;
}

impl RllWindow for Window {
    fn default_for_rll() -> Window {
        Window::narrow()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> ModuliContext {
        ModuliContext::default_verification()
    }

    fn rel(a: C64, b: C64) -> f64 {
        let m = a.norm().max(b.norm());
        if m == 0.0 {
            0.0
        } else {
            (a - b).norm() / m
        }
    }

    #[test]
    fn generator_kernel_is_even() {
        // s_a(-z, -z') = s_a(z, z'): coefficient of e^{+eta d} at z equals
        // coefficient of e^{-eta d} at -z with the sign flip of delta matching
        let c = ctx();
        let gen = make_generators(&c, Spin::new(C64::new(0.37, 0.21)));
        let z = C64::new(0.19, 0.07);
        for op in &gen.s {
            let plus_at_z = op.coeff_at(1, z).unwrap();
            let minus_at_neg = op.coeff_at(0, -z).unwrap();
            assert!(rel(plus_at_z, minus_at_neg) < 1e-13);
        }
    }

    #[test]
    fn s0_on_constants_matches_hand_expansion() {
        let c = ctx();
        let gen = make_generators(&c, Spin::of_re(1.0));
        let z = C64::new(0.13, 0.04);
        let v = gen.s[0].apply_value(&c, |_| Ok(ONE), z).unwrap();
        let expect = (c.theta1(2.0 * z - 2.0 * c.eta).unwrap()
            - c.theta1(-2.0 * z - 2.0 * c.eta).unwrap())
            / c.theta1(2.0 * z).unwrap();
        assert!(rel(v, expect) < 1e-13);
    }

    #[test]
    fn commutation_relations_hold() {
        let c = ctx();
        let policy = SampledEqualityPolicy {
            n_samples: 12,
            ..Default::default()
        };
        for spin in [Spin::of_re(0.5), Spin::new(C64::new(0.37, 0.21))] {
            let stats = check_commutation(&c, spin, &policy, 17).unwrap();
            assert!(stats.max_residual < 1e-11, "spin {spin:?}: {stats:?}");
        }
    }

    #[test]
    fn perturbed_structure_constants_fail() {
        let c = ctx();
        let gen = make_generators(&c, Spin::of_re(0.5));
        let mut iab = structure_matrix(&c).unwrap();
        for row in iab.iter_mut() {
            for v in row.iter_mut() {
                *v *= C64::new(1.0 + 1e-4, 0.0);
            }
        }
        // uniform scaling cancels; perturb a single constant instead
        iab[1][2] *= C64::new(1.0 + 1e-4, 0.0);
        let policy = SampledEqualityPolicy {
            n_samples: 8,
            ..Default::default()
        };
        let stats = check_commutation_with(&c, &gen, &iab, &policy, 19).unwrap();
        assert!(stats.max_residual > 1e-9, "{stats:?}");
    }

    #[test]
    fn spin_half_matrices_are_scaled_paulis() {
        let c = ctx();
        for a in 0..4 {
            let got = spin_half_matrix(&c, a).unwrap();
            let expect = spin_half_matrix_expected(&c, a).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    let d = (got[i][j] - expect[i][j]).norm();
                    let s = expect[i][j].norm().max(got[i][j].norm()).max(1e-30);
                    assert!(d / s < 1e-10 || d < 1e-12, "a={a} ({i},{j}): {d:e}");
                }
            }
        }
    }

    #[test]
    fn v_adjugate_normalization() {
        // V(lambda, z) . adj / (2 theta1(2z)) = theta_1(2 lambda) Id
        let c = ctx();
        let lam = C64::new(0.21, 0.06);
        let z = C64::new(0.14, -0.03);
        let v = v_matrix(&c, lam, z).unwrap();
        let adj = v_adjugate(&c, lam, z).unwrap();
        let norm = 2.0 * c.theta1(2.0 * z).unwrap();
        let expect = c.theta1(2.0 * lam).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = C64::new(0.0, 0.0);
                for s in 0..2 {
                    acc += adj[i][s] * v[s][j] / norm;
                }
                let want = if i == j { expect } else { C64::new(0.0, 0.0) };
                assert!((acc - want).norm() < 1e-12 * expect.norm().max(1.0));
            }
        }
    }

    #[test]
    fn l_factorization_matches_direct_form() {
        let c = ctx();
        let spin = Spin::new(C64::new(0.31, 0.11));
        let lam = C64::new(0.23, 0.09);
        let z = C64::new(0.17, 0.06);
        let resid = l_factorization_residual(&c, spin, lam, z).unwrap();
        assert!(resid < 1e-12, "residual {resid:e}");
    }

    #[test]
    fn l_at_spin_half_is_scaled_8vertex_r() {
        let c = ctx();
        let resid = l_spin_half_vs_r_residual(&c, C64::new(0.19, 0.03)).unwrap();
        assert!(resid < 1e-10, "residual {resid:e}");
    }

    #[test]
    fn rll_for_spin_half() {
        let c = ctx();
        let stats = rll_check(
            &c,
            Spin::of_re(0.5),
            C64::new(0.19, 0.03),
            C64::new(-0.07, 0.11),
            3,
            23,
        )
        .unwrap();
        assert!(stats.max_residual < 1e-11, "{stats:?}");
    }
}
