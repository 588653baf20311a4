//! Intertwining operators between spins `l` and `-l-1`.
//!
//! The operator `W(lambda)` is a half-infinite series in `e^{2 eta d/dz}`
//! behind the leading shift `e^{-lambda d/dz}`; its normal-ordered
//! coefficients are
//!
//! ```text
//! w_k(z) = e^{-i pi lambda^2/eta + 2 pi i lambda z/eta}
//!          Gamma(2z - 2 lambda + 2 eta)/Gamma(2z + 2 eta) t_k(z)
//! ```
//!
//! where `t_k` are the terms of the very-well-poised series with
//! `alpha_1 = (z - lambda)/eta` and upper parameter `-lambda/eta`. At
//! `lambda = d eta` with positive integer `d` the series terminates after
//! `d+1` terms and collapses to the finite elliptic-binomial form, which is
//! also built here independently. The normalization constant
//! `c(lambda) = rho_0 e^{i pi lambda^2/eta} / Gamma(-2 lambda)` makes
//! `W(lambda) W(-lambda) = id`; the corresponding finite sums `S_n` vanish
//! for `n >= 1` by the Frenkel-Turaev summation.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::algebra::{make_generators, Spin};
use crate::diffop::{operators_equal, DifferenceOperator, EqualityStats, SampledEqualityPolicy};
use crate::error::{Error, Result};
use crate::hyper::{binomial, omega_terms};
use crate::moduli::{ModuliContext, I, ONE};
use crate::vertex::vertex_w;

/// Normalization `c(lambda) = rho_0 e^{i pi lambda^2/eta} / Gamma(-2 lambda)`.
pub fn c_norm(ctx: &ModuliContext, lambda: C64) -> Result<C64> {
    let rho0 = ctx.gamma_constants()?.rho0;
    Ok(rho0 * (I * PI * lambda * lambda / ctx.eta).exp() / ctx.gamma(-2.0 * lambda)?)
}

/// Normal-ordered series coefficients `w_0(z) .. w_n(z)`.
pub fn w_series_coeffs(ctx: &ModuliContext, lambda: C64, z: C64, n: usize) -> Result<Vec<C64>> {
    let pref = (I * PI * (-lambda * lambda + 2.0 * lambda * z) / ctx.eta).exp()
        * ctx.gamma(2.0 * z - 2.0 * lambda + 2.0 * ctx.eta)?
        / ctx.gamma(2.0 * z + 2.0 * ctx.eta)?;
    let alpha1 = (z - lambda) / ctx.eta;
    let terms = omega_terms(ctx, alpha1, &[-lambda / ctx.eta], ONE, n)?;
    Ok(terms.into_iter().map(|t| pref * t).collect())
}

/// Single coefficient `w_k(z)`; also the comb-kernel coefficient of
/// `W^z_zeta(lambda)` at the support `zeta = z - lambda + 2 k eta`.
pub fn w_coeff(ctx: &ModuliContext, lambda: C64, k: usize, z: C64) -> Result<C64> {
    Ok(w_series_coeffs(ctx, lambda, z, k)?[k])
}

/// Series coefficient through the normalization route:
/// `c(lambda) theta_1(2z - 2 lambda + 4 k eta) / W^{z - lambda + 2 k eta, z}(lambda + eta)`.
/// Used as a dual evaluation path in tests.
pub fn w_coeff_via_norm(ctx: &ModuliContext, lambda: C64, k: usize, z: C64) -> Result<C64> {
    let zk = z - lambda + 2.0 * k as f64 * ctx.eta;
    let denom = vertex_w(ctx, zk, z, lambda + ctx.eta)?;
    Ok(c_norm(ctx, lambda)? * ctx.theta1(2.0 * z - 2.0 * lambda + 4.0 * k as f64 * ctx.eta)? / denom)
}

/// Truncated series operator: terms `k = 0..=n` at shifts `-lambda + 2 k eta`.
pub fn make_w_series(ctx: &ModuliContext, lambda: C64, n: usize) -> DifferenceOperator {
    let mut op = DifferenceOperator::new(-lambda);
    for k in 0..=n {
        let c = ctx.clone();
        op.set_term(
            k as i64,
            Arc::new(move |z| w_coeff(&c, lambda, k, z)),
        );
    }
    op
}

/// Finite-sum coefficient for integer `d`:
///
/// ```text
/// (i e^{i pi(-eta + tau/6)} eta_D(tau))^d (-1)^k binom[d, k]
///    theta_1(2z - 2(d - 2k) eta) / prod_{j=0..d} theta_1(2z + 2(k - j) eta)
/// ```
pub fn w_finite_coeff(ctx: &ModuliContext, d: usize, k: usize, z: C64) -> Result<C64> {
    let consts = ctx.gamma_constants()?;
    let pref = (I * (I * PI * (-ctx.eta + ctx.tau / 6.0)).exp() * consts.dedekind_tau)
        .powi(d as i32);
    let df = d as f64;
    let kf = k as f64;
    let num = ctx.theta1(2.0 * z - 2.0 * (df - 2.0 * kf) * ctx.eta)?;
    let mut den = ONE;
    for j in 0..=d {
        den *= ctx.theta1(2.0 * z + 2.0 * (kf - j as f64) * ctx.eta)?;
    }
    if den.norm() < 1e-250 {
        return Err(Error::Pole {
            what: "finite intertwiner coefficient",
            z,
        });
    }
    let sign = if k % 2 == 0 { ONE } else { -ONE };
    Ok(pref * sign * binomial(ctx, d, k)? * num / den)
}

/// The `d+1`-term finite intertwiner for half-integer spin (`d = 2l+1`).
pub fn make_w_finite(ctx: &ModuliContext, spin: Spin) -> Result<DifferenceOperator> {
    let d = spin.d_positive_integer().ok_or_else(|| {
        Error::Domain(format!(
            "finite intertwiner needs d = 2l+1 a positive integer, got l = {}",
            spin.ell
        ))
    })?;
    let mut op = DifferenceOperator::new(-(d as f64) * ctx.eta);
    for k in 0..=d {
        let c = ctx.clone();
        op.set_term(k as i64, Arc::new(move |z| w_finite_coeff(&c, d, k, z)));
    }
    Ok(op)
}

/// A spanning family of even theta functions of order `n` (`n` even):
/// products `prod_i theta_1(x - x_i) theta_1(x + x_i)` over generic points.
pub fn theta_plus_basis(ctx: &ModuliContext, n: usize) -> Vec<Arc<dyn Fn(C64) -> Result<C64> + Send + Sync>> {
    assert!(n % 2 == 0, "even order required");
    if n == 0 {
        return vec![Arc::new(|_| Ok(ONE))];
    }
    if n == 2 {
        let c4 = ctx.clone();
        let c3 = ctx.clone();
        return vec![
            Arc::new(move |x| c4.theta_bar(4, x)),
            Arc::new(move |x| c3.theta_bar(3, x)),
        ];
    }
    // generic zero pairs; dim Theta_n^+ = n/2 + 1
    let m = n / 2;
    let mut out: Vec<Arc<dyn Fn(C64) -> Result<C64> + Send + Sync>> = Vec::new();
    for b in 0..=m {
        let c = ctx.clone();
        let zeros: Vec<C64> = (0..m)
            .map(|i| C64::new(0.09 + 0.07 * (i as f64 + 1.0) + 0.013 * b as f64, 0.041 * (b as f64 - 1.0)))
            .collect();
        out.push(Arc::new(move |x| {
            let mut acc = ONE;
            for x0 in &zeros {
                acc *= c.theta1(x - x0)? * c.theta1(x + x0)?;
            }
            Ok(acc)
        }));
    }
    out
}

/// Annihilation residual: max over samples of `|W f| / sum |terms|`.
pub fn annihilation_residual(
    ctx: &ModuliContext,
    w: &DifferenceOperator,
    f: &Arc<dyn Fn(C64) -> Result<C64> + Send + Sync>,
    samples: &[C64],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for &z in samples {
        let (v, scale) = w.apply_value_scaled(ctx, |u| f(u), z)?;
        worst = worst.max(v.norm() / scale.max(1e-300));
    }
    Ok(worst)
}

/// Intertwining check `W_l s_a^{(l)} = s_a^{(-l-1)} W_l` at finite `d`.
pub fn check_intertwining_finite(
    ctx: &ModuliContext,
    spin: Spin,
    policy: &SampledEqualityPolicy,
    seed: u64,
) -> Result<EqualityStats> {
    let w = make_w_finite(ctx, spin)?;
    intertwining_stats(ctx, &w, spin, None, policy, seed)
}

/// Truncated-series intertwining for generic spin. Residuals are compared
/// only on shift indices where the truncated composition is exact: both
/// `(j, -eta)` and `(j-1, +eta)` contributions exist for total index
/// `m <= n`, so the top index `n + 1` is dropped from both sides.
pub fn check_intertwining_series(
    ctx: &ModuliContext,
    spin: Spin,
    n: usize,
    policy: &SampledEqualityPolicy,
    seed: u64,
) -> Result<EqualityStats> {
    let lambda = spin.d() * ctx.eta;
    let w = make_w_series(ctx, lambda, n);
    intertwining_stats(ctx, &w, spin, Some(n as i64), policy, seed)
}

fn intertwining_stats(
    ctx: &ModuliContext,
    w: &DifferenceOperator,
    spin: Spin,
    exact_top: Option<i64>,
    policy: &SampledEqualityPolicy,
    seed: u64,
) -> Result<EqualityStats> {
    let gen_l = make_generators(ctx, spin);
    let gen_partner = make_generators(ctx, spin.partner());
    let mut stats = EqualityStats::zero();
    for a in 0..4 {
        let mut lhs = w.compose(ctx, &gen_l.s[a]);
        let mut rhs = gen_partner.s[a].compose(ctx, w);
        if let Some(top) = exact_top {
            lhs = lhs.restrict_indices(i64::MIN / 2, top);
            rhs = rhs.restrict_indices(i64::MIN / 2, top);
        }
        stats = stats.merge(operators_equal(ctx, &lhs, &rhs, policy, seed ^ a as u64)?);
    }
    Ok(stats)
}

/// The reflected operator `z -> -z` also intertwines; checked via the same
/// composition route.
pub fn check_intertwining_reflected(
    ctx: &ModuliContext,
    spin: Spin,
    policy: &SampledEqualityPolicy,
    seed: u64,
) -> Result<EqualityStats> {
    let w = make_w_finite(ctx, spin)?.reflect();
    let gen_l = make_generators(ctx, spin);
    let gen_partner = make_generators(ctx, spin.partner());
    let mut stats = EqualityStats::zero();
    for a in 0..4 {
        let lhs = w.compose(ctx, &gen_l.s[a]);
        let rhs = gen_partner.s[a].compose(ctx, &w);
        stats = stats.merge(operators_equal(ctx, &lhs, &rhs, policy, seed ^ a as u64)?);
    }
    Ok(stats)
}

/// The convolution sums behind `W(lambda) W(-lambda) = id`:
///
/// ```text
/// S_n(z) = sum_{k=0}^n theta_1(2z - 2 lambda + 4 k eta)
///          / ( W^{z-lambda+2k eta, z}(lambda + eta) W^{z+2n eta, z-lambda+2k eta}(eta - lambda) )
/// ```
pub fn s_n_sum(ctx: &ModuliContext, lambda: C64, z: C64, n: usize) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..=n {
        let zk = z - lambda + 2.0 * k as f64 * ctx.eta;
        let d1 = vertex_w(ctx, zk, z, lambda + ctx.eta)?;
        let d2 = vertex_w(ctx, z + 2.0 * n as f64 * ctx.eta, zk, ctx.eta - lambda)?;
        acc += ctx.theta1(2.0 * z - 2.0 * lambda + 4.0 * k as f64 * ctx.eta)? / (d1 * d2);
    }
    Ok(acc)
}

/// Closed form of `theta_1(2z) S_0(z)`:
/// `rho_0^{-2} e^{-2 i pi lambda^2/eta} Gamma(2 lambda) Gamma(-2 lambda)`.
///
/// The square on `rho_0` is forced by `c(lambda) c(-lambda) theta_1(2z) S_0 = 1`.
pub fn theta_s0_closed(ctx: &ModuliContext, lambda: C64) -> Result<C64> {
    let rho0 = ctx.gamma_constants()?.rho0;
    Ok((-2.0 * I * PI * lambda * lambda / ctx.eta).exp()
        * ctx.gamma(2.0 * lambda)?
        * ctx.gamma(-2.0 * lambda)?
        / (rho0 * rho0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{Sampler, Window};

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
    fn series_coeff_dual_route() {
        let c = ctx();
        let lam = C64::new(0.23, 0.11);
        let z = C64::new(0.17, 0.06);
        for k in 0..5 {
            let a = w_coeff(&c, lam, k, z).unwrap();
            let b = w_coeff_via_norm(&c, lam, k, z).unwrap();
            assert!(rel(a, b) < 1e-11, "k={k}: rel {}", rel(a, b));
        }
    }

    #[test]
    fn k0_coefficient_closed_form() {
        let c = ctx();
        let lam = C64::new(0.23, 0.11);
        let z = C64::new(0.17, 0.06);
        let got = w_coeff(&c, lam, 0, z).unwrap();
        let expect = (I * PI * (-lam * lam + 2.0 * lam * z) / c.eta).exp()
            * c.gamma(2.0 * z - 2.0 * lam + 2.0 * c.eta).unwrap()
            / c.gamma(2.0 * z + 2.0 * c.eta).unwrap();
        assert!(rel(got, expect) < 1e-14);
    }

    #[test]
    fn series_terminates_and_matches_finite_form() {
        let c = ctx();
        let z = C64::new(0.17, 0.06);
        for d in 1..=3usize {
            let lam = d as f64 * c.eta;
            let coeffs = w_series_coeffs(&c, lam, z, d + 2).unwrap();
            for k in 0..=d {
                let fin = w_finite_coeff(&c, d, k, z).unwrap();
                assert!(
                    rel(coeffs[k], fin) < 1e-11,
                    "d={d} k={k}: rel {}",
                    rel(coeffs[k], fin)
                );
            }
            // beyond the termination order the series coefficients vanish
            assert!(coeffs[d + 1].norm() / coeffs[0].norm().max(1e-300) < 1e-12);
        }
        // d = 1 has exactly two terms
        let w = make_w_finite(&c, Spin::of_re(0.0)).unwrap();
        assert_eq!(w.num_terms(), 2);
    }

    #[test]
    fn annihilates_even_theta_space() {
        let c = ctx();
        let mut sampler = Sampler::new(31);
        let w = Window::narrow();
        let samples: Vec<C64> = (0..6).map(|_| sampler.draw_z(&c, &w, 1e-3)).collect();
        // l = 1/2 annihilates (tb4, tb3); l = 1 the even order-4 products
        for (ell, n) in [(0.5, 2usize), (1.0, 4)] {
            let wop = make_w_finite(&c, Spin::of_re(ell)).unwrap();
            for f in theta_plus_basis(&c, n) {
                let r = annihilation_residual(&c, &wop, &f, &samples).unwrap();
                assert!(r < 1e-10, "l={ell}: residual {r:e}");
            }
        }
    }

    #[test]
    fn intertwining_finite_and_series() {
        let c = ctx();
        let policy = SampledEqualityPolicy {
            n_samples: 10,
            ..Default::default()
        };
        for d in 1..=3usize {
            let spin = Spin::of_re((d as f64 - 1.0) / 2.0);
            let stats = check_intertwining_finite(&c, spin, &policy, 41).unwrap();
            assert!(stats.max_residual < 1e-9, "d={d}: {stats:?}");
        }
        // generic spin through the truncated series
        let stats =
            check_intertwining_series(&c, Spin::of_re(0.3), 10, &policy, 43).unwrap();
        assert!(stats.max_residual < 1e-8, "{stats:?}");
    }

    #[test]
    fn reflected_operator_intertwines() {
        let c = ctx();
        let policy = SampledEqualityPolicy {
            n_samples: 8,
            ..Default::default()
        };
        let stats =
            check_intertwining_reflected(&c, Spin::of_re(0.5), &policy, 47).unwrap();
        assert!(stats.max_residual < 1e-9, "{stats:?}");
    }

    #[test]
    fn s_n_vanishes_and_s0_closed_form() {
        let c = ctx();
        let lam = C64::new(0.23, 0.11);
        let z = C64::new(0.17, 0.06);
        let s0 = s_n_sum(&c, lam, z, 0).unwrap();
        for n in 1..=3 {
            let sn = s_n_sum(&c, lam, z, n).unwrap();
            assert!(sn.norm() / s0.norm() < 1e-10, "n={n}: {}", sn.norm() / s0.norm());
        }
        let lhs = c.theta1(2.0 * z).unwrap() * s0;
        let rhs = theta_s0_closed(&c, lam).unwrap();
        assert!(rel(lhs, rhs) < 1e-11, "rel {}", rel(lhs, rhs));
        // normalization: c(lam) c(-lam) theta1(2z) S_0 = 1
        let v = c_norm(&c, lam).unwrap() * c_norm(&c, -lam).unwrap() * lhs;
        assert!(rel(v, ONE) < 1e-11);
    }

    #[test]
    fn w_at_zero_is_identity() {
        // lambda -> 0 collapses the shift and the k=0 coefficient to 1
        let c = ctx();
        let z = C64::new(0.17, 0.06);
        let coeffs = w_series_coeffs(&c, C64::new(0.0, 0.0), z, 3).unwrap();
        assert!(rel(coeffs[0], ONE) < 1e-12);
        for k in 1..=3 {
            assert!(coeffs[k].norm() < 1e-12);
        }
    }

    #[test]
    fn finite_form_needs_integer_d() {
        let c = ctx();
        assert!(make_w_finite(&c, Spin::of_re(0.3)).is_err());
    }
}
