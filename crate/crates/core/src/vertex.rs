//! Intertwining vectors and vertex functions.
//!
//! The building blocks are the 2-component vectors
//! `|zeta> = (tb4(zeta), tb3(zeta))` and their orthogonal partners
//! `|zeta>_perp = (tb3(zeta), -tb4(zeta))`, with
//! `<xi|zeta>_perp = 2 theta_1(xi+zeta) theta_1(xi-zeta)`.
//!
//! An intertwining (co)vector is a two-term comb of such vectors weighted by
//! `1/sqrt(2 theta_1(2 z))`, supported at lower index `z +- eta`. Their
//! scalar products produce four-term combs; the orthogonality and
//! completeness relations, the vertex intertwining relation and its dual
//! contraction are all checked coefficient-wise on those supports.
//!
//! The meromorphic vertex function is
//!
//! ```text
//! W^{z,zeta}(lambda) = e^{-2 pi i lambda z / eta}
//!   Gamma(z+zeta+lambda+eta) Gamma(z-zeta+lambda+eta)
//!   -----------------------------------------------
//!   Gamma(z+zeta-lambda+eta) Gamma(z-zeta-lambda+eta)
//! ```
//!
//! and its shadow-world partner `W^z_zeta(lambda)` is the half-infinite comb
//! supported at `zeta = z - lambda + 2 k eta` whose coefficients coincide
//! with the normal-ordered series coefficients of the intertwining operator.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::intertwiner::{c_norm, w_coeff};
use crate::moduli::{ModuliContext, I, ONE};

pub type Vector2 = [C64; 2];

pub fn ket(ctx: &ModuliContext, zeta: C64) -> Result<Vector2> {
    Ok([ctx.theta_bar(4, zeta)?, ctx.theta_bar(3, zeta)?])
}

pub fn ket_perp(ctx: &ModuliContext, zeta: C64) -> Result<Vector2> {
    Ok([ctx.theta_bar(3, zeta)?, -ctx.theta_bar(4, zeta)?])
}

pub fn dot(a: Vector2, b: Vector2) -> C64 {
    a[0] * b[0] + a[1] * b[1]
}

/// `<xi|zeta>_perp = 2 theta_1(xi + zeta) theta_1(xi - zeta)`.
pub fn scprod_closed(ctx: &ModuliContext, xi: C64, zeta: C64) -> Result<C64> {
    Ok(2.0 * ctx.theta1(xi + zeta)? * ctx.theta1(xi - zeta)?)
}

/// Which of the four intertwining-vector kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorKind {
    Phi,
    PhiBar,
    CoPhi,
    CoPhiBar,
}

/// An intertwining (co)vector: upper variable, spectral parameter, kind.
/// The two comb terms live at lower variable `upper + eps * eta`.
#[derive(Debug, Clone, Copy)]
pub struct IntertwiningVector {
    pub kind: VectorKind,
    pub upper: C64,
    pub lambda: C64,
}

impl IntertwiningVector {
    pub fn new(kind: VectorKind, upper: C64, lambda: C64) -> Self {
        IntertwiningVector { kind, upper, lambda }
    }

    /// The 2-vector coefficient at the branch `eps` (`+1` puts the lower
    /// variable at `upper + eta`), including the square-root prefactor.
    pub fn term(&self, ctx: &ModuliContext, eps: i8) -> Result<Vector2> {
        let th = ctx.theta1(2.0 * self.upper)?;
        if th.norm() < 1e-250 {
            return Err(Error::Pole {
                what: "intertwining vector prefactor",
                z: self.upper,
            });
        }
        let pref = ONE / (2.0 * th).sqrt();
        let (vec, sign) = match (self.kind, eps) {
            (VectorKind::Phi, 1) => (ket(ctx, self.upper + self.lambda)?, ONE),
            (VectorKind::Phi, -1) => (ket(ctx, self.upper - self.lambda)?, ONE),
            (VectorKind::PhiBar, 1) => (ket_perp(ctx, self.upper - self.lambda)?, ONE),
            (VectorKind::PhiBar, -1) => (ket_perp(ctx, self.upper + self.lambda)?, -ONE),
            (VectorKind::CoPhi, 1) => (ket(ctx, self.upper + self.lambda)?, ONE),
            (VectorKind::CoPhi, -1) => (ket(ctx, self.upper - self.lambda)?, ONE),
            (VectorKind::CoPhiBar, 1) => (ket_perp(ctx, self.upper - self.lambda)?, ONE),
            (VectorKind::CoPhiBar, -1) => (ket_perp(ctx, self.upper + self.lambda)?, -ONE),
            _ => return Err(Error::Domain("branch must be +1 or -1".into())),
        };
        Ok([pref * sign * vec[0], pref * sign * vec[1]])
    }

    pub fn support(&self, ctx: &ModuliContext, eps: i8) -> C64 {
        self.upper + eps as f64 * ctx.eta
    }
}

/// Four-term scalar-product comb `<phi^z_{z'}(lambda) | phibar^zeta_{zeta'}(mu)>`,
/// indexed by the branch pair `(eps_1, eps_2)` with supports
/// `z' = z + eps_1 eta`, `zeta' = zeta + eps_2 eta`.
#[derive(Debug, Clone, Copy)]
pub struct ScalarProductComb {
    pub z: C64,
    pub zeta: C64,
    /// `coeff[i][j]`: `i = 0` for `eps_1 = +1`, `i = 1` for `-1`; same for `j`.
    pub coeff: [[C64; 2]; 2],
}

pub fn branch_index(eps: i8) -> usize {
    if eps == 1 {
        0
    } else {
        1
    }
}

/// Assemble the general scalar product from the two-term representations.
pub fn scalar_product(
    ctx: &ModuliContext,
    co: &IntertwiningVector,
    vec: &IntertwiningVector,
) -> Result<ScalarProductComb> {
    if !matches!(co.kind, VectorKind::CoPhi | VectorKind::CoPhiBar)
        || !matches!(vec.kind, VectorKind::Phi | VectorKind::PhiBar)
    {
        return Err(Error::Domain(
            "scalar product needs a covector on the left and a vector on the right".into(),
        ));
    }
    let mut coeff = [[C64::new(0.0, 0.0); 2]; 2];
    for e1 in [1i8, -1] {
        for e2 in [1i8, -1] {
            coeff[branch_index(e1)][branch_index(e2)] =
                dot(co.term(ctx, e1)?, vec.term(ctx, e2)?);
        }
    }
    Ok(ScalarProductComb {
        z: co.upper,
        zeta: vec.upper,
        coeff,
    })
}

/// The vertex function of the transparent world.
pub fn vertex_w(ctx: &ModuliContext, z: C64, zeta: C64, lambda: C64) -> Result<C64> {
    let pref = (-2.0 * PI * I * lambda * z / ctx.eta).exp();
    let num =
        ctx.gamma(z + zeta + lambda + ctx.eta)? * ctx.gamma(z - zeta + lambda + ctx.eta)?;
    let den =
        ctx.gamma(z + zeta - lambda + ctx.eta)? * ctx.gamma(z - zeta - lambda + ctx.eta)?;
    if den.norm() < 1e-250 {
        return Err(Error::Pole {
            what: "vertex function",
            z,
        });
    }
    Ok(pref * num / den)
}

/// Shadow-world vertex comb `W^z_zeta(lambda)` for fixed upper `z`:
/// supports `zeta_k = z - lambda + 2 k eta`, coefficients the normal-ordered
/// series coefficients `w_k(z)`.
#[derive(Debug, Clone)]
pub struct CombVertexW {
    pub lambda: C64,
    pub upper: C64,
    pub truncation: usize,
    pub coeffs: Vec<C64>,
}

pub fn comb_vertex_w(ctx: &ModuliContext, lambda: C64, upper: C64, n: usize) -> Result<CombVertexW> {
    let coeffs = crate::intertwiner::w_series_coeffs(ctx, lambda, upper, n)?;
    Ok(CombVertexW {
        lambda,
        upper,
        truncation: n,
        coeffs,
    })
}

impl CombVertexW {
    pub fn support(&self, ctx: &ModuliContext, k: usize) -> C64 {
        self.upper - self.lambda + 2.0 * k as f64 * ctx.eta
    }
}

/// Max residual of the orthogonality relation with shared upper variable:
/// `<phi^z_{z'}(lambda) | phibar^z_{z''}(lambda)>` has diagonal branch
/// coefficients `theta_1(2 lambda)` and vanishing cross branches.
pub fn orth1_residual(ctx: &ModuliContext, z: C64, lambda: C64) -> Result<f64> {
    let co = IntertwiningVector::new(VectorKind::CoPhi, z, lambda);
    let vec = IntertwiningVector::new(VectorKind::PhiBar, z, lambda);
    let expect = ctx.theta1(2.0 * lambda)?;
    let mut worst = 0.0f64;
    let scale = expect.norm().max(1e-300);
    for e1 in [1i8, -1] {
        for e2 in [1i8, -1] {
            let v = dot(co.term(ctx, e1)?, vec.term(ctx, e2)?);
            let want = if e1 == e2 { expect } else { C64::new(0.0, 0.0) };
            worst = worst.max((v - want).norm() / scale);
        }
    }
    Ok(worst)
}

/// Second orthogonality: upper variables `z -+ eta`, shared lower `z`, with
/// the weight `theta_1(2z)/theta_1(2z')` on the diagonal.
pub fn orth2_residual(ctx: &ModuliContext, z: C64, lambda: C64) -> Result<f64> {
    let mut worst = 0.0f64;
    for e1 in [1i8, -1] {
        for e2 in [1i8, -1] {
            let zp = z - e1 as f64 * ctx.eta;
            let zpp = z - e2 as f64 * ctx.eta;
            let co = IntertwiningVector::new(VectorKind::CoPhi, zp, lambda + ctx.eta);
            let vec = IntertwiningVector::new(VectorKind::PhiBar, zpp, lambda - ctx.eta);
            let v = dot(co.term(ctx, e1)?, vec.term(ctx, e2)?);
            let want = if e1 == e2 {
                ctx.theta1(2.0 * lambda)? * ctx.theta1(2.0 * z)? / ctx.theta1(2.0 * zp)?
            } else {
                C64::new(0.0, 0.0)
            };
            let scale = ctx.theta1(2.0 * lambda)?.norm().max(1e-300);
            worst = worst.max((v - want).norm() / scale);
        }
    }
    Ok(worst)
}

/// Completeness: `int dzeta |phibar^z_zeta(lambda)><phi^z_zeta(lambda)|
/// = theta_1(2 lambda) Id` (the zeta-convolution ranges over both branches).
pub fn completeness_residual(ctx: &ModuliContext, z: C64, lambda: C64) -> Result<f64> {
    let vecv = IntertwiningVector::new(VectorKind::PhiBar, z, lambda);
    let cov = IntertwiningVector::new(VectorKind::CoPhi, z, lambda);
    let mut acc = [[C64::new(0.0, 0.0); 2]; 2];
    for e in [1i8, -1] {
        let v = vecv.term(ctx, e)?;
        let c = cov.term(ctx, e)?;
        for i in 0..2 {
            for j in 0..2 {
                acc[i][j] += v[i] * c[j];
            }
        }
    }
    matrix_vs_scaled_identity(ctx, acc, lambda)
}

/// The dual completeness with upper integration variable and the
/// `theta_1(2 zeta)/theta_1(2 z)` weight.
pub fn completeness_dual_residual(ctx: &ModuliContext, z: C64, lambda: C64) -> Result<f64> {
    let mut acc = [[C64::new(0.0, 0.0); 2]; 2];
    for e in [1i8, -1] {
        let zeta = z - e as f64 * ctx.eta; // zeta + e eta = z
        let weight = ctx.theta1(2.0 * zeta)? / ctx.theta1(2.0 * z)?;
        let vecv = IntertwiningVector::new(VectorKind::PhiBar, zeta, lambda - ctx.eta);
        let cov = IntertwiningVector::new(VectorKind::CoPhi, zeta, lambda + ctx.eta);
        let v = vecv.term(ctx, e)?;
        let c = cov.term(ctx, e)?;
        for i in 0..2 {
            for j in 0..2 {
                acc[i][j] += weight * v[i] * c[j];
            }
        }
    }
    matrix_vs_scaled_identity(ctx, acc, lambda)
}

fn matrix_vs_scaled_identity(
    ctx: &ModuliContext,
    acc: [[C64; 2]; 2],
    lambda: C64,
) -> Result<f64> {
    let expect = ctx.theta1(2.0 * lambda)?;
    let scale = expect.norm().max(1e-300);
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let want = if i == j { expect } else { C64::new(0.0, 0.0) };
            worst = worst.max((acc[i][j] - want).norm() / scale);
        }
    }
    Ok(worst)
}

/// `W^{z,zeta}(lambda) W^{z,zeta}(-lambda) = 1`.
pub fn ww_unit_residual(ctx: &ModuliContext, z: C64, zeta: C64, lambda: C64) -> Result<f64> {
    let v = vertex_w(ctx, z, zeta, lambda)? * vertex_w(ctx, z, zeta, -lambda)?;
    Ok((v - ONE).norm())
}

/// The vertex intertwining relation, checked on all four supports:
///
/// ```text
/// W^{z,zeta}(lam-mu) <phi^z(lam+eta/2)|phibar^zeta(mu-eta/2)>_{e1,e2}
///   = W^{z+e1 eta, zeta+e2 eta}(lam-mu) <phi^z(mu+eta/2)|phibar^zeta(lam-eta/2)>_{e1,e2}
/// ```
pub fn vertex_intertwining_residual(
    ctx: &ModuliContext,
    z: C64,
    zeta: C64,
    lambda: C64,
    mu: C64,
) -> Result<f64> {
    let sp1 = scalar_product(
        ctx,
        &IntertwiningVector::new(VectorKind::CoPhi, z, lambda + 0.5 * ctx.eta),
        &IntertwiningVector::new(VectorKind::PhiBar, zeta, mu - 0.5 * ctx.eta),
    )?;
    let sp2 = scalar_product(
        ctx,
        &IntertwiningVector::new(VectorKind::CoPhi, z, mu + 0.5 * ctx.eta),
        &IntertwiningVector::new(VectorKind::PhiBar, zeta, lambda - 0.5 * ctx.eta),
    )?;
    let w0 = vertex_w(ctx, z, zeta, lambda - mu)?;
    let mut worst = 0.0f64;
    for e1 in [1i8, -1] {
        for e2 in [1i8, -1] {
            let lhs = w0 * sp1.coeff[branch_index(e1)][branch_index(e2)];
            let rhs = vertex_w(
                ctx,
                z + e1 as f64 * ctx.eta,
                zeta + e2 as f64 * ctx.eta,
                lambda - mu,
            )? * sp2.coeff[branch_index(e1)][branch_index(e2)];
            let scale = lhs.norm().max(rhs.norm()).max(1e-300);
            worst = worst.max((lhs - rhs).norm() / scale);
        }
    }
    Ok(worst)
}

/// Difference equations of the shadow vertex in both lattice directions,
/// stated for the comb coefficients (`zeta_k = z - lambda + 2 k eta`):
///
/// ```text
/// w_k(z+eta) = [th1(2 zeta_k + 2 eta)/th1(2 zeta_k)] [th1(z+zeta_k-lam)/th1(z+zeta_k+lam+2eta)] w_k(z)
/// w_{k+1}(z-eta) = [th1(2 zeta_k + 2 eta)/th1(2 zeta_k)] [th1(zeta_k-z-lam)/th1(zeta_k-z+lam+2eta)] w_k(z)
/// ```
pub fn shadow_difference_residual(
    ctx: &ModuliContext,
    lambda: C64,
    z: C64,
    k: usize,
) -> Result<f64> {
    let zeta = z - lambda + 2.0 * k as f64 * ctx.eta;
    let base = w_coeff(ctx, lambda, k, z)?;
    let ratio_common = ctx.theta1(2.0 * zeta + 2.0 * ctx.eta)? / ctx.theta1(2.0 * zeta)?;

    let lhs1 = w_coeff(ctx, lambda, k, z + ctx.eta)?;
    let rhs1 = ratio_common * ctx.theta1(z + zeta - lambda)?
        / ctx.theta1(z + zeta + lambda + 2.0 * ctx.eta)?
        * base;
    let r1 = (lhs1 - rhs1).norm() / lhs1.norm().max(rhs1.norm()).max(1e-300);

    let lhs2 = w_coeff(ctx, lambda, k + 1, z - ctx.eta)?;
    let rhs2 = ratio_common * ctx.theta1(zeta - z - lambda)?
        / ctx.theta1(zeta - z + lambda + 2.0 * ctx.eta)?
        * base;
    let r2 = (lhs2 - rhs2).norm() / lhs2.norm().max(rhs2.norm()).max(1e-300);

    Ok(r1.max(r2))
}

/// On every support, `W^z_zeta(lambda) W^{zeta,z}(lambda+eta) = c(lambda) theta_1(2 zeta)`.
pub fn shadow_transparent_relation_residual(
    ctx: &ModuliContext,
    lambda: C64,
    z: C64,
    k: usize,
) -> Result<f64> {
    let zeta = z - lambda + 2.0 * k as f64 * ctx.eta;
    let lhs = w_coeff(ctx, lambda, k, z)? * vertex_w(ctx, zeta, z, lambda + ctx.eta)?;
    let rhs = c_norm(ctx, lambda)? * ctx.theta1(2.0 * zeta)?;
    Ok((lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1e-300))
}

/// Dual contraction of the intertwining relation, checked on interior
/// supports. For branch pair `(e1, e2)` and left comb index `k`, the right
/// comb index is `k + (e1 - e2)/2`; the identity holds wherever both
/// indices lie inside the half-infinite comb, and the boundary branch that
/// would need index `-1` is excluded as truncation-inexact.
pub fn dual_contraction_residual(
    ctx: &ModuliContext,
    lambda: C64,
    mu: C64,
    z: C64,
    k_max: usize,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for k in 0..=k_max {
        let zpp = z - (lambda - mu) + 2.0 * k as f64 * ctx.eta;
        let wk = w_coeff(ctx, lambda - mu, k, z)?;
        for e1 in [1i8, -1] {
            for e2 in [1i8, -1] {
                let kp = k as i64 + (e1 as i64 - e2 as i64) / 2;
                if kp < 0 {
                    continue;
                }
                let zp = zpp + e1 as f64 * ctx.eta;
                let zetp = z + e2 as f64 * ctx.eta;
                let sp1 = dot(
                    IntertwiningVector::new(VectorKind::CoPhi, zpp, mu + 0.5 * ctx.eta)
                        .term(ctx, e1)?,
                    IntertwiningVector::new(VectorKind::PhiBar, z, lambda + 0.5 * ctx.eta)
                        .term(ctx, e2)?,
                );
                let sp2 = dot(
                    IntertwiningVector::new(VectorKind::CoPhi, zpp, lambda + 1.5 * ctx.eta)
                        .term(ctx, e1)?,
                    IntertwiningVector::new(VectorKind::PhiBar, z, mu - 0.5 * ctx.eta)
                        .term(ctx, e2)?,
                );
                let lhs = wk / ctx.theta1(2.0 * zpp)? * sp1;
                let wkp = w_coeff(ctx, lambda - mu, kp as usize, zetp)?;
                let rhs = wkp / ctx.theta1(2.0 * zp)? * sp2;
                let scale = lhs.norm().max(rhs.norm()).max(1e-300);
                worst = worst.max((lhs - rhs).norm() / scale);
            }
        }
    }
    Ok(worst)
}
