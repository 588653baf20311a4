//! Star-triangle relations for the two vertex types.
//!
//! Both relations equate a product of two transparent vertices and one
//! shadow comb against a shadow-world convolution of two combs around one
//! transparent vertex. Coefficient-wise, at support index `n`
//! (`z'' = z - (lambda - nu) + 2 n eta`):
//!
//! variant (a):
//! ```text
//! W^{z',z}(mu-nu) W^{z',z''}(lam-mu) w_n(z; lam-nu)
//!   = sum_{k=0}^n w_k(z; lam-mu) W^{z', zeta_k}(lam-nu) w_{n-k}(zeta_k; mu-nu)
//! ```
//! with `zeta_k = z - (lam - mu) + 2 k eta`; variant (b) mirrors it with the
//! other vertex arrangement. Both sides are also the kernels of
//! very-well-poised 6-term series operators, checked against the explicit
//! prefactor forms.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::Result;
use crate::hyper::omega_terms;
use crate::intertwiner::{c_norm, w_coeff};
use crate::moduli::{ModuliContext, I, ONE};
use crate::vertex::vertex_w;

/// Left side coefficient of variant (a) at support index `n`.
pub fn st_a_lhs(
    ctx: &ModuliContext,
    z: C64,
    zp: C64,
    lambda: C64,
    mu: C64,
    nu: C64,
    n: usize,
) -> Result<C64> {
    let zpp = z - (lambda - nu) + 2.0 * n as f64 * ctx.eta;
    Ok(vertex_w(ctx, zp, z, mu - nu)?
        * vertex_w(ctx, zp, zpp, lambda - mu)?
        * w_coeff(ctx, lambda - nu, n, z)?)
}

/// Right side of variant (a): the shadow convolution.
pub fn st_a_rhs(
    ctx: &ModuliContext,
    z: C64,
    zp: C64,
    lambda: C64,
    mu: C64,
    nu: C64,
    n: usize,
) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..=n {
        let zeta = z - (lambda - mu) + 2.0 * k as f64 * ctx.eta;
        acc += w_coeff(ctx, lambda - mu, k, z)?
            * vertex_w(ctx, zp, zeta, lambda - nu)?
            * w_coeff(ctx, mu - nu, n - k, zeta)?;
    }
    Ok(acc)
}

pub fn st_b_lhs(
    ctx: &ModuliContext,
    z: C64,
    zp: C64,
    lambda: C64,
    mu: C64,
    nu: C64,
    n: usize,
) -> Result<C64> {
    let zpp = z - (lambda - nu) + 2.0 * n as f64 * ctx.eta;
    Ok(vertex_w(ctx, z, zp, lambda - mu)?
        * vertex_w(ctx, zpp, zp, mu - nu)?
        * w_coeff(ctx, lambda - nu, n, z)?)
}

pub fn st_b_rhs(
    ctx: &ModuliContext,
    z: C64,
    zp: C64,
    lambda: C64,
    mu: C64,
    nu: C64,
    n: usize,
) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..=n {
        let zeta = z - (mu - nu) + 2.0 * k as f64 * ctx.eta;
        acc += w_coeff(ctx, mu - nu, k, z)?
            * vertex_w(ctx, zeta, zp, lambda - nu)?
            * w_coeff(ctx, lambda - mu, n - k, zeta)?;
    }
    Ok(acc)
}

/// Normalization collapse at `n = 0`: the ratio of the bare convolution
/// coefficients equals `c(lam-mu) c(mu-nu) / c(lam-nu)` after the
/// normalizations are stripped, equivalently the two `n = 0` sides agree
/// outright. Returns `(lhs/rhs, c-ratio)` for the bare check.
pub fn st_a_n0_normalization(
    ctx: &ModuliContext,
    z: C64,
    zp: C64,
    lambda: C64,
    mu: C64,
    nu: C64,
) -> Result<(C64, C64)> {
    // strip the c factors: w = c(lam) * bare
    let lhs = st_a_lhs(ctx, z, zp, lambda, mu, nu, 0)? / c_norm(ctx, lambda - nu)?;
    let rhs = st_a_rhs(ctx, z, zp, lambda, mu, nu, 0)?
        / (c_norm(ctx, lambda - mu)? * c_norm(ctx, mu - nu)?);
    let c_ratio = c_norm(ctx, lambda - mu)? * c_norm(ctx, mu - nu)? / c_norm(ctx, lambda - nu)?;
    Ok((lhs / rhs, c_ratio))
}

/// Coefficient `n` of the 6-term series operator form of variant (a):
///
/// ```text
/// e^{(2 pi i/eta)(lam-nu)(z-z') - (pi i/eta)(lam-nu)^2}
///   Gamma(2z-2lam+2nu+2eta) Gamma(z+z'+mu-nu+eta) Gamma(z'-z+2lam-mu-nu+eta)
///   ------------------------------------------------------------------------
///   Gamma(2z+2eta) Gamma(z+z'-2lam+mu+nu+eta) Gamma(z'-z-mu+nu+eta)
///   t_n( (z-lam+nu)/eta; (nu-lam)/eta, (z+z'+nu-mu+eta)/2eta, (z-z'+nu-mu+eta)/2eta )
/// ```
pub fn st2_a_coeff(
    ctx: &ModuliContext,
    z: C64,
    zp: C64,
    lambda: C64,
    mu: C64,
    nu: C64,
    n: usize,
) -> Result<C64> {
    let ln = lambda - nu;
    let e = ctx.eta;
    let pref = (I * PI / e * (2.0 * ln * (z - zp) - ln * ln)).exp()
        * ctx.gamma(2.0 * z - 2.0 * lambda + 2.0 * nu + 2.0 * e)?
        * ctx.gamma(z + zp + mu - nu + e)?
        * ctx.gamma(zp - z + 2.0 * lambda - mu - nu + e)?
        / (ctx.gamma(2.0 * z + 2.0 * e)?
            * ctx.gamma(z + zp - 2.0 * lambda + mu + nu + e)?
            * ctx.gamma(zp - z - mu + nu + e)?);
    let terms = omega_terms(
        ctx,
        (z - lambda + nu) / e,
        &[
            (nu - lambda) / e,
            (z + zp + nu - mu + e) / (2.0 * e),
            (z - zp + nu - mu + e) / (2.0 * e),
        ],
        ONE,
        n,
    )?;
    Ok(pref * terms[n])
}

/// Coefficient `n` of the 6-term series operator form of variant (b).
pub fn st2_b_coeff(
    ctx: &ModuliContext,
    z: C64,
    zp: C64,
    lambda: C64,
    mu: C64,
    nu: C64,
    n: usize,
) -> Result<C64> {
    let ln = lambda - nu;
    let e = ctx.eta;
    let pref = (I * PI / e * ln * (2.0 * mu - lambda - nu)).exp()
        * ctx.gamma(2.0 * z - 2.0 * lambda + 2.0 * nu + 2.0 * e)?
        * ctx.gamma(z + zp + lambda - mu + e)?
        * ctx.gamma(z - zp + lambda - mu + e)?
        / (ctx.gamma(2.0 * z + 2.0 * e)?
            * ctx.gamma(z + zp + 2.0 * nu - lambda - mu + e)?
            * ctx.gamma(z - zp + 2.0 * nu - lambda - mu + e)?);
    let terms = omega_terms(
        ctx,
        (z - lambda + nu) / e,
        &[
            (nu - lambda) / e,
            (z + zp - lambda + mu + e) / (2.0 * e),
            (z - zp - lambda + mu + e) / (2.0 * e),
        ],
        ONE,
        n,
    )?;
    Ok(pref * terms[n])
}

/// `4w3`-to-`6w5` commutation identity: pushing the series operator through
/// the multiplication by a transparent vertex. Coefficient at index `k`:
///
/// LHS `t4_k(z) W^{zeta, z - lam + 2 k eta}(mu)`, RHS
/// `W^{zeta, z - lam}(mu) t6_k(z)` with the two extra half-lattice
/// parameters on the 6-term side.
pub fn r4_rewrite_residual(
    ctx: &ModuliContext,
    z: C64,
    zeta: C64,
    lambda: C64,
    mu: C64,
    k_max: usize,
) -> Result<f64> {
    let e = ctx.eta;
    let a1 = (z - lambda) / e;
    let t4 = omega_terms(ctx, a1, &[-lambda / e], ONE, k_max)?;
    let t6 = omega_terms(
        ctx,
        a1,
        &[
            -lambda / e,
            (z + zeta + mu - lambda + e) / (2.0 * e),
            (z - zeta + mu - lambda + e) / (2.0 * e),
        ],
        ONE,
        k_max,
    )?;
    let w_base = vertex_w(ctx, zeta, z - lambda, mu)?;
    let mut worst = 0.0f64;
    for k in 0..=k_max {
        let lhs = t4[k] * vertex_w(ctx, zeta, z - lambda + 2.0 * k as f64 * ctx.eta, mu)?;
        let rhs = w_base * t6[k];
        worst = worst.max((lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1e-300));
    }
    Ok(worst)
}
