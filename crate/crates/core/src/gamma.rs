//! Elliptic gamma-function.
//!
//! `Gamma(z|tau, tau')` is the double-infinite product
//!
//! ```text
//! Gamma(z|tau, tau') = prod_{k,k'>=0} (1 - p^{k+1} q^{k'+1}/u) / (1 - p^k q^{k'} u)
//! ```
//!
//! with `p = e^{2 pi i tau}`, `q = e^{2 pi i tau'}`, `u = e^{2 pi i z}`.
//! Convergence needs `Im tau > 0`, `Im tau' > 0`. The function has simple
//! poles at `z = -2k eta - m tau + n` and zeros at `z = 2(k+1) eta +
//! (m+1) tau + n` when `tau' = 2 eta`.
//!
//! Quasi-periodicity factors, the modular transformation, the reflection
//! formula and pole residues all live here; each doubles as a cross-check
//! path for the direct product.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::moduli::{GammaConstants, ModuliContext, I, ONE};
use crate::theta;

/// Direct double-product evaluation, adaptive in both axes.
pub fn elliptic_gamma(z: C64, tau: C64, tau_p: C64, eps_term: f64, k_max: usize) -> Result<C64> {
    if tau.im <= 0.0 || tau_p.im <= 0.0 {
        return Err(Error::Domain(format!(
            "elliptic gamma moduli need positive imaginary parts, got ({tau}, {tau_p})"
        )));
    }
    let p = (2.0 * PI * I * tau).exp();
    let q = (2.0 * PI * I * tau_p).exp();
    let u = (2.0 * PI * I * z).exp();
    let mut result = ONE;
    let mut p_k = ONE; // p^k
    for _k in 0..k_max {
        let mut q_kp = ONE; // q^{k'}
        let mut inner_done_at_zero = false;
        let mut converged = false;
        for kp in 0..k_max {
            let num_dev = p_k * p * q_kp * q / u;
            let den_dev = p_k * q_kp * u;
            let den = ONE - den_dev;
            if den.norm() < 1e-12 {
                return Err(Error::Pole {
                    what: "elliptic gamma",
                    z,
                });
            }
            result *= (ONE - num_dev) / den;
            if num_dev.norm() < eps_term && den_dev.norm() < eps_term {
                inner_done_at_zero = kp == 0;
                converged = true;
                break;
            }
            q_kp *= q;
        }
        if !converged {
            return Err(Error::NonConvergence {
                what: "elliptic gamma product",
                terms: k_max,
                tail: (p_k * u).norm(),
            });
        }
        if inner_done_at_zero {
            return Ok(result);
        }
        p_k *= p;
    }
    Err(Error::NonConvergence {
        what: "elliptic gamma product",
        terms: k_max,
        tail: p_k.norm(),
    })
}

/// Dedekind eta: `e^{i pi tau/12} prod_{k>=1} (1 - e^{2 pi i k tau})`.
pub fn dedekind_eta(tau: C64, eps_term: f64, k_max: usize) -> Result<C64> {
    if tau.im <= 0.0 {
        return Err(Error::Domain("Dedekind eta needs Im tau > 0".into()));
    }
    let q = (2.0 * PI * I * tau).exp();
    let mut result = (I * PI * tau / 12.0).exp();
    let mut q_k = q;
    for _ in 0..k_max {
        result *= ONE - q_k;
        if q_k.norm() < eps_term {
            return Ok(result);
        }
        q_k *= q;
    }
    Err(Error::NonConvergence {
        what: "Dedekind eta product",
        terms: k_max,
        tail: q_k.norm(),
    })
}

pub(crate) fn compute_constants(ctx: &ModuliContext) -> Result<GammaConstants> {
    ctx.require_gamma_moduli()?;
    let ded_tau = dedekind_eta(ctx.tau, ctx.eps_term, ctx.k_max)?;
    let ded_2eta = dedekind_eta(ctx.two_eta(), ctx.eps_term, ctx.k_max)?;
    let r_const = I * (I * PI * (ctx.eta + ctx.tau / 6.0)).exp() * ded_tau;
    let rho0 = ctx.gamma(ctx.two_eta())? / (I * (I * PI * ctx.tau / 6.0).exp() * ded_tau);
    let rho0_alt = (I * PI * (2.0 * ctx.eta - 3.0 * ctx.tau) / 12.0).exp() / (I * ded_2eta);
    let r0 = -(I * PI * (ctx.tau + ctx.two_eta()) / 12.0).exp()
        / (2.0 * PI * I * ded_tau * ded_2eta);
    Ok(GammaConstants {
        r_const,
        rho0,
        rho0_alt,
        r0,
        dedekind_tau: ded_tau,
        dedekind_2eta: ded_2eta,
    })
}

/// Shift direction for the quasi-periodicity cross-check path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftDirection {
    /// `z -> z + 1`: factor 1.
    One,
    /// `z -> z + tau`: factor `-i e^{-i pi tau'/6} eta_D(tau')^{-1} e^{i pi z} theta_1(z|tau')`.
    Tau,
    /// `z -> z + 2 eta`: same with `tau` and `tau'` exchanged.
    TwoEta,
}

/// `Gamma(z + shift | tau, 2 eta)` computed from `Gamma(z)` via the
/// quasi-periodicity factor rather than the direct product.
pub fn gamma_shift(z: C64, direction: ShiftDirection, ctx: &ModuliContext) -> Result<C64> {
    let g = ctx.gamma(z)?;
    let factor = match direction {
        ShiftDirection::One => ONE,
        ShiftDirection::Tau => {
            let ded = ctx.gamma_constants()?.dedekind_2eta;
            let th = theta::theta_series(1, z, ctx.two_eta(), ctx.eps_term, ctx.k_max)?;
            -I * (-I * PI * ctx.two_eta() / 6.0).exp() / ded * (I * PI * z).exp() * th
        }
        ShiftDirection::TwoEta => {
            let ded = ctx.gamma_constants()?.dedekind_tau;
            let th = ctx.theta1(z)?;
            -I * (-I * PI * ctx.tau / 6.0).exp() / ded * (I * PI * z).exp() * th
        }
    };
    Ok(factor * g)
}

/// Reflection product `Gamma(z) Gamma(2 eta - z)` in closed form:
/// `i e^{i pi 2 eta/6} eta_D(2 eta) / (e^{i pi z} theta_1(z|2 eta))`.
pub fn gamma_reflection_closed(z: C64, ctx: &ModuliContext) -> Result<C64> {
    let ded = ctx.gamma_constants()?.dedekind_2eta;
    let th = theta::theta_series(1, z, ctx.two_eta(), ctx.eps_term, ctx.k_max)?;
    if th.norm() == 0.0 {
        return Err(Error::Pole {
            what: "gamma reflection",
            z,
        });
    }
    Ok(I * (I * PI * ctx.two_eta() / 6.0).exp() * ded / ((I * PI * z).exp() * th))
}

/// The cubic polynomial entering the modular transformation law.
pub fn modular_cubic(z: C64, tau: C64, tau_p: C64) -> C64 {
    let tt = tau * tau_p;
    -z * z * z / (3.0 * tt) + (tau + tau_p - 1.0) / (2.0 * tt) * z * z
        - (tau * tau + tau_p * tau_p + 3.0 * tt - 3.0 * tau - 3.0 * tau_p + 1.0) / (6.0 * tt) * z
        - (tau + tau_p - 1.0) * (tau + tau_p - tt) / (12.0 * tt)
}

/// `Gamma(z|tau, tau')` via the modular transformation; oracle path only.
/// All transformed moduli (`-1/tau`, `tau'/tau`, `-tau/tau'`, `-1/tau'`)
/// must themselves have positive imaginary parts.
pub fn gamma_modular(z: C64, tau: C64, tau_p: C64, eps_term: f64, k_max: usize) -> Result<C64> {
    let pref = (I * PI * modular_cubic(z, tau, tau_p)).exp();
    let num = elliptic_gamma(z / tau, -ONE / tau, tau_p / tau, eps_term, k_max)?;
    let den = elliptic_gamma((z - tau) / tau_p, -tau / tau_p, -ONE / tau_p, eps_term, k_max)?;
    Ok(pref * num / den)
}

/// Residue of `Gamma(z|tau, 2 eta)` at the pole `z = -2k eta`:
/// `(-1)^k e^{i pi eta k^2} R^k r_0 / prod_{j=1..k} theta_1(2 j eta)`.
pub fn gamma_residue(k: usize, ctx: &ModuliContext) -> Result<C64> {
    let consts = ctx.gamma_constants()?;
    let kf = k as f64;
    let mut r = (I * PI * ctx.eta * kf * kf).exp() * consts.r_const.powi(k as i32) * consts.r0;
    if k % 2 == 1 {
        r = -r;
    }
    for j in 1..=k {
        r /= ctx.theta1(2.0 * j as f64 * ctx.eta)?;
    }
    Ok(r)
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
    fn frozen_value_against_fixed_truncation_oracle() {
        // Gamma(0.4 | 2i, 0.5i) against an independent 200x200 product
        let tau = C64::new(0.0, 2.0);
        let tau_p = C64::new(0.0, 0.5);
        let z = C64::new(0.4, 0.0);
        let p = (2.0 * PI * I * tau).exp();
        let q = (2.0 * PI * I * tau_p).exp();
        let u = (2.0 * PI * I * z).exp();
        let mut oracle = ONE;
        for k in 0..200 {
            for kp in 0..200 {
                let num = ONE - p.powi(k + 1) * q.powi(kp + 1) / u;
                let den = ONE - p.powi(k) * q.powi(kp) * u;
                oracle *= num / den;
            }
        }
        let frozen = C64::new(0.47801863181576783, 0.16900925785058055);
        assert!(rel(oracle, frozen) < 1e-14);
        let v = elliptic_gamma(z, tau, tau_p, 1e-16, 256).unwrap();
        assert!(rel(v, frozen) < 1e-13, "rel {}", rel(v, frozen));
    }

    #[test]
    fn shift_by_one_is_identity() {
        let c = ctx();
        let z = C64::new(0.3, 0.2);
        assert!(rel(c.gamma(z + 1.0).unwrap(), c.gamma(z).unwrap()) < 1e-13);
    }

    #[test]
    fn unit_product() {
        // Gamma(z) Gamma(tau + 2eta - z) = 1
        let c = ctx();
        let z = C64::new(0.3, 0.2);
        let v = c.gamma(z).unwrap() * c.gamma(c.tau + c.two_eta() - z).unwrap();
        assert!(rel(v, ONE) < 1e-12);
    }

    #[test]
    fn shift_factors_match_direct_product() {
        let c = ctx();
        let z = C64::new(0.3, 0.0);
        for dir in [ShiftDirection::One, ShiftDirection::Tau, ShiftDirection::TwoEta] {
            let shift = match dir {
                ShiftDirection::One => C64::new(1.0, 0.0),
                ShiftDirection::Tau => c.tau,
                ShiftDirection::TwoEta => c.two_eta(),
            };
            let via_factor = gamma_shift(z, dir, &c).unwrap();
            let direct = c.gamma(z + shift).unwrap();
            assert!(rel(via_factor, direct) < 1e-10, "{dir:?}: {}", rel(via_factor, direct));
        }
    }

    #[test]
    fn reflection_formula() {
        let c = ctx();
        let z = C64::new(0.23, 0.07);
        let lhs = c.gamma(z).unwrap() * c.gamma(c.two_eta() - z).unwrap();
        let rhs = gamma_reflection_closed(z, &c).unwrap();
        assert!(rel(lhs, rhs) < 1e-12);
    }

    #[test]
    fn modular_route_agrees() {
        // moduli chosen so all four transformed moduli converge
        let tau = C64::new(0.0, 2.0);
        let tau_p = C64::new(-0.1, 0.5);
        let z = C64::new(0.3, 0.1);
        let direct = elliptic_gamma(z, tau, tau_p, 1e-16, 400).unwrap();
        let modular = gamma_modular(z, tau, tau_p, 1e-16, 400).unwrap();
        assert!(rel(direct, modular) < 1e-8, "rel {}", rel(direct, modular));
    }

    #[test]
    fn modular_cubic_properties() {
        let tau = C64::new(0.0, 2.0);
        let tau_p = C64::new(-0.1, 0.5);
        // constant term
        let p0 = modular_cubic(C64::new(0.0, 0.0), tau, tau_p);
        let expect = -(tau + tau_p - 1.0) * (tau + tau_p - tau * tau_p) / (12.0 * tau * tau_p);
        assert!(rel(p0, expect) < 1e-14);
        // degree 3: the fourth forward difference vanishes
        let h = C64::new(0.37, 0.11);
        let p = |k: f64| modular_cubic(k * h, tau, tau_p);
        let d4 = p(4.0) - 4.0 * p(3.0) + 6.0 * p(2.0) - 4.0 * p(1.0) + p(0.0);
        assert!(d4.norm() < 1e-12);
    }

    #[test]
    fn residues_match_circle_oracle() {
        let c = ctx();
        // k = 0: average of Gamma(w) w over a small circle around 0
        for k in [0usize, 2] {
            let pole = -2.0 * k as f64 * c.eta;
            let eps = 1e-4;
            let n = 24;
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..n {
                let ang = 2.0 * PI * j as f64 / n as f64;
                let w = pole + eps * C64::new(ang.cos(), ang.sin());
                acc += c.gamma(w).unwrap() * (w - pole);
            }
            acc /= n as f64;
            let closed = gamma_residue(k, &c).unwrap();
            assert!(rel(acc, closed) < 1e-6, "k={k}: rel {}", rel(acc, closed));
        }
    }

    #[test]
    fn rho0_dual_expressions_agree() {
        let consts = ctx().gamma_constants().unwrap().clone();
        assert!(rel(consts.rho0, consts.rho0_alt) < 1e-12);
    }

    #[test]
    fn pole_detection() {
        let c = ctx();
        match c.gamma(C64::new(0.0, 0.0)) {
            Err(Error::Pole { .. }) => {}
            other => panic!("expected pole error at z=0, got {other:?}"),
        }
    }
}
