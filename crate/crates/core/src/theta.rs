//! Jacobi theta functions.
//!
//! The four functions are summed in the exponential form
//!
//! ```text
//! theta_1(z|tau) = - sum_k exp(i pi tau (k+1/2)^2 + 2 pi i (z+1/2)(k+1/2))
//! theta_2(z|tau) =   sum_k exp(i pi tau (k+1/2)^2 + 2 pi i  z     (k+1/2))
//! theta_3(z|tau) =   sum_k exp(i pi tau  k^2      + 2 pi i  z      k     )
//! theta_4(z|tau) =   sum_k exp(i pi tau  k^2      + 2 pi i (z+1/2)  k    )
//! ```
//!
//! summed symmetrically in `k` with an adaptive stop: the sum terminates
//! once three consecutive shell terms fall below `eps_term` times the
//! running maximum, so an accidental zero term cannot end the sum early.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::moduli::{ModuliContext, I};

/// Which theta function, and whether the half-period modulus `tau/2` is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThetaIndex {
    pub a: u8,
    pub half_tau: bool,
}

impl ThetaIndex {
    pub fn new(a: u8) -> Result<Self> {
        if !(1..=4).contains(&a) {
            return Err(Error::Domain(format!("theta index must be 1..=4, got {a}")));
        }
        Ok(ThetaIndex { a, half_tau: false })
    }

    pub fn bar(a: u8) -> Result<Self> {
        Ok(ThetaIndex {
            half_tau: true,
            ..Self::new(a)?
        })
    }
}

/// `theta_a(z|tau)` resolved against a context (`half_tau` picks `tau/2`).
pub fn theta(idx: ThetaIndex, z: C64, ctx: &ModuliContext) -> Result<C64> {
    let modulus = if idx.half_tau { 0.5 * ctx.tau } else { ctx.tau };
    theta_series(idx.a, z, modulus, ctx.eps_term, ctx.k_max)
}

fn term(a: u8, z: C64, modulus: C64, nu: f64) -> C64 {
    let x = z + if a == 1 || a == 4 {
        C64::new(0.5, 0.0)
    } else {
        C64::new(0.0, 0.0)
    };
    (I * PI * (modulus * nu * nu + 2.0 * x * nu)).exp()
}

/// Raw symmetric-sum evaluation of `theta_a(z|modulus)`.
pub fn theta_series(a: u8, z: C64, modulus: C64, eps_term: f64, k_max: usize) -> Result<C64> {
    if !(1..=4).contains(&a) {
        return Err(Error::Domain(format!("theta index must be 1..=4, got {a}")));
    }
    if modulus.im <= 0.0 {
        return Err(Error::Domain(format!(
            "theta modulus needs positive imaginary part, got {modulus}"
        )));
    }
    let half = a == 1 || a == 2;
    let mut sum = C64::new(0.0, 0.0);
    let mut running_max = 0.0f64;
    let mut quiet = 0usize;
    for n in 0..k_max {
        let shell = if half {
            let nu = n as f64 + 0.5;
            term(a, z, modulus, nu) + term(a, z, modulus, -nu)
        } else if n == 0 {
            term(a, z, modulus, 0.0)
        } else {
            term(a, z, modulus, n as f64) + term(a, z, modulus, -(n as f64))
        };
        sum += shell;
        let mag = shell.norm();
        running_max = running_max.max(mag);
        if mag < eps_term * running_max.max(1e-300) {
            quiet += 1;
            if quiet >= 3 {
                return Ok(if a == 1 { -sum } else { sum });
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence {
        what: "theta series",
        terms: k_max,
        tail: running_max,
    })
}

/// Term-wise derivative of the theta series in `z`.
pub fn theta_deriv(a: u8, z: C64, modulus: C64, eps_term: f64, k_max: usize) -> Result<C64> {
    if !(1..=4).contains(&a) {
        return Err(Error::Domain(format!("theta index must be 1..=4, got {a}")));
    }
    let half = a == 1 || a == 2;
    let mut sum = C64::new(0.0, 0.0);
    let mut running_max = 0.0f64;
    let mut quiet = 0usize;
    let d = |nu: f64| 2.0 * PI * I * nu * term(a, z, modulus, nu);
    for n in 0..k_max {
        let shell = if half {
            let nu = n as f64 + 0.5;
            d(nu) + d(-nu)
        } else if n == 0 {
            C64::new(0.0, 0.0)
        } else {
            d(n as f64) + d(-(n as f64))
        };
        sum += shell;
        let mag = shell.norm();
        running_max = running_max.max(mag);
        if n > 0 && mag < eps_term * running_max.max(1e-300) {
            quiet += 1;
            if quiet >= 3 {
                return Ok(if a == 1 { -sum } else { sum });
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence {
        what: "theta derivative series",
        terms: k_max,
        tail: running_max,
    })
}

/// `theta_a(z|tau)` computed through the modular transformation
/// `tau -> -1/tau`; a cross-check path for the direct series.
///
/// The index pairing is 1<->1, 2<->4, 3<->3, 4<->2 and the prefactor is
/// `sqrt(i/tau) e^{-i pi z^2/tau}` with an extra `i` for `theta_1`.
pub fn theta_modular(idx: ThetaIndex, z: C64, ctx: &ModuliContext) -> Result<C64> {
    let modulus = if idx.half_tau { 0.5 * ctx.tau } else { ctx.tau };
    let partner = match idx.a {
        1 => 1,
        2 => 4,
        3 => 3,
        4 => 2,
        a => return Err(Error::Domain(format!("theta index must be 1..=4, got {a}"))),
    };
    let mut pref = (I / modulus).sqrt() * (-I * PI * z * z / modulus).exp();
    if idx.a == 1 {
        pref *= I;
    }
    let inner = theta_series(partner, z / modulus, -1.0 / modulus, ctx.eps_term, ctx.k_max)?;
    Ok(pref * inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::ModuliContext;

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
    fn theta1_is_odd_and_vanishes_at_zero() {
        // theta_1(0|i) = 0
        let ctx = ModuliContext::new(C64::new(0.0, 1.0), C64::new(0.0, 0.2)).unwrap();
        let v = ctx.theta1(C64::new(0.0, 0.0)).unwrap();
        assert!(v.norm() < 1e-14, "theta1(0) = {v}");
        let z = C64::new(0.31, 0.11);
        assert!(rel(ctx.theta1(-z).unwrap(), -ctx.theta1(z).unwrap()) < 1e-14);
    }

    #[test]
    fn period_shift_by_one() {
        // theta_1(z+1) = -theta_1(z) at z = 0.3+0.1i, tau = i
        let ctx = ModuliContext::new(C64::new(0.0, 1.0), C64::new(0.0, 0.2)).unwrap();
        let z = C64::new(0.3, 0.1);
        let lhs = ctx.theta1(z + 1.0).unwrap();
        let rhs = -ctx.theta1(z).unwrap();
        assert!(rel(lhs, rhs) < 1e-13);
    }

    #[test]
    fn modular_transform_matches_direct_series() {
        // theta_1(z|tau) vs i sqrt(i/tau) e^{-i pi z^2/tau} theta_1(z/tau|-1/tau)
        let ctx = ModuliContext::new(C64::new(0.0, 2.0), C64::new(0.0, 0.2)).unwrap();
        let z = C64::new(0.2, 0.0);
        let idx = ThetaIndex::new(1).unwrap();
        let direct = theta(idx, z, &ctx).unwrap();
        let via_mod = theta_modular(idx, z, &ctx).unwrap();
        assert!(rel(direct, via_mod) < 1e-10, "rel {}", rel(direct, via_mod));
        // z = 0: both sides vanish
        let z0 = C64::new(0.0, 0.0);
        assert!(theta(idx, z0, &ctx).unwrap().norm() < 1e-14);
        assert!(theta_modular(idx, z0, &ctx).unwrap().norm() < 1e-14);
        // index pairing 2 <-> 4 at a generic point
        let idx2 = ThetaIndex::new(2).unwrap();
        let z2 = C64::new(0.17, 0.04);
        assert!(rel(theta(idx2, z2, &ctx).unwrap(), theta_modular(idx2, z2, &ctx).unwrap()) < 1e-11);
    }

    #[test]
    fn frozen_value_theta3() {
        // brute-force oracle with k in [-50, 50] freezes theta_3(0|i)
        let tau = C64::new(0.0, 1.0);
        let mut oracle = C64::new(0.0, 0.0);
        for k in -50i64..=50 {
            let nu = k as f64;
            oracle += (I * PI * (tau * nu * nu)).exp();
        }
        let frozen = C64::new(1.0864348112133080, 0.0);
        assert!(rel(oracle, frozen) < 1e-15);
        let v = theta_series(3, C64::new(0.0, 0.0), tau, 1e-16, 256).unwrap();
        assert!(rel(v, frozen) < 1e-15);
    }

    #[test]
    fn frozen_value_theta1_generic_point() {
        let v = ctx().theta1(C64::new(0.3, 0.1)).unwrap();
        let frozen = C64::new(0.35309103927234641, 0.07804394780079451);
        assert!(rel(v, frozen) < 1e-14);
    }

    #[test]
    fn deriv_matches_finite_difference() {
        let c = ctx();
        let z = C64::new(0.21, 0.05);
        let h = 1e-6;
        let fd = (c.theta1(z + h).unwrap() - c.theta1(z - h).unwrap()) / (2.0 * h);
        let an = theta_deriv(1, z, c.tau, c.eps_term, c.k_max).unwrap();
        assert!(rel(fd, an) < 1e-9);
    }

    #[test]
    fn bad_modulus_is_rejected() {
        assert!(theta_series(3, C64::new(0.1, 0.0), C64::new(0.5, 0.0), 1e-16, 256).is_err());
        assert!(theta_series(5, C64::new(0.1, 0.0), C64::new(0.0, 1.0), 1e-16, 256).is_err());
    }
}
