//! Global moduli context.
//!
//! Every evaluation in this crate is relative to one pair of moduli
//! `(tau, eta)` with `Im tau > 0`, together with a fixed truncation policy
//! `(eps_term, k_max)` and an RNG seed. Results are reproducible from the
//! context alone.

use num_complex::Complex64 as C64;
use once_cell::sync::OnceCell;

use crate::error::{Error, Result};
use crate::gamma;
use crate::theta;

/// Tolerance, in lattice coordinates, for deciding that a point sits on a
/// period lattice (pole/zero hits, terminating parameters, delta matching).
pub const EPS_LATTICE: f64 = 1e-9;

pub const I: C64 = C64::new(0.0, 1.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const ZERO: C64 = C64::new(0.0, 0.0);

pub fn cis(x: C64) -> C64 {
    // e^{i pi x}
    (I * std::f64::consts::PI * x).exp()
}

/// Constants attached to the elliptic gamma-function of a context.
#[derive(Debug, Clone)]
pub struct GammaConstants {
    /// `R = i e^{i pi (eta + tau/6)} eta_D(tau)`, the shift constant in the
    /// gamma/theta ratio formulas.
    pub r_const: C64,
    /// `rho_0` computed through `Gamma(2 eta)` and the Dedekind eta of `tau`.
    pub rho0: C64,
    /// `rho_0` computed through the Dedekind eta of `2 eta` alone.
    pub rho0_alt: C64,
    /// Residue of `Gamma(z|tau, 2 eta)` at `z = 0`.
    pub r0: C64,
    pub dedekind_tau: C64,
    pub dedekind_2eta: C64,
}

/// Moduli pair plus truncation policy. Immutable after construction.
#[derive(Debug, Clone)]
pub struct ModuliContext {
    pub tau: C64,
    pub eta: C64,
    pub eps_term: f64,
    pub k_max: usize,
    pub seed: u64,
    consts: OnceCell<GammaConstants>,
}

impl ModuliContext {
    /// Default truncation policy: tail threshold and hard term cap.
    pub const DEFAULT_EPS_TERM: f64 = 1e-16;
    pub const DEFAULT_K_MAX: usize = 256;

    pub fn new(tau: C64, eta: C64) -> Result<Self> {
        Self::with_policy(tau, eta, Self::DEFAULT_EPS_TERM, Self::DEFAULT_K_MAX, 0)
    }

    pub fn with_policy(
        tau: C64,
        eta: C64,
        eps_term: f64,
        k_max: usize,
        seed: u64,
    ) -> Result<Self> {
        if tau.im <= 0.0 {
            return Err(Error::Domain(format!("Im tau must be positive, got {tau}")));
        }
        if eps_term.is_nan() || eps_term <= 0.0 || k_max == 0 {
            return Err(Error::Domain("invalid truncation policy".into()));
        }
        Ok(ModuliContext {
            tau,
            eta,
            eps_term,
            k_max,
            seed,
            consts: OnceCell::new(),
        })
    }

    /// Context used throughout the test and verification suites:
    /// `tau = 2i`, `2 eta = 0.1 + 0.5i`.
    pub fn default_verification() -> Self {
        Self::new(C64::new(0.0, 2.0), C64::new(0.05, 0.25)).expect("valid default moduli")
    }

    pub fn two_eta(&self) -> C64 {
        2.0 * self.eta
    }

    /// `Im(2 eta) > 0` is required whenever the elliptic gamma-function of
    /// this context is evaluated.
    pub fn require_gamma_moduli(&self) -> Result<()> {
        if self.two_eta().im <= 0.0 {
            return Err(Error::Domain(format!(
                "Im(2 eta) must be positive for Gamma(z|tau, 2 eta), got 2 eta = {}",
                self.two_eta()
            )));
        }
        Ok(())
    }

    // ---- theta layer ------------------------------------------------------

    /// `theta_a(z|tau)` for `a` in 1..=4.
    pub fn theta(&self, a: u8, z: C64) -> Result<C64> {
        theta::theta_series(a, z, self.tau, self.eps_term, self.k_max)
    }

    /// `theta_a(z|tau/2)`, the bar variant.
    pub fn theta_bar(&self, a: u8, z: C64) -> Result<C64> {
        theta::theta_series(a, z, 0.5 * self.tau, self.eps_term, self.k_max)
    }

    pub fn theta1(&self, z: C64) -> Result<C64> {
        self.theta(1, z)
    }

    /// `[x] = theta_1(2 x eta | tau)`, the elliptic number.
    pub fn bracket(&self, x: C64) -> Result<C64> {
        self.theta1(2.0 * x * self.eta)
    }

    // ---- gamma layer ------------------------------------------------------

    /// `Gamma(z | tau, 2 eta)`.
    pub fn gamma(&self, z: C64) -> Result<C64> {
        self.require_gamma_moduli()?;
        gamma::elliptic_gamma(z, self.tau, self.two_eta(), self.eps_term, self.k_max)
    }

    pub fn gamma_constants(&self) -> Result<&GammaConstants> {
        self.consts
            .get_or_try_init(|| gamma::compute_constants(self))
    }

    // ---- lattice helpers --------------------------------------------------

    /// Distance of `z` from the lattice `Z + tau Z`, measured in lattice
    /// coordinates.
    pub fn lattice_distance(&self, z: C64) -> f64 {
        let b = z.im / self.tau.im;
        let a = z.re - b * self.tau.re;
        let da = a - a.round();
        let db = b - b.round();
        (da * da + db * db).sqrt()
    }

    /// True when `z` is on the zero lattice of `theta_1(.|tau)`.
    pub fn on_theta_lattice(&self, z: C64) -> bool {
        self.lattice_distance(z) < EPS_LATTICE
    }

    /// Distance of `x` from a real integer; used for termination detection.
    pub fn integer_distance(x: C64) -> f64 {
        let n = x.re.round();
        (x - C64::new(n, 0.0)).norm()
    }

    /// Nonpositive-integer witness within `EPS_LATTICE`.
    pub fn as_nonpositive_integer(x: C64) -> Option<i64> {
        let n = x.re.round();
        if n <= 0.0 && (x - C64::new(n, 0.0)).norm() < EPS_LATTICE {
            Some(n as i64)
        } else {
            None
        }
    }

    /// True when `z` lies within `guard` of a pole of `Gamma(.|tau, 2 eta)`,
    /// i.e. of the lattice `-2k eta - m tau + n` with `k, m >= 0`.
    pub fn near_gamma_pole(&self, z: C64, guard: f64) -> bool {
        self.near_gamma_lattice(z, guard, -1.0)
    }

    /// True when `z` lies within `guard` of a zero of `Gamma(.|tau, 2 eta)`,
    /// i.e. of the lattice `2(k+1) eta + (m+1) tau + n`.
    pub fn near_gamma_zero(&self, z: C64, guard: f64) -> bool {
        self.near_gamma_lattice(z - self.two_eta() - self.tau, guard, 1.0)
    }

    fn near_gamma_lattice(&self, z: C64, guard: f64, orientation: f64) -> bool {
        // Solve z ~ orientation*(2k eta + m tau) + n over small k, m >= 0.
        let te = self.two_eta();
        let kb = (z.im.abs() / te.im.abs()).ceil() as i64 + 2;
        let mb = (z.im.abs() / self.tau.im).ceil() as i64 + 2;
        for k in 0..=kb.min(64) {
            for m in 0..=mb.min(16) {
                let w = z - orientation * (k as f64 * te + m as f64 * self.tau);
                if (w.re - w.re.round()).abs() < guard && w.im.abs() < guard {
                    return true;
                }
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_tau() {
        assert!(ModuliContext::new(C64::new(0.0, -1.0), C64::new(0.0, 0.2)).is_err());
        assert!(ModuliContext::new(C64::new(1.0, 0.0), C64::new(0.0, 0.2)).is_err());
    }

    #[test]
    fn gamma_requires_positive_im_2eta() {
        let ctx = ModuliContext::new(C64::new(0.0, 2.0), C64::new(0.3, -0.1)).unwrap();
        assert!(ctx.gamma(C64::new(0.3, 0.0)).is_err());
    }

    #[test]
    fn lattice_distance_detects_lattice_points() {
        let ctx = ModuliContext::default_verification();
        let z = C64::new(3.0, 0.0) + 2.0 * ctx.tau;
        assert!(ctx.on_theta_lattice(z));
        assert!(!ctx.on_theta_lattice(z + C64::new(0.021, 0.017)));
    }

    #[test]
    fn gamma_pole_lattice() {
        let ctx = ModuliContext::default_verification();
        let z = -4.0 * ctx.eta - ctx.tau + C64::new(2.0, 0.0);
        assert!(ctx.near_gamma_pole(z, 1e-9));
        assert!(!ctx.near_gamma_pole(z + C64::new(0.013, 0.007), 1e-3));
        let zz = 4.0 * ctx.eta + 2.0 * ctx.tau - C64::new(1.0, 0.0);
        assert!(ctx.near_gamma_zero(zz, 1e-9));
    }

    #[test]
    fn terminating_witness() {
        assert_eq!(
            ModuliContext::as_nonpositive_integer(C64::new(-3.0, 1e-12)),
            Some(-3)
        );
        assert_eq!(ModuliContext::as_nonpositive_integer(C64::new(2.0, 0.0)), None);
        assert_eq!(
            ModuliContext::as_nonpositive_integer(C64::new(-3.0001, 0.0)),
            None
        );
    }
}
