//! Elliptic hypergeometric series.
//!
//! Elliptic numbers, Pochhammer symbols, factorials and binomials are all
//! built from `[x] = theta_1(2 x eta | tau)`. The very-well-poised series
//!
//! ```text
//! r+1_w_r(a1; a4,...,a_{r+1}; z) =
//!   sum_{k>=0} z^k [a1+2k][a1]_k / ([a1][1]_k) prod_m [a_{m+3}]_k / [a1-a_{m+3}+1]_k
//! ```
//!
//! is summed through the incremental term ratio
//!
//! ```text
//! t_{k+1}/t_k = z [a1+2k+2][a1+k] / ([a1+2k][1+k]) prod_m [a_m+k]/[a1-a_m+1+k]
//! ```
//!
//! which keeps the huge intermediate Pochhammer products out of the
//! arithmetic. Termination happens when some upper parameter is a
//! nonpositive integer; the Frenkel-Turaev (Jackson) closed form evaluates
//! terminating balanced 8_w_7 sums.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::moduli::{ModuliContext, EPS_LATTICE, ONE};

/// Elliptic Pochhammer `[x]_k = [x][x+1]...[x+k-1]`.
pub fn pochhammer(ctx: &ModuliContext, x: C64, k: usize) -> Result<C64> {
    let mut r = ONE;
    for j in 0..k {
        r *= ctx.bracket(x + j as f64)?;
    }
    Ok(r)
}

/// Elliptic factorial `[n]! = [1][2]...[n]`.
pub fn factorial(ctx: &ModuliContext, n: usize) -> Result<C64> {
    pochhammer(ctx, ONE, n)
}

/// Elliptic binomial `[n]! / ([m]! [n-m]!)`.
pub fn binomial(ctx: &ModuliContext, n: usize, m: usize) -> Result<C64> {
    if m > n {
        return Err(Error::Domain(format!("binomial needs 0 <= m <= n, got ({n}, {m})")));
    }
    Ok(factorial(ctx, n)? / (factorial(ctx, m)? * factorial(ctx, n - m)?))
}

/// Parameters of `r+1_w_r(alpha_1; alpha_4 ... alpha_{r+1}; z)`.
#[derive(Debug, Clone)]
pub struct OmegaParams {
    pub r: usize,
    pub alpha1: C64,
    /// `alpha_4 ... alpha_{r+1}`, so `r - 2` entries.
    pub alphas: Vec<C64>,
    /// Series argument; 1 for balanced series.
    pub z_arg: C64,
}

impl OmegaParams {
    pub fn new(alpha1: C64, alphas: Vec<C64>, z_arg: C64) -> Result<Self> {
        let r = alphas.len() + 2;
        if r < 3 {
            return Err(Error::Domain("omega series needs at least one upper parameter".into()));
        }
        Ok(OmegaParams { r, alpha1, alphas, z_arg })
    }

    pub fn balanced(alpha1: C64, alphas: Vec<C64>) -> Result<Self> {
        Self::new(alpha1, alphas, ONE)
    }

    /// Termination order: the smallest `n` with some `alpha_j = -n`
    /// (`j >= 4`, nonpositive integer within the lattice tolerance).
    pub fn termination_order(&self) -> Option<usize> {
        self.alphas
            .iter()
            .filter_map(|a| ModuliContext::as_nonpositive_integer(*a))
            .map(|n| (-n) as usize)
            .min()
    }

    pub fn is_terminating(&self) -> bool {
        self.termination_order().is_some()
    }

    /// Balancing residual `r - 5 + (r-3) alpha_1 - 2 sum alpha_{m+3}`.
    pub fn balance_residual(&self) -> C64 {
        let sum: C64 = self.alphas.iter().sum();
        C64::new((self.r as f64) - 5.0, 0.0) + (self.r as f64 - 3.0) * self.alpha1 - 2.0 * sum
    }

    pub fn is_balanced(&self) -> bool {
        (self.z_arg - ONE).norm() < EPS_LATTICE && self.balance_residual().norm() < 1e-6
    }
}

/// How far to sum a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// Sum exactly to the termination order; requires a terminating series.
    Terminating,
    /// Sum the first `n+1` terms and report the tail indicator.
    Order(usize),
}

/// Value of a partial or terminating omega sum plus the magnitude of the
/// last term as a tail indicator.
#[derive(Debug, Clone, Copy)]
pub struct OmegaSum {
    pub value: C64,
    pub last_term_abs: f64,
    pub terms: usize,
}

/// Normalized series terms `t_0 = 1, t_1, ..., t_n` (argument folded in).
pub fn omega_terms(
    ctx: &ModuliContext,
    alpha1: C64,
    alphas: &[C64],
    z_arg: C64,
    n: usize,
) -> Result<Vec<C64>> {
    let mut out = Vec::with_capacity(n + 1);
    let mut t = ONE;
    out.push(t);
    for k in 0..n {
        let kf = k as f64;
        let num = ctx.bracket(alpha1 + 2.0 * kf + 2.0)? * ctx.bracket(alpha1 + kf)?;
        let den = ctx.bracket(alpha1 + 2.0 * kf)? * ctx.bracket(ONE + kf)?;
        if den.norm() < 1e-250 {
            return Err(Error::Domain(format!(
                "vanishing denominator in omega term ratio at k = {k}"
            )));
        }
        let mut ratio = z_arg * num / den;
        for a in alphas {
            let arg = 2.0 * (alpha1 - a + (1.0 + kf)) * ctx.eta;
            if ctx.on_theta_lattice(arg) {
                return Err(Error::Domain(format!(
                    "vanishing Pochhammer denominator [alpha1 - alpha + 1]_k at k = {}",
                    k + 1
                )));
            }
            ratio *= ctx.bracket(a + kf)? / ctx.bracket(alpha1 - a + 1.0 + kf)?;
        }
        t *= ratio;
        out.push(t);
    }
    Ok(out)
}

/// Evaluate `r+1_w_r` per the truncation request.
pub fn omega_series(ctx: &ModuliContext, p: &OmegaParams, trunc: Truncation) -> Result<OmegaSum> {
    let n = match trunc {
        Truncation::Terminating => p.termination_order().ok_or_else(|| {
            Error::Domain("Truncation::Terminating needs a terminating parameter".into())
        })?,
        Truncation::Order(n) => n,
    };
    let terms = omega_terms(ctx, p.alpha1, &p.alphas, p.z_arg, n)?;
    let value = terms.iter().sum();
    Ok(OmegaSum {
        value,
        last_term_abs: terms.last().map(|t| t.norm()).unwrap_or(0.0),
        terms: n + 1,
    })
}

/// Frenkel-Turaev closed form for the terminating balanced
/// `8_w_7(alpha_1; alpha_4, ..., alpha_7, -n)`:
///
/// ```text
/// [a1+1]_n [a1-a4-a5+1]_n [a1-a4-a6+1]_n [a1-a5-a6+1]_n
/// -----------------------------------------------------
/// [a1-a4+1]_n [a1-a5+1]_n [a1-a6+1]_n [a1-a4-a5-a6+1]_n
/// ```
///
/// valid under the balancing condition `2 a1 + 1 = a4+a5+a6+a7 - n`.
pub fn jackson_sum(
    ctx: &ModuliContext,
    alpha1: C64,
    upper: [C64; 4],
    n: usize,
) -> Result<C64> {
    let [a4, a5, a6, a7] = upper;
    let balance = 2.0 * alpha1 + ONE - (a4 + a5 + a6 + a7 - C64::new(n as f64, 0.0));
    if balance.norm() > 1e-6 {
        return Err(Error::BalanceViolation {
            residual: balance.norm(),
        });
    }
    let num = pochhammer(ctx, alpha1 + 1.0, n)?
        * pochhammer(ctx, alpha1 - a4 - a5 + 1.0, n)?
        * pochhammer(ctx, alpha1 - a4 - a6 + 1.0, n)?
        * pochhammer(ctx, alpha1 - a5 - a6 + 1.0, n)?;
    let den = pochhammer(ctx, alpha1 - a4 + 1.0, n)?
        * pochhammer(ctx, alpha1 - a5 + 1.0, n)?
        * pochhammer(ctx, alpha1 - a6 + 1.0, n)?
        * pochhammer(ctx, alpha1 - a4 - a5 - a6 + 1.0, n)?;
    if den.norm() < 1e-250 {
        return Err(Error::Domain("vanishing Pochhammer denominator in Jackson sum".into()));
    }
    Ok(num / den)
}

/// The terminating `8_w_7` assembled from a Jackson-shaped parameter list.
pub fn jackson_series_params(alpha1: C64, upper: [C64; 4], n: usize) -> OmegaParams {
    let mut alphas = upper.to_vec();
    alphas.push(C64::new(-(n as f64), 0.0));
    OmegaParams {
        r: 7,
        alpha1,
        alphas,
        z_arg: ONE,
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
    fn pochhammer_base_cases() {
        let c = ctx();
        let x = C64::new(0.41, 0.13);
        // [x]_0 = 1 (empty product)
        assert_eq!(pochhammer(&c, x, 0).unwrap(), ONE);
        // [x]_1 = theta_1(2 x eta)
        assert!(rel(pochhammer(&c, x, 1).unwrap(), c.bracket(x).unwrap()) < 1e-15);
        // [3]! = [1][2][3]
        let direct = c.bracket(ONE).unwrap()
            * c.bracket(C64::new(2.0, 0.0)).unwrap()
            * c.bracket(C64::new(3.0, 0.0)).unwrap();
        assert!(rel(factorial(&c, 3).unwrap(), direct) < 1e-14);
    }

    #[test]
    fn binomial_edges_and_ratio() {
        let c = ctx();
        assert!(rel(binomial(&c, 5, 0).unwrap(), ONE) < 1e-15);
        assert!(rel(binomial(&c, 5, 5).unwrap(), ONE) < 1e-15);
        let direct = factorial(&c, 4).unwrap() / (factorial(&c, 2).unwrap() * factorial(&c, 2).unwrap());
        assert!(rel(binomial(&c, 4, 2).unwrap(), direct) < 1e-14);
        assert!(binomial(&c, 2, 3).is_err());
    }

    #[test]
    fn omega_zeroth_term_is_one() {
        let c = ctx();
        let p = OmegaParams::balanced(C64::new(0.3, 0.1), vec![C64::new(0.2, 0.0), C64::new(0.0, 0.0)])
            .unwrap();
        let s = omega_series(&c, &p, Truncation::Order(0)).unwrap();
        assert!(rel(s.value, ONE) < 1e-15);
        assert_eq!(s.terms, 1);
    }

    #[test]
    fn termination_detection() {
        let p = OmegaParams::balanced(
            C64::new(0.3, 0.1),
            vec![C64::new(-2.0, 1e-13), C64::new(0.7, 0.2)],
        )
        .unwrap();
        assert_eq!(p.termination_order(), Some(2));
        let q = OmegaParams::balanced(C64::new(0.3, 0.1), vec![C64::new(0.7, 0.2)]).unwrap();
        assert!(!q.is_terminating());
    }

    #[test]
    fn balance_detector_matches_jackson_condition() {
        // For 8w7 with alpha_8 = -n the general balancing condition reduces
        // to 2 a1 + 1 = a4+a5+a6+a7 - n. Build such parameters and check.
        let a1 = C64::new(0.31, 0.17);
        let a4 = C64::new(0.11, -0.05);
        let a5 = C64::new(-0.21, 0.09);
        let a6 = C64::new(0.4, 0.02);
        let n = 3usize;
        let a7 = 2.0 * a1 + ONE + C64::new(n as f64, 0.0) - a4 - a5 - a6;
        let p = jackson_series_params(a1, [a4, a5, a6, a7], n);
        assert!(p.is_balanced(), "residual {}", p.balance_residual().norm());
        assert_eq!(p.termination_order(), Some(n));
    }

    #[test]
    fn jackson_two_term_case() {
        // balanced 8w7 with alpha_8 = -1: the two-term sum equals the closed form
        let c = ctx();
        let a1 = C64::new(0.27, 0.08);
        let a4 = C64::new(0.13, -0.04);
        let a5 = C64::new(-0.17, 0.06);
        let a6 = C64::new(0.33, 0.11);
        let n = 1usize;
        let a7 = 2.0 * a1 + ONE + C64::new(n as f64, 0.0) - a4 - a5 - a6;
        let p = jackson_series_params(a1, [a4, a5, a6, a7], n);
        let series = omega_series(&c, &p, Truncation::Terminating).unwrap();
        assert_eq!(series.terms, 2);
        let closed = jackson_sum(&c, a1, [a4, a5, a6, a7], n).unwrap();
        assert!(rel(series.value, closed) < 1e-12, "rel {}", rel(series.value, closed));
    }

    #[test]
    fn vanishing_pochhammer_denominator_is_domain_error() {
        // alpha_4 = alpha_1 + 1 makes [alpha_1 - alpha_4 + 1]_1 = [0] = 0
        let c = ctx();
        let a1 = C64::new(0.27, 0.08);
        let p = OmegaParams::balanced(a1, vec![a1 + ONE, C64::new(0.1, 0.0)]).unwrap();
        match omega_series(&c, &p, Truncation::Order(2)) {
            Err(Error::Domain(_)) => {}
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn jackson_balance_violation() {
        let c = ctx();
        let a1 = C64::new(0.27, 0.08);
        let bad = [
            C64::new(0.1, 0.0),
            C64::new(0.2, 0.0),
            C64::new(0.3, 0.0),
            C64::new(0.4, 0.0),
        ];
        match jackson_sum(&c, a1, bad, 2) {
            Err(Error::BalanceViolation { .. }) => {}
            other => panic!("expected balance violation, got {other:?}"),
        }
    }

    #[test]
    fn zero_factor_from_one_minus_n_pochhammer() {
        // a terminating balanced 8w7 whose closed form contains [1-n]_n
        // vanishes for n >= 1
        let c = ctx();
        let n = 2usize;
        let z = C64::new(0.17, 0.06);
        let lam = C64::new(0.23, 0.11);
        let a1 = (z - lam) / c.eta;
        let a4 = -lam / c.eta;
        let a5 = z / c.eta + C64::new(n as f64, 0.0);
        let half = (z - lam + c.eta) / (2.0 * c.eta);
        let v = jackson_sum(&c, a1, [a4, a5, half, half], n).unwrap();
        // [a1 - a4 - a5 + 1]_n = [1 - n]_n = 0 sits in the numerator
        let scale = pochhammer(&c, a1 + 1.0, n).unwrap().norm();
        assert!(v.norm() / scale.max(1.0) < 1e-10, "expected ~0, got {v}");
    }
}
