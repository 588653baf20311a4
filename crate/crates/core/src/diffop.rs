//! Difference operators and their calculus.
//!
//! A difference operator is `D = sum_k c_k(z) e^{(mu + 2 k eta) d/dz}` with
//! finitely many stored terms; its kernel is the comb
//! `D(z, zeta) = sum_k c_k(z) delta(z - zeta + mu + 2 k eta)`. Action,
//! kernel conversion, transposition and composition are implemented here,
//! together with sampled operator equality: two operators are compared
//! coefficient-wise at pole-guarded random points, with residuals measured
//! relative to the largest coefficient magnitude seen across the whole
//! comparison (so analytically cancelling coefficients do not produce
//! spurious failures).

use num_complex::Complex64 as C64;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::comb::{lattice_steps, Comb};
use crate::error::{Error, Result};
use crate::moduli::ModuliContext;
use crate::sampling::{Sampler, Window};

/// Coefficient evaluator: a pure function of the argument.
pub type CoeffFn = Arc<dyn Fn(C64) -> Result<C64> + Send + Sync>;

#[derive(Clone)]
pub struct DifferenceOperator {
    /// Base shift offset; term `k` shifts by `mu + 2 k eta`.
    pub mu: C64,
    terms: BTreeMap<i64, CoeffFn>,
}

impl std::fmt::Debug for DifferenceOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DifferenceOperator")
            .field("mu", &self.mu)
            .field("terms", &self.terms.keys().collect::<Vec<_>>())
            .finish()
    }
}

impl DifferenceOperator {
    pub fn new(mu: C64) -> Self {
        DifferenceOperator {
            mu,
            terms: BTreeMap::new(),
        }
    }

    /// The identity operator: zero offset, unit coefficient.
    pub fn identity() -> Self {
        let mut op = Self::new(C64::new(0.0, 0.0));
        op.set_term(0, Arc::new(|_| Ok(C64::new(1.0, 0.0))));
        op
    }

    /// Multiplication by a function: zero shift.
    pub fn multiplication(f: CoeffFn) -> Self {
        let mut op = Self::new(C64::new(0.0, 0.0));
        op.set_term(0, f);
        op
    }

    pub fn set_term(&mut self, k: i64, coeff: CoeffFn) {
        self.terms.insert(k, coeff);
    }

    pub fn term(&self, k: i64) -> Option<&CoeffFn> {
        self.terms.get(&k)
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> + '_ {
        self.terms.keys().copied()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Shift attached to term `k`.
    pub fn shift(&self, ctx: &ModuliContext, k: i64) -> C64 {
        self.mu + 2.0 * k as f64 * ctx.eta
    }

    pub fn coeff_at(&self, k: i64, z: C64) -> Result<C64> {
        match self.terms.get(&k) {
            Some(f) => f(z),
            None => Ok(C64::new(0.0, 0.0)),
        }
    }

    /// `(D f)(z) = sum_k c_k(z) f(z + mu + 2 k eta)`.
    pub fn apply_value<F>(&self, ctx: &ModuliContext, f: F, z: C64) -> Result<C64>
    where
        F: Fn(C64) -> Result<C64>,
    {
        Ok(self.apply_value_scaled(ctx, f, z)?.0)
    }

    /// Same as [`apply_value`](Self::apply_value) but also returns the sum of
    /// term magnitudes, the natural scale for judging cancellation to zero.
    pub fn apply_value_scaled<F>(&self, ctx: &ModuliContext, f: F, z: C64) -> Result<(C64, f64)>
    where
        F: Fn(C64) -> Result<C64>,
    {
        let mut acc = C64::new(0.0, 0.0);
        let mut scale = 0.0f64;
        for (&k, coeff) in &self.terms {
            let t = coeff(z)? * f(z + self.shift(ctx, k))?;
            acc += t;
            scale += t.norm();
        }
        Ok((acc, scale))
    }

    /// Action on a comb: the offset moves by `-mu` and coefficients pick up
    /// the evaluator values at the landing supports.
    pub fn apply_comb(&self, ctx: &ModuliContext, f: &Comb) -> Result<Comb> {
        let mut out = Comb::new(f.nu - self.mu, f.finiteness);
        for (&j, &fj) in &f.coeffs {
            for (&k, coeff) in &self.terms {
                let m = j + k;
                let support = out.nu - 2.0 * m as f64 * ctx.eta;
                let add = coeff(support)? * fj;
                let cur = out.get(m);
                out.set(m, cur + add);
            }
        }
        Ok(out)
    }

    /// Kernel column at `zeta0`: the comb `D(., zeta0)`, equal to the
    /// operator applied to `delta(z - zeta0)`.
    pub fn kernel_column(&self, ctx: &ModuliContext, zeta0: C64) -> Result<Comb> {
        self.apply_comb(ctx, &Comb::delta(zeta0))
    }

    /// Transpose: `(c(z) e^{s d/dz})^t = e^{-s d/dz} c(z)`, so term `k`
    /// becomes `c_k(z - mu - 2 k eta)` at shift `-(mu + 2 k eta)`.
    pub fn transpose(&self, ctx: &ModuliContext) -> Self {
        let mut out = Self::new(-self.mu);
        for (&k, coeff) in &self.terms {
            let s = self.shift(ctx, k);
            let c = coeff.clone();
            out.set_term(-k, Arc::new(move |z| c(z - s)));
        }
        out
    }

    /// Conjugation by `z -> -z`: `c_k(z) e^{s d/dz} -> c_k(-z) e^{-s d/dz}`.
    pub fn reflect(&self) -> Self {
        let mut out = Self::new(-self.mu);
        for (&k, coeff) in &self.terms {
            let c = coeff.clone();
            out.set_term(-k, Arc::new(move |z| c(-z)));
        }
        out
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, ctx: &ModuliContext, other: &Self) -> Self {
        let mut grouped: BTreeMap<i64, Vec<(CoeffFn, CoeffFn, C64)>> = BTreeMap::new();
        for (&k2, c2) in &self.terms {
            let s2 = self.shift(ctx, k2);
            for (&k1, c1) in &other.terms {
                grouped
                    .entry(k2 + k1)
                    .or_default()
                    .push((c2.clone(), c1.clone(), s2));
            }
        }
        let mut out = Self::new(self.mu + other.mu);
        for (m, pairs) in grouped {
            out.set_term(
                m,
                Arc::new(move |z| {
                    let mut acc = C64::new(0.0, 0.0);
                    for (c2, c1, s2) in &pairs {
                        acc += c2(z)? * c1(z + s2)?;
                    }
                    Ok(acc)
                }),
            );
        }
        out
    }

    pub fn scaled(&self, c: C64) -> Self {
        let mut out = Self::new(self.mu);
        for (&k, coeff) in &self.terms {
            let f = coeff.clone();
            out.set_term(k, Arc::new(move |z| Ok(c * f(z)?)));
        }
        out
    }

    /// Sum of two operators on commensurate lattices.
    pub fn add(&self, ctx: &ModuliContext, other: &Self) -> Result<Self> {
        let m = align_offset(ctx, self.mu, other.mu)?;
        let mut out = Self::new(self.mu);
        let keys: std::collections::BTreeSet<i64> = self
            .indices()
            .chain(other.indices().map(|k| k - m))
            .collect();
        for k in keys {
            let a = self.terms.get(&k).cloned();
            let b = other.terms.get(&(k + m)).cloned();
            out.set_term(
                k,
                Arc::new(move |z| {
                    let mut acc = C64::new(0.0, 0.0);
                    if let Some(f) = &a {
                        acc += f(z)?;
                    }
                    if let Some(g) = &b {
                        acc += g(z)?;
                    }
                    Ok(acc)
                }),
            );
        }
        Ok(out)
    }

    pub fn sub(&self, ctx: &ModuliContext, other: &Self) -> Result<Self> {
        self.add(ctx, &other.scaled(C64::new(-1.0, 0.0)))
    }

    /// Keep only shift indices in `lo..=hi` (relative to this operator's
    /// own indexing). Used for truncation-budget accounting.
    pub fn restrict_indices(&self, lo: i64, hi: i64) -> Self {
        let mut out = Self::new(self.mu);
        for (&k, coeff) in &self.terms {
            if (lo..=hi).contains(&k) {
                out.set_term(k, coeff.clone());
            }
        }
        out
    }
}

/// Integer `m` with `mu_a - mu_b = 2 m eta`, or a lattice mismatch error.
fn align_offset(ctx: &ModuliContext, mu_a: C64, mu_b: C64) -> Result<i64> {
    lattice_steps(mu_a - mu_b, ctx).ok_or(Error::LatticeMismatch {
        mismatch: (mu_a - mu_b).norm(),
    })
}

/// Policy for sampled operator equality.
#[derive(Debug, Clone, Copy)]
pub struct SampledEqualityPolicy {
    pub n_samples: usize,
    pub window: Window,
    /// Samples keep `|theta_1(2z|tau)|` above this bound.
    pub pole_guard: f64,
    pub rel_tol: f64,
}

impl Default for SampledEqualityPolicy {
    fn default() -> Self {
        SampledEqualityPolicy {
            n_samples: 24,
            window: Window::default(),
            pole_guard: 1e-4,
            rel_tol: 1e-9,
        }
    }
}

/// Outcome of a sampled comparison.
#[derive(Debug, Clone, Copy)]
pub struct EqualityStats {
    pub max_residual: f64,
    pub mean_residual: f64,
    pub samples: usize,
}

impl EqualityStats {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_residual <= tol
    }

    pub fn merge(self, other: EqualityStats) -> EqualityStats {
        let n = self.samples + other.samples;
        EqualityStats {
            max_residual: self.max_residual.max(other.max_residual),
            mean_residual: if n == 0 {
                0.0
            } else {
                (self.mean_residual * self.samples as f64
                    + other.mean_residual * other.samples as f64)
                    / n as f64
            },
            samples: n,
        }
    }

    pub fn zero() -> EqualityStats {
        EqualityStats {
            max_residual: 0.0,
            mean_residual: 0.0,
            samples: 0,
        }
    }
}

/// Compare two operators coefficient-wise at seeded random samples.
///
/// Offsets must agree up to an integer number of `2 eta` steps; the unified
/// index set is sampled and residuals are normalized by the largest
/// coefficient magnitude observed anywhere in the comparison.
pub fn operators_equal(
    ctx: &ModuliContext,
    a: &DifferenceOperator,
    b: &DifferenceOperator,
    policy: &SampledEqualityPolicy,
    seed: u64,
) -> Result<EqualityStats> {
    let m = align_offset(ctx, a.mu, b.mu)?;
    let mut sampler = Sampler::new(seed);
    let keys: std::collections::BTreeSet<i64> =
        a.indices().chain(b.indices().map(|k| k - m)).collect();

    let mut diffs: Vec<f64> = Vec::new();
    let mut scale = 0.0f64;
    for _ in 0..policy.n_samples {
        let z = sampler.draw_z(ctx, &policy.window, policy.pole_guard);
        for &k in &keys {
            let va = match a.coeff_at(k, z) {
                Ok(v) => v,
                Err(Error::Pole { .. }) => continue,
                Err(e) => return Err(e),
            };
            let vb = match b.coeff_at(k + m, z) {
                Ok(v) => v,
                Err(Error::Pole { .. }) => continue,
                Err(e) => return Err(e),
            };
            scale = scale.max(va.norm()).max(vb.norm());
            diffs.push((va - vb).norm());
        }
    }
    if diffs.is_empty() {
        return Ok(EqualityStats::zero());
    }
    let scale = scale.max(1e-300);
    let max = diffs.iter().cloned().fold(0.0, f64::max) / scale;
    let mean = diffs.iter().sum::<f64>() / diffs.len() as f64 / scale;
    Ok(EqualityStats {
        max_residual: max,
        mean_residual: mean,
        samples: diffs.len(),
    })
}
