//! Combs: formal sums of point masses on a shift lattice.
//!
//! A comb is `f(z) = sum_k f_k delta(z - nu + 2 k eta)` where `delta` is the
//! Kronecker-style symbol (`delta(0) = 1`, zero elsewhere). Combs are the
//! kernels of difference operators and the carriers of every half-infinite
//! identity checked by this crate. Only finitely many coefficients are ever
//! stored; the finiteness flag records which ideal class the truncation
//! approximates.

use num_complex::Complex64 as C64;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::moduli::{ModuliContext, EPS_LATTICE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Finiteness {
    Finite,
    /// `f_k = 0` for `k` below some bound.
    LeftFinite,
    /// `f_k = 0` for `k` above some bound.
    RightFinite,
}

#[derive(Debug, Clone)]
pub struct Comb {
    /// Support offset: the comb lives on `nu - 2 k eta`.
    pub nu: C64,
    pub coeffs: BTreeMap<i64, C64>,
    pub finiteness: Finiteness,
}

impl Comb {
    pub fn new(nu: C64, finiteness: Finiteness) -> Self {
        Comb {
            nu,
            coeffs: BTreeMap::new(),
            finiteness,
        }
    }

    /// `delta(z - a)`: a single unit mass at `a`.
    pub fn delta(a: C64) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(0, C64::new(1.0, 0.0));
        Comb {
            nu: a,
            coeffs,
            finiteness: Finiteness::Finite,
        }
    }

    pub fn set(&mut self, k: i64, value: C64) {
        self.coeffs.insert(k, value);
    }

    pub fn get(&self, k: i64) -> C64 {
        self.coeffs.get(&k).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    /// Support point of the stored index `k`.
    pub fn support_point(&self, ctx: &ModuliContext, k: i64) -> C64 {
        self.nu - 2.0 * k as f64 * ctx.eta
    }

    pub fn scaled(&self, c: C64) -> Self {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v *= c;
        }
        out
    }

    /// Offset difference to another comb measured in `2 eta` steps.
    /// Returns the integer `m` with `nu_self - nu_other = 2 m eta` when the
    /// lattices coincide within the lattice tolerance.
    pub fn lattice_offset(&self, other: &Comb, ctx: &ModuliContext) -> Option<i64> {
        lattice_steps(self.nu - other.nu, ctx)
    }

    /// Sum of all stored coefficients: the pairing against the constant
    /// function 1, i.e. the formal integral of the comb.
    pub fn integral(&self) -> C64 {
        self.coeffs.values().sum()
    }

    // ---- text fixture format ---------------------------------------------
    //
    //   nu=<re>,<im>
    //   <k> <re> <im>       (one line per stored coefficient)

    pub fn to_text(&self) -> String {
        let mut s = format!("nu={:.17e},{:.17e}\n", self.nu.re, self.nu.im);
        for (k, v) in &self.coeffs {
            s.push_str(&format!("{} {:.17e} {:.17e}\n", k, v.re, v.im));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let head = lines
            .next()
            .ok_or_else(|| Error::Config("empty comb fixture".into()))?;
        let nu_str = head
            .strip_prefix("nu=")
            .ok_or_else(|| Error::Config(format!("comb fixture must start with nu=, got `{head}`")))?;
        let mut parts = nu_str.split(',');
        let re = parse_f64(parts.next())?;
        let im = parse_f64(parts.next())?;
        let mut comb = Comb::new(C64::new(re, im), Finiteness::Finite);
        for line in lines {
            let mut fields = line.split_whitespace();
            let k: i64 = fields
                .next()
                .ok_or_else(|| Error::Config("missing index".into()))?
                .parse()
                .map_err(|e| Error::Config(format!("bad index: {e}")))?;
            let re = parse_f64(fields.next())?;
            let im = parse_f64(fields.next())?;
            comb.set(k, C64::new(re, im));
        }
        Ok(comb)
    }
}

fn parse_f64(field: Option<&str>) -> Result<f64> {
    field
        .ok_or_else(|| Error::Config("missing numeric field".into()))?
        .trim()
        .parse()
        .map_err(|e| Error::Config(format!("bad number: {e}")))
}

/// Integer `m` with `diff = 2 m eta` within the lattice tolerance.
pub fn lattice_steps(diff: C64, ctx: &ModuliContext) -> Option<i64> {
    let step = 2.0 * ctx.eta;
    let ratio = diff / step;
    let m = ratio.re.round();
    if ratio.im.abs() < EPS_LATTICE && (ratio.re - m).abs() < EPS_LATTICE {
        Some(m as i64)
    } else {
        None
    }
}

/// `(F, delta(z-a)) = F(a)`, extended over the comb by linearity.
pub fn pair_fn_comb<F>(ctx: &ModuliContext, f: F, g: &Comb) -> Result<C64>
where
    F: Fn(C64) -> Result<C64>,
{
    let mut acc = C64::new(0.0, 0.0);
    for (&k, &gk) in &g.coeffs {
        acc += f(g.support_point(ctx, k))? * gk;
    }
    Ok(acc)
}

/// Delta-delta pairing `(f, g) = sum over coinciding support points`.
///
/// The sum is well defined when one comb is finite or when a left-finite
/// comb meets a right-finite one; other class combinations are rejected as
/// formally infinite even though the stored truncations are finite.
pub fn pair_combs(ctx: &ModuliContext, f: &Comb, g: &Comb) -> Result<C64> {
    use Finiteness::*;
    let ok = matches!(
        (f.finiteness, g.finiteness),
        (Finite, _) | (_, Finite) | (LeftFinite, RightFinite) | (RightFinite, LeftFinite)
    );
    if !ok {
        return Err(Error::InfiniteSum);
    }
    // supports coincide iff nu_f - 2 j eta = nu_g - 2 k eta, i.e. j - k = m
    let Some(m) = f.lattice_offset(g, ctx) else {
        return Ok(C64::new(0.0, 0.0));
    };
    let mut acc = C64::new(0.0, 0.0);
    for (&j, &fj) in &f.coeffs {
        acc += fj * g.get(j - m);
    }
    Ok(acc)
}
