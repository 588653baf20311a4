//! Property tests for the structural invariants: parity and
//! quasi-periodicity of the theta layer, operator-algebra laws of the comb
//! calculus, the unit property of the vertex function, and the fixture
//! format round trip.

use proptest::prelude::*;
use std::f64::consts::PI;
use std::sync::Arc;

use sklyanin_core::comb::{pair_combs, Comb, Finiteness};
use sklyanin_core::diffop::DifferenceOperator;
use sklyanin_core::hyper;
use sklyanin_core::vertex;
use sklyanin_core::{C64, ModuliContext};

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

prop_compose! {
    fn small_complex()(re in -0.3f64..0.3, im in -0.12f64..0.12) -> C64 {
        C64::new(re, im)
    }
}

fn sample_op(c: &ModuliContext, a: f64, b: f64) -> DifferenceOperator {
    let mut op = DifferenceOperator::new(-c.eta);
    let c0 = c.clone();
    op.set_term(
        0,
        Arc::new(move |z| Ok(c0.theta1(2.0 * z + a)? / c0.theta1(2.0 * z)?)),
    );
    let c1 = c.clone();
    op.set_term(1, Arc::new(move |z| Ok(b * c1.theta1(2.0 * z - a)?)));
    op
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn theta_parity(z in small_complex()) {
        let c = ctx();
        // theta_1 odd, theta_2..4 even
        prop_assert!(rel(c.theta(1, -z).unwrap(), -c.theta(1, z).unwrap()) < 1e-12);
        for a in 2..=4u8 {
            prop_assert!(rel(c.theta(a, -z).unwrap(), c.theta(a, z).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn theta_quasi_periodicity(z in small_complex()) {
        let c = ctx();
        let i = C64::new(0.0, 1.0);
        for a in 1..=4u8 {
            let base = c.theta(a, z).unwrap();
            let s1 = if a <= 2 { -1.0 } else { 1.0 };
            prop_assert!(rel(c.theta(a, z + 1.0).unwrap(), s1 * base) < 1e-12);
            let st = if a == 1 || a == 4 { -1.0 } else { 1.0 };
            let factor = st * (-i * PI * c.tau - 2.0 * PI * i * z).exp();
            prop_assert!(rel(c.theta(a, z + c.tau).unwrap(), factor * base) < 1e-11);
        }
    }

    #[test]
    fn transpose_involution(a in 0.05f64..0.45, b in 0.2f64..1.5, z in small_complex()) {
        let c = ctx();
        let op = sample_op(&c, a, b);
        let tt = op.transpose(&c).transpose(&c);
        let zg = if c.theta1(2.0 * z).unwrap().norm() < 1e-4 { z + 0.11 } else { z };
        for k in op.indices() {
            let x = op.coeff_at(k, zg).unwrap();
            let y = tt.coeff_at(k, zg).unwrap();
            prop_assert!(rel(x, y) < 1e-12);
        }
    }

    #[test]
    fn compose_matches_sequential(a in 0.05f64..0.45, b in 0.05f64..0.45, z in small_complex()) {
        let c = ctx();
        let op1 = sample_op(&c, a, 0.7);
        let op2 = sample_op(&c, b, 1.3);
        let f = |u: C64| -> sklyanin_core::Result<C64> { Ok((0.8 * u).exp()) };
        let zg = if c.theta1(2.0 * z).unwrap().norm() < 1e-4 { z + 0.11 } else { z };
        let seq = op1.apply_value(&c, |w| op2.apply_value(&c, &f, w), zg).unwrap();
        let comp = op1.compose(&c, &op2).apply_value(&c, &f, zg).unwrap();
        prop_assert!(rel(seq, comp) < 1e-11);
    }

    #[test]
    fn pairing_adjointness(base in small_complex(), w0 in small_complex(), w1 in small_complex()) {
        let c = ctx();
        let op = sample_op(&c, 0.31, 0.9);
        let mut f = Comb::new(base, Finiteness::Finite);
        f.set(0, w0 + 1.0);
        f.set(2, w1);
        let mut g = Comb::new(base - c.eta, Finiteness::Finite);
        g.set(-1, w1 + 0.5);
        g.set(1, w0 - 0.25);
        let lhs = pair_combs(&c, &f, &op.apply_comb(&c, &g).unwrap()).unwrap();
        let rhs = pair_combs(&c, &op.transpose(&c).apply_comb(&c, &f).unwrap(), &g).unwrap();
        prop_assert!((lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1e-12) < 1e-11);
    }

    #[test]
    fn vertex_unit_property(z in small_complex(), zeta in small_complex(), lam in small_complex()) {
        let c = ctx();
        let args = [
            z + zeta + lam + c.eta,
            z - zeta + lam + c.eta,
            z + zeta - lam + c.eta,
            z - zeta - lam + c.eta,
        ];
        prop_assume!(args.iter().all(|x| !c.near_gamma_pole(*x, 1e-3) && !c.near_gamma_zero(*x, 1e-3)));
        prop_assert!(vertex::ww_unit_residual(&c, z, zeta, lam).unwrap() < 1e-10);
    }

    #[test]
    fn comb_text_round_trip(
        nu in small_complex(),
        ks in proptest::collection::btree_set(-20i64..20, 1..8),
        scale in -6f64..6f64,
    ) {
        let mut f = Comb::new(nu, Finiteness::Finite);
        let mag = 10f64.powf(scale);
        for (i, k) in ks.iter().enumerate() {
            f.set(*k, C64::new(mag * (i as f64 + 0.25), -mag / (i as f64 + 1.0)));
        }
        let back = Comb::from_text(&f.to_text()).unwrap();
        prop_assert_eq!(back.nu, f.nu);
        prop_assert_eq!(back.coeffs, f.coeffs);
    }

    #[test]
    fn terminating_jackson_agrees(n in 0usize..5, seed in 0u64..1000) {
        let c = ctx();
        // derive draw from the seed deterministically
        let t = seed as f64 / 1000.0;
        let a1 = C64::new(0.1 + 0.2 * t, 0.05 - 0.1 * t);
        let a4 = C64::new(-0.15 + 0.3 * t, 0.07);
        let a5 = C64::new(0.22 - 0.1 * t, -0.04 + 0.08 * t);
        let a6 = C64::new(0.05 + 0.12 * t, 0.02);
        let a7 = 2.0 * a1 + C64::new(1.0 + n as f64, 0.0) - a4 - a5 - a6;
        let params = hyper::jackson_series_params(a1, [a4, a5, a6, a7], n);
        prop_assume!(params.is_balanced());
        let series = hyper::omega_series(&c, &params, hyper::Truncation::Terminating);
        let closed = hyper::jackson_sum(&c, a1, [a4, a5, a6, a7], n);
        prop_assume!(series.is_ok() && closed.is_ok());
        prop_assert!(rel(series.unwrap().value, closed.unwrap()) < 1e-9);
    }
}
