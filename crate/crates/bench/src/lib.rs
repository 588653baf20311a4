//! Shared fixtures for the evaluation benchmarks.

use sklyanin_core::{C64, ModuliContext};

pub fn bench_context() -> ModuliContext {
    ModuliContext::default_verification()
}

/// Generic off-lattice arguments used across the benchmarks.
pub fn bench_points() -> (C64, C64, C64) {
    (
        C64::new(0.17, 0.06),
        C64::new(-0.13, 0.04),
        C64::new(0.23, 0.11),
    )
}
