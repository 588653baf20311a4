//! Elliptic special functions, comb/difference-operator calculus and the
//! intertwining constructions of the Sklyanin algebra, together with a
//! verification layer that certifies the identities between them
//! (orthogonality, intertwining, star-triangle, RLL, Frenkel-Turaev
//! summations) at quantified residuals.
//!
//! Everything is evaluated in complex double precision relative to a single
//! [`ModuliContext`] holding the moduli `(tau, eta)` and the truncation
//! policy; identical contexts give bit-identical results.


pub mod algebra;
pub mod comb;
pub mod diffop;
pub mod error;
pub mod gamma;
pub mod hyper;
pub mod intertwiner;
pub mod moduli;
pub mod report;
pub mod rops;
pub mod sampling;
pub mod startri;
pub mod suites;
pub mod theta;
pub mod vacuum;
pub mod vertex;

pub use error::{Error, Result};
pub use moduli::{GammaConstants, ModuliContext, EPS_LATTICE};
pub use report::IdentityReport;

pub use num_complex::Complex64 as C64;
