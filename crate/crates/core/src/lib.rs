//! Euler factors, Dirichlet series, analytic L-values and Deligne periods for
//! the motivic pieces `C^τ` of superelliptic curves `y^m = f(x)` over
//! `Q(ζ_m)`, `m ≤ 4`.
//!
//! The pipeline runs bottom-up:
//!
//! * [`cyclotomic`] — exact arithmetic in `Q(ζ_m)`, prime splitting, residue maps.
//! * [`finitefield`] — `F_{p^e}` arithmetic and `m`-th power residue classes.
//! * [`twistcount`] — point counts on Frobenius twists `u·y^m = f(x)`.
//! * [`euler`] — character projection and Newton's identities to local factors.
//! * [`lseries`] — Dirichlet coefficients and the smoothed functional equation.
//! * [`periods`] — branch points, cycle integrals and the Deligne period.
//! * [`recognize`] — exhaustive recognition of `L(1)/Ω` in `Q(ω)`.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod cyclotomic;
pub mod error;
pub mod euler;
pub mod finitefield;
pub mod gamma;
pub mod lseries;
pub mod periods;
pub mod poly;
pub mod quadrature;
pub mod recognize;
pub mod twistcount;

pub use cyclotomic::{split_prime, ComplexEmbedding, CycloElem, PrimeIdealData};
pub use error::{Error, Result};
pub use euler::{CharacterTau, LocalFactor};
pub use lseries::{EvalParams, PieceLSeries};
pub use periods::PeriodAssembly;
pub use recognize::{OmegaType, RecognitionResult};
pub use twistcount::SuperellipticCurve;

/// Complex doubles used for every analytic quantity.
pub type Complex64 = num_complex::Complex<f64>;
