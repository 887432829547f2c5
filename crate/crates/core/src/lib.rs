//! Spectral toolkit for complex powers of the Laplacian on periodic grids,
//! Morrey-type norm functionals, and an inequality-verification harness.
//!
//! The crate is organised around a fixed pipeline:
//!
//! ```text
//!   analytic test function --sample--> GridFunction --fft--> SpectrumFunction
//!        |                                  |                     |
//!        |                                  |              multiply by |xi|^z
//!        |                                  v                     |
//!        +--------- norms (Morrey / Lebesgue / weak) <---inverse--+
//! ```
//!
//! * [`grid`] owns the periodic box `[-L/2, L/2)^n`, its lattice and the
//!   matching frequency lattice.
//! * [`special`] evaluates the complex gamma function, the kernel constant
//!   `C(u)` attached to purely imaginary powers, and the Riesz normalisation.
//! * [`spectral`] implements the transform pair, `(-Delta)^{z/2}` as a
//!   Fourier multiplier, and a slow quadrature oracle used to cross-check it.
//! * [`norms`] evaluates Morrey, Lebesgue and weak-Lebesgue functionals over
//!   explicit finite ball families; every Morrey value is a certified lower
//!   bound for the continuum supremum.
//! * [`testfns`] is the closed corpus grammar (bumps, Gaussians, power
//!   weights, seeded mollified noise and their dilates/translates/products).
//! * [`exponents`] validates the exponent tuples appearing in the verified
//!   inequalities; suites obtain tuples only through these validators.
//! * [`harness`] wires everything into reproducible verification suites with
//!   JSON/CSV reports and a CLI front end.
//!
//! Internal computation is `f64`/`Complex64` throughout. All public
//! operations reject non-finite values instead of letting NaN propagate.

pub mod exponents;
pub mod grid;
pub mod harness;
pub mod norms;
pub mod special;
pub mod spectral;
pub mod testfns;

pub use grid::{GridFunction, GridSpec, SpectrumFunction};
pub use norms::{BallFamily, NormResult};
pub use spectral::MultiplierPolicy;
pub use testfns::AnalyticFunction;
