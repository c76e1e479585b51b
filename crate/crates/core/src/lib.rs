//! Interpolation and approximation of smooth functions from equispaced
//! samples on [-1, 1].
//!
//! The main entry point is [`rational::fit_equispaced`], which computes a
//! greedy barycentric rational approximation of the data and, whenever the
//! result has poles inside the sample interval, falls back to a linear
//! least-squares refit in a partial fractions basis built from the retained
//! poles. [`rational::to_chebyshev`] converts the result to a polynomial.
//!
//! The [`baselines`] module provides the classical comparison methods
//! (oversampled polynomial least-squares, Fourier extension, Fourier plus
//! polynomial, cubic splines, Floater-Hormann interpolation), [`testlib`] the
//! benchmark function corpus, and [`bench`] a harness for convergence sweeps
//! and complex-plane error maps with CSV output.
//!
//! See the `examples/` directory for one runnable example per capability.

pub mod baselines;
pub mod bench;
pub mod error;
pub mod numerics;
pub mod rational;
pub mod testlib;
pub mod verify;

pub use error::{Error, Result};
