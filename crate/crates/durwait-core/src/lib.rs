//! Duration-distribution toolkit for renewal processes.
//!
//! Implements the Weibull, Weibull-with-power-law-tail and truncated
//! Mittag-Leffler duration models together with the statistics built on
//! top of them: average waiting time (residual life), the inspection
//! paradox criterion, Lorentz curves and the Gini index, plus the fitting
//! machinery (Weibull paper regression, tail-exponent regression and the
//! optimal crossover point).
//!
//! The crate is `no_std` + `alloc`; all operations are pure functions of
//! their arguments and safe to call from any number of threads.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod distributions;
pub mod error;
pub mod fitting;
pub mod gini;
pub mod quadrature;
pub mod renewal;
pub mod specfun;

pub use error::{CoreError, Result};
