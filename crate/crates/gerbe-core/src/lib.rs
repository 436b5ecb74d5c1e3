//! Numerical kernel for the cup product bundle gerbe over `T x SU(n)/T`, the
//! basic bundle gerbe over `SU(n)`, and the stable isomorphism between the
//! cup product gerbe and the pullback of the basic gerbe along the Weyl map.
//!
//! Everything here is pointwise and exact-at-machine-precision where the
//! underlying identity is algebraic; quadrature enters only through the
//! `quadrature` module. The crate is `no_std` (with `alloc`); IO, CLI and
//! report formats live in the companion `gerbeverify` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod forms;
pub mod gerbe;
pub mod lie;
pub mod matutil;
pub mod quadrature;
pub mod spectral;
pub mod tol;

pub use error::Error;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex<f64>;

/// Complex dynamic matrix.
pub type CMat = nalgebra::DMatrix<C64>;

/// Real dynamic vector.
pub type RVec = nalgebra::DVector<f64>;

pub type Result<T> = core::result::Result<T, Error>;
