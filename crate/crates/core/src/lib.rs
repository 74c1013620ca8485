//! Exact arithmetic in the metaplectic double cover of GL2(Z) and the
//! weight-k slash actions of that cover on holomorphic functions over the
//! double half-plane `H* = {z : Im z != 0}`.
//!
//! The crate is `no_std` (it needs `alloc`). Floating point special
//! functions come from `libm` unless the `std` feature is enabled.
//!
//! Layout:
//! - [`meta_group`]: `GL2(Z)`, Kubota's twisted cocycle and the cover itself.
//! - [`automorphy`]: square-root automorphy factors pinned to the cover.
//! - [`slash`]: the weight-k action on functions over `H*`.
//! - [`rep`]: representations of both covers, induction, restriction,
//!   and vector-valued forms.
//! - [`classical`]: eta, Eisenstein series, `Z_N` and the two-component eta.

#![no_std]

extern crate alloc;

pub mod automorphy;
pub mod classical;
pub mod error;
pub mod meta_group;
pub mod rep;
pub mod slash;

pub use error::{Error, Result};

/// Complex double used throughout.
pub type C64 = num_complex::Complex64;
