//! Kernels for finitely generated integer matrix groups: exact matrices and
//! words, congruence images, Cayley-graph spectra, closure evidence,
//! finite-index probes and reflection-group circle packings.
//!
//! `no_std` with `alloc`; file formats, timing and the command line live in
//! the `thinlab` crate.

#![no_std]

extern crate alloc;

pub mod catalog;
pub mod cayley;
pub mod closure;
pub mod error;
pub mod image;
pub mod linalg;
pub mod matrix;
pub mod modular;
pub mod packing;
pub mod probes;
pub mod spectral;
pub mod word;

pub use cayley::{build_cayley, CayleyGraph};
pub use error::{Error, Result};
pub use image::{enumerate_image, GroupImage};
pub use matrix::{det, mat_inv, mat_mul, IntMatrix};
pub use modular::{reduce_mod, ModMatrix};
pub use word::{eval_word, GeneratorSet, Letter, Word};
