//! Syzygies of Veronese modules.
//!
//! For a polynomial ring `S = k[x_0, .., x_n]` and integers `d >= 1`, `b`, the
//! Veronese module `S(b;d)` is the direct sum of the graded pieces `S_{di+b}`,
//! viewed as a module over `R = Sym(S_d)`. This crate computes its Koszul
//! cohomology groups `K_{p,q}` one torus weight at a time, decomposes them
//! into Schur functors, and provides the table model (Betti tables, tallies,
//! certification and Euler checks) used to present the results.
//!
//! The crate is `no_std` and only needs `alloc`. Parallel drivers, file
//! formats and the command line live in the companion `veronese` crate; they
//! plug into [`koszul::TaskRunner`] to fan out block computations.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod combinatorics;
mod error;
pub mod koszul;
pub mod params;
pub mod schur;
pub mod tables;

pub use error::Error;
pub use params::{KoszulPosition, VeroneseParams};

pub type Result<T, E = Error> = core::result::Result<T, E>;
