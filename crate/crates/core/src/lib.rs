//! Generalized anchored configuration spaces on graphs.
//!
//! `Ω(G; K; n; q)` is the space of `n`-tuples of points on a graph `G` that
//! occupy at least `q` vertices of a fixed anchor set `K`. This crate
//!
//! * evaluates the closed-form Euler characteristic of these spaces for
//!   connected graphs that are not trees, next to a brute-force cell count
//!   ([`euler`]);
//! * builds the cubical chain complexes `𝒞^{P,q}` on the cycle graph `C_k`,
//!   and their relative quotients ([`complex`]);
//! * computes exact integer homology through sparse Smith normal forms
//!   ([`homology`]).

pub mod combinatorics;
pub mod complex;
mod error;
pub mod euler;
pub mod graph;
pub mod homology;
pub mod intfmt;

pub use error::{Error, Result};
