//! Chain complexes generated by vertex-edge tuples on the cycle graph `C_k`.
//!
//! `𝒞^{P,q}` has, in degree `d`, one generator for each `n`-tuple over
//! `V ∪ E` with `d` edge slots whose vertex support lies in `P` and has at
//! least `q` elements. The boundary replaces an edge slot `e_j` by one of its
//! endpoints, provided that endpoint lies in `P`. Edge `e_j` is oriented from
//! `v_j` to `v_{j+1}`, so the head enters with `+` and the tail with `-`, and
//! the face at slot position `p` carries the extra sign `(-1)^ρ` where `ρ` is
//! the number of edge slots before `p`.
//!
//! The quotient `𝒞^{P,q-1}/𝒞^{P,q}` keeps tuples whose support has exactly
//! `q - 1` elements, and only the faces that leave the support unchanged.

mod builder;
mod cell;
mod matrix;

pub use builder::{
    build_complex, build_complex_with, enumerate_cells, full_support, quotient_complex,
    quotient_complex_with, BuildOptions, ChainComplex, ComplexBuilder, ComplexKind,
    DEFAULT_GENERATOR_BUDGET, MAX_CYCLE_LENGTH,
};
pub use cell::{Slot, VertexEdgeTuple};
pub use matrix::SparseIntMatrix;
