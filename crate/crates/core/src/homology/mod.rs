//! Integer homology of chain complexes.

mod elim;
mod rank;
mod snf;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use rank::rational_rank;
pub use snf::{smith_normal_form, SnfResult};

use crate::combinatorics::choose;
use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::euler::euler_cycle_generalized;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeHomology {
    pub dim: usize,
    pub betti: usize,
    /// Torsion coefficients, each greater than one.
    #[serde(with = "crate::intfmt::vec")]
    pub torsion: Vec<BigInt>,
}

/// `H_d ≅ Z^betti ⊕ ⨁ Z/t` for every degree `d` of the complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyResult {
    pub degrees: Vec<DegreeHomology>,
}

impl HomologyResult {
    pub fn betti(&self, d: usize) -> usize {
        self.degrees.get(d).map_or(0, |h| h.betti)
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        self.degrees.iter().map(|h| h.betti).collect()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.degrees.iter().all(|h| h.torsion.is_empty())
    }

    /// True when every degree other than `d` has trivial homology.
    pub fn is_concentrated_in(&self, d: usize) -> bool {
        self.degrees
            .iter()
            .all(|h| h.dim == d || (h.betti == 0 && h.torsion.is_empty()))
    }
}

/// Ranks of `∂_0, ..., ∂_n` over the rationals.
fn boundary_ranks(c: &ChainComplex) -> Vec<usize> {
    c.boundaries().par_iter().map(rational_rank).collect()
}

fn betti_from_ranks(c: &ChainComplex, ranks: &[usize]) -> Vec<usize> {
    (0..=c.n())
        .map(|d| c.rank(d) - ranks[d] - ranks.get(d + 1).copied().unwrap_or(0))
        .collect()
}

/// Betti numbers from rational ranks alone; no torsion information.
pub fn rational_betti_numbers(c: &ChainComplex) -> Vec<usize> {
    betti_from_ranks(c, &boundary_ranks(c))
}

/// Homology over the integers from the Smith forms of the boundary matrices.
///
/// `∂∘∂ = 0` is checked first. Ranks are computed twice, through the Smith
/// form and through fraction-free elimination, and must agree.
pub fn homology(c: &ChainComplex) -> Result<HomologyResult> {
    c.check_boundary_squared()?;
    let forms: Vec<(SnfResult, usize)> = c
        .boundaries()
        .par_iter()
        .map(|m| (smith_normal_form(m), rational_rank(m)))
        .collect();
    for (d, (snf, rank)) in forms.iter().enumerate() {
        if snf.rank != *rank {
            return Err(Error::Integrity(format!(
                "boundary of degree {d}: Smith form rank {} but rational rank {rank}",
                snf.rank
            )));
        }
    }
    let ranks: Vec<usize> = forms.iter().map(|(s, _)| s.rank).collect();
    let betti = betti_from_ranks(c, &ranks);
    let degrees = betti
        .into_iter()
        .enumerate()
        .map(|(d, betti)| DegreeHomology {
            dim: d,
            betti,
            torsion: forms.get(d + 1).map(|(s, _)| s.torsion()).unwrap_or_default(),
        })
        .collect();
    Ok(HomologyResult { degrees })
}

/// Betti numbers `β_0, ..., β_{n-q}` of `Ω(k, n, q)`: binomial below the top
/// degree, and the top degree fixed by the Euler characteristic.
pub fn betti_closed_form(k: usize, n: usize, q: usize) -> Result<Vec<BigInt>> {
    let chi = euler_cycle_generalized(k, n, q)?.chi;
    let top = n - q;
    let mut betti: Vec<BigInt> = (0..top).map(|i| choose(n, i)).collect();
    let lower: BigInt = betti
        .iter()
        .enumerate()
        .map(|(i, b)| if i % 2 == 0 { b.clone() } else { -b })
        .sum();
    let top_value = chi - lower;
    betti.push(if top % 2 == 0 { top_value } else { -top_value });
    Ok(betti)
}

/// `Σ (-1)^i β_i`.
pub fn euler_poincare(h: &HomologyResult) -> BigInt {
    h.degrees
        .iter()
        .map(|d| {
            let b = BigInt::from(d.betti);
            if d.dim % 2 == 0 {
                b
            } else {
                -b
            }
        })
        .sum()
}
