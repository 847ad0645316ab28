use num_bigint::BigInt;

use super::elim::{Eliminator, Overflow, Scalar};
use crate::complex::SparseIntMatrix;

/// Rank over the rationals by fraction-free sparse elimination.
///
/// Non-unit pivots combine rows as `p·row_i − a·row_r` (after cancelling
/// `gcd(p, a)`) and then strip the row content, so all arithmetic stays in the
/// integers.
pub fn rational_rank(m: &SparseIntMatrix) -> usize {
    match eliminate::<i64>(m) {
        Ok(r) => r,
        Err(Overflow) => eliminate::<BigInt>(m).expect("BigInt arithmetic does not overflow"),
    }
}

fn eliminate<T: Scalar>(m: &SparseIntMatrix) -> Result<usize, Overflow> {
    let mut elim = Eliminator::<T>::new(m)?;
    elim.reduce_all()?;
    Ok(elim.pivots())
}
