use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::elim::{Eliminator, Overflow, Scalar};
use crate::complex::SparseIntMatrix;

/// Nonzero invariant factors `d_1 | d_2 | ... | d_r` of an integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfResult {
    #[serde(with = "crate::intfmt::vec")]
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
}

impl SnfResult {
    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

/// Smith normal form over the integers.
///
/// Unit pivots are eliminated sparsely first, choosing the sparsest column and
/// then the shortest row. What is left has no ±1 entries and is finished
/// densely, always pivoting on the entry of least magnitude.
pub fn smith_normal_form(m: &SparseIntMatrix) -> SnfResult {
    match unit_phase::<i64>(m) {
        Ok(res) => res,
        Err(Overflow) => unit_phase::<BigInt>(m).expect("BigInt arithmetic does not overflow"),
    }
}

fn unit_phase<T: Scalar>(m: &SparseIntMatrix) -> Result<SnfResult, Overflow> {
    let mut elim = Eliminator::<T>::new(m)?;
    elim.reduce_units()?;
    let units = elim.pivots();
    let mut invariant_factors = vec![BigInt::one(); units];
    invariant_factors.extend(dense_smith_diagonal(elim.residual()));
    Ok(SnfResult {
        rank: invariant_factors.len(),
        invariant_factors,
    })
}

/// Diagonal of the Smith form of a dense matrix, nonzero entries only.
pub(crate) fn dense_smith_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diagonal = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pr, pc)) = smallest_entry(&a, t..rows, t..cols) else {
            break;
        };
        a.swap(t, pr);
        swap_cols(&mut a, t, pc);
        loop {
            let mut remainder = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let quot = a[i][t].div_floor(&a[t][t]);
                let (head, tail) = a.split_at_mut(i);
                axpy_row(&mut tail[0], &head[t], &quot, t);
                remainder |= !a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let quot = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let delta = &quot * &row[t];
                    row[j] -= delta;
                }
                remainder |= !a[t][j].is_zero();
            }
            if remainder {
                // a remainder is smaller than the pivot; move the smallest one in
                let (pr, pc) = smallest_in_cross(&a, t);
                a.swap(t, pr);
                swap_cols(&mut a, t, pc);
                continue;
            }
            // pivot row and column are clear; the pivot must divide everything left
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !a[i][j].is_zero() && !a[i][j].is_multiple_of(&a[t][t]))
            });
            match offender {
                Some(i) => {
                    let (head, tail) = a.split_at_mut(i);
                    for (x, y) in head[t].iter_mut().zip(&tail[0]) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        diagonal.push(a[t][t].abs());
    }
    diagonal
}

/// `row -= quot · pivot_row`, touching only columns from `start` on.
fn axpy_row(row: &mut [BigInt], pivot_row: &[BigInt], quot: &BigInt, start: usize) {
    for (x, p) in row[start..].iter_mut().zip(&pivot_row[start..]) {
        if !p.is_zero() {
            *x -= quot * p;
        }
    }
}

fn swap_cols(a: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i != j {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }
}

fn smallest_entry(
    a: &[Vec<BigInt>],
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            let v = &a[i][j];
            if v.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| v.magnitude() < a[bi][bj].magnitude()) {
                best = Some((i, j));
                if v.magnitude().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

/// Smallest nonzero entry in row `t` or column `t`, on or after the pivot.
fn smallest_in_cross(a: &[Vec<BigInt>], t: usize) -> (usize, usize) {
    let rows = a.len();
    let cols = a[0].len();
    let column = (t..rows).map(|i| (i, t));
    let row = (t + 1..cols).map(|j| (t, j));
    column
        .chain(row)
        .filter(|&(i, j)| !a[i][j].is_zero())
        .min_by(|&(i, j), &(k, l)| a[i][j].magnitude().cmp(a[k][l].magnitude()))
        .expect("a remainder is nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn factors(m: &[Vec<i64>]) -> Vec<i64> {
        let res = smith_normal_form(&SparseIntMatrix::from_dense(m));
        res.invariant_factors
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect()
    }

    /// Determinantal divisors: d_1 ⋯ d_i = gcd of all i×i minors. Brute force on
    /// small dense matrices.
    fn determinantal_factors(m: &[Vec<i64>]) -> Vec<BigInt> {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let mut divisors = vec![BigInt::one()];
        for size in 1..=rows.min(cols) {
            let mut g = BigInt::zero();
            for rs in subsets(rows, size) {
                for cs in subsets(cols, size) {
                    let minor: Vec<Vec<BigInt>> = rs
                        .iter()
                        .map(|&r| cs.iter().map(|&c| BigInt::from(m[r][c])).collect())
                        .collect();
                    g = g.gcd(&det(minor));
                }
            }
            if g.is_zero() {
                break;
            }
            divisors.push(g);
        }
        divisors.windows(2).map(|w| &w[1] / &w[0]).collect()
    }

    fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
        (0u32..1 << n)
            .filter(|m| m.count_ones() as usize == size)
            .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
            .collect()
    }

    fn det(m: Vec<Vec<BigInt>>) -> BigInt {
        // Laplace expansion along the first row
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        (0..n)
            .map(|j| {
                let minor = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
                    .collect();
                let term = &m[0][j] * det(minor);
                if j % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum()
    }

    #[test]
    fn examples() {
        assert_eq!(factors(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]), [1, 1, 1]);
        assert_eq!(factors(&[vec![0, 0], vec![0, 0]]), Vec::<i64>::new());
        assert_eq!(factors(&[vec![2, 4], vec![6, 8]]), [2, 4]);
        assert_eq!(
            determinantal_factors(&[vec![2, 4], vec![6, 8]]),
            [2, 4].map(BigInt::from)
        );
    }

    #[test]
    fn empty_shapes() {
        assert_eq!(smith_normal_form(&SparseIntMatrix::zeros(0, 5)).rank, 0);
        assert_eq!(smith_normal_form(&SparseIntMatrix::zeros(3, 0)).rank, 0);
    }

    #[test]
    fn all_plus_odd_cycle_has_two_torsion() {
        // a cycle boundary with all plus signs on an odd cycle has cokernel Z/2
        let m = SparseIntMatrix::from_dense(&[vec![1, 0, 1], vec![1, 1, 0], vec![0, 1, 1]]);
        let res = smith_normal_form(&m);
        assert_eq!(res.invariant_factors, [1, 1, 2].map(BigInt::from));
        assert_eq!(res.torsion(), [BigInt::from(2)]);
    }

    #[test]
    fn overflowing_entries_fall_back_to_bigint() {
        let big = i64::MAX / 2;
        let m = SparseIntMatrix::from_dense(&[vec![big, big - 1], vec![big - 1, big - 2], vec![3, 5]]);
        let res = smith_normal_form(&m);
        let expected = determinantal_factors(&[vec![big, big - 1], vec![big - 1, big - 2], vec![3, 5]]);
        assert_eq!(res.invariant_factors, expected);
    }

    #[test]
    fn diagonal_needing_divisibility_fix() {
        assert_eq!(factors(&[vec![2, 0], vec![0, 3]]), [1, 6]);
        assert_eq!(factors(&[vec![4, 0, 0], vec![0, 6, 0], vec![0, 0, 10]]), [2, 2, 60]);
    }

    #[test]
    fn invariant_under_random_permutations() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let m = crate::complex::build_complex(3, 3, &[0, 1, 2], 1).unwrap();
        let d = m.boundary(2);
        let base = smith_normal_form(d);
        for _ in 0..5 {
            let mut rp: Vec<usize> = (0..d.rows()).collect();
            let mut cp: Vec<usize> = (0..d.cols()).collect();
            rp.shuffle(&mut rng);
            cp.shuffle(&mut rng);
            assert_eq!(smith_normal_form(&d.permuted(&rp, &cp).unwrap()), base);
        }
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(-6i64..=6, c), r)
        })
    }

    proptest! {
        #[test]
        fn matches_determinantal_divisors(m in small_matrix()) {
            let res = smith_normal_form(&SparseIntMatrix::from_dense(&m));
            prop_assert_eq!(&res.invariant_factors, &determinantal_factors(&m));
            prop_assert!(res.invariant_factors.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        }

        #[test]
        fn permutation_invariance(m in small_matrix(), seed in any::<u64>()) {
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let sparse = SparseIntMatrix::from_dense(&m);
            let mut rp: Vec<usize> = (0..sparse.rows()).collect();
            let mut cp: Vec<usize> = (0..sparse.cols()).collect();
            rp.shuffle(&mut rng);
            cp.shuffle(&mut rng);
            prop_assert_eq!(
                smith_normal_form(&sparse.permuted(&rp, &cp).unwrap()),
                smith_normal_form(&sparse)
            );
        }
    }
}
