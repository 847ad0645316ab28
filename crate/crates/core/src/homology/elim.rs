//! Row-sparse integer elimination shared by the Smith form and the rank computation.
//!
//! Entries are held either as checked `i64` or as `BigInt`. The `i64` run aborts
//! with [`Overflow`] as soon as an intermediate value leaves its range, and the
//! caller repeats the whole elimination over `BigInt`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::complex::SparseIntMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Overflow;

pub(crate) trait Scalar: Clone + Debug + Send + Sync + Integer {
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn is_unit(&self) -> bool;
    fn abs_lt(&self, other: &Self) -> bool;
    /// `alpha·a − beta·b`.
    fn combine(alpha: &Self, a: &Self, beta: &Self, b: &Self) -> Option<Self>;
    fn mul_checked(&self, other: &Self) -> Option<Self>;
    /// `−self·other`.
    fn neg_mul_checked(&self, other: &Self) -> Option<Self>;
}

impl Scalar for i64 {
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i64().filter(|&x| x != i64::MIN)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn combine(alpha: &Self, a: &Self, beta: &Self, b: &Self) -> Option<Self> {
        // i64::MIN has no absolute value, so it counts as overflow too
        alpha
            .checked_mul(*a)?
            .checked_sub(beta.checked_mul(*b)?)
            .filter(|&x| x != i64::MIN)
    }
    fn mul_checked(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other).filter(|&x| x != i64::MIN)
    }
    fn neg_mul_checked(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)?.checked_neg().filter(|&x| x != i64::MIN)
    }
}

impl Scalar for BigInt {
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.magnitude() < other.magnitude()
    }
    fn combine(alpha: &Self, a: &Self, beta: &Self, b: &Self) -> Option<Self> {
        Some(alpha * a - beta * b)
    }
    fn mul_checked(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn neg_mul_checked(&self, other: &Self) -> Option<Self> {
        Some(-(self * other))
    }
}

/// How rows are combined when clearing a pivot column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Combine {
    /// The pivot is ±1: `row_i -= (a·u)·row_r`. Unimodular.
    Unit,
    /// `row_i = (p/g)·row_i − (a/g)·row_r`, then divide `row_i` by its content.
    /// Preserves the row space over the rationals only.
    FractionFree,
}

pub(crate) struct Eliminator<T> {
    rows: Vec<Vec<(u32, T)>>,
    row_alive: Vec<bool>,
    /// Sorted indices of live rows with a nonzero entry in each column.
    col_rows: Vec<Vec<u32>>,
    col_done: Vec<bool>,
    queue: BinaryHeap<Reverse<(usize, u32)>>,
    pivots: usize,
}

impl<T: Scalar> Eliminator<T> {
    pub(crate) fn new(m: &SparseIntMatrix) -> Result<Self, Overflow> {
        let mut rows: Vec<Vec<(u32, T)>> = vec![Vec::new(); m.rows()];
        let mut col_rows = vec![Vec::new(); m.cols()];
        for c in 0..m.cols() {
            for (r, v) in m.column(c) {
                rows[*r].push((c as u32, T::from_big(v).ok_or(Overflow)?));
                col_rows[c].push(*r as u32);
            }
        }
        let queue = col_rows
            .iter()
            .enumerate()
            .filter(|(_, rs)| !rs.is_empty())
            .map(|(c, rs)| Reverse((rs.len(), c as u32)))
            .collect();
        Ok(Eliminator {
            row_alive: vec![true; rows.len()],
            rows,
            col_done: vec![false; col_rows.len()],
            col_rows,
            queue,
            pivots: 0,
        })
    }

    pub(crate) fn pivots(&self) -> usize {
        self.pivots
    }

    /// Pops the live column with the fewest entries.
    fn next_column(&mut self) -> Option<u32> {
        while let Some(Reverse((count, c))) = self.queue.pop() {
            let rows = &self.col_rows[c as usize];
            if !self.col_done[c as usize] && !rows.is_empty() && rows.len() == count {
                return Some(c);
            }
        }
        None
    }

    fn entry(&self, r: u32, c: u32) -> &T {
        let row = &self.rows[r as usize];
        let i = row
            .binary_search_by_key(&c, |e| e.0)
            .expect("column index lists only rows holding an entry");
        &row[i].1
    }

    /// Among unit entries of column `c`, the one in the shortest row.
    fn unit_pivot(&self, c: u32) -> Option<u32> {
        self.col_rows[c as usize]
            .iter()
            .copied()
            .filter(|&r| self.entry(r, c).is_unit())
            .min_by_key(|&r| self.rows[r as usize].len())
    }

    /// The entry of smallest magnitude in column `c`, ties broken by row length.
    fn smallest_pivot(&self, c: u32) -> u32 {
        let mut best = self.col_rows[c as usize][0];
        for &r in &self.col_rows[c as usize][1..] {
            let (a, b) = (self.entry(r, c), self.entry(best, c));
            if a.abs_lt(b) || (!b.abs_lt(a) && self.rows[r as usize].len() < self.rows[best as usize].len()) {
                best = r;
            }
        }
        best
    }

    /// Eliminates unit pivots until none remain. Each pivot contributes an
    /// invariant factor 1 and removes one row and one column.
    pub(crate) fn reduce_units(&mut self) -> Result<(), Overflow> {
        while let Some(c) = self.next_column() {
            // columns without a unit are revisited if a later update changes them
            if let Some(r) = self.unit_pivot(c) {
                self.eliminate(r, c, Combine::Unit)?;
            }
        }
        Ok(())
    }

    /// Pivots on every nonzero column; the pivot count is the rational rank.
    pub(crate) fn reduce_all(&mut self) -> Result<(), Overflow> {
        while let Some(c) = self.next_column() {
            let r = self.unit_pivot(c).unwrap_or_else(|| self.smallest_pivot(c));
            let mode = if self.entry(r, c).is_unit() {
                Combine::Unit
            } else {
                Combine::FractionFree
            };
            self.eliminate(r, c, mode)?;
        }
        Ok(())
    }

    fn eliminate(&mut self, r: u32, c: u32, mode: Combine) -> Result<(), Overflow> {
        let pivot_row = std::mem::take(&mut self.rows[r as usize]);
        let pivot = {
            let i = pivot_row.binary_search_by_key(&c, |e| e.0).expect("pivot present");
            pivot_row[i].1.clone()
        };
        let targets: Vec<u32> = self.col_rows[c as usize]
            .iter()
            .copied()
            .filter(|&i| i != r)
            .collect();
        for i in targets {
            let a = self.entry(i, c).clone();
            let (alpha, beta) = match mode {
                // u⁻¹ = u for u = ±1
                Combine::Unit => (None, a.mul_checked(&pivot).ok_or(Overflow)?),
                Combine::FractionFree => {
                    let g = a.gcd(&pivot);
                    (Some(pivot.div_floor(&g)), a.div_floor(&g))
                }
            };
            self.combine_rows(i, alpha.as_ref(), &beta, &pivot_row)?;
            if mode == Combine::FractionFree {
                self.remove_content(i);
            }
        }
        for (col, _) in &pivot_row {
            let list = &mut self.col_rows[*col as usize];
            if let Ok(pos) = list.binary_search(&r) {
                list.remove(pos);
            }
            if *col != c {
                self.queue.push(Reverse((list.len(), *col)));
            }
        }
        debug_assert!(self.col_rows[c as usize].is_empty());
        self.col_done[c as usize] = true;
        self.row_alive[r as usize] = false;
        self.pivots += 1;
        Ok(())
    }

    /// `row_i = alpha·row_i − beta·pivot_row` (`alpha = None` means 1),
    /// keeping the column index current.
    fn combine_rows(
        &mut self,
        i: u32,
        alpha: Option<&T>,
        beta: &T,
        pivot_row: &[(u32, T)],
    ) -> Result<(), Overflow> {
        let old = std::mem::take(&mut self.rows[i as usize]);
        let mut merged = Vec::with_capacity(old.len() + pivot_row.len());
        let (mut x, mut y) = (0, 0);
        while x < old.len() || y < pivot_row.len() {
            let cx = old.get(x).map_or(u32::MAX, |e| e.0);
            let cy = pivot_row.get(y).map_or(u32::MAX, |e| e.0);
            if cx < cy {
                let v = match alpha {
                    None => old[x].1.clone(),
                    Some(s) => s.mul_checked(&old[x].1).ok_or(Overflow)?,
                };
                merged.push((cx, v));
                x += 1;
            } else if cy < cx {
                let v = beta.neg_mul_checked(&pivot_row[y].1).ok_or(Overflow)?;
                // a fresh entry in this column
                insert_sorted(&mut self.col_rows[cy as usize], i);
                self.queue.push(Reverse((self.col_rows[cy as usize].len(), cy)));
                merged.push((cy, v));
                y += 1;
            } else {
                let v = match alpha {
                    None => T::combine(&T::one(), &old[x].1, beta, &pivot_row[y].1),
                    Some(s) => T::combine(s, &old[x].1, beta, &pivot_row[y].1),
                }
                .ok_or(Overflow)?;
                if v.is_zero() {
                    remove_sorted(&mut self.col_rows[cx as usize], i);
                    self.queue.push(Reverse((self.col_rows[cx as usize].len(), cx)));
                } else {
                    // the value changed, and it may have become a unit
                    self.queue.push(Reverse((self.col_rows[cx as usize].len(), cx)));
                    merged.push((cx, v));
                }
                x += 1;
                y += 1;
            }
        }
        self.rows[i as usize] = merged;
        Ok(())
    }

    fn remove_content(&mut self, i: u32) {
        let row = &mut self.rows[i as usize];
        let mut g = T::zero();
        for (_, v) in row.iter() {
            g = g.gcd(v);
            if g.is_unit() {
                return;
            }
        }
        if g.is_zero() {
            return;
        }
        for (_, v) in row.iter_mut() {
            *v = v.div_floor(&g);
        }
    }

    /// The surviving rows and columns as a dense matrix (possibly empty).
    pub(crate) fn residual(&self) -> Vec<Vec<BigInt>> {
        let live_cols: Vec<usize> = (0..self.col_rows.len())
            .filter(|&c| !self.col_done[c] && !self.col_rows[c].is_empty())
            .collect();
        let mut position = vec![usize::MAX; self.col_rows.len()];
        for (j, &c) in live_cols.iter().enumerate() {
            position[c] = j;
        }
        self.rows
            .iter()
            .enumerate()
            .filter(|(r, row)| self.row_alive[*r] && !row.is_empty())
            .map(|(_, row)| {
                let mut dense = vec![BigInt::zero(); live_cols.len()];
                for (c, v) in row {
                    dense[position[*c as usize]] = v.to_big();
                }
                dense
            })
            .collect()
    }
}

fn insert_sorted(list: &mut Vec<u32>, i: u32) {
    if let Err(pos) = list.binary_search(&i) {
        list.insert(pos, i);
    }
}

fn remove_sorted(list: &mut Vec<u32>, i: u32) {
    if let Ok(pos) = list.binary_search(&i) {
        list.remove(pos);
    }
}
