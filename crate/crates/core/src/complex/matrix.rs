use std::collections::BTreeMap;
use std::io::{self, Write};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Column-compressed integer matrix. Each column holds `(row, value)` pairs
/// sorted by row with every stored value nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, BigInt)>>,
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets. Repeated positions add up;
    /// entries that sum to zero are dropped.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, BigInt)>,
    ) -> Result<Self> {
        let mut acc: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); cols];
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::invalid(format!(
                    "entry ({r}, {c}) outside a {rows}x{cols} matrix"
                )));
            }
            *acc[c].entry(r).or_default() += v;
        }
        let columns = acc
            .into_iter()
            .map(|col| col.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        Ok(SparseIntMatrix { rows, cols, columns })
    }

    /// Trusted constructor: columns must already be sorted, in range and free of zeros.
    pub(crate) fn from_columns(rows: usize, columns: Vec<Vec<(usize, BigInt)>>) -> Self {
        debug_assert!(columns.iter().all(|c| {
            c.windows(2).all(|w| w[0].0 < w[1].0)
                && c.iter().all(|(r, v)| *r < rows && !v.is_zero())
        }));
        SparseIntMatrix {
            rows,
            cols: columns.len(),
            columns,
        }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let triplets = rows.iter().enumerate().flat_map(|(r, row)| {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            row.iter()
                .enumerate()
                .map(move |(c, &v)| (r, c, BigInt::from(v)))
        });
        Self::from_triplets(rows.len(), cols, triplets).expect("indices in range")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn column(&self, c: usize) -> &[(usize, BigInt)] {
        &self.columns[c]
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        let col = &self.columns[c];
        col.binary_search_by_key(&r, |e| e.0)
            .map(|i| col[i].1.clone())
            .unwrap_or_default()
    }

    /// Nonzero entries in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn transpose(&self) -> SparseIntMatrix {
        let mut columns = vec![Vec::new(); self.rows];
        for (r, c, v) in self.entries() {
            columns[r].push((c, v.clone()));
        }
        SparseIntMatrix::from_columns(self.cols, columns)
    }

    /// Row `r` of the result is row `row_perm[r]` of `self`; likewise for columns.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Result<SparseIntMatrix> {
        if !is_permutation(row_perm, self.rows) || !is_permutation(col_perm, self.cols) {
            return Err(Error::invalid("not a permutation of the matrix indices"));
        }
        let mut row_inverse = vec![0; self.rows];
        for (new, &old) in row_perm.iter().enumerate() {
            row_inverse[old] = new;
        }
        let columns = col_perm
            .iter()
            .map(|&old| {
                let mut col: Vec<(usize, BigInt)> = self.columns[old]
                    .iter()
                    .map(|(r, v)| (row_inverse[*r], v.clone()))
                    .collect();
                col.sort_by_key(|e| e.0);
                col
            })
            .collect();
        Ok(SparseIntMatrix::from_columns(self.rows, columns))
    }

    /// Exact product `self · rhs`.
    pub fn mul(&self, rhs: &SparseIntMatrix) -> Result<SparseIntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let columns = rhs
            .columns
            .iter()
            .map(|rcol| {
                let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
                for (mid, b) in rcol {
                    for (r, a) in &self.columns[*mid] {
                        *acc.entry(*r).or_default() += a * b;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        Ok(SparseIntMatrix::from_columns(self.rows, columns))
    }

    /// Writes `dim d: rows R cols C` followed by one `d row col value` line per
    /// nonzero entry, sorted by row then column.
    pub fn write_dump(&self, d: usize, out: &mut impl Write) -> io::Result<()> {
        writeln!(out, "dim {d}: rows {} cols {}", self.rows, self.cols)?;
        let mut entries: Vec<_> = self.entries().collect();
        entries.sort_by_key(|&(r, c, _)| (r, c));
        for (r, c, v) in entries {
            writeln!(out, "{d} {r} {c} {v}")?;
        }
        Ok(())
    }
}

fn is_permutation(perm: &[usize], len: usize) -> bool {
    let mut seen = vec![false; len];
    perm.len() == len
        && perm
            .iter()
            .all(|&i| i < len && !std::mem::replace(&mut seen[i], true))
}
