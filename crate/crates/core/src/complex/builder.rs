use std::collections::BTreeSet;
use std::io::{self, Write};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cell::{Slot, VertexEdgeTuple};
use super::matrix::SparseIntMatrix;
use crate::combinatorics::{choose, factorial, StirlingTable};
use crate::error::{Error, Result};

/// Builds with more generators than this, summed over all degrees, are refused.
pub const DEFAULT_GENERATOR_BUDGET: u128 = 5_000_000;

/// Vertex supports are kept as 64-bit masks.
pub const MAX_CYCLE_LENGTH: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplexKind {
    /// `𝒞^{P,q}`.
    Full,
    /// `𝒞^{P,q-1} / 𝒞^{P,q}`.
    Quotient,
}

#[derive(Debug, Clone)]
pub struct BuildOptions {
    /// Check `∂∘∂ = 0` after building.
    pub verify: bool,
    pub max_generators: u128,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            verify: true,
            max_generators: DEFAULT_GENERATOR_BUDGET,
        }
    }
}

/// All of `Z_k`, as 0-based indices.
pub fn full_support(k: usize) -> Vec<usize> {
    (0..k).collect()
}

/// Which tuples are generators and which boundary faces survive.
#[derive(Debug, Clone)]
struct CellRule {
    k: usize,
    n: usize,
    allowed: u64,
    min_support: usize,
    max_support: usize,
    kind: ComplexKind,
}

impl CellRule {
    fn new(k: usize, n: usize, p: &[usize], q: usize, kind: ComplexKind) -> Result<Self> {
        if k < 2 {
            return Err(Error::invalid(format!("cycle length must be at least 2, got {k}")));
        }
        if k > MAX_CYCLE_LENGTH {
            return Err(Error::invalid(format!(
                "cycle length {k} exceeds the supported maximum {MAX_CYCLE_LENGTH}"
            )));
        }
        if n < 1 {
            return Err(Error::invalid("n must be at least 1"));
        }
        let mut allowed = 0u64;
        for &i in p {
            if i >= k {
                return Err(Error::invalid(format!("support index {i} is not in Z_{k}")));
            }
            allowed |= 1 << i;
        }
        let size = allowed.count_ones() as usize;
        if q > size {
            return Err(Error::invalid(format!("q = {q} exceeds |P| = {size}")));
        }
        let (min_support, max_support) = match kind {
            ComplexKind::Full => (q, size),
            ComplexKind::Quotient => {
                if q == 0 {
                    return Err(Error::invalid("the quotient complex needs q >= 1"));
                }
                (q - 1, q - 1)
            }
        };
        Ok(CellRule {
            k,
            n,
            allowed,
            min_support,
            max_support,
            kind,
        })
    }

    fn support_size(&self) -> usize {
        self.allowed.count_ones() as usize
    }

    /// Generators of degree `d` in lexicographic slot order.
    fn enumerate(&self, d: usize) -> Vec<VertexEdgeTuple> {
        let mut alphabet: Vec<Slot> = (0..self.k)
            .filter(|i| self.allowed >> i & 1 == 1)
            .map(Slot::Vertex)
            .collect();
        alphabet.extend((0..self.k).map(Slot::Edge));
        let mut walk = Enumeration {
            rule: self,
            d,
            alphabet,
            current: Vec::with_capacity(self.n),
            occupancy: vec![0; self.k],
            out: Vec::new(),
        };
        if d <= self.n {
            walk.extend(0, 0);
        }
        walk.out
    }

    /// Generator count in degree `d`: choose the edge slots, label them, and
    /// fill the remaining slots with a word over `P` whose number of distinct
    /// letters is within bounds.
    fn count(&self, d: usize, stirling: &StirlingTable) -> BigInt {
        if d > self.n {
            return BigInt::zero();
        }
        let m = self.n - d;
        let p = self.support_size();
        let words: BigInt = (self.min_support..=self.max_support.min(m).min(p))
            .map(|j| choose(p, j) * factorial(j) * stirling.get(m, j))
            .sum();
        choose(self.n, d) * BigInt::from(self.k).pow(d as u32) * words
    }

    fn total_count(&self) -> u128 {
        let stirling = StirlingTable::new(self.n);
        let total: BigInt = (0..=self.n).map(|d| self.count(d, &stirling)).sum();
        total.to_u128().unwrap_or(u128::MAX)
    }

    fn face_allowed(&self, generator_mask: u64, v: usize) -> bool {
        let mask = match self.kind {
            ComplexKind::Full => self.allowed,
            ComplexKind::Quotient => generator_mask,
        };
        mask >> v & 1 == 1
    }

    fn boundary_column(
        &self,
        sigma: &VertexEdgeTuple,
        codomain: &[VertexEdgeTuple],
    ) -> Result<Vec<(usize, BigInt)>> {
        let mask = sigma.vertex_mask();
        let mut entries: Vec<(usize, i64)> = Vec::with_capacity(2 * sigma.len());
        let mut edges_before = 0;
        for (pos, slot) in sigma.slots().iter().enumerate() {
            let Slot::Edge(j) = *slot else { continue };
            let sign = if edges_before % 2 == 0 { 1 } else { -1 };
            for (v, orientation) in [((j + 1) % self.k, 1), (j, -1)] {
                if !self.face_allowed(mask, v) {
                    continue;
                }
                let face = sigma.with_slot(pos, Slot::Vertex(v));
                let row = codomain.binary_search(&face).map_err(|_| {
                    Error::State(format!("face {face} of {sigma} is not a generator"))
                })?;
                entries.push((row, sign * orientation));
            }
            edges_before += 1;
        }
        entries.sort_unstable_by_key(|e| e.0);
        let mut column: Vec<(usize, BigInt)> = Vec::with_capacity(entries.len());
        for (row, v) in entries {
            match column.last_mut() {
                Some((r, acc)) if *r == row => *acc += v,
                _ => column.push((row, BigInt::from(v))),
            }
        }
        column.retain(|(_, v)| !v.is_zero());
        Ok(column)
    }
}

struct Enumeration<'a> {
    rule: &'a CellRule,
    d: usize,
    alphabet: Vec<Slot>,
    current: Vec<Slot>,
    occupancy: Vec<u32>,
    out: Vec<VertexEdgeTuple>,
}

impl Enumeration<'_> {
    fn extend(&mut self, edges: usize, support: usize) {
        let n = self.rule.n;
        let pos = self.current.len();
        if pos == n {
            self.out.push(VertexEdgeTuple::new(self.current.clone()));
            return;
        }
        let edges_left = self.d - edges;
        let vertex_slots_left = (n - pos) - edges_left;
        for i in 0..self.alphabet.len() {
            let slot = self.alphabet[i];
            match slot {
                Slot::Vertex(v) => {
                    if vertex_slots_left == 0 {
                        continue;
                    }
                    let grown = support + usize::from(self.occupancy[v] == 0);
                    // the remaining vertex slots must still be able to reach the minimum
                    if grown > self.rule.max_support
                        || grown + vertex_slots_left - 1 < self.rule.min_support
                    {
                        continue;
                    }
                    self.occupancy[v] += 1;
                    self.current.push(slot);
                    self.extend(edges, grown);
                    self.current.pop();
                    self.occupancy[v] -= 1;
                }
                Slot::Edge(_) => {
                    if edges_left == 0 || support + vertex_slots_left < self.rule.min_support {
                        continue;
                    }
                    self.current.push(slot);
                    self.extend(edges + 1, support);
                    self.current.pop();
                }
            }
        }
    }
}

/// Enumerates bases and boundary matrices of one complex degree by degree.
#[derive(Debug, Clone)]
pub struct ComplexBuilder {
    rule: CellRule,
    bases: Vec<Option<Vec<VertexEdgeTuple>>>,
}

impl ComplexBuilder {
    pub fn full(k: usize, n: usize, p: &[usize], q: usize) -> Result<Self> {
        Self::new(CellRule::new(k, n, p, q, ComplexKind::Full)?)
    }

    pub fn quotient(k: usize, n: usize, p: &[usize], q: usize) -> Result<Self> {
        Self::new(CellRule::new(k, n, p, q, ComplexKind::Quotient)?)
    }

    fn new(rule: CellRule) -> Result<Self> {
        let bases = vec![None; rule.n + 1];
        Ok(ComplexBuilder { rule, bases })
    }

    /// Predicted total number of generators over all degrees.
    pub fn generator_count(&self) -> u128 {
        self.rule.total_count()
    }

    pub fn enumerate(&mut self, d: usize) -> Result<&[VertexEdgeTuple]> {
        let rule = &self.rule;
        let slot = self
            .bases
            .get_mut(d)
            .ok_or_else(|| Error::invalid(format!("degree {d} exceeds n = {}", rule.n)))?;
        Ok(slot.get_or_insert_with(|| rule.enumerate(d)))
    }

    /// The matrix of `∂: C_d → C_{d-1}`; for `d = 0` it has no rows.
    /// Both bases must have been enumerated first.
    pub fn boundary_matrix(&self, d: usize) -> Result<SparseIntMatrix> {
        let missing = |e: usize| Error::State(format!("basis of degree {e} not enumerated"));
        let domain = self.bases.get(d).and_then(Option::as_ref).ok_or_else(|| missing(d))?;
        if d == 0 {
            return Ok(SparseIntMatrix::zeros(0, domain.len()));
        }
        let codomain = self.bases[d - 1].as_ref().ok_or_else(|| missing(d - 1))?;
        let columns = domain
            .par_iter()
            .map(|sigma| self.rule.boundary_column(sigma, codomain))
            .collect::<Result<Vec<_>>>()?;
        Ok(SparseIntMatrix::from_columns(codomain.len(), columns))
    }

    pub fn build(mut self, opts: &BuildOptions) -> Result<ChainComplex> {
        let required = self.generator_count();
        if required > opts.max_generators {
            return Err(Error::Resource {
                what: "chain complex generators",
                required,
                budget: opts.max_generators,
            });
        }
        let rule = &self.rule;
        let fresh: Vec<Vec<VertexEdgeTuple>> =
            (0..=rule.n).into_par_iter().map(|d| rule.enumerate(d)).collect();
        for (slot, basis) in self.bases.iter_mut().zip(fresh) {
            slot.get_or_insert(basis);
        }
        let boundaries = (0..=self.rule.n)
            .map(|d| self.boundary_matrix(d))
            .collect::<Result<Vec<_>>>()?;
        let rule = self.rule;
        let complex = ChainComplex {
            k: rule.k,
            n: rule.n,
            support: (0..rule.k).filter(|i| rule.allowed >> i & 1 == 1).collect(),
            q: match rule.kind {
                ComplexKind::Full => rule.min_support,
                ComplexKind::Quotient => rule.min_support + 1,
            },
            kind: rule.kind,
            bases: self.bases.into_iter().map(Option::unwrap_or_default).collect(),
            boundaries,
        };
        if opts.verify {
            complex.check_boundary_squared()?;
        }
        Ok(complex)
    }
}

/// Generators of `C_d^{P,q}` in lexicographic slot order.
pub fn enumerate_cells(
    k: usize,
    n: usize,
    p: &[usize],
    q: usize,
    d: usize,
) -> Result<Vec<VertexEdgeTuple>> {
    let mut builder = ComplexBuilder::full(k, n, p, q)?;
    Ok(builder.enumerate(d)?.to_vec())
}

pub fn build_complex(k: usize, n: usize, p: &[usize], q: usize) -> Result<ChainComplex> {
    build_complex_with(k, n, p, q, &BuildOptions::default())
}

pub fn build_complex_with(
    k: usize,
    n: usize,
    p: &[usize],
    q: usize,
    opts: &BuildOptions,
) -> Result<ChainComplex> {
    ComplexBuilder::full(k, n, p, q)?.build(opts)
}

/// The relative complex `𝒞^{P,q-1}/𝒞^{P,q}`; requires `1 ≤ q ≤ |P|`.
pub fn quotient_complex(k: usize, n: usize, p: &[usize], q: usize) -> Result<ChainComplex> {
    quotient_complex_with(k, n, p, q, &BuildOptions::default())
}

pub fn quotient_complex_with(
    k: usize,
    n: usize,
    p: &[usize],
    q: usize,
    opts: &BuildOptions,
) -> Result<ChainComplex> {
    ComplexBuilder::quotient(k, n, p, q)?.build(opts)
}

/// A finite free chain complex concentrated in degrees `0..=n`.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    k: usize,
    n: usize,
    support: BTreeSet<usize>,
    q: usize,
    kind: ComplexKind,
    bases: Vec<Vec<VertexEdgeTuple>>,
    boundaries: Vec<SparseIntMatrix>,
}

impl ChainComplex {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &BTreeSet<usize> {
        &self.support
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn kind(&self) -> ComplexKind {
        self.kind
    }

    pub fn basis(&self, d: usize) -> &[VertexEdgeTuple] {
        self.bases.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn rank(&self, d: usize) -> usize {
        self.basis(d).len()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    /// `∂_d: C_d → C_{d-1}` for `d ≤ n`.
    pub fn boundary(&self, d: usize) -> &SparseIntMatrix {
        &self.boundaries[d]
    }

    pub fn boundaries(&self) -> &[SparseIntMatrix] {
        &self.boundaries
    }

    pub fn alternating_rank_sum(&self) -> BigInt {
        self.bases
            .iter()
            .enumerate()
            .map(|(d, b)| {
                let r = BigInt::from(b.len());
                if d % 2 == 0 {
                    r
                } else {
                    -r
                }
            })
            .sum()
    }

    /// Verifies `∂_d ∘ ∂_{d+1} = 0` in every degree.
    pub fn check_boundary_squared(&self) -> Result<()> {
        (1..self.n)
            .into_par_iter()
            .try_for_each(|d| match self.boundaries[d].mul(&self.boundaries[d + 1]) {
                Ok(m) if m.is_zero() => Ok(()),
                Ok(_) => Err(Error::Integrity(format!(
                    "boundary composed with itself is nonzero from degree {} to {}",
                    d + 1,
                    d - 1
                ))),
                Err(e) => Err(e),
            })
    }

    pub fn write_matrices(&self, out: &mut impl Write) -> io::Result<()> {
        for (d, m) in self.boundaries.iter().enumerate().skip(1) {
            m.write_dump(d, out)?;
        }
        Ok(())
    }
}
