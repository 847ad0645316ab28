//! Euler characteristics of generalized anchored configuration spaces.
//!
//! Three routes are provided: the closed-form non-alternating double sum over
//! `(λ, t)`, its specializations (all vertices anchored, cycle graphs), and a
//! brute-force alternating count over every cell of `G^n`.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{choose, factorial, pow_conv, StirlingTable};
use crate::error::{Error, Result};
use crate::graph::{validate_for_euler, AnchorSpec, Graph};

/// Default cap on the number of tuples the brute-force enumerator may visit.
pub const DEFAULT_TUPLE_BUDGET: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EulerMethod {
    ClosedForm,
    BruteForce,
    ProductFormula,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerParams {
    pub vertices: usize,
    pub edges: usize,
    /// Number of anchors `|K|`.
    pub k: usize,
    pub n: usize,
    pub q: usize,
    pub epsilon: i64,
}

impl EulerParams {
    fn new(g: &Graph, a: &AnchorSpec, n: usize) -> Self {
        EulerParams {
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            k: a.k(),
            n,
            q: a.q,
            epsilon: g.epsilon(),
        }
    }
}

/// One summand `C(λ-ε+q-1, q-1)·C(n,t)·S(n-t,q)·λ^t` of the closed form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerTerm {
    pub lambda: u64,
    pub t: usize,
    #[serde(with = "crate::intfmt")]
    pub value: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerReport {
    #[serde(with = "crate::intfmt")]
    pub chi: BigInt,
    pub method: EulerMethod,
    pub params: EulerParams,
    /// Populated for [`EulerMethod::ClosedForm`] only.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<EulerTerm>,
}

impl EulerReport {
    /// `(-1)^(n-q) · q! · Σ terms`, which must reproduce `chi`.
    pub fn recombine_terms(&self) -> BigInt {
        let sum: BigInt = self.terms.iter().map(|t| &t.value).sum();
        sign(self.params.n - self.params.q) * factorial(self.params.q) * sum
    }
}

fn sign(exp: usize) -> BigInt {
    if exp % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Closed-form Euler characteristic of `Ω(G; K; n; q)`.
///
/// For `q = 0` the space is all of `G^n` and `χ = (|V| - |E|)^n` is returned
/// with [`EulerMethod::ProductFormula`]. Otherwise the graph must be connected
/// and not a tree, `K` non-empty and `q ≤ min(|K|, n)`.
pub fn euler_closed_form(g: &Graph, a: &AnchorSpec, n: usize) -> Result<EulerReport> {
    if a.q == 0 {
        a.check_against(g)?;
        return Ok(EulerReport {
            chi: Pow::pow(BigInt::from(-g.epsilon()), n),
            method: EulerMethod::ProductFormula,
            params: EulerParams::new(g, a, n),
            terms: Vec::new(),
        });
    }
    validate_for_euler(g, a, n).into_result()?;

    let (k, q) = (a.k(), a.q);
    let eps = g.epsilon() as u64;
    let stirling = StirlingTable::new(n);
    let mut terms = Vec::new();
    for lambda in eps..=eps + (k - q) as u64 {
        let weight = choose((lambda - eps) as usize + q - 1, q - 1);
        for t in 0..=n - q {
            let value = &weight
                * choose(n, t)
                * stirling.get(n - t, q)
                * pow_conv(lambda, t as u32);
            terms.push(EulerTerm { lambda, t, value });
        }
    }
    let mut report = EulerReport {
        chi: BigInt::zero(),
        method: EulerMethod::ClosedForm,
        params: EulerParams::new(g, a, n),
        terms,
    };
    report.chi = report.recombine_terms();
    Ok(report)
}

/// Every vertex of `anchors` must be occupied (`q = |K|`). The double sum
/// collapses to `(-1)^(n-k) k! Σ_t C(n,t) S(n-t,k) ε^t`.
pub fn euler_anchored(g: &Graph, anchors: &[usize], n: usize) -> Result<EulerReport> {
    let a = AnchorSpec::new(anchors.iter().copied(), anchors.len());
    validate_for_euler(g, &a, n).into_result()?;

    let k = a.k();
    let eps = g.epsilon() as u64;
    let stirling = StirlingTable::new(n);
    let terms: Vec<EulerTerm> = (0..=n - k)
        .map(|t| EulerTerm {
            lambda: eps,
            t,
            value: choose(n, t) * stirling.get(n - t, k) * pow_conv(eps, t as u32),
        })
        .collect();
    let sum: BigInt = terms.iter().map(|t| &t.value).sum();
    Ok(EulerReport {
        chi: sign(n - k) * factorial(k) * sum,
        method: EulerMethod::ClosedForm,
        params: EulerParams::new(g, &a, n),
        terms,
    })
}

/// `χ(Ω(k, n, q))` for the cycle graph `C_k` with every vertex anchored.
pub fn euler_cycle_generalized(k: usize, n: usize, q: usize) -> Result<EulerReport> {
    if k < 2 || q < 1 || q > k || q > n {
        return Err(Error::invalid(format!(
            "need k >= 2 and 1 <= q <= min(k, n), got k={k} n={n} q={q}"
        )));
    }
    let stirling = StirlingTable::new(n);
    let mut terms = Vec::new();
    for lambda in 0..=(k - q) {
        let weight = choose(lambda + q - 1, q - 1);
        for t in 0..=n - q {
            let value = &weight
                * choose(n, t)
                * stirling.get(n - t, q)
                * pow_conv(lambda as u64, t as u32);
            terms.push(EulerTerm {
                lambda: lambda as u64,
                t,
                value,
            });
        }
    }
    let mut report = EulerReport {
        chi: BigInt::zero(),
        method: EulerMethod::ClosedForm,
        params: EulerParams {
            vertices: k,
            edges: k,
            k,
            n,
            q,
            epsilon: 0,
        },
        terms,
    };
    report.chi = report.recombine_terms();
    Ok(report)
}

/// `(|V| + |E|)^n`, saturating at `u128::MAX`.
pub fn tuple_count(g: &Graph, n: usize) -> u128 {
    let base = (g.vertex_count() + g.edge_count()) as u128;
    u32::try_from(n)
        .ok()
        .and_then(|n| base.checked_pow(n))
        .unwrap_or(u128::MAX)
}

/// Sums `(-1)^dim σ` over all cells `σ` of `G^n` whose anchor coverage is at least `q`.
///
/// Every tuple of `(V ∪ E)^n` is visited, so the work is bounded by `budget`.
/// Tuples are split across threads by their first slot.
pub fn euler_brute_force(
    g: &Graph,
    a: &AnchorSpec,
    n: usize,
    budget: u128,
) -> Result<EulerReport> {
    a.check_against(g)?;
    let required = tuple_count(g, n);
    if required > budget {
        return Err(Error::Resource {
            what: "brute-force enumeration",
            required,
            budget,
        });
    }

    let alpha = g.vertex_count();
    let symbols = alpha + g.edge_count();
    let mut is_anchor = vec![false; alpha];
    for &v in &a.anchors {
        is_anchor[v] = true;
    }
    let walker = Walker {
        alpha,
        symbols,
        n,
        q: a.q,
        is_anchor: &is_anchor,
    };

    let chi: i64 = if n == 0 {
        i64::from(a.q == 0)
    } else {
        (0..symbols)
            .into_par_iter()
            .map(|first| {
                let mut state = WalkState {
                    occupancy: vec![0; alpha],
                    covered: 0,
                    edges: 0,
                };
                state.push(&walker, first);
                walker.walk(&mut state, 1)
            })
            .sum()
    };
    Ok(EulerReport {
        chi: BigInt::from(chi),
        method: EulerMethod::BruteForce,
        params: EulerParams::new(g, a, n),
        terms: Vec::new(),
    })
}

struct Walker<'a> {
    alpha: usize,
    symbols: usize,
    n: usize,
    q: usize,
    is_anchor: &'a [bool],
}

struct WalkState {
    occupancy: Vec<u32>,
    covered: usize,
    edges: usize,
}

impl WalkState {
    fn push(&mut self, w: &Walker<'_>, symbol: usize) {
        if symbol >= w.alpha {
            self.edges += 1;
        } else if w.is_anchor[symbol] {
            self.occupancy[symbol] += 1;
            if self.occupancy[symbol] == 1 {
                self.covered += 1;
            }
        }
    }

    fn pop(&mut self, w: &Walker<'_>, symbol: usize) {
        if symbol >= w.alpha {
            self.edges -= 1;
        } else if w.is_anchor[symbol] {
            self.occupancy[symbol] -= 1;
            if self.occupancy[symbol] == 0 {
                self.covered -= 1;
            }
        }
    }
}

impl Walker<'_> {
    fn walk(&self, state: &mut WalkState, depth: usize) -> i64 {
        if depth == self.n {
            if state.covered < self.q {
                return 0;
            }
            return if state.edges % 2 == 0 { 1 } else { -1 };
        }
        let mut total = 0;
        for symbol in 0..self.symbols {
            state.push(self, symbol);
            total += self.walk(state, depth + 1);
            state.pop(self, symbol);
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_cycle, Hypothesis};

    fn theta() -> Graph {
        Graph::new(2, vec![(0, 1), (0, 1), (0, 1)]).unwrap()
    }

    fn all(g: &Graph, q: usize) -> AnchorSpec {
        AnchorSpec::all_vertices(g, q)
    }

    fn brute(g: &Graph, a: &AnchorSpec, n: usize) -> BigInt {
        euler_brute_force(g, a, n, DEFAULT_TUPLE_BUDGET).unwrap().chi
    }

    #[test]
    fn closed_form_examples() {
        let c2 = make_cycle(2).unwrap();
        let c3 = make_cycle(3).unwrap();
        let cases = [
            (c2.graph(), 2, 2, 2),
            (c3.graph(), 1, 3, 27),
            (c3.graph(), 3, 3, 6),
            (c3.graph(), 3, 4, -36),
        ];
        for (g, q, n, chi) in cases {
            let report = euler_closed_form(g, &all(g, q), n).unwrap();
            assert_eq!(report.method, EulerMethod::ClosedForm);
            assert_eq!(report.chi, BigInt::from(chi), "q={q} n={n}");
            assert_eq!(report.recombine_terms(), report.chi);
            assert_eq!(brute(g, &all(g, q), n), BigInt::from(chi));
        }
    }

    #[test]
    fn term_table_layout() {
        let c3 = make_cycle(3).unwrap();
        let report = euler_closed_form(c3.graph(), &all(c3.graph(), 1), 3).unwrap();
        // λ ∈ 0..=2, t ∈ 0..=2
        assert_eq!(report.terms.len(), 9);
        let per_lambda: Vec<BigInt> = (0..3)
            .map(|l| report.terms.iter().filter(|t| t.lambda == l).map(|t| &t.value).sum())
            .collect();
        assert_eq!(per_lambda, [1, 7, 19].map(BigInt::from));
    }

    #[test]
    fn anchored_examples() {
        let c3 = make_cycle(3).unwrap();
        let r = euler_anchored(c3.graph(), &[0, 1, 2], 4).unwrap();
        assert_eq!(r.chi, BigInt::from(-36));

        let th = theta();
        let r = euler_anchored(&th, &[0, 1], 2).unwrap();
        assert_eq!(r.chi, BigInt::from(2));
        assert_eq!(brute(&th, &all(&th, 2), 2), BigInt::from(2));

        for k in 2..=5 {
            let c = make_cycle(k).unwrap();
            let anchors: Vec<usize> = (0..k).collect();
            for n in k..=7 {
                let expected = sign(n - k)
                    * factorial(k)
                    * StirlingTable::new(n).get(n, k);
                assert_eq!(euler_anchored(c.graph(), &anchors, n).unwrap().chi, expected);
            }
        }
    }

    #[test]
    fn cycle_generalized_examples() {
        let cases = [((3, 3, 1), 27), ((2, 2, 2), 2), ((3, 3, 3), 6)];
        for ((k, n, q), chi) in cases {
            assert_eq!(euler_cycle_generalized(k, n, q).unwrap().chi, BigInt::from(chi));
        }
        assert!(euler_cycle_generalized(3, 3, 0).is_err());
        assert!(euler_cycle_generalized(3, 3, 4).is_err());
        assert!(euler_cycle_generalized(1, 3, 1).is_err());
        assert!(euler_cycle_generalized(3, 1, 2).is_err());
    }

    #[test]
    fn cycle_generalized_matches_closed_form() {
        for k in 2..=5 {
            let c = make_cycle(k).unwrap();
            for n in 1..=6 {
                for q in 1..=k.min(n) {
                    let lhs = euler_cycle_generalized(k, n, q).unwrap().chi;
                    let rhs = euler_closed_form(c.graph(), &all(c.graph(), q), n).unwrap().chi;
                    assert_eq!(lhs, rhs, "k={k} n={n} q={q}");
                }
            }
        }
    }

    #[test]
    fn product_formula_for_q_zero() {
        let th = theta();
        for n in 0..=4 {
            let closed = euler_closed_form(&th, &all(&th, 0), n).unwrap();
            assert_eq!(closed.method, EulerMethod::ProductFormula);
            assert_eq!(closed.chi, Pow::pow(BigInt::from(-1), n));
            assert_eq!(brute(&th, &all(&th, 0), n), closed.chi);
        }
        let c4 = make_cycle(4).unwrap();
        assert_eq!(brute(c4.graph(), &all(c4.graph(), 0), 3), BigInt::zero());
    }

    #[test]
    fn hypothesis_errors() {
        let path = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let err = euler_closed_form(&path, &AnchorSpec::new([0], 1), 2).unwrap_err();
        assert_eq!(err, Error::Hypothesis(Hypothesis::NotATree));
        assert_eq!(err.to_string(), "hypothesis violated: graph is a tree");
        assert!(euler_anchored(&path, &[0], 2).is_err());
    }

    #[test]
    fn brute_force_budget() {
        let c3 = make_cycle(3).unwrap();
        let err = euler_brute_force(c3.graph(), &all(c3.graph(), 1), 4, 1000).unwrap_err();
        assert_eq!(
            err,
            Error::Resource {
                what: "brute-force enumeration",
                required: 1296,
                budget: 1000
            }
        );
        assert_eq!(tuple_count(c3.graph(), 200), u128::MAX);
    }

    #[test]
    fn brute_force_requires_q_within_anchors() {
        let c3 = make_cycle(3).unwrap();
        let a = AnchorSpec::new([0], 2);
        assert!(euler_brute_force(c3.graph(), &a, 3, DEFAULT_TUPLE_BUDGET).is_err());
    }

    #[test]
    fn closed_form_matches_brute_force_on_small_graphs() {
        let graphs = [
            theta(),
            make_cycle(3).unwrap().graph().clone(),
            // triangle with a pendant vertex
            Graph::new(4, vec![(0, 1), (1, 2), (2, 0), (0, 3)]).unwrap(),
            // a loop at a single vertex
            Graph::new(1, vec![(0, 0)]).unwrap(),
        ];
        for g in &graphs {
            let v = g.vertex_count();
            for mask in 1u32..(1 << v) {
                let anchors: Vec<usize> = (0..v).filter(|i| mask >> i & 1 == 1).collect();
                for q in 1..=anchors.len() {
                    for n in q..=4 {
                        let a = AnchorSpec::new(anchors.iter().copied(), q);
                        let closed = euler_closed_form(g, &a, n).unwrap().chi;
                        assert_eq!(closed, brute(g, &a, n), "{g:?} K={anchors:?} q={q} n={n}");
                        // (-1)^(n-q) χ is a sum of nonnegative terms
                        assert!(sign(n - q) * closed >= BigInt::zero());
                    }
                }
            }
        }
    }

    #[test]
    fn frozen_values_from_independent_enumeration() {
        let th = theta();
        assert_eq!(euler_closed_form(&th, &all(&th, 1), 3).unwrap().chi, BigInt::from(26));
        assert_eq!(euler_closed_form(&th, &all(&th, 2), 4).unwrap().chi, BigInt::from(50));
        let k4 = Graph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let a = AnchorSpec::new([0, 1, 2], 2);
        assert_eq!(euler_closed_form(&k4, &a, 4).unwrap().chi, BigInt::from(498));
        let pendant = Graph::new(4, vec![(0, 1), (1, 2), (2, 0), (0, 3)]).unwrap();
        let a = AnchorSpec::new([0, 3], 2);
        assert_eq!(euler_closed_form(&pendant, &a, 3).unwrap().chi, BigInt::from(-6));
        let a = AnchorSpec::new([3], 1);
        assert_eq!(euler_closed_form(&pendant, &a, 3).unwrap().chi, BigInt::from(1));
    }
}
