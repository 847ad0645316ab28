//! Acceptance criteria, run sequentially with one PASS/FAIL line each.
//!
//! Every comparison is exact integer equality. Runtime limits are measured per
//! criterion on the wall clock.

use std::cell::RefCell;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anchorhom::combinatorics::{binomial, factorial, stirling2};
use anchorhom::complex::{build_complex, full_support, quotient_complex, ChainComplex};
use anchorhom::euler::{
    euler_anchored, euler_brute_force, euler_closed_form, euler_cycle_generalized,
    DEFAULT_TUPLE_BUDGET,
};
use anchorhom::graph::{make_cycle, AnchorSpec, Graph};
use anchorhom::homology::{betti_closed_form, homology, HomologyResult};
use anchorhom::Error;
use num_bigint::BigInt;

type Outcome = Result<String, String>;

thread_local! {
    /// Every complex built by criteria 1–7, for the integrity criterion.
    static BUILT: RefCell<Vec<Built>> = const { RefCell::new(Vec::new()) };
}

struct Built {
    label: String,
    boundary_squared_zero: bool,
    /// `(alternating rank sum, closed-form χ)` when `P = Z_k` and `q ≥ 1`.
    chi: Option<(BigInt, BigInt)>,
}

fn record(label: String, c: &ChainComplex) {
    let full = c.support().len() == c.k();
    let chi = (full && c.q() >= 1 && c.kind() == anchorhom::complex::ComplexKind::Full).then(|| {
        let closed = euler_cycle_generalized(c.k(), c.n(), c.q())
            .map(|r| r.chi)
            .unwrap_or_else(|_| BigInt::from(0));
        (c.alternating_rank_sum(), closed)
    });
    BUILT.with(|b| {
        b.borrow_mut().push(Built {
            label,
            boundary_squared_zero: c.check_boundary_squared().is_ok(),
            chi,
        })
    });
}

fn full_complex(k: usize, n: usize, p: &[usize], q: usize) -> Result<ChainComplex, String> {
    let c = build_complex(k, n, p, q).map_err(|e| format!("build k={k} n={n} P={p:?} q={q}: {e}"))?;
    record(format!("C^(P={p:?},q={q}) k={k} n={n}"), &c);
    Ok(c)
}

fn hom(c: &ChainComplex) -> Result<HomologyResult, String> {
    homology(c).map_err(|e| e.to_string())
}

fn choose(n: usize, i: usize) -> usize {
    usize::try_from(binomial(n as i64, i as i64).unwrap()).unwrap()
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    if took < limit {
        Ok(took)
    } else {
        Err(format!("took {took:?}, limit {limit:?}"))
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn subsets(k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << k)
        .map(|m| (0..k).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

fn torus_baseline() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for k in [2, 3] {
        for n in [2, 3] {
            let h = hom(&full_complex(k, n, &full_support(k), 0)?)?;
            let expected: Vec<usize> = (0..=n).map(|i| choose(n, i)).collect();
            ensure(h.betti_numbers() == expected, || {
                format!("k={k} n={n}: betti {:?}, expected {expected:?}", h.betti_numbers())
            })?;
            ensure(h.is_torsion_free(), || format!("k={k} n={n}: torsion present"))?;
            cases += 1;
        }
    }
    let took = within(Duration::from_secs(10), start)?;
    Ok(format!("{cases} tori in {took:.2?}"))
}

fn betti_grid() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for k in 2..=4 {
        for q in 1..=k {
            for n in q.max(2)..=5 {
                let c = full_complex(k, n, &full_support(k), q)?;
                let h = hom(&c)?;
                let expected = betti_closed_form(k, n, q).map_err(|e| e.to_string())?;
                let top = n - q;
                for d in 0..=n {
                    let got = BigInt::from(h.betti(d));
                    let want = expected.get(d).cloned().unwrap_or_default();
                    if d < top {
                        ensure(want == BigInt::from(choose(n, d)), || {
                            format!("closed form below top degree at k={k} n={n} q={q}")
                        })?;
                    }
                    ensure(got == want, || {
                        format!("k={k} n={n} q={q} degree {d}: betti {got}, expected {want}")
                    })?;
                }
                ensure(h.is_torsion_free(), || format!("k={k} n={n} q={q}: torsion present"))?;
                cases += 1;
            }
        }
    }
    let took = within(Duration::from_secs(120), start)?;
    Ok(format!("{cases} complexes in {took:.2?}"))
}

fn spot_values() -> Outcome {
    let h = hom(&full_complex(3, 3, &full_support(3), 1)?)?;
    ensure(h.betti_numbers() == [1, 3, 29, 0], || {
        format!("(3,3,1): betti {:?}", h.betti_numbers())
    })?;
    let h = hom(&full_complex(2, 2, &full_support(2), 2)?)?;
    ensure(h.betti_numbers() == [2, 0, 0], || {
        format!("(2,2,2): betti {:?}", h.betti_numbers())
    })?;
    Ok("(3,3,1) -> (1,3,29); (2,2,2) -> (2)".into())
}

fn test_graphs() -> Vec<(&'static str, Graph)> {
    let cycle = |k| make_cycle(k).unwrap().graph().clone();
    vec![
        ("C2", cycle(2)),
        ("C3", cycle(3)),
        ("C4", cycle(4)),
        ("theta", Graph::new(2, vec![(0, 1), (0, 1), (0, 1)]).unwrap()),
        (
            "C3+pendant",
            Graph::new(4, vec![(0, 1), (1, 2), (2, 0), (0, 3)]).unwrap(),
        ),
        (
            "K4",
            Graph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap(),
        ),
    ]
}

fn euler_formula_vs_oracle() -> Outcome {
    let start = Instant::now();
    let (mut checked, mut skipped) = (0, 0);
    for (name, g) in test_graphs() {
        for anchors in subsets(g.vertex_count()) {
            if anchors.is_empty() || anchors.len() > 3 {
                continue;
            }
            for q in 1..=anchors.len() {
                for n in q..=4 {
                    let a = AnchorSpec::new(anchors.iter().copied(), q);
                    let brute = match euler_brute_force(&g, &a, n, DEFAULT_TUPLE_BUDGET) {
                        Ok(r) => r.chi,
                        Err(Error::Resource { .. }) => {
                            skipped += 1;
                            continue;
                        }
                        Err(e) => return Err(e.to_string()),
                    };
                    let closed = euler_closed_form(&g, &a, n).map_err(|e| e.to_string())?.chi;
                    ensure(closed == brute, || {
                        format!("{name} K={anchors:?} q={q} n={n}: formula {closed}, oracle {brute}")
                    })?;
                    checked += 1;
                }
            }
        }
    }
    let took = within(Duration::from_secs(60), start)?;
    Ok(format!("{checked} instances equal, {skipped} over budget, {took:.2?}"))
}

fn anchored_specialization() -> Outcome {
    let mut checked = 0;
    for k in 2..=4usize {
        let c = make_cycle(k).unwrap();
        let anchors = full_support(k);
        for n in k..=6usize {
            let got = euler_anchored(c.graph(), &anchors, n).map_err(|e| e.to_string())?.chi;
            let sign = if (n - k) % 2 == 0 { 1 } else { -1 };
            let want = BigInt::from(sign) * factorial(k) * stirling2(n as i64, k as i64).unwrap();
            ensure(got == want, || format!("k={k} n={n}: {got} != {want}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} cycle instances"))
}

fn concentration() -> Outcome {
    let mut checked = 0;
    for k in 2..=4usize {
        for p in subsets(k).into_iter().filter(|p| p.len() < k) {
            for q in 0..=p.len() {
                for n in 1..=4usize {
                    let h = hom(&full_complex(k, n, &p, q)?)?;
                    let label = || format!("k={k} P={p:?} q={q} n={n}");
                    if q > n {
                        ensure(h.betti_numbers().iter().all(|&b| b == 0), || {
                            format!("{}: expected zero complex", label())
                        })?;
                    } else {
                        ensure(h.is_concentrated_in(n - q), || {
                            format!("{}: betti {:?}", label(), h.betti_numbers())
                        })?;
                    }
                    if q == 0 {
                        let want = (k - p.len()).pow(n as u32);
                        ensure(h.betti(n) == want, || {
                            format!("{}: top betti {} != {want}", label(), h.betti(n))
                        })?;
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} proper-support complexes"))
}

fn quotient_decomposition() -> Outcome {
    let mut checked = 0;
    for k in 2..=3usize {
        for p in subsets(k) {
            for q in [1usize, 2] {
                if q > p.len() {
                    continue;
                }
                for n in 1..=4usize {
                    let quotient = quotient_complex(k, n, &p, q).map_err(|e| e.to_string())?;
                    record(format!("quotient P={p:?} q={q} k={k} n={n}"), &quotient);
                    let lhs = hom(&quotient)?.betti_numbers();
                    let mut rhs = vec![0; n + 1];
                    for s in subsets(k) {
                        if s.len() != q - 1 || !s.iter().all(|i| p.contains(i)) {
                            continue;
                        }
                        let part = hom(&full_complex(k, n, &s, q - 1)?)?;
                        for (acc, b) in rhs.iter_mut().zip(part.betti_numbers()) {
                            *acc += b;
                        }
                    }
                    ensure(lhs == rhs, || {
                        format!("k={k} P={p:?} q={q} n={n}: quotient {lhs:?}, summands {rhs:?}")
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} quotients"))
}

fn integrity() -> Outcome {
    BUILT.with(|b| {
        let built = b.borrow();
        ensure(!built.is_empty(), || "no complexes were recorded".into())?;
        let mut chi_checks = 0;
        for c in built.iter() {
            ensure(c.boundary_squared_zero, || format!("{}: boundary squared nonzero", c.label))?;
            if let Some((chain, closed)) = &c.chi {
                ensure(chain == closed, || {
                    format!("{}: alternating rank sum {chain} != closed form {closed}", c.label)
                })?;
                chi_checks += 1;
            }
        }
        Ok(format!("{} complexes, {chi_checks} Euler checks", built.len()))
    })
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 torus baseline", torus_baseline),
        ("2 Betti numbers on the full cycle grid", betti_grid),
        ("3 spot values", spot_values),
        ("4 Euler formula vs brute force", euler_formula_vs_oracle),
        ("5 anchored specialization", anchored_specialization),
        ("6 concentration for proper supports", concentration),
        ("7 quotient decomposition", quotient_decomposition),
        ("8 chain-complex integrity", integrity),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
