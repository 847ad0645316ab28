use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write as _};
use std::time::Instant;

use anchorhom::combinatorics::{binomial, factorial, stirling2};
use anchorhom::complex::{
    build_complex_with, full_support, quotient_complex_with, BuildOptions, ChainComplex,
    ComplexKind, DEFAULT_GENERATOR_BUDGET,
};
use anchorhom::euler::{
    euler_anchored, euler_brute_force, euler_closed_form, euler_cycle_generalized, EulerMethod,
    EulerReport, DEFAULT_TUPLE_BUDGET,
};
use anchorhom::graph::{make_cycle, validate_for_euler, AnchorSpec, Graph, GraphFile};
use anchorhom::homology::{betti_closed_form, euler_poincare, homology, HomologyResult};
use anchorhom::Error;
use num_bigint::BigInt;
use rayon::prelude::*;

use crate::report::{
    CaseSummary, Check, CliError, EulerSource, HomologyRecord, MethodChoice, Params, Results,
    RunReport, Skipped, Status,
};
use crate::{Cli, Command, EulerArgs, HomologyArgs, VerifyArgs, BUDGET_ENV};

type CliResult<T> = Result<T, CliError>;

/// Runs one command. `argv` is echoed into the report.
pub fn run(cli: Cli, argv: Vec<String>) -> CliResult<RunReport> {
    let start = Instant::now();
    let (params, results, checks, skipped) = match cli.command {
        Command::Homology(args) => cmd_homology(args)?,
        Command::Euler(args) => cmd_euler(args)?,
        Command::Verify(args) => cmd_verify(args)?,
    };
    Ok(RunReport {
        command: argv,
        params,
        results,
        passed: checks.iter().all(|c| c.pass),
        checks,
        skipped,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

type Parts = (Params, Results, Vec<Check>, Vec<Skipped>);

fn budget(flag: Option<u64>) -> CliResult<Option<u64>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{BUDGET_ENV} must be a non-negative integer, got {s:?}"))),
        Err(_) => Ok(None),
    }
}

fn labels(p: &BTreeSet<usize>) -> String {
    let inner: Vec<String> = p.iter().map(|v| (v + 1).to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

/// 1-based labels to 0-based indices.
fn parse_support(k: usize, given: Option<Vec<usize>>) -> CliResult<Vec<usize>> {
    let Some(given) = given else {
        return Ok(full_support(k));
    };
    let mut set = BTreeSet::new();
    for label in given {
        if label == 0 || label > k {
            return Err(CliError::Usage(format!(
                "support label {label} is outside 1..={k}"
            )));
        }
        set.insert(label - 1);
    }
    Ok(set.into_iter().collect())
}

fn build_options(max_generators: u128) -> BuildOptions {
    BuildOptions {
        verify: true,
        max_generators,
    }
}

fn cmd_homology(args: HomologyArgs) -> CliResult<Parts> {
    let support = parse_support(args.k, args.support)?;
    let budget = budget(args.budget)?.unwrap_or(DEFAULT_GENERATOR_BUDGET as u64);
    let c = build_complex_with(args.k, args.n, &support, args.q, &build_options(budget.into()))?;
    let h = homology(&c)?;
    if let Some(path) = &args.dump_matrices {
        let io_err = |source| CliError::Io {
            path: path.display().to_string(),
            source,
        };
        let mut out = BufWriter::new(fs::File::create(path).map_err(io_err)?);
        c.write_matrices(&mut out).map_err(io_err)?;
        out.flush().map_err(io_err)?;
    }
    let checks = homology_checks("", &c, &h)?;
    let params = Params::Homology {
        k: args.k,
        n: args.n,
        q: args.q,
        support: support.iter().map(|v| v + 1).collect(),
        budget,
    };
    let results = Results {
        homology: Some(record(&c, h)),
        ..Results::default()
    };
    Ok((params, results, checks, Vec::new()))
}

fn record(c: &ChainComplex, h: HomologyResult) -> HomologyRecord {
    HomologyRecord {
        kind: c.kind(),
        support: c.support().iter().map(|v| v + 1).collect(),
        ranks: c.ranks(),
        homology: h,
    }
}

/// Compares computed homology with what the closed forms predict.
///
/// `P = Z_k`, `q ≥ 1`: every Betti number against the closed form.
/// `P = Z_k`, `q = 0`: the torus, `β_i = C(n,i)`.
/// Otherwise: homology vanishes outside degree `n - q`, and for `q = 0` the
/// top Betti number is `(k - |P|)^n`.
fn homology_checks(prefix: &str, c: &ChainComplex, h: &HomologyResult) -> CliResult<Vec<Check>> {
    let (k, n, q) = (c.k(), c.n(), c.q());
    let full = c.support().len() == k && c.kind() == ComplexKind::Full;
    let betti = |d: usize| BigInt::from(h.betti(d));
    let mut checks = Vec::new();
    if full && q >= 1 && q <= n {
        let expected = betti_closed_form(k, n, q)?;
        for d in 0..=n {
            let want = expected.get(d).cloned().unwrap_or_default();
            checks.push(Check::equal(format!("{prefix}betti_{d}"), want, betti(d)));
        }
        let chi = euler_cycle_generalized(k, n, q)?.chi;
        checks.push(Check::equal(
            format!("{prefix}chain_euler_vs_closed_form"),
            chi,
            c.alternating_rank_sum(),
        ));
    } else if full && q == 0 {
        for d in 0..=n {
            let want = binomial(n as i64, d as i64)?;
            checks.push(Check::equal(format!("{prefix}torus_betti_{d}"), want, betti(d)));
        }
    } else if c.kind() == ComplexKind::Full {
        let top = n.checked_sub(q);
        for d in (0..=n).filter(|&d| Some(d) != top) {
            checks.push(Check::equal(
                format!("{prefix}vanishing_betti_{d}"),
                BigInt::default(),
                betti(d),
            ));
        }
        if q == 0 {
            let want = int_pow(k - c.support().len(), n);
            checks.push(Check::equal(format!("{prefix}top_betti_{n}"), want, betti(n)));
        }
    }
    let torsion: usize = h.degrees.iter().map(|d| d.torsion.len()).sum();
    checks.push(Check::equal(format!("{prefix}torsion_coefficients"), 0, torsion));
    checks.push(Check::equal(
        format!("{prefix}euler_poincare"),
        c.alternating_rank_sum(),
        euler_poincare(h),
    ));
    Ok(checks)
}

fn int_pow(base: usize, exp: usize) -> BigInt {
    (0..exp).fold(BigInt::from(1), |acc, _| acc * base)
}

fn cmd_euler(args: EulerArgs) -> CliResult<Parts> {
    let (source, g, anchors) = match (&args.graph, args.cycle) {
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            let file = GraphFile::from_json(&text)?;
            let g = file.graph()?;
            let anchors = file.anchors.clone();
            let source = EulerSource::Graph {
                path: path.display().to_string(),
                graph: file,
            };
            (source, g, anchors)
        }
        (None, Some(k)) => {
            let c = make_cycle(k)?;
            (EulerSource::Cycle { k }, c.graph().clone(), full_support(k))
        }
        _ => return Err(CliError::Usage("give exactly one of --graph and --cycle".into())),
    };
    let q = match (&source, args.q) {
        (_, Some(q)) => q,
        (EulerSource::Graph { graph, .. }, None) => graph.q,
        (EulerSource::Cycle { .. }, None) => {
            return Err(CliError::Usage("--q is required with --cycle".into()))
        }
    };
    let a = AnchorSpec::new(anchors, q);
    if q >= 1 {
        validate_for_euler(&g, &a, args.n).into_result()?;
    } else {
        a.check_against(&g)?;
    }
    let budget = budget(args.budget)?.unwrap_or(DEFAULT_TUPLE_BUDGET as u64);

    let mut reports = Vec::new();
    let mut checks = Vec::new();
    if matches!(args.method, MethodChoice::Formula | MethodChoice::Both) {
        let r = euler_closed_form(&g, &a, args.n)?;
        if r.method == EulerMethod::ClosedForm {
            checks.push(Check::equal("terms_recombine", r.chi.clone(), r.recombine_terms()));
        }
        reports.push(r);
    }
    if matches!(args.method, MethodChoice::Brute | MethodChoice::Both) {
        reports.push(euler_brute_force(&g, &a, args.n, budget.into())?);
    }
    if let [formula, brute] = &reports[..] {
        checks.push(Check::equal("formula_vs_brute_force", formula.chi.clone(), brute.chi.clone()));
    }
    let params = Params::Euler {
        source,
        n: args.n,
        q,
        method: args.method,
        budget,
    };
    let results = Results {
        euler: reports,
        ..Results::default()
    };
    Ok((params, results, checks, Vec::new()))
}

#[derive(Debug, Clone)]
enum Case {
    Torus { k: usize, n: usize },
    Grid { k: usize, n: usize, q: usize },
    Support { k: usize, n: usize, p: Vec<usize>, q: usize },
    Quotient { k: usize, n: usize, p: Vec<usize>, q: usize },
    Oracle { graph: usize, anchors: Vec<usize>, q: usize, n: usize },
    Anchored { k: usize, n: usize },
}

struct Budgets {
    generators: u128,
    tuples: u128,
}

fn subsets(k: usize) -> Vec<Vec<usize>> {
    (0u64..1 << k)
        .map(|m| (0..k).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Non-tree graphs used to test the Euler formula against brute force.
fn oracle_graphs(kmax: usize) -> Vec<(String, Graph)> {
    let mut graphs: Vec<(String, Graph)> = (2..=kmax.max(4))
        .map(|k| (format!("C{k}"), make_cycle(k).unwrap().graph().clone()))
        .collect();
    let fixed = [
        ("theta", 2, vec![(0, 1), (0, 1), (0, 1)]),
        ("C3+pendant", 4, vec![(0, 1), (1, 2), (2, 0), (0, 3)]),
        ("K4", 4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
    ];
    for (name, v, edges) in fixed {
        graphs.push((name.to_string(), Graph::new(v, edges).unwrap()));
    }
    graphs
}

fn grid(kmax: usize, nmax: usize, graphs: &[(String, Graph)]) -> Vec<Case> {
    let mut cases = Vec::new();
    for k in 2..=kmax {
        for n in 2..=nmax {
            cases.push(Case::Torus { k, n });
        }
    }
    for k in 2..=kmax {
        for q in 1..=k {
            for n in q.max(2)..=nmax {
                cases.push(Case::Grid { k, n, q });
            }
        }
    }
    for k in 2..=kmax {
        for p in subsets(k).into_iter().filter(|p| p.len() < k) {
            for q in 0..=p.len() {
                for n in 1..=nmax {
                    cases.push(Case::Support { k, n, p: p.clone(), q });
                }
            }
        }
    }
    for k in 2..=kmax {
        for p in subsets(k) {
            for q in (1..=2).filter(|&q| q <= p.len()) {
                for n in 1..=nmax {
                    cases.push(Case::Quotient { k, n, p: p.clone(), q });
                }
            }
        }
    }
    for (i, (_, g)) in graphs.iter().enumerate() {
        for anchors in subsets(g.vertex_count()) {
            if anchors.is_empty() || anchors.len() > 3 {
                continue;
            }
            for q in 1..=anchors.len() {
                for n in q..=nmax {
                    cases.push(Case::Oracle {
                        graph: i,
                        anchors: anchors.clone(),
                        q,
                        n,
                    });
                }
            }
        }
    }
    for k in 2..=kmax {
        for n in k..=nmax {
            cases.push(Case::Anchored { k, n });
        }
    }
    cases
}

fn case_label(case: &Case, graphs: &[(String, Graph)]) -> String {
    let set = |p: &[usize]| labels(&p.iter().copied().collect());
    match case {
        Case::Torus { k, n } => format!("torus k={k} n={n}"),
        Case::Grid { k, n, q } => format!("grid k={k} n={n} q={q}"),
        Case::Support { k, n, p, q } => format!("support k={k} n={n} q={q} P={}", set(p)),
        Case::Quotient { k, n, p, q } => format!("quotient k={k} n={n} q={q} P={}", set(p)),
        Case::Oracle { graph, anchors, q, n } => {
            format!("euler {} K={} q={q} n={n}", graphs[*graph].0, set(anchors))
        }
        Case::Anchored { k, n } => format!("anchored k={k} n={n}"),
    }
}

fn run_case(case: &Case, prefix: &str, graphs: &[(String, Graph)], b: &Budgets) -> CliResult<Vec<Check>> {
    let opts = build_options(b.generators);
    let full = |k, n, p: &[usize], q| -> CliResult<Vec<Check>> {
        let c = build_complex_with(k, n, p, q, &opts)?;
        let h = homology(&c)?;
        homology_checks(prefix, &c, &h)
    };
    match case {
        Case::Torus { k, n } => full(*k, *n, &full_support(*k), 0),
        Case::Grid { k, n, q } => full(*k, *n, &full_support(*k), *q),
        Case::Support { k, n, p, q } => full(*k, *n, p, *q),
        Case::Quotient { k, n, p, q } => {
            let c = quotient_complex_with(*k, *n, p, *q, &opts)?;
            let lhs = homology(&c)?;
            let mut rhs = vec![0usize; n + 1];
            for s in subsets(*k) {
                if s.len() != q - 1 || !s.iter().all(|i| p.contains(i)) {
                    continue;
                }
                let part = homology(&build_complex_with(*k, *n, &s, q - 1, &opts)?)?;
                for (acc, b) in rhs.iter_mut().zip(part.betti_numbers()) {
                    *acc += b;
                }
            }
            Ok((0..=*n)
                .map(|d| Check::equal(format!("{prefix}summed_betti_{d}"), rhs[d], lhs.betti(d)))
                .collect())
        }
        Case::Oracle { graph, anchors, q, n } => {
            let g = &graphs[*graph].1;
            let a = AnchorSpec::new(anchors.iter().copied(), *q);
            let brute = euler_brute_force(g, &a, *n, b.tuples)?;
            let formula = euler_closed_form(g, &a, *n)?;
            Ok(vec![Check::equal(
                format!("{prefix}formula_vs_brute_force"),
                formula.chi,
                brute.chi,
            )])
        }
        Case::Anchored { k, n } => {
            let c = make_cycle(*k)?;
            let got: EulerReport = euler_anchored(c.graph(), &full_support(*k), *n)?;
            let sign = if (n - k) % 2 == 0 { 1 } else { -1 };
            let want = BigInt::from(sign) * factorial(*k) * stirling2(*n as i64, *k as i64)?;
            let general = euler_cycle_generalized(*k, *n, *k)?.chi;
            Ok(vec![
                Check::equal(format!("{prefix}signed_surjections"), want, got.chi.clone()),
                Check::equal(format!("{prefix}generalized_at_q_eq_k"), general, got.chi),
            ])
        }
    }
}

enum CaseOutcome {
    Ran(Vec<Check>),
    Skipped(String),
}

fn cmd_verify(args: VerifyArgs) -> CliResult<Parts> {
    if args.kmax < 2 || args.nmax < 2 {
        return Err(CliError::Usage("verify needs --kmax >= 2 and --nmax >= 2".into()));
    }
    let budget = budget(args.budget)?;
    let budgets = Budgets {
        generators: budget.map_or(DEFAULT_GENERATOR_BUDGET, u128::from),
        tuples: budget.map_or(DEFAULT_TUPLE_BUDGET, u128::from),
    };
    let graphs = oracle_graphs(args.kmax);
    let cases = grid(args.kmax, args.nmax, &graphs);
    let outcomes: Vec<(String, CaseOutcome)> = cases
        .par_iter()
        .map(|case| {
            let label = case_label(case, &graphs);
            let prefix = format!("{label}: ");
            let outcome = match run_case(case, &prefix, &graphs, &budgets) {
                Ok(checks) => CaseOutcome::Ran(checks),
                Err(CliError::Core(e @ Error::Resource { .. })) => CaseOutcome::Skipped(e.to_string()),
                // anything else is a finding about this case, not a reason to stop the grid
                Err(e) => CaseOutcome::Ran(vec![Check::equal(format!("{prefix}errors ({e})"), 0, 1)]),
            };
            (label, outcome)
        })
        .collect();

    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    let mut summaries = Vec::new();
    for (case, outcome) in outcomes {
        match outcome {
            CaseOutcome::Ran(case_checks) => {
                let failed = case_checks.iter().filter(|c| !c.pass).count();
                summaries.push(CaseSummary {
                    case,
                    status: if failed == 0 { Status::Pass } else { Status::Fail },
                    checks: case_checks.len(),
                    failed,
                });
                checks.extend(case_checks);
            }
            CaseOutcome::Skipped(reason) => {
                summaries.push(CaseSummary {
                    case: case.clone(),
                    status: Status::Skipped,
                    checks: 0,
                    failed: 0,
                });
                skipped.push(Skipped { case, reason });
            }
        }
    }
    let params = Params::Verify {
        kmax: args.kmax,
        nmax: args.nmax,
        budget,
    };
    let results = Results {
        cases: summaries,
        ..Results::default()
    };
    Ok((params, results, checks, skipped))
}

/// Short human-readable account of a report, with 1-based labels.
pub fn summary(r: &RunReport) -> String {
    let mut s = String::new();
    match &r.params {
        Params::Homology { k, n, q, support, .. } => {
            let p: BTreeSet<usize> = support.iter().map(|v| v - 1).collect();
            let _ = write!(s, "homology k={k} n={n} q={q} P={}", labels(&p));
            if let Some(rec) = &r.results.homology {
                let betti: Vec<String> = rec.homology.betti_numbers().iter().map(|b| b.to_string()).collect();
                let _ = write!(s, ": betti ({})", betti.join(", "));
                for d in rec.homology.degrees.iter().filter(|d| !d.torsion.is_empty()) {
                    let t: Vec<String> = d.torsion.iter().map(|t| format!("Z/{t}")).collect();
                    let _ = write!(s, "; torsion in degree {}: {}", d.dim, t.join(" + "));
                }
            }
        }
        Params::Euler { n, q, .. } => {
            let _ = write!(s, "euler n={n} q={q}:");
            for e in &r.results.euler {
                let method = match e.method {
                    EulerMethod::ClosedForm => "formula",
                    EulerMethod::BruteForce => "brute force",
                    EulerMethod::ProductFormula => "product formula",
                };
                let _ = write!(s, " {method} {}", e.chi);
            }
        }
        Params::Verify { kmax, nmax, .. } => {
            let count = |st| r.results.cases.iter().filter(|c| c.status == st).count();
            let _ = write!(
                s,
                "verify kmax={kmax} nmax={nmax}: {} cases pass, {} fail, {} skipped",
                count(Status::Pass),
                count(Status::Fail),
                count(Status::Skipped)
            );
        }
    }
    let passing = r.checks.iter().filter(|c| c.pass).count();
    let _ = write!(s, "\n{passing} of {} checks pass", r.checks.len());
    for c in r.failed_checks() {
        let _ = write!(s, "\nFAIL {}: expected {}, got {}", c.name, c.expected, c.actual);
    }
    for sk in &r.skipped {
        let _ = write!(s, "\nskipped {}: {}", sk.case, sk.reason);
    }
    s
}
