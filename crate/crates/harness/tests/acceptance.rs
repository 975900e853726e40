//! Acceptance checks. Prints one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_FAILING` are measured and reported like every
//! other criterion, but their failure does not fail the target; every other
//! failure exits nonzero.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::Result;

use smk_core::estimator::{gamma_and_guesses, OptEstimate};
use smk_core::ElementSet;
use smk_harness::suites::{
    adaptivity_suite, objective_suite, oracle_suite, quarter_suite, ratio_suite, sampling_suite, sweep_fractions,
    sweep_suite, RunChecks, Tally, BENCH_BUDGET, BENCH_SIZES, RATIO_TARGET,
};

const KNOWN_FAILING: &[u32] = &[10];
const SEED: u64 = 20240611;

struct Line {
    id: u32,
    name: &'static str,
    passed: bool,
    detail: String,
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, Duration)> {
    let start = Instant::now();
    let out = f()?;
    Ok((out, start.elapsed()))
}

fn failed(id: u32, name: &'static str, e: anyhow::Error) -> Line {
    Line {
        id,
        name,
        passed: false,
        detail: format!("error: {e:#}"),
    }
}

fn ratio(checks: &mut RunChecks) -> Result<Line> {
    let (report, took) = timed(|| ratio_suite(200, SEED))?;
    checks.merge(report.checks.clone());
    let worst = report
        .rows
        .iter()
        .min_by(|a, b| a.ratio.lower().total_cmp(&b.ratio.lower()))
        .expect("twelve rows");
    let mean = report.rows.iter().map(|r| r.ratio.mean).sum::<f64>() / report.rows.len() as f64;
    let in_time = took <= Duration::from_secs(600);
    Ok(Line {
        id: 1,
        name: "approximation ratio vs brute force",
        passed: report.passed() && in_time,
        detail: format!(
            "12 instances x 200 runs; worst lower 99% bound {:.4} ({}) vs target {RATIO_TARGET:.5}; mean ratio over instances {mean:.4}; {:.1}s",
            worst.ratio.lower(),
            worst.label,
            took.as_secs_f64()
        ),
    })
}

fn sampling() -> Result<(Line, Line)> {
    let (report, took) = timed(|| sampling_suite(300, SEED))?;
    let in_time = took <= Duration::from_secs(120);
    let sets: Vec<String> = report
        .levels
        .iter()
        .map(|l| format!("θ={:.3}: {:.3} vs {:.3}", l.theta, l.set.mean_gain, l.set.mean_gain - l.set.excess.mean))
        .collect();
    let set_line = Line {
        id: 2,
        name: "threshold sampling: value per unit cost of the batch",
        passed: report.sets_passed() && in_time,
        detail: format!("300 calls x 3 levels, mean f(A) vs (1-ε)²θ·mean c(A): {}; {:.1}s", sets.join(", "), took.as_secs_f64()),
    };
    let positions: usize = report.levels.iter().map(|l| l.positions.len()).sum();
    let worst = report
        .levels
        .iter()
        .flat_map(|l| l.positions.iter().map(move |(i, s)| (l.theta, *i, s)))
        .min_by(|a, b| a.2.excess.upper().total_cmp(&b.2.excess.upper()));
    let worst = worst
        .map(|(t, i, s)| format!("tightest: θ={t:.3} position {i}, mean excess {:.4} (upper 99% {:.4})", s.excess.mean, s.excess.upper()))
        .unwrap_or_else(|| "no position reached 30 samples".into());
    let pos_line = Line {
        id: 3,
        name: "threshold sampling: per-position gain",
        passed: report.positions_passed(),
        detail: format!("{positions} positions with >=30 samples; {worst}"),
    };
    Ok((set_line, pos_line))
}

fn adaptivity(checks: &mut RunChecks) -> Result<Line> {
    let (report, took) = timed(|| adaptivity_suite(&BENCH_SIZES, 0.2, BENCH_BUDGET, 3, SEED))?;
    checks.merge(report.checks.clone());
    let pts: Vec<String> = report.points.iter().map(|(n, r)| format!("{n}:{r:.1}")).collect();
    Ok(Line {
        id: 4,
        name: "adaptive rounds grow like log n",
        passed: report.passed() && took <= Duration::from_secs(900),
        detail: format!(
            "ER(p=0.2) cut, {BENCH_BUDGET:?}, rounds {}; R² {:.4} (>=0.9), growth {:.3} (<= {:.0}); {:.1}s",
            pts.join(" "),
            report.fit.r_squared,
            report.growth,
            report.growth_limit,
            took.as_secs_f64()
        ),
    })
}

fn sweep(checks: &mut RunChecks) -> Result<Line> {
    let (report, took) = timed(|| sweep_suite(500, 0.2, &sweep_fractions(), 10, SEED))?;
    checks.merge(report.checks.clone());
    let last = report.rows.last().expect("grid");
    let ratios: Vec<String> = report.rows.iter().map(|r| format!("{:.2}", r.ast_value / r.greedy_value)).collect();
    Ok(Line {
        id: 10,
        name: "ER(500, 0.2) cut sweep against density greedy",
        passed: report.passed(),
        detail: format!(
            "AST >= greedy on {}/{} budgets (value ratios {}); rounds at b={:.2}: AST {:.1} vs greedy {}; {:.1}s",
            report.value_wins(),
            report.rows.len(),
            ratios.join(" "),
            last.fraction,
            last.ast_rounds,
            last.greedy_rounds,
            took.as_secs_f64()
        ),
    })
}

fn parameters() -> Result<Line> {
    let est = OptEstimate {
        s0: ElementSet::new(),
        value: 1.0,
        assumed_factor: 0.005,
    };
    let grid = gamma_and_guesses(&est, 1.0 / 7.0, 0.1, 0.12, 1.0)?;
    Ok(Line {
        id: 6,
        name: "guess count and count cap",
        passed: grid.guesses == 77 && grid.max_count == 3950,
        detail: format!("Δ = {}, M = {}", grid.guesses, grid.max_count),
    })
}

fn objectives() -> Result<Line> {
    let checks = objective_suite(SEED)?;
    let parts: Vec<String> = checks
        .iter()
        .map(|c| {
            format!(
                "{}: {} triples worst gap {:.1e}, {} sets worst error {:.1e}, examples {}",
                c.name,
                c.triples,
                c.worst_submodular_gap,
                c.sets,
                c.worst_incremental_error,
                if c.examples.ok() { "ok" } else { "FAILED" }
            )
        })
        .collect();
    Ok(Line {
        id: 8,
        name: "objective correctness",
        passed: checks.iter().all(|c| c.passed()),
        detail: parts.join("; "),
    })
}

fn quarter() -> Result<Line> {
    let rows = quarter_suite(200, SEED)?;
    let parts: Vec<String> = rows
        .iter()
        .map(|r| format!("{}: mean {:.3} vs OPT/4 {:.3}", r.label, r.value.mean, r.opt / 4.0))
        .collect();
    let rounds: usize = rows.iter().map(|r| r.round_violations).sum();
    Ok(Line {
        id: 9,
        name: "unconstrained step quarter bound",
        passed: rows.iter().all(|r| r.passed()),
        detail: format!("200 seeds each; {}; calls not using exactly one round: {rounds}", parts.join(", ")),
    })
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut checks = RunChecks::default();
    let mut lines = Vec::new();

    lines.push(ratio(&mut checks).unwrap_or_else(|e| failed(1, "approximation ratio vs brute force", e)));
    match sampling() {
        Ok((a, b)) => lines.extend([a, b]),
        Err(e) => {
            let msg = format!("{e:#}");
            lines.push(failed(2, "threshold sampling: value per unit cost of the batch", anyhow::anyhow!(msg.clone())));
            lines.push(failed(3, "threshold sampling: per-position gain", anyhow::anyhow!(msg)));
        }
    }
    lines.push(adaptivity(&mut checks).unwrap_or_else(|e| failed(4, "adaptive rounds grow like log n", e)));
    lines.push(sweep(&mut checks).unwrap_or_else(|e| failed(10, "ER(500, 0.2) cut sweep against density greedy", e)));
    lines.push(parameters().unwrap_or_else(|e| failed(6, "guess count and count cap", e)));
    lines.push(objectives().unwrap_or_else(|e| failed(8, "objective correctness", e)));
    lines.push(quarter().unwrap_or_else(|e| failed(9, "unconstrained step quarter bound", e)));

    let prefix = &checks.prefix_rounds;
    lines.push(Line {
        id: 5,
        name: "prefix phase uses exactly two rounds",
        passed: prefix.ok() && prefix.runs > 0,
        detail: format!("over every AST run of suites 1, 4 and 10: {prefix}"),
    });
    let oracle = oracle_suite(SEED).unwrap_or_else(|e| Tally {
        runs: 0,
        violations: vec![format!("error: {e:#}")],
    });
    lines.push(Line {
        id: 7,
        name: "structural invariants",
        passed: checks.invariants.ok() && checks.invariants.runs > 0 && oracle.ok(),
        detail: format!("AST runs: {}; batch/sequential and ledger checks: {oracle}", checks.invariants),
    });

    lines.sort_by_key(|l| l.id);
    let mut unexpected = 0;
    for l in &lines {
        let known = KNOWN_FAILING.contains(&l.id);
        let verdict = match (l.passed, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        if !l.passed && !known {
            unexpected += 1;
        }
        println!("criterion {:>2} [{verdict}] {}: {}", l.id, l.name, l.detail);
    }
    let passed = lines.iter().filter(|l| l.passed).count();
    println!(
        "acceptance: {passed}/{} criteria pass, {unexpected} unexpected failures, {:.1}s",
        lines.len(),
        start.elapsed().as_secs_f64()
    );
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
