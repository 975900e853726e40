use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};

use smk_harness::config::Settings;
use smk_harness::experiment::{run_experiment, run_sweep, Algorithm, ExperimentRecord};
use smk_harness::output::{series, write_csv, write_csv_to, write_svg_plot, PlotAxis};
use smk_harness::suites::{adaptivity_suite, ratio_suite, BenchBudget, BENCH_SIZES, RATIO_TARGET};

#[derive(Parser)]
#[command(name = "smk", version, about = "Submodular maximization under a knapsack constraint: experiments and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm over a budget grid.
    Run(Flags),
    /// Run several algorithms on the same instance and plot them.
    Sweep(Flags),
    /// Brute-force approximation-ratio suite on small instances.
    Verify {
        /// AST runs per instance.
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Adaptive rounds against n on Erdős–Rényi cut instances.
    BenchRounds {
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 0.2)]
        gen_p: f64,
        /// Fixed budget B at every size.
        #[arg(long, conflicts_with = "budget_frac")]
        budget: Option<f64>,
        /// Budget as a fraction of total cost instead of a fixed B.
        #[arg(long)]
        budget_frac: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Every flag is optional; unset flags fall back to `--config`, then to defaults.
#[derive(Args)]
struct Flags {
    /// `key = value` file applied before the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// ast, density_greedy, random_feasible (comma-separated for sweep).
    #[arg(long)]
    algorithm: Option<String>,
    /// revenue, cut or image_summ.
    #[arg(long)]
    objective: Option<String>,
    /// Edge list for cut and revenue.
    #[arg(long)]
    graph: Option<String>,
    /// Feature CSV for image_summ.
    #[arg(long)]
    features: Option<String>,
    #[arg(long)]
    gen_n: Option<String>,
    #[arg(long)]
    gen_p: Option<String>,
    #[arg(long)]
    gen_dim: Option<String>,
    /// Comma-separated fractions of the total cost.
    #[arg(long)]
    budget_fracs: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out_csv: Option<String>,
    /// Writes `<stem>.svg` for values and `<stem>-rounds.svg` for rounds.
    #[arg(long)]
    out_svg: Option<String>,
    /// greedy or singleton.
    #[arg(long)]
    estimator: Option<String>,
    /// one_minus_exp_neg or exp_minus_one (revenue costs).
    #[arg(long)]
    cost_rule: Option<String>,
    /// Write wall_ms = 0 so the CSV depends only on the seeds.
    #[arg(long)]
    deterministic: bool,
}

impl Flags {
    fn settings(&self) -> Result<Settings> {
        let mut s = Settings::default();
        if let Some(path) = &self.config {
            s.apply_file(path)?;
        }
        let pairs = [
            ("algorithm", &self.algorithm),
            ("objective", &self.objective),
            ("graph", &self.graph),
            ("features", &self.features),
            ("gen-n", &self.gen_n),
            ("gen-p", &self.gen_p),
            ("gen-dim", &self.gen_dim),
            ("budget-fracs", &self.budget_fracs),
            ("trials", &self.trials),
            ("epsilon", &self.epsilon),
            ("delta", &self.delta),
            ("alpha", &self.alpha),
            ("seed", &self.seed),
            ("out-csv", &self.out_csv),
            ("out-svg", &self.out_svg),
            ("estimator", &self.estimator),
            ("cost-rule", &self.cost_rule),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                s.set(key, v)?;
            }
        }
        if self.deterministic {
            s.deterministic = true;
        }
        Ok(s)
    }
}

fn emit(records: &[ExperimentRecord], settings: &Settings) -> Result<()> {
    match &settings.out_csv {
        Some(path) => {
            write_csv(records, path)?;
            eprintln!("wrote {} rows to {}", records.len(), path.display());
        }
        None => write_csv_to(records, io::stdout().lock())?,
    }
    if let Some(path) = &settings.out_svg {
        write_svg_plot(records, path, PlotAxis::Value)?;
        let rounds = path.with_file_name(format!(
            "{}-rounds.svg",
            path.file_stem().and_then(|s| s.to_str()).unwrap_or("plot")
        ));
        write_svg_plot(records, &rounds, PlotAxis::Rounds)?;
        eprintln!("wrote {} and {}", path.display(), rounds.display());
    }
    for (algorithm, pts) in series(records, PlotAxis::Value) {
        let cells: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.3}:{y:.4}")).collect();
        eprintln!("{algorithm:>16}  {}", cells.join("  "));
    }
    Ok(())
}

fn run(flags: &Flags) -> Result<()> {
    let settings = flags.settings()?;
    let [algorithm] = settings.algorithms[..] else {
        bail!("`run` takes a single algorithm; use `sweep` for several");
    };
    let records = run_experiment(&settings.spec(algorithm))?;
    emit(&records, &settings)
}

fn sweep(flags: &Flags) -> Result<()> {
    let mut settings = flags.settings()?;
    if flags.algorithm.is_none() && flags.config.is_none() {
        settings.algorithms = Algorithm::ALL.to_vec();
    }
    let records = run_sweep(&settings.spec(settings.algorithms[0]), &settings.algorithms)?;
    emit(&records, &settings)
}

fn verify(trials: usize, seed: u64) -> Result<bool> {
    let report = ratio_suite(trials, seed)?;
    println!("instance                 OPT        mean ratio  lower 99%");
    for row in &report.rows {
        println!(
            "{:<22} {:>10.4}  {:>10.4}  {:>9.4}  {}",
            row.label,
            row.opt,
            row.ratio.mean,
            row.ratio.lower(),
            if row.passed() { "ok" } else { "BELOW" }
        );
    }
    println!("target {RATIO_TARGET:.5}; invariants: {}; prefix rounds: {}", report.checks.invariants, report.checks.prefix_rounds);
    Ok(report.passed() && report.checks.invariants.ok() && report.checks.prefix_rounds.ok())
}

fn bench_rounds(trials: usize, p: f64, budget: Option<f64>, fraction: Option<f64>, seed: u64) -> Result<bool> {
    let budget = match (budget, fraction) {
        (_, Some(f)) => BenchBudget::Fraction(f),
        (Some(b), None) => BenchBudget::Absolute(b),
        (None, None) => smk_harness::suites::BENCH_BUDGET,
    };
    let report = adaptivity_suite(&BENCH_SIZES, p, budget, trials, seed)?;
    println!("budget {budget:?}, p = {p}");
    for (n, rounds) in &report.points {
        println!("n = {n:>5}  rounds = {rounds:.1}");
    }
    println!(
        "fit rounds = {:.2}·ln n + {:.2}, R² = {:.4}; growth {:.3} (limit {:.3})",
        report.fit.slope, report.fit.intercept, report.fit.r_squared, report.growth, report.growth_limit
    );
    Ok(report.passed() && report.checks.invariants.ok() && report.checks.prefix_rounds.ok())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run(flags) => run(flags).map(|()| true),
        Command::Sweep(flags) => sweep(flags).map(|()| true),
        Command::Verify { trials, seed } => verify(*trials, *seed),
        Command::BenchRounds {
            trials,
            gen_p,
            budget,
            budget_frac,
            seed,
        } => bench_rounds(*trials, *gen_p, *budget, *budget_frac, *seed),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("FAILED");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
