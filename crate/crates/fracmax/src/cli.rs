//! Subcommands and the exit-code contract: 0 pass, 1 verification failure,
//! 2 usage or configuration error (no output files written).

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use log::{error, info, warn};

use fracmax_core::caputo::{all_representations, caputo_l1, AnalyticFunction, TimeFunction};
use fracmax_core::solver::{compute_cl, solve, Boundaries, BoundaryCondition, ProblemSpec};
use fracmax_core::{FractionalOrder, TemporalMesh, TimeSamples};

use crate::config::{ConfigError, RunConfig};
use crate::output::{num, Outputs, Table};
use crate::suites::{self, SweepSettings, SUITES};

#[derive(Debug, Parser)]
#[command(
    name = "fracmax",
    version,
    about = "Time-fractional kernels, solver and maximum-principle checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML run configuration; defaults apply to every table left out.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "fracmax-out")]
    pub out: PathBuf,
    /// Base seed of the randomized sweeps.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Tolerance override for the checks.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Worker threads for the sweeps (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate ω, Λ, Λ∞ and Λ̃∞ over the `[kernels]` grid.
    Kernels,
    /// Compare the Caputo evaluators and L1 on the `[caputo]` test set.
    Caputo,
    /// Solve the `[problem]` table.
    Solve,
    /// Run verification suites.
    Verify {
        /// Suite name or `all`; repeatable, comma-separated lists accepted.
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
    },
    /// Threshold probe and manufactured-solution convergence tables.
    Sweep {
        #[arg(long, value_enum, default_value_t = Study::All)]
        study: Study,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Study {
    Threshold,
    Convergence,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Pass,
    Fail,
    Usage,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            Self::Pass => 0,
            Self::Fail => 1,
            Self::Usage => 2,
        }
    }

    fn from_pass(ok: bool) -> Self {
        if ok {
            Self::Pass
        } else {
            Self::Fail
        }
    }
}

/// A validated run, ready to execute.
enum Plan {
    Kernels,
    Caputo {
        tol: f64,
    },
    Solve(Box<ProblemSpec>),
    Verify {
        suites: Vec<String>,
        settings: Box<SweepSettings>,
    },
    Sweep(Study),
}

fn plan(cli: &Cli, cfg: &mut RunConfig) -> Result<Plan, ConfigError> {
    let tol = cli.tol.or(cfg.tol);
    if let Some(t) = tol {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(ConfigError::new("--tol must be finite and >= 0"));
        }
        cfg.sweep.tol = t;
        cfg.probe.tol = t;
    }
    if cli.jobs == Some(0) {
        return Err(ConfigError::new("--jobs must be >= 1"));
    }
    Ok(match &cli.command {
        Command::Kernels => Plan::Kernels,
        Command::Caputo => Plan::Caputo {
            tol: tol.unwrap_or(1e-6),
        },
        Command::Solve => Plan::Solve(Box::new(cfg.problem_spec()?)),
        Command::Verify { suite } => {
            let requested = if suite.is_empty() { &cfg.sweep.suites } else { suite };
            let mut names = Vec::new();
            for name in requested {
                if name == "all" {
                    names.extend(SUITES.iter().map(|s| s.to_string()));
                } else if SUITES.contains(&name.as_str()) {
                    names.push(name.clone());
                } else {
                    return Err(ConfigError::new(format!(
                        "unknown suite {name:?} (expected one of {} or all)",
                        SUITES.join(", ")
                    )));
                }
            }
            let mut seen = std::collections::HashSet::new();
            names.retain(|n| seen.insert(n.clone()));
            Plan::Verify {
                suites: names,
                settings: Box::new(SweepSettings {
                    base_seed: cli.seed.or(cfg.seed).unwrap_or(0),
                    tol: cfg.sweep.tol,
                    sweep: cfg.sweep.clone(),
                }),
            }
        }
        Command::Sweep { study } => Plan::Sweep(*study),
    })
}

pub fn run(cli: &Cli) -> ExitStatus {
    crate::logging::init();
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_path(path),
        None => Ok(RunConfig::default()),
    };
    let planned = cfg.as_mut().map_err(|e| e.clone()).and_then(|c| plan(cli, c));
    let (cfg, plan) = match (cfg, planned) {
        (Ok(c), Ok(p)) => (c, p),
        (Err(e), _) | (_, Err(e)) => {
            let path = cli.config.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
            eprintln!("error: config {path}: {e}");
            return ExitStatus::Usage;
        }
    };

    if let Err(e) = crate::logging::attach_file(&cli.out.join("fracmax.log")) {
        eprintln!("error: cannot open log in {}: {e}", cli.out.display());
        return ExitStatus::Usage;
    }
    info!("fracmax {} {:?}", env!("CARGO_PKG_VERSION"), cli.command);
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            error!("thread pool: {e}");
            return ExitStatus::Usage;
        }
    };
    let started = Instant::now();
    let result = pool.install(|| execute(plan, &cfg));
    let status = match result {
        Ok((mut outputs, status)) => {
            outputs.summary.set("status", format!("{status:?}").to_lowercase());
            match outputs.write(&cli.out) {
                Ok(()) => status,
                Err(e) => {
                    error!("writing outputs to {}: {e}", cli.out.display());
                    ExitStatus::Usage
                }
            }
        }
        Err(e) => {
            error!("{e}");
            ExitStatus::Usage
        }
    };
    info!(
        "finished in {:.3} s with exit code {}",
        started.elapsed().as_secs_f64(),
        status.code()
    );
    crate::logging::detach_file();
    status
}

fn execute(plan: Plan, cfg: &RunConfig) -> Result<(Outputs, ExitStatus), fracmax_core::Error> {
    let mut out = Outputs::default();
    let status = match plan {
        Plan::Kernels => {
            let res = suites::kernels(&cfg.kernels);
            if let Some((name, table)) = &res.table {
                out.table(name, table);
            }
            out.summary
                .set("rows", res.table.as_ref().map_or(0, |(_, t)| t.rows.len()));
            out.summary.set("identities_passed", res.passed());
            ExitStatus::from_pass(res.passed())
        }
        Plan::Caputo { tol } => {
            let (table, worst) = caputo_table(cfg)?;
            out.table("caputo.csv", &table);
            out.summary.set("rows", table.rows.len());
            out.summary.set("worst_spread", num(worst));
            out.summary.set("tolerance", num(tol));
            ExitStatus::from_pass(worst <= tol)
        }
        Plan::Solve(problem) => {
            let started = Instant::now();
            let solution = solve(&problem)?;
            let elapsed = started.elapsed().as_secs_f64();
            let mut header = vec!["t".to_string()];
            header.extend((0..solution.width()).map(|i| format!("u_{i}")));
            let mut table = Table {
                header,
                ..Table::default()
            };
            for (n, row) in solution.rows().enumerate() {
                let mut cells = vec![num(problem.mesh.nodes()[n])];
                cells.extend(row.iter().map(|&v| num(v)));
                table.push(cells);
            }
            out.table("solution.csv", &table);
            let mut meta = crate::output::Summary::default();
            let g = &problem.grid;
            meta.set("left", num(g.left()));
            meta.set("right", num(g.right()));
            meta.set("intervals", g.intervals());
            meta.set("steps", problem.mesh.steps());
            meta.set("final_time", num(problem.mesh.final_time()));
            meta.set("grading", problem.mesh.grading().map_or("custom".into(), num));
            meta.set("operator", format!("{:?}", problem.operator).replace('\n', " "));
            meta.set("boundaries", boundary_label(&problem.boundaries));
            meta.set("lambda_bound", num(problem.coefficients.lambda_bound));
            meta.set("c_l", num(compute_cl(&problem.coefficients, g, &problem.mesh)?));
            let (max_u, (wx, wt)) = solution.max_with_witness();
            meta.set("max_u", num(max_u));
            meta.set("max_u_at", format!("{wx},{wt}"));
            if let Some(exact) = cfg.exact_solution() {
                let mut err = 0.0_f64;
                for (n, &t) in problem.mesh.nodes().iter().enumerate() {
                    for (i, &x) in g.nodes().iter().enumerate() {
                        err = err.max((solution.value(n, i) - exact.eval(x, t)).abs());
                    }
                }
                meta.set("max_error", num(err));
            }
            meta.set("elapsed_seconds", format!("{elapsed:.6}"));
            out.files.push(("solution.meta".into(), meta.render()));
            out.summary.set("rows", table.rows.len());
            out.summary.set("columns", table.header.len());
            ExitStatus::Pass
        }
        Plan::Verify {
            suites: names,
            settings,
        } => {
            let mut results = Vec::new();
            for name in &names {
                let started = Instant::now();
                let res = suites::run_suite(name, &settings, &cfg.kernels, &cfg.probe);
                let failed = res.failures().count();
                info!(
                    "suite {name}: {} cases, {} counted, {failed} failed in {:.2} s",
                    res.rows.len(),
                    res.counted(),
                    started.elapsed().as_secs_f64()
                );
                for f in res.failures() {
                    warn!(
                        "{} {} FAILED: seed {} witness (x={}, t={}) worst {:e} tol {:e} {}",
                        f.suite,
                        f.case,
                        f.report.instance_seed,
                        f.report.witness.0,
                        f.report.witness.1,
                        f.report.worst_violation,
                        f.report.tolerance_used,
                        f.report.notes.join("; ")
                    );
                }
                if let Some((file, table)) = &res.table {
                    out.table(file, table);
                }
                out.summary.set(&format!("{name}.cases"), res.rows.len());
                out.summary.set(&format!("{name}.failed"), failed);
                results.push(res);
            }
            out.table("verify.csv", &suites::verify_table(&results));
            let ok = results.iter().all(|r| r.passed());
            out.summary.set("base_seed", settings.base_seed);
            out.summary.set("tol", num(settings.tol));
            out.summary.set("passed", ok);
            ExitStatus::from_pass(ok)
        }
        Plan::Sweep(study) => {
            let mut ok = true;
            if matches!(study, Study::Threshold | Study::All) {
                let (table, passed) = suites::probe_table(&cfg.probe)?;
                out.table("threshold.csv", &table);
                out.summary.set("threshold.rows", table.rows.len());
                out.summary.set("threshold.passed", passed);
                ok &= passed;
            }
            if matches!(study, Study::Convergence | Study::All) {
                let c = &cfg.convergence;
                let table = suites::convergence_table(c.alpha, &c.sizes, &c.gradings)?;
                out.table("convergence.csv", &table);
                out.summary.set("convergence.rows", table.rows.len());
            }
            ExitStatus::from_pass(ok)
        }
    };
    Ok((out, status))
}

fn boundary_label(b: &Boundaries) -> String {
    match b {
        Boundaries::Periodic => "periodic".into(),
        Boundaries::Separated { left, right } => {
            let name = |c: &BoundaryCondition| match c {
                BoundaryCondition::Dirichlet { .. } => "dirichlet",
                BoundaryCondition::Robin { .. } => "robin",
            };
            format!("{}/{}", name(left), name(right))
        }
    }
}

/// One row per (function, α, μ, t); returns the largest spread between the
/// four continuous evaluators.
fn caputo_table(cfg: &RunConfig) -> Result<(Table, f64), fracmax_core::Error> {
    let c = &cfg.caputo;
    let mut t = Table::new(&[
        "function",
        "alpha",
        "mu",
        "t",
        "definition",
        "luchko",
        "transformed",
        "hat",
        "exact",
        "l1",
        "spread",
    ]);
    let mut worst = 0.0_f64;
    for name in &c.functions {
        let f = AnalyticFunction::from_name(name)
            .ok_or_else(|| fracmax_core::Error::Usage(format!("unknown function {name}")))?;
        for &alpha in &c.alphas {
            let order = FractionalOrder::new(alpha)?;
            for &time in &c.times {
                let mesh = TemporalMesh::graded(time, c.l1_steps, TemporalMesh::default_grading(alpha))?;
                let samples = TimeSamples::from_fn(mesh, |s| f.value(s))?;
                let l1 = caputo_l1(&samples, order, c.l1_steps)?;
                for &mu in &c.mus {
                    let r = all_representations(&f, time, order, mu)?;
                    worst = worst.max(r.spread());
                    t.push(vec![
                        name.clone(),
                        num(alpha),
                        num(mu),
                        num(time),
                        num(r.definition),
                        num(r.luchko),
                        num(r.transformed),
                        num(r.hat),
                        f.caputo_exact(time, alpha).map(num).unwrap_or_default(),
                        num(l1),
                        num(r.spread()),
                    ]);
                }
            }
        }
    }
    Ok((t, worst))
}
