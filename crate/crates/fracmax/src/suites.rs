//! The verification suites behind `fracmax verify`, shared with the
//! acceptance tests.

use std::f64::consts::PI;

use rayon::prelude::*;

use fracmax_core::caputo::{MultitermSpec, TimeOperator};
use fracmax_core::kernels::{kernel_table, mu_threshold, mu_threshold_multiterm, mu_threshold_varorder};
use fracmax_core::solver::{field_fn, solve, space_fn, Boundaries, CoefficientFields, ProblemSpec};
use fracmax_core::special::gamma;
use fracmax_core::verify::{
    comparison_case, generate_instance, max_principle_case, probe_threshold, random_sector_case,
    verify_kernel_identities, verify_sector_inequality, BcKind, Classification, InstanceConfig, OperatorKind,
    ProbeFamily, ProbeRow, VerificationReport,
};
use fracmax_core::{FractionalOrder, SpatialGrid, TemporalMesh};

use crate::config::{parse_bc, parse_family, KernelGrid, ProbeConfig, SweepConfig};
use crate::output::{num, text, Table};

pub const SUITES: &[&str] = &[
    "kernels",
    "maxprinciple",
    "comparison",
    "multiterm",
    "varorder",
    "sector",
    "lemma",
    "thresholds",
];

/// One line of `verify.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseRow {
    pub suite: &'static str,
    pub case: String,
    pub report: VerificationReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub rows: Vec<CaseRow>,
    /// Extra per-suite table, e.g. the kernel residuals.
    pub table: Option<(String, Table)>,
}

impl SuiteResult {
    fn new(name: &'static str, rows: Vec<CaseRow>) -> Self {
        Self {
            name,
            rows,
            table: None,
        }
    }

    pub fn counted(&self) -> usize {
        self.rows.iter().filter(|r| r.report.is_counted()).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseRow> {
        self.rows.iter().filter(|r| r.report.is_counted() && !r.report.passed)
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }
}

/// An error inside a case is a failed case, so the sweep still reports the
/// seed that triggered it.
fn failed_case(seed: u64, err: impl std::fmt::Display) -> VerificationReport {
    let mut r = VerificationReport::new(f64::NAN, (0, 0), 0.0).with_note(format!("error: {err}"));
    r.instance_seed = seed;
    r
}

/// Settings shared by the instance sweeps.
#[derive(Debug, Clone)]
pub struct SweepSettings {
    pub base_seed: u64,
    pub tol: f64,
    pub sweep: SweepConfig,
}

impl SweepSettings {
    fn bcs(&self) -> Vec<BcKind> {
        // Validated when the config was read.
        self.sweep.bcs.iter().filter_map(|b| parse_bc(b).ok()).collect()
    }

    fn instance(&self, seed: u64, lambda: f64, operator: OperatorKind, bc: BcKind) -> InstanceConfig {
        let s = &self.sweep;
        let mut c = InstanceConfig::new(seed, lambda, operator, bc);
        c.intervals = s.intervals;
        c.steps = s.steps;
        c.final_time = s.final_time;
        c.grading = s.grading;
        c.roughness = s.roughness.to_core();
        c
    }

    /// `operators × λ × bc × seeds`, in that nesting order.
    fn grid(&self, operators: &[OperatorKind], seeds: u64) -> Vec<(String, InstanceConfig)> {
        let mut out = Vec::new();
        for op in operators {
            for &lambda in &self.sweep.lambdas {
                for bc in self.bcs() {
                    let label = format!("{} lambda={lambda} {}", op.label(), bc.as_str());
                    for k in 0..seeds {
                        let seed = self.base_seed.wrapping_add(k);
                        out.push((label.clone(), self.instance(seed, lambda, op.clone(), bc)));
                    }
                }
            }
        }
        out
    }

    fn run_cases(
        &self,
        suite: &'static str,
        cases: Vec<(String, InstanceConfig)>,
        check: fn(&InstanceConfig, f64) -> fracmax_core::Result<VerificationReport>,
    ) -> Vec<CaseRow> {
        cases
            .into_par_iter()
            .map(|(case, cfg)| CaseRow {
                suite,
                case,
                report: check(&cfg, self.tol).unwrap_or_else(|e| failed_case(cfg.seed, e)),
            })
            .collect()
    }

    fn single_orders(&self) -> Vec<OperatorKind> {
        self.sweep
            .alphas
            .iter()
            .map(|&alpha| OperatorKind::Single { alpha })
            .collect()
    }
}

pub fn kernels(grid: &KernelGrid) -> SuiteResult {
    let report = verify_kernel_identities(&grid.alphas, &grid.mus, &grid.times).unwrap_or_else(|e| failed_case(0, e));
    let mut res = SuiteResult::new(
        "kernels",
        vec![CaseRow {
            suite: "kernels",
            case: format!("{}x{}x{} grid", grid.alphas.len(), grid.mus.len(), grid.times.len()),
            report,
        }],
    );
    if let Ok(rows) = kernel_table(&grid.alphas, &grid.mus, &grid.times) {
        let mut t = Table::new(&[
            "alpha",
            "mu",
            "t",
            "omega",
            "lambda",
            "lambda_infty",
            "lambda_tilde",
            "identity_residual",
            "residual_limit",
            "passed",
        ]);
        for r in rows {
            let limit = 1e-8 * (1.0 + r.t.powf(-r.alpha));
            let ok = r.identity_residual.abs() <= limit && r.lambda_tilde >= 0.0 && r.lambda_tilde <= r.lambda_infty;
            t.push(vec![
                num(r.alpha),
                num(r.mu),
                num(r.t),
                num(r.omega),
                num(r.lambda),
                num(r.lambda_infty),
                num(r.lambda_tilde),
                num(r.identity_residual),
                num(limit),
                ok.to_string(),
            ]);
        }
        res.table = Some(("kernels.csv".into(), t));
    }
    res
}

pub fn max_principle(s: &SweepSettings) -> SuiteResult {
    let cases = s.grid(&s.single_orders(), s.sweep.seeds);
    SuiteResult::new("maxprinciple", s.run_cases("maxprinciple", cases, max_principle_case))
}

pub fn comparison(s: &SweepSettings) -> SuiteResult {
    let cases = s.grid(&s.single_orders(), s.sweep.seeds);
    SuiteResult::new("comparison", s.run_cases("comparison", cases, comparison_case))
}

pub fn multiterm_operators() -> Vec<OperatorKind> {
    vec![
        OperatorKind::Multiterm {
            orders: vec![0.9, 0.4],
            weights: vec![1.0, 1.0],
        },
        OperatorKind::Multiterm {
            orders: vec![1.0, 0.4],
            weights: vec![1.0, 1.0],
        },
    ]
}

/// Maximum-principle cases for two-term operators, plus a check that the
/// one-term composite reproduces the single-term solve bit for bit.
pub fn multiterm(s: &SweepSettings) -> SuiteResult {
    let cases = s.grid(&multiterm_operators(), s.sweep.extension_seeds);
    let mut rows = s.run_cases("multiterm", cases, max_principle_case);
    let bitwise: Vec<(String, InstanceConfig)> = s
        .single_orders()
        .into_iter()
        .flat_map(|op| {
            s.bcs().into_iter().map(move |bc| {
                let label = format!("ell1-bitwise {} {}", op.label(), bc.as_str());
                (label, s.instance(s.base_seed, 1.0, op.clone(), bc))
            })
        })
        .collect();
    rows.extend(s.run_cases("multiterm", bitwise, single_term_bitwise));
    SuiteResult::new("multiterm", rows)
}

/// Number of solution entries whose bits differ between the single-term
/// solve and the `ℓ = 1` composite with `q ≡ 1`; passes at 0.
pub fn single_term_bitwise(cfg: &InstanceConfig, _tol: f64) -> fracmax_core::Result<VerificationReport> {
    let p = generate_instance(cfg)?;
    let TimeOperator::Single(order) = p.operator else {
        return Err(fracmax_core::Error::Usage(
            "bitwise check needs a single-term instance".into(),
        ));
    };
    let composite = p.with_operator(TimeOperator::Multiterm(MultitermSpec::constant(vec![order], &[1.0])?));
    let (s1, s2) = (solve(&p)?, solve(&composite)?);
    let mut differing = 0usize;
    let mut witness = (0, 0);
    for (k, (u, v)) in s1.values().iter().zip(s2.values()).enumerate() {
        if u.to_bits() != v.to_bits() {
            if differing == 0 {
                witness = (k % s1.width(), k / s1.width());
            }
            differing += 1;
        }
    }
    let mut r = VerificationReport::new(differing as f64, witness, 0.0);
    r.instance_seed = cfg.seed;
    Ok(r)
}

pub fn varorder_operator() -> OperatorKind {
    OperatorKind::VarOrder {
        alpha0: 0.4,
        slope: 0.2,
        q: 1.0,
    }
}

pub fn varorder(s: &SweepSettings) -> SuiteResult {
    let cases = s.grid(&[varorder_operator()], s.sweep.extension_seeds);
    SuiteResult::new("varorder", s.run_cases("varorder", cases, max_principle_case))
}

/// Every fourth case has `b ≡ 0` and is checked at zero tolerance, which
/// asks for an exactly nonnegative left side.
pub fn sector(s: &SweepSettings) -> SuiteResult {
    let rows = (0..s.sweep.sector_cases)
        .into_par_iter()
        .map(|k| {
            let seed = s.base_seed.wrapping_add(k);
            let zero_b = k % 4 == 0;
            let tol = if zero_b { 0.0 } else { s.sweep.sector_tol };
            let mut report = random_sector_case(seed, s.sweep.sector_intervals, zero_b)
                .and_then(|c| verify_sector_inequality(&c.w, &c.coefficients, &c.grid, c.t, c.m_prime, tol))
                .unwrap_or_else(|e| failed_case(seed, e));
            report.instance_seed = seed;
            CaseRow {
                suite: "sector",
                case: if zero_b { "b=0".into() } else { "random b".into() },
                report,
            }
        })
        .collect();
    SuiteResult::new("sector", rows)
}

fn probe_report(row: &ProbeRow, steps: usize) -> VerificationReport {
    let mut r = VerificationReport::new(row.worst_excess, (0, row.witness_t0), 0.0).with_note(format!(
        "{} of {steps} t0 applicable; {} violations",
        row.applicable, row.violations
    ));
    r.classification = row.classification;
    r
}

/// Runs the single-time lemma at every `t₀` over a `μ` sweep around the
/// threshold; rows below the threshold are informational.
pub fn probe_rows(p: &ProbeConfig) -> fracmax_core::Result<(f64, Vec<ProbeRow>)> {
    let order = FractionalOrder::new(p.alpha)?;
    let mu_star = mu_threshold(p.lambda, order)?;
    let mus: Vec<f64> = p.mu_factors.iter().map(|f| f * mu_star).collect();
    let families: Vec<ProbeFamily> = p.families.iter().filter_map(|f| parse_family(f).ok()).collect();
    let mesh = TemporalMesh::graded(p.final_time, p.steps, p.grading)?;
    Ok((
        mu_star,
        probe_threshold(p.lambda, order, &families, &mus, &mesh, p.tol)?,
    ))
}

pub fn lemma(p: &ProbeConfig) -> SuiteResult {
    let rows = match probe_rows(p) {
        Ok((mu_star, rows)) => rows
            .iter()
            .map(|row| CaseRow {
                suite: "lemma",
                case: format!("mu={}*mu_star {}", row.mu / mu_star, row.family.label()),
                report: probe_report(row, p.steps),
            })
            .collect(),
        Err(e) => vec![CaseRow {
            suite: "lemma",
            case: "probe".into(),
            report: failed_case(0, e),
        }],
    };
    SuiteResult::new("lemma", rows)
}

/// Residual of one threshold and whether its defining condition flips
/// across `μ*(1 ∓ 1e-6)`.
struct ThresholdCheck {
    case: String,
    residual: f64,
    limit: f64,
    below_fails: bool,
    above_holds: bool,
}

impl ThresholdCheck {
    fn report(&self) -> VerificationReport {
        let mut worst = self.residual / self.limit;
        if !(self.below_fails && self.above_holds) {
            worst = f64::INFINITY;
        }
        VerificationReport::new(worst, (0, 0), 1.0).with_note(format!(
            "residual {:e}; fails below: {}; holds above: {}",
            self.residual, self.below_fails, self.above_holds
        ))
    }
}

const BOUNDARY_SHIFT: f64 = 1e-6;
const RESIDUAL_LIMIT: f64 = 1e-10;

fn threshold_checks() -> fracmax_core::Result<Vec<ThresholdCheck>> {
    let lambdas = [0.5, 1.0, 3.0];
    let mut out = Vec::new();
    for alpha in [0.25, 0.5, 0.75] {
        let order = FractionalOrder::new(alpha)?;
        for lambda in lambdas {
            let mu = mu_threshold(lambda, order)?;
            let cond = |m: f64| m.powf(alpha) >= lambda;
            out.push(ThresholdCheck {
                case: format!("single alpha={alpha} lambda={lambda}"),
                residual: (mu.powf(alpha) - lambda).abs(),
                limit: RESIDUAL_LIMIT * lambda.max(1.0),
                below_fails: !cond(mu * (1.0 - BOUNDARY_SHIFT)),
                above_holds: cond(mu * (1.0 + BOUNDARY_SHIFT)),
            });
        }
    }
    for orders in [[0.9, 0.4], [1.0, 0.4]] {
        let ords = orders
            .iter()
            .map(|&a| FractionalOrder::composite(a))
            .collect::<fracmax_core::Result<Vec<_>>>()?;
        for cq in [1.0, 2.0] {
            for lambda in lambdas {
                let mu = mu_threshold_multiterm(lambda, cq, &ords)?;
                // Worst admissible weights put all of C_q on the smallest μ^{α_i}.
                let margin = |m: f64| cq * orders.iter().map(|&a| m.powf(a)).fold(f64::INFINITY, f64::min);
                out.push(ThresholdCheck {
                    case: format!("multiterm orders={}+{} cq={cq} lambda={lambda}", orders[0], orders[1]),
                    residual: (margin(mu) - lambda).abs(),
                    limit: RESIDUAL_LIMIT * lambda.max(1.0),
                    below_fails: margin(mu * (1.0 - BOUNDARY_SHIFT)) <= lambda,
                    above_holds: margin(mu * (1.0 + BOUNDARY_SHIFT)) > lambda,
                });
            }
        }
    }
    for alpha0 in [0.4, 0.6] {
        for q0 in [0.0, 1.0, 2.0] {
            for lambda in lambdas {
                let mu = mu_threshold_varorder(lambda, q0, alpha0)?;
                let g = |m: f64| m + q0 * m.powf(alpha0);
                out.push(ThresholdCheck {
                    case: format!("varorder alpha0={alpha0} q0={q0} lambda={lambda}"),
                    residual: (g(mu) - lambda).abs(),
                    limit: RESIDUAL_LIMIT * lambda.max(1.0),
                    below_fails: g(mu * (1.0 - BOUNDARY_SHIFT)) <= lambda,
                    above_holds: g(mu * (1.0 + BOUNDARY_SHIFT)) > lambda,
                });
            }
        }
    }
    Ok(out)
}

pub fn thresholds() -> SuiteResult {
    let rows = match threshold_checks() {
        Ok(checks) => checks
            .into_iter()
            .map(|c| CaseRow {
                suite: "thresholds",
                report: c.report(),
                case: c.case,
            })
            .collect(),
        Err(e) => vec![CaseRow {
            suite: "thresholds",
            case: "setup".into(),
            report: failed_case(0, e),
        }],
    };
    SuiteResult::new("thresholds", rows)
}

/// Runs the named suite.
pub fn run_suite(name: &str, settings: &SweepSettings, kernel_grid: &KernelGrid, probe: &ProbeConfig) -> SuiteResult {
    match name {
        "kernels" => kernels(kernel_grid),
        "maxprinciple" => max_principle(settings),
        "comparison" => comparison(settings),
        "multiterm" => multiterm(settings),
        "varorder" => varorder(settings),
        "sector" => sector(settings),
        "lemma" => lemma(probe),
        "thresholds" => thresholds(),
        other => unreachable!("suite {other} passed validation"),
    }
}

pub const VERIFY_HEADER: &[&str] = &[
    "suite",
    "case",
    "seed",
    "passed",
    "classification",
    "worst_violation",
    "tolerance_used",
    "witness_x",
    "witness_t",
    "notes",
];

/// `verify.csv`: one row per case, then a footer line per suite and overall.
pub fn verify_table(results: &[SuiteResult]) -> Table {
    let mut t = Table::new(VERIFY_HEADER);
    for res in results {
        for row in &res.rows {
            let r = &row.report;
            t.push(vec![
                row.suite.into(),
                text(&row.case),
                r.instance_seed.to_string(),
                r.passed.to_string(),
                r.classification.as_str().into(),
                num(r.worst_violation),
                num(r.tolerance_used),
                r.witness.0.to_string(),
                r.witness.1.to_string(),
                text(&r.notes.join("; ")),
            ]);
        }
    }
    for res in results {
        let failed = res.failures().count();
        t.footer.push(format!(
            "suite={} cases={} counted={} passed={} failed={failed}",
            res.name,
            res.rows.len(),
            res.counted(),
            res.counted() - failed
        ));
    }
    let ok = results.iter().all(SuiteResult::passed);
    t.footer.push(format!("overall={}", if ok { "PASS" } else { "FAIL" }));
    t
}

/// `u = (1 + t^α) sin(πx)` on `[0, 1]` with `a = 1`, `b = c = 0` and
/// homogeneous Dirichlet data; `N = M = n`.
pub fn manufactured_problem(alpha: f64, n: usize, grading: f64) -> fracmax_core::Result<ProblemSpec> {
    let g = gamma(1.0 + alpha);
    let coefficients = CoefficientFields {
        a: field_fn(|_, _| 1.0),
        b: field_fn(|_, _| 0.0),
        c: field_fn(|_, _| 0.0),
        lambda_bound: 0.0,
        f: field_fn(move |x, t| (g + PI * PI * (1.0 + t.powf(alpha))) * (PI * x).sin()),
    };
    ProblemSpec::new(
        SpatialGrid::uniform(0.0, 1.0, n)?,
        TemporalMesh::graded(1.0, n, grading)?,
        coefficients,
        TimeOperator::Single(FractionalOrder::new(alpha)?),
        Boundaries::homogeneous_dirichlet(),
        space_fn(|x| (PI * x).sin()),
    )
}

/// Max-norm errors of the manufactured solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManufacturedError {
    /// Over every grid × mesh point.
    pub global: f64,
    /// Over the grid at the final time.
    pub final_time: f64,
}

pub fn manufactured_error(alpha: f64, n: usize, grading: f64) -> fracmax_core::Result<ManufacturedError> {
    let p = manufactured_problem(alpha, n, grading)?;
    let s = solve(&p)?;
    let mut global = 0.0_f64;
    let mut last = 0.0_f64;
    for (k, &t) in p.mesh.nodes().iter().enumerate() {
        for (i, &x) in p.grid.nodes().iter().enumerate() {
            let e = (s.value(k, i) - (1.0 + t.powf(alpha)) * (PI * x).sin()).abs();
            global = global.max(e);
            if k == p.mesh.steps() {
                last = last.max(e);
            }
        }
    }
    Ok(ManufacturedError {
        global,
        final_time: last,
    })
}

/// `(grading, n, error)` rows with observed orders against the previous size.
pub fn convergence_table(alpha: f64, sizes: &[usize], gradings: &[f64]) -> fracmax_core::Result<Table> {
    let mut t = Table::new(&[
        "grading",
        "n",
        "max_error",
        "order",
        "final_time_error",
        "final_time_order",
    ]);
    for &r in gradings {
        let errs = sizes
            .par_iter()
            .map(|&n| manufactured_error(alpha, n, r))
            .collect::<fracmax_core::Result<Vec<_>>>()?;
        for (k, e) in errs.iter().enumerate() {
            let order = |f: fn(&ManufacturedError) -> f64| {
                if k == 0 {
                    String::new()
                } else {
                    let ratio = sizes[k] as f64 / sizes[k - 1] as f64;
                    num((f(&errs[k - 1]) / f(e)).ln() / ratio.ln())
                }
            };
            t.push(vec![
                num(r),
                sizes[k].to_string(),
                num(e.global),
                order(|e| e.global),
                num(e.final_time),
                order(|e| e.final_time),
            ]);
        }
    }
    Ok(t)
}

/// `sweep` threshold table.
pub fn probe_table(p: &ProbeConfig) -> fracmax_core::Result<(Table, bool)> {
    let (mu_star, rows) = probe_rows(p)?;
    let mut t = Table::new(&[
        "mu",
        "mu_over_threshold",
        "family",
        "classification",
        "applicable",
        "violations",
        "worst_excess",
        "witness_t0",
        "passed",
    ]);
    let mut ok = true;
    for r in &rows {
        if r.classification == Classification::Checked && !r.passed() {
            ok = false;
        }
        t.push(vec![
            num(r.mu),
            num(if mu_star > 0.0 { r.mu / mu_star } else { 0.0 }),
            text(&r.family.label()),
            r.classification.as_str().into(),
            r.applicable.to_string(),
            r.violations.to_string(),
            num(r.worst_excess),
            r.witness_t0.to_string(),
            r.passed().to_string(),
        ]);
    }
    t.footer.push(format!(
        "lambda={} alpha={} mu_star={} rows={}",
        p.lambda,
        p.alpha,
        num(mu_star),
        rows.len()
    ));
    Ok((t, ok))
}
