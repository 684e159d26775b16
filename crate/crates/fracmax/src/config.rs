//! The TOML run configuration. One file fully determines a run; every table
//! is optional except `[problem]` for `solve`.

use std::path::Path;

use serde::Deserialize;
use toml::Spanned;

use fracmax_core::caputo::{time_fn, MultitermSpec, TimeOperator, VarOrderSpec};
use fracmax_core::solver::{Boundaries, BoundaryCondition, CoefficientFields, ProblemSpec};
use fracmax_core::verify::{BcKind, Roughness};
use fracmax_core::{FractionalOrder, SpatialGrid, TemporalMesh};

use crate::expr::Expr;

/// A configuration problem, with the 1-based line it refers to when known.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{}{message}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    pub fn new(message: impl Into<String>) -> Self {
        Self {
            line: None,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    #[serde(default)]
    pub kernels: KernelGrid,
    #[serde(default)]
    pub caputo: CaputoSet,
    pub problem: Option<ProblemConfig>,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub probe: ProbeConfig,
    #[serde(default)]
    pub convergence: ConvergenceConfig,
    /// Source text, kept to turn byte spans into line numbers.
    #[serde(skip)]
    source: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KernelGrid {
    pub alphas: Vec<f64>,
    pub mus: Vec<f64>,
    pub times: Vec<f64>,
}

impl Default for KernelGrid {
    fn default() -> Self {
        Self {
            alphas: (1..=9).map(|k| k as f64 / 10.0).collect(),
            mus: vec![0.0, 0.5, 1.0, 5.0],
            times: vec![0.01, 0.1, 1.0, 10.0],
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CaputoSet {
    /// Names understood by `AnalyticFunction::from_name`.
    pub functions: Vec<String>,
    pub times: Vec<f64>,
    pub alphas: Vec<f64>,
    pub mus: Vec<f64>,
    /// Steps of the graded mesh used for the L1 column.
    pub l1_steps: usize,
}

impl Default for CaputoSet {
    fn default() -> Self {
        Self {
            functions: ["t", "t2", "sin", "exp", "sqrt"].map(String::from).to_vec(),
            times: vec![0.25, 1.0, 2.0],
            alphas: vec![0.2, 0.5, 0.8],
            mus: vec![0.0, 1.0, 3.0],
            l1_steps: 512,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    #[serde(default)]
    pub left: f64,
    #[serde(default = "one")]
    pub right: f64,
    pub intervals: usize,
    #[serde(default = "one")]
    pub final_time: f64,
    pub steps: usize,
    /// `t_n = T (n/N)^r`; 1 is uniform.
    #[serde(default = "one")]
    pub grading: f64,
    pub a: Spanned<String>,
    pub b: Option<Spanned<String>>,
    pub c: Option<Spanned<String>>,
    pub f: Option<Spanned<String>>,
    pub u0: Option<Spanned<String>>,
    /// Bound with `c ≥ −λ`; sampled from `c` when absent.
    pub lambda_bound: Option<f64>,
    /// Exact solution, if known; its max-norm error goes to the sidecar.
    pub exact: Option<Spanned<String>>,
    pub operator: OperatorConfig,
    pub bc: BcConfig,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum OperatorConfig {
    Single {
        alpha: f64,
    },
    Multiterm {
        orders: Vec<f64>,
        /// Expressions in `t`, one per order.
        weights: Vec<String>,
        /// Lower bound on the summed weights; the sampled minimum when absent.
        cq: Option<f64>,
    },
    Varorder {
        /// `α(t)`, an expression in `t`.
        alpha: String,
        #[serde(default = "unit")]
        q: String,
    },
}

fn unit() -> String {
    "1".into()
}

fn zero() -> String {
    "0".into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum BcConfig {
    /// Values are expressions in `t`.
    Dirichlet {
        #[serde(default = "zero")]
        left: String,
        #[serde(default = "zero")]
        right: String,
    },
    /// `ν a u_x + g u = data`, weights and data expressions in `t`.
    Robin {
        #[serde(default = "zero")]
        left_weight: String,
        #[serde(default = "zero")]
        left_data: String,
        #[serde(default = "zero")]
        right_weight: String,
        #[serde(default = "zero")]
        right_data: String,
    },
    Periodic,
}

/// Settings of the `verify` suites.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub suites: Vec<String>,
    /// Seeds per (α, λ, boundary) cell of the max-principle and comparison
    /// suites.
    pub seeds: u64,
    /// Seeds per cell of the multiterm and variable-order suites.
    pub extension_seeds: u64,
    pub alphas: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub bcs: Vec<String>,
    pub intervals: usize,
    pub steps: usize,
    pub final_time: f64,
    pub grading: f64,
    pub tol: f64,
    pub sector_cases: u64,
    pub sector_intervals: usize,
    pub sector_tol: f64,
    #[serde(default)]
    pub roughness: RoughnessConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            suites: vec!["all".into()],
            seeds: 200,
            extension_seeds: 50,
            alphas: vec![0.25, 0.5, 0.75],
            lambdas: vec![0.0, 1.0, 4.0],
            bcs: ["dirichlet", "robin", "periodic"].map(String::from).to_vec(),
            intervals: 64,
            steps: 64,
            final_time: 1.0,
            grading: 1.0,
            tol: 1e-8,
            sector_cases: 100,
            sector_intervals: 64,
            sector_tol: 1e-6,
            roughness: RoughnessConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RoughnessConfig {
    pub modes: usize,
    pub temporal_frequency: f64,
    pub a_min: f64,
    pub a_amp: f64,
    pub b_amp: f64,
    pub c_amp: Option<f64>,
    pub data_amp: f64,
    pub robin_weight_amp: f64,
}

impl Default for RoughnessConfig {
    fn default() -> Self {
        let r = Roughness::default();
        Self {
            modes: r.modes,
            temporal_frequency: r.temporal_frequency,
            a_min: r.a_min,
            a_amp: r.a_amp,
            b_amp: r.b_amp,
            c_amp: r.c_amp,
            data_amp: r.data_amp,
            robin_weight_amp: r.robin_weight_amp,
        }
    }
}

impl RoughnessConfig {
    pub fn to_core(&self) -> Roughness {
        Roughness {
            modes: self.modes,
            temporal_frequency: self.temporal_frequency,
            a_min: self.a_min,
            a_amp: self.a_amp,
            b_amp: self.b_amp,
            c_amp: self.c_amp,
            data_amp: self.data_amp,
            robin_weight_amp: self.robin_weight_amp,
        }
    }
}

/// Threshold probe around `μ* = λ^{1/α}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProbeConfig {
    pub lambda: f64,
    pub alpha: f64,
    /// Multiples of `μ*`; 0 gives `μ = 0`.
    pub mu_factors: Vec<f64>,
    /// `t^<β>` or `ramp`.
    pub families: Vec<String>,
    pub final_time: f64,
    pub steps: usize,
    pub grading: f64,
    pub tol: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            alpha: 0.5,
            mu_factors: vec![0.0, 0.25, 0.5, 0.9, 1.0, 1.5, 2.0, 4.0],
            families: ["t^0.5", "t", "t^2", "ramp"].map(String::from).to_vec(),
            final_time: 2.0,
            steps: 64,
            grading: 1.0,
            tol: 1e-8,
        }
    }
}

/// Manufactured-solution study `u = (1 + t^α) sin(πx)`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConvergenceConfig {
    pub alpha: f64,
    pub sizes: Vec<usize>,
    pub gradings: Vec<f64>,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            sizes: vec![32, 64, 128, 256],
            gradings: vec![1.0, 3.0],
        }
    }
}

impl RunConfig {
    pub fn parse(source: &str) -> Result<Self, ConfigError> {
        let mut cfg: Self = toml::from_str(source).map_err(|e| ConfigError {
            line: e.span().map(|s| line_of(source, s.start)),
            message: e.message().to_owned(),
        })?;
        cfg.source = source.to_owned();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let source = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&source)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if let Some(tol) = self.tol {
            check_tol(tol, "tol")?;
        }
        let s = &self.sweep;
        if s.seeds == 0 || s.extension_seeds == 0 || s.sector_cases == 0 {
            return Err(ConfigError::new("[sweep] seed counts must be >= 1"));
        }
        if s.intervals < 2 || s.steps < 2 || s.sector_intervals < 2 {
            return Err(ConfigError::new("[sweep] sizes must be >= 2"));
        }
        check_tol(s.tol, "[sweep] tol")?;
        check_tol(s.sector_tol, "[sweep] sector_tol")?;
        for name in &s.suites {
            if name != "all" && !crate::suites::SUITES.contains(&name.as_str()) {
                return Err(ConfigError::new(format!("[sweep] unknown suite {name:?}")));
            }
        }
        for bc in &s.bcs {
            parse_bc(bc)?;
        }
        for f in &self.probe.families {
            parse_family(f)?;
        }
        for name in &self.caputo.functions {
            if fracmax_core::caputo::AnalyticFunction::from_name(name).is_none() {
                return Err(ConfigError::new(format!("[caputo] unknown function {name:?}")));
            }
        }
        if self.caputo.l1_steps < 2 {
            return Err(ConfigError::new("[caputo] l1_steps must be >= 2"));
        }
        if self.convergence.sizes.iter().any(|&n| n < 2) {
            return Err(ConfigError::new("[convergence] sizes must be >= 2"));
        }
        Ok(())
    }

    fn line(&self, span: &std::ops::Range<usize>) -> Option<usize> {
        (span.end > span.start).then(|| line_of(&self.source, span.start))
    }

    fn expr(&self, s: &Spanned<String>, vars: &[&str]) -> Result<Expr, ConfigError> {
        Expr::parse(s.get_ref(), vars).map_err(|message| ConfigError {
            line: self.line(&s.span()),
            message,
        })
    }

    fn keyed(&self, key: &str, text: &str, vars: &[&str]) -> Result<Expr, ConfigError> {
        Expr::parse(text, vars).map_err(|m| ConfigError::new(format!("{key}: {m}")))
    }

    /// Builds and validates the `[problem]` table.
    pub fn problem_spec(&self) -> Result<ProblemSpec, ConfigError> {
        let p = self
            .problem
            .as_ref()
            .ok_or_else(|| ConfigError::new("missing [problem] table"))?;
        let core_err = |e: fracmax_core::Error| ConfigError::new(format!("[problem] {e}"));
        let grid = SpatialGrid::uniform(p.left, p.right, p.intervals).map_err(core_err)?;
        let mesh = TemporalMesh::graded(p.final_time, p.steps, p.grading).map_err(core_err)?;
        let xt = ["x", "t"];
        let zero = Spanned::new(0..0, "0".to_owned());
        let a = self.expr(&p.a, &xt)?;
        let b = self.expr(p.b.as_ref().unwrap_or(&zero), &xt)?;
        let c = self.expr(p.c.as_ref().unwrap_or(&zero), &xt)?;
        let f = self.expr(p.f.as_ref().unwrap_or(&zero), &xt)?;
        let u0 = self.expr(p.u0.as_ref().unwrap_or(&zero), &["x"])?;
        if let Some(e) = &p.exact {
            self.expr(e, &xt)?;
        }
        let lambda_bound = match p.lambda_bound {
            Some(l) => l,
            None => sampled_lambda(&c, &grid, &mesh),
        };
        let coefficients = CoefficientFields {
            a: a.field(),
            b: b.field(),
            c: c.field(),
            lambda_bound,
            f: f.field(),
        };
        let operator = self.operator(&p.operator, &mesh)?;
        let boundaries = self.boundaries(&p.bc)?;
        ProblemSpec::new(grid, mesh, coefficients, operator, boundaries, u0.space()).map_err(core_err)
    }

    pub fn exact_solution(&self) -> Option<Expr> {
        let e = self.problem.as_ref()?.exact.as_ref()?;
        Expr::parse(e.get_ref(), &["x", "t"]).ok()
    }

    fn operator(&self, op: &OperatorConfig, mesh: &TemporalMesh) -> Result<TimeOperator, ConfigError> {
        let core_err = |e: fracmax_core::Error| ConfigError::new(format!("[problem.operator] {e}"));
        Ok(match op {
            OperatorConfig::Single { alpha } => TimeOperator::Single(FractionalOrder::new(*alpha).map_err(core_err)?),
            OperatorConfig::Multiterm { orders, weights, cq } => {
                let orders = orders
                    .iter()
                    .map(|&a| FractionalOrder::composite(a))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(core_err)?;
                let exprs = weights
                    .iter()
                    .map(|w| self.keyed("problem.operator.weights", w, &["t"]))
                    .collect::<Result<Vec<_>, _>>()?;
                let cq = cq.unwrap_or_else(|| {
                    mesh.nodes()
                        .iter()
                        .map(|&t| exprs.iter().map(|e| e.eval(0.0, t)).sum::<f64>())
                        .fold(f64::INFINITY, f64::min)
                });
                let fns = exprs.iter().map(Expr::time).collect();
                TimeOperator::Multiterm(MultitermSpec::new(orders, fns, cq).map_err(core_err)?)
            }
            OperatorConfig::Varorder { alpha, q } => {
                let a = self.keyed("problem.operator.alpha", alpha, &["t"])?;
                let q = self.keyed("problem.operator.q", q, &["t"])?;
                let samples: Vec<f64> = mesh.nodes().iter().map(|&t| a.eval(0.0, t)).collect();
                let lo = samples.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let a_fn = a.time();
                TimeOperator::VarOrder(
                    VarOrderSpec::new(time_fn(move |t| a_fn(t)), q.time(), (lo, hi)).map_err(core_err)?,
                )
            }
        })
    }

    fn boundaries(&self, bc: &BcConfig) -> Result<Boundaries, ConfigError> {
        let t = ["t"];
        Ok(match bc {
            BcConfig::Dirichlet { left, right } => Boundaries::dirichlet(
                self.keyed("problem.bc.left", left, &t)?.time(),
                self.keyed("problem.bc.right", right, &t)?.time(),
            ),
            BcConfig::Robin {
                left_weight,
                left_data,
                right_weight,
                right_data,
            } => Boundaries::Separated {
                left: BoundaryCondition::Robin {
                    weight: self.keyed("problem.bc.left_weight", left_weight, &t)?.time(),
                    data: self.keyed("problem.bc.left_data", left_data, &t)?.time(),
                },
                right: BoundaryCondition::Robin {
                    weight: self.keyed("problem.bc.right_weight", right_weight, &t)?.time(),
                    data: self.keyed("problem.bc.right_data", right_data, &t)?.time(),
                },
            },
            BcConfig::Periodic => Boundaries::Periodic,
        })
    }
}

/// `max(0, −min c)` over nodes, cell midpoints and mesh times.
fn sampled_lambda(c: &Expr, grid: &SpatialGrid, mesh: &TemporalMesh) -> f64 {
    let mids: Vec<f64> = (0..grid.intervals()).map(|i| grid.midpoint(i)).collect();
    let mut lam = 0.0_f64;
    for &t in mesh.nodes() {
        for &x in grid.nodes().iter().chain(&mids) {
            lam = lam.max(-c.eval(x, t));
        }
    }
    // `max(0, 0 · −1)` may keep the sign of −0.
    if lam > 0.0 {
        lam
    } else {
        0.0
    }
}

fn check_tol(tol: f64, what: &str) -> Result<(), ConfigError> {
    if tol >= 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(ConfigError::new(format!("{what} must be finite and >= 0")))
    }
}

pub fn parse_bc(name: &str) -> Result<BcKind, ConfigError> {
    match name {
        "dirichlet" => Ok(BcKind::Dirichlet),
        "robin" => Ok(BcKind::Robin),
        "periodic" => Ok(BcKind::Periodic),
        _ => Err(ConfigError::new(format!("unknown boundary kind {name:?}"))),
    }
}

pub fn parse_family(name: &str) -> Result<fracmax_core::verify::ProbeFamily, ConfigError> {
    use fracmax_core::verify::ProbeFamily;
    match name {
        "ramp" => Ok(ProbeFamily::TiltedRamp),
        "t" => Ok(ProbeFamily::Power(1.0)),
        _ => name
            .strip_prefix("t^")
            .and_then(|b| b.parse::<f64>().ok())
            .filter(|b| *b > 0.0)
            .map(ProbeFamily::Power)
            .ok_or_else(|| ConfigError::new(format!("unknown probe family {name:?}"))),
    }
}

fn line_of(source: &str, offset: usize) -> usize {
    source[..offset.min(source.len())].matches('\n').count() + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEAT: &str = r#"
[problem]
intervals = 8
steps = 4
a = "1"
f = "-1"
operator = { kind = "single", alpha = 0.5 }
bc = { kind = "dirichlet" }
"#;

    #[test]
    fn minimal_problem_builds() {
        let cfg = RunConfig::parse(HEAT).unwrap();
        let p = cfg.problem_spec().unwrap();
        assert_eq!(p.grid.intervals(), 8);
        assert_eq!(p.mesh.steps(), 4);
        assert_eq!(p.coefficients.lambda_bound, 0.0);
    }

    #[test]
    fn missing_field_reports_a_line() {
        let src = HEAT.replace("steps = 4\n", "");
        let err = RunConfig::parse(&src).unwrap_err();
        assert!(err.message.contains("steps"), "{err}");
        assert!(err.line.is_some());
    }

    #[test]
    fn bad_expression_reports_its_line() {
        let src = HEAT.replace("f = \"-1\"", "f = \"-y\"");
        let cfg = RunConfig::parse(&src).unwrap();
        let err = cfg.problem_spec().unwrap_err();
        assert_eq!(err.line, Some(6), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::parse("[sweep]\nseedz = 3\n").is_err());
        assert!(RunConfig::parse("[sweep]\nsuites = [\"nope\"]\n").is_err());
    }

    #[test]
    fn lambda_bound_is_sampled() {
        let src = HEAT.replace("f = \"-1\"", "c = \"-2 + x\"");
        let p = RunConfig::parse(&src).unwrap().problem_spec().unwrap();
        assert_eq!(p.coefficients.lambda_bound, 2.0);
    }

    #[test]
    fn operator_variants_parse() {
        let multi = HEAT.replace(
            "{ kind = \"single\", alpha = 0.5 }",
            "{ kind = \"multiterm\", orders = [1.0, 0.4], weights = [\"1\", \"2+t\"] }",
        );
        let p = RunConfig::parse(&multi).unwrap().problem_spec().unwrap();
        assert!(matches!(p.operator, TimeOperator::Multiterm(ref m) if m.cq() == 3.0));
        let var = HEAT.replace(
            "{ kind = \"single\", alpha = 0.5 }",
            "{ kind = \"varorder\", alpha = \"0.4+0.2*t\" }",
        );
        let p = RunConfig::parse(&var).unwrap().problem_spec().unwrap();
        assert!(matches!(p.operator, TimeOperator::VarOrder(_)));
    }
}
