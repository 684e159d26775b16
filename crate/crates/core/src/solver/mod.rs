//! Implicit time stepping for 1D problems
//! `D_t u + L u + c(x,t) u = f(x,t)` where `D_t` is a single-term,
//! multiterm or variable-order Caputo operator and
//! `L u = −(a u_x)_x + b u_x`.
//!
//! Each step solves `(d_n I + L_h(t_n) + diag c(·,t_n)) u_n = f_n + H_n`
//! where `d_n` is the diagonal weight of the discrete time operator and
//! `H_n` its history load. The step matrix is an M-matrix when convection
//! is upwinded and `d_n + min_x c(x, t_n) > 0`; the solver refuses steps
//! that break the latter.

mod assemble;

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

pub use assemble::{assemble_spatial, compute_cl, SpatialOperator};

use crate::caputo::{TimeFn, TimeOperator};
use crate::error::{domain, Error, Result};
use crate::linalg::{solve_cyclic, solve_tridiagonal};
use crate::mesh::{SpatialGrid, TemporalMesh};
use crate::special::gamma;

/// Shared field of `(x, t)`.
pub type FieldFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
/// Shared function of `x`.
pub type SpaceFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

pub fn field_fn(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> FieldFn {
    Arc::new(f)
}

pub fn space_fn(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> SpaceFn {
    Arc::new(f)
}

/// Coefficients of `L`, the reaction `c ≥ −λ` and the source `f`.
#[derive(Clone)]
pub struct CoefficientFields {
    pub a: FieldFn,
    pub b: FieldFn,
    pub c: FieldFn,
    pub lambda_bound: f64,
    pub f: FieldFn,
}

impl core::fmt::Debug for CoefficientFields {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("CoefficientFields")
            .field("lambda_bound", &self.lambda_bound)
            .finish_non_exhaustive()
    }
}

impl CoefficientFields {
    /// Checks `a > 0` (nodes and cell midpoints), `c ≥ −λ` and finiteness of
    /// every field on the grid × mesh samples.
    pub fn check_on(&self, grid: &SpatialGrid, mesh: &TemporalMesh) -> Result<()> {
        if !(self.lambda_bound >= 0.0 && self.lambda_bound.is_finite()) {
            return Err(domain("lambda bound must be finite and >= 0"));
        }
        let mids: Vec<f64> = (0..grid.intervals()).map(|i| grid.midpoint(i)).collect();
        for &t in mesh.nodes() {
            for &x in grid.nodes().iter().chain(&mids) {
                let a = (self.a)(x, t);
                if !(a > 0.0 && a.is_finite()) {
                    return Err(domain(alloc::format!("a({x}, {t}) = {a} is not positive")));
                }
            }
            for &x in grid.nodes() {
                let (b, c, f) = ((self.b)(x, t), (self.c)(x, t), (self.f)(x, t));
                if !(b.is_finite() && c.is_finite() && f.is_finite()) {
                    return Err(domain(alloc::format!("non-finite coefficient at ({x}, {t})")));
                }
                if c + self.lambda_bound < -1e-12 {
                    return Err(domain(alloc::format!(
                        "c({x}, {t}) = {c} below -lambda = {}",
                        -self.lambda_bound
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Condition at one end of the interval.
#[derive(Clone)]
pub enum BoundaryCondition {
    /// `u = value(t)`.
    Dirichlet { value: TimeFn },
    /// `ν a u_x + g u = data(t)` with outward normal `ν = ∓1` and `g ≥ 0`;
    /// Neumann is `g ≡ 0`.
    Robin { weight: TimeFn, data: TimeFn },
}

impl core::fmt::Debug for BoundaryCondition {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Self::Dirichlet { .. } => "Dirichlet",
            Self::Robin { .. } => "Robin",
        })
    }
}

#[derive(Debug, Clone)]
pub enum Boundaries {
    Separated {
        left: BoundaryCondition,
        right: BoundaryCondition,
    },
    Periodic,
}

impl Boundaries {
    pub fn dirichlet(left: TimeFn, right: TimeFn) -> Self {
        Self::Separated {
            left: BoundaryCondition::Dirichlet { value: left },
            right: BoundaryCondition::Dirichlet { value: right },
        }
    }

    pub fn homogeneous_dirichlet() -> Self {
        let zero = crate::caputo::time_fn(|_| 0.0);
        Self::dirichlet(zero.clone(), zero)
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, Self::Periodic)
    }
}

/// One problem instance.
#[derive(Clone)]
pub struct ProblemSpec {
    pub grid: SpatialGrid,
    pub mesh: TemporalMesh,
    pub coefficients: CoefficientFields,
    pub operator: TimeOperator,
    pub boundaries: Boundaries,
    pub u0: SpaceFn,
}

impl core::fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("grid", &self.grid)
            .field("mesh", &self.mesh)
            .field("coefficients", &self.coefficients)
            .field("operator", &self.operator)
            .field("boundaries", &self.boundaries)
            .finish_non_exhaustive()
    }
}

impl ProblemSpec {
    /// Builds and validates a problem.
    pub fn new(
        grid: SpatialGrid,
        mesh: TemporalMesh,
        coefficients: CoefficientFields,
        operator: TimeOperator,
        boundaries: Boundaries,
        u0: SpaceFn,
    ) -> Result<Self> {
        let p = Self {
            grid,
            mesh,
            coefficients,
            operator,
            boundaries,
            u0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        self.operator.check_on_mesh(&self.mesh)?;
        self.coefficients.check_on(&self.grid, &self.mesh)?;
        for &x in self.grid.nodes() {
            if !(self.u0)(x).is_finite() {
                return Err(domain(alloc::format!("u0({x}) is not finite")));
            }
        }
        match &self.boundaries {
            Boundaries::Periodic => self.check_periodic(),
            Boundaries::Separated { left, right } => {
                for bc in [left, right] {
                    for &t in self.mesh.nodes() {
                        let ok = match bc {
                            BoundaryCondition::Dirichlet { value } => value(t).is_finite(),
                            BoundaryCondition::Robin { weight, data } => {
                                let g = weight(t);
                                if !(g >= 0.0) {
                                    return Err(domain(alloc::format!("Robin weight g({t}) = {g} must be >= 0")));
                                }
                                g.is_finite() && data(t).is_finite()
                            }
                        };
                        if !ok {
                            return Err(domain(alloc::format!("non-finite boundary data at t = {t}")));
                        }
                    }
                }
                Ok(())
            }
        }
    }

    fn check_periodic(&self) -> Result<()> {
        let (xl, xr) = (self.grid.left(), self.grid.right());
        let close = |p: f64, q: f64| (p - q).abs() <= 1e-10 * (1.0 + p.abs().max(q.abs()));
        if !close((self.u0)(xl), (self.u0)(xr)) {
            return Err(domain("periodic problem: u0 differs at the two ends"));
        }
        let c = &self.coefficients;
        for &t in self.mesh.nodes() {
            for (name, field) in [("a", &c.a), ("b", &c.b), ("c", &c.c), ("f", &c.f)] {
                if !close(field(xl, t), field(xr, t)) {
                    return Err(domain(alloc::format!(
                        "periodic problem: {name} differs at the two ends (t = {t})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn with_source(&self, f: FieldFn) -> Self {
        let mut p = self.clone();
        p.coefficients.f = f;
        p
    }

    pub fn with_initial(&self, u0: SpaceFn) -> Self {
        let mut p = self.clone();
        p.u0 = u0;
        p
    }

    pub fn with_boundaries(&self, boundaries: Boundaries) -> Self {
        let mut p = self.clone();
        p.boundaries = boundaries;
        p
    }

    pub fn with_operator(&self, operator: TimeOperator) -> Self {
        let mut p = self.clone();
        p.operator = operator;
        p
    }
}

/// Space-time solution, row `n` holding `u(x_0..x_M, t_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionField {
    values: Vec<f64>,
    grid: SpatialGrid,
    mesh: TemporalMesh,
}

impl SolutionField {
    pub fn new(values: Vec<f64>, grid: SpatialGrid, mesh: TemporalMesh) -> Result<Self> {
        if values.len() != grid.nodes().len() * mesh.nodes().len() {
            return Err(domain("solution size does not match grid and mesh"));
        }
        Ok(Self { values, grid, mesh })
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn mesh(&self) -> &TemporalMesh {
        &self.mesh
    }

    pub fn width(&self) -> usize {
        self.grid.nodes().len()
    }

    pub fn row(&self, n: usize) -> &[f64] {
        let w = self.width();
        &self.values[n * w..(n + 1) * w]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.width())
    }

    pub fn value(&self, n: usize, i: usize) -> f64 {
        self.values[n * self.width() + i]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Pointwise `self − other` on identical grids.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid || self.mesh != other.mesh {
            return Err(Error::Usage("solutions live on different grids".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(p, q)| p - q).collect();
        Self::new(values, self.grid.clone(), self.mesh.clone())
    }

    /// Largest entry and its `(node index i, time index n)`.
    pub fn max_with_witness(&self) -> (f64, (usize, usize)) {
        let w = self.width();
        let mut best = (f64::NEG_INFINITY, (0, 0));
        for (k, &v) in self.values.iter().enumerate() {
            if v > best.0 {
                best = (v, (k % w, k / w));
            }
        }
        best
    }
}

/// Switches for [`solve_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Upwind (default) or centred convection.
    pub upwind: bool,
    /// Assert that every step matrix is a diagonally dominant M-matrix.
    pub check_m_matrix: bool,
    /// Refuse steps with `d_n + min c ≤ 0` (default on).
    pub enforce_step_restriction: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            upwind: true,
            check_m_matrix: false,
            enforce_step_restriction: true,
        }
    }
}

pub fn solve(problem: &ProblemSpec) -> Result<SolutionField> {
    solve_with(problem, &SolveOptions::default())
}

/// [`solve`] for problems whose operator is multiterm.
pub fn solve_multiterm(problem: &ProblemSpec) -> Result<SolutionField> {
    match problem.operator {
        TimeOperator::Multiterm(_) => solve(problem),
        _ => Err(Error::Usage("solve_multiterm needs a multiterm operator".into())),
    }
}

/// [`solve`] for problems whose operator is variable-order.
pub fn solve_varorder(problem: &ProblemSpec) -> Result<SolutionField> {
    match problem.operator {
        TimeOperator::VarOrder(_) => solve(problem),
        _ => Err(Error::Usage("solve_varorder needs a variable-order operator".into())),
    }
}

/// Largest step that would restore `d_n + min c > 0`, from the single-term
/// scaling `d ≈ τ^{−α}/Γ(2−α)`.
fn step_hint(problem: &ProblemSpec, tau: f64, diagonal: f64, min_c: f64) -> f64 {
    let alpha = problem.operator.min_order(&problem.mesh);
    match problem.operator {
        TimeOperator::Single(_) => (gamma(2.0 - alpha) * -min_c).powf(-1.0 / alpha),
        _ => tau * (diagonal / -min_c).powf(1.0 / alpha),
    }
}

pub fn solve_with(problem: &ProblemSpec, opts: &SolveOptions) -> Result<SolutionField> {
    problem.validate()?;
    let x = problem.grid.nodes();
    let times = problem.mesh.nodes();
    let width = x.len();
    let coeffs = &problem.coefficients;

    let mut values = Vec::with_capacity(width * times.len());
    values.extend(x.iter().map(|&xi| (problem.u0)(xi)));

    for n in 1..times.len() {
        let t = times[n];
        let weights = problem.operator.step_weights(times, n)?;
        let d = weights.diagonal();
        let op = assemble_spatial(coeffs, &problem.grid, t, opts.upwind, &problem.boundaries)?;
        let unknowns = op.unknowns();

        let mut system = op.matrix;
        let mut rhs = vec![0.0; unknowns];
        let mut min_c = f64::INFINITY;
        for i in 0..unknowns {
            if op.fixed.iter().any(|&(node, _)| node == i) {
                continue;
            }
            let c = (coeffs.c)(x[i], t);
            min_c = min_c.min(c);
            system.diag[i] += d + c;
            let history = weights.history(|k| values[k * width + i]);
            rhs[i] = (coeffs.f)(x[i], t) + history + op.load[i];
        }
        if opts.enforce_step_restriction && !(d + min_c > 0.0) {
            return Err(Error::StepRestriction {
                step: n,
                time: t,
                diagonal: d,
                min_reaction: min_c,
                max_step: step_hint(problem, problem.mesh.step(n), d, min_c),
            });
        }
        for &(node, value) in &op.fixed {
            system.lower[node] = 0.0;
            system.diag[node] = 1.0;
            system.upper[node] = 0.0;
            rhs[node] = value;
        }
        if opts.check_m_matrix {
            if let Some(row) = system.m_matrix_violation(op.cyclic) {
                return Err(Error::NotMMatrix { step: n, time: t, row });
            }
        }
        let u = if op.cyclic {
            solve_cyclic(&system, &rhs)
        } else {
            solve_tridiagonal(&system, &rhs)
        }
        .ok_or(Error::Singular { step: n, time: t })?;

        values.extend_from_slice(&u);
        if op.cyclic {
            values.push(u[0]);
        }
    }
    SolutionField::new(values, problem.grid.clone(), problem.mesh.clone())
}
