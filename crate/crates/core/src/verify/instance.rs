use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::caputo::{time_fn, MultitermSpec, TimeFn, TimeOperator, VarOrderSpec};
use crate::error::{domain, Result};
use crate::kernels::FractionalOrder;
use crate::mesh::{SpatialGrid, TemporalMesh};
use crate::solver::{field_fn, space_fn, Boundaries, BoundaryCondition, CoefficientFields, ProblemSpec};

/// RNG streams, so coefficient draws do not shift when data draws change.
const COEFF_STREAM: u64 = 0;
const DATA_STREAM: u64 = 1;
const DELTA_STREAM: u64 = 2;

/// Largest number of `T ← 0.8 T` shrinks tried to meet the step restriction.
const MAX_SHRINKS: usize = 200;

/// Time-derivative part of a generated instance.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorKind {
    Single {
        alpha: f64,
    },
    /// Constant weights `q_i`; an order of exactly 1 is a first derivative.
    Multiterm {
        orders: Vec<f64>,
        weights: Vec<f64>,
    },
    /// `∂_t + q D^{α(t)}` with `α(t) = alpha0 + slope · t`.
    VarOrder {
        alpha0: f64,
        slope: f64,
        q: f64,
    },
}

impl OperatorKind {
    pub fn label(&self) -> String {
        match self {
            Self::Single { alpha } => alloc::format!("single(alpha={alpha})"),
            Self::Multiterm { orders, .. } => {
                let parts: Vec<String> = orders.iter().map(|a| alloc::format!("{a}")).collect();
                alloc::format!("multiterm({})", parts.join("+"))
            }
            Self::VarOrder { alpha0, slope, .. } => alloc::format!("varorder({alpha0}+{slope}t)"),
        }
    }

    fn build(&self, final_time: f64) -> Result<TimeOperator> {
        Ok(match self {
            Self::Single { alpha } => TimeOperator::Single(FractionalOrder::new(*alpha)?),
            Self::Multiterm { orders, weights } => {
                let orders = orders
                    .iter()
                    .map(|&a| FractionalOrder::composite(a))
                    .collect::<Result<Vec<_>>>()?;
                TimeOperator::Multiterm(MultitermSpec::constant(orders, weights)?)
            }
            Self::VarOrder { alpha0, slope, q } => {
                let (a0, s, q) = (*alpha0, *slope, *q);
                let end = a0 + s * final_time;
                TimeOperator::VarOrder(VarOrderSpec::new(
                    time_fn(move |t| a0 + s * t),
                    time_fn(move |_| q),
                    (a0.min(end), a0.max(end)),
                )?)
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcKind {
    Dirichlet,
    /// Robin with random weight `g ≥ 0` on both ends.
    Robin,
    Periodic,
}

impl BcKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Dirichlet => "dirichlet",
            Self::Robin => "robin",
            Self::Periodic => "periodic",
        }
    }
}

/// Amplitudes of the random fields. Every field is a truncated
/// trigonometric series normalised to `[−1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Roughness {
    /// Number of spatial modes per field.
    pub modes: usize,
    /// Largest temporal angular frequency.
    pub temporal_frequency: f64,
    /// `a = a_min + a_amp (1 + S)/2`.
    pub a_min: f64,
    pub a_amp: f64,
    /// `b = b_amp S`.
    pub b_amp: f64,
    /// `c = −λ + c_amp (1 + S)/2`; `None` means `2λ + 1`.
    pub c_amp: Option<f64>,
    /// Amplitude of `f`, `u0` and boundary data (all `≤ 0`).
    pub data_amp: f64,
    /// Robin weight `g = g_amp (1 + cos)/2`.
    pub robin_weight_amp: f64,
}

impl Default for Roughness {
    fn default() -> Self {
        Self {
            modes: 3,
            temporal_frequency: 6.0,
            a_min: 0.1,
            a_amp: 1.0,
            b_amp: 2.0,
            c_amp: None,
            data_amp: 1.0,
            robin_weight_amp: 2.0,
        }
    }
}

/// Everything that determines a generated instance.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceConfig {
    pub seed: u64,
    pub lambda: f64,
    pub operator: OperatorKind,
    pub bc: BcKind,
    /// Spatial intervals `M` on `[0, 1]`.
    pub intervals: usize,
    /// Time steps `N`.
    pub steps: usize,
    /// Requested final time; shrunk if the step restriction demands it.
    pub final_time: f64,
    /// Mesh grading `r ≥ 1` (1 is uniform).
    pub grading: f64,
    pub roughness: Roughness,
}

impl InstanceConfig {
    pub fn new(seed: u64, lambda: f64, operator: OperatorKind, bc: BcKind) -> Self {
        Self {
            seed,
            lambda,
            operator,
            bc,
            intervals: 64,
            steps: 64,
            final_time: 1.0,
            grading: 1.0,
            roughness: Roughness::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.intervals < 2 || self.steps < 2 {
            return Err(domain("instance sizes must be >= 2"));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(domain("instance lambda must be finite and >= 0"));
        }
        let r = &self.roughness;
        if r.modes == 0 {
            return Err(domain("instance fields need at least one mode"));
        }
        if !(r.a_min >= 0.1) {
            return Err(domain("a_min must be >= 0.1"));
        }
        let amps = [r.a_amp, r.b_amp, r.data_amp, r.robin_weight_amp, r.temporal_frequency];
        if amps.iter().any(|v| !(*v >= 0.0 && v.is_finite())) || r.c_amp.is_some_and(|c| !(c >= 0.0)) {
            return Err(domain("instance amplitudes must be finite and >= 0"));
        }
        Ok(())
    }
}

/// `S(x, t) = Σ_j A_j cos(2π k_j ξ + φ_j) cos(ν_j t + ψ_j) / Σ_j |A_j|` with
/// `ξ = x` on `[0, 1]` and integer wavenumbers, so `|S| ≤ 1` and
/// `S(0, t) = S(1, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigField {
    terms: Vec<[f64; 5]>,
}

impl TrigField {
    pub(crate) fn random(rng: &mut ChaCha8Rng, modes: usize, frequency: f64, time_dependent: bool) -> Self {
        let mut terms: Vec<[f64; 5]> = (0..modes)
            .map(|j| {
                let amp = rng.random_range(0.2..1.0) / (1 + j) as f64;
                let phase = rng.random_range(0.0..TAU);
                let nu = if time_dependent {
                    frequency * rng.random::<f64>()
                } else {
                    0.0
                };
                let psi = if time_dependent {
                    rng.random_range(0.0..TAU)
                } else {
                    0.0
                };
                [amp, j as f64, phase, nu, psi]
            })
            .collect();
        let total: f64 = terms.iter().map(|t| t[0]).sum();
        for t in &mut terms {
            t[0] /= total;
        }
        Self { terms }
    }

    pub fn value(&self, x: f64, t: f64) -> f64 {
        let s: f64 = self
            .terms
            .iter()
            .map(|&[amp, k, phase, nu, psi]| amp * (TAU * k * x + phase).cos() * (nu * t + psi).cos())
            .sum();
        s.clamp(-1.0, 1.0)
    }

    /// `(1 + S)/2 ∈ [0, 1]`.
    pub fn unit(&self, x: f64, t: f64) -> f64 {
        0.5 * (1.0 + self.value(x, t))
    }
}

fn unit_wave(rng: &mut ChaCha8Rng, frequency: f64) -> TimeFn {
    let nu = frequency * rng.random::<f64>();
    let psi = rng.random_range(0.0..TAU);
    time_fn(move |t| 0.5 * (1.0 + (nu * t + psi).cos()))
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

struct Coefficients {
    fields: CoefficientFields,
    robin_weights: Option<(TimeFn, TimeFn)>,
    notes: Vec<String>,
}

fn coefficients(config: &InstanceConfig) -> Coefficients {
    let r = &config.roughness;
    let mut rng = rng(config.seed, COEFF_STREAM);
    let sa = Arc::new(TrigField::random(&mut rng, r.modes, r.temporal_frequency, true));
    let sb = Arc::new(TrigField::random(&mut rng, r.modes, r.temporal_frequency, true));
    let sc = Arc::new(TrigField::random(&mut rng, r.modes, r.temporal_frequency, true));
    let gl = unit_wave(&mut rng, r.temporal_frequency);
    let gr = unit_wave(&mut rng, r.temporal_frequency);

    let mut notes = Vec::new();
    let mut b_amp = r.b_amp;
    if config.bc == BcKind::Robin {
        // Robin rows take convection one-sided towards the interior, which
        // keeps the off-diagonal nonpositive only while |b| h <= 2 a.
        let h = 1.0 / config.intervals as f64;
        let cap = 0.9 * 2.0 * r.a_min / h;
        if b_amp > cap {
            notes.push(alloc::format!(
                "b amplitude capped at {cap} for Robin rows (was {b_amp})"
            ));
            b_amp = cap;
        }
    }
    let lambda = config.lambda;
    let c_amp = r.c_amp.unwrap_or(2.0 * lambda + 1.0);
    let (a_min, a_amp) = (r.a_min, r.a_amp);
    let fields = CoefficientFields {
        a: field_fn(move |x, t| a_min + a_amp * sa.unit(x, t)),
        b: field_fn(move |x, t| b_amp * sb.value(x, t)),
        c: field_fn(move |x, t| -lambda + c_amp * sc.unit(x, t)),
        lambda_bound: lambda,
        f: field_fn(|_, _| 0.0),
    };
    let g_amp = r.robin_weight_amp;
    let robin_weights =
        (config.bc == BcKind::Robin).then(|| (time_fn(move |t| g_amp * gl(t)), time_fn(move |t| g_amp * gr(t))));
    Coefficients {
        fields,
        robin_weights,
        notes,
    }
}

/// Nonpositive data drawn from one RNG stream.
struct Data {
    f: crate::solver::FieldFn,
    u0: crate::solver::SpaceFn,
    left: TimeFn,
    right: TimeFn,
}

fn data(config: &InstanceConfig, stream: u64) -> Data {
    let r = &config.roughness;
    let mut rng = rng(config.seed, stream);
    let amp = r.data_amp;
    let sf = Arc::new(TrigField::random(&mut rng, r.modes, r.temporal_frequency, true));
    let su = Arc::new(TrigField::random(&mut rng, r.modes, 0.0, false));
    let wl = unit_wave(&mut rng, r.temporal_frequency);
    let wr = unit_wave(&mut rng, r.temporal_frequency);
    let periodic = config.bc == BcKind::Periodic;
    Data {
        f: field_fn(move |x, t| -amp * sf.unit(x, t)),
        u0: space_fn(move |x| {
            // Separated problems also get a bump vanishing at the ends so u0
            // is not trivially close to the boundary data.
            let bump = if periodic { 0.0 } else { (PI * x).sin().max(0.0) };
            -amp * 0.5 * (su.unit(x, 0.0) + bump)
        }),
        left: time_fn(move |t| -amp * wl(t)),
        right: time_fn(move |t| -amp * wr(t)),
    }
}

fn boundaries(bc: BcKind, weights: &Option<(TimeFn, TimeFn)>, d: &Data) -> Boundaries {
    match bc {
        BcKind::Periodic => Boundaries::Periodic,
        BcKind::Dirichlet => Boundaries::dirichlet(d.left.clone(), d.right.clone()),
        BcKind::Robin => {
            let (gl, gr) = weights.clone().expect("Robin weights drawn");
            Boundaries::Separated {
                left: BoundaryCondition::Robin {
                    weight: gl,
                    data: d.left.clone(),
                },
                right: BoundaryCondition::Robin {
                    weight: gr,
                    data: d.right.clone(),
                },
            }
        }
    }
}

/// Final time and operator such that every step has diagonal weight `> λ`,
/// so `d_n + min c > 0` for any `c ≥ −λ`.
fn fit_final_time(config: &InstanceConfig, notes: &mut Vec<String>) -> Result<(TemporalMesh, TimeOperator)> {
    let mut t_final = config.final_time;
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(domain("instance final time must be positive"));
    }
    for _ in 0..=MAX_SHRINKS {
        let mesh = TemporalMesh::graded(t_final, config.steps, config.grading)?;
        let op = config.operator.build(t_final)?;
        op.check_on_mesh(&mesh)?;
        let mut ok = true;
        for n in 1..=config.steps {
            if op.step_weights(mesh.nodes(), n)?.diagonal() <= config.lambda {
                ok = false;
                break;
            }
        }
        if ok {
            if t_final != config.final_time {
                notes.push(alloc::format!(
                    "final time shrunk from {} to {t_final} to satisfy the step restriction",
                    config.final_time
                ));
            }
            return Ok((mesh, op));
        }
        t_final *= 0.8;
    }
    Err(domain(
        "could not meet the step restriction by shrinking the final time",
    ))
}

/// Random instance with `c ≥ −λ`, `a ≥ a_min ≥ 0.1` and nonpositive data
/// (`f`, `u0`, Dirichlet values, Robin data), together with notes on any
/// adjustment made to honour the solver's step restriction.
pub fn generate_instance_with_notes(config: &InstanceConfig) -> Result<(ProblemSpec, Vec<String>)> {
    config.validate()?;
    let coeffs = coefficients(config);
    let mut notes = coeffs.notes;
    let (mesh, operator) = fit_final_time(config, &mut notes)?;
    let grid = SpatialGrid::uniform(0.0, 1.0, config.intervals)?;
    let d = data(config, DATA_STREAM);
    let mut fields = coeffs.fields;
    fields.f = d.f.clone();
    let bcs = boundaries(config.bc, &coeffs.robin_weights, &d);
    let problem = ProblemSpec::new(grid, mesh, fields, operator, bcs, d.u0.clone())?;
    Ok((problem, notes))
}

pub fn generate_instance(config: &InstanceConfig) -> Result<ProblemSpec> {
    generate_instance_with_notes(config).map(|(p, _)| p)
}

/// `(p1, p2)` sharing coefficients, with `p1`'s data equal to `p2`'s plus an
/// independent nonpositive perturbation, so `u0¹ ≤ u0²`, `f¹ ≤ f²` and
/// boundary data `¹ ≤ ²`.
pub fn generate_comparison_pair(config: &InstanceConfig) -> Result<(ProblemSpec, ProblemSpec)> {
    let p2 = generate_instance(config)?;
    let delta = data(config, DELTA_STREAM);
    let (f2, u2) = (p2.coefficients.f.clone(), p2.u0.clone());
    let (df, du) = (delta.f.clone(), delta.u0.clone());
    let mut p1 = p2
        .with_source(field_fn(move |x, t| f2(x, t) + df(x, t)))
        .with_initial(space_fn(move |x| u2(x) + du(x)));
    p1.boundaries = match &p2.boundaries {
        Boundaries::Periodic => Boundaries::Periodic,
        Boundaries::Separated { left, right } => {
            let shift = |bc: &BoundaryCondition, d: &TimeFn| {
                let d = d.clone();
                match bc {
                    BoundaryCondition::Dirichlet { value } => {
                        let v = value.clone();
                        BoundaryCondition::Dirichlet {
                            value: time_fn(move |t| v(t) + d(t)),
                        }
                    }
                    BoundaryCondition::Robin { weight, data } => {
                        let g = data.clone();
                        BoundaryCondition::Robin {
                            weight: weight.clone(),
                            data: time_fn(move |t| g(t) + d(t)),
                        }
                    }
                }
            };
            Boundaries::Separated {
                left: shift(left, &delta.left),
                right: shift(right, &delta.right),
            }
        }
    };
    p1.validate()?;
    Ok((p1, p2))
}
