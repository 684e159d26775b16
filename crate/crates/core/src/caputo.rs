//! Caputo derivatives: four continuous representations and the L1 scheme.
//!
//! The continuous evaluators all compute `D_t^α v(t)` and differ only in the
//! integral they discretise:
//!
//! | evaluator              | integral                                                     |
//! |------------------------|--------------------------------------------------------------|
//! | [`caputo_definition`]  | `∫ (t−s)^{−α} v′(s) ds`                                      |
//! | [`caputo_luchko`]      | `∫ α(t−s)^{−α−1} (v(t) − v(s)) ds`                           |
//! | [`caputo_transformed`] | `∫ ∂_s ω(t−s) (v̂(t) − v̂(s)) ds`, `v̂ = e^{−μs} v`            |
//! | [`caputo_hat`]         | `∫ ω(t−s) ∂_s v̂(s) ds`                                       |
//!
//! Each weakly singular integral is split at `t/2`. Near `s = t` the change
//! of variables `t − s = τ^{1/(1−α)}` makes the integrand bounded; near
//! `s = 0` the map `s = (t/2) σ^8` tames derivative singularities such as
//! those of `t^γ` with small `γ`.

use alloc::sync::Arc;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{domain, Result};
use crate::kernels::{self, FractionalOrder};
use crate::mesh::{TemporalMesh, TimeSamples};
use crate::quad::{self, Tolerance};
use crate::special::gamma;

/// Shared scalar function of time.
pub type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

pub fn time_fn(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> TimeFn {
    Arc::new(f)
}

/// Exponent of the `s = (t/2) σ^q` map on the left half.
const LEFT_POWER: f64 = 8.0;
/// Relative width `r_c / t` of the innermost piece of the difference
/// integrals, handled by linear extrapolation of `(g(t) − g(t−r))/r`.
const INNER_CUTOFF: f64 = 1e-5;

/// A function of time with its derivative, for the evaluators that need `v′`.
pub trait TimeFunction {
    fn value(&self, t: f64) -> f64;
    fn derivative(&self, t: f64) -> f64;
}

/// Pairs a function with a hand-supplied derivative.
#[derive(Debug, Clone, Copy)]
pub struct Differentiable<F, D> {
    pub value: F,
    pub derivative: D,
}

impl<F: Fn(f64) -> f64, D: Fn(f64) -> f64> TimeFunction for Differentiable<F, D> {
    fn value(&self, t: f64) -> f64 {
        (self.value)(t)
    }
    fn derivative(&self, t: f64) -> f64 {
        (self.derivative)(t)
    }
}

/// Closed-form test functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticFunction {
    Constant(f64),
    /// `t^γ`, `γ > 0`.
    Power(f64),
    Sin,
    Exp,
}

impl AnalyticFunction {
    /// Parses the names used by the CLI: `const`, `t`, `t2`, `sqrt`, `sin`,
    /// `exp`, `t^<gamma>`.
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "const" => Some(Self::Constant(1.0)),
            "t" => Some(Self::Power(1.0)),
            "t2" => Some(Self::Power(2.0)),
            "sqrt" => Some(Self::Power(0.5)),
            "sin" => Some(Self::Sin),
            "exp" => Some(Self::Exp),
            _ => name
                .strip_prefix("t^")
                .and_then(|g| g.parse::<f64>().ok())
                .filter(|g| *g > 0.0)
                .map(Self::Power),
        }
    }

    /// Caputo derivative where a closed form exists:
    /// `D^α t^γ = Γ(γ+1)/Γ(γ+1−α) t^{γ−α}`, `D^α c = 0`.
    pub fn caputo_exact(&self, t: f64, alpha: f64) -> Option<f64> {
        match *self {
            Self::Constant(_) => Some(0.0),
            Self::Power(g) => Some(gamma(g + 1.0) / gamma(g + 1.0 - alpha) * t.powf(g - alpha)),
            Self::Sin | Self::Exp => None,
        }
    }
}

impl TimeFunction for AnalyticFunction {
    fn value(&self, t: f64) -> f64 {
        match *self {
            Self::Constant(c) => c,
            Self::Power(g) => t.powf(g),
            Self::Sin => t.sin(),
            Self::Exp => t.exp(),
        }
    }

    fn derivative(&self, t: f64) -> f64 {
        match *self {
            Self::Constant(_) => 0.0,
            Self::Power(g) => {
                if g == 1.0 {
                    1.0
                } else {
                    g * t.powf(g - 1.0)
                }
            }
            Self::Sin => t.cos(),
            Self::Exp => t.exp(),
        }
    }
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(domain(alloc::format!("Caputo derivative at t = {t}; need t > 0")))
    }
}

/// `∫_0^t (t−s)^{−α} k(t−s) g(s) ds` for bounded `k`.
fn singular_convolution(
    t: f64,
    alpha: f64,
    k: impl Fn(f64) -> f64,
    g: impl Fn(f64) -> f64,
    tol: Tolerance,
) -> Result<f64> {
    let half = 0.5 * t;
    let q = LEFT_POWER;
    let left = quad::integrate(
        |sigma| {
            let s = half * sigma.powf(q);
            let r = t - s;
            half * q * sigma.powf(q - 1.0) * r.powf(-alpha) * k(r) * g(s)
        },
        0.0,
        1.0,
        tol,
    )?;
    // t − s = τ^p: (t−s)^{−α} ds = p dτ exactly.
    let p = 1.0 / (1.0 - alpha);
    let right = quad::integrate(
        |tau| {
            let r = tau.powf(p);
            p * k(r) * g(t - r)
        },
        0.0,
        half.powf(1.0 - alpha),
        tol,
    )?;
    Ok(left.value + right.value)
}

/// `∫_0^t α (t−s)^{−α−1} e^{−μ(t−s)} (g(t) − g(s)) ds` for `g` Lipschitz at `t`.
fn difference_convolution(t: f64, alpha: f64, mu: f64, g: impl Fn(f64) -> f64, tol: Tolerance) -> Result<f64> {
    let gt = g(t);
    let half = 0.5 * t;
    let q = LEFT_POWER;
    let left = quad::integrate(
        |sigma| {
            let s = half * sigma.powf(q);
            let r = t - s;
            half * q * sigma.powf(q - 1.0) * alpha * r.powf(-alpha - 1.0) * (-mu * r).exp() * (gt - g(s))
        },
        0.0,
        1.0,
        tol,
    )?;

    let quotient = |r: f64| (gt - g(t - r)) / r;
    let rc = INNER_CUTOFF * t;
    let p = 1.0 / (1.0 - alpha);
    // t − s = r = τ^p: α r^{−α−1} dr = α p r^{−1} dτ.
    let middle = quad::integrate(
        |tau| {
            let r = tau.powf(p);
            alpha * p * (-mu * r).exp() * quotient(r)
        },
        rc.powf(1.0 - alpha),
        half.powf(1.0 - alpha),
        tol,
    )?;

    // Innermost piece: quotient ≈ q0 + q1 r and e^{−μr} ≈ 1 − μr on [0, r_c].
    let q_rc = quotient(rc);
    let q1 = (quotient(2.0 * rc) - q_rc) / rc;
    let q0 = q_rc - q1 * rc;
    let inner =
        alpha * (q0 * rc.powf(1.0 - alpha) / (1.0 - alpha) + (q1 - mu * q0) * rc.powf(2.0 - alpha) / (2.0 - alpha));

    Ok(left.value + middle.value + inner)
}

/// `D^α v(t) = (1/Γ(1−α)) ∫_0^t (t−s)^{−α} v′(s) ds`.
pub fn caputo_definition<V: TimeFunction + ?Sized>(v: &V, t: f64, order: FractionalOrder) -> Result<f64> {
    let alpha = order.fractional("caputo_definition")?;
    check_t(t)?;
    let integral = singular_convolution(t, alpha, |_| 1.0, |s| v.derivative(s), Tolerance::default())?;
    Ok(integral / gamma(1.0 - alpha))
}

/// Derivative-free form
/// `Γ(1−α) D^α v(t) = t^{−α}(v(t) − v(0)) + ∫_0^t α(t−s)^{−α−1}(v(t) − v(s)) ds`.
pub fn caputo_luchko<F: Fn(f64) -> f64>(v: F, t: f64, order: FractionalOrder) -> Result<f64> {
    let alpha = order.fractional("caputo_luchko")?;
    check_t(t)?;
    let integral = difference_convolution(t, alpha, 0.0, &v, Tolerance::default())?;
    Ok((t.powf(-alpha) * (v(t) - v(0.0)) + integral) / gamma(1.0 - alpha))
}

/// Tilted form: evaluates
/// `[ω(t) + Λ∞] v̂(t) + ∫_0^t ∂_s ω(t−s) (v̂(t) − v̂(s)) ds`
/// and recovers `D^α v(t) = (e^{μt} · that − t^{−α} v(0)) / Γ(1−α)`.
pub fn caputo_transformed<F: Fn(f64) -> f64>(v: F, t: f64, order: FractionalOrder, mu: f64) -> Result<f64> {
    let alpha = order.fractional("caputo_transformed")?;
    check_t(t)?;
    let omega = kernels::omega(t, order, mu)?;
    let linf = kernels::lambda_infty(order, mu)?;
    let v_hat = |s: f64| (-mu * s).exp() * v(s);
    let integral = difference_convolution(t, alpha, mu, v_hat, Tolerance::default())?;
    let rhs = (omega + linf) * v_hat(t) + integral;
    Ok(((mu * t).exp() * rhs - t.powf(-alpha) * v(0.0)) / gamma(1.0 - alpha))
}

/// Tilted form in terms of `∂_s v̂`: evaluates
/// `Λ∞ v̂(t) − Λ̃∞(t) v̂(0) + ∫_0^t ω(t−s) ∂_s v̂(s) ds`
/// and recovers `D^α v(t) = e^{μt} · that / Γ(1−α)`.
pub fn caputo_hat<V: TimeFunction + ?Sized>(v: &V, t: f64, order: FractionalOrder, mu: f64) -> Result<f64> {
    let alpha = order.fractional("caputo_hat")?;
    check_t(t)?;
    let linf = kernels::lambda_infty(order, mu)?;
    let tilde = kernels::lambda_tilde(t, order, mu)?;
    let d_hat = |s: f64| (-mu * s).exp() * (v.derivative(s) - mu * v.value(s));
    let integral = if mu == 0.0 {
        singular_convolution(t, alpha, |_| 1.0, d_hat, Tolerance::default())?
    } else {
        // ω(r) = r^{−α} · (r^α ω(r)), the second factor bounded near r = 0.
        singular_convolution(
            t,
            alpha,
            |r| {
                if r > 0.0 {
                    r.powf(alpha) * kernels::omega(r, order, mu).unwrap_or(f64::NAN)
                } else {
                    1.0
                }
            },
            d_hat,
            Tolerance::default(),
        )?
    };
    if integral.is_nan() {
        return Err(domain("caputo_hat: tail kernel evaluation failed"));
    }
    let rhs = linf * v.value(t) * (-mu * t).exp() - tilde * v.value(0.0) + integral;
    Ok((mu * t).exp() * rhs / gamma(1.0 - alpha))
}

/// Values of all four continuous evaluators at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Representations {
    pub definition: f64,
    pub luchko: f64,
    pub transformed: f64,
    pub hat: f64,
}

impl Representations {
    pub fn as_array(&self) -> [f64; 4] {
        [self.definition, self.luchko, self.transformed, self.hat]
    }

    /// Largest pairwise difference.
    pub fn spread(&self) -> f64 {
        let a = self.as_array();
        let mut worst = 0.0_f64;
        for i in 0..4 {
            for j in i + 1..4 {
                worst = worst.max((a[i] - a[j]).abs());
            }
        }
        worst
    }
}

pub fn all_representations<V: TimeFunction>(v: &V, t: f64, order: FractionalOrder, mu: f64) -> Result<Representations> {
    Ok(Representations {
        definition: caputo_definition(v, t, order)?,
        luchko: caputo_luchko(|s| v.value(s), t, order)?,
        transformed: caputo_transformed(|s| v.value(s), t, order, mu)?,
        hat: caputo_hat(v, t, order, mu)?,
    })
}

/// L1 weights `w_{n,k}`, `k = 1..=n`, returned at index `k − 1`:
///
/// `w_{n,k} = [(t_n − t_{k−1})^{1−α} − (t_n − t_k)^{1−α}] / (Γ(2−α) τ_k)`.
///
/// The difference of powers is formed as `B^β expm1(β log1p(τ/B))` so the
/// weights stay positive (and accurate) for tiny early steps.
pub fn l1_weights(times: &[f64], n: usize, alpha: f64) -> Vec<f64> {
    let beta = 1.0 - alpha;
    let g = gamma(2.0 - alpha);
    let tn = times[n];
    (1..=n)
        .map(|k| {
            let tau = times[k] - times[k - 1];
            let b = tn - times[k];
            let diff = if k == n || b <= 0.0 {
                tau.powf(beta)
            } else {
                b.powf(beta) * (beta * (tau / b).ln_1p()).exp_m1()
            };
            diff / (g * tau)
        })
        .collect()
}

fn check_node(samples: &TimeSamples, n: usize) -> Result<()> {
    if n == 0 {
        return Err(domain("discrete Caputo operator needs node index n >= 1"));
    }
    if n >= samples.values().len() {
        return Err(domain(alloc::format!(
            "node index {n} beyond mesh with {} steps",
            samples.mesh().steps()
        )));
    }
    Ok(())
}

fn l1_sum(values: &[f64], weights: &[f64]) -> f64 {
    weights
        .iter()
        .enumerate()
        .map(|(i, w)| w * (values[i + 1] - values[i]))
        .sum()
}

/// L1 approximation of `D^α v(t_n)`: `Σ_{k=1}^n w_{n,k} (v_k − v_{k−1})`.
pub fn caputo_l1(samples: &TimeSamples, order: FractionalOrder, n: usize) -> Result<f64> {
    let alpha = order.fractional("caputo_l1")?;
    check_node(samples, n)?;
    let w = l1_weights(samples.times(), n, alpha);
    Ok(l1_sum(samples.values(), &w))
}

/// `Σ_i q_i(t) D^{α_i}` with `1 ≥ α_1 > α_2 > … > α_ℓ > 0`.
#[derive(Clone)]
pub struct MultitermSpec {
    orders: Vec<FractionalOrder>,
    weights: Vec<TimeFn>,
    cq: f64,
}

impl core::fmt::Debug for MultitermSpec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("MultitermSpec")
            .field("orders", &self.orders)
            .field("cq", &self.cq)
            .finish_non_exhaustive()
    }
}

impl MultitermSpec {
    pub fn new(orders: Vec<FractionalOrder>, weights: Vec<TimeFn>, cq: f64) -> Result<Self> {
        kernels::check_multiterm_orders(&orders)?;
        if weights.len() != orders.len() {
            return Err(domain("one weight function per order is required"));
        }
        if !(cq > 0.0 && cq.is_finite()) {
            return Err(domain("C_q must be positive"));
        }
        Ok(Self { orders, weights, cq })
    }

    /// Constant weights; `C_q` is their sum.
    pub fn constant(orders: Vec<FractionalOrder>, weights: &[f64]) -> Result<Self> {
        if weights.iter().any(|q| !(*q >= 0.0)) {
            return Err(domain("multiterm weights must be >= 0"));
        }
        let cq = weights.iter().sum();
        let fns = weights.iter().map(|&q| time_fn(move |_| q)).collect();
        Self::new(orders, fns, cq)
    }

    pub fn orders(&self) -> &[FractionalOrder] {
        &self.orders
    }

    pub fn cq(&self) -> f64 {
        self.cq
    }

    pub fn weight(&self, i: usize, t: f64) -> f64 {
        (self.weights[i])(t)
    }

    /// Checks `q_i(t_n) ≥ 0` and `Σ_i q_i(t_n) ≥ C_q` at every mesh node.
    pub fn check_on_mesh(&self, mesh: &TemporalMesh) -> Result<()> {
        for &t in mesh.nodes() {
            let mut sum = 0.0;
            for i in 0..self.orders.len() {
                let q = self.weight(i, t);
                if !(q >= 0.0 && q.is_finite()) {
                    return Err(domain(alloc::format!("q_{i}({t}) = {q} is not >= 0")));
                }
                sum += q;
            }
            if sum < self.cq {
                return Err(domain(alloc::format!(
                    "sum of weights {sum} < C_q = {} at t = {t}",
                    self.cq
                )));
            }
        }
        Ok(())
    }
}

/// `∂_t + q(t) D^{α(t)}`, the order frozen at the evaluation time.
#[derive(Clone)]
pub struct VarOrderSpec {
    alpha_fn: TimeFn,
    q_fn: TimeFn,
    alpha_min: f64,
    alpha_max: f64,
}

impl core::fmt::Debug for VarOrderSpec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("VarOrderSpec")
            .field("alpha_min", &self.alpha_min)
            .field("alpha_max", &self.alpha_max)
            .finish_non_exhaustive()
    }
}

impl VarOrderSpec {
    /// `alpha_bounds = (α_min, α_max)` is the declared range of `α(t)`, a
    /// closed sub-interval of `(0, 1)`.
    pub fn new(alpha_fn: TimeFn, q_fn: TimeFn, alpha_bounds: (f64, f64)) -> Result<Self> {
        let (lo, hi) = alpha_bounds;
        if !(lo > 0.0 && hi < 1.0 && lo <= hi) {
            return Err(domain("variable-order bounds must satisfy 0 < min <= max < 1"));
        }
        Ok(Self {
            alpha_fn,
            q_fn,
            alpha_min: lo,
            alpha_max: hi,
        })
    }

    pub fn alpha(&self, t: f64) -> f64 {
        (self.alpha_fn)(t)
    }

    pub fn q(&self, t: f64) -> f64 {
        (self.q_fn)(t)
    }

    pub fn alpha_bounds(&self) -> (f64, f64) {
        (self.alpha_min, self.alpha_max)
    }

    fn alpha_checked(&self, t: f64) -> Result<f64> {
        let a = self.alpha(t);
        // Slack for rounding in formulas such as 0.4 + 0.2 t at the ends.
        let slack = 1e-12;
        if a >= self.alpha_min - slack && a <= self.alpha_max + slack && a > 0.0 && a < 1.0 {
            Ok(a)
        } else {
            Err(domain(alloc::format!(
                "alpha({t}) = {a} outside declared [{}, {}]",
                self.alpha_min,
                self.alpha_max
            )))
        }
    }

    /// Checks the declared order bounds and `q ≥ 0` at every mesh node.
    pub fn check_on_mesh(&self, mesh: &TemporalMesh) -> Result<()> {
        for &t in mesh.nodes() {
            self.alpha_checked(t)?;
            let q = self.q(t);
            if !(q >= 0.0 && q.is_finite()) {
                return Err(domain(alloc::format!("q({t}) = {q} is not >= 0")));
            }
        }
        Ok(())
    }
}

/// Time-derivative part of a problem.
#[derive(Debug, Clone)]
pub enum TimeOperator {
    Single(FractionalOrder),
    Multiterm(MultitermSpec),
    VarOrder(VarOrderSpec),
}

/// Discretisation of one term at one step.
#[derive(Debug, Clone, PartialEq)]
pub enum TermWeights {
    /// L1 weights `w_{n,1..=n}`.
    Fractional(Vec<f64>),
    /// Backward difference `1/τ_n`.
    FirstDerivative(f64),
}

impl TermWeights {
    /// Coefficient of `v_n`.
    pub fn diagonal(&self) -> f64 {
        match self {
            Self::Fractional(w) => w[w.len() - 1],
            Self::FirstDerivative(d) => *d,
        }
    }

    fn apply(&self, values: &[f64], n: usize) -> f64 {
        match self {
            Self::Fractional(w) => l1_sum(&values[..=n], w),
            Self::FirstDerivative(d) => d * (values[n] - values[n - 1]),
        }
    }
}

/// Weighted terms of the discrete operator at step `n`:
/// `D_n v = Σ q · Σ_k w_k (v_k − v_{k−1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepWeights {
    pub n: usize,
    pub terms: Vec<(f64, TermWeights)>,
}

impl StepWeights {
    /// Coefficient of `v_n` in `D_n v`.
    pub fn diagonal(&self) -> f64 {
        self.terms.iter().map(|(q, w)| q * w.diagonal()).sum()
    }

    /// Evaluates `D_n v` on the first `n + 1` entries of `values`.
    pub fn apply(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|(q, w)| q * w.apply(values, self.n)).sum()
    }

    /// History load `H_n` such that `D_n v = diagonal · v_n − H_n`, at one
    /// spatial node. `column(k)` returns `v_k` for `k < n`.
    pub fn history(&self, column: impl Fn(usize) -> f64) -> f64 {
        let n = self.n;
        let prev = column(n - 1);
        let mut total = 0.0;
        for (q, w) in &self.terms {
            let h = match w {
                TermWeights::Fractional(w) => {
                    let mut h = w[n - 1] * prev;
                    let mut lower = column(0);
                    for k in 1..n {
                        let upper = column(k);
                        h -= w[k - 1] * (upper - lower);
                        lower = upper;
                    }
                    h
                }
                TermWeights::FirstDerivative(d) => d * prev,
            };
            total += q * h;
        }
        total
    }
}

impl TimeOperator {
    /// Validates the operator on a mesh (weights, order bounds).
    pub fn check_on_mesh(&self, mesh: &TemporalMesh) -> Result<()> {
        match self {
            Self::Single(o) => o.fractional("single-term operator").map(|_| ()),
            Self::Multiterm(spec) => spec.check_on_mesh(mesh),
            Self::VarOrder(spec) => spec.check_on_mesh(mesh),
        }
    }

    /// Smallest order taking part, used for reporting.
    pub fn min_order(&self, mesh: &TemporalMesh) -> f64 {
        match self {
            Self::Single(o) => o.alpha(),
            Self::Multiterm(spec) => spec.orders().last().map(|o| o.alpha()).unwrap_or(1.0),
            Self::VarOrder(spec) => mesh.nodes().iter().map(|&t| spec.alpha(t)).fold(1.0, f64::min),
        }
    }

    pub fn step_weights(&self, times: &[f64], n: usize) -> Result<StepWeights> {
        if n == 0 || n >= times.len() {
            return Err(domain(alloc::format!("step index {n} out of range")));
        }
        let tn = times[n];
        let tau = times[n] - times[n - 1];
        let fractional = |alpha: f64| TermWeights::Fractional(l1_weights(times, n, alpha));
        let terms = match self {
            Self::Single(o) => {
                let alpha = o.fractional("single-term operator")?;
                alloc::vec![(1.0, fractional(alpha))]
            }
            Self::Multiterm(spec) => spec
                .orders()
                .iter()
                .enumerate()
                .map(|(i, o)| {
                    let w = if o.is_first_derivative() {
                        TermWeights::FirstDerivative(1.0 / tau)
                    } else {
                        fractional(o.alpha())
                    };
                    (spec.weight(i, tn), w)
                })
                .collect(),
            Self::VarOrder(spec) => {
                let alpha = spec.alpha_checked(tn)?;
                FractionalOrder::new(alpha)?;
                alloc::vec![
                    (1.0, TermWeights::FirstDerivative(1.0 / tau)),
                    (spec.q(tn), fractional(alpha)),
                ]
            }
        };
        Ok(StepWeights { n, terms })
    }

    /// Discrete operator applied to samples at node `n ≥ 1`.
    pub fn apply(&self, samples: &TimeSamples, n: usize) -> Result<f64> {
        check_node(samples, n)?;
        Ok(self.step_weights(samples.times(), n)?.apply(samples.values()))
    }
}

/// `Σ_i q_i(t_n) D_i v(t_n)`, with L1 for `α_i < 1` and a backward
/// difference for `α_i = 1`.
pub fn multiterm_caputo(samples: &TimeSamples, spec: &MultitermSpec, n: usize) -> Result<f64> {
    TimeOperator::Multiterm(spec.clone()).apply(samples, n)
}

/// `(v_n − v_{n−1})/τ_n + q(t_n) · L1_{α(t_n)} v(t_n)`.
pub fn varorder_caputo(samples: &TimeSamples, spec: &VarOrderSpec, n: usize) -> Result<f64> {
    TimeOperator::VarOrder(spec.clone()).apply(samples, n)
}
