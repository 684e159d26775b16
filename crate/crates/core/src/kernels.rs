//! Tilted Caputo kernels and admissible exponential tilts.
//!
//! With `v̂(t) = e^{−μt} v(t)` the Caputo derivative picks up the kernels
//!
//! ```text
//! ω(t)   = ∫_t^∞ α s^{−α−1} e^{−μs} ds            (tail kernel)
//! Λ(t)   = ∫_0^t α s^{−α−1} (1 − e^{−μs}) ds
//! Λ∞     = Γ(1−α) μ^α
//! Λ̃∞(t) = t^{−α} e^{−μt} − ω(t)
//! ```
//!
//! related by `Λ∞ − Λ(t) = t^{−α} − ω(t)`. All of them reduce to the
//! untilted case at `μ = 0` (`ω(t) = t^{−α}`, everything else zero).

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{domain, Error, Result};
use crate::quad::{self, Tolerance};
use crate::special::{self, gamma, upper_incomplete_gamma};

/// Order `α` of a Caputo derivative.
///
/// Single-term kernels need `0 < α < 1`; `α = 1` (a first derivative) is
/// only admitted inside multiterm and variable-order operators.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    /// Order in the open interval `(0, 1)`.
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha < 1.0 {
            Ok(Self(alpha))
        } else {
            Err(domain(alloc::format!("fractional order {alpha} not in (0, 1)")))
        }
    }

    /// Order in `(0, 1]`, for terms of a composite operator.
    pub fn composite(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha <= 1.0 {
            Ok(Self(alpha))
        } else {
            Err(domain(alloc::format!("fractional order {alpha} not in (0, 1]")))
        }
    }

    pub fn alpha(self) -> f64 {
        self.0
    }

    pub fn is_first_derivative(self) -> bool {
        self.0 == 1.0
    }

    pub(crate) fn fractional(self, what: &str) -> Result<f64> {
        if self.0 < 1.0 {
            Ok(self.0)
        } else {
            Err(domain(alloc::format!("{what} requires 0 < alpha < 1")))
        }
    }
}

/// Reaction bound `λ` and tilt `μ` of the substitution `u = e^{μt} û`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformParams {
    lambda: f64,
    mu: f64,
    probe: bool,
}

impl TransformParams {
    /// Admissible pair: `λ ≥ 0`, `μ ≥ 0` and `μ^α ≥ λ`.
    pub fn new(lambda: f64, mu: f64, order: FractionalOrder) -> Result<Self> {
        let p = Self::probe(lambda, mu)?;
        if !p.is_admissible(order) {
            return Err(domain(alloc::format!(
                "mu^alpha = {} < lambda = {lambda}",
                mu.powf(order.alpha())
            )));
        }
        Ok(Self { probe: false, ..p })
    }

    /// Pair that skips the `μ^α ≥ λ` check, for threshold probing.
    pub fn probe(lambda: f64, mu: f64) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(domain("lambda must be finite and >= 0"));
        }
        check_mu(mu)?;
        Ok(Self {
            lambda,
            mu,
            probe: true,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn is_probe(&self) -> bool {
        self.probe
    }

    pub fn is_admissible(&self, order: FractionalOrder) -> bool {
        self.mu.powf(order.alpha()) >= self.lambda
    }
}

fn check_mu(mu: f64) -> Result<()> {
    if mu >= 0.0 && mu.is_finite() {
        Ok(())
    } else {
        Err(domain(alloc::format!("tilt mu = {mu} must be finite and >= 0")))
    }
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(domain(alloc::format!("kernel evaluated at t = {t}; need t > 0")))
    }
}

/// `Λ∞ = Γ(1−α) μ^α`.
pub fn lambda_infty(order: FractionalOrder, mu: f64) -> Result<f64> {
    let alpha = order.fractional("lambda_infty")?;
    check_mu(mu)?;
    if mu == 0.0 {
        return Ok(0.0);
    }
    Ok(gamma(1.0 - alpha) * mu.powf(alpha))
}

/// Tail kernel `ω(t) = ∫_t^∞ α s^{−α−1} e^{−μs} ds = α μ^α Γ(−α, μt)`.
pub fn omega(t: f64, order: FractionalOrder, mu: f64) -> Result<f64> {
    let alpha = order.fractional("omega")?;
    check_t(t)?;
    check_mu(mu)?;
    if mu == 0.0 {
        return Ok(t.powf(-alpha));
    }
    match omega_incomplete_gamma(t, alpha, mu) {
        Ok(w) => Ok(w),
        Err(Error::NoConvergence { .. }) => omega_quadrature(t, alpha, mu),
        Err(e) => Err(e),
    }
}

fn omega_incomplete_gamma(t: f64, alpha: f64, mu: f64) -> Result<f64> {
    let x = mu * t;
    if special::use_continued_fraction(-alpha, x) {
        // α μ^α e^{−x} x^{−α} · CF  =  α t^{−α} e^{−x} · CF
        Ok(alpha * t.powf(-alpha) * (-x).exp() * special::upper_gamma_scaled(-alpha, x)?)
    } else {
        // α Γ(−α, x) = x^{−α} e^{−x} − Γ(1−α, x)
        Ok(t.powf(-alpha) * (-x).exp() - mu.powf(alpha) * upper_incomplete_gamma(1.0 - alpha, x)?)
    }
}

/// `ω(t) = e^{−μt} [t^{−α} − ∫_0^∞ (t + σ/μ)^{−α} e^{−σ} dσ]`, after one
/// integration by parts; used when the incomplete gamma fails to converge.
fn omega_quadrature(t: f64, alpha: f64, mu: f64) -> Result<f64> {
    let tail = quad::integrate_to_infinity(
        |s| (t + s / mu).powf(-alpha) * (-s).exp(),
        0.0,
        Tolerance::new(1e-14, 1e-13),
    )?;
    Ok((-mu * t).exp() * (t.powf(-alpha) - tail.value))
}

/// `Λ(t) = ∫_0^t α s^{−α−1}(1 − e^{−μs}) ds`, from `Λ(t) = Λ∞ − t^{−α} + ω(t)`.
///
/// For `μt < 1/2` the identity cancels badly, so the convergent series
/// `α t^{−α} Σ_{k≥1} (−1)^{k+1} (μt)^k / (k! (k−α))` is summed instead.
pub fn lambda_fn(t: f64, order: FractionalOrder, mu: f64) -> Result<f64> {
    let alpha = order.fractional("lambda_fn")?;
    check_t(t)?;
    check_mu(mu)?;
    if mu == 0.0 {
        return Ok(0.0);
    }
    let x = mu * t;
    if x < 0.5 {
        let mut sum = 0.0;
        let mut power = 1.0;
        for k in 1..60 {
            power *= x / k as f64;
            let term = power / (k as f64 - alpha);
            sum += if k % 2 == 1 { term } else { -term };
            if term < f64::EPSILON * sum.abs() {
                break;
            }
        }
        return Ok(alpha * t.powf(-alpha) * sum);
    }
    Ok(lambda_infty(order, mu)? - t.powf(-alpha) + omega(t, order, mu)?)
}

/// `Λ̃∞(t) = t^{−α} e^{−μt} − ω(t) = μ^α Γ(1−α, μt)`, for `t > 0`.
pub fn lambda_tilde(t: f64, order: FractionalOrder, mu: f64) -> Result<f64> {
    let alpha = order.fractional("lambda_tilde")?;
    check_t(t)?;
    check_mu(mu)?;
    if mu == 0.0 {
        return Ok(0.0);
    }
    Ok(mu.powf(alpha) * upper_incomplete_gamma(1.0 - alpha, mu * t)?)
}

/// Smallest admissible tilt for a single-term operator, `λ^{1/α}`.
pub fn mu_threshold(lambda: f64, order: FractionalOrder) -> Result<f64> {
    let alpha = order.fractional("mu_threshold")?;
    check_lambda(lambda)?;
    if lambda == 0.0 {
        return Ok(0.0);
    }
    Ok(lambda.powf(1.0 / alpha))
}

/// `max_i (λ/C_q)^{1/α_i}`; any larger `μ` gives `λ < Σ q_i μ^{α_i}` for all
/// weights with `q_i ≥ 0`, `Σ q_i ≥ C_q`.
pub fn mu_threshold_multiterm(lambda: f64, cq: f64, orders: &[FractionalOrder]) -> Result<f64> {
    check_lambda(lambda)?;
    if !(cq > 0.0 && cq.is_finite()) {
        return Err(domain("C_q must be positive"));
    }
    check_multiterm_orders(orders)?;
    if lambda == 0.0 {
        return Ok(0.0);
    }
    let ratio = lambda / cq;
    Ok(orders.iter().map(|o| ratio.powf(1.0 / o.alpha())).fold(0.0, f64::max))
}

pub(crate) fn check_multiterm_orders(orders: &[FractionalOrder]) -> Result<()> {
    if orders.is_empty() {
        return Err(domain("multiterm operator needs at least one order"));
    }
    if orders.windows(2).any(|w| w[1].alpha() >= w[0].alpha()) {
        return Err(domain("multiterm orders must decrease strictly"));
    }
    Ok(())
}

/// Root `μ*` of `μ + q_0 μ^{α_0} = λ`; any `μ > μ*` satisfies
/// `λ < μ + q_0 μ^{α_0}`.
pub fn mu_threshold_varorder(lambda: f64, q0: f64, alpha0: f64) -> Result<f64> {
    check_lambda(lambda)?;
    if !(q0 >= 0.0 && q0.is_finite()) {
        return Err(domain("q0 must be finite and >= 0"));
    }
    FractionalOrder::new(alpha0)?;
    if lambda == 0.0 {
        return Ok(0.0);
    }
    if q0 == 0.0 {
        return Ok(lambda);
    }
    let g = |mu: f64| mu + q0 * mu.powf(alpha0) - lambda;
    let (mut lo, mut hi) = (0.0_f64, lambda);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if hi - lo > 1e-12 * hi {
        return Err(Error::NoConvergence {
            what: "varorder threshold bisection",
            achieved: (hi - lo) / hi,
        });
    }
    Ok(if g(lo).abs() < g(hi).abs() { lo } else { hi })
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda >= 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(domain(alloc::format!("lambda = {lambda} must be finite and >= 0")))
    }
}

/// `Λ∞` from its defining integral `μ^α ∫_0^∞ α s^{−α−1}(1 − e^{−s}) ds`.
///
/// `[0, 1]` is integrated after `s = σ^{1/(1−α)}`; on `[1, ∞)` the algebraic
/// part integrates to exactly 1 and only the exponential part is left to
/// quadrature.
pub fn lambda_infty_quadrature(order: FractionalOrder, mu: f64) -> Result<f64> {
    let alpha = order.fractional("lambda_infty_quadrature")?;
    check_mu(mu)?;
    if mu == 0.0 {
        return Ok(0.0);
    }
    let tol = Tolerance::new(1e-13, 1e-13);
    let p = 1.0 / (1.0 - alpha);
    let head = quad::integrate(
        |sigma| {
            let s = sigma.powf(p);
            if s == 0.0 {
                alpha * p
            } else {
                alpha * p * -(-s).exp_m1() / s
            }
        },
        0.0,
        1.0,
        tol,
    )?;
    let tail = quad::integrate_to_infinity(|s| alpha * s.powf(-alpha - 1.0) * (-s).exp(), 1.0, tol)?;
    Ok(mu.powf(alpha) * (head.value + 1.0 - tail.value))
}

/// `Λ(t)` by direct quadrature of its defining integral (after
/// `s = σ^{1/(1−α)}`, which makes the integrand bounded).
pub fn lambda_fn_quadrature(t: f64, order: FractionalOrder, mu: f64) -> Result<f64> {
    let alpha = order.fractional("lambda_fn_quadrature")?;
    check_t(t)?;
    check_mu(mu)?;
    if mu == 0.0 {
        return Ok(0.0);
    }
    let p = 1.0 / (1.0 - alpha);
    let upper = t.powf(1.0 - alpha);
    let r = quad::integrate(
        |sigma| {
            let s = sigma.powf(p);
            if s == 0.0 {
                alpha * p * mu
            } else {
                alpha * p * -(-mu * s).exp_m1() / s
            }
        },
        0.0,
        upper,
        Tolerance::new(1e-14, 1e-13),
    )?;
    Ok(r.value)
}

/// One row of kernel values, as tabulated by the `kernels` subcommand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelRow {
    pub alpha: f64,
    pub mu: f64,
    pub t: f64,
    pub omega: f64,
    pub lambda: f64,
    pub lambda_infty: f64,
    pub lambda_tilde: f64,
    /// `Λ∞ − Λ(t) − t^{−α} + ω(t)` with `Λ(t)` from direct quadrature.
    pub identity_residual: f64,
}

/// Evaluates every kernel at each `(α, μ, t)` of the tensor grid.
pub fn kernel_table(alphas: &[f64], mus: &[f64], times: &[f64]) -> Result<Vec<KernelRow>> {
    let mut rows = Vec::with_capacity(alphas.len() * mus.len() * times.len());
    for &alpha in alphas {
        let order = FractionalOrder::new(alpha)?;
        for &mu in mus {
            let linf = lambda_infty(order, mu)?;
            for &t in times {
                let w = omega(t, order, mu)?;
                let direct = lambda_fn_quadrature(t, order, mu)?;
                rows.push(KernelRow {
                    alpha,
                    mu,
                    t,
                    omega: w,
                    lambda: lambda_fn(t, order, mu)?,
                    lambda_infty: linf,
                    lambda_tilde: lambda_tilde(t, order, mu)?,
                    identity_residual: linf - direct - t.powf(-alpha) + w,
                });
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(a: f64) -> FractionalOrder {
        FractionalOrder::new(a).unwrap()
    }

    #[test]
    fn lambda_infty_half_is_sqrt_pi() {
        let v = lambda_infty(order(0.5), 1.0).unwrap();
        assert!((v - 1.772_453_850_905_516).abs() < 1e-14);
        assert_eq!(lambda_infty(order(0.3), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn untilted_reductions() {
        let w = omega(2.0, order(0.4), 0.0).unwrap();
        assert!((w - 0.757_858_283_255_199).abs() < 1e-15);
        assert_eq!(lambda_fn(3.0, order(0.4), 0.0).unwrap(), 0.0);
        assert_eq!(lambda_tilde(3.0, order(0.4), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn nonpositive_time_is_rejected() {
        for t in [0.0, -1.0, f64::NAN] {
            assert!(omega(t, order(0.5), 1.0).is_err());
            assert!(lambda_fn(t, order(0.5), 1.0).is_err());
            assert!(lambda_tilde(t, order(0.5), 1.0).is_err());
        }
        assert!(lambda_infty(FractionalOrder::composite(1.0).unwrap(), 1.0).is_err());
    }

    #[test]
    fn omega_is_continuous_across_branch_switch() {
        let o = order(0.35);
        let below = omega(1.0 - 1e-12, o, 1.0).unwrap();
        let above = omega(1.0 + 1e-12, o, 1.0).unwrap();
        assert!((below - above).abs() < 1e-12);
    }

    #[test]
    fn lambda_series_and_identity_meet() {
        let o = order(0.6);
        let below = lambda_fn(0.5 - 1e-12, o, 1.0).unwrap();
        let above = lambda_fn(0.5 + 1e-12, o, 1.0).unwrap();
        assert!((below - 1.062_836_498_585_138_4).abs() < 1e-14);
        assert!((above - 1.062_836_498_586_569_7).abs() < 1e-14);
    }

    #[test]
    fn thresholds() {
        assert_eq!(mu_threshold(0.0, order(0.4)).unwrap(), 0.0);
        assert!((mu_threshold(4.0, order(0.5)).unwrap() - 16.0).abs() < 1e-12);
        let m = mu_threshold_multiterm(2.0, 0.5, &[order(0.9), order(0.4)]).unwrap();
        assert!((m - 32.0).abs() < 1e-12);
        assert!(mu_threshold_multiterm(1.0, 1.0, &[]).is_err());
        assert!(mu_threshold_multiterm(1.0, 1.0, &[order(0.3), order(0.4)]).is_err());
        assert!(mu_threshold_multiterm(1.0, 0.0, &[order(0.3)]).is_err());
        assert_eq!(mu_threshold_varorder(2.0, 0.0, 0.5).unwrap(), 2.0);
        assert_eq!(mu_threshold_varorder(0.0, 1.0, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn transform_params_admissibility() {
        assert!(TransformParams::new(2.0, 4.0, order(0.5)).is_ok());
        assert!(TransformParams::new(2.0, 3.9, order(0.5)).is_err());
        let p = TransformParams::probe(2.0, 1.0).unwrap();
        assert!(p.is_probe() && !p.is_admissible(order(0.5)));
        assert!(TransformParams::probe(-1.0, 1.0).is_err());
    }
}
