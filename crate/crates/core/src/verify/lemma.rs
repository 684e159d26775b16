use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::caputo::{caputo_l1, l1_weights};
use crate::error::{domain, Result};
use crate::kernels::{omega, FractionalOrder};
use crate::mesh::{TemporalMesh, TimeSamples};
use crate::special::gamma;

use super::{Classification, VerificationReport};

/// L1 at node `n` on the submesh of nodes `0` and `k ≤ n` with `n − k` even.
/// Its distance from the full-mesh value estimates the discretisation error.
fn l1_coarse(samples: &TimeSamples, alpha: f64, n: usize) -> f64 {
    let (t, v) = (samples.times(), samples.values());
    let mut idx: Vec<usize> = (1..=n).filter(|k| (n - k).is_multiple_of(2)).collect();
    idx.insert(0, 0);
    let times: Vec<f64> = idx.iter().map(|&k| t[k]).collect();
    let w = l1_weights(&times, idx.len() - 1, alpha);
    w.iter().zip(idx.windows(2)).map(|(w, k)| w * (v[k[1]] - v[k[0]])).sum()
}

/// Checks the single-time maximum statement for sampled `v`: if `v(0) ≤ 0`,
/// `D^α v(t₀) − λ v(t₀) ≤ 0` and `μ^α ≥ λ`, then `v̂ = e^{−μt} v` cannot
/// attain a positive maximum over `[0, t₀]` at `t₀`.
///
/// `D^α v(t₀)` is the L1 value. The hypotheses are accepted with a slack
/// `ε` made of the L1 error estimate (full mesh vs every other node) plus a
/// rounding floor; neither depends on `tol`, so shrinking `tol` can only turn
/// a pass into a fail. A hypothesis slack `ε` allows `v̂(t₀)` to reach
/// `Γ(1−α) e^{−μt₀} ε / ω(t₀)`, which is added to `tol` to form
/// `tolerance_used`.
///
/// The violation is `v̂(t₀)` when `v̂(t₀) ≥ max_{[0,t₀]} v̂ − tolerance_used`
/// and `−∞` otherwise. A `v̂(t₀)` that is positive but within the tolerance
/// counts as a tie and is noted.
pub fn verify_lemma1(
    samples: &TimeSamples,
    order: FractionalOrder,
    lambda: f64,
    mu: f64,
    t0_index: usize,
    tol: f64,
) -> Result<VerificationReport> {
    lemma1(samples, order, lambda, mu, t0_index, tol).map(|(r, _)| r)
}

/// [`verify_lemma1`] plus whether the hypotheses held.
fn lemma1(
    samples: &TimeSamples,
    order: FractionalOrder,
    lambda: f64,
    mu: f64,
    t0_index: usize,
    tol: f64,
) -> Result<(VerificationReport, bool)> {
    let alpha = order.fractional("verify_lemma1")?;
    let n = t0_index;
    if n == 0 || n >= samples.values().len() {
        return Err(domain(alloc::format!(
            "t0 index {n} outside 1..={}",
            samples.values().len() - 1
        )));
    }
    if !(lambda >= 0.0 && mu >= 0.0 && lambda.is_finite() && mu.is_finite()) {
        return Err(domain("lambda and mu must be finite and >= 0"));
    }
    let (t, v) = (samples.times(), samples.values());
    let t0 = t[n];
    let scale = v[..=n].iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let rounding = 64.0 * f64::EPSILON * (1.0 + scale) * (1.0 + lambda);

    let d_fine = caputo_l1(samples, order, n)?;
    let d_coarse = l1_coarse(samples, alpha, n);
    let eps = (d_fine - d_coarse).abs() + rounding * (1.0 + t0.powf(-alpha));
    let residual = d_fine - lambda * v[n];

    let slack = gamma(1.0 - alpha) * (-mu * t0).exp() * eps / omega(t0, order, mu)?;
    let tol_used = tol + slack;
    let probe = mu.powf(alpha) < lambda;

    let mut notes: Vec<String> = Vec::new();
    if v[0] > rounding {
        notes.push(alloc::format!("hypothesis v(0) <= 0 fails: v(0) = {}", v[0]));
    }
    if residual > eps {
        notes.push(alloc::format!(
            "hypothesis D^a v - lambda v <= 0 fails: {residual:e} > slack {eps:e}"
        ));
    }
    let applicable = notes.is_empty();

    let hat: Vec<f64> = t[..=n]
        .iter()
        .zip(&v[..=n])
        .map(|(&s, &x)| (-mu * s).exp() * x)
        .collect();
    let peak = hat.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let at_t0 = hat[n];
    let mut worst = if at_t0 >= peak - tol_used {
        at_t0
    } else {
        f64::NEG_INFINITY
    };
    if !applicable {
        worst = f64::NEG_INFINITY;
    } else if worst > 0.0 && worst <= tol_used {
        notes.push(alloc::format!(
            "v_hat(t0) = {worst:e} ties 0 within {tol_used:e}; not a violation"
        ));
    }

    let mut report = VerificationReport::new(worst, (0, n), tol_used);
    report.notes = notes;
    report.classification = if probe {
        Classification::HypothesisViolatedProbe
    } else if applicable {
        Classification::Checked
    } else {
        Classification::NotApplicable
    };
    Ok((report, applicable))
}

/// Candidate functions for [`probe_threshold`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProbeFamily {
    /// `v(t) = t^β`.
    Power(f64),
    /// `v(t) = e^{μt}(t − T)`: `v̂` increases to 0 at `T`.
    TiltedRamp,
}

impl ProbeFamily {
    pub fn label(self) -> String {
        match self {
            Self::Power(b) => alloc::format!("t^{b}"),
            Self::TiltedRamp => String::from("exp(mu t)(t-T)"),
        }
    }

    fn sample(self, mesh: &TemporalMesh, mu: f64) -> Result<TimeSamples> {
        let end = mesh.final_time();
        match self {
            Self::Power(b) => TimeSamples::from_fn(mesh.clone(), |t| t.powf(b)),
            Self::TiltedRamp => TimeSamples::from_fn(mesh.clone(), |t| (mu * t).exp() * (t - end)),
        }
    }
}

/// One `(μ, family member)` row of a threshold probe, aggregated over every
/// `t₀` of the mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRow {
    pub mu: f64,
    pub family: ProbeFamily,
    /// `t₀` indices whose hypotheses held.
    pub applicable: usize,
    /// Applicable `t₀` whose conclusion failed.
    pub violations: usize,
    /// Largest `v̂(t₀) − tolerance_used` over applicable `t₀`.
    pub worst_excess: f64,
    pub witness_t0: usize,
    pub classification: Classification,
}

impl ProbeRow {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Runs [`verify_lemma1`] at every `t₀` for each `μ` and family member.
/// Rows with `μ^α ≥ λ` are expected to pass; rows below are informational.
pub fn probe_threshold(
    lambda: f64,
    order: FractionalOrder,
    family: &[ProbeFamily],
    mus: &[f64],
    mesh: &TemporalMesh,
    tol: f64,
) -> Result<Vec<ProbeRow>> {
    if !(lambda > 0.0) {
        return Err(domain("threshold probe needs lambda > 0"));
    }
    let mut rows = Vec::with_capacity(mus.len() * family.len());
    for &mu in mus {
        for &member in family {
            let samples = member.sample(mesh, mu)?;
            let mut row = ProbeRow {
                mu,
                family: member,
                applicable: 0,
                violations: 0,
                worst_excess: f64::NEG_INFINITY,
                witness_t0: 0,
                classification: if mu.powf(order.alpha()) < lambda {
                    Classification::HypothesisViolatedProbe
                } else {
                    Classification::Checked
                },
            };
            for n in 1..=mesh.steps() {
                let (r, applicable) = lemma1(&samples, order, lambda, mu, n, tol)?;
                if !applicable {
                    continue;
                }
                row.applicable += 1;
                if !r.passed {
                    row.violations += 1;
                }
                let excess = r.worst_violation - r.tolerance_used;
                if excess > row.worst_excess {
                    row.worst_excess = excess;
                    row.witness_t0 = n;
                }
            }
            rows.push(row);
        }
    }
    Ok(rows)
}
