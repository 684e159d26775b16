#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Result;
use crate::kernels::{kernel_table, lambda_infty_quadrature, FractionalOrder};

use super::VerificationReport;

/// Identity residual limit, relative to `1 + t^{−α}`.
const IDENTITY_TOL: f64 = 1e-8;
/// Absolute limit on `Λ∞` closed form vs its defining quadrature.
const LAMBDA_INFTY_TOL: f64 = 1e-10;

/// Checks over the tensor grid `alphas × mus × times`:
///
/// - `|Λ∞ − Λ(t) − t^{−α} + ω(t)| ≤ 1e-8 (1 + t^{−α})`, with `Λ(t)` from
///   direct quadrature;
/// - `|Λ∞ − quadrature| ≤ 1e-10`;
/// - `0 ≤ Λ̃∞(t) ≤ Λ∞`.
///
/// Each check is scaled by its own limit, so `worst_violation` is the
/// largest measured/limit ratio and the report passes when it is `≤ 1`.
/// The witness is `(row index, 0)` into the table in `α`, `μ`, `t` order.
pub fn verify_kernel_identities(alphas: &[f64], mus: &[f64], times: &[f64]) -> Result<VerificationReport> {
    let rows = kernel_table(alphas, mus, times)?;
    let mut worst = f64::NEG_INFINITY;
    let mut witness = 0;
    let mut bump = |ratio: f64, row: usize| {
        if ratio > worst || ratio.is_nan() {
            worst = ratio;
            witness = row;
        }
    };
    let per_alpha = mus.len() * times.len();
    for (ia, &alpha) in alphas.iter().enumerate() {
        let order = FractionalOrder::new(alpha)?;
        for (im, &mu) in mus.iter().enumerate() {
            let first = ia * per_alpha + im * times.len();
            let quad = lambda_infty_quadrature(order, mu)?;
            bump((rows[first].lambda_infty - quad).abs() / LAMBDA_INFTY_TOL, first);
        }
    }
    for (k, row) in rows.iter().enumerate() {
        let scale = 1.0 + row.t.powf(-row.alpha);
        bump(row.identity_residual.abs() / (IDENTITY_TOL * scale), k);
        // Bounds are exact statements; any excursion counts as a full failure.
        if row.lambda_tilde < 0.0 || row.lambda_tilde > row.lambda_infty {
            bump(f64::INFINITY, k);
        }
    }
    Ok(
        VerificationReport::new(worst, (witness, 0), 1.0).with_note(alloc::format!(
            "{} rows; ratios against identity {IDENTITY_TOL:e}(1+t^-a), Lambda_inf quadrature {LAMBDA_INFTY_TOL:e}",
            rows.len()
        )),
    )
}
