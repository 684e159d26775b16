use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Result};
use crate::mesh::SpatialGrid;
use crate::solver::{field_fn, CoefficientFields};

use super::instance::TrigField;
use super::VerificationReport;

/// Checks `⟨L w, χ₀⟩ ≥ −C_L (M − M′) ⟨1, χ₀⟩` at time `t` for the piecewise
/// linear interpolant of the nodal values `w`, with `χ₀ = (w − M′)⁺`,
/// `M = max w` and `C_L = max b²/(4a)` over nodes and cell midpoints.
///
/// `⟨L w, χ₀⟩` is taken in its integrated-by-parts form
/// `∫ a w′ χ₀′ + b w′ χ₀` (no boundary terms: `χ₀` vanishes at the ends).
/// `a` and `b` are frozen at cell midpoints, as in the assembled operator,
/// and every integral is exact for the piecewise linear `χ₀`, cells being
/// split where `w` crosses `M′`. With `b ≡ 0` the left side is a sum of
/// nonnegative terms.
///
/// The violation is `RHS − LHS`; `tolerance_used = tol (|LHS| + |RHS| + 1)`.
pub fn verify_sector_inequality(
    w: &[f64],
    coeffs: &CoefficientFields,
    grid: &SpatialGrid,
    t: f64,
    m_prime: f64,
    tol: f64,
) -> Result<VerificationReport> {
    let x = grid.nodes();
    if w.len() != x.len() {
        return Err(domain("grid function length does not match the grid"));
    }
    let (argmax, big_m) =
        w.iter().copied().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |best, (i, v)| if v > best.1 { (i, v) } else { best },
        );
    if w[0] > 0.0 || w[w.len() - 1] > 0.0 {
        return Err(domain("w must be <= 0 at the boundary nodes"));
    }
    if !(m_prime > 0.0 && m_prime < big_m) {
        return Err(domain(alloc::format!("M' = {m_prime} outside (0, max w = {big_m})")));
    }

    let mut c_l = 0.0_f64;
    let mut lhs = 0.0;
    let mut mass = 0.0;
    for i in 0..grid.intervals() {
        let (a_mid, b_mid) = ((coeffs.a)(grid.midpoint(i), t), (coeffs.b)(grid.midpoint(i), t));
        if !(a_mid > 0.0) {
            return Err(domain(alloc::format!("a = {a_mid} is not positive in cell {i}")));
        }
        c_l = c_l.max(b_mid * b_mid / (4.0 * a_mid));
        let a_node = (coeffs.a)(x[i], t);
        let b_node = (coeffs.b)(x[i], t);
        c_l = c_l.max(b_node * b_node / (4.0 * a_node));

        let h = grid.width(i);
        let (p, q) = (w[i] - m_prime, w[i + 1] - m_prime);
        let (len, cp, cq) = if p > 0.0 && q > 0.0 {
            (h, p, q)
        } else if p > 0.0 {
            (h * p / (p - q), p, 0.0)
        } else if q > 0.0 {
            (h * q / (q - p), 0.0, q)
        } else {
            continue;
        };
        let slope = (w[i + 1] - w[i]) / h;
        let integral = 0.5 * len * (cp + cq);
        lhs += a_mid * slope * slope * len + b_mid * slope * integral;
        mass += integral;
    }
    let last = x[x.len() - 1];
    let (a_end, b_end) = ((coeffs.a)(last, t), (coeffs.b)(last, t));
    c_l = c_l.max(b_end * b_end / (4.0 * a_end));

    let rhs = -c_l * (big_m - m_prime) * mass;
    let report = VerificationReport::new(rhs - lhs, (argmax, 0), tol * (lhs.abs() + rhs.abs() + 1.0));
    Ok(report.with_note(alloc::format!("lhs = {lhs:e}, rhs = {rhs:e}, C_L = {c_l:e}")))
}

/// A random input for [`verify_sector_inequality`].
#[derive(Clone)]
pub struct SectorCase {
    pub grid: SpatialGrid,
    pub w: Vec<f64>,
    pub coefficients: CoefficientFields,
    pub m_prime: f64,
    pub t: f64,
}

/// `w = sin(πx)(1 + 0.8 S(x)) − 0.1` with `S` binomially smoothed node
/// noise scaled to `[−1, 1]`, random `a ≥ 0.1`, `b` (or `b ≡ 0`) and
/// `M′ ∈ (0.05, 0.95) · max w`.
pub fn random_sector_case(seed: u64, intervals: usize, zero_convection: bool) -> Result<SectorCase> {
    let grid = SpatialGrid::uniform(0.0, 1.0, intervals)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(3);

    let mut noise: Vec<f64> = (0..=intervals).map(|_| rng.random_range(-1.0..1.0)).collect();
    for _ in 0..4 {
        let prev = noise.clone();
        for i in 1..intervals {
            noise[i] = 0.25 * prev[i - 1] + 0.5 * prev[i] + 0.25 * prev[i + 1];
        }
    }
    let peak = noise.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if peak > 0.0 {
        noise.iter_mut().for_each(|v| *v /= peak);
    }
    let w: Vec<f64> = grid
        .nodes()
        .iter()
        .zip(&noise)
        .map(|(&x, s)| (PI * x).sin().max(0.0) * (1.0 + 0.8 * s) - 0.1)
        .collect();
    let big_m = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let m_prime = big_m * rng.random_range(0.05..0.95);

    let sa = Arc::new(TrigField::random(&mut rng, 3, 0.0, false));
    let sb = Arc::new(TrigField::random(&mut rng, 3, 0.0, false));
    let b_amp = if zero_convection {
        0.0
    } else {
        rng.random_range(0.5..5.0)
    };
    let coefficients = CoefficientFields {
        a: field_fn(move |x, t| 0.1 + sa.unit(x, t)),
        b: field_fn(move |x, t| b_amp * sb.value(x, t)),
        c: field_fn(|_, _| 0.0),
        lambda_bound: 0.0,
        f: field_fn(|_, _| 0.0),
    };
    Ok(SectorCase {
        grid,
        w,
        coefficients,
        m_prime,
        t: 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(a: f64, b: f64) -> CoefficientFields {
        CoefficientFields {
            a: field_fn(move |_, _| a),
            b: field_fn(move |_, _| b),
            c: field_fn(|_, _| 0.0),
            lambda_bound: 0.0,
            f: field_fn(|_, _| 0.0),
        }
    }

    #[test]
    fn sine_with_unit_convection() {
        let grid = SpatialGrid::uniform(0.0, 1.0, 200).unwrap();
        let mut w: Vec<f64> = grid.nodes().iter().map(|&x| (PI * x).sin()).collect();
        w[200] = 0.0;
        let r = verify_sector_inequality(&w, &constant(1.0, 1.0), &grid, 0.0, 0.5, 1e-6).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn pure_diffusion_left_side_is_nonnegative() {
        let grid = SpatialGrid::uniform(0.0, 1.0, 50).unwrap();
        let w: Vec<f64> = grid.nodes().iter().map(|&x| (PI * x).sin() - 0.2).collect();
        let r = verify_sector_inequality(&w, &constant(0.7, 0.0), &grid, 0.0, 0.3, 0.0).unwrap();
        assert!(r.worst_violation <= 0.0 && r.passed);
    }

    #[test]
    fn bad_level_is_a_domain_error() {
        let grid = SpatialGrid::uniform(0.0, 1.0, 10).unwrap();
        let mut w: Vec<f64> = grid.nodes().iter().map(|&x| (PI * x).sin()).collect();
        w[10] = 0.0;
        assert!(verify_sector_inequality(&w, &constant(1.0, 0.0), &grid, 0.0, 1.5, 1e-6).is_err());
        assert!(verify_sector_inequality(&w, &constant(1.0, 0.0), &grid, 0.0, 0.0, 1e-6).is_err());
    }

    #[test]
    fn random_cases_pass() {
        for seed in 0..20 {
            let c = random_sector_case(seed, 64, seed % 2 == 0).unwrap();
            let r = verify_sector_inequality(&c.w, &c.coefficients, &c.grid, c.t, c.m_prime, 1e-6).unwrap();
            assert!(r.passed, "{seed}: {r:?}");
        }
    }
}
