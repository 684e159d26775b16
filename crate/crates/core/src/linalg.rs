//! Tridiagonal and cyclic tridiagonal systems.

use alloc::vec;
use alloc::vec::Vec;

/// Row `i` reads `lower[i] x[i−1] + diag[i] x[i] + upper[i] x[i+1]`.
///
/// For a cyclic matrix `lower[0]` is the entry in column `n−1` of row 0 and
/// `upper[n−1]` the entry in column 0 of row `n−1`; for a plain tridiagonal
/// matrix both are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn zeros(n: usize) -> Self {
        Self {
            lower: vec![0.0; n],
            diag: vec![0.0; n],
            upper: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn mul_vec(&self, x: &[f64], cyclic: bool) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.lower[i] * x[i - 1];
                } else if cyclic {
                    y += self.lower[0] * x[n - 1];
                }
                if i + 1 < n {
                    y += self.upper[i] * x[i + 1];
                } else if cyclic {
                    y += self.upper[n - 1] * x[0];
                }
                y
            })
            .collect()
    }

    /// First row violating "positive diagonal, nonpositive off-diagonals,
    /// strict row diagonal dominance", if any. Such matrices are M-matrices.
    pub fn m_matrix_violation(&self, cyclic: bool) -> Option<usize> {
        let n = self.len();
        (0..n).find(|&i| {
            let lo = if i > 0 || cyclic { self.lower[i] } else { 0.0 };
            let up = if i + 1 < n || cyclic { self.upper[i] } else { 0.0 };
            !(self.diag[i] > 0.0 && lo <= 0.0 && up <= 0.0 && self.diag[i] + lo + up > 0.0)
        })
    }
}

/// Thomas elimination; `None` on a zero or non-finite pivot.
pub fn solve_tridiagonal(m: &Tridiagonal, rhs: &[f64]) -> Option<Vec<f64>> {
    let n = m.len();
    assert_eq!(rhs.len(), n, "right-hand side length");
    if n == 0 {
        return Some(Vec::new());
    }
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut pivot = m.diag[0];
    if pivot == 0.0 || !pivot.is_finite() {
        return None;
    }
    c[0] = m.upper[0] / pivot;
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = m.diag[i] - m.lower[i] * c[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return None;
        }
        c[i] = if i + 1 < n { m.upper[i] / pivot } else { 0.0 };
        d[i] = (rhs[i] - m.lower[i] * d[i - 1]) / pivot;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        let next = x[i + 1];
        x[i] -= c[i] * next;
    }
    Some(x)
}

/// Cyclic tridiagonal solve by a Sherman–Morrison correction of two Thomas
/// solves. Needs `n ≥ 3`.
pub fn solve_cyclic(m: &Tridiagonal, rhs: &[f64]) -> Option<Vec<f64>> {
    let n = m.len();
    if n < 3 {
        return None;
    }
    let top_right = m.lower[0];
    let bottom_left = m.upper[n - 1];
    let gamma = -m.diag[0];
    if gamma == 0.0 {
        return None;
    }
    let mut t = m.clone();
    t.diag[0] -= gamma;
    t.diag[n - 1] -= bottom_left * top_right / gamma;

    let y = solve_tridiagonal(&t, rhs)?;
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = bottom_left;
    let z = solve_tridiagonal(&t, &u)?;

    let factor = top_right / gamma;
    let denom = 1.0 + z[0] + factor * z[n - 1];
    if denom == 0.0 || !denom.is_finite() {
        return None;
    }
    let scale = (y[0] + factor * y[n - 1]) / denom;
    Some(y.iter().zip(&z).map(|(yi, zi)| yi - scale * zi).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplace_like(n: usize, shift: f64) -> Tridiagonal {
        let mut m = Tridiagonal::zeros(n);
        for i in 0..n {
            m.lower[i] = -1.0;
            m.diag[i] = 2.0 + shift;
            m.upper[i] = -1.0;
        }
        m
    }

    #[test]
    fn thomas_recovers_known_solution() {
        let m = laplace_like(7, 0.5);
        let x: Vec<f64> = (0..7).map(|i| (i as f64).sin()).collect();
        let b = m.mul_vec(&x, false);
        let got = solve_tridiagonal(&m, &b).unwrap();
        for (g, w) in got.iter().zip(&x) {
            assert!((g - w).abs() < 1e-13);
        }
    }

    #[test]
    fn cyclic_recovers_known_solution() {
        let mut m = laplace_like(9, 0.1);
        m.lower[0] = -0.7;
        m.upper[8] = -0.3;
        let x: Vec<f64> = (0..9).map(|i| 1.0 + (0.3 * i as f64).cos()).collect();
        let b = m.mul_vec(&x, true);
        let got = solve_cyclic(&m, &b).unwrap();
        for (g, w) in got.iter().zip(&x) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_pivot_is_reported() {
        let mut m = laplace_like(3, 0.0);
        m.diag[0] = 0.0;
        assert!(solve_tridiagonal(&m, &[1.0, 1.0, 1.0]).is_none());
    }

    #[test]
    fn m_matrix_check() {
        assert_eq!(laplace_like(5, 0.1).m_matrix_violation(false), None);
        // Without a shift the interior rows only tie; the plain (non-cyclic)
        // end rows are still strictly dominant but interior ones are not.
        assert_eq!(laplace_like(5, 0.0).m_matrix_violation(false), Some(1));
        let mut m = laplace_like(5, 1.0);
        m.upper[2] = 0.1;
        assert_eq!(m.m_matrix_violation(false), Some(2));
    }
}
