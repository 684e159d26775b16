use alloc::vec;
use alloc::vec::Vec;

use crate::error::{domain, Result};
use crate::linalg::Tridiagonal;
use crate::mesh::{SpatialGrid, TemporalMesh};

use super::{Boundaries, BoundaryCondition, CoefficientFields};

/// Discrete `L(t)` on a grid, boundary rows included.
///
/// Applying the operator to nodal values `u` means `matrix · u − load`. Rows
/// listed in `fixed` are Dirichlet nodes: their matrix rows are left empty
/// and the caller pins the value instead.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialOperator {
    pub matrix: Tridiagonal,
    pub load: Vec<f64>,
    pub fixed: Vec<(usize, f64)>,
    pub cyclic: bool,
}

impl SpatialOperator {
    /// Number of unknowns (`M + 1`, or `M` for periodic grids).
    pub fn unknowns(&self) -> usize {
        self.matrix.len()
    }
}

fn diffusion_at(coeffs: &CoefficientFields, x: f64, t: f64) -> Result<f64> {
    let a = (coeffs.a)(x, t);
    if a > 0.0 && a.is_finite() {
        Ok(a)
    } else {
        Err(domain(alloc::format!("diffusion a({x}, {t}) = {a} is not positive")))
    }
}

/// Fills row `row` with the interior stencil for node `x` whose neighbours
/// sit at distances `hl`, `hr`, with `a` taken at the cell midpoints
/// `mid_l`, `mid_r`.
#[allow(clippy::too_many_arguments)]
fn interior_row(
    m: &mut Tridiagonal,
    row: usize,
    coeffs: &CoefficientFields,
    x: f64,
    (hl, mid_l): (f64, f64),
    (hr, mid_r): (f64, f64),
    t: f64,
    upwind: bool,
) -> Result<()> {
    let al = diffusion_at(coeffs, mid_l, t)?;
    let ar = diffusion_at(coeffs, mid_r, t)?;
    let hbar = 0.5 * (hl + hr);
    let mut lower = -al / (hl * hbar);
    let mut upper = -ar / (hr * hbar);
    let mut diag = -(lower + upper);
    let b = (coeffs.b)(x, t);
    if upwind {
        if b > 0.0 {
            diag += b / hl;
            lower -= b / hl;
        } else {
            diag -= b / hr;
            upper += b / hr;
        }
    } else {
        lower -= b / (hl + hr);
        upper += b / (hl + hr);
    }
    m.lower[row] = lower;
    m.diag[row] = diag;
    m.upper[row] = upper;
    Ok(())
}

/// Conservative second-order diffusion with `a` at cell midpoints, upwind
/// (or centred) convection. Reaction is not included.
///
/// Robin/Neumann nodes use a half-cell balance of
/// `ν a u_x + g u = data`; their convection difference points into the
/// domain, so the row is an M-matrix row only while `|b| h ≤ 2a`.
pub fn assemble_spatial(
    coeffs: &CoefficientFields,
    grid: &SpatialGrid,
    t: f64,
    upwind: bool,
    boundaries: &Boundaries,
) -> Result<SpatialOperator> {
    let x = grid.nodes();
    let m_int = grid.intervals();

    if let Boundaries::Periodic = boundaries {
        let mut m = Tridiagonal::zeros(m_int);
        let wrap = (grid.width(m_int - 1), grid.midpoint(m_int - 1));
        for i in 0..m_int {
            let left = if i == 0 {
                wrap
            } else {
                (grid.width(i - 1), grid.midpoint(i - 1))
            };
            let right = (grid.width(i), grid.midpoint(i));
            interior_row(&mut m, i, coeffs, x[i], left, right, t, upwind)?;
        }
        return Ok(SpatialOperator {
            matrix: m,
            load: vec![0.0; m_int],
            fixed: Vec::new(),
            cyclic: true,
        });
    }

    let mut m = Tridiagonal::zeros(m_int + 1);
    for i in 1..m_int {
        let left = (grid.width(i - 1), grid.midpoint(i - 1));
        let right = (grid.width(i), grid.midpoint(i));
        interior_row(&mut m, i, coeffs, x[i], left, right, t, upwind)?;
    }
    let mut load = vec![0.0; m_int + 1];
    let mut fixed = Vec::new();

    let Boundaries::Separated { left, right } = boundaries else {
        unreachable!()
    };
    for (node, bc) in [(0, left), (m_int, right)] {
        match bc {
            BoundaryCondition::Dirichlet { value } => fixed.push((node, value(t))),
            BoundaryCondition::Robin { weight, data } => {
                let g = weight(t);
                if !(g >= 0.0) {
                    return Err(domain(alloc::format!("Robin weight g({t}) = {g} < 0")));
                }
                let (h, mid, inward) = if node == 0 {
                    (grid.width(0), grid.midpoint(0), 1)
                } else {
                    (grid.width(m_int - 1), grid.midpoint(m_int - 1), -1)
                };
                let a = diffusion_at(coeffs, mid, t)?;
                // One-sided convection towards the interior neighbour.
                let b_over_h = (coeffs.b)(x[node], t) / h * inward as f64;
                let off = -2.0 * a / (h * h) + b_over_h;
                m.diag[node] = 2.0 * a / (h * h) + 2.0 * g / h - b_over_h;
                if node == 0 {
                    m.upper[0] = off;
                } else {
                    m.lower[node] = off;
                }
                load[node] = 2.0 * data(t) / h;
            }
        }
    }
    Ok(SpatialOperator {
        matrix: m,
        load,
        fixed,
        cyclic: false,
    })
}

/// `C_L = max b² / (4a)` over all grid × mesh nodes (in 1D the smallest
/// eigenvalue of the diffusion matrix is `a` itself).
pub fn compute_cl(coeffs: &CoefficientFields, grid: &SpatialGrid, mesh: &TemporalMesh) -> Result<f64> {
    let mut worst = 0.0_f64;
    for &t in mesh.nodes() {
        for &x in grid.nodes() {
            let a = diffusion_at(coeffs, x, t)?;
            let b = (coeffs.b)(x, t);
            worst = worst.max(b * b / (4.0 * a));
        }
    }
    Ok(worst)
}
