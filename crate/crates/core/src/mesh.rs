//! Temporal meshes, spatial grids and sampled time functions.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{domain, Result};

/// Time mesh `0 = t_0 < t_1 < … < t_N = T`.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalMesh {
    nodes: Vec<f64>,
    grading: Option<f64>,
}

impl TemporalMesh {
    /// Power-graded mesh `t_n = T (n/N)^r`.
    pub fn graded(final_time: f64, steps: usize, grading: f64) -> Result<Self> {
        if !(final_time > 0.0 && final_time.is_finite()) {
            return Err(domain("temporal mesh needs a positive finite final time"));
        }
        if steps < 2 {
            return Err(domain("temporal mesh needs at least 2 steps"));
        }
        if !(grading >= 1.0 && grading.is_finite()) {
            return Err(domain("mesh grading must be >= 1"));
        }
        let n = steps as f64;
        let mut nodes: Vec<f64> = (0..=steps).map(|k| final_time * (k as f64 / n).powf(grading)).collect();
        nodes[steps] = final_time;
        let mesh = Self {
            nodes,
            grading: Some(grading),
        };
        mesh.check()?;
        Ok(mesh)
    }

    pub fn uniform(final_time: f64, steps: usize) -> Result<Self> {
        Self::graded(final_time, steps, 1.0)
    }

    /// Arbitrary nodes; must start at exactly 0 and increase strictly.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        let mesh = Self { nodes, grading: None };
        mesh.check()?;
        Ok(mesh)
    }

    /// Default grading `min((2 − α)/α, 4)` for an order `α ∈ (0, 1)`.
    pub fn default_grading(alpha: f64) -> f64 {
        ((2.0 - alpha) / alpha).clamp(1.0, 4.0)
    }

    fn check(&self) -> Result<()> {
        if self.nodes.len() < 3 {
            return Err(domain("temporal mesh needs N >= 2"));
        }
        if self.nodes[0] != 0.0 {
            return Err(domain("temporal mesh must start at t = 0"));
        }
        if self.nodes.iter().any(|t| !t.is_finite()) {
            return Err(domain("temporal mesh nodes must be finite"));
        }
        if self.nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(domain("temporal mesh nodes must increase strictly"));
        }
        Ok(())
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Number of steps `N`.
    pub fn steps(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn final_time(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn grading(&self) -> Option<f64> {
        self.grading
    }

    /// `τ_n = t_n − t_{n−1}` for `n ≥ 1`.
    pub fn step(&self, n: usize) -> f64 {
        self.nodes[n] - self.nodes[n - 1]
    }

    pub fn max_step(&self) -> f64 {
        (1..self.nodes.len()).map(|n| self.step(n)).fold(0.0, f64::max)
    }
}

/// Spatial grid `x_0 < x_1 < … < x_M` on `[x_L, x_R]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialGrid {
    nodes: Vec<f64>,
}

impl SpatialGrid {
    pub fn uniform(left: f64, right: f64, intervals: usize) -> Result<Self> {
        if !(left.is_finite() && right.is_finite() && right > left) {
            return Err(domain("spatial grid needs finite left < right"));
        }
        if intervals < 2 {
            return Err(domain("spatial grid needs M >= 2"));
        }
        let h = (right - left) / intervals as f64;
        let mut nodes: Vec<f64> = (0..=intervals).map(|i| left + h * i as f64).collect();
        nodes[intervals] = right;
        Self::from_nodes(nodes)
    }

    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(domain("spatial grid needs M >= 2"));
        }
        if nodes.iter().any(|x| !x.is_finite()) {
            return Err(domain("spatial grid nodes must be finite"));
        }
        if nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(domain("spatial grid nodes must increase strictly"));
        }
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Number of intervals `M`.
    pub fn intervals(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn left(&self) -> f64 {
        self.nodes[0]
    }

    pub fn right(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Width of cell `[x_i, x_{i+1}]`.
    pub fn width(&self, i: usize) -> f64 {
        self.nodes[i + 1] - self.nodes[i]
    }

    pub fn midpoint(&self, i: usize) -> f64 {
        0.5 * (self.nodes[i] + self.nodes[i + 1])
    }
}

/// Values of a scalar function at the nodes of a [`TemporalMesh`].
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSamples {
    mesh: TemporalMesh,
    values: Vec<f64>,
}

impl TimeSamples {
    pub fn new(mesh: TemporalMesh, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.nodes().len() {
            return Err(domain(alloc::format!(
                "{} samples for {} mesh nodes",
                values.len(),
                mesh.nodes().len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(domain("time samples must be finite"));
        }
        Ok(Self { mesh, values })
    }

    /// Samples `f` at every mesh node.
    pub fn from_fn(mesh: TemporalMesh, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = mesh.nodes().iter().map(|&t| f(t)).collect();
        Self::new(mesh, values)
    }

    pub fn mesh(&self) -> &TemporalMesh {
        &self.mesh
    }

    pub fn times(&self) -> &[f64] {
        self.mesh.nodes()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_mesh_hits_endpoints() {
        let m = TemporalMesh::graded(2.0, 10, 3.0).unwrap();
        assert_eq!(m.nodes()[0], 0.0);
        assert_eq!(m.final_time(), 2.0);
        assert!((m.nodes()[5] - 2.0 * 0.125).abs() < 1e-15);
        assert!(m.step(1) < m.step(10));
    }

    #[test]
    fn default_grading_is_capped() {
        assert_eq!(TemporalMesh::default_grading(0.5), 3.0);
        assert_eq!(TemporalMesh::default_grading(0.1), 4.0);
        assert_eq!(TemporalMesh::default_grading(0.9), (1.1f64 / 0.9).max(1.0));
    }

    #[test]
    fn rejects_bad_meshes() {
        assert!(TemporalMesh::uniform(1.0, 1).is_err());
        assert!(TemporalMesh::from_nodes(alloc::vec![0.1, 0.5, 1.0]).is_err());
        assert!(TemporalMesh::from_nodes(alloc::vec![0.0, 0.5, 0.5]).is_err());
        assert!(SpatialGrid::uniform(0.0, 1.0, 1).is_err());
        assert!(SpatialGrid::from_nodes(alloc::vec![0.0, 1.0, 0.5]).is_err());
        let mesh = TemporalMesh::uniform(1.0, 4).unwrap();
        assert!(TimeSamples::new(mesh, alloc::vec![0.0; 3]).is_err());
    }
}
