//! Numerical core for time-fractional parabolic equations with a reaction
//! coefficient of arbitrary sign.
//!
//! The crate is `no_std` (it needs `alloc`) and carries everything that is
//! pure computation:
//!
//! - [`kernels`]: the tilted kernels `ω(t)`, `Λ(t)`, `Λ∞`, `Λ̃∞(t)` and the
//!   admissible exponential tilts `μ` for single-term, multiterm and
//!   variable-order operators.
//! - [`caputo`]: four equivalent continuous representations of the Caputo
//!   derivative, the L1 discretisation and the multiterm / variable-order
//!   composites built on it.
//! - [`solver`]: implicit L1 time stepping for 1D problems
//!   `D_t^α u + L u + c u = f` with Dirichlet, Robin/Neumann and periodic
//!   boundaries.
//! - [`verify`]: seeded instance generation and checks of the maximum,
//!   comparison and sector inequalities on discrete solutions.
//!
//! IO, configuration files and the command line live in the `fracmax` crate.

// Modules import `num_traits::Float` for libm-backed f64 math. When another
// crate in the build pulls in std (dev-dependencies do), std's inherent f64
// methods shadow it, hence the `allow(unused_imports)` on those imports.
#![no_std]
// `!(x > 0.0)` is how argument checks also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Stencil and elimination loops read several arrays at the same index.
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod caputo;
mod error;
pub mod kernels;
pub mod linalg;
pub mod mesh;
pub mod quad;
pub mod solver;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use kernels::{FractionalOrder, TransformParams};
pub use mesh::{SpatialGrid, TemporalMesh, TimeSamples};
