//! Numerical laboratory for axisymmetric stationary surfaces of the weighted
//! area functional `E_α(Σ) = ∫_Σ |p|^α dΣ`.
//!
//! A surface is stationary when its mean curvature (sum of principal
//! curvatures) satisfies `H = α⟨ν, p⟩ / |p|²`. The crate computes the
//! rotational solutions that cross the rotation axis orthogonally, classifies
//! them, and mechanizes the closed-form nonexistence results for planes,
//! spheres, cylinders, offset rotation axes and helicoidal surfaces.
//!
//! Layout:
//!
//! - [`geometry`]: [`Alpha`], surface samples, the stationary residual and the
//!   symmetries (rotations about the origin, dilations) that preserve it.
//! - [`verifiers`]: closed-form checks driven by trigonometric coefficient
//!   decompositions of the residual.
//! - [`singular`]: the singular radial problem at the axis, solved by Picard
//!   iteration of an integral operator.
//! - [`ode`]: Dormand–Prince 5(4) stepper with dense output.
//! - [`arclength`]: generating curves in arc-length form with event detection.
//! - [`phase`]: the autonomous `(ψ, θ)` system, equilibria and manifolds.
//! - [`classify`]: qualitative verdicts with quantitative evidence.
//! - [`mesh`]: surfaces of revolution, OBJ and SVG output.
//! - [`cli`]: the `stationary` command-line driver.

pub mod arclength;
pub mod classify;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod io;
pub mod mesh;
pub mod ode;
pub mod phase;
pub mod quadrature;
pub mod singular;
pub mod svg;
pub mod verifiers;

pub use error::{Error, Result};
pub use geometry::{Alpha, Point3, Regime, SurfaceSample};
