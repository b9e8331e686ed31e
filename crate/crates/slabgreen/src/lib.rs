//! Dirichlet Green's function of the slab R^2 x [0,1] and the numerical
//! machinery built on it: angular kernel integrals, axisymmetric Biot-Savart
//! reconstruction of the swirl, thin-domain log-interpolation inequality
//! sweeps, sample-based verification of the kernel bounds, and a steady
//! axisymmetric Navier-Stokes solver with a decay/maximum-principle
//! diagnostic battery.

pub mod fields;
pub mod quad;
pub mod sampling;
pub mod slab_green;
pub mod special;

pub use fields::{AxiGrid, AxiScalarField, AxiVectorField, ZMode};
pub use slab_green::{KernelResult, SlabPoint, TruncationPolicy};
