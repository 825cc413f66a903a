//! Spectral laboratory for Robin-type eigenvalue problems of the plate
//! operator Δ²u − αΔu = λu on interval, rectangle, and disk geometries.
//!
//! The crate assembles the energy form on C¹ finite element spaces, solves
//! the resulting symmetric pencils with an in-house dense eigensolver, and
//! layers parameter sweeps, divergence-rate fits, certificate bounds,
//! Steklov/buckling duality checks, and boundary shape-derivative evaluation
//! on top. The `cli` module exposes all of it behind a JSON-configured
//! command-line front end with deterministic outputs.

pub mod assembly1d;
pub mod eigsolve;
pub mod hermite;
pub mod linalg;
pub mod model;
pub mod quad;
