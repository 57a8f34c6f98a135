//! Numerical laboratory for harmonic and quasiconformal mappings of the unit disk.
//!
//! The crate is organised bottom-up:
//!
//! - [`curves`]: Jordan curves, arc-length resampling, tangent angles, the
//!   modulus of continuity of the tangent and the arc-chord constant.
//! - [`holo`]: holomorphic functions on the disk, disk grids and quadrature,
//!   Hardy/Bergman/weighted Bloch norms, boundary Hölder constants and `C(α)`.
//! - [`hmap`]: harmonic maps `f = g + conj(h)`, Poisson extension of boundary
//!   data, Wirtinger derivatives, dilatation and the tangent-argument field.
//! - [`verify`]: verdicts certifying inequalities on concrete maps.
//! - [`cli`]: the batch experiment runner behind the `hqc` binary.

pub mod cli;
pub mod curves;
pub mod hmap;
pub mod holo;
pub mod quad;
pub mod verify;

pub use num_complex::Complex64;
