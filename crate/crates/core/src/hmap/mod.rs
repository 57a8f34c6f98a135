//! Harmonic maps `f = g + conj(h)` of the unit disk.

mod dilatation;
mod poisson;
mod tangent;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::curves::CurveError;
use crate::holo::{DiskGrid, DiskPoint, HoloError, HoloFn};

pub use dilatation::{field_rows, heinz_inf, qc_constants, DilatationField, FieldRow, HeinzEstimate};
pub use poisson::{
    fourier_coefficients, poisson_extend, poisson_extend_modes, rkc_extend, vertexwise_linear,
    BoundaryFunction, RkcExtension,
};
pub use tangent::{tangent_arg_field, TangentArgField};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HmapError {
    #[error(transparent)]
    Holo(#[from] HoloError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("point {0} must lie in the open unit disk")]
    OutsideDisk(Complex64),
    #[error("boundary data needs a power-of-two sample count >= 64, got {0}")]
    BadSampleCount(usize),
    #[error("f_z vanishes at {0}")]
    DegenerateDerivative(Complex64),
    #[error("derivative is unbounded at {0}")]
    SingularPoint(Complex64),
    #[error("map is not sense-preserving at {z} (|mu| = {mu_abs})")]
    NotSensePreserving { z: Complex64, mu_abs: f64 },
    #[error("angular derivative vanishes at {0}")]
    VanishingAngularDerivative(Complex64),
    #[error("boundary samples do not trace the target monotonically (sample {0})")]
    NonMonotone(usize),
    #[error("map leaves the closed unit disk: |f({z})| = {modulus}")]
    NotSelfMap { z: Complex64, modulus: f64 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Io(String),
}

/// A map of the disk with Wirtinger derivatives.
pub trait PlanarMap: Sync {
    fn eval(&self, z: Complex64) -> Result<Complex64, HmapError>;

    /// `(f_z, f_zbar)` at `z`.
    fn wirtinger(&self, z: Complex64) -> Result<(Complex64, Complex64), HmapError>;

    fn jacobian(&self, z: Complex64) -> Result<f64, HmapError> {
        let (a, b) = self.wirtinger(z)?;
        Ok(a.norm_sqr() - b.norm_sqr())
    }
}

/// `f(z) = g(z) + conj(h(z))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarmonicMap {
    pub g: HoloFn,
    pub h: HoloFn,
}

impl HarmonicMap {
    pub fn new(g: HoloFn, h: HoloFn) -> Self {
        Self { g, h }
    }

    pub fn identity() -> Self {
        Self::conformal(HoloFn::Identity)
    }

    pub fn conformal(g: HoloFn) -> Self {
        Self { g, h: HoloFn::zero() }
    }

    /// `z + k·conj(z)`: constant dilatation `k`, boundary image an ellipse.
    pub fn affine(k: Complex64) -> Self {
        Self {
            g: HoloFn::Identity,
            h: HoloFn::Series(vec![Complex64::new(0.0, 0.0), k.conj()]),
        }
    }

    pub fn rotation(angle: f64) -> Self {
        Self::conformal(HoloFn::Series(vec![Complex64::new(0.0, 0.0), Complex64::cis(angle)]))
    }

    /// Gallery maps by name.
    pub fn builtin(name: &str) -> Option<Self> {
        Some(match name {
            "identity" => Self::identity(),
            "affine" => Self::affine(Complex64::new(0.3, 0.0)),
            "f0" => Self::conformal(HoloFn::LogExample),
            "mobius" => Self::conformal(HoloFn::Mobius(Complex64::new(0.5, 0.0))),
            "rotation" => Self::rotation(0.7),
            "z2" => Self::conformal(HoloFn::Monomial(2)),
            _ => return None,
        })
    }

    pub const BUILTIN_NAMES: [&'static str; 6] = ["identity", "affine", "f0", "mobius", "rotation", "z2"];

    /// `e^{ia} f + b`; the dilatation modulus is unchanged.
    pub fn post_rigid(&self, angle: f64, shift: Complex64) -> Option<Self> {
        let rot = Complex64::cis(angle);
        let zero = Complex64::new(0.0, 0.0);
        let g = HoloFn::Series(self.g.to_series(crate::holo::DEFAULT_SERIES_TRUNCATION))
            .linear_combination(rot, &HoloFn::constant(shift), Complex64::new(1.0, 0.0))?;
        // conj(h̃) = e^{ia} conj(h)  ⇒  h̃ = e^{-ia} h
        let h = HoloFn::Series(self.h.to_series(crate::holo::DEFAULT_SERIES_TRUNCATION))
            .linear_combination(rot.conj(), &HoloFn::zero(), zero)?;
        Some(Self { g, h })
    }
}

impl PlanarMap for HarmonicMap {
    fn eval(&self, z: Complex64) -> Result<Complex64, HmapError> {
        Ok(self.g.eval(z)? + self.h.eval(z)?.conj())
    }

    fn wirtinger(&self, z: Complex64) -> Result<(Complex64, Complex64), HmapError> {
        Ok((self.g.deriv(z)?, self.h.deriv(z)?.conj()))
    }
}

/// Wirtinger derivatives `(f_z, f_zbar) = (g'(z), conj(h'(z)))` inside the disk.
pub fn wirtinger(m: &HarmonicMap, z: Complex64) -> Result<(Complex64, Complex64), HmapError> {
    if z.norm() >= 1.0 {
        return Err(HmapError::OutsideDisk(z));
    }
    m.wirtinger(z)
}

/// `P(z, θ) = (1/2π) (1 - |z|²) / |z - e^{iθ}|²`.
pub fn poisson_kernel(z: Complex64, theta: f64) -> Result<f64, HmapError> {
    if !(z.norm() < 1.0) {
        return Err(HmapError::OutsideDisk(z));
    }
    Ok((1.0 - z.norm_sqr()) / (z - Complex64::cis(theta)).norm_sqr() / (2.0 * PI))
}

/// Derivative norms at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DfNorms {
    /// `|Df| = |f_z| + |f_zbar|`
    pub norm: f64,
    /// `l(Df) = ||f_z| - |f_zbar||`
    pub min_stretch: f64,
    /// `‖Df‖² = |f_x|² + |f_y|² = 2(|f_z|² + |f_zbar|²)`
    pub hilbert_schmidt_sq: f64,
}

pub fn df_norms<M: PlanarMap + ?Sized>(m: &M, z: Complex64) -> Result<DfNorms, HmapError> {
    if z.norm() >= 1.0 {
        return Err(HmapError::OutsideDisk(z));
    }
    let (a, b) = m.wirtinger(z)?;
    let (a, b) = (a.norm(), b.norm());
    Ok(DfNorms {
        norm: a + b,
        min_stretch: (a - b).abs(),
        hilbert_schmidt_sq: 2.0 * (a * a + b * b),
    })
}

/// `|Df|` as a disk field, for area integrals.
pub fn df_norm_field<'a, M: PlanarMap + ?Sized>(m: &'a M) -> impl Fn(&DiskPoint) -> f64 + Sync + 'a {
    move |pt| match m.wirtinger(pt.z) {
        Ok((a, b)) => a.norm() + b.norm(),
        Err(_) => f64::NAN,
    }
}

/// Minimum of the Jacobian over the grid with the point attaining it.
pub fn min_jacobian<M: PlanarMap + ?Sized>(m: &M, grid: &DiskGrid) -> Result<(f64, DiskPoint), HmapError> {
    use rayon::prelude::*;
    let pts = grid.points();
    let vals: Vec<Result<f64, HmapError>> = pts.par_iter().map(|p| m.jacobian(p.z)).collect();
    let mut best = (f64::INFINITY, pts[0]);
    for (v, p) in vals.into_iter().zip(pts) {
        let v = v?;
        if v < best.0 {
            best = (v, p);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::periodic_mean;

    fn c(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    #[test]
    fn kernel_values() {
        assert!((poisson_kernel(c(0.0, 0.0), 1.3).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!((poisson_kernel(c(0.5, 0.0), 0.0).unwrap() - 3.0 / (2.0 * PI)).abs() < 1e-12);
        let total = 2.0 * PI * periodic_mean(512, |t| poisson_kernel(c(0.3, 0.4), t).unwrap());
        assert!((total - 1.0).abs() < 1e-10);
        assert!(poisson_kernel(c(1.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn wirtinger_examples() {
        let (a, b) = wirtinger(&HarmonicMap::affine(c(0.3, 0.0)), c(0.2, -0.4)).unwrap();
        assert_eq!((a, b), (c(1.0, 0.0), c(0.3, 0.0)));
        let (a, b) = wirtinger(&HarmonicMap::builtin("f0").unwrap(), c(0.0, 0.0)).unwrap();
        assert_eq!((a, b), (c(1.0, 0.0), c(0.0, 0.0)));
        let (a, b) = wirtinger(&HarmonicMap::builtin("z2").unwrap(), c(0.5, 0.0)).unwrap();
        assert_eq!((a, b), (c(1.0, 0.0), c(0.0, 0.0)));
        assert!(wirtinger(&HarmonicMap::identity(), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn derivative_norms() {
        let d = df_norms(&HarmonicMap::identity(), c(0.1, 0.1)).unwrap();
        assert_eq!((d.norm, d.min_stretch, d.hilbert_schmidt_sq), (1.0, 1.0, 2.0));
        let d = df_norms(&HarmonicMap::affine(c(0.3, 0.0)), c(-0.5, 0.2)).unwrap();
        assert!((d.norm - 1.3).abs() < 1e-15);
        assert!((d.min_stretch - 0.7).abs() < 1e-15);
        assert!((d.hilbert_schmidt_sq - 2.18).abs() < 1e-14);
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let maps = [
            HarmonicMap::affine(c(0.3, 0.1)),
            HarmonicMap::builtin("f0").unwrap(),
            HarmonicMap::builtin("mobius").unwrap(),
            HarmonicMap::new(HoloFn::Series(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.2, 0.1)]), HoloFn::Series(vec![c(0.0, 0.0), c(0.0, 0.1), c(0.05, 0.0)])),
        ];
        let h = 1e-5;
        for m in &maps {
            for z in [c(0.2, 0.3), c(-0.5, 0.1), c(0.0, -0.7)] {
                let fx = (m.eval(z + h).unwrap() - m.eval(z - h).unwrap()) / (2.0 * h);
                let fy = (m.eval(z + c(0.0, h)).unwrap() - m.eval(z - c(0.0, h)).unwrap()) / (2.0 * h);
                let det = fx.re * fy.im - fx.im * fy.re;
                assert!((det - m.jacobian(z).unwrap()).abs() < 1e-6, "{m:?} at {z}");
            }
        }
    }

    #[test]
    fn post_rigid_motion_keeps_values_consistent() {
        let m = HarmonicMap::affine(c(0.25, 0.1));
        let moved = m.post_rigid(0.9, c(2.0, -1.0)).unwrap();
        let z = c(0.3, -0.2);
        let expected = Complex64::cis(0.9) * m.eval(z).unwrap() + c(2.0, -1.0);
        assert!((moved.eval(z).unwrap() - expected).norm() < 1e-14);
    }
}
