//! The argument field `U(z) = arg((1/z) ∂_φ f(z))` and its boundary values.
//!
//! On a circle `|z| = r` the angular derivative is
//! `∂_φ f = i(z f_z - conj(z) f_zbar)`. The continuous branch of `U` is
//! fixed by unwrapping around the innermost ring, starting from the
//! principal value at angle zero, and then continued radially outward along
//! each ray.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{HmapError, PlanarMap};
use crate::curves::{wrap_angle, JordanCurve};
use crate::holo::{DiskGrid, GridMeta};

#[derive(Debug, Clone, Serialize)]
pub struct TangentArgField {
    pub radii: Vec<f64>,
    pub angles: Vec<f64>,
    /// Continuous branch of `U`, radius-major: `values[i * n_angles + k]`.
    pub values: Vec<f64>,
    /// `max_φ |U(r_max e^{iφ}) - (β(φ) - φ)|`, reduced mod 2π.
    pub boundary_error: f64,
    /// Angle attaining the boundary error.
    pub witness_angle: f64,
    pub grid: GridMeta,
}

impl TangentArgField {
    pub fn at(&self, radius_index: usize, angle_index: usize) -> f64 {
        self.values[radius_index * self.angles.len() + angle_index]
    }

    /// Largest jump of `U` between radially adjacent samples.
    pub fn max_radial_jump(&self) -> f64 {
        let na = self.angles.len();
        (1..self.radii.len())
            .flat_map(|i| (0..na).map(move |k| (i, k)))
            .map(|(i, k)| (self.at(i, k) - self.at(i - 1, k)).abs())
            .fold(0.0, f64::max)
    }
}

fn raw_argument<M: PlanarMap + ?Sized>(m: &M, z: Complex64) -> Result<Complex64, HmapError> {
    let (fz, fzb) = m.wirtinger(z)?;
    let (jac_a, jac_b) = (fz.norm(), fzb.norm());
    if jac_a <= jac_b {
        return Err(HmapError::NotSensePreserving {
            z,
            mu_abs: if jac_a > 0.0 { jac_b / jac_a } else { f64::INFINITY },
        });
    }
    let dphi = Complex64::i() * (z * fz - z.conj() * fzb);
    if dphi.norm() < 1e-14 {
        return Err(HmapError::VanishingAngularDerivative(z));
    }
    Ok(dphi / z)
}

/// Computes `U` on the punctured grid and compares its outermost ring with
/// the tangent angle `β` of `target` at the boundary image `f(e^{iφ})`.
pub fn tangent_arg_field<M: PlanarMap + ?Sized>(
    m: &M,
    grid: &DiskGrid,
    target: &JordanCurve,
    target_nodes: usize,
) -> Result<TangentArgField, HmapError> {
    let grid = grid.clone().punctured();
    let radii: Vec<f64> = grid.radii().iter().map(|r| r.r).collect();
    let angles = grid.angles();
    let (nr, na) = (radii.len(), angles.len());

    let inner: Vec<Complex64> = angles
        .iter()
        .map(|&t| raw_argument(m, Complex64::from_polar(radii[0], t)))
        .collect::<Result<_, _>>()?;
    let mut start = Vec::with_capacity(na);
    let mut acc = inner[0].arg();
    start.push(acc);
    for k in 1..na {
        acc += wrap_angle(inner[k].arg() - inner[k - 1].arg());
        start.push(acc);
    }

    let columns: Vec<Vec<f64>> = (0..na)
        .into_par_iter()
        .map(|k| {
            let mut col = Vec::with_capacity(nr);
            let mut u = start[k];
            let mut prev = inner[k].arg();
            col.push(u);
            for &r in &radii[1..] {
                let a = raw_argument(m, Complex64::from_polar(r, angles[k]))?.arg();
                u += wrap_angle(a - prev);
                prev = a;
                col.push(u);
            }
            Ok(col)
        })
        .collect::<Result<_, HmapError>>()?;
    let mut values = vec![0.0; nr * na];
    for (k, col) in columns.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            values[i * na + k] = *v;
        }
    }

    let param = target.resample_arclength(target_nodes)?;
    let tangent = param.tangent_field();
    let errors: Vec<f64> = angles
        .par_iter()
        .enumerate()
        .map(|(k, &phi)| {
            let p = m.eval(Complex64::cis(phi))?;
            let s = param.locate(p);
            let beta = tangent.angle_at(s, param.total_length);
            let u = values[(nr - 1) * na + k];
            Ok(wrap_angle(u - (beta - phi)).abs())
        })
        .collect::<Result<_, HmapError>>()?;
    let (mut boundary_error, mut witness_angle) = (0.0, 0.0);
    for (k, e) in errors.into_iter().enumerate() {
        if e > boundary_error {
            boundary_error = e;
            witness_angle = angles[k];
        }
    }
    debug_assert!(witness_angle < TAU);
    Ok(TangentArgField {
        radii,
        angles,
        values,
        boundary_error,
        witness_angle,
        grid: grid.meta(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hmap::HarmonicMap;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn identity_has_constant_offset() {
        let grid = DiskGrid::standard().with_max_radius(0.999);
        let f = tangent_arg_field(&HarmonicMap::identity(), &grid, &JordanCurve::unit_circle(), 4096).unwrap();
        assert!(f.values.iter().all(|u| (u - FRAC_PI_2).abs() < 1e-6));
        assert!(f.boundary_error < 1e-6, "{}", f.boundary_error);
    }

    #[test]
    fn rotation_keeps_offset() {
        let grid = DiskGrid::new(40, 128).unwrap().with_max_radius(0.999);
        let f = tangent_arg_field(&HarmonicMap::rotation(0.7), &grid, &JordanCurve::unit_circle(), 4096).unwrap();
        assert!(f.values.iter().all(|u| (u - FRAC_PI_2 - 0.7).abs() < 1e-6));
        assert!(f.boundary_error < 1e-6);
    }

    #[test]
    fn affine_map_onto_ellipse() {
        let grid = DiskGrid::standard().with_max_radius(0.999);
        let m = HarmonicMap::affine(Complex64::new(0.3, 0.0));
        let ellipse = JordanCurve::builtin("ellipse").unwrap();
        let f = tangent_arg_field(&m, &grid, &ellipse, 4096).unwrap();
        assert!(f.boundary_error < 1e-2, "{}", f.boundary_error);
        // oracle: U = arg(i(1 - 0.3 e^{-2iφ})), independent of r
        for (k, &phi) in f.angles.iter().enumerate() {
            let exact = (Complex64::i() * (1.0 - 0.3 * Complex64::cis(-2.0 * phi))).arg();
            assert!(wrap_angle(f.at(f.radii.len() - 1, k) - exact).abs() < 1e-12);
        }
        assert!(f.max_radial_jump() < 1e-12);
    }

    #[test]
    fn orientation_reversing_map_is_rejected() {
        let grid = DiskGrid::new(30, 64).unwrap();
        let m = HarmonicMap::new(crate::holo::HoloFn::zero(), crate::holo::HoloFn::Identity);
        assert!(matches!(
            tangent_arg_field(&m, &grid, &JordanCurve::unit_circle(), 256),
            Err(HmapError::NotSensePreserving { .. })
        ));
    }
}
