use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{HarmonicMap, HmapError, PlanarMap};
use crate::holo::{DiskGrid, DiskPoint, GridMeta};

/// Second complex dilatation `μ = f_zbar / f_z` sampled on a grid.
#[derive(Debug, Clone, Serialize)]
pub struct DilatationField {
    pub points: Vec<DiskPoint>,
    pub mu: Vec<Complex64>,
    /// `max |μ|` over the grid.
    pub k_hat: f64,
    /// `(1 + k_hat) / (1 - k_hat)`, infinite once `k_hat ≥ 1`.
    #[serde(rename = "K_hat")]
    pub big_k_hat: f64,
    pub witness: DiskPoint,
    pub grid: GridMeta,
}

impl DilatationField {
    /// Sense-preserving and quasiconformal on the grid.
    pub fn is_quasiconformal(&self) -> bool {
        self.k_hat < 1.0
    }
}

/// Dilatation field and grid quasiconformality constants. Points with
/// `|μ| ≥ 1` do not raise an error; they classify the map as
/// non-quasiconformal, with `witness` locating the worst point.
pub fn qc_constants<M: PlanarMap + ?Sized>(m: &M, grid: &DiskGrid) -> Result<DilatationField, HmapError> {
    let points = grid.points();
    let mu: Vec<Complex64> = points
        .par_iter()
        .map(|p| {
            let (fz, fzb) = m.wirtinger(p.z)?;
            if fz.norm() < 1e-14 {
                return Err(HmapError::DegenerateDerivative(p.z));
            }
            Ok(fzb / fz)
        })
        .collect::<Result<_, _>>()?;
    let mut k_hat = f64::NEG_INFINITY;
    let mut witness = points[0];
    for (p, m) in points.iter().zip(&mu) {
        if m.norm() > k_hat {
            k_hat = m.norm();
            witness = *p;
        }
    }
    let big_k_hat = if k_hat < 1.0 {
        (1.0 + k_hat) / (1.0 - k_hat)
    } else {
        f64::INFINITY
    };
    Ok(DilatationField {
        points,
        mu,
        k_hat,
        big_k_hat,
        witness,
        grid: grid.meta(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeinzEstimate {
    /// Grid minimum of `‖Df‖²`.
    pub value: f64,
    pub witness: DiskPoint,
    pub grid: GridMeta,
}

/// Grid infimum of the Hilbert–Schmidt norm `‖Df‖²` for a self-map of the
/// disk. The self-map hypothesis is checked on the boundary samples of the
/// grid's angular resolution with tolerance `1e-3`.
pub fn heinz_inf(m: &HarmonicMap, grid: &DiskGrid) -> Result<HeinzEstimate, HmapError> {
    for t in grid.angles() {
        let z = Complex64::cis(t);
        let w = m.eval(z)?;
        if w.norm() > 1.0 + 1e-3 {
            return Err(HmapError::NotSelfMap { z, modulus: w.norm() });
        }
    }
    let points = grid.points();
    let vals: Vec<f64> = points
        .par_iter()
        .map(|p| {
            let (a, b) = m.wirtinger(p.z)?;
            Ok(2.0 * (a.norm_sqr() + b.norm_sqr()))
        })
        .collect::<Result<_, HmapError>>()?;
    let mut best = (f64::INFINITY, points[0]);
    for (v, p) in vals.into_iter().zip(points) {
        if v < best.0 {
            best = (v, p);
        }
    }
    Ok(HeinzEstimate {
        value: best.0,
        witness: best.1,
        grid: grid.meta(),
    })
}

/// One row of a field dump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldRow {
    pub z: Complex64,
    pub gp_abs: f64,
    pub hp_abs: f64,
    pub mu_abs: f64,
    pub jacobian: f64,
    pub u: Option<f64>,
}

/// Pointwise `|f_z|`, `|f_zbar|`, `|μ|` and `J` over the grid, radius-major.
pub fn field_rows<M: PlanarMap + ?Sized>(m: &M, grid: &DiskGrid) -> Result<Vec<FieldRow>, HmapError> {
    grid.points()
        .par_iter()
        .map(|p| {
            let (a, b) = m.wirtinger(p.z)?;
            Ok(FieldRow {
                z: p.z,
                gp_abs: a.norm(),
                hp_abs: b.norm(),
                mu_abs: if a.norm() > 0.0 { b.norm() / a.norm() } else { f64::INFINITY },
                jacobian: a.norm_sqr() - b.norm_sqr(),
                u: None,
            })
        })
        .collect()
}
