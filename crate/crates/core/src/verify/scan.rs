//! Pairwise Hölder-ratio scans for maps of the closed disk.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::Witness;
use crate::curves::wrap_angle;
use crate::hmap::{HmapError, PlanarMap};
use crate::holo::DiskGrid;

/// `n` pairs uniform in the closed unit disk, by rejection from the square,
/// drawn from a ChaCha8 stream seeded with `seed`.
pub fn random_disk_pairs(n: usize, seed: u64) -> Vec<(Complex64, Complex64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || loop {
        let z = Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0));
        if z.norm_sqr() <= 1.0 {
            return z;
        }
    };
    (0..n).map(|_| (draw(), draw())).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    /// Resolution level; each level doubles the angular resolution and the
    /// dyadic depth toward the origin and the circle.
    pub level: u32,
    pub seed: u64,
    /// Boundary arc `(center angle, half-width)` left out of the scan.
    pub exclusion: Option<(f64, f64)>,
}

impl ScanOptions {
    pub fn new(level: u32, seed: u64) -> Self {
        Self {
            level,
            seed,
            exclusion: None,
        }
    }

    pub fn excluding(mut self, center: f64, half_width: f64) -> Self {
        self.exclusion = Some((center, half_width));
        self
    }

    pub fn boundary_samples(&self) -> usize {
        256 << self.level
    }

    /// Interior sample grid: 128·2^level angles, dyadic radii down to
    /// `2^-(24·2^level)` at both the origin and the circle.
    pub fn interior_grid(&self) -> DiskGrid {
        let depth = 24 << self.level;
        DiskGrid::new(48, 128 << self.level)
            .expect("valid scan grid")
            .with_boundary_depth(depth)
            .with_origin_depth(depth)
            .with_seed(self.seed)
    }

    pub fn random_pairs(&self) -> usize {
        2048 << self.level
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolderScan {
    pub alpha: f64,
    pub value: f64,
    pub witness: Witness,
    pub n_pairs: usize,
    pub level: u32,
}

fn ratio(fz: Complex64, fw: Complex64, z: Complex64, w: Complex64, alpha: f64) -> f64 {
    let d = (z - w).norm();
    if d == 0.0 {
        0.0
    } else {
        (fz - fw).norm() / d.powf(alpha)
    }
}

/// Maximum of `|f(z) - f(w)| / |z - w|^α` over boundary sample pairs,
/// neighbouring pairs of a dyadically refined interior grid and seeded
/// random pairs.
pub fn holder_scan<M: PlanarMap + ?Sized>(
    m: &M,
    alpha: f64,
    opts: &ScanOptions,
) -> Result<HolderScan, HmapError> {
    let mut best = (0.0f64, Witness::point(Complex64::new(0.0, 0.0)));
    let mut n_pairs = 0usize;
    let mut absorb = |cand: (f64, Witness), count: usize| {
        n_pairs += count;
        if cand.0 > best.0 {
            best = cand;
        }
    };

    // boundary pairs
    let nb = opts.boundary_samples();
    let bpts: Vec<Complex64> = (0..nb)
        .map(|j| TAU * j as f64 / nb as f64)
        .filter(|&t| match opts.exclusion {
            Some((c, hw)) => wrap_angle(t - c).abs() >= hw,
            None => true,
        })
        .map(Complex64::cis)
        .collect();
    let bvals: Vec<Complex64> = bpts.iter().map(|&z| m.eval(z)).collect::<Result<_, _>>()?;
    let rows: Vec<(f64, Witness)> = (0..bpts.len())
        .into_par_iter()
        .map(|i| {
            let mut row = (0.0, Witness::point(bpts[i]));
            for j in i + 1..bpts.len() {
                let v = ratio(bvals[i], bvals[j], bpts[i], bpts[j], alpha);
                if v > row.0 {
                    row = (v, Witness::pair(bpts[i], bpts[j]));
                }
            }
            row
        })
        .collect();
    let pairs = bpts.len() * bpts.len().saturating_sub(1) / 2;
    for (k, row) in rows.into_iter().enumerate() {
        absorb(row, if k == 0 { pairs } else { 0 });
    }

    // interior neighbours
    let grid = opts.interior_grid();
    let radii = grid.radii();
    let na = grid.n_angular();
    let angles = grid.angles();
    let values: Vec<Vec<Complex64>> = radii
        .par_iter()
        .map(|rad| {
            angles
                .iter()
                .map(|&t| m.eval(Complex64::from_polar(rad.r, t)))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let rows: Vec<(f64, Witness)> = (0..radii.len())
        .into_par_iter()
        .map(|i| {
            let mut row = (0.0, Witness::point(Complex64::new(radii[i].r, 0.0)));
            for k in 0..na {
                let z = Complex64::from_polar(radii[i].r, angles[k]);
                let kn = (k + 1) % na;
                let zn = Complex64::from_polar(radii[i].r, angles[kn]);
                let v = ratio(values[i][k], values[i][kn], z, zn, alpha);
                if v > row.0 {
                    row = (v, Witness::pair(z, zn));
                }
                if i + 1 < radii.len() {
                    let zo = Complex64::from_polar(radii[i + 1].r, angles[k]);
                    let v = ratio(values[i][k], values[i + 1][k], z, zo, alpha);
                    if v > row.0 {
                        row = (v, Witness::pair(z, zo));
                    }
                }
            }
            row
        })
        .collect();
    for (k, row) in rows.into_iter().enumerate() {
        absorb(row, if k == 0 { 2 * radii.len() * na } else { 0 });
    }

    // seeded random pairs
    let pairs = random_disk_pairs(opts.random_pairs(), opts.seed);
    let rows: Vec<Result<(f64, Witness), HmapError>> = pairs
        .par_iter()
        .map(|&(z, w)| Ok((ratio(m.eval(z)?, m.eval(w)?, z, w, alpha), Witness::pair(z, w))))
        .collect();
    for (k, row) in rows.into_iter().enumerate() {
        absorb(row?, if k == 0 { pairs.len() } else { 0 });
    }

    Ok(HolderScan {
        alpha,
        value: best.0,
        witness: best.1,
        n_pairs,
        level: opts.level,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hmap::HarmonicMap;

    #[test]
    fn random_pairs_are_reproducible_and_in_disk() {
        let a = random_disk_pairs(1000, 7);
        let b = random_disk_pairs(1000, 7);
        assert_eq!(a, b);
        assert!(a.iter().all(|(z, w)| z.norm() <= 1.0 && w.norm() <= 1.0));
        assert_ne!(a, random_disk_pairs(1000, 8));
    }

    #[test]
    fn identity_scan_peaks_at_antipodes() {
        for alpha in [0.3, 0.9] {
            let s = holder_scan(&HarmonicMap::identity(), alpha, &ScanOptions::new(0, 1)).unwrap();
            assert!((s.value - 2f64.powf(1.0 - alpha)).abs() < 1e-12);
        }
    }
}
