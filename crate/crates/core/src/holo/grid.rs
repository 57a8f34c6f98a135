//! Deterministic sampling of the closed unit disk.
//!
//! A [`DiskGrid`] serves two purposes. Its sample radii (uniform up to 0.9,
//! then `1 - 2^-m`) drive every sup/inf sweep. Its radial quadrature, built
//! on dyadic cells in the boundary distance `u = 1 - r`, drives every area
//! integral. Boundary distances are carried exactly alongside `r`, so weights
//! such as `(1 - |z|)^s` never suffer cancellation near the circle.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use super::HoloError;
use crate::quad::gauss_legendre_on;

/// A sample point of the disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiskPoint {
    pub z: Complex64,
    pub r: f64,
    /// `1 - r`, computed without cancellation.
    pub dist: f64,
    pub theta: f64,
}

impl DiskPoint {
    pub fn new(r: f64, dist: f64, theta: f64) -> Self {
        Self {
            z: Complex64::from_polar(r, theta),
            r,
            dist,
            theta,
        }
    }
}

/// One radius of the grid together with its boundary distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Radius {
    pub r: f64,
    pub dist: f64,
}

/// A radial quadrature node for `∫_0^1 ... dr`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialNode {
    pub r: f64,
    pub dist: f64,
    pub weight: f64,
}

/// Resolution record attached to every grid-based estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridMeta {
    pub n_radial: usize,
    pub n_angular: usize,
    pub boundary_depth: u32,
    pub origin_depth: u32,
    pub quadrature_depth: u32,
    pub max_radius: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiskGrid {
    uniform_cells: usize,
    n_angular: usize,
    boundary_depth: u32,
    origin_depth: u32,
    quadrature_depth: u32,
    r_max: Option<f64>,
    punctured: bool,
    seed: u64,
}

pub const DEFAULT_BOUNDARY_DEPTH: u32 = 20;
pub const DEFAULT_QUADRATURE_DEPTH: u32 = 48;
const UNIFORM_LIMIT: f64 = 0.9;
const FIRST_REFINED_LEVEL: u32 = 4;
const INNER_CELLS: usize = 4;
const GL_ORDER: usize = 10;

impl DiskGrid {
    /// Grid with `n_radial` sample radii in total (boundary-refined to
    /// `1 - 2^-20`) and `n_angular` uniform angles.
    pub fn new(n_radial: usize, n_angular: usize) -> Result<Self, HoloError> {
        let refined = refined_count(DEFAULT_BOUNDARY_DEPTH);
        if n_radial < refined + 2 {
            return Err(HoloError::InvalidGrid(format!(
                "grid_radial must be at least {} (got {n_radial})",
                refined + 2
            )));
        }
        if n_angular < 8 {
            return Err(HoloError::InvalidGrid(format!(
                "grid_angular must be at least 8 (got {n_angular})"
            )));
        }
        Ok(Self {
            uniform_cells: n_radial - refined - 1,
            n_angular,
            boundary_depth: DEFAULT_BOUNDARY_DEPTH,
            origin_depth: 0,
            quadrature_depth: DEFAULT_QUADRATURE_DEPTH,
            r_max: None,
            punctured: false,
            seed: 1,
        })
    }

    /// The standard resolution, 64 radii by 512 angles.
    pub fn standard() -> Self {
        Self::new(64, 512).expect("standard grid is valid")
    }

    /// Deepest boundary refinement level of the sample radii.
    pub fn with_boundary_depth(mut self, depth: u32) -> Self {
        self.boundary_depth = depth.max(FIRST_REFINED_LEVEL - 1);
        self
    }

    /// Adds sample radii `2^-m`, `m = 4..=depth`, clustering toward the origin.
    pub fn with_origin_depth(mut self, depth: u32) -> Self {
        self.origin_depth = depth;
        self
    }

    pub fn with_quadrature_depth(mut self, depth: u32) -> Self {
        self.quadrature_depth = depth.max(2);
        self
    }

    /// Drops sample radii above `r_max` and adds `r_max` itself; the radial
    /// quadrature stops at `r_max` as well.
    pub fn with_max_radius(mut self, r_max: f64) -> Self {
        self.r_max = Some(r_max);
        self
    }

    /// Removes the origin from the sample radii.
    pub fn punctured(mut self) -> Self {
        self.punctured = true;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Doubles the uniform radial and the angular resolution. The result
    /// contains every sample point of `self`.
    pub fn refined(&self) -> Self {
        Self {
            uniform_cells: self.uniform_cells * 2,
            n_angular: self.n_angular * 2,
            ..self.clone()
        }
    }

    pub fn n_angular(&self) -> usize {
        self.n_angular
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn angle(&self, k: usize) -> f64 {
        TAU * k as f64 / self.n_angular as f64
    }

    pub fn angles(&self) -> Vec<f64> {
        (0..self.n_angular).map(|k| self.angle(k)).collect()
    }

    /// Sample radii in increasing order, all strictly below one.
    pub fn radii(&self) -> Vec<Radius> {
        let mut out: Vec<Radius> = Vec::new();
        if self.origin_depth >= FIRST_REFINED_LEVEL {
            for m in (FIRST_REFINED_LEVEL..=self.origin_depth).rev() {
                let r = 0.5f64.powi(m as i32);
                out.push(Radius { r, dist: 1.0 - r });
            }
        }
        for j in 0..=self.uniform_cells {
            let r = UNIFORM_LIMIT * j as f64 / self.uniform_cells as f64;
            out.push(Radius { r, dist: 1.0 - r });
        }
        for m in FIRST_REFINED_LEVEL..=self.boundary_depth {
            let dist = 0.5f64.powi(m as i32);
            out.push(Radius { r: 1.0 - dist, dist });
        }
        out.sort_by(|a, b| a.r.total_cmp(&b.r));
        out.dedup_by(|a, b| a.r == b.r);
        if self.punctured {
            out.retain(|x| x.r > 0.0);
        }
        if let Some(cap) = self.r_max {
            out.retain(|x| x.r < cap);
            out.push(Radius {
                r: cap,
                dist: 1.0 - cap,
            });
        }
        out
    }

    /// All sample points, radius-major.
    pub fn points(&self) -> Vec<DiskPoint> {
        let angles = self.angles();
        self.radii()
            .iter()
            .flat_map(|rad| {
                angles
                    .iter()
                    .map(move |&t| DiskPoint::new(rad.r, rad.dist, t))
            })
            .collect()
    }

    /// Largest radius reached by the radial quadrature.
    pub fn quadrature_extent(&self) -> f64 {
        let natural = 1.0 - 0.5f64.powi(self.quadrature_depth as i32);
        match self.r_max {
            Some(cap) => cap.min(natural),
            None => natural,
        }
    }

    /// Composite Gauss–Legendre rule for `∫_0^{R} ... dr`: a few uniform cells
    /// on `[0, 1/2]`, then dyadic cells `u ∈ [2^-(m+1), 2^-m]` in the boundary
    /// distance down to `2^-quadrature_depth`.
    pub fn radial_quadrature(&self) -> Vec<RadialNode> {
        let mut cells: Vec<(f64, f64)> = Vec::new();
        for c in 0..INNER_CELLS {
            let a = 0.5 * c as f64 / INNER_CELLS as f64;
            let b = 0.5 * (c + 1) as f64 / INNER_CELLS as f64;
            // stored as boundary distances, decreasing
            cells.push((1.0 - a, 1.0 - b));
        }
        for m in 1..self.quadrature_depth {
            cells.push((0.5f64.powi(m as i32), 0.5f64.powi(m as i32 + 1)));
        }
        let cap_dist = self.r_max.map(|r| 1.0 - r);
        let mut nodes = Vec::new();
        for (hi, lo) in cells {
            let lo = match cap_dist {
                Some(c) if c >= hi => break,
                Some(c) => lo.max(c),
                None => lo,
            };
            for (u, w) in gauss_legendre_on(GL_ORDER, lo, hi) {
                nodes.push(RadialNode {
                    r: 1.0 - u,
                    dist: u,
                    weight: w,
                });
            }
        }
        nodes
    }

    pub fn meta(&self) -> GridMeta {
        let radii = self.radii();
        GridMeta {
            n_radial: radii.len(),
            n_angular: self.n_angular,
            boundary_depth: self.boundary_depth,
            origin_depth: self.origin_depth,
            quadrature_depth: self.quadrature_depth,
            max_radius: radii.last().map(|r| r.r).unwrap_or(0.0),
            seed: self.seed,
        }
    }
}

fn refined_count(depth: u32) -> usize {
    if depth >= FIRST_REFINED_LEVEL {
        (depth - FIRST_REFINED_LEVEL + 1) as usize
    } else {
        0
    }
}
