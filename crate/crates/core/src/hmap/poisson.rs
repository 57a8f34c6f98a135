//! Harmonic extension of boundary data through its Fourier series.
//!
//! For uniform samples `f*(e^{it_j})` with discrete Fourier coefficients `c_k`,
//! the Poisson integral is `Σ_{k≥0} c_k z^k + conj(Σ_{k≥1} conj(c_{-k}) z^k)`,
//! so `g` collects the nonnegative modes and `h` the conjugated negative ones.

use std::f64::consts::TAU;
use std::path::Path;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use super::{min_jacobian, HarmonicMap, HmapError};
use crate::curves::{wrap_angle, JordanCurve};
use crate::holo::{DiskGrid, DiskPoint, HoloFn};

/// Uniform boundary samples on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFunction {
    values: Vec<Complex64>,
}

impl BoundaryFunction {
    pub fn new(values: Vec<Complex64>) -> Result<Self, HmapError> {
        let n = values.len();
        if n < 64 || !n.is_power_of_two() {
            return Err(HmapError::BadSampleCount(n));
        }
        Ok(Self { values })
    }

    pub fn sample<F: Fn(f64) -> Complex64>(n: usize, f: F) -> Result<Self, HmapError> {
        Self::new((0..n).map(|j| f(TAU * j as f64 / n as f64)).collect())
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Reads boundary data: one `t re im` triple or `re im` pair per line,
    /// `#` comments. Explicit angles must lie on the uniform grid.
    pub fn parse(text: &str) -> Result<Self, HmapError> {
        let mut rows: Vec<(usize, Option<f64>, Complex64)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let nums: Vec<f64> = line
                .split_whitespace()
                .map(|s| {
                    s.parse::<f64>().map_err(|e| HmapError::Parse {
                        line: idx + 1,
                        msg: format!("`{s}`: {e}"),
                    })
                })
                .collect::<Result<_, _>>()?;
            let row = match nums.as_slice() {
                [re, im] => (idx + 1, None, Complex64::new(*re, *im)),
                [t, re, im] => (idx + 1, Some(*t), Complex64::new(*re, *im)),
                _ => {
                    return Err(HmapError::Parse {
                        line: idx + 1,
                        msg: format!("expected `t re im` or `re im`, found {} fields", nums.len()),
                    })
                }
            };
            if let Some((line, _, _)) = rows.first() {
                if rows[0].1.is_some() != row.1.is_some() {
                    return Err(HmapError::Parse {
                        line: row.0,
                        msg: format!("angle column present on line {line} but not here, or vice versa"),
                    });
                }
            }
            rows.push(row);
        }
        let n = rows.len();
        if n < 64 || !n.is_power_of_two() {
            return Err(HmapError::Parse {
                line: rows.last().map(|r| r.0).unwrap_or(0),
                msg: format!("need a power-of-two number of samples >= 64, found {n}"),
            });
        }
        for (j, (line, t, _)) in rows.iter().enumerate() {
            if let Some(t) = t {
                let expected = TAU * j as f64 / n as f64;
                if wrap_angle(t - expected).abs() > 1e-9 {
                    return Err(HmapError::Parse {
                        line: *line,
                        msg: format!("angle {t} is off the uniform grid (expected {expected})"),
                    });
                }
            }
        }
        Self::new(rows.into_iter().map(|r| r.2).collect())
    }

    pub fn read(path: &Path) -> Result<Self, HmapError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HmapError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

/// Discrete Fourier coefficients `c_k`, indexed `k = 0..n` (negative modes at
/// `n - |k|`).
fn dft(bf: &BoundaryFunction) -> Vec<Complex64> {
    let n = bf.len();
    let mut buf = bf.values.clone();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    buf.iter().map(|c| c / n as f64).collect()
}

/// Fourier coefficients `(k, c_k)` for `|k| ≤ modes`, capped below `n/2`.
pub fn fourier_coefficients(bf: &BoundaryFunction, modes: usize) -> Vec<(i64, Complex64)> {
    let n = bf.len();
    let m = modes.min(n / 2 - 1) as i64;
    let c = dft(bf);
    (-m..=m)
        .map(|k| {
            let idx = if k >= 0 { k as usize } else { n - (-k) as usize };
            (k, c[idx])
        })
        .collect()
}

/// Harmonic extension keeping all modes `|k| < n/2`.
pub fn poisson_extend(bf: &BoundaryFunction) -> HarmonicMap {
    poisson_extend_modes(bf, bf.len() / 2 - 1)
}

/// Harmonic extension keeping modes `|k| ≤ modes` (capped below `n/2`).
pub fn poisson_extend_modes(bf: &BoundaryFunction, modes: usize) -> HarmonicMap {
    let n = bf.len();
    let m = modes.min(n / 2 - 1);
    let c = dft(bf);
    let g: Vec<Complex64> = c[..=m].to_vec();
    let mut h = vec![Complex64::new(0.0, 0.0); m + 1];
    for k in 1..=m {
        h[k] = c[n - k].conj();
    }
    HarmonicMap::new(HoloFn::Series(g), HoloFn::Series(h))
}

/// Samples of the boundary map that sends `e^{2πj/m}` to the `j`-th vertex
/// and is linear in the angle in between.
pub fn vertexwise_linear(vertices: &[Complex64], n: usize) -> Result<BoundaryFunction, HmapError> {
    let m = vertices.len();
    BoundaryFunction::sample(n, |t| {
        let x = t / TAU * m as f64;
        let j = (x.floor() as usize).min(m - 1);
        let lam = x - j as f64;
        vertices[j] * (1.0 - lam) + vertices[(j + 1) % m] * lam
    })
}

/// Outcome of the Radó–Kneser–Choquet construction.
#[derive(Debug, Clone, Serialize)]
pub struct RkcExtension {
    pub map: HarmonicMap,
    /// Whether the target polyline turns one way only.
    pub convex_target: bool,
    /// Grid minimum of the Jacobian.
    pub min_jacobian: f64,
    pub witness: DiskPoint,
    /// `J > 0` at every grid point.
    pub jacobian_positive: bool,
}

/// Poisson extension of a boundary homeomorphism onto `target`, followed by
/// a grid check of the Jacobian sign. Non-convex targets are accepted; the
/// check then reports where positivity fails.
pub fn rkc_extend(
    bf: &BoundaryFunction,
    target: &JordanCurve,
    modes: usize,
    grid: &DiskGrid,
) -> Result<RkcExtension, HmapError> {
    let param = target.resample_arclength(4096)?;
    let total = param.total_length;
    let n = bf.len();
    let positions: Vec<f64> = bf.values.iter().map(|&p| param.locate(p)).collect();
    let mut travelled = 0.0;
    for j in 0..n {
        let step = (positions[(j + 1) % n] - positions[j]).rem_euclid(total);
        if step <= 0.0 || step >= 0.5 * total {
            return Err(HmapError::NonMonotone((j + 1) % n));
        }
        travelled += step;
    }
    if (travelled - total).abs() > 1e-6 * total {
        return Err(HmapError::NonMonotone(0));
    }
    let convex_target = is_convex(target);
    let map = poisson_extend_modes(bf, modes);
    let (min_jacobian, witness) = min_jacobian(&map, grid)?;
    Ok(RkcExtension {
        map,
        convex_target,
        min_jacobian,
        witness,
        jacobian_positive: min_jacobian > 0.0,
    })
}

fn is_convex(curve: &JordanCurve) -> bool {
    let pts = curve.points();
    let n = pts.len();
    let scale = pts.iter().map(|p| p.norm()).fold(0.0, f64::max).max(1.0);
    let mut pos = false;
    let mut neg = false;
    for i in 0..n {
        let a = pts[(i + 1) % n] - pts[i];
        let b = pts[(i + 2) % n] - pts[(i + 1) % n];
        let cross = a.re * b.im - a.im * b.re;
        let tol = 1e-12 * scale * scale;
        pos |= cross > tol;
        neg |= cross < -tol;
    }
    !(pos && neg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{l_shape_vertices, square_vertices};
    use crate::hmap::{qc_constants, PlanarMap};

    fn c(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    fn interior_error(m: &HarmonicMap, exact: impl Fn(Complex64) -> Complex64) -> f64 {
        let grid = DiskGrid::standard().with_max_radius(0.99);
        grid.points()
            .iter()
            .map(|p| (m.eval(p.z).unwrap() - exact(p.z)).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn identity_boundary_data() {
        let bf = BoundaryFunction::sample(512, Complex64::cis).unwrap();
        let m = poisson_extend(&bf);
        assert!(interior_error(&m, |z| z) < 1e-10);
    }

    #[test]
    fn anti_holomorphic_boundary_data() {
        let bf = BoundaryFunction::sample(512, |t| Complex64::cis(-t)).unwrap();
        let m = poisson_extend(&bf);
        assert!(interior_error(&m, |z| z.conj()) < 1e-10);
        assert!(m.g.eval(c(0.3, 0.3)).unwrap().norm() < 1e-12);
        assert!((m.h.eval(c(0.3, 0.3)).unwrap() - c(0.3, 0.3)).norm() < 1e-12);
    }

    #[test]
    fn linear_boundary_data_has_constant_dilatation() {
        let bf = BoundaryFunction::sample(512, |t| Complex64::cis(t) + 0.3 * Complex64::cis(-t)).unwrap();
        let m = poisson_extend(&bf);
        assert!(interior_error(&m, |z| z + 0.3 * z.conj()) < 1e-10);
        let field = qc_constants(&m, &DiskGrid::new(40, 64).unwrap()).unwrap();
        assert!((field.k_hat - 0.3).abs() < 1e-10);
    }

    #[test]
    fn mean_value_property() {
        let bf = BoundaryFunction::sample(256, |t| c(t.cos().exp(), (3.0 * t).sin() + 0.2)).unwrap();
        let m = poisson_extend(&bf);
        let avg = bf.values().iter().sum::<Complex64>() / bf.len() as f64;
        assert!((m.eval(c(0.0, 0.0)).unwrap() - avg).norm() < 1e-10);
    }

    #[test]
    fn extension_is_linear() {
        let u = BoundaryFunction::sample(128, |t| c(t.sin().powi(3), t.cos())).unwrap();
        let v = BoundaryFunction::sample(128, |t| c((2.0 * t).cos(), 0.5)).unwrap();
        let (a, b) = (c(0.7, -0.2), c(-1.5, 0.0));
        let w = BoundaryFunction::new(u.values().iter().zip(v.values()).map(|(x, y)| a * x + b * y).collect()).unwrap();
        let (mu, mv, mw) = (poisson_extend(&u), poisson_extend(&v), poisson_extend(&w));
        let comb = |x: &HoloFn, y: &HoloFn, aa: Complex64, bb: Complex64| x.linear_combination(aa, y, bb).unwrap();
        let g = comb(&mu.g, &mv.g, a, b);
        let h = comb(&mu.h, &mv.h, a.conj(), b.conj());
        let (HoloFn::Series(g), HoloFn::Series(gw)) = (g, mw.g) else { unreachable!() };
        let (HoloFn::Series(h), HoloFn::Series(hw)) = (h, mw.h) else { unreachable!() };
        for (x, y) in g.iter().zip(&gw).chain(h.iter().zip(&hw)) {
            assert!((x - y).norm() < 1e-13);
        }
    }

    #[test]
    fn fourier_coefficients_of_identity() {
        let bf = BoundaryFunction::sample(1024, Complex64::cis).unwrap();
        for (k, ck) in fourier_coefficients(&bf, 512) {
            let expected = if k == 1 { 1.0 } else { 0.0 };
            assert!((ck - expected).norm() < 1e-10, "c_{k} = {ck}");
        }
    }

    #[test]
    fn rkc_identity_and_square() {
        let grid = DiskGrid::standard().with_max_radius(0.99);
        let id = BoundaryFunction::sample(256, Complex64::cis).unwrap();
        let out = rkc_extend(&id, &JordanCurve::unit_circle(), 128, &grid).unwrap();
        assert!(out.convex_target && out.jacobian_positive);
        assert!((out.min_jacobian - 1.0).abs() < 1e-10);

        let square = JordanCurve::polygon(&square_vertices(), 64).unwrap();
        let bf = vertexwise_linear(&square_vertices(), 1024).unwrap();
        for g in [grid.clone(), DiskGrid::new(128, 1024).unwrap().with_max_radius(0.99)] {
            let out = rkc_extend(&bf, &square, 511, &g).unwrap();
            assert!(out.convex_target);
            assert!(out.jacobian_positive, "min J = {} at {:?}", out.min_jacobian, out.witness);
        }
    }

    #[test]
    fn rkc_l_shape_loses_positivity() {
        let grid = DiskGrid::standard().with_max_radius(0.99);
        let l = JordanCurve::polygon(&l_shape_vertices(), 32).unwrap();
        let bf = vertexwise_linear(&l_shape_vertices(), 1024).unwrap();
        let out = rkc_extend(&bf, &l, 511, &grid).unwrap();
        assert!(!out.convex_target);
        assert!(!out.jacobian_positive, "min J = {}", out.min_jacobian);
    }

    #[test]
    fn rkc_rejects_backtracking_samples() {
        let grid = DiskGrid::new(30, 64).unwrap();
        let bf = BoundaryFunction::sample(128, |t| Complex64::cis(t + 0.5 * (5.0 * t).sin())).unwrap();
        assert!(matches!(
            rkc_extend(&bf, &JordanCurve::unit_circle(), 63, &grid),
            Err(HmapError::NonMonotone(_))
        ));
    }

    #[test]
    fn boundary_file_parsing() {
        let mut text = String::from("# identity\n");
        for j in 0..64 {
            let t = TAU * j as f64 / 64.0;
            text.push_str(&format!("{t} {} {}\n", t.cos(), t.sin()));
        }
        let bf = BoundaryFunction::parse(&text).unwrap();
        assert_eq!(bf.len(), 64);
        let bad = text.replacen("0 1 0", "0.5 1 0", 1);
        assert!(matches!(BoundaryFunction::parse(&bad), Err(HmapError::Parse { line: 2, .. })));
        assert!(matches!(BoundaryFunction::parse("1 0\n0 1\n"), Err(HmapError::Parse { .. })));
    }

    #[test]
    fn rejects_bad_sample_counts() {
        assert!(BoundaryFunction::new(vec![c(1.0, 0.0); 100]).is_err());
        assert!(BoundaryFunction::new(vec![c(1.0, 0.0); 32]).is_err());
    }
}
