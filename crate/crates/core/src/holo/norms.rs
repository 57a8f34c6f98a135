use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{DiskGrid, DiskPoint, GridMeta, HoloError, HoloFn};
use crate::curves::wrap_angle;

/// Default half-width, in radians, of the arc removed around a singular
/// boundary point.
pub const DEFAULT_EXCLUSION_ARC: f64 = 1e-3;

/// Circle mean `((1/2π) ∮ |f(re^{it})|^p dt)^{1/p}` at a fixed radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HardyMean {
    pub r: f64,
    pub p: f64,
    pub n_theta: usize,
    pub value: f64,
}

pub fn hardy_norm(f: &HoloFn, p: f64, r: f64, n_theta: usize) -> Result<HardyMean, HoloError> {
    if !(p > 0.0) {
        return Err(HoloError::BadExponent(p));
    }
    if !(r > 0.0 && r <= 1.0) {
        return Err(HoloError::BadRadius(r));
    }
    if n_theta < 64 {
        return Err(HoloError::TooFewSamples {
            needed: 64,
            got: n_theta,
        });
    }
    let terms: Vec<f64> = (0..n_theta)
        .into_par_iter()
        .map(|k| {
            let z = Complex64::from_polar(r, TAU * k as f64 / n_theta as f64);
            f.eval(z).map(|w| w.norm().powf(p))
        })
        .collect::<Result<_, _>>()?;
    let mean = terms.iter().sum::<f64>() / n_theta as f64;
    Ok(HardyMean {
        r,
        p,
        n_theta,
        value: mean.powf(1.0 / p),
    })
}

/// `∬_D field dλ` with the grid's radial rule and the trapezoid rule in angle.
/// Reductions run in a fixed order, so the result does not depend on the
/// number of worker threads.
pub fn area_integral<F>(field: F, grid: &DiskGrid) -> Result<f64, HoloError>
where
    F: Fn(&DiskPoint) -> f64 + Sync,
{
    let angles = grid.angles();
    let nodes = grid.radial_quadrature();
    let rings: Vec<Result<f64, HoloError>> = nodes
        .par_iter()
        .map(|node| {
            let mut sum = 0.0;
            for &t in &angles {
                let pt = DiskPoint::new(node.r, node.dist, t);
                let v = field(&pt);
                if !v.is_finite() {
                    return Err(HoloError::NonFinite(pt.z));
                }
                sum += v;
            }
            Ok(node.weight * node.r * sum)
        })
        .collect();
    let mut total = 0.0;
    for ring in rings {
        total += ring?;
    }
    Ok(total * TAU / angles.len() as f64)
}

fn check_resolves_boundary(grid: &DiskGrid) -> Result<(), HoloError> {
    let extent = grid.quadrature_extent();
    if extent < 1.0 - 1e-4 {
        Err(HoloError::UnresolvedBoundary(extent))
    } else {
        Ok(())
    }
}

/// `(∬_D |F|^p dλ)^{1/p}` for a nonnegative field `F` given pointwise.
pub fn bergman_norm<F>(field: F, p: f64, grid: &DiskGrid) -> Result<f64, HoloError>
where
    F: Fn(&DiskPoint) -> f64 + Sync,
{
    if !(p > 0.0) {
        return Err(HoloError::BadExponent(p));
    }
    check_resolves_boundary(grid)?;
    let integral = area_integral(|pt| field(pt).abs().powf(p), grid)?;
    Ok(integral.powf(1.0 / p))
}

/// Grid supremum of `(1 - |z|)^α |f'(z)|`, a lower bound for the true sup.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochEstimate {
    pub alpha: f64,
    pub value: f64,
    pub witness: DiskPoint,
    pub grid: GridMeta,
}

/// Weighted Bloch seminorm on the grid. `α = 0` is accepted and gives the
/// plain grid supremum of `|f'|`.
pub fn bloch_alpha_norm(f: &HoloFn, alpha: f64, grid: &DiskGrid) -> Result<BlochEstimate, HoloError> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(HoloError::AlphaOutOfRange(alpha));
    }
    let angles = grid.angles();
    let rows: Vec<Result<(f64, DiskPoint), HoloError>> = grid
        .radii()
        .par_iter()
        .map(|rad| {
            let weight = rad.dist.powf(alpha);
            let mut best = (f64::NEG_INFINITY, DiskPoint::new(rad.r, rad.dist, 0.0));
            for &t in &angles {
                let pt = DiskPoint::new(rad.r, rad.dist, t);
                let v = weight * f.deriv(pt.z)?.norm();
                if v > best.0 {
                    best = (v, pt);
                }
            }
            Ok(best)
        })
        .collect();
    let (value, witness) = max_rows(rows)?;
    Ok(BlochEstimate {
        alpha,
        value,
        witness,
        grid: grid.meta(),
    })
}

fn max_rows<T: Copy>(rows: Vec<Result<(f64, T), HoloError>>) -> Result<(f64, T), HoloError> {
    let mut best: Option<(f64, T)> = None;
    for row in rows {
        let (v, w) = row?;
        if best.is_none_or(|b| v > b.0) {
            best = Some((v, w));
        }
    }
    best.ok_or_else(|| HoloError::InvalidGrid("empty grid".into()))
}

/// Boundary values sampled at uniform angles, possibly with an arc removed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundarySamples {
    pub angles: Vec<f64>,
    pub values: Vec<Complex64>,
    /// Half-width of the removed arc around a singular point, zero if none.
    pub exclusion: f64,
}

impl BoundarySamples {
    /// Uniform samples `values[i] = f(e^{2πi/n})`.
    pub fn from_values(values: Vec<Complex64>) -> Self {
        let n = values.len();
        Self {
            angles: (0..n).map(|i| TAU * i as f64 / n as f64).collect(),
            values,
            exclusion: 0.0,
        }
    }

    /// Samples `f` at `n` uniform angles, skipping those within `exclusion`
    /// of a singular boundary point of `f`.
    pub fn of_fn(f: &HoloFn, n: usize, exclusion: f64) -> Result<Self, HoloError> {
        let singular = f.boundary_singularity();
        let mut angles = Vec::with_capacity(n);
        let mut values = Vec::with_capacity(n);
        for i in 0..n {
            let t = TAU * i as f64 / n as f64;
            if let Some(a) = singular {
                if wrap_angle(t - a).abs() < exclusion {
                    continue;
                }
            }
            angles.push(t);
            values.push(f.eval(Complex64::cis(t))?);
        }
        Ok(Self {
            angles,
            values,
            exclusion: if singular.is_some() { exclusion } else { 0.0 },
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A Hölder-ratio supremum over sample pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolderEstimate {
    pub alpha: f64,
    pub value: f64,
    /// Angles of the pair attaining the maximum.
    pub witness: [f64; 2],
}

/// `max |f(e^{it}) - f(e^{is})| / |e^{it} - e^{is}|^α` over all sample pairs.
pub fn boundary_holder_constant(samples: &BoundarySamples, alpha: f64) -> Result<HolderEstimate, HoloError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(HoloError::AlphaOutOfRange(alpha));
    }
    if samples.len() < 64 {
        return Err(HoloError::TooFewSamples {
            needed: 64,
            got: samples.len(),
        });
    }
    let n = samples.len();
    let rows: Vec<Result<(f64, [f64; 2]), HoloError>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = (0.0, [samples.angles[i]; 2]);
            for j in i + 1..n {
                let chord = 2.0 * (0.5 * (samples.angles[j] - samples.angles[i])).sin().abs();
                let v = (samples.values[j] - samples.values[i]).norm() / chord.powf(alpha);
                if v > best.0 {
                    best = (v, [samples.angles[i], samples.angles[j]]);
                }
            }
            Ok(best)
        })
        .collect();
    let (value, witness) = max_rows(rows)?;
    Ok(HolderEstimate {
        alpha,
        value,
        witness,
    })
}

/// The explicit constant of the two-sided Hölder/Bloch equivalence:
/// the largest of `2^{2-α} π^{α+1}/(α+1)`,
/// `π^{1+α} 2^{-(1+3α)/2} sec(πα/2)` and `4(2/α + 1)`.
pub fn c_alpha(alpha: f64) -> Result<f64, HoloError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(HoloError::AlphaOutOfRange(alpha));
    }
    let inner = 2f64.powf(2.0 - alpha) * PI.powf(alpha + 1.0) / (alpha + 1.0);
    let outer = PI.powf(1.0 + alpha) / 2f64.powf(0.5 * (1.0 + 3.0 * alpha)) / (FRAC_PI_2 * alpha).cos();
    let propagation = 4.0 * (2.0 / alpha + 1.0);
    Ok(inner.max(outer).max(propagation))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IsoperimetricCheck {
    /// `∬_D |F|² dλ`
    pub lhs: f64,
    /// `(1/4π) (∮ |F| |dz|)²`
    pub rhs: f64,
    pub pass: bool,
}

pub fn isoperimetric_check(f: &HoloFn, grid: &DiskGrid) -> Result<IsoperimetricCheck, HoloError> {
    check_resolves_boundary(grid)?;
    let lhs = area_integral(
        |pt| f.eval(pt.z).map(|w| w.norm_sqr()).unwrap_or(f64::NAN),
        grid,
    )?;
    let n = grid.n_angular();
    let mut sum = 0.0;
    for k in 0..n {
        sum += f.eval(Complex64::cis(grid.angle(k)))?.norm();
    }
    let mean = sum / n as f64;
    // (1/4π)(2π·mean)² = π·mean²
    let rhs = PI * mean * mean;
    Ok(IsoperimetricCheck {
        lhs,
        rhs,
        pass: lhs <= rhs * (1.0 + 1e-6),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    #[test]
    fn hardy_means_of_simple_functions() {
        let one = HoloFn::constant(c(1.0, 0.0));
        for p in [0.5, 1.0, 3.0] {
            assert!((hardy_norm(&one, p, 0.7, 64).unwrap().value - 1.0).abs() < 1e-12);
        }
        let z = hardy_norm(&HoloFn::Identity, 2.0, 0.5, 64).unwrap();
        assert!((z.value - 0.5).abs() < 1e-10);
        assert!(hardy_norm(&HoloFn::Identity, 2.0, 0.5, 32).is_err());
    }

    #[test]
    fn hardy_means_of_log_example_derivative_increase() {
        // f0' = 1 - log(1-z) as a closed form
        let d = |r: f64| {
            let n = 1 << 16;
            let s: f64 = (0..n)
                .map(|k| {
                    let z = Complex64::from_polar(r, TAU * k as f64 / n as f64);
                    HoloFn::LogExample.deriv(z).unwrap().norm()
                })
                .sum();
            s / n as f64
        };
        let means: Vec<f64> = [0.9, 0.99, 0.999].iter().map(|&r| d(r)).collect();
        let limit = d(1.0 - 1e-6);
        assert!(means.windows(2).all(|w| w[0] <= w[1]));
        assert!(means[2] <= limit && limit.is_finite());
    }

    #[test]
    fn hardy_means_nondecreasing_for_gallery() {
        for f in [HoloFn::Identity, HoloFn::Monomial(3), HoloFn::Mobius(c(0.5, 0.0)), HoloFn::LogExample] {
            let vals: Vec<f64> = [0.5, 0.9, 0.99]
                .iter()
                .map(|&r| hardy_norm(&f, 1.0, r, 1024).unwrap().value)
                .collect();
            assert!(vals.windows(2).all(|w| w[0] <= w[1] + 1e-12), "{f}: {vals:?}");
        }
    }

    #[test]
    fn bergman_of_constant_is_root_pi() {
        let g = DiskGrid::standard();
        let v = bergman_norm(|_| 1.0, 2.0, &g).unwrap();
        assert!((v - PI.sqrt()).abs() < 1e-6);
    }

    /// Adaptive Simpson on [a, b].
    fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
        fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                left + right + (left + right - whole) / 15.0
            } else {
                rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
            }
        }
        let m = 0.5 * (a + b);
        let (fa, fm, fb) = (f(a), f(m), f(b));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        rec(f, a, b, fa, fm, fb, whole, tol, 50)
    }

    #[test]
    fn bergman_of_inverse_root_distance() {
        // 2π ∫_0^1 (1-r)^{-1/2} r dr, with u = v² to remove the singularity
        let radial = adaptive_simpson(&|v: f64| 2.0 * (1.0 - v * v), 0.0, 1.0, 1e-13);
        let oracle = TAU * radial;
        assert!((oracle - TAU * 4.0 / 3.0).abs() < 1e-10);
        let g = DiskGrid::standard();
        let v = bergman_norm(|pt| pt.dist.powf(-0.5), 1.0, &g).unwrap();
        assert!((v - oracle).abs() < 1e-3, "{v} vs {oracle}");
    }

    #[test]
    fn bergman_of_log_example_derivative_converges() {
        let field = |pt: &DiskPoint| HoloFn::LogExample.deriv(pt.z).map(|d| d.norm()).unwrap_or(f64::NAN);
        let coarse = bergman_norm(field, 1.0, &DiskGrid::new(40, 256).unwrap()).unwrap();
        let fine = bergman_norm(field, 1.0, &DiskGrid::new(40, 1024).unwrap()).unwrap();
        assert!(coarse.is_finite() && fine.is_finite());
        assert!((coarse - fine).abs() / fine < 1e-3, "{coarse} vs {fine}");
    }

    #[test]
    fn bergman_rejects_unresolved_grid_and_non_finite() {
        let capped = DiskGrid::standard().with_max_radius(0.99);
        assert!(matches!(
            bergman_norm(|_| 1.0, 1.0, &capped),
            Err(HoloError::UnresolvedBoundary(_))
        ));
        let err = bergman_norm(|pt| if pt.r > 0.5 { f64::INFINITY } else { 1.0 }, 1.0, &DiskGrid::standard());
        assert!(matches!(err, Err(HoloError::NonFinite(z)) if z.norm() > 0.5));
    }

    #[test]
    fn bloch_of_identity_is_one_at_origin() {
        let b = bloch_alpha_norm(&HoloFn::Identity, 0.3, &DiskGrid::standard()).unwrap();
        assert_eq!(b.value, 1.0);
        assert_eq!(b.witness.r, 0.0);
    }

    #[test]
    fn bloch_of_log_example() {
        let g = DiskGrid::standard();
        let b = bloch_alpha_norm(&HoloFn::LogExample, 0.1, &g).unwrap();
        assert!(b.value.is_finite());
        // closed form along the real axis tends to zero
        let along = |u: f64| u.powf(0.1) * (1.0 + (1.0 / u).ln());
        assert!(along(1e-300) < along(1e-100) && along(1e-100) < along(1e-30));
        assert!(along(1e-300) < 0.02);
        // α = 0 gives sup|f0'|, which grows with boundary refinement
        let vals: Vec<f64> = [20, 30, 40]
            .iter()
            .map(|&d| {
                bloch_alpha_norm(&HoloFn::LogExample, 0.0, &g.clone().with_boundary_depth(d))
                    .unwrap()
                    .value
            })
            .collect();
        assert!(vals[0] < vals[1] && vals[1] < vals[2], "{vals:?}");
    }

    #[test]
    fn bloch_monotone_under_refinement() {
        let g = DiskGrid::new(30, 64).unwrap();
        for f in [HoloFn::Mobius(c(0.3, 0.4)), HoloFn::LogExample, HoloFn::Monomial(5)] {
            let a = bloch_alpha_norm(&f, 0.5, &g).unwrap().value;
            let b = bloch_alpha_norm(&f, 0.5, &g.refined()).unwrap().value;
            assert!(b >= a, "{f}");
        }
    }

    #[test]
    fn boundary_holder_examples() {
        let constant = BoundarySamples::from_values(vec![c(2.0, 1.0); 64]);
        assert_eq!(boundary_holder_constant(&constant, 0.5).unwrap().value, 0.0);

        let circle = BoundarySamples::of_fn(&HoloFn::Identity, 128, 0.0).unwrap();
        let x = boundary_holder_constant(&circle, 0.5).unwrap();
        // dense pair scan of d^{1-α} over chord lengths d ∈ (0, 2]
        let oracle = (1..=10_000).map(|k| (2.0 * k as f64 / 10_000.0).powf(0.5)).fold(0.0, f64::max);
        assert!((x.value - oracle).abs() < 1e-12);

        let x1 = boundary_holder_constant(&BoundarySamples::of_fn(&HoloFn::LogExample, 1024, DEFAULT_EXCLUSION_ARC).unwrap(), 0.9).unwrap();
        let x2 = boundary_holder_constant(&BoundarySamples::of_fn(&HoloFn::LogExample, 2048, DEFAULT_EXCLUSION_ARC).unwrap(), 0.9).unwrap();
        assert!(x1.value.is_finite());
        assert!((x2.value - x1.value).abs() / x2.value < 0.05, "{} {}", x1.value, x2.value);
        assert!(boundary_holder_constant(&BoundarySamples::from_values(vec![c(0.0, 0.0); 32]), 0.5).is_err());
    }

    #[test]
    fn exclusion_arc_removes_singular_samples() {
        let s = BoundarySamples::of_fn(&HoloFn::LogExample, 4096, 1e-2).unwrap();
        assert!(s.angles.iter().all(|&t| wrap_angle(t).abs() >= 1e-2));
        assert_eq!(s.exclusion, 1e-2);
        assert!(s.len() < 4096);
    }

    #[test]
    fn c_alpha_printed_values() {
        assert!((c_alpha(0.5).unwrap() - 20.0).abs() < 1e-9);
        assert!((c_alpha(0.75).unwrap() - 44.0 / 3.0).abs() < 1e-9);
        // the other two terms at α = 1/2
        let t1 = 2f64.powf(1.5) * PI.powf(1.5) / 1.5;
        let t2 = PI.powf(1.5) / 2f64.powf(1.25) / (PI / 4.0).cos();
        assert!((t1 - 10.499).abs() < 1e-3 && (t2 - 3.311).abs() < 1e-3);
        assert!(c_alpha(0.999_999).unwrap() > 1e5);
        for bad in [0.0, 1.0, -0.2, f64::NAN] {
            assert!(c_alpha(bad).is_err());
        }
    }

    #[test]
    fn isoperimetric_examples() {
        let g = DiskGrid::standard();
        let one = isoperimetric_check(&HoloFn::constant(c(1.0, 0.0)), &g).unwrap();
        assert!((one.lhs - PI).abs() < 1e-12 && (one.rhs - PI).abs() < 1e-12 && one.pass);
        let z = isoperimetric_check(&HoloFn::Identity, &g).unwrap();
        assert!((z.lhs - PI / 2.0).abs() < 1e-12 && (z.rhs - PI).abs() < 1e-12 && z.pass);
        assert!(isoperimetric_check(&HoloFn::Series(vec![c(1.0, 0.0), c(1.0, 0.0)]), &g).unwrap().pass);
        assert!(isoperimetric_check(&HoloFn::LogExample, &g).unwrap().pass);
    }
}
