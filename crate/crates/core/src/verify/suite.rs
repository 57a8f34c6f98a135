//! Verification suites: manifests of checks, each producing verdicts.
//!
//! A manifest has one check per line, `name key=value ...`; `#` starts a
//! comment. Numbers may be written as `a/b` with products on either side,
//! and `pi` stands for π, so `expected=44/3` and `expected=8*pi/3` are
//! accepted. Lists are
//! comma-separated. Every line is parsed and validated before any check
//! runs.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::checks::{
    bergman_closed_form, composition_exponent_law, expect_violation, hardy_littlewood_propagation,
    holder_divergence, lemma_equivalence, main_theorem_holder, mori_check, stretch_holder_sharpness,
};
use super::qcmap::QcMapSpec;
use super::{Verdict, VerifyError, Witness, STABILITY_TOLERANCE};
use crate::curves::{square_vertices, JordanCurve};
use crate::hmap::{
    heinz_inf, poisson_extend_modes, poisson_kernel, rkc_extend, tangent_arg_field,
    vertexwise_linear, BoundaryFunction, HarmonicMap, PlanarMap,
};
use crate::holo::{bloch_alpha_norm, c_alpha, isoperimetric_check, DiskGrid, HoloFn};
use crate::quad::periodic_mean;

/// The built-in suite covering the library's acceptance properties.
pub const CORE_MANIFEST: &str = include_str!("core.suite");

/// Run-wide defaults for parameters a manifest line leaves out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteDefaults {
    pub seed: u64,
    pub grid_radial: usize,
    pub grid_angular: usize,
    pub n_pairs: usize,
    pub exclusion: f64,
    pub modes: usize,
}

impl Default for SuiteDefaults {
    fn default() -> Self {
        Self {
            seed: 1,
            grid_radial: 64,
            grid_angular: 512,
            n_pairs: 10_000,
            exclusion: 1e-3,
            modes: 512,
        }
    }
}

/// Parses numbers written as `x`, `a/b`, with `pi` and products such as
/// `8*pi/3` allowed on either side of the slash.
pub fn parse_number(text: &str) -> Option<f64> {
    let atom = |s: &str| {
        s.split('*').try_fold(1.0, |acc, factor| match factor.trim() {
            "pi" => Some(acc * PI),
            t => t.parse::<f64>().ok().map(|x| acc * x),
        })
    };
    match text.split_once('/') {
        Some((a, b)) => Some(atom(a)? / atom(b)?),
        None => atom(text),
    }
}

struct Params {
    line: usize,
    values: BTreeMap<String, String>,
}

impl Params {
    fn err(&self, msg: impl Into<String>) -> VerifyError {
        VerifyError::Manifest {
            line: self.line,
            msg: msg.into(),
        }
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.values.remove(key)
    }

    fn f64_or(&mut self, key: &str, default: f64) -> Result<f64, VerifyError> {
        match self.take(key) {
            None => Ok(default),
            Some(v) => parse_number(&v)
                .filter(|x| x.is_finite())
                .ok_or_else(|| self.err(format!("`{key}`: `{v}` is not a number"))),
        }
    }

    fn f64_req(&mut self, key: &str) -> Result<f64, VerifyError> {
        if !self.values.contains_key(key) {
            return Err(self.err(format!("missing parameter `{key}`")));
        }
        self.f64_or(key, 0.0)
    }

    fn usize_or(&mut self, key: &str, default: usize) -> Result<usize, VerifyError> {
        match self.take(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<usize>()
                .map_err(|_| self.err(format!("`{key}`: `{v}` is not a non-negative integer"))),
        }
    }

    fn u64_or(&mut self, key: &str, default: u64) -> Result<u64, VerifyError> {
        Ok(self.usize_or(key, default as usize)? as u64)
    }

    fn list(&mut self, key: &str) -> Result<Vec<f64>, VerifyError> {
        let v = self
            .take(key)
            .ok_or_else(|| self.err(format!("missing parameter `{key}`")))?;
        v.split(',')
            .map(|s| {
                parse_number(s)
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| self.err(format!("`{key}`: `{s}` is not a number")))
            })
            .collect()
    }

    fn string_or(&mut self, key: &str, default: &str) -> String {
        self.take(key).unwrap_or_else(|| default.to_string())
    }

    fn flag(&mut self, key: &str) -> Result<bool, VerifyError> {
        match self.take(key).as_deref() {
            None | Some("false") => Ok(false),
            Some("true") => Ok(true),
            Some(v) => Err(self.err(format!("`{key}`: expected true or false, got `{v}`"))),
        }
    }

    fn holo(&mut self, key: &str) -> Result<HoloFn, VerifyError> {
        let name = self
            .take(key)
            .ok_or_else(|| self.err(format!("missing parameter `{key}`")))?;
        HoloFn::builtin(&name).ok_or_else(|| self.err(format!("unknown holomorphic function `{name}`")))
    }

    fn harmonic(&mut self, key: &str) -> Result<HarmonicMap, VerifyError> {
        let name = self
            .take(key)
            .ok_or_else(|| self.err(format!("missing parameter `{key}`")))?;
        HarmonicMap::builtin(&name).ok_or_else(|| self.err(format!("unknown map `{name}`")))
    }

    /// A quasiconformal map: a gallery harmonic map or `stretch` with `k`.
    fn qc_map(&mut self, key: &str) -> Result<(QcMapSpec, Option<f64>), VerifyError> {
        let name = self
            .take(key)
            .ok_or_else(|| self.err(format!("missing parameter `{key}`")))?;
        if name == "stretch" {
            let k = self.f64_req("k")?;
            if k < 1.0 {
                return Err(self.err(format!("`k`: {k} must be at least 1")));
            }
            return Ok((QcMapSpec::stretch(k), Some(k)));
        }
        let m = HarmonicMap::builtin(&name).ok_or_else(|| self.err(format!("unknown map `{name}`")))?;
        Ok((QcMapSpec::harmonic(m), None))
    }

    fn grid(&mut self, d: &SuiteDefaults) -> Result<DiskGrid, VerifyError> {
        let nr = self.usize_or("grid_radial", d.grid_radial)?;
        let na = self.usize_or("grid_angular", d.grid_angular)?;
        let grid = DiskGrid::new(nr, na).map_err(|e| self.err(e.to_string()))?;
        Ok(match self.take("max_radius") {
            None => grid,
            Some(v) => {
                let r = parse_number(&v)
                    .filter(|r| *r > 0.0 && *r < 1.0)
                    .ok_or_else(|| self.err(format!("`max_radius`: `{v}` must lie in (0, 1)")))?;
                grid.with_max_radius(r)
            }
        })
    }

    fn finish(self) -> Result<(), VerifyError> {
        match self.values.keys().next() {
            None => Ok(()),
            Some(k) => Err(self.err(format!("unknown parameter `{k}`"))),
        }
    }
}

fn in_open_unit(p: &Params, key: &str, x: f64) -> Result<(), VerifyError> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(p.err(format!("`{key}`: {x} must lie in (0, 1)")))
    }
}

#[derive(Debug, Clone)]
enum Check {
    KernelNormalization { points: usize, max_radius: f64, samples: usize, seed: u64 },
    PoissonIdentity { modes: usize, samples: usize, grid: DiskGrid },
    CAlpha { alpha: f64, expected: f64 },
    CAlphaExceedsOne,
    Lemma { f: HoloFn, alpha: f64, grid: DiskGrid, boundary: usize, exclusion: f64 },
    HardyLittlewood { f: HoloFn, alpha: f64, grid: DiskGrid, boundary: usize, exclusion: f64 },
    F0Derivative { eps: f64 },
    F0Monotone { eps: Vec<f64> },
    BlochStable { f: HoloFn, alpha: f64, grid: DiskGrid, tolerance: f64 },
    Bergman { alpha: f64, p: f64, grid: DiskGrid, expected: Option<f64> },
    Mori { map: QcMapSpec, exponent: f64, pairs: usize, seed: u64, violation: bool },
    Heinz { map: HarmonicMap, grid: DiskGrid, expected: Option<f64> },
    Isoperimetric { f: HoloFn, grid: DiskGrid, equality: bool },
    Rkc { target: String, samples: usize, modes: usize, grids: Vec<DiskGrid> },
    Tangent { map: HarmonicMap, target: JordanCurve, grid: DiskGrid, nodes: usize, tolerance: f64, expected_u: Option<f64> },
    Stretch { k: f64, betas: Vec<f64>, seed: u64 },
    MainTheorem { map: QcMapSpec, alpha: f64, grid: DiskGrid, exclusion: Option<(f64, f64)>, seed: u64 },
    Divergence { map: QcMapSpec, alpha: f64, exclusion: Option<(f64, f64)>, seed: u64 },
    Composition { k_outer: f64, k_inner: f64, seed: u64 },
}

/// Exclusion arc around a harmonic map's singular boundary point, if any.
fn singular_arc(map: &QcMapSpec, half_width: f64) -> Option<(f64, f64)> {
    match map {
        QcMapSpec::Harmonic { map } => map
            .g
            .boundary_singularity()
            .or(map.h.boundary_singularity())
            .map(|a| (a, half_width)),
        _ => None,
    }
}

fn plan(name: &str, mut p: Params, d: &SuiteDefaults) -> Result<Check, VerifyError> {
    let check = match name {
        "kernel_normalization" => Check::KernelNormalization {
            points: p.usize_or("points", 20)?,
            max_radius: p.f64_or("max_radius", 0.99)?,
            samples: p.usize_or("samples", 4096)?,
            seed: p.u64_or("seed", d.seed)?,
        },
        "poisson_identity" => Check::PoissonIdentity {
            modes: p.usize_or("modes", d.modes)?,
            samples: p.usize_or("samples", 1024)?,
            grid: p.grid(d)?,
        },
        "c_alpha" => {
            let alpha = p.f64_req("alpha")?;
            in_open_unit(&p, "alpha", alpha)?;
            Check::CAlpha {
                alpha,
                expected: p.f64_req("expected")?,
            }
        }
        "c_alpha_exceeds_one" => Check::CAlphaExceedsOne,
        "lemma" | "hardy_littlewood" => {
            let f = p.holo("map")?;
            let alpha = p.f64_req("alpha")?;
            in_open_unit(&p, "alpha", alpha)?;
            let grid = p.grid(d)?;
            let boundary = p.usize_or("boundary", 1024)?;
            let exclusion = p.f64_or("exclusion", d.exclusion)?;
            if name == "lemma" {
                Check::Lemma { f, alpha, grid, boundary, exclusion }
            } else {
                Check::HardyLittlewood { f, alpha, grid, boundary, exclusion }
            }
        }
        "f0_derivative" => {
            let eps = p.f64_req("eps")?;
            in_open_unit(&p, "eps", eps)?;
            Check::F0Derivative { eps }
        }
        "f0_monotone" => {
            let eps = p.list("eps")?;
            for &e in &eps {
                in_open_unit(&p, "eps", e)?;
            }
            Check::F0Monotone { eps }
        }
        "bloch_stable" => {
            let f = p.holo("map")?;
            let alpha = p.f64_req("alpha")?;
            if !(0.0..=1.0).contains(&alpha) {
                return Err(p.err(format!("`alpha`: {alpha} must lie in [0, 1]")));
            }
            Check::BlochStable {
                f,
                alpha,
                grid: p.grid(d)?,
                tolerance: p.f64_or("tolerance", STABILITY_TOLERANCE)?,
            }
        }
        "bergman" => {
            let p_exp = p.f64_req("p")?;
            if !(p_exp > 0.0) {
                return Err(p.err(format!("`p`: {p_exp} must be positive")));
            }
            let alpha = match p.take("alpha").as_deref() {
                // the choice that makes (1 - α) p = 1/2
                Some("half_exponent") => 1.0 - 1.0 / (2.0 * p_exp),
                Some(v) => parse_number(v).ok_or_else(|| p.err(format!("`alpha`: `{v}` is not a number")))?,
                None => return Err(p.err("missing parameter `alpha`")),
            };
            if !(alpha > 0.0 && alpha <= 1.0) {
                return Err(p.err(format!("`alpha`: {alpha} must lie in (0, 1]")));
            }
            if (1.0 - alpha) * p_exp >= 1.0 {
                return Err(p.err(format!(
                    "(1 - alpha) p = {} must be below 1 for a finite integral",
                    (1.0 - alpha) * p_exp
                )));
            }
            let expected = match p.take("expected") {
                None => None,
                Some(v) => Some(parse_number(&v).ok_or_else(|| p.err(format!("`expected`: `{v}` is not a number")))?),
            };
            Check::Bergman { alpha, p: p_exp, grid: p.grid(d)?, expected }
        }
        "mori" => {
            let (map, k) = p.qc_map("map")?;
            let default_exponent = 1.0 / k.unwrap_or(1.0);
            let exponent = p.f64_or("exponent", default_exponent)?;
            if !(exponent > 0.0 && exponent <= 1.0) {
                return Err(p.err(format!("`exponent`: {exponent} must lie in (0, 1]")));
            }
            Check::Mori {
                map,
                exponent,
                pairs: p.usize_or("pairs", d.n_pairs)?,
                seed: p.u64_or("seed", d.seed)?,
                violation: p.string_or("expect", "pass") == "violation",
            }
        }
        "heinz" => {
            let map = p.harmonic("map")?;
            let expected = match p.take("expected") {
                None => None,
                Some(v) => Some(parse_number(&v).ok_or_else(|| p.err(format!("`expected`: `{v}` is not a number")))?),
            };
            Check::Heinz { map, grid: p.grid(d)?, expected }
        }
        "isoperimetric" => Check::Isoperimetric {
            f: p.holo("map")?,
            grid: p.grid(d)?,
            equality: p.flag("equality")?,
        },
        "rkc" => {
            let target = p.string_or("target", "square");
            if target != "square" && target != "circle" {
                return Err(p.err(format!("`target`: `{target}` must be square or circle")));
            }
            let samples = p.usize_or("samples", 1024)?;
            if samples < 64 || !samples.is_power_of_two() {
                return Err(p.err(format!("`samples`: {samples} must be a power of two >= 64")));
            }
            let modes = p.usize_or("modes", samples / 2 - 1)?;
            let base = p.grid(d)?;
            let levels = p.usize_or("levels", 2)?;
            let mut grids = vec![base];
            for _ in 1..levels {
                let next = grids.last().expect("non-empty").refined();
                grids.push(next);
            }
            Check::Rkc { target, samples, modes, grids }
        }
        "tangent" => {
            let map = p.harmonic("map")?;
            let target_name = p.string_or("target", "circle");
            let target = JordanCurve::builtin(&target_name).map_err(|e| p.err(e.to_string()))?;
            Check::Tangent {
                map,
                target,
                grid: p.grid(d)?,
                nodes: p.usize_or("nodes", 4096)?,
                tolerance: p.f64_req("tolerance")?,
                expected_u: match p.take("expected_u") {
                    None => None,
                    Some(v) => Some(parse_number(&v).ok_or_else(|| p.err(format!("`expected_u`: `{v}` is not a number")))?),
                },
            }
        }
        "stretch" => {
            let k = p.f64_req("k")?;
            if !(k > 1.0) {
                return Err(p.err(format!("`k`: {k} must exceed 1")));
            }
            let betas = p.list("betas")?;
            for &b in &betas {
                if !(b > 0.0 && b <= 1.0) {
                    return Err(p.err(format!("`betas`: {b} must lie in (0, 1]")));
                }
            }
            Check::Stretch { k, betas, seed: p.u64_or("seed", d.seed)? }
        }
        "main_theorem" | "holder_divergence" => {
            let (map, _) = p.qc_map("map")?;
            let alpha = p.f64_req("alpha")?;
            if !(alpha > 0.0 && alpha <= 1.0) {
                return Err(p.err(format!("`alpha`: {alpha} must lie in (0, 1]")));
            }
            let exclusion = singular_arc(&map, p.f64_or("exclusion", d.exclusion)?);
            let seed = p.u64_or("seed", d.seed)?;
            if name == "main_theorem" {
                Check::MainTheorem { map, alpha, grid: p.grid(d)?, exclusion, seed }
            } else {
                Check::Divergence { map, alpha, exclusion, seed }
            }
        }
        "composition" => {
            let k_outer = p.f64_req("k_outer")?;
            let k_inner = p.f64_req("k_inner")?;
            if !(k_outer >= 1.0 && k_inner >= 1.0) {
                return Err(p.err("`k_outer` and `k_inner` must be at least 1"));
            }
            Check::Composition { k_outer, k_inner, seed: p.u64_or("seed", d.seed)? }
        }
        other => {
            return Err(VerifyError::Manifest {
                line: p.line,
                msg: VerifyError::UnknownCheck(other.to_string()).to_string(),
            })
        }
    };
    p.finish()?;
    Ok(check)
}

fn f0_derivative_modulus(eps: f64) -> Result<f64, VerifyError> {
    Ok(HoloFn::LogExample.deriv(Complex64::new(1.0 - eps, 0.0))?.norm())
}

fn run_check(check: &Check) -> Result<Vec<Verdict>, VerifyError> {
    Ok(match check {
        Check::KernelNormalization { points, max_radius, samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut pts = Vec::with_capacity(*points);
            while pts.len() < *points {
                let z = Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0));
                if z.norm() <= *max_radius {
                    pts.push(z);
                }
            }
            let mut worst = (0.0, pts[0]);
            for &z in &pts {
                let total = TAU * periodic_mean(*samples, |t| poisson_kernel(z, t).unwrap_or(f64::NAN));
                let err = (total - 1.0).abs();
                if !(err <= worst.0) {
                    worst = (err, z);
                }
            }
            vec![Verdict::new("kernel_integral_error", worst.0, 1e-10, 0.0)
                .input("points", *points as f64)
                .input("samples", *samples as f64)
                .input("seed", *seed as f64)
                .witness(Witness::point(worst.1))]
        }
        Check::PoissonIdentity { modes, samples, grid } => {
            let bf = BoundaryFunction::sample(*samples, Complex64::cis)?;
            let m = poisson_extend_modes(&bf, *modes);
            let pts = grid.points();
            let errs: Vec<f64> = pts
                .par_iter()
                .map(|p| m.eval(p.z).map(|w| (w - p.z).norm()).unwrap_or(f64::NAN))
                .collect();
            let mut worst = (0.0, pts[0].z);
            for (e, p) in errs.into_iter().zip(&pts) {
                if !(e <= worst.0) {
                    worst = (e, p.z);
                }
            }
            vec![Verdict::new("extension_error", worst.0, 1e-10, 0.0)
                .input("modes", *modes as f64)
                .witness(Witness::point(worst.1))
                .grid(grid.meta())]
        }
        Check::CAlpha { alpha, expected } => {
            let c = c_alpha(*alpha)?;
            vec![Verdict::new("c_alpha_error", (c - expected).abs(), 1e-9, 0.0)
                .input("alpha", *alpha)
                .input("C", c)
                .input("expected", *expected)]
        }
        Check::CAlphaExceedsOne => {
            let mut min = (f64::INFINITY, 0.0);
            for j in 1..=19 {
                let alpha = 0.05 * j as f64;
                let c = c_alpha(alpha)?;
                if c < min.0 {
                    min = (c, alpha);
                }
            }
            // strict inequality: 1 < C
            vec![Verdict::new("one_below_c_alpha", 1.0 + f64::EPSILON, min.0, 0.0).input("argmin_alpha", min.1)]
        }
        Check::Lemma { f, alpha, grid, boundary, exclusion } => {
            let (a, b) = lemma_equivalence(f, *alpha, grid, *boundary, *exclusion)?;
            vec![a, b]
        }
        Check::HardyLittlewood { f, alpha, grid, boundary, exclusion } => {
            vec![hardy_littlewood_propagation(f, *alpha, grid, *boundary, *exclusion)?]
        }
        Check::F0Derivative { eps } => {
            let v = f0_derivative_modulus(*eps)?;
            let exact = 1.0 + (1.0 / eps).ln();
            vec![Verdict::new("f0_derivative_error", (v - exact).abs(), 1e-9, 0.0)
                .input("eps", *eps)
                .input("modulus", v)
                .input("closed_form", exact)
                .witness(Witness::point(Complex64::new(1.0 - eps, 0.0)))]
        }
        Check::F0Monotone { eps } => {
            let mut sorted = eps.clone();
            sorted.sort_by(|a, b| b.total_cmp(a));
            let vals: Vec<f64> = sorted.iter().map(|&e| f0_derivative_modulus(e)).collect::<Result<_, _>>()?;
            // largest decrease as eps shrinks; must be negative
            let worst = vals.windows(2).map(|w| w[0] - w[1]).fold(f64::NEG_INFINITY, f64::max);
            let mut v = Verdict::new("f0_derivative_increases", worst, 0.0, 0.0);
            for (e, m) in sorted.iter().zip(&vals) {
                v = v.input(&format!("modulus_at_{e:e}"), *m);
            }
            vec![v]
        }
        Check::BlochStable { f, alpha, grid, tolerance } => {
            let coarse = bloch_alpha_norm(f, *alpha, grid)?;
            let fine = bloch_alpha_norm(f, *alpha, &grid.refined())?;
            let change = if coarse.value == fine.value {
                0.0
            } else {
                (fine.value - coarse.value).abs() / fine.value.abs().max(coarse.value.abs())
            };
            vec![Verdict::new("bloch_stable", change, *tolerance, 0.0)
                .input("alpha", *alpha)
                .input("Y_coarse", coarse.value)
                .input("Y_fine", fine.value)
                .witness(Witness::point(fine.witness.z))
                .grid(grid.refined().meta())]
        }
        Check::Bergman { alpha, p, grid, expected } => {
            let v = bergman_closed_form(*alpha, *p, grid)?;
            let mut out = Vec::new();
            if let Some(e) = expected {
                let cf = v.inputs["closed_form"];
                out.push(
                    Verdict::new("closed_form_matches", (cf - e).abs() / e.abs(), 1e-6, 0.0)
                        .input("closed_form", cf)
                        .input("expected", *e),
                );
            }
            out.insert(0, v);
            out
        }
        Check::Mori { map, exponent, pairs, seed, violation } => {
            let v = mori_check(map, *exponent, *pairs, *seed)?;
            vec![if *violation { expect_violation(v) } else { v }]
        }
        Check::Heinz { map, grid, expected } => {
            let coarse = heinz_inf(map, grid)?;
            let fine = heinz_inf(map, &grid.refined())?;
            let mut out = Vec::new();
            if let Some(e) = expected {
                out.push(
                    Verdict::new("heinz_inf_error", (coarse.value - e).abs(), 1e-12, 0.0)
                        .input("inf", coarse.value)
                        .input("expected", *e)
                        .witness(Witness::point(coarse.witness.z))
                        .grid(grid.meta()),
                );
            }
            out.push(
                Verdict::new("heinz_inf_positive", f64::MIN_POSITIVE, coarse.value, 0.0)
                    .witness(Witness::point(coarse.witness.z))
                    .grid(grid.meta()),
            );
            let change = if coarse.value == fine.value {
                0.0
            } else {
                (fine.value - coarse.value).abs() / fine.value.max(coarse.value)
            };
            out.push(
                Verdict::new("heinz_inf_stable", change, STABILITY_TOLERANCE, 0.0)
                    .input("inf_coarse", coarse.value)
                    .input("inf_fine", fine.value)
                    .witness(Witness::point(fine.witness.z))
                    .grid(grid.refined().meta()),
            );
            out
        }
        Check::Isoperimetric { f, grid, equality } => {
            let c = isoperimetric_check(f, grid)?;
            let mut out = vec![Verdict::new("isoperimetric", c.lhs, c.rhs, 1e-6).grid(grid.meta())];
            if *equality {
                out.push(
                    Verdict::new("isoperimetric_equality", (c.lhs - c.rhs).abs(), 1e-12, 0.0)
                        .input("area_integral", c.lhs)
                        .input("boundary_term", c.rhs),
                );
            }
            out
        }
        Check::Rkc { target, samples, modes, grids } => {
            let (curve, bf) = if target == "square" {
                (
                    JordanCurve::polygon(&square_vertices(), 64)?,
                    vertexwise_linear(&square_vertices(), *samples)?,
                )
            } else {
                (JordanCurve::unit_circle(), BoundaryFunction::sample(*samples, Complex64::cis)?)
            };
            let mut out = Vec::new();
            for g in grids {
                let r = rkc_extend(&bf, &curve, *modes, g)?;
                out.push(
                    Verdict::new("jacobian_positive", f64::MIN_POSITIVE, r.min_jacobian, 0.0)
                        .input("min_jacobian", r.min_jacobian)
                        .input("convex_target", if r.convex_target { 1.0 } else { 0.0 })
                        .input("modes", *modes as f64)
                        .witness(Witness::point(r.witness.z))
                        .grid(g.meta()),
                );
            }
            out
        }
        Check::Tangent { map, target, grid, nodes, tolerance, expected_u } => {
            let field = tangent_arg_field(map, grid, target, *nodes)?;
            let mut out = Vec::new();
            if let Some(u) = expected_u {
                let dev = field.values.iter().map(|v| (v - u).abs()).fold(0.0, f64::max);
                out.push(
                    Verdict::new("tangent_field_constant", dev, *tolerance, 0.0)
                        .input("expected_u", *u)
                        .grid(field.grid),
                );
            }
            out.push(
                Verdict::new("tangent_boundary_error", field.boundary_error, *tolerance, 0.0)
                    .witness(Witness::point(Complex64::cis(field.witness_angle)))
                    .grid(field.grid),
            );
            out
        }
        Check::Stretch { k, betas, seed } => stretch_holder_sharpness(*k, betas, *seed)?
            .into_iter()
            .zip(std::iter::once(None).chain(betas.iter().map(Some)))
            .map(|(v, b)| match b {
                Some(b) => v.input("beta", *b),
                None => v,
            })
            .collect(),
        Check::MainTheorem { map, alpha, grid, exclusion, seed } => {
            vec![main_theorem_holder(map, *alpha, grid, *exclusion, *seed)?]
        }
        Check::Divergence { map, alpha, exclusion, seed } => {
            vec![holder_divergence(map, *alpha, *exclusion, *seed)?]
        }
        Check::Composition { k_outer, k_inner, seed } => vec![composition_exponent_law(
            &QcMapSpec::stretch(*k_outer),
            1.0 / k_outer,
            &QcMapSpec::stretch(*k_inner),
            1.0 / k_inner,
            *seed,
        )?],
    })
}

struct Item {
    line: usize,
    label: String,
    check: Check,
}

/// A parsed and validated suite.
pub struct Suite {
    items: Vec<Item>,
}

impl Suite {
    pub fn parse(text: &str, defaults: &SuiteDefaults) -> Result<Self, VerifyError> {
        let mut items = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let mut tokens = body.split_whitespace();
            let name = tokens.next().expect("non-empty line");
            let mut values = BTreeMap::new();
            for tok in tokens {
                let (k, v) = tok.split_once('=').ok_or_else(|| VerifyError::Manifest {
                    line,
                    msg: format!("expected key=value, got `{tok}`"),
                })?;
                if k.is_empty() || v.is_empty() {
                    return Err(VerifyError::Manifest {
                        line,
                        msg: format!("expected key=value, got `{tok}`"),
                    });
                }
                if values.insert(k.to_string(), v.to_string()).is_some() {
                    return Err(VerifyError::Manifest {
                        line,
                        msg: format!("duplicate parameter `{k}`"),
                    });
                }
            }
            let label = body.split_whitespace().collect::<Vec<_>>().join(" ");
            let check = plan(name, Params { line, values }, defaults)?;
            items.push(Item { line, label, check });
        }
        if items.is_empty() {
            return Err(VerifyError::Manifest {
                line: 0,
                msg: "manifest lists no checks".into(),
            });
        }
        Ok(Self { items })
    }

    /// Looks up a built-in suite.
    pub fn builtin(name: &str, defaults: &SuiteDefaults) -> Option<Result<Self, VerifyError>> {
        match name {
            "core" => Some(Self::parse(CORE_MANIFEST, defaults)),
            _ => None,
        }
    }

    pub const BUILTIN_NAMES: [&'static str; 1] = ["core"];

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Runs every check. Items run in parallel; verdicts come back in
    /// manifest order, named `<manifest line>: <verdict>`.
    pub fn run(&self) -> Result<Vec<Verdict>, VerifyError> {
        let results: Vec<Result<Vec<Verdict>, VerifyError>> = self
            .items
            .par_iter()
            .map(|item| {
                run_check(&item.check)
                    .map(|vs| {
                        vs.into_iter()
                            .map(|mut v| {
                                v.name = format!("{}: {}", item.label, v.name);
                                v
                            })
                            .collect()
                    })
                    .map_err(|e| VerifyError::Manifest {
                        line: item.line,
                        msg: e.to_string(),
                    })
            })
            .collect();
        let mut out = Vec::new();
        for r in results {
            out.extend(r?);
        }
        Ok(out)
    }
}
