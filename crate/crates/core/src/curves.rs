//! Closed planar curves and the boundary-geometry constants that enter the
//! Hölder and Hardy estimates: arc length, unit tangents, the continuous
//! tangent angle, the modulus of continuity of the tangent and the arc-chord
//! constant.
//!
//! Points are stored as [`Complex64`] so that curves compose directly with the
//! maps in [`crate::hmap`].

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::quad::gauss_legendre_on;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CurveError {
    #[error("curve needs at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("resampling needs n >= 16, got {0}")]
    TooFewNodes(usize),
    #[error("degenerate curve: total length {0:e}")]
    Degenerate(f64),
    #[error("non-finite coordinate at sample {0}")]
    NonFinite(usize),
    #[error("segments {0} and {1} intersect: not a Jordan curve")]
    SelfIntersection(usize, usize),
    #[error("nodes {0} and {1} coincide: not a Jordan curve")]
    CoincidentNodes(usize, usize),
    #[error("delta {delta} must lie in (0, {half}]")]
    BadDelta { delta: f64, half: f64 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown built-in curve `{0}`")]
    UnknownBuiltin(String),
    #[error("{0}")]
    Io(String),
}

/// Closed-form curves with exact positions and velocities.
///
/// Every variant is parametrised by `t ∈ [0, 2π)` and traversed
/// counter-clockwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnalyticCurve {
    Circle { center: [f64; 2], radius: f64 },
    Ellipse { semi_x: f64, semi_y: f64 },
    /// Axis-aligned square of the given side centred at the origin with
    /// circular corners; parametrised proportionally to arc length.
    RoundedSquare { side: f64, corner_radius: f64 },
    /// Image of the unit circle under `2z + (1-z)log(1-z)`.
    LogExampleImage,
}

impl AnalyticCurve {
    pub fn point(&self, t: f64) -> Complex64 {
        match *self {
            AnalyticCurve::Circle { center, radius } => {
                Complex64::new(center[0], center[1]) + radius * Complex64::cis(t)
            }
            AnalyticCurve::Ellipse { semi_x, semi_y } => {
                Complex64::new(semi_x * t.cos(), semi_y * t.sin())
            }
            AnalyticCurve::RoundedSquare { .. } => {
                let s = t.rem_euclid(TAU) / TAU * self.rounded_square_length();
                self.rounded_square_at(s).0
            }
            AnalyticCurve::LogExampleImage => {
                let z = Complex64::cis(t);
                let w = Complex64::new(1.0, 0.0) - z;
                if w.norm() == 0.0 {
                    // continuous extension at the branch point
                    Complex64::new(2.0, 0.0)
                } else {
                    2.0 * z + w * w.ln()
                }
            }
        }
    }

    /// Derivative of [`AnalyticCurve::point`] with respect to `t`.
    ///
    /// For the log example the derivative is unbounded at `t = 0`; the value
    /// returned there is the limiting direction scaled to infinity.
    pub fn velocity(&self, t: f64) -> Complex64 {
        match *self {
            AnalyticCurve::Circle { radius, .. } => {
                radius * Complex64::i() * Complex64::cis(t)
            }
            AnalyticCurve::Ellipse { semi_x, semi_y } => {
                Complex64::new(-semi_x * t.sin(), semi_y * t.cos())
            }
            AnalyticCurve::RoundedSquare { .. } => {
                let len = self.rounded_square_length();
                let s = t.rem_euclid(TAU) / TAU * len;
                self.rounded_square_at(s).1 * (len / TAU)
            }
            AnalyticCurve::LogExampleImage => {
                let z = Complex64::cis(t);
                let w = Complex64::new(1.0, 0.0) - z;
                if w.norm() == 0.0 {
                    Complex64::new(0.0, f64::INFINITY)
                } else {
                    Complex64::i() * z * (1.0 - w.ln())
                }
            }
        }
    }

    /// Unit tangent at parameter `t`.
    pub fn unit_tangent(&self, t: f64) -> Complex64 {
        let v = self.velocity(t);
        if !v.re.is_finite() || !v.im.is_finite() {
            if let AnalyticCurve::LogExampleImage = self {
                return Complex64::i();
            }
        }
        v / v.norm()
    }

    fn rounded_square_length(&self) -> f64 {
        match *self {
            AnalyticCurve::RoundedSquare {
                side,
                corner_radius,
            } => 4.0 * (side - 2.0 * corner_radius) + TAU * corner_radius,
            _ => unreachable!(),
        }
    }

    /// Position and unit tangent at arc length `s`, starting at the middle of
    /// the right edge.
    fn rounded_square_at(&self, s: f64) -> (Complex64, Complex64) {
        let AnalyticCurve::RoundedSquare {
            side,
            corner_radius: cr,
        } = *self
        else {
            unreachable!()
        };
        let half = 0.5 * side;
        let a = half - cr;
        let quarter = 2.0 * a + 0.5 * PI * cr;
        let s = s.rem_euclid(4.0 * quarter);
        let k = ((s / quarter).floor() as i32).clamp(0, 3);
        let sigma = s - k as f64 * quarter;
        let (p, tan) = if sigma < a {
            (Complex64::new(half, sigma), Complex64::new(0.0, 1.0))
        } else if sigma < a + 0.5 * PI * cr {
            let phi = (sigma - a) / cr;
            (
                Complex64::new(a + cr * phi.cos(), a + cr * phi.sin()),
                Complex64::new(-phi.sin(), phi.cos()),
            )
        } else {
            let rest = sigma - a - 0.5 * PI * cr;
            (Complex64::new(a - rest, half), Complex64::new(-1.0, 0.0))
        };
        let rot = Complex64::cis(0.5 * PI * k as f64);
        (rot * p, rot * tan)
    }
}

/// A closed planar curve, stored as an implicitly closed polyline and an
/// optional closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanCurve {
    points: Vec<Complex64>,
    analytic: Option<AnalyticCurve>,
}

const ANALYTIC_PREVIEW_SAMPLES: usize = 256;

impl JordanCurve {
    /// Builds a curve from polyline vertices. A repeated closing vertex is
    /// dropped; the polygon must be simple.
    pub fn from_points(mut points: Vec<Complex64>) -> Result<Self, CurveError> {
        if let Some(i) = points.iter().position(|p| !p.re.is_finite() || !p.im.is_finite()) {
            return Err(CurveError::NonFinite(i));
        }
        if points.len() >= 2 {
            let scale = points.iter().map(|p| p.norm()).fold(1.0, f64::max);
            if (points[0] - points[points.len() - 1]).norm() <= 1e-12 * scale {
                points.pop();
            }
        }
        if points.len() < 3 {
            return Err(CurveError::TooFewSamples {
                needed: 3,
                got: points.len(),
            });
        }
        check_simple(&points)?;
        Ok(Self {
            points,
            analytic: None,
        })
    }

    /// Polygon through `vertices`, each edge subdivided into `per_edge`
    /// pieces so that the polyline carries enough samples for resampling.
    pub fn polygon(vertices: &[Complex64], per_edge: usize) -> Result<Self, CurveError> {
        let per_edge = per_edge.max(1);
        let n = vertices.len();
        let mut pts = Vec::with_capacity(n * per_edge);
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            for k in 0..per_edge {
                pts.push(a + (b - a) * (k as f64 / per_edge as f64));
            }
        }
        Self::from_points(pts)
    }

    pub fn analytic(form: AnalyticCurve) -> Self {
        let points = (0..ANALYTIC_PREVIEW_SAMPLES)
            .map(|k| form.point(TAU * k as f64 / ANALYTIC_PREVIEW_SAMPLES as f64))
            .collect();
        Self {
            points,
            analytic: Some(form),
        }
    }

    pub fn unit_circle() -> Self {
        Self::analytic(AnalyticCurve::Circle {
            center: [0.0, 0.0],
            radius: 1.0,
        })
    }

    /// Looks up a gallery curve by name.
    pub fn builtin(name: &str) -> Result<Self, CurveError> {
        let c = |x: f64, y: f64| Complex64::new(x, y);
        match name {
            "circle" => Ok(Self::unit_circle()),
            "ellipse" => Ok(Self::analytic(AnalyticCurve::Ellipse {
                semi_x: 1.3,
                semi_y: 0.7,
            })),
            "rounded-square" => Ok(Self::analytic(AnalyticCurve::RoundedSquare {
                side: 2.0,
                corner_radius: 0.5,
            })),
            "f0-image" => Ok(Self::analytic(AnalyticCurve::LogExampleImage)),
            "square" => Self::polygon(&square_vertices(), 64),
            "l-shape" => Self::polygon(&l_shape_vertices(), 32),
            "stadium" => {
                // two unit half-circles joined by straight sides of length 2
                let mut pts = Vec::new();
                for k in 0..64 {
                    pts.push(c(2.0 * k as f64 / 64.0 - 1.0, -1.0));
                }
                for k in 0..64 {
                    let a = -0.5 * PI + PI * k as f64 / 64.0;
                    pts.push(c(1.0, 0.0) + Complex64::cis(a));
                }
                for k in 0..64 {
                    pts.push(c(1.0 - 2.0 * k as f64 / 64.0, 1.0));
                }
                for k in 0..64 {
                    let a = 0.5 * PI + PI * k as f64 / 64.0;
                    pts.push(c(-1.0, 0.0) + Complex64::cis(a));
                }
                Self::from_points(pts)
            }
            other => Err(CurveError::UnknownBuiltin(other.to_string())),
        }
    }

    pub const BUILTIN_NAMES: [&'static str; 7] = [
        "circle",
        "ellipse",
        "rounded-square",
        "f0-image",
        "square",
        "l-shape",
        "stadium",
    ];

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn analytic_form(&self) -> Option<&AnalyticCurve> {
        self.analytic.as_ref()
    }

    /// Twice the signed area enclosed by the polyline, halved. Positive for
    /// counter-clockwise curves.
    pub fn signed_area(&self) -> f64 {
        let n = self.points.len();
        0.5 * (0..n)
            .map(|i| {
                let a = self.points[i];
                let b = self.points[(i + 1) % n];
                a.re * b.im - a.im * b.re
            })
            .sum::<f64>()
    }

    /// Applies `z ↦ rotation·scale·z + shift`, keeping closed forms where the
    /// family is closed under the motion.
    pub fn transformed(&self, rotation: f64, scale: f64, shift: Complex64) -> Result<Self, CurveError> {
        let map = |p: Complex64| Complex64::cis(rotation) * scale * p + shift;
        if let Some(AnalyticCurve::Circle { center, radius }) = self.analytic {
            let c = map(Complex64::new(center[0], center[1]));
            return Ok(Self::analytic(AnalyticCurve::Circle {
                center: [c.re, c.im],
                radius: radius * scale,
            }));
        }
        Self::from_points(self.points.iter().map(|&p| map(p)).collect())
    }

    /// Reads a curve file: one `x y` pair per line, `#` comments, implicitly
    /// closed.
    pub fn parse(text: &str) -> Result<Self, CurveError> {
        let mut pts = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(CurveError::Parse {
                    line: idx + 1,
                    msg: format!("expected `x y`, found {} fields", fields.len()),
                });
            }
            let num = |s: &str| {
                s.parse::<f64>().map_err(|e| CurveError::Parse {
                    line: idx + 1,
                    msg: format!("`{s}`: {e}"),
                })
            };
            pts.push(Complex64::new(num(fields[0])?, num(fields[1])?));
        }
        Self::from_points(pts)
    }

    pub fn read(path: &Path) -> Result<Self, CurveError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CurveError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Resamples the curve at `n` nodes equally spaced in arc length.
    pub fn resample_arclength(&self, n: usize) -> Result<ArcLengthParam, CurveError> {
        if n < 16 {
            return Err(CurveError::TooFewNodes(n));
        }
        match &self.analytic {
            Some(form) => resample_analytic(form, n),
            None => {
                if self.points.len() < 8 {
                    return Err(CurveError::TooFewSamples {
                        needed: 8,
                        got: self.points.len(),
                    });
                }
                resample_polyline(&self.points, n)
            }
        }
    }
}

pub fn square_vertices() -> Vec<Complex64> {
    vec![
        Complex64::new(1.0, 1.0),
        Complex64::new(-1.0, 1.0),
        Complex64::new(-1.0, -1.0),
        Complex64::new(1.0, -1.0),
    ]
}

/// A thin L: unit-width arms of length 3 meeting at a reflex corner.
pub fn l_shape_vertices() -> Vec<Complex64> {
    [(0.0, 0.0), (3.0, 0.0), (3.0, 0.5), (0.5, 0.5), (0.5, 3.0), (0.0, 3.0)]
        .iter()
        .map(|&(x, y)| Complex64::new(x - 1.0, y - 1.0))
        .collect()
}

fn orient(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    let u = b - a;
    let v = c - a;
    u.re * v.im - u.im * v.re
}

fn on_segment(a: Complex64, b: Complex64, p: Complex64) -> bool {
    p.re >= a.re.min(b.re) && p.re <= a.re.max(b.re) && p.im >= a.im.min(b.im) && p.im <= a.im.max(b.im)
}

fn segments_intersect(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

fn check_simple(points: &[Complex64]) -> Result<(), CurveError> {
    let n = points.len();
    let hit = (0..n).into_par_iter().find_first(|&i| {
        let a = points[i];
        let b = points[(i + 1) % n];
        (i + 2..n).any(|j| {
            if i == 0 && j == n - 1 {
                return false;
            }
            segments_intersect(a, b, points[j], points[(j + 1) % n])
        })
    });
    match hit {
        None => Ok(()),
        Some(i) => {
            let a = points[i];
            let b = points[(i + 1) % n];
            let j = (i + 2..n)
                .find(|&j| !(i == 0 && j == n - 1) && segments_intersect(a, b, points[j], points[(j + 1) % n]))
                .unwrap_or(i);
            Err(CurveError::SelfIntersection(i, j))
        }
    }
}

/// A curve sampled at nodes equally spaced in arc length.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcLengthParam {
    pub total_length: f64,
    pub nodes: Vec<f64>,
    pub positions: Vec<Complex64>,
    pub tangents: Vec<Complex64>,
}

impl ArcLengthParam {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.total_length / self.nodes.len() as f64
    }

    pub fn tangent_field(&self) -> TangentField {
        TangentField::from_tangents(&self.tangents)
    }

    /// Arc-length coordinate of the point of the sampled curve closest to
    /// `p`, found by projection onto the node polyline.
    pub fn locate(&self, p: Complex64) -> f64 {
        let n = self.len();
        let h = self.spacing();
        let (best, _) = (0..n)
            .map(|i| {
                let a = self.positions[i];
                let b = self.positions[(i + 1) % n];
                let ab = b - a;
                let lam = ((p - a) * ab.conj()).re / ab.norm_sqr();
                let lam = lam.clamp(0.0, 1.0);
                (i as f64 + lam, (a + ab * lam - p).norm())
            })
            .fold((0.0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
        best * h
    }
}

fn centered_tangents(positions: &[Complex64]) -> Vec<Complex64> {
    let n = positions.len();
    (0..n)
        .map(|i| {
            let d = positions[(i + 1) % n] - positions[(i + n - 1) % n];
            d / d.norm()
        })
        .collect()
}

fn uniform_nodes(total: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| total * i as f64 / n as f64).collect()
}

fn resample_polyline(points: &[Complex64], n: usize) -> Result<ArcLengthParam, CurveError> {
    let m = points.len();
    let mut cumulative = Vec::with_capacity(m + 1);
    cumulative.push(0.0);
    for i in 0..m {
        let seg = (points[(i + 1) % m] - points[i]).norm();
        cumulative.push(cumulative[i] + seg);
    }
    let total = cumulative[m];
    if total < 1e-12 {
        return Err(CurveError::Degenerate(total));
    }
    let nodes = uniform_nodes(total, n);
    let positions: Vec<Complex64> = nodes
        .iter()
        .map(|&s| {
            let k = cumulative.partition_point(|&c| c <= s).saturating_sub(1).min(m - 1);
            let seg = cumulative[k + 1] - cumulative[k];
            let lam = if seg > 0.0 { (s - cumulative[k]) / seg } else { 0.0 };
            points[k] + (points[(k + 1) % m] - points[k]) * lam
        })
        .collect();
    let tangents = centered_tangents(&positions);
    Ok(ArcLengthParam {
        total_length: total,
        nodes,
        positions,
        tangents,
    })
}

const GL_ORDER: usize = 6;

fn resample_analytic(form: &AnalyticCurve, n: usize) -> Result<ArcLengthParam, CurveError> {
    let cells = (16 * n).max(4096);
    let dt = TAU / cells as f64;
    let speed = |t: f64| {
        let v = form.velocity(t).norm();
        if v.is_finite() { v } else { 0.0 }
    };
    let arc = |a: f64, b: f64| -> f64 {
        gauss_legendre_on(GL_ORDER, a, b)
            .iter()
            .map(|&(t, w)| w * speed(t))
            .sum()
    };
    let pieces: Vec<f64> = (0..cells)
        .into_par_iter()
        .map(|k| arc(k as f64 * dt, (k + 1) as f64 * dt))
        .collect();
    let mut cumulative = Vec::with_capacity(cells + 1);
    cumulative.push(0.0);
    for (k, p) in pieces.iter().enumerate() {
        cumulative.push(cumulative[k] + p);
    }
    let total = cumulative[cells];
    if !(total >= 1e-12) {
        return Err(CurveError::Degenerate(total));
    }
    let nodes = uniform_nodes(total, n);
    let params: Vec<f64> = nodes
        .par_iter()
        .map(|&s| {
            let k = cumulative.partition_point(|&c| c <= s).saturating_sub(1).min(cells - 1);
            let t0 = k as f64 * dt;
            let target = s - cumulative[k];
            // safeguarded Newton on the in-cell arc length
            let (mut lo, mut hi) = (t0, t0 + dt);
            let mut t = t0 + dt * (target / pieces[k].max(f64::MIN_POSITIVE)).clamp(0.0, 1.0);
            for _ in 0..60 {
                let g = arc(t0, t) - target;
                if g.abs() < 1e-15 * total.max(1.0) {
                    break;
                }
                if g > 0.0 {
                    hi = t;
                } else {
                    lo = t;
                }
                let v = speed(t);
                let next = if v > 0.0 { t - g / v } else { f64::NAN };
                t = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
                if hi - lo < 1e-16 {
                    break;
                }
            }
            t
        })
        .collect();
    let positions = params.iter().map(|&t| form.point(t)).collect();
    let tangents = params.iter().map(|&t| form.unit_tangent(t)).collect();
    Ok(ArcLengthParam {
        total_length: total,
        nodes,
        positions,
        tangents,
    })
}

/// Continuous branch of the tangent angle at the arc-length nodes, closed by
/// one extra entry for `s = |γ|`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentField {
    pub angles: Vec<f64>,
}

/// Reduces an angle to `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r > PI { r - TAU } else { r }
}

impl TangentField {
    pub fn from_tangents(tangents: &[Complex64]) -> Self {
        let n = tangents.len();
        let mut angles = Vec::with_capacity(n + 1);
        let mut current = tangents[0].arg();
        angles.push(current);
        for i in 1..=n {
            let prev = tangents[i - 1];
            let next = tangents[i % n];
            current += wrap_angle(next.arg() - prev.arg());
            angles.push(current);
        }
        Self { angles }
    }

    pub fn total_turning(&self) -> f64 {
        self.angles[self.angles.len() - 1] - self.angles[0]
    }

    /// Tangent angle at arc-length `s`, linearly interpolated between nodes.
    pub fn angle_at(&self, s: f64, total_length: f64) -> f64 {
        let n = self.angles.len() - 1;
        let x = s.rem_euclid(total_length) / total_length * n as f64;
        let i = (x.floor() as usize).min(n - 1);
        let lam = x - i as f64;
        self.angles[i] * (1.0 - lam) + self.angles[i + 1] * lam
    }
}

/// One row of a modulus-of-continuity table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuityEntry {
    pub delta: f64,
    pub omega: f64,
}

/// Tabulates `ω(δ) = max |g'(s) - g'(t)|` over node pairs at arc distance at
/// most `δ`, plus pairs at distance exactly `δ` with the far tangent
/// interpolated linearly between nodes. The table is made nondecreasing in `δ`.
pub fn modulus_of_continuity(
    param: &ArcLengthParam,
    deltas: &[f64],
) -> Result<Vec<ContinuityEntry>, CurveError> {
    let half = 0.5 * param.total_length;
    for &d in deltas {
        if !(d > 0.0 && d <= half * (1.0 + 1e-12)) {
            return Err(CurveError::BadDelta { delta: d, half });
        }
    }
    let n = param.len();
    let h = param.spacing();
    let tangents = &param.tangents;
    let max_offset = |d: f64| (((d / h) * (1.0 + 1e-12)).floor() as usize).min(n / 2);
    let kmax = deltas.iter().map(|&d| max_offset(d)).max().unwrap_or(0);
    let per_offset: Vec<f64> = (0..=kmax)
        .into_par_iter()
        .map(|k| {
            (0..n)
                .map(|i| (tangents[(i + k) % n] - tangents[i]).norm())
                .fold(0.0, f64::max)
        })
        .collect();
    let mut running = Vec::with_capacity(per_offset.len());
    let mut acc = 0.0f64;
    for w in per_offset {
        acc = acc.max(w);
        running.push(acc);
    }
    let at_delta = |d: f64| {
        let x = d / h;
        let k = x.floor() as usize;
        let frac = x - k as f64;
        (0..n)
            .map(|i| {
                let far = tangents[(i + k) % n] * (1.0 - frac) + tangents[(i + k + 1) % n] * frac;
                let far = if far.norm() > 0.0 { far / far.norm() } else { far };
                (far - tangents[i]).norm()
            })
            .fold(0.0, f64::max)
    };
    let mut omegas: Vec<f64> = deltas
        .par_iter()
        .map(|&d| running[max_offset(d)].max(at_delta(d)))
        .collect();
    let mut order: Vec<usize> = (0..deltas.len()).collect();
    order.sort_by(|&a, &b| deltas[a].total_cmp(&deltas[b]));
    let mut acc = 0.0f64;
    for &i in &order {
        acc = acc.max(omegas[i]);
        omegas[i] = acc;
    }
    Ok(deltas
        .iter()
        .zip(omegas)
        .map(|(&delta, omega)| ContinuityEntry { delta, omega })
        .collect())
}

/// Arc-chord constant with the node pair attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArcChord {
    pub b: f64,
    pub witness: (usize, usize),
}

impl fmt::Display for ArcChord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B = {} at nodes {:?}", self.b, self.witness)
    }
}

/// `B = max min(arc, |γ| - arc) / chord` over all node pairs.
pub fn arc_chord_constant(param: &ArcLengthParam) -> Result<ArcChord, CurveError> {
    let n = param.len();
    let total = param.total_length;
    let h = param.spacing();
    let rows: Vec<Result<(f64, usize), CurveError>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = (1.0f64, i);
            for j in i + 1..n {
                let chord = (param.positions[j] - param.positions[i]).norm();
                if chord < 1e-12 {
                    return Err(CurveError::CoincidentNodes(i, j));
                }
                let arc = (j - i) as f64 * h;
                let ratio = arc.min(total - arc) / chord;
                if ratio > best.0 {
                    best = (ratio, j);
                }
            }
            Ok(best)
        })
        .collect();
    let mut out = ArcChord {
        b: 1.0,
        witness: (0, 0),
    };
    for (i, row) in rows.into_iter().enumerate() {
        let (b, j) = row?;
        if b > out.b {
            out = ArcChord { b, witness: (i, j) };
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    #[test]
    fn unit_circle_length_and_tangent() {
        let p = JordanCurve::unit_circle().resample_arclength(256).unwrap();
        assert!((p.total_length - TAU).abs() < 1e-6);
        assert!((p.tangents[0] - c(0.0, 1.0)).norm() < 1e-4);
        for w in p.nodes.windows(2) {
            assert!((w[1] - w[0] - p.total_length / 256.0).abs() < 1e-9);
        }
        for t in &p.tangents {
            assert!((t.norm() - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn rounded_square_perimeter() {
        let p = JordanCurve::builtin("rounded-square")
            .unwrap()
            .resample_arclength(512)
            .unwrap();
        assert!((p.total_length - (4.0 + PI * 0.5 * 2.0)).abs() < 1e-3);
    }

    #[test]
    fn circle_modulus_matches_chord_formula() {
        let p = JordanCurve::unit_circle().resample_arclength(1024).unwrap();
        let t = modulus_of_continuity(&p, &[0.1]).unwrap();
        assert!((t[0].omega - 2.0 * 0.05f64.sin()).abs() < 1e-4, "{}", t[0].omega);
    }

    #[test]
    fn square_corner_jump() {
        let sq = JordanCurve::polygon(&square_vertices(), 16).unwrap();
        let p = sq.resample_arclength(4096).unwrap();
        let t = modulus_of_continuity(&p, &[0.01]).unwrap();
        // exterior angle π/2 gives |e1 - e2| = 2 sin(π/4)
        let oracle = 2.0 * (0.25 * PI).sin();
        assert!((t[0].omega - oracle).abs() < 1e-9, "{}", t[0].omega);
    }

    #[test]
    fn delta_above_half_length_is_rejected() {
        let p = JordanCurve::unit_circle().resample_arclength(64).unwrap();
        assert!(matches!(
            modulus_of_continuity(&p, &[4.0]),
            Err(CurveError::BadDelta { .. })
        ));
    }

    #[test]
    fn circle_arc_chord_is_half_pi() {
        // oracle: dense scan of s / (2 sin(s/2)) on (0, π]
        let oracle = (1..=100_000)
            .map(|k| {
                let s = PI * k as f64 / 100_000.0;
                s / (2.0 * (0.5 * s).sin())
            })
            .fold(0.0, f64::max);
        let p = JordanCurve::unit_circle().resample_arclength(256).unwrap();
        let b = arc_chord_constant(&p).unwrap();
        assert!((b.b - oracle).abs() < 1e-3);
        assert!((b.b - 0.5 * PI).abs() < 1e-3);
    }

    #[test]
    fn stadium_arc_chord_is_finite_and_above_one() {
        let p = JordanCurve::builtin("stadium").unwrap().resample_arclength(256).unwrap();
        let b = arc_chord_constant(&p).unwrap();
        // brute force over the same node pairs
        let n = p.len();
        let mut brute = 1.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let arc = (i as f64 - j as f64).abs() * p.spacing();
                    let arc = arc.min(p.total_length - arc);
                    brute = brute.max(arc / (p.positions[i] - p.positions[j]).norm());
                }
            }
        }
        assert!(b.b > 1.0 && b.b.is_finite());
        assert!((b.b - brute).abs() < 1e-12);
    }

    #[test]
    fn arc_chord_invariant_under_similarity() {
        let base = JordanCurve::unit_circle();
        let moved = base.transformed(0.7, 5.0, c(3.0, -2.0)).unwrap();
        let b0 = arc_chord_constant(&base.resample_arclength(128).unwrap()).unwrap().b;
        let b1 = arc_chord_constant(&moved.resample_arclength(128).unwrap()).unwrap().b;
        assert!((b0 - b1).abs() < 1e-9);

        let l = JordanCurve::builtin("l-shape").unwrap();
        let lm = l.transformed(-1.1, 0.25, c(-4.0, 9.0)).unwrap();
        let b0 = arc_chord_constant(&l.resample_arclength(128).unwrap()).unwrap().b;
        let b1 = arc_chord_constant(&lm.resample_arclength(128).unwrap()).unwrap().b;
        assert!((b0 - b1).abs() < 1e-9, "{b0} vs {b1}");
    }

    #[test]
    fn total_turning_is_two_pi() {
        for name in JordanCurve::BUILTIN_NAMES {
            let curve = JordanCurve::builtin(name).unwrap();
            assert!(curve.signed_area() > 0.0, "{name} orientation");
            let p = curve.resample_arclength(256).unwrap();
            let turning = p.tangent_field().total_turning();
            assert!((turning - TAU).abs() < 1e-6, "{name}: {turning}");
        }
    }

    #[test]
    fn resampling_positions_of_circle_is_idempotent() {
        let p = JordanCurve::unit_circle().resample_arclength(256).unwrap();
        let again = JordanCurve::from_points(p.positions.clone())
            .unwrap()
            .resample_arclength(256)
            .unwrap();
        let h = again.spacing();
        for (i, (a, b)) in p.positions.iter().zip(&again.positions).enumerate() {
            assert!((a - b).norm() < 1e-6, "node {i}");
            assert!((again.nodes[i] - i as f64 * h).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            JordanCurve::from_points(vec![c(0.0, 0.0), c(1.0, 0.0)]),
            Err(CurveError::TooFewSamples { .. })
        ));
        let bowtie = vec![c(0.0, 0.0), c(1.0, 1.0), c(1.0, 0.0), c(0.0, 1.0)];
        assert!(matches!(
            JordanCurve::from_points(bowtie),
            Err(CurveError::SelfIntersection(..))
        ));
        let tiny = JordanCurve::polygon(
            &[c(0.0, 0.0), c(1e-14, 0.0), c(1e-14, 1e-14), c(0.0, 1e-14)],
            4,
        )
        .unwrap();
        assert!(matches!(tiny.resample_arclength(32), Err(CurveError::Degenerate(_))));
        assert!(matches!(
            JordanCurve::unit_circle().resample_arclength(8),
            Err(CurveError::TooFewNodes(8))
        ));
    }

    #[test]
    fn parses_curve_file() {
        let text = "# square\n0 0\n1 0\n\n1 1\n0 1\n";
        let curve = JordanCurve::parse(text).unwrap();
        assert_eq!(curve.points().len(), 4);
        let err = JordanCurve::parse("0 0\n1 x\n").unwrap_err();
        assert!(matches!(err, CurveError::Parse { line: 2, .. }));
    }
}
