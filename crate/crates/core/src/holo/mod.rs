//! Holomorphic functions on the unit disk and their norms.

mod grid;
mod norms;

use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

pub use grid::{
    DiskGrid, DiskPoint, GridMeta, RadialNode, Radius, DEFAULT_BOUNDARY_DEPTH,
    DEFAULT_QUADRATURE_DEPTH,
};
pub use norms::{
    bergman_norm, bloch_alpha_norm, boundary_holder_constant, c_alpha, hardy_norm,
    isoperimetric_check, BlochEstimate, BoundarySamples, HardyMean, HolderEstimate,
    IsoperimetricCheck, DEFAULT_EXCLUSION_ARC,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HoloError {
    #[error("point {0} lies outside the closed unit disk")]
    OutsideDisk(Complex64),
    #[error("singular boundary point {0}")]
    Singular(Complex64),
    #[error("alpha = {0} must lie in (0, 1)")]
    AlphaOutOfRange(f64),
    #[error("exponent p = {0} must be positive")]
    BadExponent(f64),
    #[error("radius r = {0} must lie in (0, 1]")]
    BadRadius(f64),
    #[error("need at least {needed} angular samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("non-finite integrand at z = {0}")]
    NonFinite(Complex64),
    #[error("grid does not resolve the boundary: reaches r = {0}, need 1 - 1e-4")]
    UnresolvedBoundary(f64),
    #[error("Möbius parameter |a| = {0} must be below 1")]
    BadMobius(f64),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Io(String),
}

/// Truncation used when a closed form is expanded into a power series.
pub const DEFAULT_SERIES_TRUNCATION: usize = 256;

/// A holomorphic function on the unit disk.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum HoloFn {
    /// Finite power series `Σ a_n z^n`.
    Series(Vec<Complex64>),
    Identity,
    Monomial(u32),
    /// Disk automorphism `(z + a) / (1 + conj(a) z)`.
    Mobius(Complex64),
    /// `2z + (1-z) log(1-z)` with the principal logarithm: conformal onto a
    /// domain with C¹ boundary, but with unbounded derivative near `z = 1`.
    LogExample,
}

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

impl HoloFn {
    pub fn constant(c: Complex64) -> Self {
        HoloFn::Series(vec![c])
    }

    pub fn zero() -> Self {
        HoloFn::Series(Vec::new())
    }

    pub fn mobius(a: Complex64) -> Result<Self, HoloError> {
        if a.norm() < 1.0 {
            Ok(HoloFn::Mobius(a))
        } else {
            Err(HoloError::BadMobius(a.norm()))
        }
    }

    /// Looks up a gallery function by name.
    pub fn builtin(name: &str) -> Option<Self> {
        Some(match name {
            "identity" | "z" => HoloFn::Identity,
            "z2" => HoloFn::Monomial(2),
            "z3" => HoloFn::Monomial(3),
            "mobius" => HoloFn::Mobius(Complex64::new(0.5, 0.0)),
            "f0" => HoloFn::LogExample,
            "one" => HoloFn::constant(ONE),
            "one-plus-z" => HoloFn::Series(vec![ONE, ONE]),
            _ => return None,
        })
    }

    /// Point on the circle where the derivative is unbounded, as an angle.
    pub fn boundary_singularity(&self) -> Option<f64> {
        match self {
            HoloFn::LogExample => Some(0.0),
            _ => None,
        }
    }

    fn check_domain(z: Complex64) -> Result<(), HoloError> {
        if z.norm() <= 1.0 + 1e-12 {
            Ok(())
        } else {
            Err(HoloError::OutsideDisk(z))
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64, HoloError> {
        Self::check_domain(z)?;
        Ok(match self {
            HoloFn::Series(c) => horner(c, z),
            HoloFn::Identity => z,
            HoloFn::Monomial(n) => z.powu(*n),
            HoloFn::Mobius(a) => (z + a) / (ONE + a.conj() * z),
            HoloFn::LogExample => {
                let w = ONE - z;
                if w == Complex64::new(0.0, 0.0) {
                    // continuous extension: (1-z) log(1-z) -> 0
                    return Ok(2.0 * z);
                }
                2.0 * z + w * w.ln()
            }
        })
    }

    /// Complex derivative `f'(z)`.
    pub fn deriv(&self, z: Complex64) -> Result<Complex64, HoloError> {
        Self::check_domain(z)?;
        Ok(match self {
            HoloFn::Series(c) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (n, a) in c.iter().enumerate().skip(1).rev() {
                    acc = acc * z + a * n as f64;
                }
                acc
            }
            HoloFn::Identity => ONE,
            HoloFn::Monomial(0) => Complex64::new(0.0, 0.0),
            HoloFn::Monomial(n) => *n as f64 * z.powu(n - 1),
            HoloFn::Mobius(a) => {
                let d = ONE + a.conj() * z;
                (1.0 - a.norm_sqr()) / (d * d)
            }
            HoloFn::LogExample => {
                let w = ONE - z;
                if w == Complex64::new(0.0, 0.0) {
                    return Err(HoloError::Singular(z));
                }
                ONE - w.ln()
            }
        })
    }

    /// Power-series coefficients, exact for polynomial forms and truncated
    /// at `n` terms otherwise.
    pub fn to_series(&self, n: usize) -> Vec<Complex64> {
        let zero = Complex64::new(0.0, 0.0);
        match self {
            HoloFn::Series(c) => c.iter().copied().take(n).collect(),
            HoloFn::Identity => vec![zero, ONE],
            HoloFn::Monomial(k) => {
                let mut c = vec![zero; *k as usize + 1];
                c[*k as usize] = ONE;
                c
            }
            HoloFn::Mobius(a) => {
                // (z + a) Σ (-conj(a) z)^k
                let q = -a.conj();
                let mut c = vec![zero; n];
                let mut pow = ONE;
                for k in 0..n {
                    c[k] += a * pow;
                    if k + 1 < n {
                        c[k + 1] += pow;
                    }
                    pow *= q;
                }
                c
            }
            HoloFn::LogExample => {
                // (1-z)log(1-z) = -z + Σ_{k≥2} z^k / (k(k-1))
                let mut c = vec![zero; n.max(2)];
                c[1] = ONE;
                for (k, ck) in c.iter_mut().enumerate().skip(2) {
                    *ck = Complex64::new(1.0 / (k as f64 * (k as f64 - 1.0)), 0.0);
                }
                c.truncate(n);
                c
            }
        }
    }

    /// Derivative of a power series, as a power series.
    pub fn derivative_series(&self) -> Option<HoloFn> {
        match self {
            HoloFn::Series(c) => Some(HoloFn::Series(
                c.iter()
                    .enumerate()
                    .skip(1)
                    .map(|(n, a)| a * n as f64)
                    .collect(),
            )),
            _ => None,
        }
    }

    /// `a·self + b·other` for two power series.
    pub fn linear_combination(&self, a: Complex64, other: &HoloFn, b: Complex64) -> Option<HoloFn> {
        match (self, other) {
            (HoloFn::Series(x), HoloFn::Series(y)) => {
                let n = x.len().max(y.len());
                let zero = Complex64::new(0.0, 0.0);
                Some(HoloFn::Series(
                    (0..n)
                        .map(|k| {
                            a * x.get(k).copied().unwrap_or(zero)
                                + b * y.get(k).copied().unwrap_or(zero)
                        })
                        .collect(),
                ))
            }
            _ => None,
        }
    }

    /// Reads a coefficient file: one `re im` pair per line, index equal to
    /// the line number minus one.
    pub fn parse_coefficients(text: &str) -> Result<Self, HoloError> {
        let mut coeffs = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(HoloError::Parse {
                    line: idx + 1,
                    msg: format!("expected `re im`, found {} fields", fields.len()),
                });
            }
            let mut parts = [0.0; 2];
            for (slot, s) in parts.iter_mut().zip(&fields) {
                *slot = s.parse::<f64>().map_err(|e| HoloError::Parse {
                    line: idx + 1,
                    msg: format!("`{s}`: {e}"),
                })?;
            }
            coeffs.push(Complex64::new(parts[0], parts[1]));
        }
        Ok(HoloFn::Series(coeffs))
    }

    pub fn read_coefficients(path: &Path) -> Result<Self, HoloError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HoloError::Io(format!("{}: {e}", path.display())))?;
        Self::parse_coefficients(&text)
    }

    /// Coefficient-file text for a power series, 17 significant digits.
    pub fn coefficients_text(coeffs: &[Complex64]) -> String {
        let mut out = String::new();
        for c in coeffs {
            out.push_str(&format!("{:.16e} {:.16e}\n", c.re, c.im));
        }
        out
    }
}

impl fmt::Display for HoloFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HoloFn::Series(c) => write!(f, "power series of degree {}", c.len().saturating_sub(1)),
            HoloFn::Identity => write!(f, "z"),
            HoloFn::Monomial(n) => write!(f, "z^{n}"),
            HoloFn::Mobius(a) => write!(f, "(z + a)/(1 + conj(a) z), a = {a}"),
            HoloFn::LogExample => write!(f, "2z + (1-z) log(1-z)"),
        }
    }
}

fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    fn c(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    /// Derivative from the Cauchy integral on a small circle, trapezoid rule.
    fn cauchy_derivative(f: &HoloFn, z0: Complex64, rho: f64) -> Complex64 {
        let n = 64;
        let mut acc = c(0.0, 0.0);
        for k in 0..n {
            let e = Complex64::cis(TAU * k as f64 / n as f64);
            acc += f.eval(z0 + rho * e).unwrap() / e;
        }
        acc / (n as f64 * rho)
    }

    #[test]
    fn gallery_values() {
        assert_eq!(HoloFn::Identity.eval(c(0.0, 0.5)).unwrap(), c(0.0, 0.5));
        assert_eq!(HoloFn::LogExample.eval(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(HoloFn::LogExample.eval(c(1.0, 0.0)).unwrap(), c(2.0, 0.0));
        assert!(matches!(
            HoloFn::LogExample.deriv(c(1.0, 0.0)),
            Err(HoloError::Singular(_))
        ));
        assert!(matches!(
            HoloFn::Identity.eval(c(1.1, 0.0)),
            Err(HoloError::OutsideDisk(_))
        ));
    }

    #[test]
    fn log_example_derivative_near_one() {
        let z = c(1.0 - 1e-6, 0.0);
        let d = HoloFn::LogExample.deriv(z).unwrap();
        let expected = 1.0 - (1e-6f64).ln();
        assert!((d.re - expected).abs() < 1e-9 && d.im.abs() < 1e-9);
        assert!((expected - 14.8155).abs() < 1e-4);
        let oracle = cauchy_derivative(&HoloFn::LogExample, z, 5e-7);
        assert!((d - oracle).norm() < 1e-9, "{d} vs {oracle}");
    }

    #[test]
    fn closed_form_derivatives_match_cauchy_oracle() {
        let fns = [
            HoloFn::Identity,
            HoloFn::Monomial(3),
            HoloFn::Mobius(c(0.5, 0.2)),
            HoloFn::LogExample,
            HoloFn::Series(vec![c(1.0, 0.0), c(0.0, 2.0), c(-0.5, 0.25)]),
        ];
        for f in &fns {
            for z in [c(0.1, 0.2), c(-0.6, 0.3), c(0.0, -0.8)] {
                let d = f.deriv(z).unwrap();
                let o = cauchy_derivative(f, z, 1e-2);
                assert!((d - o).norm() < 1e-10, "{f}: {d} vs {o}");
            }
        }
    }

    #[test]
    fn series_expansions_agree_with_closed_forms() {
        let z = c(0.3, -0.2);
        for f in [HoloFn::Mobius(c(0.5, 0.0)), HoloFn::LogExample, HoloFn::Monomial(2)] {
            let s = HoloFn::Series(f.to_series(DEFAULT_SERIES_TRUNCATION));
            assert!((s.eval(z).unwrap() - f.eval(z).unwrap()).norm() < 1e-12, "{f}");
        }
    }

    #[test]
    fn series_value_at_origin_is_constant_term() {
        let f = HoloFn::Series(vec![c(0.125, -3.5), c(7.0, 1.0), c(2.0, 2.0)]);
        assert_eq!(f.eval(c(0.0, 0.0)).unwrap(), c(0.125, -3.5));
        let d = f.derivative_series().unwrap();
        assert_eq!(d, HoloFn::Series(vec![c(7.0, 1.0), c(4.0, 4.0)]));
    }

    #[test]
    fn coefficient_file_round_trip() {
        let coeffs = vec![c(1.0, 0.0), c(0.1, -1.0 / 3.0)];
        let text = HoloFn::coefficients_text(&coeffs);
        assert_eq!(HoloFn::parse_coefficients(&text).unwrap(), HoloFn::Series(coeffs));
        let err = HoloFn::parse_coefficients("1 0\n2\n").unwrap_err();
        assert!(matches!(err, HoloError::Parse { line: 2, .. }));
    }

    fn coeffs() -> impl Strategy<Value = Vec<Complex64>> {
        prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| c(a, b)), 0..12)
    }

    proptest! {
        #[test]
        fn derivative_is_linear(x in coeffs(), y in coeffs(), a in -3.0..3.0f64, b in -3.0..3.0f64) {
            let (fx, fy) = (HoloFn::Series(x), HoloFn::Series(y));
            let (a, b) = (c(a, 0.5), c(b, -0.25));
            let lhs = fx.linear_combination(a, &fy, b).unwrap().derivative_series().unwrap();
            let rhs = fx.derivative_series().unwrap()
                .linear_combination(a, &fy.derivative_series().unwrap(), b).unwrap();
            let (HoloFn::Series(l), HoloFn::Series(r)) = (lhs, rhs) else { unreachable!() };
            prop_assert_eq!(l.len(), r.len());
            for (p, q) in l.iter().zip(&r) {
                prop_assert!((p - q).norm() <= 1e-12 * (1.0 + p.norm()));
            }
        }
    }
}
