//! Verdicts: numerical certificates of inequalities on concrete maps.
//!
//! Every verdict compares two numbers and passes iff
//! `lhs ≤ rhs · (1 + tolerance)`. Qualitative claims are turned into such
//! comparisons: finiteness of a supremum becomes a relative change below 5%
//! across two successive resolutions, divergence becomes growth of at least
//! 25%, and sharpness witnesses are expressed as verdicts that pass when the
//! expected violation is observed.

mod checks;
mod qcmap;
mod scan;
pub mod suite;

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::curves::CurveError;
use crate::hmap::HmapError;
use crate::holo::{GridMeta, HoloError};

pub use checks::{
    bergman_closed_form, bergman_closed_form_value, composition_exponent_law, expect_violation,
    hardy_littlewood_propagation,
    holder_divergence, lemma_equivalence, main_theorem_holder, mori_check, stretch_holder_sharpness,
};
pub use qcmap::QcMapSpec;
pub use scan::{holder_scan, random_disk_pairs, HolderScan, ScanOptions};

/// Relative change below which a supremum counts as refinement-stable.
pub const STABILITY_TOLERANCE: f64 = 0.05;
/// Relative growth above which a supremum counts as divergent.
pub const DIVERGENCE_GROWTH: f64 = 1.25;
/// Slack for inequalities in which a true supremum is replaced by a grid one.
pub const GRID_SUP_SLACK: f64 = 0.05;
/// Slack for inequalities between two quadratures of smooth integrands.
pub const QUADRATURE_SLACK: f64 = 1e-6;
/// The constant in the Hölder bound for K-quasiconformal self-maps of the
/// disk fixing the origin.
pub const MORI_CONSTANT: f64 = 16.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Holo(#[from] HoloError),
    #[error(transparent)]
    Hmap(#[from] HmapError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("map does not fix the origin: f(0) = {0}")]
    NotFixingOrigin(Complex64),
    #[error("map leaves the closed unit disk: |f({z})| = {modulus}")]
    NotSelfMap { z: Complex64, modulus: f64 },
    #[error("map is not quasiconformal on the grid (k = {0})")]
    NotQuasiconformal(f64),
    #[error("integral diverges: (1 - alpha) p = {0} >= 1")]
    Divergent(f64),
    #[error("invalid parameter `{name}`: {msg}")]
    Parameter { name: String, msg: String },
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("manifest line {line}: {msg}")]
    Manifest { line: usize, msg: String },
}

impl VerifyError {
    pub(crate) fn param(name: &str, msg: impl Into<String>) -> Self {
        VerifyError::Parameter {
            name: name.to_string(),
            msg: msg.into(),
        }
    }
}

/// Where an extremal ratio was attained: a point, or a pair of points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub z: Complex64,
    pub w: Option<Complex64>,
}

impl Witness {
    pub fn point(z: Complex64) -> Self {
        Self { z, w: None }
    }

    pub fn pair(z: Complex64, w: Complex64) -> Self {
        Self { z, w: Some(w) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub inputs: BTreeMap<String, f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub witness: Option<Witness>,
    pub grid_meta: Option<GridMeta>,
}

impl Verdict {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            inputs: BTreeMap::new(),
            lhs,
            rhs,
            tolerance,
            pass: lhs <= rhs * (1.0 + tolerance),
            witness: None,
            grid_meta: None,
        }
    }

    pub fn input(mut self, key: &str, value: f64) -> Self {
        self.inputs.insert(key.to_string(), value);
        self
    }

    pub fn witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn grid(mut self, meta: GridMeta) -> Self {
        self.grid_meta = Some(meta);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_rule() {
        assert!(Verdict::new("a", 1.0, 1.0, 0.0).pass);
        assert!(Verdict::new("a", 1.04, 1.0, 0.05).pass);
        assert!(!Verdict::new("a", 1.06, 1.0, 0.05).pass);
        assert!(!Verdict::new("a", f64::NAN, 1.0, 0.05).pass);
        assert!(Verdict::new("a", 0.0, 0.0, 0.05).pass);
    }
}
