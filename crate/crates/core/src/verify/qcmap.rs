use num_complex::Complex64;
use serde::Serialize;

use crate::hmap::{HarmonicMap, HmapError, PlanarMap};

/// Quasiconformal test maps.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QcMapSpec {
    Harmonic { map: HarmonicMap },
    /// `z |z|^{1/K - 1}`: exactly K-quasiconformal, fixes the origin and the
    /// unit circle, Hölder with exponent exactly `1/K` at the origin.
    RadialStretch { k: f64 },
    /// Applied first to last.
    Composition { parts: Vec<QcMapSpec> },
}

impl QcMapSpec {
    pub fn harmonic(map: HarmonicMap) -> Self {
        QcMapSpec::Harmonic { map }
    }

    pub fn stretch(k: f64) -> Self {
        QcMapSpec::RadialStretch { k }
    }

    pub fn compose(parts: Vec<QcMapSpec>) -> Self {
        QcMapSpec::Composition { parts }
    }
}

impl PlanarMap for QcMapSpec {
    fn eval(&self, z: Complex64) -> Result<Complex64, HmapError> {
        match self {
            QcMapSpec::Harmonic { map } => map.eval(z),
            QcMapSpec::RadialStretch { k } => {
                let r = z.norm();
                if r == 0.0 {
                    Ok(z)
                } else {
                    Ok(z * r.powf(1.0 / k - 1.0))
                }
            }
            QcMapSpec::Composition { parts } => {
                parts.iter().try_fold(z, |w, part| part.eval(w))
            }
        }
    }

    fn wirtinger(&self, z: Complex64) -> Result<(Complex64, Complex64), HmapError> {
        match self {
            QcMapSpec::Harmonic { map } => map.wirtinger(z),
            QcMapSpec::RadialStretch { k } => {
                let r = z.norm();
                if r == 0.0 {
                    if *k == 1.0 {
                        return Ok((Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)));
                    }
                    return Err(HmapError::SingularPoint(z));
                }
                // f = z^{(a+1)/2} conj(z)^{(a-1)/2} with a = 1/K
                let a = 1.0 / k;
                let scale = r.powf(a - 1.0);
                let fz = Complex64::new(0.5 * (a + 1.0) * scale, 0.0);
                let fzb = 0.5 * (a - 1.0) * scale * (z / z.conj());
                Ok((fz, fzb))
            }
            QcMapSpec::Composition { parts } => {
                let mut w = z;
                let mut acc = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
                for part in parts {
                    let (pz, pzb) = part.wirtinger(w)?;
                    // chain rule for (part ∘ previous)
                    acc = (
                        pz * acc.0 + pzb * acc.1.conj(),
                        pz * acc.1 + pzb * acc.0.conj(),
                    );
                    w = part.eval(w)?;
                }
                Ok(acc)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    fn finite_difference(m: &QcMapSpec, z: Complex64) -> (Complex64, Complex64) {
        let h = 1e-6;
        let fx = (m.eval(z + h).unwrap() - m.eval(z - h).unwrap()) / (2.0 * h);
        let fy = (m.eval(z + c(0.0, h)).unwrap() - m.eval(z - c(0.0, h)).unwrap()) / (2.0 * h);
        (0.5 * (fx - Complex64::i() * fy), 0.5 * (fx + Complex64::i() * fy))
    }

    #[test]
    fn stretch_fixes_circle_and_origin() {
        let s = QcMapSpec::stretch(3.0);
        assert_eq!(s.eval(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        for t in [0.0, 1.0, 2.5] {
            let w = s.eval(Complex64::cis(t)).unwrap();
            assert!((w - Complex64::cis(t)).norm() < 1e-15);
        }
    }

    #[test]
    fn wirtinger_derivatives_match_finite_differences() {
        let maps = [
            QcMapSpec::stretch(2.0),
            QcMapSpec::compose(vec![
                QcMapSpec::harmonic(HarmonicMap::affine(c(0.2, 0.1))),
                QcMapSpec::stretch(4.0),
            ]),
            QcMapSpec::compose(vec![
                QcMapSpec::stretch(2.0),
                QcMapSpec::harmonic(HarmonicMap::rotation(0.4)),
            ]),
        ];
        for m in &maps {
            for z in [c(0.3, 0.2), c(-0.5, 0.4), c(0.1, -0.6)] {
                let (a, b) = m.wirtinger(z).unwrap();
                let (fa, fb) = finite_difference(m, z);
                assert!((a - fa).norm() < 1e-7 && (b - fb).norm() < 1e-7, "{m:?} at {z}");
            }
        }
    }

    #[test]
    fn stretch_dilatation_is_exact() {
        let k = 2.5;
        let (a, b) = QcMapSpec::stretch(k).wirtinger(c(0.2, -0.7)).unwrap();
        assert!(((b / a).norm() - (k - 1.0) / (k + 1.0)).abs() < 1e-15);
        assert!(matches!(
            QcMapSpec::stretch(k).wirtinger(c(0.0, 0.0)),
            Err(HmapError::SingularPoint(_))
        ));
    }
}
