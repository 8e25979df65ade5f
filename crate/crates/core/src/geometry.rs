use std::fmt;

use crate::error::CoreError;

const ZERO_NORM: f64 = 1e-12;

/// A point in the valence-arousal plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffectVector {
    valence: f64,
    arousal: f64,
}

impl AffectVector {
    pub fn new(valence: f64, arousal: f64) -> Result<Self, CoreError> {
        for x in [valence, arousal] {
            if !x.is_finite() {
                return Err(CoreError::NonFinite(x));
            }
        }
        Ok(Self { valence, arousal })
    }

    pub fn valence(&self) -> f64 {
        self.valence
    }

    pub fn arousal(&self) -> f64 {
        self.arousal
    }

    pub fn norm(&self) -> f64 {
        self.valence.hypot(self.arousal)
    }

    pub fn dot(&self, other: &AffectVector) -> f64 {
        self.valence * other.valence + self.arousal * other.arousal
    }

    pub fn is_unit(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    pub fn scaled(&self, s: f64) -> Result<Self, CoreError> {
        Self::new(self.valence * s, self.arousal * s)
    }

    pub fn normalized(&self) -> Result<Self, CoreError> {
        let n = self.norm();
        if n <= ZERO_NORM {
            return Err(CoreError::ZeroVector);
        }
        Ok(Self {
            valence: self.valence / n,
            arousal: self.arousal / n,
        })
    }
}

impl fmt::Display for AffectVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {})",
            crate::fmt3(self.valence),
            crate::fmt3(self.arousal)
        )
    }
}

/// An angle in degrees, measured counter-clockwise from (valence, arousal) = (1, 0).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AngleDeg(pub f64);

impl AngleDeg {
    pub fn degrees(self) -> f64 {
        self.0
    }

    /// Representative in `[0, 360)`.
    pub fn canonical(self) -> AngleDeg {
        let r = self.0.rem_euclid(360.0);
        // rem_euclid can round up to exactly 360 for tiny negative inputs
        AngleDeg(if r >= 360.0 { 0.0 } else { r })
    }
}

impl From<f64> for AngleDeg {
    fn from(d: f64) -> Self {
        AngleDeg(d)
    }
}

pub fn angle_to_vector(deg: AngleDeg) -> Result<AffectVector, CoreError> {
    if !deg.0.is_finite() {
        return Err(CoreError::NonFinite(deg.0));
    }
    let (s, c) = deg.0.to_radians().sin_cos();
    AffectVector::new(c, s)
}

pub fn vector_to_angle(v: &AffectVector) -> Result<AngleDeg, CoreError> {
    if v.norm() <= ZERO_NORM {
        return Err(CoreError::ZeroVector);
    }
    Ok(AngleDeg(v.arousal.atan2(v.valence).to_degrees()).canonical())
}

/// `n` unit states at `k * 360/n` degrees, counter-clockwise from (1, 0).
pub fn state_grid(n: usize) -> Result<Vec<AffectVector>, CoreError> {
    if n == 0 {
        return Err(CoreError::InvalidStateCount);
    }
    let step = 360.0 / n as f64;
    (0..n)
        .map(|k| angle_to_vector(AngleDeg(k as f64 * step)))
        .collect()
}

/// Cosine of the angle between two directions. Magnitudes are ignored.
pub fn cosine_similarity(a: &AffectVector, b: &AffectVector) -> Result<f64, CoreError> {
    let (na, nb) = (a.norm(), b.norm());
    if na <= ZERO_NORM || nb <= ZERO_NORM {
        return Err(CoreError::ZeroVector);
    }
    Ok((a.dot(b) / (na * nb)).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64, y: f64) -> AffectVector {
        AffectVector::new(x, y).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn angle_to_vector_axes() {
        let e = angle_to_vector(AngleDeg(0.0)).unwrap();
        assert_eq!((e.valence(), e.arousal()), (1.0, 0.0));
        let n = angle_to_vector(AngleDeg(90.0)).unwrap();
        assert!(close(n.valence(), 0.0, 1e-15) && close(n.arousal(), 1.0, 1e-15));
        let t = angle_to_vector(AngleDeg(30.0)).unwrap();
        assert_eq!(crate::fmt3(t.valence()), "0.866");
        assert!(close(t.arousal(), 0.5, 1e-15));
    }

    #[test]
    fn angle_to_vector_rejects_non_finite() {
        assert!(angle_to_vector(AngleDeg(f64::NAN)).is_err());
        assert!(angle_to_vector(AngleDeg(f64::INFINITY)).is_err());
    }

    #[test]
    fn construction_rejects_non_finite() {
        assert!(matches!(
            AffectVector::new(f64::NAN, 0.0),
            Err(CoreError::NonFinite(_))
        ));
        assert!(AffectVector::new(0.0, f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn vector_to_angle_cases() {
        assert!(close(vector_to_angle(&v(0.0, 1.0)).unwrap().0, 90.0, 1e-12));
        assert!(close(vector_to_angle(&v(-1.0, 0.0)).unwrap().0, 180.0, 1e-12));
        let a = vector_to_angle(&v(3f64.sqrt() / 2.0, -0.5)).unwrap().0;
        assert!(close(a, 330.0, 1e-9));
        assert_eq!(vector_to_angle(&v(0.0, 0.0)), Err(CoreError::ZeroVector));
    }

    #[test]
    fn canonical_range() {
        assert_eq!(AngleDeg(-1e-18).canonical().0, 0.0);
        assert_eq!(AngleDeg(720.0).canonical().0, 0.0);
        assert!(close(AngleDeg(-90.0).canonical().0, 270.0, 1e-12));
    }

    #[test]
    fn twelve_state_grid() {
        let g = state_grid(12).unwrap();
        assert_eq!(g.len(), 12);
        assert_eq!(crate::fmt3(g[1].valence()), "0.866");
        assert_eq!(crate::fmt3(g[1].arousal()), "0.500");
        assert_eq!(crate::fmt3(g[11].valence()), "0.866");
        assert_eq!(crate::fmt3(g[11].arousal()), "-0.500");
        assert_eq!(crate::fmt3(g[2].valence()), "0.500");
        assert_eq!(crate::fmt3(g[2].arousal()), "0.866");
    }

    #[test]
    fn four_state_grid() {
        let g = state_grid(4).unwrap();
        let want = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)];
        for (got, (x, y)) in g.iter().zip(want) {
            assert!(close(got.valence(), x, 1e-15) && close(got.arousal(), y, 1e-15));
        }
        assert_eq!(state_grid(0), Err(CoreError::InvalidStateCount));
    }

    #[test]
    fn cosine_cases() {
        assert_eq!(cosine_similarity(&v(1.0, 0.0), &v(1.0, 0.0)).unwrap(), 1.0);
        assert_eq!(cosine_similarity(&v(1.0, 0.0), &v(0.0, 1.0)).unwrap(), 0.0);
        let c = cosine_similarity(&v(0.866, 0.5), &v(0.5, 0.866)).unwrap();
        assert!(close(c, 0.866, 1e-3));
        assert_eq!(
            cosine_similarity(&v(0.0, 0.0), &v(1.0, 0.0)),
            Err(CoreError::ZeroVector)
        );
    }
}
