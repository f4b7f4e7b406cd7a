//! Separability coherences (generalized degree of polarization) and Stokes
//! vectors of 2x2 coherence matrices.
//!
//! Three routes compute the same number:
//!
//! * determinant form `sqrt(1 - 4 det W / (tr W)^2)` ([`separability_det`]),
//! * eigenvalue form `|l1 - l2| / (l1 + l2)` ([`separability_eig`]),
//! * the Euclidean norm of the Stokes vector ([`stokes_vector`]).
//!
//! For beams, [`closed_form_separabilities`] evaluates the same quantities
//! directly from `alpha`, `beta` and the overlaps `delta`, `gamma`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{reduced_matrix, BeamParameters, CoherenceMatrix, Subsystem, ThreeQubitState};

/// Radicands in `[-DOMAIN_TOL, 0)` are round-off and clamp to zero.
pub const DOMAIN_TOL: f64 = 1e-9;
/// Values this close outside `[0, 1]` are clamped.
pub const CLAMP_TOL: f64 = 1e-12;

/// A separability coherence in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Separability(f64);

impl Separability {
    /// Accepts values in `[-CLAMP_TOL, 1 + CLAMP_TOL]`, clamping into `[0, 1]`.
    pub fn new(value: f64) -> Result<Self> {
        if !(-CLAMP_TOL..=1.0 + CLAMP_TOL).contains(&value) {
            return Err(Error::OutOfRange {
                what: "separability",
                value,
                min: 0.0,
                max: 1.0,
            });
        }
        Ok(Separability(value.clamp(0.0, 1.0)))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<Separability> for f64 {
    fn from(s: Separability) -> f64 {
        s.0
    }
}

/// The coherence vector `(S_a, S_b, S_c)`, a point of the unit cube.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherenceVector {
    pub sa: f64,
    pub sb: f64,
    pub sc: f64,
}

impl CoherenceVector {
    pub const fn new(sa: f64, sb: f64, sc: f64) -> Self {
        CoherenceVector { sa, sb, sc }
    }

    /// Builds a vector, rejecting components outside the unit interval.
    pub fn checked(sa: f64, sb: f64, sc: f64) -> Result<Self> {
        let v = CoherenceVector { sa, sb, sc };
        v.validate()?;
        Ok(v)
    }

    pub fn validate(&self) -> Result<()> {
        for value in self.as_array() {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::OutOfRange {
                    what: "coherence vector component",
                    value,
                    min: 0.0,
                    max: 1.0,
                });
            }
        }
        Ok(())
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.sa, self.sb, self.sc]
    }

    pub fn get(&self, sub: Subsystem) -> f64 {
        self.as_array()[sub.index()]
    }

    pub fn total(&self) -> f64 {
        self.sa + self.sb + self.sc
    }

    pub fn max_abs_diff(&self, other: &CoherenceVector) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl From<[f64; 3]> for CoherenceVector {
    fn from(v: [f64; 3]) -> Self {
        CoherenceVector::new(v[0], v[1], v[2])
    }
}

/// `(s1, s2, s3) = (tr W sx, tr W sy, tr W sz)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StokesVector {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl StokesVector {
    pub fn as_array(&self) -> [f64; 3] {
        [self.s1, self.s2, self.s3]
    }

    pub fn norm(&self) -> f64 {
        (self.s1 * self.s1 + self.s2 * self.s2 + self.s3 * self.s3).sqrt()
    }
}

fn clamp_root(radicand: f64) -> Result<Separability> {
    if !radicand.is_finite() || radicand < -DOMAIN_TOL {
        return Err(Error::NumericalDomain { radicand });
    }
    let s = radicand.max(0.0).sqrt();
    if s > 1.0 + CLAMP_TOL {
        return Err(Error::NumericalDomain { radicand });
    }
    Ok(Separability(s.min(1.0)))
}

/// Degree of polarization from the determinant and trace.
pub fn separability_det(w: &CoherenceMatrix) -> Result<Separability> {
    let tr = w.trace();
    clamp_root(1.0 - 4.0 * w.det() / (tr * tr))
}

/// Degree of polarization from the ordered eigenvalues.
pub fn separability_eig(w: &CoherenceMatrix) -> Result<Separability> {
    let [l1, l2] = w.eigenvalues();
    if l2 < -DOMAIN_TOL || !(l1 + l2).is_finite() || l1 + l2 <= 0.0 {
        return Err(Error::NumericalDomain { radicand: l2 });
    }
    let s = ((l1 - l2) / (l1 + l2)).abs();
    if s > 1.0 + CLAMP_TOL {
        return Err(Error::NumericalDomain { radicand: l2 });
    }
    Ok(Separability(s.min(1.0)))
}

/// `(S_a, S_b, S_c)` of a state from its three reduced coherence matrices.
///
/// Uses the eigenvalue route, which stays accurate near `S = 0` where the
/// determinant form loses half its digits to the square root.
pub fn separabilities(s: &ThreeQubitState) -> Result<CoherenceVector> {
    let [sa, sb, sc] = Subsystem::ALL.map(|sub| separability_eig(&reduced_matrix(s, sub)));
    Ok(CoherenceVector::new(sa?.0, sb?.0, sc?.0))
}

/// Closed-form separabilities of a beam:
///
/// * `S_a = sqrt(1 - 4|alpha beta|^2 (1 - |delta gamma|^2))`
/// * `S_b = sqrt(1 - 4|alpha beta|^2 (1 - |delta|^2))`
/// * `S_c = sqrt(1 - 4|alpha beta|^2 (1 - |gamma|^2))`
pub fn closed_form_separabilities(p: &BeamParameters) -> Result<CoherenceVector> {
    p.validate()?;
    let ab2 = (p.alpha * p.beta).norm_sqr();
    let delta2 = p.delta().norm_sqr();
    let gamma2 = p.gamma().norm_sqr();
    let sep = |overlap2: f64| clamp_root(1.0 - 4.0 * ab2 * (1.0 - overlap2)).map(f64::from);
    Ok(CoherenceVector::new(
        sep(delta2 * gamma2)?,
        sep(delta2)?,
        sep(gamma2)?,
    ))
}

/// Pauli expectation values of a coherence matrix.
pub fn stokes_vector(w: &CoherenceMatrix) -> StokesVector {
    let e = w.entries();
    StokesVector {
        s1: (e[0][1] + e[1][0]).re,
        s2: (e[1][0] - e[0][1]).im,
        s3: e[0][0].re - e[1][1].re,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{beam_to_state, Matrix2};
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }
    const Z: Complex64 = Complex64::new(0.0, 0.0);
    const O: Complex64 = Complex64::new(1.0, 0.0);

    fn m(e: Matrix2) -> CoherenceMatrix {
        CoherenceMatrix::new(e).unwrap()
    }

    #[test]
    fn det_and_eig_examples() {
        let pure = m([[O, Z], [Z, Z]]);
        let mixed = m([[c(0.5), Z], [Z, c(0.5)]]);
        let r3 = 3f64.sqrt() / 4.0;
        let projector = m([[c(0.75), c(r3)], [c(r3), c(0.25)]]);
        assert_eq!(separability_det(&pure).unwrap().value(), 1.0);
        assert_eq!(separability_det(&mixed).unwrap().value(), 0.0);
        // det = 3/16 - 3/16 = 0
        assert!((separability_det(&projector).unwrap().value() - 1.0).abs() < 1e-12);
        assert_eq!(separability_eig(&pure).unwrap().value(), 1.0);
        assert_eq!(separability_eig(&mixed).unwrap().value(), 0.0);
        assert!((separability_eig(&projector).unwrap().value() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn det_rejects_invalid_matrix() {
        // non-physical: eigenvalues 1.5 and -0.5
        let w = CoherenceMatrix::new_unchecked([[c(1.5), Z], [Z, c(-0.5)]]);
        assert!(matches!(
            separability_det(&w),
            Err(Error::NumericalDomain { .. })
        ));
        assert!(matches!(
            separability_eig(&w),
            Err(Error::NumericalDomain { .. })
        ));
    }

    #[test]
    fn tiny_negative_radicand_clamps() {
        assert_eq!(clamp_root(-5e-10).unwrap().value(), 0.0);
        assert!(clamp_root(-2e-9).is_err());
    }

    #[test]
    fn separabilities_examples() {
        let v = separabilities(&ThreeQubitState::basis(0)).unwrap();
        assert_eq!(v.as_array(), [1.0, 1.0, 1.0]);
        let v = separabilities(&ThreeQubitState::ghz()).unwrap();
        assert!(v.max_abs_diff(&CoherenceVector::new(0.0, 0.0, 0.0)) < 1e-15);
        // eigenvalues 2/3, 1/3 on every cut
        let v = separabilities(&ThreeQubitState::w()).unwrap();
        let third = 1.0 / 3.0;
        assert!(v.max_abs_diff(&CoherenceVector::new(third, third, third)) < 1e-15);
    }

    #[test]
    fn closed_form_examples() {
        let p = BeamParameters::new(O, Z, [O, Z], [c(0.6), c(0.8)], [Z, O], [O, Z]).unwrap();
        assert_eq!(
            closed_form_separabilities(&p).unwrap().as_array(),
            [1.0, 1.0, 1.0]
        );

        let h = c(FRAC_1_SQRT_2);
        let p = BeamParameters::new(h, h, [O, Z], [Z, O], [O, Z], [Z, O]).unwrap();
        assert!(
            closed_form_separabilities(&p)
                .unwrap()
                .max_abs_diff(&CoherenceVector::new(0.0, 0.0, 0.0))
                < 1e-7
        );

        // delta = 1, gamma = 0: S_a = sqrt(1 - 1) = 0, S_b = 1, S_c = 0
        let p = BeamParameters::new(h, h, [O, Z], [O, Z], [O, Z], [Z, O]).unwrap();
        let closed = closed_form_separabilities(&p).unwrap();
        assert!(closed.max_abs_diff(&CoherenceVector::new(0.0, 1.0, 0.0)) < 1e-7);
        let traced = separabilities(&beam_to_state(&p).unwrap()).unwrap();
        assert!(traced.max_abs_diff(&CoherenceVector::new(0.0, 1.0, 0.0)) < 1e-15);
    }

    #[test]
    fn stokes_examples() {
        let s = stokes_vector(&m([[c(0.5), Z], [Z, c(0.5)]]));
        assert_eq!(s.as_array(), [0.0, 0.0, 0.0]);
        let s = stokes_vector(&m([[O, Z], [Z, Z]]));
        assert_eq!(s.as_array(), [0.0, 0.0, 1.0]);
        let s = stokes_vector(&m([[c(0.5), c(0.5)], [c(0.5), c(0.5)]]));
        assert_eq!(s.as_array(), [1.0, 0.0, 0.0]);
        // circular: W = (I + sy)/2 has W01 = -i/2
        let w = m([
            [c(0.5), Complex64::new(0.0, -0.5)],
            [Complex64::new(0.0, 0.5), c(0.5)],
        ]);
        assert_eq!(stokes_vector(&w).as_array(), [0.0, 1.0, 0.0]);
    }

    #[test]
    fn from_stokes_inverts_stokes_vector() {
        let s = [0.3, -0.4, 0.5];
        let w = CoherenceMatrix::from_stokes(s);
        let back = stokes_vector(&w).as_array();
        for k in 0..3 {
            assert!((back[k] - s[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn separability_range_check() {
        assert!(Separability::new(1.0 + 1e-13).is_ok());
        assert!(Separability::new(-1e-3).is_err());
        assert!(CoherenceVector::checked(0.2, 1.2, 0.0).is_err());
    }
}
