//! Three-qubit pure states, the paraxial beam parameterization, and
//! reduced 2x2 coherence matrices.
//!
//! Amplitudes are stored lexicographically, `d_000 .. d_111`, with the `a`
//! subsystem on bit 2, `b` on bit 1 and `c` on bit 0.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Amplitude = Complex64;

/// A 2x2 complex matrix, row-major.
pub type Matrix2 = [[Complex64; 2]; 2];

/// Tolerance on the norm of a constructed state.
pub const NORM_TOL: f64 = 1e-12;
/// Tolerance on the norm of externally supplied amplitudes.
pub const INPUT_NORM_TOL: f64 = 1e-9;
/// Below this squared norm a state cannot be normalized.
pub const ZERO_NORM: f64 = 1e-15;
/// Tolerance for accepting a matrix as unitary.
pub const UNITARY_TOL: f64 = 1e-10;
/// Tolerance used when validating coherence matrices.
pub const MATRIX_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subsystem {
    A,
    B,
    C,
}

impl Subsystem {
    pub const ALL: [Subsystem; 3] = [Subsystem::A, Subsystem::B, Subsystem::C];

    /// Bit position of this subsystem inside an amplitude index.
    pub const fn bit(self) -> usize {
        match self {
            Subsystem::A => 2,
            Subsystem::B => 1,
            Subsystem::C => 0,
        }
    }

    pub const fn index(self) -> usize {
        match self {
            Subsystem::A => 0,
            Subsystem::B => 1,
            Subsystem::C => 2,
        }
    }

    pub const fn label(self) -> char {
        match self {
            Subsystem::A => 'a',
            Subsystem::B => 'b',
            Subsystem::C => 'c',
        }
    }
}

impl fmt::Display for Subsystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl std::str::FromStr for Subsystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" => Ok(Subsystem::A),
            "b" => Ok(Subsystem::B),
            "c" => Ok(Subsystem::C),
            other => Err(Error::Parse(format!("unknown subsystem {other:?}"))),
        }
    }
}

/// A unit-norm three-qubit pure state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeQubitState {
    amplitudes: [Amplitude; 8],
}

/// Index of `d_ijk` in the lexicographic amplitude array.
#[inline]
pub const fn amp_index(i: usize, j: usize, k: usize) -> usize {
    (i << 2) | (j << 1) | k
}

fn norm_sq(amps: &[Amplitude]) -> f64 {
    amps.iter().map(|d| d.norm_sqr()).sum()
}

/// Builds a state from eight amplitudes.
///
/// With `normalize` set the amplitudes are rescaled to unit norm; otherwise
/// they must already be normalized to within [`INPUT_NORM_TOL`].
pub fn make_state(amplitudes: [Amplitude; 8], normalize: bool) -> Result<ThreeQubitState> {
    if let Some(index) = amplitudes
        .iter()
        .position(|d| !(d.re.is_finite() && d.im.is_finite()))
    {
        return Err(Error::NonFinite { index });
    }
    let n2 = norm_sq(&amplitudes);
    if n2 < ZERO_NORM {
        return Err(Error::ZeroNorm { norm_sq: n2 });
    }
    if !normalize && (n2 - 1.0).abs() > INPUT_NORM_TOL {
        return Err(Error::NotNormalized { norm_sq: n2 });
    }
    let scale = 1.0 / n2.sqrt();
    Ok(ThreeQubitState {
        amplitudes: amplitudes.map(|d| d * scale),
    })
}

impl ThreeQubitState {
    /// Computational basis state `|ijk>` given its lexicographic index.
    pub fn basis(index: usize) -> Self {
        assert!(index < 8, "basis index out of range");
        let mut amplitudes = [ZERO; 8];
        amplitudes[index] = ONE;
        ThreeQubitState { amplitudes }
    }

    /// `(|000> + |111>) / sqrt(2)`.
    pub fn ghz() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amplitudes = [ZERO; 8];
        amplitudes[0] = Complex64::new(h, 0.0);
        amplitudes[7] = Complex64::new(h, 0.0);
        ThreeQubitState { amplitudes }
    }

    /// `(|001> + |010> + |100>) / sqrt(3)`.
    pub fn w() -> Self {
        let t = 1.0 / 3f64.sqrt();
        let mut amplitudes = [ZERO; 8];
        for idx in [1, 2, 4] {
            amplitudes[idx] = Complex64::new(t, 0.0);
        }
        ThreeQubitState { amplitudes }
    }

    pub fn amplitudes(&self) -> &[Amplitude; 8] {
        &self.amplitudes
    }

    pub fn amplitude(&self, i: usize, j: usize, k: usize) -> Amplitude {
        self.amplitudes[amp_index(i, j, k)]
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sq(&self.amplitudes)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &ThreeQubitState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &ThreeQubitState) -> f64 {
        self.inner(other).norm_sqr()
    }
}

/// Paraxial beam `alpha |x>|G_x>|F_x> + beta |y>|G_y>|F_y>`, with the
/// transverse (`g*`) and temporal (`f*`) component vectors expanded in
/// orthonormal two-mode bases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamParameters {
    pub alpha: Amplitude,
    pub beta: Amplitude,
    pub gx: [Amplitude; 2],
    pub gy: [Amplitude; 2],
    pub fx: [Amplitude; 2],
    pub fy: [Amplitude; 2],
}

fn inner2(u: &[Complex64; 2], v: &[Complex64; 2]) -> Complex64 {
    u[0].conj() * v[0] + u[1].conj() * v[1]
}

impl BeamParameters {
    pub fn new(
        alpha: Amplitude,
        beta: Amplitude,
        gx: [Amplitude; 2],
        gy: [Amplitude; 2],
        fx: [Amplitude; 2],
        fy: [Amplitude; 2],
    ) -> Result<Self> {
        let p = BeamParameters {
            alpha,
            beta,
            gx,
            gy,
            fx,
            fy,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.alpha, self.beta, self.gx[0], self.gx[1], self.gy[0], self.gy[1], self.fx[0],
            self.fx[1], self.fy[0], self.fy[1],
        ];
        if all.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidParameters("non-finite component".into()));
        }
        let ab = self.alpha.norm_sqr() + self.beta.norm_sqr();
        if (ab - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidParameters(format!(
                "|alpha|^2 + |beta|^2 = {ab}, expected 1"
            )));
        }
        for (name, v) in [
            ("gx", &self.gx),
            ("gy", &self.gy),
            ("fx", &self.fx),
            ("fy", &self.fy),
        ] {
            let n = norm_sq(v);
            if (n - 1.0).abs() > NORM_TOL {
                return Err(Error::InvalidParameters(format!(
                    "{name} has squared norm {n}, expected 1"
                )));
            }
        }
        Ok(())
    }

    /// Spatial overlap `delta = <G_x|G_y>`.
    pub fn delta(&self) -> Complex64 {
        inner2(&self.gx, &self.gy)
    }

    /// Temporal overlap `gamma = <F_x|F_y>`.
    pub fn gamma(&self) -> Complex64 {
        inner2(&self.fx, &self.fy)
    }
}

/// Expands a beam into three-qubit amplitudes:
/// `d_0jk = alpha gx[j] fx[k]`, `d_1jk = beta gy[j] fy[k]`.
pub fn beam_to_state(p: &BeamParameters) -> Result<ThreeQubitState> {
    p.validate()?;
    let mut amps = [ZERO; 8];
    for j in 0..2 {
        for k in 0..2 {
            amps[amp_index(0, j, k)] = p.alpha * p.gx[j] * p.fx[k];
            amps[amp_index(1, j, k)] = p.beta * p.gy[j] * p.fy[k];
        }
    }
    // norm is |alpha|^2 + |beta|^2 up to round-off
    make_state(amps, true)
}

/// A 2x2 Hermitian, unit-trace, positive-semidefinite coherence matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoherenceMatrix {
    entries: Matrix2,
}

impl CoherenceMatrix {
    /// Validates Hermiticity, unit trace and positivity to [`MATRIX_TOL`].
    pub fn new(entries: Matrix2) -> Result<Self> {
        let m = CoherenceMatrix { entries };
        if entries
            .iter()
            .flatten()
            .any(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        let herm = (entries[0][1] - entries[1][0].conj())
            .norm()
            .max(entries[0][0].im.abs())
            .max(entries[1][1].im.abs());
        if herm > MATRIX_TOL {
            return Err(Error::InvalidMatrix(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = m.trace();
        if (tr - 1.0).abs() > MATRIX_TOL {
            return Err(Error::InvalidMatrix(format!("trace {tr}, expected 1")));
        }
        let [_, l2] = m.eigenvalues();
        if l2 < -MATRIX_TOL {
            return Err(Error::InvalidMatrix(format!("negative eigenvalue {l2:e}")));
        }
        Ok(m)
    }

    /// Wraps entries without validation. Used for tomographic
    /// reconstructions, which may leave the physical set.
    pub fn new_unchecked(entries: Matrix2) -> Self {
        CoherenceMatrix { entries }
    }

    /// `(I + s1 sx + s2 sy + s3 sz) / 2`.
    pub fn from_stokes(s: [f64; 3]) -> Self {
        let [s1, s2, s3] = s;
        CoherenceMatrix {
            entries: [
                [
                    Complex64::new((1.0 + s3) / 2.0, 0.0),
                    Complex64::new(s1 / 2.0, -s2 / 2.0),
                ],
                [
                    Complex64::new(s1 / 2.0, s2 / 2.0),
                    Complex64::new((1.0 - s3) / 2.0, 0.0),
                ],
            ],
        }
    }

    pub fn entries(&self) -> &Matrix2 {
        &self.entries
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.entries[m][n]
    }

    pub fn trace(&self) -> f64 {
        self.entries[0][0].re + self.entries[1][1].re
    }

    pub fn det(&self) -> f64 {
        (self.entries[0][0] * self.entries[1][1] - self.entries[0][1] * self.entries[1][0]).re
    }

    /// Eigenvalues `[l1, l2]` with `l1 >= l2`, from the trace/discriminant
    /// closed form for 2x2 Hermitian matrices.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let half_tr = 0.5 * self.trace();
        let disc = self.half_gap();
        [half_tr + disc, half_tr - disc]
    }

    /// `(l1 - l2) / 2 = sqrt(((w00 - w11)/2)^2 + |w01|^2)`, evaluated without cancellation.
    pub(crate) fn half_gap(&self) -> f64 {
        let half_diff = 0.5 * (self.entries[0][0].re - self.entries[1][1].re);
        // average the off-diagonals so slightly non-Hermitian input stays symmetric
        let off = 0.5 * (self.entries[0][1] + self.entries[1][0].conj());
        half_diff.hypot(off.norm())
    }

    /// Largest entrywise difference to another matrix.
    pub fn max_abs_diff(&self, other: &CoherenceMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for m in 0..2 {
            for n in 0..2 {
                worst = worst.max((self.entries[m][n] - other.entries[m][n]).norm());
            }
        }
        worst
    }

    /// `u W u^dagger`.
    pub fn conjugate_by(&self, u: &Matrix2) -> CoherenceMatrix {
        let w = &self.entries;
        let mut out = [[ZERO; 2]; 2];
        for (m, row) in out.iter_mut().enumerate() {
            for (n, slot) in row.iter_mut().enumerate() {
                let mut acc = ZERO;
                for p in 0..2 {
                    for q in 0..2 {
                        acc += u[m][p] * w[p][q] * u[n][q].conj();
                    }
                }
                *slot = acc;
            }
        }
        CoherenceMatrix { entries: out }
    }
}

/// Reduced coherence matrix of one subsystem, tracing out the other two:
/// `W[m][n] = sum_rest d(m, rest) conj(d(n, rest))`.
pub fn reduced_matrix(s: &ThreeQubitState, sub: Subsystem) -> CoherenceMatrix {
    let bit = sub.bit();
    let mask = 1usize << bit;
    let mut w = [[ZERO; 2]; 2];
    for idx in (0..8).filter(|idx| idx & mask == 0) {
        let amp = [s.amplitudes[idx], s.amplitudes[idx | mask]];
        for m in 0..2 {
            for n in 0..2 {
                w[m][n] += amp[m] * amp[n].conj();
            }
        }
    }
    // enforce exact Hermiticity of the diagonal
    w[0][0].im = 0.0;
    w[1][1].im = 0.0;
    CoherenceMatrix { entries: w }
}

/// Maximum entrywise deviation of `u u^dagger` from the identity.
pub fn unitarity_deviation(u: &Matrix2) -> f64 {
    let mut worst: f64 = 0.0;
    for m in 0..2 {
        for n in 0..2 {
            let v = u[m][0] * u[n][0].conj() + u[m][1] * u[n][1].conj();
            let target = if m == n { ONE } else { ZERO };
            worst = worst.max((v - target).norm());
        }
    }
    worst
}

/// Applies a 2x2 unitary to one subsystem of the state.
pub fn apply_local_unitary(
    s: &ThreeQubitState,
    sub: Subsystem,
    u: &Matrix2,
) -> Result<ThreeQubitState> {
    let deviation = unitarity_deviation(u);
    if !deviation.is_finite() || deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    let mask = 1usize << sub.bit();
    let mut out = [ZERO; 8];
    for idx in (0..8).filter(|idx| idx & mask == 0) {
        let v = [s.amplitudes[idx], s.amplitudes[idx | mask]];
        out[idx] = u[0][0] * v[0] + u[0][1] * v[1];
        out[idx | mask] = u[1][0] * v[0] + u[1][1] * v[1];
    }
    make_state(out, true)
}

/// Pauli matrices and a few fixed gates.
pub mod gates {
    use super::{Matrix2, ONE, ZERO};
    use num_complex::Complex64;

    pub const IDENTITY: Matrix2 = [[ONE, ZERO], [ZERO, ONE]];
    pub const PAULI_X: Matrix2 = [[ZERO, ONE], [ONE, ZERO]];
    pub const PAULI_Y: Matrix2 = [
        [ZERO, Complex64::new(0.0, -1.0)],
        [Complex64::new(0.0, 1.0), ZERO],
    ];
    pub const PAULI_Z: Matrix2 = [[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]];

    pub fn hadamard() -> Matrix2 {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        [[h, h], [h, -h]]
    }
}
