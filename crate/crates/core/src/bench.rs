//! Simulated preparation bench: a Mach-Zehnder interferometer whose arms
//! carry spin-orbit controllers, producing general three-DoF beams.
//!
//! Slot mapping: `a` = polarization (`|x> = 0`, `|y> = 1`), `b` = transverse
//! mode (`HG10 = 0`, `HG01 = 1`), `c` = path (`|0>`, `|1>`). A mode of
//! orientation `t` is `|G_t> = cos t |HG10> + sin t |HG01>`.
//!
//! The pipeline is: source `|y>|G_theta>` -> half-wave plate -> PBS (x to
//! path 0, y to path 1) -> BS1 double pass and phase delay on path 0 -> one
//! SOC per path. The output is renormalized, matching
//! `sin(phi)|e1> + cos(phi)/2 e^{i delta}|e0>`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{amp_index, make_state, ThreeQubitState};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Polarization {
    X,
    Y,
}

impl Polarization {
    pub const fn index(self) -> usize {
        match self {
            Polarization::X => 0,
            Polarization::Y => 1,
        }
    }
}

/// Unnormalized field amplitudes over (polarization, mode, path), laid out
/// like [`ThreeQubitState`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Field(pub [Complex64; 8]);

impl Field {
    pub fn zero() -> Self {
        Field([ZERO; 8])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    fn get(&self, pol: usize, mode: usize, path: usize) -> Complex64 {
        self.0[amp_index(pol, mode, path)]
    }

    fn set(&mut self, pol: usize, mode: usize, path: usize, v: Complex64) {
        self.0[amp_index(pol, mode, path)] = v;
    }

    /// Normalizes into a state.
    pub fn into_state(self) -> Result<ThreeQubitState> {
        make_state(self.0, true)
    }
}

/// Coefficients of `|G_t>` in the `{HG10, HG01}` basis.
pub fn mode(theta: f64) -> [Complex64; 2] {
    [
        Complex64::new(theta.cos(), 0.0),
        Complex64::new(theta.sin(), 0.0),
    ]
}

/// How an element acts on the norm of the field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OperatorKind {
    /// Replaces the field (light source).
    Preparation,
    /// Norm preserving.
    Unitary,
    /// Norm reducing; losses are absorbed by the final renormalization.
    Attenuating,
}

/// One element of the bench, with its setting. Angles are radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum OpticalElement {
    /// SLM-prepared `|y>|G_theta>` entering on path 0.
    SourceMode { theta: f64 },
    /// Half-wave plate oriented so that `reference` polarization leaves as
    /// `cos phi |x> + sin phi |y>`; acts on one path or on all.
    HalfWavePlate {
        phi: f64,
        reference: Polarization,
        path: Option<usize>,
    },
    /// Dove prism rotating the transverse mode by `rotation` on one path,
    /// optionally only for one polarization (inside an SOC).
    DovePrism {
        rotation: f64,
        path: usize,
        polarization: Option<Polarization>,
    },
    /// Transmits the other polarization, swaps the path of `reflected`.
    PolarizingSplitter { reflected: Polarization },
    /// Double pass through a 50/50 splitter to the movable mirror: amplitude 1/2.
    BalancedSplitter { path: usize },
    /// Phase `e^{i delta}` on one path.
    PhaseDelay { delta: f64, path: usize },
    /// Spin-orbit controller on `path`: its HWP maps the arm's incoming
    /// polarization `input` to `cos phi |x> + sin phi |y>`, then a Dove prism
    /// turns the `|y>` component's mode from `input_mode` to `theta`.
    SpinOrbitController {
        phi: f64,
        theta: f64,
        path: usize,
        input: Polarization,
        input_mode: f64,
    },
}

/// Jones matrix of a half-wave plate taking `reference` to `(cos phi, sin phi)`.
fn hwp_matrix(phi: f64, reference: Polarization) -> [[f64; 2]; 2] {
    let (s, c) = phi.sin_cos();
    match reference {
        // fast axis at phi/2
        Polarization::X => [[c, s], [s, -c]],
        // fast axis at phi/2 + pi/4
        Polarization::Y => [[-s, c], [c, s]],
    }
}

fn paths(path: Option<usize>) -> std::ops::Range<usize> {
    match path {
        Some(p) => p..p + 1,
        None => 0..2,
    }
}

impl OpticalElement {
    pub fn kind(&self) -> OperatorKind {
        match self {
            OpticalElement::SourceMode { .. } => OperatorKind::Preparation,
            OpticalElement::BalancedSplitter { .. } => OperatorKind::Attenuating,
            _ => OperatorKind::Unitary,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (angles, path): (&[f64], Option<usize>) = match self {
            OpticalElement::SourceMode { theta } => (std::slice::from_ref(theta), None),
            OpticalElement::HalfWavePlate { phi, path, .. } => (std::slice::from_ref(phi), *path),
            OpticalElement::DovePrism { rotation, path, .. } => {
                (std::slice::from_ref(rotation), Some(*path))
            }
            OpticalElement::PolarizingSplitter { .. } => (&[], None),
            OpticalElement::BalancedSplitter { path } => (&[], Some(*path)),
            OpticalElement::PhaseDelay { delta, path } => {
                (std::slice::from_ref(delta), Some(*path))
            }
            OpticalElement::SpinOrbitController {
                phi,
                theta,
                path,
                input_mode,
                ..
            } => {
                for a in [phi, theta, input_mode] {
                    if !a.is_finite() {
                        return Err(Error::InvalidParameters(format!("non-finite angle {a}")));
                    }
                }
                (&[], Some(*path))
            }
        };
        if let Some(a) = angles.iter().find(|a| !a.is_finite()) {
            return Err(Error::InvalidParameters(format!("non-finite angle {a}")));
        }
        if let Some(p) = path.filter(|p| *p > 1) {
            return Err(Error::InvalidParameters(format!("path {p} is not 0 or 1")));
        }
        Ok(())
    }

    /// Applies the element to the field.
    pub fn apply(&self, field: &Field) -> Field {
        let mut out = *field;
        match *self {
            OpticalElement::SourceMode { theta } => {
                out = Field::zero();
                let g = mode(theta);
                for (m, amp) in g.iter().enumerate() {
                    out.set(Polarization::Y.index(), m, 0, *amp);
                }
            }
            OpticalElement::HalfWavePlate {
                phi,
                reference,
                path,
            } => {
                let j = hwp_matrix(phi, reference);
                for p in paths(path) {
                    for m in 0..2 {
                        let v = [field.get(0, m, p), field.get(1, m, p)];
                        out.set(0, m, p, j[0][0] * v[0] + j[0][1] * v[1]);
                        out.set(1, m, p, j[1][0] * v[0] + j[1][1] * v[1]);
                    }
                }
            }
            OpticalElement::DovePrism {
                rotation,
                path,
                polarization,
            } => {
                let (s, c) = rotation.sin_cos();
                let pols = match polarization {
                    Some(pol) => pol.index()..pol.index() + 1,
                    None => 0..2,
                };
                for pol in pols {
                    let v = [field.get(pol, 0, path), field.get(pol, 1, path)];
                    out.set(pol, 0, path, c * v[0] - s * v[1]);
                    out.set(pol, 1, path, s * v[0] + c * v[1]);
                }
            }
            OpticalElement::PolarizingSplitter { reflected } => {
                let pol = reflected.index();
                for m in 0..2 {
                    out.set(pol, m, 0, field.get(pol, m, 1));
                    out.set(pol, m, 1, field.get(pol, m, 0));
                }
            }
            OpticalElement::BalancedSplitter { path } => {
                for pol in 0..2 {
                    for m in 0..2 {
                        out.set(pol, m, path, 0.5 * field.get(pol, m, path));
                    }
                }
            }
            OpticalElement::PhaseDelay { delta, path } => {
                let ph = Complex64::from_polar(1.0, delta);
                for pol in 0..2 {
                    for m in 0..2 {
                        out.set(pol, m, path, ph * field.get(pol, m, path));
                    }
                }
            }
            OpticalElement::SpinOrbitController {
                phi,
                theta,
                path,
                input,
                input_mode,
            } => {
                let plate = OpticalElement::HalfWavePlate {
                    phi,
                    reference: input,
                    path: Some(path),
                };
                let prism = OpticalElement::DovePrism {
                    rotation: theta - input_mode,
                    path,
                    polarization: Some(Polarization::Y),
                };
                out = prism.apply(&plate.apply(field));
            }
        }
        out
    }
}

/// A path-definite, polarization-definite beam component in mode `|G_mode>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    pub path: usize,
    pub polarization: Polarization,
    pub mode: f64,
    pub amplitude: Complex64,
}

impl Branch {
    pub fn field(&self) -> Field {
        let mut f = Field::zero();
        for (m, g) in mode(self.mode).iter().enumerate() {
            f.set(self.polarization.index(), m, self.path, self.amplitude * g);
        }
        f
    }
}

/// Output of one SOC: `|path>(cos phi |x>|G_in> + sin phi |y>|G_theta>)`.
pub fn soc_transform(branch: &Branch, phi: f64, theta: f64) -> Result<Field> {
    if branch.path > 1 {
        return Err(Error::InvalidParameters(format!(
            "path {} is not 0 or 1",
            branch.path
        )));
    }
    let soc = OpticalElement::SpinOrbitController {
        phi,
        theta,
        path: branch.path,
        input: branch.polarization,
        input_mode: branch.mode,
    };
    soc.validate()?;
    Ok(soc.apply(&branch.field()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SocSetting {
    pub phi: f64,
    pub theta: f64,
}

/// Settings of the preparation interferometer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchPipeline {
    /// Source mode orientation `theta`.
    pub source_theta: f64,
    /// Input half-wave plate `phi`.
    pub phi: f64,
    pub soc0: SocSetting,
    pub soc1: SocSetting,
    /// Phase delay on path 0.
    pub delta: f64,
    /// Paths recombined on BS2 (`true`) or output side by side. The modeled
    /// three-DoF state is the same either way; the flag records the layout.
    pub combine: bool,
}

impl BenchPipeline {
    pub fn validate(&self) -> Result<()> {
        for a in [
            self.source_theta,
            self.phi,
            self.soc0.phi,
            self.soc0.theta,
            self.soc1.phi,
            self.soc1.theta,
            self.delta,
        ] {
            if !a.is_finite() {
                return Err(Error::InvalidParameters(format!("non-finite angle {a}")));
            }
        }
        Ok(())
    }

    /// The ordered element list this pipeline applies.
    pub fn elements(&self) -> Vec<OpticalElement> {
        vec![
            OpticalElement::SourceMode {
                theta: self.source_theta,
            },
            OpticalElement::HalfWavePlate {
                phi: self.phi,
                reference: Polarization::Y,
                path: None,
            },
            OpticalElement::PolarizingSplitter {
                reflected: Polarization::Y,
            },
            OpticalElement::BalancedSplitter { path: 0 },
            OpticalElement::PhaseDelay {
                delta: self.delta,
                path: 0,
            },
            OpticalElement::SpinOrbitController {
                phi: self.soc0.phi,
                theta: self.soc0.theta,
                path: 0,
                input: Polarization::X,
                input_mode: self.source_theta,
            },
            OpticalElement::SpinOrbitController {
                phi: self.soc1.phi,
                theta: self.soc1.theta,
                path: 1,
                input: Polarization::Y,
                input_mode: self.source_theta,
            },
        ]
    }

    /// Unnormalized output field.
    pub fn output_field(&self) -> Field {
        self.elements()
            .iter()
            .fold(Field::zero(), |f, el| el.apply(&f))
    }
}

/// Runs the bench and returns the normalized output state.
pub fn run_pipeline(p: &BenchPipeline) -> Result<ThreeQubitState> {
    p.validate()?;
    p.output_field().into_state()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BeamName {
    E1,
    E2,
    E3,
    E4,
    E5,
    E6,
}

impl BeamName {
    pub const ALL: [BeamName; 6] = [
        BeamName::E1,
        BeamName::E2,
        BeamName::E3,
        BeamName::E4,
        BeamName::E5,
        BeamName::E6,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BeamName::E1 => "E1",
            BeamName::E2 => "E2",
            BeamName::E3 => "E3",
            BeamName::E4 => "E4",
            BeamName::E5 => "E5",
            BeamName::E6 => "E6",
        }
    }

    /// Label of the beam's point in the coherence cube.
    pub fn dot(self) -> &'static str {
        match self {
            BeamName::E1 => "M",
            BeamName::E2 => "O",
            BeamName::E3 => "W",
            BeamName::E4 => "A",
            BeamName::E5 => "B",
            BeamName::E6 => "C",
        }
    }

    /// Published theoretical genuine three-party coherence.
    pub fn published_c_abc(self) -> f64 {
        match self {
            BeamName::E1 => 0.0,
            BeamName::E2 => 1.0,
            BeamName::E3 => 2.0 / 3.0,
            _ => 0.0,
        }
    }
}

impl std::fmt::Display for BeamName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for BeamName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BeamName::ALL
            .into_iter()
            .find(|b| b.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownRecipe(s.to_string()))
    }
}

/// A named bench configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BeamRecipe {
    pub name: BeamName,
    pub pipeline: BenchPipeline,
    /// Settings the published recipe leaves open; fixed to 0 here.
    pub free: Vec<&'static str>,
}

fn acos_of(c: f64) -> f64 {
    c.acos()
}

/// Published settings for beams E1..E6, with angles recovered from the
/// quoted cosines.
pub fn named_recipe(name: &str) -> Result<BeamRecipe> {
    let name: BeamName = name.parse()?;
    Ok(recipe(name))
}

pub fn recipe(name: BeamName) -> BeamRecipe {
    let half = acos_of(0.5f64.sqrt());
    let four_fifths = acos_of((4.0f64 / 5.0).sqrt());
    let soc = |phi, theta| SocSetting { phi, theta };
    let (source_theta, phi, soc0, soc1, free) = match name {
        // |y>|G01>|1>
        BeamName::E1 => (
            0.0,
            FRAC_PI_2,
            soc(0.0, 0.0),
            soc(FRAC_PI_2, FRAC_PI_2),
            vec!["phi0", "theta0", "delta"],
        ),
        BeamName::E2 => (
            0.0,
            four_fifths,
            soc(0.0, 0.0),
            soc(FRAC_PI_2, FRAC_PI_2),
            vec!["theta0", "delta"],
        ),
        BeamName::E3 => (
            FRAC_PI_2,
            acos_of((4.0f64 / 6.0).sqrt()),
            soc(FRAC_PI_2, FRAC_PI_2),
            soc(half, 0.0),
            vec!["delta"],
        ),
        BeamName::E4 => (
            FRAC_PI_2,
            FRAC_PI_2,
            soc(0.0, 0.0),
            soc(half, 0.0),
            vec!["phi0", "theta0", "delta"],
        ),
        BeamName::E5 => (
            FRAC_PI_2,
            four_fifths,
            soc(FRAC_PI_2, FRAC_PI_2),
            soc(0.0, 0.0),
            vec!["theta1", "delta"],
        ),
        BeamName::E6 => (
            FRAC_PI_2,
            four_fifths,
            soc(FRAC_PI_2, FRAC_PI_2),
            soc(FRAC_PI_2, 0.0),
            vec!["delta"],
        ),
    };
    BeamRecipe {
        name,
        pipeline: BenchPipeline {
            source_theta,
            phi,
            soc0,
            soc1,
            delta: 0.0,
            combine: true,
        },
        free,
    }
}

/// Target state of each beam written directly in the (a, b, c) basis.
pub fn published_target(name: BeamName) -> ThreeQubitState {
    // (polarization, mode, path) triples: x/y = 0/1, HG10/HG01 = 0/1
    let terms: &[(usize, usize, usize)] = match name {
        BeamName::E1 => &[(1, 1, 1)],
        BeamName::E2 => &[(1, 1, 1), (0, 0, 0)],
        BeamName::E3 => &[(1, 1, 0), (0, 1, 1), (1, 0, 1)],
        BeamName::E4 => &[(0, 1, 1), (1, 0, 1)],
        BeamName::E5 => &[(1, 1, 0), (0, 1, 1)],
        BeamName::E6 => &[(1, 1, 0), (1, 0, 1)],
    };
    let mut amps = [ZERO; 8];
    for &(i, j, k) in terms {
        amps[amp_index(i, j, k)] = Complex64::new(1.0, 0.0);
    }
    make_state(amps, true).expect("published targets are nonzero")
}
