//! Stokes tomography of the three reduced matrices, with optional Poisson
//! shot noise, and the six-beam coherence table.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bench::{recipe, run_pipeline, BeamName, BenchPipeline};
use crate::coherence::{separabilities, CoherenceVector, StokesVector};
use crate::error::{Error, Result};
use crate::geometry::genuine_coherence;
use crate::rng::stream_rng;
use crate::state::{CoherenceMatrix, Subsystem, ThreeQubitState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    pub fn label(self) -> char {
        match self {
            PauliAxis::X => 'x',
            PauliAxis::Y => 'y',
            PauliAxis::Z => 'z',
        }
    }

    /// Unit eigenvector of the axis with eigenvalue `sign`.
    fn eigenvector(self, sign: Sign) -> [Complex64; 2] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = sign.value();
        match self {
            PauliAxis::X => [Complex64::new(h, 0.0), Complex64::new(s * h, 0.0)],
            PauliAxis::Y => [Complex64::new(h, 0.0), Complex64::new(0.0, s * h)],
            PauliAxis::Z if s > 0.0 => [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            PauliAxis::Z => [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Probability that a projective measurement of `sub` along `axis` gives `sign`.
pub fn simulate_projection(
    s: &ThreeQubitState,
    sub: Subsystem,
    axis: PauliAxis,
    sign: Sign,
) -> f64 {
    let e = axis.eigenvector(sign);
    let bit = sub.bit();
    let amps = s.amplitudes();
    // sum over the other two qubits of |<e| psi_rest>|^2
    (0..8usize)
        .filter(|idx| idx & (1 << bit) == 0)
        .map(|idx0| {
            let idx1 = idx0 | (1 << bit);
            (e[0].conj() * amps[idx0] + e[1].conj() * amps[idx1]).norm_sqr()
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Noise {
    None,
    Poisson,
}

impl std::str::FromStr for Noise {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "none" => Ok(Noise::None),
            "poisson" => Ok(Noise::Poisson),
            other => Err(Error::Parse(format!("unknown noise model '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TomographySettings {
    /// Expected counts per projection.
    pub shots: u64,
    pub noise: Noise,
    pub seed: u64,
}

impl TomographySettings {
    pub fn noiseless() -> Self {
        TomographySettings {
            shots: 1,
            noise: Noise::None,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(Error::InvalidParameters("shots must be at least 1".into()));
        }
        Ok(())
    }
}

/// Reconstruction of one reduced matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsystemEstimate {
    pub sub: Subsystem,
    /// `[p+, p-]` for x, y, z.
    pub probabilities: [[f64; 2]; 3],
    /// `[N+, N-]` for x, y, z; absent without noise.
    pub counts: Option<[[u64; 2]; 3]>,
    pub stokes: StokesVector,
    pub matrix: CoherenceMatrix,
    /// `min(1, |s|)`.
    pub separability: f64,
    /// `|s|` before clamping.
    pub raw_separability: f64,
    pub clamped: bool,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TomographyResult {
    pub settings: TomographySettings,
    pub subsystems: [SubsystemEstimate; 3],
}

impl TomographyResult {
    pub fn get(&self, sub: Subsystem) -> &SubsystemEstimate {
        &self.subsystems[sub.index()]
    }

    pub fn separabilities(&self) -> CoherenceVector {
        let [a, b, c] = &self.subsystems;
        CoherenceVector::new(a.separability, b.separability, c.separability)
    }

    pub fn std_errors(&self) -> [f64; 3] {
        self.subsystems.each_ref().map(|e| e.std_error)
    }
}

fn poisson_count<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    // mean is finite and positive here
    Poisson::new(mean).expect("valid Poisson mean").sample(rng) as u64
}

fn estimate<R: Rng + ?Sized>(
    s: &ThreeQubitState,
    sub: Subsystem,
    t: &TomographySettings,
    rng: &mut R,
) -> Result<SubsystemEstimate> {
    let mut probabilities = [[0.0; 2]; 3];
    let mut counts = [[0u64; 2]; 3];
    let mut stokes = [0.0; 3];
    let mut var = [0.0; 3];
    for (k, axis) in PauliAxis::ALL.into_iter().enumerate() {
        let p = [Sign::Plus, Sign::Minus].map(|sg| simulate_projection(s, sub, axis, sg));
        probabilities[k] = p;
        match t.noise {
            Noise::None => stokes[k] = p[0] - p[1],
            Noise::Poisson => {
                let shots = t.shots as f64;
                let n = p.map(|pk| poisson_count(rng, shots * pk.max(0.0)));
                let total = n[0] + n[1];
                if total == 0 {
                    return Err(Error::EmptyCounts {
                        sub,
                        axis: axis.label(),
                    });
                }
                let est = (n[0] as f64 - n[1] as f64) / total as f64;
                counts[k] = n;
                stokes[k] = est;
                // first-order propagation: Var = 4 N+ N- / N^3 = (1 - s^2) / N
                var[k] = (1.0 - est * est) / total as f64;
            }
        }
    }
    let raw = stokes.iter().map(|v| v * v).sum::<f64>().sqrt();
    let std_error = if raw > 0.0 {
        stokes
            .iter()
            .zip(var)
            .map(|(sk, vk)| (sk / raw).powi(2) * vk)
            .sum::<f64>()
            .sqrt()
    } else {
        var.iter().sum::<f64>().sqrt()
    };
    Ok(SubsystemEstimate {
        sub,
        probabilities,
        counts: (t.noise == Noise::Poisson).then_some(counts),
        stokes: StokesVector {
            s1: stokes[0],
            s2: stokes[1],
            s3: stokes[2],
        },
        matrix: CoherenceMatrix::from_stokes(stokes),
        separability: raw.min(1.0),
        raw_separability: raw,
        clamped: raw > 1.0,
        std_error,
    })
}

/// Tomography of trial `trial`; noisy trials draw from stream `trial` of the seed.
pub fn tomography_trial(
    s: &ThreeQubitState,
    t: &TomographySettings,
    trial: u64,
) -> Result<TomographyResult> {
    t.validate()?;
    let mut rng = stream_rng(t.seed, trial);
    let [a, b, c] = Subsystem::ALL;
    Ok(TomographyResult {
        settings: *t,
        subsystems: [
            estimate(s, a, t, &mut rng)?,
            estimate(s, b, t, &mut rng)?,
            estimate(s, c, t, &mut rng)?,
        ],
    })
}

pub fn tomography(s: &ThreeQubitState, t: &TomographySettings) -> Result<TomographyResult> {
    tomography_trial(s, t, 0)
}

/// Independent trials `0..trials`, run in parallel.
pub fn repeated_tomography(
    s: &ThreeQubitState,
    t: &TomographySettings,
    trials: u64,
) -> Result<Vec<TomographyResult>> {
    (0..trials)
        .into_par_iter()
        .map(|i| tomography_trial(s, t, i))
        .collect()
}

/// RMS Stokes-component error at one shot count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub shots: u64,
    pub rms_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingStudy {
    pub points: Vec<ScalingPoint>,
    /// Least-squares slope of ln(rms) against ln(shots).
    pub slope: f64,
}

/// Poisson error of the nine Stokes components over `trials` trials per shot count.
pub fn shot_noise_scaling(
    s: &ThreeQubitState,
    shots: &[u64],
    trials: u64,
    seed: u64,
) -> Result<ScalingStudy> {
    if shots.len() < 2 || trials == 0 {
        return Err(Error::InvalidParameters(
            "need at least two shot counts and one trial".into(),
        ));
    }
    let exact = tomography(s, &TomographySettings::noiseless())?;
    let points = shots
        .iter()
        .map(|&n| {
            let t = TomographySettings {
                shots: n,
                noise: Noise::Poisson,
                seed,
            };
            let runs = repeated_tomography(s, &t, trials)?;
            let mut sq = 0.0;
            let mut count = 0usize;
            for r in &runs {
                for (e, x) in r.subsystems.iter().zip(&exact.subsystems) {
                    for (a, b) in e.stokes.as_array().iter().zip(x.stokes.as_array()) {
                        sq += (a - b).powi(2);
                        count += 1;
                    }
                }
            }
            Ok(ScalingPoint {
                shots: n,
                rms_error: (sq / count as f64).sqrt(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = points.iter().map(|p| (p.shots as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.rms_error.ln()).collect();
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(ScalingStudy {
        points,
        slope: sxy / sxx,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowKind {
    Measured,
    Theory,
}

/// One line of the coherence table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    /// Beam name, or a caller-chosen label for custom settings.
    pub beam: String,
    pub kind: RowKind,
    pub s: [f64; 3],
    /// Standard errors; absent on theory rows.
    pub err: Option<[f64; 3]>,
    /// `S_b+S_c-S_a`, `S_c+S_a-S_b`, `S_a+S_b-S_c`.
    pub combinations: [f64; 3],
    pub c_abc: f64,
    /// Published value; absent for custom settings.
    pub c_abc_theory: Option<f64>,
    /// Coherence-cube point of a named beam.
    pub dot: Option<String>,
}

impl TableRow {
    fn new(
        beam: &str,
        published: Option<BeamName>,
        kind: RowKind,
        v: CoherenceVector,
        err: Option<[f64; 3]>,
    ) -> Result<Self> {
        let [sa, sb, sc] = v.as_array();
        Ok(TableRow {
            beam: beam.to_string(),
            kind,
            s: [sa, sb, sc],
            err,
            combinations: [sb + sc - sa, sc + sa - sb, sa + sb - sc],
            c_abc: genuine_coherence(&v)?,
            c_abc_theory: published.map(BeamName::published_c_abc),
            dot: published.map(|b| b.dot().to_string()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableReport {
    pub settings: TomographySettings,
    pub rows: Vec<TableRow>,
}

pub const TABLE_HEADER: &str = "beam,row,S_a,S_a_err,S_b,S_b_err,S_c,S_c_err,\
S_b+S_c-S_a,S_c+S_a-S_b,S_a+S_b-S_c,C_abc,C_abc_theory,dot";

fn fmt_num(x: f64) -> String {
    let s = format!("{x:.6}");
    // round-off below the printed precision should not show a sign
    if s == "-0.000000" {
        s[1..].to_string()
    } else {
        s
    }
}

impl TableReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(TABLE_HEADER);
        out.push('\n');
        for r in &self.rows {
            let kind = match r.kind {
                RowKind::Measured => "measured",
                RowKind::Theory => "theory",
            };
            let mut fields = vec![r.beam.clone(), kind.to_string()];
            for k in 0..3 {
                fields.push(fmt_num(r.s[k]));
                fields.push(r.err.map(|e| fmt_num(e[k])).unwrap_or_default());
            }
            fields.extend(r.combinations.iter().map(|&c| fmt_num(c)));
            fields.push(fmt_num(r.c_abc));
            fields.push(r.c_abc_theory.map(fmt_num).unwrap_or_default());
            fields.push(r.dot.clone().unwrap_or_default());
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn rows_for(&self, beam: BeamName) -> impl Iterator<Item = &TableRow> {
        self.rows.iter().filter(move |r| r.beam == beam.as_str())
    }
}

/// Measured row (tomography trial `index`) followed by the theory row for
/// arbitrary bench settings. `published` attaches a named beam's reference values.
pub fn pipeline_rows(
    label: &str,
    pipeline: &BenchPipeline,
    published: Option<BeamName>,
    t: &TomographySettings,
    index: u64,
) -> Result<[TableRow; 2]> {
    let state = run_pipeline(pipeline)?;
    let result = tomography_trial(&state, t, index)?;
    let measured = TableRow::new(
        label,
        published,
        RowKind::Measured,
        result.separabilities(),
        Some(result.std_errors()),
    )?;
    let theory = TableRow::new(
        label,
        published,
        RowKind::Theory,
        separabilities(&state)?,
        None,
    )?;
    Ok([measured, theory])
}

/// Rows for a named beam; `Ek` uses tomography stream `k - 1`.
pub fn table_rows(beam: BeamName, t: &TomographySettings) -> Result<[TableRow; 2]> {
    let index = BeamName::ALL.iter().position(|b| *b == beam).unwrap_or(0) as u64;
    pipeline_rows(beam.as_str(), &recipe(beam).pipeline, Some(beam), t, index)
}

/// The six-beam table.
pub fn reproduce_table(t: &TomographySettings) -> Result<TableReport> {
    t.validate()?;
    let mut rows = Vec::with_capacity(12);
    for beam in BeamName::ALL {
        rows.extend(table_rows(beam, t)?);
    }
    Ok(TableReport { settings: *t, rows })
}
