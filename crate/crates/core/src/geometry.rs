//! The tetrahedral constraint system on `(S_a, S_b, S_c)` and its geometry
//! inside the unit coherence cube.
//!
//! Cube vertices used throughout: `O = (0,0,0)`, `A = (0,0,1)`,
//! `B = (0,1,0)`, `C = (1,0,0)`, `M = (1,1,1)`, plus the three excluded
//! corners `D = (0,1,1)`, `E = (1,0,1)`, `F = (1,1,0)`. The allowed region is
//! the union of the tetrahedra `OABC` and `MABC`.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coherence::CoherenceVector;
use crate::error::{Error, Result};
use crate::rng::{shard_ranges, stream_rng};
use crate::state::Subsystem;
use rand::Rng;

/// Default tolerance for reporting a point as lying on a constraint face.
pub const BOUNDARY_TOL: f64 = 1e-9;
/// Directed coherences closer than this to the minimum share the arg-min.
pub const ARGMIN_TOL: f64 = 1e-12;
/// Cube points per random stream in the Monte Carlo volume estimate.
pub const MC_BLOCK: u64 = 4096;
/// Smallest accepted Monte Carlo sample count.
pub const MC_MIN_SAMPLES: u64 = 1000;

/// `slack_x = 1 - (S_j + S_k - S_x)`; all three are non-negative for pure states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSlacks {
    pub slack_a: f64,
    pub slack_b: f64,
    pub slack_c: f64,
}

impl ConstraintSlacks {
    pub fn as_array(&self) -> [f64; 3] {
        [self.slack_a, self.slack_b, self.slack_c]
    }

    pub fn min(&self) -> f64 {
        self.slack_a.min(self.slack_b).min(self.slack_c)
    }
}

/// `C_{x->jk} = 1 + S_x - S_j - S_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectedCoherences {
    pub c_a_bc: f64,
    pub c_b_ca: f64,
    pub c_c_ab: f64,
}

impl DirectedCoherences {
    pub fn as_array(&self) -> [f64; 3] {
        [self.c_a_bc, self.c_b_ca, self.c_c_ab]
    }

    pub fn min(&self) -> f64 {
        self.c_a_bc.min(self.c_b_ca).min(self.c_c_ab)
    }

    /// Directions attaining the minimum, within [`ARGMIN_TOL`].
    pub fn argmin(&self) -> Vec<Subsystem> {
        let min = self.min();
        Subsystem::ALL
            .into_iter()
            .zip(self.as_array())
            .filter(|(_, c)| *c - min <= ARGMIN_TOL)
            .map(|(sub, _)| sub)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionLabel {
    #[serde(rename = "origin-tetra OABC")]
    OriginTetra,
    #[serde(rename = "apex-tetra MABC")]
    ApexTetra,
    #[serde(rename = "shared-face ABC")]
    SharedFace,
    /// Violates `S_b + S_c - S_a <= 1` (corner `D`).
    #[serde(rename = "excluded-BCMD")]
    ExcludedBcmd,
    /// Violates `S_c + S_a - S_b <= 1` (corner `E`).
    #[serde(rename = "excluded-CAME")]
    ExcludedCame,
    /// Violates `S_a + S_b - S_c <= 1` (corner `F`).
    #[serde(rename = "excluded-ABMF")]
    ExcludedAbmf,
    #[serde(rename = "boundary")]
    Boundary,
}

impl RegionLabel {
    pub fn name(self) -> &'static str {
        match self {
            RegionLabel::OriginTetra => "origin-tetra OABC",
            RegionLabel::ApexTetra => "apex-tetra MABC",
            RegionLabel::SharedFace => "shared-face ABC",
            RegionLabel::ExcludedBcmd => "excluded-BCMD",
            RegionLabel::ExcludedCame => "excluded-CAME",
            RegionLabel::ExcludedAbmf => "excluded-ABMF",
            RegionLabel::Boundary => "boundary",
        }
    }

    pub fn is_excluded(self) -> bool {
        matches!(
            self,
            RegionLabel::ExcludedBcmd | RegionLabel::ExcludedCame | RegionLabel::ExcludedAbmf
        )
    }
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Named cube vertices.
pub const VERTICES: [(&str, [f64; 3]); 8] = [
    ("O", [0.0, 0.0, 0.0]),
    ("A", [0.0, 0.0, 1.0]),
    ("B", [0.0, 1.0, 0.0]),
    ("C", [1.0, 0.0, 0.0]),
    ("M", [1.0, 1.0, 1.0]),
    ("D", [0.0, 1.0, 1.0]),
    ("E", [1.0, 0.0, 1.0]),
    ("F", [1.0, 1.0, 0.0]),
];

/// The named vertex within `tol` (max-norm) of `v`, if any.
pub fn vertex_label(v: &CoherenceVector, tol: f64) -> Option<&'static str> {
    VERTICES.iter().find_map(|(name, p)| {
        let d = v
            .as_array()
            .iter()
            .zip(p)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        (d <= tol).then_some(*name)
    })
}

fn check_unit_cube(v: &CoherenceVector) -> Result<()> {
    v.validate()
}

pub fn constraint_slacks(v: &CoherenceVector) -> Result<ConstraintSlacks> {
    check_unit_cube(v)?;
    Ok(slacks_unchecked(v))
}

/// Slacks without the unit-cube check, for noisy measured vectors.
pub fn slacks_unchecked(v: &CoherenceVector) -> ConstraintSlacks {
    let CoherenceVector { sa, sb, sc } = *v;
    ConstraintSlacks {
        slack_a: 1.0 - (sb + sc - sa),
        slack_b: 1.0 - (sc + sa - sb),
        slack_c: 1.0 - (sa + sb - sc),
    }
}

pub fn directed_coherences(v: &CoherenceVector) -> Result<DirectedCoherences> {
    check_unit_cube(v)?;
    Ok(directed_unchecked(v))
}

pub fn directed_unchecked(v: &CoherenceVector) -> DirectedCoherences {
    let CoherenceVector { sa, sb, sc } = *v;
    DirectedCoherences {
        c_a_bc: 1.0 + sa - sb - sc,
        c_b_ca: 1.0 + sb - sc - sa,
        c_c_ab: 1.0 + sc - sa - sb,
    }
}

/// Genuine three-party coherence: the smallest directed coherence.
pub fn genuine_coherence(v: &CoherenceVector) -> Result<f64> {
    Ok(directed_coherences(v)?.min())
}

/// Locates a point of the unit cube relative to the constraint faces.
pub fn classify_point(v: &CoherenceVector, tol: f64) -> Result<RegionLabel> {
    let slacks = constraint_slacks(v)?;
    let labels = [
        RegionLabel::ExcludedBcmd,
        RegionLabel::ExcludedCame,
        RegionLabel::ExcludedAbmf,
    ];
    let arr = slacks.as_array();
    // at most one slack can be negative inside the cube: slack_x + slack_y = 2 - 2 S_z
    if let Some(k) = (0..3).find(|&k| arr[k] < -tol) {
        return Ok(labels[k]);
    }
    if arr.iter().any(|s| s.abs() <= tol) {
        return Ok(RegionLabel::Boundary);
    }
    let total = v.total();
    Ok(if (total - 1.0).abs() <= tol {
        RegionLabel::SharedFace
    } else if total < 1.0 {
        RegionLabel::OriginTetra
    } else {
        RegionLabel::ApexTetra
    })
}

/// Area of the slice `S_a + S_b + S_c = total` through the allowed region,
/// measured in the plane's own metric.
pub fn cross_section_area(total: f64) -> Result<f64> {
    if !(0.0..=3.0).contains(&total) {
        return Err(Error::OutOfRange {
            what: "total separability",
            value: total,
            min: 0.0,
            max: 3.0,
        });
    }
    // equilateral triangle with side sqrt(2) * scale
    let scale = if total <= 1.0 {
        total
    } else {
        (3.0 - total) / 2.0
    };
    Ok(3f64.sqrt() / 2.0 * scale * scale)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub n: u64,
    pub seed: u64,
    pub shards: usize,
    pub estimate: f64,
    pub std_error: f64,
}

/// Monte Carlo fraction of the unit cube whose three slacks are all
/// `>= min_slack`. With `min_slack = 0` this is the allowed volume.
pub fn region_volume_mc(
    n: u64,
    seed: u64,
    shards: usize,
    min_slack: f64,
) -> Result<VolumeEstimate> {
    if n < MC_MIN_SAMPLES {
        return Err(Error::OutOfRange {
            what: "Monte Carlo sample count",
            value: n as f64,
            min: MC_MIN_SAMPLES as f64,
            max: f64::INFINITY,
        });
    }
    let shards = shards.max(1);
    let blocks = n.div_ceil(MC_BLOCK);
    let hits: u64 = shard_ranges(blocks, shards)
        .into_par_iter()
        .map(|range| {
            range
                .map(|block| {
                    let mut rng = stream_rng(seed, block);
                    let start = block * MC_BLOCK;
                    let len = MC_BLOCK.min(n - start);
                    (0..len)
                        .filter(|_| {
                            let p = CoherenceVector::new(rng.random(), rng.random(), rng.random());
                            slacks_unchecked(&p).min() >= min_slack
                        })
                        .count() as u64
                })
                .sum::<u64>()
        })
        .sum();
    let p = hits as f64 / n as f64;
    Ok(VolumeEstimate {
        n,
        seed,
        shards,
        estimate: p,
        std_error: (p * (1.0 - p) / n as f64).sqrt(),
    })
}

/// Monte Carlo estimate of the allowed volume (exactly 1/2).
pub fn allowed_volume_mc(n: u64, seed: u64, shards: usize) -> Result<VolumeEstimate> {
    region_volume_mc(n, seed, shards, 0.0)
}

/// Triangle mesh of the two allowed tetrahedra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mesh {
    pub vertex_names: Vec<String>,
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<[usize; 3]>,
}

impl Mesh {
    /// OFF text: header, counts line, one line per vertex, one per face.
    pub fn to_off(&self) -> String {
        let mut out = String::from("OFF\n");
        out.push_str(&format!("{} {} 0\n", self.vertices.len(), self.faces.len()));
        for v in &self.vertices {
            out.push_str(&format!("{} {} {}\n", v[0], v[1], v[2]));
        }
        for f in &self.faces {
            out.push_str(&format!("3 {} {} {}\n", f[0], f[1], f[2]));
        }
        out
    }
}

/// Vertices `O, A, B, C, M` and the outward-oriented faces of `OABC` then `MABC`.
pub fn mesh_export() -> Mesh {
    let (o, a, b, c, m) = (0, 1, 2, 3, 4);
    Mesh {
        vertex_names: VERTICES[..5].iter().map(|(n, _)| n.to_string()).collect(),
        vertices: VERTICES[..5].iter().map(|(_, p)| *p).collect(),
        faces: vec![
            [o, a, b],
            [o, b, c],
            [o, c, a],
            [a, c, b],
            [a, b, c],
            [m, b, a],
            [m, c, b],
            [m, a, c],
        ],
    }
}
