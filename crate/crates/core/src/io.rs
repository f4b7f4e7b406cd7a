//! JSON state, beam and recipe files. Complex numbers are `[re, im]` pairs.
//!
//! ```text
//! {"format": "tricoh-state-v1", "amplitudes": [[re, im], ... 8 entries]}
//! {"format": "tricoh-beam-v1", "alpha": [re, im], "beta": [re, im],
//!  "gx": [[re, im], [re, im]], "gy": ..., "fx": ..., "fy": ...}
//! {"format": "tricoh-recipe-v1", "name": "E3"}
//! {"format": "tricoh-recipe-v1", "settings": {"theta": .., "phi": .., "phi0": ..,
//!  "theta0": .., "phi1": .., "theta1": .., "delta": 0.0, "combine": true}}
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bench::{recipe, BeamName, BenchPipeline, SocSetting};
use crate::error::{Error, Result};
use crate::state::{beam_to_state, make_state, BeamParameters, ThreeQubitState};

pub const STATE_FORMAT: &str = "tricoh-state-v1";
pub const BEAM_FORMAT: &str = "tricoh-beam-v1";
pub const RECIPE_FORMAT: &str = "tricoh-recipe-v1";

type Pair = [f64; 2];

fn to_pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

fn from_pair(p: Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateDoc {
    format: String,
    amplitudes: Vec<Pair>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BeamDoc {
    format: String,
    alpha: Pair,
    beta: Pair,
    gx: [Pair; 2],
    gy: [Pair; 2],
    fx: [Pair; 2],
    fy: [Pair; 2],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SettingsDoc {
    theta: f64,
    phi: f64,
    phi0: f64,
    theta0: f64,
    phi1: f64,
    theta1: f64,
    #[serde(default)]
    delta: f64,
    #[serde(default = "default_combine")]
    combine: bool,
}

fn default_combine() -> bool {
    true
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RecipeDoc {
    format: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    settings: Option<SettingsDoc>,
}

/// Contents of a state file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateInput {
    State(ThreeQubitState),
    Beam(BeamParameters),
}

impl StateInput {
    pub fn to_state(&self) -> Result<ThreeQubitState> {
        match self {
            StateInput::State(s) => Ok(*s),
            StateInput::Beam(p) => beam_to_state(p),
        }
    }
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn format_of(v: &Value) -> Result<&str> {
    v.get("format")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("missing \"format\" string".into()))
}

/// Parses a `tricoh-state-v1` or `tricoh-beam-v1` document. Amplitudes must be
/// normalized to within the input tolerance.
pub fn parse_state(text: &str) -> Result<StateInput> {
    let v: Value = serde_json::from_str(text).map_err(parse_err)?;
    match format_of(&v)? {
        STATE_FORMAT => {
            let doc: StateDoc = serde_json::from_value(v).map_err(parse_err)?;
            let amps: [Complex64; 8] = doc
                .amplitudes
                .iter()
                .map(|p| from_pair(*p))
                .collect::<Vec<_>>()
                .try_into()
                .map_err(|a: Vec<_>| {
                    Error::Parse(format!("expected 8 amplitudes, found {}", a.len()))
                })?;
            Ok(StateInput::State(make_state(amps, false)?))
        }
        BEAM_FORMAT => {
            let d: BeamDoc = serde_json::from_value(v).map_err(parse_err)?;
            let pair2 = |p: [Pair; 2]| p.map(from_pair);
            Ok(StateInput::Beam(BeamParameters::new(
                from_pair(d.alpha),
                from_pair(d.beta),
                pair2(d.gx),
                pair2(d.gy),
                pair2(d.fx),
                pair2(d.fy),
            )?))
        }
        other => Err(Error::Parse(format!("unknown format \"{other}\""))),
    }
}

pub fn state_to_json(s: &ThreeQubitState) -> String {
    let doc = StateDoc {
        format: STATE_FORMAT.into(),
        amplitudes: s.amplitudes().iter().map(|z| to_pair(*z)).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("state documents serialize")
}

pub fn beam_to_json(p: &BeamParameters) -> String {
    let pair2 = |v: [Complex64; 2]| v.map(to_pair);
    let doc = BeamDoc {
        format: BEAM_FORMAT.into(),
        alpha: to_pair(p.alpha),
        beta: to_pair(p.beta),
        gx: pair2(p.gx),
        gy: pair2(p.gy),
        fx: pair2(p.fx),
        fy: pair2(p.fy),
    };
    serde_json::to_string_pretty(&doc).expect("beam documents serialize")
}

/// A recipe file: a named beam or explicit settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecipeInput {
    pub name: Option<BeamName>,
    pub pipeline: BenchPipeline,
}

pub fn parse_recipe(text: &str) -> Result<RecipeInput> {
    let v: Value = serde_json::from_str(text).map_err(parse_err)?;
    let fmt = format_of(&v)?;
    if fmt != RECIPE_FORMAT {
        return Err(Error::Parse(format!("unknown format \"{fmt}\"")));
    }
    let doc: RecipeDoc = serde_json::from_value(v).map_err(parse_err)?;
    match (doc.name, doc.settings) {
        (Some(name), None) => {
            let name: BeamName = name.parse()?;
            Ok(RecipeInput {
                name: Some(name),
                pipeline: recipe(name).pipeline,
            })
        }
        (None, Some(s)) => {
            let pipeline = BenchPipeline {
                source_theta: s.theta,
                phi: s.phi,
                soc0: SocSetting {
                    phi: s.phi0,
                    theta: s.theta0,
                },
                soc1: SocSetting {
                    phi: s.phi1,
                    theta: s.theta1,
                },
                delta: s.delta,
                combine: s.combine,
            };
            pipeline.validate()?;
            Ok(RecipeInput {
                name: None,
                pipeline,
            })
        }
        _ => Err(Error::Parse(
            "recipe needs exactly one of \"name\" or \"settings\"".into(),
        )),
    }
}

/// Writes explicit settings for a pipeline.
pub fn recipe_to_json(p: &BenchPipeline) -> String {
    let doc = RecipeDoc {
        format: RECIPE_FORMAT.into(),
        name: None,
        settings: Some(SettingsDoc {
            theta: p.source_theta,
            phi: p.phi,
            phi0: p.soc0.phi,
            theta0: p.soc0.theta,
            phi1: p.soc1.phi,
            theta1: p.soc1.theta,
            delta: p.delta,
            combine: p.combine,
        }),
    };
    serde_json::to_string_pretty(&doc).expect("recipe documents serialize")
}
