//! `tricoh`: command-line front end for the coherence toolkit.
//!
//! Reports are JSON envelopes (or CSV where `--format csv` is accepted) on
//! standard output. Exit codes: 0 success, 1 constraint violation found by
//! `sample`, 2 input or usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tricoh_core::bench::BeamName;
use tricoh_core::geometry::{
    allowed_volume_mc, classify_point, cross_section_area, directed_coherences, genuine_coherence,
    mesh_export, vertex_label, ConstraintSlacks, DirectedCoherences, RegionLabel, BOUNDARY_TOL,
};
use tricoh_core::io::{parse_recipe, parse_state};
use tricoh_core::sampling::{sweep, SweepStatistics};
use tricoh_core::tomography::{pipeline_rows, reproduce_table, table_rows, TableReport};
use tricoh_core::{
    constraint_slacks, reduced_matrix, separabilities, stokes_vector, CoherenceVector, Noise,
    StokesVector, Subsystem, TomographySettings, VERSION,
};

const REPORT_FORMAT: &str = "tricoh-report-v1";

#[derive(Parser)]
#[command(
    name = "tricoh",
    version,
    about = "Separability coherences of three-DoF pure states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coherences, constraint slacks and region of a state or beam file.
    Analyze(AnalyzeArgs),
    /// Constraint sweep over Haar-random states.
    Sample(SampleArgs),
    /// Simulated preparation and tomography of the named beams.
    Bench(BenchArgs),
    /// Coherence-cube geometry: classification, slices, volume, mesh.
    Geometry(GeometryArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum NoiseArg {
    None,
    Poisson,
}

impl From<NoiseArg> for Noise {
    fn from(n: NoiseArg) -> Self {
        match n {
            NoiseArg::None => Noise::None,
            NoiseArg::Poisson => Noise::Poisson,
        }
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    /// tricoh-state-v1 or tricoh-beam-v1 JSON file.
    #[arg(long)]
    state: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    n: u64,
    #[arg(long, env = "TRICOH_SEED", default_value_t = 0)]
    seed: u64,
    /// Histogram bins for C_abc over [0, 1].
    #[arg(long, default_value_t = 20)]
    bins: usize,
    /// Worker shards; results do not depend on this.
    #[arg(long, default_value_t = 4)]
    shards: usize,
}

#[derive(Args)]
#[command(group(ArgGroup::new("which").required(true).args(["name", "recipe", "all"])))]
struct BenchArgs {
    /// E1..E6
    #[arg(long)]
    name: Option<String>,
    /// tricoh-recipe-v1 JSON file.
    #[arg(long)]
    recipe: Option<PathBuf>,
    #[arg(long)]
    all: bool,
    /// Expected counts per projection.
    #[arg(long, default_value_t = 10_000)]
    shots: u64,
    #[arg(long, value_enum, default_value = "none")]
    noise: NoiseArg,
    #[arg(long, env = "TRICOH_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
#[command(group(
    ArgGroup::new("mode").required(true).args(["point", "cross_section", "volume", "mesh"])
))]
struct GeometryArgs {
    /// S_a,S_b,S_c
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    point: Option<[f64; 3]>,
    /// Slice total S_a + S_b + S_c in [0, 3].
    #[arg(long, allow_hyphen_values = true)]
    cross_section: Option<f64>,
    /// Monte Carlo volume of the allowed region.
    #[arg(long)]
    volume: bool,
    /// Write the allowed region as an OFF mesh.
    #[arg(long)]
    mesh: Option<PathBuf>,
    #[arg(long, default_value_t = 1_000_000, requires = "volume")]
    n: u64,
    #[arg(long, env = "TRICOH_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    shards: usize,
}

fn parse_point(s: &str) -> std::result::Result<[f64; 3], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("'{p}': {e}")))
        .collect::<std::result::Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected 3 comma-separated values, got {}", v.len()))
}

#[derive(Serialize)]
struct Envelope<P: Serialize> {
    format: &'static str,
    tool_version: &'static str,
    command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    shards: Option<usize>,
    payload: P,
}

fn print_json<P: Serialize>(seed: Option<u64>, shards: Option<usize>, payload: P) -> Result<()> {
    let env = Envelope {
        format: REPORT_FORMAT,
        tool_version: VERSION,
        command: std::env::args().skip(1).collect(),
        seed,
        shards,
        payload,
    };
    println!("{}", serde_json::to_string_pretty(&env)?);
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

#[derive(Serialize)]
struct StokesTriple {
    a: StokesVector,
    b: StokesVector,
    c: StokesVector,
}

#[derive(Serialize)]
struct AnalyzeReport {
    separabilities: CoherenceVector,
    stokes: StokesTriple,
    slacks: ConstraintSlacks,
    directed: DirectedCoherences,
    c_abc: f64,
    region: RegionLabel,
    vertex: Option<&'static str>,
}

fn analyze(args: &AnalyzeArgs) -> Result<()> {
    let input = parse_state(&read(&args.state)?)?;
    let s = input.to_state()?;
    let v = separabilities(&s)?;
    let [a, b, c] = Subsystem::ALL.map(|sub| stokes_vector(&reduced_matrix(&s, sub)));
    let report = AnalyzeReport {
        separabilities: v,
        stokes: StokesTriple { a, b, c },
        slacks: constraint_slacks(&v)?,
        directed: directed_coherences(&v)?,
        c_abc: genuine_coherence(&v)?,
        region: classify_point(&v, BOUNDARY_TOL)?,
        vertex: vertex_label(&v, BOUNDARY_TOL),
    };
    match args.format {
        Format::Json => print_json(None, None, report),
        Format::Csv => {
            let mut header = vec!["S_a", "S_b", "S_c"];
            let mut row: Vec<String> = v.as_array().iter().map(|x| x.to_string()).collect();
            let names = [
                ["stokes_a_1", "stokes_a_2", "stokes_a_3"],
                ["stokes_b_1", "stokes_b_2", "stokes_b_3"],
                ["stokes_c_1", "stokes_c_2", "stokes_c_3"],
            ];
            for (n, st) in names.iter().zip([a, b, c]) {
                header.extend(n);
                row.extend(st.as_array().iter().map(|x| x.to_string()));
            }
            header.extend(["slack_a", "slack_b", "slack_c"]);
            row.extend(report.slacks.as_array().iter().map(|x| x.to_string()));
            header.extend(["C_a|bc", "C_b|ca", "C_c|ab", "C_abc", "region", "vertex"]);
            row.extend(report.directed.as_array().iter().map(|x| x.to_string()));
            row.push(report.c_abc.to_string());
            row.push(report.region.name().to_string());
            row.push(report.vertex.unwrap_or_default().to_string());
            println!("{}", header.join(","));
            println!("{}", row.join(","));
            Ok(())
        }
    }
}

fn sample(args: &SampleArgs) -> Result<bool> {
    let stats: SweepStatistics = sweep(args.n, args.seed, args.shards, args.bins)?;
    let clean = stats.violations == 0 && stats.failures == 0;
    print_json(Some(args.seed), Some(stats.shards), stats)?;
    Ok(clean)
}

fn bench(args: &BenchArgs) -> Result<()> {
    let t = TomographySettings {
        shots: args.shots,
        noise: args.noise.into(),
        seed: args.seed,
    };
    t.validate()?;
    let rows = if args.all {
        reproduce_table(&t)?.rows
    } else if let Some(name) = &args.name {
        table_rows(name.parse::<BeamName>()?, &t)?.to_vec()
    } else if let Some(path) = &args.recipe {
        let r = parse_recipe(&read(path)?)?;
        match r.name {
            Some(beam) => table_rows(beam, &t)?.to_vec(),
            None => pipeline_rows("custom", &r.pipeline, None, &t, 0)?.to_vec(),
        }
    } else {
        bail!("one of --name, --recipe or --all is required");
    };
    let report = TableReport { settings: t, rows };
    match args.format {
        Format::Csv => {
            print!("{}", report.to_csv());
            Ok(())
        }
        Format::Json => {
            let noisy = matches!(t.noise, Noise::Poisson);
            print_json(noisy.then_some(args.seed), noisy.then_some(1), report)
        }
    }
}

#[derive(Serialize)]
struct PointReport {
    point: CoherenceVector,
    slacks: ConstraintSlacks,
    directed: DirectedCoherences,
    c_abc: f64,
    region: RegionLabel,
    vertex: Option<&'static str>,
}

#[derive(Serialize)]
struct SliceReport {
    total: f64,
    area: f64,
}

#[derive(Serialize)]
struct MeshReport {
    path: String,
    vertices: usize,
    faces: usize,
}

fn geometry(args: &GeometryArgs) -> Result<()> {
    if let Some(p) = args.point {
        let v = CoherenceVector::checked(p[0], p[1], p[2])?;
        let report = PointReport {
            point: v,
            slacks: constraint_slacks(&v)?,
            directed: directed_coherences(&v)?,
            c_abc: genuine_coherence(&v)?,
            region: classify_point(&v, BOUNDARY_TOL)?,
            vertex: vertex_label(&v, BOUNDARY_TOL),
        };
        print_json(None, None, report)
    } else if let Some(total) = args.cross_section {
        let area = cross_section_area(total)?;
        print_json(None, None, SliceReport { total, area })
    } else if args.volume {
        let est = allowed_volume_mc(args.n, args.seed, args.shards)?;
        print_json(Some(args.seed), Some(est.shards), est)
    } else if let Some(path) = &args.mesh {
        let mesh = mesh_export();
        std::fs::write(path, mesh.to_off())
            .with_context(|| format!("writing {}", path.display()))?;
        print_json(
            None,
            None,
            MeshReport {
                path: path.display().to_string(),
                vertices: mesh.vertices.len(),
                faces: mesh.faces.len(),
            },
        )
    } else {
        bail!("one of --point, --cross-section, --volume or --mesh is required");
    }
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Analyze(a) => analyze(a).map(|_| true),
        Command::Sample(a) => sample(a),
        Command::Bench(a) => bench(a).map(|_| true),
        Command::Geometry(a) => geometry(a).map(|_| true),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
