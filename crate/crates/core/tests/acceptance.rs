//! Acceptance criteria. Runs without the libtest harness so every criterion
//! prints one PASS/FAIL line; exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;
use tricoh_core::bench::{published_target, recipe, BeamName};
use tricoh_core::geometry::{allowed_volume_mc, cross_section_area, BOUNDARY_TOL};
use tricoh_core::rng::{box_muller, stream_rng};
use tricoh_core::sampling::{decompose_in_eigenbases, haar_state_at, haar_unitary, sweep};
use tricoh_core::tomography::{repeated_tomography, shot_noise_scaling, Noise};
use tricoh_core::{
    apply_local_unitary, beam_to_state, classify_point, closed_form_separabilities,
    genuine_coherence, run_pipeline, separabilities, separability_det, separability_eig,
    stokes_vector, tomography, verify_appendix, BeamParameters, CoherenceMatrix, CoherenceVector,
    RegionLabel, Subsystem, ThreeQubitState, TomographySettings,
};

const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

// ---- test-side oracles -------------------------------------------------------

/// Reduced matrix by brute force: build the 8x8 density matrix and trace out
/// the two other qubits.
fn brute_reduced(s: &ThreeQubitState, sub: Subsystem) -> [[Complex64; 2]; 2] {
    let d = s.amplitudes();
    let mut rho = [[Complex64::new(0.0, 0.0); 8]; 8];
    for r in 0..8 {
        for c in 0..8 {
            rho[r][c] = d[r] * d[c].conj();
        }
    }
    let bit = sub.bit();
    let mut w = [[Complex64::new(0.0, 0.0); 2]; 2];
    for r in 0..8 {
        for c in 0..8 {
            // the traced qubits must agree
            if (r & !(1 << bit)) == (c & !(1 << bit)) {
                w[(r >> bit) & 1][(c >> bit) & 1] += rho[r][c];
            }
        }
    }
    w
}

/// Separability from purity: `S^2 = 2 tr(W^2) - 1` for unit trace.
fn purity_separability(w: &[[Complex64; 2]; 2]) -> f64 {
    let tr2: f64 = (0..4).map(|k| (w[k / 2][k % 2] * w[k % 2][k / 2]).re).sum();
    (2.0 * tr2 - 1.0).max(0.0).sqrt()
}

fn oracle_triple(s: &ThreeQubitState) -> [f64; 3] {
    Subsystem::ALL.map(|sub| purity_separability(&brute_reduced(s, sub)))
}

fn gaussian_c<R: Rng>(rng: &mut R) -> Complex64 {
    let (a, b) = box_muller(rng);
    Complex64::new(a, b)
}

fn random_unit2<R: Rng>(rng: &mut R) -> [Complex64; 2] {
    let v = [gaussian_c(rng), gaussian_c(rng)];
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    v.map(|z| z / n)
}

/// Ginibre 2x2 `A`, `W = A A^dag / tr`; every 8th sample is rank one.
fn random_matrix<R: Rng>(rng: &mut R, i: usize) -> CoherenceMatrix {
    let mut a = [
        [gaussian_c(rng), gaussian_c(rng)],
        [gaussian_c(rng), gaussian_c(rng)],
    ];
    if i.is_multiple_of(8) {
        let k = Complex64::new(rng.random::<f64>(), rng.random::<f64>());
        a[1] = [a[0][0] * k, a[0][1] * k];
    }
    let mut w = [[Complex64::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            w[r][c] = a[r][0] * a[c][0].conj() + a[r][1] * a[c][1].conj();
        }
    }
    let tr = w[0][0].re + w[1][1].re;
    for row in &mut w {
        for z in row.iter_mut() {
            *z /= tr;
        }
    }
    // Hermitian up to round-off; force exact symmetry
    w[1][0] = w[0][1].conj();
    w[0][0].im = 0.0;
    w[1][1] = Complex64::new(1.0 - w[0][0].re, 0.0);
    CoherenceMatrix::new(w).expect("valid coherence matrix")
}

fn random_beam<R: Rng>(rng: &mut R) -> BeamParameters {
    let [alpha, beta] = random_unit2(rng);
    let gx = random_unit2(rng);
    let gy = random_unit2(rng);
    let fx = random_unit2(rng);
    let fy = random_unit2(rng);
    BeamParameters::new(alpha, beta, gx, gy, fx, fy).expect("valid beam")
}

// ---- criteria ----------------------------------------------------------------

fn table_theory() -> Outcome {
    let start = Instant::now();
    let expected: [(BeamName, [f64; 3], f64); 6] = [
        (BeamName::E1, [1.0, 1.0, 1.0], 0.0),
        (BeamName::E2, [0.0, 0.0, 0.0], 1.0),
        (BeamName::E3, [1.0 / 3.0; 3], 2.0 / 3.0),
        (BeamName::E4, [0.0, 0.0, 1.0], 0.0),
        (BeamName::E5, [0.0, 1.0, 0.0], 0.0),
        (BeamName::E6, [1.0, 0.0, 0.0], 0.0),
    ];
    let mut worst = 0.0f64;
    let mut worst_fid = 0.0f64;
    for (beam, triple, c_t) in expected {
        let s = run_pipeline(&recipe(beam).pipeline).expect("recipe runs");
        let v = separabilities(&s).expect("separabilities");
        let oracle = oracle_triple(&s);
        for k in 0..3 {
            worst = worst
                .max((v.as_array()[k] - triple[k]).abs())
                .max((oracle[k] - triple[k]).abs());
        }
        let c = genuine_coherence(&v).expect("genuine coherence");
        worst = worst
            .max((c - c_t).abs())
            .max((beam.published_c_abc() - c_t).abs());
        worst_fid = worst_fid.max(1.0 - s.fidelity(&published_target(beam)));
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-12 && worst_fid <= 1e-10 && elapsed < Duration::from_secs(1),
        format!(
            "max |dev| = {worst:.2e} (tol 1e-12), max 1-F = {worst_fid:.2e}, {elapsed:.2?} (< 1 s)"
        ),
    )
}

fn constraint_sweep() -> Outcome {
    let start = Instant::now();
    let stats = sweep(100_000, SEED, 1, 20).expect("sweep");
    let elapsed = start.elapsed();
    let pass = stats.violations == 0
        && stats.failures == 0
        && stats.min_slack >= -1e-9
        && stats.min_c_abc >= -1e-9
        && stats.max_c_abc <= 1.0 + 1e-9
        && elapsed < Duration::from_secs(60);
    outcome(
        pass,
        format!(
            "n = 1e5, violations = {}, min slack = {:.3e}, C_abc in [{:.3e}, {:.6}], {elapsed:.2?} (< 60 s, 1 shard)",
            stats.violations, stats.min_slack, stats.min_c_abc, stats.max_c_abc
        ),
    )
}

fn measure_equivalence() -> Outcome {
    let mut rng = stream_rng(SEED, 3);
    let mut routes = 0.0f64;
    for i in 0..10_000 {
        let w = random_matrix(&mut rng, i);
        let d = separability_det(&w).expect("det route").value();
        let e = separability_eig(&w).expect("eig route").value();
        let s = stokes_vector(&w).norm();
        routes = routes
            .max((d - e).abs())
            .max((d - s).abs())
            .max((e - s).abs());
    }
    let mut closed = 0.0f64;
    for _ in 0..10_000 {
        let p = random_beam(&mut rng);
        let cf = closed_form_separabilities(&p).expect("closed form");
        let pt = separabilities(&beam_to_state(&p).expect("beam state")).expect("partial trace");
        closed = closed.max(cf.max_abs_diff(&pt));
    }
    outcome(
        routes <= 1e-12 && closed <= 1e-12,
        format!("det/eig/Stokes max dev = {routes:.2e}, closed vs partial trace = {closed:.2e} (tol 1e-12)"),
    )
}

fn basis_independence() -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..1_000u64 {
        let s = haar_state_at(SEED ^ 4, i);
        let mut rng = stream_rng(SEED ^ 5, i);
        let sub = Subsystem::ALL[(i % 3) as usize];
        let u = haar_unitary(&mut rng);
        let t = apply_local_unitary(&s, sub, &u).expect("local unitary");
        let before = separabilities(&s).expect("before");
        let after = separabilities(&t).expect("after");
        worst = worst.max(before.max_abs_diff(&after));
    }
    outcome(
        worst <= 1e-10,
        format!("1e3 states, max |dS| = {worst:.2e} (tol 1e-10)"),
    )
}

fn appendix_chain() -> Outcome {
    let mut cond = 0.0f64;
    let mut ident = 0.0f64;
    let mut failures = 0usize;
    for i in 0..10_000u64 {
        let r = verify_appendix(&haar_state_at(SEED ^ 6, i), 1e-9);
        cond = cond
            .max(r.normalization_residual)
            .max(r.orthogonality_residual);
        for res in r.eigenvalue_identity_residuals {
            ident = ident.max(res);
        }
        if !r.passed() {
            failures += 1;
        }
    }
    // product across the a cut: single-branch route
    let product = ThreeQubitState::basis(0);
    let r = verify_appendix(&product, 1e-9);
    let degenerate_ok =
        r.degenerate && r.passed() && decompose_in_eigenbases(&product).two_branches().is_err();
    outcome(
        cond <= 1e-10 && ident <= 1e-9 && failures == 0 && degenerate_ok,
        format!(
            "1e4 states: orthonormality residual {cond:.2e} (1e-10), identities {ident:.2e} (1e-9), chain failures {failures}, degenerate branch ok = {degenerate_ok}"
        ),
    )
}

fn tomography_fidelity() -> Outcome {
    let mut recon = 0.0f64;
    let mut worst_rate = 1.0f64;
    let mut notes = vec![];
    for beam in BeamName::ALL {
        let s = run_pipeline(&recipe(beam).pipeline).expect("recipe runs");
        let exact = tomography(&s, &TomographySettings::noiseless()).expect("noiseless");
        for sub in Subsystem::ALL {
            let w = brute_reduced(&s, sub);
            let m = exact.get(sub).matrix;
            for (r, row) in w.iter().enumerate() {
                for (c, z) in row.iter().enumerate() {
                    recon = recon.max((m.get(r, c) - z).norm());
                }
            }
        }
        let truth = separabilities(&s).expect("separabilities");
        let t = TomographySettings {
            shots: 10_000,
            noise: Noise::Poisson,
            seed: SEED ^ 7,
        };
        let trials = repeated_tomography(&s, &t, 500).expect("trials");
        let good = trials
            .iter()
            .filter(|r| r.separabilities().max_abs_diff(&truth) <= 0.05)
            .count();
        let rate = good as f64 / 500.0;
        worst_rate = worst_rate.min(rate);
        notes.push(format!("{beam} {:.1}%", 100.0 * rate));
    }
    let w3 = run_pipeline(&recipe(BeamName::E3).pipeline).expect("E3");
    let scaling =
        shot_noise_scaling(&w3, &[100, 10_000, 1_000_000], 100, SEED ^ 8).expect("scaling");
    let slope_ok = (scaling.slope + 0.5).abs() <= 0.1;
    outcome(
        recon <= 1e-10 && worst_rate >= 0.95 && slope_ok,
        format!(
            "noiseless residual {recon:.2e} (1e-10); |dS| <= 0.05: {} (>= 95%); slope {:.4} (-0.5 +/- 0.1)",
            notes.join(", "),
            scaling.slope
        ),
    )
}

fn geometry_checks() -> Outcome {
    let vol = allowed_volume_mc(1_000_000, SEED ^ 9, 8).expect("volume");
    let vol_ok = (vol.estimate - 0.5).abs() <= 0.003;
    let area = cross_section_area(1.0).expect("area");
    let area_ok = (area - 3f64.sqrt() / 2.0).abs() <= 1e-9;
    let mut rng = stream_rng(SEED ^ 10, 0);
    let mut disagreements = 0usize;
    for _ in 0..100_000 {
        let p: [f64; 3] = [rng.random(), rng.random(), rng.random()];
        let [sa, sb, sc] = p;
        let slack = [
            1.0 - (sb + sc - sa),
            1.0 - (sc + sa - sb),
            1.0 - (sa + sb - sc),
        ];
        let label = classify_point(&CoherenceVector::from(p), BOUNDARY_TOL).expect("label");
        let expected_excluded = [
            RegionLabel::ExcludedBcmd,
            RegionLabel::ExcludedCame,
            RegionLabel::ExcludedAbmf,
        ];
        let ok = match (0..3).find(|&k| slack[k] < -BOUNDARY_TOL) {
            Some(k) => label == expected_excluded[k],
            None if slack.iter().any(|s| s.abs() <= BOUNDARY_TOL) => label == RegionLabel::Boundary,
            None => !label.is_excluded() && label != RegionLabel::Boundary,
        };
        if !ok {
            disagreements += 1;
        }
    }
    outcome(
        vol_ok && area_ok && disagreements == 0,
        format!(
            "MC volume {:.5} +/- {:.5} (0.500 +/- 0.003), area(1) = {area:.12}, classify disagreements {disagreements}/1e5",
            vol.estimate, vol.std_error
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("six-beam theory reproduction", table_theory),
        ("constraint sweep", constraint_sweep),
        ("measure equivalence", measure_equivalence),
        ("basis independence", basis_independence),
        ("proof-chain verification", appendix_chain),
        ("tomography fidelity", tomography_fidelity),
        ("coherence-cube geometry", geometry_checks),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        all &= o.pass;
        println!(
            "{} [{}] {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
