use approx::assert_abs_diff_eq;
use num_complex::Complex64;
use proptest::prelude::*;
use tricoh_core::geometry::{
    classify_point, cross_section_area, region_volume_mc, slacks_unchecked, BOUNDARY_TOL,
};
use tricoh_core::io::{parse_state, state_to_json, StateInput};
use tricoh_core::sampling::sweep;
use tricoh_core::state::gates;
use tricoh_core::tomography::{simulate_projection, PauliAxis, Sign};
use tricoh_core::{
    apply_local_unitary, beam_to_state, closed_form_separabilities, directed_coherences,
    genuine_coherence, make_state, reduced_matrix, separabilities, tomography, verify_appendix,
    BeamParameters, CoherenceVector, Subsystem, ThreeQubitState, TomographySettings,
};

fn amplitudes() -> impl Strategy<Value = [Complex64; 8]> {
    prop::array::uniform8((-1.0f64..1.0, -1.0f64..1.0))
        .prop_map(|a| a.map(|(re, im)| Complex64::new(re, im)))
        .prop_filter("nonzero", |a| {
            a.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-6
        })
}

fn state() -> impl Strategy<Value = ThreeQubitState> {
    amplitudes().prop_map(|a| make_state(a, true).unwrap())
}

fn unit2() -> impl Strategy<Value = [Complex64; 2]> {
    (
        0.0f64..std::f64::consts::FRAC_PI_2,
        -3.2f64..3.2,
        -3.2f64..3.2,
    )
        .prop_map(|(t, p, q)| {
            [
                Complex64::from_polar(t.cos(), p),
                Complex64::from_polar(t.sin(), q),
            ]
        })
}

/// `U = e^{i g} [[a, b], [-conj(b), conj(a)]]` from angles.
fn unitary() -> impl Strategy<Value = [[Complex64; 2]; 2]> {
    (unit2(), -3.2f64..3.2).prop_map(|([a, b], g)| {
        let ph = Complex64::from_polar(1.0, g);
        [[ph * a, ph * b], [-ph * b.conj(), ph * a.conj()]]
    })
}

/// Purity of the two-qubit complement of `a`, from its 4x4 reduced density matrix.
fn complement_purity(s: &ThreeQubitState) -> f64 {
    let d = s.amplitudes();
    let mut rho = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (r, row) in rho.iter_mut().enumerate() {
        for (c, z) in row.iter_mut().enumerate() {
            *z = d[r] * d[c].conj() + d[4 + r] * d[4 + c].conj();
        }
    }
    (0..16)
        .map(|k| (rho[k / 4][k % 4] * rho[k % 4][k / 4]).re)
        .sum()
}

/// Relabels qubits so that new (a, b, c) = old (b, c, a).
fn rotate_qubits(s: &ThreeQubitState) -> ThreeQubitState {
    let d = s.amplitudes();
    let mut out = [Complex64::new(0.0, 0.0); 8];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                out[4 * j + 2 * k + i] = d[4 * i + 2 * j + k];
            }
        }
    }
    make_state(out, false).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn separabilities_obey_constraints(s in state()) {
        let v = separabilities(&s).unwrap();
        for x in v.as_array() {
            prop_assert!((0.0..=1.0).contains(&x));
        }
        prop_assert!(slacks_unchecked(&v).min() >= -1e-9);
        let c = genuine_coherence(&v).unwrap();
        prop_assert!((-1e-9..=1.0 + 1e-9).contains(&c));
        let d = directed_coherences(&v).unwrap();
        prop_assert!((d.min() - c).abs() < 1e-15);
    }

    #[test]
    fn schmidt_partner_has_same_purity(s in state()) {
        // both sides of the a|bc cut share their nonzero spectrum
        let sa = separabilities(&s).unwrap().sa;
        assert_abs_diff_eq!(sa * sa, 2.0 * complement_purity(&s) - 1.0, epsilon = 1e-12);
    }

    #[test]
    fn relabeling_permutes_triple(s in state()) {
        let v = separabilities(&s).unwrap();
        let r = separabilities(&rotate_qubits(&s)).unwrap();
        assert_abs_diff_eq!(r.sa, v.sb, epsilon = 1e-12);
        assert_abs_diff_eq!(r.sb, v.sc, epsilon = 1e-12);
        assert_abs_diff_eq!(r.sc, v.sa, epsilon = 1e-12);
    }

    #[test]
    fn local_unitaries_leave_triple(s in state(), u in unitary(), k in 0usize..3) {
        let t = apply_local_unitary(&s, Subsystem::ALL[k], &u).unwrap();
        let v = separabilities(&s).unwrap();
        prop_assert!(v.max_abs_diff(&separabilities(&t).unwrap()) < 1e-10);
    }

    #[test]
    fn closed_form_matches_partial_trace(
        ab in unit2(), gx in unit2(), gy in unit2(), fx in unit2(), fy in unit2()
    ) {
        let p = BeamParameters::new(ab[0], ab[1], gx, gy, fx, fy).unwrap();
        let cf = closed_form_separabilities(&p).unwrap();
        let pt = separabilities(&beam_to_state(&p).unwrap()).unwrap();
        prop_assert!(cf.max_abs_diff(&pt) < 1e-12);
    }

    #[test]
    fn proof_chain_holds(s in state()) {
        let r = verify_appendix(&s, 1e-9);
        prop_assert!(r.passed(), "{:?}", r.checks.first_failure());
    }

    #[test]
    fn projections_are_complete(s in state(), k in 0usize..3) {
        let sub = Subsystem::ALL[k];
        for axis in PauliAxis::ALL {
            let p = simulate_projection(&s, sub, axis, Sign::Plus)
                + simulate_projection(&s, sub, axis, Sign::Minus);
            assert_abs_diff_eq!(p, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn noiseless_tomography_is_exact(s in state()) {
        let r = tomography(&s, &TomographySettings::noiseless()).unwrap();
        for sub in Subsystem::ALL {
            prop_assert!(r.get(sub).matrix.max_abs_diff(&reduced_matrix(&s, sub)) < 1e-10);
        }
    }

    #[test]
    fn state_file_round_trip(s in state()) {
        let StateInput::State(back) = parse_state(&state_to_json(&s)).unwrap() else {
            panic!("state file parsed as beam");
        };
        prop_assert!(back.fidelity(&s) > 1.0 - 1e-14);
        for (a, b) in back.amplitudes().iter().zip(s.amplitudes()) {
            prop_assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn labels_follow_slack_signs(x in 0.0f64..=1.0, y in 0.0f64..=1.0, z in 0.0f64..=1.0) {
        let v = CoherenceVector::new(x, y, z);
        let label = classify_point(&v, BOUNDARY_TOL).unwrap();
        let excluded = slacks_unchecked(&v).min() < -BOUNDARY_TOL;
        prop_assert_eq!(label.is_excluded(), excluded);
    }
}

#[test]
fn hadamard_on_ghz_keeps_triple() {
    let s = ThreeQubitState::ghz();
    let t = apply_local_unitary(&s, Subsystem::B, &gates::hadamard()).unwrap();
    assert!(
        separabilities(&t)
            .unwrap()
            .max_abs_diff(&CoherenceVector::new(0.0, 0.0, 0.0))
            < 1e-12
    );
}

/// Composite Simpson rule.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

#[test]
fn slice_areas_integrate_to_half() {
    // slices of constant total are sqrt(3) apart per unit of total
    let density = |t: f64| cross_section_area(t).unwrap() / 3f64.sqrt();
    let v = simpson(density, 0.0, 1.0, 1000) + simpson(density, 1.0, 3.0, 1000);
    assert_abs_diff_eq!(v, 0.5, epsilon = 1e-12);
}

#[test]
fn slice_volumes_match_sampling() {
    // fraction of the cube that is allowed and has total <= t, two ways
    use rand::Rng;
    let n = 400_000;
    let mut rng = tricoh_core::rng::stream_rng(11, 0);
    let pts: Vec<[f64; 3]> = (0..n)
        .map(|_| [rng.random(), rng.random(), rng.random()])
        .collect();
    let density = |t: f64| cross_section_area(t).unwrap() / 3f64.sqrt();
    for t in [0.5, 1.5, 2.5] {
        let analytic = if t <= 1.0 {
            simpson(density, 0.0, t, 1000)
        } else {
            simpson(density, 0.0, 1.0, 1000) + simpson(density, 1.0, t, 1000)
        };
        let hits = pts
            .iter()
            .filter(|p| {
                let v = CoherenceVector::from(**p);
                v.total() <= t && slacks_unchecked(&v).min() >= 0.0
            })
            .count();
        let est = hits as f64 / n as f64;
        let sigma = (analytic * (1.0 - analytic) / n as f64).sqrt();
        assert!(
            (est - analytic).abs() < 5.0 * sigma,
            "t = {t}: {est} vs {analytic}"
        );
    }
}

#[test]
fn shard_count_does_not_change_results() {
    let a = sweep(3000, 5, 1, 10).unwrap();
    let b = sweep(3000, 5, 7, 10).unwrap();
    assert_eq!(
        (a.violations, a.min_slack, a.max_c_abc),
        (b.violations, b.min_slack, b.max_c_abc)
    );
    assert_eq!(a.histogram, b.histogram);
    assert_eq!(a.histogram.counts.iter().sum::<u64>(), 3000);
    let v1 = region_volume_mc(50_000, 3, 1, 0.0).unwrap();
    let v2 = region_volume_mc(50_000, 3, 5, 0.0).unwrap();
    assert_eq!(v1.estimate, v2.estimate);
    assert_eq!(v2.shards, 5);
}
