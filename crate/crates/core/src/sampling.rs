//! Haar-random states and constructive verification of the constraint proof.
//!
//! The proof of `1 + S_a >= S_b + S_c` expands the state in the product of
//! the eigenbases of `W_a`, `W_b` and `W_c`:
//!
//! ```text
//! |psi> = sqrt(l1a) |a1> (x1 |b1 c1> + x2 |b1 c2> + x3 |b2 c1> + x4 |b2 c2>)
//!       + sqrt(l2a) |a2> (y1 |b1 c1> + y2 |b1 c2> + y3 |b2 c1> + y4 |b2 c2>)
//! ```
//!
//! [`verify_appendix`] recomputes every intermediate quantity of that
//! argument for a concrete state so a failure points at the broken step.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coherence::{separabilities, CoherenceVector};
use crate::error::{Error, Result};
use crate::geometry::{directed_unchecked, slacks_unchecked};
use crate::rng::{box_muller, shard_ranges, stream_rng};
use crate::state::{
    make_state, reduced_matrix, CoherenceMatrix, Matrix2, Subsystem, ThreeQubitState,
};

/// Eigenvalues at or below this mark a product across the cut.
pub const LAMBDA_EPS: f64 = 1e-12;
/// A reduced matrix with `(l1 - l2)/2` below this is treated as `I/2`.
pub const DEGENERATE_GAP: f64 = 1e-14;
/// Slack below `-VIOLATION_TOL` counts as a violated constraint.
pub const VIOLATION_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Draws a Haar-random state from `rng`: eight independent standard complex
/// Gaussians, normalized.
pub fn haar_state<R: Rng + ?Sized>(rng: &mut R) -> ThreeQubitState {
    loop {
        let amps: [Complex64; 8] = std::array::from_fn(|_| {
            let (re, im) = box_muller(rng);
            Complex64::new(re, im)
        });
        // a zero-norm draw has probability zero; retry rather than fail
        if let Ok(s) = make_state(amps, true) {
            return s;
        }
    }
}

/// Haar-random state number `index` of the sequence seeded by `seed`.
pub fn haar_state_at(seed: u64, index: u64) -> ThreeQubitState {
    haar_state(&mut stream_rng(seed, index))
}

/// Haar-random state for `seed`; identical to the first state of a sweep
/// with the same seed.
pub fn haar_random_state(seed: u64) -> ThreeQubitState {
    haar_state_at(seed, 0)
}

/// Ordered eigenvalues and orthonormal eigenvectors of one coherence matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenDecomposition {
    /// `[l1, l2]`, `l1 >= l2`.
    pub eigenvalues: [f64; 2],
    /// `vectors[i]` is the eigenvector of `eigenvalues[i]`, with its first
    /// nonzero component real and positive.
    pub vectors: [[Complex64; 2]; 2],
}

fn fix_phase(v: [Complex64; 2]) -> [Complex64; 2] {
    let pivot = if v[0].norm() > 1e-15 { v[0] } else { v[1] };
    let phase = pivot.conj() / pivot.norm();
    [v[0] * phase, v[1] * phase]
}

fn normalized(v: [Complex64; 2]) -> [Complex64; 2] {
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / n, v[1] / n]
}

impl EigenDecomposition {
    pub fn of(w: &CoherenceMatrix) -> Self {
        let eigenvalues = w.eigenvalues();
        let e = w.entries();
        let first = if w.half_gap() <= DEGENERATE_GAP {
            [Complex64::new(1.0, 0.0), ZERO]
        } else {
            let l1 = eigenvalues[0];
            let q = 0.5 * (e[0][1] + e[1][0].conj());
            // two null vectors of (W - l1); keep the better conditioned one
            let u = [q, Complex64::new(l1 - e[0][0].re, 0.0)];
            let v = [Complex64::new(l1 - e[1][1].re, 0.0), q.conj()];
            let n_u = u[0].norm_sqr() + u[1].norm_sqr();
            let n_v = v[0].norm_sqr() + v[1].norm_sqr();
            normalized(if n_u >= n_v { u } else { v })
        };
        let first = fix_phase(first);
        let second = fix_phase([-first[1].conj(), first[0].conj()]);
        EigenDecomposition {
            eigenvalues,
            vectors: [first, second],
        }
    }

    /// `max_i |W phi_i - l_i phi_i|` together with `|<phi1|phi2>|`.
    pub fn residuals(&self, w: &CoherenceMatrix) -> (f64, f64) {
        let e = w.entries();
        let mut eig_res: f64 = 0.0;
        for (lambda, v) in self.eigenvalues.iter().zip(self.vectors.iter()) {
            for m in 0..2 {
                let wv = e[m][0] * v[0] + e[m][1] * v[1];
                eig_res = eig_res.max((wv - *lambda * v[m]).norm());
            }
        }
        let [p, q] = self.vectors;
        let overlap = (p[0].conj() * q[0] + p[1].conj() * q[1]).norm();
        (eig_res, overlap)
    }

    /// Separability `l1 - l2` (unit trace).
    pub fn separability(&self) -> f64 {
        self.eigenvalues[0] - self.eigenvalues[1]
    }
}

/// Expansion coefficients of the state in the product eigenbasis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AppendixCoefficients {
    /// `x_1..x_4`, first `a`-branch scaled by `1/sqrt(l1a)`.
    pub x: [Complex64; 4],
    /// `y_1..y_4`; `None` when `l2a <= LAMBDA_EPS` (single-branch state).
    pub y: Option<[Complex64; 4]>,
}

/// The state written in the eigenbases of its three coherence matrices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenbasisExpansion {
    /// Indexed by [`Subsystem::index`].
    pub eigen: [EigenDecomposition; 3],
    pub coefficients: AppendixCoefficients,
    /// Unscaled amplitudes `<a_m b_j c_k|psi>`, `[m][2j + k]`.
    pub branch_amplitudes: [[Complex64; 4]; 2],
}

impl EigenbasisExpansion {
    pub fn lambda_a(&self) -> [f64; 2] {
        self.eigen[0].eigenvalues
    }

    /// True when the state factorizes across the `a | bc` cut.
    pub fn is_degenerate(&self) -> bool {
        self.coefficients.y.is_none()
    }

    /// Both branch coefficient vectors, or `DegenerateBranch` for a product
    /// across the `a` cut.
    pub fn two_branches(&self) -> Result<([Complex64; 4], [Complex64; 4])> {
        match self.coefficients.y {
            Some(y) => Ok((self.coefficients.x, y)),
            None => Err(Error::DegenerateBranch {
                sub: Subsystem::A,
                lambda: self.lambda_a()[1],
            }),
        }
    }

    /// Rebuilds the eight computational-basis amplitudes.
    pub fn reconstruct(&self) -> [Complex64; 8] {
        let [ea, eb, ec] = &self.eigen;
        let mut out = [ZERO; 8];
        for (m, branch) in self.branch_amplitudes.iter().enumerate() {
            for j in 0..2 {
                for k in 0..2 {
                    let coef = branch[2 * j + k];
                    for (idx, slot) in out.iter_mut().enumerate() {
                        let (i, p, q) = ((idx >> 2) & 1, (idx >> 1) & 1, idx & 1);
                        *slot += coef * ea.vectors[m][i] * eb.vectors[j][p] * ec.vectors[k][q];
                    }
                }
            }
        }
        out
    }
}

/// Expands `s` in the product of the eigenbases of `W_a`, `W_b`, `W_c`.
///
/// When `l2a <= LAMBDA_EPS` the second branch is reported as absent
/// (`coefficients.y == None`); [`EigenbasisExpansion::two_branches`] then
/// returns [`Error::DegenerateBranch`].
pub fn decompose_in_eigenbases(s: &ThreeQubitState) -> EigenbasisExpansion {
    let eigen = Subsystem::ALL.map(|sub| EigenDecomposition::of(&reduced_matrix(s, sub)));
    let [ea, eb, ec] = &eigen;
    let d = s.amplitudes();
    let mut branch_amplitudes = [[ZERO; 4]; 2];
    for (m, branch) in branch_amplitudes.iter_mut().enumerate() {
        for j in 0..2 {
            for k in 0..2 {
                let mut acc = ZERO;
                for (idx, amp) in d.iter().enumerate() {
                    let (i, p, q) = ((idx >> 2) & 1, (idx >> 1) & 1, idx & 1);
                    acc += (ea.vectors[m][i] * eb.vectors[j][p] * ec.vectors[k][q]).conj() * amp;
                }
                branch[2 * j + k] = acc;
            }
        }
    }
    let [l1a, l2a] = ea.eigenvalues;
    let scale = |branch: &[Complex64; 4], lambda: f64| branch.map(|c| c / lambda.sqrt());
    let x = scale(&branch_amplitudes[0], l1a);
    let y = (l2a > LAMBDA_EPS).then(|| scale(&branch_amplitudes[1], l2a));
    EigenbasisExpansion {
        eigen,
        coefficients: AppendixCoefficients { x, y },
        branch_amplitudes,
    }
}

/// Pass/fail flags of [`ProofReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofChecks {
    pub eigenvectors: bool,
    pub reconstruction: bool,
    pub normalization: bool,
    pub orthogonality: bool,
    pub eigenvalue_identities: bool,
    pub sum_identity: bool,
    pub first_bound: bool,
    pub second_bound: bool,
    pub overlap_bound: bool,
    pub final_bound: bool,
    pub all_constraints: bool,
}

impl ProofChecks {
    pub fn all(&self) -> bool {
        self.eigenvectors
            && self.reconstruction
            && self.normalization
            && self.orthogonality
            && self.eigenvalue_identities
            && self.sum_identity
            && self.first_bound
            && self.second_bound
            && self.overlap_bound
            && self.final_bound
            && self.all_constraints
    }

    /// Name of the first failing step, in proof order.
    pub fn first_failure(&self) -> Option<&'static str> {
        [
            (self.eigenvectors, "eigenvectors"),
            (self.reconstruction, "reconstruction"),
            (self.normalization, "normalization"),
            (self.orthogonality, "orthogonality"),
            (self.eigenvalue_identities, "eigenvalue_identities"),
            (self.sum_identity, "sum_identity"),
            (self.first_bound, "first_bound"),
            (self.second_bound, "second_bound"),
            (self.overlap_bound, "overlap_bound"),
            (self.final_bound, "final_bound"),
            (self.all_constraints, "all_constraints"),
        ]
        .into_iter()
        .find_map(|(ok, name)| (!ok).then_some(name))
    }
}

/// Every intermediate quantity of the `1 + S_a >= S_b + S_c` argument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProofReport {
    pub tol: f64,
    pub degenerate: bool,
    pub lambda_a: [f64; 2],
    pub lambda_b: [f64; 2],
    pub lambda_c: [f64; 2],
    pub eigenvector_residual: f64,
    pub reconstruction_residual: f64,
    /// `max(|sum |x|^2 - 1|, |sum |y|^2 - 1|)`.
    pub normalization_residual: f64,
    /// `|sum x_j conj(y_j)|`.
    pub orthogonality_residual: f64,
    /// Residuals of `l1b`, `l2b`, `l1c`, `l2c` against their coefficient sums.
    pub eigenvalue_identity_residuals: [f64; 4],
    /// `S_b + S_c` from the eigenvalues.
    pub sum_bc: f64,
    /// `2 - 2 l1a (|x2|^2 + |x3|^2 + 2|x4|^2) - 2 l2a (|y2|^2 + |y3|^2 + 2|y4|^2)`.
    pub sum_identity: f64,
    /// `2 - 2 l1a sum_{2..4} |x|^2 - 2 l2a sum_{2..4} |y|^2`.
    pub first_bound: f64,
    /// `2 - 2 l2a sum_{2..4} (|x|^2 + |y|^2)`.
    pub second_bound: f64,
    /// `|x1|^2 + |y1|^2`, at most 1.
    pub overlap: f64,
    /// `2 - 2 l2a`.
    pub final_bound: f64,
    /// `1 + S_a`.
    pub one_plus_sa: f64,
    /// The three constraint slacks of the state.
    pub slacks: [f64; 3],
    pub checks: ProofChecks,
}

impl ProofReport {
    pub fn passed(&self) -> bool {
        self.checks.all()
    }
}

/// Recomputes the constraint proof for `s`, flagging each step against `tol`.
pub fn verify_appendix(s: &ThreeQubitState, tol: f64) -> ProofReport {
    let exp = decompose_in_eigenbases(s);
    let [ea, eb, ec] = &exp.eigen;
    let [l1a, l2a] = ea.eigenvalues;

    let eigenvector_residual = Subsystem::ALL
        .iter()
        .map(|&sub| {
            let (r, o) = exp.eigen[sub.index()].residuals(&reduced_matrix(s, sub));
            r.max(o)
        })
        .fold(0.0, f64::max);

    let recon = exp.reconstruct();
    let reconstruction_residual = recon
        .iter()
        .zip(s.amplitudes())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);

    let x = exp.coefficients.x;
    let x2: [f64; 4] = x.map(|c| c.norm_sqr());
    let y2: [f64; 4] = exp
        .coefficients
        .y
        .map_or([0.0; 4], |y| y.map(|c| c.norm_sqr()));
    let norm_x = (x2.iter().sum::<f64>() - 1.0).abs();
    let (norm_y, orthogonality_residual) = match exp.coefficients.y {
        Some(y) => (
            (y2.iter().sum::<f64>() - 1.0).abs(),
            x.iter()
                .zip(y.iter())
                .map(|(a, b)| a * b.conj())
                .sum::<Complex64>()
                .norm(),
        ),
        None => (0.0, 0.0),
    };
    let normalization_residual = norm_x.max(norm_y);

    // weight of |b_j c_k> summed over both a-branches, index 2j + k
    let weight: [f64; 4] = std::array::from_fn(|j| l1a * x2[j] + l2a * y2[j]);
    let predicted = [
        weight[0] + weight[1],
        weight[2] + weight[3],
        weight[0] + weight[2],
        weight[1] + weight[3],
    ];
    let actual = [
        eb.eigenvalues[0],
        eb.eigenvalues[1],
        ec.eigenvalues[0],
        ec.eigenvalues[1],
    ];
    let eigenvalue_identity_residuals: [f64; 4] =
        std::array::from_fn(|k| (predicted[k] - actual[k]).abs());

    let sum_bc = eb.separability() + ec.separability();
    let sum_identity =
        2.0 - 2.0 * l1a * (x2[1] + x2[2] + 2.0 * x2[3]) - 2.0 * l2a * (y2[1] + y2[2] + 2.0 * y2[3]);
    let tail_x = x2[1] + x2[2] + x2[3];
    let tail_y = y2[1] + y2[2] + y2[3];
    let first_bound = 2.0 - 2.0 * l1a * tail_x - 2.0 * l2a * tail_y;
    let second_bound = 2.0 - 2.0 * l2a * (tail_x + tail_y);
    let overlap = x2[0] + y2[0];
    let final_bound = 2.0 - 2.0 * l2a;
    let one_plus_sa = 1.0 + ea.separability();

    let slacks = match separabilities(s) {
        Ok(v) => slacks_unchecked(&v).as_array(),
        Err(_) => [f64::NAN; 3],
    };

    let checks = ProofChecks {
        eigenvectors: eigenvector_residual <= tol,
        reconstruction: reconstruction_residual <= tol,
        normalization: normalization_residual <= tol,
        orthogonality: orthogonality_residual <= tol,
        eigenvalue_identities: eigenvalue_identity_residuals.iter().all(|r| *r <= tol),
        sum_identity: (sum_bc - sum_identity).abs() <= tol,
        first_bound: sum_identity <= first_bound + tol,
        second_bound: first_bound <= second_bound + tol,
        overlap_bound: overlap <= 1.0 + tol && second_bound <= final_bound + tol,
        final_bound: sum_bc <= one_plus_sa + tol && (final_bound - one_plus_sa).abs() <= tol,
        all_constraints: slacks.iter().all(|s| *s >= -tol),
    };

    ProofReport {
        tol,
        degenerate: exp.is_degenerate(),
        lambda_a: ea.eigenvalues,
        lambda_b: eb.eigenvalues,
        lambda_c: ec.eigenvalues,
        eigenvector_residual,
        reconstruction_residual,
        normalization_residual,
        orthogonality_residual,
        eigenvalue_identity_residuals,
        sum_bc,
        sum_identity,
        first_bound,
        second_bound,
        overlap,
        final_bound,
        one_plus_sa,
        slacks,
        checks,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    pub bins: usize,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn new(bins: usize) -> Self {
        Histogram {
            bins,
            counts: vec![0; bins],
        }
    }

    /// Adds a value from `[0, 1]`; out-of-range values land in the edge bins.
    pub fn add(&mut self, value: f64) {
        let idx = (value * self.bins as f64).floor();
        let idx = if idx.is_nan() {
            0
        } else {
            idx.clamp(0.0, (self.bins - 1) as f64) as usize
        };
        self.counts[idx] += 1;
    }

    fn merge(&mut self, other: &Histogram) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }
}

/// Aggregate results of a Haar-random sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepStatistics {
    pub n: u64,
    pub seed: u64,
    pub shards: usize,
    /// States with some slack below `-VIOLATION_TOL`.
    pub violations: u64,
    pub min_slack: f64,
    pub max_c_abc: f64,
    pub min_c_abc: f64,
    /// Componentwise minima of `(S_a, S_b, S_c)`.
    pub s_min: [f64; 3],
    /// Componentwise maxima of `(S_a, S_b, S_c)`.
    pub s_max: [f64; 3],
    /// Genuine coherence histogram over `[0, 1]`.
    pub histogram: Histogram,
    /// States whose separabilities could not be evaluated.
    pub failures: u64,
}

impl SweepStatistics {
    fn empty(n: u64, seed: u64, shards: usize, bins: usize) -> Self {
        SweepStatistics {
            n,
            seed,
            shards,
            violations: 0,
            min_slack: f64::INFINITY,
            max_c_abc: f64::NEG_INFINITY,
            min_c_abc: f64::INFINITY,
            s_min: [f64::INFINITY; 3],
            s_max: [f64::NEG_INFINITY; 3],
            histogram: Histogram::new(bins),
            failures: 0,
        }
    }

    fn record(&mut self, v: &CoherenceVector) {
        let slack = slacks_unchecked(v).min();
        let c = directed_unchecked(v).min();
        if slack < -VIOLATION_TOL {
            self.violations += 1;
        }
        self.min_slack = self.min_slack.min(slack);
        self.max_c_abc = self.max_c_abc.max(c);
        self.min_c_abc = self.min_c_abc.min(c);
        for (k, s) in v.as_array().into_iter().enumerate() {
            self.s_min[k] = self.s_min[k].min(s);
            self.s_max[k] = self.s_max[k].max(s);
        }
        self.histogram.add(c);
    }

    fn merge(mut self, other: SweepStatistics) -> Self {
        self.violations += other.violations;
        self.failures += other.failures;
        self.min_slack = self.min_slack.min(other.min_slack);
        self.max_c_abc = self.max_c_abc.max(other.max_c_abc);
        self.min_c_abc = self.min_c_abc.min(other.min_c_abc);
        for k in 0..3 {
            self.s_min[k] = self.s_min[k].min(other.s_min[k]);
            self.s_max[k] = self.s_max[k].max(other.s_max[k]);
        }
        self.histogram.merge(&other.histogram);
        self
    }
}

/// Evaluates the constraints on `n` Haar-random states.
///
/// State `i` comes from stream `i` of `seed`, so the statistics depend only
/// on `(n, seed)`; `shards` controls parallelism and is recorded.
pub fn sweep(n: u64, seed: u64, shards: usize, bins: usize) -> Result<SweepStatistics> {
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "sweep size",
            value: 0.0,
            min: 1.0,
            max: f64::INFINITY,
        });
    }
    if bins == 0 {
        return Err(Error::OutOfRange {
            what: "histogram bins",
            value: 0.0,
            min: 1.0,
            max: f64::INFINITY,
        });
    }
    let shards = shards.max(1);
    let stats = shard_ranges(n, shards)
        .into_par_iter()
        .map(|range| {
            let mut part = SweepStatistics::empty(n, seed, shards, bins);
            for i in range {
                match separabilities(&haar_state_at(seed, i)) {
                    Ok(v) => part.record(&v),
                    Err(_) => part.failures += 1,
                }
            }
            part
        })
        .reduce(
            || SweepStatistics::empty(n, seed, shards, bins),
            SweepStatistics::merge,
        );
    Ok(stats)
}

/// Haar-random 2x2 unitary (QR of a complex Ginibre matrix, phase-fixed).
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R) -> Matrix2 {
    let mut col = || {
        let (a, b) = box_muller(rng);
        let (c, d) = box_muller(rng);
        [Complex64::new(a, b), Complex64::new(c, d)]
    };
    let c0 = normalized(col());
    let raw = col();
    // Gram-Schmidt the second column against the first
    let proj = c0[0].conj() * raw[0] + c0[1].conj() * raw[1];
    let c1 = normalized([raw[0] - proj * c0[0], raw[1] - proj * c0[1]]);
    [[c0[0], c1[0]], [c0[1], c1[1]]]
}
