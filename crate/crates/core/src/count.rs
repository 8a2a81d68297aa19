//! Amplitude estimation and quantum counting by phase estimation on the
//! amplification operator G.
//!
//! G has eigenvalues e^{±i2θ} on the plane spanned by the good and bad
//! parts of U|0⟩, so phase estimation with `t` ancilla qubits returns a code
//! y near `2^t·θ/π` or its mirror `2^t − 2^t·θ/π`, and θ̃ = π·y/2^t.
//!
//! Two paths produce the code. [`phase_estimate_full`] simulates the whole
//! `n + t` qubit register. [`phase_estimate_fast`] uses the fact that U|0⟩
//! splits evenly over the two eigenvectors: it picks a branch with
//! probability 1/2 and samples y from the closed-form single-eigenvector
//! distribution (a Fejér kernel), which works up to `t = 30`.

use std::f64::consts::PI;

use rand::Rng;
use serde::Serialize;

use crate::amplify::{Amplifier, DEGENERATE_P};
use crate::analytic::RotationModel;
use crate::error::{Error, Result};
use crate::search::{search_known, search_unknown, SearchOutcome, SearchParams};
use crate::sv::{OracleSpec, StateVector};
use crate::MAX_QUBITS;

/// Largest precision register accepted by the fast path.
pub const MAX_FAST_PRECISION: u32 = 30;

/// Half-width of the explicitly enumerated window around the phase; the
/// remaining tail is sampled by rejection. Registers with at most twice
/// this many codes are enumerated outright.
const SAMPLE_WINDOW: u64 = 1 << 12;
const MAX_REJECTIONS: u32 = 1 << 24;

/// Retries of [`search_via_counting`] with one more precision qubit each.
pub const COUNT_ESCALATIONS: u32 = 3;

/// Which simulation backs a phase estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CountPath {
    /// Full `n + t` qubit state vector.
    Full,
    /// Two-branch closed-form sampler.
    #[default]
    Fast,
}

/// Outcome of one phase-estimation run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PhaseEstimate {
    pub t: u32,
    pub y: u64,
    /// π·y/2^t.
    pub theta_tilde: f64,
    /// sin²(θ̃); identical for y and 2^t − y.
    pub alpha_tilde: f64,
    /// N·α̃ when estimating a count.
    pub a_tilde: Option<f64>,
}

impl PhaseEstimate {
    /// Decodes code `y` of a `t`-qubit register.
    pub fn decode(t: u32, y: u64) -> Self {
        let codes = 1u64 << t;
        let folded = y.min(codes - y);
        Self {
            t,
            y,
            theta_tilde: PI * y as f64 / codes as f64,
            alpha_tilde: folded_sin_sqr(folded, codes),
            a_tilde: None,
        }
    }

    /// Decodes and attaches the count estimate for a domain of `size` items.
    pub fn decode_count(t: u32, y: u64, size: u64) -> Self {
        let mut est = Self::decode(t, y);
        est.a_tilde = Some(size as f64 * est.alpha_tilde);
        est
    }

    /// â: nearest integer to ã, ties toward the smaller count, at least 1.
    pub fn rounded_count(&self) -> Option<u64> {
        self.a_tilde.map(|a| ((a - 0.5).ceil().max(1.0)) as u64)
    }
}

/// sin²(π·y/T) for 0 ≤ y ≤ T/2. Near 0 the sine is used directly; above
/// that ½ − ½·sin(π(T − 4y)/(2T)) has an exact integer argument, which
/// keeps dyadic cases such as π/4 exact.
fn folded_sin_sqr(y: u64, codes: u64) -> f64 {
    if 8 * y < codes {
        let s = (PI * y as f64 / codes as f64).sin();
        s * s
    } else {
        let offset = codes as i64 - 4 * y as i64;
        0.5 - 0.5 * (PI * offset as f64 / (2 * codes) as f64).sin()
    }
}

fn check_precision(t: u32, limit: u32) -> Result<()> {
    if t == 0 || t > limit {
        return Err(Error::ParameterDomain(format!(
            "precision qubits {t} not in 1..={limit}"
        )));
    }
    Ok(())
}

fn check_nondegenerate(amp: &Amplifier) -> Result<()> {
    let p = amp.success_probability();
    if !(DEGENERATE_P..=1.0 - DEGENERATE_P).contains(&p) {
        return Err(Error::DegenerateAngle("success probability is 0 or 1"));
    }
    Ok(())
}

/// Simulates the phase-estimation register and returns it before
/// measurement. Target on the low `n` qubits, ancillas on `n..n+t`.
fn run_full_circuit(amp: &Amplifier, t: u32) -> Result<StateVector> {
    let n = amp.qubits();
    check_precision(t, MAX_QUBITS)?;
    if n + t > MAX_QUBITS {
        return Err(Error::SizeLimit {
            requested: n + t,
            limit: MAX_QUBITS,
        });
    }
    let mut state = StateVector::zero(n + t)?;
    state.amplitudes_mut()[..1 << n].copy_from_slice(amp.prepared().amplitudes());
    state.apply_hadamard_layer(n, t)?;
    for j in 0..t {
        state.apply_controlled_power(amp, n + j, j)?;
    }
    state.inverse_qft(n, t)?;
    Ok(state)
}

/// Exact distribution of the ancilla code from the full circuit. Charges
/// the `2^t − 1` applications of G to the amplifier like a real run.
pub fn full_distribution(amp: &Amplifier, t: u32) -> Result<Vec<f64>> {
    let state = run_full_circuit(amp, t)?;
    Ok(state
        .amplitudes()
        .chunks(1 << amp.qubits())
        .map(|block| block.iter().map(|a| a.norm_sqr()).sum())
        .collect())
}

/// Phase estimation on the full `n + t` qubit register (`n + t ≤ 24`).
pub fn phase_estimate_full<R: Rng + ?Sized>(amp: &Amplifier, t: u32, rng: &mut R) -> Result<PhaseEstimate> {
    check_nondegenerate(amp)?;
    let state = run_full_circuit(amp, t)?;
    let idx = state.measure(rng)?;
    Ok(PhaseEstimate::decode(t, idx >> amp.qubits()))
}

/// Phase estimation through the two-branch sampler (`t ≤ 30`). The
/// `2^t − 1` applications of G are charged to the amplifier's counters.
pub fn phase_estimate_fast<R: Rng + ?Sized>(amp: &Amplifier, t: u32, rng: &mut R) -> Result<PhaseEstimate> {
    check_nondegenerate(amp)?;
    check_precision(t, MAX_FAST_PRECISION)?;
    let y = sample_code(amp.theta(), t, rng);
    amp.record_iterations((1u64 << t) - 1);
    Ok(PhaseEstimate::decode(t, y))
}

/// The phase positions `2^t·θ/π` and its mirror, in [0, 2^t).
fn branch_positions(theta: f64, codes: u64) -> [f64; 2] {
    let size = codes as f64;
    let plus = size * theta / PI;
    let minus = size - plus;
    [plus, if minus >= size { 0.0 } else { minus }]
}

/// Pr[y] for one eigenvector whose scaled phase is `x`:
/// sin²(π(x − y))/(T² sin²(π(x − y)/T)). The numerator uses the distance
/// of `x` to its nearest integer, which is exact where it matters.
fn fejer(x: f64, y: f64, size: f64) -> f64 {
    let u = x - y;
    if u == 0.0 {
        return 1.0;
    }
    let c = x - x.round();
    let num = (PI * c).sin();
    let den = size * (PI * u / size).sin();
    (num * num) / (den * den)
}

/// Exact output distribution of phase estimation started from U|0⟩:
/// the average of the two single-eigenvector kernels. Limited to `t ≤ 24`.
pub fn fast_distribution(theta: f64, t: u32) -> Result<Vec<f64>> {
    check_precision(t, MAX_QUBITS)?;
    let codes = 1u64 << t;
    let size = codes as f64;
    let [plus, minus] = branch_positions(theta, codes);
    Ok((0..codes)
        .map(|y| 0.5 * (fejer(plus, y as f64, size) + fejer(minus, y as f64, size)))
        .collect())
}

/// Probability mass on codes within circular distance 1 of either phase
/// position.
pub fn concentration(dist: &[f64], theta: f64) -> f64 {
    let codes = dist.len() as u64;
    let size = codes as f64;
    let positions = branch_positions(theta, codes);
    let near = |y: u64| {
        positions.iter().any(|&x| {
            let d = (y as f64 - x).abs();
            d.min(size - d) <= 1.0
        })
    };
    (0..codes).filter(|&y| near(y)).map(|y| dist[y as usize]).sum()
}

fn sample_code<R: Rng + ?Sized>(theta: f64, t: u32, rng: &mut R) -> u64 {
    let codes = 1u64 << t;
    let [plus, minus] = branch_positions(theta, codes);
    let x = if rng.random::<bool>() { plus } else { minus };
    sample_branch(x, codes, SAMPLE_WINDOW, rng)
}

/// Draws y from the single-eigenvector kernel centred at `x`.
fn sample_branch<R: Rng + ?Sized>(x: f64, codes: u64, window: u64, rng: &mut R) -> u64 {
    let size = codes as f64;
    let base = x.floor() as i64;
    let wrap = |d: i64| (base + d).rem_euclid(codes as i64) as u64;
    if codes <= 2 * window {
        let probs: Vec<f64> = (0..codes).map(|y| fejer(x, y as f64, size)).collect();
        return inverse_cdf(&probs, rng.random::<f64>() * probs.iter().sum::<f64>()) as u64;
    }
    let w = window as i64;
    let offsets: Vec<i64> = (-w + 1..=w).collect();
    let probs: Vec<f64> = offsets
        .iter()
        .map(|&d| fejer(x, (base + d) as f64, size))
        .collect();
    let inside: f64 = probs.iter().sum();
    let u = rng.random::<f64>();
    if u < inside || 1.0 - inside <= f64::EPSILON {
        return wrap(offsets[inverse_cdf(&probs, u.min(inside))]);
    }
    sample_tail(x, base, codes, window, rng)
        .map(wrap)
        .unwrap_or_else(|| wrap(offsets[inverse_cdf(&probs, inside)]))
}

fn inverse_cdf(probs: &[f64], target: f64) -> usize {
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            last = i;
        }
        acc += p;
        if target < acc {
            return i;
        }
    }
    last
}

/// Rejection sampler for offsets d ∉ (−W, W] around `base`. With
/// δ = x − base, |d − δ| ≥ |d| − 1 and sin(πv/T) ≥ 2|v|/T for |v| ≤ T/2
/// bound the kernel by 1/(4(|d| − 1)²); the proposal picks a side and
/// |d| = j ≥ W with probability (W − 1)/((j − 1)j).
fn sample_tail<R: Rng + ?Sized>(x: f64, base: i64, codes: u64, window: u64, rng: &mut R) -> Option<i64> {
    let size = codes as f64;
    let half = (codes / 2) as f64;
    let w = window as f64;
    let envelope = w / (2.0 * (w - 1.0) * (w - 1.0));
    for _ in 0..MAX_REJECTIONS {
        let positive = rng.random::<bool>();
        let u = 1.0 - rng.random::<f64>();
        let j = ((w - 1.0) / u).floor() + 1.0;
        let d = if positive { j } else { -j };
        if d > half || d < -half + 1.0 || (positive && j <= w) {
            continue;
        }
        let proposal = (w - 1.0) / (2.0 * (j - 1.0) * j);
        let target = fejer(x, base as f64 + d, size);
        if rng.random::<f64>() * envelope * proposal < target {
            return Some(d as i64);
        }
    }
    None
}

/// Quantum counting: phase estimation with U = H^{⊗n} and χ the oracle's
/// marked set, giving ã = N·sin²(θ̃). The caller's oracle is charged
/// `2^t − 1` queries. Works for every marked count including 0 and N.
pub fn count_marked<R: Rng + ?Sized>(
    oracle: &OracleSpec,
    t: u32,
    path: CountPath,
    rng: &mut R,
) -> Result<PhaseEstimate> {
    let size = oracle.domain_size();
    let y = match path {
        CountPath::Fast => {
            check_precision(t, MAX_FAST_PRECISION)?;
            let model = RotationModel::new(oracle.qubits(), oracle.marked_count())?;
            let y = sample_code(model.theta(), t, rng);
            oracle.record_queries((1u64 << t) - 1);
            y
        }
        CountPath::Full => {
            let amp = Amplifier::borrowing(crate::HadamardTransform::new(oracle.qubits()), oracle)?;
            run_full_circuit(&amp, t)?.measure(rng)? >> oracle.qubits()
        }
    };
    Ok(PhaseEstimate::decode_count(t, y, size))
}

/// Search that first estimates the number of solutions. Each attempt runs
/// [`count_marked`] (fast path), rounds ã to â and runs
/// [`search_known`] with â; a miss retries with one more precision qubit,
/// up to [`COUNT_ESCALATIONS`] times, after which [`search_unknown`] takes
/// over. `total_queries` includes the `2^t − 1` phase-estimation queries of
/// every attempt.
pub fn search_via_counting<R: Rng + ?Sized>(
    oracle: &OracleSpec,
    t: u32,
    rng: &mut R,
) -> Result<SearchOutcome> {
    check_precision(t, MAX_FAST_PRECISION)?;
    let size = oracle.domain_size();
    let mut outcome = SearchOutcome::default();
    let mut t = t;
    for attempt in 0..=COUNT_ESCALATIONS {
        let est = count_marked(oracle, t, CountPath::Fast, rng)?;
        let a_hat = est.rounded_count().unwrap_or(1).min(size);
        let run = search_known(oracle, a_hat, rng)?;
        outcome.total_queries += (1u64 << t) - 1 + run.total_queries;
        outcome.evaluations += run.evaluations;
        outcome.loops.extend(run.loops);
        if run.found.is_some() {
            outcome.found = run.found;
            return Ok(outcome);
        }
        if attempt < COUNT_ESCALATIONS {
            t = (t + 1).min(MAX_FAST_PRECISION);
        }
    }
    let rest = search_unknown(oracle, &SearchParams::default(), rng)?;
    outcome.total_queries += rest.total_queries;
    outcome.evaluations += rest.evaluations;
    outcome.loops.extend(rest.loops);
    outcome.found = rest.found;
    Ok(outcome)
}
