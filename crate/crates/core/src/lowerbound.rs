//! Numerical verifier for the hybrid-argument query lower bound.
//!
//! A k-query algorithm is a list of m-qubit unitaries U_0, …, U_k with an
//! oracle call between consecutive ones. Running it against the phase oracle
//! Z_r (one marked input r on the low n qubits) gives the states ψ_r^{(j)};
//! running it against the identity oracle gives φ^{(j)}. The verifier records
//!
//! * D_r^j = ‖ψ_r^{(j)} − φ^{(j)}‖,
//! * E_r^j = ‖Z_r φ^{(j)} − φ^{(j)}‖,
//! * ‖Π_r φ^{(j)}‖, with Π_r the projector onto input value r,
//!
//! and checks D^{j+1} ≤ D^j + E^j, E^j ≤ 2‖Π_r φ^{(j)}‖, Σ_r D_r^k ≤ 2k√N,
//! min_r D_r^k ≤ 2k/√N and the advantage chain
//! |p_r − q| ≤ td_r ≤ D_r^k, |avg_r p_r − q| ≤ 2k/√N.
//!
//! Distances are plain Euclidean norms with no global-phase alignment.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, MAX_MATRIX_QUBITS};
use crate::sv::{OracleSpec, StateVector};

/// Slack for single inequalities.
pub const STEP_SLACK: f64 = 1e-9;
/// Slack for sums and averages over all N oracles.
pub const SUM_SLACK: f64 = 1e-6;

const UNITARY_TOL: f64 = 1e-9;

/// A k-query algorithm U_k O U_{k−1} ⋯ U_1 O U_0 on m qubits, where the
/// oracle acts on the low n qubits and `output_bit` is measured at the end.
#[derive(Debug, Clone)]
pub struct AlgorithmSpec {
    n: u32,
    m: u32,
    unitaries: Vec<ComplexMatrix>,
    output_bit: u32,
}

impl AlgorithmSpec {
    pub fn new(n: u32, m: u32, unitaries: Vec<ComplexMatrix>, output_bit: u32) -> Result<Self> {
        if n == 0 || m < n {
            return Err(Error::ParameterDomain(format!(
                "need 1 ≤ n ≤ m, got n={n}, m={m}"
            )));
        }
        if m > MAX_MATRIX_QUBITS {
            return Err(Error::SizeLimit {
                requested: m,
                limit: MAX_MATRIX_QUBITS,
            });
        }
        if unitaries.is_empty() {
            return Err(Error::ParameterDomain("an algorithm needs U_0".into()));
        }
        if output_bit >= m {
            return Err(Error::ParameterDomain(format!(
                "output bit {output_bit} outside {m} qubits"
            )));
        }
        let dim = 1usize << m;
        for u in &unitaries {
            if u.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: u.dim(),
                });
            }
            u.check_unitary(UNITARY_TOL)?;
        }
        Ok(Self {
            n,
            m,
            unitaries,
            output_bit,
        })
    }

    /// U_0 = H^{⊗n}, U_1 = I: one query on the uniform state, the case where
    /// D^{(1)} = 2/√N meets the bound exactly.
    pub fn hadamard_probe(n: u32) -> Result<Self> {
        let dim = 1usize << n;
        Self::new(
            n,
            n,
            vec![ComplexMatrix::hadamard(n), ComplexMatrix::identity(dim)],
            0,
        )
    }

    /// One query on the uniform state followed by H^{⊗n} and a flip of an
    /// extra qubit (index n) when the input register reads 0^n. The output
    /// bit is that extra qubit, so q = 1 and p_r = (1 − 2/N)².
    pub fn indicator_probe(n: u32) -> Result<Self> {
        let m = n + 1;
        let low = 1usize << n;
        let h = ComplexMatrix::identity(2).kron(&ComplexMatrix::hadamard(n));
        let flip = ComplexMatrix::permutation(2 * low, |j| if j % low == 0 { j ^ low } else { j })?;
        Self::new(n, m, vec![h.clone(), flip.matmul(&h)?], n)
    }

    /// Grover search written as a query algorithm: U_0 = H^{⊗n} and every
    /// later U_j the inversion about the mean.
    pub fn grover(n: u32, k: usize) -> Result<Self> {
        let dim = 1usize << n;
        let mut diffusion = ComplexMatrix::zeros(dim);
        let mean = 2.0 / dim as f64;
        for i in 0..dim {
            for j in 0..dim {
                let v = if i == j { mean - 1.0 } else { mean };
                diffusion.set(i, j, v.into());
            }
        }
        let mut unitaries = vec![ComplexMatrix::hadamard(n)];
        unitaries.extend(std::iter::repeat(diffusion).take(k));
        Self::new(n, n, unitaries, 0)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Number of oracle calls.
    pub fn k(&self) -> usize {
        self.unitaries.len() - 1
    }

    pub fn unitaries(&self) -> &[ComplexMatrix] {
        &self.unitaries
    }

    pub fn output_bit(&self) -> u32 {
        self.output_bit
    }

    pub fn domain_size(&self) -> u64 {
        1u64 << self.n
    }
}

/// k + 1 Haar-random unitaries on `m ≤ 10` qubits; the output bit is 0.
pub fn random_algorithm<R: Rng + ?Sized>(n: u32, m: u32, k: usize, rng: &mut R) -> Result<AlgorithmSpec> {
    if m > MAX_MATRIX_QUBITS {
        return Err(Error::SizeLimit {
            requested: m,
            limit: MAX_MATRIX_QUBITS,
        });
    }
    if n == 0 || m < n {
        return Err(Error::ParameterDomain(format!(
            "need 1 ≤ n ≤ m, got n={n}, m={m}"
        )));
    }
    let dim = 1usize << m;
    let unitaries = (0..=k).map(|_| ComplexMatrix::haar_random(dim, rng)).collect();
    AlgorithmSpec::new(n, m, unitaries, 0)
}

/// Values at step j (before the (j+1)-th query).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HybridStep {
    /// ‖ψ_r^{(j)} − φ^{(j)}‖.
    pub d: f64,
    /// ‖Z_r φ^{(j)} − φ^{(j)}‖.
    pub e: f64,
    /// ‖Π_r φ^{(j)}‖.
    pub proj: f64,
}

/// Both runs of one algorithm against Z_r and against the identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HybridTranscript {
    pub r: u64,
    /// j = 0, …, k.
    pub steps: Vec<HybridStep>,
    /// Pr[output bit = 1] against Z_r.
    pub p_r: f64,
    /// Pr[output bit = 1] against the identity.
    pub q: f64,
    /// Trace distance of the two final states.
    pub td: f64,
    pub marked_queries: u64,
    pub identity_queries: u64,
}

impl HybridTranscript {
    /// D_r^k.
    pub fn final_distance(&self) -> f64 {
        self.steps.last().map_or(0.0, |s| s.d)
    }
}

fn apply(u: &ComplexMatrix, state: &StateVector) -> Result<StateVector> {
    Ok(StateVector::from_raw(
        state.qubits(),
        u.mul_vec(state.amplitudes())?,
    ))
}

fn reflected(oracle: &OracleSpec, state: &StateVector) -> StateVector {
    let mut out = state.clone();
    out.amplitudes_mut()
        .chunks_mut(1 << oracle.qubits())
        .for_each(|b| oracle.reflect_block(b));
    out
}

fn output_probability(state: &StateVector, bit: u32) -> f64 {
    state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| i >> bit & 1 == 1)
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// Runs `alg` against Z_r and against the identity oracle from |0^m⟩.
pub fn run_hybrid(alg: &AlgorithmSpec, r: u64) -> Result<HybridTranscript> {
    let oracle = OracleSpec::singleton(alg.n, r)?;
    let start = StateVector::zero(alg.m)?;
    let mut psi = apply(&alg.unitaries[0], &start)?;
    let mut phi = psi.clone();
    let mut identity_queries = 0;
    let mut steps = Vec::with_capacity(alg.unitaries.len());
    for (j, u) in alg.unitaries.iter().enumerate() {
        if j > 0 {
            psi.apply_phase_oracle(&oracle)?;
            identity_queries += 1;
            psi = apply(u, &psi)?;
            phi = apply(u, &phi)?;
        }
        steps.push(HybridStep {
            d: psi.norm_diff(&phi)?,
            e: reflected(&oracle, &phi).norm_diff(&phi)?,
            proj: phi.project_marked_norm(&oracle)?,
        });
    }
    Ok(HybridTranscript {
        r,
        steps,
        p_r: output_probability(&psi, alg.output_bit),
        q: output_probability(&phi, alg.output_bit),
        td: trace_distance_pure(&psi, &phi)?,
        marked_queries: oracle.queries(),
        identity_queries,
    })
}

/// One transcript per marked element r ∈ {0, …, N − 1}, computed in parallel.
pub fn all_transcripts(alg: &AlgorithmSpec) -> Result<Vec<HybridTranscript>> {
    (0..alg.domain_size())
        .into_par_iter()
        .map(|r| run_hybrid(alg, r))
        .collect()
}

/// √(1 − |⟨x|y⟩|²) for normalized pure states, evaluated as the norm of the
/// component of `y` orthogonal to `x` so that nearly equal states do not
/// lose precision to cancellation.
pub fn trace_distance_pure(x: &StateVector, y: &StateVector) -> Result<f64> {
    let c = x.inner_product(y)?;
    let residual: f64 = x
        .amplitudes()
        .iter()
        .zip(y.amplitudes())
        .map(|(a, b)| (b - c * a).norm_sqr())
        .sum();
    Ok(residual.sqrt().min(1.0))
}

/// Outcome of an inequality family: whether every instance holds within its
/// slack, and the smallest margin (rhs − lhs) seen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClaimReport {
    pub holds: bool,
    /// `f64::INFINITY` when there is nothing to check.
    pub min_slack: f64,
}

impl ClaimReport {
    fn vacuous() -> Self {
        Self {
            holds: true,
            min_slack: f64::INFINITY,
        }
    }

    fn observe(&mut self, slack: f64, tolerance: f64) {
        self.min_slack = self.min_slack.min(slack);
        self.holds &= slack >= -tolerance;
    }

    fn merge(self, other: Self) -> Self {
        Self {
            holds: self.holds && other.holds,
            min_slack: self.min_slack.min(other.min_slack),
        }
    }
}

/// D^{j+1} ≤ D^j + E^j and E^j ≤ 2‖Π_r φ^{(j)}‖ for j < k.
pub fn check_claim_de(transcript: &HybridTranscript) -> ClaimReport {
    let mut report = ClaimReport::vacuous();
    for pair in transcript.steps.windows(2) {
        let (now, next) = (pair[0], pair[1]);
        report.observe(now.d + now.e - next.d, STEP_SLACK);
        report.observe(2.0 * now.proj - now.e, STEP_SLACK);
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SumBoundReport {
    /// Σ_r D_r^k.
    pub sum_d: f64,
    /// 2k√N.
    pub bound: f64,
    /// min_r D_r^k.
    pub min_d: f64,
    /// 2k/√N.
    pub min_bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AdvantageReport {
    /// |avg_r p_r − q|.
    pub advantage: f64,
    /// 2k/√N.
    pub bound: f64,
    /// Smallest td_r − |p_r − q|.
    pub min_helstrom_slack: f64,
    /// Smallest D_r^k − td_r.
    pub min_trace_slack: f64,
    pub holds: bool,
}

fn sum_bound_from(transcripts: &[HybridTranscript], k: usize, size: u64) -> SumBoundReport {
    let root = (size as f64).sqrt();
    let finals = transcripts.iter().map(HybridTranscript::final_distance);
    let sum_d: f64 = finals.clone().sum();
    let min_d = finals.fold(f64::INFINITY, f64::min);
    let bound = 2.0 * k as f64 * root;
    let min_bound = 2.0 * k as f64 / root;
    SumBoundReport {
        sum_d,
        bound,
        min_d,
        min_bound,
        holds: sum_d <= bound + SUM_SLACK && min_d <= min_bound + STEP_SLACK,
    }
}

fn advantage_from(transcripts: &[HybridTranscript], k: usize, size: u64) -> AdvantageReport {
    // Averaging p_r − q rather than p_r keeps the k = 0 case exactly zero.
    let mean_gap = transcripts.iter().map(|t| t.p_r - t.q).sum::<f64>() / transcripts.len().max(1) as f64;
    let min_helstrom_slack = transcripts
        .iter()
        .map(|t| t.td - (t.p_r - t.q).abs())
        .fold(f64::INFINITY, f64::min);
    let min_trace_slack = transcripts
        .iter()
        .map(|t| t.final_distance() - t.td)
        .fold(f64::INFINITY, f64::min);
    let advantage = mean_gap.abs();
    let bound = 2.0 * k as f64 / (size as f64).sqrt();
    AdvantageReport {
        advantage,
        bound,
        min_helstrom_slack,
        min_trace_slack,
        holds: min_helstrom_slack >= -STEP_SLACK
            && min_trace_slack >= -STEP_SLACK
            && advantage <= bound + SUM_SLACK,
    }
}

/// Σ_r D_r^k ≤ 2k√N and min_r D_r^k ≤ 2k/√N over all N singleton oracles.
pub fn check_sum_bound(alg: &AlgorithmSpec) -> Result<SumBoundReport> {
    Ok(sum_bound_from(&all_transcripts(alg)?, alg.k(), alg.domain_size()))
}

/// |p_r − q| ≤ td_r ≤ D_r^k for every r and |avg_r p_r − q| ≤ 2k/√N.
pub fn check_advantage(alg: &AlgorithmSpec) -> Result<AdvantageReport> {
    Ok(advantage_from(&all_transcripts(alg)?, alg.k(), alg.domain_size()))
}

/// Every check on one algorithm, sharing a single set of transcripts.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Verification {
    pub claims: ClaimReport,
    pub sum: SumBoundReport,
    pub advantage: AdvantageReport,
}

impl Verification {
    pub fn all_hold(&self) -> bool {
        self.claims.holds && self.sum.holds && self.advantage.holds
    }
}

pub fn verify(alg: &AlgorithmSpec) -> Result<Verification> {
    let transcripts = all_transcripts(alg)?;
    let claims = transcripts
        .iter()
        .map(check_claim_de)
        .fold(ClaimReport::vacuous(), ClaimReport::merge);
    Ok(Verification {
        claims,
        sum: sum_bound_from(&transcripts, alg.k(), alg.domain_size()),
        advantage: advantage_from(&transcripts, alg.k(), alg.domain_size()),
    })
}
