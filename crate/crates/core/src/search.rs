//! Grover search with a known number of solutions, the exponential-schedule
//! search for an unknown number of solutions, and a classical random-probing
//! baseline.
//!
//! Query accounting: `total_queries` counts Grover iterations (one oracle
//! query each). Classical membership checks of measured candidates are kept
//! apart in `evaluations`.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use serde::Serialize;

use crate::analytic::RotationModel;
use crate::error::{Error, Result};
use crate::sv::{OracleSpec, StateVector};

pub const DEFAULT_LAMBDA: f64 = 6.0 / 5.0;

/// Evaluations spent on classical sampling before the quantum schedule when
/// more than half the domain is marked.
pub const CLASSICAL_PROBE_CAP: u64 = 4;

/// Parameters of the unknown-count schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchParams {
    lambda: f64,
    max_m: Option<f64>,
}

impl SearchParams {
    /// `lambda` must lie strictly between 1 and 4/3.
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 1.0 && lambda < 4.0 / 3.0) {
            return Err(Error::ParameterDomain(format!(
                "schedule growth factor {lambda} not in (1, 4/3)"
            )));
        }
        Ok(Self { lambda, max_m: None })
    }

    /// Overrides the loop guard `m ≤ √N`.
    pub fn with_max_m(mut self, max_m: f64) -> Self {
        self.max_m = Some(max_m);
        self
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn max_m(&self) -> Option<f64> {
        self.max_m
    }
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            lambda: DEFAULT_LAMBDA,
            max_m: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LoopRecord {
    pub m_value: f64,
    pub k_drawn: u64,
    pub measured: u64,
    pub hit: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchOutcome {
    pub found: Option<u64>,
    pub total_queries: u64,
    pub loops: Vec<LoopRecord>,
    #[serde(skip)]
    pub evaluations: u64,
}

impl SearchOutcome {
    pub fn succeeded(&self) -> bool {
        self.found.is_some()
    }
}

/// What the schedule needs from a search problem: a way to prepare the
/// start state, one amplification step, and a classical check.
pub(crate) trait Amplifiable {
    fn prepare(&self) -> Result<StateVector>;
    fn step(&self, state: &mut StateVector) -> Result<()>;
    fn check(&self, x: u64) -> bool;
}

struct Grover<'a>(&'a OracleSpec);

impl Amplifiable for Grover<'_> {
    fn prepare(&self) -> Result<StateVector> {
        StateVector::uniform(self.0.qubits())
    }

    fn step(&self, state: &mut StateVector) -> Result<()> {
        state.apply_grover_iteration(self.0)
    }

    fn check(&self, x: u64) -> bool {
        self.0.evaluate(x)
    }
}

/// Prepare, apply `k` steps, measure once.
pub(crate) fn run_fixed<T: Amplifiable, R: Rng + ?Sized>(
    target: &T,
    k: u64,
    rng: &mut R,
) -> Result<(u64, bool)> {
    let mut state = target.prepare()?;
    for _ in 0..k {
        target.step(&mut state)?;
    }
    let x = state.measure(rng)?;
    Ok((x, target.check(x)))
}

/// The exponential schedule: m starts at 1 and grows by λ while m ≤ `max_m`;
/// each loop draws k uniformly from {0, …, ⌈m⌉ − 1}.
pub(crate) fn run_schedule<T: Amplifiable, R: Rng + ?Sized>(
    target: &T,
    lambda: f64,
    max_m: f64,
    outcome: &mut SearchOutcome,
    rng: &mut R,
) -> Result<()> {
    let mut m = 1.0f64;
    while m <= max_m {
        let k = rng.random_range(0..m.ceil() as u64);
        let (x, hit) = run_fixed(target, k, rng)?;
        outcome.total_queries += k;
        outcome.evaluations += 1;
        outcome.loops.push(LoopRecord {
            m_value: m,
            k_drawn: k,
            measured: x,
            hit,
        });
        if hit {
            outcome.found = Some(x);
            return Ok(());
        }
        m *= lambda;
    }
    Ok(())
}

/// Grover search when the number of marked items `a` is known: k* iterations
/// from |h⟩, then a single measurement. `a` is trusted, not checked against
/// the oracle.
pub fn search_known<R: Rng + ?Sized>(oracle: &OracleSpec, a: u64, rng: &mut R) -> Result<SearchOutcome> {
    let model = RotationModel::new(oracle.qubits(), a)?;
    let k = model.optimal_k()?;
    let (x, hit) = run_fixed(&Grover(oracle), k, rng)?;
    Ok(SearchOutcome {
        found: hit.then_some(x),
        total_queries: k,
        loops: vec![LoopRecord {
            m_value: k as f64,
            k_drawn: k,
            measured: x,
            hit,
        }],
        evaluations: 1,
    })
}

/// Search without knowing how many items are marked.
///
/// When more than half the domain is marked, up to four classical random
/// probes are tried first. The quantum schedule then runs until a hit or
/// until m exceeds √N (or `params.max_m()`), in which case `found` is `None`.
pub fn search_unknown<R: Rng + ?Sized>(
    oracle: &OracleSpec,
    params: &SearchParams,
    rng: &mut R,
) -> Result<SearchOutcome> {
    let mut outcome = SearchOutcome::default();
    if 2 * oracle.marked_count() > oracle.domain_size() {
        let probe = probe_without_replacement(oracle, Some(CLASSICAL_PROBE_CAP), rng);
        outcome.evaluations = probe.evaluations;
        if probe.found.is_some() {
            outcome.found = probe.found;
            return Ok(outcome);
        }
    }
    let max_m = params
        .max_m
        .unwrap_or_else(|| (oracle.domain_size() as f64).sqrt());
    run_schedule(&Grover(oracle), params.lambda, max_m, &mut outcome, rng)?;
    Ok(outcome)
}

/// Classical baseline: probe indices uniformly at random without
/// replacement until a marked one turns up. `total_queries` and
/// `evaluations` both hold the number of probes; the expectation is
/// (N+1)/(a+1), and N when nothing is marked.
pub fn classical_baseline<R: Rng + ?Sized>(oracle: &OracleSpec, rng: &mut R) -> SearchOutcome {
    let mut outcome = probe_without_replacement(oracle, None, rng);
    outcome.total_queries = outcome.evaluations;
    outcome
}

/// Lazy Fisher–Yates over 0..N: only displaced positions are stored, so the
/// cost is proportional to the number of probes.
fn probe_without_replacement<R: Rng + ?Sized>(
    oracle: &OracleSpec,
    cap: Option<u64>,
    rng: &mut R,
) -> SearchOutcome {
    let size = oracle.domain_size();
    let limit = cap.map_or(size, |c| c.min(size));
    let mut swapped: HashMap<u64, u64> = HashMap::new();
    let mut outcome = SearchOutcome::default();
    for i in 0..limit {
        let j = rng.random_range(i..size);
        let at_j = *swapped.get(&j).unwrap_or(&j);
        let at_i = *swapped.get(&i).unwrap_or(&i);
        swapped.insert(j, at_i);
        outcome.evaluations += 1;
        if oracle.evaluate(at_j) {
            outcome.found = Some(at_j);
            break;
        }
    }
    outcome
}

/// Exact measurement distribution over the marked indices after `k` Grover
/// iterations from |h⟩.
pub fn solution_distribution(oracle: &OracleSpec, k: u64) -> Result<BTreeMap<u64, f64>> {
    if oracle.marked_count() == 0 {
        return Err(Error::NoSolutions);
    }
    let mut state = StateVector::uniform(oracle.qubits())?;
    for _ in 0..k {
        state.apply_grover_iteration(oracle)?;
    }
    Ok(oracle
        .marked()
        .iter()
        .map(|&x| (x, state.probability(x)))
        .collect())
}
