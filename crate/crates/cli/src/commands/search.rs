use qsearch::count::search_via_counting;
use qsearch::rng::{par_trials, setup_rng};
use qsearch::search::{classical_baseline, search_known, search_unknown};
use qsearch::{OracleSpec, RotationModel, SearchOutcome, SearchParams, MAX_QUBITS};
use serde::Serialize;

use super::{marked_set, mean, Outcome};
use crate::args::{SearchArgs, SearchMode};
use crate::report::Report;
use crate::Failure;

/// Columns: trial, found, success, queries, evaluations, loops.
#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Row {
    pub trial: u64,
    pub found: Option<u64>,
    pub success: bool,
    pub queries: u64,
    pub evaluations: u64,
    pub loops: usize,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Summary {
    pub n: u32,
    pub a: u64,
    pub trials: u64,
    pub success_rate: f64,
    pub mean_queries: f64,
    pub mean_evaluations: f64,
    pub k_star: Option<u64>,
    pub critical_m: Option<f64>,
    pub bound16m_star: Option<f64>,
    /// (N + 1)/(a + 1).
    pub expected_classical: f64,
}

pub fn run(args: &SearchArgs) -> Result<Outcome, Failure> {
    let seed = args.common.seed;
    let marked = marked_set(args.n, &args.marked, &mut setup_rng(seed))?;
    let oracle = OracleSpec::new(args.n, marked)?;
    let a = oracle.marked_count();
    let size = oracle.domain_size();
    if args.mode != SearchMode::Classical && args.n > MAX_QUBITS {
        return Err(Failure::Usage(format!(
            "--n {} exceeds the simulator limit {MAX_QUBITS}",
            args.n
        )));
    }
    if args.mode == SearchMode::Known && a == 0 {
        return Err(Failure::Usage("known mode needs at least one marked item".into()));
    }
    let params = SearchParams::new(args.lambda)?;
    let t = args.t.unwrap_or(args.n.div_ceil(2) + 3).min(30);

    let outcomes: Vec<qsearch::Result<SearchOutcome>> =
        par_trials(seed, args.trials, |_, rng| match args.mode {
            SearchMode::Known => search_known(&oracle, a, rng),
            SearchMode::Unknown => search_unknown(&oracle, &params, rng),
            SearchMode::Classical => Ok(classical_baseline(&oracle, rng)),
            SearchMode::Counting => search_via_counting(&oracle, t, rng),
        });
    let rows = outcomes
        .into_iter()
        .enumerate()
        .map(|(i, o)| {
            o.map(|o| Row {
                trial: i as u64,
                found: o.found,
                success: o.succeeded(),
                queries: o.total_queries,
                evaluations: o.evaluations,
                loops: o.loops.len(),
            })
        })
        .collect::<qsearch::Result<Vec<_>>>()?;

    let model = RotationModel::new(args.n, a).ok();
    let critical_m = model.as_ref().and_then(|m| m.critical_m().ok());
    let summary = Summary {
        n: args.n,
        a,
        trials: args.trials,
        success_rate: mean(rows.iter().map(|r| f64::from(u8::from(r.success)))),
        mean_queries: mean(rows.iter().map(|r| r.queries as f64)),
        mean_evaluations: mean(rows.iter().map(|r| r.evaluations as f64)),
        k_star: model.as_ref().and_then(|m| m.optimal_k().ok()),
        critical_m,
        bound16m_star: critical_m.map(|m| 16.0 * m),
        expected_classical: (size as f64 + 1.0) / (a as f64 + 1.0),
    };
    let report = Report::new("search", seed, args, rows, summary);
    Ok(Outcome {
        bytes: report.render(args.common.format)?,
        violation: None,
    })
}
