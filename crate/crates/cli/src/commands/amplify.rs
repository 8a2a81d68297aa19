use qsearch::amplify::{amplify_known, amplify_unknown};
use qsearch::rng::{par_trials, setup_rng};
use qsearch::{Amplifier, AmplifyOutcome, ComplexMatrix, SearchParams};
use serde::Serialize;

use super::{marked_set, mean, Outcome};
use crate::args::{AmplifyArgs, AmplifyMode};
use crate::report::Report;
use crate::Failure;

pub const MAX_DENSE_QUBITS: u32 = 10;

/// Columns: trial, found, success, queries, invocations.
#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Row {
    pub trial: u64,
    pub found: Option<u64>,
    pub success: bool,
    pub queries: u64,
    pub invocations: u64,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Summary {
    pub good: usize,
    pub good_probability: f64,
    pub theta: f64,
    pub k_opt: Option<u64>,
    pub success_rate: f64,
    pub mean_queries: f64,
    pub mean_invocations: f64,
}

pub fn run(args: &AmplifyArgs) -> Result<Outcome, Failure> {
    if args.n == 0 || args.n > MAX_DENSE_QUBITS {
        return Err(Failure::Usage(format!(
            "--n {} not in 1..={MAX_DENSE_QUBITS}",
            args.n
        )));
    }
    let seed = args.common.seed;
    let mut setup = setup_rng(seed);
    let good = marked_set(args.n, &args.marked, &mut setup)?;
    let unitary = ComplexMatrix::haar_random(1 << args.n, &mut setup);
    let good_count = good.len();
    let amp = Amplifier::from_matrix(unitary, move |x| good.binary_search(&x).is_ok())?;
    let params = SearchParams::new(args.lambda)?;
    if args.mode == AmplifyMode::Known {
        amp.optimal_iterations()?;
    }

    let outcomes: Vec<qsearch::Result<AmplifyOutcome>> =
        par_trials(seed, args.trials, |_, rng| match args.mode {
            AmplifyMode::Known => amplify_known(&amp, rng),
            AmplifyMode::Unknown => amplify_unknown(&amp, &params, rng),
        });
    let rows = outcomes
        .into_iter()
        .enumerate()
        .map(|(i, o)| {
            o.map(|o| Row {
                trial: i as u64,
                found: o.outcome.found,
                success: o.outcome.succeeded(),
                queries: o.outcome.total_queries,
                invocations: o.invocations,
            })
        })
        .collect::<qsearch::Result<Vec<_>>>()?;

    let summary = Summary {
        good: good_count,
        good_probability: amp.success_probability(),
        theta: amp.theta(),
        k_opt: amp.optimal_iterations().ok(),
        success_rate: mean(rows.iter().map(|r| f64::from(u8::from(r.success)))),
        mean_queries: mean(rows.iter().map(|r| r.queries as f64)),
        mean_invocations: mean(rows.iter().map(|r| r.invocations as f64)),
    };
    let report = Report::new("amplify", seed, args, rows, summary);
    Ok(Outcome {
        bytes: report.render(args.common.format)?,
        violation: None,
    })
}
