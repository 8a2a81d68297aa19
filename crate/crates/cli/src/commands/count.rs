use qsearch::count::{concentration, count_marked, fast_distribution, full_distribution};
use qsearch::rng::{par_trials, setup_rng};
use qsearch::{Amplifier, CountPath, HadamardTransform, OracleSpec, PhaseEstimate, RotationModel};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use serde::Serialize;

use super::{marked_set, mean, median, Outcome};
use crate::args::{CountArgs, PathArg};
use crate::report::Report;
use crate::Failure;

/// Largest precision for which the exact code distribution is enumerated
/// for the concentration column.
const EXACT_PRECISION: u32 = 20;

/// Columns: trial, n, a, t, y, aTilde, absErr.
#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Row {
    pub trial: u64,
    pub n: u32,
    pub a: u64,
    pub t: u32,
    pub y: u64,
    pub a_tilde: f64,
    pub abs_err: f64,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Summary {
    pub trials: u64,
    pub median_abs_err: f64,
    pub mean_abs_err: f64,
    /// Exact probability that the code lands within one step of either
    /// eigenphase position.
    pub concentration: Option<f64>,
    pub queries_per_trial: u64,
}

pub fn run(args: &CountArgs) -> Result<Outcome, Failure> {
    let seed = args.common.seed;
    let marked = marked_set(args.n, &args.marked, &mut setup_rng(seed))?;
    let oracle = OracleSpec::new(args.n, marked)?;
    let a = oracle.marked_count();
    let size = oracle.domain_size();
    let model = RotationModel::new(args.n, a)?;

    let estimates: Vec<PhaseEstimate> = match args.path {
        PathArg::Fast => par_trials(seed, args.trials, |_, rng| {
            count_marked(&oracle, args.t, CountPath::Fast, rng)
        })
        .into_iter()
        .collect::<qsearch::Result<_>>()?,
        PathArg::Full => {
            // One circuit simulation gives the exact code distribution; the
            // trials then sample it.
            let amp = Amplifier::borrowing(HadamardTransform::new(args.n), &oracle)?;
            let dist = full_distribution(&amp, args.t)?;
            let codes = WeightedIndex::new(&dist).map_err(|e| Failure::Invariant(e.to_string()))?;
            par_trials(seed, args.trials, |_, rng| {
                PhaseEstimate::decode_count(args.t, codes.sample(rng) as u64, size)
            })
        }
    };
    let rows: Vec<Row> = estimates
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let a_tilde = e.a_tilde.unwrap_or(f64::NAN);
            Row {
                trial: i as u64,
                n: args.n,
                a,
                t: args.t,
                y: e.y,
                a_tilde,
                abs_err: (a_tilde - a as f64).abs(),
            }
        })
        .collect();

    let concentration = if args.t <= EXACT_PRECISION {
        Some(concentration(
            &fast_distribution(model.theta(), args.t)?,
            model.theta(),
        ))
    } else {
        None
    };
    let summary = Summary {
        trials: args.trials,
        median_abs_err: median(rows.iter().map(|r| r.abs_err).collect()),
        mean_abs_err: mean(rows.iter().map(|r| r.abs_err)),
        concentration,
        queries_per_trial: (1u64 << args.t) - 1,
    };
    let report = Report::new("count", seed, args, rows, summary);
    Ok(Outcome {
        bytes: report.render(args.common.format)?,
        violation: None,
    })
}
