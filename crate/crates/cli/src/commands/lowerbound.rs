use qsearch::lowerbound::{random_algorithm, verify};
use qsearch::rng::trial_rng;
use rayon::prelude::*;
use serde::Serialize;

use super::Outcome;
use crate::args::LowerboundArgs;
use crate::report::Report;
use crate::Failure;

/// Columns: n, m, k, alg, seed, sumD, bound, minD, avgAdv, advBound,
/// allClaimsPass.
#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Row {
    pub n: u32,
    pub m: u32,
    pub k: usize,
    pub alg: u64,
    pub seed: u64,
    pub sum_d: f64,
    pub bound: f64,
    pub min_d: f64,
    pub avg_adv: f64,
    pub adv_bound: f64,
    pub all_claims_pass: bool,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Summary {
    pub rows: usize,
    pub failing_rows: usize,
    pub max_sum_ratio: Option<f64>,
    pub max_adv_ratio: Option<f64>,
}

/// Stream for algorithm `alg` at query count `k`; independent of the range
/// and of how many algorithms are drawn.
fn stream(k: usize, alg: u64) -> u64 {
    ((k as u64) << 32) | alg
}

pub fn run(args: &LowerboundArgs) -> Result<Outcome, Failure> {
    let seed = args.common.seed;
    let n = args.n;
    let m = args.m.unwrap_or(n + 1);
    // Surface configuration errors once instead of per row.
    random_algorithm(n, m, 0, &mut trial_rng(seed, 0))?;

    let jobs: Vec<(usize, u64)> = args
        .k
        .clone()
        .flat_map(|k| (0..args.algs).map(move |i| (k, i)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(k, alg)| {
            let spec = random_algorithm(n, m, k, &mut trial_rng(seed, stream(k, alg)))?;
            let v = verify(&spec)?;
            Ok(Row {
                n,
                m,
                k,
                alg,
                seed,
                sum_d: v.sum.sum_d,
                bound: v.sum.bound,
                min_d: v.sum.min_d,
                avg_adv: v.advantage.advantage,
                adv_bound: v.advantage.bound,
                all_claims_pass: v.all_hold(),
            })
        })
        .collect::<qsearch::Result<Vec<_>>>()?;

    let ratio = |num: fn(&Row) -> f64, den: fn(&Row) -> f64| {
        rows.iter()
            .filter(|r| den(r) > 0.0)
            .map(|r| num(r) / den(r))
            .reduce(f64::max)
    };
    let failing_rows = rows.iter().filter(|r| !r.all_claims_pass).count();
    let summary = Summary {
        rows: rows.len(),
        failing_rows,
        max_sum_ratio: ratio(|r| r.sum_d, |r| r.bound),
        max_adv_ratio: ratio(|r| r.avg_adv, |r| r.adv_bound),
    };
    let violation =
        (failing_rows > 0).then(|| format!("{failing_rows} of {} rows fail a lower-bound check", rows.len()));
    let report = Report::new("lowerbound", seed, args, rows, summary);
    Ok(Outcome {
        bytes: report.render(args.common.format)?,
        violation,
    })
}
