use std::fs::File;
use std::io::BufWriter;

use qsearch::rng::setup_rng;
use qsearch::{OracleSpec, RotationModel, StateVector};
use serde::Serialize;

use super::{marked_set, Outcome};
use crate::args::CurveArgs;
use crate::report::Report;
use crate::Failure;

/// Largest |closed form − simulation| accepted before exiting with status 2.
pub const CURVE_TOL: f64 = 1e-9;

/// Columns: k, closedForm, simulated, absDiff.
#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Row {
    pub k: u64,
    pub closed_form: f64,
    pub simulated: f64,
    pub abs_diff: f64,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Summary {
    pub n: u32,
    pub a: u64,
    pub theta: f64,
    pub max_abs_diff: f64,
    pub peak_k: u64,
    pub peak_closed_form: f64,
    pub k_star: Option<u64>,
}

#[derive(Serialize)]
struct StateDump<'a> {
    qubits: u32,
    k: u64,
    amplitudes: &'a StateVector,
}

pub fn run(args: &CurveArgs) -> Result<Outcome, Failure> {
    let seed = args.common.seed;
    let marked = marked_set(args.n, &args.marked, &mut setup_rng(seed))?;
    let oracle = OracleSpec::new(args.n, marked)?;
    let model = RotationModel::new(args.n, oracle.marked_count())?;
    let mut state = StateVector::uniform(args.n)?;

    let mut rows = Vec::with_capacity(args.k_max as usize + 1);
    for k in 0..=args.k_max {
        if k > 0 {
            state.apply_grover_iteration(&oracle)?;
        }
        let closed_form = model.success_prob(k);
        let simulated = state.marked_mass(&oracle)?;
        rows.push(Row {
            k,
            closed_form,
            simulated,
            abs_diff: (closed_form - simulated).abs(),
        });
    }
    if let Some(path) = &args.dump_state {
        let file = File::create(path)?;
        serde_json::to_writer(
            BufWriter::new(file),
            &StateDump {
                qubits: args.n,
                k: args.k_max,
                amplitudes: &state,
            },
        )?;
    }

    let max_abs_diff = rows.iter().map(|r| r.abs_diff).fold(0.0, f64::max);
    let peak = rows.iter().fold(
        &rows[0],
        |best, r| if r.closed_form > best.closed_form { r } else { best },
    );
    let summary = Summary {
        n: args.n,
        a: model.marked(),
        theta: model.theta(),
        max_abs_diff,
        peak_k: peak.k,
        peak_closed_form: peak.closed_form,
        k_star: model.optimal_k().ok(),
    };
    let violation = (max_abs_diff > CURVE_TOL)
        .then(|| format!("simulation departs from the closed form by {max_abs_diff:e}"));
    let report = Report::new("curve", seed, args, rows, summary);
    Ok(Outcome {
        bytes: report.render(args.common.format)?,
        violation,
    })
}
