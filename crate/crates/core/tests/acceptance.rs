//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;

use qsearch::amplify::{Amplifier, HadamardTransform};
use qsearch::analytic::{success_probability, RotationModel};
use qsearch::count::{concentration, fast_distribution, full_distribution};
use qsearch::linalg::ComplexMatrix;
use qsearch::lowerbound::{random_algorithm, run_hybrid, verify, AlgorithmSpec};
use qsearch::rng::{par_trials, setup_rng, trial_rng};
use qsearch::search::{classical_baseline, search_unknown, solution_distribution, SearchParams};
use qsearch::{OracleSpec, StateVector};

const SEED: u64 = 20_240_601;

struct Verdict {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn timed(name: &'static str, limit: Duration, check: impl FnOnce() -> (bool, String)) -> Verdict {
    let start = Instant::now();
    let (ok, detail) = check();
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    let detail = format!(
        "{detail}; {:.1}s (limit {}s){}",
        elapsed.as_secs_f64(),
        limit.as_secs(),
        if in_time { "" } else { " TIME EXCEEDED" }
    );
    Verdict {
        name,
        pass: ok && in_time,
        detail,
    }
}

/// (n, a) pairs with n ∈ 2..=12 and a ∈ {1, 2, 3, 4, N/4, N/2}.
fn models() -> Vec<(u32, u64)> {
    let mut out = Vec::new();
    for n in 2..=12u32 {
        let size = 1u64 << n;
        let mut list = vec![1, 2, 3, 4, size / 4, size / 2];
        list.retain(|&a| a >= 1 && a <= size);
        list.sort_unstable();
        list.dedup();
        out.extend(list.into_iter().map(|a| (n, a)));
    }
    out
}

fn random_marked<R: Rng>(n: u32, a: u64, rng: &mut R) -> OracleSpec {
    let size = 1usize << n;
    let picks = sample(rng, size, a as usize).into_iter().map(|x| x as u64);
    OracleSpec::new(n, picks).unwrap()
}

fn closed_form_equivalence() -> (bool, String) {
    let results: Vec<(f64, usize)> = models()
        .into_par_iter()
        .map(|(n, a)| {
            let model = RotationModel::new(n, a).unwrap();
            let oracle = random_marked(n, a, &mut setup_rng(SEED ^ (n as u64) << 32 ^ a));
            let mut state = StateVector::uniform(n).unwrap();
            let mut worst = 0.0f64;
            let k_max = 3 * model.optimal_k().unwrap();
            for k in 0..=k_max {
                if k > 0 {
                    state.apply_grover_iteration(&oracle).unwrap();
                }
                let sim = state.marked_mass(&oracle).unwrap();
                worst = worst.max((sim - model.success_prob(k)).abs());
            }
            (worst, k_max as usize + 1)
        })
        .collect();
    let worst = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let cases: usize = results.iter().map(|r| r.1).sum();
    (
        worst <= 1e-9,
        format!("{cases} (n, a, k) cases, max |sim − sin²((2k+1)θ)| = {worst:.2e} (tol 1e-9)"),
    )
}

fn optimal_k_bound() -> (bool, String) {
    let mut violations = Vec::new();
    let mut nearest_ok = true;
    let all = models();
    for &(n, a) in &all {
        let model = RotationModel::new(n, a).unwrap();
        let floor = 1.0 - model.marked_fraction();
        let k = model.optimal_k().unwrap();
        let got = model.success_prob(k);
        if got < floor {
            violations.push(format!("n={n} a={a} k*={k}: {got:.6} < {floor:.6}"));
        }
        nearest_ok &= model.success_prob(model.nearest_k().unwrap()) >= floor;
    }
    let mut detail = format!(
        "{}/{} models with success_prob(k*) < 1 − a/N",
        violations.len(),
        all.len()
    );
    if let Some(first) = violations.first() {
        detail.push_str(&format!(" (e.g. {first})"));
    }
    detail.push_str(&format!(
        "; k* is ⌊(π/2 − θ)/(2θ)⌋, leaving up to 2θ below π/2; nearest-integer k {} the bound",
        if nearest_ok { "meets" } else { "also misses" }
    ));
    (violations.is_empty(), detail)
}

fn average_success_exactness() -> (bool, String) {
    let mut worst = 0.0f64;
    let mut min_past_critical = f64::INFINITY;
    let mut cases = 0;
    // a = N (only at n = 2) has sin 2θ = 0, where P_m is undefined.
    for (n, a) in models().into_iter().filter(|&(n, a)| a < 1u64 << n) {
        let model = RotationModel::new(n, a).unwrap();
        let theta = model.theta();
        let mut running = 0.0;
        for m in 1..=64u64 {
            running += success_probability(theta, m - 1);
            worst = worst.max((model.p_m(m).unwrap() - running / m as f64).abs());
            cases += 1;
        }
        let start = model.critical_m().unwrap().ceil() as u64;
        for m in start..start + 256 {
            min_past_critical = min_past_critical.min(model.p_m(m).unwrap());
        }
    }
    (
        worst <= 1e-9 && min_past_critical >= 0.25,
        format!(
            "{cases} (model, m) pairs, max |P_m − brute mean| = {worst:.2e} (tol 1e-9); min P_m over m ∈ [⌈m*⌉, ⌈m*⌉+256) = {min_past_critical:.4} (≥ 0.25)"
        ),
    )
}

fn expected_iterations() -> (bool, String) {
    let trials = 10_000;
    let mut bound_ok = true;
    let mut worst_ratio = 0.0f64;
    let mut slope_points = Vec::new();
    for n in [6u32, 8, 10] {
        for a in [1u64, 2, 4] {
            let model = RotationModel::new(n, a).unwrap();
            let oracle = random_marked(n, a, &mut setup_rng(SEED + (n as u64) * 100 + a));
            let queries = par_trials(SEED + n as u64 * 10 + a, trials, |_, rng| {
                search_unknown(&oracle, &SearchParams::default(), rng)
                    .unwrap()
                    .total_queries
            });
            let mean = queries.iter().sum::<u64>() as f64 / trials as f64;
            let bound = 16.0 * model.critical_m().unwrap();
            bound_ok &= mean <= bound;
            worst_ratio = worst_ratio.max(mean / bound);
            if a == 1 {
                slope_points.push(((1u64 << n) as f64, mean));
            }
        }
    }
    let slope = log_log_slope(&slope_points);
    let slope_ok = (slope - 0.5).abs() <= 0.05;
    let means: Vec<String> = slope_points.iter().map(|(_, m)| format!("{m:.2}")).collect();
    (
        bound_ok && slope_ok,
        format!(
            "mean/16m* ≤ {worst_ratio:.3} ({}); slope at a=1 = {slope:.3} from means [{}] at N = 64, 256, 1024 (target 0.5 ± 0.05)",
            if bound_ok { "bound holds" } else { "bound violated" },
            means.join(", ")
        ),
    )
}

fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn uniform_solutions() -> (bool, String) {
    let mut rng = setup_rng(SEED + 5);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.random_range(1..=10u32);
        let size = 1u64 << n;
        let a = rng.random_range(1..=size);
        let oracle = random_marked(n, a, &mut rng);
        let k_max = 2 * RotationModel::new(n, a).unwrap().optimal_k().unwrap() + 2;
        let k = rng.random_range(0..=k_max);
        let dist = solution_distribution(&oracle, k).unwrap();
        let hi = dist.values().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = dist.values().cloned().fold(f64::INFINITY, f64::min);
        worst = worst.max(hi - lo);
    }
    (
        worst <= 1e-9,
        format!("100 triples, max spread of per-solution probability = {worst:.2e} (tol 1e-9)"),
    )
}

fn eigen_structure() -> (bool, String) {
    let mut rng = setup_rng(SEED + 6);
    let (mut eig, mut dec) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let n = rng.random_range(1..=6u32);
        let size = 1u64 << n;
        let good_count = rng.random_range(1..size) as usize;
        let good: Vec<u64> = sample(&mut rng, size as usize, good_count)
            .into_iter()
            .map(|x| x as u64)
            .collect();
        let u = ComplexMatrix::haar_random(size as usize, &mut rng);
        let amp = Amplifier::from_matrix(u, |x| good.contains(&x)).unwrap();
        let es = amp.eigen_structure().unwrap();
        eig = eig.max(es.residual_plus).max(es.residual_minus);
        dec = dec.max(es.decomposition_residual);
    }
    (
        eig <= 1e-9 && dec <= 1e-9,
        format!("50 random amplifiers, max ‖Gψ± − e^(±2iθ)ψ±‖ = {eig:.2e}, max decomposition residual = {dec:.2e} (tol 1e-9)"),
    )
}

fn counting() -> (bool, String) {
    let floor = 8.0 / (PI * PI);
    let cases: Vec<(u32, u64)> = (1..=10u32)
        .flat_map(|n| (0..=1u64 << n).map(move |a| (n, a)))
        .collect();
    let min_mass = cases
        .par_iter()
        .map(|&(n, a)| {
            let theta = RotationModel::new(n, a).unwrap().theta();
            (1..=12)
                .map(|t| concentration(&fast_distribution(theta, t).unwrap(), theta))
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min);
    let small: Vec<(u32, u64)> = (1..=6u32)
        .flat_map(|n| (0..=1u64 << n).map(move |a| (n, a)))
        .collect();
    let max_tv = small
        .par_iter()
        .map(|&(n, a)| {
            let amp =
                Amplifier::with_oracle(HadamardTransform::new(n), OracleSpec::new(n, 0..a).unwrap()).unwrap();
            (1..=6)
                .map(|t| {
                    let full = full_distribution(&amp, t).unwrap();
                    let fast = fast_distribution(amp.theta(), t).unwrap();
                    0.5 * full.iter().zip(&fast).map(|(x, y)| (x - y).abs()).sum::<f64>()
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    (
        min_mass >= floor - 1e-9 && max_tv <= 1e-9,
        format!(
            "min mass within ±1 code over n ≤ 10, all a, t ≤ 12 = {min_mass:.6} (≥ 8/π² = {floor:.6}); max TV(full, fast) for n, t ≤ 6 = {max_tv:.2e} (tol 1e-9)"
        ),
    )
}

fn lower_bound_suite() -> (bool, String) {
    let mut all_ok = true;
    let mut worst_sum = 0.0f64;
    let mut worst_adv = 0.0f64;
    let mut worst_claim = f64::INFINITY;
    let mut runs = 0;
    for n in [4u32, 6] {
        for k in 1..=8usize {
            let reports: Vec<_> = (0..20u64)
                .into_par_iter()
                .map(|i| {
                    let mut rng = trial_rng(SEED + (n as u64) * 1000 + k as u64, i);
                    verify(&random_algorithm(n, n + 1, k, &mut rng).unwrap()).unwrap()
                })
                .collect();
            for v in reports {
                runs += 1;
                all_ok &= v.all_hold();
                worst_sum = worst_sum.max(v.sum.sum_d / v.sum.bound);
                worst_adv = worst_adv.max(v.advantage.advantage / v.advantage.bound);
                worst_claim = worst_claim.min(v.claims.min_slack);
            }
        }
    }
    let mut equality_gap = 0.0f64;
    for n in [4u32, 6] {
        let alg = AlgorithmSpec::hadamard_probe(n).unwrap();
        let target = 2.0 / ((1u64 << n) as f64).sqrt();
        for r in 0..1u64 << n {
            equality_gap = equality_gap.max((run_hybrid(&alg, r).unwrap().final_distance() - target).abs());
        }
    }
    (
        all_ok && equality_gap <= 1e-12,
        format!(
            "{runs} Haar algorithms, all checks {}; max ΣD/(2k√N) = {worst_sum:.3}, max adv/(2k/√N) = {worst_adv:.3}, min per-step slack = {worst_claim:.2e}; equality case |D − 2/√N| = {equality_gap:.1e} (tol 1e-12)",
            if all_ok { "hold" } else { "DO NOT all hold" }
        ),
    )
}

fn classical() -> (bool, String) {
    let trials = 10_000;
    let mut ok = true;
    let mut parts = Vec::new();
    for a in [1u64, 4, 16] {
        let oracle = random_marked(10, a, &mut setup_rng(SEED + 9 + a));
        let evals: Vec<f64> = par_trials(SEED + 90 + a, trials, |_, rng| {
            classical_baseline(&oracle, rng).evaluations as f64
        });
        let mean = evals.iter().sum::<f64>() / trials as f64;
        let var = evals.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (trials - 1) as f64;
        let se = (var / trials as f64).sqrt();
        let expected = 1025.0 / (a + 1) as f64;
        let z = (mean - expected) / se;
        ok &= z.abs() <= 3.0;
        parts.push(format!("a={a}: {mean:.2} vs {expected:.2} (z = {z:+.2})"));
    }
    (ok, format!("n=10, {}", parts.join("; ")))
}

fn main() -> ExitCode {
    let verdicts = vec![
        timed(
            "closed-form equivalence",
            Duration::from_secs(60),
            closed_form_equivalence,
        ),
        timed(
            "optimal-k success bound",
            Duration::from_secs(60),
            optimal_k_bound,
        ),
        timed("average-success exactness", Duration::from_secs(10), average_success_exactness),
        timed(
            "unknown-count expected iterations",
            Duration::from_secs(300),
            expected_iterations,
        ),
        timed(
            "uniform solution distribution",
            Duration::from_secs(60),
            uniform_solutions,
        ),
        timed(
            "amplification eigen-structure",
            Duration::from_secs(60),
            eigen_structure,
        ),
        timed(
            "counting concentration and path agreement",
            Duration::from_secs(120),
            counting,
        ),
        timed(
            "hybrid lower-bound suite",
            Duration::from_secs(300),
            lower_bound_suite,
        ),
        timed("classical baseline", Duration::from_secs(60), classical),
    ];
    for v in &verdicts {
        println!(
            "{} {}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            v.name,
            v.detail
        );
    }
    let failed = verdicts.iter().filter(|v| !v.pass).count();
    println!("{} passed, {failed} failed", verdicts.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
