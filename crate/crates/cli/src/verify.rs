use mpls::exact::{brute_force_optimum, verify_local_optimum, verify_tail_bound};
use mpls::exchange::{
    bad_probability_bound, build_conflict_trace, estimate_bad_probability, find_rota_exchange,
    k4_non_composability_witness, random_exchange_case, refine_laminar, BadEstimate, ConflictInvariants,
    ConflictTrace, K4_EDGES,
};
use mpls::scalar::{format_ratio, ratio_to_f64};
use mpls::solver::sliding_local_search;
use mpls::{Error, Matroid};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::{BadprobArgs, ExchangeArgs, ReportArgs, TraceArgs, VerifyCommand};
use crate::error::{CliError, CliResult};
use crate::run::{load_one, usage, write_text};

fn emit<T: Serialize>(report: &T, out: &ReportArgs) -> CliResult<()> {
    let text = serde_json::to_string_pretty(report).expect("reports serialize") + "\n";
    write_text(out.out.as_ref(), &text)
}

fn violation(ok: bool, msg: impl FnOnce() -> String) -> CliResult<()> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Invariant(msg()))
    }
}

pub fn run(cmd: &VerifyCommand) -> CliResult<()> {
    match cmd {
        VerifyCommand::Rota(args) => exchanges(args, false),
        VerifyCommand::Laminar(args) => exchanges(args, true),
        VerifyCommand::Trace(args) => trace(args),
        VerifyCommand::Badprob(args) => badprob(args),
        VerifyCommand::K4(out) => k4(out),
    }
}

#[derive(Serialize)]
struct ExchangeFailure {
    case: usize,
    matroid: &'static str,
    s_parts: Vec<Vec<usize>>,
    t: Vec<usize>,
}

#[derive(Serialize)]
struct ExchangeReport {
    kind: &'static str,
    seed: u64,
    cases: usize,
    verified: usize,
    too_large: usize,
    failures: Vec<ExchangeFailure>,
}

/// `N_S` holds `S ∩ T` plus a single-part exchange of the rest of `S` in
/// `M / (S ∩ T)`, so `S` avoids `T \ N_S`.
fn laminar_case(m: &Matroid, parts: &[Vec<usize>], t: &[usize]) -> mpls::Result<bool> {
    let s: Vec<usize> = parts.concat();
    let shared: Vec<usize> = t.iter().copied().filter(|e| s.contains(e)).collect();
    let s_rest: Vec<usize> = s.iter().copied().filter(|e| !shared.contains(e)).collect();
    let t_rest: Vec<usize> = t.iter().copied().filter(|e| !shared.contains(e)).collect();
    let Some(single) = find_rota_exchange(&m.contract(&shared)?, &[s_rest], &t_rest)? else {
        return Ok(false);
    };
    let mut n_s = single.t_parts[0].clone();
    n_s.extend_from_slice(&shared);
    match refine_laminar(m, parts, t, &n_s) {
        Ok(cert) => Ok(cert.check()),
        Err(Error::Precondition(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

fn exchanges(args: &ExchangeArgs, laminar: bool) -> CliResult<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut report = ExchangeReport {
        kind: if laminar { "laminar" } else { "rota" },
        seed: args.seed,
        cases: args.cases,
        verified: 0,
        too_large: 0,
        failures: Vec::new(),
    };
    for case in 0..args.cases {
        let (m, parts, t) = random_exchange_case(args.max_ground, &mut rng);
        let outcome = if laminar {
            laminar_case(&m, &parts, &t)
        } else {
            find_rota_exchange(&m, &parts, &t).map(|c| c.is_some_and(|c| c.check()))
        };
        match outcome {
            Ok(true) => report.verified += 1,
            Ok(false) => report.failures.push(ExchangeFailure {
                case,
                matroid: m.kind_name(),
                s_parts: parts,
                t,
            }),
            Err(Error::TooLarge { .. }) => report.too_large += 1,
            Err(e) => return Err(e.into()),
        }
    }
    emit(&report, &args.report)?;
    violation(report.failures.is_empty(), || {
        format!("{} of {} exchange cases failed", report.failures.len(), report.cases)
    })
}

#[derive(Serialize)]
struct TraceReport {
    instance: String,
    seed: u64,
    local_optimum: bool,
    tail_bound: bool,
    invariants: ConflictInvariants,
    trace: ConflictTrace,
}

fn trace(args: &TraceArgs) -> CliResult<()> {
    let loaded = load_one(&args.instance)?;
    let config = args.search.config();
    config.check().map_err(usage)?;
    let inst = &loaded.instance;
    let (_, run) = sliding_local_search(inst, &config, args.search.seed)?;
    let optimum = brute_force_optimum(inst)?.optimum;
    let conflict = build_conflict_trace(inst, &run, &optimum, &args.gamma).map_err(usage)?;
    let invariants = conflict.invariants(inst, &run)?;
    let report = TraceReport {
        instance: loaded.id,
        seed: args.search.seed,
        local_optimum: verify_local_optimum(inst, &run)?,
        tail_bound: run.scheme.as_ref().is_none_or(|s| verify_tail_bound(inst, s, &optimum)),
        invariants,
        trace: conflict,
    };
    emit(&report, &args.report)?;
    violation(report.local_optimum && report.tail_bound && invariants.all(), || {
        format!("trace check failed on {}", report.instance)
    })
}

#[derive(Serialize)]
struct BadprobReport {
    instance: String,
    epsilon: String,
    gamma: String,
    samples: u64,
    bound: f64,
    limit: f64,
    max_frequency: f64,
    estimates: Vec<BadEstimate>,
}

fn badprob(args: &BadprobArgs) -> CliResult<()> {
    let loaded = load_one(&args.instance)?;
    let eps = &args.search.epsilon;
    let optimum = brute_force_optimum(&loaded.instance)?.optimum;
    let estimates = estimate_bad_probability(
        &loaded.instance,
        &optimum,
        eps,
        &args.search.delta,
        &args.gamma,
        args.tau_samples,
        args.search.seed,
    )
    .map_err(usage)?;
    let bound = ratio_to_f64(&bad_probability_bound(eps, &args.gamma));
    let sigma = (bound * (1.0 - bound) / args.tau_samples.max(1) as f64).sqrt();
    let report = BadprobReport {
        instance: loaded.id,
        epsilon: format_ratio(eps),
        gamma: format_ratio(&args.gamma),
        samples: args.tau_samples,
        bound,
        limit: bound + 3.0 * sigma,
        max_frequency: estimates.iter().map(|e| e.frequency).fold(0.0, f64::max),
        estimates,
    };
    emit(&report, &args.report)?;
    violation(report.max_frequency <= report.limit, || {
        format!("bad-marker frequency {} exceeds {}", report.max_frequency, report.limit)
    })
}

#[derive(Serialize)]
struct Swap {
    add: Vec<usize>,
    remove: Vec<usize>,
    feasible: bool,
}

#[derive(Serialize)]
struct K4Report {
    edges: Vec<(usize, usize)>,
    base: Vec<usize>,
    first: Swap,
    second: Swap,
    union: Swap,
}

fn k4(out: &ReportArgs) -> CliResult<()> {
    let w = k4_non_composability_witness();
    let swap = |add: &[usize], remove: &[usize]| -> CliResult<Swap> {
        Ok(Swap {
            add: add.to_vec(),
            remove: remove.to_vec(),
            feasible: w.instance.is_feasible(&w.apply(add, remove))?,
        })
    };
    let (add, remove) = w.union();
    let report = K4Report {
        edges: K4_EDGES.to_vec(),
        base: w.base.clone(),
        first: swap(&w.first.add, &w.first.remove)?,
        second: swap(&w.second.add, &w.second.remove)?,
        union: swap(&add, &remove)?,
    };
    emit(&report, out)?;
    violation(report.first.feasible && report.second.feasible && !report.union.feasible, || {
        "K4 witness does not separate the swaps".into()
    })
}
