use mpls::exact::ExactMethod;
use mpls::instance::{generate, InstanceFile};
use mpls::solver::derive_seed;
use rayon::prelude::*;

use crate::args::{Algo, BenchArgs, ExactArgs, GenArgs, MethodName, SolveArgs};
use crate::error::{CliError, CliResult};
use crate::run::{
    attach_optima, load_instances, load_one, summarize, summary_csv, to_jsonl, usage, write_text,
    ResultRecord, Runner,
};

fn dedup(algos: &[Algo]) -> Vec<Algo> {
    let mut out: Vec<Algo> = Vec::new();
    for &a in algos {
        if !out.contains(&a) {
            out.push(a);
        }
    }
    out
}

fn finish(records: &mut [ResultRecord], out: &crate::args::OutputArgs, csv_to_stdout: bool) -> CliResult<()> {
    let violation = attach_optima(records);
    let csv = summary_csv(&summarize(records))?;
    if csv_to_stdout && out.csv.is_none() {
        if let Some(path) = &out.out {
            write_text(Some(path), &to_jsonl(records))?;
        }
        write_text(None, &csv)?;
    } else {
        write_text(out.out.as_ref(), &to_jsonl(records))?;
        if let Some(path) = &out.csv {
            write_text(Some(path), &csv)?;
        }
    }
    match violation {
        Some(msg) => Err(CliError::Invariant(msg)),
        None => Ok(()),
    }
}

pub fn solve(args: &SolveArgs) -> CliResult<()> {
    let runner = Runner::new(&args.solver, args.output.timing)?;
    let loaded = load_one(&args.instance)?;
    let mut records = Vec::new();
    for algo in dedup(&args.algo) {
        records.push(match algo {
            Algo::Sliding => runner.sliding(&loaded, args.solver.search.seed)?,
            Algo::Greedy => runner.greedy(&loaded)?,
            Algo::Exact => runner.exact(&loaded, ExactMethod::BranchAndBound)?,
        });
    }
    finish(&mut records, &args.output, false)
}

/// Cells are (instance, algorithm, sample); they run in parallel and are
/// written in cell order.
pub fn bench(args: &BenchArgs) -> CliResult<()> {
    let runner = Runner::new(&args.solver, args.output.timing)?;
    let instances = load_instances(&args.instance, args.count)?;
    let algos = dedup(&args.algo);
    let mut cells = Vec::new();
    for (i, _) in instances.iter().enumerate() {
        for &algo in &algos {
            match algo {
                Algo::Sliding => cells.extend((0..args.tau_samples).map(|s| (i, algo, s))),
                _ => cells.push((i, algo, 0)),
            }
        }
    }
    let base = args.solver.search.seed;
    let mut records = cells
        .par_iter()
        .map(|&(i, algo, s)| {
            let loaded = &instances[i];
            match algo {
                Algo::Sliding => runner.sliding(loaded, derive_seed(base, s)),
                Algo::Greedy => runner.greedy(loaded),
                Algo::Exact => runner.exact(loaded, ExactMethod::BranchAndBound),
            }
        })
        .collect::<CliResult<Vec<_>>>()?;
    finish(&mut records, &args.output, true)
}

pub fn gen(args: &GenArgs) -> CliResult<()> {
    let family = args
        .family
        .family()
        .ok_or_else(|| CliError::Usage("--gen FAMILY is required".into()))?;
    let instance = generate(&family, args.seed).map_err(usage)?;
    let text = InstanceFile::from_instance(&instance)?.to_json() + "\n";
    write_text(args.out.as_ref(), &text)
}

pub fn exact(args: &ExactArgs) -> CliResult<()> {
    let loaded = load_one(&args.instance)?;
    let method = match args.method {
        MethodName::BranchAndBound => ExactMethod::BranchAndBound,
        MethodName::SubsetEnum => ExactMethod::SubsetEnum,
    };
    let runner = Runner {
        config: Default::default(),
        runs: 1,
        scale: None,
        exact_limit: args.exact_limit.unwrap_or_else(|| method.limit_from_env()),
        timing: args.timing,
    };
    let mut record = runner.exact(&loaded, method)?;
    if let Some(w) = record.exact_weight.clone() {
        record.set_optimum(&w);
    }
    write_text(args.out.as_ref(), &to_jsonl(&[record]))
}
