use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use mpls::exact::{brute_force_with, ExactMethod};
use mpls::instance::{generate, InstanceFile};
use mpls::scalar::{format_ratio, ratio_to_f64};
use mpls::solver::{derive_seed, greedy, sliding_local_search, solve_scaled, SlidingConfig};
use mpls::{Error, Rational, RationalInstance, RationalSolution};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::args::{Algo, InstanceArgs, SolverArgs};
use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, Serialize)]
pub struct ResultRecord {
    pub instance: String,
    pub algorithm: Algo,
    pub seed: Option<u64>,
    pub tau: Option<String>,
    pub weight: Option<String>,
    pub optimum: Option<String>,
    pub ratio: Option<f64>,
    pub oracle_calls: u64,
    pub wall_time_ms: Option<f64>,
    pub swap_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    #[serde(skip)]
    pub k: usize,
    #[serde(skip)]
    pub exact_weight: Option<Rational>,
}

impl ResultRecord {
    fn new(instance: &str, algorithm: Algo, k: usize) -> Self {
        Self {
            instance: instance.to_string(),
            algorithm,
            seed: None,
            tau: None,
            weight: None,
            optimum: None,
            ratio: None,
            oracle_calls: 0,
            wall_time_ms: None,
            swap_count: None,
            skipped: None,
            k,
            exact_weight: None,
        }
    }

    fn with_weight(mut self, w: &Rational) -> Self {
        self.weight = Some(format_ratio(w));
        self.exact_weight = Some(w.clone());
        self
    }

    /// Fills optimum and ratio; a zero optimum gives ratio 1.
    pub fn set_optimum(&mut self, opt: &Rational) {
        self.optimum = Some(format_ratio(opt));
        if let Some(w) = &self.exact_weight {
            self.ratio = Some(if opt.is_zero() { 1.0 } else { ratio_to_f64(&(w / opt)) });
        }
    }

    /// `k * w(A) >= w(O)`, checked exactly.
    pub fn within_k(&self, opt: &Rational) -> bool {
        self.exact_weight
            .as_ref()
            .is_none_or(|w| Rational::from_integer(self.k.into()) * w >= *opt)
    }
}

pub struct Loaded {
    pub id: String,
    pub instance: RationalInstance,
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_text(path: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            std::io::stdout().flush().ok();
            Ok(())
        }
    }
}

/// Instances from files, or `count` generated ones with consecutive seeds.
pub fn load_instances(args: &InstanceArgs, count: usize) -> CliResult<Vec<Loaded>> {
    if !args.instance.is_empty() {
        return args
            .instance
            .iter()
            .map(|path| {
                let file = InstanceFile::from_json(&read(path)?)?;
                Ok(Loaded {
                    id: path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned()),
                    instance: file.to_instance()?,
                })
            })
            .collect();
    }
    let family = args
        .family
        .family()
        .ok_or_else(|| CliError::Usage("give --instance FILE or --gen FAMILY".into()))?;
    (0..count as u64)
        .map(|i| {
            let seed = args.gen_seed + i;
            let instance = generate(&family, seed).map_err(usage)?;
            Ok(Loaded {
                id: format!("{}-{seed}", family.name()),
                instance,
            })
        })
        .collect()
}

pub fn load_one(args: &InstanceArgs) -> CliResult<Loaded> {
    if args.instance.len() > 1 {
        return Err(CliError::Usage("this command takes a single --instance".into()));
    }
    Ok(load_instances(args, 1)?.remove(0))
}

/// Parameter errors from the library are configuration errors.
pub fn usage(e: Error) -> CliError {
    match e {
        Error::InvalidParameter(msg) => CliError::Usage(msg),
        other => CliError::Core(other),
    }
}

/// Same matroid with its own oracle-call counter.
fn fresh(instance: &RationalInstance) -> CliResult<RationalInstance> {
    Ok(InstanceFile::from_instance(instance)?.to_raw_instance()?)
}

pub struct Runner {
    pub config: SlidingConfig,
    pub runs: usize,
    pub scale: Option<Rational>,
    pub exact_limit: usize,
    pub timing: bool,
}

impl Runner {
    pub fn new(args: &SolverArgs, timing: bool) -> CliResult<Self> {
        let config = args.search.config();
        config.check().map_err(usage)?;
        if args.runs == 0 {
            return Err(CliError::Usage("--runs must be at least 1".into()));
        }
        Ok(Self {
            config,
            runs: args.runs,
            scale: (!args.no_scale).then(|| args.scale_epsilon.clone()),
            exact_limit: exact_limit(args.exact_limit),
            timing,
        })
    }

    fn elapsed(&self, start: Instant) -> Option<f64> {
        self.timing.then(|| start.elapsed().as_secs_f64() * 1000.0)
    }

    fn check_feasible(&self, loaded: &Loaded, sol: &RationalSolution, algo: Algo) -> CliResult<()> {
        if loaded.instance.is_feasible(sol.chosen())? {
            Ok(())
        } else {
            Err(CliError::Invariant(format!("{} returned an infeasible set on {}", algo.name(), loaded.id)))
        }
    }

    /// Best of `runs` runs with seeds derived from `seed`; oracle calls and
    /// swaps are totals over the runs.
    pub fn sliding(&self, loaded: &Loaded, seed: u64) -> CliResult<ResultRecord> {
        let start = Instant::now();
        let mut best: Option<(RationalSolution, Rational)> = None;
        let mut calls = 0;
        let mut swaps = 0;
        for run in 0..self.runs {
            let s = derive_seed(seed, run);
            let (sol, trace) = match &self.scale {
                Some(eps) => solve_scaled(&loaded.instance, &self.config, eps, s),
                None => sliding_local_search(&loaded.instance, &self.config, s),
            }
            .map_err(usage)?;
            calls += trace.oracle_calls;
            swaps += trace.swap_count;
            if best.as_ref().is_none_or(|b| sol.total_weight() > b.0.total_weight()) {
                best = Some((sol, trace.tau));
            }
        }
        let (sol, tau) = best.expect("at least one run");
        self.check_feasible(loaded, &sol, Algo::Sliding)?;
        let mut record = ResultRecord::new(&loaded.id, Algo::Sliding, loaded.instance.k()).with_weight(sol.total_weight());
        record.seed = Some(seed);
        record.tau = Some(format_ratio(&tau));
        record.oracle_calls = calls;
        record.swap_count = Some(swaps);
        record.wall_time_ms = self.elapsed(start);
        Ok(record)
    }

    pub fn greedy(&self, loaded: &Loaded) -> CliResult<ResultRecord> {
        let instance = fresh(&loaded.instance)?;
        let start = Instant::now();
        let sol = greedy(&instance);
        let wall = self.elapsed(start);
        self.check_feasible(loaded, &sol, Algo::Greedy)?;
        let mut record = ResultRecord::new(&loaded.id, Algo::Greedy, loaded.instance.k()).with_weight(sol.total_weight());
        record.oracle_calls = instance.matroid().oracle_calls();
        record.wall_time_ms = wall;
        Ok(record)
    }

    /// Oversize instances give a record marked as skipped.
    pub fn exact(&self, loaded: &Loaded, method: ExactMethod) -> CliResult<ResultRecord> {
        let instance = fresh(&loaded.instance)?;
        let start = Instant::now();
        let k = loaded.instance.k();
        match brute_force_with(&instance, method, self.exact_limit) {
            Ok(found) => {
                let wall = self.elapsed(start);
                self.check_feasible(loaded, &found.optimum, Algo::Exact)?;
                let mut record = ResultRecord::new(&loaded.id, Algo::Exact, k).with_weight(found.optimum.total_weight());
                record.oracle_calls = instance.matroid().oracle_calls();
                record.wall_time_ms = wall;
                Ok(record)
            }
            Err(e @ Error::TooLarge { .. }) => {
                let mut record = ResultRecord::new(&loaded.id, Algo::Exact, k);
                record.skipped = Some(e.to_string());
                Ok(record)
            }
            Err(e) => Err(e.into()),
        }
    }
}

pub fn exact_limit(flag: Option<usize>) -> usize {
    flag.unwrap_or_else(|| ExactMethod::BranchAndBound.limit_from_env())
}

/// Attaches the optimum of each instance to its records and reports the
/// first record below `1/k`.
pub fn attach_optima(records: &mut [ResultRecord]) -> Option<String> {
    let optima: BTreeMap<String, Rational> = records
        .iter()
        .filter(|r| r.algorithm == Algo::Exact)
        .filter_map(|r| Some((r.instance.clone(), r.exact_weight.clone()?)))
        .collect();
    let mut violation = None;
    for record in records.iter_mut() {
        if let Some(opt) = optima.get(&record.instance) {
            record.set_optimum(opt);
            if violation.is_none() && !record.within_k(opt) {
                violation = Some(format!(
                    "{} on {} (seed {:?}) has ratio {:.4} below 1/{}",
                    record.algorithm.name(),
                    record.instance,
                    record.seed,
                    record.ratio.unwrap_or(0.0),
                    record.k
                ));
            }
        }
    }
    violation
}

pub fn to_jsonl(records: &[ResultRecord]) -> String {
    records
        .iter()
        .map(|r| serde_json::to_string(r).expect("records serialize") + "\n")
        .collect()
}

#[derive(Debug, Serialize)]
pub struct SummaryRow {
    pub instance: String,
    pub algo: &'static str,
    pub mean_ratio: Option<f64>,
    pub min_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
    pub floor_k: f64,
    pub floor_910: f64,
    pub floor_2ln2: f64,
}

/// One row per (instance, algorithm), in first-appearance order.
pub fn summarize(records: &[ResultRecord]) -> Vec<SummaryRow> {
    let mut order: Vec<(String, Algo)> = Vec::new();
    let mut groups: BTreeMap<(String, Algo), (usize, Vec<f64>)> = BTreeMap::new();
    for r in records {
        let key = (r.instance.clone(), r.algorithm);
        if !groups.contains_key(&key) {
            order.push(key.clone());
        }
        let entry = groups.entry(key).or_insert((r.k, Vec::new()));
        entry.1.extend(r.ratio);
    }
    order
        .into_iter()
        .map(|key| {
            let (k, ratios) = &groups[&key];
            let k1 = (*k + 1).to_f64().unwrap_or(f64::INFINITY);
            let (mean, min, max) = if ratios.is_empty() {
                (None, None, None)
            } else {
                (
                    Some(ratios.iter().sum::<f64>() / ratios.len() as f64),
                    ratios.iter().copied().reduce(f64::min),
                    ratios.iter().copied().reduce(f64::max),
                )
            };
            SummaryRow {
                instance: key.0,
                algo: key.1.name(),
                mean_ratio: mean,
                min_ratio: min,
                max_ratio: max,
                floor_k: 1.0 / *k as f64,
                floor_910: 10.0 / (9.0 * k1),
                floor_2ln2: 2.0 * std::f64::consts::LN_2 / k1,
            }
        })
        .collect()
}

pub fn summary_csv(rows: &[SummaryRow]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use mpls::scalar::parse_ratio;

    use super::*;

    fn rec(instance: &str, algo: Algo, w: &str) -> ResultRecord {
        ResultRecord::new(instance, algo, 3).with_weight(&parse_ratio(w).unwrap())
    }

    #[test]
    fn ratio_below_one_over_k_is_reported() {
        let mut recs = vec![rec("a", Algo::Greedy, "1"), rec("a", Algo::Exact, "3")];
        assert!(attach_optima(&mut recs).is_none());
        assert_eq!(recs[0].ratio, Some(1.0 / 3.0));

        let mut recs = vec![rec("a", Algo::Sliding, "0.99"), rec("a", Algo::Exact, "3")];
        assert!(attach_optima(&mut recs).unwrap().contains("below 1/3"));
    }

    #[test]
    fn zero_optimum_gives_ratio_one() {
        let mut recs = vec![rec("a", Algo::Greedy, "0"), rec("a", Algo::Exact, "0")];
        assert!(attach_optima(&mut recs).is_none());
        assert_eq!(recs[0].ratio, Some(1.0));
    }

    #[test]
    fn summary_groups_by_instance_and_algorithm() {
        let mut recs = vec![
            rec("a", Algo::Sliding, "1"),
            rec("a", Algo::Sliding, "2"),
            rec("b", Algo::Sliding, "1"),
            rec("a", Algo::Exact, "2"),
        ];
        attach_optima(&mut recs);
        let rows = summarize(&recs);
        assert_eq!(rows.len(), 3);
        assert_eq!((rows[0].min_ratio, rows[0].mean_ratio, rows[0].max_ratio), (Some(0.5), Some(0.75), Some(1.0)));
        assert_eq!(rows[1].mean_ratio, None);
        assert!((rows[0].floor_910 - 10.0 / 36.0).abs() < 1e-15);
    }
}
