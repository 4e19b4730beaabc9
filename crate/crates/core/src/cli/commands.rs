use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use super::config::{parse_config, Job, Method};
use super::output::{environment_stamp, write_csv};
use super::{CliError, Format, GlobalOpts};
use crate::benchmarks::{problem_from_name, random_search, Problem, ProblemOptions};
use crate::combinatorics::theory::MAX_ENUMERATION_DIM;
use crate::combinatorics::{
    build_dictionary, cardinality_bound, dictionary_stats, enumerate_embedded_cardinality, gaussian_projection_cardinality,
    Dictionary, DictionaryStrategy, SearchSpace,
};
use crate::engine::{median, model_diagnostics, run_bodi, RunRecord};
use crate::surrogate::FitConfig;

fn out_dir(opts: &GlobalOpts, fallback: Option<&Path>) -> Result<PathBuf, CliError> {
    let dir = opts.out_dir.clone().or_else(|| fallback.map(Path::to_path_buf)).unwrap_or_else(|| PathBuf::from("out"));
    fs::create_dir_all(&dir).map_err(|e| CliError::Failed(format!("cannot create {}: {e}", dir.display())))?;
    Ok(dir)
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("serialisable");
    fs::write(path, text + "\n").map_err(|e| CliError::Failed(format!("cannot write {}: {e}", path.display())))
}

fn thread_pool(workers: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        if w == 0 {
            return Err(CliError::Invalid("--workers must be at least 1".into()));
        }
        b = b.num_threads(w);
    }
    b.build().map_err(|e| CliError::Failed(e.to_string()))
}

fn load_problem(name: &str, opts: ProblemOptions) -> Result<Box<dyn Problem>, CliError> {
    problem_from_name(name, opts).map_err(|e| match e {
        crate::Error::Io(io) => CliError::MissingFile(format!("problem file for '{name}': {io}")),
        crate::Error::Parse { line, msg } => CliError::Failed(format!("problem file for '{name}', line {line}: {msg}")),
        other => CliError::Invalid(format!("problem: {other}")),
    })
}

fn run_job(problem: &dyn Problem, job: &Job) -> crate::Result<RunRecord> {
    match job.method {
        Method::Bodi => run_bodi(problem, &job.bo),
        Method::Random => random_search(problem, job.bo.budget, job.bo.seed),
    }
}

/// `run <config>`: every (method, dictionary, m, seed) job of the config,
/// each written to its own CSV and JSON files, plus `summary.csv`.
pub fn cmd_run(config_path: &Path, opts: &GlobalOpts) -> Result<(), CliError> {
    let text = fs::read_to_string(config_path)
        .map_err(|e| CliError::MissingFile(format!("config {}: {e}", config_path.display())))?;
    let mut cfg = parse_config(&text).map_err(CliError::Invalid)?;
    if let Some(s) = opts.seed {
        cfg.seeds = vec![s];
    }
    let problem = load_problem(&cfg.problem, ProblemOptions { merit_convention: cfg.merit_convention, exclude_top: cfg.exclude_top })?;
    let dir = out_dir(opts, cfg.out_dir.as_deref())?;
    let jobs = cfg.jobs();
    log::info!("{} job(s) for {}", jobs.len(), cfg.problem);

    let pool = thread_pool(opts.workers)?;
    let results: Vec<crate::Result<RunRecord>> = pool.install(|| jobs.par_iter().map(|j| run_job(problem.as_ref(), j)).collect());

    let mut failures = Vec::new();
    let mut summary = csv::Writer::from_path(dir.join("summary.csv")).map_err(|e| CliError::Failed(e.to_string()))?;
    summary
        .write_record(["method", "dictionary", "m", "seed", "evaluations", "best_value", "best_reported"])
        .map_err(|e| CliError::Failed(e.to_string()))?;
    for (job, result) in jobs.iter().zip(results) {
        let stem = job.stem(&cfg.problem);
        let rec = match result {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("{stem}: {e}"));
                continue;
            }
        };
        let mut sidecar = json!({
            "config": {
                "problem": cfg.problem,
                "method": job.method.as_str(),
                "bo": job.bo,
                "merit_convention": cfg.merit_convention,
                "exclude_top": cfg.exclude_top,
            },
            "problem": problem.metadata(),
            "summary": rec.summary(problem.as_ref()),
            "environment": environment_stamp(),
            "events": rec.events,
            "beta": rec.beta,
            "total_time_s": rec.rows.last().map_or(0.0, |r| r.elapsed_s),
        });
        if let Some(regret) = rec.regret_trace() {
            sidecar["regret"] = json!({ "trace": regret, "cumulative": rec.cumulative_regret() });
        }
        match opts.format {
            Format::Csv => write_csv(&rec, &dir.join(format!("{stem}.csv")), cfg.record_timing)
                .map_err(|e| CliError::Failed(format!("{stem}.csv: {e}")))?,
            Format::Json => sidecar["rows"] = json!(rec.rows),
        }
        write_json(&dir.join(format!("{stem}.json")), &sidecar)?;
        let best = rec.best_value();
        summary
            .write_record([
                job.method.as_str().to_string(),
                if job.method == Method::Bodi { job.bo.dictionary.as_str().to_string() } else { String::new() },
                if job.method == Method::Bodi { job.bo.m.to_string() } else { String::new() },
                job.bo.seed.to_string(),
                rec.len().to_string(),
                format!("{best}"),
                format!("{}", problem.report(best)),
            ])
            .map_err(|e| CliError::Failed(e.to_string()))?;
    }
    summary.flush().map_err(|e| CliError::Failed(e.to_string()))?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(failures.join("\n")))
    }
}

#[derive(Clone, Debug, Args)]
pub struct DiagnoseArgs {
    #[arg(long, default_value = "maxsat-synthetic:0")]
    pub problem: String,
    #[arg(long, default_value_t = 50)]
    pub n_train: usize,
    #[arg(long, default_value_t = 50)]
    pub n_test: usize,
    /// One or more dictionary kinds, comma separated.
    #[arg(long = "kind", value_delimiter = ',', default_value = "diverse_random")]
    pub kinds: Vec<DictionaryStrategy>,
    #[arg(long, default_value_t = 128)]
    pub m: usize,
    /// Seeds, comma separated (default: --seed, else 0).
    #[arg(long, value_delimiter = ',')]
    pub seeds: Vec<u64>,
}

/// `diagnose`: per-seed model-fit reports and a per-kind median summary.
pub fn cmd_diagnose(args: &DiagnoseArgs, opts: &GlobalOpts) -> Result<(), CliError> {
    if args.n_test == 0 {
        return Err(CliError::Invalid("n_test: must be at least 1".into()));
    }
    if args.n_train < 2 {
        return Err(CliError::Invalid("n_train: must be at least 2".into()));
    }
    if args.m == 0 {
        return Err(CliError::Invalid("m: must be at least 1".into()));
    }
    let seeds = if args.seeds.is_empty() { vec![opts.seed.unwrap_or(0)] } else { args.seeds.clone() };
    let problem = load_problem(&args.problem, ProblemOptions::default())?;
    let dir = out_dir(opts, None)?;
    let cells: Vec<(DictionaryStrategy, u64)> =
        args.kinds.iter().flat_map(|&k| seeds.iter().map(move |&s| (k, s))).collect();
    let pool = thread_pool(opts.workers)?;
    let fit = FitConfig::default();
    let reports = pool.install(|| {
        cells
            .par_iter()
            .map(|&(k, s)| model_diagnostics(problem.as_ref(), args.n_train, args.n_test, k, args.m, s, &fit))
            .collect::<Vec<_>>()
    });

    let mut rows = Vec::new();
    for &kind in &args.kinds {
        let mut rmse = Vec::new();
        let mut nlpd = Vec::new();
        let mut cov = Vec::new();
        let mut short = Vec::new();
        for ((k, s), r) in cells.iter().zip(&reports) {
            if *k != kind {
                continue;
            }
            let r = r.as_ref().map_err(|e| CliError::Failed(format!("{} seed {s}: {e}", k.as_str())))?;
            write_json(&dir.join(format!("diagnose_{}_m{}_seed{s}.json", k.as_str(), args.m)), &json!(r))?;
            rmse.push(r.rmse);
            nlpd.push(r.nlpd);
            cov.push(r.coverage_95);
            short.push(r.lengthscales_below_10 as f64);
        }
        rows.push(json!({
            "dictionary": kind.as_str(),
            "m": args.m,
            "seeds": seeds.len(),
            "median_rmse": median(&rmse),
            "median_nlpd": median(&nlpd),
            "median_coverage_95": median(&cov),
            "median_lengthscales_below_10": median(&short),
        }));
    }
    let header = ["dictionary", "m", "seeds", "median_rmse", "median_nlpd", "median_coverage_95", "median_lengthscales_below_10"];
    emit_table(opts.format, &header, &rows, &dir.join("diagnose_summary"))
}

/// Writes to stdout, treating a closed pipe (`| head`) as success.
fn print_stdout(bytes: &[u8]) -> Result<(), CliError> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(bytes).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Failed(format!("stdout: {e}"))),
        _ => Ok(()),
    }
}

fn cell(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Prints rows to stdout and saves them next to `stem` in the chosen format.
fn emit_table(format: Format, header: &[&str], rows: &[serde_json::Value], stem: &Path) -> Result<(), CliError> {
    match format {
        Format::Json => {
            let v = json!(rows);
            print_stdout(format!("{}\n", serde_json::to_string_pretty(&v).unwrap()).as_bytes())?;
            write_json(&stem.with_extension("json"), &v)
        }
        Format::Csv => {
            let mut out = csv::Writer::from_writer(Vec::new());
            out.write_record(header).unwrap();
            for r in rows {
                out.write_record(header.iter().map(|h| cell(&r[*h]))).unwrap();
            }
            let bytes = out.into_inner().unwrap();
            print_stdout(&bytes)?;
            fs::write(stem.with_extension("csv"), bytes).map_err(|e| CliError::Failed(e.to_string()))
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct TheoryArgs {
    #[arg(long, default_value_t = 10)]
    pub d_max: usize,
    #[arg(long, default_value_t = 4)]
    pub m_max: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
}

const STRATEGIES: [DictionaryStrategy; 3] =
    [DictionaryStrategy::DiverseRandom, DictionaryStrategy::NaiveRandom, DictionaryStrategy::BinaryWavelet];

fn random_dictionary(rng: &mut ChaCha8Rng, d_max: usize, m_max: usize, trial: usize) -> crate::Result<Dictionary> {
    let d = rng.gen_range(1..=d_max);
    let m = rng.gen_range(1..=m_max);
    build_dictionary(STRATEGIES[trial % 3], &SearchSpace::binary(d)?, m, rng.gen())
}

/// `theory-check`: the affine identity, the cardinality bound against
/// enumeration, and full cardinality of Gaussian projections.
pub fn cmd_theory_check(args: &TheoryArgs, opts: &GlobalOpts) -> Result<(), CliError> {
    if args.d_max == 0 || args.d_max > MAX_ENUMERATION_DIM {
        return Err(CliError::Invalid(format!("d_max: must lie in 1..={MAX_ENUMERATION_DIM}")));
    }
    if args.m_max == 0 {
        return Err(CliError::Invalid("m_max: must be at least 1".into()));
    }
    if args.trials == 0 {
        eprintln!("warning: trials = 0, every property passes vacuously");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.unwrap_or(0));

    let mut affine = 0;
    for t in 0..args.trials {
        let dict = random_dictionary(&mut rng, args.d_max, args.m_max, t)?;
        let z: Vec<usize> = (0..dict.d()).map(|_| rng.gen_range(0..2)).collect();
        if dict.embed_affine(&z)? == dict.embed(&z)? {
            affine += 1;
        }
    }
    let mut bound = 0;
    for t in 0..args.trials {
        let dict = random_dictionary(&mut rng, args.d_max, args.m_max, t)?;
        if num_bigint::BigUint::from(enumerate_embedded_cardinality(&dict)?) <= cardinality_bound(&dict)? {
            bound += 1;
        }
    }
    let gd = args.d_max.min(crate::combinatorics::theory::MAX_GAUSSIAN_DIM);
    let mut gauss = 0;
    for _ in 0..args.trials {
        if gaussian_projection_cardinality(gd, rng.gen())? == 1usize << gd {
            gauss += 1;
        }
    }

    let rows: Vec<serde_json::Value> = [("affine_identity", affine), ("cardinality_bound", bound), ("gaussian_projection", gauss)]
        .iter()
        .map(|&(name, passed)| {
            json!({
                "property": name,
                "trials": args.trials,
                "passed": passed,
                "failed": args.trials - passed,
                "status": if passed == args.trials { "PASS" } else { "FAIL" },
            })
        })
        .collect();
    let dir = out_dir(opts, None)?;
    emit_table(opts.format, &["property", "trials", "passed", "failed", "status"], &rows, &dir.join("theory_check"))?;
    if rows.iter().all(|r| r["status"] == "PASS") {
        Ok(())
    } else {
        Err(CliError::Failed("at least one property failed".into()))
    }
}

#[derive(Clone, Debug, Args)]
pub struct DictStatsArgs {
    /// diverse_random, naive_random, binary_wavelet or explicit.
    #[arg(long, default_value = "diverse_random")]
    pub kind: String,
    #[arg(long, default_value_t = 16)]
    pub d: usize,
    #[arg(long, default_value_t = 16)]
    pub m: usize,
    /// JSON array of 0/1 rows, required for `explicit`.
    #[arg(long)]
    pub rows: Option<PathBuf>,
}

/// `dict-stats`: coherence, cardinality bound and histograms of one
/// binary dictionary.
pub fn cmd_dict_stats(args: &DictStatsArgs, opts: &GlobalOpts) -> Result<(), CliError> {
    let dict = if args.kind == "explicit" {
        let path = args.rows.as_ref().ok_or_else(|| CliError::Invalid("rows: required for kind explicit".into()))?;
        let text = fs::read_to_string(path).map_err(|e| CliError::MissingFile(format!("{}: {e}", path.display())))?;
        let rows: Vec<Vec<usize>> =
            serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("rows: {e}")))?;
        let d = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || d == 0 {
            return Err(CliError::Invalid("rows: need at least one non-empty row".into()));
        }
        Dictionary::explicit(&SearchSpace::binary(d)?, rows)?
    } else {
        let strategy: DictionaryStrategy = args.kind.parse().map_err(|e: crate::Error| CliError::Invalid(format!("kind: {e}")))?;
        if args.d == 0 || args.m == 0 {
            return Err(CliError::Invalid("d and m must be at least 1".into()));
        }
        build_dictionary(strategy, &SearchSpace::binary(args.d)?, args.m, opts.seed.unwrap_or(0))?
    };
    let stats = dictionary_stats(&dict)?;
    match opts.format {
        Format::Json => print_stdout(format!("{}\n", serde_json::to_string_pretty(&stats).unwrap()).as_bytes())?,
        Format::Csv => {
            let mut out = csv::Writer::from_writer(Vec::new());
            let coherence = stats.coherence.map_or("n/a".to_string(), |c| c.to_string());
            let mut rec = |a: &str, b: String, c: String| out.write_record([a, &b, &c]).unwrap();
            rec("section", "key".into(), "value".into());
            rec("summary", "kind".into(), format!("{:?}", dict.kind()));
            rec("summary", "m".into(), stats.m.to_string());
            rec("summary", "d".into(), stats.d.to_string());
            rec("summary", "coherence".into(), coherence);
            rec("summary", "cardinality_bound".into(), stats.cardinality_bound.clone());
            for (k, c) in stats.row_sum_histogram.iter().enumerate() {
                rec("row_sum", k.to_string(), c.to_string());
            }
            for (k, c) in stats.sequency_histogram.iter().enumerate() {
                rec("sequency", k.to_string(), c.to_string());
            }
            print_stdout(&out.into_inner().unwrap())?;
        }
    }
    Ok(())
}
