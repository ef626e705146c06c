use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use heckestat::arith::primes_between;
use heckestat::hecke::{build_integral, Pipeline};
use heckestat::modsym::{cuspidal, dim_oracle, sturm_bound, Domain};
use heckestat::survey::{
    compute_levels, emit_plot, evaluate_question, sweep, Cache, Constants, QuestionId, QuestionOptions, Stat,
    SweepConfig,
};

#[derive(Parser)]
#[command(name = "heckestat", version, about = "Residue-degree statistics of mod-p Hecke algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PipelineArg {
    A,
    B,
    Both,
}

impl PipelineArg {
    fn pipelines(self) -> Vec<Pipeline> {
        match self {
            Self::A => vec![Pipeline::A],
            Self::B => vec![Pipeline::B],
            Self::Both => vec![Pipeline::A, Pipeline::B],
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SinglePipeline {
    A,
    B,
}

impl From<SinglePipeline> for Pipeline {
    fn from(p: SinglePipeline) -> Self {
        match p {
            SinglePipeline::A => Pipeline::A,
            SinglePipeline::B => Pipeline::B,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Invariants,
    Oracle,
    Crosscheck,
}

#[derive(Subcommand)]
enum Command {
    /// Statistics for a single level.
    Compute {
        /// Residue characteristic; repeat or comma-separate for several.
        #[arg(long = "prime", value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 2)]
        weight: u32,
        #[arg(long)]
        level: u64,
        #[arg(long, value_enum, default_value = "a")]
        pipeline: PipelineArg,
        /// Print records as JSON lines.
        #[arg(long)]
        json: bool,
        /// Compute weights where forms of lower weight contribute mod p.
        #[arg(long)]
        allow_lower_weight: bool,
    },
    /// Compute all prime levels in a range into the cache, skipping cached ones.
    Sweep {
        #[arg(long = "prime", value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 2)]
        weight: u32,
        #[arg(long, default_value_t = 2)]
        levels_from: u64,
        #[arg(long)]
        levels_to: u64,
        #[arg(long, value_enum, default_value = "a")]
        pipeline: PipelineArg,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        cache: PathBuf,
        #[arg(long)]
        allow_lower_weight: bool,
    },
    /// Write gnuplot data, script and fit for one statistic.
    Plot {
        #[arg(long)]
        cache: PathBuf,
        #[arg(long)]
        stat: Stat,
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 2)]
        weight: u32,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "a")]
        pipeline: SinglePipeline,
        #[arg(long)]
        include_level_equals_p: bool,
    },
    /// Check one of the growth inequalities on cached levels.
    Question(QuestionArgs),
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Cache to check (invariants suite).
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Largest level for the oracle and crosscheck suites.
        #[arg(long, default_value_t = 199)]
        max_level: u64,
    },
}

#[derive(Args)]
struct QuestionArgs {
    #[arg(long)]
    cache: PathBuf,
    #[arg(long)]
    id: String,
    #[arg(long)]
    prime: u64,
    #[arg(long, default_value_t = 2)]
    weight: u32,
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c2: Option<f64>,
    #[arg(long = "big-c", allow_hyphen_values = true)]
    big_c: Option<f64>,
    #[arg(long = "big-d", allow_hyphen_values = true)]
    big_d: Option<f64>,
    #[arg(long, value_enum, default_value = "a")]
    pipeline: SinglePipeline,
    #[arg(long)]
    include_level_equals_p: bool,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Returns whether the command's checks passed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Compute { primes, weight, level, pipeline, json, allow_lower_weight } => {
            let records = compute_levels(&primes, weight, level, &pipeline.pipelines(), allow_lower_weight)?;
            for r in records {
                if json {
                    println!("{}", serde_json::to_string(&r)?);
                } else {
                    println!(
                        "p={} k={} N={} pipeline={} d={} #Spec={} a={} b={}/{} c={} semisimple={} degrees={:?} local_dims={:?} ({} ms)",
                        r.p, r.k, r.n, r.pipeline, r.d, r.num_max_ideals, r.a, r.b_num, r.b_den, r.c, r.semisimple,
                        r.residue_degrees, r.local_dims, r.wall_time_ms
                    );
                }
            }
            Ok(true)
        }
        Command::Sweep { primes, weight, levels_from, levels_to, pipeline, jobs, cache, allow_lower_weight } => {
            let cfg = SweepConfig {
                primes,
                k: weight,
                levels: primes_between(levels_from, levels_to),
                pipelines: pipeline.pipelines(),
                jobs,
                cache,
                allow_lower_weight,
            };
            let rep = sweep(&cfg)?;
            println!(
                "computed {} records, {} already cached, {} corrupt cache lines skipped",
                rep.computed, rep.already_cached, rep.corrupt_lines
            );
            for (n, why) in &rep.failed {
                println!("failed N={n}: {why}");
            }
            Ok(rep.failed.is_empty())
        }
        Command::Plot { cache, stat, prime, weight, out, pipeline, include_level_equals_p } => {
            let c = Cache::load(&cache)?;
            let files = emit_plot(&c, stat, prime, weight, pipeline.into(), include_level_equals_p, &out)?;
            let alpha = std::fs::read_to_string(&files.fit)?;
            println!("{}\n{}\n{}", files.data.display(), files.script.display(), files.fit.display());
            print!("{alpha}");
            Ok(true)
        }
        Command::Question(q) => question(q),
        Command::Verify { suite, cache, max_level } => match suite {
            Suite::Invariants => verify_invariants(cache.context("--cache is required for the invariants suite")?),
            Suite::Oracle => verify_oracle(max_level),
            Suite::Crosscheck => verify_crosscheck(max_level),
        },
    }
}

fn question(q: QuestionArgs) -> Result<bool> {
    let cache = Cache::load(&q.cache)?;
    let id: QuestionId = q.id.parse()?;
    let constants = Constants {
        epsilon: q.epsilon,
        alpha: q.alpha,
        beta: q.beta,
        c1: q.c1,
        c2: q.c2,
        big_c: q.big_c,
        big_d: q.big_d,
    };
    let opts = QuestionOptions { pipeline: q.pipeline.into(), include_level_equals_p: q.include_level_equals_p };
    let rep = evaluate_question(&cache, id, q.prime, q.weight, &constants, opts)?;
    if q.json {
        println!("{}", serde_json::to_string_pretty(&rep)?);
    } else {
        println!(
            "question {} p={} k={}: {} levels checked, {} excluded, {} counterexamples",
            rep.id,
            rep.p,
            rep.k,
            rep.verdicts.len(),
            rep.excluded.len(),
            rep.counterexamples.len()
        );
        for v in rep.verdicts.iter().filter(|v| !v.pass) {
            println!(
                "  N={} d={} value={} lower={} upper={}",
                v.n,
                v.d,
                v.value,
                v.lower.map_or("-".into(), |x| format!("{x:.4}")),
                v.upper.map_or("-".into(), |x| format!("{x:.4}"))
            );
        }
        for n in &rep.notes {
            println!("note: {n}");
        }
    }
    Ok(rep.all_pass())
}

fn verify_invariants(path: PathBuf) -> Result<bool> {
    if !path.exists() {
        bail!("{} does not exist", path.display());
    }
    let cache = Cache::load(&path)?;
    for s in &cache.skipped {
        println!("line {}: {}", s.line, s.reason);
    }
    println!("{} records valid, {} lines rejected", cache.len(), cache.skipped.len());
    Ok(cache.skipped.is_empty())
}

fn verify_oracle(max_level: u64) -> Result<bool> {
    let mut ok = true;
    for n in primes_between(2, max_level) {
        let cusp = cuspidal(n, 2, Domain::Rational)?;
        let alg = build_integral(&cusp, sturm_bound(n, 2))?;
        let expected = dim_oracle(n, 2)? as usize;
        let ss = alg.is_semisimple_char0()?;
        if alg.rank() != expected || !ss {
            ok = false;
            println!("N={n}: rank {} (expected {expected}), semisimple over Q: {ss}", alg.rank());
        }
    }
    println!("oracle suite up to {max_level}: {}", if ok { "pass" } else { "FAIL" });
    Ok(ok)
}

fn verify_crosscheck(max_level: u64) -> Result<bool> {
    let mut findings = 0;
    for n in primes_between(2, max_level) {
        let records = compute_levels(&[2, 3, 5], 2, n, &[Pipeline::A, Pipeline::B], false)?;
        let (a, b) = records.split_at(3);
        for (ra, rb) in a.iter().zip(b) {
            if (ra.d, ra.num_max_ideals, &ra.residue_degrees) != (rb.d, rb.num_max_ideals, &rb.residue_degrees) {
                findings += 1;
                println!(
                    "finding p={} N={}: A has d={} degrees {:?}, B has d={} degrees {:?}",
                    ra.p, n, ra.d, ra.residue_degrees, rb.d, rb.residue_degrees
                );
            }
        }
    }
    println!("crosscheck up to {max_level}: {findings} differences between pipelines");
    Ok(true)
}
