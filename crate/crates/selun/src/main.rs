use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use selun::diff::{run_problem, run_random};
use selun::format::{json_outcome, json_substitution, parse_source, print_outcome, print_substitution, Source};
use selun::gen::{rng, GenConfig};
use selun::regress;
use selun_core::selective::{solve, solve_all, Algorithm, Problem, SolveConfig};

#[derive(Parser)]
#[command(name = "selun", version, about = "Selective unification solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Su,
    SuStar,
    SuLin,
    Oracle,
}

impl From<Algo> for Algorithm {
    fn from(a: Algo) -> Algorithm {
        match a {
            Algo::Su => Algorithm::Su,
            Algo::SuStar => Algorithm::SuStar,
            Algo::SuLin => Algorithm::SuLin,
            Algo::Oracle => Algorithm::Oracle,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem file.
    Solve {
        file: PathBuf,
        /// Defaults to su-lin for linear inputs, su-star otherwise.
        #[arg(long, value_enum)]
        algo: Option<Algo>,
        /// Depth horizon for Aσ (default: deepest input atom + 1).
        #[arg(long)]
        max_depth: Option<usize>,
        /// Every solution class within the bound.
        #[arg(long)]
        all: bool,
        /// Only consider linear substitutions.
        #[arg(long)]
        linear_only: bool,
        /// Oracle candidate cap for non-linear search (default 20000).
        #[arg(long)]
        budget: Option<usize>,
        /// Shuffle the signature order.
        #[arg(long)]
        seed: Option<u64>,
        /// Structured output.
        #[arg(long)]
        json: bool,
    },
    /// Cross-check solvers on a file or on random problems.
    Diff {
        file: Option<PathBuf>,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Algo::Su, Algo::SuStar, Algo::SuLin, Algo::Oracle])]
        algos: Vec<Algo>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Generate linear problems only.
        #[arg(long)]
        linear: bool,
        /// Depth horizon for Aσ (default: deepest input atom + 1).
        #[arg(long)]
        max_depth: Option<usize>,
        /// Oracle candidate cap for non-linear search (default 20000).
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Check the worked-example fixtures.
    Regress {
        /// Also write the fixture files to this directory.
        #[arg(long)]
        write: Option<PathBuf>,
    },
}

impl std::fmt::Display for Algo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(Algorithm::from(*self).name())
    }
}

fn load(path: &PathBuf) -> anyhow::Result<Source> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let text = String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))?;
    parse_source(&text).map_err(|e| anyhow::anyhow!("{}:{}", path.display(), e))
}

fn shuffle_signature(p: Problem, seed: u64) -> Problem {
    let mut order: Vec<usize> = (0..p.signature.len()).collect();
    order.shuffle(&mut rng(seed));
    let sig = p.signature.permuted(&order);
    p.with_signature(sig)
}

#[allow(clippy::too_many_arguments)]
fn run_solve(
    file: PathBuf,
    algo: Option<Algo>,
    max_depth: Option<usize>,
    all: bool,
    linear_only: bool,
    budget: Option<usize>,
    seed: Option<u64>,
    json: bool,
) -> anyhow::Result<bool> {
    let src = load(&file)?;
    let mut p = src.problem;
    if let Some(s) = seed {
        p = shuffle_signature(p, s);
    }
    let algorithm = match algo {
        Some(a) => a.into(),
        None if p.is_linear() => {
            eprintln!("selun: using su-lin (linear atom and positive atoms)");
            Algorithm::SuLin
        }
        None => {
            eprintln!("selun: using su-star (non-linear input)");
            Algorithm::SuStar
        }
    };
    let cfg = SolveConfig {
        max_depth: max_depth.or(src.depth),
        linear_only,
        budget,
    };
    if !p.is_linear() {
        eprintln!(
            "selun: warning: non-linear input; a fail at bound {} is not conclusive and may need a larger --max-depth",
            cfg.bound(&p)
        );
    }
    if all {
        let sols = solve_all(&p, algorithm, &cfg)?;
        if json {
            let rows: Vec<_> = sols.iter().map(|s| json_substitution(s, &p)).collect();
            println!("{}", serde_json::to_string_pretty(&rows)?);
        } else if sols.is_empty() {
            println!("fail (bound={}, {})", cfg.bound(&p), if p.fail_is_conclusive(cfg.bound(&p)) { "conclusive" } else { "inconclusive" });
        } else {
            for s in &sols {
                println!("{}", print_substitution(s, &p));
            }
        }
        return Ok(!sols.is_empty());
    }
    let out = solve(&p, algorithm, &cfg)?;
    if out.budget_exhausted {
        eprintln!(
            "selun: warning: oracle stopped after {} candidates; raise --budget to search further",
            out.stats.candidates_tested
        );
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&json_outcome(&out, &p))?);
    } else {
        println!("{}", print_outcome(&out, &p));
    }
    Ok(!out.is_fail())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve {
            file,
            algo,
            max_depth,
            all,
            linear_only,
            budget,
            seed,
            json,
        } => run_solve(file, algo, max_depth, all, linear_only, budget, seed, json).map(|ok| if ok { 0 } else { 1 }),
        Command::Diff {
            file,
            algos,
            trials,
            seed,
            linear,
            max_depth,
            budget,
        } => (|| {
            let algos: Vec<Algorithm> = algos.into_iter().map(Algorithm::from).collect();
            let cfg = SolveConfig {
                max_depth,
                linear_only: false,
                budget,
            };
            let report = match file {
                Some(f) => run_problem(&load(&f)?.problem, &algos, &cfg),
                None => {
                    let gen = if linear { GenConfig::linear() } else { GenConfig::default() };
                    run_random(&algos, trials, seed, &gen, &cfg)
                }
            };
            print!("{}", report.render());
            Ok(if report.violations() == 0 { 0 } else { 1 })
        })(),
        Command::Regress { write } => (|| {
            if let Some(dir) = write {
                for p in regress::write(&dir)? {
                    eprintln!("wrote {}", p.display());
                }
            }
            let checks = regress::run();
            let failed = checks.iter().filter(|c| !c.ok()).count();
            for c in &checks {
                println!(
                    "{} {:<26} {:<8} {}",
                    if c.ok() { "ok  " } else { "FAIL" },
                    c.fixture,
                    c.algorithm.name(),
                    c.got
                );
            }
            println!("{}/{} fixtures match", checks.len() - failed, checks.len());
            Ok(if failed == 0 { 0 } else { 1 })
        })(),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(2)
        }
    }
}
