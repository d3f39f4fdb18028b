use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use cwmix::equality::{DEFAULT_TOL_MERGE, DEFAULT_TOL_PARAM};
use cwmix::smu::DEFAULT_TOL_RANK;
use cwmix::{
    build_m2_example, build_polygon_example, compare_via_projections, gen_strong_smu, is_strong_smu,
    project_mixture, required_lines, verify_counterexample, CertMode, Counterexample, Tolerances, Verdict,
};
use cwmix_cli::{
    exit, parse_direction, read_directions, read_mixture, resolve_seed, to_json, write_json,
    CliError, DirectionsFile, SEED_ENV,
};

/// Certify equality or distinctness of Gaussian and t mixtures through
/// finitely many 1D projections.
#[derive(Parser)]
#[command(name = "cwmix", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Randomized,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    M2,
    Polygon,
}

#[derive(Subcommand)]
enum Command {
    /// Number of lines sufficient for mixtures of `m` components in dimension `d`.
    RequiredLines {
        #[arg(long)]
        dim: u64,
        #[arg(long)]
        mixture_size: u64,
    },
    /// Draw a random direction set and certify it as strong.
    #[command(group(ArgGroup::new("size").required(true).args(["mixture_size", "count"])))]
    GenDirections {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        mixture_size: Option<u64>,
        #[arg(long)]
        count: Option<usize>,
        /// Defaults to $CWMIX_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TOL_RANK)]
        tol_rank: f64,
        #[arg(long, default_value_t = 10)]
        max_retries: usize,
    },
    /// Certify a direction set (exit 0 strong, 3 not strong, 4 unknown).
    CheckDirections {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_TOL_RANK)]
        tol_rank: f64,
    },
    /// Project a mixture onto the line spanned by a direction.
    Project {
        #[arg(long)]
        mixture: PathBuf,
        /// Comma-separated coordinates, e.g. "1,-1".
        #[arg(long, allow_hyphen_values = true)]
        direction: String,
    },
    /// Compare two mixtures on a direction set (exit 0 equal, 2 distinct).
    Compare {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
        #[arg(long)]
        directions: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL_PARAM)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_TOL_MERGE)]
        tol_merge: f64,
    },
    /// Write one of the built-in counterexamples and verify it.
    Counterexample {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Files are written as <prefix>P.json, <prefix>Q.json, <prefix>S.json.
        #[arg(long)]
        out_prefix: String,
    },
}

fn positive(what: &'static str, value: f64) -> Result<f64, CliError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(CliError::BadValue {
            what,
            value: value.to_string(),
        })
    }
}

fn seed(flag: Option<u64>) -> Result<u64, CliError> {
    resolve_seed(flag, std::env::var(SEED_ENV).ok().as_deref())
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::RequiredLines { dim, mixture_size } => {
            println!("{}", required_lines(dim, mixture_size)?);
            Ok(exit::SUCCESS)
        }
        Command::GenDirections {
            dim,
            mixture_size,
            count,
            seed: seed_flag,
            out,
            tol_rank,
            max_retries,
        } => {
            let count = match (count, mixture_size) {
                (Some(c), _) => c,
                (None, Some(m)) => usize::try_from(required_lines(dim as u64, m)?)
                    .map_err(|_| cwmix::Error::Overflow("direction count"))?,
                (None, None) => unreachable!("clap requires one of the two"),
            };
            let (set, report) = gen_strong_smu(
                dim,
                count,
                seed(seed_flag)?,
                max_retries,
                positive("tol-rank", tol_rank)?,
            )?;
            let file = DirectionsFile {
                dim,
                vectors: set.vectors().to_vec(),
                certification: Some(report),
            };
            emit(out.as_deref(), &to_json(&file))?;
            Ok(exit::SUCCESS)
        }
        Command::CheckDirections {
            file,
            mode,
            samples,
            seed: seed_flag,
            tol_rank,
        } => {
            let set = read_directions(&file)?;
            let mode = match mode {
                Mode::Exact => CertMode::Exact,
                Mode::Randomized => CertMode::Randomized {
                    samples,
                    seed: seed(seed_flag)?,
                },
            };
            let report = is_strong_smu(&set, positive("tol-rank", tol_rank)?, mode)?;
            print!("{}", to_json(&report));
            Ok(match report.is_strong {
                Some(true) => exit::SUCCESS,
                Some(false) => exit::NOT_CERTIFIED,
                None => exit::INCONCLUSIVE,
            })
        }
        Command::Project { mixture, direction } => {
            let model = read_mixture(&mixture)?;
            let x = parse_direction(&direction)?;
            print!("{}", to_json(&project_mixture(&model, &x)?));
            Ok(exit::SUCCESS)
        }
        Command::Compare {
            p,
            q,
            directions,
            tol,
            tol_merge,
        } => {
            let p = read_mixture(&p)?;
            let q = read_mixture(&q)?;
            let s = read_directions(&directions)?;
            let tol = Tolerances {
                tol_param: positive("tol", tol)?,
                tol_merge: positive("tol-merge", tol_merge)?,
            };
            let verdict = compare_via_projections(&p, &q, &s, &tol)?;
            print!("{}", to_json(&verdict));
            Ok(match verdict.verdict {
                Verdict::Equal => exit::SUCCESS,
                Verdict::Distinct => exit::DISTINCT,
            })
        }
        Command::Counterexample { which, m, out_prefix } => {
            let Counterexample { p, q, s } = match which {
                Which::M2 => build_m2_example(),
                Which::Polygon => build_polygon_example(m)?,
            };
            write_json(Path::new(&format!("{out_prefix}P.json")), &p.to_raw())?;
            write_json(Path::new(&format!("{out_prefix}Q.json")), &q.to_raw())?;
            let directions = DirectionsFile {
                dim: s.dim(),
                vectors: s.vectors().to_vec(),
                certification: None,
            };
            write_json(Path::new(&format!("{out_prefix}S.json")), &directions)?;
            let record = verify_counterexample(&p, &q, &s, &Tolerances::default(), DEFAULT_TOL_RANK)?;
            print!("{}", to_json(&record));
            Ok(if record.pass {
                exit::SUCCESS
            } else {
                exit::NOT_CERTIFIED
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::ERROR } else { exit::SUCCESS });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::ERROR)
        }
    }
}

