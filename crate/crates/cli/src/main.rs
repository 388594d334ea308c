mod config;
mod run;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ffdioph::boxcount::{BoxCountRun, Mode};
use ffdioph::exponents::{FamilyConfig, FamilyKind, PsiConfig};
use ffdioph::measure::SetKind;
use ffdioph::serde_util::parse_rational;
use ffdioph::verify::VerifyParams;
use ffdioph::FieldSpec;
use num_rational::BigRational;

use config::{DimensionTask, Quantity, RunConfig, SetSpec, Task};

/// Exact computations for metric Diophantine approximation over F_k((1/X)).
#[derive(Parser, Debug)]
#[command(name = "ffdioph", version)]
struct Cli {
    /// Run a JSON config instead of a subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, env = "FFDIOPH_THREADS")]
    threads: Option<usize>,
    /// Write here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Order of the coefficient field.
    #[arg(long, global = true, default_value_t = 2)]
    k: u32,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exhaustive check of one lemma on a small grid.
    Verify {
        lemma: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        degmax: Option<usize>,
        #[arg(long)]
        rmax: Option<i64>,
        #[arg(long = "Nmax")]
        n_max: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Exact measure of a resonant set or an intersection of several.
    Measure {
        #[arg(long, value_enum, default_value_t = KindArg::BPrime)]
        kind: KindArg,
        /// Entries separated by ';', coefficients by ',' (lowest first).
        #[arg(long, required = true)]
        q: Vec<String>,
        /// ε = k^-r, one per --q.
        #[arg(long, required = true, allow_negative_numbers = true)]
        r: Vec<i64>,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        depth: Option<usize>,
        /// Recount by enumerating points.
        #[arg(long)]
        brute: bool,
    },
    /// Exponent estimators.
    Exponents {
        #[arg(value_enum)]
        quantity: Quantity,
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        psi: Option<String>,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long = "Nmax", default_value_t = 12)]
        n_max: usize,
        #[arg(long, default_value_t = 0.05)]
        tolerance: f64,
    },
    /// Dimension formulas and the s-length diagnostic.
    #[command(subcommand)]
    Dimension(DimensionCommand),
    /// Moments of the counting function ν_t.
    #[command(subcommand)]
    Stochastic(StochasticCommand),
    /// Box counting of the finite surrogate.
    Boxcount {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        psi: String,
        #[arg(long = "T")]
        depth: usize,
        #[arg(long = "J")]
        cutoff: Option<usize>,
        /// Lowest norm block k^j of the band; defaults to J - 1.
        #[arg(long)]
        lowest: Option<usize>,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
    },
}

#[derive(Subcommand, Debug)]
enum DimensionCommand {
    Thm1 {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long = "vS")]
        v_s: String,
        #[arg(long)]
        lambda: String,
    },
    Thm2 {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eta: String,
    },
    Slength {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value = "1/10")]
        epsilon: String,
        #[arg(long)]
        s: String,
        /// log_k M.
        #[arg(long = "M", default_value_t = 1)]
        m_exponent: usize,
        #[arg(long = "Nmax", default_value_t = 16)]
        n_max: usize,
    },
}

#[derive(Subcommand, Debug)]
enum StochasticCommand {
    Moments {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long = "Nt")]
        n_t: usize,
        #[arg(long, default_value = "1/10")]
        delta: String,
        #[arg(long = "vS")]
        v_s: Option<String>,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = 0)]
        samples: u64,
    },
}

#[derive(Args, Debug)]
struct FamilyArgs {
    /// `all`, `monic`, or a JSON family such as {"kind":"LACUNARY","powers_of":2}.
    #[arg(long, default_value = "all")]
    family: String,
    #[arg(long, default_value_t = 1)]
    m: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    B,
    BPrime,
    BDprime,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Propagation,
    Auto,
}

/// Usage and configuration problems exit with 2.
struct UsageError(anyhow::Error);

fn rational(text: &str) -> Result<BigRational> {
    parse_rational(text).ok_or_else(|| anyhow!("not a rational number: {text:?}"))
}

fn family(args: &FamilyArgs) -> Result<FamilyConfig> {
    let kind = match args.family.trim() {
        "all" => FamilyKind::AllNonzero,
        "monic" => FamilyKind::MonicCoords,
        json if json.starts_with('{') => serde_json::from_str(json).context("family JSON")?,
        other => bail!("unknown family {other:?}; use all, monic or a JSON object"),
    };
    Ok(FamilyConfig { kind, m: args.m })
}

/// `power:<v>`, `power-log:<v>:<a>` or a JSON object.
fn psi(text: &str) -> Result<PsiConfig> {
    let text = text.trim();
    if text.starts_with('{') {
        return serde_json::from_str(text).context("psi JSON");
    }
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        ["power", v] => Ok(PsiConfig::Power { v: rational(v)? }),
        ["power-log", v, a] => Ok(PsiConfig::PowerLog { v: rational(v)?, a: rational(a)? }),
        _ => bail!("unknown psi {text:?}; use power:<v>, power-log:<v>:<a> or a JSON object"),
    }
}

fn poly_vector(text: &str) -> Result<Vec<Vec<u32>>> {
    text.split(';')
        .map(|entry| {
            entry
                .split(',')
                .map(|c| c.trim().parse::<u32>().with_context(|| format!("bad coefficient in {text:?}")))
                .collect()
        })
        .collect()
}

fn config_from_flags(cli: &Cli, command: &Command) -> Result<RunConfig> {
    let field = FieldSpec::of_order(cli.k)?.config();
    let task = match command {
        Command::Verify { lemma, m, n, degmax, rmax, n_max, samples } => Task::Verify {
            lemma: lemma.clone(),
            params: VerifyParams {
                k: Some(cli.k),
                m: *m,
                n: *n,
                degmax: *degmax,
                rmax: *rmax,
                n_max: *n_max,
                samples: *samples,
                seed: Some(cli.seed),
            },
        },
        Command::Measure { kind, q, r, n, depth, brute } => {
            if q.len() != r.len() {
                bail!("give one --r per --q");
            }
            let kind = match kind {
                KindArg::B => SetKind::B,
                KindArg::BPrime => SetKind::BPrime,
                KindArg::BDprime => SetKind::BDoublePrime,
            };
            let sets = q.iter().zip(r).map(|(q, &r)| Ok(SetSpec { kind, q: poly_vector(q)?, r })).collect::<Result<_>>()?;
            Task::Measure { sets, n: *n, depth: *depth, brute: *brute }
        }
        Command::Exponents { quantity, family: f, psi: p, n, n_max, tolerance } => Task::Exponents {
            quantity: *quantity,
            family: family(f)?,
            psi: p.as_deref().map(psi).transpose()?,
            n: *n,
            n_max: *n_max,
            tolerance: *tolerance,
        },
        Command::Dimension(d) => Task::Dimension(match d {
            DimensionCommand::Thm1 { m, n, v_s, lambda } => {
                DimensionTask::Thm1 { m: *m, n: *n, v_s: rational(v_s)?, lambda: rational(lambda)? }
            }
            DimensionCommand::Thm2 { m, n, eta } => DimensionTask::Thm2 { m: *m, n: *n, eta: rational(eta)? },
            DimensionCommand::Slength { family: f, n, lambda, epsilon, s, m_exponent, n_max } => DimensionTask::Slength {
                family: family(f)?,
                n: *n,
                lambda: rational(lambda)?,
                epsilon: rational(epsilon)?,
                s: rational(s)?,
                m_exponent: *m_exponent,
                n_max: *n_max,
            },
        }),
        Command::Stochastic(StochasticCommand::Moments { family: f, n_t, delta, v_s, n, depth, samples }) => Task::Stochastic {
            family: family(f)?,
            n_t: *n_t,
            delta: rational(delta)?,
            v_s: v_s.as_deref().map(rational).transpose()?,
            n: *n,
            depth: *depth,
            samples: *samples,
        },
        Command::Boxcount { family: f, n, psi: p, depth, cutoff, lowest, mode } => Task::Boxcount {
            family: family(f)?,
            psi: psi(p)?,
            run: BoxCountRun {
                n: *n,
                depth: *depth,
                cutoff: *cutoff,
                lowest_block: *lowest,
                mode: match mode {
                    ModeArg::Exhaustive => Mode::Exhaustive,
                    ModeArg::Propagation => Mode::Propagation,
                    ModeArg::Auto => Mode::Auto,
                },
            },
        },
    };
    Ok(RunConfig { field, seed: cli.seed, task })
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    match (&cli.config, &cli.command) {
        (Some(_), Some(_)) => bail!("give either --config or a subcommand, not both"),
        (None, None) => bail!("no subcommand given; see --help"),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("invalid config {}", path.display()))
        }
        (None, Some(command)) => config_from_flags(cli, command),
    }
}

fn render(cli: &Cli, cfg: &RunConfig, outcome: &run::Outcome) -> Result<Vec<u8>> {
    match cli.format {
        Format::Json => {
            let doc = serde_json::json!({ "config": cfg, "result": outcome.result });
            let mut text = serde_json::to_vec_pretty(&doc)?;
            text.push(b'\n');
            Ok(text)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for record in &outcome.table {
                w.write_record(record)?;
            }
            Ok(w.into_inner().map_err(|e| anyhow!("{e}"))?)
        }
    }
}

fn main_inner(cli: &Cli) -> std::result::Result<bool, UsageError> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(UsageError(anyhow!("--threads must be at least 1")));
        }
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| UsageError(e.into()))?;
    }
    let cfg = load_config(cli).map_err(UsageError)?;
    let outcome = run::execute(&cfg).map_err(UsageError)?;
    let bytes = render(cli, &cfg, &outcome).map_err(UsageError)?;
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &bytes).with_context(|| format!("writing {}", path.display())),
        None => std::io::stdout().write_all(&bytes).context("writing stdout"),
    };
    written.map_err(UsageError)?;
    Ok(outcome.passed != Some(false))
}

/// 0 on success, 1 when a verification failed, 2 on usage or config errors.
fn exit_code(outcome: &std::result::Result<bool, UsageError>) -> u8 {
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(_) => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = main_inner(&cli);
    if let Err(UsageError(e)) = &outcome {
        eprintln!("error: {e:#}");
    }
    ExitCode::from(exit_code(&outcome))
}
