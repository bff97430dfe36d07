//! Command-line interface: units and regulators, generalized Pell
//! equations, simultaneous Pellian systems with effective bounds, and
//! simultaneous approximation verification.

mod config;
mod report;

use clap::{Args, Parser, Subcommand};
use config::{parse_exact_ratio, OutputFormat, RunConfig};
use num_bigint::BigInt;
use pellian::system::BoundRoute;
use pellian::Error;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "pellian",
    version,
    about = "Real quadratic units, Pell equations, and effective simultaneous approximation",
    after_help = "CSV columns:\n  \
      unit:     D,x,y,norm,totally_positive,log_lo,log_hi,check_applicable,check_regulator_lo,check_regulator_hi\n  \
      pell:     x,y,class_index,power\n  \
      system:   x,y,z\n  \
      exponent: a,b,route,tau_lo,tau_hi,mu_eff_upper_hi,regulator_product_lo,regulator_product_hi,has_log_star,threshold_log10_hi\n  \
      verify:   a,b,c,mu,q_max,pass,n_violations,worst_q,worst_margin_lo,exact_fallbacks\n  \
      records:  q,dist_a,dist_b,max_dist,local_exponent\n  \
      sweep:    a,b,admissible,reason,tau_lo,tau_hi,mu_eff_upper_hi,regulator_product_lo,regulator_product_hi,has_log_star,threshold_log10_hi,verify_pass,verify_violations\n\n\
    Exit codes: 0 ok, 2 invalid input, 3 undecidable at the precision ceiling, 4 internal invariant violation.\n\
    Environment: PELLIAN_PRECISION_CEILING overrides the precision ceiling."
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Output format: json, csv, or text
    #[arg(long, global = true)]
    format: Option<OutputFormat>,
    /// Starting interval precision in bits
    #[arg(long, global = true)]
    precision_start: Option<u32>,
    /// Interval precision ceiling in bits
    #[arg(long, global = true)]
    precision_ceiling: Option<u32>,
    /// Seed recorded in reports (randomized probes live in the test suite)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Config file with `key = value` lines
    #[arg(long, global = true)]
    config: Option<std::path::PathBuf>,
    /// Include wall-clock timing (breaks byte-for-byte determinism)
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Fundamental and totally positive units of Z[sqrt(D)], with the
    /// regulator bound check where applicable
    Unit { d: BigInt },
    /// Solve x^2 - D y^2 = N completely up to a y cap
    #[command(allow_negative_numbers = true)]
    Pell {
        d: BigInt,
        n: BigInt,
        /// Largest y to include
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Solve the simultaneous system x^2 - a y^2 = u, z^2 - b y^2 = v
    #[command(allow_negative_numbers = true)]
    System {
        a: BigInt,
        b: BigInt,
        u: BigInt,
        v: BigInt,
        #[arg(long)]
        cap: Option<u64>,
        /// Effective-bound route: thm21, thm22, or both
        #[arg(long, default_value = "thm21")]
        route: String,
    },
    /// Effective simultaneous irrationality exponent for (sqrt a, sqrt b)
    Exponent {
        a: BigInt,
        b: BigInt,
        #[arg(long, default_value = "both")]
        route: String,
    },
    /// Check max(||q sqrt a||, ||q sqrt b||) > c q^(1-mu) for q up to a cap
    Verify {
        a: BigInt,
        b: BigInt,
        /// Exact rational c (e.g. 1e-7 or 1/10000000)
        #[arg(long)]
        c: String,
        /// Exact rational exponent mu > 1 (e.g. 1.913)
        #[arg(long)]
        mu: String,
        #[arg(long)]
        qmax: Option<u64>,
    },
    /// Record denominators of the simultaneous approximation to
    /// (sqrt a, sqrt b), as CSV by default
    Records {
        a: BigInt,
        b: BigInt,
        #[arg(long)]
        qmax: Option<u64>,
    },
    /// Exponent reports (and optional verification) over a rectangle of
    /// pairs, as CSV
    Sweep {
        /// Range of a, e.g. 2..10 (inclusive)
        #[arg(long)]
        a: String,
        /// Range of b, e.g. 2..10 (inclusive)
        #[arg(long)]
        b: String,
        #[arg(long, default_value = "thm21")]
        route: String,
        #[arg(long)]
        qmax: Option<u64>,
        #[arg(long)]
        c: Option<String>,
        #[arg(long)]
        mu: Option<String>,
    },
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(stdout) => {
            print!("{stdout}");
            0
        }
        Err(e) => {
            let kind = match &e {
                Error::PrecisionCeiling { .. } => "precision_ceiling",
                Error::InvariantViolation(_) => "invariant_violation",
                _ => "invalid_input",
            };
            eprintln!("{}", serde_json::json!({ "error": e.to_string(), "kind": kind }));
            match e {
                Error::PrecisionCeiling { .. } => 3,
                Error::InvariantViolation(_) => 4,
                _ => 2,
            }
        }
    }
}

fn build_config(g: &GlobalArgs, default_format: OutputFormat) -> Result<RunConfig, Error> {
    let mut cfg = RunConfig { format: default_format, ..RunConfig::default() };
    if let Some(path) = &g.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("config {}: {e}", path.display())))?;
        cfg.apply_file(&text)?;
    }
    cfg.apply_env()?;
    if let Some(f) = g.format {
        cfg.format = f;
    }
    if let Some(p) = g.precision_start {
        cfg.precision_start = p;
    }
    if let Some(p) = g.precision_ceiling {
        cfg.precision_ceiling = p;
    }
    if let Some(s) = g.seed {
        cfg.seed = s;
    }
    cfg.timing = g.timing;
    cfg.precision()?; // validate early
    Ok(cfg)
}

fn parse_routes(s: &str) -> Result<Vec<BoundRoute>, Error> {
    match s {
        "thm21" => Ok(vec![BoundRoute::Thm21]),
        "thm22" => Ok(vec![BoundRoute::Thm22]),
        "both" => Ok(vec![BoundRoute::Thm21, BoundRoute::Thm22]),
        other => Err(Error::InvalidArgument(format!(
            "unknown route {other}; use thm21, thm22 or both"
        ))),
    }
}

fn parse_range(s: &str) -> Result<(i64, i64), Error> {
    let bad = || Error::InvalidArgument(format!("range must look like 2..10, got {s}"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn execute(cli: Cli) -> Result<String, Error> {
    let default_format = match &cli.command {
        Command::Records { .. } | Command::Sweep { .. } => OutputFormat::Csv,
        _ => OutputFormat::Json,
    };
    let cfg = build_config(&cli.global, default_format)?;
    let start = Instant::now();
    let out = match &cli.command {
        Command::Unit { d } => report::cmd_unit(&cfg, d)?,
        Command::Pell { d, n, cap } => report::cmd_pell(&cfg, d, n, cap.unwrap_or(cfg.y_cap))?,
        Command::System { a, b, u, v, cap, route } => {
            let routes = parse_routes(route)?;
            report::cmd_system(&cfg, a, b, u, v, cap.unwrap_or(cfg.y_cap), &routes)?
        }
        Command::Exponent { a, b, route } => {
            let routes = parse_routes(route)?;
            report::cmd_exponent(a, b, &routes)?
        }
        Command::Verify { a, b, c, mu, qmax } => {
            let c = parse_exact_ratio(c)?;
            let mu = parse_exact_ratio(mu)?;
            report::cmd_verify(a, b, &c, &mu, qmax.unwrap_or(cfg.q_max))?
        }
        Command::Records { a, b, qmax } => report::cmd_records(a, b, qmax.unwrap_or(cfg.q_max))?,
        Command::Sweep { a, b, route, qmax, c, mu } => {
            let routes = parse_routes(route)?;
            if routes.len() != 1 {
                return Err(Error::InvalidArgument("sweep takes a single route".into()));
            }
            let c = c.as_deref().map(parse_exact_ratio).transpose()?;
            let mu = mu.as_deref().map(parse_exact_ratio).transpose()?;
            if c.is_some() != mu.is_some() {
                return Err(Error::InvalidArgument("--c and --mu come together".into()));
            }
            report::cmd_sweep(
                parse_range(a)?,
                parse_range(b)?,
                routes[0],
                qmax.unwrap_or(cfg.q_max),
                c,
                mu,
            )?
        }
    };
    let elapsed = cfg.timing.then(|| start.elapsed().as_millis());
    Ok(report::render(&cfg, out, elapsed)?.stdout)
}
