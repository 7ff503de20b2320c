use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use quadseries_cli::{render, run, Command, OutputFormat, RunConfig};

#[derive(Parser)]
#[command(name = "quadseries", version, about = "Verify identities, evaluate series and run scans")]
struct Cli {
    /// JSON output (default)
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    #[arg(long, global = true)]
    csv: bool,
    /// Override the tolerance of every check
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Truncation point T for series
    #[arg(long, global = true)]
    trunc: Option<u64>,
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// L(1) cache file, read before and written after the run
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Allow scans beyond X = 100000
    #[arg(long = "long-run", global = true)]
    long_run: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run identity suites: lemmas, lvalues, twist, special, contour or all
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long = "max-D", default_value_t = 5000)]
        max_d: u64,
    },
    /// Evaluate one function or series at a point
    Eval {
        #[arg(long = "fn")]
        function: String,
        /// `re` or `re,im`
        #[arg(long, allow_negative_numbers = true)]
        s: Option<String>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long = "N")]
        level: Option<u64>,
        #[arg(long = "D", allow_negative_numbers = true)]
        disc: Option<i64>,
        #[arg(long)]
        x: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        r: Option<f64>,
        #[arg(long)]
        sigma: Option<f64>,
        /// Number of terms in the continued scattering expansion
        #[arg(long = "M")]
        m: Option<u32>,
    },
    /// Residue of the level-1 series at s = 1/2
    Residue {
        #[arg(long)]
        n: u64,
    },
    /// Partial-sum scans at logarithmic checkpoints
    Scan {
        #[arg(long)]
        thm3: bool,
        #[arg(long)]
        remark: bool,
        #[arg(long = "X")]
        x: u64,
        #[arg(long)]
        n: Option<u64>,
    },
    /// Coefficient lookup: c, circ or plus
    Coeff {
        #[arg(long, default_value = "c")]
        kind: String,
        #[arg(long = "N")]
        level: Option<u64>,
        #[arg(long = "D", allow_negative_numbers = true)]
        disc: Option<i64>,
        #[arg(long)]
        n: Option<u64>,
    },
}

fn set<T: ToString>(cfg: &mut RunConfig, key: &str, v: Option<T>) {
    if let Some(v) = v {
        cfg.params.insert(key.into(), v.to_string());
    }
}

fn config(cli: Cli) -> RunConfig {
    let command = match &cli.command {
        Cmd::Verify { .. } => Command::Verify,
        Cmd::Eval { .. } => Command::Eval,
        Cmd::Residue { .. } => Command::Residue,
        Cmd::Scan { .. } => Command::Scan,
        Cmd::Coeff { .. } => Command::Coeff,
    };
    let mut cfg = RunConfig::new(command);
    cfg.output_format = if cli.csv { OutputFormat::Csv } else { OutputFormat::Json };
    cfg.thread_count = cli.threads;
    cfg.cache_path = cli.cache;
    cfg.long_run = cli.long_run;
    set(&mut cfg, "tol", cli.tol);
    set(&mut cfg, "trunc", cli.trunc);
    match cli.command {
        Cmd::Verify { suite, max_d } => {
            set(&mut cfg, "suite", Some(suite));
            set(&mut cfg, "max-D", Some(max_d));
        }
        Cmd::Eval { function, s, n, level, disc, x, r, sigma, m } => {
            set(&mut cfg, "fn", Some(function));
            set(&mut cfg, "s", s);
            set(&mut cfg, "n", n);
            set(&mut cfg, "N", level);
            set(&mut cfg, "D", disc);
            set(&mut cfg, "x", x);
            set(&mut cfg, "r", r);
            set(&mut cfg, "sigma", sigma);
            set(&mut cfg, "M", m);
        }
        Cmd::Residue { n } => set(&mut cfg, "n", Some(n)),
        Cmd::Scan { thm3, remark, x, n } => {
            set(&mut cfg, "thm3", Some(thm3));
            set(&mut cfg, "remark", Some(remark));
            set(&mut cfg, "X", Some(x));
            set(&mut cfg, "n", n);
        }
        Cmd::Coeff { kind, level, disc, n } => {
            set(&mut cfg, "kind", Some(kind));
            set(&mut cfg, "N", level);
            set(&mut cfg, "D", disc);
            set(&mut cfg, "n", n);
        }
    }
    cfg
}

fn main() -> ExitCode {
    let cfg = config(Cli::parse());
    let (status, report) = run(&cfg);
    match render(&report, cfg.output_format) {
        Ok(text) => println!("{text}"),
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    }
    if let Some(row) = report.results.iter().find(|r| r.id == "config" && r.pass == Some(false)) {
        eprintln!("{}", row.note.as_deref().unwrap_or("invalid configuration"));
    }
    ExitCode::from(status.code() as u8)
}
