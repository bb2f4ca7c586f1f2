//! Experiment commands: argument parsing, config files, exit codes.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Parser, Subcommand};

use crate::commands::Context;
use crate::config::{ConfigError, RunConfig, Settings};
use crate::output::Output;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDING: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "nfdiv", version, about = "Ideal counts, divisor sums and their asymptotics over number fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// `key = value` config file; flags override its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Field specs: quad:D, cyclo:t, poly:c0,...,1;disc=D;galois=true|false.
    #[arg(long, global = true, num_args = 1..)]
    pub fields: Option<Vec<String>>,
    /// Function descriptor, e.g. "tau2:2@quad:-4 * a@cyclo:7".
    #[arg(long = "fn", global = true, allow_hyphen_values = true)]
    pub func: Option<String>,
    /// Summation bound X.
    #[arg(long, global = true)]
    pub xmax: Option<String>,
    /// Prime bound (verify), series length (useries, constants).
    #[arg(long, global = true)]
    pub nmax: Option<String>,
    /// Ratio of the geometric x grid [default: 2^(1/4)].
    #[arg(long, global = true)]
    pub grid_ratio: Option<String>,
    /// Worker threads, 0 for all cores.
    #[arg(long, global = true)]
    pub threads: Option<String>,
    /// Sieve memory budget in bytes, K/M/G suffixes allowed [default: 2G].
    #[arg(long, global = true)]
    pub mem_limit: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<String>,
    /// Splitting overrides for polynomial fields, lines `p e,f,count[;...]`.
    #[arg(long, global = true)]
    pub overrides: Option<String>,
    /// Main term M(x): predicted, exact (M = S), identity (M = x) or zero.
    #[arg(long, global = true)]
    pub main: Option<String>,
    /// useries: replace L by Z^m.
    #[arg(long, global = true)]
    pub zpower: bool,
    /// split: the prime p.
    #[arg(long, global = true)]
    pub prime: Option<String>,
    /// moment: number of dyadic points X, X/2, ... [default: 3].
    #[arg(long, global = true)]
    pub points: Option<String>,
    /// constants: add the numerical fallback residue for every field.
    #[arg(long, global = true)]
    pub fallback: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Check the prime-level identities up to --nmax.
    Verify,
    /// Summatory function against its main term.
    Sum,
    /// Second moment of the error term.
    Moment,
    /// Coefficients of U = L Z^-m.
    Useries,
    /// Residues, L-values and main-term constants.
    Constants,
    /// Discriminants and ramification of each field.
    FieldInfo,
    /// Splitting type of --prime in each field.
    Split,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Sum => "sum",
            Command::Moment => "moment",
            Command::Useries => "useries",
            Command::Constants => "constants",
            Command::FieldInfo => "field-info",
            Command::Split => "split",
        }
    }
}

impl Cli {
    fn flag_settings(&self) -> Result<Settings, ConfigError> {
        let mut s = Settings::default();
        let mut set = |key: &str, value: &Option<String>| -> Result<(), ConfigError> {
            match value {
                Some(v) => s.set(key, v).map_err(|m| ConfigError::new(format!("--{key}: {m}"))),
                None => Ok(()),
            }
        };
        set("fn", &self.func)?;
        set("xmax", &self.xmax)?;
        set("nmax", &self.nmax)?;
        set("grid-ratio", &self.grid_ratio)?;
        set("threads", &self.threads)?;
        set("mem-limit", &self.mem_limit)?;
        set("out", &self.out)?;
        set("overrides", &self.overrides)?;
        set("main", &self.main)?;
        set("prime", &self.prime)?;
        set("points", &self.points)?;
        if let Some(f) = &self.fields {
            s.fields = Some(f.iter().flat_map(|x| x.split_whitespace()).map(str::to_string).collect());
        }
        if self.zpower {
            s.zpower = Some(true);
        }
        if self.fallback {
            s.fallback = Some(true);
        }
        Ok(s)
    }

    /// Config file first, then flags.
    pub fn resolve(&self) -> Result<RunConfig, ConfigError> {
        let mut s = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| ConfigError::new(format!("cannot read config {}: {e}", path.display())))?;
                Settings::parse(&text).map_err(|mut e| {
                    e.file = Some(path.display().to_string());
                    e
                })?
            }
            None => Settings::default(),
        };
        s.overlay(&self.flag_settings()?);
        Ok(RunConfig::from_settings(&s))
    }
}

/// Runs one command on a resolved config inside a pool of `cfg.threads` workers.
pub fn execute(command: Command, cfg: &RunConfig) -> Result<(Output, String)> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build()?;
    pool.install(|| {
        let ctx = Context::load(cfg.clone())?;
        let hash = cfg.hash(command.name(), ctx.overrides_text.as_deref());
        let out = match command {
            Command::Verify => commands::cmd_verify(&ctx),
            Command::Sum => commands::cmd_sum(&ctx),
            Command::Moment => commands::cmd_moment(&ctx),
            Command::Useries => commands::cmd_useries(&ctx),
            Command::Constants => commands::cmd_constants(&ctx),
            Command::FieldInfo => commands::cmd_field_info(&ctx),
            Command::Split => commands::cmd_split(&ctx),
        }?;
        Ok((out, hash))
    })
}

/// Exit status for an error: resource problems are 3, everything else 2.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.downcast_ref::<ConfigError>().is_some() {
            return EXIT_USAGE;
        }
        if let Some(e) = cause.downcast_ref::<nfdiv::Error>() {
            return match e {
                nfdiv::Error::MemoryBudget { .. } => EXIT_RESOURCE,
                _ => EXIT_USAGE,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some()
            || cause.downcast_ref::<rayon::ThreadPoolBuildError>().is_some()
        {
            return EXIT_RESOURCE;
        }
    }
    EXIT_USAGE
}

/// Parses `args`, runs the command, writes its CSV and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let cfg = match cli.resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let (out, hash) = match execute(cli.command, &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.chain().any(|c| matches!(c.downcast_ref(), Some(nfdiv::Error::UnknownSplitting { .. }))) {
                eprintln!("hint: give the splitting of that prime in an --overrides file");
            }
            return exit_code(&e);
        }
    };
    let text = out.render(&hash);
    let written = match &cfg.out {
        Some(path) => fs::write(path, text.as_bytes()).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_RESOURCE;
    }
    for line in &out.summary {
        eprintln!("{line}");
    }
    if out.finding {
        EXIT_FINDING
    } else {
        EXIT_OK
    }
}
