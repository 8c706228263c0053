//! Flag parsing and the resolved run configuration. A run may be configured
//! either by subcommand flags or by a JSON file with the same field names
//! passed as `quadword --config FILE`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

#[derive(Parser)]
#[command(
    name = "quadword",
    version,
    about = "Sturmian and derived infinite words, factor complexity, and monomial-algebra growth analytics"
)]
pub struct Cli {
    /// Run from a JSON config file (fields as in the subcommand flags, plus
    /// "command"). Mutually exclusive with giving a subcommand.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Args, Debug, Clone)]
pub struct BaseArgs {
    /// Named base word: "fibonacci".
    #[arg(long, conflicts_with = "slope")]
    pub base: Option<String>,

    /// Continued-fraction partial quotients of a slope in (0,1), e.g.
    /// "1,1,1,1,1,1" (comma separated, depth >= 2).
    #[arg(long, value_delimiter = ',')]
    pub slope: Option<Vec<u64>>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a base word prefix and write it in word text format.
    Gen {
        #[command(flatten)]
        base: BaseArgs,
        /// Number of letters to emit.
        #[arg(long)]
        length: u64,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the nested construction over a base word: emit a prefix of the
    /// limit word and, optionally, the construction trace as JSON.
    Construct {
        #[command(flatten)]
        base: BaseArgs,
        /// Trace depth (number of stages recorded).
        #[arg(long)]
        depth: usize,
        /// Number of letters of the limit word to emit.
        #[arg(long)]
        length: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the construction trace (anchors, exponents, block and stage
        /// lengths, bound check) to this JSON file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Factor complexity profile of a word.
    Complexity {
        /// Input word file (one line, letters a..z).
        #[arg(long = "in", value_name = "FILE", conflicts_with_all = ["base", "slope"])]
        input: Option<PathBuf>,
        #[command(flatten)]
        base: BaseArgs,
        /// Prefix length when generating from a base.
        #[arg(long)]
        length: Option<u64>,
        /// Largest factor length to report.
        #[arg(long)]
        nmax: usize,
        /// Report format: csv or json.
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Growth report of a word algebra: dimensions, fitted growth exponent,
    /// growth-constant proxy, and complexity bound checks.
    Growth {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long)]
        nmax: usize,
        /// Report file (stdout when omitted).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Hilbert function of a monomial presentation: counts of words avoiding
    /// the forbidden factors.
    Hilbert {
        /// Alphabet symbols, e.g. "ab".
        #[arg(long)]
        alphabet: String,
        /// Comma-separated forbidden words (may be empty).
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        forbidden: Vec<String>,
        #[arg(long)]
        nmax: usize,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Candidates for prime quotients of growth-exponent one: primitive
    /// words whose high powers are factors of the input word.
    Primes {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Power threshold for candidacy.
        #[arg(long, default_value_t = 4)]
        power: u64,
        /// Largest candidate period length.
        #[arg(long)]
        dmax: usize,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the periodic-quotient identities for a period word.
    Quotient {
        #[arg(long)]
        period: String,
        #[arg(long, default_value_t = 30)]
        check_length: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// PI-degree data of the anchors in a construction trace against a word.
    Degrees {
        /// Trace JSON produced by `construct --trace`.
        #[arg(long)]
        trace: PathBuf,
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, default_value_t = 4)]
        power: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the whole pipeline and write one consolidated report: base
    /// verification, construction bounds, complexity bounds, growth
    /// sandwich, recurrence, degrees, and candidate checks.
    VerifyAll {
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Prefix length of the limit word to analyze.
        #[arg(long, default_value_t = 1_000_000)]
        length: u64,
        #[arg(long, default_value_t = 2000)]
        nmax: usize,
        #[arg(long, default_value_t = 4)]
        power: u64,
        #[arg(long, default_value_t = 14)]
        dmax: usize,
        /// Minimum occurrence count in the recurrence check.
        #[arg(long, default_value_t = 3)]
        kmin: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

/// Fully resolved configuration, echoed verbatim in every report header.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nmax: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dmax: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kmin: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check_length: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forbidden: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
}

impl RunConfig {
    pub fn resolve(cli: Cli) -> Result<RunConfig, String> {
        match (cli.config, cli.command) {
            (Some(_), Some(_)) => {
                Err("--config and a subcommand are mutually exclusive".into())
            }
            (None, None) => Err("give a subcommand or --config FILE (see --help)".into()),
            (Some(path), None) => {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                let config: RunConfig = serde_json::from_str(&text)
                    .map_err(|e| format!("bad config {}: {e}", path.display()))?;
                config.validate()?;
                Ok(config)
            }
            (None, Some(command)) => {
                let config = RunConfig::from_command(command);
                config.validate()?;
                Ok(config)
            }
        }
    }

    fn from_command(command: Command) -> RunConfig {
        let mut c = RunConfig::default();
        match command {
            Command::Gen { base, length, out } => {
                c.command = "gen".into();
                c.base = base.base;
                c.slope = base.slope;
                c.length = Some(length);
                c.out = out;
            }
            Command::Construct {
                base,
                depth,
                length,
                out,
                trace,
            } => {
                c.command = "construct".into();
                c.base = base.base;
                c.slope = base.slope;
                c.depth = Some(depth);
                c.length = Some(length);
                c.out = out;
                c.trace = trace;
            }
            Command::Complexity {
                input,
                base,
                length,
                nmax,
                format,
                out,
            } => {
                c.command = "complexity".into();
                c.input = input;
                c.base = base.base;
                c.slope = base.slope;
                c.length = length;
                c.nmax = Some(nmax);
                c.format = Some(format);
                c.out = out;
            }
            Command::Growth {
                input,
                nmax,
                report,
            } => {
                c.command = "growth".into();
                c.input = Some(input);
                c.nmax = Some(nmax);
                c.report = report;
            }
            Command::Hilbert {
                alphabet,
                forbidden,
                nmax,
                format,
                out,
            } => {
                c.command = "hilbert".into();
                c.alphabet = Some(alphabet);
                c.forbidden = Some(forbidden);
                c.nmax = Some(nmax);
                c.format = Some(format);
                c.out = out;
            }
            Command::Primes {
                input,
                power,
                dmax,
                format,
                out,
            } => {
                c.command = "primes".into();
                c.input = Some(input);
                c.power = Some(power);
                c.dmax = Some(dmax);
                c.format = Some(format);
                c.out = out;
            }
            Command::Quotient {
                period,
                check_length,
                out,
            } => {
                c.command = "quotient".into();
                c.period = Some(period);
                c.check_length = Some(check_length);
                c.out = out;
            }
            Command::Degrees {
                trace,
                input,
                power,
                out,
            } => {
                c.command = "degrees".into();
                c.trace = Some(trace);
                c.input = Some(input);
                c.power = Some(power);
                c.out = out;
            }
            Command::VerifyAll {
                base,
                depth,
                length,
                nmax,
                power,
                dmax,
                kmin,
                report,
            } => {
                c.command = "verify-all".into();
                c.base = base.base;
                c.slope = base.slope;
                c.depth = Some(depth);
                c.length = Some(length);
                c.nmax = Some(nmax);
                c.power = Some(power);
                c.dmax = Some(dmax);
                c.kmin = Some(kmin);
                c.report = report;
            }
        }
        c
    }

    fn validate(&self) -> Result<(), String> {
        let needs_base = matches!(self.command.as_str(), "gen" | "construct" | "verify-all");
        let base_given = self.base.is_some() || self.slope.is_some();
        if self.base.is_some() && self.slope.is_some() {
            return Err("--base and --slope are mutually exclusive".into());
        }
        if needs_base && !base_given {
            return Err(format!("{} needs --base or --slope", self.command));
        }
        if let Some(b) = &self.base {
            if b != "fibonacci" {
                return Err(format!("unknown base {b:?}; supported: fibonacci"));
            }
        }
        if self.command == "complexity" {
            let from_file = self.input.is_some();
            if from_file == base_given {
                return Err("complexity needs exactly one of --in or --base/--slope".into());
            }
            if base_given && self.length.is_none() {
                return Err("complexity over a generated base needs --length".into());
            }
        }
        for (name, value) in [
            ("length", self.length.unwrap_or(1) as usize),
            ("nmax", self.nmax.unwrap_or(1)),
            ("depth", self.depth.unwrap_or(1)),
            ("power", self.power.unwrap_or(1) as usize),
            ("dmax", self.dmax.unwrap_or(1)),
            ("kmin", self.kmin.unwrap_or(1) as usize),
            ("check_length", self.check_length.unwrap_or(1)),
        ] {
            if value == 0 {
                return Err(format!("--{name} must be positive"));
            }
        }
        if let Some(f) = &self.format {
            if f != "csv" && f != "json" {
                return Err(format!("unknown format {f:?}; supported: csv, json"));
            }
        }
        Ok(())
    }
}
