//! Command line.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::commands::{run, run_corpus, Command, Options};
use crate::corpus;
use crate::report::{Record, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Debug, Parser)]
#[command(
    name = "cycletrace",
    version,
    about = "Traces of branched coverings and flatness checks for weighted cycle families"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
    /// Rendering on standard output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Also write the machine report here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub form_degree: Option<usize>,
    #[arg(long, global = true)]
    pub monomial_degree: Option<u32>,
    #[arg(long, global = true, default_value_t = 8)]
    pub max_weight: u32,
    /// Random projections per multiplicity.
    #[arg(long, global = true, default_value_t = 8)]
    pub trials: usize,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Trace functions or forms (`u*du`, `du^dv`); all fiber monomials by default.
    Trace { file: String, items: Vec<String> },
    /// Traced Newton functions and their regularity.
    Classify { file: String },
    /// Flatness verdict.
    Check { file: String },
    /// Least weights gluing the strata.
    Weights { file: String },
    /// Fiber counts and base multiplicities at points.
    Fibers {
        file: String,
        #[arg(long = "point")]
        points: Vec<String>,
    },
    /// Residues and traces through the fundamental class.
    Residue { file: String, items: Vec<String> },
    /// Pull base cycles back to the family.
    Pullback { file: String },
    /// Run the family files and compare with their expectations.
    Corpus {
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

impl Cli {
    pub fn options(&self) -> Options {
        Options {
            seed: self.seed,
            form_degree: self.form_degree,
            monomial_degree: self.monomial_degree,
            max_weight: self.max_weight,
            trials: self.trials,
        }
    }
}

fn unreadable(op: &str, input: &str, e: &std::io::Error, seed: u64) -> Report {
    let mut r = Report::new(op, input, "", seed);
    let msg = format!("{input}: {e}");
    r.push(Record::new("error", format!("error: {msg}")).with("message", msg));
    r.fail(2);
    r
}

/// Builds the report for a parsed command line.
pub fn execute(cli: &Cli) -> Report {
    let opts = cli.options();
    let (cmd, file) = match &cli.command {
        Sub::Trace { file, items } => (Command::Trace(items.clone()), file),
        Sub::Classify { file } => (Command::Classify, file),
        Sub::Check { file } => (Command::Check, file),
        Sub::Weights { file } => (Command::Weights, file),
        Sub::Fibers { file, points } => (Command::Fibers(points.clone()), file),
        Sub::Residue { file, items } => (Command::Residue(items.clone()), file),
        Sub::Pullback { file } => (Command::Pullback, file),
        Sub::Corpus { dir } => {
            let items = match dir {
                Some(d) => match corpus::items_in(d) {
                    Ok(items) => items,
                    Err(e) => return unreadable("corpus", &d.display().to_string(), &e, opts.seed),
                },
                None => corpus::bundled_items(),
            };
            return run_corpus(&items, &opts);
        }
    };
    match corpus::load(file) {
        Ok(text) => run(&cmd, file, &text, &opts),
        Err(e) => unreadable(cmd.name(), file, &e, opts.seed),
    }
}
