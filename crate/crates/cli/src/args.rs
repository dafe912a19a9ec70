use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Clone, Debug, Parser)]
#[command(name = "tropes", version, about = "Exact computations on plane quartics and theta characteristics")]
pub struct Cli {
    /// Characteristic to reduce a rational curve into, or to check a finite one against.
    #[arg(long = "char", global = true, value_name = "P")]
    pub characteristic: Option<u64>,
    /// Extension degree over the prime field.
    #[arg(long, global = true, value_name = "K")]
    pub deg: Option<u32>,
    /// Let the bitangent census grow the field until all 28 lines are rational.
    #[arg(long, global = true)]
    pub escalate: bool,
    /// Seed for commands that sample.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write `<command>-<inputhash>.json` into this directory instead of stdout.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    #[command(subcommand)]
    Quartic(QuarticCmd),
    #[command(subcommand)]
    Umbral(UmbralCmd),
    #[command(subcommand)]
    Theta(ThetaCmd),
    #[command(subcommand)]
    Heis(HeisCmd),
    #[command(subcommand)]
    Corpus(CorpusCmd),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WhichForm {
    K1,
    K2,
    Dual,
}

#[derive(Clone, Debug, Subcommand)]
pub enum QuarticCmd {
    /// Bitangent and flex census with the Plücker checks.
    Census {
        #[arg(long)]
        curve: PathBuf,
    },
    /// Rational bitangent lines.
    Bitangents {
        #[arg(long)]
        curve: PathBuf,
    },
    /// K1, K2 or the dual curve K1³ − 6K2².
    Contravariant {
        #[arg(long, value_enum)]
        which: WhichForm,
        #[arg(long)]
        curve: PathBuf,
    },
    /// Degree-2 del Pezzo surface branched along the K1 quartic.
    Delpezzo {
        #[arg(long)]
        curve: PathBuf,
    },
    /// L-polynomial over F_q.
    Zeta {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        q: Option<u64>,
        /// Number of point counts; counts past the third are checked against L.
        #[arg(long, default_value_t = 3)]
        k: u32,
    },
    /// Compares two L-polynomial files written by `zeta`.
    TwistCompare { first: PathBuf, second: PathBuf },
    /// Matrix and kernel of the Wahl map.
    Wahl {
        #[arg(long)]
        curve: PathBuf,
    },
    /// The quartic through the 24 flex tangent lines.
    CuspRecover {
        #[arg(long)]
        curve: PathBuf,
    },
}

#[derive(Clone, Debug, Subcommand)]
pub enum UmbralCmd {
    /// Expands a bracket monomial such as "(abu)^4".
    Expand { expr: String },
}

#[derive(Clone, Debug, Subcommand)]
pub enum ThetaCmd {
    /// Even and odd quadratic refinements of F2^{2g}.
    Count {
        #[arg(long)]
        g: usize,
    },
    /// The even characteristic of the standard pair of Lagrangians.
    Igusa {
        #[arg(long)]
        g: usize,
    },
}

#[derive(Clone, Debug, Subcommand)]
pub enum HeisCmd {
    /// Heisenberg subgroups of H4 with their theta characteristics.
    Enumerate {
        #[arg(long)]
        g: usize,
    },
}

#[derive(Clone, Debug, Subcommand)]
pub enum CorpusCmd {
    /// Runs the standard battery on every `*.json` curve file in a directory.
    Run { dir: PathBuf },
}
