use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "barbell", version, about = "Exact W2/W3 invariant computations")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Accepted and ignored; every computation is deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Quotient group Lambda for closed loops.
    #[command(subcommand)]
    Lambda(LambdaCmd),
    /// Pull-back along cyclic covers.
    #[command(subcommand)]
    Cover(CoverCmd),
    /// Facet maps and derived relators.
    #[command(subcommand)]
    Whitehead(WhiteheadCmd),
    /// Dihedral orbits of exponent pairs.
    Orbit(OrbitArgs),
    /// Hexagon quotient normal forms and basis change.
    #[command(subcommand)]
    Hex(HexCmd),
    /// The F_k matrix.
    Fk(FkArgs),
    /// delta_k = F_k(k-1, k-2).
    Delta(DeltaArgs),
    /// Twisted class sum v_p w_q F_k(p, q).
    Twist(TwistArgs),
    /// Rank certificate for delta_kmin..delta_kmax.
    Independence(IndependenceArgs),
    /// Run the invariant suite.
    Selfcheck(SelfcheckArgs),
}

#[derive(Subcommand, Debug)]
pub enum LambdaCmd {
    Reduce {
        #[arg(long, allow_negative_numbers = true)]
        w0: i64,
        #[arg(long)]
        n: i64,
        /// Laurent polynomial as JSON.
        #[arg(long)]
        poly: String,
    },
    Structure {
        #[arg(long, allow_negative_numbers = true)]
        w0: i64,
        #[arg(long)]
        n: i64,
        /// LO,HI
        #[arg(long, allow_hyphen_values = true)]
        window: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum CoverCmd {
    Apply {
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        /// Alpha combination as JSON.
        #[arg(long)]
        alpha: String,
    },
    Kernel {
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, allow_negative_numbers = true)]
        depth: i64,
        #[arg(long)]
        alpha: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum WhiteheadCmd {
    Facet {
        /// t1=0, t1=t2, t2=t3, t3=1 or 1..4
        #[arg(long)]
        facet: String,
        #[arg(long, allow_negative_numbers = true)]
        alpha: i64,
        #[arg(long, allow_negative_numbers = true)]
        beta: i64,
        #[arg(long)]
        n: i64,
        /// Degree of the velocity vector map.
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        velocity: i64,
    },
    Relators {
        #[arg(long)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        window: String,
    },
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
pub struct OrbitArgs {
    #[command(subcommand)]
    pub command: Option<OrbitCmd>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<i64>,
}

#[derive(Subcommand, Debug)]
pub enum OrbitCmd {
    Structure {
        #[arg(long, allow_negative_numbers = true)]
        alpha: i64,
        #[arg(long, allow_negative_numbers = true)]
        beta: i64,
        #[arg(long)]
        n: i64,
    },
}

#[derive(Subcommand, Debug)]
pub enum HexCmd {
    Reduce {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        poly: String,
    },
    ChangeBasis {
        /// 13to12 or 12to13
        #[arg(long)]
        dir: String,
        #[arg(long)]
        poly: String,
    },
}

#[derive(Args, Debug)]
pub struct FkArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub k: i64,
    #[arg(long)]
    pub per_level: bool,
    #[arg(long)]
    pub check_skew: bool,
    #[arg(long)]
    pub sum: bool,
}

#[derive(Args, Debug)]
pub struct DeltaArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub k: i64,
    /// Use the eight-term expansion.
    #[arg(long)]
    pub expand: bool,
    /// Reduce W3 of the class in the hexagon quotient.
    #[arg(long)]
    pub w3: bool,
    #[arg(long, requires = "w3", default_value_t = 3)]
    pub n: i64,
}

#[derive(Args, Debug)]
pub struct TwistArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub k: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub v: String,
    #[arg(long, allow_hyphen_values = true)]
    pub w: String,
}

#[derive(Args, Debug)]
pub struct IndependenceArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub kmin: i64,
    #[arg(long, allow_negative_numbers = true)]
    pub kmax: i64,
    #[arg(long, default_value_t = 3)]
    pub n: i64,
}

#[derive(Args, Debug)]
pub struct SelfcheckArgs {
    #[arg(long, default_value_t = 12, allow_negative_numbers = true)]
    pub kmax: i64,
    #[arg(long, hide = true, value_enum)]
    pub inject_fault: Option<Fault>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Fault {
    RelatorTable,
}
