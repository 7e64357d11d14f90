//! Command-line syntax.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;
use crate::job::{self, CapSide, ClassRef, Command, JobSpec, OutputFormat, Source};

#[derive(Debug, Parser)]
#[command(name = "koszulcalc", version, about = "Koszul and Hochschild calculus of N-homogeneous algebras")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Built-in presentation: bergsol-ex5, monomial-xyx, monomial-x<N>, sym2, ext2.
    #[arg(long, global = true, conflicts_with = "file")]
    pub preset: Option<String>,
    /// Presentation file in the line format (`gens`, `N`, `rel`, ...).
    #[arg(long, global = true)]
    pub file: Option<PathBuf>,
    /// `Q` or `F<p>`; overrides the field named in the input.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Degree range `a..b`, or a bound `b` for `0..b`.
    #[arg(long, global = true, default_value = "0..6")]
    pub deg: String,
    /// Weight range `a..b`, or a bound `b` for `0..b`.
    #[arg(long, global = true, default_value = "0..8", allow_hyphen_values = true)]
    pub weights: String,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Line records instead of tables.
    #[arg(long, global = true)]
    pub records: bool,
    /// Echo the normalized presentation in the header.
    #[arg(long, global = true)]
    pub print_normalized: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Dimensions and bases of the spaces W_nu(p).
    Wspace,
    /// Hilbert series of A on the weight window.
    Dims,
    /// Koszul homology HK_p(A) by coefficient weight.
    Homology {
        /// List class representatives with their HK<p>:<i> names.
        #[arg(long)]
        classes: bool,
    },
    /// Koszul cohomology HK^p(A) by coefficient weight.
    Cohomology {
        #[arg(long)]
        classes: bool,
    },
    /// Hochschild homology by total weight and cohomology by shift.
    Hochschild {
        /// Input-weight cutoff for cochains.
        #[arg(long, default_value_t = 4)]
        cutoff: usize,
        /// Also compute at a larger cutoff and flag unstable slices.
        #[arg(long)]
        recheck: bool,
    },
    /// Cup product of two classes.
    Cup {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        /// Input-weight cutoff for HH classes.
        #[arg(long, default_value_t = 4)]
        cutoff: usize,
    },
    /// Cap product of a cohomology class with a homology class.
    Cap {
        #[arg(long)]
        alpha: String,
        /// Homology class, HK<q>:<i> in the homology numbering.
        #[arg(long)]
        gamma: String,
        #[arg(long, value_enum, default_value = "left")]
        side: Side,
    },
    /// Looks for homology of K(A) in positive degrees.
    CheckKoszul,
    /// Random-trial check of the derivation and associativity identities.
    VerifyIdentities {
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Koszul cup-cap duality squares for M = A and M = A*.
    VerifyDuality {
        /// HK<p>:<i>; all classes of degree <= 2 when omitted.
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value_t = 3)]
        q: usize,
    },
    /// Hochschild cup-cap duality squares and cup commutativity.
    VerifyHochschild {
        /// HH<p>:<i>; all classes of degree <= 2 when omitted.
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value_t = 3)]
        q: usize,
        #[arg(long, default_value_t = 4)]
        cutoff: usize,
        /// Largest shift of the HH classes.
        #[arg(long, default_value_t = 1)]
        max_shift: i64,
    },
    /// Koszul against Hochschild (co)homology in degree 2.
    Compare {
        #[arg(long, default_value_t = 1)]
        rmax: i64,
        #[arg(long, default_value_t = 3)]
        cutoff: usize,
    },
    /// Koszulity of an algebra with one monomial relation.
    CheckMonomial,
}

impl Cli {
    pub fn into_job(self) -> Result<JobSpec, CliError> {
        let c = self.common;
        let source = match (c.preset, c.file) {
            (Some(p), None) => Source::Preset(p),
            (None, Some(f)) => Source::File(f),
            (None, None) => return Err(CliError::Usage("one of --preset or --file is required".into())),
            (Some(_), Some(_)) => return Err(CliError::Usage("--preset and --file are exclusive".into())),
        };
        let class = |s: &str| s.parse::<ClassRef>();
        let command = match self.command {
            Cmd::Wspace => Command::Wspace,
            Cmd::Dims => Command::Dims,
            Cmd::Homology { classes } => Command::Homology { classes },
            Cmd::Cohomology { classes } => Command::Cohomology { classes },
            Cmd::Hochschild { cutoff, recheck } => Command::Hochschild { cutoff, recheck },
            Cmd::Cup { alpha, beta, cutoff } => Command::Cup {
                alpha: class(&alpha)?,
                beta: class(&beta)?,
                cutoff,
            },
            Cmd::Cap { alpha, gamma, side } => Command::Cap {
                alpha: class(&alpha)?,
                gamma: class(&gamma)?,
                side: match side {
                    Side::Left => CapSide::Left,
                    Side::Right => CapSide::Right,
                },
            },
            Cmd::CheckKoszul => Command::CheckKoszul,
            Cmd::VerifyIdentities { trials } => Command::VerifyIdentities { trials },
            Cmd::VerifyDuality { alpha, q } => Command::VerifyDuality {
                alpha: alpha.as_deref().map(class).transpose()?,
                q,
            },
            Cmd::VerifyHochschild {
                alpha,
                q,
                cutoff,
                max_shift,
            } => Command::VerifyHochschild {
                alpha: alpha.as_deref().map(class).transpose()?,
                q,
                cutoff,
                max_shift,
            },
            Cmd::Compare { rmax, cutoff } => Command::Compare { r_max: rmax, cutoff },
            Cmd::CheckMonomial => Command::CheckMonomial,
        };
        Ok(JobSpec {
            source,
            command,
            degrees: job::parse_range(&c.deg)?,
            weights: job::parse_range(&c.weights)?,
            field: c.field.as_deref().map(job::parse_field).transpose()?,
            seed: c.seed,
            format: if c.records {
                OutputFormat::Records
            } else {
                OutputFormat::Table
            },
            print_normalized: c.print_normalized,
        })
    }
}
