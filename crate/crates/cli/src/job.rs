//! Job configuration: where the presentation comes from, which command to
//! run, and the bounds it runs under.

use std::fmt;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use koszul_core::presentation::FieldSpec;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Preset(String),
    File(PathBuf),
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Preset(name) => write!(f, "preset:{name}"),
            Source::File(path) => write!(f, "file:{}", path.display()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Table,
    Records,
}

/// `HK<p>:<i>` or `HH<p>:<i>`: the i-th basis class of degree p in the
/// report computed by the same invocation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassRef {
    pub hochschild: bool,
    pub degree: usize,
    pub index: usize,
}

impl FromStr for ClassRef {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Usage(format!("bad class reference `{s}` (expected HK<p>:<i> or HH<p>:<i>)"));
        let (hochschild, rest) = if let Some(r) = s.strip_prefix("HK") {
            (false, r)
        } else if let Some(r) = s.strip_prefix("HH") {
            (true, r)
        } else {
            return Err(bad());
        };
        let (p, i) = rest.split_once(':').ok_or_else(bad)?;
        Ok(ClassRef {
            hochschild,
            degree: p.parse().map_err(|_| bad())?,
            index: i.parse().map_err(|_| bad())?,
        })
    }
}

impl fmt::Display for ClassRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = if self.hochschild { "HH" } else { "HK" };
        write!(f, "{t}{}:{}", self.degree, self.index)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CapSide {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Wspace,
    Dims,
    Homology { classes: bool },
    Cohomology { classes: bool },
    Hochschild { cutoff: usize, recheck: bool },
    Cup { alpha: ClassRef, beta: ClassRef, cutoff: usize },
    Cap { alpha: ClassRef, gamma: ClassRef, side: CapSide },
    CheckKoszul,
    VerifyIdentities { trials: usize },
    VerifyDuality { alpha: Option<ClassRef>, q: usize },
    VerifyHochschild { alpha: Option<ClassRef>, q: usize, cutoff: usize, max_shift: i64 },
    Compare { r_max: i64, cutoff: usize },
    CheckMonomial,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Wspace => "wspace",
            Command::Dims => "dims",
            Command::Homology { .. } => "homology",
            Command::Cohomology { .. } => "cohomology",
            Command::Hochschild { .. } => "hochschild",
            Command::Cup { .. } => "cup",
            Command::Cap { .. } => "cap",
            Command::CheckKoszul => "check-koszul",
            Command::VerifyIdentities { .. } => "verify-identities",
            Command::VerifyDuality { .. } => "verify-duality",
            Command::VerifyHochschild { .. } => "verify-hochschild",
            Command::Compare { .. } => "compare",
            Command::CheckMonomial => "check-monomial",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub source: Source,
    pub command: Command,
    pub degrees: RangeInclusive<usize>,
    pub weights: RangeInclusive<i64>,
    /// Overrides the field named in the input.
    pub field: Option<FieldSpec>,
    pub seed: u64,
    pub format: OutputFormat,
    pub print_normalized: bool,
}

impl JobSpec {
    pub fn degree_bound(&self) -> usize {
        *self.degrees.end()
    }

    pub fn weight_bound(&self) -> i64 {
        *self.weights.end()
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.degrees.is_empty() {
            return Err(CliError::Usage("empty degree range".into()));
        }
        if self.weights.is_empty() || self.weight_bound() < 0 {
            return Err(CliError::Usage("weight range must be nonempty and reach 0 or above".into()));
        }
        Ok(())
    }
}

/// `a..b` (inclusive) or a single bound `b`, read as `0..b`.
pub fn parse_range<T>(s: &str) -> Result<RangeInclusive<T>, CliError>
where
    T: FromStr + Default,
{
    let bad = || CliError::Usage(format!("bad range `{s}` (expected a..b or b)"));
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            Ok(a.trim().parse().map_err(|_| bad())?..=b.trim().parse().map_err(|_| bad())?)
        }
        None => Ok(T::default()..=s.trim().parse().map_err(|_| bad())?),
    }
}

/// `Q`, `F<p>`, `F <p>` or a bare prime.
pub fn parse_field(s: &str) -> Result<FieldSpec, CliError> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("q") {
        return Ok(FieldSpec::Rationals);
    }
    let digits = t.strip_prefix(['F', 'f']).unwrap_or(t).trim();
    digits
        .parse::<u64>()
        .map(FieldSpec::Prime)
        .map_err(|_| CliError::Usage(format!("bad field `{s}` (expected Q or F<p>)")))
}
