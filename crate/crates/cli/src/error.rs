use std::fmt;

use toric_nccr::derived::DerivedError;
use toric_nccr::git::GitError;
use toric_nccr::io::DocumentError;
use toric_nccr::semigroup::SemigroupError;
use toric_nccr::toric::ToricError;

/// Exit status contract: 0 success, 1 criterion or check fails, 2 hypotheses
/// fail, then the codes below.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, malformed or invalid input document.
    Usage(String),
    /// Input exceeds an enumeration or integer limit.
    Oversized(String),
    /// Input file cannot be read.
    NoInput(String),
    /// The wrapped operation refused the input.
    Refused(String),
    /// The report cannot be written.
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Oversized(_) => 65,
            CliError::NoInput(_) => 66,
            CliError::Refused(_) => 70,
            CliError::Output(_) => 71,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "invalid input: {m}"),
            CliError::Oversized(m) => write!(f, "input too large: {m}"),
            CliError::NoInput(m) => write!(f, "cannot read input: {m}"),
            CliError::Refused(m) => write!(f, "operation failed: {m}"),
            CliError::Output(m) => write!(f, "cannot write output: {m}"),
        }
    }
}

fn git_error(e: &GitError) -> fn(String) -> CliError {
    match e {
        GitError::TooManyWeights { .. } => CliError::Oversized,
        GitError::CharacterShape { .. }
        | GitError::InvalidTorsionOrder(_)
        | GitError::IndexOutOfRange { .. } => CliError::Usage,
        GitError::Lattice(_) => CliError::Refused,
    }
}

impl From<GitError> for CliError {
    fn from(e: GitError) -> Self {
        git_error(&e)(e.to_string())
    }
}

impl From<ToricError> for CliError {
    fn from(e: ToricError) -> Self {
        let kind = match &e {
            ToricError::Git(g) => git_error(g),
            ToricError::Overflow => CliError::Oversized,
            _ => CliError::Refused,
        };
        kind(e.to_string())
    }
}

impl From<SemigroupError> for CliError {
    fn from(e: SemigroupError) -> Self {
        let kind = match &e {
            SemigroupError::Git(g) => git_error(g),
            SemigroupError::Toric(ToricError::Git(g)) => git_error(g),
            SemigroupError::Overflow | SemigroupError::Toric(ToricError::Overflow) => {
                CliError::Oversized
            }
            SemigroupError::Parse { .. }
            | SemigroupError::VariableMismatch
            | SemigroupError::Shape(_)
            | SemigroupError::NotSquarefree(_)
            | SemigroupError::ZeroBound => CliError::Usage,
            _ => CliError::Refused,
        };
        kind(e.to_string())
    }
}

impl From<DerivedError> for CliError {
    fn from(e: DerivedError) -> Self {
        let kind = match &e {
            DerivedError::Git(g) => git_error(g),
            DerivedError::Overflow => CliError::Oversized,
            DerivedError::Lattice(_) => CliError::Refused,
            _ => CliError::Usage,
        };
        kind(e.to_string())
    }
}

impl From<DocumentError> for CliError {
    fn from(e: DocumentError) -> Self {
        match e {
            DocumentError::Git(g) => g.into(),
            DocumentError::Toric(t) => match t {
                ToricError::Git(g) => g.into(),
                ToricError::Overflow => CliError::Oversized(t.to_string()),
                other => CliError::Usage(other.to_string()),
            },
            DocumentError::Semigroup(s) => s.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}
