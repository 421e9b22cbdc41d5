use std::fmt;

use thiserror::Error;

use crate::scalar::Scalar;

/// Text-level failure with an optional 1-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
}

impl ParseError {
    pub fn new(message: impl Into<String>) -> Self {
        ParseError { message: message.into(), line: None, column: None }
    }

    pub fn at(mut self, line: usize, column: usize) -> Self {
        if self.line.is_none() {
            self.line = Some(line);
            self.column = Some(column);
        }
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "{l}:{c}: {}", self.message),
            _ => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ParseError {}

pub(crate) fn fmt_vec(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(|s| s.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Every failure the engine can report. Witnesses are carried as
/// canonical text so that errors stay cheap to clone and compare.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("incompatible ring parameters")]
    RingMismatch,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("pole order exceeds the bound {bound} in {context}: {witness}")]
    PoleOverflow { context: String, bound: u8, witness: String },
    #[error("evaluation at a pole of coordinate {coord}")]
    EvaluationAtPole { coord: usize },
    #[error("truncation order exceeded: {0}")]
    TruncationOverflow(String),
    #[error("log-tangency fails: log Hamiltonian {component} is not a logarithmic vector field: {witness}")]
    H3Failure { component: usize, witness: String },
    #[error("matrix is not invertible: {0}")]
    NotInvertible(String),
    #[error("log Hamiltonian generators are degenerate at the origin (rank {rank} < {needed}); supply the residues explicitly")]
    DegenerateGenerators { rank: usize, needed: usize },
    #[error("residue matrices {i} and {j} do not commute: commutator {commutator}")]
    NotCommuting { i: usize, j: usize, commutator: String },
    #[error("residue matrix {index} has an eigenvalue outside Q(i); characteristic polynomial {charpoly}")]
    EigenvalueNotGaussian { index: usize, charpoly: String },
    #[error("non-resonance fails between spectral blocks {kappa} and {kappa_prime}: alpha = {}", fmt_vec(.alpha))]
    Resonance { kappa: usize, kappa_prime: usize, alpha: Vec<Scalar> },
    #[error("homological equation at degree {degree} has no solution: {detail}")]
    Inconsistent { degree: i32, detail: String },
    #[error("the Poisson differential lowers degree on this chart: delta({coord}) = {witness}")]
    FiltrationViolation { coord: String, witness: String },
    #[error("flatness fails: curvature entry ({row},{col}) = {witness}")]
    NotFlat { row: usize, col: usize, witness: String },
    #[error("form has a nonzero residue along coordinate {coord}: {residue}")]
    NonzeroResidue { coord: usize, residue: String },
    #[error("form is not closed: {witness}")]
    NotClosed { witness: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl Error {
    /// True for failures caused by malformed input rather than by the
    /// mathematics of a well-formed problem.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::RingMismatch
                | Error::InvalidArgument(_)
                | Error::Parse(_)
                | Error::EvaluationAtPole { .. }
                | Error::UnknownGenerator(_)
        )
    }

    /// Short stable identifier used in reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::RingMismatch => "ring-mismatch",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::Parse(_) => "parse",
            Error::PoleOverflow { .. } => "pole-overflow",
            Error::EvaluationAtPole { .. } => "evaluation-at-pole",
            Error::TruncationOverflow(_) => "truncation-overflow",
            Error::H3Failure { .. } => "h3-failure",
            Error::NotInvertible(_) => "not-invertible",
            Error::DegenerateGenerators { .. } => "degenerate-generators",
            Error::NotCommuting { .. } => "not-commuting",
            Error::EigenvalueNotGaussian { .. } => "eigenvalue-not-gaussian",
            Error::Resonance { .. } => "resonance",
            Error::Inconsistent { .. } => "inconsistent",
            Error::FiltrationViolation { .. } => "filtration-violation",
            Error::NotFlat { .. } => "not-flat",
            Error::NonzeroResidue { .. } => "nonzero-residue",
            Error::NotClosed { .. } => "not-closed",
            Error::UnknownGenerator(_) => "unknown-generator",
            Error::Precondition(_) => "precondition",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
