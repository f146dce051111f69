use alloc::string::String;
use core::fmt;

use crate::subset::Subset;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A mask has bits outside `{1..n}`.
    MaskOutOfRange { mask: Subset, n: usize },
    /// The ground set is too large for the requested computation.
    TooLarge {
        what: &'static str,
        n: usize,
        cap: usize,
    },
    /// Two operators (or an operator and a function) disagree on `n`.
    GroundMismatch { left: usize, right: usize },
    /// Two partitions live on different carriers.
    CarrierMismatch { left: usize, right: usize },
    /// A search or enumeration would exceed its budget.
    BudgetExceeded { needed: u128, budget: u128 },
    /// A table failed the closure axioms.
    NotClosure { axiom: &'static str, witness: Subset },
    /// A coding function failed validation.
    InvalidCoding { reason: String },
    /// An argument is outside the operation's domain.
    InvalidArgument(String),
    /// The LP solver met a problem shape it does not handle.
    Lp(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::MaskOutOfRange { mask, n } => {
                write!(f, "subset {mask} is not contained in {{1..{n}}}")
            }
            Error::TooLarge { what, n, cap } => {
                write!(f, "{what} needs n <= {cap}, got n = {n}")
            }
            Error::GroundMismatch { left, right } => {
                write!(f, "ground sets differ: n = {left} vs n = {right}")
            }
            Error::CarrierMismatch { left, right } => {
                write!(f, "partitions on different carriers: {left} vs {right}")
            }
            Error::BudgetExceeded { needed, budget } => {
                write!(f, "budget exceeded: needs {needed}, budget {budget}")
            }
            Error::NotClosure { axiom, witness } => {
                write!(f, "not a closure operator: {axiom} fails at {witness}")
            }
            Error::InvalidCoding { reason } => write!(f, "invalid coding function: {reason}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Lp(msg) => write!(f, "linear program: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;
