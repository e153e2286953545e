use alloc::string::String;
use core::fmt;

use crate::terms::Position;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    InvalidPosition(Position),
    /// A disagreement pair without a determined binding.
    NotSimple,
    /// Atoms of one working set use different predicates.
    MixedPredicates,
    /// Parallel composition needs idempotent operands.
    NotIdempotent,
    Precondition(Precondition),
}

/// Input requirements the solvers check before running.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Precondition {
    NotVariableDisjoint,
    /// The atom does not unify with the input atom at this index.
    NotUnifiable { index: usize },
    EmptyPositiveSet,
    NonLinear(String),
    GroundNotInAtom,
    PredicateMismatch,
}

pub type Result<T> = core::result::Result<T, Error>;

impl From<Precondition> for Error {
    fn from(p: Precondition) -> Self {
        Error::Precondition(p)
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidPosition(p) => write!(f, "invalid position {}", p),
            Error::NotSimple => f.write_str("disagreement pair is not simple"),
            Error::MixedPredicates => f.write_str("working set mixes predicates"),
            Error::NotIdempotent => f.write_str("substitution is not idempotent"),
            Error::Precondition(p) => write!(f, "precondition violated: {}", p),
        }
    }
}

impl fmt::Display for Precondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precondition::NotVariableDisjoint => f.write_str("atoms are not pairwise variable disjoint"),
            Precondition::NotUnifiable { index } => {
                write!(f, "atom #{} does not unify with the selected atom", index)
            }
            Precondition::EmptyPositiveSet => f.write_str("no positive atoms"),
            Precondition::NonLinear(what) => write!(f, "{} is not linear", what),
            Precondition::GroundNotInAtom => {
                f.write_str("groundness set mentions a variable outside the atom")
            }
            Precondition::PredicateMismatch => {
                f.write_str("atoms do not share the selected atom's predicate")
            }
        }
    }
}

impl core::error::Error for Error {}
