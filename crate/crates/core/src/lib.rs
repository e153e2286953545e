//! Selective unification over first-order atoms.
//!
//! Given an atom `A`, positive atoms `H⁺`, negative atoms `H⁻` and a set of
//! variables `G` of `A`, find a substitution `σ` such that `Aσ` unifies with
//! every positive atom, with no negative atom, and grounds `G`.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod disagree;
pub mod enumerate;
pub mod error;
pub mod oracle;
pub mod positive;
pub mod selective;
pub mod show;
pub mod signature;
pub mod subst;
pub mod terms;

pub use disagree::{disagreement_pairs, DisagreementPair, WorkingSet};
pub use enumerate::{EnumeratorConfig, EtaCandidate, EtaStream};
pub use error::{Error, Precondition, Result};
pub use selective::{check_solution, solve, solve_all, su, su_lin, su_star, Algorithm, Outcome, Problem, Solution, SolveConfig, SolveStats};
pub use positive::{check_maximal, su_plus, su_plus_lin, PositiveResult};
pub use show::{show, VarNames};
pub use signature::Signature;
pub use subst::{mgu, mgu_atoms, mgu_terms, unifiable, EquationSet, NoUnifier, Substitution};
pub use terms::{canonical, variant_eq, Atom, Functor, HasVars, Namespace, Position, Term, Var, VarGen};
