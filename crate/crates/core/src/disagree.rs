//! Disagreement pairs over a working set of atoms.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::subst::{Apply, Substitution};
use crate::terms::{Atom, Position, Term, Var};

/// Two subterms at the same position of two atoms whose roots differ while
/// every symbol above them coincides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisagreementPair {
    pub position: Position,
    pub left: Term,
    pub right: Term,
    pub left_atom: usize,
    pub right_atom: usize,
}

impl DisagreementPair {
    /// One side is a variable that does not occur in the other side, and
    /// neither side mentions a reserved variable.
    pub fn is_simple(&self) -> bool {
        !self.left.contains_reserved()
            && !self.right.contains_reserved()
            && !self.candidate_bindings().is_empty()
    }

    /// Every `{X/s}` with `{X, s} = {left, right}` that passes the occurs
    /// check. A variable–variable pair yields both orientations, left first.
    pub fn candidate_bindings(&self) -> Vec<(Var, Term)> {
        let mut out = Vec::new();
        if let Term::Var(x) = self.left {
            if !self.right.occurs(x) {
                out.push((x, self.right.clone()));
            }
        }
        if let Term::Var(y) = self.right {
            if !self.left.occurs(y) {
                out.push((y, self.left.clone()));
            }
        }
        out
    }

    /// The substitution determined by a simple pair (left variable preferred).
    pub fn determined_binding(&self) -> Result<Substitution> {
        if !self.is_simple() {
            return Err(Error::NotSimple);
        }
        let (v, t) = self.candidate_bindings().swap_remove(0);
        Ok(Substitution::singleton(v, t))
    }
}

pub fn is_simple(d: &DisagreementPair) -> bool {
    d.is_simple()
}

pub fn determined_binding(d: &DisagreementPair) -> Result<Substitution> {
    d.determined_binding()
}

/// A finite set of atoms over one predicate, kept in insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkingSet {
    atoms: Vec<Atom>,
}

impl WorkingSet {
    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Result<Self> {
        let mut set: Vec<Atom> = Vec::new();
        for a in atoms {
            if let Some(first) = set.first() {
                if !first.same_predicate(&a) {
                    return Err(Error::MixedPredicates);
                }
            }
            if !set.contains(&a) {
                set.push(a);
            }
        }
        Ok(WorkingSet { atoms: set })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn apply(&self, s: &Substitution) -> WorkingSet {
        WorkingSet::dedup(self.atoms.iter().map(|a| a.apply(s)).collect())
    }

    /// Replace the subterms of `d` in its two atoms by `with`.
    pub fn replace_pair(&self, d: &DisagreementPair, with: Term) -> WorkingSet {
        let mut atoms = self.atoms.clone();
        for idx in [d.left_atom, d.right_atom] {
            atoms[idx] = atoms[idx]
                .replace_at(&d.position, with.clone())
                .expect("disagreement position is valid in its atoms");
        }
        WorkingSet::dedup(atoms)
    }

    fn dedup(atoms: Vec<Atom>) -> WorkingSet {
        let mut out: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            if !out.contains(&a) {
                out.push(a);
            }
        }
        WorkingSet { atoms: out }
    }

    pub fn total_size(&self) -> usize {
        self.atoms
            .iter()
            .map(|a| a.args().iter().map(Term::size).sum::<usize>())
            .sum()
    }
}

/// All outermost disagreement pairs between every two atoms of `set`,
/// ordered by atom indices, then by position.
pub fn disagreement_pairs(set: &WorkingSet) -> Result<Vec<DisagreementPair>> {
    let atoms = set.atoms();
    if let Some(first) = atoms.first() {
        if atoms.iter().any(|a| !a.same_predicate(first)) {
            return Err(Error::MixedPredicates);
        }
    }
    let mut out = Vec::new();
    for i in 0..atoms.len() {
        for j in i + 1..atoms.len() {
            for (k, (l, r)) in atoms[i].args().iter().zip(atoms[j].args()).enumerate() {
                collect(l, r, Position::new(alloc::vec![k + 1]), i, j, &mut out);
            }
        }
    }
    Ok(out)
}

fn collect(
    l: &Term,
    r: &Term,
    pos: Position,
    i: usize,
    j: usize,
    out: &mut Vec<DisagreementPair>,
) {
    match (l, r) {
        (Term::Var(x), Term::Var(y)) if x == y => {}
        (Term::App(f, xs), Term::App(g, ys)) if f == g => {
            for (k, (a, b)) in xs.iter().zip(ys).enumerate() {
                collect(a, b, pos.child(k + 1), i, j, out);
            }
        }
        _ => out.push(DisagreementPair {
            position: pos,
            left: l.clone(),
            right: r.clone(),
            left_atom: i,
            right_atom: j,
        }),
    }
}
