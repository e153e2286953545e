//! Substitutions, equation sets and most general unifiers.

use alloc::collections::btree_map::{self, BTreeMap};
use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::terms::{Atom, HasVars, Term, Var};

/// A finite map from variables to terms. Identity bindings are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution {
    map: BTreeMap<Var, Term>,
}

/// Things a substitution can be applied to.
pub trait Apply {
    fn apply(&self, s: &Substitution) -> Self;
}

impl Apply for Term {
    fn apply(&self, s: &Substitution) -> Term {
        if s.is_empty() {
            return self.clone();
        }
        match self {
            Term::Var(v) => s.map.get(v).cloned().unwrap_or(Term::Var(*v)),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.apply(s)).collect()),
        }
    }
}

impl Apply for Atom {
    fn apply(&self, s: &Substitution) -> Atom {
        Atom::with_predicate(
            self.predicate().clone(),
            self.args().iter().map(|a| a.apply(s)).collect(),
        )
    }
}

impl<T: Apply> Apply for Vec<T> {
    fn apply(&self, s: &Substitution) -> Vec<T> {
        self.iter().map(|x| x.apply(s)).collect()
    }
}

impl Substitution {
    pub fn new() -> Self {
        Substitution::default()
    }

    /// `{v/t}`, or the identity when `t` is `v` itself.
    pub fn singleton(v: Var, t: Term) -> Self {
        let mut s = Substitution::new();
        s.insert(v, t);
        s
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, Term)>) -> Self {
        let mut s = Substitution::new();
        for (v, t) in pairs {
            s.insert(v, t);
        }
        s
    }

    /// Adds or overwrites a binding; an identity binding removes `v` instead.
    pub fn insert(&mut self, v: Var, t: Term) {
        if t == Term::Var(v) {
            self.map.remove(&v);
        } else {
            self.map.insert(v, t);
        }
    }

    pub fn get(&self, v: Var) -> Option<&Term> {
        self.map.get(&v)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, &Term)> {
        self.map.iter().map(|(v, t)| (*v, t))
    }

    pub fn domain(&self) -> BTreeSet<Var> {
        self.map.keys().copied().collect()
    }

    /// Variables of all right-hand sides.
    pub fn range_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for t in self.map.values() {
            t.each_var(&mut |v| {
                out.insert(v);
            });
        }
        out
    }

    pub fn apply<T: Apply>(&self, item: &T) -> T {
        item.apply(self)
    }

    pub fn apply_var(&self, v: Var) -> Term {
        self.map.get(&v).cloned().unwrap_or(Term::Var(v))
    }

    /// `self` followed by `then`: `x ↦ (x self) then`.
    pub fn compose(&self, then: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (v, t) in &self.map {
            out.insert(*v, t.apply(then));
        }
        for (v, t) in &then.map {
            if !self.map.contains_key(v) {
                out.insert(*v, t.clone());
            }
        }
        out
    }

    /// Keep only the bindings of variables in `vars`.
    pub fn restrict(&self, vars: &BTreeSet<Var>) -> Substitution {
        Substitution {
            map: self
                .map
                .iter()
                .filter(|(v, _)| vars.contains(v))
                .map(|(v, t)| (*v, t.clone()))
                .collect(),
        }
    }

    /// `Dom ∩ Ran = ∅`.
    pub fn is_idempotent(&self) -> bool {
        self.map
            .values()
            .all(|t| !self.map.keys().any(|v| t.occurs(*v)))
    }

    /// Range terms are linear and pairwise variable-disjoint.
    pub fn is_linear(&self) -> bool {
        let mut seen = BTreeSet::new();
        let mut linear = true;
        for t in self.map.values() {
            t.each_var(&mut |v| linear &= seen.insert(v));
        }
        linear
    }

    /// The conjunction `X₁ = t₁ ∧ … ∧ Xₙ = tₙ`.
    pub fn to_equations(&self) -> EquationSet {
        EquationSet {
            eqs: self
                .map
                .iter()
                .map(|(v, t)| (Term::Var(*v), t.clone()))
                .collect(),
        }
    }

    pub fn into_iter_pairs(self) -> btree_map::IntoIter<Var, Term> {
        self.map.into_iter()
    }

    /// Bind `v` to `t` and propagate into the existing right-hand sides.
    fn bind_propagate(&mut self, v: Var, t: Term) {
        let single = Substitution::singleton(v, t.clone());
        let rebuilt: Vec<(Var, Term)> = self
            .map
            .iter()
            .map(|(w, s)| (*w, s.apply(&single)))
            .collect();
        self.map.clear();
        for (w, s) in rebuilt {
            self.insert(w, s);
        }
        self.insert(v, t);
    }
}

/// Free function form of [`Substitution::compose`].
pub fn compose(first: &Substitution, then: &Substitution) -> Substitution {
    first.compose(then)
}

pub fn restrict(s: &Substitution, vars: &BTreeSet<Var>) -> Substitution {
    s.restrict(vars)
}

pub fn equational_repr(s: &Substitution) -> EquationSet {
    s.to_equations()
}

/// A conjunction of term equations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EquationSet {
    eqs: Vec<(Term, Term)>,
}

impl EquationSet {
    pub fn new() -> Self {
        EquationSet::default()
    }

    pub fn push(&mut self, lhs: Term, rhs: Term) {
        self.eqs.push((lhs, rhs));
    }

    pub fn with(mut self, lhs: Term, rhs: Term) -> Self {
        self.push(lhs, rhs);
        self
    }

    pub fn and(mut self, other: EquationSet) -> Self {
        self.eqs.extend(other.eqs);
        self
    }

    pub fn len(&self) -> usize {
        self.eqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eqs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Term, Term)> {
        self.eqs.iter()
    }
}

impl fmt::Display for EquationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.eqs.is_empty() {
            return f.write_str("true");
        }
        for (i, (l, r)) in self.eqs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∧ ")?;
            }
            write!(f, "{} = {}", l, r)?;
        }
        Ok(())
    }
}

/// Why no unifier exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoUnifier {
    Clash,
    OccursCheck,
}

impl fmt::Display for NoUnifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoUnifier::Clash => f.write_str("symbol clash"),
            NoUnifier::OccursCheck => f.write_str("occurs check"),
        }
    }
}

/// Idempotent most general unifier of a conjunction, with occurs check.
///
/// Equations are solved left to right; in a variable–variable equation the
/// left variable is bound to the right one.
pub fn mgu(eqs: &EquationSet) -> core::result::Result<Substitution, NoUnifier> {
    let mut solved = Substitution::new();
    let mut stack: Vec<(Term, Term)> = eqs.eqs.iter().rev().cloned().collect();
    while let Some((l, r)) = stack.pop() {
        let l = l.apply(&solved);
        let r = r.apply(&solved);
        match (l, r) {
            (Term::Var(x), Term::Var(y)) if x == y => {}
            (Term::Var(x), t) | (t, Term::Var(x)) => {
                if t.occurs(x) {
                    return Err(NoUnifier::OccursCheck);
                }
                solved.bind_propagate(x, t);
            }
            (Term::App(f, xs), Term::App(g, ys)) => {
                if f != g {
                    return Err(NoUnifier::Clash);
                }
                stack.extend(xs.into_iter().zip(ys).rev());
            }
        }
    }
    Ok(solved)
}

pub fn mgu_terms(a: &Term, b: &Term) -> core::result::Result<Substitution, NoUnifier> {
    mgu(&EquationSet::new().with(a.clone(), b.clone()))
}

pub fn mgu_atoms(a: &Atom, b: &Atom) -> core::result::Result<Substitution, NoUnifier> {
    if a.predicate() != b.predicate() {
        return Err(NoUnifier::Clash);
    }
    mgu_terms(&a.to_term(), &b.to_term())
}

/// Whether the two atoms unify (they are taken as they are, not renamed apart).
pub fn unifiable(a: &Atom, b: &Atom) -> bool {
    mgu_atoms(a, b).is_ok()
}

pub fn unifiable_terms(a: &Term, b: &Term) -> bool {
    mgu_terms(a, b).is_ok()
}

/// `θ₁ ⇑ θ₂`: the mgu of both equational representations; `Ok(None)` is `fail`.
pub fn parallel_compose(a: &Substitution, b: &Substitution) -> Result<Option<Substitution>> {
    if !a.is_idempotent() || !b.is_idempotent() {
        return Err(Error::NotIdempotent);
    }
    Ok(mgu(&a.to_equations().and(b.to_equations())).ok())
}

/// One-sided matching: `σ` with `pattern σ = target`, binding pattern variables only.
pub fn match_term(pattern: &Term, target: &Term) -> Option<Substitution> {
    let mut binds: BTreeMap<Var, Term> = BTreeMap::new();
    if match_into(pattern, target, &mut binds) {
        Some(Substitution::from_pairs(binds))
    } else {
        None
    }
}

pub fn match_atom(pattern: &Atom, target: &Atom) -> Option<Substitution> {
    if pattern.predicate() != target.predicate() {
        return None;
    }
    let mut binds: BTreeMap<Var, Term> = BTreeMap::new();
    let ok = pattern
        .args()
        .iter()
        .zip(target.args())
        .all(|(p, t)| match_into(p, t, &mut binds));
    ok.then(|| Substitution::from_pairs(binds))
}

fn match_into(pattern: &Term, target: &Term, binds: &mut BTreeMap<Var, Term>) -> bool {
    match pattern {
        Term::Var(v) => match binds.get(v) {
            Some(t) => t == target,
            None => {
                binds.insert(*v, target.clone());
                true
            }
        },
        Term::App(f, ps) => match target {
            Term::App(g, ts) if f == g => ps.iter().zip(ts).all(|(p, t)| match_into(p, t, binds)),
            _ => false,
        },
    }
}

/// `general` is at least as general as `specific` (`specific = general σ`).
pub fn subsumes(general: &Atom, specific: &Atom) -> bool {
    match_atom(general, specific).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::build::*;
    use crate::terms::{Namespace, Var};
    use alloc::vec;

    fn x(id: u32) -> Var {
        Var::new(id, Namespace::Ordinary)
    }

    #[test]
    fn apply_examples() {
        let s = Substitution::singleton(x(0), c("a"));
        assert_eq!(
            s.apply(&atom("p", vec![v(0), v(1)])),
            atom("p", vec![c("a"), v(1)])
        );
        let t = f("f", vec![v(0), v(1)]);
        assert_eq!(Substitution::new().apply(&t), t);
        let n = Substitution::singleton(x(0), f("s", vec![c("a")]));
        assert_eq!(
            n.apply(&atom("p", vec![v(0)])),
            atom("p", vec![f("s", vec![c("a")])])
        );
    }

    #[test]
    fn identity_bindings_are_dropped() {
        let s = Substitution::singleton(x(3), v(3));
        assert!(s.is_empty());
    }

    #[test]
    fn compose_examples() {
        let xy = Substitution::singleton(x(0), v(1));
        let ya = Substitution::singleton(x(1), c("a"));
        assert_eq!(
            xy.compose(&ya),
            Substitution::from_pairs([(x(0), c("a")), (x(1), c("a"))])
        );
        assert_eq!(Substitution::new().compose(&ya), ya);
        assert_eq!(ya.compose(&Substitution::new()), ya);

        let s = Substitution::singleton(x(0), f("f", vec![u(9)]));
        let t = Substitution::singleton(Var::new(9, Namespace::Reserved), f("g", vec![c("a")]));
        let st = s.compose(&t);
        let p = atom("p", vec![v(0), u(9)]);
        assert_eq!(st.apply(&p), t.apply(&s.apply(&p)));
        assert_eq!(st.get(x(0)), Some(&f("f", vec![f("g", vec![c("a")])])));
        // {X/Y} then {Y/X} collapses X back to itself.
        let yx = Substitution::singleton(x(1), v(0));
        assert_eq!(xy.compose(&yx), Substitution::singleton(x(1), v(0)));
    }

    #[test]
    fn restrict_examples() {
        let s = Substitution::from_pairs([(x(0), c("a")), (x(1), c("b"))]);
        let only_x: BTreeSet<Var> = [x(0)].into_iter().collect();
        assert_eq!(s.restrict(&only_x), Substitution::singleton(x(0), c("a")));
        assert!(s.restrict(&BTreeSet::new()).is_empty());
        let z: BTreeSet<Var> = [x(7)].into_iter().collect();
        assert!(Substitution::singleton(x(0), c("a")).restrict(&z).is_empty());
    }

    #[test]
    fn idempotence_examples() {
        assert!(Substitution::singleton(x(0), f("f", vec![v(1)])).is_idempotent());
        assert!(!Substitution::singleton(x(0), f("f", vec![v(0)])).is_idempotent());
        let s = Substitution::from_pairs([(x(0), v(1)), (x(1), c("a"))]);
        assert!(!s.is_idempotent());
        assert_ne!(s.compose(&s), s);
    }

    #[test]
    fn mgu_examples() {
        let eqs = EquationSet::new().with(
            atom("p", vec![v(0), v(1)]).to_term(),
            atom("p", vec![c("a"), c("b")]).to_term(),
        );
        assert_eq!(
            mgu(&eqs),
            Ok(Substitution::from_pairs([(x(0), c("a")), (x(1), c("b"))]))
        );
        assert_eq!(mgu_terms(&v(0), &f("f", vec![v(0)])), Err(NoUnifier::OccursCheck));
        let l = atom("p", vec![f("f", vec![c("a")]), v(0)]).to_term();
        let r = atom("p", vec![v(1), f("g", vec![v(1)])]).to_term();
        let m = mgu_terms(&l, &r).unwrap();
        assert_eq!(m.get(x(1)), Some(&f("f", vec![c("a")])));
        assert_eq!(m.get(x(0)), Some(&f("g", vec![f("f", vec![c("a")])])));
        assert_eq!(m.apply(&l), m.apply(&r));
        assert!(m.is_idempotent());
    }

    #[test]
    fn unifiable_examples() {
        assert!(unifiable(
            &atom("p", vec![v(0)]),
            &atom("p", vec![f("f", vec![v(1)])])
        ));
        assert!(!unifiable(&atom("p", vec![c("a")]), &atom("p", vec![c("b")])));
        assert!(!unifiable(
            &atom("p", vec![f("s", vec![c("a")])]),
            &atom("p", vec![f("f", vec![v(0)])])
        ));
        assert!(!unifiable(&atom("p", vec![v(0)]), &atom("q", vec![v(0)])));
    }

    #[test]
    fn parallel_composition_examples() {
        let xa = Substitution::singleton(x(0), c("a"));
        let yb = Substitution::singleton(x(1), c("b"));
        assert_eq!(
            parallel_compose(&xa, &yb).unwrap(),
            Some(Substitution::from_pairs([(x(0), c("a")), (x(1), c("b"))]))
        );
        let xb = Substitution::singleton(x(0), c("b"));
        assert_eq!(parallel_compose(&xa, &xb).unwrap(), None);

        let xfy = Substitution::singleton(x(0), f("f", vec![v(1)]));
        let xfgz = Substitution::singleton(x(0), f("f", vec![f("g", vec![v(2)])]));
        let m = parallel_compose(&xfy, &xfgz).unwrap().unwrap();
        assert_eq!(m.get(x(0)), Some(&f("f", vec![f("g", vec![v(2)])])));
        assert_eq!(m.get(x(1)), Some(&f("g", vec![v(2)])));

        let bad = Substitution::singleton(x(0), f("f", vec![v(0)]));
        assert_eq!(parallel_compose(&bad, &xa), Err(Error::NotIdempotent));
    }

    #[test]
    fn equational_representation() {
        let s = Substitution::from_pairs([(x(0), c("a")), (x(1), f("f", vec![v(2)]))]);
        let eqs = s.to_equations();
        assert_eq!(eqs.len(), 2);
        assert_eq!(mgu(&eqs), Ok(s));
        assert!(Substitution::new().to_equations().is_empty());
    }

    #[test]
    fn matching_is_one_sided() {
        let p = atom("p", vec![v(0), v(0)]);
        assert!(match_atom(&p, &atom("p", vec![c("a"), c("a")])).is_some());
        assert!(match_atom(&p, &atom("p", vec![c("a"), c("b")])).is_none());
        assert!(match_atom(&atom("p", vec![c("a")]), &atom("p", vec![v(0)])).is_none());
    }
}
