//! Variables, terms, atoms and positions.
//!
//! Variables carry a numeric identity and a namespace. The reserved namespace
//! holds the markers introduced by positive unification for positions that
//! must not be bound further; everything else lives in the ordinary one.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};

use crate::error::{Error, Result};

/// Which of the two variable sets a variable belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Namespace {
    /// Ordinary variables, freely bindable.
    Ordinary,
    /// Reserved markers (`U`, `U'`, ...) produced by positive unification.
    Reserved,
}

/// A variable. Two variables are equal iff their ids are equal.
#[derive(Debug, Clone, Copy)]
pub struct Var {
    id: u32,
    ns: Namespace,
}

impl Var {
    pub const fn new(id: u32, ns: Namespace) -> Self {
        Var { id, ns }
    }

    pub fn id(self) -> u32 {
        self.id
    }

    pub fn namespace(self) -> Namespace {
        self.ns
    }

    pub fn is_reserved(self) -> bool {
        self.ns == Namespace::Reserved
    }
}

impl PartialEq for Var {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for Var {}

impl Hash for Var {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.id.hash(state)
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        self.id.cmp(&other.id)
    }
}

/// Session-local source of fresh variables.
///
/// Every algorithm that needs fresh variables takes a `&mut VarGen`; a
/// generator must start above every id already in use by its inputs.
#[derive(Debug, Clone)]
pub struct VarGen {
    next: u32,
}

impl Default for VarGen {
    fn default() -> Self {
        VarGen::new()
    }
}

impl VarGen {
    pub fn new() -> Self {
        VarGen { next: 0 }
    }

    /// A generator whose first id is larger than any variable of `atoms`.
    pub fn above<'a>(atoms: impl IntoIterator<Item = &'a Atom>) -> Self {
        let mut gen = VarGen::new();
        for atom in atoms {
            atom.for_each_var(&mut |v| gen.reserve(v));
        }
        gen
    }

    /// Make sure `v` will never be handed out again.
    pub fn reserve(&mut self, v: Var) {
        if v.id >= self.next {
            self.next = v.id + 1;
        }
    }

    pub fn fresh(&mut self, ns: Namespace) -> Var {
        let v = Var::new(self.next, ns);
        self.next = self.next.checked_add(1).expect("variable ids exhausted");
        v
    }

    pub fn ordinary(&mut self) -> Var {
        self.fresh(Namespace::Ordinary)
    }

    pub fn reserved(&mut self) -> Var {
        self.fresh(Namespace::Reserved)
    }

    pub fn peek(&self) -> u32 {
        self.next
    }
}

/// A function (or predicate) symbol. Identity is the `(name, arity)` pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Functor {
    name: Arc<str>,
    arity: usize,
}

impl Functor {
    pub fn new(name: &str, arity: usize) -> Self {
        Functor {
            name: Arc::from(name),
            arity,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_constant(&self) -> bool {
        self.arity == 0
    }
}

impl fmt::Display for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// A first-order term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Var),
    App(Functor, Vec<Term>),
}

impl Term {
    pub fn var(v: Var) -> Self {
        Term::Var(v)
    }

    /// `f(args...)`; the arity of `f` must match the number of arguments.
    pub fn app(f: Functor, args: Vec<Term>) -> Self {
        assert_eq!(
            f.arity(),
            args.len(),
            "arity mismatch for functor {}",
            f.name()
        );
        Term::App(f, args)
    }

    /// Shorthand taking the arity from the argument count.
    pub fn func(name: &str, args: Vec<Term>) -> Self {
        Term::App(Functor::new(name, args.len()), args)
    }

    pub fn constant(name: &str) -> Self {
        Term::App(Functor::new(name, 0), Vec::new())
    }

    pub fn as_var(&self) -> Option<Var> {
        match self {
            Term::Var(v) => Some(*v),
            Term::App(..) => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn functor(&self) -> Option<&Functor> {
        match self {
            Term::Var(_) => None,
            Term::App(f, _) => Some(f),
        }
    }

    /// `0` for a variable, `1 + max(child depths)` otherwise (so constants have depth 1).
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn occurs(&self, v: Var) -> bool {
        match self {
            Term::Var(w) => *w == v,
            Term::App(_, args) => args.iter().any(|a| a.occurs(v)),
        }
    }

    pub fn contains_reserved(&self) -> bool {
        match self {
            Term::Var(w) => w.is_reserved(),
            Term::App(_, args) => args.iter().any(Term::contains_reserved),
        }
    }

    pub fn subterm_at(&self, pos: &Position) -> Result<&Term> {
        let mut cur = self;
        for &step in pos.steps() {
            cur = match cur {
                Term::App(_, args) if step >= 1 && step <= args.len() => &args[step - 1],
                _ => return Err(Error::InvalidPosition(pos.clone())),
            };
        }
        Ok(cur)
    }

    pub fn replace_at(&self, pos: &Position, with: Term) -> Result<Term> {
        let mut out = self.clone();
        *out.subterm_at_mut(pos)? = with;
        Ok(out)
    }

    fn subterm_at_mut(&mut self, pos: &Position) -> Result<&mut Term> {
        let mut cur = self;
        for &step in pos.steps() {
            cur = match cur {
                Term::App(_, args) if step >= 1 && step <= args.len() => &mut args[step - 1],
                _ => return Err(Error::InvalidPosition(pos.clone())),
            };
        }
        Ok(cur)
    }

    pub(crate) fn visit_vars<F: FnMut(Var)>(&self, f: &mut F) {
        match self {
            Term::Var(v) => f(*v),
            Term::App(_, args) => args.iter().for_each(|a| a.visit_vars(f)),
        }
    }

    pub(crate) fn visit_symbols<F: FnMut(&Functor)>(&self, f: &mut F) {
        if let Term::App(g, args) = self {
            f(g);
            args.iter().for_each(|a| a.visit_symbols(f));
        }
    }

    /// Rename variables through `map`, leaving unmapped ones alone.
    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> Term {
        match self {
            Term::Var(v) => Term::Var(*map.get(v).unwrap_or(v)),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.rename(map)).collect())
            }
        }
    }
}

/// A predicate applied to argument terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pred: Functor,
    args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: &str, args: Vec<Term>) -> Self {
        Atom {
            pred: Functor::new(pred, args.len()),
            args,
        }
    }

    pub fn with_predicate(pred: Functor, args: Vec<Term>) -> Self {
        assert_eq!(pred.arity(), args.len(), "arity mismatch for predicate");
        Atom { pred, args }
    }

    pub fn predicate(&self) -> &Functor {
        &self.pred
    }

    pub fn args(&self) -> &[Term] {
        &self.args
    }

    pub fn into_args(self) -> Vec<Term> {
        self.args
    }

    /// The atom viewed as a term rooted by its predicate symbol.
    pub fn to_term(&self) -> Term {
        Term::App(self.pred.clone(), self.args.clone())
    }

    /// Inverse of [`Atom::to_term`]; `None` for a variable.
    pub fn from_term(t: Term) -> Option<Atom> {
        match t {
            Term::App(pred, args) => Some(Atom { pred, args }),
            Term::Var(_) => None,
        }
    }

    /// Maximum depth over the arguments (`0` for a propositional atom).
    pub fn depth(&self) -> usize {
        self.args.iter().map(Term::depth).max().unwrap_or(0)
    }

    pub fn subterm_at(&self, pos: &Position) -> Result<&Term> {
        let (first, rest) = pos
            .split_first()
            .ok_or_else(|| Error::InvalidPosition(pos.clone()))?;
        if first == 0 || first > self.args.len() {
            return Err(Error::InvalidPosition(pos.clone()));
        }
        self.args[first - 1]
            .subterm_at(&rest)
            .map_err(|_| Error::InvalidPosition(pos.clone()))
    }

    pub fn replace_at(&self, pos: &Position, with: Term) -> Result<Atom> {
        let (first, rest) = pos
            .split_first()
            .ok_or_else(|| Error::InvalidPosition(pos.clone()))?;
        if first == 0 || first > self.args.len() {
            return Err(Error::InvalidPosition(pos.clone()));
        }
        let mut out = self.clone();
        out.args[first - 1] = self.args[first - 1]
            .replace_at(&rest, with)
            .map_err(|_| Error::InvalidPosition(pos.clone()))?;
        Ok(out)
    }

    pub fn for_each_var<F: FnMut(Var)>(&self, f: &mut F) {
        self.args.iter().for_each(|a| a.visit_vars(f));
    }

    pub fn for_each_symbol<F: FnMut(&Functor)>(&self, f: &mut F) {
        self.args.iter().for_each(|a| a.visit_symbols(f));
    }

    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> Atom {
        Atom {
            pred: self.pred.clone(),
            args: self.args.iter().map(|a| a.rename(map)).collect(),
        }
    }

    pub fn same_predicate(&self, other: &Atom) -> bool {
        self.pred == other.pred
    }
}

/// A path from the root; steps are 1-based child indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Position(Vec<usize>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn new(steps: Vec<usize>) -> Self {
        Position(steps)
    }

    pub fn steps(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, step: usize) -> Position {
        let mut steps = self.0.clone();
        steps.push(step);
        Position(steps)
    }

    fn split_first(&self) -> Option<(usize, Position)> {
        self.0
            .split_first()
            .map(|(first, rest)| (*first, Position(rest.to_vec())))
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        f.write_str("[")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", s)?;
        }
        f.write_str("]")
    }
}

/// Anything that contains variables: terms, atoms and slices of either.
pub trait HasVars {
    fn each_var(&self, f: &mut dyn FnMut(Var));

    /// Variables in left-to-right order of first occurrence.
    fn vars_ordered(&self) -> Vec<Var> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.each_var(&mut |v| {
            if seen.insert(v) {
                out.push(v);
            }
        });
        out
    }

    fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.each_var(&mut |v| {
            out.insert(v);
        });
        out
    }

    /// No variable occurs twice.
    fn is_linear(&self) -> bool {
        let mut seen = BTreeSet::new();
        let mut linear = true;
        self.each_var(&mut |v| linear &= seen.insert(v));
        linear
    }

    fn is_ground(&self) -> bool {
        let mut ground = true;
        self.each_var(&mut |_| ground = false);
        ground
    }
}

impl HasVars for Term {
    fn each_var(&self, f: &mut dyn FnMut(Var)) {
        self.visit_vars(&mut |v| f(v));
    }
}

impl HasVars for Atom {
    fn each_var(&self, f: &mut dyn FnMut(Var)) {
        self.for_each_var(&mut |v| f(v));
    }
}

impl<T: HasVars> HasVars for [T] {
    fn each_var(&self, f: &mut dyn FnMut(Var)) {
        for item in self {
            item.each_var(f);
        }
    }
}

impl<T: HasVars> HasVars for Vec<T> {
    fn each_var(&self, f: &mut dyn FnMut(Var)) {
        self.as_slice().each_var(f)
    }
}

/// Syntactic objects that can be compared up to renaming.
pub trait Variant: Sized {
    /// Feed corresponding variable pairs to `pair`; `false` on a structural mismatch.
    fn zip_vars(&self, other: &Self, pair: &mut dyn FnMut(Var, Var) -> bool) -> bool;
    fn rename_vars(&self, map: &BTreeMap<Var, Var>) -> Self;
}

fn zip_terms(a: &Term, b: &Term, pair: &mut dyn FnMut(Var, Var) -> bool) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => pair(*x, *y),
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.iter().zip(ys).all(|(x, y)| zip_terms(x, y, pair))
        }
        _ => false,
    }
}

impl Variant for Term {
    fn zip_vars(&self, other: &Self, pair: &mut dyn FnMut(Var, Var) -> bool) -> bool {
        zip_terms(self, other, pair)
    }

    fn rename_vars(&self, map: &BTreeMap<Var, Var>) -> Self {
        self.rename(map)
    }
}

impl Variant for Atom {
    fn zip_vars(&self, other: &Self, pair: &mut dyn FnMut(Var, Var) -> bool) -> bool {
        self.pred == other.pred
            && self
                .args
                .iter()
                .zip(&other.args)
                .all(|(x, y)| zip_terms(x, y, pair))
    }

    fn rename_vars(&self, map: &BTreeMap<Var, Var>) -> Self {
        self.rename(map)
    }
}

impl<T: Variant> Variant for Vec<T> {
    fn zip_vars(&self, other: &Self, pair: &mut dyn FnMut(Var, Var) -> bool) -> bool {
        self.len() == other.len() && self.iter().zip(other).all(|(x, y)| x.zip_vars(y, pair))
    }

    fn rename_vars(&self, map: &BTreeMap<Var, Var>) -> Self {
        self.iter().map(|x| x.rename_vars(map)).collect()
    }
}

/// `a` and `b` are equal up to a namespace-preserving variable bijection.
pub fn variant_eq<T: Variant>(a: &T, b: &T) -> bool {
    let mut fwd: BTreeMap<Var, Var> = BTreeMap::new();
    let mut bwd: BTreeMap<Var, Var> = BTreeMap::new();
    a.zip_vars(b, &mut |x, y| {
        if x.namespace() != y.namespace() {
            return false;
        }
        let f = *fwd.entry(x).or_insert(y);
        let g = *bwd.entry(y).or_insert(x);
        f == y && g == x
    })
}

/// Canonical representative of the variant class of `item`.
///
/// Variables are renumbered by first occurrence; the namespace is folded into
/// the id (even = ordinary, odd = reserved) so that canonical forms compare
/// equal exactly when the originals are namespace-preserving variants.
pub fn canonical<T: Variant + HasVars>(item: &T) -> T {
    let mut map = BTreeMap::new();
    for (k, v) in item.vars_ordered().into_iter().enumerate() {
        let tag = u32::from(v.is_reserved());
        let id = (k as u32) * 2 + tag;
        map.insert(v, Var::new(id, v.namespace()));
    }
    item.rename_vars(&map)
}

/// Fresh variants of `atoms`, pairwise variable-disjoint.
///
/// Every variable is replaced by a fresh one from `ns`; repeated occurrences
/// inside one atom stay repeated.
pub fn rename_apart(atoms: &[Atom], ns: Namespace, gen: &mut VarGen) -> Vec<Atom> {
    atoms
        .iter()
        .map(|atom| {
            let map: BTreeMap<Var, Var> = atom
                .vars_ordered()
                .into_iter()
                .map(|v| (v, gen.fresh(ns)))
                .collect();
            atom.rename(&map)
        })
        .collect()
}

/// Shorthand constructors used throughout the tests.
pub mod build {
    use super::*;

    pub fn v(id: u32) -> Term {
        Term::Var(Var::new(id, Namespace::Ordinary))
    }

    pub fn u(id: u32) -> Term {
        Term::Var(Var::new(id, Namespace::Reserved))
    }

    pub fn c(name: &str) -> Term {
        Term::constant(name)
    }

    pub fn f(name: &str, args: Vec<Term>) -> Term {
        Term::func(name, args)
    }

    pub fn atom(name: &str, args: Vec<Term>) -> Atom {
        Atom::new(name, args)
    }

    pub fn pos(steps: &[usize]) -> Position {
        Position::new(steps.to_vec())
    }
}
