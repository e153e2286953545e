//! Positive unification: instantiate `A` as far as possible while it still
//! unifies with every atom of `H⁺`, marking unresolvable positions with
//! reserved variables.
//!
//! [`su_plus`] explores every don't-know choice (several simple pairs binding
//! the same variable) and fixes an order for don't-care choices.
//! [`su_plus_lin`] is the deterministic variant for linear inputs; its
//! result is the unique maximal solution.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::disagree::{disagreement_pairs, WorkingSet};
use crate::enumerate::{deepest_occurrence, occurrences};
use crate::error::{Precondition, Result};
use crate::signature::Signature;
use crate::subst::{match_atom, unifiable, Substitution};
use crate::terms::{canonical, rename_apart, Atom, HasVars, Namespace, Position, Term, Var, VarGen};

/// One outcome of positive unification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositiveResult {
    /// Bindings for the variables of `A` only.
    pub theta: Substitution,
    /// The simple-pair bindings applied, in order.
    pub trace: Vec<(Var, Term)>,
}

impl PositiveResult {
    pub fn instance(&self, a: &Atom) -> Atom {
        self.theta.apply(a)
    }
}

/// Counters from a positive-unification run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PositiveStats {
    pub states: usize,
    pub simple_steps: usize,
    pub replace_steps: usize,
    /// Branches whose final atom is not an instance of `A` (only possible
    /// for non-linear `A`); they yield no result.
    pub dropped: usize,
}

pub(crate) fn check_inputs(a: &Atom, hpos: &[Atom]) -> Result<()> {
    if hpos.is_empty() {
        return Err(Precondition::EmptyPositiveSet.into());
    }
    check_disjoint_unifiable(a, hpos)
}

pub(crate) fn check_disjoint_unifiable(a: &Atom, others: &[Atom]) -> Result<()> {
    let mut seen: BTreeSet<Var> = a.vars();
    for (i, h) in others.iter().enumerate() {
        if !h.same_predicate(a) {
            return Err(Precondition::PredicateMismatch.into());
        }
        for v in h.vars() {
            if !seen.insert(v) {
                return Err(Precondition::NotVariableDisjoint.into());
            }
        }
        if !unifiable(a, h) {
            return Err(Precondition::NotUnifiable { index: i }.into());
        }
    }
    Ok(())
}

fn check_linear(a: &Atom, hpos: &[Atom]) -> Result<()> {
    if !a.is_linear() {
        return Err(Precondition::NonLinear("the selected atom".into()).into());
    }
    if hpos.iter().any(|h| !h.is_linear()) {
        return Err(Precondition::NonLinear("a positive atom".into()).into());
    }
    Ok(())
}

fn gen_for(a: &Atom, hpos: &[Atom], gen: &mut VarGen) {
    a.for_each_var(&mut |v| gen.reserve(v));
    for h in hpos {
        h.for_each_var(&mut |v| gen.reserve(v));
    }
}

/// All outcomes of positive unification, deduplicated up to variants of `Aθ`.
pub fn su_plus(a: &Atom, hpos: &[Atom], gen: &mut VarGen) -> Result<Vec<PositiveResult>> {
    su_plus_with_stats(a, hpos, gen).map(|(r, _)| r)
}

pub fn su_plus_with_stats(
    a: &Atom,
    hpos: &[Atom],
    gen: &mut VarGen,
) -> Result<(Vec<PositiveResult>, PositiveStats)> {
    check_inputs(a, hpos)?;
    gen_for(a, hpos, gen);
    let mut stats = PositiveStats::default();
    let start = initial_set(a, hpos)?;

    let mut results = Vec::new();
    let mut classes: BTreeSet<Atom> = BTreeSet::new();
    let mut visited: BTreeSet<Vec<Atom>> = BTreeSet::new();
    let mut stack: Vec<(WorkingSet, Vec<(Var, Term)>)> = alloc::vec![(start, Vec::new())];

    while let Some((set, trace)) = stack.pop() {
        if !visited.insert(set.atoms().to_vec()) {
            continue;
        }
        stats.states += 1;
        let choices = simple_choices(&set);
        if choices.is_empty() {
            let done = replace_nonsimple(set, gen, &mut stats);
            match finish(a, &done, trace, gen) {
                Some(r) => {
                    if classes.insert(canonical(&r.instance(a))) {
                        results.push(r);
                    }
                }
                None => stats.dropped += 1,
            }
            continue;
        }
        // Pushed in reverse so the first choice is explored first.
        for (v, t) in choices.into_iter().rev() {
            stats.simple_steps += 1;
            let next = set.apply(&Substitution::singleton(v, t.clone()));
            let mut tr = trace.clone();
            tr.push((v, t));
            stack.push((next, tr));
        }
    }
    Ok((results, stats))
}

/// The maximal solution for linear `A` and `H⁺`.
pub fn su_plus_lin(a: &Atom, hpos: &[Atom], gen: &mut VarGen) -> Result<PositiveResult> {
    check_inputs(a, hpos)?;
    check_linear(a, hpos)?;
    gen_for(a, hpos, gen);
    let mut stats = PositiveStats::default();
    let mut set = initial_set(a, hpos)?;
    let mut trace = Vec::new();
    loop {
        let first = disagreement_pairs(&set)
            .expect("single predicate")
            .into_iter()
            .find(|d| d.is_simple());
        match first {
            Some(d) => {
                let (v, t) = d.candidate_bindings().swap_remove(0);
                set = set.apply(&Substitution::singleton(v, t.clone()));
                trace.push((v, t));
            }
            None => break,
        }
    }
    let done = replace_nonsimple(set, gen, &mut stats);
    Ok(finish(a, &done, trace, gen).expect("a linear atom matches any of its instances"))
}

fn initial_set(a: &Atom, hpos: &[Atom]) -> Result<WorkingSet> {
    WorkingSet::new(core::iter::once(a.clone()).chain(hpos.iter().cloned()))
        .map_err(|_| Precondition::PredicateMismatch.into())
}

/// The don't-know alternatives at this state: every binding for the
/// variable of the first simple pair.
fn simple_choices(set: &WorkingSet) -> Vec<(Var, Term)> {
    let simple: Vec<_> = disagreement_pairs(set)
        .expect("single predicate")
        .into_iter()
        .filter(|d| d.is_simple())
        .collect();
    let Some(first) = simple.first() else {
        return Vec::new();
    };
    let var = first.candidate_bindings()[0].0;
    let mut out: Vec<(Var, Term)> = Vec::new();
    for d in &simple {
        for (v, t) in d.candidate_bindings() {
            if v == var && !out.iter().any(|(_, s)| *s == t) {
                out.push((v, t));
            }
        }
    }
    out
}

/// Replace the first remaining disagreement pair by a shared fresh reserved
/// variable until a single atom is left.
fn replace_nonsimple(mut set: WorkingSet, gen: &mut VarGen, stats: &mut PositiveStats) -> WorkingSet {
    let limit = 16 + set.total_size() * set.len() * set.len();
    let mut steps = 0;
    while set.len() != 1 {
        let pairs = disagreement_pairs(&set).expect("single predicate");
        let d = pairs
            .first()
            .expect("distinct atoms of one predicate disagree somewhere");
        set = set.replace_pair(d, Term::Var(gen.reserved()));
        steps += 1;
        stats.replace_steps += 1;
        assert!(steps <= limit, "replacement loop exceeded its bound");
    }
    set
}

/// Step 4: `θ` with `Aθ = B`, then rename the ordinary variables of `Aθ` apart.
fn finish(a: &Atom, set: &WorkingSet, trace: Vec<(Var, Term)>, gen: &mut VarGen) -> Option<PositiveResult> {
    let b = &set.atoms()[0];
    let theta = match_atom(a, b)?;
    let inst = theta.apply(a);
    let gamma: BTreeMap<Var, Var> = inst
        .vars_ordered()
        .into_iter()
        .filter(|v| !v.is_reserved())
        .map(|v| (v, gen.ordinary()))
        .collect();
    let renaming = Substitution::from_pairs(gamma.iter().map(|(k, v)| (*k, Term::Var(*v))));
    let theta = theta.compose(&renaming).restrict(&a.vars());
    Some(PositiveResult { theta, trace })
}

/// `σ` (restricted to `Var(A)`) is linear and `Aσ` unifies with every `H⁺` atom.
pub fn in_positive_linear(sigma: &Substitution, a: &Atom, hpos: &[Atom]) -> bool {
    let sigma = sigma.restrict(&a.vars());
    sigma.is_linear() && unifies_with_all(&sigma.apply(a), hpos)
}

pub(crate) fn unifies_with_all(inst: &Atom, atoms: &[Atom]) -> bool {
    let mut gen = VarGen::above(core::iter::once(inst).chain(atoms));
    let fresh = rename_apart(atoms, Namespace::Ordinary, &mut gen);
    fresh.iter().all(|h| unifiable(inst, h))
}

/// Default horizon for [`check_maximal`]: one more than the deepest `H⁺` atom.
pub fn default_maximal_bound(hpos: &[Atom]) -> usize {
    hpos.iter().map(Atom::depth).max().unwrap_or(0) + 1
}

/// Bounded check of the three maximality conditions over the symbols of the
/// inputs plus the augmentation symbols.
pub fn check_maximal(theta: &Substitution, a: &Atom, hpos: &[Atom], bound: usize) -> bool {
    let inst = theta.apply(a);
    let sig = Signature::of_atoms(core::iter::once(a).chain(hpos).chain(core::iter::once(&inst)))
        .augmented(&[a.predicate().name()]);
    check_maximal_with(theta, a, hpos, bound, &sig)
}

/// [`check_maximal`] over an explicit signature.
///
/// Condition 1 tries each ordinary variable of `Aθ` with every term that
/// keeps the instance within `bound`. For linear inputs this is exhaustive:
/// unifying two linear, variable-disjoint atoms splits into independent
/// positions, so terms one level deeper than the matching `H⁺` subterm
/// decide it. Condition 2 only needs depth-1 terms, since cutting a binding
/// down to its root symbol keeps it unifiable.
pub fn check_maximal_with(
    theta: &Substitution,
    a: &Atom,
    hpos: &[Atom],
    bound: usize,
    sig: &Signature,
) -> bool {
    if !in_positive_linear(theta, a, hpos) {
        return false;
    }
    let inst = theta.apply(a);
    let linear = a.is_linear() && hpos.iter().all(Atom::is_linear);
    let mut gen = VarGen::above(core::iter::once(a).chain(hpos).chain(core::iter::once(&inst)));
    let vars = inst.vars_ordered();
    let horizon = |v: Var| -> usize {
        if v.is_reserved() {
            return 1;
        }
        let room = bound.saturating_sub(deepest_occurrence(&inst, v)).max(1);
        if !linear {
            return room;
        }
        let at = occurrences(&inst, v).into_iter().next().expect("variable of the instance");
        let below = hpos.iter().map(|h| depth_below(h, &at)).max().unwrap_or(0);
        room.min(below + 1)
    };
    let deepest = vars.iter().map(|v| horizon(*v)).max().unwrap_or(0);
    let candidates = sig.linear_terms(deepest, &mut gen);
    let extend = |v: Var, t: &Term| theta.compose(&Substitution::singleton(v, t.clone()));

    for v in vars {
        let limit = horizon(v);
        for t in candidates.iter().filter(|t| t.depth() <= limit) {
            let still = in_positive_linear(&extend(v, t), a, hpos);
            if v.is_reserved() && still {
                return false; // condition 2
            }
            if !v.is_reserved() && !still {
                return false; // condition 1
            }
        }
    }

    // Condition 3: every symbol placed by θ is forced.
    for (x, t) in theta.iter() {
        for p in non_variable_positions(t) {
            let here = t.subterm_at(&p).expect("position from traversal");
            let root = here.functor().expect("non-variable");
            for g in sig.symbols() {
                if g == root {
                    continue;
                }
                let args = (0..g.arity()).map(|_| Term::Var(gen.ordinary())).collect();
                let mutated = t.replace_at(&p, Term::app(g.clone(), args)).expect("valid position");
                let mut changed = theta.clone();
                changed.insert(x, mutated);
                if in_positive_linear(&changed, a, hpos) {
                    return false;
                }
            }
        }
    }
    true
}

/// Depth of the subterm of `h` at `at`, or 0 when a variable sits on the path.
fn depth_below(h: &Atom, at: &Position) -> usize {
    h.subterm_at(at).map_or(0, Term::depth)
}

fn non_variable_positions(t: &Term) -> Vec<Position> {
    let mut out = Vec::new();
    fn walk(t: &Term, at: Position, out: &mut Vec<Position>) {
        if let Term::App(_, args) = t {
            for (i, a) in args.iter().enumerate() {
                walk(a, at.child(i + 1), out);
            }
            out.push(at);
        }
    }
    walk(t, Position::root(), &mut out);
    out
}
