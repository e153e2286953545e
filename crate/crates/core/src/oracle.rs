//! Brute-force reference solver.
//!
//! Every variable of `A` receives a whole term from a precomputed list
//! (a fresh variable, or a symbol-rooted term with fresh leaves), then the
//! fresh variables are partitioned to cover non-linear instances. The space
//! is explored by increasing maximum binding depth, one variant class of
//! `Aθ` at a time. Shares nothing with the positive-unification solvers
//! apart from the term and substitution primitives.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::enumerate::deepest_occurrence;
use crate::error::Result;
use crate::positive::unifies_with_all;
use crate::selective::{check_solution, Algorithm, Outcome, Problem, Solution, SolveStats};
use crate::subst::{subsumes, Substitution};
use crate::terms::{HasVars, Term, Var, VarGen};

/// One more than the deepest atom of the problem.
pub fn default_bound(p: &Problem) -> usize {
    p.default_bound()
}

struct Space<'p> {
    p: &'p Problem,
    vars: Vec<Var>,
    /// Per variable of `A`: `None` for a fresh variable, else a template.
    templates: Vec<Vec<(usize, Option<Term>)>>,
    linear_only: bool,
    prune: bool,
    gen: VarGen,
    tested: usize,
    budget: Option<usize>,
    exhausted: bool,
}

impl<'p> Space<'p> {
    fn new(p: &'p Problem, bound: usize, linear_only: bool, prune: bool) -> Space<'p> {
        let mut gen = p.var_gen();
        let vars = p.atom.vars_ordered();
        let templates = vars
            .iter()
            .map(|x| {
                let room = bound.saturating_sub(deepest_occurrence(&p.atom, *x));
                let ground = prune && p.ground.contains(x);
                let mut list: Vec<(usize, Option<Term>)> = Vec::new();
                if !ground {
                    list.push((0, None));
                }
                for t in p.signature.linear_terms(room, &mut gen) {
                    if !ground || t.is_ground() {
                        list.push((t.depth(), Some(t)));
                    }
                }
                list
            })
            .collect();
        Space {
            p,
            vars,
            templates,
            linear_only,
            prune,
            gen,
            tested: 0,
            budget: None,
            exhausted: false,
        }
    }

    fn dead(&self, theta: &Substitution) -> bool {
        if !self.prune {
            return false;
        }
        let inst = theta.apply(&self.p.atom);
        self.p.neg.iter().any(|h| subsumes(h, &inst)) || !unifies_with_all(&inst, &self.p.pos)
    }

    /// Visit every class of the given layer; stops once `visit` returns `false`.
    fn layer(&mut self, layer: usize, visit: &mut dyn FnMut(&Substitution) -> bool) -> bool {
        self.assign(0, layer, 0, Substitution::new(), Vec::new(), visit)
    }

    fn assign(
        &mut self,
        i: usize,
        layer: usize,
        deepest: usize,
        theta: Substitution,
        fresh: Vec<Var>,
        visit: &mut dyn FnMut(&Substitution) -> bool,
    ) -> bool {
        if self.dead(&theta) {
            return true;
        }
        if i == self.vars.len() {
            if deepest != layer {
                return true;
            }
            return self.partitions(&theta, &fresh, visit);
        }
        let x = self.vars[i];
        for k in 0..self.templates[i].len() {
            let (d, t) = self.templates[i][k].clone();
            if d > layer {
                continue;
            }
            let copy = match t {
                None => Term::Var(self.gen.ordinary()),
                Some(t) => {
                    let map: BTreeMap<Var, Var> = t.vars_ordered().into_iter().map(|v| (v, self.gen.ordinary())).collect();
                    t.rename(&map)
                }
            };
            let mut next_fresh = fresh.clone();
            next_fresh.extend(copy.vars_ordered());
            let mut next = theta.clone();
            next.insert(x, copy);
            if !self.assign(i + 1, layer, deepest.max(d), next, next_fresh, visit) {
                return false;
            }
        }
        true
    }

    /// Alias the fresh variables in every way (restricted growth strings).
    fn partitions(&mut self, theta: &Substitution, fresh: &[Var], visit: &mut dyn FnMut(&Substitution) -> bool) -> bool {
        if self.linear_only {
            return self.emit(theta, visit);
        }
        let mut classes: Vec<usize> = Vec::with_capacity(fresh.len());
        self.grow(theta, fresh, &mut classes, 0, visit)
    }

    fn grow(
        &mut self,
        theta: &Substitution,
        fresh: &[Var],
        classes: &mut Vec<usize>,
        blocks: usize,
        visit: &mut dyn FnMut(&Substitution) -> bool,
    ) -> bool {
        if classes.len() == fresh.len() {
            let mut reps: Vec<Var> = Vec::new();
            let mut alias = Substitution::new();
            for (v, &b) in fresh.iter().zip(classes.iter()) {
                if b == reps.len() {
                    reps.push(*v);
                } else {
                    alias.insert(*v, Term::Var(reps[b]));
                }
            }
            let merged = theta.compose(&alias).restrict(&self.p.atom.vars());
            return self.emit(&merged, visit);
        }
        for b in 0..=blocks {
            classes.push(b);
            let more = if b == blocks { blocks + 1 } else { blocks };
            let go = self.grow(theta, fresh, classes, more, visit);
            classes.pop();
            if !go {
                return false;
            }
        }
        true
    }

    fn emit(&mut self, theta: &Substitution, visit: &mut dyn FnMut(&Substitution) -> bool) -> bool {
        // Template shapes plus a hole partition determine the class of `Aθ`,
        // so no class is emitted twice.
        if self.budget.is_some_and(|b| self.tested >= b) {
            self.exhausted = true;
            return false;
        }
        self.tested += 1;
        visit(theta)
    }
}

/// Every class of `{θ | Dom(θ) ⊆ Var(A), depth(Aθ) ≤ bound}` up to variants
/// of `Aθ`, by increasing maximum binding depth.
pub fn enumerate_theta(p: &Problem, bound: usize) -> Vec<Substitution> {
    let mut space = Space::new(p, bound, false, false);
    let mut out = Vec::new();
    for layer in 0..=bound {
        space.layer(layer, &mut |t| {
            out.push(t.clone());
            true
        });
    }
    out
}

/// Candidates the non-linear oracle checks before giving up; the space of
/// variable-sharing patterns grows faster than exponentially with the bound.
pub const NONLINEAR_BUDGET: usize = 20_000;

struct Searched {
    tested: usize,
    exhausted: bool,
}

fn search(
    p: &Problem,
    bound: usize,
    linear_only: bool,
    budget: Option<usize>,
    mut found: impl FnMut(&Substitution) -> bool,
) -> Result<Searched> {
    p.validate()?;
    let mut space = Space::new(p, bound, linear_only, true);
    space.budget = budget;
    for layer in 0..=bound {
        let go = space.layer(layer, &mut |t| !(check_solution(t, p) && !found(t)));
        if !go {
            break;
        }
    }
    Ok(Searched {
        tested: space.tested,
        exhausted: space.exhausted,
    })
}

/// The budget that applies when none is given: unlimited for linear
/// enumeration, [`NONLINEAR_BUDGET`] otherwise.
pub fn default_budget(linear_only: bool) -> Option<usize> {
    (!linear_only).then_some(NONLINEAR_BUDGET)
}

pub fn naive_solve(p: &Problem, bound: usize, linear_only: bool) -> Result<Outcome> {
    naive_solve_with(p, bound, linear_only, default_budget(linear_only))
}

/// [`naive_solve`] with an explicit candidate budget (`None` is unlimited).
/// A fail after the budget runs out is never conclusive.
pub fn naive_solve_with(p: &Problem, bound: usize, linear_only: bool, budget: Option<usize>) -> Result<Outcome> {
    let mut first = None;
    let run = search(p, bound, linear_only, budget, |t| {
        first = Some(t.clone());
        false
    })?;
    let solution = first.map(|t| Solution::canonical(&t, p, Algorithm::Oracle, None));
    let exhausted = solution.is_none() && run.exhausted;
    Ok(Outcome {
        conclusive: solution.is_none() && !exhausted && p.fail_is_conclusive(bound),
        solution,
        algorithm: Algorithm::Oracle,
        bound,
        budget_exhausted: exhausted,
        stats: SolveStats {
            candidates_tested: run.tested,
            branches: 0,
        },
    })
}

pub fn solve_all(p: &Problem, bound: usize, linear_only: bool) -> Result<Vec<Solution>> {
    solve_all_with(p, bound, linear_only, default_budget(linear_only))
}

pub fn solve_all_with(p: &Problem, bound: usize, linear_only: bool, budget: Option<usize>) -> Result<Vec<Solution>> {
    let mut out = Vec::new();
    search(p, bound, linear_only, budget, |t| {
        out.push(Solution::canonical(t, p, Algorithm::Oracle, None));
        true
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::Signature;
    use crate::terms::build::*;
    use crate::terms::{canonical, Atom, Functor, Namespace};
    use alloc::collections::BTreeSet;
    use alloc::vec;

    fn var(id: u32) -> Var {
        Var::new(id, Namespace::Ordinary)
    }

    fn single(sig: Signature) -> Problem {
        Problem::new(atom("p", vec![v(0)]), vec![atom("p", vec![v(1)])], vec![], BTreeSet::new())
            .unwrap()
            .with_signature(sig)
    }

    #[test]
    fn class_counts() {
        let a = single(Signature::new([Functor::new("a", 0)]));
        assert_eq!(enumerate_theta(&a, 1).len(), 2);
        assert_eq!(enumerate_theta(&a, 0).len(), 1);
        let af = single(Signature::new([Functor::new("a", 0), Functor::new("f", 1)]));
        assert_eq!(enumerate_theta(&af, 1).len(), 3);
    }

    #[test]
    fn classes_are_distinct_and_bounded() {
        let p = Problem::new(
            atom("p", vec![v(0), v(1)]),
            vec![atom("p", vec![v(2), v(3)])],
            vec![],
            BTreeSet::new(),
        )
        .unwrap()
        .with_signature(Signature::new([Functor::new("a", 0), Functor::new("g", 2)]));
        let all = enumerate_theta(&p, 2);
        let keys: BTreeSet<Atom> = all.iter().map(|t| canonical(&t.apply(&p.atom))).collect();
        assert_eq!(keys.len(), all.len());
        assert!(all.iter().all(|t| t.apply(&p.atom).depth() <= 2));
        assert!(all.iter().all(|t| t.domain().iter().all(|x| p.atom.vars().contains(x))));
    }

    #[test]
    fn ground_successor_examples() {
        let p = Problem::new(
            atom("p", vec![v(0)]),
            vec![atom("p", vec![f("s", vec![c("a")])]), atom("p", vec![f("s", vec![v(1)])])],
            vec![atom("p", vec![f("f", vec![v(2)])])],
            [var(0)].into_iter().collect(),
        )
        .unwrap();
        let out = naive_solve(&p, 2, false).unwrap();
        assert_eq!(out.solution.unwrap().sigma, Substitution::singleton(var(0), f("s", vec![c("a")])));

        let q = Problem::new(
            atom("p", vec![v(0)]),
            vec![atom("p", vec![f("s", vec![c("a")])])],
            vec![atom("p", vec![f("s", vec![v(1)])]), atom("p", vec![f("f", vec![v(2)])])],
            [var(0)].into_iter().collect(),
        )
        .unwrap();
        assert!(naive_solve(&q, 3, false).unwrap().is_fail());
    }

    #[test]
    fn bounds() {
        let flat = Problem::new(atom("p", vec![v(0)]), vec![atom("p", vec![c("a")])], vec![], BTreeSet::new()).unwrap();
        assert_eq!(default_bound(&flat), 2);
        let vars = Problem::new(atom("p", vec![v(0)]), vec![atom("p", vec![v(1)])], vec![], BTreeSet::new()).unwrap();
        assert_eq!(default_bound(&vars), 1);
    }
}
