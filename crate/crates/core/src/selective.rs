//! Selective unification: the generate-and-test solvers built on positive
//! unification and the fair substitution stream.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::iter::Peekable;

use crate::enumerate::{EnumeratorConfig, EtaCandidate, EtaStream, Prune};
use crate::error::{Precondition, Result};
use crate::positive::{check_disjoint_unifiable, su_plus, su_plus_lin, unifies_with_all, PositiveResult};
use crate::show::VarNames;
use crate::signature::Signature;
use crate::subst::{subsumes, Substitution};
use crate::terms::{canonical, Atom, HasVars, Namespace, Term, Var, VarGen};

/// A selective unification problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub atom: Atom,
    pub pos: Vec<Atom>,
    pub neg: Vec<Atom>,
    /// Variables of `atom` that every solution must ground.
    pub ground: BTreeSet<Var>,
    /// Alphabet for enumeration; must contain every symbol of the atoms.
    pub signature: Signature,
    /// Display names for the problem's variables.
    pub names: VarNames,
}

impl Problem {
    /// Build and validate a problem over the default signature: the symbols
    /// of the atoms plus one fresh constant and one fresh unary symbol.
    pub fn new(atom: Atom, pos: Vec<Atom>, neg: Vec<Atom>, ground: BTreeSet<Var>) -> Result<Problem> {
        let signature = Signature::of_atoms(core::iter::once(&atom).chain(&pos).chain(&neg))
            .augmented(&[atom.predicate().name()]);
        let p = Problem {
            atom,
            pos,
            neg,
            ground,
            signature,
            names: VarNames::new(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_signature(mut self, signature: Signature) -> Problem {
        self.signature = signature;
        self
    }

    pub fn with_names(mut self, names: VarNames) -> Problem {
        self.names = names;
        self
    }

    /// Ground variables occur in the atom; all atoms share the predicate,
    /// are pairwise variable disjoint and unify with the selected atom.
    pub fn validate(&self) -> Result<()> {
        let a_vars = self.atom.vars();
        if !self.ground.iter().all(|g| a_vars.contains(g)) {
            return Err(Precondition::GroundNotInAtom.into());
        }
        let others: Vec<Atom> = self.pos.iter().chain(&self.neg).cloned().collect();
        check_disjoint_unifiable(&self.atom, &others)
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        core::iter::once(&self.atom).chain(&self.pos).chain(&self.neg)
    }

    /// The selected atom and every positive atom are linear.
    pub fn is_linear(&self) -> bool {
        self.atom.is_linear() && self.pos.iter().all(|h| h.is_linear())
    }

    /// Maximum atom depth over all atoms of the problem.
    pub fn max_atom_depth(&self) -> usize {
        self.atoms().map(Atom::depth).max().unwrap_or(0)
    }

    /// One more than the deepest atom.
    pub fn default_bound(&self) -> usize {
        self.max_atom_depth() + 1
    }

    /// A variable source above every variable of the problem.
    pub fn var_gen(&self) -> VarGen {
        VarGen::above(self.atoms())
    }

    /// A failure at `bound` proves that no linear solution exists.
    pub fn fail_is_conclusive(&self, bound: usize) -> bool {
        self.is_linear() && bound >= self.default_bound() && self.signature.is_augmented()
    }
}

/// `Aσ` unifies with every positive atom and with no negative atom, and
/// `σ` grounds every variable of `G`. Input atoms are renamed apart first.
pub fn check_solution(sigma: &Substitution, p: &Problem) -> bool {
    let sigma = sigma.restrict(&p.atom.vars());
    if !p.ground.iter().all(|g| sigma.apply_var(*g).is_ground()) {
        return false;
    }
    let inst = sigma.apply(&p.atom);
    unifies_with_all(&inst, &p.pos) && p.neg.iter().all(|h| !unifies_with_all(&inst, core::slice::from_ref(h)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    Su,
    SuStar,
    SuLin,
    Oracle,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Su, Algorithm::SuStar, Algorithm::SuLin, Algorithm::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Su => "su",
            Algorithm::SuStar => "su-star",
            Algorithm::SuLin => "su-lin",
            Algorithm::Oracle => "oracle",
        }
    }

    pub fn from_name(name: &str) -> Option<Algorithm> {
        Algorithm::ALL.into_iter().find(|a| a.name() == name)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A solution, canonically renamed: every variable of `A` is bound and the
/// variables of `Aσ` are fresh, numbered by first occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub sigma: Substitution,
    pub algorithm: Algorithm,
    pub theta_branch: Option<PositiveResult>,
    /// Names `_0`, `_1`, … for the fresh variables of `sigma`.
    pub names: VarNames,
}

impl Solution {
    pub(crate) fn canonical(raw: &Substitution, p: &Problem, algorithm: Algorithm, theta_branch: Option<PositiveResult>) -> Solution {
        let raw = raw.restrict(&p.atom.vars());
        let inst = raw.apply(&p.atom);
        let mut gen = VarGen::above(p.atoms().chain(core::iter::once(&inst)));
        let mut names = VarNames::new();
        let renaming: Substitution = Substitution::from_pairs(inst.vars_ordered().into_iter().enumerate().map(|(k, v)| {
            let fresh = gen.fresh(Namespace::Ordinary);
            names.insert(fresh, format!("_{}", k));
            (v, Term::Var(fresh))
        }));
        let mut sigma = Substitution::new();
        for x in p.atom.vars_ordered() {
            sigma.insert(x, renaming.apply(&raw.apply_var(x)));
        }
        Solution {
            sigma,
            algorithm,
            theta_branch,
            names,
        }
    }

    pub fn instance(&self, p: &Problem) -> Atom {
        self.sigma.apply(&p.atom)
    }

    /// Problem names together with the solution's fresh names.
    pub fn all_names(&self, p: &Problem) -> VarNames {
        let mut names = p.names.clone();
        names.extend(&self.names);
        names
    }
}

/// Options shared by the solvers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveConfig {
    /// Horizon on the depth of `Aσ`; defaults to [`Problem::default_bound`].
    pub max_depth: Option<usize>,
    /// Only linear substitutions are enumerated.
    pub linear_only: bool,
    /// Oracle candidate cap; `None` uses [`crate::oracle::default_budget`].
    pub budget: Option<usize>,
}

impl SolveConfig {
    pub fn bound(&self, p: &Problem) -> usize {
        self.max_depth.unwrap_or_else(|| p.default_bound())
    }

    pub fn oracle_budget(&self) -> Option<usize> {
        self.budget.or_else(|| crate::oracle::default_budget(self.linear_only))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Candidate substitutions checked against the problem.
    pub candidates_tested: usize,
    /// Positive-unification branches (θ) that were enumerated.
    pub branches: usize,
}

/// Result of one solver run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub solution: Option<Solution>,
    pub algorithm: Algorithm,
    pub bound: usize,
    /// Only meaningful on failure: no linear solution exists at all.
    pub conclusive: bool,
    /// The oracle stopped at its candidate budget before finishing.
    pub budget_exhausted: bool,
    pub stats: SolveStats,
}

impl Outcome {
    pub fn is_fail(&self) -> bool {
        self.solution.is_none()
    }
}

/// The fair stream over `vars` for instances of `base`, without pruning.
pub fn fair_eta_stream<'a>(
    base: &Atom,
    vars: Vec<Var>,
    ground: &BTreeSet<Var>,
    cfg: EnumeratorConfig,
    p: &Problem,
) -> EtaStream<'a> {
    let gen = VarGen::above(p.atoms().chain(core::iter::once(base)));
    EtaStream::new(base, vars, ground, &p.signature, cfg, gen)
}

struct Branch<'a> {
    theta: PositiveResult,
    stream: Peekable<EtaStream<'a>>,
}

fn branches<'a>(p: &'a Problem, algorithm: Algorithm, cfg: &SolveConfig, bound: usize) -> Result<Vec<Branch<'a>>> {
    p.validate()?;
    let mut gen = p.var_gen();
    let thetas = match algorithm {
        Algorithm::SuLin => alloc::vec![su_plus_lin(&p.atom, &p.pos, &mut gen)?],
        _ => su_plus(&p.atom, &p.pos, &mut gen)?,
    };
    let star = algorithm == Algorithm::SuStar;
    let ecfg = EnumeratorConfig {
        max_depth: bound,
        allow_reserved: star,
        linear_only: cfg.linear_only || algorithm == Algorithm::SuLin,
        priority_non_reserved: star,
    };
    let mut out = Vec::new();
    for theta in thetas {
        let base = theta.instance(&p.atom);
        let vars: Vec<Var> = base.vars_ordered().into_iter().filter(|v| star || !v.is_reserved()).collect();
        let mut ground = BTreeSet::new();
        for g in &p.ground {
            theta.theta.apply_var(*g).each_var(&mut |v| {
                ground.insert(v);
            });
        }
        if !ground.iter().all(|g| vars.contains(g)) {
            // A reserved variable would have to be ground.
            continue;
        }
        // `gen` is already above the problem and every θ.
        let bgen = gen.clone();
        let prune: Prune<'a> = Box::new(move |inst: &Atom| {
            p.neg.iter().any(|h| subsumes(h, inst)) || (star && !unifies_with_all(inst, &p.pos))
        });
        let stream = EtaStream::new(&base, vars, &ground, &p.signature, ecfg, bgen).with_prune(prune);
        out.push(Branch {
            theta,
            stream: stream.peekable(),
        });
    }
    Ok(out)
}

fn accepts(algorithm: Algorithm, sigma: &Substitution, p: &Problem) -> bool {
    match algorithm {
        // The positive atoms are taken care of by θ.
        Algorithm::Su | Algorithm::SuLin => {
            let inst = sigma.apply(&p.atom);
            p.ground.iter().all(|g| sigma.apply_var(*g).is_ground())
                && p.neg.iter().all(|h| !unifies_with_all(&inst, core::slice::from_ref(h)))
        }
        _ => check_solution(sigma, p),
    }
}

/// Round-robin over the branches, one depth layer per turn. Calls `found`
/// on every accepted candidate until it returns `false`.
fn dovetail(
    p: &Problem,
    algorithm: Algorithm,
    cfg: &SolveConfig,
    mut found: impl FnMut(Solution) -> bool,
) -> Result<(SolveStats, usize)> {
    let bound = cfg.bound(p);
    let mut bs = branches(p, algorithm, cfg, bound)?;
    let mut stats = SolveStats {
        candidates_tested: 0,
        branches: bs.len(),
    };
    for layer in 0..=bound {
        for b in bs.iter_mut() {
            while let Some(EtaCandidate { layer: l, .. }) = b.stream.peek() {
                if *l != layer {
                    break;
                }
                let c = b.stream.next().expect("peeked");
                stats.candidates_tested += 1;
                let sigma = b.theta.theta.compose(&c.eta).restrict(&p.atom.vars());
                if accepts(algorithm, &sigma, p)
                    && !found(Solution::canonical(&sigma, p, algorithm, Some(b.theta.clone())))
                {
                    return Ok((stats, bound));
                }
            }
        }
    }
    Ok((stats, bound))
}

fn first(p: &Problem, algorithm: Algorithm, cfg: &SolveConfig) -> Result<Outcome> {
    let mut solution = None;
    let (stats, bound) = dovetail(p, algorithm, cfg, |s| {
        solution = Some(s);
        false
    })?;
    let conclusive = solution.is_none() && p.fail_is_conclusive(bound);
    Ok(Outcome {
        solution,
        algorithm,
        bound,
        budget_exhausted: false,
        conclusive,
        stats,
    })
}

/// Positive unification, then a fair search for `η` over the ordinary
/// variables of `Aθ`, across every `θ`.
pub fn su(p: &Problem, cfg: &SolveConfig) -> Result<Outcome> {
    first(p, Algorithm::Su, cfg)
}

/// As [`su`], but `η` may also bind reserved variables (after every
/// candidate of the same depth that leaves them alone).
pub fn su_star(p: &Problem, cfg: &SolveConfig) -> Result<Outcome> {
    first(p, Algorithm::SuStar, cfg)
}

/// The maximal positive solution followed by linear `η` only. Needs linear
/// `A` and `H⁺`.
pub fn su_lin(p: &Problem, cfg: &SolveConfig) -> Result<Outcome> {
    first(p, Algorithm::SuLin, cfg)
}

pub fn solve(p: &Problem, algorithm: Algorithm, cfg: &SolveConfig) -> Result<Outcome> {
    match algorithm {
        Algorithm::Oracle => crate::oracle::naive_solve_with(p, cfg.bound(p), cfg.linear_only, cfg.oracle_budget()),
        _ => first(p, algorithm, cfg),
    }
}

/// Every solution within the bound, one per variant class of `Aσ`.
pub fn solve_all(p: &Problem, algorithm: Algorithm, cfg: &SolveConfig) -> Result<Vec<Solution>> {
    if algorithm == Algorithm::Oracle {
        return crate::oracle::solve_all_with(p, cfg.bound(p), cfg.linear_only, cfg.oracle_budget());
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    dovetail(p, algorithm, cfg, |s| {
        if seen.insert(canonical(&s.instance(p))) {
            out.push(s);
        }
        true
    })?;
    Ok(out)
}
