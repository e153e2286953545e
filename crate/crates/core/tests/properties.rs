//! Property tests over random terms, atoms and problems.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use selun_core::disagree::{disagreement_pairs, WorkingSet};
use selun_core::enumerate::{EnumeratorConfig, EtaStream};
use selun_core::oracle::naive_solve;
use selun_core::positive::{check_maximal, default_maximal_bound, su_plus, su_plus_lin, su_plus_with_stats};
use selun_core::selective::{check_solution, solve, Algorithm, Problem, SolveConfig};
use selun_core::subst::{match_term, mgu_terms, parallel_compose};
use selun_core::terms::rename_apart;
use selun_core::{canonical, mgu, Functor, Signature, unifiable, variant_eq, Atom, HasVars, Namespace, Position, Substitution, Term, Var, VarGen};

fn var(id: u32) -> Term {
    Term::Var(Var::new(id, Namespace::Ordinary))
}

/// Terms over `a`, `b`, `f/1`, `g/2` and variables `base..base+pool`.
fn term(base: u32, pool: u32, depth: u32) -> BoxedStrategy<Term> {
    let leaf = prop_oneof![
        (base..base + pool).prop_map(var),
        Just(Term::constant("a")),
        Just(Term::constant("b")),
    ];
    leaf.prop_recursive(depth, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::func("f", vec![t])),
            (inner.clone(), inner).prop_map(|(s, t)| Term::func("g", vec![s, t])),
        ]
    })
    .boxed()
}

fn atom2(base: u32, pool: u32, depth: u32) -> BoxedStrategy<Atom> {
    (term(base, pool, depth), term(base, pool, depth))
        .prop_map(|(s, t)| Atom::new("p", vec![s, t]))
        .boxed()
}

/// A selected atom over ids 0..3 and positives that unify with it: each is
/// an instance of `A` with some subterms generalized to fresh variables.
fn positive_input(linear: bool) -> impl Strategy<Value = (Atom, Vec<Atom>)> {
    positive_input_at(linear, 2)
}

fn positive_input_at(linear: bool, depth: u32) -> impl Strategy<Value = (Atom, Vec<Atom>)> {
    let hpos = prop::collection::vec((subst_with(3, 1), prop::collection::vec(0u8..100, 16)), 1..4);
    (atom2(0, 3, depth), hpos).prop_map(move |(a, hs)| {
        let mut gen = VarGen::above([&a]);
        for v in 0..16 {
            gen.reserve(Var::new(v, Namespace::Ordinary));
        }
        let hs: Vec<Atom> = hs
            .iter()
            .map(|(sigma, coins)| {
                let mut coins = coins.iter().copied().cycle();
                let h = sigma.apply(&a);
                let args = h.args().iter().map(|t| generalize(t, &mut coins, &mut gen)).collect();
                Atom::with_predicate(h.predicate().clone(), args)
            })
            .collect();
        let hs = rename_apart(&hs, Namespace::Ordinary, &mut gen);
        if linear {
            let a = linearize(&a, &mut gen);
            (a, hs.iter().map(|h| linearize(h, &mut gen)).collect())
        } else {
            (a, hs)
        }
    })
}

fn generalize(t: &Term, coins: &mut impl Iterator<Item = u8>, gen: &mut VarGen) -> Term {
    if coins.next().unwrap_or(0) < 25 {
        return Term::Var(gen.ordinary());
    }
    match t {
        Term::Var(_) => t.clone(),
        Term::App(f, args) => Term::app(f.clone(), args.iter().map(|s| generalize(s, coins, gen)).collect()),
    }
}

/// Replace every repeated variable occurrence with a fresh variable.
fn linearize(a: &Atom, gen: &mut VarGen) -> Atom {
    fn go(t: &Term, seen: &mut BTreeSet<Var>, gen: &mut VarGen) -> Term {
        match t {
            Term::Var(v) if !seen.insert(*v) => Term::Var(gen.ordinary()),
            Term::Var(_) => t.clone(),
            Term::App(f, args) => Term::app(f.clone(), args.iter().map(|s| go(s, seen, gen)).collect()),
        }
    }
    let mut seen = BTreeSet::new();
    Atom::with_predicate(a.predicate().clone(), a.args().iter().map(|t| go(t, &mut seen, gen)).collect())
}

fn problem(linear: bool) -> impl Strategy<Value = Option<Problem>> {
    (positive_input_at(linear, 1), prop::collection::vec(atom2(0, 3, 2), 0..3), prop::collection::vec(any::<bool>(), 3)).prop_map(
        |((a, hs), negs, ground_mask)| {
            if !hs.iter().all(|h| unifiable(&a, h)) {
                return None;
            }
            let mut gen = VarGen::above(std::iter::once(&a).chain(&hs));
            let negs: Vec<Atom> = rename_apart(&negs, Namespace::Ordinary, &mut gen)
                .into_iter()
                .filter(|n| unifiable(&a, n))
                .collect();
            let ground: BTreeSet<Var> =
                a.vars_ordered().into_iter().zip(ground_mask).filter(|(_, g)| *g).map(|(v, _)| v).collect();
            Problem::new(a, hs, negs, ground).ok().filter(|p| p.max_atom_depth() <= 2)
        },
    )
}

fn positions(t: &Term) -> Vec<Position> {
    let mut out = vec![Position::root()];
    if let Term::App(_, args) = t {
        for (i, s) in args.iter().enumerate() {
            out.extend(positions(s).into_iter().map(|p| {
                let mut steps = vec![i + 1];
                steps.extend_from_slice(p.steps());
                Position::new(steps)
            }));
        }
    }
    out
}

fn tuple(ts: Vec<Term>) -> Term {
    Term::func("tuple", ts)
}

fn subst(ids: u32) -> impl Strategy<Value = Substitution> {
    subst_with(ids, 2)
}

/// Bindings for ids `0..ids` to terms over variables 10..13.
fn subst_with(ids: u32, depth: u32) -> impl Strategy<Value = Substitution> {
    prop::collection::vec(prop::option::of(term(10, 3, depth)), ids as usize).prop_map(|ts| {
        Substitution::from_pairs(ts.into_iter().enumerate().filter_map(|(i, t)| t.map(|t| (Var::new(i as u32, Namespace::Ordinary), t))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn replace_then_subterm_roundtrips(t in term(0, 3, 3), s in term(0, 3, 2), pick in any::<prop::sample::Index>()) {
        let ps = positions(&t);
        let p = &ps[pick.index(ps.len())];
        let sub = t.subterm_at(p).unwrap().clone();
        prop_assert_eq!(t.replace_at(p, sub).unwrap(), t.clone());
        let r = t.replace_at(p, s.clone()).unwrap();
        prop_assert_eq!(r.subterm_at(p).unwrap(), &s);
        prop_assert!(r.depth() <= t.depth().max(p.len() + s.depth()));
    }

    #[test]
    fn variants_form_an_equivalence(a in atom2(0, 3, 2), shift in 1u32..20) {
        let map: BTreeMap<Var, Var> = a.vars().into_iter().map(|v| (v, Var::new(v.id() + shift, Namespace::Ordinary))).collect();
        let b = a.rename(&map);
        let map2: BTreeMap<Var, Var> = b.vars().into_iter().map(|v| (v, Var::new(v.id() * 2 + 40, Namespace::Ordinary))).collect();
        let c = b.rename(&map2);
        prop_assert!(variant_eq(&a, &a));
        prop_assert!(variant_eq(&a, &b) && variant_eq(&b, &a));
        prop_assert!(variant_eq(&b, &c) && variant_eq(&a, &c));
        prop_assert_eq!(canonical(&a), canonical(&c));
    }

    #[test]
    fn variant_eq_agrees_with_canonical(a in atom2(0, 3, 2), b in atom2(0, 3, 2)) {
        prop_assert_eq!(variant_eq(&a, &b), canonical(&a) == canonical(&b));
    }

    #[test]
    fn rename_apart_is_disjoint(atoms in prop::collection::vec(atom2(0, 3, 2), 1..4)) {
        let mut gen = VarGen::above(&atoms);
        let out = rename_apart(&atoms, Namespace::Ordinary, &mut gen);
        let mut seen = BTreeSet::new();
        for (a, b) in atoms.iter().zip(&out) {
            prop_assert!(variant_eq(a, b));
            for v in b.vars() {
                prop_assert!(seen.insert(v));
                prop_assert!(!atoms.iter().any(|x| x.vars().contains(&v)));
            }
        }
    }

    #[test]
    fn mgu_unifies_is_idempotent_and_most_general(s in term(0, 4, 3), t in term(0, 4, 3), extra in subst(4)) {
        if let Ok(theta) = mgu_terms(&s, &t) {
            prop_assert_eq!(theta.apply(&s), theta.apply(&t));
            prop_assert!(theta.is_idempotent());
            prop_assert_eq!(theta.compose(&theta), theta.clone());
            // Any other unifier factors through the mgu.
            let sigma = theta.compose(&extra);
            prop_assert_eq!(sigma.apply(&s), sigma.apply(&t));
            let vars: Vec<Var> = tuple(vec![s.clone(), t.clone()]).vars_ordered();
            let general = tuple(vars.iter().map(|v| theta.apply_var(*v)).collect());
            let specific = tuple(vars.iter().map(|v| sigma.apply_var(*v)).collect());
            let delta = match_term(&general, &specific);
            prop_assert!(delta.is_some());
            let delta = delta.unwrap();
            for v in &vars {
                prop_assert_eq!(theta.compose(&delta).apply_var(*v), sigma.apply_var(*v));
            }
        } else {
            // No unifier: in particular the pair is not made equal by `extra`.
            prop_assert_ne!(extra.apply(&s), extra.apply(&t));
        }
    }

    #[test]
    fn instances_always_unify(t in term(0, 3, 3), sigma in subst(3)) {
        let mut gen = VarGen::above([&Atom::new("p", vec![t.clone()])]);
        for v in 0..20 { gen.reserve(Var::new(v, Namespace::Ordinary)); }
        let map: BTreeMap<Var, Var> = t.vars().into_iter().map(|v| (v, gen.ordinary())).collect();
        let renamed = t.rename(&map);
        let inst = sigma.apply(&t);
        let theta = mgu_terms(&renamed, &inst);
        prop_assert!(theta.is_ok());
    }

    #[test]
    fn occurs_check_rejects_cycles(t in term(1, 3, 2), wrap in 0usize..3) {
        let x = var(0);
        let mut cyclic = Term::func("f", vec![x.clone()]);
        for _ in 0..wrap {
            cyclic = Term::func("g", vec![t.clone(), cyclic]);
        }
        prop_assert!(mgu_terms(&x, &cyclic).is_err());
        prop_assert!(mgu_terms(&cyclic, &x).is_err());
    }

    #[test]
    fn composition_is_associative(a in subst(3), b in subst(3), c in subst(3), t in term(0, 3, 3)) {
        let shift = |s: &Substitution| Substitution::from_pairs(s.iter().map(|(v, t)| (Var::new(v.id() + 10, Namespace::Ordinary), t.clone())));
        let (b, c) = (shift(&b), shift(&c));
        prop_assert_eq!(a.compose(&b).compose(&c).apply(&t), a.compose(&b.compose(&c)).apply(&t));
        prop_assert_eq!(a.compose(&b).apply(&t), b.apply(&a.apply(&t)));
    }

    #[test]
    fn restriction_agrees_on_the_atom(s in subst(6), a in atom2(0, 3, 2)) {
        prop_assert_eq!(s.restrict(&a.vars()).apply(&a), s.apply(&a));
    }

    #[test]
    fn equations_roundtrip_through_mgu(s in term(0, 4, 3), t in term(0, 4, 3)) {
        if let Ok(theta) = mgu_terms(&s, &t) {
            let back = mgu(&theta.to_equations()).unwrap();
            let dom: Vec<Term> = theta.domain().into_iter().map(Term::Var).collect();
            prop_assert!(variant_eq(&Atom::new("q", back.apply(&dom)), &Atom::new("q", theta.apply(&dom))));
        }
    }

    #[test]
    fn parallel_composition_commutes(s1 in term(0, 4, 2), t1 in term(0, 4, 2), s2 in term(0, 4, 2), t2 in term(0, 4, 2), probe in atom2(0, 4, 2)) {
        if let (Ok(a), Ok(b)) = (mgu_terms(&s1, &t1), mgu_terms(&s2, &t2)) {
            let ab = parallel_compose(&a, &b).unwrap();
            let ba = parallel_compose(&b, &a).unwrap();
            prop_assert_eq!(ab.is_some(), ba.is_some());
            if let (Some(ab), Some(ba)) = (ab, ba) {
                prop_assert!(variant_eq(&ab.apply(&probe), &ba.apply(&probe)));
            }
        }
    }

    #[test]
    fn disagreement_pairs_are_empty_iff_one_atom(atoms in prop::collection::vec(atom2(0, 3, 2), 1..4)) {
        let set = WorkingSet::new(atoms).unwrap();
        let pairs = disagreement_pairs(&set).unwrap();
        prop_assert_eq!(pairs.is_empty(), set.len() == 1);
        for d in &pairs {
            let (l, r) = (&set.atoms()[d.left_atom], &set.atoms()[d.right_atom]);
            prop_assert_eq!(l.subterm_at(&d.position).unwrap(), &d.left);
            prop_assert_eq!(r.subterm_at(&d.position).unwrap(), &d.right);
            prop_assert!(d.left.functor() != d.right.functor() || d.left.is_var() || d.right.is_var());
            prop_assert_ne!(&d.left, &d.right);
            // Every proper prefix carries the same symbol in both atoms.
            let steps = d.position.steps();
            for k in 1..steps.len() {
                let p = Position::new(steps[..k].to_vec());
                let (ls, rs) = (l.subterm_at(&p).unwrap(), r.subterm_at(&p).unwrap());
                prop_assert!(ls.functor().is_some());
                prop_assert_eq!(ls.functor(), rs.functor());
            }
            if d.is_simple() {
                let m = mgu_terms(&d.left, &d.right).unwrap();
                prop_assert_eq!(m, d.determined_binding().unwrap());
            }
        }
    }

    #[test]
    fn positive_unification_is_sound_and_terminates((a, hs) in positive_input(false)) {
        prop_assume!(hs.iter().all(|h| unifiable(&a, h)));
        let (results, stats) = su_plus_with_stats(&a, &hs, &mut VarGen::new()).unwrap();
        let total: usize = std::iter::once(&a).chain(&hs).map(|x| x.to_term().size()).sum();
        prop_assert!(stats.states <= 1 << total.min(20));
        for r in &results {
            let inst = r.instance(&a);
            prop_assert!(r.theta.domain().is_subset(&a.vars()));
            for h in &hs {
                prop_assert!(unifiable(&inst, h));
            }
        }
        // The identity is always an admissible starting point.
        prop_assert!(hs.iter().all(|h| unifiable(&a, h)));
    }

    #[test]
    fn linear_positive_unification_yields_one_maximal_class((a, hs) in positive_input(true)) {
        prop_assume!(hs.iter().all(|h| unifiable(&a, h)));
        let all = su_plus(&a, &hs, &mut VarGen::new()).unwrap();
        let lin = su_plus_lin(&a, &hs, &mut VarGen::new()).unwrap();
        prop_assert_eq!(all.len(), 1);
        prop_assert!(variant_eq(&all[0].instance(&a), &lin.instance(&a)));
        prop_assert!(check_maximal(&lin.theta, &a, &hs, default_maximal_bound(&hs)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solver_outputs_are_sound(p in problem(false)) {
        prop_assume!(p.is_some());
        let p = p.unwrap();
        let cfg = SolveConfig::default();
        let mut su_ok = None;
        for algo in Algorithm::ALL {
            if let Ok(o) = solve(&p, algo, &cfg) {
                if let Some(s) = &o.solution {
                    prop_assert!(check_solution(&s.sigma, &p), "{} unsound", algo);
                    if algo == Algorithm::SuLin {
                        prop_assert!(s.sigma.is_linear());
                    }
                }
                match algo {
                    Algorithm::Su => su_ok = Some(!o.is_fail()),
                    Algorithm::SuStar if su_ok == Some(true) => prop_assert!(!o.is_fail()),
                    _ => {}
                }
            }
        }
    }

    #[test]
    fn su_lin_agrees_with_the_linear_oracle(p in problem(true)) {
        prop_assume!(p.is_some());
        let p = p.unwrap();
        let bound = p.default_bound();
        let lin = solve(&p, Algorithm::SuLin, &SolveConfig::default()).unwrap();
        let oracle = naive_solve(&p, bound, true).unwrap();
        prop_assert_eq!(lin.is_fail(), oracle.is_fail());
    }

    #[test]
    fn oracle_is_monotone_in_the_bound(p in problem(false)) {
        prop_assume!(p.is_some());
        let p = p.unwrap();
        let d = p.max_atom_depth();
        let lower = naive_solve(&p, d, false).unwrap();
        if !lower.is_fail() {
            prop_assert!(!naive_solve(&p, d + 1, false).unwrap().is_fail());
        }
    }

    #[test]
    fn eta_layers_never_go_back(a in atom2(0, 3, 1), linear in any::<bool>(), ground in prop::collection::vec(any::<bool>(), 3)) {
        let sig = Signature::new([Functor::new("a", 0), Functor::new("f", 1), Functor::new("g", 2)]);
        let vars = a.vars_ordered();
        let ground: BTreeSet<Var> = vars.iter().zip(ground).filter(|(_, g)| *g).map(|(v, _)| *v).collect();
        let cfg = EnumeratorConfig { linear_only: linear, ..EnumeratorConfig::new(2) };
        let stream = EtaStream::new(&a, vars.clone(), &ground, &sig, cfg, VarGen::above([&a]));
        let mut last = 0;
        let mut seen = BTreeSet::new();
        for cand in stream.take(3000) {
            prop_assert!(cand.layer >= last);
            last = cand.layer;
            let depth = cand.eta.iter().map(|(_, t)| t.depth()).max().unwrap_or(0);
            prop_assert_eq!(depth, cand.layer);
            prop_assert!(cand.eta.domain().iter().all(|v| vars.contains(v)));
            prop_assert!(ground.iter().all(|g| cand.eta.apply_var(*g).vars().is_empty()));
            let inst = cand.eta.apply(&a);
            if linear {
                prop_assert!(cand.eta.is_linear());
            }
            prop_assert!(seen.insert(canonical(&inst)));
        }
    }
}
