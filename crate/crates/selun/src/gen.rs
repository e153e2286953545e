//! Seeded random problems.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use selun_core::selective::Problem;
use selun_core::{unifiable, Atom, Functor, HasVars, Namespace, Signature, Term, Var, VarNames};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenConfig {
    /// Symbols in the base signature (at least one constant is included).
    pub max_symbols: usize,
    pub max_arity: usize,
    /// Maximum depth of each argument term.
    pub max_term_depth: usize,
    pub max_pred_arity: usize,
    pub max_pos: usize,
    pub max_neg: usize,
    /// No repeated variables in the selected atom or the positive atoms.
    pub linear: bool,
    /// Probability that a variable of the selected atom must be ground.
    pub ground_prob: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_symbols: 3,
            max_arity: 2,
            max_term_depth: 2,
            max_pred_arity: 2,
            max_pos: 3,
            max_neg: 2,
            linear: false,
            ground_prob: 0.25,
        }
    }
}

impl GenConfig {
    pub fn linear() -> Self {
        GenConfig {
            linear: true,
            ..GenConfig::default()
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

struct Builder<'r, R: Rng> {
    rng: &'r mut R,
    symbols: Vec<Functor>,
    cfg: GenConfig,
    next_var: u32,
    names: VarNames,
}

impl<R: Rng> Builder<'_, R> {
    fn fresh(&mut self, prefix: &str) -> Var {
        let v = Var::new(self.next_var, Namespace::Ordinary);
        self.names.insert(v, format!("{}{}", prefix, self.next_var));
        self.next_var += 1;
        v
    }

    fn term(&mut self, depth: usize, pool: &mut Vec<Var>, linear: bool, prefix: &str) -> Term {
        let choose_var = depth == 0 || self.rng.gen_bool(0.35);
        if choose_var {
            if !linear && !pool.is_empty() && self.rng.gen_bool(0.4) {
                return Term::Var(*pool.choose(self.rng).expect("non-empty"));
            }
            let v = self.fresh(prefix);
            pool.push(v);
            return Term::Var(v);
        }
        let candidates: Vec<Functor> = self.symbols.iter().filter(|f| depth > 1 || f.is_constant()).cloned().collect();
        let f = candidates.choose(self.rng).expect("a constant is always present").clone();
        let args = (0..f.arity()).map(|_| self.term(depth - 1, pool, linear, prefix)).collect();
        Term::app(f, args)
    }

    fn atom(&mut self, arity: usize, linear: bool, prefix: &str) -> Atom {
        let mut pool = Vec::new();
        let args = (0..arity)
            .map(|_| {
                let d = self.rng.gen_range(0..=self.cfg.max_term_depth);
                self.term(d, &mut pool, linear, prefix)
            })
            .collect();
        Atom::new("p", args)
    }
}

fn signature<R: Rng>(rng: &mut R, cfg: &GenConfig) -> Vec<Functor> {
    let n = rng.gen_range(1..=cfg.max_symbols.max(1));
    let constants = ["a", "b", "c"];
    let unary = ["f", "g", "h"];
    let binary = ["k", "m", "n"];
    let mut out = vec![Functor::new("a", 0)];
    while out.len() < n {
        let arity = rng.gen_range(0..=cfg.max_arity);
        let pool: &[&str] = match arity {
            0 => &constants,
            1 => &unary,
            _ => &binary,
        };
        let name = pool[rng.gen_range(0..pool.len())];
        let f = Functor::new(name, arity.min(2));
        if !out.iter().any(|g| g.name() == f.name()) {
            out.push(f);
        }
    }
    out
}

/// A random valid problem; every positive and negative atom unifies with
/// the selected atom. The signature is the symbols used plus augmentation.
pub fn problem<R: Rng>(rng: &mut R, cfg: &GenConfig) -> Problem {
    loop {
        if let Some(p) = attempt(rng, cfg) {
            return p;
        }
    }
}

fn attempt<R: Rng>(rng: &mut R, cfg: &GenConfig) -> Option<Problem> {
    let symbols = signature(rng, cfg);
    let arity = rng.gen_range(1..=cfg.max_pred_arity.max(1));
    let mut b = Builder {
        rng,
        symbols,
        cfg: *cfg,
        next_var: 0,
        names: VarNames::new(),
    };
    let a = b.atom(arity, cfg.linear, "X");
    let mut pos = Vec::new();
    let n_pos = b.rng.gen_range(1..=cfg.max_pos.max(1));
    let mut tries = 0;
    while pos.len() < n_pos && tries < 20 {
        tries += 1;
        let h = b.atom(arity, cfg.linear, "Y");
        if unifiable(&a, &h) {
            pos.push(h);
        }
    }
    if pos.is_empty() {
        return None;
    }
    let mut neg = Vec::new();
    let n_neg = b.rng.gen_range(0..=cfg.max_neg);
    tries = 0;
    while neg.len() < n_neg && tries < 20 {
        tries += 1;
        let h = b.atom(arity, false, "Z");
        if unifiable(&a, &h) {
            neg.push(h);
        }
    }
    let ground: BTreeSet<Var> = a.vars_ordered().into_iter().filter(|_| b.rng.gen_bool(cfg.ground_prob)).collect();
    let names = b.names;
    let sig = Signature::of_atoms(std::iter::once(&a).chain(&pos).chain(&neg)).augmented(&["p"]);
    let p = Problem::new(a, pos, neg, ground).ok()?;
    Some(p.with_signature(sig).with_names(names))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn problems_respect_the_limits() {
        let mut r = rng(7);
        for lin in [false, true] {
            let cfg = GenConfig { linear: lin, ..GenConfig::default() };
            for _ in 0..200 {
                let p = problem(&mut r, &cfg);
                assert!(p.validate().is_ok());
                assert!(p.signature.base().count() <= 3);
                assert!(p.signature.base().all(|f| f.arity() <= 2));
                assert!(p.max_atom_depth() <= 2);
                if lin {
                    assert!(p.is_linear());
                }
            }
        }
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = problem(&mut rng(3), &GenConfig::default());
        let b = problem(&mut rng(3), &GenConfig::default());
        assert_eq!(a, b);
    }
}
