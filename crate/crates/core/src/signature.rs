//! Enumeration alphabets.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::terms::{Atom, Functor, Term, VarGen};

/// An ordered, finite set of function symbols.
///
/// Order matters: enumerators try symbols in this order, so it fixes which
/// solution is found first. The augmentation symbols (one fresh constant and
/// one fresh unary symbol) always come last unless the order is permuted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    symbols: Vec<Functor>,
    augmentation: Vec<Functor>,
}

impl Signature {
    pub fn new(symbols: impl IntoIterator<Item = Functor>) -> Self {
        let mut sig = Signature {
            symbols: Vec::new(),
            augmentation: Vec::new(),
        };
        for s in symbols {
            sig.add(s);
        }
        sig
    }

    /// Function symbols of `atoms` in order of first occurrence.
    pub fn of_atoms<'a>(atoms: impl IntoIterator<Item = &'a Atom>) -> Self {
        let mut found = Vec::new();
        for a in atoms {
            a.for_each_symbol(&mut |f| {
                if !found.contains(f) {
                    found.push(f.clone());
                }
            });
        }
        Signature::new(found)
    }

    pub fn add(&mut self, f: Functor) {
        if !self.symbols.contains(&f) {
            self.symbols.push(f);
        }
    }

    /// Append a fresh constant and a fresh unary symbol whose names clash
    /// with nothing in the signature nor in `avoid`.
    pub fn augmented(mut self, avoid: &[&str]) -> Self {
        if self.is_augmented() {
            return self;
        }
        let mut taken: BTreeSet<String> = self.symbols.iter().map(|f| String::from(f.name())).collect();
        taken.extend(avoid.iter().map(|s| String::from(*s)));
        let constant = Functor::new(&pick_name("c", &taken), 0);
        taken.insert(String::from(constant.name()));
        let unary = Functor::new(&pick_name("f", &taken), 1);
        for f in [constant, unary] {
            self.symbols.push(f.clone());
            self.augmentation.push(f);
        }
        self
    }

    pub fn is_augmented(&self) -> bool {
        !self.augmentation.is_empty()
    }

    pub fn augmentation(&self) -> &[Functor] {
        &self.augmentation
    }

    /// Symbols that were not added by augmentation.
    pub fn base(&self) -> impl Iterator<Item = &Functor> {
        self.symbols
            .iter()
            .filter(move |f| !self.augmentation.contains(f))
    }

    pub fn symbols(&self) -> &[Functor] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn contains(&self, f: &Functor) -> bool {
        self.symbols.contains(f)
    }

    /// Reorder the symbols: position `i` of the result holds `symbols[order[i]]`.
    pub fn permuted(&self, order: &[usize]) -> Signature {
        assert_eq!(order.len(), self.symbols.len());
        Signature {
            symbols: order.iter().map(|&i| self.symbols[i].clone()).collect(),
            augmentation: self.augmentation.clone(),
        }
    }

    /// Every linear non-variable term of depth at most `depth`, leaves drawn
    /// fresh from `gen`, shallow terms first.
    pub fn linear_terms(&self, depth: usize, gen: &mut VarGen) -> Vec<Term> {
        let mut out = Vec::new();
        for d in 1..=depth {
            for f in &self.symbols {
                for args in arg_shapes(self, f.arity(), d - 1, gen) {
                    let t = Term::app(f.clone(), args);
                    if t.depth() == d {
                        out.push(t);
                    }
                }
            }
        }
        out
    }
}

/// All argument vectors of length `n` with each term of depth at most `depth`
/// (variables included).
fn arg_shapes(sig: &Signature, n: usize, depth: usize, gen: &mut VarGen) -> Vec<Vec<Term>> {
    let mut rows: Vec<Vec<Term>> = alloc::vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for row in &rows {
            let mut options = alloc::vec![Term::Var(gen.ordinary())];
            options.extend(sig.linear_terms(depth, gen));
            for t in options {
                let mut r = row.clone();
                r.push(t);
                next.push(r);
            }
        }
        rows = next;
    }
    rows
}

fn pick_name(prefix: &str, taken: &BTreeSet<String>) -> String {
    (0..)
        .map(|i| format!("{}{}", prefix, i))
        .find(|n| !taken.contains(n))
        .expect("unbounded search")
}
