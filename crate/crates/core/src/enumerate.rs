//! Fair enumeration of instantiating substitutions.
//!
//! Candidates are produced layer by layer: layer `d` holds the substitutions
//! whose deepest binding has depth exactly `d`. Inside a layer the search
//! refines one variable occurrence ("hole") at a time, left to right,
//! either closing it as a variable or giving it a root symbol. Closed
//! variables either start a new class or join an earlier one (the latter
//! only for non-linear enumeration), so every variant class of the induced
//! instance is produced exactly once.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::signature::Signature;
use crate::subst::{Apply, Substitution};
use crate::terms::{Atom, Position, Term, Var, VarGen};

/// Knobs for [`EtaStream`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumeratorConfig {
    /// Horizon on the depth of the induced instance.
    pub max_depth: usize,
    /// Reserved variables may be bound.
    pub allow_reserved: bool,
    /// Only linear substitutions.
    pub linear_only: bool,
    /// Inside each layer, emit everything that leaves reserved variables
    /// alone before anything that binds one.
    pub priority_non_reserved: bool,
}

impl EnumeratorConfig {
    pub fn new(max_depth: usize) -> Self {
        EnumeratorConfig {
            max_depth,
            allow_reserved: false,
            linear_only: false,
            priority_non_reserved: false,
        }
    }
}

/// One emitted substitution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaCandidate {
    pub eta: Substitution,
    pub layer: usize,
    pub binds_reserved: bool,
}

/// Returns `true` when no refinement of the given partial instance can be
/// accepted. Every completion of a partial instance is an instance of it.
pub type Prune<'a> = Box<dyn Fn(&Atom) -> bool + 'a>;

#[derive(Debug, Clone)]
struct Hole {
    var: Var,
    root: usize,
    /// Depth inside the root's binding.
    level: usize,
    /// Function symbols above the hole in the instance (deepest occurrence).
    at: usize,
}

#[derive(Debug, Clone)]
struct State {
    inst: Atom,
    bindings: Vec<Term>,
    open: Vec<Hole>,
    classes: Vec<Var>,
    max_level: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pass {
    All,
    KeepReserved,
    BindReserved,
}

/// Lazily enumerates substitutions over `vars` for instances of `base`.
pub struct EtaStream<'a> {
    base: Atom,
    vars: Vec<Var>,
    ground: Vec<bool>,
    sig: Signature,
    cfg: EnumeratorConfig,
    gen: VarGen,
    prune: Option<Prune<'a>>,
    layer: usize,
    pass: Pass,
    stack: Vec<State>,
    started: bool,
    emitted: usize,
    expanded: usize,
}

impl<'a> EtaStream<'a> {
    /// `ground` lists the variables of `vars` whose binding must be ground.
    /// `gen` must be above every variable of `base` and of any atom the
    /// candidates will be tested against.
    pub fn new(
        base: &Atom,
        vars: Vec<Var>,
        ground: &BTreeSet<Var>,
        sig: &Signature,
        cfg: EnumeratorConfig,
        gen: VarGen,
    ) -> Self {
        let ground = vars.iter().map(|v| ground.contains(v)).collect();
        let pass = if cfg.allow_reserved && cfg.priority_non_reserved {
            Pass::KeepReserved
        } else {
            Pass::All
        };
        EtaStream {
            base: base.clone(),
            vars,
            ground,
            sig: sig.clone(),
            cfg,
            gen,
            prune: None,
            layer: 0,
            pass,
            stack: Vec::new(),
            started: false,
            emitted: 0,
            expanded: 0,
        }
    }

    pub fn with_prune(mut self, prune: Prune<'a>) -> Self {
        self.prune = Some(prune);
        self
    }

    /// Layer of the next candidate to be searched.
    pub fn current_layer(&self) -> usize {
        self.layer
    }

    pub fn emitted(&self) -> usize {
        self.emitted
    }

    /// Search nodes visited so far.
    pub fn expanded(&self) -> usize {
        self.expanded
    }

    fn last_layer(&self) -> usize {
        self.cfg.max_depth
    }

    fn root_state(&mut self) -> State {
        let mut open = Vec::new();
        for (i, v) in self.vars.iter().enumerate().rev() {
            open.push(Hole {
                var: *v,
                root: i,
                level: 0,
                at: deepest_occurrence(&self.base, *v),
            });
        }
        State {
            inst: self.base.clone(),
            bindings: self.vars.iter().map(|v| Term::Var(*v)).collect(),
            open,
            classes: Vec::new(),
            max_level: 0,
        }
    }

    /// Move to the next pass or layer; `false` once everything is exhausted.
    fn advance(&mut self) -> bool {
        if !self.started {
            self.started = true;
        } else {
            match self.pass {
                Pass::KeepReserved => self.pass = Pass::BindReserved,
                Pass::BindReserved => {
                    self.pass = Pass::KeepReserved;
                    self.layer += 1;
                }
                Pass::All => self.layer += 1,
            }
        }
        if self.layer > self.last_layer() {
            return false;
        }
        let root = self.root_state();
        self.stack.push(root);
        true
    }

    fn leaf(&self, st: &State) -> Option<EtaCandidate> {
        if st.max_level != self.layer {
            return None;
        }
        let mut eta = Substitution::new();
        for (i, b) in st.bindings.iter().enumerate() {
            let v = self.vars[i];
            // A lone fresh class variable is a renaming: leave `v` unbound.
            if let Term::Var(c) = b {
                let shared = st
                    .bindings
                    .iter()
                    .enumerate()
                    .any(|(j, t)| j != i && t.occurs(*c));
                if !shared {
                    continue;
                }
            }
            eta.insert(v, b.clone());
        }
        let binds_reserved = eta.iter().any(|(v, _)| v.is_reserved());
        match self.pass {
            Pass::KeepReserved if binds_reserved => None,
            Pass::BindReserved if !binds_reserved => None,
            _ => Some(EtaCandidate {
                eta,
                layer: self.layer,
                binds_reserved,
            }),
        }
    }

    fn expand(&mut self, mut st: State) {
        let hole = st.open.pop().expect("non-leaf state");
        let root_var = self.vars[hole.root];
        let must_ground = self.ground[hole.root];
        let keep_reserved_root =
            self.pass == Pass::KeepReserved && root_var.is_reserved() && hole.level == 0;
        let mut children: Vec<State> = Vec::new();

        if !must_ground {
            // Close as a new class.
            let c = self.gen.ordinary();
            let mut s = st.clone();
            close(&mut s, &hole, c);
            s.classes.push(c);
            children.push(s);
            if !self.cfg.linear_only && !keep_reserved_root {
                for &c in &st.classes {
                    let mut s = st.clone();
                    close(&mut s, &hole, c);
                    children.push(s);
                }
            }
        }

        let symbol_ok = !keep_reserved_root
            && hole.level < self.layer
            && hole.at < self.cfg.max_depth;
        if symbol_ok {
            for f in self.sig.symbols().to_vec() {
                let args: Vec<Term> = (0..f.arity()).map(|_| Term::Var(self.gen.ordinary())).collect();
                let t = Term::app(f, args.clone());
                let mut s = st.clone();
                refine(&mut s, &hole, t);
                s.max_level = s.max_level.max(hole.level + 1);
                for a in args.iter().rev() {
                    s.open.push(Hole {
                        var: a.as_var().expect("fresh argument"),
                        root: hole.root,
                        level: hole.level + 1,
                        at: hole.at + 1,
                    });
                }
                children.push(s);
            }
        }
        st.open.clear();
        self.stack.extend(children.into_iter().rev());
    }
}

fn close(s: &mut State, hole: &Hole, c: Var) {
    refine(s, hole, Term::Var(c));
}

fn refine(s: &mut State, hole: &Hole, t: Term) {
    let single = Substitution::singleton(hole.var, t);
    s.inst = s.inst.apply(&single);
    s.bindings[hole.root] = s.bindings[hole.root].apply(&single);
}

pub(crate) fn deepest_occurrence(atom: &Atom, v: Var) -> usize {
    fn walk(t: &Term, v: Var, at: usize, best: &mut Option<usize>) {
        match t {
            Term::Var(w) if *w == v => *best = Some(best.map_or(at, |b| b.max(at))),
            Term::Var(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| walk(a, v, at + 1, best)),
        }
    }
    let mut best = None;
    for a in atom.args() {
        walk(a, v, 0, &mut best);
    }
    best.unwrap_or(0)
}

impl Iterator for EtaStream<'_> {
    type Item = EtaCandidate;

    fn next(&mut self) -> Option<EtaCandidate> {
        loop {
            let Some(st) = self.stack.pop() else {
                if !self.advance() {
                    return None;
                }
                continue;
            };
            self.expanded += 1;
            if let Some(prune) = &self.prune {
                if prune(&st.inst) {
                    continue;
                }
            }
            if st.open.is_empty() {
                if let Some(c) = self.leaf(&st) {
                    self.emitted += 1;
                    return Some(c);
                }
                continue;
            }
            self.expand(st);
        }
    }
}

/// Positions of `v` in `atom` (used by tests and diagnostics).
pub fn occurrences(atom: &Atom, v: Var) -> Vec<Position> {
    let mut out = Vec::new();
    fn walk(t: &Term, v: Var, at: Position, out: &mut Vec<Position>) {
        match t {
            Term::Var(w) if *w == v => out.push(at),
            Term::Var(_) => {}
            Term::App(_, args) => {
                for (i, a) in args.iter().enumerate() {
                    walk(a, v, at.child(i + 1), out);
                }
            }
        }
    }
    for (i, a) in atom.args().iter().enumerate() {
        walk(a, v, Position::new(alloc::vec![i + 1]), &mut out);
    }
    out
}
