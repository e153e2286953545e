//! Problem files and solution output.
//!
//! ```text
//! % comment
//! atom p(X1,X2).
//! pos p(f(Y),a).
//! pos p(f(g(Z)),b).
//! neg p(f(g(a)),c).
//! ground X1.
//! sig d/0, h/2.     % extra symbols for enumeration
//! sig exact.        % no fresh constant / unary symbol
//! depth 4.          % default horizon override
//! ```
//!
//! Variables start with an uppercase letter or `_` and are scoped to the
//! directive they appear in; a lone `_` is a fresh variable each time.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;
use selun_core::selective::{Outcome, Problem, Solution};
use selun_core::{show, Atom, Functor, HasVars, Namespace, Signature, Term, Var, VarNames};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("ground variable {0} does not occur in the atom")]
    GroundNotInAtom(String),
    #[error("missing `atom` directive")]
    MissingAtom,
    #[error("second `atom` directive")]
    DuplicateAtom,
    #[error("no `pos` directive")]
    MissingPositive,
    #[error("symbol {name} used with arities {first} and {second}")]
    ArityClash { name: String, first: usize, second: usize },
    #[error("{0}")]
    Invalid(String),
}

/// A parsed problem file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Source {
    pub problem: Problem,
    /// From a `depth` directive.
    pub depth: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    Var(String),
    Int(usize),
    LParen,
    RParen,
    Comma,
    Dot,
    Slash,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err(line: usize, col: usize, kind: ErrorKind) -> ParseError {
    ParseError { line, col, kind }
}

fn lex(text: &str) -> Result<(Vec<Token>, (usize, usize)), ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&ch) = chars.peek() {
        let (l, c) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let ch = chars.next().expect("peeked");
            if ch == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            ch
        };
        if ch.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if ch == '%' {
            while chars.peek().is_some_and(|c| *c != '\n') {
                bump(&mut chars);
            }
            continue;
        }
        let single = match ch {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            '/' => Some(Tok::Slash),
            _ => None,
        };
        if let Some(tok) = single {
            bump(&mut chars);
            out.push(Token { tok, line: l, col: c });
            continue;
        }
        if ch.is_ascii_alphanumeric() || ch == '_' {
            let mut word = String::new();
            while chars.peek().is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_') {
                word.push(bump(&mut chars));
            }
            let first = word.chars().next().expect("non-empty");
            let tok = if first.is_ascii_digit() {
                match word.parse() {
                    Ok(n) if word.chars().all(|c| c.is_ascii_digit()) => Tok::Int(n),
                    _ => return Err(err(l, c, ErrorKind::Syntax(format!("bad number `{}`", word)))),
                }
            } else if first.is_ascii_uppercase() || first == '_' {
                Tok::Var(word)
            } else {
                Tok::Name(word)
            };
            out.push(Token { tok, line: l, col: c });
            continue;
        }
        return Err(err(l, c, ErrorKind::Syntax(format!("unexpected character {:?}", ch))));
    }
    Ok((out, (line, col)))
}

/// Variable scope of one directive.
struct Scope<'g> {
    vars: BTreeMap<String, Var>,
    next: &'g mut u32,
    names: &'g mut VarNames,
}

impl Scope<'_> {
    fn var(&mut self, name: &str) -> Var {
        if name == "_" {
            let v = Var::new(*self.next, Namespace::Ordinary);
            *self.next += 1;
            return v;
        }
        if let Some(v) = self.vars.get(name) {
            return *v;
        }
        let v = Var::new(*self.next, Namespace::Ordinary);
        *self.next += 1;
        self.vars.insert(name.to_string(), v);
        self.names.insert(v, name);
        v
    }
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
    end: (usize, usize),
    arities: BTreeMap<String, usize>,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.at)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map_or(self.end, |t| (t.line, t.col))
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (l, c) = self.here();
        Err(err(l, c, ErrorKind::Syntax(msg.into())))
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if t.tok == want => {
                self.at += 1;
                Ok(())
            }
            _ => self.fail(format!("expected {}", what)),
        }
    }

    fn note_arity(&mut self, name: &str, arity: usize, line: usize, col: usize) -> Result<(), ParseError> {
        match self.arities.get(name) {
            Some(&first) if first != arity => Err(err(
                line,
                col,
                ErrorKind::ArityClash {
                    name: name.to_string(),
                    first,
                    second: arity,
                },
            )),
            _ => {
                self.arities.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    fn args(&mut self, scope: &mut Scope) -> Result<Vec<Term>, ParseError> {
        let mut args = Vec::new();
        if self.peek().map(|t| &t.tok) != Some(&Tok::LParen) {
            return Ok(args);
        }
        self.at += 1;
        loop {
            args.push(self.term(scope)?);
            match self.next().map(|t| t.tok) {
                Some(Tok::Comma) => continue,
                Some(Tok::RParen) => break,
                _ => {
                    self.at -= 1;
                    return self.fail("expected `,` or `)`");
                }
            }
        }
        Ok(args)
    }

    fn term(&mut self, scope: &mut Scope) -> Result<Term, ParseError> {
        let Some(t) = self.next() else {
            return self.fail("expected a term");
        };
        match t.tok {
            Tok::Var(name) => Ok(Term::Var(scope.var(&name))),
            Tok::Name(name) => {
                let args = self.args(scope)?;
                self.note_arity(&name, args.len(), t.line, t.col)?;
                Ok(Term::app(Functor::new(&name, args.len()), args))
            }
            _ => {
                self.at -= 1;
                self.fail("expected a term")
            }
        }
    }

    fn atom(&mut self, scope: &mut Scope) -> Result<Atom, ParseError> {
        match self.next() {
            Some(Token { tok: Tok::Name(name), .. }) => {
                let args = self.args(scope)?;
                Ok(Atom::new(&name, args))
            }
            _ => {
                self.at -= 1;
                self.fail("expected an atom")
            }
        }
    }
}

struct Raw {
    atom: Option<(Atom, BTreeMap<String, Var>)>,
    pos: Vec<(Atom, (usize, usize))>,
    neg: Vec<(Atom, (usize, usize))>,
    ground: Vec<(String, (usize, usize))>,
    extra: Vec<Functor>,
    exact: bool,
    depth: Option<usize>,
}

/// Parse a problem file.
pub fn parse_source(text: &str) -> Result<Source, ParseError> {
    let (toks, end) = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end,
        arities: BTreeMap::new(),
    };
    let mut next_var = 0u32;
    let mut names = VarNames::new();
    let mut raw = Raw {
        atom: None,
        pos: Vec::new(),
        neg: Vec::new(),
        ground: Vec::new(),
        extra: Vec::new(),
        exact: false,
        depth: None,
    };
    while let Some(t) = p.next() {
        let at = (t.line, t.col);
        let Tok::Name(directive) = t.tok else {
            p.at -= 1;
            return p.fail("expected a directive");
        };
        let mut scope = Scope {
            vars: BTreeMap::new(),
            next: &mut next_var,
            names: &mut names,
        };
        match directive.as_str() {
            "atom" => {
                let a = p.atom(&mut scope)?;
                if raw.atom.is_some() {
                    return Err(err(at.0, at.1, ErrorKind::DuplicateAtom));
                }
                raw.atom = Some((a, scope.vars));
            }
            "pos" => raw.pos.push((p.atom(&mut scope)?, at)),
            "neg" => raw.neg.push((p.atom(&mut scope)?, at)),
            "ground" => loop {
                match p.next() {
                    Some(Token { tok: Tok::Var(v), line, col }) => raw.ground.push((v, (line, col))),
                    _ => {
                        p.at -= 1;
                        return p.fail("expected a variable");
                    }
                }
                if p.peek().map(|t| &t.tok) != Some(&Tok::Comma) {
                    break;
                }
                p.at += 1;
            },
            "sig" => {
                if let Some(Token { tok: Tok::Name(w), .. }) = p.peek() {
                    if w == "exact" && p.toks.get(p.at + 1).map(|t| &t.tok) == Some(&Tok::Dot) {
                        p.at += 1;
                        raw.exact = true;
                        p.expect(Tok::Dot, "`.`")?;
                        continue;
                    }
                }
                loop {
                    let Some(Token { tok: Tok::Name(name), line, col }) = p.next() else {
                        p.at -= 1;
                        return p.fail("expected a symbol");
                    };
                    p.expect(Tok::Slash, "`/`")?;
                    let Some(Token { tok: Tok::Int(n), .. }) = p.next() else {
                        p.at -= 1;
                        return p.fail("expected an arity");
                    };
                    p.note_arity(&name, n, line, col)?;
                    raw.extra.push(Functor::new(&name, n));
                    if p.peek().map(|t| &t.tok) != Some(&Tok::Comma) {
                        break;
                    }
                    p.at += 1;
                }
            }
            "depth" => match p.next() {
                Some(Token { tok: Tok::Int(n), .. }) => raw.depth = Some(n),
                _ => {
                    p.at -= 1;
                    return p.fail("expected a depth");
                }
            },
            other => {
                return Err(err(at.0, at.1, ErrorKind::Syntax(format!("unknown directive `{}`", other))));
            }
        }
        p.expect(Tok::Dot, "`.`")?;
    }
    build(raw, names, end)
}

fn build(raw: Raw, names: VarNames, end: (usize, usize)) -> Result<Source, ParseError> {
    let Some((atom, scope)) = raw.atom else {
        return Err(err(end.0, end.1, ErrorKind::MissingAtom));
    };
    if raw.pos.is_empty() {
        return Err(err(end.0, end.1, ErrorKind::MissingPositive));
    }
    let mut ground = BTreeSet::new();
    for (name, (l, c)) in &raw.ground {
        match scope.get(name) {
            Some(v) => {
                ground.insert(*v);
            }
            None => return Err(err(*l, *c, ErrorKind::GroundNotInAtom(name.clone()))),
        }
    }
    let pos: Vec<Atom> = raw.pos.iter().map(|(a, _)| a.clone()).collect();
    let neg: Vec<Atom> = raw.neg.iter().map(|(a, _)| a.clone()).collect();
    let mut sig = Signature::of_atoms(std::iter::once(&atom).chain(&pos).chain(&neg));
    for f in raw.extra {
        sig.add(f);
    }
    if !raw.exact {
        sig = sig.augmented(&[atom.predicate().name()]);
    }
    let problem = Problem::new(atom, pos, neg, ground).map_err(|e| {
        use selun_core::{Error, Precondition};
        let at = match &e {
            Error::Precondition(Precondition::NotUnifiable { index }) => {
                raw.pos.iter().chain(&raw.neg).nth(*index).map(|(_, at)| *at)
            }
            _ => None,
        };
        let (l, c) = at.unwrap_or((1, 1));
        err(l, c, ErrorKind::Invalid(e.to_string()))
    })?;
    Ok(Source {
        problem: problem.with_signature(sig).with_names(names),
        depth: raw.depth,
    })
}

pub fn parse_problem(text: &str) -> Result<Problem, ParseError> {
    parse_source(text).map(|s| s.problem)
}

fn print_atom(a: &Atom, names: &VarNames) -> String {
    show(a, names).to_string()
}

/// Text that parses back to a variant of `p`.
pub fn print_problem(p: &Problem, depth: Option<usize>) -> String {
    let mut out = String::new();
    writeln!(out, "atom {}.", print_atom(&p.atom, &p.names)).unwrap();
    for h in &p.pos {
        writeln!(out, "pos {}.", print_atom(h, &p.names)).unwrap();
    }
    for h in &p.neg {
        writeln!(out, "neg {}.", print_atom(h, &p.names)).unwrap();
    }
    if !p.ground.is_empty() {
        let gs: Vec<String> = p.atom.vars_ordered().into_iter().filter(|v| p.ground.contains(v)).map(|v| show(&v, &p.names).to_string()).collect();
        writeln!(out, "ground {}.", gs.join(", ")).unwrap();
    }
    let used = Signature::of_atoms(p.atoms());
    let extra: Vec<String> = p
        .signature
        .base()
        .filter(|f| !used.contains(f))
        .map(|f| f.to_string())
        .collect();
    if !extra.is_empty() {
        writeln!(out, "sig {}.", extra.join(", ")).unwrap();
    }
    if !p.signature.is_augmented() {
        writeln!(out, "sig exact.").unwrap();
    }
    if let Some(d) = depth {
        writeln!(out, "depth {}.", d).unwrap();
    }
    out
}

pub fn print_substitution(s: &Solution, p: &Problem) -> String {
    show(&s.sigma, &s.all_names(p)).to_string()
}

/// `{X1/f(g(b)), X2/_0}` or `fail (bound=3, conclusive)`.
pub fn print_outcome(o: &Outcome, p: &Problem) -> String {
    match &o.solution {
        Some(s) => print_substitution(s, p),
        None => format!(
            "fail (bound={}, {})",
            o.bound,
            if o.conclusive { "conclusive" } else { "inconclusive" }
        ),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct JsonStats {
    pub candidates_tested: usize,
    pub branches: usize,
}

/// Structured form of [`print_outcome`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct JsonOutcome {
    pub status: String,
    pub substitution: BTreeMap<String, String>,
    pub algorithm: String,
    pub depth_bound: usize,
    pub conclusive: bool,
    pub stats: JsonStats,
}

pub fn json_substitution(s: &Solution, p: &Problem) -> BTreeMap<String, String> {
    let names = s.all_names(p);
    s.sigma
        .iter()
        .map(|(v, t)| (show(&v, &names).to_string(), show(t, &names).to_string()))
        .collect()
}

pub fn json_outcome(o: &Outcome, p: &Problem) -> JsonOutcome {
    JsonOutcome {
        status: if o.solution.is_some() { "solution" } else { "fail" }.to_string(),
        substitution: o.solution.as_ref().map(|s| json_substitution(s, p)).unwrap_or_default(),
        algorithm: o.algorithm.name().to_string(),
        depth_bound: o.bound,
        conclusive: o.conclusive,
        stats: JsonStats {
            candidates_tested: o.stats.candidates_tested,
            branches: o.stats.branches,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use selun_core::variant_eq;

    const POSNEG: &str = "atom p(X1,X2). pos p(f(Y),a). pos p(f(g(Z)),b). neg p(f(g(a)),c). ground X1.";

    #[test]
    fn parses_a_ground_linear_file() {
        let p = parse_problem(POSNEG).unwrap();
        assert_eq!(p.pos.len(), 2);
        assert_eq!(p.neg.len(), 1);
        assert_eq!(p.ground.len(), 1);
        assert_eq!(print_atom(&p.atom, &p.names), "p(X1,X2)");
        assert_eq!(print_atom(&p.pos[1], &p.names), "p(f(g(Z)),b)");
        let names: Vec<&str> = p.signature.symbols().iter().map(|f| f.name()).collect();
        assert_eq!(names, vec!["f", "a", "g", "b", "c", "c0", "f0"]);
    }

    #[test]
    fn minimal_file() {
        let p = parse_problem("atom p(X). pos p(a).").unwrap();
        assert!(p.neg.is_empty() && p.ground.is_empty());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_problem("atom p(X).\npos p(a).\nground Y.").unwrap_err();
        assert_eq!((e.line, e.col), (3, 8));
        assert_eq!(e.kind, ErrorKind::GroundNotInAtom("Y".into()));
        assert_eq!(parse_problem("pos p(a).").unwrap_err().kind, ErrorKind::MissingAtom);
        let e = parse_problem("atom p(f(X)).\npos p(f(a,b)).").unwrap_err();
        assert!(matches!(e.kind, ErrorKind::ArityClash { .. }));
        assert_eq!((e.line, e.col), (2, 7));
        let e = parse_problem("atom p(X) pos p(a).").unwrap_err();
        assert!(matches!(e.kind, ErrorKind::Syntax(_)));
        assert_eq!((e.line, e.col), (1, 11));
        let e = parse_problem("atom p(X). pos p(a). neg p(a,b).").unwrap_err();
        assert!(matches!(e.kind, ErrorKind::Invalid(_)));
        assert!(parse_problem("atom p(X). pos p(a). @").is_err());
    }

    #[test]
    fn variables_are_scoped_per_directive() {
        let p = parse_problem("atom p(X). pos p(X). neg p(f(X)).").unwrap();
        let ids: BTreeSet<Var> = p.atoms().flat_map(|a| a.vars()).collect();
        assert_eq!(ids.len(), 3);
    }

    #[test]
    fn directives_and_comments() {
        let s = parse_source("% hi\natom p(X). % trailing\npos p(Y).\nsig b/0, h/2.\nsig exact.\ndepth 4.\n").unwrap();
        assert_eq!(s.depth, Some(4));
        assert!(!s.problem.signature.is_augmented());
        assert!(s.problem.signature.contains(&Functor::new("h", 2)));
    }

    #[test]
    fn print_round_trip() {
        let src = "atom p(X1,X2).\npos p(f(Y),a).\nneg p(_,c).\nground X2.\nsig h/2.\nsig exact.\ndepth 2.\n";
        let s = parse_source(src).unwrap();
        let printed = print_problem(&s.problem, s.depth);
        let again = parse_source(&printed).unwrap();
        assert_eq!(again.depth, Some(2));
        assert!(variant_eq(&again.problem.atom, &s.problem.atom));
        assert_eq!(again.problem.signature, s.problem.signature);
        assert_eq!(print_problem(&again.problem, again.depth), printed);
    }
}
