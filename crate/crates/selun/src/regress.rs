//! Worked-example fixtures with their expected solver outputs.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use selun_core::selective::{solve, Algorithm, SolveConfig};

use crate::format::{parse_source, print_outcome};

pub struct Fixture {
    pub name: &'static str,
    pub source: &'static str,
    /// Expected printed outcome per algorithm.
    pub expect: &'static [(Algorithm, &'static str)],
}

use Algorithm::{Oracle, Su, SuLin, SuStar};

pub const FIXTURES: &[Fixture] = &[
    Fixture {
        name: "ground_successor",
        source: "% N must be ground, unify with both positives, avoid f(_).\n\
                 atom p(N).\npos p(s(a)).\npos p(s(W)).\nneg p(f(X)).\nground N.\n",
        expect: &[(Su, "{N/s(a)}"), (SuStar, "{N/s(a)}"), (SuLin, "{N/s(a)}"), (Oracle, "{N/s(a)}")],
    },
    Fixture {
        name: "ground_successor_blocked",
        source: "atom p(N).\npos p(s(a)).\nneg p(s(W)).\nneg p(f(X)).\nground N.\n",
        expect: &[
            (Su, "fail (bound=3, conclusive)"),
            (SuStar, "fail (bound=3, conclusive)"),
            (SuLin, "fail (bound=3, conclusive)"),
            (Oracle, "fail (bound=3, conclusive)"),
        ],
    },
    Fixture {
        name: "two_general",
        source: "atom p(X,Y).\npos p(Z,Z).\npos p(a,b).\nneg p(c,c).\n",
        expect: &[(Su, "{X/a, Y/_0}"), (SuStar, "{X/a, Y/_0}"), (Oracle, "{X/_0, Y/b}")],
    },
    Fixture {
        name: "positive_clash",
        source: "atom p(X,Y).\npos p(a,b).\npos p(Z,Z).\n",
        expect: &[(Su, "{X/a, Y/_0}"), (SuStar, "{X/a, Y/_0}"), (Oracle, "{X/_0, Y/_1}")],
    },
    Fixture {
        name: "reserved_binding",
        source: "atom p(X1,X2).\npos p(X,g(X)).\npos p(Z,Z).\nneg p(g(b),W).\nground X1.\nsig a/0.\n",
        expect: &[(Su, "{X1/b, X2/_0}"), (SuStar, "{X1/b, X2/_0}"), (Oracle, "{X1/b, X2/_0}")],
    },
    Fixture {
        name: "aliasing_only",
        source: "atom p(X1,X2).\npos p(X,a).\npos p(b,Y).\nneg p(b,a).\n",
        expect: &[
            (Su, "fail (bound=2, conclusive)"),
            (SuLin, "fail (bound=2, conclusive)"),
            (Oracle, "{X1/_0, X2/_0}"),
        ],
    },
    Fixture {
        name: "maximal_linear",
        source: "atom p(X1,X2).\npos p(f(Y),a).\npos p(f(g(Z)),b).\n",
        expect: &[(SuLin, "{X1/f(g(_0)), X2/_1}"), (Su, "{X1/f(g(_0)), X2/_1}")],
    },
    Fixture {
        name: "ground_linear",
        source: "atom p(X1,X2).\npos p(f(Y),a).\npos p(f(g(Z)),b).\nneg p(f(g(a)),c).\nground X1.\n",
        expect: &[
            (SuLin, "{X1/f(g(b)), X2/_0}"),
            (Su, "{X1/f(g(b)), X2/_0}"),
            (SuStar, "{X1/f(g(b)), X2/_0}"),
            (Oracle, "{X1/f(g(b)), X2/_0}"),
        ],
    },
    Fixture {
        name: "unreachable",
        source: "atom p(X1,X2).\npos p(f(Y),a).\npos p(f(g(Z)),b).\nneg p(g(W),c).\n",
        expect: &[(SuLin, "{X1/f(g(_0)), X2/_1}"), (Oracle, "{X1/f(_0), X2/_1}")],
    },
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub fixture: &'static str,
    pub algorithm: Algorithm,
    pub expected: &'static str,
    pub got: String,
}

impl Check {
    pub fn ok(&self) -> bool {
        self.expected == self.got
    }
}

pub fn run() -> Vec<Check> {
    let mut out = Vec::new();
    for f in FIXTURES {
        let src = parse_source(f.source).expect("fixtures parse");
        let cfg = SolveConfig {
            max_depth: src.depth,
            ..SolveConfig::default()
        };
        for (a, want) in f.expect {
            let got = match solve(&src.problem, *a, &cfg) {
                Ok(o) => print_outcome(&o, &src.problem),
                Err(e) => format!("error: {}", e),
            };
            out.push(Check {
                fixture: f.name,
                algorithm: *a,
                expected: want,
                got,
            });
        }
    }
    out
}

/// Write every fixture as `<name>.sun` into `dir`.
pub fn write(dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    FIXTURES
        .iter()
        .map(|f| {
            let path = dir.join(format!("{}.sun", f.name));
            fs::write(&path, f.source)?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_match() {
        for c in run() {
            assert!(c.ok(), "{} {}: expected {} got {}", c.fixture, c.algorithm, c.expected, c.got);
        }
    }
}
