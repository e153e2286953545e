//! Differential runs: several solvers on the same problems, cross-checked.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use selun_core::oracle::naive_solve;
use selun_core::selective::{check_solution, solve, solve_all, Algorithm, Outcome, Problem, SolveConfig};
use selun_core::{canonical, show, Atom};

use crate::format::print_outcome;
use crate::gen::{problem, rng, GenConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Solved(String),
    Fail { conclusive: bool },
    /// The solver does not apply (e.g. a linear-only solver on non-linear input).
    Skipped(String),
}

impl Verdict {
    fn cell(&self) -> String {
        match self {
            Verdict::Solved(s) => s.clone(),
            Verdict::Fail { conclusive: true } => "fail(conclusive)".to_string(),
            Verdict::Fail { conclusive: false } => "fail".to_string(),
            Verdict::Skipped(_) => "-".to_string(),
        }
    }

    pub fn solved(&self) -> bool {
        matches!(self, Verdict::Solved(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trial {
    pub index: usize,
    pub problem: Problem,
    pub verdicts: Vec<(Algorithm, Verdict)>,
    pub violations: Vec<String>,
}

impl Trial {
    pub fn verdict(&self, a: Algorithm) -> Option<&Verdict> {
        self.verdicts.iter().find(|(b, _)| *b == a).map(|(_, v)| v)
    }
}

/// Run `algos` on `p` and check soundness, linear completeness against the
/// oracle, and that `su-star` succeeds whenever `su` does.
pub fn check_problem(index: usize, p: &Problem, algos: &[Algorithm], cfg: &SolveConfig) -> Trial {
    let mut verdicts = Vec::new();
    let mut violations = Vec::new();
    let mut outcomes: Vec<(Algorithm, Outcome)> = Vec::new();
    for &a in algos {
        let v = match solve(p, a, cfg) {
            Ok(o) => {
                let v = match &o.solution {
                    Some(s) => {
                        if !check_solution(&s.sigma, p) {
                            violations.push(format!("{} returned a non-solution {}", a, print_outcome(&o, p)));
                        }
                        if a == Algorithm::SuLin && !s.sigma.is_linear() {
                            violations.push(format!("su-lin returned a non-linear {}", print_outcome(&o, p)));
                        }
                        Verdict::Solved(print_outcome(&o, p))
                    }
                    None => Verdict::Fail { conclusive: o.conclusive },
                };
                outcomes.push((a, o));
                v
            }
            Err(e) => Verdict::Skipped(e.to_string()),
        };
        verdicts.push((a, v));
    }
    let find = |a: Algorithm| outcomes.iter().find(|(b, _)| *b == a).map(|(_, o)| o);

    if let (Some(lin), true) = (find(Algorithm::SuLin), algos.contains(&Algorithm::Oracle)) {
        let bound = lin.bound;
        if let Ok(o) = naive_solve(p, bound, true) {
            if o.is_fail() != lin.is_fail() {
                violations.push(format!(
                    "su-lin says {} but the linear oracle says {}",
                    print_outcome(lin, p),
                    print_outcome(&o, p)
                ));
            }
        }
    }
    if let (Some(su), Some(star)) = (find(Algorithm::Su), find(Algorithm::SuStar)) {
        if !su.is_fail() && star.is_fail() {
            violations.push("su succeeded where su-star failed".to_string());
        }
    }
    Trial {
        index,
        problem: p.clone(),
        verdicts,
        violations,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub algos: Vec<Algorithm>,
    pub trials: Vec<Trial>,
    /// Extra lines (class differences for single-problem runs).
    pub notes: Vec<String>,
}

impl Report {
    pub fn violations(&self) -> usize {
        self.trials.iter().map(|t| t.violations.len()).sum()
    }

    pub fn agreeing(&self) -> usize {
        self.trials.iter().filter(|t| t.violations.is_empty()).count()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut header = vec!["trial".to_string()];
        header.extend(self.algos.iter().map(|a| a.name().to_string()));
        header.push("check".to_string());
        let mut rows = vec![header];
        for t in &self.trials {
            let mut row = vec![format!("#{}", t.index)];
            for a in &self.algos {
                row.push(t.verdict(*a).map(Verdict::cell).unwrap_or_default());
            }
            row.push(if t.violations.is_empty() { "ok".to_string() } else { "VIOLATION".to_string() });
            rows.push(row);
        }
        let widths: Vec<usize> = (0..rows[0].len())
            .map(|i| rows.iter().map(|r| r[i].chars().count()).max().unwrap_or(0))
            .collect();
        for r in &rows {
            let cells: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{:<w$}", c, w = *w)).collect();
            writeln!(out, "{}", cells.join("  ").trim_end()).unwrap();
        }
        for t in &self.trials {
            for v in &t.violations {
                writeln!(out, "#{}: {}", t.index, v).unwrap();
            }
        }
        for n in &self.notes {
            writeln!(out, "{}", n).unwrap();
        }
        writeln!(out, "{}/{} agree", self.agreeing(), self.trials.len()).unwrap();
        out
    }
}

/// Solution classes `more` finds within the bound that `less` does not.
pub fn class_difference(p: &Problem, more: Algorithm, less: Algorithm, cfg: &SolveConfig) -> Vec<String> {
    let (Ok(m), Ok(l)) = (solve_all(p, more, cfg), solve_all(p, less, cfg)) else {
        return Vec::new();
    };
    let have: BTreeSet<Atom> = l.iter().map(|s| canonical(&s.instance(p))).collect();
    m.iter()
        .filter(|s| !have.contains(&canonical(&s.instance(p))))
        .map(|s| show(&s.sigma, &s.all_names(p)).to_string())
        .collect()
}

pub fn run_problem(p: &Problem, algos: &[Algorithm], cfg: &SolveConfig) -> Report {
    let trial = check_problem(0, p, algos, cfg);
    let mut notes = Vec::new();
    if algos.contains(&Algorithm::Su) && algos.contains(&Algorithm::SuStar) {
        let extra = class_difference(p, Algorithm::SuStar, Algorithm::Su, cfg);
        if !extra.is_empty() {
            notes.push(format!("su-star finds {} class(es) su cannot: {}", extra.len(), extra.join(" ")));
        }
    }
    Report {
        algos: algos.to_vec(),
        trials: vec![trial],
        notes,
    }
}

pub fn run_random(algos: &[Algorithm], trials: usize, seed: u64, gen: &GenConfig, cfg: &SolveConfig) -> Report {
    let mut r = rng(seed);
    let trials = (0..trials)
        .map(|i| {
            let p = problem(&mut r, gen);
            check_problem(i, &p, algos, cfg)
        })
        .collect();
    Report {
        algos: algos.to_vec(),
        trials,
        notes: Vec::new(),
    }
}
