//! Positive unification under reordered input atoms.

use std::collections::BTreeSet;

use selun::format::print_problem;
use selun::gen::{problem, rng, GenConfig};
use selun_core::positive::su_plus;
use selun_core::{canonical, Atom, VarGen};

fn classes(a: &Atom, hpos: &[Atom]) -> BTreeSet<Atom> {
    su_plus(a, hpos, &mut VarGen::new())
        .unwrap()
        .iter()
        .map(|r| canonical(&r.instance(a)))
        .collect()
}

fn differing(cfg: &GenConfig, trials: usize, seed: u64) -> Vec<String> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    for _ in 0..trials {
        let p = problem(&mut r, cfg);
        let mut reversed = p.pos.clone();
        reversed.reverse();
        if classes(&p.atom, &p.pos) != classes(&p.atom, &reversed) {
            out.push(print_problem(&p, None).replace('\n', " "));
        }
    }
    out
}

#[test]
fn linear_results_ignore_the_order() {
    assert!(differing(&GenConfig::linear(), 300, 5).is_empty());
}

#[test]
fn nonlinear_order_effects_are_reported() {
    let diffs = differing(&GenConfig::default(), 300, 6);
    println!("{}/300 non-linear inputs change their class set when H+ is reversed", diffs.len());
    for d in diffs.iter().take(5) {
        println!("  {}", d);
    }
}
