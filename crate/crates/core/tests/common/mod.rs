//! Reference semantics shared by the integration tests. Nothing here calls
//! into the solver, the model checker or the oracle.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rml_core::formula::Atom;
use rml_core::kripke::{KripkeModel, PointedModel};
use rml_core::Formula;

/// Plain Kripke semantics; panics on the refinement quantifiers.
pub fn k_eval(m: &KripkeModel, s: usize, f: &Formula) -> bool {
    match f {
        Formula::Atom(a) => m.holds(s, a),
        Formula::NegAtom(a) => !m.holds(s, a),
        Formula::And(l, r) => k_eval(m, s, l) && k_eval(m, s, r),
        Formula::Or(l, r) => k_eval(m, s, l) || k_eval(m, s, r),
        Formula::Diamond(b) => m.successors(s).iter().any(|&t| k_eval(m, t, b)),
        Formula::Box(b) => m.successors(s).iter().all(|&t| k_eval(m, t, b)),
        Formula::ExistsR(_) | Formula::ForallR(_) => panic!("k_eval has no refinement quantifiers"),
    }
}

/// K satisfiability by searching finite trees of height at most the modal
/// depth whose nodes have at most as many children as the formula has
/// diamonds. Trees are summarized by which subformulas hold at the root,
/// which is all a parent can observe.
pub fn k_sat(f: &Formula) -> bool {
    let mut subs: Vec<Formula> = f.subformulas().into_iter().collect();
    subs.sort_by_key(Formula::size);
    let atoms: Vec<Atom> = f.atoms().into_iter().collect();
    let height = f.metrics().d_diamond;
    let branching = f.diamond_count().max(1);
    let index = |g: &Formula| subs.iter().position(|s| s == g).unwrap();

    let summarize = |val: &BTreeSet<Atom>, children: &[&Vec<bool>]| -> Vec<bool> {
        let mut v = vec![false; subs.len()];
        for (i, g) in subs.iter().enumerate() {
            v[i] = match g {
                Formula::Atom(a) => val.contains(a),
                Formula::NegAtom(a) => !val.contains(a),
                Formula::And(l, r) => v[index(l)] && v[index(r)],
                Formula::Or(l, r) => v[index(l)] || v[index(r)],
                Formula::Diamond(b) => children.iter().any(|c| c[index(b)]),
                Formula::Box(b) => children.iter().all(|c| c[index(b)]),
                _ => unreachable!(),
            };
        }
        v
    };
    let valuations: Vec<BTreeSet<Atom>> = (0..1u32 << atoms.len())
        .map(|bits| atoms.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, a)| a.clone()).collect())
        .collect();

    let mut reachable: BTreeSet<Vec<bool>> = valuations.iter().map(|v| summarize(v, &[])).collect();
    for _ in 0..height {
        let prev: Vec<Vec<bool>> = reachable.iter().cloned().collect();
        let mut next = reachable.clone();
        for children in multisets(prev.len(), branching) {
            let kids: Vec<&Vec<bool>> = children.iter().map(|&i| &prev[i]).collect();
            for val in &valuations {
                next.insert(summarize(val, &kids));
            }
        }
        reachable = next;
    }
    let root = index(f);
    reachable.iter().any(|v| v[root])
}

/// All multisets of `0..n` with at most `k` elements, as sorted vectors.
fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..k {
        let mut grown = Vec::new();
        for m in &frontier {
            let start = m.last().copied().unwrap_or(0);
            for i in start..n {
                let mut m2: Vec<usize> = m.clone();
                m2.push(i);
                grown.push(m2);
            }
        }
        out.extend(grown.iter().cloned());
        frontier = grown;
    }
    out
}

/// Every pointed model with at most `max_states` states over one atom `p`:
/// all valuations, all edge sets and all points.
pub fn small_models(max_states: usize) -> Vec<PointedModel> {
    let p = Atom::new("p").unwrap();
    let mut out = Vec::new();
    for n in 1..=max_states {
        let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
        for val in 0..1u32 << n {
            let v: Vec<(String, Vec<Atom>)> =
                (0..n).filter(|i| val >> i & 1 == 1).map(|i| (names[i].clone(), vec![p.clone()])).collect();
            for edges in 0..1u32 << (n * n) {
                let tr: Vec<(String, String)> = (0..n * n)
                    .filter(|b| edges >> b & 1 == 1)
                    .map(|b| (names[b / n].clone(), names[b % n].clone()))
                    .collect();
                let model = KripkeModel::new(&names, &tr, &v).unwrap();
                for point in 0..n {
                    out.push(PointedModel { model: model.clone(), point });
                }
            }
        }
    }
    out
}
