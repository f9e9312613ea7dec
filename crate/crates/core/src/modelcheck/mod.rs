//! Model checking for the existential fragment.
//!
//! The satisfiability activation is reused with the state prefixes pinned
//! to a given model: `1` is the point, every new successor prefix picks a
//! successor of its parent's state (a choice point), and every literal
//! must hold where its state prefix is pinned. For model prefix `1` a box
//! must also reach every successor, so right after saturation each
//! successor gets its own fresh state prefix carrying the box bodies.

mod reduce;

use std::collections::HashSet;
use std::time::Instant;

use indexmap::IndexSet;

pub use reduce::{enumerate_constant_formulas, reduce_k_sat, reduce_k_sat_formula, ConstFormula};

use crate::error::{Error, Result};
use crate::formula::{Formula, FormulaId, FormulaTable, Node};
use crate::kripke::PointedModel;
use crate::solver::{SearchStats, SolverOptions};
use crate::tableau::Prefix;

type Entry = (Prefix, FormulaId);

enum Fail {
    Reject,
    Abort(Error),
}

/// A choice point: the option taken and how many there were.
#[derive(Clone, Copy, Debug)]
struct Choice {
    taken: usize,
    arity: usize,
}

pub struct Checker {
    opts: SolverOptions,
    stats: SearchStats,
}

struct Run<'a> {
    table: FormulaTable,
    a: &'a PointedModel,
    opts: &'a SolverOptions,
    stats: &'a mut SearchStats,
    started: Option<Instant>,
    choices: Vec<Choice>,
    pos: usize,
    counter: u32,
}

impl Checker {
    pub fn new(opts: SolverOptions) -> Checker {
        Checker { opts, stats: SearchStats::default() }
    }

    pub fn stats(&self) -> &SearchStats {
        &self.stats
    }

    pub fn check(&mut self, a: &PointedModel, f: &Formula) -> Result<bool> {
        if !f.in_existential_fragment() {
            return Err(Error::FragmentViolation(format!("`{f}` contains Ar")));
        }
        self.stats = SearchStats::default();
        // no clock reads without a time budget; wasm targets have no clock
        let started = self.opts.time_budget.map(|_| Instant::now());
        let mut choices: Vec<Choice> = Vec::new();
        loop {
            let mut run = Run {
                table: FormulaTable::new(f),
                a,
                opts: &self.opts,
                stats: &mut self.stats,
                started,
                choices,
                pos: 0,
                counter: 1,
            };
            let p = IndexSet::from([(Prefix::root(), run.table.root())]);
            match run.activate(p, &Prefix::root(), a.point, 1, HashSet::new(), true, 1) {
                Ok(_) => return Ok(true),
                Err(Fail::Abort(e)) => return Err(e),
                Err(Fail::Reject) => {
                    choices = run.choices;
                    choices.truncate(run.pos);
                    match choices.iter().rposition(|c| c.taken + 1 < c.arity) {
                        Some(k) => {
                            choices.truncate(k + 1);
                            choices[k].taken += 1;
                        }
                        None => return Ok(false),
                    }
                    self.stats.backtracks += 1;
                }
            }
        }
    }
}

/// `check` with default options.
pub fn check(a: &PointedModel, f: &Formula) -> Result<bool> {
    Checker::new(SolverOptions::default()).check(a, f)
}

impl Run<'_> {
    fn choose(&mut self, arity: usize) -> usize {
        let taken = match self.choices.get(self.pos) {
            Some(c) => c.taken,
            None => {
                self.choices.push(Choice { taken: 0, arity });
                0
            }
        };
        self.pos += 1;
        taken
    }

    fn unmarked(&self, p: &IndexSet<Entry>, m: &HashSet<Entry>, pick: impl Fn(&Node) -> bool) -> Vec<Entry> {
        p.iter().filter(|e| !m.contains(*e) && pick(self.table.node(e.1))).cloned().collect()
    }

    fn literal_fails(&self, id: FormulaId, state: usize) -> bool {
        match self.table.node(id).literal() {
            Some((atom, positive)) => self.a.model.holds(state, atom) != positive,
            None => false,
        }
    }

    fn enter(&mut self, depth: usize) -> std::result::Result<(), Fail> {
        self.stats.activations += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        if self.stats.activations > self.opts.node_budget {
            return Err(Fail::Abort(Error::ResourceLimit(format!(
                "node budget of {} activations exhausted",
                self.opts.node_budget
            ))));
        }
        if let (Some(limit), Some(started)) = (self.opts.time_budget, self.started) {
            if started.elapsed() > limit {
                return Err(Fail::Abort(Error::ResourceLimit(format!("time budget of {limit:?} exhausted"))));
            }
        }
        Ok(())
    }

    /// One activation at a state prefix of length `sigma_len` pinned to
    /// `state`. `first` marks the activation that introduced this state
    /// prefix; only it expands boxes at model prefix 1 to all successors.
    #[allow(clippy::too_many_arguments)]
    fn activate(
        &mut self,
        mut p: IndexSet<Entry>,
        mu: &Prefix,
        state: usize,
        sigma_len: usize,
        mut m: HashSet<Entry>,
        first: bool,
        depth: usize,
    ) -> std::result::Result<IndexSet<Entry>, Fail> {
        self.enter(depth)?;
        self.stats.max_model_prefix = self.stats.max_model_prefix.max(mu.len());
        self.stats.max_state_prefix = self.stats.max_state_prefix.max(sigma_len);
        if p.iter().any(|e| self.literal_fails(e.1, state)) {
            return Err(Fail::Reject);
        }

        loop {
            let mut progressed = false;
            for (nu, id) in self.unmarked(&p, &m, |n| matches!(n, Node::And(..) | Node::Or(..))) {
                let added = match *self.table.node(id) {
                    Node::And(l, r) => vec![l, r],
                    Node::Or(l, r) => vec![if self.choose(2) == 0 { l } else { r }],
                    _ => unreachable!(),
                };
                for c in added {
                    if self.literal_fails(c, state) {
                        return Err(Fail::Reject);
                    }
                    p.insert((nu.clone(), c));
                }
                m.insert((nu, id));
                progressed = true;
            }
            for (nu, id) in self.unmarked(&p, &m, Node::is_literal) {
                for lambda in nu.proper_ancestors() {
                    p.insert((lambda, id));
                }
                m.insert((nu, id));
                progressed = true;
            }
            if !progressed {
                break;
            }
        }
        self.stats.max_p = self.stats.max_p.max(p.len());
        let root = Prefix::root();
        let succ = self.a.model.successors(state).to_vec();

        if first {
            let boxes: IndexSet<Entry> = p
                .iter()
                .filter_map(|(lambda, id)| match *self.table.node(*id) {
                    Node::Box(chi) if *lambda == root => Some((root.clone(), chi)),
                    _ => None,
                })
                .collect();
            if !boxes.is_empty() {
                for &target in &succ {
                    self.counter += 1;
                    self.activate(boxes.clone(), &root, target, sigma_len + 1, HashSet::new(), true, depth + 1)?;
                }
            }
        }

        for (nu, id) in self.unmarked(&p, &m, |n| matches!(n, Node::Diamond(_))) {
            let Node::Diamond(body) = *self.table.node(id) else { unreachable!() };
            if succ.is_empty() {
                return Err(Fail::Reject);
            }
            let target = succ[self.choose(succ.len())];
            let mut next = IndexSet::new();
            for (lambda, bid) in p.iter() {
                if let Node::Box(chi) = *self.table.node(*bid) {
                    if lambda.is_prefix_of(&nu) {
                        next.insert((lambda.clone(), chi));
                    }
                }
            }
            next.insert((nu.clone(), body));
            self.counter += 1;
            self.activate(next, &nu, target, sigma_len + 1, HashSet::new(), true, depth + 1)?;
            m.insert((nu, id));
        }

        let n = self.unmarked(&p, &m, |n| matches!(n, Node::ExistsR(_)));
        m.extend(n.iter().cloned());
        for (nu, id) in n {
            let Node::ExistsR(body) = *self.table.node(id) else { unreachable!() };
            let refined = nu.child(self.counter);
            let mut next: IndexSet<Entry> = p.iter().filter(|(l, _)| l.is_prefix_of(&nu)).cloned().collect();
            next.insert((refined.clone(), body));
            self.counter += 1;
            let back = self.activate(next, &refined, state, sigma_len, m.clone(), false, depth + 1)?;
            for (lambda, lid) in back {
                if lambda.is_prefix_of(&nu) && self.table.node(lid).is_literal() {
                    p.insert((lambda, lid));
                }
            }
        }

        let clash = p.iter().any(|(lambda, id)| match self.table.node(*id) {
            Node::Atom(a) => self
                .table
                .get(&Formula::NegAtom(a.clone()))
                .is_some_and(|neg| p.contains(&(lambda.clone(), neg))),
            _ => false,
        });
        if clash {
            return Err(Fail::Reject);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::kripke::testing::pointed;
    use crate::oracle::oracle_eval;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn examples() {
        let single = pointed(&[("s", "p")], &[], "s");
        assert!(check(&single, &f("p")).unwrap());
        let looped = pointed(&[("s", "")], &[("s", "s")], "s");
        assert!(check(&looped, &f("Er [](z & !z)")).unwrap());
        assert!(!check(&looped, &f("Er <> p")).unwrap());
        assert!(!check(&looped, &f("[](z & !z)")).unwrap());
    }

    #[test]
    fn boxes_reach_every_successor() {
        let a = pointed(&[("r", ""), ("x", "p"), ("y", "")], &[("r", "x"), ("r", "y")], "r");
        assert!(!check(&a, &f("[]p")).unwrap());
        assert!(check(&a, &f("<>p & <>!p")).unwrap());
        assert!(check(&a, &f("Er []p")).unwrap());
        assert!(!check(&a, &f("Er ([]p & <>!p)")).unwrap());
    }

    #[test]
    fn split_successor_needs_two_copies() {
        let a = pointed(
            &[("r", ""), ("c", ""), ("x", "p"), ("y", "")],
            &[("r", "c"), ("c", "x"), ("c", "y")],
            "r",
        );
        let g = f("Er(<>(<>p & []p) & <>(<>!p & []!p))");
        assert!(oracle_eval(&a, &g).unwrap());
        assert!(check(&a, &g).unwrap());
    }

    #[test]
    fn rejects_universal_quantifier() {
        let a = pointed(&[("s", "")], &[], "s");
        assert!(matches!(check(&a, &f("Ar p")), Err(Error::FragmentViolation(_))));
    }
}
