//! Deterministic satisfiability search for the existential fragment.
//!
//! One activation works on a fixed state prefix `sigma`: it saturates the
//! boolean and literal-lifting rules, spawns one child per `<>` (new state
//! prefix, boxes copied in) and one child per `Er` (new model prefix, same
//! state), pulls literal results of the `Er` children back, and finally
//! checks for a clash. Disjunctions are choice points. The search replays
//! the whole procedure with the last left choice flipped whenever a run
//! rejects, so exploration is chronological and reproducible.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use indexmap::IndexSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{Formula, FormulaId, FormulaTable, Node};
use crate::tableau::{extract_models, Branch, Clash, ModelChain, Prefix, PrefixedFormula, Side};

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// Activations allowed, summed over all replays.
    pub node_budget: u64,
    pub time_budget: Option<Duration>,
    pub trace: bool,
    pub stats: bool,
    /// Check for clashes right after saturation as well as at the end.
    pub eager_clash: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            node_budget: DEFAULT_NODE_BUDGET,
            time_budget: None,
            trace: false,
            stats: true,
            eager_clash: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub activations: u64,
    pub max_depth: usize,
    pub max_p: usize,
    pub backtracks: u64,
    pub max_model_prefix: usize,
    pub max_state_prefix: usize,
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub branch: Branch,
    pub models: ModelChain,
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Satisfiable(Box<Witness>),
    Unsatisfiable,
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Satisfiable(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Satisfiable(w) => Some(w),
            Verdict::Unsatisfiable => None,
        }
    }
}

/// Input of a single activation: the entries `P` (all at `sigma`), the
/// marked entries `M`, the current prefixes and the next fresh index.
#[derive(Clone, Debug)]
pub struct SearchState {
    pub entries: Vec<PrefixedFormula>,
    pub marked: Vec<PrefixedFormula>,
    pub mu: Prefix,
    pub sigma: Prefix,
    pub counter: u32,
}

impl SearchState {
    pub fn initial(f: Formula) -> SearchState {
        SearchState {
            entries: vec![PrefixedFormula::new(Prefix::root(), Prefix::root(), f)],
            marked: Vec::new(),
            mu: Prefix::root(),
            sigma: Prefix::root(),
            counter: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Activation {
    Accepted(Vec<PrefixedFormula>),
    Rejected(Clash),
}

type Entry = (Prefix, FormulaId);

enum Fail {
    Clash(Clash),
    Abort(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail::Abort(e)
    }
}

pub struct Solver {
    opts: SolverOptions,
    stats: SearchStats,
    trace: Vec<String>,
}

struct Run<'a> {
    table: FormulaTable,
    opts: &'a SolverOptions,
    stats: &'a mut SearchStats,
    trace: &'a mut Vec<String>,
    started: Option<Instant>,
    choices: Vec<Side>,
    pos: usize,
    counter: u32,
    produced: IndexSet<(Prefix, Prefix, FormulaId)>,
}

impl Solver {
    pub fn new(opts: SolverOptions) -> Solver {
        Solver { opts, stats: SearchStats::default(), trace: Vec::new() }
    }

    /// Counters of the most recent call.
    pub fn stats(&self) -> &SearchStats {
        &self.stats
    }

    /// Rule applications of the most recent call, one per line, when
    /// tracing is on.
    pub fn trace(&self) -> &[String] {
        &self.trace
    }

    pub fn sat(&mut self, f: &Formula) -> Result<Verdict> {
        if !f.in_existential_fragment() {
            return Err(Error::FragmentViolation(format!("`{f}` contains Ar")));
        }
        self.stats = SearchStats::default();
        self.trace.clear();
        // no clock reads without a time budget; wasm targets have no clock
        let started = self.opts.time_budget.map(|_| Instant::now());
        let mut choices = Vec::new();
        loop {
            let mut run = Run::new(FormulaTable::new(f), &self.opts, &mut self.stats, &mut self.trace, started);
            run.choices = choices;
            let root = run.table.root();
            let p = IndexSet::from([(Prefix::root(), root)]);
            match run.activate(p, &Prefix::root(), &Prefix::root(), HashSet::new(), 1) {
                Ok(_) => return run.witness().map(|w| Verdict::Satisfiable(Box::new(w))),
                Err(Fail::Abort(e)) => return Err(e),
                Err(Fail::Clash(_)) => {
                    choices = run.choices;
                    choices.truncate(run.pos);
                    match choices.iter().rposition(|&c| c == Side::Left) {
                        Some(k) => {
                            choices.truncate(k);
                            choices.push(Side::Right);
                        }
                        None => return Ok(Verdict::Unsatisfiable),
                    }
                    self.stats.backtracks += 1;
                    if self.opts.trace {
                        self.trace.push(format!("RETRY {}", self.stats.backtracks));
                    }
                }
            }
        }
    }

    /// Runs one activation on `st`, always taking the left disjunct. The
    /// counter and the fresh prefixes it hands out continue from
    /// `st.counter`.
    pub fn run_activation(&mut self, st: SearchState) -> Result<Activation> {
        self.stats = SearchStats::default();
        self.trace.clear();
        if let Some(bad) = st.entries.iter().find(|e| e.state_prefix != st.sigma) {
            return Err(Error::InvalidInput(format!("entry {bad} is not at state prefix {}", st.sigma)));
        }
        let mut table = FormulaTable::new(&st.entries.first().map_or_else(|| Formula::atom("p"), |e| e.formula.clone()));
        let p: IndexSet<Entry> = st
            .entries
            .iter()
            .map(|e| (e.model_prefix.clone(), table.intern(&e.formula)))
            .collect();
        let m: HashSet<Entry> = st
            .marked
            .iter()
            .map(|e| (e.model_prefix.clone(), table.intern(&e.formula)))
            .collect();
        let mut run = Run::new(table, &self.opts, &mut self.stats, &mut self.trace, self.opts.time_budget.map(|_| Instant::now()));
        run.counter = st.counter.max(1);
        match run.activate(p, &st.mu, &st.sigma, m, 1) {
            Ok(p) => Ok(Activation::Accepted(
                p.into_iter()
                    .map(|(mu, id)| PrefixedFormula::new(mu, st.sigma.clone(), run.table.formula(id).clone()))
                    .collect(),
            )),
            Err(Fail::Clash(c)) => Ok(Activation::Rejected(c)),
            Err(Fail::Abort(e)) => Err(e),
        }
    }
}

/// `sat` with default options.
pub fn sat(f: &Formula) -> Result<Verdict> {
    Solver::new(SolverOptions::default()).sat(f)
}

impl<'a> Run<'a> {
    fn new(
        table: FormulaTable,
        opts: &'a SolverOptions,
        stats: &'a mut SearchStats,
        trace: &'a mut Vec<String>,
        started: Option<Instant>,
    ) -> Run<'a> {
        Run {
            table,
            opts,
            stats,
            trace,
            started,
            choices: Vec::new(),
            pos: 0,
            counter: 1,
            produced: IndexSet::new(),
        }
    }

    fn show(&self, mu: &Prefix, sigma: &Prefix, id: FormulaId) -> String {
        format!("({mu},{sigma}) {}", self.table.formula(id))
    }

    fn log(&mut self, rule: &str, premise: String, added: Vec<String>) {
        if self.opts.trace {
            self.trace.push(format!("{rule} {premise} => {}", added.join("; ")));
        }
    }

    fn choose(&mut self) -> Side {
        let side = match self.choices.get(self.pos) {
            Some(&s) => s,
            None => {
                self.choices.push(Side::Left);
                Side::Left
            }
        };
        self.pos += 1;
        side
    }

    fn add(&mut self, p: &mut IndexSet<Entry>, sigma: &Prefix, e: Entry) {
        self.stats.max_model_prefix = self.stats.max_model_prefix.max(e.0.len());
        self.produced.insert((e.0.clone(), sigma.clone(), e.1));
        p.insert(e);
    }

    fn unmarked(&self, p: &IndexSet<Entry>, m: &HashSet<Entry>, pick: impl Fn(&Node) -> bool) -> Vec<Entry> {
        p.iter().filter(|e| !m.contains(*e) && pick(self.table.node(e.1))).cloned().collect()
    }

    fn clash(&self, p: &IndexSet<Entry>, sigma: &Prefix) -> Option<Clash> {
        p.iter().find_map(|(mu, id)| match self.table.node(*id) {
            Node::Atom(a) => {
                let neg = self.table.get(&Formula::NegAtom(a.clone()))?;
                p.contains(&(mu.clone(), neg)).then(|| Clash {
                    model_prefix: mu.clone(),
                    state_prefix: sigma.clone(),
                    atom: a.clone(),
                })
            }
            _ => None,
        })
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

    fn activate(
        &mut self,
        mut p: IndexSet<Entry>,
        mu: &Prefix,
        sigma: &Prefix,
        mut m: HashSet<Entry>,
        depth: usize,
    ) -> std::result::Result<IndexSet<Entry>, Fail> {
        self.enter(depth)?;
        self.stats.max_state_prefix = self.stats.max_state_prefix.max(sigma.len());
        self.stats.max_model_prefix = self.stats.max_model_prefix.max(mu.len());
        for e in p.iter() {
            self.stats.max_model_prefix = self.stats.max_model_prefix.max(e.0.len());
            self.produced.insert((e.0.clone(), sigma.clone(), e.1));
        }

        loop {
            let mut progressed = false;
            for (nu, id) in self.unmarked(&p, &m, |n| matches!(n, Node::And(..))) {
                let Node::And(l, r) = *self.table.node(id) else { unreachable!() };
                self.add(&mut p, sigma, (nu.clone(), l));
                self.add(&mut p, sigma, (nu.clone(), r));
                let added = vec![self.show(&nu, sigma, l), self.show(&nu, sigma, r)];
                self.log("AND", self.show(&nu, sigma, id), added);
                m.insert((nu, id));
                progressed = true;
            }
            for (nu, id) in self.unmarked(&p, &m, |n| matches!(n, Node::Or(..))) {
                let Node::Or(l, r) = *self.table.node(id) else { unreachable!() };
                let pick = if self.choose() == Side::Left { l } else { r };
                self.add(&mut p, sigma, (nu.clone(), pick));
                self.log("OR", self.show(&nu, sigma, id), vec![self.show(&nu, sigma, pick)]);
                m.insert((nu, id));
                progressed = true;
            }
            for (nu, id) in self.unmarked(&p, &m, Node::is_literal) {
                let ancestors: Vec<Prefix> = nu.proper_ancestors().collect();
                if !ancestors.is_empty() {
                    let added = ancestors.iter().map(|l| self.show(l, sigma, id)).collect();
                    self.log("L", self.show(&nu, sigma, id), added);
                }
                for lambda in ancestors {
                    self.add(&mut p, sigma, (lambda, id));
                }
                m.insert((nu, id));
                progressed = true;
            }
            if !progressed {
                break;
            }
        }
        self.stats.max_p = self.stats.max_p.max(p.len());
        if self.opts.eager_clash {
            if let Some(c) = self.clash(&p, sigma) {
                return Err(Fail::Clash(c));
            }
        }

        for (nu, id) in self.unmarked(&p, &m, |n| matches!(n, Node::Diamond(_))) {
            let Node::Diamond(body) = *self.table.node(id) else { unreachable!() };
            let child = sigma.child(self.counter);
            let mut next = IndexSet::new();
            for (lambda, bid) in p.iter() {
                if let Node::Box(chi) = *self.table.node(*bid) {
                    if lambda.is_prefix_of(&nu) {
                        next.insert((lambda.clone(), chi));
                        let line = vec![self.show(lambda, &child, chi)];
                        self.log("BOX", self.show(lambda, sigma, *bid), line);
                    }
                }
            }
            next.insert((nu.clone(), body));
            self.log("DIA", self.show(&nu, sigma, id), vec![self.show(&nu, &child, body)]);
            self.counter += 1;
            self.activate(next, &nu, &child, HashSet::new(), depth + 1)?;
            m.insert((nu, id));
        }

        let n = self.unmarked(&p, &m, |n| matches!(n, Node::ExistsR(_)));
        m.extend(n.iter().cloned());
        for (nu, id) in n {
            let Node::ExistsR(body) = *self.table.node(id) else { unreachable!() };
            let refined = nu.child(self.counter);
            let mut next: IndexSet<Entry> = p.iter().filter(|(l, _)| l.is_prefix_of(&nu)).cloned().collect();
            next.insert((refined.clone(), body));
            self.log("EXR", self.show(&nu, sigma, id), vec![self.show(&refined, sigma, body)]);
            self.counter += 1;
            let back = self.activate(next, &refined, sigma, m.clone(), depth + 1)?;
            for (lambda, lid) in back {
                if lambda.is_prefix_of(&nu) && self.table.node(lid).is_literal() {
                    p.insert((lambda, lid));
                }
            }
        }

        self.stats.max_p = self.stats.max_p.max(p.len());
        match self.clash(&p, sigma) {
            Some(c) => Err(Fail::Clash(c)),
            None => Ok(p),
        }
    }

    fn witness(&self) -> Result<Witness> {
        let branch = Branch::from_entries(
            self.produced
                .iter()
                .map(|(mu, sigma, id)| PrefixedFormula::new(mu.clone(), sigma.clone(), self.table.formula(*id).clone())),
        );
        let models = extract_models(&branch)?;
        Ok(Witness { branch, models })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::oracle::oracle_eval;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn entry(mu: &str, sigma: &str, s: &str) -> PrefixedFormula {
        PrefixedFormula::new(mu.parse().unwrap(), sigma.parse().unwrap(), f(s))
    }

    fn traced() -> Solver {
        Solver::new(SolverOptions { trace: true, ..SolverOptions::default() })
    }

    #[test]
    fn verdict_examples() {
        assert!(sat(&f("p | !p")).unwrap().is_sat());
        assert!(!sat(&f("<>p & []!p")).unwrap().is_sat());
        assert!(sat(&f("(<>p) & Er [](z & !z)")).unwrap().is_sat());
        assert!(!sat(&f("p & !p")).unwrap().is_sat());
        assert!(!sat(&f("Er p & !p")).unwrap().is_sat());
    }

    #[test]
    fn rejects_universal_quantifier() {
        assert!(matches!(sat(&f("Ar p")), Err(Error::FragmentViolation(_))));
    }

    #[test]
    fn activation_without_rules() {
        let mut s = Solver::new(SolverOptions::default());
        let out = s.run_activation(SearchState::initial(f("p"))).unwrap();
        assert_eq!(out, Activation::Accepted(vec![entry("1", "1", "p")]));
    }

    #[test]
    fn activation_diamond_box_clash() {
        let mut s = traced();
        let st = SearchState {
            entries: vec![entry("1", "1", "<>p"), entry("1", "1", "[]!p")],
            ..SearchState::initial(f("p"))
        };
        let out = s.run_activation(st).unwrap();
        let Activation::Rejected(c) = out else { panic!("expected a clash") };
        assert_eq!((c.model_prefix.to_string(), c.state_prefix.to_string()), ("1".into(), "1.1".into()));
        assert_eq!(s.trace(), ["BOX (1,1) []!p => (1,1.1) !p", "DIA (1,1) <>p => (1,1.1) p"]);
    }

    #[test]
    fn activation_merge_back_clash() {
        let mut s = traced();
        let st = SearchState {
            entries: vec![entry("1", "1", "Er p"), entry("1", "1", "!p")],
            ..SearchState::initial(f("p"))
        };
        let Activation::Rejected(c) = s.run_activation(st).unwrap() else { panic!("expected a clash") };
        assert_eq!(c.model_prefix, Prefix::root());
        assert_eq!(c.atom.as_str(), "p");
        assert_eq!(s.trace(), ["EXR (1,1) Er p => (1.1,1) p", "L (1.1,1) p => (1,1) p"]);
    }

    #[test]
    fn stats_examples() {
        let mut s = Solver::new(SolverOptions::default());
        s.sat(&f("p")).unwrap();
        assert_eq!((s.stats().max_depth, s.stats().activations), (1, 1));
        s.sat(&f("<><>p")).unwrap();
        assert!(s.stats().max_depth <= 3);
    }

    #[test]
    fn backtracks_over_disjunctions() {
        let mut s = traced();
        let v = s.sat(&f("(p | q) & !p")).unwrap();
        assert!(v.is_sat());
        assert_eq!(s.stats().backtracks, 1);
        let w = v.witness().unwrap();
        assert!(oracle_eval(&w.models.root().pointed, &f("(p | q) & !p")).unwrap());
    }

    #[test]
    fn witnesses_satisfy_the_input() {
        for text in ["<>p & <>!p & [](q | p)", "Er(<>[]p & <>[]!p)", "<>q & Er []!q", "Er <> Er (p & <>!p)"] {
            let g = f(text);
            let v = sat(&g).unwrap();
            let w = v.witness().unwrap_or_else(|| panic!("{text} should be satisfiable"));
            assert!(oracle_eval(&w.models.root().pointed, &g).unwrap(), "{text}");
            assert!(w.branch.is_complete(), "{text}");
        }
    }

    #[test]
    fn node_budget_is_a_distinct_error() {
        let mut s = Solver::new(SolverOptions { node_budget: 2, ..SolverOptions::default() });
        assert!(matches!(s.sat(&f("<><><>p")), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn traces_are_reproducible() {
        let g = f("(p | <>q) & [](!q | r) & Er(!p & <>!r)");
        let mut a = traced();
        let mut b = traced();
        a.sat(&g).unwrap();
        b.sat(&g).unwrap();
        assert_eq!(a.trace(), b.trace());
        assert!(!a.trace().is_empty());
    }
}
