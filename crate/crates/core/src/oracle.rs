//! Brute-force semantics for the existential fragment.
//!
//! `Er psi` holds at a state when some refinement satisfies `psi`. Candidate
//! refinements are finite trees whose nodes are mapped onto states of the
//! model: every child is mapped to a successor of its parent's state and
//! carries that state's valuation. Such a tree is always a refinement, and a
//! satisfiable `psi` always has one of depth at most `d_diamond(psi)` whose
//! nodes at depth `j` have no more children than there are `<>` occurrences
//! at modal depth `j` of `psi`. Children are chosen as multisets over the
//! successor subtrees, so two children may copy the same successor; plain
//! restrictions of the unravelling are not enough for formulas like
//! `Er(<>(<>p & []p) & <>(<>!p & []!p))`, which need one successor split
//! into two.
//!
//! All candidate trees for one quantifier are built as a single shared DAG
//! (common subtrees appear once) and the body is evaluated at each root.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::formula::{Atom, Formula};
use crate::kripke::{KripkeModel, PointedModel};

/// Default cap on candidate models per enumeration.
pub const DEFAULT_MAX_CANDIDATES: u64 = 10_000_000;

#[derive(Clone, Copy, Debug)]
pub struct Oracle {
    /// Largest number of candidate trees a single enumeration may produce.
    pub max_candidates: u64,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle { max_candidates: DEFAULT_MAX_CANDIDATES }
    }
}

/// A graph over the states of a base model. Node `n` behaves like base
/// state `origin[n]` for atoms; its successors are `succ[n]`.
struct Frame<'m> {
    base: &'m KripkeModel,
    origin: Vec<usize>,
    succ: Vec<Vec<usize>>,
}

impl<'m> Frame<'m> {
    fn of_model(base: &'m KripkeModel) -> Self {
        Frame {
            base,
            origin: (0..base.len()).collect(),
            succ: (0..base.len()).map(|s| base.successors(s).to_vec()).collect(),
        }
    }

    fn holds(&self, node: usize, atom: &Atom) -> bool {
        self.base.holds(self.origin[node], atom)
    }
}

fn multichoose(n: u128, k: u128) -> u128 {
    // C(n + k - 1, k), saturating
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n + i) / (i + 1);
    }
    acc
}

/// Number of multisets of size at most `k` over `n` items.
fn bounded_multisets(n: u128, k: usize) -> u128 {
    (0..=k as u128).fold(0u128, |acc, m| acc.saturating_add(multichoose(n, m)))
}

/// Calls `visit` with every non-decreasing index sequence of length
/// `0..=k` over `0..n`.
fn for_each_multiset(n: usize, k: usize, visit: &mut dyn FnMut(&[usize])) {
    fn go(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        visit(cur);
        if cur.len() == k {
            return;
        }
        for i in start..n {
            cur.push(i);
            go(n, k, i, cur, visit);
            cur.pop();
        }
    }
    go(n, k, 0, &mut Vec::with_capacity(k), visit);
}

impl Oracle {
    pub fn new(max_candidates: u64) -> Self {
        Oracle { max_candidates }
    }

    /// Truth of `f` at the point of `a`.
    pub fn eval(&self, a: &PointedModel, f: &Formula) -> Result<bool> {
        let frame = Frame::of_model(&a.model);
        self.eval_in(&frame, a.point, f)
    }

    /// Truth of `f` at every state of `model`, in state order.
    pub fn eval_all(&self, model: &KripkeModel, f: &Formula) -> Result<Vec<bool>> {
        let frame = Frame::of_model(model);
        (0..model.len()).map(|s| self.eval_in(&frame, s, f)).collect()
    }

    fn eval_in(&self, frame: &Frame<'_>, node: usize, f: &Formula) -> Result<bool> {
        Ok(match f {
            Formula::Atom(a) => frame.holds(node, a),
            Formula::NegAtom(a) => !frame.holds(node, a),
            Formula::And(l, r) => self.eval_in(frame, node, l)? && self.eval_in(frame, node, r)?,
            Formula::Or(l, r) => self.eval_in(frame, node, l)? || self.eval_in(frame, node, r)?,
            Formula::Diamond(b) => {
                for &t in &frame.succ[node] {
                    if self.eval_in(frame, t, b)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Box(b) => {
                for &t in &frame.succ[node] {
                    if !self.eval_in(frame, t, b)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::ExistsR(body) => {
                let caps = body.diamonds_per_level();
                let (dag, roots) = self.refinement_dag(frame, node, &caps)?;
                for root in roots {
                    if self.eval_in(&dag, root, body)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::ForallR(_) => {
                return Err(Error::FragmentViolation(format!(
                    "cannot evaluate universal refinement in `{f}`"
                )))
            }
        })
    }

    /// Builds every candidate refinement tree of `frame` at `node` with at
    /// most `caps[j]` children at depth `j` (no children from depth
    /// `caps.len()` on). Returns the shared DAG and its candidate roots.
    fn refinement_dag<'m>(
        &self,
        frame: &Frame<'m>,
        node: usize,
        caps: &[usize],
    ) -> Result<(Frame<'m>, Vec<usize>)> {
        let mut counts: HashMap<(usize, usize), u128> = HashMap::new();
        let total = count_trees(frame, node, 0, caps, &mut counts);
        if total > self.max_candidates as u128 {
            return Err(Error::ResourceLimit(format!(
                "{total} candidate refinements exceed the cap of {}",
                self.max_candidates
            )));
        }
        let mut dag = Frame { base: frame.base, origin: Vec::new(), succ: Vec::new() };
        let mut memo: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        let roots = build_trees(frame, node, 0, caps, &mut dag, &mut memo);
        Ok((dag, roots))
    }

    /// Satisfiability by enumerating tree models over `atoms(f)`.
    pub fn sat(&self, f: &Formula) -> Result<bool> {
        Ok(self.sat_witness(f)?.is_some())
    }

    /// A tree model of `f` if one exists within the search bounds: depth at
    /// most `d_diamond(f)`, at most as many children at depth `j` as `f`
    /// has `<>` occurrences at modal depth `j`.
    pub fn sat_witness(&self, f: &Formula) -> Result<Option<PointedModel>> {
        if !f.in_existential_fragment() {
            return Err(Error::FragmentViolation(format!("`{f}` uses Ar")));
        }
        let atoms: Vec<Atom> = f.atoms().into_iter().collect();
        if atoms.len() > 16 {
            return Err(Error::ResourceLimit(format!("{} atoms", atoms.len())));
        }
        let caps = f.diamonds_per_level();
        let valuations = 1u128 << atoms.len();

        // level sizes, deepest first
        let mut size: u128 = valuations;
        for j in (0..caps.len().saturating_sub(1)).rev() {
            size = valuations.saturating_mul(bounded_multisets(size, caps[j]));
        }
        if size > self.max_candidates as u128 {
            return Err(Error::ResourceLimit(format!(
                "{size} candidate models exceed the cap of {}",
                self.max_candidates
            )));
        }

        // One model holding every candidate tree as a shared DAG.
        let mut universe = KripkeModel::default();
        let add = |universe: &mut KripkeModel, mask: usize, children: &[usize]| {
            let atoms = atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, a)| a.clone())
                .collect();
            let id = universe.add_state(format!("t{}", universe.len()), atoms);
            for &c in children {
                universe.add_edge(id, c);
            }
            id
        };
        let mut level: Vec<usize> = (0..valuations as usize)
            .map(|mask| add(&mut universe, mask, &[]))
            .collect();
        for j in (0..caps.len().saturating_sub(1)).rev() {
            let mut next = Vec::new();
            for mask in 0..valuations as usize {
                for_each_multiset(level.len(), caps[j], &mut |picks| {
                    let children: Vec<usize> = picks.iter().map(|&i| level[i]).collect();
                    next.push(add(&mut universe, mask, &children));
                });
            }
            level = next;
        }
        let frame = Frame::of_model(&universe);
        for &root in &level {
            if self.eval_in(&frame, root, f)? {
                let depth = caps.len().saturating_sub(1);
                let tree = crate::kripke::unravel(
                    &PointedModel { model: universe.clone(), point: root },
                    depth,
                );
                return Ok(Some(tree));
            }
        }
        Ok(None)
    }
}

fn count_trees(
    frame: &Frame<'_>,
    node: usize,
    level: usize,
    caps: &[usize],
    memo: &mut HashMap<(usize, usize), u128>,
) -> u128 {
    if level + 1 >= caps.len() || caps[level] == 0 {
        return 1;
    }
    if let Some(&c) = memo.get(&(node, level)) {
        return c;
    }
    let options = frame.succ[node]
        .iter()
        .fold(0u128, |acc, &t| acc.saturating_add(count_trees(frame, t, level + 1, caps, memo)));
    let c = bounded_multisets(options, caps[level]);
    memo.insert((node, level), c);
    c
}

fn build_trees(
    frame: &Frame<'_>,
    node: usize,
    level: usize,
    caps: &[usize],
    dag: &mut Frame<'_>,
    memo: &mut HashMap<(usize, usize), Vec<usize>>,
) -> Vec<usize> {
    if let Some(found) = memo.get(&(node, level)) {
        return found.clone();
    }
    let mut out = Vec::new();
    if level + 1 >= caps.len() || caps[level] == 0 {
        out.push(dag.origin.len());
        dag.origin.push(frame.origin[node]);
        dag.succ.push(Vec::new());
    } else {
        let mut options = Vec::new();
        for &t in &frame.succ[node] {
            options.extend(build_trees(frame, t, level + 1, caps, dag, memo));
        }
        for_each_multiset(options.len(), caps[level], &mut |picks| {
            out.push(dag.origin.len());
            dag.origin.push(frame.origin[node]);
            dag.succ.push(picks.iter().map(|&i| options[i]).collect());
        });
    }
    memo.insert((node, level), out.clone());
    out
}

/// Truth of `f` at the point of `a` with the default cap.
pub fn oracle_eval(a: &PointedModel, f: &Formula) -> Result<bool> {
    Oracle::default().eval(a, f)
}

/// Satisfiability of `f` with the default cap.
pub fn oracle_sat(f: &Formula) -> Result<bool> {
    Oracle::default().sat(f)
}
