//! Finite Kripke structures and the relations between them.

mod io;
mod relation;
mod tree;

use std::collections::{BTreeSet, HashMap};

pub use io::ModelFile;
pub use relation::{
    greatest_refinement, is_bisimilar, is_refinement_of, verify_refinement_mapping,
    RefinementRelation,
};
pub use tree::{enumerate_root_restrictions, unravel};

use crate::error::{Error, Result};
use crate::formula::Atom;

/// A Kripke structure `(W, R, V)` with named states.
///
/// States are stored by index in insertion order; successor lists are
/// sorted and duplicate free.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KripkeModel {
    names: Vec<String>,
    index: HashMap<String, usize>,
    succ: Vec<Vec<usize>>,
    valuation: Vec<BTreeSet<Atom>>,
}

impl KripkeModel {
    /// Builds a model from named states. Every transition endpoint and
    /// valuation key must be a listed state; states missing from
    /// `valuation` get the empty set.
    pub fn new<S: AsRef<str>>(
        states: &[S],
        transitions: &[(S, S)],
        valuation: &[(S, Vec<Atom>)],
    ) -> Result<KripkeModel> {
        let mut model = KripkeModel::default();
        for s in states {
            let s = s.as_ref();
            if model.index.contains_key(s) {
                return Err(Error::Model(format!("duplicate state `{s}`")));
            }
            model.add_state(s.to_string(), BTreeSet::new());
        }
        for (from, to) in transitions {
            let from = model.require(from.as_ref())?;
            let to = model.require(to.as_ref())?;
            model.add_edge(from, to);
        }
        for (s, atoms) in valuation {
            let s = model.require(s.as_ref())?;
            model.valuation[s].extend(atoms.iter().cloned());
        }
        Ok(model)
    }

    pub(crate) fn add_state(&mut self, name: String, atoms: BTreeSet<Atom>) -> usize {
        let id = self.names.len();
        self.index.insert(name.clone(), id);
        self.names.push(name);
        self.succ.push(Vec::new());
        self.valuation.push(atoms);
        id
    }

    pub(crate) fn add_edge(&mut self, from: usize, to: usize) {
        let list = &mut self.succ[from];
        if let Err(pos) = list.binary_search(&to) {
            list.insert(pos, to);
        }
    }

    fn require(&self, name: &str) -> Result<usize> {
        self.state_index(name)
            .ok_or_else(|| Error::StateNotFound(name.to_string()))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn state_name(&self, state: usize) -> &str {
        &self.names[state]
    }

    pub fn state_names(&self) -> &[String] {
        &self.names
    }

    pub fn successors(&self, state: usize) -> &[usize] {
        &self.succ[state]
    }

    pub fn valuation(&self, state: usize) -> &BTreeSet<Atom> {
        &self.valuation[state]
    }

    pub fn holds(&self, state: usize, atom: &Atom) -> bool {
        self.valuation[state].contains(atom)
    }

    /// All transitions as index pairs, ordered by source then target.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(s, ts)| ts.iter().map(move |&t| (s, t)))
    }

    pub fn transition_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }
}


/// A model with a designated state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedModel {
    pub model: KripkeModel,
    pub point: usize,
}

impl PointedModel {
    pub fn new(model: KripkeModel, point: &str) -> Result<PointedModel> {
        let point = model
            .state_index(point)
            .ok_or_else(|| Error::StateNotFound(point.to_string()))?;
        Ok(PointedModel { model, point })
    }

    pub fn point_name(&self) -> &str {
        self.model.state_name(self.point)
    }
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;

    /// Shorthand for test models: states named as given, valuations as
    /// strings of single-letter atoms.
    pub fn model(states: &[(&str, &str)], edges: &[(&str, &str)]) -> KripkeModel {
        let names: Vec<&str> = states.iter().map(|(s, _)| *s).collect();
        let val: Vec<(&str, Vec<Atom>)> = states
            .iter()
            .map(|(s, v)| {
                let atoms = v.chars().map(|c| Atom::new(&c.to_string()).unwrap()).collect();
                (*s, atoms)
            })
            .collect();
        KripkeModel::new(&names, edges, &val).unwrap()
    }

    pub fn pointed(states: &[(&str, &str)], edges: &[(&str, &str)], point: &str) -> PointedModel {
        PointedModel::new(model(states, edges), point).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::testing::model;
    use super::*;

    #[test]
    fn rejects_unknown_states() {
        let err = KripkeModel::new(&["s"], &[("s", "t")], &[]).unwrap_err();
        assert_eq!(err, Error::StateNotFound("t".into()));
        let err = KripkeModel::new(&["s", "s"], &[], &[]).unwrap_err();
        assert!(matches!(err, Error::Model(_)));
    }

    #[test]
    fn successors_are_sorted_and_unique() {
        let m = model(&[("a", ""), ("b", "p"), ("c", "")], &[("a", "c"), ("a", "b"), ("a", "c")]);
        assert_eq!(m.successors(0), &[1, 2]);
        assert_eq!(m.transition_count(), 2);
        assert!(m.holds(1, &Atom::new("p").unwrap()));
    }
}
