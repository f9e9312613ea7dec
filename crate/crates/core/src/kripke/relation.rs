use std::collections::BTreeSet;

use super::{KripkeModel, PointedModel};
use crate::error::{Error, Result};

/// A relation from the states of a source model to those of a target
/// model, by state name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RefinementRelation {
    pub pairs: BTreeSet<(String, String)>,
}

impl RefinementRelation {
    pub fn new<I, S>(pairs: I) -> RefinementRelation
    where
        I: IntoIterator<Item = (S, S)>,
        S: Into<String>,
    {
        RefinementRelation {
            pairs: pairs.into_iter().map(|(a, b)| (a.into(), b.into())).collect(),
        }
    }

    pub fn contains(&self, source: &str, target: &str) -> bool {
        self.pairs.contains(&(source.to_string(), target.to_string()))
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    /// Relational composition: `(a, c)` whenever `(a, b) ∈ self` and
    /// `(b, c) ∈ other`.
    pub fn compose(&self, other: &RefinementRelation) -> RefinementRelation {
        let mut pairs = BTreeSet::new();
        for (a, b) in &self.pairs {
            for (b2, c) in &other.pairs {
                if b == b2 {
                    pairs.insert((a.clone(), c.clone()));
                }
            }
        }
        RefinementRelation { pairs }
    }

    fn from_matrix(source: &KripkeModel, target: &KripkeModel, m: &[Vec<bool>]) -> Self {
        let mut pairs = BTreeSet::new();
        for (s, row) in m.iter().enumerate() {
            for (t, &related) in row.iter().enumerate() {
                if related {
                    pairs.insert((source.state_name(s).to_string(), target.state_name(t).to_string()));
                }
            }
        }
        RefinementRelation { pairs }
    }
}

/// Checks the atom and back conditions of a refinement mapping from
/// `source` to `target`. The empty relation is never a refinement mapping.
pub fn verify_refinement_mapping(
    source: &KripkeModel,
    target: &KripkeModel,
    rel: &RefinementRelation,
) -> Result<bool> {
    let mut m = vec![vec![false; target.len()]; source.len()];
    for (s, t) in &rel.pairs {
        let s = source
            .state_index(s)
            .ok_or_else(|| Error::StateNotFound(s.clone()))?;
        let t = target
            .state_index(t)
            .ok_or_else(|| Error::StateNotFound(t.clone()))?;
        m[s][t] = true;
    }
    if rel.is_empty() {
        return Ok(false);
    }
    for s in 0..source.len() {
        for t in 0..target.len() {
            if m[s][t] && !(source.valuation(s) == target.valuation(t) && back_ok(source, target, &m, s, t)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Every target transition out of `t` is matched by a source transition
/// out of `s` into a related pair.
fn back_ok(source: &KripkeModel, target: &KripkeModel, m: &[Vec<bool>], s: usize, t: usize) -> bool {
    target
        .successors(t)
        .iter()
        .all(|&t2| source.successors(s).iter().any(|&s2| m[s2][t2]))
}

fn forth_ok(source: &KripkeModel, target: &KripkeModel, m: &[Vec<bool>], s: usize, t: usize) -> bool {
    source
        .successors(s)
        .iter()
        .all(|&s2| target.successors(t).iter().any(|&t2| m[s2][t2]))
}

fn fixpoint(source: &KripkeModel, target: &KripkeModel, forth: bool) -> Vec<Vec<bool>> {
    let mut m: Vec<Vec<bool>> = (0..source.len())
        .map(|s| {
            (0..target.len())
                .map(|t| source.valuation(s) == target.valuation(t))
                .collect()
        })
        .collect();
    loop {
        let mut changed = false;
        for s in 0..source.len() {
            for t in 0..target.len() {
                if m[s][t]
                    && !(back_ok(source, target, &m, s, t)
                        && (!forth || forth_ok(source, target, &m, s, t)))
                {
                    m[s][t] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return m;
        }
    }
}

pub(crate) fn refinement_matrix(source: &KripkeModel, target: &KripkeModel) -> Vec<Vec<bool>> {
    fixpoint(source, target, false)
}

/// The union of all refinement mappings from `source` to `target`
/// (possibly empty, meaning no pair of states refines).
pub fn greatest_refinement(source: &KripkeModel, target: &KripkeModel) -> RefinementRelation {
    RefinementRelation::from_matrix(source, target, &refinement_matrix(source, target))
}

/// True when `refined` is a refinement of `original`.
pub fn is_refinement_of(original: &PointedModel, refined: &PointedModel) -> bool {
    refinement_matrix(&original.model, &refined.model)[original.point][refined.point]
}

pub fn is_bisimilar(a: &PointedModel, b: &PointedModel) -> bool {
    fixpoint(&a.model, &b.model, true)[a.point][b.point]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::testing::{model, pointed};

    #[test]
    fn mapping_examples() {
        let m = model(&[("s", "")], &[]);
        let m2 = model(&[("t", "")], &[]);
        let rel = RefinementRelation::new([("s", "t")]);
        assert!(verify_refinement_mapping(&m, &m2, &rel).unwrap());

        let m2p = model(&[("t", "p")], &[]);
        assert!(!verify_refinement_mapping(&m, &m2p, &rel).unwrap());

        assert!(!verify_refinement_mapping(&m, &m2, &RefinementRelation::default()).unwrap());

        let bad = RefinementRelation::new([("s", "nope")]);
        assert_eq!(
            verify_refinement_mapping(&m, &m2, &bad),
            Err(Error::StateNotFound("nope".into()))
        );
    }

    #[test]
    fn back_condition_is_checked() {
        // target gains a transition the source cannot match
        let m = model(&[("s", "")], &[]);
        let m2 = model(&[("t", "")], &[("t", "t")]);
        let rel = RefinementRelation::new([("s", "t")]);
        assert!(!verify_refinement_mapping(&m, &m2, &rel).unwrap());
        // the reverse direction only drops a transition
        let rev = RefinementRelation::new([("t", "s")]);
        assert!(verify_refinement_mapping(&m2, &m, &rev).unwrap());
    }

    #[test]
    fn self_loop_is_refined_by_any_variable_free_model() {
        let loop_model = model(&[("s", "")], &[("s", "s")]);
        let other = model(
            &[("a", ""), ("b", ""), ("c", "")],
            &[("a", "b"), ("b", "c"), ("c", "a"), ("a", "c")],
        );
        let rel = greatest_refinement(&loop_model, &other);
        for w in ["a", "b", "c"] {
            assert!(rel.contains("s", w));
        }
    }

    #[test]
    fn identity_is_contained() {
        let m = model(&[("a", "p"), ("b", ""), ("c", "q")], &[("a", "b"), ("b", "c"), ("c", "c")]);
        let rel = greatest_refinement(&m, &m);
        for s in ["a", "b", "c"] {
            assert!(rel.contains(s, s));
        }
        assert!(verify_refinement_mapping(&m, &m, &rel).unwrap());
    }

    #[test]
    fn bisimilarity_examples() {
        let a = pointed(&[("s", "p")], &[("s", "s")], "s");
        assert!(is_bisimilar(&a, &a.clone()));
        let dup = pointed(&[("x", "p"), ("y", "p")], &[("x", "y"), ("y", "x")], "x");
        assert!(is_bisimilar(&a, &dup));
        let p = pointed(&[("s", "p")], &[], "s");
        let q = pointed(&[("s", "q")], &[], "s");
        assert!(!is_bisimilar(&p, &q));
        // a restriction refines but is not bisimilar
        let dead = pointed(&[("s", "p")], &[], "s");
        assert!(is_refinement_of(&a, &dead));
        assert!(!is_bisimilar(&a, &dead));
    }

    #[test]
    fn composition() {
        let r1 = RefinementRelation::new([("a", "b"), ("a", "c")]);
        let r2 = RefinementRelation::new([("c", "d")]);
        assert_eq!(r1.compose(&r2), RefinementRelation::new([("a", "d")]));
    }
}
