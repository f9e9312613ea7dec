use super::{KripkeModel, PointedModel};
use crate::error::{Error, Result};

/// Tree of all transition paths of length at most `depth` from the point.
/// Path states are named by dot-joined successor indices (`""`, `"0"`,
/// `"0.1"`) and carry the valuation of the state the path ends in.
pub fn unravel(a: &PointedModel, depth: usize) -> PointedModel {
    let mut tree = KripkeModel::default();
    let root = tree.add_state(String::new(), a.model.valuation(a.point).clone());
    let mut frontier = vec![(root, a.point)];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (node, state) in frontier {
            for (k, &succ) in a.model.successors(state).iter().enumerate() {
                let parent = tree.state_name(node);
                let name = if parent.is_empty() {
                    k.to_string()
                } else {
                    format!("{parent}.{k}")
                };
                let child = tree.add_state(name, a.model.valuation(succ).clone());
                tree.add_edge(node, child);
                next.push((child, succ));
            }
        }
        frontier = next;
    }
    PointedModel { model: tree, point: root }
}

fn check_tree(t: &PointedModel) -> Result<()> {
    let m = &t.model;
    let mut parents = vec![0usize; m.len()];
    for (_, to) in m.transitions() {
        parents[to] += 1;
    }
    if parents[t.point] != 0 {
        return Err(Error::NotATree(format!("root `{}` has a parent", t.point_name())));
    }
    if let Some(s) = (0..m.len()).find(|&s| parents[s] > 1) {
        return Err(Error::NotATree(format!("state `{}` has several parents", m.state_name(s))));
    }
    let mut seen = vec![false; m.len()];
    let mut stack = vec![t.point];
    while let Some(s) = stack.pop() {
        seen[s] = true;
        stack.extend(m.successors(s).iter().copied().filter(|&c| !seen[c]));
    }
    if let Some(s) = seen.iter().position(|&v| !v) {
        return Err(Error::NotATree(format!(
            "state `{}` is not reachable from the root",
            m.state_name(s)
        )));
    }
    Ok(())
}

/// Every submodel of the tree `t` induced by a subtree that contains the
/// root, with valuations unchanged. A root with children carrying
/// subtrees `T1..Tk` yields `prod(1 + count(Ti))` restrictions.
pub fn enumerate_root_restrictions(t: &PointedModel) -> Result<Vec<PointedModel>> {
    check_tree(t)?;
    let m = &t.model;

    fn subtrees(m: &KripkeModel, node: usize) -> Vec<Vec<usize>> {
        let mut acc = vec![vec![node]];
        for &child in m.successors(node) {
            let options = subtrees(m, child);
            let mut next = Vec::with_capacity(acc.len() * (options.len() + 1));
            for partial in &acc {
                next.push(partial.clone());
                for opt in &options {
                    let mut joined = partial.clone();
                    joined.extend(opt);
                    next.push(joined);
                }
            }
            acc = next;
        }
        acc
    }

    Ok(subtrees(m, t.point)
        .into_iter()
        .map(|mut keep| {
            keep.sort_unstable();
            let mut sub = KripkeModel::default();
            let mut new_id = vec![usize::MAX; m.len()];
            for &s in &keep {
                new_id[s] = sub.add_state(m.state_name(s).to_string(), m.valuation(s).clone());
            }
            for &s in &keep {
                for &c in m.successors(s) {
                    if new_id[c] != usize::MAX {
                        sub.add_edge(new_id[s], new_id[c]);
                    }
                }
            }
            PointedModel { model: sub, point: new_id[t.point] }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::is_refinement_of;
    use crate::kripke::testing::pointed;

    #[test]
    fn unravel_self_loop() {
        let a = pointed(&[("s", "p")], &[("s", "s")], "s");
        let t = unravel(&a, 2);
        assert_eq!(t.model.state_names(), &["", "0", "0.0"]);
        assert_eq!(t.model.transition_count(), 2);
        assert!((0..3).all(|s| t.model.valuation(s) == a.model.valuation(0)));
        assert_eq!(t.point_name(), "");
    }

    #[test]
    fn unravel_depth_zero_and_branching() {
        let a = pointed(&[("r", ""), ("x", "p"), ("y", "q")], &[("r", "x"), ("r", "y")], "r");
        let t0 = unravel(&a, 0);
        assert_eq!(t0.model.len(), 1);
        assert_eq!(t0.model.transition_count(), 0);
        let t1 = unravel(&a, 1);
        assert_eq!(t1.model.state_names(), &["", "0", "1"]);
        assert_eq!(t1.model.successors(0), &[1, 2]);
    }

    #[test]
    fn restriction_counts() {
        let single = pointed(&[("r", "")], &[], "r");
        assert_eq!(enumerate_root_restrictions(&single).unwrap().len(), 1);
        let one = pointed(&[("r", ""), ("a", "")], &[("r", "a")], "r");
        assert_eq!(enumerate_root_restrictions(&one).unwrap().len(), 2);
        let two = pointed(&[("r", ""), ("a", ""), ("b", "")], &[("r", "a"), ("r", "b")], "r");
        assert_eq!(enumerate_root_restrictions(&two).unwrap().len(), 4);
        // a chain r -> a -> b: {r}, {r,a}, {r,a,b}
        let chain = pointed(&[("r", ""), ("a", ""), ("b", "")], &[("r", "a"), ("a", "b")], "r");
        assert_eq!(enumerate_root_restrictions(&chain).unwrap().len(), 3);
    }

    #[test]
    fn restrictions_match_ancestor_closed_edge_subsets() {
        // brute force: edge subsets closed under ancestors, counted directly
        let t = pointed(
            &[("r", ""), ("a", ""), ("b", ""), ("c", ""), ("d", "")],
            &[("r", "a"), ("r", "b"), ("a", "c"), ("a", "d")],
            "r",
        );
        let edges: Vec<(usize, usize)> = t.model.transitions().collect();
        let mut closed = 0;
        for mask in 0u32..(1 << edges.len()) {
            let kept = |i: usize| mask & (1 << i) != 0;
            let ok = edges.iter().enumerate().all(|(i, &(from, _))| {
                !kept(i) || from == t.point || edges.iter().enumerate().any(|(j, &(_, to))| to == from && kept(j))
            });
            closed += ok as usize;
        }
        let got = enumerate_root_restrictions(&t).unwrap();
        assert_eq!(got.len(), closed);
        for r in &got {
            assert!(is_refinement_of(&t, r));
        }
    }

    #[test]
    fn non_trees_are_rejected() {
        let cyc = pointed(&[("s", "")], &[("s", "s")], "s");
        assert!(matches!(enumerate_root_restrictions(&cyc), Err(Error::NotATree(_))));
        let dag = pointed(
            &[("r", ""), ("a", ""), ("b", ""), ("c", "")],
            &[("r", "a"), ("r", "b"), ("a", "c"), ("b", "c")],
            "r",
        );
        assert!(matches!(enumerate_root_restrictions(&dag), Err(Error::NotATree(_))));
    }
}
