use rand::Rng;

use super::{Atom, Formula};

/// Which connectives the generators may use. `Ar` is never generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FormulaShape {
    pub exists: bool,
}

impl FormulaShape {
    pub const EXISTENTIAL: FormulaShape = FormulaShape { exists: true };
    pub const MODAL_K: FormulaShape = FormulaShape { exists: false };

    fn unary(&self) -> Vec<fn(Formula) -> Formula> {
        let mut ops: Vec<fn(Formula) -> Formula> = vec![Formula::diamond, Formula::boxed];
        if self.exists {
            ops.push(Formula::exists_r);
        }
        ops
    }
}

fn literals(atoms: &[Atom]) -> Vec<Formula> {
    atoms
        .iter()
        .flat_map(|a| [Formula::Atom(a.clone()), Formula::NegAtom(a.clone())])
        .collect()
}

/// Every formula of size `1..=max_size` over `atoms`, ordered by size and
/// then by construction order (literals, unary operators, `&`, `|`).
pub fn enumerate_formulas(max_size: usize, atoms: &[Atom], shape: FormulaShape) -> Vec<Formula> {
    let unary = shape.unary();
    let mut by_size: Vec<Vec<Formula>> = vec![Vec::new()];
    for n in 1..=max_size {
        let mut level = Vec::new();
        if n == 1 {
            level = literals(atoms);
        } else {
            for op in &unary {
                level.extend(by_size[n - 1].iter().cloned().map(op));
            }
            for ctor in [Formula::and as fn(Formula, Formula) -> Formula, Formula::or] {
                for left_size in 1..n - 1 {
                    let right_size = n - 1 - left_size;
                    for l in &by_size[left_size] {
                        for r in &by_size[right_size] {
                            level.push(ctor(l.clone(), r.clone()));
                        }
                    }
                }
            }
        }
        by_size.push(level);
    }
    by_size.into_iter().flatten().collect()
}

/// A random formula whose size is drawn uniformly from `1..=max_size`.
pub fn random_formula<R: Rng + ?Sized>(
    rng: &mut R,
    max_size: usize,
    atoms: &[Atom],
    shape: FormulaShape,
) -> Formula {
    let size = rng.gen_range(1..=max_size.max(1));
    random_of_size(rng, size, &literals(atoms), &shape.unary())
}

fn random_of_size<R: Rng + ?Sized>(
    rng: &mut R,
    size: usize,
    lits: &[Formula],
    unary: &[fn(Formula) -> Formula],
) -> Formula {
    if size <= 1 {
        return lits[rng.gen_range(0..lits.len())].clone();
    }
    // binary nodes need at least three nodes
    let binary = size >= 3 && rng.gen_bool(0.5);
    if binary {
        let left = rng.gen_range(1..size - 1);
        let l = random_of_size(rng, left, lits, unary);
        let r = random_of_size(rng, size - 1 - left, lits, unary);
        if rng.gen_bool(0.5) {
            Formula::and(l, r)
        } else {
            Formula::or(l, r)
        }
    } else {
        let op = unary[rng.gen_range(0..unary.len())];
        op(random_of_size(rng, size - 1, lits, unary))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pq() -> Vec<Atom> {
        vec![Atom::new("p").unwrap(), Atom::new("q").unwrap()]
    }

    #[test]
    fn counts_follow_recurrence() {
        // a(1)=4, a(n)=3a(n-1)+2*sum a(i)a(n-1-i)
        let all = enumerate_formulas(4, &pq(), FormulaShape::EXISTENTIAL);
        assert_eq!(all.len(), 4 + 12 + 68 + 396);
        let k = enumerate_formulas(3, &pq(), FormulaShape::MODAL_K);
        assert_eq!(k.len(), 4 + 8 + (16 + 32));
    }

    #[test]
    fn enumeration_is_duplicate_free_and_sized() {
        let all = enumerate_formulas(4, &pq(), FormulaShape::EXISTENTIAL);
        let set: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(set.len(), all.len());
        assert!(all.windows(2).all(|w| w[0].size() <= w[1].size()));
    }

    #[test]
    fn random_respects_size_and_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let f = random_formula(&mut rng, 10, &pq(), FormulaShape::MODAL_K);
            assert!(f.size() <= 10);
            assert_eq!(f.metrics().d_exists, 0);
        }
    }
}
