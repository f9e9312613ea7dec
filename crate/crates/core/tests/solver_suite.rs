mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rml_core::formula::{random_formula, Atom, FormulaShape};
use rml_core::kripke::{enumerate_root_restrictions, unravel, KripkeModel, PointedModel};
use rml_core::oracle::{oracle_eval, oracle_sat};
use rml_core::solver::sat;
use rml_core::{parse, Formula};

#[test]
fn random_formulas_agree_with_oracle() {
    let atoms = [Atom::new("p").unwrap(), Atom::new("q").unwrap()];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let f = random_formula(&mut rng, 10, &atoms, FormulaShape::EXISTENTIAL);
        assert_eq!(sat(&f).unwrap().is_sat(), oracle_sat(&f).unwrap(), "{f}");
    }
}

/// Restricting the unravelling can only keep or drop each successor; it
/// never splits one successor into two refined copies. The formula below
/// needs such a split, so plain restriction enumeration misses it while
/// the solver, the model checker and the multiset-based oracle do not.
#[test]
fn plain_restriction_misses_split_successors() {
    let f = parse("Er(<>(<>p & []p) & <>(<>!p & []!p))").unwrap();
    let Formula::ExistsR(body) = &f else { unreachable!() };
    let p = vec![Atom::new("p").unwrap()];
    let model = KripkeModel::new(
        &["r", "c", "x", "y"],
        &[("r", "c"), ("c", "x"), ("c", "y")],
        &[("x", p)],
    )
    .unwrap();
    let a = PointedModel::new(model, "r").unwrap();

    let tree = unravel(&a, f.metrics().d_diamond);
    let restrictions = enumerate_root_restrictions(&tree).unwrap();
    assert!(!restrictions.iter().any(|t| common::k_eval(&t.model, t.point, body)));

    assert!(oracle_eval(&a, &f).unwrap());
    assert!(rml_core::modelcheck::check(&a, &f).unwrap());
    assert!(sat(&f).unwrap().is_sat());
}
