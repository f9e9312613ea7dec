mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rml_core::formula::{normalize, parse, random_formula, Atom, FormulaShape, GeneralFormula};
use rml_core::kripke::{is_refinement_of, unravel, KripkeModel, PointedModel};
use rml_core::modelcheck::check;
use rml_core::oracle::{oracle_eval, oracle_sat};
use rml_core::solver::sat;
use rml_core::Formula;

fn atoms() -> Vec<Atom> {
    vec![Atom::new("p").unwrap(), Atom::new("q").unwrap()]
}

fn formula(max_size: usize, shape: FormulaShape) -> impl Strategy<Value = Formula> {
    any::<u64>().prop_map(move |seed| random_formula(&mut ChaCha8Rng::seed_from_u64(seed), max_size, &atoms(), shape))
}

/// Pointed models with up to `n` states over `p` and `q`.
fn model(n: usize) -> impl Strategy<Value = PointedModel> {
    (1..=n)
        .prop_flat_map(|n| (Just(n), any::<u32>(), any::<u32>(), 0..n))
        .prop_map(|(n, vals, edges, point)| {
            let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
            let tr: Vec<(String, String)> = (0..n * n)
                .filter(|b| edges >> b & 1 == 1)
                .map(|b| (names[b / n].clone(), names[b % n].clone()))
                .collect();
            let val: Vec<(String, Vec<Atom>)> = (0..n)
                .map(|i| {
                    let set = atoms().into_iter().enumerate().filter(|(k, _)| vals >> (2 * i + k) & 1 == 1);
                    (names[i].clone(), set.map(|(_, a)| a).collect())
                })
                .collect();
            PointedModel { model: KripkeModel::new(&names, &tr, &val).unwrap(), point }
        })
}

fn general() -> impl Strategy<Value = GeneralFormula> {
    let leaf = prop_oneof![Just("p"), Just("q")].prop_map(|n| GeneralFormula::Atom(Atom::new(n).unwrap()));
    leaf.prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|f| GeneralFormula::Not(Box::new(f))),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| GeneralFormula::And(Box::new(l), Box::new(r))),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| GeneralFormula::Or(Box::new(l), Box::new(r))),
            inner.clone().prop_map(|f| GeneralFormula::Diamond(Box::new(f))),
            inner.prop_map(|f| GeneralFormula::Box(Box::new(f))),
        ]
    })
}

fn general_eval(m: &KripkeModel, s: usize, f: &GeneralFormula) -> bool {
    match f {
        GeneralFormula::Atom(a) => m.holds(s, a),
        GeneralFormula::Not(b) => !general_eval(m, s, b),
        GeneralFormula::And(l, r) => general_eval(m, s, l) && general_eval(m, s, r),
        GeneralFormula::Or(l, r) => general_eval(m, s, l) || general_eval(m, s, r),
        GeneralFormula::Diamond(b) => m.successors(s).iter().any(|&t| general_eval(m, t, b)),
        GeneralFormula::Box(b) => m.successors(s).iter().all(|&t| general_eval(m, t, b)),
        _ => unreachable!(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn render_parse_round_trip(f in formula(12, FormulaShape::EXISTENTIAL)) {
        prop_assert_eq!(parse(&f.render()).unwrap(), f);
    }

    #[test]
    fn metrics_never_grow_toward_leaves(f in formula(12, FormulaShape::EXISTENTIAL)) {
        let m = f.metrics();
        for g in f.subformulas() {
            let n = g.metrics();
            prop_assert!(n.d_diamond <= m.d_diamond && n.d_exists <= m.d_exists);
        }
        prop_assert!(f.subformulas().len() <= f.size());
    }

    #[test]
    fn normalize_preserves_k_truth(g in general(), a in model(3)) {
        let f = normalize(&g, true).unwrap();
        prop_assert_eq!(common::k_eval(&a.model, a.point, &f), general_eval(&a.model, a.point, &g));
    }

    #[test]
    fn oracle_matches_k_semantics(f in formula(8, FormulaShape::MODAL_K), a in model(3)) {
        prop_assert_eq!(oracle_eval(&a, &f).unwrap(), common::k_eval(&a.model, a.point, &f));
    }

    #[test]
    fn refinement_is_transitive(a in model(3), b in model(3), c in model(3)) {
        if is_refinement_of(&a, &b) && is_refinement_of(&b, &c) {
            prop_assert!(is_refinement_of(&a, &c));
        }
        prop_assert!(is_refinement_of(&a, &a));
    }

    #[test]
    fn unravelling_keeps_truth_up_to_modal_depth(a in model(3), f in formula(7, FormulaShape::MODAL_K)) {
        let t = unravel(&a, f.metrics().d_diamond);
        prop_assert_eq!(common::k_eval(&a.model, a.point, &f), common::k_eval(&t.model, t.point, &f));
    }

    #[test]
    fn existential_truth_is_inherited_from_refinements(a in model(2), b in model(2), f in formula(5, FormulaShape::EXISTENTIAL)) {
        let er = Formula::exists_r(f);
        if is_refinement_of(&a, &b) && check(&b, &er).unwrap() {
            prop_assert!(check(&a, &er).unwrap());
        }
    }

    #[test]
    fn oracle_is_monotone_under_refinement(a in model(2), b in model(2), f in formula(5, FormulaShape::EXISTENTIAL)) {
        if is_refinement_of(&a, &b) && oracle_eval(&b, &f).unwrap() {
            prop_assert!(oracle_eval(&a, &Formula::exists_r(f)).unwrap());
        }
    }

    #[test]
    fn check_only_sees_modal_depth(a in model(3), f in formula(6, FormulaShape::EXISTENTIAL)) {
        let t = unravel(&a, f.metrics().d_diamond);
        prop_assert_eq!(check(&a, &f).unwrap(), check(&t, &f).unwrap());
    }

    #[test]
    fn truth_somewhere_means_satisfiable(a in model(3), f in formula(7, FormulaShape::EXISTENTIAL)) {
        if check(&a, &f).unwrap() {
            prop_assert!(sat(&f).unwrap().is_sat());
            prop_assert!(oracle_sat(&f).unwrap());
        }
    }
}
