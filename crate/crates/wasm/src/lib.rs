//! Browser bindings. Every export takes text and returns a JSON string with
//! either `"ok": true` and the payload or `"ok": false` and an `"error"`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use rml_core::kripke::PointedModel;
use rml_core::modelcheck::Checker;
use rml_core::solver::{Solver, SolverOptions};
use rml_core::{parse, Error};

const BROWSER_NODE_BUDGET: u64 = 200_000;

fn options(trace: bool) -> SolverOptions {
    SolverOptions { node_budget: BROWSER_NODE_BUDGET, trace, ..SolverOptions::default() }
}

fn failure(e: impl std::fmt::Display) -> Value {
    json!({ "ok": false, "error": e.to_string() })
}

pub fn solve_value(formula: &str) -> Value {
    let f = match parse(formula) {
        Ok(f) => f,
        Err(e) => return failure(e),
    };
    let mut solver = Solver::new(options(true));
    match solver.sat(&f) {
        Ok(v) => json!({
            "ok": true,
            "formula": f.render(),
            "sat": v.is_sat(),
            "stats": solver.stats(),
            "trace": solver.trace(),
            "witness": v.witness().map(|w| w.models.to_file()),
        }),
        Err(e) => failure(e),
    }
}

pub fn check_value(model_json: &str, formula: &str) -> Value {
    let run = || -> Result<Value, Error> {
        let a = PointedModel::from_json(model_json)?;
        let f = parse(formula)?;
        let holds = Checker::new(options(false)).check(&a, &f)?;
        Ok(json!({ "ok": true, "holds": holds, "model": a.to_file(), "formula": f.render() }))
    };
    run().unwrap_or_else(failure)
}

pub fn analyze_value(formula: &str) -> Value {
    match parse(formula) {
        Ok(f) => {
            let m = f.metrics();
            json!({
                "ok": true,
                "formula": f.render(),
                "size": f.size(),
                "d_diamond": m.d_diamond,
                "d_exists": m.d_exists,
                "existential": f.in_existential_fragment(),
                "atoms": f.atoms().iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            })
        }
        Err(e) => failure(e),
    }
}

/// Satisfiability with the rule trace and, when satisfiable, the model chain.
#[wasm_bindgen]
pub fn solve(formula: &str) -> String {
    solve_value(formula).to_string()
}

/// Truth of a formula at the point of a model given in the JSON file format.
#[wasm_bindgen]
pub fn check(model_json: &str, formula: &str) -> String {
    check_value(model_json, formula).to_string()
}

/// Canonical rendering and depth measures of a formula.
#[wasm_bindgen]
pub fn analyze(formula: &str) -> String {
    analyze_value(formula).to_string()
}
