use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{KripkeModel, PointedModel};
use crate::error::{Error, Result};
use crate::formula::Atom;

/// On-disk model format.
///
/// ```json
/// {"states": ["s", "t"], "transitions": [["s", "t"]],
///  "valuation": {"s": ["p"], "t": []}, "point": "s"}
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelFile {
    pub states: Vec<String>,
    #[serde(default)]
    pub transitions: Vec<(String, String)>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
}

impl ModelFile {
    pub fn into_model(self) -> Result<(KripkeModel, Option<usize>)> {
        let mut val = Vec::with_capacity(self.valuation.len());
        for (state, atoms) in &self.valuation {
            let atoms = atoms
                .iter()
                .map(|a| Atom::new(a).ok_or_else(|| Error::Model(format!("bad atom name `{a}`"))))
                .collect::<Result<Vec<_>>>()?;
            val.push((state.clone(), atoms));
        }
        let model = KripkeModel::new(&self.states, &self.transitions, &val)?;
        let point = match &self.point {
            Some(p) => Some(
                model
                    .state_index(p)
                    .ok_or_else(|| Error::StateNotFound(p.clone()))?,
            ),
            None => None,
        };
        Ok((model, point))
    }

    pub fn from_model(model: &KripkeModel, point: Option<usize>) -> ModelFile {
        ModelFile {
            states: model.state_names().to_vec(),
            transitions: model
                .transitions()
                .map(|(s, t)| (model.state_name(s).to_string(), model.state_name(t).to_string()))
                .collect(),
            valuation: (0..model.len())
                .map(|s| {
                    let atoms = model.valuation(s).iter().map(|a| a.to_string()).collect();
                    (model.state_name(s).to_string(), atoms)
                })
                .collect(),
            point: point.map(|p| model.state_name(p).to_string()),
        }
    }
}

impl KripkeModel {
    pub fn from_json(text: &str) -> Result<(KripkeModel, Option<usize>)> {
        let file: ModelFile =
            serde_json::from_str(text).map_err(|e| Error::Model(e.to_string()))?;
        file.into_model()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ModelFile::from_model(self, None)).expect("model serializes")
    }

    /// Graphviz rendering: one node per state labelled with its valuation,
    /// one edge per transition. A designated point is drawn doubled.
    pub fn to_dot(&self, point: Option<usize>) -> String {
        let mut out = String::from("digraph model {\n");
        for s in 0..self.len() {
            let atoms: Vec<String> = self.valuation(s).iter().map(|a| a.to_string()).collect();
            let shape = if Some(s) == point { ", shape=doublecircle" } else { "" };
            let _ = writeln!(
                out,
                "  \"{}\" [label=\"{}\\n{{{}}}\"{}];",
                self.state_name(s),
                self.state_name(s),
                atoms.join(","),
                shape
            );
        }
        for (s, t) in self.transitions() {
            let _ = writeln!(out, "  \"{}\" -> \"{}\";", self.state_name(s), self.state_name(t));
        }
        out.push_str("}\n");
        out
    }
}

impl PointedModel {
    /// Reads a model file; without a `"point"` the first listed state is used.
    pub fn from_json(text: &str) -> Result<PointedModel> {
        let (model, point) = KripkeModel::from_json(text)?;
        if model.is_empty() {
            return Err(Error::Model("model has no states".into()));
        }
        Ok(PointedModel { model, point: point.unwrap_or(0) })
    }

    pub fn to_file(&self) -> ModelFile {
        ModelFile::from_model(&self.model, Some(self.point))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("model serializes")
    }

    pub fn to_dot(&self) -> String {
        self.model.to_dot(Some(self.point))
    }
}
