use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Branch, Prefix};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::kripke::{KripkeModel, ModelFile, PointedModel, RefinementRelation};

/// The model built for one model prefix `mu`. States are named by their
/// state prefix; the point is the state where `mu` was introduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractedModel {
    pub prefix: Prefix,
    pub pointed: PointedModel,
}

impl ExtractedModel {
    pub fn state(&self, sigma: &Prefix) -> Option<usize> {
        self.pointed.model.state_index(&sigma.to_string())
    }
}

/// Models for every model prefix of a complete accepting branch, with the
/// positional refinement mappings between `mu` and each `mu.m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelChain {
    pub models: BTreeMap<Prefix, ExtractedModel>,
}

/// Builds one model per model prefix: `W_mu` holds `s_{mu,sigma}` for every
/// entry `(mu.nu, sigma)`, `s_{mu,sigma}` steps to `s_{mu,sigma.i}` when
/// both exist, and `p` holds at `s_{mu,sigma}` iff `(1,sigma) p` is on the
/// branch.
pub fn extract_models(b: &Branch) -> Result<ModelChain> {
    if let Some(clash) = b.has_clash() {
        return Err(clash.into());
    }
    if !b.is_complete() {
        return Err(Error::NotComplete);
    }
    let mut model_prefixes: BTreeSet<Prefix> = BTreeSet::new();
    for e in b.entries() {
        model_prefixes.extend(e.model_prefix.proper_ancestors());
        model_prefixes.insert(e.model_prefix.clone());
    }
    let root = Prefix::root();
    let mut models = BTreeMap::new();
    for mu in model_prefixes {
        let sigmas: BTreeSet<&Prefix> = b
            .entries()
            .filter(|e| mu.is_prefix_of(&e.model_prefix))
            .map(|e| &e.state_prefix)
            .collect();
        let mut model = KripkeModel::default();
        for sigma in &sigmas {
            let atoms = b
                .entries()
                .filter(|e| e.model_prefix == root && &&e.state_prefix == sigma)
                .filter_map(|e| match &e.formula {
                    Formula::Atom(a) => Some(a.clone()),
                    _ => None,
                })
                .collect();
            model.add_state(sigma.to_string(), atoms);
        }
        for (i, sigma) in sigmas.iter().enumerate() {
            for (j, child) in sigmas.iter().enumerate() {
                if sigma.is_parent_of(child) {
                    model.add_edge(i, j);
                }
            }
        }
        // the shortest state prefix is where mu was introduced
        let point = sigmas
            .iter()
            .enumerate()
            .min_by_key(|(_, s)| s.len())
            .map(|(i, _)| i)
            .ok_or(Error::NotComplete)?;
        let pointed = PointedModel { model, point };
        models.insert(mu.clone(), ExtractedModel { prefix: mu, pointed });
    }
    Ok(ModelChain { models })
}

impl ModelChain {
    pub fn root(&self) -> &ExtractedModel {
        &self.models[&Prefix::root()]
    }

    pub fn get(&self, mu: &Prefix) -> Option<&ExtractedModel> {
        self.models.get(mu)
    }

    /// `(mu, mu.m, relation)` for every refinement step, relating
    /// `s_{mu,sigma}` to `s_{mu.m,sigma}`.
    pub fn edges(&self) -> Vec<(Prefix, Prefix, RefinementRelation)> {
        let mut out = Vec::new();
        for (child_prefix, child) in &self.models {
            let Some(parent_prefix) = child_prefix.parent() else {
                continue;
            };
            let Some(parent) = self.models.get(&parent_prefix) else {
                continue;
            };
            let pairs = child
                .pointed
                .model
                .state_names()
                .iter()
                .filter(|s| parent.pointed.model.state_index(s).is_some())
                .map(|s| (s.clone(), s.clone()));
            out.push((parent_prefix, child_prefix.clone(), RefinementRelation::new(pairs)));
        }
        out
    }

    pub fn to_file(&self) -> WitnessFile {
        WitnessFile {
            models: self
                .models
                .values()
                .map(|m| WitnessModel { prefix: m.prefix.to_string(), model: m.pointed.to_file() })
                .collect(),
            refinements: self
                .edges()
                .into_iter()
                .map(|(from, to, rel)| WitnessEdge {
                    from: from.to_string(),
                    to: to.to_string(),
                    pairs: rel.pairs.into_iter().collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("witness serializes")
    }
}

/// Witness file: every extracted model in the kripke file format, and the
/// refinement mapping for each `mu -> mu.m` step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub models: Vec<WitnessModel>,
    pub refinements: Vec<WitnessEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessModel {
    pub prefix: String,
    pub model: ModelFile,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEdge {
    pub from: String,
    pub to: String,
    pub pairs: Vec<(String, String)>,
}

impl WitnessFile {
    pub fn from_json(text: &str) -> Result<WitnessFile> {
        serde_json::from_str(text).map_err(|e| Error::Model(e.to_string()))
    }

    /// Loads every model and checks each recorded refinement mapping.
    pub fn verify(&self) -> Result<bool> {
        let mut models = BTreeMap::new();
        for m in &self.models {
            let (model, _) = m.model.clone().into_model()?;
            models.insert(m.prefix.clone(), model);
        }
        for edge in &self.refinements {
            let from = models
                .get(&edge.from)
                .ok_or_else(|| Error::Model(format!("no model `{}`", edge.from)))?;
            let to = models
                .get(&edge.to)
                .ok_or_else(|| Error::Model(format!("no model `{}`", edge.to)))?;
            let rel = RefinementRelation::new(edge.pairs.iter().cloned());
            if !crate::kripke::verify_refinement_mapping(from, to, &rel)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
