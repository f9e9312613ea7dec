//! The two-prefix tableau calculus.
//!
//! Entries are `(mu, sigma) psi`: `psi` holds at state `sigma` of model
//! `mu`. Six rules extend a branch:
//!
//! | rule | premise               | conclusion                  | side condition                  |
//! |------|-----------------------|-----------------------------|---------------------------------|
//! | AND  | `(mu,s) a & b`        | `(mu,s) a`, `(mu,s) b`      |                                 |
//! | OR   | `(mu,s) a \| b`       | `(mu,s) a` or `(mu,s) b`    |                                 |
//! | L    | `(mu.nu,s) l`         | `(mu,s) l`                  | `l` a literal                   |
//! | DIA  | `(mu,s) <>a`          | `(mu,s.i) a`                | `s.i` is new                    |
//! | EXR  | `(mu,s) Er a`         | `(mu.m,s) a`                | `mu.m` is new                   |
//! | BOX  | `(mu,s) []a`          | `(mu,s.i) a`                | some `(mu.nu,s.i)` is present   |
//!
//! A rule instance counts as applied once its conclusion is on the branch;
//! for DIA and EXR that means some fresh child already carries the body.

mod extract;
mod prefix;

use std::fmt;

use indexmap::IndexSet;

pub use extract::{extract_models, ExtractedModel, ModelChain, WitnessEdge, WitnessFile, WitnessModel};
pub use prefix::Prefix;

use crate::error::{Error, Result};
use crate::formula::{Atom, Formula};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrefixedFormula {
    pub model_prefix: Prefix,
    pub state_prefix: Prefix,
    pub formula: Formula,
}

impl PrefixedFormula {
    pub fn new(model_prefix: Prefix, state_prefix: Prefix, formula: Formula) -> Self {
        PrefixedFormula { model_prefix, state_prefix, formula }
    }
}

impl fmt::Display for PrefixedFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}) {}", self.model_prefix, self.state_prefix, self.formula)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    And,
    Or,
    L,
    Diamond,
    ExistsR,
    Box,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::And => "AND",
            Rule::Or => "OR",
            Rule::L => "L",
            Rule::Diamond => "DIA",
            Rule::ExistsR => "EXR",
            Rule::Box => "BOX",
        })
    }
}

/// One applicable rule on one entry. `L` carries the model prefix the
/// literal is copied to; `BOX` the successor state prefix it targets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleInstance {
    pub rule: Rule,
    pub target: PrefixedFormula,
    pub to_model: Option<Prefix>,
    pub to_state: Option<Prefix>,
}

/// A literal clash: both `p` and `!p` at the same prefix pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clash {
    pub model_prefix: Prefix,
    pub state_prefix: Prefix,
    pub atom: Atom,
}

impl From<Clash> for Error {
    fn from(c: Clash) -> Error {
        Error::Clash {
            model_prefix: c.model_prefix.to_string(),
            state_prefix: c.state_prefix.to_string(),
            atom: c.atom.to_string(),
        }
    }
}

/// A set of prefixed formulas together with the counter that supplies fresh
/// prefix digits. Entries keep insertion order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    entries: IndexSet<PrefixedFormula>,
    next_index: u32,
}

impl Branch {
    /// The initial branch `{(1,1) root}`.
    pub fn new(root: Formula) -> Branch {
        Branch::from_entries([PrefixedFormula::new(Prefix::root(), Prefix::root(), root)])
    }

    /// A branch holding exactly `entries`. Fresh digits are drawn from a
    /// counter starting at 1, skipping any prefix already on the branch.
    pub fn from_entries<I: IntoIterator<Item = PrefixedFormula>>(entries: I) -> Branch {
        Branch { entries: entries.into_iter().collect(), next_index: 1 }
    }

    pub fn entries(&self) -> impl Iterator<Item = &PrefixedFormula> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn next_index(&self) -> u32 {
        self.next_index
    }

    pub fn contains(&self, mu: &Prefix, sigma: &Prefix, formula: &Formula) -> bool {
        // IndexSet lookups need an owned key
        self.entries
            .contains(&PrefixedFormula::new(mu.clone(), sigma.clone(), formula.clone()))
    }

    fn has_model_prefix(&self, mu: &Prefix) -> bool {
        self.entries.iter().any(|e| &e.model_prefix == mu)
    }

    fn has_state_prefix(&self, sigma: &Prefix) -> bool {
        self.entries.iter().any(|e| &e.state_prefix == sigma)
    }

    /// Every rule instance whose conclusion is not yet on the branch, in
    /// entry order.
    pub fn applicable_instances(&self) -> Vec<RuleInstance> {
        let mut out = Vec::new();
        for e in &self.entries {
            let (mu, sigma) = (&e.model_prefix, &e.state_prefix);
            let inst = |rule, to_model, to_state| RuleInstance {
                rule,
                target: e.clone(),
                to_model,
                to_state,
            };
            match &e.formula {
                Formula::And(l, r) => {
                    if !self.contains(mu, sigma, l) || !self.contains(mu, sigma, r) {
                        out.push(inst(Rule::And, None, None));
                    }
                }
                Formula::Or(l, r) => {
                    if !self.contains(mu, sigma, l) && !self.contains(mu, sigma, r) {
                        out.push(inst(Rule::Or, None, None));
                    }
                }
                Formula::Atom(_) | Formula::NegAtom(_) => {
                    for lambda in mu.proper_ancestors() {
                        if !self.contains(&lambda, sigma, &e.formula) {
                            out.push(inst(Rule::L, Some(lambda), None));
                        }
                    }
                }
                Formula::Diamond(body) => {
                    let witnessed = self.entries.iter().any(|w| {
                        &w.model_prefix == mu && sigma.is_parent_of(&w.state_prefix) && w.formula == **body
                    });
                    if !witnessed {
                        out.push(inst(Rule::Diamond, None, None));
                    }
                }
                Formula::ExistsR(body) => {
                    let witnessed = self.entries.iter().any(|w| {
                        mu.is_parent_of(&w.model_prefix) && &w.state_prefix == sigma && w.formula == **body
                    });
                    if !witnessed {
                        out.push(inst(Rule::ExistsR, None, None));
                    }
                }
                Formula::Box(body) => {
                    let mut targets: Vec<&Prefix> = Vec::new();
                    for w in &self.entries {
                        if sigma.is_parent_of(&w.state_prefix)
                            && mu.is_prefix_of(&w.model_prefix)
                            && !targets.contains(&&w.state_prefix)
                        {
                            targets.push(&w.state_prefix);
                        }
                    }
                    for child in targets {
                        if !self.contains(mu, child, body) {
                            out.push(inst(Rule::Box, None, Some(child.clone())));
                        }
                    }
                }
                Formula::ForallR(_) => {}
            }
        }
        out
    }

    fn fresh(&mut self, taken: impl Fn(&Branch, u32) -> bool) -> u32 {
        while taken(self, self.next_index) {
            self.next_index += 1;
        }
        let i = self.next_index;
        self.next_index += 1;
        i
    }

    /// Applies one instance, returning the extended branch and the entries
    /// the rule added. `choice` must be given exactly for OR instances.
    pub fn apply(&self, inst: &RuleInstance, choice: Option<Side>) -> Result<(Branch, Vec<PrefixedFormula>)> {
        match (inst.rule, choice) {
            (Rule::Or, None) => return Err(Error::ChoiceRequired),
            (Rule::Or, Some(_)) => {}
            (_, Some(_)) => return Err(Error::ChoiceForbidden),
            (_, None) => {}
        }
        if !self.applicable_instances().iter().any(|i| i == inst) {
            return Err(Error::NotApplicable);
        }
        let mut next = self.clone();
        let t = &inst.target;
        let (mu, sigma) = (&t.model_prefix, &t.state_prefix);
        let at = |m: &Prefix, s: &Prefix, f: &Formula| PrefixedFormula::new(m.clone(), s.clone(), f.clone());
        let added = match (&t.formula, inst.rule) {
            (Formula::And(l, r), Rule::And) => vec![at(mu, sigma, l), at(mu, sigma, r)],
            (Formula::Or(l, r), Rule::Or) => {
                let side = if choice == Some(Side::Left) { l } else { r };
                vec![at(mu, sigma, side)]
            }
            (f, Rule::L) => vec![at(inst.to_model.as_ref().expect("L carries a target"), sigma, f)],
            (Formula::Diamond(body), Rule::Diamond) => {
                let i = next.fresh(|b, i| b.has_state_prefix(&sigma.child(i)));
                vec![at(mu, &sigma.child(i), body)]
            }
            (Formula::ExistsR(body), Rule::ExistsR) => {
                let m = next.fresh(|b, i| b.has_model_prefix(&mu.child(i)));
                vec![at(&mu.child(m), sigma, body)]
            }
            (Formula::Box(body), Rule::Box) => {
                vec![at(mu, inst.to_state.as_ref().expect("BOX carries a target"), body)]
            }
            _ => return Err(Error::NotApplicable),
        };
        let added: Vec<PrefixedFormula> =
            added.into_iter().filter(|e| next.entries.insert(e.clone())).collect();
        Ok((next, added))
    }

    /// Some `(mu, sigma)` carrying both `p` and `!p`, checked at every
    /// prefix pair.
    pub fn has_clash(&self) -> Option<Clash> {
        self.entries.iter().find_map(|e| match &e.formula {
            Formula::Atom(a) => {
                let neg = Formula::NegAtom(a.clone());
                self.contains(&e.model_prefix, &e.state_prefix, &neg).then(|| Clash {
                    model_prefix: e.model_prefix.clone(),
                    state_prefix: e.state_prefix.clone(),
                    atom: a.clone(),
                })
            }
            _ => None,
        })
    }

    pub fn is_complete(&self) -> bool {
        self.applicable_instances().is_empty()
    }

    /// Largest `|mu|` and `|sigma|` on the branch.
    pub fn max_prefix_lengths(&self) -> (usize, usize) {
        self.entries.iter().fold((0, 0), |(m, s), e| {
            (m.max(e.model_prefix.len()), s.max(e.state_prefix.len()))
        })
    }
}

/// One trace line: `RULE (mu,sigma) formula => conclusions`.
pub fn trace_line(rule: Rule, target: &PrefixedFormula, added: &[PrefixedFormula]) -> String {
    let conclusions: Vec<String> = added.iter().map(|e| e.to_string()).collect();
    format!(
        "{rule} ({},{}) {} => {}",
        target.model_prefix,
        target.state_prefix,
        target.formula,
        conclusions.join("; ")
    )
}

/// Saturates a branch by naive rule application, taking the left disjunct
/// first and backtracking on clashes. Used as a reference search.
pub fn search(root: Formula) -> Option<Branch> {
    fn go(b: Branch) -> Option<Branch> {
        if b.has_clash().is_some() {
            return None;
        }
        let insts = b.applicable_instances();
        let Some(inst) = insts.first() else {
            return Some(b);
        };
        if inst.rule == Rule::Or {
            for side in [Side::Left, Side::Right] {
                let (next, _) = b.apply(inst, Some(side)).ok()?;
                if let Some(done) = go(next) {
                    return Some(done);
                }
            }
            None
        } else {
            let (next, _) = b.apply(inst, None).ok()?;
            go(next)
        }
    }
    go(Branch::new(root))
}
