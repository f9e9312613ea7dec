//! K satisfiability of variable-free formulas as a model-checking
//! question: `psi` is satisfiable iff the one-state loop satisfies
//! `Er psi`. The formula language has no constants, so test formulas use
//! `T`/`F` and are lowered to `z | !z` and `z & !z`.

use std::fmt;

use crate::error::{Error, Result};
use crate::formula::{parse_syntax, Formula, Mode, Syntax};
use crate::kripke::{KripkeModel, PointedModel};

/// A K formula built from constants only.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ConstFormula {
    Top,
    Bottom,
    And(Box<ConstFormula>, Box<ConstFormula>),
    Or(Box<ConstFormula>, Box<ConstFormula>),
    Diamond(Box<ConstFormula>),
    Box(Box<ConstFormula>),
}

impl ConstFormula {
    /// Parses `T`, `F`, `&`, `|`, `<>`, `[]` and `!`; negation is pushed to
    /// the constants.
    pub fn parse(text: &str) -> Result<ConstFormula> {
        fn lower(s: Syntax, negate: bool) -> Result<ConstFormula> {
            let bin = |l: Syntax, r: Syntax| -> Result<(Box<ConstFormula>, Box<ConstFormula>)> {
                Ok((Box::new(lower(l, negate)?), Box::new(lower(r, negate)?)))
            };
            Ok(match (s, negate) {
                (Syntax::Top, false) | (Syntax::Bottom, true) => ConstFormula::Top,
                (Syntax::Top, true) | (Syntax::Bottom, false) => ConstFormula::Bottom,
                (Syntax::Not(inner), n) => lower(*inner, !n)?,
                (Syntax::And(l, r), false) | (Syntax::Or(l, r), true) => {
                    let (l, r) = bin(*l, *r)?;
                    ConstFormula::And(l, r)
                }
                (Syntax::Or(l, r), false) | (Syntax::And(l, r), true) => {
                    let (l, r) = bin(*l, *r)?;
                    ConstFormula::Or(l, r)
                }
                (Syntax::Diamond(b), false) | (Syntax::Box(b), true) => {
                    ConstFormula::Diamond(Box::new(lower(*b, negate)?))
                }
                (Syntax::Box(b), false) | (Syntax::Diamond(b), true) => ConstFormula::Box(Box::new(lower(*b, negate)?)),
                (Syntax::Atom(a), _) => return Err(Error::InvalidInput(format!("atom `{a}` in a constant formula"))),
                (Syntax::ExistsR(_) | Syntax::ForallR(_), _) => {
                    return Err(Error::InvalidInput("quantifier in a constant formula".into()))
                }
            })
        }
        lower(parse_syntax(text, Mode::Constants)?, false)
    }

    pub fn size(&self) -> usize {
        match self {
            ConstFormula::Top | ConstFormula::Bottom => 1,
            ConstFormula::And(l, r) | ConstFormula::Or(l, r) => 1 + l.size() + r.size(),
            ConstFormula::Diamond(b) | ConstFormula::Box(b) => 1 + b.size(),
        }
    }

    /// Replaces `T` by `z | !z` and `F` by `z & !z`.
    pub fn lower(&self) -> Formula {
        match self {
            ConstFormula::Top => Formula::or(Formula::atom("z"), Formula::neg_atom("z")),
            ConstFormula::Bottom => Formula::and(Formula::atom("z"), Formula::neg_atom("z")),
            ConstFormula::And(l, r) => Formula::and(l.lower(), r.lower()),
            ConstFormula::Or(l, r) => Formula::or(l.lower(), r.lower()),
            ConstFormula::Diamond(b) => Formula::diamond(b.lower()),
            ConstFormula::Box(b) => Formula::boxed(b.lower()),
        }
    }
}

impl fmt::Display for ConstFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let operand = |f: &mut fmt::Formatter<'_>, c: &ConstFormula| match c {
            ConstFormula::And(..) | ConstFormula::Or(..) => write!(f, "({c})"),
            _ => write!(f, "{c}"),
        };
        match self {
            ConstFormula::Top => f.write_str("T"),
            ConstFormula::Bottom => f.write_str("F"),
            ConstFormula::And(l, r) | ConstFormula::Or(l, r) => {
                operand(f, l)?;
                f.write_str(if matches!(self, ConstFormula::And(..)) { " & " } else { " | " })?;
                operand(f, r)
            }
            ConstFormula::Diamond(b) => {
                f.write_str("<>")?;
                operand(f, b)
            }
            ConstFormula::Box(b) => {
                f.write_str("[]")?;
                operand(f, b)
            }
        }
    }
}

/// The one-state model with a self-loop and no true atoms, and `Er psi`.
pub fn reduce_k_sat(psi: &ConstFormula) -> (PointedModel, Formula) {
    let model = KripkeModel::new(&["s"], &[("s", "s")], &[]).expect("fixed model is well formed");
    (PointedModel { model, point: 0 }, Formula::exists_r(psi.lower()))
}

/// The reduction for an ordinary formula. Every such formula has atoms, so
/// this always reports `InvalidInput`; constant formulas go through
/// [`reduce_k_sat`].
pub fn reduce_k_sat_formula(psi: &Formula) -> Result<(PointedModel, Formula)> {
    if let Some(a) = psi.atoms().into_iter().next() {
        return Err(Error::InvalidInput(format!("`{psi}` contains atom `{a}`")));
    }
    Err(Error::InvalidInput(format!("`{psi}` has no constant form")))
}

/// Every constant formula of size `1..=max_size`, smallest first.
pub fn enumerate_constant_formulas(max_size: usize) -> Vec<ConstFormula> {
    let mut by_size: Vec<Vec<ConstFormula>> = vec![Vec::new()];
    for n in 1..=max_size {
        let mut level = Vec::new();
        if n == 1 {
            level.extend([ConstFormula::Top, ConstFormula::Bottom]);
        } else {
            for b in &by_size[n - 1] {
                level.push(ConstFormula::Diamond(Box::new(b.clone())));
                level.push(ConstFormula::Box(Box::new(b.clone())));
            }
            for left in 1..n.saturating_sub(1) {
                let right = n - 1 - left;
                for l in &by_size[left] {
                    for r in &by_size[right] {
                        level.push(ConstFormula::And(Box::new(l.clone()), Box::new(r.clone())));
                        level.push(ConstFormula::Or(Box::new(l.clone()), Box::new(r.clone())));
                    }
                }
            }
        }
        by_size.push(level);
    }
    by_size.into_iter().flatten().collect()
}
