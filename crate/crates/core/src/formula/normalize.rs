use super::{Atom, Formula};
use crate::error::{Error, Result};

/// Formula with negation allowed on any subformula.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GeneralFormula {
    Atom(Atom),
    Not(Box<GeneralFormula>),
    And(Box<GeneralFormula>, Box<GeneralFormula>),
    Or(Box<GeneralFormula>, Box<GeneralFormula>),
    Diamond(Box<GeneralFormula>),
    Box(Box<GeneralFormula>),
    ExistsR(Box<GeneralFormula>),
    ForallR(Box<GeneralFormula>),
}

/// Pushes negations down to the atoms using the usual dualities.
///
/// With `existential_only` set, a result containing `Ar` (whether written
/// by the caller or produced by negating an `Er`) is refused.
pub fn normalize(g: &GeneralFormula, existential_only: bool) -> Result<Formula> {
    let out = push(g, false);
    if existential_only && !out.in_existential_fragment() {
        return Err(Error::FragmentViolation(format!(
            "normal form `{out}` uses the universal refinement quantifier"
        )));
    }
    Ok(out)
}

fn push(g: &GeneralFormula, negated: bool) -> Formula {
    use GeneralFormula as G;
    let bin = |l: &G, r: &G, and: bool| {
        let (l, r) = (Box::new(push(l, negated)), Box::new(push(r, negated)));
        if and != negated {
            Formula::And(l, r)
        } else {
            Formula::Or(l, r)
        }
    };
    match g {
        G::Atom(a) if negated => Formula::NegAtom(a.clone()),
        G::Atom(a) => Formula::Atom(a.clone()),
        G::Not(inner) => push(inner, !negated),
        G::And(l, r) => bin(l, r, true),
        G::Or(l, r) => bin(l, r, false),
        G::Diamond(b) if negated => Formula::Box(Box::new(push(b, true))),
        G::Diamond(b) => Formula::Diamond(Box::new(push(b, false))),
        G::Box(b) if negated => Formula::Diamond(Box::new(push(b, true))),
        G::Box(b) => Formula::Box(Box::new(push(b, false))),
        G::ExistsR(b) if negated => Formula::ForallR(Box::new(push(b, true))),
        G::ExistsR(b) => Formula::ExistsR(Box::new(push(b, false))),
        G::ForallR(b) if negated => Formula::ExistsR(Box::new(push(b, true))),
        G::ForallR(b) => Formula::ForallR(Box::new(push(b, false))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, parse_general};

    fn norm(s: &str) -> Result<Formula> {
        normalize(&parse_general(s).unwrap(), true)
    }

    #[test]
    fn de_morgan_and_duality() {
        assert_eq!(norm("!(p & q)").unwrap(), parse("!p | !q").unwrap());
        assert_eq!(norm("!<>p").unwrap(), parse("[]!p").unwrap());
        assert_eq!(norm("!![]!(p | !q)").unwrap(), parse("[](!p & q)").unwrap());
    }

    #[test]
    fn negated_existential_leaves_fragment() {
        assert!(matches!(norm("!(Er p)"), Err(Error::FragmentViolation(_))));
        let out = normalize(&parse_general("!(Er p)").unwrap(), false).unwrap();
        assert_eq!(out, parse("Ar !p").unwrap());
        assert_eq!(norm("!Ar !p").unwrap(), parse("Er p").unwrap());
    }
}
