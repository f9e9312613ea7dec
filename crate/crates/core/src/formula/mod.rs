//! Formulas of refinement modal logic in negation-restricted form.
//!
//! Negation may only sit directly on an atom, so the grammar is
//! `p | !p | a & b | a | b | <>a | []a | Er a | Ar a`. Only the existential
//! fragment (no `Ar`) is decided by this crate; `Ar` is kept in the AST so
//! that inputs can be parsed and rejected with a precise message.

mod enumerate;
mod normalize;
mod parse;
mod table;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

pub use enumerate::{enumerate_formulas, random_formula, FormulaShape};
pub use normalize::{normalize, GeneralFormula};
pub use parse::{parse, parse_general, ParseError};
#[allow(unused_imports)]
pub(crate) use parse::{parse_syntax, Mode, Syntax};
pub use table::{FormulaId, FormulaTable, Node};

/// An atom name, compared by its text.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(Arc<str>);

impl Atom {
    /// Builds an atom, checking the `[a-z][a-z0-9_]*` shape.
    pub fn new(name: &str) -> Option<Atom> {
        let mut chars = name.chars();
        let first = chars.next()?;
        if !first.is_ascii_lowercase() {
            return None;
        }
        if !chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_') {
            return None;
        }
        Some(Atom(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Atom),
    NegAtom(Atom),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Diamond(Box<Formula>),
    Box(Box<Formula>),
    ExistsR(Box<Formula>),
    ForallR(Box<Formula>),
}

/// Nesting depths of the modal operators and of the existential quantifier.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DepthMetrics {
    pub d_diamond: usize,
    pub d_exists: usize,
}

impl Formula {
    /// Panics on a malformed name; meant for literals in code and tests.
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Atom::new(name).unwrap_or_else(|| panic!("bad atom name `{name}`")))
    }

    pub fn neg_atom(name: &str) -> Formula {
        Formula::NegAtom(Atom::new(name).unwrap_or_else(|| panic!("bad atom name `{name}`")))
    }

    pub fn and(left: Formula, right: Formula) -> Formula {
        Formula::And(Box::new(left), Box::new(right))
    }

    pub fn or(left: Formula, right: Formula) -> Formula {
        Formula::Or(Box::new(left), Box::new(right))
    }

    pub fn diamond(body: Formula) -> Formula {
        Formula::Diamond(Box::new(body))
    }

    pub fn boxed(body: Formula) -> Formula {
        Formula::Box(Box::new(body))
    }

    pub fn exists_r(body: Formula) -> Formula {
        Formula::ExistsR(Box::new(body))
    }

    pub fn forall_r(body: Formula) -> Formula {
        Formula::ForallR(Box::new(body))
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Formula::Atom(_) | Formula::NegAtom(_))
    }

    /// Direct children in left-to-right order.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) | Formula::NegAtom(_) => vec![],
            Formula::And(l, r) | Formula::Or(l, r) => vec![l, r],
            Formula::Diamond(b) | Formula::Box(b) | Formula::ExistsR(b) | Formula::ForallR(b) => {
                vec![b]
            }
        }
    }

    /// Node count of the syntax tree; literals count as one node.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Formula::size).sum::<usize>()
    }

    pub fn metrics(&self) -> DepthMetrics {
        match self {
            Formula::Atom(_) | Formula::NegAtom(_) => DepthMetrics::default(),
            Formula::And(l, r) | Formula::Or(l, r) => {
                let (a, b) = (l.metrics(), r.metrics());
                DepthMetrics {
                    d_diamond: a.d_diamond.max(b.d_diamond),
                    d_exists: a.d_exists.max(b.d_exists),
                }
            }
            Formula::Diamond(b) | Formula::Box(b) => {
                let m = b.metrics();
                DepthMetrics { d_diamond: m.d_diamond + 1, ..m }
            }
            Formula::ExistsR(b) => {
                let m = b.metrics();
                DepthMetrics { d_exists: m.d_exists + 1, ..m }
            }
            // Ar nests like Er for measuring purposes.
            Formula::ForallR(b) => {
                let m = b.metrics();
                DepthMetrics { d_exists: m.d_exists + 1, ..m }
            }
        }
    }

    pub fn in_existential_fragment(&self) -> bool {
        match self {
            Formula::ForallR(_) => false,
            other => other.children().into_iter().all(Formula::in_existential_fragment),
        }
    }

    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if out.insert(f.clone()) {
                stack.extend(f.children());
            }
        }
        out
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            match f {
                Formula::Atom(a) | Formula::NegAtom(a) => {
                    out.insert(a.clone());
                }
                other => stack.extend(other.children()),
            }
        }
        out
    }

    /// Number of `<>` occurrences, indexed by how many `<>`/`[]` enclose
    /// them. Entry `j` bounds the branching needed at depth `j` of a tree
    /// witness.
    pub fn diamonds_per_level(&self) -> Vec<usize> {
        fn walk(f: &Formula, level: usize, out: &mut Vec<usize>) {
            if out.len() <= level {
                out.resize(level + 1, 0);
            }
            match f {
                Formula::Atom(_) | Formula::NegAtom(_) => {}
                Formula::And(l, r) | Formula::Or(l, r) => {
                    walk(l, level, out);
                    walk(r, level, out);
                }
                Formula::Diamond(b) => {
                    out[level] += 1;
                    walk(b, level + 1, out);
                }
                Formula::Box(b) => walk(b, level + 1, out),
                Formula::ExistsR(b) | Formula::ForallR(b) => walk(b, level, out),
            }
        }
        let mut out = Vec::new();
        walk(self, 0, &mut out);
        out
    }

    pub fn diamond_count(&self) -> usize {
        self.diamonds_per_level().iter().sum()
    }

    /// Canonical text form; `parse(&f.render()) == Ok(f)`.
    pub fn render(&self) -> String {
        self.to_string()
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::And(..) | Formula::Or(..) => write!(f, "({self})"),
            _ => write!(f, "{self}"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::NegAtom(a) => write!(f, "!{a}"),
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.fmt_operand(f)?;
                f.write_str(if matches!(self, Formula::And(..)) { " & " } else { " | " })?;
                r.fmt_operand(f)
            }
            Formula::Diamond(b) => {
                f.write_str("<>")?;
                b.fmt_operand(f)
            }
            Formula::Box(b) => {
                f.write_str("[]")?;
                b.fmt_operand(f)
            }
            Formula::ExistsR(b) => {
                f.write_str("Er ")?;
                b.fmt_operand(f)
            }
            Formula::ForallR(b) => {
                f.write_str("Ar ")?;
                b.fmt_operand(f)
            }
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn render_examples() {
        assert_eq!(Formula::atom("p").render(), "p");
        let b = Formula::boxed(Formula::and(Formula::atom("p"), Formula::neg_atom("q")));
        assert_eq!(b.render(), "[](p & !q)");
        assert_eq!(Formula::exists_r(Formula::atom("p")).render(), "Er p");
    }

    #[test]
    fn render_keeps_association() {
        assert_eq!(f("(p & q) & r").render(), "(p & q) & r");
        assert_eq!(f("p & (q & r)").render(), "p & (q & r)");
        assert_eq!(f("p | q & r").render(), "p | (q & r)");
        assert_eq!(f("Er Er <>[]p").render(), "Er Er <>[]p");
    }

    #[test]
    fn metrics_examples() {
        assert_eq!(f("p").metrics(), DepthMetrics { d_diamond: 0, d_exists: 0 });
        assert_eq!(f("Er <> Er p").metrics(), DepthMetrics { d_diamond: 1, d_exists: 2 });
        assert_eq!(f("<>p & [][]q").metrics(), DepthMetrics { d_diamond: 2, d_exists: 0 });
    }

    #[test]
    fn fragment_membership() {
        assert!(f("Er <> p").in_existential_fragment());
        assert!(!f("Ar p").in_existential_fragment());
        assert!(f("p & !p").in_existential_fragment());
        assert!(!f("<>(q | Ar p)").in_existential_fragment());
    }

    #[test]
    fn subformula_sets() {
        assert_eq!(f("p").subformulas(), BTreeSet::from([f("p")]));
        assert_eq!(f("<>p").subformulas(), BTreeSet::from([f("<>p"), f("p")]));
        assert_eq!(f("p & p").subformulas(), BTreeSet::from([f("p & p"), f("p")]));
    }

    #[test]
    fn diamonds_by_level() {
        assert_eq!(f("p").diamonds_per_level(), vec![0]);
        assert_eq!(f("<><>p & <>q").diamonds_per_level(), vec![2, 1, 0]);
        assert_eq!(f("[]Er(<>p & <>q)").diamonds_per_level(), vec![0, 2, 0]);
        assert_eq!(f("[]Er(<>p & <>q)").diamond_count(), 2);
    }

    #[test]
    fn atom_names() {
        assert!(Atom::new("p_1").is_some());
        assert!(Atom::new("").is_none());
        assert!(Atom::new("1p").is_none());
        assert!(Atom::new("P").is_none());
    }
}
