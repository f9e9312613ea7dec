use std::collections::HashMap;

use super::{Atom, Formula};

/// Index of a subformula inside a [`FormulaTable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormulaId(pub u32);

/// One interned subformula with its children given by id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Atom(Atom),
    NegAtom(Atom),
    And(FormulaId, FormulaId),
    Or(FormulaId, FormulaId),
    Diamond(FormulaId),
    Box(FormulaId),
    ExistsR(FormulaId),
    ForallR(FormulaId),
}

impl Node {
    pub fn is_literal(&self) -> bool {
        matches!(self, Node::Atom(_) | Node::NegAtom(_))
    }

    /// The atom and polarity of a literal.
    pub fn literal(&self) -> Option<(&Atom, bool)> {
        match self {
            Node::Atom(a) => Some((a, true)),
            Node::NegAtom(a) => Some((a, false)),
            _ => None,
        }
    }
}

/// The distinct subformulas of one root formula, interned so that search
/// procedures can work with small copyable ids. Children get smaller ids
/// than their parents.
#[derive(Clone, Debug)]
pub struct FormulaTable {
    nodes: Vec<Node>,
    formulas: Vec<Formula>,
    index: HashMap<Formula, FormulaId>,
    root: FormulaId,
}

impl FormulaTable {
    pub fn new(root: &Formula) -> FormulaTable {
        let mut table = FormulaTable {
            nodes: Vec::new(),
            formulas: Vec::new(),
            index: HashMap::new(),
            root: FormulaId(0),
        };
        table.root = table.intern(root);
        table
    }

    /// Adds `f` and its subformulas, returning the id of `f`.
    pub fn intern(&mut self, f: &Formula) -> FormulaId {
        if let Some(&id) = self.index.get(f) {
            return id;
        }
        let node = match f {
            Formula::Atom(a) => Node::Atom(a.clone()),
            Formula::NegAtom(a) => Node::NegAtom(a.clone()),
            Formula::And(l, r) => Node::And(self.intern(l), self.intern(r)),
            Formula::Or(l, r) => Node::Or(self.intern(l), self.intern(r)),
            Formula::Diamond(b) => Node::Diamond(self.intern(b)),
            Formula::Box(b) => Node::Box(self.intern(b)),
            Formula::ExistsR(b) => Node::ExistsR(self.intern(b)),
            Formula::ForallR(b) => Node::ForallR(self.intern(b)),
        };
        let id = FormulaId(self.nodes.len() as u32);
        self.nodes.push(node);
        self.formulas.push(f.clone());
        self.index.insert(f.clone(), id);
        id
    }

    pub fn root(&self) -> FormulaId {
        self.root
    }

    pub fn node(&self, id: FormulaId) -> &Node {
        &self.nodes[id.0 as usize]
    }

    pub fn formula(&self, id: FormulaId) -> &Formula {
        &self.formulas[id.0 as usize]
    }

    pub fn get(&self, f: &Formula) -> Option<FormulaId> {
        self.index.get(f).copied()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}
