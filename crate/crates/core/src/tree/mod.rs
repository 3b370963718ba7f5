//! And/Or trees: binary plane trees with connectives on internal nodes and
//! literals on leaves.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::boolfn::TruthTable;
use crate::error::{domain, Error, Result};

pub mod enumerate;
pub mod flat;
pub mod program;
pub mod solve;
mod text;

pub use enumerate::{
    count_labellings_g, enumerate_shapes, enumerate_trees_g, for_each_tree_g, shape_count, shapes, unrank_shape,
};
pub use flat::FlatTree;
pub use program::ShapeProgram;

/// A variable or its negation. Variables are numbered from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub var: u32,
    pub positive: bool,
}

impl Literal {
    pub fn new(var: u32, positive: bool) -> Result<Self> {
        if var == 0 {
            return domain("variable indices start at 1");
        }
        Ok(Literal { var, positive })
    }

    pub fn pos(var: u32) -> Self {
        assert!(var >= 1, "variable indices start at 1");
        Literal { var, positive: true }
    }

    pub fn neg(var: u32) -> Self {
        assert!(var >= 1, "variable indices start at 1");
        Literal { var, positive: false }
    }

    /// Position in the order `x1 < !x1 < x2 < !x2 < ...`, from 0.
    pub fn index(self) -> u32 {
        2 * (self.var - 1) + u32::from(!self.positive)
    }

    pub fn from_index(index: u32) -> Self {
        Literal {
            var: index / 2 + 1,
            positive: index % 2 == 0,
        }
    }

    pub fn negated(self) -> Self {
        Literal {
            positive: !self.positive,
            ..self
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "x{}", self.var)
        } else {
            write!(f, "(not x{})", self.var)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Connective {
    And,
    Or,
}

impl Connective {
    pub fn dual(self) -> Self {
        match self {
            Connective::And => Connective::Or,
            Connective::Or => Connective::And,
        }
    }

    pub fn apply(self, a: bool, b: bool) -> bool {
        match self {
            Connective::And => a && b,
            Connective::Or => a || b,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Connective::And => "and",
            Connective::Or => "or",
        }
    }
}

/// Values for a finite set of variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    values: BTreeMap<u32, bool>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// The assignment encoded by `index` on `m` variables: bit `j` sets `x(j+1)`.
    pub fn from_index(index: u64, m: u32) -> Self {
        let values = (0..m).map(|j| (j + 1, index >> j & 1 == 1)).collect();
        Assignment { values }
    }

    pub fn set(&mut self, var: u32, value: bool) -> &mut Self {
        self.values.insert(var, value);
        self
    }

    pub fn with(mut self, var: u32, value: bool) -> Self {
        self.values.insert(var, value);
        self
    }

    pub fn get(&self, var: u32) -> Option<bool> {
        self.values.get(&var).copied()
    }
}

impl FromIterator<(u32, bool)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (u32, bool)>>(iter: I) -> Self {
        Assignment {
            values: iter.into_iter().collect(),
        }
    }
}

/// A tree with its leaf labels erased; the connectives stay.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Shape {
    Leaf,
    Node(Connective, Box<Shape>, Box<Shape>),
}

impl Shape {
    pub fn node(c: Connective, left: Shape, right: Shape) -> Self {
        Shape::Node(c, Box::new(left), Box::new(right))
    }

    pub fn size(&self) -> usize {
        match self {
            Shape::Leaf => 1,
            Shape::Node(_, l, r) => l.size() + r.size(),
        }
    }

    /// Attaches `labels` to the leaves in left-to-right order.
    pub fn label<I: IntoIterator<Item = Literal>>(&self, labels: I) -> Result<AndOrTree> {
        let mut it = labels.into_iter();
        let tree = self.label_from(&mut it)?;
        if it.next().is_some() {
            return domain("more labels than leaves");
        }
        Ok(tree)
    }

    fn label_from(&self, it: &mut impl Iterator<Item = Literal>) -> Result<AndOrTree> {
        Ok(match self {
            Shape::Leaf => match it.next() {
                Some(lit) => AndOrTree::Leaf(lit),
                None => return domain("fewer labels than leaves"),
            },
            Shape::Node(c, l, r) => {
                let l = l.label_from(it)?;
                let r = r.label_from(it)?;
                AndOrTree::node(*c, l, r)
            }
        })
    }

    /// The shape with every connective swapped.
    pub fn dual(&self) -> Self {
        match self {
            Shape::Leaf => Shape::Leaf,
            Shape::Node(c, l, r) => Shape::node(c.dual(), l.dual(), r.dual()),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        text::parse_shape(text)
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Leaf => f.write_str("."),
            Shape::Node(c, l, r) => write!(f, "({} {} {})", c.keyword(), l, r),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AndOrTree {
    Leaf(Literal),
    Node(Connective, Box<AndOrTree>, Box<AndOrTree>),
}

impl AndOrTree {
    pub fn leaf(lit: Literal) -> Self {
        AndOrTree::Leaf(lit)
    }

    pub fn var(var: u32) -> Self {
        AndOrTree::Leaf(Literal::pos(var))
    }

    pub fn not_var(var: u32) -> Self {
        AndOrTree::Leaf(Literal::neg(var))
    }

    pub fn node(c: Connective, left: AndOrTree, right: AndOrTree) -> Self {
        AndOrTree::Node(c, Box::new(left), Box::new(right))
    }

    pub fn and(left: AndOrTree, right: AndOrTree) -> Self {
        Self::node(Connective::And, left, right)
    }

    pub fn or(left: AndOrTree, right: AndOrTree) -> Self {
        Self::node(Connective::Or, left, right)
    }

    pub fn parse(text: &str) -> Result<Self> {
        text::parse_tree(text)
    }

    /// Number of leaves.
    pub fn size(&self) -> usize {
        match self {
            AndOrTree::Leaf(_) => 1,
            AndOrTree::Node(_, l, r) => l.size() + r.size(),
        }
    }

    pub fn height(&self) -> usize {
        match self {
            AndOrTree::Leaf(_) => 0,
            AndOrTree::Node(_, l, r) => 1 + l.height().max(r.height()),
        }
    }

    /// Leaf literals in left-to-right order.
    pub fn leaves(&self) -> Vec<Literal> {
        let mut out = Vec::with_capacity(self.size());
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<Literal>) {
        match self {
            AndOrTree::Leaf(l) => out.push(*l),
            AndOrTree::Node(_, l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    pub fn shape(&self) -> Shape {
        match self {
            AndOrTree::Leaf(_) => Shape::Leaf,
            AndOrTree::Node(c, l, r) => Shape::node(*c, l.shape(), r.shape()),
        }
    }

    pub fn variables(&self) -> BTreeSet<u32> {
        self.leaves().into_iter().map(|l| l.var).collect()
    }

    pub fn max_var(&self) -> u32 {
        self.leaves().into_iter().map(|l| l.var).max().unwrap_or(0)
    }

    pub fn eval(&self, a: &Assignment) -> Result<bool> {
        match self {
            AndOrTree::Leaf(l) => match a.get(l.var) {
                Some(v) => Ok(v == l.positive),
                None => Err(Error::MissingVariable(l.var)),
            },
            AndOrTree::Node(c, l, r) => Ok(c.apply(l.eval(a)?, r.eval(a)?)),
        }
    }

    /// Truth table on the variables `x1..xm`.
    pub fn truth_table(&self, m: u32) -> Result<TruthTable> {
        if m == 0 {
            return domain("support must be at least 1");
        }
        if m as usize > TruthTable::MAX_SUPPORT {
            return Err(Error::SupportTooLarge {
                support: m as usize,
                max: TruthTable::MAX_SUPPORT,
            });
        }
        let max = self.max_var();
        if max > m {
            return domain(format!("x{max} lies outside the support of {m} variables"));
        }
        Ok(TruthTable::from_bits(m, self.table_bits()))
    }

    /// Bit-parallel evaluation over the 64 assignments of `x1..x6`.
    pub(crate) fn table_bits(&self) -> u64 {
        match self {
            AndOrTree::Leaf(l) => {
                let w = crate::boolfn::VAR_MASKS[(l.var - 1) as usize];
                if l.positive {
                    w
                } else {
                    !w
                }
            }
            AndOrTree::Node(Connective::And, l, r) => l.table_bits() & r.table_bits(),
            AndOrTree::Node(Connective::Or, l, r) => l.table_bits() | r.table_bits(),
        }
    }

    /// Negates every leaf and swaps every connective; the result computes
    /// the negation of the original function.
    pub fn dual(&self) -> Self {
        match self {
            AndOrTree::Leaf(l) => AndOrTree::Leaf(l.negated()),
            AndOrTree::Node(c, l, r) => AndOrTree::node(c.dual(), l.dual(), r.dual()),
        }
    }

    /// Applies `f` to every leaf literal.
    pub fn map_leaves(&self, f: &mut impl FnMut(Literal) -> Literal) -> Self {
        match self {
            AndOrTree::Leaf(l) => AndOrTree::Leaf(f(*l)),
            AndOrTree::Node(c, l, r) => {
                let l = l.map_leaves(f);
                let r = r.map_leaves(f);
                AndOrTree::node(*c, l, r)
            }
        }
    }

    /// Subtrees in pre-order together with their leaf offset.
    pub fn subtrees(&self) -> Vec<(usize, &AndOrTree)> {
        let mut out = Vec::new();
        let mut stack = vec![(0usize, self)];
        while let Some((offset, t)) = stack.pop() {
            out.push((offset, t));
            if let AndOrTree::Node(_, l, r) = t {
                stack.push((offset + l.size(), r));
                stack.push((offset, l));
            }
        }
        out
    }

    pub fn is_tautology(&self) -> bool {
        !FlatTree::from_tree(&self.dual()).is_satisfiable()
    }

    pub fn is_satisfiable(&self) -> bool {
        FlatTree::from_tree(self).is_satisfiable()
    }
}

impl fmt::Display for AndOrTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AndOrTree::Leaf(l) => write!(f, "{l}"),
            AndOrTree::Node(c, l, r) => write!(f, "({} {} {})", c.keyword(), l, r),
        }
    }
}

impl std::str::FromStr for AndOrTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}
