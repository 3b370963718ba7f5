//! Arena form of a tree, used by the samplers and the satisfiability checks.

use super::{AndOrTree, Connective, Literal, Shape};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FlatNode {
    Leaf(Literal),
    Node(Connective, u32, u32),
}

/// Nodes in post-order with the root last; children precede their parent and
/// leaves appear in left-to-right order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FlatTree {
    nodes: Vec<FlatNode>,
    max_var: u32,
}

impl FlatTree {
    pub fn with_capacity(nodes: usize) -> Self {
        FlatTree {
            nodes: Vec::with_capacity(nodes),
            max_var: 0,
        }
    }

    pub fn push_leaf(&mut self, lit: Literal) -> u32 {
        self.max_var = self.max_var.max(lit.var);
        self.nodes.push(FlatNode::Leaf(lit));
        (self.nodes.len() - 1) as u32
    }

    /// `left` must be the node pushed just before `right`'s subtree started
    /// and `right` the last node pushed.
    pub fn push_node(&mut self, c: Connective, left: u32, right: u32) -> u32 {
        let me = self.nodes.len() as u32;
        assert!(left < right && right < me, "children must precede their parent");
        self.nodes.push(FlatNode::Node(c, left, right));
        me
    }

    pub fn clear(&mut self) {
        self.nodes.clear();
        self.max_var = 0;
    }

    pub(crate) fn truncate(&mut self, len: usize) {
        self.nodes.truncate(len);
    }

    pub fn nodes(&self) -> &[FlatNode] {
        &self.nodes
    }

    pub fn root(&self) -> u32 {
        (self.nodes.len() - 1) as u32
    }

    pub fn node(&self, i: u32) -> FlatNode {
        self.nodes[i as usize]
    }

    pub fn max_var(&self) -> u32 {
        self.max_var
    }

    pub fn size(&self) -> usize {
        self.nodes.len().div_ceil(2)
    }

    pub fn leaves(&self) -> impl Iterator<Item = Literal> + '_ {
        self.nodes.iter().filter_map(|n| match n {
            FlatNode::Leaf(l) => Some(*l),
            FlatNode::Node(..) => None,
        })
    }

    pub fn from_tree(tree: &AndOrTree) -> Self {
        let mut out = FlatTree::with_capacity(2 * tree.size() - 1);
        // Iterative post-order: (node, children already emitted?).
        let mut stack: Vec<(&AndOrTree, bool)> = vec![(tree, false)];
        let mut done: Vec<u32> = Vec::new();
        while let Some((t, expanded)) = stack.pop() {
            match t {
                AndOrTree::Leaf(l) => done.push(out.push_leaf(*l)),
                AndOrTree::Node(c, l, r) => {
                    if expanded {
                        let ri = done.pop().unwrap();
                        let li = done.pop().unwrap();
                        done.push(out.push_node(*c, li, ri));
                    } else {
                        stack.push((t, true));
                        stack.push((r, false));
                        stack.push((l, false));
                    }
                }
            }
        }
        out
    }

    pub fn to_tree(&self) -> AndOrTree {
        let mut built: Vec<Option<AndOrTree>> = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let t = match *n {
                FlatNode::Leaf(l) => AndOrTree::Leaf(l),
                FlatNode::Node(c, l, r) => {
                    let l = built[l as usize].take().unwrap();
                    let r = built[r as usize].take().unwrap();
                    AndOrTree::node(c, l, r)
                }
            };
            built.push(Some(t));
        }
        built.pop().flatten().expect("non-empty tree")
    }

    pub fn shape(&self) -> Shape {
        let mut built: Vec<Option<Shape>> = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let s = match *n {
                FlatNode::Leaf(_) => Shape::Leaf,
                FlatNode::Node(c, l, r) => {
                    let l = built[l as usize].take().unwrap();
                    let r = built[r as usize].take().unwrap();
                    Shape::node(c, l, r)
                }
            };
            built.push(Some(s));
        }
        built.pop().flatten().expect("non-empty tree")
    }

    /// Negated leaves, swapped connectives.
    pub fn dual(&self) -> Self {
        let nodes = self
            .nodes
            .iter()
            .map(|n| match *n {
                FlatNode::Leaf(l) => FlatNode::Leaf(l.negated()),
                FlatNode::Node(c, l, r) => FlatNode::Node(c.dual(), l, r),
            })
            .collect();
        FlatTree {
            nodes,
            max_var: self.max_var,
        }
    }

    /// Copy of the subtree rooted at `i`.
    pub fn subtree(&self, i: u32) -> Self {
        // In post-order the subtree of `i` is a contiguous block ending at `i`.
        let start = self.first_of(i);
        let shift = start;
        let mut out = FlatTree::with_capacity((i - start + 1) as usize);
        for n in &self.nodes[start as usize..=i as usize] {
            match *n {
                FlatNode::Leaf(l) => {
                    out.push_leaf(l);
                }
                FlatNode::Node(c, l, r) => {
                    out.push_node(c, l - shift, r - shift);
                }
            }
        }
        out
    }

    /// Index of the first node of the block holding the subtree of `i`.
    fn first_of(&self, mut i: u32) -> u32 {
        while let FlatNode::Node(_, l, _) = self.nodes[i as usize] {
            i = l;
        }
        i
    }

    /// `a ⊙ b` as one arena.
    pub fn join(c: Connective, a: &FlatTree, b: &FlatTree) -> Self {
        let mut out = FlatTree::with_capacity(a.nodes.len() + b.nodes.len() + 1);
        out.nodes.extend_from_slice(&a.nodes);
        let shift = a.nodes.len() as u32;
        out.nodes.extend(b.nodes.iter().map(|n| match *n {
            FlatNode::Leaf(l) => FlatNode::Leaf(l),
            FlatNode::Node(c, l, r) => FlatNode::Node(c, l + shift, r + shift),
        }));
        out.max_var = a.max_var.max(b.max_var);
        let (l, r) = (a.root(), out.root());
        out.push_node(c, l, r);
        out
    }

    /// Bit-parallel evaluation; `var_words[v - 1]` holds 64 values of `xv`.
    pub fn eval_words(&self, var_words: &[u64], scratch: &mut Vec<u64>) -> u64 {
        scratch.clear();
        scratch.reserve(self.nodes.len());
        for n in &self.nodes {
            let w = match *n {
                FlatNode::Leaf(l) => {
                    let w = var_words[(l.var - 1) as usize];
                    if l.positive {
                        w
                    } else {
                        !w
                    }
                }
                FlatNode::Node(Connective::And, l, r) => scratch[l as usize] & scratch[r as usize],
                FlatNode::Node(Connective::Or, l, r) => scratch[l as usize] | scratch[r as usize],
            };
            scratch.push(w);
        }
        *scratch.last().unwrap()
    }

    /// Evaluation with `values[v - 1]` for `xv`.
    pub fn eval(&self, values: &[bool]) -> bool {
        let words: Vec<u64> = values.iter().map(|&b| if b { !0 } else { 0 }).collect();
        self.eval_words(&words, &mut Vec::new()) & 1 == 1
    }

    /// Truth table over `x1..x6`.
    pub fn table_bits(&self) -> u64 {
        assert!(self.max_var as usize <= crate::boolfn::TruthTable::MAX_SUPPORT);
        self.eval_words(&crate::boolfn::VAR_MASKS, &mut Vec::new())
    }
}

impl From<&AndOrTree> for FlatTree {
    fn from(t: &AndOrTree) -> Self {
        FlatTree::from_tree(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_leaf_order() {
        let t = AndOrTree::parse("(or (and x1 (not x2)) (and (not x3) (or x4 x2)))").unwrap();
        let f = FlatTree::from_tree(&t);
        assert_eq!(f.to_tree(), t);
        assert_eq!(f.size(), 5);
        assert_eq!(f.max_var(), 4);
        assert_eq!(f.leaves().collect::<Vec<_>>(), t.leaves());
        assert_eq!(f.shape(), t.shape());
        assert_eq!(f.dual().to_tree(), t.dual());
        assert_eq!(f.table_bits(), t.table_bits());
    }

    #[test]
    fn subtrees_and_join() {
        let t = AndOrTree::parse("(or (and x1 (not x2)) (and (not x3) (or x4 x2)))").unwrap();
        let f = FlatTree::from_tree(&t);
        let FlatNode::Node(_, l, r) = f.node(f.root()) else {
            panic!()
        };
        assert_eq!(f.subtree(l).to_tree().to_string(), "(and x1 (not x2))");
        assert_eq!(f.subtree(r).to_tree().to_string(), "(and (not x3) (or x4 x2))");
        let joined = FlatTree::join(Connective::Or, &f.subtree(l), &f.subtree(r));
        assert_eq!(joined, f);
    }

    #[test]
    fn eval_matches_tree() {
        let t = AndOrTree::parse("(or (and x1 (not x2)) x3)").unwrap();
        let f = FlatTree::from_tree(&t);
        for j in 0..8u64 {
            let vals: Vec<bool> = (0..3).map(|b| j >> b & 1 == 1).collect();
            let a = crate::tree::Assignment::from_index(j, 3);
            assert_eq!(f.eval(&vals), t.eval(&a).unwrap());
        }
    }
}
