//! Satisfiability, tautology and dependency checks on And/Or trees.
//!
//! A tree is in negation normal form, so its negation is its dual and every
//! question reduces to satisfiability of some And/Or tree. The search
//! propagates the literals hanging from the root by AND-only paths, splits
//! AND nodes whose children share no variable, and otherwise branches on the
//! most frequent shared variable.

use std::collections::HashMap;

use super::flat::{FlatNode, FlatTree};
use super::{Connective, Literal};

/// Result of substituting constants into a tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduced {
    Const(bool),
    Tree(FlatTree),
}

impl FlatTree {
    /// Substitutes `value(v)` for every assigned variable and simplifies.
    pub fn reduce(&self, value: impl Fn(u32) -> Option<bool>) -> Reduced {
        enum Slot {
            Const(bool),
            At(u32),
        }
        let mut out = FlatTree::with_capacity(self.nodes().len());
        let mut slots: Vec<Slot> = Vec::with_capacity(self.nodes().len());
        // Where each node's block starts in `out`; a node that folds to a
        // constant drops its block so `out` stays a post-order arena.
        let mut starts: Vec<usize> = Vec::with_capacity(self.nodes().len());
        for n in self.nodes() {
            let (slot, start) = match *n {
                FlatNode::Leaf(l) => {
                    let start = out.nodes().len();
                    match value(l.var) {
                        Some(v) => (Slot::Const(v == l.positive), start),
                        None => (Slot::At(out.push_leaf(l)), start),
                    }
                }
                FlatNode::Node(c, l, r) => {
                    let start = starts[l as usize];
                    let absorbing = c == Connective::Or;
                    let slot = match (&slots[l as usize], &slots[r as usize]) {
                        (Slot::Const(a), _) if *a == absorbing => Slot::Const(absorbing),
                        (_, Slot::Const(b)) if *b == absorbing => Slot::Const(absorbing),
                        (Slot::Const(_), Slot::Const(_)) => Slot::Const(!absorbing),
                        (Slot::Const(_), Slot::At(i)) | (Slot::At(i), Slot::Const(_)) => Slot::At(*i),
                        (Slot::At(a), Slot::At(b)) => Slot::At(out.push_node(c, *a, *b)),
                    };
                    if let Slot::Const(_) = slot {
                        out.truncate(start);
                    }
                    (slot, start)
                }
            };
            slots.push(slot);
            starts.push(start);
        }
        match slots.pop().expect("non-empty tree") {
            Slot::Const(b) => Reduced::Const(b),
            Slot::At(_) => Reduced::Tree(out),
        }
    }

    pub fn is_satisfiable(&self) -> bool {
        if self.random_probe() != 0 {
            return true;
        }
        solve(self)
    }

    pub fn is_tautology(&self) -> bool {
        !self.dual().is_satisfiable()
    }

    /// Whether the function depends on `var`.
    pub fn depends_on(&self, var: u32) -> bool {
        let lo = self.reduce(|v| (v == var).then_some(false));
        let hi = self.reduce(|v| (v == var).then_some(true));
        differ(&lo, &hi)
    }

    /// Checks that the tree computes the function `f` of the variables
    /// `support` (bit `j` of the index of `f` gives `support[j]`), i.e. that
    /// every restriction to an assignment of `support` is the constant `f`
    /// prescribes.
    pub fn computes(&self, support: &[u32], f: impl Fn(u64) -> bool) -> bool {
        assert!(support.len() < 64);
        for a in 0..1u64 << support.len() {
            let reduced = self.reduce(|v| support.iter().position(|&s| s == v).map(|j| a >> j & 1 == 1));
            let ok = match reduced {
                Reduced::Const(b) => b == f(a),
                Reduced::Tree(t) => {
                    if f(a) {
                        t.is_tautology()
                    } else {
                        !t.is_satisfiable()
                    }
                }
            };
            if !ok {
                return false;
            }
        }
        true
    }

    /// Essential variables in increasing order, or `None` as soon as more
    /// than `limit` are found.
    pub fn essential_variables(&self, limit: usize) -> Option<Vec<u32>> {
        let mut vars: Vec<u32> = self.leaves().map(|l| l.var).collect();
        vars.sort_unstable();
        vars.dedup();
        // Cheap witnesses first: flip one variable on 64 random assignments.
        let mut found = Vec::new();
        let mut undecided = Vec::new();
        let words = probe_words(self.max_var());
        let mut scratch = Vec::new();
        let base = self.eval_words(&words, &mut scratch);
        let mut flipped = words.clone();
        for &v in &vars {
            let i = (v - 1) as usize;
            flipped[i] = !flipped[i];
            let other = self.eval_words(&flipped, &mut scratch);
            flipped[i] = words[i];
            if other != base {
                found.push(v);
                if found.len() > limit {
                    return None;
                }
            } else {
                undecided.push(v);
            }
        }
        for v in undecided {
            if self.depends_on(v) {
                found.push(v);
                if found.len() > limit {
                    return None;
                }
            }
        }
        found.sort_unstable();
        Some(found)
    }

    /// Evaluation on 64 fixed pseudo-random assignments.
    fn random_probe(&self) -> u64 {
        self.eval_words(&probe_words(self.max_var()), &mut Vec::new())
    }
}

pub(crate) fn probe_words(max_var: u32) -> Vec<u64> {
    // splitmix64 stream; any fixed stream works, the probe only finds witnesses.
    let mut state = 0x9E37_79B9_7F4A_7C15u64;
    (0..max_var)
        .map(|_| {
            state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^ (z >> 31)
        })
        .collect()
}

fn differ(a: &Reduced, b: &Reduced) -> bool {
    match (a, b) {
        (Reduced::Const(x), Reduced::Const(y)) => x != y,
        (Reduced::Const(x), Reduced::Tree(t)) | (Reduced::Tree(t), Reduced::Const(x)) => {
            if *x {
                !t.is_tautology()
            } else {
                t.is_satisfiable()
            }
        }
        (Reduced::Tree(s), Reduced::Tree(t)) => {
            FlatTree::join(Connective::And, s, &t.dual()).is_satisfiable()
                || FlatTree::join(Connective::And, &s.dual(), t).is_satisfiable()
        }
    }
}

/// Literals joined to the root by AND-only paths.
fn forced_literals(t: &FlatTree) -> Vec<Literal> {
    let mut out = Vec::new();
    let mut stack = vec![t.root()];
    while let Some(i) = stack.pop() {
        match t.node(i) {
            FlatNode::Leaf(l) => out.push(l),
            FlatNode::Node(Connective::And, l, r) => {
                stack.push(l);
                stack.push(r);
            }
            FlatNode::Node(Connective::Or, ..) => {}
        }
    }
    out
}

fn solve(t: &FlatTree) -> bool {
    let forced = forced_literals(t);
    if !forced.is_empty() {
        let mut pinned: HashMap<u32, bool> = HashMap::with_capacity(forced.len());
        for l in &forced {
            if let Some(&p) = pinned.get(&l.var) {
                if p != l.positive {
                    return false;
                }
            }
            pinned.insert(l.var, l.positive);
        }
        return match t.reduce(|v| pinned.get(&v).copied()) {
            Reduced::Const(b) => b,
            Reduced::Tree(rest) => solve(&rest),
        };
    }
    match t.node(t.root()) {
        FlatNode::Leaf(_) => true,
        FlatNode::Node(Connective::Or, l, r) => solve(&t.subtree(l)) || solve(&t.subtree(r)),
        FlatNode::Node(Connective::And, l, r) => {
            let (left, right) = (t.subtree(l), t.subtree(r));
            match branch_variable(&left, &right) {
                None => solve(&left) && solve(&right),
                Some(v) => [false, true]
                    .into_iter()
                    .any(|b| match t.reduce(|u| (u == v).then_some(b)) {
                        Reduced::Const(c) => c,
                        Reduced::Tree(rest) => solve(&rest),
                    }),
            }
        }
    }
}

/// The shared variable with the most occurrences, if any.
fn branch_variable(a: &FlatTree, b: &FlatTree) -> Option<u32> {
    let mut counts: HashMap<u32, (u32, u32)> = HashMap::new();
    for l in a.leaves() {
        counts.entry(l.var).or_default().0 += 1;
    }
    for l in b.leaves() {
        if let Some(c) = counts.get_mut(&l.var) {
            c.1 += 1;
        }
    }
    counts
        .into_iter()
        .filter(|(_, (x, y))| *y > 0 && *x > 0)
        .max_by_key(|&(v, (x, y))| (x + y, std::cmp::Reverse(v)))
        .map(|(v, _)| v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::enumerate::for_each_tree_g;
    use crate::tree::AndOrTree;

    fn flat(s: &str) -> FlatTree {
        FlatTree::from_tree(&AndOrTree::parse(s).unwrap())
    }

    #[test]
    fn reduce_examples() {
        let t = flat("(or (and x1 (not x2)) x3)");
        assert_eq!(t.reduce(|v| (v == 3).then_some(true)), Reduced::Const(true));
        match t.reduce(|v| (v == 3).then_some(false)) {
            Reduced::Tree(r) => assert_eq!(r.to_tree().to_string(), "(and x1 (not x2))"),
            other => panic!("{other:?}"),
        }
        match t.reduce(|v| (v == 1).then_some(true)) {
            Reduced::Tree(r) => assert_eq!(r.to_tree().to_string(), "(or (not x2) x3)"),
            other => panic!("{other:?}"),
        }
        assert_eq!(t.reduce(|_| Some(false)), Reduced::Const(false));
    }

    #[test]
    fn solver_agrees_with_tables_exhaustively() {
        for n in 1..=5 {
            for_each_tree_g(n, 3, u64::MAX, |v| {
                let table = v.table() & 0xFF;
                let f = FlatTree::from_tree(&v.tree());
                assert_eq!(solve(&f), table != 0, "{}", v.tree());
                assert_eq!(f.is_tautology(), table == 0xFF, "{}", v.tree());
            })
            .unwrap();
        }
    }

    #[test]
    fn dependencies_match_tables() {
        for_each_tree_g(4, 3, u64::MAX, |v| {
            let tt = crate::boolfn::TruthTable::from_bits(3, v.table());
            let f = FlatTree::from_tree(&v.tree());
            let expected: Vec<u32> = tt.essential_variables().into_iter().collect();
            assert_eq!(f.essential_variables(3), Some(expected.clone()));
            if expected.len() > 1 {
                assert_eq!(f.essential_variables(expected.len() - 1), None);
            }
            for var in 1..=3 {
                assert_eq!(f.depends_on(var), expected.contains(&var));
            }
        })
        .unwrap();
    }

    #[test]
    fn computes_examples() {
        let t = flat("(and (or x1 (not x1)) (or x2 (and x5 (not x5))))");
        assert!(t.computes(&[2], |a| a == 1));
        assert!(!t.computes(&[1], |a| a == 1));
        let conj = flat("(and (or x3 (and x3 x9)) x1)");
        assert!(conj.computes(&[1, 3], |a| a == 3));
        assert!(!conj.computes(&[1, 3], |a| a == 1));
    }

    #[test]
    fn large_simple_tautology() {
        let mut text = String::from("x1");
        for v in 2..300 {
            text = if v % 2 == 0 {
                format!("(and {text} x{v})")
            } else {
                format!("(or {text} (not x{v}))")
            };
        }
        let t = flat(&format!("(or {text} (or (not x1) x1))"));
        assert!(t.is_tautology());
        let t = flat(&format!("(or {text} (and (not x1) x1))"));
        assert!(!t.is_tautology());
        assert!(t.is_satisfiable());
    }
}
