//! Postfix form of a shape, for evaluating many labellings of one shape.

use super::{Connective, Literal, Shape};
use crate::boolfn::lit_mask;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    /// Push the word of the next leaf (leaves are taken in left-to-right order).
    Leaf,
    And,
    Or,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeProgram {
    ops: Vec<Op>,
    leaves: usize,
    depth: usize,
}

impl ShapeProgram {
    pub fn compile(shape: &Shape) -> Self {
        let mut ops = Vec::with_capacity(2 * shape.size());
        emit(shape, &mut ops);
        let (mut cur, mut depth, mut leaves) = (0usize, 0usize, 0usize);
        for op in &ops {
            match op {
                Op::Leaf => {
                    cur += 1;
                    leaves += 1;
                    depth = depth.max(cur);
                }
                Op::And | Op::Or => cur -= 1,
            }
        }
        ShapeProgram { ops, leaves, depth }
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn size(&self) -> usize {
        self.leaves
    }

    /// Evaluates with leaf `i` bound to the word `leaf(i)`.
    pub fn eval_with(&self, stack: &mut Vec<u64>, mut leaf: impl FnMut(usize) -> u64) -> u64 {
        stack.clear();
        stack.reserve(self.depth);
        let mut next = 0;
        for op in &self.ops {
            match op {
                Op::Leaf => {
                    stack.push(leaf(next));
                    next += 1;
                }
                Op::And => {
                    let b = stack.pop().unwrap();
                    let a = stack.last_mut().unwrap();
                    *a &= b;
                }
                Op::Or => {
                    let b = stack.pop().unwrap();
                    let a = stack.last_mut().unwrap();
                    *a |= b;
                }
            }
        }
        stack.pop().unwrap()
    }

    /// Truth table over `x1..x6` for leaves labelled by literal indices.
    pub fn table(&self, labels: &[u8]) -> u64 {
        debug_assert_eq!(labels.len(), self.leaves);
        let mut buf = [0u64; 64];
        if self.depth <= buf.len() {
            let mut sp = 0;
            let mut next = 0;
            for op in &self.ops {
                match op {
                    Op::Leaf => {
                        buf[sp] = lit_mask(labels[next]);
                        sp += 1;
                        next += 1;
                    }
                    Op::And => {
                        sp -= 1;
                        buf[sp - 1] &= buf[sp];
                    }
                    Op::Or => {
                        sp -= 1;
                        buf[sp - 1] |= buf[sp];
                    }
                }
            }
            buf[0]
        } else {
            self.eval_with(&mut Vec::new(), |i| lit_mask(labels[i]))
        }
    }

    /// Rebuilds the shape.
    pub fn shape(&self) -> Shape {
        let mut stack = Vec::new();
        for op in &self.ops {
            match op {
                Op::Leaf => stack.push(Shape::Leaf),
                Op::And | Op::Or => {
                    let r = stack.pop().unwrap();
                    let l = stack.pop().unwrap();
                    let c = if *op == Op::And {
                        Connective::And
                    } else {
                        Connective::Or
                    };
                    stack.push(Shape::node(c, l, r));
                }
            }
        }
        stack.pop().unwrap()
    }

    pub fn literals(labels: &[u8]) -> impl Iterator<Item = Literal> + '_ {
        labels.iter().map(|&l| Literal::from_index(l as u32))
    }
}

fn emit(shape: &Shape, ops: &mut Vec<Op>) {
    match shape {
        Shape::Leaf => ops.push(Op::Leaf),
        Shape::Node(c, l, r) => {
            emit(l, ops);
            emit(r, ops);
            ops.push(match c {
                Connective::And => Op::And,
                Connective::Or => Op::Or,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::AndOrTree;

    #[test]
    fn program_matches_tree_tables() {
        let t = AndOrTree::parse("(or (and x1 (not x2)) (and (not x1) (or x3 x2)))").unwrap();
        let p = ShapeProgram::compile(&t.shape());
        let labels: Vec<u8> = t.leaves().iter().map(|l| l.index() as u8).collect();
        assert_eq!(p.size(), 5);
        assert_eq!(p.table(&labels), t.table_bits());
        assert_eq!(p.shape(), t.shape());
        let via_closure = p.eval_with(&mut Vec::new(), |i| lit_mask(labels[i]));
        assert_eq!(via_closure, t.table_bits());
    }
}
