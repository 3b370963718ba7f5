//! Exhaustive enumeration of shapes and of model-G trees.
//!
//! Order: left subtree size ascending, then the root connective (AND before
//! OR), then the left subtree, then the right subtree. Leaf labels run through
//! `x1 < !x1 < x2 < ...` with the leftmost leaf most significant.

use std::sync::OnceLock;

use num_bigint::BigUint;

use super::{AndOrTree, Connective, Literal, Shape, ShapeProgram};
use crate::combinatorics::{count_trees, ModelTag};
use crate::error::{check_budget, domain, Result};

/// Largest size for which shapes can be ranked with `u128` indices.
pub const MAX_RANKED_SIZE: u32 = 40;

fn shape_counts() -> &'static [u128] {
    static COUNTS: OnceLock<Vec<u128>> = OnceLock::new();
    COUNTS.get_or_init(|| {
        let mut c = vec![0u128, 1];
        for n in 2..=MAX_RANKED_SIZE as usize {
            let s: u128 = (1..n).map(|i| c[i] * c[n - i]).sum();
            c.push(2 * s);
        }
        c
    })
}

/// Number of connective-labelled shapes with `n` leaves.
pub fn shape_count(n: u32) -> Option<u128> {
    shape_counts().get(n as usize).copied().filter(|&c| c > 0)
}

/// The shape at position `index` of the enumeration order.
pub fn unrank_shape(n: u32, index: u128) -> Result<Shape> {
    match shape_count(n) {
        Some(total) if index < total => Ok(unrank(n as usize, index)),
        Some(total) => domain(format!("shape index {index} out of range 0..{total}")),
        None => domain(format!("shape ranking supports 1 <= n <= {MAX_RANKED_SIZE}")),
    }
}

fn unrank(n: usize, mut index: u128) -> Shape {
    if n == 1 {
        return Shape::Leaf;
    }
    let c = shape_counts();
    for i in 1..n {
        let block = c[i] * c[n - i];
        for conn in [Connective::And, Connective::Or] {
            if index < block {
                let (li, ri) = (index / c[n - i], index % c[n - i]);
                return Shape::node(conn, unrank(i, li), unrank(n - i, ri));
            }
            index -= block;
        }
    }
    unreachable!("index checked against the shape count")
}

/// Every connective-labelled shape of size `n`, lazily.
pub fn enumerate_shapes(n: u32) -> Result<impl Iterator<Item = Shape>> {
    let total = match shape_count(n) {
        Some(t) => t,
        None => return domain(format!("shape enumeration supports 1 <= n <= {MAX_RANKED_SIZE}")),
    };
    Ok((0..total).map(move |i| unrank(n as usize, i)))
}

/// All shapes of size `n`, built bottom-up.
pub fn shapes(n: u32) -> Result<Vec<Shape>> {
    if n == 0 {
        return domain("shapes need n >= 1");
    }
    check_budget(&BigUint::from(shape_count(n).unwrap_or(u128::MAX)), 20_000_000)?;
    let mut by_size: Vec<Vec<Shape>> = vec![Vec::new(), vec![Shape::Leaf]];
    for m in 2..=n as usize {
        let mut out = Vec::new();
        for i in 1..m {
            for conn in [Connective::And, Connective::Or] {
                for l in &by_size[i] {
                    for r in &by_size[m - i] {
                        out.push(Shape::node(conn, l.clone(), r.clone()));
                    }
                }
            }
        }
        by_size.push(out);
    }
    Ok(by_size.swap_remove(n as usize))
}

/// `(2k)^n`.
pub fn count_labellings_g(n: u32, k: u32) -> BigUint {
    num_traits::pow(BigUint::from(2 * k as u64), n as usize)
}

/// Every tree of size `n` over `x1..xk`, lazily; refuses when the total
/// exceeds `budget`.
pub fn enumerate_trees_g(n: u32, k: u32, budget: u64) -> Result<impl Iterator<Item = AndOrTree>> {
    if n == 0 || k == 0 {
        return domain("enumeration needs n >= 1 and k >= 1");
    }
    check_budget(&count_trees(n, k, ModelTag::G)?, budget)?;
    let shapes = enumerate_shapes(n)?;
    let lits = 2 * k;
    Ok(shapes.flat_map(move |shape| {
        let mut labels = Some(vec![0u32; n as usize]);
        std::iter::from_fn(move || {
            let cur = labels.take()?;
            let tree = shape
                .label(cur.iter().map(|&l| Literal::from_index(l)))
                .expect("label count matches the shape");
            let mut next = cur;
            if advance(&mut next, lits) {
                labels = Some(next);
            }
            Some(tree)
        })
    }))
}

/// Odometer step, rightmost position fastest. Returns false after the last
/// labelling.
pub(crate) fn advance<T>(labels: &mut [T], radix: T) -> bool
where
    T: Copy + PartialEq + std::ops::AddAssign + From<u8>,
{
    for slot in labels.iter_mut().rev() {
        *slot += T::from(1u8);
        if *slot != radix {
            return true;
        }
        *slot = T::from(0u8);
    }
    false
}

/// One visited tree: its shape, the compiled shape and the leaf literal
/// indices (`Literal::index`).
pub struct TreeVisit<'a> {
    pub shape: &'a Shape,
    pub program: &'a ShapeProgram,
    pub labels: &'a [u8],
}

impl TreeVisit<'_> {
    /// Truth table over `x1..x6`.
    pub fn table(&self) -> u64 {
        self.program.table(self.labels)
    }

    pub fn tree(&self) -> AndOrTree {
        self.shape
            .label(ShapeProgram::literals(self.labels))
            .expect("label count matches the shape")
    }

    pub fn literal(&self, leaf: usize) -> Literal {
        Literal::from_index(self.labels[leaf] as u32)
    }
}

/// Visits every tree of size `n` over `x1..xk` in enumeration order without
/// building it. Returns the number of trees visited.
pub fn for_each_tree_g(n: u32, k: u32, budget: u64, mut visit: impl FnMut(&TreeVisit<'_>)) -> Result<u64> {
    if n == 0 || k == 0 {
        return domain("enumeration needs n >= 1 and k >= 1");
    }
    if 2 * k > u8::MAX as u32 {
        return domain("too many variables for the compact visitor");
    }
    check_budget(&count_trees(n, k, ModelTag::G)?, budget)?;
    let lits = (2 * k) as u8;
    let mut visited = 0u64;
    for shape in enumerate_shapes(n)? {
        let program = ShapeProgram::compile(&shape);
        let mut labels = vec![0u8; n as usize];
        loop {
            visit(&TreeVisit {
                shape: &shape,
                program: &program,
                labels: &labels,
            });
            visited += 1;
            if !advance(&mut labels[..], lits) {
                break;
            }
        }
    }
    Ok(visited)
}
