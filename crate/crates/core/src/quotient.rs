//! Equivalence classes of trees under collision-free renaming and negation of
//! variables, represented by canonical labellings.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{count_trees, ModelTag};
use crate::error::{check_budget, domain, Error, Result};
use crate::tree::enumerate::{advance, TreeVisit};
use crate::tree::for_each_tree_g;
use crate::tree::{enumerate_shapes, AndOrTree, Literal, Shape, ShapeProgram};

/// Canonical labelling of a class: variables renumbered by first occurrence
/// in left-to-right leaf order, polarities flipped per variable so that each
/// first occurrence is positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TreeClassKey {
    shape: Shape,
    variables: Vec<u32>,
    polarities: Vec<bool>,
}

impl TreeClassKey {
    /// Validates a key given in parts.
    pub fn new(shape: Shape, variables: Vec<u32>, polarities: Vec<bool>) -> Result<Self> {
        if variables.len() != shape.size() || polarities.len() != shape.size() {
            return domain("labelling length differs from the number of leaves");
        }
        let mut max = 0;
        for (&v, &p) in variables.iter().zip(&polarities) {
            if v == 0 || v > max + 1 {
                return domain("variable string is not a restricted growth string");
            }
            if v == max + 1 {
                if !p {
                    return domain("first occurrence of a variable must be positive");
                }
                max = v;
            }
        }
        Ok(TreeClassKey {
            shape,
            variables,
            polarities,
        })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn variables(&self) -> &[u32] {
        &self.variables
    }

    pub fn polarities(&self) -> &[bool] {
        &self.polarities
    }

    pub fn size(&self) -> usize {
        self.variables.len()
    }

    pub fn distinct_variable_count(&self) -> u32 {
        self.variables.iter().copied().max().unwrap_or(0)
    }

    /// The member labelled `x1..xp` with the key's polarities.
    pub fn representative(&self) -> AndOrTree {
        let labels = self
            .variables
            .iter()
            .zip(&self.polarities)
            .map(|(&v, &p)| Literal { var: v, positive: p });
        self.shape.label(labels).expect("key length matches its shape")
    }

    /// Leaf literal indices of the representative.
    pub fn labels(&self) -> Vec<u8> {
        self.representative().leaves().iter().map(|l| l.index() as u8).collect()
    }
}

pub fn canonicalize(t: &AndOrTree) -> TreeClassKey {
    let leaves = t.leaves();
    let (variables, polarities) = canonical_labelling(&leaves);
    TreeClassKey {
        shape: t.shape(),
        variables,
        polarities,
    }
}

/// Renumbering by first occurrence and per-variable polarity normalization.
pub fn canonical_labelling(leaves: &[Literal]) -> (Vec<u32>, Vec<bool>) {
    let mut first: Vec<(u32, bool)> = Vec::new();
    let mut vars = Vec::with_capacity(leaves.len());
    let mut pols = Vec::with_capacity(leaves.len());
    for l in leaves {
        let idx = match first.iter().position(|&(v, _)| v == l.var) {
            Some(i) => i,
            None => {
                first.push((l.var, l.positive));
                first.len() - 1
            }
        };
        vars.push(idx as u32 + 1);
        pols.push(l.positive == first[idx].1);
    }
    (vars, pols)
}

pub fn representative(key: &TreeClassKey) -> AndOrTree {
    key.representative()
}

pub fn distinct_variable_count(key: &TreeClassKey) -> u32 {
    key.distinct_variable_count()
}

impl fmt::Display for TreeClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|", self.shape)?;
        for (i, v) in self.variables.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("|")?;
        for &p in &self.polarities {
            f.write_str(if p { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for TreeClassKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.splitn(3, '|');
        let (shape, vars, pols) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => {
                return Err(Error::Parse {
                    position: s.len(),
                    message: "expected `<shape>|<variables>|<polarities>`".into(),
                })
            }
        };
        let shape = Shape::parse(shape)?;
        let offset = shape.to_string().len() + 1;
        let variables = vars
            .split(',')
            .map(|v| match v.parse::<u32>() {
                Ok(x) if !v.starts_with('0') && !v.starts_with('+') => Ok(x),
                _ => Err(Error::Parse {
                    position: offset,
                    message: format!("bad variable `{v}`"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        let polarities = pols
            .bytes()
            .map(|b| match b {
                b'1' => Ok(true),
                b'0' => Ok(false),
                _ => Err(Error::Parse {
                    position: offset + vars.len() + 1,
                    message: "polarities are 0 or 1".into(),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        TreeClassKey::new(shape, variables, polarities)
    }
}

/// Next restricted growth string (values from 0) with fewer than `k`
/// blocks, in lexicographic order.
pub(crate) fn next_rgs(a: &mut [u8], k: u8) -> bool {
    let n = a.len();
    let mut prefix_max = vec![0u8; n];
    for i in 1..n {
        prefix_max[i] = prefix_max[i - 1].max(a[i - 1]);
    }
    for i in (1..n).rev() {
        if a[i] <= prefix_max[i] && a[i] + 1 < k {
            a[i] += 1;
            for x in &mut a[i + 1..] {
                *x = 0;
            }
            return true;
        }
    }
    false
}

/// Visits every canonical labelling of `n` leaves with at most `k`
/// variables as literal indices: restricted growth strings in lexicographic
/// order, and for each, the free polarities with positive before negative.
pub fn for_each_canonical_labelling(n: u32, k: u32, mut visit: impl FnMut(&[u8])) -> u64 {
    let n = n as usize;
    let k = k.min(n as u32).min(127) as u8;
    let mut rgs = vec![0u8; n];
    let mut labels = vec![0u8; n];
    let mut count = 0u64;
    loop {
        let mut seen = 0u8;
        let mut free = Vec::new();
        for (i, &b) in rgs.iter().enumerate() {
            if b == seen {
                seen += 1;
            } else {
                free.push(i);
            }
        }
        let mut flips = vec![0u8; free.len()];
        loop {
            for i in 0..n {
                labels[i] = 2 * rgs[i];
            }
            for (j, &i) in free.iter().enumerate() {
                labels[i] += flips[j];
            }
            visit(&labels);
            count += 1;
            if !advance(&mut flips[..], 2u8) {
                break;
            }
        }
        if !next_rgs(&mut rgs, k) {
            break;
        }
    }
    count
}

/// Visits the representative of every class of size `n` with at most `k`
/// variables: shapes in enumeration order, then canonical labellings.
pub fn for_each_class(n: u32, k: u32, budget: u64, mut visit: impl FnMut(&TreeVisit<'_>)) -> Result<u64> {
    if n == 0 || k == 0 {
        return domain("enumeration needs n >= 1 and k >= 1");
    }
    check_budget(&count_trees(n, k, ModelTag::E)?, budget)?;
    let mut labellings = Vec::new();
    for_each_canonical_labelling(n, k, |l| labellings.extend_from_slice(l));
    let mut visited = 0;
    for shape in enumerate_shapes(n)? {
        let program = ShapeProgram::compile(&shape);
        for labels in labellings.chunks_exact(n as usize) {
            visit(&TreeVisit {
                shape: &shape,
                program: &program,
                labels,
            });
            visited += 1;
        }
    }
    Ok(visited)
}

/// Visits every object of the model: labelled trees for G, class
/// representatives for E.
pub fn for_each_tree(n: u32, k: u32, model: ModelTag, budget: u64, visit: impl FnMut(&TreeVisit<'_>)) -> Result<u64> {
    match model {
        ModelTag::G => for_each_tree_g(n, k, budget, visit),
        ModelTag::E => for_each_class(n, k, budget, visit),
    }
}

/// Every class of size `n` with at most `k` variables, lazily.
pub fn enumerate_classes(n: u32, k: u32, budget: u64) -> Result<impl Iterator<Item = TreeClassKey>> {
    if n == 0 || k == 0 {
        return domain("enumeration needs n >= 1 and k >= 1");
    }
    check_budget(&count_trees(n, k, ModelTag::E)?, budget)?;
    let mut labellings: Vec<(Vec<u32>, Vec<bool>)> = Vec::new();
    for_each_canonical_labelling(n, k, |l| {
        labellings.push((
            l.iter().map(|&x| (x >> 1) as u32 + 1).collect(),
            l.iter().map(|&x| x & 1 == 0).collect(),
        ))
    });
    Ok(enumerate_shapes(n)?.flat_map(move |shape| {
        labellings
            .clone()
            .into_iter()
            .map(move |(variables, polarities)| TreeClassKey {
                shape: shape.clone(),
                variables,
                polarities,
            })
    }))
}

/// Number of canonical labellings of `n` leaves using exactly `p` variables,
/// by enumeration.
pub fn labellings_with_blocks(n: u32, p: u32) -> BigUint {
    let mut count = 0u64;
    for_each_canonical_labelling(n, n, |l| {
        let blocks = l.iter().map(|&x| x >> 1).max().map_or(0, |m| m as u32 + 1);
        if blocks == p {
            count += 1;
        }
    });
    count.into()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::class_key;
    use crate::combinatorics::{count_shapes, stirling2};
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn key(s: &str) -> TreeClassKey {
        canonicalize(&AndOrTree::parse(s).unwrap())
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(key("(and x12 x3)"), key("(and x1 x2)"));
        let k = key("(or (not x5) x5)");
        assert_eq!(k.variables(), &[1, 1]);
        assert_eq!(k.polarities(), &[true, false]);
        assert_eq!(k.to_string(), "(or . .)|1,1|10");
        assert_eq!(key("(or x2 (and (not x2) x7))"), key("(or (not x1) (and x1 (not x3)))"));
        assert_ne!(key("(or x1 x2)"), key("(and x1 x2)"));
        assert_ne!(key("(or x1 x1)"), key("(or x1 x2)"));
    }

    #[test]
    fn key_text_round_trip() {
        for s in ["(or . .)|1,1|10", "(and . (or . .))|1,2,1|110", ".|1|1"] {
            assert_eq!(s.parse::<TreeClassKey>().unwrap().to_string(), s);
        }
        for bad in [
            "(or . .)|1,3|11",
            "(or . .)|1,1|01",
            "(or . .)|1|1",
            "(or . .)|1,1",
            "(or . .)|01,1|11",
        ] {
            assert!(bad.parse::<TreeClassKey>().is_err(), "{bad}");
        }
    }

    #[test]
    fn counts_and_representatives() {
        assert_eq!(key("(and x1 x2)").distinct_variable_count(), 2);
        assert_eq!(key("(or x1 (not x1))").distinct_variable_count(), 1);
        let fig1 = key("(or (or x1 (and x2 x3)) (or (not x1) (and x4 x1)))");
        assert_eq!(fig1.distinct_variable_count(), 4);
        assert_eq!(key("(and x1 x2)").representative().to_string(), "(and x1 x2)");
        assert_eq!(key("(or (not x5) x5)").representative().to_string(), "(or x1 (not x1))");
    }

    #[test]
    fn class_enumeration_examples() {
        let keys: Vec<String> = enumerate_classes(2, 2, 100).unwrap().map(|k| k.to_string()).collect();
        assert_eq!(
            keys,
            vec![
                "(and . .)|1,1|11",
                "(and . .)|1,1|10",
                "(and . .)|1,2|11",
                "(or . .)|1,1|11",
                "(or . .)|1,1|10",
                "(or . .)|1,2|11",
            ]
        );
        assert_eq!(enumerate_classes(1, 1, 100).unwrap().count(), 1);
        assert_eq!(enumerate_classes(3, 1, 100).unwrap().count(), 32);
        assert!(matches!(enumerate_classes(3, 1, 10), Err(Error::Budget { .. })));
    }

    #[test]
    fn class_counts_match_formula() {
        for n in 1..=6 {
            for k in 1..=3 {
                let count = for_each_class(n, k, u64::MAX, |_| {}).unwrap();
                assert_eq!(BigUint::from(count), count_trees(n, k, ModelTag::E).unwrap());
            }
        }
    }

    #[test]
    fn per_block_refinement() {
        for n in 1..=8u32 {
            for p in 1..=n {
                let expected = stirling2(n, p) << (n - p) as usize;
                assert_eq!(labellings_with_blocks(n, p), expected, "n = {n}, p = {p}");
            }
        }
        // With shapes, exhaustively for small n.
        for n in 1..=5u32 {
            let mut by_p = vec![0u64; n as usize + 1];
            for_each_class(n, n, u64::MAX, |v| {
                let p = v.labels.iter().map(|&x| x >> 1).max().unwrap() as usize + 1;
                by_p[p] += 1;
            })
            .unwrap();
            for p in 1..=n {
                let expected = count_shapes(n).unwrap() * (stirling2(n, p) << (n - p) as usize);
                assert_eq!(BigUint::from(by_p[p as usize]), expected);
            }
        }
    }

    #[test]
    fn canonical_form_is_idempotent_and_matches_stream() {
        let mut from_trees = HashSet::new();
        for_each_tree_g(4, 3, u64::MAX, |v| {
            let t = v.tree();
            let k = canonicalize(&t);
            assert_eq!(canonicalize(&k.representative()), k);
            assert!(k.distinct_variable_count() <= 3);
            from_trees.insert(k);
        })
        .unwrap();
        let streamed: HashSet<_> = enumerate_classes(4, 3, u64::MAX).unwrap().collect();
        assert_eq!(from_trees, streamed);
    }

    #[test]
    fn tree_equivalence_refines_function_classes() {
        for_each_tree_g(3, 3, u64::MAX, |v| {
            let t = v.tree();
            let rep = canonicalize(&t).representative();
            assert_eq!(
                class_key(&t.truth_table(3).unwrap()),
                class_key(&rep.truth_table(3).unwrap())
            );
        })
        .unwrap();
    }

    fn arb_tree() -> impl Strategy<Value = AndOrTree> {
        let leaf = (1u32..6, any::<bool>()).prop_map(|(v, p)| AndOrTree::Leaf(Literal { var: v, positive: p }));
        leaf.prop_recursive(5, 24, 2, |inner| {
            (any::<bool>(), inner.clone(), inner).prop_map(
                |(and, l, r)| {
                    if and {
                        AndOrTree::and(l, r)
                    } else {
                        AndOrTree::or(l, r)
                    }
                },
            )
        })
    }

    proptest! {
        #[test]
        fn relabelled_trees_share_keys(t in arb_tree(), shift in 1u32..50, flips in any::<u64>(), perm_seed in any::<u64>()) {
            // An injective renaming plus per-variable negation.
            let mut targets: Vec<u32> = (0..6).map(|i| shift + ((i as u64 * 7 + perm_seed) % 97) as u32 * 6 + i).collect();
            targets.dedup();
            let mut f = |l: Literal| Literal {
                var: targets[(l.var - 1) as usize],
                positive: l.positive ^ (flips >> l.var & 1 == 1),
            };
            let u = t.map_leaves(&mut f);
            prop_assert_eq!(canonicalize(&u), canonicalize(&t));
        }

        #[test]
        fn inequivalent_functions_give_distinct_keys(a in arb_tree(), b in arb_tree()) {
            let fa = class_key(&a.truth_table(5).unwrap());
            let fb = class_key(&b.truth_table(5).unwrap());
            if fa != fb || a.shape() != b.shape() {
                prop_assert_ne!(canonicalize(&a), canonicalize(&b));
            }
        }
    }
}
