//! Pattern languages and the unique decomposition of trees against them.
//!
//! A pattern is a tree whose leaves are either pattern leaves or
//! placeholders. The three base languages are
//!
//! * `N = • | N∨N | N∧□`
//! * `P = • | P∨□ | P∧P`
//! * `M = • | M∨M | □∧□`
//!
//! and compositions replace every placeholder of one level by a pattern of
//! the next: `N^(i)` stacks `i` copies of `N`, `R(r) = N^(r+1)[N⊕P]` and
//! `Rbar(r) = N^(r+1)[(N⊕P)²]`, where the pattern leaves of `N⊕P` are the
//! union of the `N` and `P` pattern leaves of the same subtree.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::tree::{AndOrTree, Connective, Literal, Shape};

mod census;
mod expansion;

pub use census::{
    count_with_repetitions, count_with_repetitions_enumerated, pattern_leaf_histogram, repetition_distribution,
    tautology_census, TautologyCensus,
};
use expansion::is_simple_tautology_labels;
pub use expansion::{
    classify_expansion, forcing_check, forcing_check_shape, is_simple_contradiction, is_simple_tautology,
    is_simple_tautology_flat, ExpansionClass, ExpansionReport, ExpansionSite,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PatternLangId {
    N,
    P,
    M,
    /// `N^(i)`, `i >= 1`.
    NPow(u32),
    /// `N^(r+1)[N⊕P]`, `r >= 1`.
    R(u32),
    /// `N^(r+1)[(N⊕P)²]`, `r >= 1`.
    RBar(u32),
}

/// Flags carried down a pattern: which base languages still own the node.
const IN_N: u8 = 1;
const IN_P: u8 = 2;
const IN_M: u8 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Base {
    N,
    P,
    M,
    NP,
}

impl Base {
    fn start(self) -> u8 {
        match self {
            Base::N => IN_N,
            Base::P => IN_P,
            Base::M => IN_M,
            Base::NP => IN_N | IN_P,
        }
    }
}

/// Flags of the two children of a pattern node.
fn step(c: Connective, flags: u8) -> (u8, u8) {
    match c {
        Connective::Or => (flags, flags & (IN_N | IN_M)),
        Connective::And => (flags & (IN_N | IN_P), flags & IN_P),
    }
}

impl PatternLangId {
    fn stages(&self) -> Result<Vec<Base>> {
        Ok(match *self {
            PatternLangId::N => vec![Base::N],
            PatternLangId::P => vec![Base::P],
            PatternLangId::M => vec![Base::M],
            PatternLangId::NPow(0) | PatternLangId::R(0) | PatternLangId::RBar(0) => {
                return domain(format!("{self} needs a positive index"))
            }
            PatternLangId::NPow(i) => vec![Base::N; i as usize],
            PatternLangId::R(r) => {
                let mut s = vec![Base::N; r as usize + 1];
                s.push(Base::NP);
                s
            }
            PatternLangId::RBar(r) => {
                let mut s = vec![Base::N; r as usize + 1];
                s.extend([Base::NP, Base::NP]);
                s
            }
        })
    }

    /// Number of composition levels.
    pub fn levels(&self) -> Result<u32> {
        Ok(self.stages()?.len() as u32)
    }
}

impl fmt::Display for PatternLangId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternLangId::N => f.write_str("N"),
            PatternLangId::P => f.write_str("P"),
            PatternLangId::M => f.write_str("M"),
            PatternLangId::NPow(i) => write!(f, "N^{i}"),
            PatternLangId::R(r) => write!(f, "R{r}"),
            PatternLangId::RBar(r) => write!(f, "Rbar{r}"),
        }
    }
}

impl FromStr for PatternLangId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let index = |rest: &str, at: usize| -> Result<u32> {
            match rest.parse::<u32>() {
                Ok(i) if i >= 1 => Ok(i),
                _ => Err(Error::Parse {
                    position: at,
                    message: format!("expected a positive index, found `{rest}`"),
                }),
            }
        };
        match s {
            "N" => Ok(PatternLangId::N),
            "P" => Ok(PatternLangId::P),
            "M" => Ok(PatternLangId::M),
            _ => {
                if let Some(rest) = s.strip_prefix("N^") {
                    Ok(PatternLangId::NPow(index(rest, 2)?))
                } else if let Some(rest) = s.strip_prefix("Rbar") {
                    Ok(PatternLangId::RBar(index(rest, 4)?))
                } else if let Some(rest) = s.strip_prefix('R') {
                    Ok(PatternLangId::R(index(rest, 1)?))
                } else {
                    Err(Error::Parse {
                        position: 0,
                        message: format!("unknown pattern language `{s}`; expected N, P, M, N^i, Ri or Rbari"),
                    })
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternLeaf {
    /// Leaf index in left-to-right order.
    pub position: usize,
    pub literal: Literal,
    /// Composition level, from 1.
    pub level: u32,
}

/// Decomposition of a shape: pattern leaf positions with their level and the
/// leaf ranges of the placeholder subtrees left after the last level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeDecomposition {
    pub pattern_leaves: Vec<(usize, u32)>,
    pub placeholders: Vec<Range<usize>>,
}

impl ShapeDecomposition {
    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.pattern_leaves.iter().map(|&(p, _)| p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternDecomposition {
    pub pattern_leaves: Vec<PatternLeaf>,
    /// Leaf ranges of the placeholder subtrees, in leaf order.
    pub placeholders: Vec<Range<usize>>,
}

impl PatternDecomposition {
    /// Pattern leaves of composition level `level`.
    pub fn at_level(&self, level: u32) -> impl Iterator<Item = &PatternLeaf> {
        self.pattern_leaves.iter().filter(move |l| l.level == level)
    }
}

pub fn decompose_shape(shape: &Shape, lang: PatternLangId) -> Result<ShapeDecomposition> {
    let stages = lang.stages()?;
    let mut out = ShapeDecomposition {
        pattern_leaves: Vec::new(),
        placeholders: Vec::new(),
    };
    walk(shape, 0, 0, stages[0].start(), &stages, &mut out);
    Ok(out)
}

fn walk(s: &Shape, offset: usize, stage: usize, flags: u8, stages: &[Base], out: &mut ShapeDecomposition) -> usize {
    if flags == 0 {
        if stage + 1 < stages.len() {
            return walk(s, offset, stage + 1, stages[stage + 1].start(), stages, out);
        }
        let size = s.size();
        out.placeholders.push(offset..offset + size);
        return size;
    }
    match s {
        Shape::Leaf => {
            out.pattern_leaves.push((offset, stage as u32 + 1));
            1
        }
        Shape::Node(c, l, r) => {
            let (lf, rf) = step(*c, flags);
            let a = walk(l, offset, stage, lf, stages, out);
            a + walk(r, offset + a, stage, rf, stages, out)
        }
    }
}

pub fn decompose(t: &AndOrTree, lang: PatternLangId) -> Result<PatternDecomposition> {
    let d = decompose_shape(&t.shape(), lang)?;
    let leaves = t.leaves();
    Ok(PatternDecomposition {
        pattern_leaves: d
            .pattern_leaves
            .iter()
            .map(|&(position, level)| PatternLeaf {
                position,
                literal: leaves[position],
                level,
            })
            .collect(),
        placeholders: d.placeholders,
    })
}

/// Decomposition against `N^(i)`.
pub fn compose_decompose(t: &AndOrTree, i: u32) -> Result<PatternDecomposition> {
    decompose(t, PatternLangId::NPow(i))
}

fn distinct_vars<'a>(leaves: impl Iterator<Item = &'a PatternLeaf>) -> (usize, usize) {
    let mut count = 0;
    let vars: BTreeSet<u32> = leaves.inspect(|_| count += 1).map(|l| l.literal.var).collect();
    (count, vars.len())
}

/// Pattern leaves minus the distinct variables labelling them.
pub fn repetitions(t: &AndOrTree, lang: PatternLangId) -> Result<usize> {
    let d = decompose(t, lang)?;
    let (leaves, vars) = distinct_vars(d.pattern_leaves.iter());
    Ok(leaves - vars)
}

/// Pattern leaves labelled by a variable of `gamma`, plus the repetitions.
pub fn restrictions(t: &AndOrTree, lang: PatternLangId, gamma: &BTreeSet<u32>) -> Result<usize> {
    let d = decompose(t, lang)?;
    let (leaves, vars) = distinct_vars(d.pattern_leaves.iter());
    let in_gamma = d
        .pattern_leaves
        .iter()
        .filter(|l| gamma.contains(&l.literal.var))
        .count();
    Ok(in_gamma + leaves - vars)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::series_i;
    use crate::tree::enumerate::for_each_tree_g;
    use crate::tree::shapes;
    use num_bigint::BigUint;

    fn tree(s: &str) -> AndOrTree {
        AndOrTree::parse(s).unwrap()
    }

    fn leaves_of(d: &PatternDecomposition) -> Vec<String> {
        d.pattern_leaves.iter().map(|l| l.literal.to_string()).collect()
    }

    #[test]
    fn decomposition_examples() {
        let d = decompose(&tree("(and (or x1 x2) x3)"), PatternLangId::N).unwrap();
        assert_eq!(leaves_of(&d), ["x1", "x2"]);
        assert_eq!(d.placeholders, vec![2..3]);
        for lang in [
            PatternLangId::N,
            PatternLangId::P,
            PatternLangId::M,
            PatternLangId::RBar(2),
        ] {
            let d = decompose(&tree("x1"), lang).unwrap();
            assert_eq!(leaves_of(&d), ["x1"]);
            assert!(d.placeholders.is_empty());
        }
        let d = decompose(&tree("(or (and x1 x2) x3)"), PatternLangId::M).unwrap();
        assert_eq!(leaves_of(&d), ["x3"]);
        assert_eq!(d.placeholders, vec![0..1, 1..2]);
        let d = decompose(&tree("(or (and x1 x2) x3)"), PatternLangId::P).unwrap();
        assert_eq!(leaves_of(&d), ["x1", "x2"]);
        assert_eq!(d.placeholders, vec![2..3]);
    }

    #[test]
    fn composition_examples() {
        let t = tree("(and x1 (and x2 x3))");
        assert_eq!(
            compose_decompose(&t, 1).unwrap(),
            decompose(&t, PatternLangId::N).unwrap()
        );
        let d = compose_decompose(&t, 2).unwrap();
        assert_eq!(d.at_level(1).map(|l| l.literal.to_string()).collect::<Vec<_>>(), ["x1"]);
        assert_eq!(d.at_level(2).map(|l| l.literal.to_string()).collect::<Vec<_>>(), ["x2"]);
        assert_eq!(d.placeholders, vec![2..3]);
        let d = compose_decompose(&t, 3).unwrap();
        assert_eq!(d.pattern_leaves.len(), 3);
        assert!(d.placeholders.is_empty());
        assert!(compose_decompose(&t, 0).is_err());
    }

    #[test]
    fn n_plus_p_takes_both_spines() {
        // N keeps the left child of an AND, P the left child of an OR.
        let t = tree("(and (or x1 x2) (or x3 (and x4 x5)))");
        let d = decompose_shape(&t.shape(), PatternLangId::R(1)).unwrap();
        // Level 1 and 2 are N: x1, x2 then the right child of the root AND.
        // Level 2 enters (or x3 (and x4 x5)) as N: x3, x4 with x5 cut; x5 goes to N⊕P.
        assert_eq!(d.pattern_leaves, vec![(0, 1), (1, 1), (2, 2), (3, 2), (4, 3)]);
        assert!(d.placeholders.is_empty());
        let t = tree("(and x1 (and x2 (and (or (and x3 x4) x5) x6)))");
        let d = decompose_shape(&t.shape(), PatternLangId::R(1)).unwrap();
        // Level 3 is N⊕P on (and (or (and x3 x4) x5) x6): N reaches x3 and x5,
        // P reaches x3, x4 and x6; nothing is left over.
        assert_eq!(d.pattern_leaves, vec![(0, 1), (1, 2), (2, 3), (3, 3), (4, 3), (5, 3)]);
        assert!(d.placeholders.is_empty());
        let t = tree("(and (or (or x1 (and x2 x3)) x4) x5)");
        let d = decompose_shape(&t.shape(), PatternLangId::NPow(1)).unwrap();
        assert_eq!(d.positions().collect::<Vec<_>>(), vec![0, 1, 3]);
    }

    #[test]
    fn repetition_examples() {
        let n = PatternLangId::N;
        assert_eq!(repetitions(&tree("(or x1 (not x1))"), n).unwrap(), 1);
        assert_eq!(repetitions(&tree("(or x1 x2)"), n).unwrap(), 0);
        assert_eq!(repetitions(&tree("(or (or x1 x1) (not x1))"), n).unwrap(), 2);
        assert_eq!(repetitions(&tree("(and x1 x1)"), n).unwrap(), 0);
        assert_eq!(repetitions(&tree("(and x1 x1)"), PatternLangId::P).unwrap(), 1);
        let g1 = BTreeSet::from([1]);
        assert_eq!(restrictions(&tree("(or x1 x2)"), n, &g1).unwrap(), 1);
        assert_eq!(restrictions(&tree("(or x1 (not x1))"), n, &BTreeSet::new()).unwrap(), 1);
        assert_eq!(restrictions(&tree("(or x1 (not x1))"), n, &g1).unwrap(), 3);
    }

    #[test]
    fn language_names_round_trip() {
        for l in [
            PatternLangId::N,
            PatternLangId::P,
            PatternLangId::M,
            PatternLangId::NPow(3),
            PatternLangId::R(1),
            PatternLangId::RBar(2),
        ] {
            assert_eq!(l.to_string().parse::<PatternLangId>().unwrap(), l);
        }
        assert!("N^0".parse::<PatternLangId>().is_err());
        assert!("Q".parse::<PatternLangId>().is_err());
    }

    /// Pattern leaves and placeholder leaves partition the leaves, in leaf
    /// order, for every shape of size at most 7.
    #[test]
    fn decompositions_partition_leaves() {
        let langs = [
            PatternLangId::N,
            PatternLangId::P,
            PatternLangId::M,
            PatternLangId::NPow(2),
            PatternLangId::NPow(3),
            PatternLangId::R(1),
            PatternLangId::RBar(1),
        ];
        for n in 1..=7 {
            for s in shapes(n).unwrap() {
                for lang in langs {
                    let d = decompose_shape(&s, lang).unwrap();
                    let mut covered: Vec<usize> = d.positions().collect();
                    for r in &d.placeholders {
                        assert!(!r.is_empty());
                        covered.extend(r.clone());
                    }
                    covered.sort_unstable();
                    assert_eq!(covered, (0..n as usize).collect::<Vec<_>>(), "{s} {lang}");
                    assert!(d
                        .pattern_leaves
                        .iter()
                        .all(|&(_, l)| l >= 1 && l <= lang.levels().unwrap()));
                }
            }
        }
    }

    #[test]
    fn repetitions_grow_with_composition_depth() {
        for_each_tree_g(5, 2, u64::MAX, |v| {
            let t = v.tree();
            let mut prev = 0;
            for i in 1..=5 {
                let r = repetitions(&t, PatternLangId::NPow(i)).unwrap();
                assert!(r >= prev);
                prev = r;
            }
        })
        .unwrap();
    }

    /// Shapes of size `s` with `d` N-pattern leaves are the coefficients of
    /// `n(zu, I(z))` where `n(x, y) = x + n(x, y)^2 + y n(x, y)`.
    #[test]
    fn n_pattern_generating_function() {
        let max = 9usize;
        let i = series_i(max as u32);
        // coef[s][d] for the series n.
        let mut coef = vec![vec![BigUint::from(0u32); max + 1]; max + 1];
        for s in 1..=max {
            let mut row = vec![BigUint::from(0u32); max + 1];
            if s == 1 {
                row[1] += 1u32;
            }
            for a in 1..s {
                for da in 0..=a {
                    for db in 0..=(s - a) {
                        if da + db <= max {
                            row[da + db] += &coef[a][da] * &coef[s - a][db];
                        }
                    }
                }
                for d in 0..=max {
                    row[d] += &i[a - 1] * &coef[s - a][d];
                }
            }
            coef[s] = row;
        }
        for (s, expected) in coef.iter().enumerate().skip(1) {
            let mut by_d = vec![BigUint::from(0u32); max + 1];
            for sh in shapes(s as u32).unwrap() {
                by_d[decompose_shape(&sh, PatternLangId::N).unwrap().pattern_leaves.len()] += 1u32;
            }
            assert_eq!(&by_d, expected, "size {s}");
        }
    }
}
