//! Simple tautologies, the forcing properties of `N` and `P`, and the
//! classification of expansions of minimal trees.

use serde::{Deserialize, Serialize};

use super::{decompose_shape, PatternLangId};
use crate::error::{domain, Result};
use crate::tree::flat::FlatNode;
use crate::tree::solve::Reduced;
use crate::tree::{AndOrTree, Connective, FlatTree, Literal, Shape};

/// Leaves joined to the root by paths of `c` nodes only.
fn spine_leaves(t: &AndOrTree, c: Connective) -> Vec<Literal> {
    let mut out = Vec::new();
    let mut stack = vec![t];
    while let Some(t) = stack.pop() {
        match t {
            AndOrTree::Leaf(l) => out.push(*l),
            AndOrTree::Node(d, l, r) if *d == c => {
                stack.push(r);
                stack.push(l);
            }
            AndOrTree::Node(..) => {}
        }
    }
    out
}

fn has_complementary_pair(leaves: impl IntoIterator<Item = Literal>) -> bool {
    let mut seen = std::collections::HashMap::new();
    for l in leaves {
        if let Some(&p) = seen.get(&l.var) {
            if p != l.positive {
                return true;
            }
        } else {
            seen.insert(l.var, l.positive);
        }
    }
    false
}

/// Whether some `x` and `not x` are both joined to the root by OR-only paths.
pub fn is_simple_tautology(t: &AndOrTree) -> bool {
    has_complementary_pair(spine_leaves(t, Connective::Or))
}

/// Whether some `x` and `not x` are both joined to the root by AND-only paths.
pub fn is_simple_contradiction(t: &AndOrTree) -> bool {
    has_complementary_pair(spine_leaves(t, Connective::And))
}

pub fn is_simple_tautology_flat(t: &FlatTree) -> bool {
    let mut leaves = Vec::new();
    let mut stack = vec![t.root()];
    while let Some(i) = stack.pop() {
        match t.node(i) {
            FlatNode::Leaf(l) => leaves.push(l),
            FlatNode::Node(Connective::Or, l, r) => {
                stack.push(l);
                stack.push(r);
            }
            FlatNode::Node(Connective::And, ..) => {}
        }
    }
    has_complementary_pair(leaves)
}

/// Simple tautology test from literal indices and the `M`-pattern positions
/// of the shape, which are exactly the OR-spine leaves.
pub(crate) fn is_simple_tautology_labels(labels: &[u8], m_positions: &[usize]) -> bool {
    let (mut pos, mut neg) = (0u128, 0u128);
    for &p in m_positions {
        let l = labels[p];
        let bit = 1u128 << (l >> 1);
        if l & 1 == 0 {
            pos |= bit;
        } else {
            neg |= bit;
        }
    }
    pos & neg != 0
}

/// Whether pinning every `lang`-pattern leaf of `shape` to the forcing value
/// (false for `N`, true for `P`) forces the whole tree to it, whatever the
/// other leaves are.
pub fn forcing_check_shape(shape: &Shape, lang: PatternLangId) -> Result<bool> {
    let forced = match lang {
        PatternLangId::N => false,
        PatternLangId::P => true,
        other => return domain(format!("forcing is defined for N and P, not {other}")),
    };
    let n = shape.size();
    // A fresh variable on every leaf; pattern leaves then get pinned.
    let tree = shape.label((1..=n as u32).map(Literal::pos))?;
    let mut pinned = vec![false; n + 1];
    for p in decompose_shape(shape, lang)?.positions() {
        pinned[p + 1] = true;
    }
    let flat = FlatTree::from_tree(&tree);
    Ok(match flat.reduce(|v| pinned[v as usize].then_some(forced)) {
        Reduced::Const(b) => b == forced,
        Reduced::Tree(rest) => {
            if forced {
                rest.is_tautology()
            } else {
                !rest.is_satisfiable()
            }
        }
    })
}

/// [`forcing_check_shape`] on the shape of `t`; labels play no role.
pub fn forcing_check(t: &AndOrTree, lang: PatternLangId) -> Result<bool> {
    forcing_check_shape(&t.shape(), lang)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExpansionClass {
    /// The expansion tree is a simple tautology under AND, or a simple
    /// contradiction under OR.
    TExpansion,
    /// The expansion tree has a leaf joined to its root by AND-only nodes
    /// under OR, or by OR-only nodes under AND.
    XExpansion,
    Other,
    NotAnExpansion(String),
}

/// Where an expansion was plugged: the subtree `s` of the minimal tree, given
/// by its leaf range, became `s ⋄ t_e` or `t_e ⋄ s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionSite {
    pub first_leaf: usize,
    pub leaves: usize,
    pub connective: Connective,
    pub expansion: AndOrTree,
    /// Whether `t_e` is the right operand.
    pub on_right: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub class: ExpansionClass,
    /// The first site in leaf order.
    pub site: Option<ExpansionSite>,
    /// Number of distinct sites explaining the expansion.
    pub sites: usize,
}

/// Finds every way of reading `expanded` as `minimal` with one subtree `s`
/// replaced by `s ⋄ t_e` or `t_e ⋄ s`.
fn sites(minimal: &AndOrTree, expanded: &AndOrTree, offset: usize, out: &mut Vec<ExpansionSite>) {
    if let AndOrTree::Node(c, l, r) = expanded {
        if **l == *minimal {
            out.push(ExpansionSite {
                first_leaf: offset,
                leaves: minimal.size(),
                connective: *c,
                expansion: (**r).clone(),
                on_right: true,
            });
        }
        if **r == *minimal {
            out.push(ExpansionSite {
                first_leaf: offset,
                leaves: minimal.size(),
                connective: *c,
                expansion: (**l).clone(),
                on_right: false,
            });
        }
        if let AndOrTree::Node(d, ml, mr) = minimal {
            if c == d {
                if l == ml {
                    sites(mr, r, offset + ml.size(), out);
                }
                if r == mr {
                    sites(ml, l, offset, out);
                }
            }
        }
    }
}

fn classify_site(site: &ExpansionSite) -> ExpansionClass {
    let te = &site.expansion;
    let t = match site.connective {
        Connective::And => is_simple_tautology(te),
        Connective::Or => is_simple_contradiction(te),
    };
    if t {
        return ExpansionClass::TExpansion;
    }
    if !spine_leaves(te, site.connective.dual()).is_empty() {
        return ExpansionClass::XExpansion;
    }
    ExpansionClass::Other
}

pub fn classify_expansion(minimal: &AndOrTree, expanded: &AndOrTree) -> ExpansionReport {
    let mut found = Vec::new();
    sites(minimal, expanded, 0, &mut found);
    found.sort_by_key(|s| (s.first_leaf, std::cmp::Reverse(s.leaves), !s.on_right));
    found.dedup();
    let Some(first) = found.first().cloned() else {
        let reason = if minimal == expanded {
            "trees are identical".to_string()
        } else {
            "no single subtree replacement turns the minimal tree into the expanded one".to_string()
        };
        return ExpansionReport {
            class: ExpansionClass::NotAnExpansion(reason),
            site: None,
            sites: 0,
        };
    };
    ExpansionReport {
        class: classify_site(&first),
        sites: found.len(),
        site: Some(first),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::shapes;

    fn tree(s: &str) -> AndOrTree {
        AndOrTree::parse(s).unwrap()
    }

    #[test]
    fn simple_tautology_examples() {
        assert!(is_simple_tautology(&tree("(or x1 (not x1))")));
        assert!(is_simple_tautology(&tree(
            "(or (or x1 (and x2 x3)) (or (not x1) (and x4 x1)))"
        )));
        assert!(!is_simple_tautology(&tree("(and x1 (not x1))")));
        assert!(is_simple_contradiction(&tree("(and x1 (not x1))")));
        // A tautology that is not simple.
        let t = tree("(or (and x1 x2) (or (not x1) (not x2)))");
        assert!(t.is_tautology());
        assert!(!is_simple_tautology(&t));
        assert!(is_simple_tautology_flat(&FlatTree::from_tree(&tree(
            "(or x2 (or x1 (not x2)))"
        ))));
    }

    #[test]
    fn forcing_holds_on_all_small_shapes() {
        for n in 1..=6 {
            for s in shapes(n).unwrap() {
                assert!(forcing_check_shape(&s, PatternLangId::N).unwrap(), "{s}");
                assert!(forcing_check_shape(&s, PatternLangId::P).unwrap(), "{s}");
            }
        }
        assert!(forcing_check(&tree("x1"), PatternLangId::N).unwrap());
        assert!(forcing_check(&tree("x1"), PatternLangId::M).is_err());
    }

    #[test]
    fn forcing_on_mixed_shapes() {
        let shape = Shape::parse("(or (and . .) .)").unwrap();
        assert!(forcing_check_shape(&shape, PatternLangId::N).unwrap());
        assert!(forcing_check_shape(&shape, PatternLangId::P).unwrap());
        assert!(forcing_check_shape(&Shape::parse("(and . (or . .))").unwrap(), PatternLangId::N).unwrap());
    }

    #[test]
    fn expansion_examples() {
        let r = classify_expansion(&tree("x1"), &tree("(and x1 (or x2 (not x2)))"));
        assert_eq!(r.class, ExpansionClass::TExpansion);
        assert_eq!(r.sites, 1);
        let site = r.site.unwrap();
        assert_eq!(site.expansion.to_string(), "(or x2 (not x2))");
        assert!(site.on_right);
        let r = classify_expansion(&tree("(and x1 x2)"), &tree("(and x1 (or x2 x2))"));
        assert_eq!(r.class, ExpansionClass::XExpansion);
        assert_eq!(r.site.unwrap().first_leaf, 1);
        let r = classify_expansion(&tree("x1"), &tree("x1"));
        assert!(matches!(r.class, ExpansionClass::NotAnExpansion(_)));
        let r = classify_expansion(&tree("(or x1 x2)"), &tree("(and x1 x2)"));
        assert!(matches!(r.class, ExpansionClass::NotAnExpansion(_)));
        // Under OR, a simple contradiction.
        let r = classify_expansion(&tree("x1"), &tree("(or (and x3 (not x3)) x1)"));
        assert_eq!(r.class, ExpansionClass::TExpansion);
        assert!(!r.site.unwrap().on_right);
        // Under OR, no leaf of t_e hangs from its root by AND nodes only.
        let r = classify_expansion(&tree("x1"), &tree("(or x1 (or (and x2 x3) (and x4 x5)))"));
        assert_eq!(r.class, ExpansionClass::Other);
    }

    #[test]
    fn ambiguous_sites_are_counted() {
        // (x1 and x1) and x1 reads as x1 expanded at the root on either side,
        // or as (x1 and x1) expanded at either leaf.
        let r = classify_expansion(&tree("(and x1 x1)"), &tree("(and (and x1 x1) x1)"));
        assert!(r.sites >= 2);
        assert_eq!(r.site.unwrap().first_leaf, 0);
    }
}
