//! Complexity `L(f)` by level sets of reachable functions, multiplicity and
//! minimal trees.
//!
//! For `m` variables, level `s` holds the non-constant functions whose
//! smallest tree has exactly `s` leaves. Level 1 is the literals and level
//! `s` collects `g ⊙ h` for `g` in level `a`, `h` in level `s - a`. Constant
//! functions never occur inside a minimal tree of a non-constant one, so they
//! are left out of the levels (their complexity is 0 by convention).

use std::collections::HashMap;
use std::sync::OnceLock;

use super::{full_mask, TruthTable, VAR_MASKS};
use crate::error::{check_budget, Error, Result};
use crate::tree::{AndOrTree, Connective, Literal};

/// Largest number of essential variables handled by default.
pub const DEFAULT_MAX_SUPPORT: usize = 4;

const UNSET: u8 = u8::MAX;

pub struct Levels {
    m: u32,
    level: Vec<u8>,
    by_level: Vec<Vec<u16>>,
}

impl Levels {
    fn compute(m: u32) -> Self {
        assert!(m as usize <= DEFAULT_MAX_SUPPORT);
        let mask = full_mask(m);
        let count = 1usize << (1u32 << m);
        let mut level = vec![UNSET; count];
        level[0] = 0;
        level[mask as usize] = 0;
        let mut by_level: Vec<Vec<u16>> = vec![Vec::new(), Vec::new()];
        for var_mask in &VAR_MASKS[..m as usize] {
            for w in [var_mask & mask, !var_mask & mask] {
                if level[w as usize] == UNSET {
                    level[w as usize] = 1;
                    by_level[1].push(w as u16);
                }
            }
        }
        let mut remaining = count - 2 - by_level[1].len();
        let mut s = 1;
        while remaining > 0 {
            s += 1;
            let mut fresh = Vec::new();
            for a in 1..=s / 2 {
                let b = s - a;
                for (i, &g) in by_level[a].iter().enumerate() {
                    let hs = if a == b { &by_level[b][i..] } else { &by_level[b][..] };
                    for &h in hs {
                        for r in [g & h, g | h] {
                            let slot = &mut level[r as usize];
                            if *slot == UNSET {
                                *slot = s as u8;
                                fresh.push(r);
                            }
                        }
                    }
                }
            }
            remaining -= fresh.len();
            fresh.sort_unstable();
            by_level.push(fresh);
        }
        Levels { m, level, by_level }
    }

    pub fn support(&self) -> u32 {
        self.m
    }

    /// `L` of the function with table `bits` on `m` variables.
    pub fn complexity(&self, bits: u64) -> u32 {
        self.level[bits as usize] as u32
    }

    /// Non-constant functions of complexity exactly `s`.
    pub fn level(&self, s: usize) -> &[u16] {
        self.by_level.get(s).map_or(&[], Vec::as_slice)
    }

    pub fn max_level(&self) -> usize {
        self.by_level.len() - 1
    }
}

/// Level sets for `m` variables, computed once per process.
pub fn levels(m: u32) -> Result<&'static Levels> {
    static TABLES: [OnceLock<Levels>; DEFAULT_MAX_SUPPORT + 1] = [
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
    ];
    if m as usize > DEFAULT_MAX_SUPPORT {
        return Err(Error::SupportTooLarge {
            support: m as usize,
            max: DEFAULT_MAX_SUPPORT,
        });
    }
    Ok(TABLES[m as usize].get_or_init(|| Levels::compute(m)))
}

/// `L(f)`: 0 for constants, otherwise the size of the smallest tree
/// computing `f`.
pub fn complexity(f: &TruthTable) -> Result<u32> {
    complexity_capped(f, DEFAULT_MAX_SUPPORT)
}

pub fn complexity_capped(f: &TruthTable, max_support: usize) -> Result<u32> {
    let (p, _) = f.project_essential();
    if p.support() as usize > max_support.min(DEFAULT_MAX_SUPPORT) {
        return Err(Error::SupportTooLarge {
            support: p.support() as usize,
            max: max_support.min(DEFAULT_MAX_SUPPORT),
        });
    }
    Ok(levels(p.support())?.complexity(p.bits()))
}

/// `R(f) = L(f) - E(f)`.
pub fn multiplicity(f: &TruthTable) -> Result<u32> {
    Ok(complexity(f)? - f.essential_count() as u32)
}

/// Largest number of essential variables accepted by [`minimal_trees`].
pub const MINIMAL_TREES_MAX_SUPPORT: usize = 3;

/// Every tree of size `L(f)` on the essential variables of `f` computing
/// `f`, each once. Empty for constants.
pub fn minimal_trees(f: &TruthTable) -> Result<Vec<AndOrTree>> {
    minimal_trees_capped(f, MINIMAL_TREES_MAX_SUPPORT, 1_000_000)
}

pub fn minimal_trees_capped(f: &TruthTable, max_support: usize, budget: u64) -> Result<Vec<AndOrTree>> {
    let (p, vars) = f.project_essential();
    if p.support() as usize > max_support {
        return Err(Error::SupportTooLarge {
            support: p.support() as usize,
            max: max_support,
        });
    }
    if p.is_constant() {
        return Ok(Vec::new());
    }
    let lv = levels(p.support())?;
    let mut counts = HashMap::new();
    let total = count_minimal(lv, p.bits() as u16, &mut counts);
    check_budget(&total.into(), budget)?;
    let mut memo = HashMap::new();
    let trees = build_minimal(lv, p.bits() as u16, &mut memo);
    let rename = |l: Literal| Literal {
        var: vars[(l.var - 1) as usize],
        positive: l.positive,
    };
    Ok(trees.iter().map(|t| t.map_leaves(&mut { rename })).collect())
}

/// Pairs `(g, h)` of the given levels with `g ⊙ h = f`.
fn splits(lv: &Levels, f: u16) -> Vec<(usize, Connective, u16, u16)> {
    let s = lv.complexity(f as u64) as usize;
    let mut out = Vec::new();
    for a in 1..s {
        for c in [Connective::And, Connective::Or] {
            for &g in lv.level(a) {
                for &h in lv.level(s - a) {
                    let r = match c {
                        Connective::And => g & h,
                        Connective::Or => g | h,
                    };
                    if r == f {
                        out.push((a, c, g, h));
                    }
                }
            }
        }
    }
    out
}

fn count_minimal(lv: &Levels, f: u16, memo: &mut HashMap<u16, u128>) -> u128 {
    if let Some(&c) = memo.get(&f) {
        return c;
    }
    let c = if lv.complexity(f as u64) == 1 {
        1
    } else {
        splits(lv, f)
            .into_iter()
            .map(|(_, _, g, h)| count_minimal(lv, g, memo).saturating_mul(count_minimal(lv, h, memo)))
            .fold(0u128, u128::saturating_add)
    };
    memo.insert(f, c);
    c
}

fn build_minimal(lv: &Levels, f: u16, memo: &mut HashMap<u16, Vec<AndOrTree>>) -> Vec<AndOrTree> {
    if let Some(t) = memo.get(&f) {
        return t.clone();
    }
    let trees = if lv.complexity(f as u64) == 1 {
        let mask = full_mask(lv.support());
        (0..2 * lv.support())
            .map(Literal::from_index)
            .filter(|l| {
                let w = VAR_MASKS[(l.var - 1) as usize];
                (if l.positive { w } else { !w }) & mask == f as u64
            })
            .map(AndOrTree::Leaf)
            .collect()
    } else {
        let mut out = Vec::new();
        for (_, c, g, h) in splits(lv, f) {
            let left = build_minimal(lv, g, memo);
            let right = build_minimal(lv, h, memo);
            for l in &left {
                for r in &right {
                    out.push(AndOrTree::node(c, l.clone(), r.clone()));
                }
            }
        }
        out
    };
    memo.insert(f, trees.clone());
    trees
}
