//! Exact counts of trees by pattern repetitions, and the tautology census.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{decompose_shape, is_simple_tautology_labels, PatternLangId};
use crate::combinatorics::{
    binomial, count_shapes, falling_factorial, rat_exact, ratio, ratio_to_f64, stirling2, BigCount, ExactRatio,
    ModelTag,
};
use crate::error::{check_budget, Error, Result};
use crate::quotient::for_each_tree;
use crate::tree::enumerate::TreeVisit;
use crate::tree::{enumerate_shapes, Shape};

/// Number of shapes of size `n` by their number of pattern leaves.
pub fn pattern_leaf_histogram(n: u32, lang: PatternLangId, budget: u64) -> Result<Vec<BigCount>> {
    check_budget(&count_shapes(n)?, budget)?;
    let mut hist = vec![0u64; n as usize + 1];
    for s in enumerate_shapes(n)? {
        hist[decompose_shape(&s, lang)?.pattern_leaves.len()] += 1;
    }
    Ok(hist.into_iter().map(BigUint::from).collect())
}

/// Labellings of `n` leaves whose `d` distinguished leaves carry exactly `j`
/// distinct variables.
fn labellings_meeting(n: u32, k: u32, d: u32, j: u32, model: ModelTag) -> BigUint {
    match model {
        ModelTag::G => {
            let free = num_traits::pow(BigUint::from(2 * k as u64), (n - d) as usize);
            (free * stirling2(d, j) * falling_factorial(k as u64, j as u64)) << d as usize
        }
        ModelTag::E => {
            // Set partitions of the n positions: the d distinguished ones
            // form j blocks; each other position joins one of those or the
            // remaining blocks.
            let rest = n - d;
            let mut total = BigUint::zero();
            for p in j..=k.min(n) {
                let mut partitions = BigUint::zero();
                for t in 0..=rest {
                    partitions += binomial(rest as u64, t as u64)
                        * num_traits::pow(BigUint::from(j), t as usize)
                        * stirling2(rest - t, p - j);
                }
                total += partitions << (n - p) as usize;
            }
            total * stirling2(d, j)
        }
    }
}

/// Trees (G) or classes (E) of size `n` indexed by their number of
/// repetitions in `lang`.
///
/// A labelling with `j` distinct variables on a fixed set of `d` leaves is
/// counted the same way whichever leaves those are, so the count only needs
/// the number of shapes with `d` pattern leaves.
pub fn repetition_distribution(
    n: u32,
    k: u32,
    lang: PatternLangId,
    model: ModelTag,
    budget: u64,
) -> Result<Vec<BigCount>> {
    if n == 0 || k == 0 {
        return crate::error::domain("counting needs n >= 1 and k >= 1");
    }
    let hist = pattern_leaf_histogram(n, lang, budget)?;
    let mut out = vec![BigUint::zero(); n as usize];
    for (d, shapes) in hist.iter().enumerate() {
        if shapes.is_zero() {
            continue;
        }
        let d = d as u32;
        for j in u32::from(d > 0)..=d.min(k) {
            out[(d - j) as usize] += shapes * labellings_meeting(n, k, d, j, model);
        }
    }
    Ok(out)
}

/// Trees (G) or classes (E) of size `n` with exactly, or at least, `r`
/// repetitions in `lang`.
pub fn count_with_repetitions(
    n: u32,
    k: u32,
    lang: PatternLangId,
    r: u32,
    model: ModelTag,
    at_least: bool,
    budget: u64,
) -> Result<BigCount> {
    let dist = repetition_distribution(n, k, lang, model, budget)?;
    Ok(select(&dist, r, at_least))
}

fn select(dist: &[BigCount], r: u32, at_least: bool) -> BigCount {
    let r = r as usize;
    if at_least {
        dist.iter().skip(r).sum()
    } else {
        dist.get(r).cloned().unwrap_or_default()
    }
}

/// Pattern-leaf positions, recomputed only when the visited shape changes.
struct PositionCache {
    lang: PatternLangId,
    shape: Option<Shape>,
    positions: Vec<usize>,
}

impl PositionCache {
    fn new(lang: PatternLangId) -> Result<Self> {
        lang.stages()?;
        Ok(PositionCache {
            lang,
            shape: None,
            positions: Vec::new(),
        })
    }

    fn get(&mut self, shape: &Shape) -> &[usize] {
        if self.shape.as_ref() != Some(shape) {
            let d = decompose_shape(shape, self.lang).expect("language checked on creation");
            self.positions = d.positions().collect();
            self.shape = Some(shape.clone());
        }
        &self.positions
    }
}

fn repetitions_at(labels: &[u8], positions: &[usize]) -> usize {
    let mut seen = 0u128;
    let mut distinct = 0;
    for &p in positions {
        let bit = 1u128 << (labels[p] >> 1);
        if seen & bit == 0 {
            seen |= bit;
            distinct += 1;
        }
    }
    positions.len() - distinct
}

/// [`count_with_repetitions`] by visiting every tree or class.
pub fn count_with_repetitions_enumerated(
    n: u32,
    k: u32,
    lang: PatternLangId,
    r: u32,
    model: ModelTag,
    at_least: bool,
    budget: u64,
) -> Result<BigCount> {
    let mut cache = PositionCache::new(lang)?;
    let mut dist = vec![0u64; n as usize];
    for_each_tree(n, k, model, budget, |v| {
        dist[repetitions_at(v.labels, cache.get(v.shape))] += 1;
    })?;
    let dist: Vec<BigCount> = dist.into_iter().map(BigUint::from).collect();
    Ok(select(&dist, r, at_least))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TautologyCensus {
    pub n: u32,
    pub k: u32,
    pub model: ModelTag,
    pub total: BigCount,
    pub tautologies: BigCount,
    pub simple: BigCount,
    /// Tautologies with exactly one `N^(2)`-repetition.
    pub one_nn_repetition: BigCount,
    /// Among those, the simple ones.
    pub one_nn_repetition_simple: BigCount,
    /// Tautologies without any `N^(2)`-repetition.
    pub no_nn_repetition: BigCount,
}

impl TautologyCensus {
    /// Share of simple tautologies divided by `rat_n`.
    pub fn simple_over_rat(&self) -> Result<ExactRatio> {
        let share = ratio(self.simple.clone(), self.total.clone());
        let rat = rat_exact(self.n, self.k, self.model)?;
        if rat.is_zero() {
            return crate::error::domain("rat_n vanishes for n = 1");
        }
        Ok(share / rat)
    }

    pub const CSV_HEADER: &'static str = "n,k,model,count_total,count_tautology,count_simple,ratio_simple_over_rat";

    pub fn csv_row(&self) -> Result<String> {
        let ratio = match self.simple_over_rat() {
            Ok(r) => format!("{:.9}", ratio_to_f64(&r)),
            Err(_) => "NaN".into(),
        };
        Ok(format!(
            "{},{},{},{},{},{},{}",
            self.n, self.k, self.model, self.total, self.tautologies, self.simple, ratio
        ))
    }
}

/// Exhaustive counts of tautologies and of the structural classes that the
/// tautology asymptotics rely on.
pub fn tautology_census(n: u32, k: u32, model: ModelTag, budget: u64) -> Result<TautologyCensus> {
    let vars = match model {
        ModelTag::G => k,
        ModelTag::E => k.min(n),
    };
    if vars as usize > crate::boolfn::TruthTable::MAX_SUPPORT {
        return Err(Error::SupportTooLarge {
            support: vars as usize,
            max: crate::boolfn::TruthTable::MAX_SUPPORT,
        });
    }
    let mut nn = PositionCache::new(PatternLangId::NPow(2))?;
    let mut m = PositionCache::new(PatternLangId::M)?;
    let [mut taut, mut simple, mut one, mut one_simple, mut none] = [0u64; 5];
    let total = for_each_tree(n, k, model, budget, |v: &TreeVisit<'_>| {
        let is_simple = is_simple_tautology_labels(v.labels, m.get(v.shape));
        simple += is_simple as u64;
        if v.table() != !0 {
            return;
        }
        taut += 1;
        match repetitions_at(v.labels, nn.get(v.shape)) {
            0 => none += 1,
            1 => {
                one += 1;
                one_simple += is_simple as u64;
            }
            _ => {}
        }
    })?;
    Ok(TautologyCensus {
        n,
        k,
        model,
        total: total.into(),
        tautologies: taut.into(),
        simple: simple.into(),
        one_nn_repetition: one.into(),
        one_nn_repetition_simple: one_simple.into(),
        no_nn_repetition: none.into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::count_trees;

    #[test]
    fn repetition_count_examples() {
        let n = PatternLangId::N;
        // (x1 or x1), (x1 or not x1) and the two mirrored ones.
        assert_eq!(
            count_with_repetitions(2, 1, n, 1, ModelTag::G, false, 1000).unwrap(),
            4u32.into()
        );
        assert_eq!(
            count_with_repetitions_enumerated(2, 1, n, 1, ModelTag::G, false, 1000).unwrap(),
            4u32.into()
        );
        for (nn, k) in [(3, 2), (5, 3)] {
            for model in [ModelTag::G, ModelTag::E] {
                assert_eq!(
                    count_with_repetitions(nn, k, n, 0, model, true, 1000).unwrap(),
                    count_trees(nn, k, model).unwrap()
                );
            }
        }
    }

    #[test]
    fn factorized_counts_match_enumeration() {
        let langs = [
            PatternLangId::N,
            PatternLangId::P,
            PatternLangId::M,
            PatternLangId::NPow(2),
            PatternLangId::R(1),
        ];
        for model in [ModelTag::G, ModelTag::E] {
            for n in 1..=5 {
                for k in 1..=3 {
                    for lang in langs {
                        for r in 0..n {
                            for at_least in [false, true] {
                                assert_eq!(
                                    count_with_repetitions(n, k, lang, r, model, at_least, u64::MAX).unwrap(),
                                    count_with_repetitions_enumerated(n, k, lang, r, model, at_least, u64::MAX)
                                        .unwrap(),
                                    "{model} n={n} k={k} {lang} r={r} {at_least}"
                                );
                            }
                        }
                    }
                }
            }
        }
        // One larger point per model.
        for model in [ModelTag::G, ModelTag::E] {
            assert_eq!(
                count_with_repetitions(7, 2, PatternLangId::N, 2, model, true, u64::MAX).unwrap(),
                count_with_repetitions_enumerated(7, 2, PatternLangId::N, 2, model, true, u64::MAX).unwrap()
            );
        }
    }

    #[test]
    fn census_examples() {
        let c = tautology_census(2, 1, ModelTag::G, 1000).unwrap();
        assert_eq!(c.total, 8u32.into());
        assert_eq!(c.tautologies, 2u32.into());
        assert_eq!(c.simple, 2u32.into());
        let c = tautology_census(2, 1, ModelTag::E, 1000).unwrap();
        assert_eq!(c.tautologies, 1u32.into());
        for model in [ModelTag::G, ModelTag::E] {
            for n in 1..=4 {
                let c = tautology_census(n, 2, model, u64::MAX).unwrap();
                assert!(c.simple <= c.tautologies);
                assert_eq!(c.one_nn_repetition, c.one_nn_repetition_simple);
                assert!(c.no_nn_repetition.is_zero());
            }
        }
        assert!(tautology_census(3, 2, ModelTag::G, 10).is_err());
        assert_eq!(
            tautology_census(2, 1, ModelTag::G, 100).unwrap().csv_row().unwrap(),
            "2,1,G,8,2,2,0.500000000"
        );
    }

    /// Every simple tautology of the G census is counted once per labelling;
    /// with enough variables the classes expand back to it.
    #[test]
    fn simple_counts_agree_across_models() {
        use crate::quotient::canonicalize;
        use std::collections::HashMap;
        let n = 4;
        let k = 4;
        let mut per_class: HashMap<_, u64> = HashMap::new();
        let mut m = PositionCache::new(PatternLangId::M).unwrap();
        crate::tree::for_each_tree_g(n, k, u64::MAX, |v| {
            if is_simple_tautology_labels(v.labels, m.get(v.shape)) {
                *per_class.entry(canonicalize(&v.tree())).or_default() += 1;
            }
        })
        .unwrap();
        let classes = tautology_census(n, k, ModelTag::E, u64::MAX).unwrap().simple;
        assert_eq!(BigUint::from(per_class.len()), classes);
        for (key, count) in per_class {
            // A class with p variables has falling(k, p) 2^p labelled members.
            let p = key.distinct_variable_count() as u64;
            assert_eq!(BigUint::from(count), falling_factorial(k as u64, p) << p as usize);
        }
    }
}
