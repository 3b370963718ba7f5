//! Normalized probability tables along a grid of sizes.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{exact_distribution, tree_class, tree_computes, FunctionKey, KRule};
use crate::boolfn::{class_key, complexity, FunctionClassKey, TruthTable};
use crate::combinatorics::{rat_exact, ratio, ratio_to_f64, regime, ExactRatio, ModelTag, Regime};
use crate::error::{domain, Result};
use crate::patterns::{is_simple_tautology_flat, tautology_census};
use crate::sampling::{estimate, estimate_events, Seed};
use crate::tree::FlatTree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrendTarget {
    Function(TruthTable),
    Class(FunctionClassKey),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrendMode {
    Exact { budget: u64 },
    MonteCarlo { samples: u64, seed: Seed },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrendRow {
    pub n: u32,
    pub k: u32,
    pub regime: Regime,
    pub probability: f64,
    pub exact: Option<ExactRatio>,
    pub ci: Option<(f64, f64)>,
    pub rat: f64,
    /// `L(f)` in model G, `R<f>` in model E.
    pub exponent: u32,
    /// `probability / rat^(exponent + 1)`.
    pub normalized: f64,
}

/// Probability of the target divided by `rat_n^(e+1)`, with `e = L(f)` in
/// model G and `e = R<f>` in model E, at each size of the grid.
pub fn theorem_trend(
    target: TrendTarget,
    model: ModelTag,
    n_grid: &[u32],
    k_rule: KRule,
    mode: TrendMode,
) -> Result<Vec<TrendRow>> {
    let table = match target {
        TrendTarget::Function(f) => f,
        TrendTarget::Class(c) => c.table(),
    };
    let l = complexity(&table)?;
    let exponent = match model {
        ModelTag::G => l,
        ModelTag::E => l - table.essential_count() as u32,
    };
    let class = class_key(&table);
    let essential = class.support() as usize;
    let mut rows = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        if n < 2 {
            return domain("trend grids start at n = 2");
        }
        let k = k_rule.apply(n);
        let (probability, exact, ci) = match mode {
            TrendMode::Exact { budget } => {
                let dist = exact_distribution(n, k, model, budget)?;
                let p = match (model, target) {
                    (ModelTag::G, TrendTarget::Function(f)) => match dist.key_of(&f) {
                        Some(key) => dist.mass(&key),
                        None => ExactRatio::zero(),
                    },
                    (ModelTag::G, TrendTarget::Class(c)) => dist.class_masses().get(&c).cloned().unwrap_or_default(),
                    (ModelTag::E, _) => dist.mass(&FunctionKey::Class(class)),
                };
                (ratio_to_f64(&p), Some(p), None)
            }
            TrendMode::MonteCarlo { samples, seed } => {
                let report = match (model, target) {
                    (ModelTag::G, TrendTarget::Function(f)) => {
                        estimate(move |t: &FlatTree| tree_computes(t, &f), n, k, model, samples, seed)?
                    }
                    _ => estimate(
                        move |t: &FlatTree| tree_class(t, essential) == Some(class),
                        n,
                        k,
                        model,
                        samples,
                        seed,
                    )?,
                };
                (report.point, None, Some((report.ci_low, report.ci_high)))
            }
        };
        let rat = ratio_to_f64(&rat_exact(n, k, model)?);
        rows.push(TrendRow {
            n,
            k,
            regime: regime(n, k),
            probability,
            exact,
            ci,
            rat,
            exponent,
            normalized: probability / rat.powi(exponent as i32 + 1),
        });
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TautologyRow {
    pub n: u32,
    pub k: u32,
    /// Probability of a simple tautology.
    pub mu_s: f64,
    /// Probability of a tautology.
    pub mu_t: f64,
    pub ci_s: Option<(f64, f64)>,
    pub ci_t: Option<(f64, f64)>,
    pub rat: f64,
    pub s_over_rat: f64,
    pub t_over_s: f64,
}

/// Simple tautologies and tautologies against `rat_n` along a grid.
pub fn tautology_ratio_report(
    n_grid: &[u32],
    k_rule: KRule,
    model: ModelTag,
    mode: TrendMode,
) -> Result<Vec<TautologyRow>> {
    let mut rows = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        if n < 2 {
            return domain("tautology grids start at n = 2");
        }
        let k = k_rule.apply(n);
        let (mu_s, mu_t, ci_s, ci_t) = match mode {
            TrendMode::Exact { budget } => {
                let c = tautology_census(n, k, model, budget)?;
                let s = ratio_to_f64(&ratio(c.simple.clone(), c.total.clone()));
                let t = ratio_to_f64(&ratio(c.tautologies.clone(), c.total.clone()));
                (s, t, None, None)
            }
            TrendMode::MonteCarlo { samples, seed } => {
                let simple = |t: &FlatTree| is_simple_tautology_flat(t);
                let taut = |t: &FlatTree| is_simple_tautology_flat(t) || t.is_tautology();
                let events: [&(dyn Fn(&FlatTree) -> bool + Sync); 2] = [&simple, &taut];
                let r = estimate_events(n, k, model, samples, seed, &events)?;
                (
                    r[0].point,
                    r[1].point,
                    Some((r[0].ci_low, r[0].ci_high)),
                    Some((r[1].ci_low, r[1].ci_high)),
                )
            }
        };
        let rat = ratio_to_f64(&rat_exact(n, k, model)?);
        rows.push(TautologyRow {
            n,
            k,
            mu_s,
            mu_t,
            ci_s,
            ci_t,
            rat,
            s_over_rat: mu_s / rat,
            t_over_s: mu_t / mu_s,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::AndOrTree;

    #[test]
    fn exact_trend_rows() {
        let t = TruthTable::constant(0, true);
        let rows = theorem_trend(
            TrendTarget::Function(t),
            ModelTag::G,
            &[2, 3, 4],
            KRule::Const(2),
            TrendMode::Exact { budget: 1_000_000 },
        )
        .unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].exponent, 0);
        // Four of the 32 trees of size 2 over two variables are tautologies.
        assert_eq!(rows[0].exact, Some(ratio(4u32.into(), 32u32.into())));
        assert!((rows[0].normalized - 0.5).abs() < 1e-12);
        let x1 = AndOrTree::parse("x1").unwrap().truth_table(1).unwrap();
        let rows = theorem_trend(
            TrendTarget::Function(x1),
            ModelTag::E,
            &[3],
            KRule::Identity,
            TrendMode::Exact { budget: 1_000_000 },
        )
        .unwrap();
        assert_eq!(rows[0].exponent, 0);
        assert!(rows[0].probability > 0.0);
    }

    #[test]
    fn monte_carlo_matches_exact() {
        let conj = class_key(&AndOrTree::parse("(and x1 x2)").unwrap().truth_table(2).unwrap());
        for model in [ModelTag::G, ModelTag::E] {
            let exact = theorem_trend(
                TrendTarget::Class(conj),
                model,
                &[4],
                KRule::Const(3),
                TrendMode::Exact { budget: u64::MAX },
            )
            .unwrap();
            let mc = theorem_trend(
                TrendTarget::Class(conj),
                model,
                &[4],
                KRule::Const(3),
                TrendMode::MonteCarlo {
                    samples: 100_000,
                    seed: 4,
                },
            )
            .unwrap();
            let (lo, hi) = mc[0].ci.unwrap();
            assert!(
                lo <= exact[0].probability && exact[0].probability <= hi,
                "{model}: {mc:?} vs {exact:?}"
            );
        }
        let f = AndOrTree::parse("(or x1 (not x2))").unwrap().truth_table(2).unwrap();
        let exact = theorem_trend(
            TrendTarget::Function(f),
            ModelTag::G,
            &[5],
            KRule::Const(2),
            TrendMode::Exact { budget: u64::MAX },
        )
        .unwrap();
        let mc = theorem_trend(
            TrendTarget::Function(f),
            ModelTag::G,
            &[5],
            KRule::Const(2),
            TrendMode::MonteCarlo {
                samples: 100_000,
                seed: 8,
            },
        )
        .unwrap();
        let (lo, hi) = mc[0].ci.unwrap();
        assert!(lo <= exact[0].probability && exact[0].probability <= hi);
    }

    #[test]
    fn tautology_rows() {
        let exact = tautology_ratio_report(
            &[2, 4, 5],
            KRule::Const(2),
            ModelTag::G,
            TrendMode::Exact { budget: u64::MAX },
        )
        .unwrap();
        for r in &exact {
            assert!(r.t_over_s >= 1.0);
        }
        assert!((exact[0].mu_s - 4.0 / 32.0).abs() < 1e-12);
        let mc = tautology_ratio_report(
            &[5],
            KRule::Const(2),
            ModelTag::G,
            TrendMode::MonteCarlo {
                samples: 200_000,
                seed: 3,
            },
        )
        .unwrap();
        let (lo, hi) = mc[0].ci_t.unwrap();
        assert!(lo <= exact[2].mu_t && exact[2].mu_t <= hi);
        let (lo, hi) = mc[0].ci_s.unwrap();
        assert!(lo <= exact[2].mu_s && exact[2].mu_s <= hi);
    }
}
