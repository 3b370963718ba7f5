//! Self-checks of the library against independent computations and the
//! exact identities of the theory. Each suite returns named checks.

use std::collections::HashMap;

use num_bigint::BigUint;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::boolfn::{class_key, complexity, TruthTable};
use crate::combinatorics::{
    bonferroni_holds, count_trees, is_unimodal_at_threshold, rat_exact, ratio, ratio_to_f64, threshold_m, ModelTag,
};
use crate::distribution::{exact_distribution, FunctionKey};
use crate::error::{domain, Result};
use crate::patterns::{decompose_shape, forcing_check_shape, tautology_census, PatternLangId};
use crate::quotient::for_each_tree;
use crate::sampling::{sample_fold, Seed};
use crate::tree::shapes;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub const SUITES: &[&str] = &[
    "counts",
    "bonferroni",
    "unimodality",
    "rat",
    "tautology",
    "forcing",
    "complexity",
    "sampler",
    "patterns",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyParams {
    /// Overrides the suite's default size bound.
    pub n_max: Option<u32>,
    pub samples: u64,
    pub seed: Seed,
    pub budget: u64,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams {
            n_max: None,
            samples: 1_000_000,
            seed: 1,
            budget: u64::MAX,
        }
    }
}

pub fn run_suite(name: &str, params: &VerifyParams) -> Result<SuiteReport> {
    let n = |default: u32| params.n_max.unwrap_or(default);
    let checks = match name {
        "counts" => counts_suite(n(6), 3, params.budget)?,
        "bonferroni" => vec![bonferroni_suite(n(200))],
        "unimodality" => unimodality_suite(n(500)),
        "rat" => rat_suite(n(60), 10)?,
        "tautology" => tautology_suite(n(5), 2, params.budget)?,
        "forcing" => vec![forcing_suite(n(6))?],
        "complexity" => complexity_suite()?,
        "sampler" => sampler_suite(params.samples, params.seed)?,
        "patterns" => vec![decomposition_suite(n(7))?],
        _ => {
            return domain(format!(
                "unknown suite `{name}`; known suites: {}, all",
                SUITES.join(", ")
            ))
        }
    };
    Ok(SuiteReport {
        suite: name.to_string(),
        checks,
    })
}

pub fn run_all(params: &VerifyParams) -> Result<Vec<SuiteReport>> {
    SUITES.iter().map(|s| run_suite(s, params)).collect()
}

/// Enumerated counts against the closed forms for `n <= n_max`, `k <= k_max`.
pub fn counts_suite(n_max: u32, k_max: u32, budget: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for model in [ModelTag::G, ModelTag::E] {
        for n in 1..=n_max {
            for k in 1..=k_max {
                let visited = for_each_tree(n, k, model, budget, |_| {})?;
                let formula = count_trees(n, k, model)?;
                checks.push(Check::new(
                    format!("count {model} n={n} k={k}"),
                    BigUint::from(visited) == formula,
                    format!("enumerated {visited}, formula {formula}"),
                ));
            }
        }
    }
    Ok(checks)
}

pub fn bonferroni_suite(n_max: u32) -> Check {
    let failures: Vec<(u32, u32)> = (1..=n_max)
        .flat_map(|n| (1..=n).map(move |p| (n, p)))
        .filter(|&(n, p)| !bonferroni_holds(n, p).unwrap_or(false))
        .collect();
    Check::new(
        format!("bonferroni n<={n_max}"),
        failures.is_empty(),
        format!(
            "{} failing (n, p) pairs {:?}",
            failures.len(),
            &failures[..failures.len().min(5)]
        ),
    )
}

pub fn unimodality_suite(n_max: u32) -> Vec<Check> {
    let bad: Vec<u32> = (1..=n_max).filter(|&n| !is_unimodal_at_threshold(n)).collect();
    let mut decreasing = Vec::new();
    let mut prev = threshold_m(10);
    for n in 11..=n_max.max(2000) {
        let m = threshold_m(n);
        if m < prev {
            decreasing.push(n);
        }
        prev = m;
    }
    vec![
        Check::new(
            format!("unimodal n<={n_max}"),
            bad.is_empty(),
            format!("failing n: {bad:?}"),
        ),
        Check::new(
            "threshold non-decreasing",
            decreasing.is_empty(),
            format!("decreases at {decreasing:?}"),
        ),
    ]
}

pub fn rat_suite(n_max: u32, k_max: u32) -> Result<Vec<Check>> {
    let mut bad = Vec::new();
    for n in 2..=n_max {
        for k in 1..=k_max {
            if rat_exact(n, k, ModelTag::G)? != ratio(1u32.into(), (2 * k).into()) {
                bad.push((n, k));
            }
        }
    }
    Ok(vec![Check::new(
        "rat G = 1/(2k)",
        bad.is_empty(),
        format!("failing (n, k): {bad:?}"),
    )])
}

/// Every tautology has an `N^(2)`-repetition, and those with exactly one are
/// simple.
pub fn tautology_suite(n_max: u32, k_max: u32, budget: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for model in [ModelTag::G, ModelTag::E] {
        for n in 1..=n_max {
            for k in 1..=k_max {
                let c = tautology_census(n, k, model, budget)?;
                let not_simple = &c.one_nn_repetition - &c.one_nn_repetition_simple;
                checks.push(Check::new(
                    format!("tautologies {model} n={n} k={k}"),
                    c.no_nn_repetition == BigUint::from(0u32) && not_simple == BigUint::from(0u32),
                    format!(
                        "{} tautologies, {} without repetition, {} with one repetition and not simple",
                        c.tautologies, c.no_nn_repetition, not_simple
                    ),
                ));
            }
        }
    }
    Ok(checks)
}

pub fn forcing_suite(n_max: u32) -> Result<Check> {
    let mut failures = Vec::new();
    let mut checked = 0;
    for n in 1..=n_max {
        for s in shapes(n)? {
            for lang in [PatternLangId::N, PatternLangId::P] {
                checked += 1;
                if !forcing_check_shape(&s, lang)? {
                    failures.push(format!("{lang} {s}"));
                }
            }
        }
    }
    Ok(Check::new(
        format!("forcing n<={n_max}"),
        failures.is_empty(),
        format!("{checked} checks, failures: {:?}", &failures[..failures.len().min(5)]),
    ))
}

pub fn complexity_suite() -> Result<Vec<Check>> {
    let l = |s: &str| -> Result<u32> { complexity(&s.parse::<TruthTable>()?) };
    let mut checks = vec![
        Check::new("L(true) = 0", l("m=0:0x1")? == 0, ""),
        Check::new("L(x1) = 1", l("m=1:0x2")? == 1, ""),
        Check::new("L(not x1) = 1", l("m=1:0x1")? == 1, ""),
        Check::new("L(xor) = 4", l("m=2:0x6")? == 4, format!("got {}", l("m=2:0x6")?)),
    ];
    let mut bad = Vec::new();
    for bits in 0..256u64 {
        let f = TruthTable::from_bits(3, bits);
        let e = f.essential_count() as u32;
        let c = complexity(&f)?;
        if e > c || c > 1 << (e + 2) {
            bad.push(f.to_string());
        }
    }
    checks.push(Check::new(
        "E <= L <= 2^(E+2) on three variables",
        bad.is_empty(),
        format!("failing: {bad:?}"),
    ));
    Ok(checks)
}

/// Goodness of fit of sampled functions against the exact distribution.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SamplerFit {
    pub n: u32,
    pub k: u32,
    pub model: ModelTag,
    pub samples: u64,
    pub chi_square: f64,
    pub dof: usize,
    pub p_value: f64,
    pub total_variation: f64,
}

pub fn sampler_fit(n: u32, k: u32, model: ModelTag, samples: u64, seed: Seed) -> Result<SamplerFit> {
    let exact = exact_distribution(n, k, model, u64::MAX)?;
    let support = match model {
        ModelTag::G => k,
        ModelTag::E => k.min(n),
    };
    let observed = sample_fold(
        n,
        k,
        model,
        samples,
        seed,
        HashMap::<u64, u64>::new,
        |acc, t| *acc.entry(t.table_bits()).or_default() += 1,
        |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        },
    )?;
    let mut by_key: HashMap<FunctionKey, u64> = HashMap::new();
    for (bits, c) in observed {
        let t = TruthTable::from_bits(support, bits);
        let key = match model {
            ModelTag::G => FunctionKey::Table(t),
            ModelTag::E => FunctionKey::Class(class_key(&t)),
        };
        *by_key.entry(key).or_default() += c;
    }
    let total = samples as f64;
    let mut chi = 0.0;
    let mut tv = 0.0;
    for (key, mass) in exact.masses() {
        let p = ratio_to_f64(&mass);
        let o = by_key.remove(key).unwrap_or(0) as f64;
        chi += (o - p * total).powi(2) / (p * total);
        tv += (o / total - p).abs();
    }
    // Anything left was sampled outside the support of the exact law.
    let stray: u64 = by_key.values().sum();
    if stray > 0 {
        chi = f64::INFINITY;
        tv += stray as f64 / total;
    }
    let dof = exact.counts.len() - 1;
    let p_value = if chi.is_finite() {
        1.0 - ChiSquared::new(dof as f64)
            .map_err(|e| crate::Error::Domain(e.to_string()))?
            .cdf(chi)
    } else {
        0.0
    };
    Ok(SamplerFit {
        n,
        k,
        model,
        samples,
        chi_square: chi,
        dof,
        p_value,
        total_variation: tv / 2.0,
    })
}

pub fn sampler_suite(samples: u64, seed: Seed) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for model in [ModelTag::G, ModelTag::E] {
        for (n, k) in [(3, 2), (4, 2)] {
            let fit = sampler_fit(n, k, model, samples, seed)?;
            checks.push(Check::new(
                format!("sampler {model} n={n} k={k}"),
                fit.p_value >= 1e-3 && fit.total_variation < 0.01,
                format!(
                    "chi2 = {:.2} on {} dof, p = {:.4}, TV = {:.5}",
                    fit.chi_square, fit.dof, fit.p_value, fit.total_variation
                ),
            ));
        }
    }
    Ok(checks)
}

/// Pattern leaves and placeholders partition the leaves of every shape.
pub fn decomposition_suite(n_max: u32) -> Result<Check> {
    let langs = [
        PatternLangId::N,
        PatternLangId::P,
        PatternLangId::M,
        PatternLangId::NPow(2),
        PatternLangId::R(1),
        PatternLangId::RBar(1),
    ];
    let mut failures = Vec::new();
    for n in 1..=n_max {
        for s in shapes(n)? {
            for lang in langs {
                let d = decompose_shape(&s, lang)?;
                let mut covered: Vec<usize> = d.positions().collect();
                for r in &d.placeholders {
                    covered.extend(r.clone());
                }
                covered.sort_unstable();
                if covered != (0..n as usize).collect::<Vec<_>>() {
                    failures.push(format!("{lang} {s}"));
                }
            }
        }
    }
    Ok(Check::new(
        format!("decompositions partition leaves n<={n_max}"),
        failures.is_empty(),
        format!("failures: {:?}", &failures[..failures.len().min(5)]),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suites_pass() {
        let params = VerifyParams {
            n_max: Some(4),
            samples: 20_000,
            ..Default::default()
        };
        for s in [
            "counts",
            "bonferroni",
            "unimodality",
            "rat",
            "tautology",
            "forcing",
            "complexity",
            "patterns",
        ] {
            let r = run_suite(s, &params).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        assert!(run_suite("nope", &params).is_err());
    }

    #[test]
    fn sampler_fits_both_models() {
        for model in [ModelTag::G, ModelTag::E] {
            let fit = sampler_fit(3, 2, model, 200_000, 3).unwrap();
            assert!(fit.p_value > 1e-3 && fit.total_variation < 0.01, "{fit:?}");
            assert!(fit.dof > 0);
        }
    }
}
