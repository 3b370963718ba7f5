//! Exact distributions on functions (model G) and function classes (model E)
//! at small sizes, and the experiment drivers built on them.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::boolfn::{class_key, FunctionClassKey, TruthTable, VAR_MASKS};
use crate::combinatorics::{count_trees, ratio, BigCount, ExactRatio, ModelTag};
use crate::error::{domain, Error, Result};
use crate::quotient::for_each_tree;
use crate::sampling::{estimate, EstimateReport, Seed};
use crate::tree::solve::probe_words;
use crate::tree::FlatTree;

mod trend;

pub use trend::{tautology_ratio_report, theorem_trend, TautologyRow, TrendMode, TrendRow, TrendTarget};

/// What a distribution is indexed by: truth tables in model G, function
/// classes in model E.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FunctionKey {
    Table(TruthTable),
    Class(FunctionClassKey),
}

impl fmt::Display for FunctionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionKey::Table(t) => t.fmt(f),
            FunctionKey::Class(c) => write!(f, "<{c}>"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactDistribution {
    pub model: ModelTag,
    pub n: u32,
    pub k: u32,
    /// Number of trees (G) or classes (E).
    pub total: BigCount,
    /// Trees or classes computing each function; tables are on `x1..xk`.
    pub counts: BTreeMap<FunctionKey, BigCount>,
}

impl ExactDistribution {
    pub fn mass(&self, key: &FunctionKey) -> ExactRatio {
        let c = self.counts.get(key).cloned().unwrap_or_default();
        ratio(c, self.total.clone())
    }

    pub fn masses(&self) -> impl Iterator<Item = (&FunctionKey, ExactRatio)> {
        self.counts
            .iter()
            .map(|(k, c)| (k, ratio(c.clone(), self.total.clone())))
    }

    /// The key this distribution uses for `f`, or `None` when `f` cannot
    /// occur (it depends on a variable beyond `x_k`).
    pub fn key_of(&self, f: &TruthTable) -> Option<FunctionKey> {
        match self.model {
            ModelTag::G => f.with_support(self.k).ok().map(FunctionKey::Table),
            ModelTag::E => Some(FunctionKey::Class(class_key(f))),
        }
    }

    /// Model-G masses summed over function classes.
    pub fn class_masses(&self) -> BTreeMap<FunctionClassKey, ExactRatio> {
        let mut counts: BTreeMap<FunctionClassKey, BigCount> = BTreeMap::new();
        for (key, c) in &self.counts {
            let class = match key {
                FunctionKey::Table(t) => class_key(t),
                FunctionKey::Class(c) => *c,
            };
            *counts.entry(class).or_default() += c;
        }
        counts
            .into_iter()
            .map(|(k, c)| (k, ratio(c, self.total.clone())))
            .collect()
    }
}

/// Exact distribution by full enumeration.
pub fn exact_distribution(n: u32, k: u32, model: ModelTag, budget: u64) -> Result<ExactDistribution> {
    let support = match model {
        ModelTag::G => k,
        ModelTag::E => k.min(n),
    };
    if support as usize > TruthTable::MAX_SUPPORT {
        return Err(Error::SupportTooLarge {
            support: support as usize,
            max: TruthTable::MAX_SUPPORT,
        });
    }
    let mut by_table: HashMap<u64, u64> = HashMap::new();
    let total = for_each_tree(n, k, model, budget, |v| {
        *by_table.entry(v.table()).or_default() += 1;
    })?;
    let mut counts: BTreeMap<FunctionKey, BigCount> = BTreeMap::new();
    for (bits, c) in by_table {
        let table = TruthTable::from_bits(support, bits);
        let key = match model {
            ModelTag::G => FunctionKey::Table(table),
            ModelTag::E => FunctionKey::Class(class_key(&table)),
        };
        *counts.entry(key).or_default() += c;
    }
    debug_assert_eq!(BigUint::from(total), count_trees(n, k, model)?);
    Ok(ExactDistribution {
        model,
        n,
        k,
        total: total.into(),
        counts,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Function(TruthTable),
    Class(FunctionClassKey),
}

/// Probability of a function (or, in model G, of a whole class).
pub fn prob_of(n: u32, k: u32, model: ModelTag, target: Target, budget: u64) -> Result<ExactRatio> {
    let dist = exact_distribution(n, k, model, budget)?;
    Ok(match (model, target) {
        (_, Target::Function(f)) => match dist.key_of(&f) {
            Some(key) => dist.mass(&key),
            None => ExactRatio::zero(),
        },
        (ModelTag::E, Target::Class(c)) => dist.mass(&FunctionKey::Class(c)),
        (ModelTag::G, Target::Class(c)) => dist.class_masses().get(&c).cloned().unwrap_or_else(ExactRatio::zero),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SatProbability {
    Exact(ExactRatio),
    Estimate(EstimateReport),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SatMode {
    Exact { budget: u64 },
    MonteCarlo { samples: u64, seed: Seed },
}

/// Probability that a random tree (G) or class (E) is satisfiable.
pub fn sat_probability(n: u32, k: u32, model: ModelTag, mode: SatMode) -> Result<SatProbability> {
    match mode {
        SatMode::Exact { budget } => {
            let dist = exact_distribution(n, k, model, budget)?;
            let f = TruthTable::constant(0, false);
            let p_false = dist.key_of(&f).map(|key| dist.mass(&key)).unwrap_or_default();
            Ok(SatProbability::Exact(ExactRatio::one() - p_false))
        }
        SatMode::MonteCarlo { samples, seed } => Ok(SatProbability::Estimate(estimate(
            |t: &FlatTree| t.is_satisfiable(),
            n,
            k,
            model,
            samples,
            seed,
        )?)),
    }
}

/// A named map `n -> k_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KRule {
    Identity,
    /// `floor(sqrt n)`.
    Sqrt,
    /// `ceil(ln n)`.
    Log,
    Const(u32),
}

impl KRule {
    pub fn apply(&self, n: u32) -> u32 {
        let k = match *self {
            KRule::Identity => n,
            KRule::Sqrt => (n as f64).sqrt().floor() as u32,
            KRule::Log => (n as f64).ln().ceil() as u32,
            KRule::Const(c) => c,
        };
        k.max(1)
    }
}

impl fmt::Display for KRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KRule::Identity => f.write_str("identity"),
            KRule::Sqrt => f.write_str("sqrt"),
            KRule::Log => f.write_str("log"),
            KRule::Const(c) => write!(f, "const:{c}"),
        }
    }
}

impl FromStr for KRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(KRule::Identity),
            "sqrt" => Ok(KRule::Sqrt),
            "log" => Ok(KRule::Log),
            _ => match s.strip_prefix("const:").map(str::parse::<u32>) {
                Some(Ok(c)) if c >= 1 => Ok(KRule::Const(c)),
                _ => domain(format!(
                    "unknown k rule `{s}`; expected identity, sqrt, log or const:<c>"
                )),
            },
        }
    }
}

/// Values of `f` on the 64 assignments whose variable `i` reads bit lanes of
/// `words[i-1]`.
pub(crate) fn table_on_words(f: &TruthTable, words: &[u64]) -> u64 {
    let m = f.support() as usize;
    let mut out = 0u64;
    for a in 0..1u64 << m {
        if !f.get(a) {
            continue;
        }
        let mut lanes = !0u64;
        for (i, w) in words.iter().take(m).enumerate() {
            lanes &= if a >> i & 1 == 1 { *w } else { !*w };
        }
        out |= lanes;
    }
    out
}

/// Whether the tree computes exactly `f` as a function of all its variables.
pub fn tree_computes(t: &FlatTree, f: &TruthTable) -> bool {
    let m = f.support();
    let words = probe_words(t.max_var().max(m));
    let mut scratch = Vec::new();
    if t.eval_words(&words, &mut scratch) != table_on_words(f, &words) {
        return false;
    }
    let support: Vec<u32> = (1..=m).collect();
    t.computes(&support, |a| f.get(a))
}

/// The class of the function computed by the tree, if it has at most
/// `max_support` essential variables.
pub fn tree_class(t: &FlatTree, max_support: usize) -> Option<FunctionClassKey> {
    let vars = t.essential_variables(max_support.min(TruthTable::MAX_SUPPORT))?;
    let mut words = vec![0u64; t.max_var() as usize];
    for (j, &v) in vars.iter().enumerate() {
        words[(v - 1) as usize] = VAR_MASKS[j];
    }
    let bits = t.eval_words(&words, &mut Vec::new());
    Some(class_key(&TruthTable::from_bits(vars.len() as u32, bits)))
}
