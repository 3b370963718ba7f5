//! Function classes under renaming and negation of variables.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::TruthTable;
use crate::combinatorics::binomial;
use crate::error::{domain, Result};

/// Canonical representative of a class: the smallest table, read as an
/// integer, among all renamings and negations of the essential variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FunctionClassKey {
    table: TruthTable,
}

impl FunctionClassKey {
    /// Number of essential variables.
    pub fn support(&self) -> u32 {
        self.table.support()
    }

    pub fn bits(&self) -> u64 {
        self.table.bits()
    }

    /// The canonical member, on `x1..xE`.
    pub fn table(&self) -> TruthTable {
        self.table
    }
}

impl fmt::Display for FunctionClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.table.fmt(f)
    }
}

/// Every transform of a table on its own support, in a fixed order.
fn transforms(f: &TruthTable) -> impl Iterator<Item = TruthTable> + '_ {
    let m = f.support() as usize;
    (0..m)
        .permutations(m)
        .flat_map(move |perm| (0..1u64 << m).map(move |flips| f.transform(&perm, flips)))
}

pub fn class_key(f: &TruthTable) -> FunctionClassKey {
    let (p, _) = f.project_essential();
    let table = transforms(&p).min_by_key(|t| t.bits()).expect("at least the identity");
    FunctionClassKey { table }
}

/// The class of `f` on its essential variables.
pub fn orbit(f: &TruthTable) -> BTreeSet<TruthTable> {
    let (p, _) = f.project_essential();
    transforms(&p).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCardinality {
    /// Number of functions of `x1..xk` in the class.
    pub exact: BigUint,
    /// `binom(k, E) 2^E`, the count when no renaming or negation fixes `f`.
    pub generic: BigUint,
    /// Number of renamings and negations of the essential variables fixing `f`.
    pub stabilizer: u64,
}

/// Size of the class of `f` among functions of `k` variables.
pub fn class_cardinality(f: &TruthTable, k: u32) -> Result<ClassCardinality> {
    let e = f.essential_count() as u32;
    if e > k {
        return domain(format!("function has {e} essential variables, more than k = {k}"));
    }
    let orbit = orbit(f).len() as u64;
    let group = (1..=e as u64).product::<u64>() << e;
    let choose = binomial(k as u64, e as u64);
    Ok(ClassCardinality {
        exact: &choose * orbit,
        generic: choose << e as usize,
        stabilizer: group / orbit,
    })
}
