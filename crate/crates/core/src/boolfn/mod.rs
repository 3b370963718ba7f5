//! Boolean functions as truth tables.
//!
//! Bit `j` of a table on `m` variables is the value at the assignment where
//! `x(i+1)` is bit `i` of `j`. Tables hold up to [`TruthTable::MAX_SUPPORT`]
//! variables; complexity questions are capped lower, see [`complexity`].

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod class;
pub mod complexity;

pub use class::{class_cardinality, class_key, ClassCardinality, FunctionClassKey};
pub use complexity::{complexity, minimal_trees, multiplicity, DEFAULT_MAX_SUPPORT};

/// `VAR_MASKS[i]` is the table of `x(i+1)` over six variables.
pub const VAR_MASKS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Table of the literal with index `lit` (see `Literal::index`).
#[inline]
pub fn lit_mask(lit: u8) -> u64 {
    let w = VAR_MASKS[(lit >> 1) as usize];
    if lit & 1 == 0 {
        w
    } else {
        !w
    }
}

/// Mask of the `2^m` meaningful bits.
#[inline]
pub fn full_mask(m: u32) -> u64 {
    if m >= 6 {
        !0
    } else {
        (1u64 << (1u32 << m)) - 1
    }
}

/// A Boolean function of `x1..xm`. `m = 0` is allowed for the two constants
/// seen as functions of no variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TruthTable {
    support: u32,
    bits: u64,
}

impl TruthTable {
    pub const MAX_SUPPORT: usize = 6;

    /// Keeps the low `2^m` bits of `bits`.
    pub fn from_bits(m: u32, bits: u64) -> Self {
        assert!(
            m as usize <= Self::MAX_SUPPORT,
            "support {m} exceeds {}",
            Self::MAX_SUPPORT
        );
        TruthTable {
            support: m,
            bits: bits & full_mask(m),
        }
    }

    pub fn try_from_bits(m: u32, bits: u64) -> Result<Self> {
        if m as usize > Self::MAX_SUPPORT {
            return Err(Error::SupportTooLarge {
                support: m as usize,
                max: Self::MAX_SUPPORT,
            });
        }
        Ok(Self::from_bits(m, bits))
    }

    pub fn constant(m: u32, value: bool) -> Self {
        Self::from_bits(m, if value { !0 } else { 0 })
    }

    pub fn var(m: u32, var: u32) -> Self {
        assert!(var >= 1 && var <= m);
        Self::from_bits(m, VAR_MASKS[(var - 1) as usize])
    }

    pub fn support(&self) -> u32 {
        self.support
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, assignment: u64) -> bool {
        self.bits >> assignment & 1 == 1
    }

    pub fn is_true(&self) -> bool {
        self.bits == full_mask(self.support)
    }

    pub fn is_false(&self) -> bool {
        self.bits == 0
    }

    pub fn is_constant(&self) -> bool {
        self.is_true() || self.is_false()
    }

    pub fn not(&self) -> Self {
        Self::from_bits(self.support, !self.bits)
    }

    pub fn and(&self, other: &Self) -> Self {
        assert_eq!(self.support, other.support);
        Self::from_bits(self.support, self.bits & other.bits)
    }

    pub fn or(&self, other: &Self) -> Self {
        assert_eq!(self.support, other.support);
        Self::from_bits(self.support, self.bits | other.bits)
    }

    /// Whether `x(var)` is essential.
    pub fn depends_on(&self, var: u32) -> bool {
        if var == 0 || var > self.support {
            return false;
        }
        let mask = VAR_MASKS[(var - 1) as usize];
        let shift = 1u32 << (var - 1);
        let hi = self.bits & mask;
        let lo = self.bits & !mask & full_mask(self.support);
        (hi >> shift) != lo
    }

    pub fn essential_variables(&self) -> BTreeSet<u32> {
        (1..=self.support).filter(|&v| self.depends_on(v)).collect()
    }

    pub fn essential_count(&self) -> usize {
        self.essential_variables().len()
    }

    /// The function on its essential variables only, renumbered
    /// `x1..xE` in increasing order, together with the original indices.
    pub fn project_essential(&self) -> (TruthTable, Vec<u32>) {
        let vars: Vec<u32> = self.essential_variables().into_iter().collect();
        let e = vars.len() as u32;
        let mut bits = 0u64;
        for a in 0..1u64 << e {
            // Spread `a` onto the essential positions; the rest stay 0.
            let mut full = 0u64;
            for (j, &v) in vars.iter().enumerate() {
                full |= (a >> j & 1) << (v - 1);
            }
            bits |= u64::from(self.get(full)) << a;
        }
        (TruthTable::from_bits(e, bits), vars)
    }

    /// The same function seen on `m` variables. Fails when it depends on a
    /// variable above `m`.
    pub fn with_support(&self, m: u32) -> Result<Self> {
        if m as usize > Self::MAX_SUPPORT {
            return Err(Error::SupportTooLarge {
                support: m as usize,
                max: Self::MAX_SUPPORT,
            });
        }
        if let Some(&v) = self.essential_variables().iter().find(|&&v| v > m) {
            return crate::error::domain(format!("function depends on x{v}, outside {m} variables"));
        }
        let mut bits = 0u64;
        let low = (1u64 << self.support.min(m)) - 1;
        for a in 0..1u64 << m {
            let src = a & low;
            bits |= u64::from(self.get(src)) << a;
        }
        Ok(Self::from_bits(m, bits))
    }

    /// `g(a) = f(b)` with `b_i = a_{perm[i]} xor flip_i`.
    pub fn transform(&self, perm: &[usize], flips: u64) -> Self {
        let m = self.support;
        debug_assert_eq!(perm.len(), m as usize);
        let mut bits = 0u64;
        for a in 0..1u64 << m {
            let mut b = 0u64;
            for (i, &p) in perm.iter().enumerate() {
                b |= ((a >> p & 1) ^ (flips >> i & 1)) << i;
            }
            bits |= u64::from(self.get(b)) << a;
        }
        Self::from_bits(m, bits)
    }

    fn hex_width(&self) -> usize {
        ((1usize << self.support) / 4).max(1)
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={}:0x{:0w$x}", self.support, self.bits, w = self.hex_width())
    }
}

impl FromStr for TruthTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |position: usize, message: &str| Error::Parse {
            position,
            message: message.to_string(),
        };
        let rest = s.strip_prefix("m=").ok_or_else(|| err(0, "expected `m=`"))?;
        let colon = rest.find(':').ok_or_else(|| err(s.len(), "expected `:`"))?;
        let m: u32 = rest[..colon]
            .parse()
            .map_err(|_| err(2, "expected the number of variables"))?;
        if m as usize > Self::MAX_SUPPORT {
            return Err(Error::SupportTooLarge {
                support: m as usize,
                max: Self::MAX_SUPPORT,
            });
        }
        let hex_at = 2 + colon + 1;
        let hex = rest[colon + 1..]
            .strip_prefix("0x")
            .ok_or_else(|| err(hex_at, "expected `0x`"))?;
        if hex.is_empty() || !hex.bytes().all(|b| b.is_ascii_hexdigit()) || hex.len() > 16 {
            return Err(err(hex_at + 2, "expected hexadecimal digits"));
        }
        let bits = u64::from_str_radix(hex, 16).map_err(|_| err(hex_at + 2, "bad hexadecimal"))?;
        if bits & !full_mask(m) != 0 {
            return Err(err(hex_at + 2, "table has bits beyond 2^m entries"));
        }
        Ok(Self::from_bits(m, bits))
    }
}
