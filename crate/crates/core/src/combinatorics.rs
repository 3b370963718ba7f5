//! Exact counting sequences: Catalan numbers, Stirling numbers of the second
//! kind, leaf-labelling counts, the ratio `rat_n` and the unimodal sequence
//! whose mode `M_n` separates the two regimes of the quotient model.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Arbitrary-precision non-negative count.
pub type BigCount = BigUint;

/// Exact rational, always in lowest terms with a positive denominator.
pub type ExactRatio = BigRational;

/// Which uniform distribution a count or probability refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelTag {
    /// Uniform over labelled trees.
    G,
    /// Uniform over equivalence classes of trees.
    E,
}

impl fmt::Display for ModelTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelTag::G => f.write_str("G"),
            ModelTag::E => f.write_str("E"),
        }
    }
}

impl FromStr for ModelTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "G" | "g" => Ok(ModelTag::G),
            "E" | "e" => Ok(ModelTag::E),
            other => domain(format!("unknown model `{other}` (expected G or E)")),
        }
    }
}

/// Number of binary plane trees with `n` leaves, `binom(2n-2, n-1) / n`.
pub fn catalan_leaves(n: u32) -> Result<BigCount> {
    if n == 0 {
        return domain("catalan_leaves needs n >= 1");
    }
    Ok(binomial(2 * (n as u64 - 1), n as u64 - 1) / BigUint::from(n))
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Falling factorial `k (k-1) ... (k-j+1)`.
pub fn falling_factorial(k: u64, j: u64) -> BigUint {
    if j > k {
        return BigUint::zero();
    }
    (0..j).fold(BigUint::one(), |acc, i| acc * (k - i))
}

// Rows up to this index stay cached forever; larger rows are kept only while
// they are among the few most recently computed.
const SMALL_ROWS: u32 = 128;
const LARGE_ROWS_KEPT: usize = 4;

#[derive(Default)]
struct StirlingCache {
    rows: BTreeMap<u32, Arc<Vec<BigUint>>>,
    large: Vec<u32>,
}

fn stirling_cache() -> &'static Mutex<StirlingCache> {
    static CACHE: OnceLock<Mutex<StirlingCache>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn advance_row(row: &mut Vec<BigUint>) {
    // {m+1, p} = p {m, p} + {m, p-1}, updated in place from the top down.
    row.push(BigUint::zero());
    for p in (1..row.len()).rev() {
        let (lo, hi) = row.split_at_mut(p);
        hi[0] *= p as u64;
        hi[0] += &lo[p - 1];
    }
    row[0] = BigUint::zero();
}

/// The full row `{n, 0}, ..., {n, n}`.
pub fn stirling_row(n: u32) -> Arc<Vec<BigUint>> {
    let start = {
        let cache = stirling_cache().lock().expect("stirling cache poisoned");
        if let Some(row) = cache.rows.get(&n) {
            return Arc::clone(row);
        }
        cache.rows.range(..=n).next_back().map(|(&m, row)| (m, Arc::clone(row)))
    };
    let (mut m, mut row) = match start {
        Some((m, row)) => (m, row.as_ref().clone()),
        None => (0, vec![BigUint::one()]),
    };
    let mut small = Vec::new();
    while m < n {
        advance_row(&mut row);
        m += 1;
        if m <= SMALL_ROWS && m < n {
            small.push((m, Arc::new(row.clone())));
        }
    }
    let row = Arc::new(row);
    let mut cache = stirling_cache().lock().expect("stirling cache poisoned");
    for (m, r) in small {
        cache.rows.entry(m).or_insert(r);
    }
    cache.rows.entry(n).or_insert_with(|| Arc::clone(&row));
    if n > SMALL_ROWS && !cache.large.contains(&n) {
        cache.large.push(n);
        if cache.large.len() > LARGE_ROWS_KEPT {
            let evicted = cache.large.remove(0);
            cache.rows.remove(&evicted);
        }
    }
    row
}

/// Stirling number of the second kind `{n brace p}`.
pub fn stirling2(n: u32, p: u32) -> BigCount {
    if p > n {
        return BigUint::zero();
    }
    stirling_row(n)[p as usize].clone()
}

/// Table `t[m][q] = {m, q}` for `m <= n_max`, `q <= q_max`.
pub fn stirling_table(n_max: u32, q_max: u32) -> Vec<Vec<BigUint>> {
    let width = q_max as usize + 1;
    let mut row = vec![BigUint::one()];
    let mut out = Vec::with_capacity(n_max as usize + 1);
    let truncate = |row: &Vec<BigUint>| {
        let mut r: Vec<BigUint> = row.iter().take(width).cloned().collect();
        r.resize(width, BigUint::zero());
        r
    };
    out.push(truncate(&row));
    for _ in 0..n_max {
        advance_row(&mut row);
        // Columns above q_max never feed back into columns <= q_max.
        row.truncate(width);
        out.push(truncate(&row));
    }
    out
}

/// Number of ways to label `n` leaves with `m` variables.
///
/// Model G counts literal sequences, `(2m)^n`. Model E counts canonical
/// labellings, `sum_{p <= min(m, n)} {n brace p} 2^(n-p)`.
pub fn lab(n: u32, m: u32, model: ModelTag) -> Result<BigCount> {
    if n == 0 || m == 0 {
        return domain("lab needs n >= 1 and m >= 1");
    }
    Ok(match model {
        ModelTag::G => num_traits::pow(BigUint::from(2 * m as u64), n as usize),
        ModelTag::E => {
            let row = stirling_row(n);
            (1..=m.min(n)).map(|p| &row[p as usize] << (n - p) as usize).sum()
        }
    })
}

/// Number of trees (G) or tree classes (E) of size `n` on at most `k` variables.
pub fn count_trees(n: u32, k: u32, model: ModelTag) -> Result<BigCount> {
    let shapes = catalan_leaves(n)? << (n - 1) as usize;
    Ok(shapes * lab(n, k, model)?)
}

/// Number of connective-labelled shapes with `n` leaves, `2^(n-1) Cat_n`.
pub fn count_shapes(n: u32) -> Result<BigCount> {
    Ok(catalan_leaves(n)? << (n - 1) as usize)
}

pub(crate) fn ratio(num: BigUint, den: BigUint) -> ExactRatio {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `rat_n = Lab(n-1, k) / Lab(n, k)`, exactly.
pub fn rat_exact(n: u32, k: u32, model: ModelTag) -> Result<ExactRatio> {
    if n < 2 {
        return domain("rat_exact needs n >= 2");
    }
    Ok(ratio(lab(n - 1, k, model)?, lab(n, k, model)?))
}

/// Which side of the threshold `M_n` a number of variables sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `k <= M_n`: `rat_n ~ 1/(2k)`.
    Below,
    /// `k > M_n`: `rat_n ~ ln n / (2n)`.
    Above,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Below => "k<=M_n",
            Regime::Above => "k>M_n",
        })
    }
}

pub fn regime(n: u32, k: u32) -> Regime {
    if (k as u64) <= threshold_m(n) {
        Regime::Below
    } else {
        Regime::Above
    }
}

/// Leading-order value of `rat_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticRat {
    /// Exact rational; for the `ln n / 2n` branch this is the exact binary
    /// value of the `f64` approximation.
    pub value: ExactRatio,
    pub approx: f64,
    /// `None` for model G, which has a single regime.
    pub regime: Option<Regime>,
}

pub fn rat_asymptotic(n: u32, k: u32, model: ModelTag) -> Result<AsymptoticRat> {
    if n < 2 || k == 0 {
        return domain("rat_asymptotic needs n >= 2 and k >= 1");
    }
    let small_k = || AsymptoticRat {
        value: ratio(BigUint::one(), BigUint::from(2 * k as u64)),
        approx: 1.0 / (2.0 * k as f64),
        regime: None,
    };
    Ok(match model {
        ModelTag::G => small_k(),
        ModelTag::E => match regime(n, k) {
            Regime::Below => AsymptoticRat {
                regime: Some(Regime::Below),
                ..small_k()
            },
            Regime::Above => {
                let approx = (n as f64).ln() / (2.0 * n as f64);
                AsymptoticRat {
                    value: BigRational::from_float(approx).expect("finite"),
                    approx,
                    regime: Some(Regime::Above),
                }
            }
        },
    })
}

/// `a_p^(n) = p^n / (p! 2^p)`.
pub fn a_term(n: u32, p: u32) -> Result<ExactRatio> {
    if p == 0 || p > n {
        return domain(format!("a_term needs 1 <= p <= n, got p = {p}, n = {n}"));
    }
    let num = num_traits::pow(BigUint::from(p), n as usize);
    let den = factorial(p as u64) << p as usize;
    Ok(ratio(num, den))
}

/// Compares `a_{p+1}` with `a_p` exactly through `(p+1)^n` vs `2 (p+1) p^n`.
pub fn a_step_cmp(n: u32, p: u32) -> std::cmp::Ordering {
    let lhs = num_traits::pow(BigUint::from(p as u64 + 1), n as usize);
    let rhs = num_traits::pow(BigUint::from(p), n as usize) * (2 * (p as u64 + 1));
    lhs.cmp(&rhs)
}

/// True when `a_{p+1} > a_p`.
fn a_increases(n: u32, p: u32) -> bool {
    let phi = n as f64 * (1.0 / p as f64).ln_1p() - (2.0 * (p as f64 + 1.0)).ln();
    let scale = n as f64 * (1.0 / p as f64).ln_1p() + 1.0;
    if phi.abs() > 1e-9 * scale {
        phi > 0.0
    } else {
        a_step_cmp(n, p) == std::cmp::Ordering::Greater
    }
}

/// The mode `M_n` of `p -> a_p^(n)` on `1..=n`.
///
/// The step ratio `a_{p+1}/a_p` is decreasing in `p`, so `M_n` is the first
/// `p` where it drops to at most 1 (a ratio of exactly 1 resolves to the
/// smaller index). Signs are read from `f64` logarithms and re-derived in
/// exact integer arithmetic whenever the margin is too thin to trust.
pub fn threshold_m(n: u32) -> u64 {
    if n <= 1 {
        return 1;
    }
    // Smallest p in [1, n-1] with a_{p+1} <= a_p; n when there is none.
    let (mut lo, mut hi) = (1u32, n);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if a_increases(n, mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo as u64
}

/// Exact check that `p -> a_p^(n)` is strictly increasing on `1..=M_n` and
/// strictly decreasing on `M_n+1..=n`.
pub fn is_unimodal_at_threshold(n: u32) -> bool {
    use std::cmp::Ordering::*;
    let m = threshold_m(n) as u32;
    (1..n).all(|p| {
        let ord = a_step_cmp(n, p);
        match p.cmp(&m) {
            Less => ord == Greater,
            Equal => true,
            Greater => ord == Less,
        }
    })
}

/// Bonferroni bounds `p^n/p! - (p-1)^n/(p-1)! <= {n brace p} <= p^n/p!`,
/// checked after multiplying through by `p!`.
pub fn bonferroni_holds(n: u32, p: u32) -> Result<bool> {
    if p == 0 || p > n {
        return domain(format!("bonferroni_holds needs 1 <= p <= n, got p = {p}, n = {n}"));
    }
    let upper = BigInt::from(num_traits::pow(BigUint::from(p), n as usize));
    let lower = &upper - BigInt::from(num_traits::pow(BigUint::from(p - 1), n as usize) * p);
    let scaled = BigInt::from(stirling2(n, p) * factorial(p as u64));
    Ok(lower <= scaled && scaled <= upper)
}

/// Share of `sum_{p<=k} {n brace p} 2^-p` carried by the window `lo..=hi`.
pub fn concentration_window_mass(n: u32, k: u32, lo: u32, hi: u32) -> Result<ExactRatio> {
    if !(1 <= lo && lo <= hi && hi <= k && k <= n) {
        return domain(format!(
            "window needs 1 <= lo <= hi <= k <= n, got lo = {lo}, hi = {hi}, k = {k}, n = {n}"
        ));
    }
    let row = stirling_row(n);
    // Scale every term by 2^k to stay in integers.
    let term = |p: u32| &row[p as usize] << (k - p) as usize;
    let window: BigUint = (lo..=hi).map(term).sum();
    let total: BigUint = (1..=k).map(term).sum();
    Ok(ratio(window, total))
}

/// Coefficients `I_1..I_{n_max}` of `I(z) = z + 2 I(z)^2`.
pub fn series_i(n_max: u32) -> Vec<BigCount> {
    let mut coeffs: Vec<BigUint> = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max as usize {
        let mut c = if n == 1 { BigUint::one() } else { BigUint::zero() };
        let mut conv = BigUint::zero();
        for i in 1..n {
            conv += &coeffs[i - 1] * &coeffs[n - i - 1];
        }
        c += conv << 1;
        coeffs.push(c);
    }
    coeffs
}

/// Lossy conversion for reports.
pub fn ratio_to_f64(r: &ExactRatio) -> f64 {
    // Shift both sides down so huge numerators and denominators survive.
    let (num, den) = (r.numer().clone(), r.denom().clone());
    let shift = num.bits().max(den.bits()).saturating_sub(1000) as usize;
    let (num, den) = (num >> shift, den >> shift);
    match (num.to_f64(), den.to_f64()) {
        (Some(a), Some(b)) if b != 0.0 => a / b,
        _ => f64::NAN,
    }
}
