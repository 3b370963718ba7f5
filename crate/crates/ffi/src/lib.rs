//! C interface to `andor-core`.
//!
//! Every function returns an [`AndorStatus`]; results go through out
//! pointers. Objects are opaque handles released with their `_free`
//! function. Big integers and text are written as NUL-terminated strings
//! into caller buffers: when the buffer is too small the call fails with
//! `ANDOR_ERR_BUFFER` and `*needed` holds the required size, terminator
//! included. The message of the last failure on the calling thread is
//! available from `andor_last_error`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use andor_core::boolfn::complexity;
use andor_core::combinatorics::{count_trees, rat_exact, ratio_to_f64, threshold_m};
use andor_core::distribution::{
    exact_distribution, sat_probability, ExactDistribution, FunctionKey, SatMode, SatProbability,
};
use andor_core::sampling::{rng, sample_class_e, sample_tree_g};
use andor_core::{AndOrTree, Error, ModelTag, TruthTable};
use rand_chacha::ChaCha20Rng;

pub type AndorStatus = i32;

pub const ANDOR_OK: AndorStatus = 0;
/// A required pointer argument was null.
pub const ANDOR_ERR_NULL: AndorStatus = 1;
/// An argument is outside the domain of the operation.
pub const ANDOR_ERR_DOMAIN: AndorStatus = 2;
pub const ANDOR_ERR_PARSE: AndorStatus = 3;
/// An enumeration would exceed its budget.
pub const ANDOR_ERR_BUDGET: AndorStatus = 4;
/// A truth table would need more variables than supported.
pub const ANDOR_ERR_SUPPORT: AndorStatus = 5;
/// The output buffer is too small.
pub const ANDOR_ERR_BUFFER: AndorStatus = 6;
/// Input text is not valid UTF-8.
pub const ANDOR_ERR_UTF8: AndorStatus = 7;
pub const ANDOR_ERR_PANIC: AndorStatus = 8;

/// Uniform over labelled trees.
pub const ANDOR_MODEL_G: u32 = 0;
/// Uniform over equivalence classes of trees.
pub const ANDOR_MODEL_E: u32 = 1;

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn fail(code: AndorStatus, message: impl Into<String>) -> AndorStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = message.into());
    code
}

fn status_of(e: &Error) -> AndorStatus {
    match e {
        Error::Domain(_) | Error::MissingVariable(_) => ANDOR_ERR_DOMAIN,
        Error::Parse { .. } => ANDOR_ERR_PARSE,
        Error::Budget { .. } => ANDOR_ERR_BUDGET,
        Error::SupportTooLarge { .. } => ANDOR_ERR_SUPPORT,
    }
}

/// Runs `f`, mapping core errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), AndorStatus>) -> AndorStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ANDOR_OK,
        Ok(Err(code)) => code,
        Err(_) => fail(ANDOR_ERR_PANIC, "internal panic"),
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, AndorStatus>;
}

impl<T> OrStatus<T> for andor_core::Result<T> {
    fn or_status(self) -> Result<T, AndorStatus> {
        self.map_err(|e| fail(status_of(&e), e.to_string()))
    }
}

fn model(m: u32) -> Result<ModelTag, AndorStatus> {
    match m {
        ANDOR_MODEL_G => Ok(ModelTag::G),
        ANDOR_MODEL_E => Ok(ModelTag::E),
        _ => Err(fail(ANDOR_ERR_DOMAIN, format!("unknown model {m}"))),
    }
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, AndorStatus> {
    p.as_mut().ok_or_else(|| fail(ANDOR_ERR_NULL, "null output pointer"))
}

unsafe fn input<'a, T>(p: *const T) -> Result<&'a T, AndorStatus> {
    p.as_ref().ok_or_else(|| fail(ANDOR_ERR_NULL, "null handle"))
}

unsafe fn write_str(s: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> Result<(), AndorStatus> {
    let size = s.len() + 1;
    if let Some(n) = needed.as_mut() {
        *n = size;
    }
    if buf.is_null() || len < size {
        return Err(fail(ANDOR_ERR_BUFFER, format!("buffer of {len} bytes, {size} needed")));
    }
    ptr::copy_nonoverlapping(s.as_ptr(), buf.cast::<u8>(), s.len());
    *buf.add(s.len()) = 0;
    Ok(())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, AndorStatus> {
    if s.is_null() {
        return Err(fail(ANDOR_ERR_NULL, "null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| fail(ANDOR_ERR_UTF8, e.to_string()))
}

/// Copies the message of the last failure on this thread into `buf`. The
/// stored message survives a call with a short buffer.
#[no_mangle]
pub unsafe extern "C" fn andor_last_error(buf: *mut c_char, len: usize, needed: *mut usize) -> AndorStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    let status = guard(|| write_str(&msg, buf, len, needed));
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
    status
}

/// Writes the number of trees (model G) or classes (model E) of size `n`
/// over `k` variables, in decimal.
#[no_mangle]
pub unsafe extern "C" fn andor_count(
    n: u32,
    k: u32,
    model_tag: u32,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> AndorStatus {
    guard(|| {
        let c = count_trees(n, k, model(model_tag)?).or_status()?;
        write_str(&c.to_string(), buf, len, needed)
    })
}

/// `rat_n = Lab(n-1, k) / Lab(n, k)` as a double.
#[no_mangle]
pub unsafe extern "C" fn andor_rat(n: u32, k: u32, model_tag: u32, result: *mut f64) -> AndorStatus {
    guard(|| {
        let r = rat_exact(n, k, model(model_tag)?).or_status()?;
        *out(result)? = ratio_to_f64(&r);
        Ok(())
    })
}

/// The threshold `M_n`.
#[no_mangle]
pub unsafe extern "C" fn andor_threshold(n: u32, result: *mut u64) -> AndorStatus {
    guard(|| {
        *out(result)? = threshold_m(n);
        Ok(())
    })
}

/// Complexity of the function with truth table `bits` on `m` variables
/// (bit `i` is the value at the assignment whose bit `j - 1` is `x_j`).
#[no_mangle]
pub unsafe extern "C" fn andor_complexity(m: u32, bits: u64, result: *mut u32) -> AndorStatus {
    guard(|| {
        let t = TruthTable::try_from_bits(m, bits).or_status()?;
        *out(result)? = complexity(&t).or_status()?;
        Ok(())
    })
}

/// Monte Carlo estimate of the probability of satisfiability, with its 95%
/// Wilson interval.
#[no_mangle]
pub unsafe extern "C" fn andor_sat_estimate(
    n: u32,
    k: u32,
    model_tag: u32,
    samples: u64,
    seed: u64,
    point: *mut f64,
    low: *mut f64,
    high: *mut f64,
) -> AndorStatus {
    guard(|| {
        let (p, l, h) = (out(point)?, out(low)?, out(high)?);
        match sat_probability(n, k, model(model_tag)?, SatMode::MonteCarlo { samples, seed }).or_status()? {
            SatProbability::Estimate(r) => {
                (*p, *l, *h) = (r.point, r.ci_low, r.ci_high);
                Ok(())
            }
            SatProbability::Exact(_) => Err(fail(ANDOR_ERR_PANIC, "unexpected exact result")),
        }
    })
}

/// An And/Or tree.
pub struct AndorTree(AndOrTree);

/// Parses a tree such as `(and x1 (or (not x2) x3))`.
#[no_mangle]
pub unsafe extern "C" fn andor_tree_parse(text: *const c_char, tree: *mut *mut AndorTree) -> AndorStatus {
    guard(|| {
        let slot = out(tree)?;
        let t = AndOrTree::parse(read_str(text)?).or_status()?;
        *slot = Box::into_raw(Box::new(AndorTree(t)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn andor_tree_free(tree: *mut AndorTree) {
    if !tree.is_null() {
        drop(Box::from_raw(tree));
    }
}

#[no_mangle]
pub unsafe extern "C" fn andor_tree_size(tree: *const AndorTree, result: *mut usize) -> AndorStatus {
    guard(|| {
        *out(result)? = input(tree)?.0.size();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn andor_tree_to_string(
    tree: *const AndorTree,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> AndorStatus {
    guard(|| write_str(&input(tree)?.0.to_string(), buf, len, needed))
}

/// Truth table of the tree on `x1..xm`.
#[no_mangle]
pub unsafe extern "C" fn andor_tree_truth_table(tree: *const AndorTree, m: u32, bits: *mut u64) -> AndorStatus {
    guard(|| {
        *out(bits)? = input(tree)?.0.truth_table(m).or_status()?.bits();
        Ok(())
    })
}

/// Draws uniform trees (model G) or class representatives (model E).
pub struct AndorSampler {
    n: u32,
    k: u32,
    model: ModelTag,
    rng: ChaCha20Rng,
}

#[no_mangle]
pub unsafe extern "C" fn andor_sampler_new(
    n: u32,
    k: u32,
    model_tag: u32,
    seed: u64,
    sampler: *mut *mut AndorSampler,
) -> AndorStatus {
    guard(|| {
        let slot = out(sampler)?;
        let model = model(model_tag)?;
        // Fail on bad sizes now rather than at the first draw.
        count_trees(n, k, model).or_status()?;
        *slot = Box::into_raw(Box::new(AndorSampler {
            n,
            k,
            model,
            rng: rng(seed, 0),
        }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn andor_sampler_next(sampler: *mut AndorSampler, tree: *mut *mut AndorTree) -> AndorStatus {
    guard(|| {
        let slot = out(tree)?;
        let s = out(sampler)?;
        let t = match s.model {
            ModelTag::G => sample_tree_g(s.n, s.k, &mut s.rng).or_status()?,
            ModelTag::E => sample_class_e(s.n, s.k, &mut s.rng).or_status()?.representative(),
        };
        *slot = Box::into_raw(Box::new(AndorTree(t)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn andor_sampler_free(sampler: *mut AndorSampler) {
    if !sampler.is_null() {
        drop(Box::from_raw(sampler));
    }
}

/// Exact distribution on functions: truth tables on `x1..xk` in model G,
/// function classes in model E.
pub struct AndorDistribution {
    entries: Vec<(u32, u64, f64)>,
}

#[no_mangle]
pub unsafe extern "C" fn andor_distribution_new(
    n: u32,
    k: u32,
    model_tag: u32,
    budget: u64,
    dist: *mut *mut AndorDistribution,
) -> AndorStatus {
    guard(|| {
        let slot = out(dist)?;
        let d: ExactDistribution = exact_distribution(n, k, model(model_tag)?, budget).or_status()?;
        let entries = d
            .masses()
            .map(|(key, mass)| {
                let (support, bits) = match key {
                    FunctionKey::Table(t) => (t.support(), t.bits()),
                    FunctionKey::Class(c) => (c.support(), c.bits()),
                };
                (support, bits, ratio_to_f64(&mass))
            })
            .collect();
        *slot = Box::into_raw(Box::new(AndorDistribution { entries }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn andor_distribution_len(dist: *const AndorDistribution, len: *mut usize) -> AndorStatus {
    guard(|| {
        *out(len)? = input(dist)?.entries.len();
        Ok(())
    })
}

/// Entry `index`: the function (or class representative) as `support`
/// variables and table `bits`, and its probability.
#[no_mangle]
pub unsafe extern "C" fn andor_distribution_entry(
    dist: *const AndorDistribution,
    index: usize,
    support: *mut u32,
    bits: *mut u64,
    probability: *mut f64,
) -> AndorStatus {
    guard(|| {
        let d = input(dist)?;
        let (s, b, p) = (out(support)?, out(bits)?, out(probability)?);
        let &(es, eb, ep) = d
            .entries
            .get(index)
            .ok_or_else(|| fail(ANDOR_ERR_DOMAIN, format!("index {index} out of range")))?;
        (*s, *b, *p) = (es, eb, ep);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn andor_distribution_free(dist: *mut AndorDistribution) {
    if !dist.is_null() {
        drop(Box::from_raw(dist));
    }
}
