use std::ffi::{c_char, CStr, CString};
use std::process::Command;
use std::ptr;

use andor_ffi::*;

fn text(f: impl Fn(*mut c_char, usize, *mut usize) -> AndorStatus) -> Result<String, AndorStatus> {
    let mut needed = 0;
    let status = f(ptr::null_mut(), 0, &mut needed);
    if status != ANDOR_ERR_BUFFER {
        return Err(status);
    }
    let mut buf = vec![0 as c_char; needed];
    let status = f(buf.as_mut_ptr(), buf.len(), &mut needed);
    if status != ANDOR_OK {
        return Err(status);
    }
    Ok(unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap().to_owned())
}

fn last_error() -> String {
    text(|b, l, n| unsafe { andor_last_error(b, l, n) }).unwrap()
}

#[test]
fn counts_as_decimal_strings() {
    let c = |n, k, m| text(|b, l, nd| unsafe { andor_count(n, k, m, b, l, nd) });
    assert_eq!(c(2, 2, ANDOR_MODEL_E).unwrap(), "6");
    assert_eq!(c(3, 1, ANDOR_MODEL_G).unwrap(), "64");
    let big = andor_core::combinatorics::count_trees(40, 40, andor_core::ModelTag::G).unwrap();
    assert_eq!(c(40, 40, ANDOR_MODEL_G).unwrap(), big.to_string());
    assert_eq!(c(0, 1, ANDOR_MODEL_G), Err(ANDOR_ERR_DOMAIN));
    assert!(last_error().contains("n >= 1"));
    assert_eq!(c(2, 1, 7), Err(ANDOR_ERR_DOMAIN));
}

#[test]
fn scalars() {
    let mut r = 0.0;
    assert_eq!(unsafe { andor_rat(10, 3, ANDOR_MODEL_G, &mut r) }, ANDOR_OK);
    assert_eq!(r, 1.0 / 6.0);
    let mut m = 0;
    assert_eq!(unsafe { andor_threshold(10, &mut m) }, ANDOR_OK);
    assert_eq!(m, 4);
    let mut l = 0;
    assert_eq!(unsafe { andor_complexity(2, 0x6, &mut l) }, ANDOR_OK);
    assert_eq!(l, 4);
    assert_eq!(unsafe { andor_complexity(2, 0x6, ptr::null_mut()) }, ANDOR_ERR_NULL);
    let (mut p, mut lo, mut hi) = (0.0, 0.0, 0.0);
    assert_eq!(
        unsafe { andor_sat_estimate(2, 1, ANDOR_MODEL_G, 20_000, 3, &mut p, &mut lo, &mut hi) },
        ANDOR_OK
    );
    assert!(lo <= 0.75 && 0.75 <= hi && lo <= p && p <= hi);
}

#[test]
fn trees() {
    let src = CString::new("(and x1 (or (not x2) x3))").unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { andor_tree_parse(src.as_ptr(), &mut t) }, ANDOR_OK);
    let mut size = 0;
    assert_eq!(unsafe { andor_tree_size(t, &mut size) }, ANDOR_OK);
    assert_eq!(size, 3);
    assert_eq!(
        text(|b, l, n| unsafe { andor_tree_to_string(t, b, l, n) }).unwrap(),
        "(and x1 (or (not x2) x3))"
    );
    let mut bits = 0;
    assert_eq!(unsafe { andor_tree_truth_table(t, 1, &mut bits) }, ANDOR_ERR_DOMAIN);
    assert_eq!(unsafe { andor_tree_truth_table(t, 3, &mut bits) }, ANDOR_OK);
    // x1 and (x3 or not x2): assignments 1, 5, 7 (bit j-1 holds x_j).
    assert_eq!(bits, 0b1010_0010);
    unsafe { andor_tree_free(t) };
    unsafe { andor_tree_free(ptr::null_mut()) };

    let bad = CString::new("(and x1").unwrap();
    assert_eq!(unsafe { andor_tree_parse(bad.as_ptr(), &mut t) }, ANDOR_ERR_PARSE);
    assert_eq!(unsafe { andor_tree_parse(ptr::null(), &mut t) }, ANDOR_ERR_NULL);
}

#[test]
fn samplers_are_seeded() {
    let draw = |seed| -> Vec<String> {
        let mut s = ptr::null_mut();
        assert_eq!(
            unsafe { andor_sampler_new(5, 3, ANDOR_MODEL_E, seed, &mut s) },
            ANDOR_OK
        );
        let out = (0..4)
            .map(|_| {
                let mut t = ptr::null_mut();
                assert_eq!(unsafe { andor_sampler_next(s, &mut t) }, ANDOR_OK);
                let text = text(|b, l, n| unsafe { andor_tree_to_string(t, b, l, n) }).unwrap();
                unsafe { andor_tree_free(t) };
                text
            })
            .collect();
        unsafe { andor_sampler_free(s) };
        out
    };
    assert_eq!(draw(1), draw(1));
    assert_ne!(draw(1), draw(2));
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { andor_sampler_new(0, 3, ANDOR_MODEL_G, 1, &mut s) },
        ANDOR_ERR_DOMAIN
    );
    assert!(s.is_null());
}

#[test]
fn distributions() {
    let mut d = ptr::null_mut();
    assert_eq!(
        unsafe { andor_distribution_new(2, 1, ANDOR_MODEL_G, 1000, &mut d) },
        ANDOR_OK
    );
    let mut len = 0;
    assert_eq!(unsafe { andor_distribution_len(d, &mut len) }, ANDOR_OK);
    assert_eq!(len, 4);
    let mut total = 0.0;
    for i in 0..len {
        let (mut s, mut b, mut p) = (0, 0, 0.0);
        assert_eq!(
            unsafe { andor_distribution_entry(d, i, &mut s, &mut b, &mut p) },
            ANDOR_OK
        );
        assert_eq!(s, 1);
        total += p;
    }
    assert!((total - 1.0).abs() < 1e-12);
    let (mut s, mut b, mut p) = (0, 0, 0.0);
    assert_eq!(
        unsafe { andor_distribution_entry(d, len, &mut s, &mut b, &mut p) },
        ANDOR_ERR_DOMAIN
    );
    unsafe { andor_distribution_free(d) };
    assert_eq!(
        unsafe { andor_distribution_new(6, 3, ANDOR_MODEL_G, 10, &mut d) },
        ANDOR_ERR_BUDGET
    );
    assert!(last_error().contains("refusing"));
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/andor.h");
    let Ok(out) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", header])
        .output()
    else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
