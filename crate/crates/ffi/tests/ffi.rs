use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use urnkit_ffi::*;

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { urn_string_free(p) };
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(urn_last_error_message()) }.to_str().unwrap().to_string()
}

fn preset(name: &str) -> *mut UrnModel {
    let name = CString::new(name).unwrap();
    let mut model = ptr::null_mut();
    assert_eq!(unsafe { urn_model_from_preset(name.as_ptr(), &mut model) }, UrnStatus::Ok);
    model
}

#[test]
fn solve_pills_one_one() {
    let model = preset("pills");
    let start = [1u32, 1]; // white, black
    let mut dist = ptr::null_mut();
    unsafe {
        assert_eq!(urn_solve(model, start.as_ptr(), 2, &mut dist), UrnStatus::Ok);
        let mut len = 0;
        assert_eq!(urn_distribution_len(dist, &mut len), UrnStatus::Ok);
        assert_eq!(len, 2);
        let mut seen = Vec::new();
        for i in 0..len {
            let mut state = [0u32; 2];
            assert_eq!(urn_distribution_state(dist, i, state.as_mut_ptr(), 2), UrnStatus::Ok);
            let mut p = 0.0;
            assert_eq!(urn_distribution_probability(dist, i, &mut p), UrnStatus::Ok);
            let mut exact = ptr::null_mut();
            assert_eq!(urn_distribution_probability_str(dist, i, &mut exact), UrnStatus::Ok);
            seen.push((state, p, take_string(exact)));
        }
        assert_eq!(seen, vec![([1, 0], 0.5, "1/2".to_string()), ([2, 0], 0.5, "1/2".to_string())]);

        let (mut mean, mut var) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(urn_distribution_mean_variance(dist, &mut mean, &mut var), UrnStatus::Ok);
        assert_eq!((take_string(mean), take_string(var)), ("3/2".to_string(), "1/4".to_string()));
        let mut second = ptr::null_mut();
        assert_eq!(urn_distribution_factorial_moment(dist, 2, &mut second), UrnStatus::Ok);
        assert_eq!(take_string(second), "1");
        assert_eq!(urn_distribution_factorial_moment(dist, 0, &mut second), UrnStatus::InvalidArgument);

        let mut h = 0.0;
        assert_eq!(urn_distribution_pgf(dist, 1.0, 0.5, &mut h), UrnStatus::Ok);
        assert_eq!(h, 0.5 * 0.5 + 0.5 * 0.25);
        assert_eq!(urn_distribution_pgf(dist, f64::NAN, 0.5, &mut h), UrnStatus::InvalidArgument);

        let mut state = [0u32; 2];
        assert_eq!(urn_distribution_state(dist, 2, state.as_mut_ptr(), 2), UrnStatus::OutOfRange);
        assert!(last_error().contains("out of range"));
        assert_eq!(urn_distribution_state(dist, 0, state.as_mut_ptr(), 3), UrnStatus::InvalidArgument);
        urn_distribution_free(dist);
        urn_model_free(model);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut model = ptr::null_mut();
        let bad = CString::new("marbles").unwrap();
        assert_eq!(urn_model_from_preset(bad.as_ptr(), &mut model), UrnStatus::InvalidSpec);
        assert!(model.is_null());
        assert!(last_error().contains("marbles"));
        assert_eq!(urn_model_from_preset(ptr::null(), &mut model), UrnStatus::NullPointer);

        let pills = preset("pills");
        assert!(last_error().is_empty());
        assert_eq!(urn_model_from_preset(bad.as_ptr(), ptr::null_mut()), UrnStatus::InvalidSpec);
        let good = CString::new("pills").unwrap();
        assert_eq!(urn_model_from_preset(good.as_ptr(), ptr::null_mut()), UrnStatus::NullPointer);

        let mut dist = ptr::null_mut();
        let three = [1u32, 1, 1];
        assert_eq!(urn_solve(pills, three.as_ptr(), 3, &mut dist), UrnStatus::InvalidArgument);
        assert_eq!(urn_solve(ptr::null(), three.as_ptr(), 2, &mut dist), UrnStatus::NullPointer);

        let cycle = CString::new(r#"{"colors": 2, "matrix": [[-1, 1], [1, -1]], "absorbing_caps": [null, 0]}"#).unwrap();
        let mut cyclic = ptr::null_mut();
        assert_eq!(urn_model_from_json(cycle.as_ptr(), &mut cyclic), UrnStatus::Ok);
        let start = [1u32, 1];
        assert_eq!(urn_solve(cyclic, start.as_ptr(), 2, &mut dist), UrnStatus::NonTerminating);
        assert!(dist.is_null());

        let invalid_utf8 = [0xffu8, 0];
        assert_eq!(urn_model_from_json(invalid_utf8.as_ptr().cast(), &mut cyclic), UrnStatus::InvalidUtf8);
        let mut s = ptr::null_mut();
        assert_eq!(urn_pills_expectation(1, 0, &mut s), UrnStatus::InvalidArgument);

        for status in [UrnStatus::Ok, UrnStatus::NonTerminating, UrnStatus::Panic] {
            assert!(!CStr::from_ptr(urn_status_str(status)).to_bytes().is_empty());
        }
        urn_model_free(cyclic);
        urn_model_free(pills);
        urn_model_free(ptr::null_mut());
        urn_distribution_free(ptr::null_mut());
        urn_empirical_free(ptr::null_mut());
        urn_string_free(ptr::null_mut());
    }
}

#[test]
fn json_round_trip() {
    unsafe {
        let model = preset("cannibal");
        let mut json = ptr::null_mut();
        assert_eq!(urn_model_to_json(model, &mut json), UrnStatus::Ok);
        let text = CString::new(take_string(json)).unwrap();
        assert!(text.to_str().unwrap().contains("cannibal_shifted"));
        let mut again = ptr::null_mut();
        assert_eq!(urn_model_from_json(text.as_ptr(), &mut again), UrnStatus::Ok);
        let mut colors = 0;
        assert_eq!(urn_model_colors(again, &mut colors), UrnStatus::Ok);
        assert_eq!(colors, 2);

        let start = [3u32, 4];
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(urn_solve(model, start.as_ptr(), 2, &mut a), UrnStatus::Ok);
        assert_eq!(urn_solve(again, start.as_ptr(), 2, &mut b), UrnStatus::Ok);
        let (mut la, mut lb) = (0, 0);
        urn_distribution_len(a, &mut la);
        urn_distribution_len(b, &mut lb);
        assert_eq!(la, lb);
        for i in 0..la {
            let (mut pa, mut pb) = (ptr::null_mut(), ptr::null_mut());
            urn_distribution_probability_str(a, i, &mut pa);
            urn_distribution_probability_str(b, i, &mut pb);
            assert_eq!(take_string(pa), take_string(pb));
        }
        urn_distribution_free(a);
        urn_distribution_free(b);
        urn_model_free(model);
        urn_model_free(again);
    }
}

#[test]
fn simulation_is_reproducible() {
    unsafe {
        let model = preset("okcorral");
        let start = [2u32, 2];
        let run = || {
            let mut emp = ptr::null_mut();
            assert_eq!(urn_simulate(model, start.as_ptr(), 2, 5000, 77, &mut emp), UrnStatus::Ok);
            let mut len = 0;
            urn_empirical_len(emp, &mut len);
            let rows: Vec<([u32; 2], u64)> = (0..len)
                .map(|i| {
                    let mut state = [0u32; 2];
                    let (mut count, mut hw) = (0u64, 0.0);
                    assert_eq!(urn_empirical_state(emp, i, state.as_mut_ptr(), 2), UrnStatus::Ok);
                    assert_eq!(urn_empirical_count(emp, i, &mut count, &mut hw), UrnStatus::Ok);
                    assert!(hw > 0.0);
                    (state, count)
                })
                .collect();
            urn_empirical_free(emp);
            rows
        };
        let first = run();
        assert_eq!(first, run());
        assert_eq!(first.iter().map(|r| r.1).sum::<u64>(), 5000);
        assert!(first.iter().all(|(s, _)| s[0] == 0 || s[1] == 0));
        let mut emp = ptr::null_mut();
        assert_eq!(urn_simulate(model, start.as_ptr(), 2, 0, 1, &mut emp), UrnStatus::InvalidArgument);
        urn_model_free(model);
    }
}

#[test]
fn closed_forms() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(urn_pills_expectation(1, 1, &mut s), UrnStatus::Ok);
        assert_eq!(take_string(s), "3/2");
        assert_eq!(urn_okcorral_survive_prob(2, 1, &mut s), UrnStatus::Ok);
        assert_eq!(take_string(s), "5/6");
        assert_eq!(urn_okcorral_survivor_pmf(2, 1, 2, &mut s), UrnStatus::Ok);
        assert_eq!(take_string(s), "2/3");
        assert_eq!(urn_sampling_survive_prob(1, 1, &mut s), UrnStatus::Ok);
        assert_eq!(take_string(s), "1/2");
        assert_eq!(urn_sampling_pmf(2, 1, 2, &mut s), UrnStatus::Ok);
        assert_eq!(take_string(s), "1/3");
        assert_eq!(urn_cannibal_pmf(1, 2, 2, &mut s), UrnStatus::Ok);
        assert_eq!(take_string(s), "1/2");
        assert_eq!(urn_variant_pills_expectation(0, 1, &mut s), UrnStatus::Ok);
        assert_eq!(take_string(s), "1");

        let mut h = 0.0;
        assert_eq!(urn_pills_pgf(1, 1, 0.5, &mut h), UrnStatus::Ok);
        assert!((h - 0.375).abs() < 1e-10, "{h}");
        let counts = [1u32, 1, 1];
        assert_eq!(urn_rpills_pgf(counts.as_ptr(), 3, 0.5, &mut h), UrnStatus::Ok);
        assert!((h - 0.65278).abs() < 1e-5, "{h}");
        assert_eq!(urn_rpills_pgf(counts.as_ptr(), 2, 0.5, &mut h), UrnStatus::InvalidArgument);
        assert_eq!(urn_pills_pgf(1, 1, 1.5, &mut h), UrnStatus::InvalidArgument);
    }
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_header() {
    let dir = target_dir();
    let lib = dir.join("liburnkit_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());
    let header_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let tmp = tempfile_dir();
    let source = tmp.join("smoke.c");
    std::fs::write(
        &source,
        r#"
#include <stdio.h>
#include <string.h>
#include "urnkit.h"

int main(void) {
    UrnModel *model = NULL;
    if (urn_model_from_preset("sampling", &model) != URN_STATUS_OK) return 1;
    uint32_t start[2] = {2, 1};
    UrnDistribution *dist = NULL;
    if (urn_solve(model, start, 2, &dist) != URN_STATUS_OK) return 2;
    size_t len = 0;
    urn_distribution_len(dist, &len);
    for (size_t i = 0; i < len; i++) {
        uint32_t state[2];
        char *p = NULL;
        urn_distribution_state(dist, i, state, 2);
        urn_distribution_probability_str(dist, i, &p);
        printf("%u,%u=%s\n", state[0], state[1], p);
        urn_string_free(p);
    }
    if (urn_model_from_preset("nope", &model) != URN_STATUS_INVALID_SPEC) return 3;
    if (strlen(urn_last_error_message()) == 0) return 4;
    urn_distribution_free(dist);
    urn_model_free(model);
    return 0;
}
"#,
    )
    .unwrap();
    let exe = tmp.join("smoke");
    let status = Command::new("cc")
        .arg(&source)
        .arg("-I")
        .arg(&header_dir)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler named `cc` is on PATH");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0,1=1/3\n1,0=1/3\n2,0=1/3\n");
    std::fs::remove_dir_all(tmp).ok();
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("urnkit-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
