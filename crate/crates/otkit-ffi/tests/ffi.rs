use otkit_ffi::*;
use std::ffi::{c_char, CStr, CString};
use std::process::Command;
use std::ptr;

fn parse(s: &str, levels: u32) -> Result<*mut OtkTerm, OtkStatus> {
    let c = CString::new(s).unwrap();
    let mut t = ptr::null_mut();
    match unsafe { otk_term_parse(c.as_ptr(), levels, &mut t) } {
        OtkStatus::OtkOk => Ok(t),
        e => Err(e),
    }
}

fn take(s: *mut c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { otk_string_free(s) };
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(otk_last_error()) }.to_str().unwrap().to_string()
}

#[test]
fn parse_print_and_free() {
    let t = parse("psi( K ; 0 )", 3).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { otk_term_to_string(t, &mut s) }, OtkStatus::OtkOk);
    assert_eq!(take(s), "psi(K; 0)");
    let mut n = 0;
    assert_eq!(unsafe { otk_term_length(t, &mut n) }, OtkStatus::OtkOk);
    assert_eq!(n, 4);
    unsafe { otk_term_free(t) };
}

#[test]
fn compare_and_validate() {
    let (a, b) = (parse("phi(0,0)", 3).unwrap(), parse("K", 3).unwrap());
    let mut c = 7;
    assert_eq!(unsafe { otk_term_compare(a, b, &mut c) }, OtkStatus::OtkOk);
    assert_eq!(c, -1);
    assert_eq!(unsafe { otk_term_compare(b, a, &mut c) }, OtkStatus::OtkOk);
    assert_eq!(c, 1);
    let mut ok = false;
    assert_eq!(unsafe { otk_term_is_valid(a, &mut ok) }, OtkStatus::OtkOk);
    assert!(ok);
    let bad = parse("phi(K,0)", 3).unwrap();
    assert_eq!(unsafe { otk_term_is_valid(bad, &mut ok) }, OtkStatus::OtkOk);
    assert!(!ok);
    let wide = parse("K", 4).unwrap();
    assert_eq!(unsafe { otk_term_compare(a, wide, &mut c) }, OtkStatus::OtkErrMismatch);
    for t in [a, b, bad, wide] {
        unsafe { otk_term_free(t) };
    }
}

#[test]
fn error_codes_and_messages() {
    assert_eq!(parse("phi(0,", 3).unwrap_err(), OtkStatus::OtkErrParse);
    assert!(!last_error().is_empty());
    assert_eq!(parse("K", 2).unwrap_err(), OtkStatus::OtkErrLevels);
    assert!(last_error().contains("at least 3"));
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { otk_term_parse(ptr::null(), 3, &mut t) }, OtkStatus::OtkErrNull);
    let mut n = 0;
    assert_eq!(unsafe { otk_term_length(ptr::null(), &mut n) }, OtkStatus::OtkErrNull);
    unsafe { otk_term_free(ptr::null_mut()) };
    unsafe { otk_string_free(ptr::null_mut()) };
}

#[test]
fn towers_need_collapsing_terms() {
    let t = parse("psi(K; 0, <phi(0,0),K,phi(0,0)>; phi(0,0))", 4).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { otk_term_tower(t, &mut s) }, OtkStatus::OtkOk);
    assert!(take(s).starts_with("(sum "));
    let k = parse("K", 4).unwrap();
    assert_eq!(unsafe { otk_term_tower(k, &mut s) }, OtkStatus::OtkErrTower);
    unsafe {
        otk_term_free(t);
        otk_term_free(k);
    }
}

#[test]
fn suites_through_the_boundary() {
    let name = CString::new("uniqueness").unwrap();
    let (mut cases, mut failures) = (0, 1);
    assert_eq!(unsafe { otk_suite_run(name.as_ptr(), 1, 0, 4, 3, &mut cases, &mut failures) }, OtkStatus::OtkOk);
    assert!(cases > 0);
    assert_eq!(failures, 0);
    let nope = CString::new("nope").unwrap();
    assert_eq!(unsafe { otk_suite_run(nope.as_ptr(), 1, 0, 0, 3, &mut cases, &mut failures) }, OtkStatus::OtkErrSuite);
    assert!(last_error().contains("unknown suite"));
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let header = format!("{dir}/include/otkit.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in ["otk_term_parse", "otk_term_free", "otk_suite_run", "OTK_ERR_PARSE"] {
        assert!(text.contains(f), "{f} missing from header");
    }
    let tmp = std::env::temp_dir().join(format!("otkit_header_{}.c", std::process::id()));
    std::fs::write(&tmp, "#include \"otkit.h\"\nint main(void) { OtkTerm *t = 0; return otk_term_parse(\"K\", 3, &t) == OTK_OK ? 0 : 1; }\n").unwrap();
    for (cc, lang) in [("cc", "c"), ("c++", "c++")] {
        let Ok(out) =
            Command::new(cc).args(["-fsyntax-only", "-x", lang, "-I", &format!("{dir}/include")]).arg(&tmp).output()
        else {
            eprintln!("{cc} not available; skipped");
            continue;
        };
        assert!(out.status.success(), "{cc}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let _ = std::fs::remove_file(tmp);
}
