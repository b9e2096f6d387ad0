use std::path::PathBuf;

use lpcomb::cli::run;
use lpcomb::spec::parse_spec;
use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn lpcomb(args: &[&str]) -> lpcomb::cli::Outcome {
    run(std::iter::once("lpcomb").chain(args.iter().copied()))
}

/// Compares with `tests/fixtures/golden/<name>.json`; set `UPDATE_GOLDEN=1`
/// to rewrite the file instead.
fn golden(name: &str, args: &[&str]) {
    let out = lpcomb(args);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let path = fixture(&format!("golden/{name}.json"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &out.stdout).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {path}"));
    assert_eq!(out.stdout, want, "output differs from {path}");
}

#[test]
fn golden_outputs() {
    let sp2 = fixture("sp2_three_chars.spec");
    let so4 = fixture("so4_discrete.spec");
    let gsp = fixture("gsp4_similitude.spec");
    let neg = fixture("mult_one_negative.spec");
    golden("analyze_sp2", &["analyze", "--input", &sp2, "--format", "json"]);
    golden("constants_sp2", &["constants", "--shape", "Sp2,SO3,O2'", "--format", "json"]);
    golden("ledger_so4", &["ledger", "--input", &so4, "--format", "json"]);
    golden("ledger_so4_theta0", &["ledger", "--input", &so4, "--theta", "theta0", "--format", "json"]);
    golden("endoscopy_gsp4", &["endoscopy", "--input", &gsp, "--format", "json"]);
    golden("multiplicity_gsp4", &["multiplicity", "--input", &gsp, "--format", "json"]);
    golden("smo_negative", &["smo", "--input", &neg, "--place", "p1", "--format", "json"]);
}

fn json_of(args: &[&str]) -> Value {
    let out = lpcomb(args);
    assert_eq!(out.code, 0, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn type_one_counts() {
    let v = json_of(&["analyze", "--input", &fixture("sp2_three_chars.spec"), "--format", "json"]);
    let p = &v["result"]["parameters"][0];
    assert_eq!(p["s_order"], "4");
    assert_eq!(p["s_tilde_order"], "1");
    assert_eq!(p["p_phi"].as_array().unwrap().len(), 4);
    assert_eq!(v["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn constants_are_fraction_strings() {
    let v = json_of(&["constants", "--shape", "Sp2", "--format", "json"]);
    let s = &v["result"]["shapes"][0];
    assert_eq!(s["i"], "-1/4");
    assert_eq!(s["sigma"], "-1/8");
}

#[test]
fn ledger_is_balanced() {
    let v = json_of(&["ledger", "--input", &fixture("so4_discrete.spec"), "--format", "json"]);
    for p in v["result"]["parameters"].as_array().unwrap() {
        assert_eq!(p["summary"], "OK");
        assert!(p["rows"].as_array().unwrap().iter().all(|r| r["balanced"] == true));
    }
}

#[test]
fn negative_fixture_reports_witness() {
    let v = json_of(&["smo", "--input", &fixture("mult_one_negative.spec"), "--format", "json"]);
    let m = &v["result"]["parameters"][0]["multiplicity_one"]["plain"];
    assert_eq!(m["multiplicity_one"], false);
    assert_eq!(m["multiplicity_one_witness"], "01");
}

#[test]
fn repeated_runs_are_identical() {
    for args in [
        vec!["analyze", "--input", "FIX"],
        vec!["endoscopy", "--input", "FIX", "--format", "json"],
        vec!["smo", "--input", "FIX"],
    ] {
        let path = fixture("sp2_three_chars.spec");
        let args: Vec<&str> = args.iter().map(|a| if *a == "FIX" { path.as_str() } else { a }).collect();
        assert_eq!(lpcomb(&args), lpcomb(&args));
    }
}

#[test]
fn exit_codes() {
    assert_eq!(lpcomb(&["analyze"]).code, 2);
    assert_eq!(lpcomb(&["frobnicate"]).code, 2);
    assert_eq!(lpcomb(&["constants", "--shape", "Sp2", "--theta", "nope"]).code, 2);
    assert_eq!(lpcomb(&["--help"]).code, 0);
    let bad = lpcomb(&["analyze", "--input", &fixture("bad_dimension.spec")]);
    assert_eq!(bad.code, 1);
    assert!(bad.stderr.starts_with("error[spec]: line 14:"), "{}", bad.stderr);
    let missing = lpcomb(&["analyze", "--input", &fixture("does_not_exist.spec")]);
    assert_eq!(missing.code, 1);
    let theta_sp = lpcomb(&["ledger", "--input", &fixture("sp2_three_chars.spec"), "--theta", "theta0", "--format", "json"]);
    assert_eq!(theta_sp.code, 1);
    let v: Value = serde_json::from_str(&theta_sp.stdout).unwrap();
    assert_eq!(v["error"]["code"], "theta_on_symplectic");
    assert_eq!(lpcomb(&["constants", "--shape", "Xy3"]).code, 1);
    assert_eq!(lpcomb(&["smo", "--input", &fixture("so4_discrete.spec")]).code, 1);
}

#[test]
fn empty_spec_is_empty_model() {
    let m = parse_spec("").unwrap();
    assert!(m.params.is_empty() && m.groups.is_empty() && m.model.is_none());
    assert!(parse_spec("# only a comment\n\n").unwrap().params.is_empty());
}

#[test]
fn spec_diagnostics_carry_lines() {
    let cases = [
        ("[group]\nlabel = G\nfamily = Sp\nrank = 1\n[param]\nlabel = p\ngroup = H\nconstituents = x\n", 7),
        ("[simple]\nlabel = a\ndim = 1\nchar = 1\n[simple]\nlabel = a\ndim = 2\nchar = 1\n", 6),
        ("label = x\n", 1),
        ("[bogus]\n", 1),
        ("[group]\nlabel = G\nfamily = Sp\nrank = one\n", 4),
        ("[group]\nlabel = G\nfamily = Sp\nrank = 1\ncolour = red\n", 5),
        ("[globalchar]\nbuiltin = three_place\n[simple]\nlabel = a\ndim = 1\nchar = g7\n", 6),
        ("[globalchar]\nbuiltin = three_place\n[simple]\nlabel = a\ndim = 2\nchar = g1\n[profile]\nsimple = a\nplace = p9\nitems = chi:01\n", 9),
        ("[param]\nlabel = p\ngroup = G\nconstituents = a\n[group]\nlabel = G\nfamily = Sp\nrank = 0\n", 3),
    ];
    for (text, line) in cases {
        match parse_spec(text) {
            Err(lpcomb::Error::Spec { line: l, .. }) => assert_eq!(l, line, "{text}"),
            other => panic!("expected a spec error for {text:?}, got {other:?}"),
        }
    }
}

#[test]
fn explicit_places_and_profiles() {
    let text = "\
[place]
id = q1
kind = finite
[place]
id = inf
kind = real
[globalchar]
label = a
local = q1:10 inf:1
[group]
label = G
family = SO
rank = 1
eta = a
[simple]
label = x
dim = 2
char = a
[param]
label = phi
group = G
constituents = x
[profile]
simple = x
place = q1
items = chi:10 chi:00
";
    let m = parse_spec(text).unwrap();
    assert_eq!(m.char_dim, 1);
    assert_eq!(m.model.as_ref().unwrap().places().len(), 2);
    assert!(m.profiles.get("x", "q1").is_some());
}
