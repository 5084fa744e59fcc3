use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn confun(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_confun"))
        .args(args)
        .output()
        .expect("binary runs");
    let text = String::from_utf8(out.stdout).expect("utf-8");
    let v: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    (out.status.code().expect("exit code"), v, text)
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const S2: &str = r#"{"format": "confun-complex/1", "name": "sphere",
  "maximal": [[0,1,2],[0,1,3],[0,2,3],[1,2,3]]}"#;

#[test]
fn sphere_passes() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "s2.json", S2);
    let (code, v, _) = confun(&["check", &f]);
    assert_eq!(code, 0);
    assert_eq!(v["passes"], true);
    assert_eq!(v["link"]["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn wedge_of_three_spheres_fails_only_on_chi() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("chi.json");
    let (code, _, _) = confun(&["witness", "--index", "chi", "-o", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, v, _) = confun(&["check", out.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["link"]["failures"], serde_json::json!(["χ is odd"]));
    assert_eq!(v["link"]["euler_characteristic"], -1);
}

#[test]
fn witness_has_exactly_its_index() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.json");
    let o = out.to_str().unwrap();
    let (code, v, _) = confun(&["witness", "--index", "base:82", "-o", o]);
    assert_eq!(code, 0, "{v}");
    let (code, v, _) = confun(&["check", o]);
    assert_eq!(code, 1);
    assert_eq!(v["link"]["failures"], serde_json::json!(["a(extended:82) = 1"]));
    let (_, v, _) = confun(&["charnum", o, "--index", "extended:82"]);
    assert_eq!(v["value"], 1);
    let (_, v, _) = confun(&["charnum", o, "--index", "extended:83"]);
    assert_eq!(v["value"], 0);
    let (_, v, _) = confun(&["charnums", o, "--nonzero"]);
    assert_eq!(v["nonzero"]["novel_count"], 1);
    assert_eq!(v["nonzero"]["indices"], serde_json::json!(["extended:82"]));

    // the written file is already canonical
    let text = std::fs::read_to_string(&out).unwrap();
    let parsed = confun::io::ComplexFile::parse(&text).unwrap();
    assert_eq!(parsed.canonical().unwrap().to_text(), text);
    assert!(parsed.provenance.unwrap()["stages"].is_array());
}

#[test]
fn trivial_index_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = dir.path().join("x.json");
    let (code, v, _) = confun(&["witness", "--index", "extended:100", "-o", o.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("even on every space"));
    let (code, _, _) = confun(&["witness", "--index", "extended:zz", "-o", o.to_str().unwrap()]);
    assert_eq!(code, 2);
    let (code, _, _) = confun(&["witness", "--index", "extended:3", "-o", o.to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn polynomials() {
    let (code, v, _) = confun(&["poly", "check", "0,0,-1/2,0,1/2"]);
    assert_eq!(code, 0);
    assert_eq!(v["in_script_p"], true);
    // f₂ = ½t² − ½t
    let (_, v, _) = confun(&["poly", "check", "0,-1/2,1/2"]);
    assert_eq!(v["in_script_p"], false);
    let (_, v, _) = confun(&["poly", "decompose", "0,-1/2,1/2"]);
    assert_eq!(v["binomial_coordinates"], serde_json::json!(["0", "0", "1"]));
    let (_, v, _) = confun(&["poly", "mod8", "0,0,-1/2,0,1/2"]);
    assert_eq!(v["residual_in_8a"], true);
    let (code, _, _) = confun(&["poly", "mod8", "0,-1/2,1/2"]);
    assert_eq!(code, 2);
    let (code, _, _) = confun(&["poly", "check", "1,x"]);
    assert_eq!(code, 2);
}

#[test]
fn diagnostics_and_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.json", "{\n  \"format\": \"confun-complex/1\",\n  \"name\": 3\n}");
    let (code, v, _) = confun(&["check", &f]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("line 3"), "{v}");
    let f = write(dir.path(), "gap.json", r#"{"format": "confun-complex/1", "name": "g", "maximal": [[0, 2]]}"#);
    let (code, v, _) = confun(&["check", &f]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("maximal"), "{v}");
    let f = write(
        dir.path(),
        "d5.json",
        r#"{"format": "confun-complex/1", "name": "d5", "maximal": [[0,1,2,3,4,5]]}"#,
    );
    let (code, _, _) = confun(&["check", &f]);
    assert_eq!(code, 2);
}

#[test]
fn four_dimensional_space() {
    let dir = tempfile::tempdir().unwrap();
    let facets: Vec<Vec<u32>> = (0..6).map(|s| (0..6).filter(|&v| v != s).collect()).collect();
    let sphere = serde_json::json!({"format": "confun-complex/1", "name": "S4", "maximal": facets});
    let f = write(dir.path(), "s4.json", &sphere.to_string());
    let (code, v, _) = confun(&["check", &f]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["points_checked"], 62);
    // a boundary point of the 4-ball has a 3-ball as link: χ = 1 is odd
    let f = write(
        dir.path(),
        "d4.json",
        r#"{"format": "confun-complex/1", "name": "ball", "maximal": [[0,1,2,3,4]]}"#,
    );
    let (code, v, _) = confun(&["check", &f]);
    assert_eq!(code, 1, "{v}");
    assert!(!v["failing_points"].as_array().unwrap().is_empty());
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "s2.json", S2);
    let (_, _, a) = confun(&["check", &f]);
    let (_, _, b) = confun(&["check", &f]);
    assert_eq!(a, b);
    let (_, v, _) = confun(&["--timing", "check", &f]);
    assert!(v["timing_ms"].is_u64());
    assert!(!a.contains("timing"));
}

#[test]
fn selftest_small() {
    let (code, v, _) = confun(&["selftest", "--size", "4"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["passes"], true);
}
