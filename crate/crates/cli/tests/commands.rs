use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use quartic_core::field::FiniteField;
use quartic_core::quartic::{TernaryQuartic, QUARTIC_EXPONENTS};
use quartic_core::zeta::{l_polynomial, LPolynomial};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn tropes(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_tropes")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json_of(args: &[&str]) -> Value {
    let (code, stdout, stderr) = tropes(args);
    assert_eq!(code, 0, "{args:?}: {stderr}");
    serde_json::from_str(&stdout).unwrap()
}

fn curve_json(f: &TernaryQuartic<FiniteField>) -> String {
    let coeffs: Vec<Value> = QUARTIC_EXPONENTS
        .iter()
        .zip(f.monomial_coeffs())
        .filter(|(_, &c)| c != 0)
        .map(|(e, c)| serde_json::json!({"exps": e, "value": c.to_string()}))
        .collect();
    let p = f.field().p();
    serde_json::json!({"field": {"char": p, "deg": 1}, "convention": "monomial", "coeffs": coeffs}).to_string()
}

#[test]
fn theta_counts() {
    let v = json_of(&["theta", "count", "--g", "3"]);
    assert_eq!(v, serde_json::json!({"g": 3, "even": 36, "odd": 28}));
    let (code, stdout, _) = tropes(&["theta", "count", "--g", "2"]);
    assert_eq!((code, stdout.as_str()), (0, "{\"even\":10,\"g\":2,\"odd\":6}\n"));
}

#[test]
fn igusa_table_is_even() {
    let v = json_of(&["theta", "igusa", "--g", "2"]);
    assert_eq!(v["arf"], 0);
    assert_eq!(v["table"].as_array().unwrap().len(), 16);
}

#[test]
fn heisenberg_classes() {
    let v = json_of(&["heis", "enumerate", "--g", "2"]);
    let recs = v.as_array().unwrap();
    assert_eq!(recs.len(), 16);
    let minus = recs.iter().filter(|r| r["class"] == "minus").count();
    assert_eq!(minus, 6);
    assert!(recs.iter().all(|r| (r["arf"] == 1) == (r["class"] == "minus")));
}

#[test]
fn fermat_census() {
    let path = corpus("fermat_f17.json");
    let v = json_of(&["quartic", "census", "--curve", path.to_str().unwrap()]);
    let r = &v["report"];
    assert_eq!((r["delta1"].as_u64(), r["delta2"].as_u64(), r["kappa"].as_u64()), (Some(16), Some(12), Some(0)));
    assert_eq!(v["pluecker"]["outcome"], "pass");
}

#[test]
fn census_output_round_trips_the_curve() {
    let path = corpus("klein_f29.json");
    let first = json_of(&["quartic", "census", "--curve", path.to_str().unwrap()]);
    let dir = scratch("roundtrip");
    let copy = dir.join("klein.json");
    fs::write(&copy, first["curve"].to_string()).unwrap();
    let second = json_of(&["quartic", "census", "--curve", copy.to_str().unwrap()]);
    assert_eq!(first, second);
}

#[test]
fn exit_codes() {
    let q = corpus("fermat_q.json");
    let q = q.to_str().unwrap();
    // characteristic 2 census is a precondition violation
    assert_eq!(tropes(&["quartic", "census", "--curve", q, "--char", "2"]).0, 2);
    // rational curve without a characteristic
    assert_eq!(tropes(&["quartic", "census", "--curve", q]).0, 2);
    // 103^3 is past the point-count cap
    assert_eq!(tropes(&["quartic", "zeta", "--curve", q, "--q", "103"]).0, 3);
    assert_eq!(tropes(&["quartic", "census", "--curve", "/nonexistent.json"]).0, 2);
    assert_eq!(tropes(&["umbral", "expand", "(abu)^3"]).0, 2);
    assert_eq!(tropes(&["frobnicate"]).0, 2);

    let dir = scratch("exit_codes");
    let (_, stdout, _) = tropes(&["quartic", "zeta", "--curve", q, "--char", "5"]);
    let mut l: Value = serde_json::from_str(&stdout).unwrap();
    l["coeffs"][2] = Value::from(l["coeffs"][2].as_i64().unwrap() + 1);
    let bad = dir.join("bad.json");
    fs::write(&bad, l.to_string()).unwrap();
    let bad = bad.to_str().unwrap();
    assert_eq!(tropes(&["quartic", "twist-compare", bad, bad]).0, 4);
}

#[test]
fn zeta_and_twist_compare() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let field = FiniteField::prime(5).unwrap();
    let (f, l) = loop {
        let f = TernaryQuartic::random_smooth(field.clone(), &mut rng);
        let l = l_polynomial(&f).unwrap();
        if l.trace() != 0 {
            break (f, l);
        }
    };
    let dir = scratch("zeta");
    let curve = dir.join("c.json");
    fs::write(&curve, curve_json(&f)).unwrap();
    let out = json_of(&["quartic", "zeta", "--curve", curve.to_str().unwrap(), "--k", "4"]);
    let parsed: LPolynomial = serde_json::from_value(out.clone()).unwrap();
    assert_eq!(parsed, l);
    assert_eq!(out["further_counts"].as_array().unwrap().len(), 1);

    let a = dir.join("l.json");
    let b = dir.join("twist.json");
    fs::write(&a, out.to_string()).unwrap();
    fs::write(&b, serde_json::to_string(&l.twist().unwrap()).unwrap()).unwrap();
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());
    assert_eq!(json_of(&["quartic", "twist-compare", a, b])["verdict"], "quadratic-twist");
    assert_eq!(json_of(&["quartic", "twist-compare", a, a])["verdict"], "equal");
}

#[test]
fn fermat_over_f3_zeta_is_inconclusive() {
    let path = corpus("fermat_f3.json");
    let out = json_of(&["quartic", "zeta", "--curve", path.to_str().unwrap()]);
    assert_eq!((out["counts"][0].as_u64(), out["trace"].as_i64()), (Some(4), Some(0)));
    let dir = scratch("fermat_f3");
    let l = dir.join("l.json");
    fs::write(&l, out.to_string()).unwrap();
    let l = l.to_str().unwrap();
    assert_eq!(json_of(&["quartic", "twist-compare", l, l])["verdict"], "inconclusive");
}

#[test]
fn contravariants_and_dual() {
    let path = corpus("fermat_f3.json");
    let path = path.to_str().unwrap();
    let k1 = json_of(&["quartic", "contravariant", "--which", "k1", "--curve", path]);
    assert_eq!(k1["degree"], 4);
    assert_eq!(k1["form"]["terms"].as_array().unwrap().len(), 3);
    let dual = json_of(&["quartic", "contravariant", "--which", "dual", "--curve", path]);
    assert_eq!((dual["non_reduced"].as_bool(), dual["reduced_degree"].as_u64()), (Some(true), Some(4)));

    let q = corpus("fermat_q.json");
    let dual = json_of(&["quartic", "contravariant", "--which", "dual", "--curve", q.to_str().unwrap(), "--seed", "3"]);
    let check = &dual["tangent_check"];
    assert_eq!(check["sampled"], check["vanishing"]);
    assert_eq!(check["sampled"], 50);
}

#[test]
fn umbral_expand_matches_library() {
    let v = json_of(&["umbral", "expand", "(abu)^4"]);
    let expected = quartic_core::contravariant::k1_generic();
    assert_eq!(v["polynomial"]["terms"].as_array().unwrap().len(), expected.len());
    assert_eq!((v["u_degree"].as_u64(), v["coefficient_degree"].as_u64()), (Some(4), Some(2)));
}

#[test]
fn unstable_example_is_simply_elliptic() {
    let path = corpus("cone_q.json");
    let v = json_of(&["quartic", "delpezzo", "--curve", path.to_str().unwrap()]);
    assert_eq!(v["classification"], "simply-elliptic");
    assert_eq!(v["cone"]["point"], serde_json::json!([0, 0, 1]));
}

#[test]
fn wahl_and_cusps_on_klein() {
    let path = corpus("klein_f29.json");
    let path = path.to_str().unwrap();
    let w = json_of(&["quartic", "wahl", "--curve", path]);
    assert_eq!(w["kernel_dim"], 0);
    assert_eq!(w["matrix"].as_array().unwrap().len(), 3);
    let c = json_of(&["quartic", "cusp-recover", "--curve", path]);
    assert_eq!((c["nullity"].as_u64(), c["proportional_to_k1"].as_bool()), (Some(1), Some(true)));
}

#[test]
fn bitangents_escalate() {
    let path = corpus("fermat_q.json");
    let v = json_of(&["quartic", "bitangents", "--curve", path.to_str().unwrap(), "--char", "13", "--escalate"]);
    assert_eq!(v["census"]["completeness"], "complete");
    assert_eq!(v["census"]["lines"].as_array().unwrap().len(), 28);
}

#[test]
fn out_dir_names_are_deterministic() {
    let dir = scratch("out");
    let d = dir.to_str().unwrap();
    let (_, first, _) = tropes(&["theta", "count", "--g", "2", "--out", d]);
    let (_, again, _) = tropes(&["theta", "count", "--g", "2", "--out", d]);
    let (_, other, _) = tropes(&["theta", "count", "--g", "3", "--out", d]);
    assert_eq!(first, again);
    assert_ne!(first, other);
    let name = Path::new(first.trim()).file_name().unwrap().to_str().unwrap().to_string();
    assert!(name.starts_with("theta-count-") && name.ends_with(".json"), "{name}");
    assert_eq!(fs::read_to_string(first.trim()).unwrap(), "{\"even\":10,\"g\":2,\"odd\":6}\n");
}

#[test]
fn corpus_run_is_sorted_and_clean() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let v = json_of(&["corpus", "run", dir.to_str().unwrap()]);
    let names: Vec<&str> = v["files"].as_array().unwrap().iter().map(|f| f["file"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert_eq!(v["total"], names.len());
    assert_eq!(v["failures"], 0);
}
