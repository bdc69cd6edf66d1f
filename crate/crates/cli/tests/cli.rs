use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn setlp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_setlp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("not JSON ({e}): {}", stdout(o)))
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn list_shows_every_catalog() {
    let o = setlp(&["list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for header in ["problems (17)", "constructions (8)", "certificates (14)"] {
        assert!(text.contains(header), "{text}");
    }

    let o = setlp(&["list", "--certs", "--json"]);
    let v = json(&o);
    assert_eq!(v["certificates"].as_array().unwrap().len(), 14);
    assert!(v.get("problems").is_none());

    let v = json(&setlp(&["list", "--json"]));
    assert_eq!(v["problems"].as_array().unwrap().len(), 17);
    assert!(v["formulas"].as_array().unwrap().iter().any(|f| f["name"] == "disjoint_free"));
}

#[test]
fn encode_writes_lp_files() {
    let o = setlp(&["encode", "sperner", "n=3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let binaries = text.split("Binary").nth(1).unwrap().split("End").next().unwrap();
    assert_eq!(binaries.split_whitespace().count(), 8);

    let path = tmp("sperner4.lp");
    let o = setlp(&["encode", "sperner", "n=4", "--out", path.to_str().unwrap(), "--stats"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("16 variables"), "{}", stdout(&o));
    let again = setlp(&["encode", "sperner", "n=4"]);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&again));
}

#[test]
fn bad_parameters_are_usage_errors() {
    for args in [
        &["encode", "sperner", "n=0"][..],
        &["encode", "sperner"],
        &["encode", "nosuch", "n=3"],
        &["encode", "sperner", "n=3", "bogus=1"],
        &["encode", "sperner", "n"],
        &["solve", "sperner", "n=3", "--search", "sideways"],
        &["construct", "bipartite_22", "m=4"],
        &["construct", "nosuch"],
        &["verify"],
        &["verify", "no_such_certificate"],
    ] {
        let o = setlp(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains("error"), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn solve_reports_optima() {
    let o = setlp(&["solve", "sperner", "n=6"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("objective: 20"), "{}", stdout(&o));

    let o = setlp(&["solve", "diversity_uniform", "n=7", "k=3", "--json", "--witness"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["status"], "OPTIMAL");
    assert_eq!(v["objective"], 5);
    assert_eq!(v["witness_check"]["holds"], true);
    assert_eq!(v["witness"]["family"]["sets"].as_array().unwrap().len(), 10);
}

#[test]
fn time_limit_exits_with_limit_code() {
    let o = setlp(&["solve", "sperner", "n=10", "--time-limit", "0.5", "--json"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["status"], "TIME_LIMIT");
    assert!(v["dual_bound"].as_f64().unwrap() >= 252.0);
}

#[test]
fn restricted_solves_carry_a_banner() {
    let o = setlp(&["solve", "kleitman", "n=6", "s=3", "--restrict", "2,3", "--json"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("LOWER BOUND ONLY"));
    let v = json(&o);
    assert_eq!(v["restricted"], true);
    assert_eq!(v["solution"]["status"], "RESTRICTED_OPTIMAL");
}

#[test]
fn forb_totals_are_shown_both_ways() {
    let o = setlp(&["solve", "forb", "m=4", "--json"]);
    assert!(o.status.success());
    let v = json(&o);
    let base = v["objective"].as_i64().unwrap();
    assert_eq!(v["objective_with_empty_and_singletons"].as_i64().unwrap(), base + 5);
}

#[test]
fn spec_files_and_flags_combine() {
    let spec = tmp("div.json");
    std::fs::write(&spec, r#"{"problem":"diversity_uniform","n":6,"k":3}"#).unwrap();
    let v = json(&setlp(&["solve", "--spec", spec.to_str().unwrap(), "--json"]));
    assert_eq!(v["problem"]["n"], 6);
    // the flag wins over the file
    let v = json(&setlp(&["solve", "n=7", "--spec", spec.to_str().unwrap(), "--json"]));
    assert_eq!(v["problem"]["n"], 7);
    assert_eq!(v["objective"], 5);
}

#[test]
fn lp_files_solve_to_the_same_value() {
    let path = tmp("multipart.lp");
    let o = setlp(&["encode", "multipart_ekr", "parts=3,4", "quotas=1,2", "k=4", "--out", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let direct = json(&setlp(&["solve", "multipart_ekr", "parts=3,4", "quotas=1,2", "k=4", "--json"]));
    let from_file = json(&setlp(&["solve", "--lp", path.to_str().unwrap(), "--json"]));
    assert_eq!(direct["objective"], from_file["objective"]);
    assert_eq!(direct["objective"], 30);
}

#[test]
fn verify_passes_stored_certificates() {
    let o = setlp(&["verify", "disjoint_free_9_4"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = setlp(&["verify", "--all", "--json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!((v["passed"].as_u64(), v["total"].as_u64()), (Some(14), Some(14)));
}

#[test]
fn verify_rejects_a_tampered_file() {
    let mut cert: Value = serde_json::from_str(&setlp_cert("diversity_7_3")).unwrap();
    cert["payload"]["sets"].as_array_mut().unwrap().pop();
    let path = tmp("tampered.json");
    std::fs::write(&path, serde_json::to_string(&cert).unwrap()).unwrap();
    let o = setlp(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("0/1 certificates verified"));

    let ok = tmp("untouched.json");
    std::fs::write(&ok, setlp_cert("diversity_7_3")).unwrap();
    assert!(setlp(&["verify", ok.to_str().unwrap()]).status.success());
}

fn setlp_cert(id: &str) -> String {
    setlp::certificates::certificate_json(id).unwrap().to_string()
}

#[test]
fn construct_emits_checked_families() {
    let v = json(&setlp(&["construct", "two_sided", "m=7", "k=3", "--verify"]));
    assert_eq!(v["size"], 514);
    assert_eq!(v["family"]["sets"].as_array().unwrap().len(), 514);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));

    let v = json(&setlp(&["construct", "bipartite_22", "m=5"]));
    assert_eq!(v["size"], 35);

    let v = json(&setlp(&["construct", "forb_from_design", "modulus=13", "base=0,1,3,9", "--verify"]));
    assert_eq!(v["size"], 157);

    let v = json(&setlp(&["construct", "upset", "n=3", "generators=1,2;2,3;1,3"]));
    assert_eq!(v["size"], 4);

    let o = setlp(&["construct", "four_part_turan", "n=2", "k=2", "--verify"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["size"], 18);
    assert_eq!(v["graph"]["edges"].as_array().unwrap().len(), 18);
}
