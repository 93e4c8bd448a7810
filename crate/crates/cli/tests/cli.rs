use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqindex")).args(args).current_dir(corpus()).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn space(cmd: &str, name: &str) -> Output {
    let c = format!("{name}/complex.json");
    let g = format!("{name}/group.json");
    run(&[cmd, "--complex", &c, "--group", &g])
}

#[test]
fn strata_of_the_half_turn() {
    let out = space("strata", "octahedron-rotation2");
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let strata = v["output"]["strata"].as_array().unwrap();
    assert_eq!(strata.len(), 2);
    let singular = strata[1]["components"].as_array().unwrap();
    assert_eq!(singular.len(), 2);
    assert!(singular.iter().all(|c| c["codimension"] == 2));
    assert_eq!(v["output"]["orbit_space"]["euler_characteristic"], 2);
    assert_eq!(v["inputs"]["complex"]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn strata_of_a_free_action() {
    let v = json(&space("strata", "octahedron-antipodal"));
    let strata = v["output"]["strata"].as_array().unwrap();
    assert_eq!(strata.len(), 1);
    assert_eq!(strata[0]["principal"], true);
    assert_eq!(v["output"]["orbit_space"]["euler_characteristic"], 1);
}

#[test]
fn malformed_input_is_diagnosed() {
    let dir = std::env::temp_dir().join(format!("eqindex-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("complex.json");
    fs::write(&bad, r#"{"vertices": ["a", "b"], "maximal_simplices": [["a", "c"]]}"#).unwrap();
    let group = corpus().join("interval-trivial/group.json");
    let out = run(&["strata", "--complex", bad.to_str().unwrap(), "--group", group.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("maximal_simplices[0]") && stderr.contains("unknown vertex c"), "{stderr}");

    fs::write(&bad, "{\"vertices\": [\"a\",\n  \"b\"], \"maximal_simplices\": 7}").unwrap();
    let out = run(&["strata", "--complex", bad.to_str().unwrap(), "--group", group.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_exit_codes() {
    for name in ["torus-involution", "octahedron-identity", "square-trivial"] {
        let out = space("verify", name);
        assert_eq!(out.status.code(), Some(0), "{name}");
        assert_eq!(json(&out)["output"]["status"], "all_match");
    }
    let out = space("verify", "s2-reflection");
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["output"]["status"], "skipped");
    assert_eq!(v["output"]["stratum"], "S0");
}

#[test]
fn verify_single_irreducible_as_table() {
    let out = run(&[
        "verify",
        "--complex",
        "torus-involution/complex.json",
        "--group",
        "torus-involution/group.json",
        "--rho",
        "1",
        "--format",
        "table",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[1].split_whitespace().collect::<Vec<_>>(), ["1", "1", "-2", "-2", "yes"]);
}

#[test]
fn fine_decomp_examples() {
    let out = run(&["fine-decomp", "--group", "bundles/s3-group.json", "--bundle", "bundles/s3-rotations.json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let f = &v["output"]["components"][0]["fine_components"][0];
    assert_eq!(f["fine_component"]["n_b"], 2);
    assert_eq!(f["canonical"]["j0"], 2);
    assert_eq!(f["canonical"]["degree"], 2);
    assert_eq!(f["canonical"]["adapted"], true);

    let v = json(&run(&["fine-decomp", "--group", "bundles/s3-group.json", "--bundle", "bundles/s3-whole.json"]));
    let fine = v["output"]["components"][0]["fine_components"].as_array().unwrap();
    assert_eq!(fine.len(), 3);
    assert!(fine.iter().all(|f| f["fine_component"]["n_b"] == 1));

    let out = run(&["fine-decomp", "--group", "bundles/s3-group.json", "--bundle", "bundles/s3-inconsistent.json"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("equivariance violated") && stderr.contains("n = "), "{stderr}");
}

#[test]
fn assemble_worked_example() {
    let out = run(&["assemble", "--data", "index-data/worked-beta.json", "--rho", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let r = &v["output"]["indices"][0];
    assert_eq!(r["betas"][0]["beta"], serde_json::json!([1, 2]));
    assert_eq!(r["integral"], false);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not an integer"));

    let v = json(&run(&["assemble", "--data", "index-data/basic-mode.json"]));
    assert_eq!(v["output"]["indices"][0]["total"], serde_json::json!([2, 1]));

    let out = run(&["assemble", "--data", "index-data/worked-beta.json", "--rho", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn report_written_to_file_matches_stdout() {
    let path = std::env::temp_dir().join(format!("eqindex-report-{}.json", std::process::id()));
    let args = ["verify", "--complex", "octahedron-klein4/complex.json", "--group", "octahedron-klein4/group.json"];
    let stdout = run(&args).stdout;
    let mut with_out = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    with_out.extend(["--out", &p]);
    let out = run(&with_out);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read(&path).unwrap(), stdout);
    fs::remove_file(&path).unwrap();
}
