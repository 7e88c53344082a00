use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn canendo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_canendo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    fs::read_to_string(path).unwrap()
}

fn reports(o: &Output) -> Vec<serde_json::Value> {
    serde_json::from_str::<serde_json::Value>(&stdout(o))
        .unwrap()
        .as_array()
        .unwrap()
        .clone()
}

#[test]
fn list_shows_catalog() {
    let o = canendo(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("so3 (dim 3)"));
    assert!(text.contains("solvable2 (dim 2)"));
    assert!(text.contains("strict_upper_triangular n≤6"));
}

#[test]
fn verify_so3_passes() {
    let o = canendo(&["verify", "so3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rs = reports(&o);
    assert!(rs.len() >= 15);
    assert!(rs.iter().all(|r| r["status"] == "pass"));
    assert!(rs.iter().any(|r| r["identity"] == "nijenhuis-canonical"));
}

#[test]
fn verify_single_identity_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = canendo(&[
        "verify",
        "--algebra",
        "sl2",
        "--which",
        "lax-homomorphism",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let rs: Vec<serde_json::Value> =
        serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(rs.len(), 1);
    assert_eq!(rs[0]["identity"], "lax-homomorphism");
}

#[test]
fn verify_is_deterministic_per_seed() {
    let a = canendo(&["verify", "heisenberg3", "--seed", "7"]);
    let b = canendo(&["verify", "heisenberg3", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn broken_document_reports_jacobi_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    fs::write(
        &path,
        r#"{"name":"broken","dim":3,"structure":[{"i":1,"j":2,"k":3,"c":"1"},{"i":1,"j":3,"k":1,"c":"1"}]}"#,
    )
    .unwrap();
    let o = canendo(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let rs = reports(&o);
    assert_eq!(rs[0]["status"], "fail");
    assert!(rs[0]["witness"][0].as_str().unwrap().contains("Jacobi"));
}

#[test]
fn so5_integrability_witness() {
    let o = canendo(&["verify", "so5", "--which", "integrability"]);
    assert_eq!(o.status.code(), Some(1));
    let rs = reports(&o);
    assert_eq!(rs[0]["identity"], "integrability");
    let witness = rs[0]["witness"].as_array().unwrap();
    assert_eq!(witness.len(), 4);
    assert!(witness[3].as_str().unwrap().starts_with("probe = "));
    let o = canendo(&["verify", "so4", "--which", "integrability"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn exit_codes_for_bad_input() {
    assert_eq!(
        canendo(&["verify", "so3", "--which", "nonsense"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(canendo(&["verify", "so9"]).status.code(), Some(2));
    assert_eq!(
        canendo(&["verify", "so3", "--algebra", "sl2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        canendo(&["verify", "/nonexistent/algebra.json"])
            .status
            .code(),
        Some(3)
    );

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\"name\": 1}").unwrap();
    assert_eq!(
        canendo(&["verify", "--file", path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );

    let o = canendo(&["casimir", "so3", "--out", "/nonexistent/dir/out.txt"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn casimir_output() {
    let o = canendo(&["casimir", "so3", "--max-k", "2"]);
    assert_eq!(stdout(&o), "I1 = 0\nI2 = -2*x1^2 - 2*x2^2 - 2*x3^2\n");
    let o = canendo(&["casimir", "abelian4", "--max-k", "3"]);
    assert_eq!(stdout(&o), "I1 = 0\nI2 = 0\nI3 = 0\n");
    let o = canendo(&["casimir", "solvable2", "--max-k", "1"]);
    assert_eq!(stdout(&o), "I1 = x1\n");
}

#[test]
fn bracket_of_constants() {
    let o = canendo(&["bracket", "so3", "--b", "d1: 1", "--c", "d2: 1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("{B,C} = d3: 1"));
    assert!(text.contains("[X_B,X_C] = X_{B,C}: pass"));

    let o = canendo(&["bracket", "so3", "--b", "d1: x2*x3", "--c", "d1: x2*x3"]);
    assert!(stdout(&o).starts_with("{B,C} = 0\n"));
}

#[test]
fn bracket_parse_error_has_position() {
    let o = canendo(&["bracket", "so3", "--b", "d1: x1 +", "--c", "d2: 1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--b: 1:"));
}

#[test]
fn bracket_sl2_golden() {
    let b = golden("sl2_b.txt");
    let c = golden("sl2_c.txt");
    let o = canendo(&["bracket", "sl2", "--b", b.trim(), "--c", c.trim()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("sl2_bracket.out"));
}

#[test]
fn flow_euler_top() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj.csv");
    let args = [
        "flow",
        "so3",
        "--potential",
        "d1:a*x1;d2:b*x2;d3:c*x3",
        "--param",
        "a=1,b=2,c=3",
        "--x0",
        "1,1,1",
        "--t1",
        "10",
        "--dt",
        "0.001",
        "--out",
        out.to_str().unwrap(),
    ];
    let o = canendo(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().next(), Some("t,x1,x2,x3,I1,I2,I3,specdev"));
    assert_eq!(csv.lines().count(), 10_002);

    // I2 = -2 |x|^2 on so3
    let err = stderr(&o);
    let i2 = err
        .lines()
        .find_map(|l| l.strip_prefix("max drift I2 = "))
        .unwrap()
        .parse::<f64>()
        .unwrap();
    assert!(i2 / 2.0 < 1e-8, "{err}");

    let again = canendo(&args);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&out).unwrap(), csv);
}

#[test]
fn flow_zero_potential_is_constant() {
    let o = canendo(&[
        "flow",
        "so3",
        "--potential",
        "d2: 0",
        "--x0",
        "1,-2,3",
        "--t1",
        "0.5",
        "--dt",
        "0.1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r[1..4] == rows[0][1..4]));
}

#[test]
fn flow_rejects_bad_numbers() {
    let base = [
        "flow",
        "so3",
        "--potential",
        "d1: x1",
        "--x0",
        "1,1,1",
        "--t1",
        "1",
    ];
    let with = |extra: &[&str]| {
        let mut v: Vec<&str> = base.to_vec();
        v.extend_from_slice(extra);
        canendo(&v).status.code()
    };
    assert_eq!(with(&["--dt", "-1"]), Some(2));
    assert_eq!(with(&["--dt", "0"]), Some(2));
    assert_eq!(with(&["--method", "leapfrog"]), Some(2));
    assert_eq!(
        canendo(&[
            "flow",
            "so3",
            "--potential",
            "d1: x1",
            "--x0",
            "1,1",
            "--t1",
            "1"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn flow_blow_up_is_a_failure() {
    let o = canendo(&[
        "flow",
        "abelian1",
        "--potential",
        "d1: 0",
        "--x0",
        "1",
        "--t1",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    // Lax fields on abelian algebras vanish; a blow-up needs a nonlinear field
    let o = canendo(&[
        "flow",
        "solvable2",
        "--potential",
        "d2: x2^3",
        "--x0",
        "1,1",
        "--t1",
        "50",
        "--dt",
        "0.1",
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stderr(&o).contains("non-finite"));
}
