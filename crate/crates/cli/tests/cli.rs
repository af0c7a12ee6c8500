use std::path::PathBuf;
use std::process::{Command, Output};

fn nccalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nccalc"))
        .args(args)
        .env_remove("NCCALC_SIDE_CONDITIONS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nccalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn inner_suite_passes_on_the_quantum_plane() {
    let o = nccalc(&["verify", "--preset", "quantum_plane_a", "--suite", "inner"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("[PASS]"));
    // side conditions go to stderr in text mode
    assert!(String::from_utf8_lossy(&o.stderr).contains("assuming: p*q != 1"));
}

#[test]
fn cube_of_x_is_closed_at_a_cube_root_of_unity() {
    let o = nccalc(&["d", "--preset", "z3_root_of_unity", "--expr", "x^3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0");
}

#[test]
fn torsion_conditions_on_the_quantum_plane() {
    let o = nccalc(&["torsion-conditions", "--preset", "quantum_plane_a"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("V[1,2,1] = V[1,1,2] + 1"), "{out}");
    assert!(out.contains("V[2,2,1] = V[2,1,2] - 1"), "{out}");
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(nccalc(&["d", "--preset", "nope", "--expr", "x"]).status.code(), Some(2));
    assert_eq!(
        nccalc(&["normalize", "--preset", "quantum_plane_a", "--expr", "x*"]).status.code(),
        Some(2)
    );
    assert_eq!(nccalc(&["d", "--file", "/nonexistent.toml", "--expr", "x"]).status.code(), Some(2));
    let bad = scratch("bad.toml", "[generators]\nnames = [\"x\"]\nbogus = 1\n");
    assert_eq!(
        nccalc(&["normalize", "--file", bad.to_str().unwrap(), "--expr", "x"]).status.code(),
        Some(2)
    );
    assert_eq!(
        nccalc(&["verify", "--preset", "quantum_plane_a", "--suite", "nope"]).status.code(),
        Some(2)
    );
}

#[test]
fn non_confluent_rules_are_an_internal_error() {
    // x*x -> y and x*y -> x overlap on x*x*y with different results
    let f = scratch(
        "nc.toml",
        "[generators]\nnames = [\"x\", \"y\"]\n[relations]\nrules = [[\"x*x\", \"y\"], [\"x*y\", \"x\"]]\n",
    );
    let o = nccalc(&["normalize", "--file", f.to_str().unwrap(), "--expr", "x"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn singular_theta_solve_is_a_check_failure() {
    let o = nccalc(&["theta-solve", "--preset", "quantum_plane_a"]);
    assert_eq!(o.status.code(), Some(1));
    let o = nccalc(&["theta-solve", "--preset", "h_plane_r1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("th_2 = y^-1*d(y)"));
}

#[test]
fn structured_output() {
    let o = nccalc(&["--format", "structured", "d", "--preset", "heisenberg", "--expr", "x*y"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["command"], "d");
    assert_eq!(v["passed"], true);
    assert_eq!(v["source"]["preset"], "heisenberg");
    assert_eq!(v["side_conditions"].as_array().unwrap().len(), 2);
    assert!(v["result"]["d"].is_string());

    let o = nccalc(&["--format", "structured", "d", "--preset", "nope", "--expr", "x"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["exit_code"], 2);
    assert!(v["error"].as_str().unwrap().contains("nope"));
}

#[test]
fn extra_side_conditions_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_nccalc"))
        .args(["--format", "structured", "d", "--preset", "heisenberg", "--expr", "x"])
        .env("NCCALC_SIDE_CONDITIONS", "a != b; b != 1")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let side: Vec<&str> = v["side_conditions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap())
        .collect();
    assert!(side.ends_with(&["a != b", "b != 1"]), "{side:?}");
}

#[test]
fn normal_forms_are_fixed_points() {
    let first = nccalc(&["normalize", "--preset", "quantum_plane_a", "--expr", "y*x*y + x*d(y)"]);
    assert_eq!(first.status.code(), Some(0));
    let nf = stdout(&first).trim().to_string();
    let again = nccalc(&["normalize", "--preset", "quantum_plane_a", "--expr", &nf]);
    assert_eq!(stdout(&again).trim(), nf);
}

#[test]
fn exported_preset_loads_back() {
    let o = nccalc(&["--format", "structured", "preset", "show", "twisted_heisenberg_2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let f = scratch("th2.toml", v["result"]["file"].as_str().unwrap());
    let path = f.to_str().unwrap();
    let a = nccalc(&["d", "--preset", "twisted_heisenberg_2", "--expr", "x*y*x"]);
    let b = nccalc(&["d", "--file", path, "--expr", "x*y*x"]);
    assert_eq!(stdout(&a), stdout(&b));
    let o = nccalc(&["verify", "--file", path, "--suite", "inner", "--suite", "d2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn connection_files_drive_the_geometry_commands() {
    let m = scratch("m.txt", "g[1,1] = 1\ng[2,2] = 1\n");
    let c = scratch("c.txt", "V[1,1,1] = 1\nV[1,2,1] = 1\nV[2,1,2] = 1\nV[2,2,2] = 1\n");
    let (m, c) = (m.to_str().unwrap(), c.to_str().unwrap());
    let src = ["--preset", "quantum_plane_a"];
    let o = nccalc(&[&["torsion"][..], &src, &["--conn", c]].concat());
    assert!(stdout(&o).contains("torsion-free: yes"));
    let o = nccalc(&[&["levi-civita"][..], &src, &["--metric", m, "--conn", c]].concat());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    // the zero connection is not compatible with this metric
    let z = scratch("z.txt", "# nothing\n");
    let o = nccalc(&[&["metric-check"][..], &src, &["--metric", m, "--conn", z.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    let bad = scratch("bad.txt", "V[1,1] = 1\n");
    let o = nccalc(&[&["torsion"][..], &src, &["--conn", bad.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(2));
}
