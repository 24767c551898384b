use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chamber-forge"))
}

fn write_file(dir: &tempfile::TempDir, name: &str, content: &str) -> String {
    let path = dir.path().join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(content.as_bytes()).unwrap();
    path.to_string_lossy().into_owned()
}

fn verdicts(output: &Output) -> Value {
    let report: Value = serde_json::from_slice(&output.stdout).expect("report is JSON");
    assert_eq!(report["schema_version"], "1");
    report["verdicts"].clone()
}

const P1_FAN: &str =
    r#"{"schema_version":"1","rank":1,"rays":[[1],[-1]],"cones":[[0],[1],[]]}"#;
const SIGN_FLIP_GROUP: &str = r#"{"schema_version":"1","rank":1,"generators":[[[-1]]]}"#;
const SC_A2_CHAMBER: &str =
    r#"{"schema_version":"1","rank":2,"rays":[[2,1],[1,2]],"cones":[[0,1],[0],[1],[]]}"#;

#[test]
fn fan_check_p1_all_predicates_pass() {
    let dir = tempfile::tempdir().unwrap();
    let fan = write_file(&dir, "p1.json", P1_FAN);
    let out = bin()
        .args(["fan", "check", &fan, "--complete", "--smooth", "--projective"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let v = verdicts(&out);
    assert_eq!(v["valid"], true);
    assert_eq!(v["smooth"]["verdict"], true);
    assert_eq!(v["complete"]["verdict"], true);
    assert_eq!(v["projective"]["verdict"], true);
}

#[test]
fn fan_check_smoothness_failure_reports_witness_index() {
    let dir = tempfile::tempdir().unwrap();
    let fan = write_file(&dir, "sc.json", SC_A2_CHAMBER);
    let out = bin().args(["fan", "check", &fan, "--smooth"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v = verdicts(&out);
    assert_eq!(v["smooth"]["verdict"], false);
    assert_eq!(v["smooth"]["witness"]["index"], 3);
}

#[test]
fn fan_check_malformed_json_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let fan = write_file(&dir, "bad.json", "{not json");
    let out = bin().args(["fan", "check", &fan, "--smooth"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fan_check_missing_faces_is_invalid() {
    let dir = tempfile::tempdir().unwrap();
    // zero cone missing from the listing
    let fan = write_file(
        &dir,
        "gappy.json",
        r#"{"schema_version":"1","rank":1,"rays":[[1],[-1]],"cones":[[0],[1]]}"#,
    );
    let out = bin().args(["fan", "check", &fan]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v = verdicts(&out);
    assert_eq!(v["valid"], false);
}

#[test]
fn fan_check_stability() {
    let dir = tempfile::tempdir().unwrap();
    let fan = write_file(&dir, "p1.json", P1_FAN);
    let group = write_file(&dir, "neg.json", SIGN_FLIP_GROUP);
    let out = bin()
        .args(["fan", "check", &fan, "--stable", &group])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(verdicts(&out)["stable"]["verdict"], true);
}

#[test]
fn fan_saturate_half_line_gives_p1() {
    let dir = tempfile::tempdir().unwrap();
    let half = write_file(
        &dir,
        "half.json",
        r#"{"schema_version":"1","rank":1,"rays":[[1]],"cones":[[0],[]]}"#,
    );
    let group = write_file(&dir, "neg.json", SIGN_FLIP_GROUP);
    let out = bin().args(["fan", "saturate", &half, &group]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = verdicts(&out);
    assert_eq!(v["fan"]["rays"], serde_json::json!([[-1], [1]]));
}

#[test]
fn roundtrip_refine_output_through_fan_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["refine", "--preset", "A2", "--form", "sc"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = verdicts(&out);
    assert_eq!(v["trace"]["iterations"], 1);
    let saturated = serde_json::to_string(&v["saturated_fan"]).unwrap();
    let fan = write_file(&dir, "sat.json", &saturated);
    let check = bin()
        .args(["fan", "check", &fan, "--smooth", "--complete", "--projective"])
        .output()
        .unwrap();
    assert_eq!(check.status.code(), Some(0), "refined fan re-verifies");
}

#[test]
fn refine_preset_a1_is_trivial() {
    let out = bin().args(["refine", "--preset", "A1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = verdicts(&out);
    assert_eq!(v["trace"]["iterations"], 0);
    assert_eq!(v["chamber_fan"]["rays"], serde_json::json!([[1]]));
}

#[test]
fn refine_budget_zero_fails_with_trace() {
    let dir = tempfile::tempdir().unwrap();
    let fan = write_file(&dir, "sc.json", SC_A2_CHAMBER);
    let trivial_group = write_file(
        &dir,
        "trivial.json",
        r#"{"schema_version":"1","rank":2,"generators":[]}"#,
    );
    let out = bin()
        .args(["refine", "--fan", &fan, "--group", &trivial_group, "--budget", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v = verdicts(&out);
    assert!(v["error"].as_str().unwrap().contains("budget"));
    assert_eq!(v["trace"]["iterations"], 0);
}

#[test]
fn monoid_commands() {
    let out = bin().args(["monoid", "[[2],[3]]", "--saturate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = verdicts(&out);
    assert_eq!(v["saturated_generators"], serde_json::json!([[1]]));
    assert_eq!(v["added"], serde_json::json!([[1]]));

    let out = bin()
        .args(["monoid", "[[0,1],[2,1]]", "--saturate"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(verdicts(&out)["added"], serde_json::json!([[1, 1]]));

    let out = bin().args(["monoid", "[[1]]", "--saturate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(verdicts(&out)["added"], serde_json::json!([]));

    // a line is not pointed: exit 1 with the lattice description
    let out = bin()
        .args(["monoid", "[[1],[-1]]", "--saturate"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(verdicts(&out)["not_pointed"], true);

    // garbage generators: exit 2
    let out = bin().args(["monoid", "nope", "--saturate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dvr_analyze_constant_family() {
    let dir = tempfile::tempdir().unwrap();
    let doc = r#"{"schema_version":"1","base_rank":1,"fan":{"schema_version":"1","rank":2,"rays":[[1,0],[-1,0],[0,1]],"cones":[[0,2],[1,2],[0],[1],[2],[]]}}"#;
    let path = write_file(&dir, "dvr.json", doc);
    let out = bin().args(["dvr", "analyze", &path]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = verdicts(&out);
    assert_eq!(v["constant_family"], true);
    assert_eq!(v["special_fiber_components"]["count"], 1);
    assert_eq!(v["recession_fan"]["rays"], serde_json::json!([[-1], [1]]));
}

#[test]
fn counterexample_small_bound() {
    let out = bin()
        .args(["counterexample", "--ray-bound", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = verdicts(&out);
    assert_eq!(v["family_size"], 131);
    assert_eq!(v["unexplained"], 0);
    let table = v["orbit_table"].as_array().unwrap();
    assert_eq!(table.len(), 101);
    assert_eq!(table[7], serde_json::json!([7, [7, 1]]));
}

#[test]
fn counterexample_rejects_identity() {
    let out = bin()
        .args(["counterexample", "--matrix", "1 0 0 1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cox_p1_exits_clean() {
    let dir = tempfile::tempdir().unwrap();
    let fan = write_file(&dir, "p1.json", P1_FAN);
    let out = bin().args(["cox", &fan]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = verdicts(&out);
    assert_eq!(v["patterns"].as_array().unwrap().len(), 4);
    for p in v["patterns"].as_array().unwrap() {
        assert_eq!(p["nondegenerate"], p["semistable"]);
    }
}

#[test]
fn reports_are_byte_identical_without_timing() {
    let dir = tempfile::tempdir().unwrap();
    let fan = write_file(&dir, "p1.json", P1_FAN);
    let a = bin().args(["fan", "check", &fan, "--smooth"]).output().unwrap();
    let b = bin().args(["fan", "check", &fan, "--smooth"]).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    // with timing the field appears
    let c = bin()
        .args(["--timing", "fan", "check", &fan, "--smooth"])
        .output()
        .unwrap();
    let report: Value = serde_json::from_slice(&c.stdout).unwrap();
    assert!(report.get("timing_ms").is_some());
}

#[test]
fn document_roundtrip_preserves_structure() {
    let dir = tempfile::tempdir().unwrap();
    // weyl fan out, check back in, saturate under trivial group: identity
    let out = bin()
        .args(["rootdatum", "weylfan", "A2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = verdicts(&out);
    assert_eq!(v["weyl_order"], 6);
    let fan_doc = serde_json::to_string(&v["fan"]).unwrap();
    let path = write_file(&dir, "weyl.json", &fan_doc);
    let check = bin()
        .args(["fan", "check", &path, "--complete", "--smooth", "--projective"])
        .output()
        .unwrap();
    assert_eq!(check.status.code(), Some(0));
    // re-encode must match the original document byte for byte
    let again = bin().args(["rootdatum", "weylfan", "A2"]).output().unwrap();
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn strata_command() {
    let out = bin().args(["rootdatum", "strata", "A2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = verdicts(&out);
    assert_eq!(v["count"], 4);
    assert_eq!(v["divisors"], 2);

    let out = bin()
        .args(["rootdatum", "strata", "A2", "--form", "sc"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn big_integers_roundtrip_as_strings() {
    let dir = tempfile::tempdir().unwrap();
    // a ray coordinate beyond 53 bits must come back intact
    let big = "18014398509481984123"; // > 2^63, forces the string path
    let doc = format!(
        r#"{{"schema_version":"1","rank":1,"rays":[["{big}"],[-1]],"cones":[[0],[1],[]]}}"#
    );
    let path = write_file(&dir, "big.json", &doc);
    let out = bin().args(["fan", "check", &path]).output().unwrap();
    // the huge ray is not primitive? it is: a single coordinate is primitive
    // iff nonzero... gcd of one coordinate is itself, so this ray is NOT
    // primitive and the fan is invalid: exit 1 with a violation mentioning it
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    let v = verdicts(&out);
    assert_eq!(v["valid"], false);
    let text = serde_json::to_string(&v["violations"]).unwrap();
    assert!(text.contains("18014398509481984123"));
}

#[test]
fn non_primitive_listed_ray_is_invalid() {
    let dir = tempfile::tempdir().unwrap();
    let fan = write_file(
        &dir,
        "scaled.json",
        r#"{"schema_version":"1","rank":2,"rays":[[2,0],[0,1]],"cones":[[0,1],[0],[1],[]]}"#,
    );
    let out = bin().args(["fan", "check", &fan]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v = verdicts(&out);
    assert_eq!(v["valid"], false);
    let text = serde_json::to_string(&v["violations"]).unwrap();
    assert!(text.contains("not primitive"));
}

#[test]
fn cox_guard_refuses_large_fans() {
    let dir = tempfile::tempdir().unwrap();
    // 13 rays in rank 2: a complete fan exceeding the pattern guard
    let mut rays = Vec::new();
    for k in 0..13i64 {
        // distinct primitive directions
        let angle_points = [
            (1, 0), (3, 1), (2, 1), (1, 1), (1, 2), (1, 3), (0, 1),
            (-1, 2), (-1, 1), (-2, 1), (-1, 0), (-1, -1), (0, -1),
        ];
        rays.push(vec![angle_points[k as usize].0, angle_points[k as usize].1]);
    }
    let cones: Vec<Vec<usize>> = (0..13).map(|i| vec![i, (i + 1) % 13]).collect();
    let mut all_cones: Vec<Vec<usize>> = (0..13).map(|i| vec![i]).collect();
    all_cones.extend(cones);
    all_cones.push(vec![]);
    let doc = serde_json::json!({
        "schema_version": "1",
        "rank": 2,
        "rays": rays,
        "cones": all_cones,
    });
    let path = write_file(&dir, "big_fan.json", &doc.to_string());
    let out = bin().args(["cox", &path]).output().unwrap();
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}
