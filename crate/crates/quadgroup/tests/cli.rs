//! End-to-end tests of the `quadgroup` binary: subcommand output, exit
//! codes, report determinism, and conformance of the JSON reports to the
//! schema shipped in `docs/report-schema.json`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use quadgroup::groups::symmetric;
use quadgroup::quadmaps::squaring;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quadgroup"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin().args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

struct Fixtures {
    dir: tempfile::TempDir,
}

impl Fixtures {
    fn new() -> Self {
        let dir = tempfile::tempdir().expect("tempdir");
        let write = |name: &str, body: &str| {
            fs::write(dir.path().join(name), body).expect("fixture write");
        };
        write("c2.json", r#"{"kind":"builtin","family":"cyclic","params":{"n":2}}"#);
        write("c4.json", r#"{"kind":"builtin","family":"cyclic","params":{"n":4}}"#);
        write("c8.json", r#"{"kind":"builtin","family":"cyclic","params":{"n":8}}"#);
        write("d4.json", r#"{"kind":"builtin","family":"dihedral","params":{"n":4}}"#);
        write("s3.json", r#"{"kind":"builtin","family":"symmetric","params":{"n":3}}"#);
        write("square.json", r#"{"values":[0,1,4,1]}"#);
        write("z8.json", r#"{"factors":[8]}"#);
        write("badgroup.json", r#"{"kind":"table","size":2,"table":[[0,1],[1,1]]}"#);
        write("badjson.json", r#"{"kind": nope}"#);
        // squaring on S3 written from the library so indices match the builtin
        let s3 = symmetric(3).unwrap();
        let sq = squaring(&s3);
        let vals: Vec<u32> = s3.elements().map(|a| sq.apply(a)).collect();
        write(
            "sq_s3.json",
            &serde_json::to_string(&serde_json::json!({ "values": vals })).unwrap(),
        );
        write(
            "pres_c4.json",
            r#"{"generators":1,"relators":[[["x0",1],["x0",1],["x0",1],["x0",1]]],"pi":{"group":{"kind":"builtin","family":"cyclic","params":{"n":4}},"images":[1]}}"#,
        );
        write("gp_square.json", r#"{"chi":[1],"psi":[[2]]}"#);
        write("gp_degenerate.json", r#"{"chi":[1],"psi":[[1]]}"#);
        Fixtures { dir }
    }

    fn path(&self) -> &Path {
        self.dir.path()
    }
}

#[test]
fn analyze_profiles_dihedral() {
    let f = Fixtures::new();
    let out = run(&["analyze", "d4.json"], f.path());
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("order") && text.contains("8"));
    assert!(text.contains("nilpotency class"));
    assert!(text.contains("[2, 2]"));
}

#[test]
fn analyze_reports_non_nilpotent() {
    let f = Fixtures::new();
    let out = run(&["analyze", "s3.json"], f.path());
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("not nilpotent"));
}

#[test]
fn qgroup_on_c2_reports_cyclic_four() {
    let f = Fixtures::new();
    let out = run(&["qgroup", "c2.json"], f.path());
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("4"));
    assert!(text.contains("[4]"));
    assert!(text.contains("verified"));
}

#[test]
fn passi_degree_two_on_c2() {
    let f = Fixtures::new();
    let out = run(&["passi", "c2.json", "--degree", "2"], f.path());
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("[4]"));
}

#[test]
fn passi_whole_subgroup_gives_abelianization() {
    let f = Fixtures::new();
    let out = run(&["passi", "d4.json", "--subgroup", "all", "--degree", "2"], f.path());
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("[2, 2]"));
}

#[test]
fn checkmap_accepts_square_map() {
    let f = Fixtures::new();
    let out = run(&["checkmap", "c4.json", "c8.json", "square.json"], f.path());
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("quadratic"));
    assert!(text.contains("radical"));
    assert!(text.contains("g0 2"));
}

#[test]
fn checkmap_rejects_squaring_on_s3_with_exit_one() {
    let f = Fixtures::new();
    let out = run(&["checkmap", "s3.json", "s3.json", "sq_s3.json"], f.path());
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("not quadratic"));
    assert!(text.contains("counterexample"));
}

#[test]
fn checkpoly_verdicts_split_by_degree() {
    let f = Fixtures::new();
    let ok = run(
        &["checkpoly", "c4.json", "z8.json", "square.json", "--degree", "2"],
        f.path(),
    );
    assert_eq!(code(&ok), 0);
    assert!(stdout(&ok).contains("polynomial"));
    let bad = run(
        &["checkpoly", "c4.json", "z8.json", "square.json", "--degree", "1"],
        f.path(),
    );
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("not polynomial"));
    assert!(stdout(&bad).contains("witness"));
}

#[test]
fn presented_accept_builds_the_square_map() {
    let f = Fixtures::new();
    let out = run(&["presented", "pres_c4.json", "c8.json", "gp_square.json"], f.path());
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("ACCEPT"));
    // constructed table is the square map 0,1,4,1
    assert!(text.contains("2 4"));
}

#[test]
fn presented_reject_lists_exponent_pairing() {
    let f = Fixtures::new();
    let out = run(
        &["presented", "pres_c4.json", "c8.json", "gp_degenerate.json"],
        f.path(),
    );
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("REJECT"));
    assert!(text.contains("exponent-pairing") && text.contains("violated"));
}

#[test]
fn exit_codes_cover_parse_invalid_and_cap() {
    let f = Fixtures::new();
    assert_eq!(code(&run(&["analyze", "badjson.json"], f.path())), 2);
    assert_eq!(code(&run(&["analyze", "missing.json"], f.path())), 2);
    assert_eq!(code(&run(&["analyze", "badgroup.json"], f.path())), 3);
    assert_eq!(code(&run(&["analyze", "d4.json", "--max-order", "4"], f.path())), 4);
    assert_eq!(
        code(&run(&["passi", "c2.json", "--degree", "9"], f.path())),
        4
    );
    assert_eq!(code(&run(&["verify", "--zoo", "nope"], f.path())), 2);
    assert_eq!(code(&run(&["frobnicate"], f.path())), 2);
}

#[test]
fn verify_small_zoo_is_deterministic_and_passes() {
    let f = Fixtures::new();
    let out1 = run(&["verify", "--zoo", "C2,C4", "--json", "v1.json"], f.path());
    assert_eq!(code(&out1), 0);
    let text = stdout(&out1);
    assert!(text.contains("checked ") && text.contains(" pass / 0 fail"));
    let out2 = run(&["verify", "--zoo", "C2,C4", "--json", "v2.json"], f.path());
    assert_eq!(code(&out2), 0);
    let b1 = fs::read(f.path().join("v1.json")).unwrap();
    let b2 = fs::read(f.path().join("v2.json")).unwrap();
    assert_eq!(b1, b2, "JSON reports must be byte-identical across runs");
    assert_eq!(stdout(&out1), stdout(&out2));
}

fn schema_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/report-schema.json")
}

/// Structural validation mirroring docs/report-schema.json.  Kept in lock
/// step with that file; both change together or not at all.
fn validate_report(v: &Value) {
    let obj = v.as_object().expect("report is an object");
    let allowed = ["schema", "command", "status", "findings", "tables", "theorems", "summary"];
    for key in obj.keys() {
        assert!(allowed.contains(&key.as_str()), "unexpected key {key}");
    }
    assert_eq!(obj["schema"], "quadgroup-report/1");
    let commands = ["analyze", "qgroup", "passi", "checkmap", "checkpoly", "presented", "verify"];
    assert!(commands.contains(&obj["command"].as_str().unwrap()));
    assert!(["ok", "fail", "reject"].contains(&obj["status"].as_str().unwrap()));
    for fnd in obj["findings"].as_array().expect("findings array") {
        let fo = fnd.as_object().unwrap();
        assert_eq!(fo.len(), 2);
        assert!(fo["key"].is_string() && fo["value"].is_string());
    }
    if let Some(tables) = obj.get("tables") {
        for t in tables.as_array().unwrap() {
            let to = t.as_object().unwrap();
            assert_eq!(to.len(), 2);
            assert!(to["title"].is_string());
            for row in to["rows"].as_array().unwrap() {
                assert!(row.as_array().unwrap().iter().all(Value::is_string));
            }
        }
    }
    if let Some(theorems) = obj.get("theorems") {
        for t in theorems.as_array().unwrap() {
            let to = t.as_object().unwrap();
            for key in to.keys() {
                assert!(["theorem", "group", "subgroup", "claims"].contains(&key.as_str()));
            }
            assert!(to["theorem"].is_string() && to["group"].is_string());
            assert!(to["subgroup"].as_array().unwrap().iter().all(Value::is_u64));
            for c in to["claims"].as_array().unwrap() {
                let co = c.as_object().unwrap();
                for key in co.keys() {
                    assert!(["name", "status", "witness", "reason"].contains(&key.as_str()));
                }
                assert!(co["name"].is_string());
                assert!(["pass", "fail", "skipped"]
                    .contains(&co["status"].as_str().unwrap()));
            }
        }
    }
    if let Some(s) = obj.get("summary") {
        assert!(s.is_string());
    }
}

#[test]
fn json_reports_conform_to_the_shipped_schema() {
    let schema: Value =
        serde_json::from_str(&fs::read_to_string(schema_path()).expect("schema file"))
            .expect("schema parses");
    assert_eq!(schema["$id"], "quadgroup-report/1");

    let f = Fixtures::new();
    let v = run(&["verify", "--zoo", "C2", "--json", "report.json"], f.path());
    assert_eq!(code(&v), 0);
    let report: Value =
        serde_json::from_str(&fs::read_to_string(f.path().join("report.json")).unwrap())
            .unwrap();
    validate_report(&report);

    let q = run(&["qgroup", "c2.json", "--report", "q.json"], f.path());
    assert_eq!(code(&q), 0);
    let report: Value =
        serde_json::from_str(&fs::read_to_string(f.path().join("q.json")).unwrap()).unwrap();
    validate_report(&report);

    let p = run(&["passi", "c2.json", "--report", "p.json"], f.path());
    assert_eq!(code(&p), 0);
    let report: Value =
        serde_json::from_str(&fs::read_to_string(f.path().join("p.json")).unwrap()).unwrap();
    validate_report(&report);
}
