use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ksix::cli::ResultDocument;
use serde_json::{json, Value};
use tempfile::TempDir;

const FIXTURE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/ktilde_pair.json");

fn ksix(args: &[&str], path: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ksix"))
        .args(args)
        .arg(path)
        .env_remove("KSIX_BOUND")
        .output()
        .unwrap()
}

fn write(dir: &TempDir, name: &str, doc: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string_pretty(doc).unwrap()).unwrap();
    p
}

fn result(out: &Output) -> ResultDocument {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn groups_doc() -> Value {
    json!({
        "schema_version": 1,
        "groups": {
            "Z6": { "invariant_factors": ["6"], "free_rank": 0 },
            "Z": { "invariant_factors": [], "free_rank": 1 },
            "Z2": { "presentation": [["2"]], "ngens": 1 }
        },
        "queries": {
            "e": { "command": "ext", "h": "Z6", "k": "Z" },
            "h1": { "command": "hom", "g": "Z6", "h": "Z2" },
            "h2": { "command": "hom", "g": "Z", "h": "Z6" }
        }
    })
}

fn free_invariant_doc() -> Value {
    json!({
        "schema_version": 1,
        "groups": {
            "Z2": { "invariant_factors": [], "free_rank": 2 },
            "Z4": { "invariant_factors": [], "free_rank": 4 },
            "0": { "invariant_factors": [], "free_rank": 0 }
        },
        "elements": {
            "uA": { "group": "Z2", "coords": ["1", "0"] },
            "uE": { "group": "Z4", "coords": ["0", "0", "1", "0"] }
        },
        "homs": {
            "iota0": { "source": "Z2", "target": "Z4",
                       "matrix": [["1", "0"], ["0", "1"], ["0", "0"], ["0", "0"]] },
            "pi0": { "source": "Z4", "target": "Z2",
                     "matrix": [["0", "0", "1", "0"], ["0", "0", "0", "1"]] },
            "delta0": { "source": "Z2", "target": "0", "matrix": [] },
            "zero": { "source": "0", "target": "0", "matrix": [] },
            "delta1": { "source": "0", "target": "Z2", "matrix": [[], []] }
        },
        "six_term": {
            "S": { "maps": ["iota0", "pi0", "delta0", "zero", "zero", "delta1"], "units": ["uE", "uA"] }
        },
        "invariants": { "I": { "six_term": "S" } },
        "queries": {
            "self": { "command": "iso", "left": "I", "right": "I" },
            "same": { "command": "congruent", "left": "S", "right": "S" }
        }
    })
}

#[test]
fn ext_of_z6_by_z() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "in.json", &groups_doc());
    let out = ksix(&["ext"], &p);
    assert_eq!(out.status.code(), Some(0));
    let r = result(&out);
    assert_eq!(r.status, "ok");
    assert_eq!(r.query.as_deref(), Some("e"));
    assert_eq!(r.result["group"], json!({ "invariant_factors": ["6"], "free_rank": 0 }));
}

#[test]
fn query_selection() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "in.json", &groups_doc());
    let out = ksix(&["hom"], &p);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--query"));
    let out = ksix(&["hom", "--query", "h1"], &p);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(result(&out).result["group"]["invariant_factors"], json!(["2"]));
    let out = ksix(&["hom", "--query", "h2"], &p);
    assert_eq!(result(&out).result["group"]["invariant_factors"], json!(["6"]));
    assert_eq!(ksix(&["ext", "--query", "h1"], &p).status.code(), Some(3));
}

#[test]
fn bound_zero_on_free_ends() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "in.json", &free_invariant_doc());
    let out = ksix(&["iso", "--bound", "0"], &p);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(result(&out).status, "unknown");

    let out = Command::new(env!("CARGO_BIN_EXE_ksix"))
        .args(["iso"])
        .arg(&p)
        .env("KSIX_BOUND", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = ksix(&["congruent"], &p);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(result(&out).status, "yes");
}

#[test]
fn fixture_answers() {
    let p = Path::new(FIXTURE);
    assert_eq!(ksix(&["congruent"], p).status.code(), Some(0));
    assert_eq!(ksix(&["iso"], p).status.code(), Some(0));
    let out = ksix(&["iso-tilde"], p);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(result(&out).status, "no");
}

#[test]
fn input_errors() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{\n  \"schema_version\": 1,\n  \"groups\": {\n    oops\n}").unwrap();
    let out = ksix(&["ext"], &p);
    assert_eq!(out.status.code(), Some(3));
    let r = result(&out);
    assert_eq!(r.status, "input-error");
    assert!(r.result["error"].as_str().unwrap().contains("line 4"));

    let mut doc = groups_doc();
    doc["groups"]["Z6b"] = json!({ "invariant_factors": ["6"], "free_rank": 0 });
    doc["homs"] = json!({ "bad_map": { "source": "Z6b", "target": "Z", "matrix": [["1"]] } });
    let p = write(&dir, "invalid.json", &doc);
    let out = ksix(&["ext"], &p);
    assert_eq!(out.status.code(), Some(3));
    assert!(result(&out).result["error"].as_str().unwrap().contains("bad_map"));

    assert_eq!(ksix(&["no-such-command"], &p).status.code(), Some(3));
    assert_eq!(ksix(&["ext"], &dir.path().join("missing.json")).status.code(), Some(3));
}

#[test]
fn output_is_deterministic_and_round_trips() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "in.json", &free_invariant_doc());
    let a = ksix(&["iso", "--bound", "50"], &p);
    let b = ksix(&["iso", "--bound", "50"], &p);
    assert_eq!(a.stdout, b.stdout);
    let r = result(&a);
    assert_eq!(r.schema_version, 1);
    assert_eq!(r.command, "iso");
    let again = serde_json::to_string_pretty(&r).unwrap() + "\n";
    assert_eq!(again.as_bytes(), &a.stdout[..]);

    let out_path = dir.path().join("out.json");
    let c = ksix(&["iso", "--bound", "50", "--out", out_path.to_str().unwrap()], &p);
    assert_eq!(c.status.code(), a.status.code());
    assert_eq!(std::fs::read(&out_path).unwrap(), a.stdout);
}
