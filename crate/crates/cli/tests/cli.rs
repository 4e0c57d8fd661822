use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn unital(args: &[&str], stdin: Option<&str>, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_unital"));
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).env_remove("UNITAL_CACHE");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().unwrap();
    child.stdin.take().unwrap().write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &tempfile::TempDir, name: &str, text: &[u8]) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn fixture_pipes_into_verify() {
    let f = unital(&["fixture"], None, &[]);
    assert!(f.status.success());
    let v = unital(&["verify"], Some(std::str::from_utf8(&f.stdout).unwrap()), &[]);
    assert_eq!(v.status.code(), Some(0));
    let r = json(&v);
    assert_eq!(r["order"], 3);
    assert_eq!(r["au5"], true);
}

#[test]
fn fixture_has_trivial_group_and_self_iso_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "f.json", &unital(&["fixture"], None, &[]).stdout);
    let a = json(&unital(&["aut", &f], None, &[]));
    assert_eq!(a["order"], 1);
    let i = json(&unital(&["iso", &f, &f], None, &[]));
    assert_eq!(i["isomorphic"], true);
    let map: Vec<u64> = serde_json::from_value(i["map"].clone()).unwrap();
    assert_eq!(map, (0..24).collect::<Vec<_>>());
}

#[test]
fn broken_structure_exits_one() {
    let mut file = json(&unital(&["fixture"], None, &[]));
    file["long_blocks"][0] = serde_json::json!([0, 1, 4, 5]);
    let v = unital(&["verify"], Some(&file.to_string()), &[]);
    assert_eq!(v.status.code(), Some(1));
    assert!(!json(&v)["failures"].as_array().unwrap().is_empty());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(unital(&["verify"], Some("{"), &[]).status.code(), Some(2));
    assert_eq!(unital(&["theorems", "--q", "2"], None, &[]).status.code(), Some(2));
    assert_eq!(unital(&["build", "--q", "6"], None, &[]).status.code(), Some(2));
    assert_eq!(unital(&["bogus"], None, &[]).status.code(), Some(2));
}

#[test]
fn build_close_verify() {
    let dir = tempfile::tempdir().unwrap();
    let u = write(&dir, "u.json", &unital(&["build", "--q", "3"], None, &[]).stdout);
    for p in ["flat", "natural"] {
        let c = unital(&["closure", &u, "--parallelism", p], None, &[]);
        assert!(c.status.success());
        assert_eq!(json(&c)["num_points"], 28);
        let v = unital(&["verify"], Some(std::str::from_utf8(&c.stdout).unwrap()), &[]);
        assert_eq!(v.status.code(), Some(0));
    }
    let r = json(&unital(&["parallelisms", &u, "--r-invariant"], None, &[]));
    assert_eq!(r["count"], 2);
    assert_eq!(r["flat"], true);
    assert_eq!(r["natural"], true);
}

#[test]
fn output_is_deterministic() {
    for args in [&["classify", "--q", "3"][..], &["build", "--q", "4", "--s-type", "cyclic"], &["quadrangle", "--q", "2"]] {
        let a = unital(args, None, &[]);
        let b = unital(args, None, &[]);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn text_format_is_flat() {
    let out = unital(&["quadrangle", "--q", "2", "--format", "text"], None, &[]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "aut_order: 72"));
    assert!(text.lines().all(|l| l.contains(": ")));
}

#[test]
fn classify_uses_cache() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let first = unital(&["classify", "--q", "4", "--cache", path], None, &[]);
    assert_eq!(json(&first)["count"], 2);
    let files: Vec<_> = std::fs::read_dir(dir.path().join("classify")).unwrap().collect();
    assert_eq!(files.len(), 1);
    let entry = files[0].as_ref().unwrap().path();
    let mut cached = json(&first);
    cached["count"] = serde_json::json!(99);
    std::fs::write(&entry, cached.to_string()).unwrap();
    let other = tempfile::tempdir().unwrap();
    let hit = unital(&["classify", "--q", "4", "--cache", other.path().to_str().unwrap()], None, &[("UNITAL_CACHE", path)]);
    assert_eq!(json(&hit)["count"], 99);
}
