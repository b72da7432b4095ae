use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn treemb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treemb")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn gen(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.path().join(name);
    let mut all = vec!["gen"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let out = treemb(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_tree_has_fifteen_vertices() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("t.json");
    let out = treemb(&["gen", "tree", "--b", "2", "--h", "3", "--out", s(&path)]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "vertices=15 edges=14");
    let doc: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["kind"], "tree");
    assert_eq!(doc["n"], 15);
}

#[test]
fn gen_parasol_carries_marks() {
    let doc = json(&treemb(&["gen", "parasol", "--b", "2", "--l", "1"]));
    assert_eq!(doc["kind"], "graph");
    assert_eq!(doc["marks"]["r"], 0);
    assert!(doc["marks"]["s"].is_u64());
}

#[test]
fn usage_errors_exit_2_with_one_line() {
    for args in [
        vec!["gen", "random", "--n", "0"],
        vec!["gen", "volcano"],
        vec!["bounds", "--p", "0.5", "--gamma", "1"],
        vec!["bounds", "--p", "2", "--gamma", "2"],
        vec!["--workers", "0", "gen", "tree"],
    ] {
        let out = treemb(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        if !args.contains(&"volcano") {
            assert_eq!(err.trim_end().lines().count(), 1, "{err}");
        }
    }
}

#[test]
fn pipeline_single_edge() {
    let dir = TempDir::new().unwrap();
    let t = write(&dir, "e.json", r#"{"kind":"tree","n":2,"root":0,"edges":[[0,1,1]]}"#);
    let r = json(&treemb(&["pipeline", s(&t), "--p", "2"]));
    let half = std::f64::consts::FRAC_1_SQRT_2;
    assert!((r["lip"].as_f64().unwrap() - half).abs() < 1e-15);
    assert!((r["lip_inv"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-15);
    assert!((r["dist"].as_f64().unwrap() - 1.0).abs() < 1e-15);
    assert_eq!(r["within_bounds"], true);
    assert_eq!(r["bound_lip_inv"], 96.0);
    assert_eq!(r["kappa"], 1);
}

#[test]
fn pipeline_binary_h4_within_bounds() {
    let dir = TempDir::new().unwrap();
    let t = gen(&dir, "t.json", &["tree", "--b", "2", "--h", "4"]);
    let r = json(&treemb(&["pipeline", s(&t), "--p", "2"]));
    assert_eq!(r["within_bounds"], true);
    assert_eq!(r["kappa"], 4);
}

#[test]
fn malformed_input_exits_3() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{\"kind\":\"tree\",\"n\":");
    let out = treemb(&["pipeline", s(&bad), "--p", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
}

#[test]
fn invariant_violations_exit_4() {
    let dir = TempDir::new().unwrap();
    let cyc = write(&dir, "g.json", r#"{"kind":"tree","n":3,"root":0,"edges":[[0,1,1],[1,2,1],[2,0,1]]}"#);
    assert_eq!(treemb(&["kappa", s(&cyc)]).status.code(), Some(4));

    let t = gen(&dir, "u.json", &["umbel", "--b", "3"]);
    // two children of the center sharing the center's own color
    let bad = write(&dir, "c.json", r#"{"kind":"coloring","kappa":0,"classes":0,"colors":[null,0,0,0,1]}"#);
    assert_eq!(treemb(&["strong", s(&t), "--coloring", s(&bad)]).status.code(), Some(4));

    let line = write(&dir, "m.json", r#"{"kind":"metric","n":3,"d":[[0,1,2],[1,0,1],[2,1,0]]}"#);
    let fold = write(&dir, "f.json", r#"{"assign":[0,1,0]}"#);
    assert_eq!(treemb(&["distort", "--source", s(&line), "--target", s(&line), "--map", s(&fold)]).status.code(), Some(4));
}

#[test]
fn missing_file_exits_5() {
    assert_eq!(treemb(&["kappa", "/nonexistent/tree.json"]).status.code(), Some(5));
}

#[test]
fn kappa_reports_both_routes_on_small_trees() {
    let dir = TempDir::new().unwrap();
    let t = gen(&dir, "u.json", &["umbel", "--b", "4"]);
    let r = json(&treemb(&["kappa", s(&t)]));
    assert_eq!(r["kappa"], 2);
    assert_eq!(r["brute_force_kappa"], 2);
}

#[test]
fn color_then_embed_roundtrip() {
    let dir = TempDir::new().unwrap();
    let t = gen(&dir, "t.json", &["tree", "--b", "3", "--h", "2"]);
    let c = dir.path().join("c.json");
    assert!(treemb(&["color", s(&t), "--out", s(&c)]).status.success());
    let explicit = treemb(&["embed", s(&t), "--p", "2", "--coloring", s(&c)]);
    let implicit = treemb(&["embed", s(&t), "--p", "2"]);
    assert!(explicit.status.success());
    assert_eq!(explicit.stdout, implicit.stdout);
    let lines: Vec<Value> = explicit.stdout.split(|&b| b == b'\n').filter(|l| !l.is_empty())
        .map(|l| serde_json::from_slice(l).unwrap()).collect();
    assert_eq!(lines.len(), 13);
    assert_eq!(lines[0]["coords"], serde_json::json!([]));

    let ratios = dir.path().join("r.csv");
    assert!(treemb(&["embed", s(&t), "--p", "3", "--ratios", s(&ratios)]).status.success());
    let csv = fs::read_to_string(&ratios).unwrap();
    assert_eq!(csv.lines().next(), Some("x,y,tree_dist,embed_dist,ratio"));
    assert_eq!(csv.lines().count(), 1 + 13 * 12 / 2);
}

#[test]
fn strong_reports_inverse_four_kappa() {
    let dir = TempDir::new().unwrap();
    let t = gen(&dir, "t.json", &["tree", "--b", "2", "--h", "3"]);
    let r = json(&treemb(&["strong", s(&t), "--delta", "0.0833333333"]));
    assert_eq!(r["check"]["pass"], true);
    assert!(r["delta_best"].as_f64().unwrap() >= 1.0 / 12.0);

    let c = dir.path().join("c.json");
    assert!(treemb(&["color", s(&t), "--all-distinct", "--out", s(&c)]).status.success());
    let r = json(&treemb(&["strong", s(&t), "--coloring", s(&c), "--delta", "1"]));
    assert_eq!(r["kappa"], 3);
    assert_eq!(r["check"]["pass"], false);
    assert!(r["check"]["counterexample"].is_array());
}

#[test]
fn distort_and_quotient_on_metric_files() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", r#"{"kind":"metric","n":3,"d":[[0,1,2],[1,0,1],[2,1,0]]}"#);
    let b = write(&dir, "b.json", r#"{"kind":"metric","n":3,"d":[[0,2,3],[2,0,1],[3,1,0]]}"#);
    let id = write(&dir, "id.json", r#"{"assign":[0,1,2]}"#);
    let r = json(&treemb(&["distort", "--source", s(&a), "--target", s(&b), "--map", s(&id)]));
    assert_eq!(r["dist"], 2.0);
    assert_eq!(r["lip"]["value"], 2.0);
    let q = json(&treemb(&["distort", "--quotient", "--source", s(&a), "--target", s(&b), "--map", s(&id)]));
    assert_eq!(q["codist"], 2.0);
}

#[test]
fn lift_of_fold_onto_edge() {
    let dir = TempDir::new().unwrap();
    let z = write(&dir, "z.json", r#"{"kind":"metric","n":3,"d":[[0,1,2],[1,0,1],[2,1,0]]}"#);
    let t = write(&dir, "t.json", r#"{"kind":"tree","n":2,"root":0,"edges":[[0,1,1]]}"#);
    let f = write(&dir, "f.json", r#"{"assign":[0,1,0]}"#);
    let r = json(&treemb(&["lift", "--space", s(&z), "--tree", s(&t), "--map", s(&f)]));
    assert_eq!(r["points"], serde_json::json!([0, 1]));
    assert_eq!(r["holds"], true);
}

#[test]
fn bounds_examples() {
    let out = treemb(&["bounds", "--p", "2", "--gamma", "1", "--h-grid", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = text.lines().last().unwrap().split(',').collect();
    assert_eq!(row[0], "2");
    assert_eq!(row[1].parse::<f64>().unwrap(), 0.0);

    let out = treemb(&["bounds", "--p", "1.5", "--gamma", "0.25", "--h-grid", "4,16,256", "--max-vertices", "0"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let ratios: Vec<f64> = text.lines().skip(2).map(|l| l.split(',').nth(5).unwrap().parse().unwrap()).collect();
    assert_eq!(ratios.len(), 3);
    assert!(ratios.windows(2).all(|w| w[0] < w[1]), "{ratios:?}");

    let parasol = treemb(&["bounds", "--p", "2", "--gamma", "0.25", "--parasol-levels", "1,2"]);
    let text = String::from_utf8(parasol.stdout).unwrap();
    assert_eq!(text.lines().nth(1), Some("l,lower_closed,lower_recursion"));
}

#[test]
fn seed_is_echoed_and_drives_random_trees() {
    let a = json(&treemb(&["--seed", "5", "gen", "random", "--n", "20"]));
    let b = json(&treemb(&["--seed", "6", "gen", "random", "--n", "20"]));
    assert_eq!(a["seed"], 5);
    assert_ne!(a["edges"], b["edges"]);
    let out = treemb(&["--seed", "5", "bounds", "--p", "2", "--gamma", "1", "--h-grid", "2"]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("# seed=5 "));
}

#[test]
fn worker_count_does_not_change_output() {
    let dir = TempDir::new().unwrap();
    let t = gen(&dir, "t.json", &["tree", "--b", "3", "--h", "4"]);
    for cmd in [vec!["pipeline", s(&t), "--p", "1.5"], vec!["strong", s(&t), "--delta", "0.1"]] {
        let runs: Vec<Vec<u8>> = ["1", "2", "4"]
            .iter()
            .map(|w| {
                let mut args = vec!["--workers", w];
                args.extend_from_slice(&cmd);
                let out = treemb(&args);
                assert!(out.status.success());
                out.stdout
            })
            .collect();
        assert!(runs.windows(2).all(|w| w[0] == w[1]), "{cmd:?}");
    }
}

#[test]
fn inputs_are_not_modified() {
    let dir = TempDir::new().unwrap();
    let t = gen(&dir, "t.json", &["random", "--n", "30"]);
    let before = fs::read(&t).unwrap();
    for args in [vec!["kappa", s(&t)], vec!["pipeline", s(&t), "--p", "2"], vec!["color", s(&t)]] {
        assert!(treemb(&args).status.success());
    }
    assert_eq!(fs::read(&t).unwrap(), before);
}
