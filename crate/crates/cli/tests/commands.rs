use std::path::PathBuf;
use std::process::Command;

use orbigraph::exact::{Int, IntegerLattice};
use orbigraph::fixtures::NAMES;
use orbigraph_cli::{
    cmd_cohomology, cmd_derive, cmd_emit, cmd_faces, cmd_lattice, cmd_polygon, cmd_thom, cmd_validate, cmd_verify,
    parse_input, CliError, Input, Output, RunConfig, Source,
};
use serde_json::Value;

type Cmd = fn(&RunConfig) -> Result<Output, CliError>;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_orbigraph"))
}

#[test]
fn shipped_fixture_files_match_builtins() {
    for name in NAMES {
        let path = corpus_dir().join(format!("{name}.json"));
        let on_disk = std::fs::read_to_string(&path).unwrap();
        let emitted = cmd_emit(&RunConfig::fixture(name)).unwrap().text;
        assert_eq!(on_disk, emitted, "{name}");
        // emit -> parse -> emit is a fixed point
        let again = cmd_emit(&RunConfig::new(Source::Path(path))).unwrap().text;
        assert_eq!(again, emitted, "{name}");
    }
}

#[test]
fn input_kind_is_detected() {
    assert!(matches!(parse_input(r#"{"polygon": [[1,0],[0,1],[-1,-1]]}"#), Ok(Input::Pair(_))));
    let g = std::fs::read_to_string(corpus_dir().join("doubled-square.json")).unwrap();
    assert!(matches!(parse_input(&g), Ok(Input::Graph(_))));
    assert!(matches!(parse_input("{nope"), Err(CliError::Invalid(_))));
    assert!(matches!(parse_input(r#"{"torus_rank": 1, "vertices": ["a"], "edges": [{"from": "a", "to": "b", "alpha_from": [1], "alpha_to": [-1]}]}"#), Err(CliError::Invalid(_))));
}

#[test]
fn commands_are_deterministic() {
    let cmds: [Cmd; 7] = [cmd_validate, cmd_faces, cmd_thom, cmd_lattice, cmd_cohomology, cmd_verify, cmd_emit];
    for name in ["p1236", "cp2", "doubled-square", "spindle-2-3", "p112"] {
        for cmd in cmds {
            for json in [false, true] {
                let cfg = if json { RunConfig::fixture(name).json() } else { RunConfig::fixture(name) };
                let a = cmd(&cfg).unwrap();
                let b = cmd(&cfg).unwrap();
                assert_eq!(a, b, "{name}");
                if json {
                    serde_json::from_str::<Value>(&a.text).unwrap();
                }
            }
        }
    }
    let p = RunConfig::fixture("p1236");
    assert_eq!(cmd_derive(&p).unwrap(), cmd_derive(&p).unwrap());
}

#[test]
fn binary_output_is_byte_identical() {
    let run = || bin().args(["thom", "--fixture", "p1236", "--format", "json"]).output().unwrap();
    let (a, b) = (run(), run());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    let dir = std::env::temp_dir().join(format!("orbigraph-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let empty = dir.join("empty.json");
    std::fs::write(&empty, r#"{"torus_rank": 2, "vertices": [], "edges": []}"#).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "[1, 2").unwrap();

    let out = bin().args(["validate", "--input"]).arg(&empty).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("no vertices"));
    let out = bin().args(["faces", "--input"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["faces", "--input"]).arg(dir.join("missing.json")).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin().args(["validate", "--fixture", "no-such"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let ok = |args: &[&str]| bin().args(args).output().unwrap().status.code();
    assert_eq!(ok(&["verify", "--fixture", "p1236"]), Some(0));
    assert_eq!(ok(&["validate", "--fixture", "p111222", "--mode", "gkm"]), Some(0));
    assert_eq!(ok(&["validate", "--fixture", "p111222", "--mode", "torus"]), Some(2));
    assert_eq!(ok(&["validate", "--fixture", "nonfree-triangle"]), Some(0));
    // the diagonal spindle is a counterexample to integral surjectivity
    assert_eq!(ok(&["verify", "--fixture", "spindle-diag-3-5", "--max-degree", "1"]), Some(2));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn polygon_matches_lattice_command() {
    let src = Source::Text(r#"{"polygon": [[1,0],[0,1],[-1,-2]]}"#.into());
    let poly: Value = serde_json::from_str(&cmd_polygon(&RunConfig::new(src.clone()).json().degree(1)).unwrap().text).unwrap();
    assert_eq!(poly["gcd"], 1);
    assert_eq!(poly["gcd_condition"], true);
    assert_eq!(poly["rank"], 3);

    let lat: Value = serde_json::from_str(&cmd_lattice(&RunConfig::new(src).json().degree(1)).unwrap().text).unwrap();
    assert_eq!(lat["degree"], 2);
    let order: Vec<usize> = ["F1", "F2", "F3"]
        .iter()
        .map(|f| lat["monomials"].as_array().unwrap().iter().position(|m| m[0] == *f).unwrap())
        .collect();
    let rows = |v: &Value, perm: Option<&[usize]>| -> Vec<Vec<Int>> {
        v.as_array()
            .unwrap()
            .iter()
            .map(|r| {
                let r = r.as_array().unwrap();
                let idx: Vec<usize> = perm.map_or_else(|| (0..r.len()).collect(), |p| p.to_vec());
                idx.iter().map(|&i| Int::from(r[i].as_i64().unwrap())).collect()
            })
            .collect()
    };
    let from_polygon = IntegerLattice::from_rows(3, rows(&poly["generators"], None));
    let from_lattice = IntegerLattice::from_rows(3, rows(&lat["hnf_basis"], Some(&order)));
    assert_eq!(from_polygon, from_lattice);
    assert_eq!(from_polygon.index(), Some(Int::from(2)));
}

#[test]
fn nonfree_polygon_reports_gcd() {
    let out = cmd_polygon(&RunConfig::fixture("nonfree-triangle").json()).unwrap();
    let v: Value = serde_json::from_str(&out.text).unwrap();
    assert_eq!(v["gcd"], 2);
    assert_eq!(v["generators"], Value::Null);
    let human = cmd_polygon(&RunConfig::fixture("nonfree-triangle")).unwrap().text;
    assert!(human.contains("gcd = 2"));
}

#[test]
fn thom_single_face_and_human_degrees() {
    let mut cfg = RunConfig::fixture("p1236");
    cfg.face = Some("F1".into());
    let text = cmd_thom(&cfg).unwrap().text;
    assert!(text.starts_with("F1 (dim 2): minimal multiplier 6, lcm bound 6"));
    assert!(text.contains("-1/6*e3"));
    cfg.face = Some("nope".into());
    assert!(matches!(cmd_thom(&cfg), Err(CliError::Invalid(_))));

    let text = cmd_lattice(&RunConfig::fixture("p1236").degree(2)).unwrap().text;
    assert!(text.starts_with("integrality lattice in degree 4 (polynomial degree 2)"));
    let text = cmd_cohomology(&RunConfig::fixture("spindle-2-3")).unwrap().text;
    assert!(text.contains("ordinary ranks (degrees 0,2,..,2): [1, 1]"));
}

#[test]
fn derive_rejects_graphs() {
    assert!(matches!(cmd_derive(&RunConfig::fixture("doubled-square")), Err(CliError::Invalid(_))));
    assert!(matches!(cmd_polygon(&RunConfig::fixture("p1236")), Err(CliError::Invalid(_))));
}
