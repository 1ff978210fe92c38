//! Golden cases shared by the golden and acceptance targets.
#![allow(dead_code)]

use std::path::{Path, PathBuf};

use cuspcheck_cli::{run_with, Outcome};

/// Name, arguments, expected exit code.
pub const CASES: &[(&str, &[&str], i32)] = &[
    ("vertices", &["vertices", "simplex2.json"], 0),
    ("moments", &["moments", "chopped_one.json"], 0),
    ("extremal_affine", &["extremal-affine", "simplex2.json", "--exclude", "hyp"], 0),
    ("extremal_affine_two", &["extremal-affine", "simplex2.json", "--exclude", "hyp,x1"], 0),
    ("blowup", &["blowup", "simplex2.json", "--vertex", "0,0", "--eps", "1/4"], 0),
    ("blowup_too_deep", &["blowup", "simplex2.json", "--vertex", "0,0", "--eps", "1"], 1),
    ("tower", &["tower", "simplex2.json", "--facet", "hyp", "--rounds", "2", "--eps", "1/4,1/16"], 0),
    ("check_obstruction", &["check-obstruction", "simplex2.json", "--facet", "hyp"], 0),
    ("check_obstruction_violated", &["check-obstruction", "chopped_one.json", "--facet", "hyp"], 3),
    ("check_hypotheses", &["check-hypotheses", "config_balanced.json"], 0),
    ("check_hypotheses_violated", &["check-hypotheses", "config_unbalanced.json"], 3),
    ("check_hypotheses_toric", &["check-hypotheses", "--toric", "simplex2.json", "--facet", "hyp"], 0),
    ("indicial_roots", &["indicial-roots", "--pairs", "trivial.json", "--window", "0,1"], 0),
    ("indicial_roots_wide", &["indicial-roots", "--pairs", "trivial.json", "--window", "-1,2", "--eta", "-0.3"], 0),
    ("pretty", &["check-obstruction", "simplex2.json", "--facet", "hyp", "--pretty"], 0),
    ("float", &["blowup", "simplex2.json", "--vertex", "0,0", "--eps", "1/3", "--float", "4"], 0),
    ("invalid_polytope", &["vertices", "bad_polytope.json"], 1),
];

/// Polytope fixtures for the round-trip check.
pub const POLYTOPES: &[&str] = &["simplex2.json", "chopped_one.json"];

pub fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

pub fn invoke(args: &[&str], stdin: &str) -> Outcome {
    let data = dir().join("data");
    let argv: Vec<String> = std::iter::once("cuspcheck".to_string())
        .chain(args.iter().map(|a| {
            if a.ends_with(".json") {
                data.join(a).to_string_lossy().into_owned()
            } else {
                a.to_string()
            }
        }))
        .collect();
    run_with(argv, &mut stdin.as_bytes(), false)
}

/// Runs a case and compares against its golden file. With `UPDATE_GOLDEN`
/// set the file is rewritten first.
pub fn check(name: &str) -> Result<(), String> {
    let (_, args, code) = CASES.iter().find(|c| c.0 == name).ok_or(format!("unknown case {name}"))?;
    let out = invoke(args, "");
    if out.code != *code {
        return Err(format!("{name}: exit {} (want {code})\n{}{}", out.code, out.stdout, out.stderr));
    }
    let path = dir().join("golden").join(format!("{name}.out"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).map_err(|e| e.to_string())?;
        std::fs::write(&path, &out.stdout).map_err(|e| e.to_string())?;
    }
    let want = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if out.stdout != want {
        return Err(format!("{name}: stdout differs from {}", path.display()));
    }
    Ok(())
}

/// parse → serialize → parse is a fixed point, and serialization is
/// canonical after one pass.
pub fn round_trip(file: &str) -> Result<(), String> {
    let text = std::fs::read_to_string(dir().join("data").join(file)).map_err(|e| e.to_string())?;
    let doc: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let p = cuspcheck::io::parse_polytope(&doc).map_err(|e| format!("{e:?}"))?;
    let once = cuspcheck::io::polytope_json(&p);
    let q = cuspcheck::io::parse_polytope(&once).map_err(|e| format!("{e:?}"))?;
    if p != q || cuspcheck::io::polytope_json(&q) != once {
        return Err(format!("{file}: round trip is not a fixed point"));
    }
    Ok(())
}
