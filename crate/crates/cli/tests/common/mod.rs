#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub const ORGANISMS: [&str; 4] = ["worm", "fly", "mouse", "yeast"];
pub const PIPELINE_RUN: &str = "run-771d45134261";

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn govsg(args: &[&str]) -> Run {
    govsg_env(args, &[])
}

pub fn govsg_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_govsg"));
    cmd.args(args).env_remove("GOVSG_BACKEND_URL");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let Output { status, stdout, stderr } = cmd.output().expect("binary runs");
    Run {
        code: status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&stdout).into_owned(),
        stderr: String::from_utf8_lossy(&stderr).into_owned(),
    }
}

pub fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

pub fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Compares `actual` with the stored golden file. `UPDATE_GOLDEN=1`
/// rewrites the file instead.
pub fn check_golden(name: &str, actual: &str) -> Result<(), String> {
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, actual).unwrap();
        return Ok(());
    }
    let expected = fs::read_to_string(&path)
        .map_err(|e| format!("{}: {e} (regenerate with UPDATE_GOLDEN=1)", path.display()))?;
    if expected == actual {
        Ok(())
    } else {
        let line = expected
            .lines()
            .zip(actual.lines())
            .position(|(a, b)| a != b)
            .map_or_else(|| "length differs".to_string(), |n| format!("first difference at line {}", n + 1));
        Err(format!("{} does not match: {line}", path.display()))
    }
}

/// Runs the bundled pipeline in mock mode with the sample annotations.
pub fn run_pipeline(out: &Path) -> Run {
    govsg(&[
        "pipeline",
        "--config",
        p(&fixture("pipeline.toml")),
        "--mock-script",
        p(&fixture("mock_script.json")),
        "--annotations",
        p(&fixture("report_annotations.json")),
        "--out",
        p(out),
    ])
}

/// Every file the pipeline golden covers, as (golden name, produced path).
pub fn pipeline_artifacts(out: &Path) -> Vec<(String, PathBuf)> {
    let mut files = Vec::new();
    for org in ORGANISMS {
        for ext in ["tsv", "json"] {
            files.push((format!("pipeline/rank/{org}.{ext}"), out.join(format!("rank/{org}.{ext}"))));
        }
    }
    files.push((
        "pipeline/transcript.canonical.json".into(),
        out.join("transcripts").join(PIPELINE_RUN).join("transcript.canonical.json"),
    ));
    files.push(("pipeline/report.html".into(), out.join("report/report.html")));
    files.push(("pipeline/report.md".into(), out.join("report/report.md")));
    files
}
