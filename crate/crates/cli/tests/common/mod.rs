#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn repo() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

/// Fixture config written into `dir` with output under `dir/runs`.
pub fn fixture_config(dir: &Path, extra: &str) -> PathBuf {
    let questions = repo().join("configs/fixture_questions.txt");
    let src = format!(
        r#"output_dir = "runs"
random_seed = 0

[experiment]
n_states = 12
questions_file = "{}"
{extra}

[[providers]]
id = "mock-a"
kind = "mock"
model = "mirror"

[[providers]]
id = "mock-b"
kind = "mock"
model = "shifted"
mock_shift = 1
mock_question_shift = 3
"#,
        questions.display()
    );
    let path = dir.join("config.toml");
    std::fs::write(&path, src).unwrap();
    path
}

pub fn emocirc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_emocirc")).args(args).output().unwrap()
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Run id printed by `gen`, `full` and `classifier-eval`.
pub fn run_id(o: &Output) -> String {
    stdout(o)
        .lines()
        .find_map(|l| l.strip_prefix("run: "))
        .expect("run id line")
        .to_string()
}
