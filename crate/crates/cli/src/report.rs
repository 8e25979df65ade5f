//! `report.md` and plots, rendered only from the stage artifacts.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::Path;

use emocirc_core::fmt3;
use emocirc_eval::{logs::write_atomic, ClassifierEvalReport, WordCountReport};

use crate::error::CliError;
use crate::stages::{ANGLE_SERIES, BASELINE, CLASSIFIER_EVAL, SCORES, WORD_COUNT};
use crate::svg::{angle_plot, histogram, AnglePoint};

const STAGE: &str = "report";
pub const REPORT: &str = "report.md";

struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn read_csv(dir: &Path, name: &str) -> Result<Csv, CliError> {
    let path = dir.join(name);
    let mut rdr = csv::Reader::from_path(&path)
        .map_err(|e| CliError::failure(STAGE, format!("{}: {e}", path.display())))?;
    let header = rdr
        .headers()
        .map_err(|e| CliError::failure(STAGE, format!("{}: {e}", path.display())))?
        .iter()
        .map(String::from)
        .collect();
    let rows = rdr
        .records()
        .map(|r| r.map(|r| r.iter().map(String::from).collect()))
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::failure(STAGE, format!("{}: {e}", path.display())))?;
    Ok(Csv { header, rows })
}

fn read_json<T: serde::de::DeserializeOwned>(dir: &Path, name: &str) -> Result<T, CliError> {
    let path = dir.join(name);
    let bytes = std::fs::read(&path).map_err(|e| CliError::failure(STAGE, format!("{}: {e}", path.display())))?;
    serde_json::from_slice(&bytes).map_err(|e| CliError::failure(STAGE, format!("{}: {e}", path.display())))
}

fn num(s: &str, what: &str) -> Result<f64, CliError> {
    s.parse().map_err(|_| CliError::failure(STAGE, format!("{what}: `{s}` is not a number")))
}

/// File-name-safe form of a model id.
pub fn slug(model: &str) -> String {
    model
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' || c == '.' { c } else { '_' })
        .collect()
}

fn table(out: &mut String, header: &[String], rows: &[Vec<String>]) {
    writeln!(out, "| {} |", header.join(" | ")).unwrap();
    let rule: Vec<&str> = header.iter().enumerate().map(|(i, _)| if i == 0 { "---" } else { "---:" }).collect();
    writeln!(out, "| {} |", rule.join(" | ")).unwrap();
    for r in rows {
        writeln!(out, "| {} |", r.join(" | ")).unwrap();
    }
}

/// Rendered files keyed by path relative to the run directory.
pub fn render(run_dir: &Path, run_id: &str) -> Result<BTreeMap<String, String>, CliError> {
    let scores = read_csv(run_dir, SCORES)?;
    if scores.rows.is_empty() {
        return Err(CliError::failure(STAGE, "scores.csv has no rows; nothing to report"));
    }
    let series = read_csv(run_dir, ANGLE_SERIES)?;
    let baseline = read_csv(run_dir, BASELINE)?;
    let words: WordCountReport = read_json(run_dir, WORD_COUNT)?;
    let selfeval: Option<ClassifierEvalReport> = if run_dir.join(CLASSIFIER_EVAL).is_file() {
        Some(read_json(run_dir, CLASSIFIER_EVAL)?)
    } else {
        None
    };

    let mut files = BTreeMap::new();
    let mut md = String::new();
    writeln!(md, "# Run {run_id}\n").unwrap();

    writeln!(md, "## Mean cosine similarity\n").unwrap();
    writeln!(
        md,
        "Mean cosine similarity between the specified state and the state of the predicted label, per model and question. `NA` marks a cell whose answers were all classified neutral.\n"
    )
    .unwrap();
    table(&mut md, &scores.header, &scores.rows);

    writeln!(md, "\n## Role violations\n").unwrap();
    let vcol = scores.header.iter().position(|h| h == "Violations");
    for r in &scores.rows {
        let v = vcol.map(|i| r[i].as_str()).unwrap_or("NA");
        writeln!(md, "- {}: {v}", r[0]).unwrap();
    }

    writeln!(md, "\n## Baseline\n").unwrap();
    table(&mut md, &baseline.header, &baseline.rows);

    writeln!(md, "\n## Word count\n").unwrap();
    match (words.pearson_r, &words.undefined_reason) {
        (Some(r), _) => writeln!(md, "Pearson r between word count and similarity: {} (n = {})\n", fmt3(r), words.n).unwrap(),
        (None, reason) => writeln!(
            md,
            "Pearson r between word count and similarity: undefined ({})\n",
            reason.as_deref().unwrap_or("no reason recorded")
        )
        .unwrap(),
    }
    let wrows: Vec<Vec<String>> = words
        .per_model
        .iter()
        .map(|w| vec![w.model.clone(), w.n.to_string(), fmt3(w.mean), fmt3(w.std)])
        .collect();
    table(&mut md, &["model", "answers", "mean words", "std"].map(String::from), &wrows);

    writeln!(md, "\n## Evaluated angles\n").unwrap();
    let mut by_model: Vec<(String, Vec<AnglePoint>)> = Vec::new();
    for r in &series.rows {
        let p = AnglePoint {
            spec: num(&r[1], "spec_angle_deg")?,
            mean: num(&r[2], "mean_angle_deg")?,
            std: num(&r[3], "std_deg")?,
        };
        match by_model.iter_mut().find(|(m, _)| *m == r[0]) {
            Some((_, pts)) => pts.push(p),
            None => by_model.push((r[0].clone(), vec![p])),
        }
    }
    for (model, pts) in &by_model {
        let name = format!("plots/angles_{}.svg", slug(model));
        writeln!(md, "![{model}]({name})\n").unwrap();
        files.insert(name, angle_plot(model, pts));
    }
    table(&mut md, &series.header, &series.rows);

    if let Some(s) = &selfeval {
        writeln!(md, "\n## Classifier self-evaluation\n").unwrap();
        let rows = vec![
            vec!["texts".into(), s.n_total.to_string()],
            vec!["after neutral exclusion".into(), s.n_after_neutral_exclusion.to_string()],
            vec!["predicted neutral".into(), s.n_predicted_neutral.to_string()],
            vec!["predicted-neutral policy".into(), s.predicted_neutral_policy.to_string()],
            vec!["scored".into(), s.n_scored.to_string()],
            vec!["top-1 accuracy".into(), fmt3(s.accuracy)],
            vec!["mean similarity".into(), fmt3(s.mean_similarity)],
            vec!["fraction >= sqrt(3)/2".into(), fmt3(s.frac_above_sqrt3_over_2)],
            vec!["fraction >= 1/2".into(), fmt3(s.frac_above_half)],
        ];
        table(&mut md, &["statistic", "value"].map(String::from), &rows);
        writeln!(md, "\n![similarity histogram](plots/selfeval_hist.svg)").unwrap();
        files.insert(
            "plots/selfeval_hist.svg".into(),
            histogram("classifier self-evaluation", &s.similarity_histogram.counts),
        );
    }
    files.insert(REPORT.into(), md);
    Ok(files)
}

/// Renders everything first so a failure leaves no partial report.
pub fn emit(run_dir: &Path, run_id: &str) -> Result<Vec<String>, CliError> {
    let files = render(run_dir, run_id)?;
    for (name, content) in &files {
        write_atomic(&run_dir.join(name), content.as_bytes()).map_err(|e| CliError::failure(STAGE, e.to_string()))?;
    }
    Ok(files.into_keys().collect())
}
