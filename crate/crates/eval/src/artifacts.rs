//! CSV renderings of the result tables.

use emocirc_core::{fmt3, fmt_fixed, BaselineReport, BaselineSemantics};

use crate::records::Sample;
use crate::scoring::SimilarityTable;
use crate::series::AngleSeries;
use crate::violation::ViolationDetector;

fn render(rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(&r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("utf-8 fields")
}

fn opt3(x: Option<f64>) -> String {
    x.map(fmt3).unwrap_or_else(|| "NA".into())
}

/// `scores.csv`: one row per model, undefined cells as `NA`.
pub fn scores_csv(table: &SimilarityTable) -> String {
    let mut header = vec!["model".to_string()];
    header.extend(table.questions.iter().map(|q| format!("Q{q}")));
    header.extend(["Total", "Violations", "NeutralExcluded"].map(String::from));
    let mut rows = vec![header];
    for r in &table.rows {
        let mut row = vec![r.model.clone()];
        row.extend(r.cells.iter().map(|c| opt3(*c)));
        row.push(opt3(r.total));
        row.push(r.violations.to_string());
        row.push(r.excluded.to_string());
        rows.push(row);
    }
    render(rows)
}

/// `angle_series.csv`, angles in degrees.
pub fn angle_series_csv(series: &AngleSeries) -> String {
    let mut rows = vec![["model", "spec_angle_deg", "mean_angle_deg", "std_deg", "n"]
        .map(String::from)
        .to_vec()];
    for p in &series.points {
        rows.push(vec![
            p.model.clone(),
            fmt3(p.spec_angle),
            fmt3(p.mean_angle),
            fmt3(p.std),
            p.n.to_string(),
        ]);
    }
    render(rows)
}

/// `samples.csv`: per-answer similarity, `NA` when excluded.
pub fn samples_csv(samples: &[Sample], similarities: &[Option<f64>], detector: &ViolationDetector) -> String {
    let mut rows = vec![[
        "text_id",
        "model",
        "question_id",
        "spec_valence",
        "spec_arousal",
        "emotion_word",
        "top_label",
        "similarity",
        "word_count",
        "violation",
    ]
    .map(String::from)
    .to_vec()];
    for (s, sim) in samples.iter().zip(similarities) {
        rows.push(vec![
            s.text_id.clone(),
            s.model.clone(),
            s.question_id.to_string(),
            fmt3(s.spec.valence()),
            fmt3(s.spec.arousal()),
            s.emotion_word.clone().unwrap_or_default(),
            s.top_label.clone(),
            sim.map(|x| format!("{x:.6}")).unwrap_or_else(|| "NA".into()),
            s.word_count.to_string(),
            detector.is_violation(&s.response_text).to_string(),
        ]);
    }
    render(rows)
}

/// `baseline.csv`: every candidate reading of the baseline.
pub fn baseline_csv(report: &BaselineReport) -> String {
    let mut rows = vec![["semantics", "value", "published", "within_tolerance", "default"]
        .map(String::from)
        .to_vec()];
    for c in &report.candidates {
        rows.push(vec![
            c.semantics.to_string(),
            fmt_fixed(c.value, 4),
            fmt3(report.published),
            c.matches_published.to_string(),
            (c.semantics == BaselineSemantics::default()).to_string(),
        ]);
    }
    render(rows)
}
