//! Checking the classifier against gold labels in circumplex terms.

use std::path::Path;

use emocirc_classifier::{Classifier, TextItem};
use emocirc_core::{cosine_similarity, LabelVectors, GOEMOTIONS_LABELS, NEUTRAL};
use serde::{Deserialize, Serialize};

use crate::error::EvalError;
use crate::scoring::NeutralPolicy;

pub const HISTOGRAM_BINS: usize = 40;
const THRESHOLD_EPS: f64 = 1e-12;

/// One row of the GoEmotions TSV split.
#[derive(Debug, Clone, PartialEq)]
pub struct GoldRow {
    pub text: String,
    /// First listed gold label.
    pub gold: String,
    pub gold_labels: Vec<String>,
}

/// Parses `text<TAB>label ids<TAB>comment id` rows; label ids are
/// comma-separated indices into the GoEmotions label list.
pub fn parse_split(src: &str, source: &str) -> Result<Vec<GoldRow>, EvalError> {
    let mut rows = Vec::new();
    for (i, line) in src.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let err = |msg: String| EvalError::Parse {
            path: source.to_string(),
            line: i + 1,
            msg,
        };
        let mut cols = line.split('\t');
        let text = cols.next().unwrap_or_default();
        let ids = cols.next().ok_or_else(|| err("expected a label id column".into()))?;
        let gold_labels = ids
            .split(',')
            .map(|id| {
                let n: usize = id.trim().parse().map_err(|_| err(format!("bad label id `{id}`")))?;
                GOEMOTIONS_LABELS
                    .get(n)
                    .map(|l| l.to_string())
                    .ok_or_else(|| err(format!("label id {n} outside 0..=27")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(GoldRow {
            text: text.to_string(),
            gold: gold_labels[0].clone(),
            gold_labels,
        });
    }
    Ok(rows)
}

pub fn load_split(path: &Path) -> Result<Vec<GoldRow>, EvalError> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| EvalError::Dataset(format!("{}: {e}", path.display())))?;
    parse_split(&src, &path.display().to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<usize>,
}

impl Histogram {
    fn over(values: &[f64]) -> Self {
        let mut counts = vec![0; HISTOGRAM_BINS];
        let width = 2.0 / HISTOGRAM_BINS as f64;
        for v in values {
            let bin = ((v + 1.0) / width).floor().clamp(0.0, (HISTOGRAM_BINS - 1) as f64);
            counts[bin as usize] += 1;
        }
        Self { lo: -1.0, hi: 1.0, counts }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierEvalReport {
    pub n_total: usize,
    pub n_after_neutral_exclusion: usize,
    /// Rows with a non-neutral gold label predicted as neutral.
    pub n_predicted_neutral: usize,
    pub predicted_neutral_policy: NeutralPolicy,
    /// Rows contributing a similarity.
    pub n_scored: usize,
    /// Top-1 accuracy over all rows; a prediction is correct when it is
    /// among the gold labels.
    pub accuracy: f64,
    pub mean_similarity: f64,
    pub frac_above_sqrt3_over_2: f64,
    pub frac_above_half: f64,
    pub similarity_histogram: Histogram,
}

/// `predicted[i]` is the top label for `rows[i]`.
pub fn classifier_self_eval(
    rows: &[GoldRow],
    predicted: &[String],
    vectors: &LabelVectors,
    policy: NeutralPolicy,
) -> Result<ClassifierEvalReport, EvalError> {
    if rows.is_empty() {
        return Err(EvalError::Dataset("empty split".into()));
    }
    if rows.len() != predicted.len() {
        return Err(EvalError::Dataset(format!(
            "{} rows but {} predictions",
            rows.len(),
            predicted.len()
        )));
    }
    let correct = rows
        .iter()
        .zip(predicted)
        .filter(|(r, p)| r.gold_labels.contains(p))
        .count();

    let mut sims = Vec::new();
    let (mut after, mut predicted_neutral) = (0, 0);
    for (row, pred) in rows.iter().zip(predicted) {
        if row.gold == NEUTRAL {
            continue;
        }
        after += 1;
        if pred == NEUTRAL {
            predicted_neutral += 1;
            if policy == NeutralPolicy::Zero {
                sims.push(0.0);
            }
            continue;
        }
        sims.push(cosine_similarity(&vectors.vector(&row.gold)?, &vectors.vector(pred)?)?);
    }
    if sims.is_empty() {
        return Err(EvalError::Dataset("no row left to score".into()));
    }
    let n = sims.len() as f64;
    let frac = |t: f64| sims.iter().filter(|&&s| s >= t - THRESHOLD_EPS).count() as f64 / n;
    Ok(ClassifierEvalReport {
        n_total: rows.len(),
        n_after_neutral_exclusion: after,
        n_predicted_neutral: predicted_neutral,
        predicted_neutral_policy: policy,
        n_scored: sims.len(),
        accuracy: correct as f64 / rows.len() as f64,
        mean_similarity: sims.iter().sum::<f64>() / n,
        frac_above_sqrt3_over_2: frac(3f64.sqrt() / 2.0),
        frac_above_half: frac(0.5),
        similarity_histogram: Histogram::over(&sims),
    })
}

/// Classifies the split and builds the report.
pub fn run_self_eval(
    rows: &[GoldRow],
    classifier: &dyn Classifier,
    vectors: &LabelVectors,
    policy: NeutralPolicy,
) -> Result<ClassifierEvalReport, EvalError> {
    let items: Vec<TextItem> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| TextItem::new(format!("d{i:05}"), r.text.clone()))
        .collect();
    let predicted: Vec<String> = classifier
        .classify(&items)?
        .into_iter()
        .map(|r| r.top_label)
        .collect();
    classifier_self_eval(rows, &predicted, vectors, policy)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_multi_label_rows() {
        let rows = parse_split("Thanks a lot!\t15\teabc\nWow, ok\t26,4\tedef\n", "t").unwrap();
        assert_eq!(rows[0].gold, "gratitude");
        assert_eq!(rows[1].gold, "surprise");
        assert_eq!(rows[1].gold_labels, ["surprise", "approval"]);
        assert!(matches!(
            parse_split("x\t28\ty", "t"),
            Err(EvalError::Parse { line: 1, .. })
        ));
        assert!(parse_split("no tabs here", "t").is_err());
    }

    #[test]
    fn correct_prediction_scores_one() {
        let rows = parse_split("a\t17\tx", "t").unwrap();
        let r = classifier_self_eval(&rows, &["joy".into()], &LabelVectors::shipped(), NeutralPolicy::Zero)
            .unwrap();
        assert!((r.mean_similarity - 1.0).abs() < 1e-12);
        assert_eq!(r.similarity_histogram.counts[HISTOGRAM_BINS - 1], 1);
        assert_eq!(r.accuracy, 1.0);
    }

    #[test]
    fn length_mismatch() {
        let rows = parse_split("a\t17\tx", "t").unwrap();
        assert!(classifier_self_eval(&rows, &[], &LabelVectors::shipped(), NeutralPolicy::Zero).is_err());
    }
}
