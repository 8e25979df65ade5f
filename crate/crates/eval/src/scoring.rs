use std::fmt;

use emocirc_core::{cosine_similarity, LabelVectors, NEUTRAL};
use serde::{Deserialize, Serialize};

use crate::error::EvalError;
use crate::records::Sample;
use crate::violation::ViolationDetector;

/// How answers classified as neutral enter the means.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NeutralPolicy {
    /// Left out of every mean and counted separately.
    #[default]
    Exclude,
    /// Scored as similarity 0.
    Zero,
}

impl fmt::Display for NeutralPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Exclude => "exclude",
            Self::Zero => "zero",
        })
    }
}

impl std::str::FromStr for NeutralPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exclude" => Ok(Self::Exclude),
            "zero" => Ok(Self::Zero),
            other => Err(format!("neutral policy must be exclude or zero, not `{other}`")),
        }
    }
}

/// One result-table row.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelRow {
    pub model: String,
    /// Mean per question, aligned with `SimilarityTable::questions`. `None`
    /// when every answer in the cell was excluded.
    pub cells: Vec<Option<f64>>,
    /// Mean over all included samples of the model.
    pub total: Option<f64>,
    pub included: usize,
    pub excluded: usize,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityTable {
    pub policy: NeutralPolicy,
    pub questions: Vec<u32>,
    /// Models in order of first appearance in the samples.
    pub rows: Vec<ModelRow>,
    /// Per-sample similarity aligned with the input samples; `None` when excluded.
    pub similarities: Vec<Option<f64>>,
    pub warnings: Vec<String>,
}

impl SimilarityTable {
    pub fn row(&self, model: &str) -> Option<&ModelRow> {
        self.rows.iter().find(|r| r.model == model)
    }

    pub fn cell(&self, model: &str, question_id: u32) -> Option<f64> {
        let q = self.questions.iter().position(|&q| q == question_id)?;
        self.row(model)?.cells[q]
    }
}

/// Similarity between a sample's specified state and its predicted label,
/// or `None` when the policy drops it.
pub fn sample_similarity(
    sample: &Sample,
    vectors: &LabelVectors,
    policy: NeutralPolicy,
) -> Result<Option<f64>, EvalError> {
    if sample.top_label == NEUTRAL {
        return Ok(match policy {
            NeutralPolicy::Exclude => None,
            NeutralPolicy::Zero => Some(0.0),
        });
    }
    let v = vectors.vector(&sample.top_label)?;
    Ok(Some(cosine_similarity(&sample.spec, &v)?))
}

fn mean(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        None
    } else {
        Some(xs.iter().sum::<f64>() / xs.len() as f64)
    }
}

/// Builds the per-model, per-question table of mean similarities.
pub fn score(
    samples: &[Sample],
    vectors: &LabelVectors,
    policy: NeutralPolicy,
    detector: &ViolationDetector,
) -> Result<SimilarityTable, EvalError> {
    let similarities = samples
        .iter()
        .map(|s| sample_similarity(s, vectors, policy))
        .collect::<Result<Vec<_>, _>>()?;

    let mut questions: Vec<u32> = samples.iter().map(|s| s.question_id).collect();
    questions.sort_unstable();
    questions.dedup();
    let mut models: Vec<&str> = Vec::new();
    for s in samples {
        if !models.contains(&s.model.as_str()) {
            models.push(&s.model);
        }
    }

    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for model in models {
        let mut per_q: Vec<Vec<f64>> = vec![Vec::new(); questions.len()];
        let mut all = Vec::new();
        let (mut excluded, mut violations) = (0, 0);
        for (s, sim) in samples.iter().zip(&similarities).filter(|(s, _)| s.model == model) {
            if detector.is_violation(&s.response_text) {
                violations += 1;
            }
            match sim {
                Some(x) => {
                    let q = questions.binary_search(&s.question_id).expect("question collected");
                    per_q[q].push(*x);
                    all.push(*x);
                }
                None => excluded += 1,
            }
        }
        let cells: Vec<Option<f64>> = per_q.iter().map(|xs| mean(xs)).collect();
        for (q, c) in questions.iter().zip(&cells) {
            if c.is_none() {
                warnings.push(format!("{model} Q{q}: every answer classified neutral, cell undefined"));
            }
        }
        rows.push(ModelRow {
            model: model.to_string(),
            cells,
            total: mean(&all),
            included: all.len(),
            excluded,
            violations,
        });
    }
    Ok(SimilarityTable {
        policy,
        questions,
        rows,
        similarities,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use emocirc_core::{angle_to_vector, AffectVector, AngleDeg, LabelMap, RussellTermTable};

    fn vectors() -> LabelVectors {
        let table = RussellTermTable::new(vec![
            ("east".into(), AngleDeg(0.0)),
            ("n30".into(), AngleDeg(30.0)),
            ("n150".into(), AngleDeg(150.0)),
        ])
        .unwrap();
        let map = LabelMap::new([
            ("joy", vec!["east"]),
            ("pride", vec!["n30"]),
            ("fear", vec!["n150"]),
            ("neutral", vec![]),
        ])
        .unwrap();
        LabelVectors::resolve(&map, &table).unwrap()
    }

    fn sample(model: &str, q: u32, spec: AffectVector, label: &str) -> Sample {
        Sample {
            text_id: String::new(),
            model: model.into(),
            question_id: q,
            spec,
            emotion_word: None,
            response_text: "text".into(),
            word_count: 1,
            top_label: label.into(),
        }
    }

    fn east() -> AffectVector {
        angle_to_vector(AngleDeg(0.0)).unwrap()
    }

    #[test]
    fn single_match_is_one() {
        let t = score(
            &[sample("m", 1, east(), "joy")],
            &vectors(),
            NeutralPolicy::Exclude,
            &ViolationDetector::default(),
        )
        .unwrap();
        assert_eq!(t.cell("m", 1), Some(1.0));
        assert_eq!(t.row("m").unwrap().total, Some(1.0));
    }

    #[test]
    fn opposite_mismatches_cancel() {
        let s = [sample("m", 1, east(), "pride"), sample("m", 1, east(), "fear")];
        let t = score(&s, &vectors(), NeutralPolicy::Exclude, &ViolationDetector::default()).unwrap();
        assert!(t.cell("m", 1).unwrap().abs() < 1e-15);
    }

    #[test]
    fn all_neutral_cell_is_undefined_not_zero() {
        let s = [sample("m", 1, east(), "neutral"), sample("m", 2, east(), "joy")];
        let t = score(&s, &vectors(), NeutralPolicy::Exclude, &ViolationDetector::default()).unwrap();
        assert_eq!(t.cell("m", 1), None);
        assert_eq!(t.cell("m", 2), Some(1.0));
        assert_eq!(t.warnings.len(), 1);
        let row = t.row("m").unwrap();
        assert_eq!((row.included, row.excluded), (1, 1));

        let z = score(&s, &vectors(), NeutralPolicy::Zero, &ViolationDetector::default()).unwrap();
        assert_eq!(z.cell("m", 1), Some(0.0));
        assert_eq!(z.row("m").unwrap().total, Some(0.5));
        assert_eq!(z.row("m").unwrap().excluded, 0);
    }

    #[test]
    fn total_is_sample_mean_not_mean_of_cells() {
        let s = [
            sample("m", 1, east(), "joy"),
            sample("m", 2, east(), "fear"),
            sample("m", 2, east(), "fear"),
            sample("m", 2, east(), "neutral"),
        ];
        let t = score(&s, &vectors(), NeutralPolicy::Exclude, &ViolationDetector::default()).unwrap();
        let c150 = 150f64.to_radians().cos();
        let total = t.row("m").unwrap().total.unwrap();
        assert!((total - (1.0 + 2.0 * c150) / 3.0).abs() < 1e-15);
    }

    #[test]
    fn violations_counted_per_model() {
        let mut a = sample("a", 1, east(), "joy");
        a.response_text = "As an AI I have no mood.".into();
        let b = sample("b", 1, east(), "joy");
        let t = score(&[a, b], &vectors(), NeutralPolicy::Exclude, &ViolationDetector::default()).unwrap();
        assert_eq!(t.row("a").unwrap().violations, 1);
        assert_eq!(t.row("b").unwrap().violations, 0);
    }
}
