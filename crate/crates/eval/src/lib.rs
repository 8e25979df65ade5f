//! Experiment orchestration and scoring: generation runs over a plan,
//! classification, similarity tables, angle series, word-count correlation,
//! classifier self-evaluation and role-violation counts.

pub mod artifacts;
mod error;
mod generation;
pub mod logs;
mod plan;
mod records;
mod scoring;
mod selfeval;
mod series;
mod violation;
mod wordcount;

pub use error::EvalError;
pub use generation::{run_generation, GenerationSummary};
pub use plan::{Cell, ExperimentPlan, ModelSpec, PromptMode, DEFAULT_QUESTIONS};
pub use records::{classify_records, join, Sample};
pub use scoring::{sample_similarity, score, ModelRow, NeutralPolicy, SimilarityTable};
pub use selfeval::{
    classifier_self_eval, load_split, parse_split, run_self_eval, ClassifierEvalReport, GoldRow,
    Histogram, HISTOGRAM_BINS,
};
pub use series::{angle_series, AngleSeries, SeriesPoint};
pub use violation::{detect_role_violation, ViolationDetector, DEFAULT_VIOLATION_PATTERNS};
pub use wordcount::{pearson, word_count_analysis, WordCountReport, WordStats};

use emocirc_classifier::ClassificationLine;
use emocirc_core::LabelVectors;
use emocirc_gateway::LogLine;

/// Everything computed from one run's logs.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub samples: Vec<Sample>,
    pub table: SimilarityTable,
    pub series: AngleSeries,
    pub word_counts: WordCountReport,
}

pub fn evaluate(
    lines: &[LogLine],
    classifications: &[ClassificationLine],
    vectors: &LabelVectors,
    policy: NeutralPolicy,
    detector: &ViolationDetector,
) -> Result<Evaluation, EvalError> {
    if lines.is_empty() {
        return Err(EvalError::Plan("the run has no generations".into()));
    }
    let samples = join(lines, classifications)?;
    let table = score(&samples, vectors, policy, detector)?;
    let series = angle_series(&samples, vectors)?;
    let word_counts = word_count_analysis(&samples, &table.similarities);
    Ok(Evaluation {
        samples,
        table,
        series,
        word_counts,
    })
}
