#![allow(dead_code)]

use std::path::Path;
use std::sync::Arc;

use emocirc_classifier::{ClassificationLine, StubClassifier};
use emocirc_core::LabelVectors;
use emocirc_eval::{
    classify_records, evaluate, logs, run_generation, Evaluation, ExperimentPlan, ModelSpec,
    NeutralPolicy, ViolationDetector,
};
use emocirc_gateway::provider::MockProvider;
use emocirc_gateway::{Gateway, LogLine, SamplingParams};

/// Model A mirrors the target; model B is one sector off on Q1 and four on Q2.
pub fn gateway() -> Gateway {
    Gateway::builder()
        .provider("mock-a", Arc::new(MockProvider::new(0, 0)), 4)
        .provider("mock-b", Arc::new(MockProvider::new(1, 3)), 4)
        .build()
}

pub fn plan(n_states: usize, n_questions: usize) -> ExperimentPlan {
    let models = ["mock-a", "mock-b"]
        .iter()
        .map(|id| ModelSpec {
            provider_id: id.to_string(),
            model: "mock".into(),
            params: SamplingParams::default(),
        })
        .collect();
    let mut plan = ExperimentPlan::numeric(models);
    plan.n_states = n_states;
    plan.questions.truncate(n_questions);
    plan
}

pub fn generate(plan: &ExperimentPlan, dir: &Path) -> (Vec<LogLine>, Vec<ClassificationLine>) {
    let out = dir.join("generations.jsonl");
    run_generation(plan, &gateway(), 4, &out, "fixture").unwrap();
    let lines: Vec<LogLine> = logs::read_jsonl(&out).unwrap();
    let cls = classify_records(&lines, &StubClassifier, "fixture").unwrap();
    (lines, cls)
}

pub fn evaluate_default(lines: &[LogLine], cls: &[ClassificationLine]) -> Evaluation {
    evaluate(
        lines,
        cls,
        &LabelVectors::shipped(),
        NeutralPolicy::Exclude,
        &ViolationDetector::default(),
    )
    .unwrap()
}
