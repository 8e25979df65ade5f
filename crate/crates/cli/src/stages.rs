//! The pipeline stages. Each reads and writes only its run directory and
//! the shared response cache.

use std::collections::BTreeMap;

use emocirc_classifier::ClassificationLine;
use emocirc_core::baseline_report;
use emocirc_eval::{
    artifacts, classify_records, evaluate, load_split, logs, run_generation, run_self_eval,
};
use emocirc_gateway::{Gateway, LogLine, LogWriter, ResponseCache};
use serde_json::json;

use crate::error::CliError;
use crate::run_dir::{RunDir, StageRecord};

pub const GENERATIONS: &str = "generations.jsonl";
pub const GENERATIONS_PARTIAL: &str = "generations.partial.jsonl";
pub const CLASSIFICATIONS: &str = "classifications.jsonl";
pub const SCORES: &str = "scores.csv";
pub const ANGLE_SERIES: &str = "angle_series.csv";
pub const SAMPLES: &str = "samples.csv";
pub const BASELINE: &str = "baseline.csv";
pub const WORD_COUNT: &str = "word_count.json";
pub const CLASSIFIER_EVAL: &str = "classifier_eval.json";

/// What a stage did, for the console.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Done(String),
    AlreadyComplete,
}

fn write(run: &RunDir, stage: &'static str, name: &str, bytes: &[u8]) -> Result<(), CliError> {
    logs::write_atomic(&run.file(name), bytes).map_err(|e| CliError::failure(stage, e.to_string()))
}

fn require(run: &RunDir, stage: &'static str, before: &str) -> Result<(), CliError> {
    if run.manifest.is_complete(before) {
        Ok(())
    } else {
        Err(CliError::failure(stage, format!("stage `{before}` has not completed for this run")))
    }
}

pub fn gen(run: &mut RunDir) -> Result<Outcome, CliError> {
    const STAGE: &str = "gen";
    if run.manifest.is_complete(STAGE) {
        return Ok(Outcome::AlreadyComplete);
    }
    let cfg = run.config.clone();
    let plan = cfg.plan(run.manifest.mode, &run.manifest.models)?;
    let mut builder = Gateway::builder()
        .cache(ResponseCache::new(cfg.output_dir().join("cache")))
        .offline(run.manifest.offline);
    for p in cfg.providers(&run.manifest.models)? {
        builder = builder
            .configured(&p)
            .map_err(|e| CliError::config(STAGE, e.to_string()))?;
    }
    let partial = run.file(GENERATIONS_PARTIAL);
    let journal = LogWriter::append_to(&partial, &run.manifest.run_id)
        .map_err(|e| CliError::failure(STAGE, format!("{}: {e}", partial.display())))?;
    let gateway = builder.log(journal).build();

    let result = run_generation(
        &plan,
        &gateway,
        cfg.config.experiment.workers,
        &run.file(GENERATIONS),
        &run.manifest.run_id,
    );
    match result {
        Ok(summary) => {
            let _ = std::fs::remove_file(&partial);
            let mut details = BTreeMap::new();
            details.insert("plan_hash".into(), json!(summary.plan_hash));
            details.insert("expected".into(), json!(summary.expected));
            details.insert("cache_hits".into(), json!(summary.cache_hits));
            details.insert("provider_calls".into(), json!(gateway.provider_calls()));
            details.insert("recovered_cells".into(), json!(summary.recovered));
            run.record(
                STAGE,
                StageRecord {
                    complete: true,
                    count: summary.generated,
                    details,
                },
            )?;
            Ok(Outcome::Done(format!(
                "{} generations ({} from cache)",
                summary.generated, summary.cache_hits
            )))
        }
        Err(e) => {
            let mut details = BTreeMap::new();
            details.insert("plan_hash".into(), json!(plan.hash()));
            details.insert("error".into(), json!(e.to_string()));
            run.record(
                STAGE,
                StageRecord {
                    complete: false,
                    count: 0,
                    details,
                },
            )?;
            Err(CliError::from_eval(STAGE, e))
        }
    }
}

fn read_generations(run: &RunDir, stage: &'static str) -> Result<Vec<LogLine>, CliError> {
    logs::read_jsonl(&run.file(GENERATIONS)).map_err(|e| CliError::failure(stage, e.to_string()))
}

pub fn classify(run: &mut RunDir) -> Result<Outcome, CliError> {
    const STAGE: &str = "classify";
    if run.manifest.is_complete(STAGE) {
        return Ok(Outcome::AlreadyComplete);
    }
    require(run, STAGE, "gen")?;
    let lines = read_generations(run, STAGE)?;
    let classifier = run.config.classifier(STAGE, run.manifest.offline)?;
    let out = classify_records(&lines, classifier.as_ref(), &run.manifest.run_id)
        .map_err(|e| CliError::from_eval(STAGE, e))?;
    logs::write_jsonl(&run.file(CLASSIFICATIONS), &out).map_err(|e| CliError::failure(STAGE, e.to_string()))?;
    let mut details = BTreeMap::new();
    details.insert("service_model_version".into(), json!(classifier.model_version()));
    run.record(
        STAGE,
        StageRecord {
            complete: true,
            count: out.len(),
            details,
        },
    )?;
    Ok(Outcome::Done(format!("{} texts classified", out.len())))
}

pub fn score(run: &mut RunDir) -> Result<Outcome, CliError> {
    const STAGE: &str = "score";
    if run.manifest.is_complete(STAGE) {
        return Ok(Outcome::AlreadyComplete);
    }
    require(run, STAGE, "classify")?;
    let lines = read_generations(run, STAGE)?;
    let cls: Vec<ClassificationLine> = logs::read_jsonl(&run.file(CLASSIFICATIONS))
        .map_err(|e| CliError::failure(STAGE, e.to_string()))?;
    let cfg = &run.config;
    let vectors = cfg.label_vectors()?;
    let detector = cfg.violation_detector()?;
    let policy = cfg.config.experiment.neutral_policy;
    let eval = evaluate(&lines, &cls, &vectors, policy, &detector).map_err(|e| CliError::from_eval(STAGE, e))?;
    let baseline = baseline_report(&cfg.label_map()?, &cfg.term_table()?)
        .map_err(|e| CliError::failure(STAGE, e.to_string()))?;

    let mut word_json = serde_json::to_vec_pretty(&eval.word_counts).expect("report serializes");
    word_json.push(b'\n');
    write(run, STAGE, SCORES, artifacts::scores_csv(&eval.table).as_bytes())?;
    write(run, STAGE, ANGLE_SERIES, artifacts::angle_series_csv(&eval.series).as_bytes())?;
    write(
        run,
        STAGE,
        SAMPLES,
        artifacts::samples_csv(&eval.samples, &eval.table.similarities, &detector).as_bytes(),
    )?;
    write(run, STAGE, BASELINE, artifacts::baseline_csv(&baseline).as_bytes())?;
    write(run, STAGE, WORD_COUNT, &word_json)?;

    let mut details = BTreeMap::new();
    details.insert("neutral_policy".into(), json!(policy));
    let warnings: Vec<_> = eval.table.warnings.iter().chain(&eval.series.warnings).collect();
    details.insert("warnings".into(), json!(warnings));
    run.record(
        STAGE,
        StageRecord {
            complete: true,
            count: eval.samples.len(),
            details,
        },
    )?;
    Ok(Outcome::Done(format!(
        "{} samples scored, {} warning(s)",
        eval.samples.len(),
        warnings.len()
    )))
}

pub fn classifier_eval(run: &mut RunDir) -> Result<Outcome, CliError> {
    const STAGE: &str = "classifier-eval";
    if run.manifest.is_complete(STAGE) {
        return Ok(Outcome::AlreadyComplete);
    }
    let cfg = run.config.clone();
    let split = cfg
        .config
        .classifier
        .test_split
        .as_ref()
        .ok_or_else(|| CliError::config(STAGE, "classifier.test_split is not set"))?;
    let rows = load_split(&cfg.resolve(split)).map_err(|e| CliError::config(STAGE, e.to_string()))?;
    let classifier = cfg.classifier(STAGE, run.manifest.offline)?;
    let policy = cfg.config.classifier.selfeval_neutral_policy;
    let report = run_self_eval(&rows, classifier.as_ref(), &cfg.label_vectors()?, policy)
        .map_err(|e| CliError::from_eval(STAGE, e))?;
    let mut bytes = serde_json::to_vec_pretty(&report).expect("report serializes");
    bytes.push(b'\n');
    write(run, STAGE, CLASSIFIER_EVAL, &bytes)?;
    let mut details = BTreeMap::new();
    details.insert("service_model_version".into(), json!(classifier.model_version()));
    run.record(
        STAGE,
        StageRecord {
            complete: true,
            count: report.n_total,
            details,
        },
    )?;
    Ok(Outcome::Done(format!(
        "{} rows, mean similarity {:.3}",
        report.n_total, report.mean_similarity
    )))
}
