mod support;

use std::time::Duration;

use emocirc_classifier::{
    stub_classify, Classifier, ClassifierError, HttpClassifier, HttpClassifierOptions,
    StubClassifier, TextItem,
};
use emocirc_core::GOEMOTIONS_LABELS;
use serde_json::json;

fn options(batch_size: usize) -> HttpClassifierOptions {
    HttpClassifierOptions {
        batch_size,
        timeout: Duration::from_secs(5),
        max_retries: 2,
        retry_delay: Duration::from_millis(1),
    }
}

fn health() -> (u16, String) {
    (200, json!({"status": "ok", "model": "goemo-bert"}).to_string())
}

fn labels() -> (u16, String) {
    (200, json!({ "labels": GOEMOTIONS_LABELS }).to_string())
}

fn result_for(label: &str) -> serde_json::Value {
    let rest = 0.2 / 27.0;
    let scores: serde_json::Map<_, _> = GOEMOTIONS_LABELS
        .iter()
        .map(|l| (l.to_string(), json!(if *l == label { 0.8 } else { rest })))
        .collect();
    json!({"label": label, "scores": scores})
}

fn classify_reply(labels: &[&str]) -> (u16, String) {
    let results: Vec<_> = labels.iter().map(|l| result_for(l)).collect();
    (200, json!({ "results": results }).to_string())
}

fn items(texts: &[&str]) -> Vec<TextItem> {
    texts
        .iter()
        .enumerate()
        .map(|(i, t)| TextItem::new(format!("t{i}"), *t))
        .collect()
}

#[test]
fn batches_preserve_order() {
    let server = support::serve(vec![
        health(),
        labels(),
        classify_reply(&["joy", "anger"]),
        classify_reply(&["grief"]),
    ]);
    let client = HttpClassifier::connect(&server.url, options(2)).unwrap();
    assert_eq!(client.info().model_id, "goemo-bert");
    assert_eq!(client.model_version(), "goemo-bert");
    let out = client.classify(&items(&["a", "b", "c"])).unwrap();
    let got: Vec<_> = out.iter().map(|r| (r.text_id.as_str(), r.top_label.as_str())).collect();
    assert_eq!(got, [("t0", "joy"), ("t1", "anger"), ("t2", "grief")]);
    assert!(out.iter().all(|r| r.scores.len() == 28));

    let captured = server.captured.lock().unwrap();
    assert_eq!(captured.len(), 4);
    assert_eq!(captured[0].request_line, "GET /v1/health HTTP/1.1");
    assert_eq!(captured[1].request_line, "GET /v1/labels HTTP/1.1");
    assert_eq!(captured[2].request_line, "POST /v1/classify HTTP/1.1");
    let body: serde_json::Value = serde_json::from_str(&captured[2].body).unwrap();
    assert_eq!(body, json!({"texts": ["a", "b"]}));
}

#[test]
fn empty_input_sends_nothing() {
    let server = support::serve(vec![health(), labels()]);
    let client = HttpClassifier::connect(&server.url, options(64)).unwrap();
    assert!(client.classify(&[]).unwrap().is_empty());
    assert_eq!(server.captured.lock().unwrap().len(), 2);
}

#[test]
fn bare_label_array_is_accepted() {
    let server = support::serve(vec![health(), (200, json!(GOEMOTIONS_LABELS).to_string())]);
    assert!(HttpClassifier::connect(&server.url, options(8)).is_ok());
}

#[test]
fn label_set_mismatch_is_fatal() {
    let mut wrong: Vec<&str> = GOEMOTIONS_LABELS.to_vec();
    wrong[3] = "irritation";
    let server = support::serve(vec![health(), (200, json!({ "labels": wrong }).to_string())]);
    assert!(matches!(
        HttpClassifier::connect(&server.url, options(8)),
        Err(ClassifierError::LabelMismatch(_))
    ));
}

#[test]
fn warming_service_is_retried() {
    let server = support::serve(vec![
        (503, r#"{"status":"loading"}"#.into()),
        health(),
        labels(),
    ]);
    assert!(HttpClassifier::connect(&server.url, options(8)).is_ok());
}

#[test]
fn unreachable_service_is_a_transport_error() {
    assert!(matches!(
        HttpClassifier::connect("http://127.0.0.1:9", options(8)),
        Err(ClassifierError::Transport(_))
    ));
}

#[test]
fn short_result_list_is_a_protocol_error() {
    let server = support::serve(vec![health(), labels(), classify_reply(&["joy"])]);
    let client = HttpClassifier::connect(&server.url, options(8)).unwrap();
    assert!(matches!(
        client.classify(&items(&["a", "b"])),
        Err(ClassifierError::Protocol(_))
    ));
}

#[test]
fn stub_is_a_classifier_and_repeatable() {
    let c: &dyn Classifier = &StubClassifier;
    let input = items(&["I am furious about this", "completely thrilled", "the sky is blue"]);
    let a = c.classify(&input).unwrap();
    let b = c.classify(&input).unwrap();
    assert_eq!(a, b);
    let labels: Vec<_> = a.iter().map(|r| r.top_label.as_str()).collect();
    assert_eq!(labels, ["anger", "excitement", "neutral"]);
    assert_eq!(a[1].text_id, "t1");
    assert_eq!(stub_classify("completely thrilled").top_label, "excitement");
}

/// Runs against a live classifier service when `EMOCIRC_CLASSIFIER_URL` is set.
#[test]
#[ignore = "needs the classifier service"]
fn live_service_recognizes_high_arousal_joy() {
    let url = std::env::var("EMOCIRC_CLASSIFIER_URL").expect("EMOCIRC_CLASSIFIER_URL");
    let client = HttpClassifier::connect(&url, HttpClassifierOptions::default()).unwrap();
    let input = items(&["I am so thrilled about this!"]);
    let first = client.classify(&input).unwrap();
    let again = client.classify(&input).unwrap();
    for (l, r) in first[0].scores.iter().zip(again[0].scores.values()) {
        assert!((l.1 - r).abs() < 1e-6);
    }
    assert!(
        ["excitement", "joy", "amusement", "admiration", "surprise", "desire", "pride"]
            .contains(&first[0].top_label.as_str()),
        "{}",
        first[0].top_label
    );
}
