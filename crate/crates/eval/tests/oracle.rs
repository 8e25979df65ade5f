use std::collections::BTreeMap;

use emocirc_classifier::{ClassificationLine, Classifier, ClassifierError, ClassifierResult, TextItem};
use emocirc_core::{
    angle_to_vector, baseline_similarity, shipped, state_grid, AngleDeg, LabelMap, LabelVectors,
    RussellTermTable, GOEMOTIONS_LABELS,
};
use emocirc_eval::{
    classify_records, evaluate, logs, score, NeutralPolicy, Sample, ViolationDetector,
};
use emocirc_gateway::LogLine;
use proptest::prelude::*;

fn line(provider: &str, q: u32, state_deg: f64, text: &str) -> LogLine {
    let v = angle_to_vector(AngleDeg(state_deg)).unwrap();
    LogLine {
        run_id: "r".into(),
        provider_id: provider.into(),
        model: "m".into(),
        question_id: q,
        spec_valence: v.valence(),
        spec_arousal: v.arousal(),
        emotion_word: None,
        system_text: String::new(),
        user_text: String::new(),
        response_text: text.into(),
        word_count: text.split_whitespace().count(),
        cache_hit: false,
        timestamp: String::new(),
    }
}

/// Label directions straight from the shipped CSV files.
fn oracle_vectors() -> BTreeMap<String, (f64, f64)> {
    let angles: BTreeMap<String, f64> = shipped::RUSSELL_TERMS_CSV
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| {
            let (t, a) = l.split_once(',').unwrap();
            (t.trim().to_string(), a.trim().parse().unwrap())
        })
        .collect();
    shipped::LABEL_MAP_CSV
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .filter_map(|l| {
            let (label, terms) = l.split_once(',').unwrap();
            let terms: Vec<_> = terms.split(';').filter(|t| !t.trim().is_empty()).collect();
            if terms.is_empty() {
                return None;
            }
            let (mut x, mut y) = (0.0, 0.0);
            for t in terms {
                let a: f64 = angles[t.trim()].to_radians();
                x += a.cos();
                y += a.sin();
            }
            let n = (x * x + y * y).sqrt();
            Some((label.to_string(), (x / n, y / n)))
        })
        .collect()
}

/// Recomputes cell means and totals from raw JSON lines with plain loops.
fn brute_force(
    jsonl: &str,
    labels: &[String],
) -> BTreeMap<(String, Option<u32>), Option<f64>> {
    let vecs = oracle_vectors();
    let raw: Vec<serde_json::Value> = jsonl.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let mut out = BTreeMap::new();
    let mut keys: Vec<(String, Option<u32>)> = Vec::new();
    for r in &raw {
        let m = r["provider_id"].as_str().unwrap().to_string();
        let q = r["question_id"].as_u64().unwrap() as u32;
        for k in [(m.clone(), Some(q)), (m, None)] {
            if !keys.contains(&k) {
                keys.push(k);
            }
        }
    }
    for (m, q) in keys {
        let (mut sum, mut n) = (0.0, 0usize);
        for (i, r) in raw.iter().enumerate() {
            if r["provider_id"] != m.as_str() {
                continue;
            }
            if let Some(q) = q {
                if r["question_id"].as_u64().unwrap() as u32 != q {
                    continue;
                }
            }
            let Some(&(lx, ly)) = vecs.get(&labels[i]) else { continue };
            let (sx, sy) = (r["spec_valence"].as_f64().unwrap(), r["spec_arousal"].as_f64().unwrap());
            sum += (sx * lx + sy * ly) / (sx * sx + sy * sy).sqrt();
            n += 1;
        }
        out.insert((m, q), if n == 0 { None } else { Some(sum / n as f64) });
    }
    out
}

fn one_hot(i: usize, label: &str) -> ClassificationLine {
    let r = ClassifierResult::one_hot(logs::text_id(i), label).unwrap();
    ClassificationLine::new("r", &r, "test")
}

fn small_run() -> impl Strategy<Value = (Vec<LogLine>, Vec<String>)> {
    (1usize..=4, 1u32..=2, 1usize..=2).prop_flat_map(|(n_states, n_q, n_models)| {
        let n = n_states * n_q as usize * n_models;
        prop::collection::vec(0usize..28, n).prop_map(move |picks| {
            let grid = 360.0 / n_states as f64;
            let mut lines = Vec::new();
            for m in 0..n_models {
                for s in 0..n_states {
                    for q in 1..=n_q {
                        lines.push(line(&format!("m{m}"), q, s as f64 * grid, "answer"));
                    }
                }
            }
            let labels = picks.iter().map(|&p| GOEMOTIONS_LABELS[p].to_string()).collect();
            (lines, labels)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn table_matches_brute_force((lines, labels) in small_run()) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("generations.jsonl");
        logs::write_jsonl(&path, &lines).unwrap();
        let cls: Vec<_> = labels.iter().enumerate().map(|(i, l)| one_hot(i, l)).collect();
        let read: Vec<LogLine> = logs::read_jsonl(&path).unwrap();
        let eval = evaluate(&read, &cls, &LabelVectors::shipped(), NeutralPolicy::Exclude, &ViolationDetector::default()).unwrap();
        let oracle = brute_force(&std::fs::read_to_string(&path).unwrap(), &labels);
        for row in &eval.table.rows {
            for (q, cell) in eval.table.questions.iter().zip(&row.cells) {
                let want = oracle.get(&(row.model.clone(), Some(*q))).copied().flatten();
                match (cell, want) {
                    (None, None) => {}
                    (Some(a), Some(b)) => prop_assert!((a - b).abs() <= 1e-12, "{a} vs {b}"),
                    other => prop_assert!(false, "definedness differs: {other:?}"),
                }
            }
            let want = oracle[&(row.model.clone(), None)];
            match (row.total, want) {
                (None, None) => {}
                (Some(a), Some(b)) => prop_assert!((a - b).abs() <= 1e-12),
                other => prop_assert!(false, "total definedness differs: {other:?}"),
            }
        }
    }

    #[test]
    fn classification_order_does_not_matter(
        (lines, labels) in small_run(),
        seed in any::<u64>(),
    ) {
        let cls: Vec<_> = labels.iter().enumerate().map(|(i, l)| one_hot(i, l)).collect();
        let mut shuffled = cls.clone();
        // Fisher-Yates with a small LCG so the permutation follows the seed
        let mut s = seed;
        for i in (1..shuffled.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (s >> 33) as usize % (i + 1));
        }
        let v = LabelVectors::shipped();
        let d = ViolationDetector::default();
        let a = evaluate(&lines, &cls, &v, NeutralPolicy::Exclude, &d).unwrap();
        let b = evaluate(&lines, &shuffled, &v, NeutralPolicy::Exclude, &d).unwrap();
        prop_assert_eq!(a.table, b.table);
        prop_assert_eq!(a.series, b.series);
    }

    #[test]
    fn exclusions_are_accounted((lines, labels) in small_run()) {
        let cls: Vec<_> = labels.iter().enumerate().map(|(i, l)| one_hot(i, l)).collect();
        let eval = evaluate(&lines, &cls, &LabelVectors::shipped(), NeutralPolicy::Exclude, &ViolationDetector::default()).unwrap();
        for row in &eval.table.rows {
            let total = lines.iter().filter(|l| l.provider_id == row.model).count();
            prop_assert_eq!(row.included + row.excluded, total);
            for c in row.cells.iter().flatten() {
                prop_assert!((-1.0..=1.0).contains(c));
            }
        }
        for s in eval.table.similarities.iter().flatten() {
            prop_assert!((-1.0..=1.0).contains(s));
        }
    }
}

/// Answers with whichever label lies closest in angle to the text's target,
/// encoded in the text as degrees.
struct Nearest(LabelVectors);

impl Classifier for Nearest {
    fn classify(&self, items: &[TextItem]) -> Result<Vec<ClassifierResult>, ClassifierError> {
        items
            .iter()
            .map(|it| {
                let deg: f64 = it.text.parse().unwrap();
                let t = angle_to_vector(AngleDeg(deg)).unwrap();
                let best = self
                    .0
                    .iter()
                    .max_by(|a, b| t.dot(a.1).total_cmp(&t.dot(b.1)))
                    .unwrap()
                    .0;
                ClassifierResult::one_hot(it.id.clone(), best)
            })
            .collect()
    }

    fn model_version(&self) -> String {
        "nearest".into()
    }
}

/// Cosine of half the widest gap between adjacent label directions: no
/// target can be farther than that from its nearest label.
fn nearest_label_floor(v: &LabelVectors) -> f64 {
    let mut angles: Vec<f64> = v
        .iter()
        .map(|(_, x)| emocirc_core::vector_to_angle(x).unwrap().degrees())
        .collect();
    angles.sort_by(f64::total_cmp);
    let mut widest = angles[0] + 360.0 - angles[angles.len() - 1];
    for w in angles.windows(2) {
        widest = widest.max(w[1] - w[0]);
    }
    (widest / 2.0).to_radians().cos()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nearest_label_classifier_beats_baseline(n_states in 1usize..=24, n_q in 1u32..=3, rot in 0.0f64..360.0) {
        let vectors = LabelVectors::shipped();
        let floor = nearest_label_floor(&vectors);
        let baseline = baseline_similarity(&LabelMap::shipped(), &RussellTermTable::shipped()).unwrap();
        prop_assert!(floor > baseline);
        let mut lines = Vec::new();
        for (k, _) in state_grid(n_states).unwrap().iter().enumerate() {
            let deg = (rot + k as f64 * 360.0 / n_states as f64) % 360.0;
            for q in 1..=n_q {
                lines.push(line("m", q, deg, &format!("{deg}")));
            }
        }
        let cls = classify_records(&lines, &Nearest(vectors.clone()), "r").unwrap();
        let eval = evaluate(&lines, &cls, &vectors, NeutralPolicy::Exclude, &ViolationDetector::default()).unwrap();
        for c in eval.table.rows[0].cells.iter() {
            let c = c.unwrap();
            prop_assert!(c >= floor - 1e-12, "{c} < {floor}");
            prop_assert!(c > baseline);
        }
    }
}

#[test]
fn empty_run_is_an_error() {
    assert!(evaluate(&[], &[], &LabelVectors::shipped(), NeutralPolicy::Exclude, &ViolationDetector::default()).is_err());
}

#[test]
fn missing_classification_is_reported() {
    let lines = [line("m", 1, 0.0, "a"), line("m", 1, 90.0, "b")];
    let cls = [one_hot(0, "joy")];
    let err = evaluate(&lines, &cls, &LabelVectors::shipped(), NeutralPolicy::Exclude, &ViolationDetector::default())
        .unwrap_err();
    assert!(err.to_string().contains("g00001"), "{err}");
}

#[test]
fn score_accepts_samples_directly() {
    let s = Sample {
        text_id: "x".into(),
        model: "m".into(),
        question_id: 3,
        spec: angle_to_vector(AngleDeg(7.8)).unwrap(),
        emotion_word: None,
        response_text: "I'm just a language model, after all.".into(),
        word_count: 7,
        top_label: "joy".into(),
    };
    let t = score(&[s], &LabelVectors::shipped(), NeutralPolicy::Exclude, &ViolationDetector::default()).unwrap();
    assert!((t.cell("m", 3).unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(t.rows[0].violations, 1);
}
