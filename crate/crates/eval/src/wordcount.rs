use serde::{Deserialize, Serialize};

use crate::error::EvalError;
use crate::records::Sample;

/// Pearson correlation coefficient.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64, EvalError> {
    if xs.len() != ys.len() {
        return Err(EvalError::UndefinedCorrelation("inputs differ in length"));
    }
    if xs.len() < 2 {
        return Err(EvalError::UndefinedCorrelation("fewer than two samples"));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(EvalError::UndefinedCorrelation("first variable has zero variance"));
    }
    if syy == 0.0 {
        return Err(EvalError::UndefinedCorrelation("second variable has zero variance"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordStats {
    pub model: String,
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation, 0 for a single answer.
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordCountReport {
    /// Correlation between word count and similarity over included samples;
    /// `None` when undefined, with the reason alongside.
    pub pearson_r: Option<f64>,
    pub undefined_reason: Option<String>,
    pub n: usize,
    pub per_model: Vec<WordStats>,
}

/// `similarities` is aligned with `samples`; excluded samples are `None`.
/// Word statistics cover every answer, correlation only scored ones.
pub fn word_count_analysis(samples: &[Sample], similarities: &[Option<f64>]) -> WordCountReport {
    let (xs, ys): (Vec<f64>, Vec<f64>) = samples
        .iter()
        .zip(similarities)
        .filter_map(|(s, sim)| sim.map(|y| (s.word_count as f64, y)))
        .unzip();
    let (pearson_r, undefined_reason) = match pearson(&xs, &ys) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };

    let mut models: Vec<&str> = Vec::new();
    for s in samples {
        if !models.contains(&s.model.as_str()) {
            models.push(&s.model);
        }
    }
    let per_model = models
        .into_iter()
        .map(|m| {
            let counts: Vec<f64> = samples
                .iter()
                .filter(|s| s.model == m)
                .map(|s| s.word_count as f64)
                .collect();
            let n = counts.len();
            let mean = counts.iter().sum::<f64>() / n as f64;
            let std = if n > 1 {
                (counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
            } else {
                0.0
            };
            WordStats {
                model: m.to_string(),
                n,
                mean,
                std,
            }
        })
        .collect();
    WordCountReport {
        pearson_r,
        undefined_reason,
        n: xs.len(),
        per_model,
    }
}
