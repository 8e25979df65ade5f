use emocirc_core::{circular_mean_std, vector_to_angle, AffectVector, AngleDeg, LabelVectors, NEUTRAL};

use crate::error::EvalError;
use crate::records::Sample;

/// Spread of evaluated angles around one specified state.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPoint {
    pub model: String,
    pub spec_angle: f64,
    pub mean_angle: f64,
    pub std: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AngleSeries {
    pub points: Vec<SeriesPoint>,
    pub warnings: Vec<String>,
}

/// Groups samples by model and specified state, unwraps each evaluated label
/// angle against the specified angle and summarizes the group. Neutral
/// answers never contribute.
pub fn angle_series(samples: &[Sample], vectors: &LabelVectors) -> Result<AngleSeries, EvalError> {
    let mut groups: Vec<(String, AffectVector, Vec<AngleDeg>)> = Vec::new();
    for s in samples {
        let idx = match groups
            .iter()
            .position(|(m, spec, _)| *m == s.model && *spec == s.spec)
        {
            Some(i) => i,
            None => {
                groups.push((s.model.clone(), s.spec, Vec::new()));
                groups.len() - 1
            }
        };
        if s.top_label != NEUTRAL {
            groups[idx].2.push(vector_to_angle(&vectors.vector(&s.top_label)?)?);
        }
    }

    let mut series = AngleSeries::default();
    for (model, spec, raws) in groups {
        let reference = vector_to_angle(&spec)?;
        if raws.is_empty() {
            series.warnings.push(format!(
                "{model} at {:.3} deg: every answer classified neutral, point omitted",
                reference.degrees()
            ));
            continue;
        }
        let spread = circular_mean_std(reference, &raws)?;
        series.points.push(SeriesPoint {
            model,
            spec_angle: reference.degrees(),
            mean_angle: spread.mean.degrees(),
            std: spread.std,
            n: spread.n,
        });
    }
    Ok(series)
}
