//! Circumplex geometry for emotion-conditioned generation experiments.
//!
//! Emotional states live on the unit circle of the valence-arousal plane.
//! GoEmotions labels are placed on that circle through Russell's emotion
//! terms, and agreement between a specified and an evaluated state is the
//! cosine of the angle between them.

mod baseline;
mod circular;
mod error;
mod geometry;
mod labels;
mod tables;

pub use baseline::{
    baseline_report, baseline_similarity, baseline_with, BaselineCandidate, BaselineReport,
    BaselineSemantics, BASELINE_TOLERANCE, PUBLISHED_BASELINE,
};
pub use circular::{circular_mean_std, unwrap_angle, AngularSpread};
pub use error::CoreError;
pub use geometry::{angle_to_vector, cosine_similarity, state_grid, vector_to_angle, AffectVector, AngleDeg};
pub use labels::{is_goemotions_label, label_id, GOEMOTIONS_LABELS, NEUTRAL};
pub use tables::{label_vector, LabelMap, LabelVectors, RussellTermTable, WordStates};

/// Shipped data files, embedded so the defaults work without a checkout.
pub mod shipped {
    pub const RUSSELL_TERMS_CSV: &str = include_str!("../../../data/russell_terms.csv");
    pub const LABEL_MAP_CSV: &str = include_str!("../../../data/label_map.csv");
    pub const WORD_STATES_CSV: &str = include_str!("../../../data/word_states.csv");
}

/// Formats a value with three decimals, never printing `-0.000`.
pub fn fmt3(x: f64) -> String {
    fmt_fixed(x, 3)
}

/// Fixed-point formatting without a negative zero.
pub fn fmt_fixed(x: f64, decimals: usize) -> String {
    let s = format!("{x:.decimals$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.chars().all(|c| c == '0' || c == '.') => rest.to_string(),
        _ => s,
    }
}
