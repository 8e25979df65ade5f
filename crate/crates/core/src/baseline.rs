//! Chance-level agreement between label vectors.
//!
//! The published heuristic baseline is 0.061. How the averaging was done is
//! not stated, so several readings are available and can be compared side by
//! side with [`baseline_report`].

use std::fmt;

use crate::error::CoreError;
use crate::geometry::{cosine_similarity, state_grid, AffectVector};
use crate::tables::{LabelMap, LabelVectors, RussellTermTable};

pub const PUBLISHED_BASELINE: f64 = 0.061;
pub const BASELINE_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BaselineSemantics {
    /// Mean over unordered pairs of distinct labels.
    #[default]
    UnorderedPairs,
    /// Mean over all ordered pairs, self-pairs included (equals the squared
    /// norm of the mean label vector).
    OrderedWithSelf,
    /// Mean similarity of every label against an `n`-state generation grid.
    AgainstStates(usize),
}

impl fmt::Display for BaselineSemantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UnorderedPairs => write!(f, "unordered-pairs"),
            Self::OrderedWithSelf => write!(f, "ordered-with-self"),
            Self::AgainstStates(n) => write!(f, "against-{n}-states"),
        }
    }
}

impl std::str::FromStr for BaselineSemantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unordered-pairs" => Ok(Self::UnorderedPairs),
            "ordered-with-self" => Ok(Self::OrderedWithSelf),
            other => other
                .strip_prefix("against-")
                .and_then(|r| r.strip_suffix("-states"))
                .and_then(|n| n.parse().ok())
                .map(Self::AgainstStates)
                .ok_or_else(|| format!("unknown baseline semantics `{other}`")),
        }
    }
}

/// Mean pairwise cosine similarity over distinct non-neutral labels.
pub fn baseline_similarity(map: &LabelMap, table: &RussellTermTable) -> Result<f64, CoreError> {
    let vectors = LabelVectors::resolve(map, table)?;
    baseline_with(&vectors, BaselineSemantics::UnorderedPairs)
}

pub fn baseline_with(vectors: &LabelVectors, semantics: BaselineSemantics) -> Result<f64, CoreError> {
    let vs: Vec<AffectVector> = vectors.iter().map(|(_, v)| *v).collect();
    let mut sum = 0.0;
    let mut count = 0usize;
    match semantics {
        BaselineSemantics::UnorderedPairs => {
            for (i, a) in vs.iter().enumerate() {
                for b in &vs[i + 1..] {
                    sum += cosine_similarity(a, b)?;
                    count += 1;
                }
            }
        }
        BaselineSemantics::OrderedWithSelf => {
            for a in &vs {
                for b in &vs {
                    sum += cosine_similarity(a, b)?;
                    count += 1;
                }
            }
        }
        BaselineSemantics::AgainstStates(n) => {
            let grid = state_grid(n)?;
            for a in &vs {
                for s in &grid {
                    sum += cosine_similarity(a, s)?;
                    count += 1;
                }
            }
        }
    }
    if count == 0 {
        return Err(CoreError::Empty("baseline needs at least two labels"));
    }
    Ok(sum / count as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineCandidate {
    pub semantics: BaselineSemantics,
    pub value: f64,
    pub matches_published: bool,
}

/// Every candidate reading of the baseline, compared with the published value.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineReport {
    pub published: f64,
    pub tolerance: f64,
    pub default_value: f64,
    pub candidates: Vec<BaselineCandidate>,
}

impl BaselineReport {
    pub fn default_matches(&self) -> bool {
        (self.default_value - self.published).abs() <= self.tolerance
    }

    pub fn matching(&self) -> impl Iterator<Item = &BaselineCandidate> {
        self.candidates.iter().filter(|c| c.matches_published)
    }
}

impl fmt::Display for BaselineReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "baseline (default {}): {}",
            BaselineSemantics::default(),
            crate::fmt_fixed(self.default_value, 4)
        )?;
        writeln!(
            f,
            "published value {:.3} +/- {:.3}: {}",
            self.published,
            self.tolerance,
            if self.default_matches() { "matched" } else { "NOT matched by default semantics" }
        )?;
        for c in &self.candidates {
            writeln!(
                f,
                "  {:<20} {:>8}  {}",
                c.semantics.to_string(),
                crate::fmt_fixed(c.value, 4),
                if c.matches_published { "within tolerance" } else { "-" }
            )?;
        }
        Ok(())
    }
}

pub fn baseline_report(map: &LabelMap, table: &RussellTermTable) -> Result<BaselineReport, CoreError> {
    let vectors = LabelVectors::resolve(map, table)?;
    let semantics = [
        BaselineSemantics::UnorderedPairs,
        BaselineSemantics::OrderedWithSelf,
        BaselineSemantics::AgainstStates(12),
    ];
    let candidates = semantics
        .into_iter()
        .map(|s| {
            baseline_with(&vectors, s).map(|value| BaselineCandidate {
                semantics: s,
                value,
                matches_published: (value - PUBLISHED_BASELINE).abs() <= BASELINE_TOLERANCE,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BaselineReport {
        published: PUBLISHED_BASELINE,
        tolerance: BASELINE_TOLERANCE,
        default_value: candidates[0].value,
        candidates,
    })
}
