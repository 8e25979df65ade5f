//! Russell term positions, the GoEmotions correspondence, and the word list
//! used for word-specified prompting. All three load from small CSV files
//! with `#` comment lines.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::CoreError;
use crate::geometry::{angle_to_vector, AffectVector, AngleDeg};
use crate::labels::{GOEMOTIONS_LABELS, NEUTRAL};

const DEGENERATE_NORM: f64 = 1e-9;

fn reader(src: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(src.as_bytes())
}

fn check_header(rdr: &mut csv::Reader<&[u8]>, want: &[&str]) -> Result<(), CoreError> {
    let got = rdr.headers().map_err(parse_err)?;
    if got.iter().ne(want.iter().copied()) {
        return Err(CoreError::Parse {
            record: 0,
            msg: format!("expected header `{}`", want.join(",")),
        });
    }
    Ok(())
}

fn parse_err(e: csv::Error) -> CoreError {
    let record = e.position().map(|p| p.record() as usize).unwrap_or(0);
    CoreError::Parse {
        record,
        msg: e.to_string(),
    }
}

fn parse_f64(s: &str, record: usize) -> Result<f64, CoreError> {
    s.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| CoreError::Parse {
            record,
            msg: format!("`{s}` is not a finite number"),
        })
}

fn read_file(path: &Path) -> Result<String, CoreError> {
    std::fs::read_to_string(path).map_err(|e| CoreError::Parse {
        record: 0,
        msg: format!("{}: {e}", path.display()),
    })
}

/// Angular positions of Russell's emotion terms.
#[derive(Debug, Clone, PartialEq)]
pub struct RussellTermTable {
    entries: Vec<(String, AngleDeg)>,
}

impl RussellTermTable {
    pub fn new(entries: Vec<(String, AngleDeg)>) -> Result<Self, CoreError> {
        let mut seen = std::collections::BTreeSet::new();
        for (term, angle) in &entries {
            if !seen.insert(term.as_str()) {
                return Err(CoreError::Duplicate(term.clone()));
            }
            if !angle.0.is_finite() {
                return Err(CoreError::NonFinite(angle.0));
            }
        }
        Ok(Self { entries })
    }

    /// Parses `term,angle_deg` rows.
    pub fn from_csv_str(src: &str) -> Result<Self, CoreError> {
        let mut rdr = reader(src);
        check_header(&mut rdr, &["term", "angle_deg"])?;
        let mut entries = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(parse_err)?;
            let record = rec.position().map(|p| p.record() as usize).unwrap_or(0);
            entries.push((rec[0].to_string(), AngleDeg(parse_f64(&rec[1], record)?)));
        }
        Self::new(entries)
    }

    pub fn load(path: &Path) -> Result<Self, CoreError> {
        Self::from_csv_str(&read_file(path)?)
    }

    pub fn shipped() -> Self {
        Self::from_csv_str(crate::shipped::RUSSELL_TERMS_CSV).expect("shipped Russell table parses")
    }

    pub fn angle(&self, term: &str) -> Option<AngleDeg> {
        self.entries
            .iter()
            .find(|(t, _)| t == term)
            .map(|(_, a)| *a)
    }

    pub fn vector(&self, term: &str) -> Option<AffectVector> {
        self.angle(term).and_then(|a| angle_to_vector(a).ok())
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(t, _)| t.as_str())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// GoEmotions label to Russell term(s).
#[derive(Debug, Clone, PartialEq)]
pub struct LabelMap {
    entries: BTreeMap<String, Vec<String>>,
}

impl LabelMap {
    /// Builds a map without requiring the full GoEmotions label set.
    /// Neutral must map to nothing; every other label to one or two terms.
    pub fn new<I, L, T>(entries: I) -> Result<Self, CoreError>
    where
        I: IntoIterator<Item = (L, Vec<T>)>,
        L: Into<String>,
        T: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (label, terms) in entries {
            let label = label.into();
            let terms: Vec<String> = terms.into_iter().map(Into::into).collect();
            if label == NEUTRAL {
                if !terms.is_empty() {
                    return Err(CoreError::LabelSet("\"neutral\" must map to no term".into()));
                }
            } else if terms.is_empty() || terms.len() > 2 {
                return Err(CoreError::LabelSet(format!(
                    "\"{label}\" must map to one or two terms, got {}",
                    terms.len()
                )));
            }
            if map.insert(label.clone(), terms).is_some() {
                return Err(CoreError::Duplicate(label));
            }
        }
        Ok(Self { entries: map })
    }

    /// Checks that the keys are exactly the 28 GoEmotions labels.
    pub fn ensure_goemotions(&self) -> Result<(), CoreError> {
        let want: std::collections::BTreeSet<&str> = GOEMOTIONS_LABELS.iter().copied().collect();
        let got: std::collections::BTreeSet<&str> = self.entries.keys().map(String::as_str).collect();
        if want != got {
            let missing: Vec<_> = want.difference(&got).copied().collect();
            let extra: Vec<_> = got.difference(&want).copied().collect();
            return Err(CoreError::LabelSet(format!(
                "missing {missing:?}, unexpected {extra:?}"
            )));
        }
        Ok(())
    }

    /// Parses `goemotions_label,russell_terms` rows (terms `;`-separated)
    /// and requires the full label set.
    pub fn from_csv_str(src: &str) -> Result<Self, CoreError> {
        let mut rdr = reader(src);
        check_header(&mut rdr, &["goemotions_label", "russell_terms"])?;
        let mut entries = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(parse_err)?;
            let terms: Vec<String> = rec[1]
                .split(';')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(String::from)
                .collect();
            entries.push((rec[0].to_string(), terms));
        }
        let map = Self::new(entries)?;
        map.ensure_goemotions()?;
        Ok(map)
    }

    pub fn load(path: &Path) -> Result<Self, CoreError> {
        Self::from_csv_str(&read_file(path)?)
    }

    pub fn shipped() -> Self {
        Self::from_csv_str(crate::shipped::LABEL_MAP_CSV).expect("shipped label map parses")
    }

    pub fn terms(&self, label: &str) -> Option<&[String]> {
        self.entries.get(label).map(Vec::as_slice)
    }

    /// Labels in lexicographic order, neutral included.
    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Every term referenced by the map must exist in `table`.
    pub fn ensure_resolvable(&self, table: &RussellTermTable) -> Result<(), CoreError> {
        for (label, terms) in &self.entries {
            for term in terms {
                if table.angle(term).is_none() {
                    return Err(CoreError::MissingTerm {
                        label: label.clone(),
                        term: term.clone(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Unit vector of a GoEmotions label: the term's direction, or the
/// normalized mean of the term directions when there are several.
pub fn label_vector(
    label: &str,
    map: &LabelMap,
    table: &RussellTermTable,
) -> Result<AffectVector, CoreError> {
    if label == NEUTRAL {
        return Err(CoreError::NeutralLabel);
    }
    let terms = map
        .terms(label)
        .ok_or_else(|| CoreError::UnknownLabel(label.to_string()))?;
    let (mut v, mut a) = (0.0, 0.0);
    for term in terms {
        let tv = table.vector(term).ok_or_else(|| CoreError::MissingTerm {
            label: label.to_string(),
            term: term.clone(),
        })?;
        v += tv.valence();
        a += tv.arousal();
    }
    let n = terms.len() as f64;
    let mean = AffectVector::new(v / n, a / n)?;
    if mean.norm() < DEGENERATE_NORM {
        return Err(CoreError::DegenerateMapping(label.to_string()));
    }
    mean.normalized()
}

/// All non-neutral label vectors, resolved once.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelVectors {
    vectors: BTreeMap<String, AffectVector>,
}

impl LabelVectors {
    pub fn resolve(map: &LabelMap, table: &RussellTermTable) -> Result<Self, CoreError> {
        let vectors = map
            .labels()
            .filter(|l| *l != NEUTRAL)
            .map(|l| label_vector(l, map, table).map(|v| (l.to_string(), v)))
            .collect::<Result<_, _>>()?;
        Ok(Self { vectors })
    }

    pub fn shipped() -> Self {
        Self::resolve(&LabelMap::shipped(), &RussellTermTable::shipped())
            .expect("shipped tables resolve")
    }

    pub fn get(&self, label: &str) -> Option<&AffectVector> {
        self.vectors.get(label)
    }

    /// Vector for a predicted label; neutral and unknown labels are errors.
    pub fn vector(&self, label: &str) -> Result<AffectVector, CoreError> {
        if label == NEUTRAL {
            return Err(CoreError::NeutralLabel);
        }
        self.vectors
            .get(label)
            .copied()
            .ok_or_else(|| CoreError::UnknownLabel(label.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &AffectVector)> {
        self.vectors.iter().map(|(l, v)| (l.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Emotion words with their published valence-arousal positions.
#[derive(Debug, Clone, PartialEq)]
pub struct WordStates {
    entries: Vec<(String, AffectVector)>,
}

impl WordStates {
    pub const UNIT_TOLERANCE: f64 = 1e-3;

    pub fn new(entries: Vec<(String, AffectVector)>) -> Result<Self, CoreError> {
        let mut seen = std::collections::BTreeSet::new();
        for (word, v) in &entries {
            if !seen.insert(word.as_str()) {
                return Err(CoreError::Duplicate(word.clone()));
            }
            if !v.is_unit(Self::UNIT_TOLERANCE) {
                return Err(CoreError::LabelSet(format!(
                    "word \"{word}\" has norm {:.4}, expected 1 within {}",
                    v.norm(),
                    Self::UNIT_TOLERANCE
                )));
            }
        }
        Ok(Self { entries })
    }

    /// Parses `word,valence,arousal` rows.
    pub fn from_csv_str(src: &str) -> Result<Self, CoreError> {
        let mut rdr = reader(src);
        check_header(&mut rdr, &["word", "valence", "arousal"])?;
        let mut entries = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(parse_err)?;
            let record = rec.position().map(|p| p.record() as usize).unwrap_or(0);
            let v = AffectVector::new(parse_f64(&rec[1], record)?, parse_f64(&rec[2], record)?)?;
            entries.push((rec[0].to_string(), v));
        }
        Self::new(entries)
    }

    pub fn load(path: &Path) -> Result<Self, CoreError> {
        Self::from_csv_str(&read_file(path)?)
    }

    pub fn shipped() -> Self {
        Self::from_csv_str(crate::shipped::WORD_STATES_CSV).expect("shipped word list parses")
    }

    pub fn entries(&self) -> &[(String, AffectVector)] {
        &self.entries
    }
}
