//! Run configuration in TOML.

use std::path::{Path, PathBuf};
use std::time::Duration;

use emocirc_classifier::{Classifier, HttpClassifier, HttpClassifierOptions, StubClassifier};
use emocirc_core::{LabelMap, LabelVectors, RussellTermTable, WordStates};
use emocirc_eval::{
    ExperimentPlan, ModelSpec, NeutralPolicy, PromptMode, ViolationDetector, DEFAULT_QUESTIONS,
    DEFAULT_VIOLATION_PATTERNS,
};
use emocirc_gateway::{PromptTemplate, ProviderConfig};
use serde::Deserialize;

use crate::error::CliError;

const STAGE: &str = "config";

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub output_dir: PathBuf,
    /// Reserved for providers that sample; the shipped mock is deterministic.
    #[serde(default)]
    pub random_seed: u64,
    #[serde(default)]
    pub experiment: ExperimentConfig,
    #[serde(default)]
    pub classifier: ClassifierConfig,
    #[serde(default)]
    pub tables: TablesConfig,
    #[serde(default)]
    pub providers: Vec<ProviderConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub mode: PromptMode,
    pub n_states: usize,
    pub questions_file: Option<PathBuf>,
    pub template_file: Option<PathBuf>,
    /// Word list for word mode; `word,valence,arousal` rows.
    pub word_file: Option<PathBuf>,
    pub repeats: u32,
    pub max_retries: u32,
    pub workers: usize,
    pub neutral_policy: NeutralPolicy,
    pub violation_patterns: Vec<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            mode: PromptMode::Numeric,
            n_states: 12,
            questions_file: None,
            template_file: None,
            word_file: None,
            repeats: 1,
            max_retries: 3,
            workers: 8,
            neutral_policy: NeutralPolicy::Exclude,
            violation_patterns: DEFAULT_VIOLATION_PATTERNS.iter().map(|p| p.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClassifierConfig {
    /// `stub` or the base URL of the inference service.
    pub endpoint: String,
    pub batch_size: usize,
    pub timeout_seconds: u64,
    pub max_retries: u32,
    /// GoEmotions test split (TSV) for `classifier-eval`.
    pub test_split: Option<PathBuf>,
    pub selfeval_neutral_policy: NeutralPolicy,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            endpoint: "stub".into(),
            batch_size: 64,
            timeout_seconds: 30,
            max_retries: 3,
            test_split: None,
            selfeval_neutral_policy: NeutralPolicy::Zero,
        }
    }
}

impl ClassifierConfig {
    pub fn is_stub(&self) -> bool {
        self.endpoint == "stub"
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TablesConfig {
    pub russell_terms: Option<PathBuf>,
    pub label_map: Option<PathBuf>,
}

/// A parsed config together with its exact source text and the directory
/// relative paths are resolved against.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub raw: String,
    pub base: PathBuf,
    pub config: RunConfig,
}

impl LoadedConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let raw = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(STAGE, format!("{}: {e}", path.display())))?;
        let base = path
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_default();
        let base = if base.as_os_str().is_empty() { PathBuf::from(".") } else { base };
        Self::parse(raw, base)
    }

    pub fn parse(raw: String, base: PathBuf) -> Result<Self, CliError> {
        let config: RunConfig =
            toml::from_str(&raw).map_err(|e| CliError::config(STAGE, e.to_string()))?;
        let loaded = Self { raw, base, config };
        loaded.validate()?;
        Ok(loaded)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }

    pub fn output_dir(&self) -> PathBuf {
        self.resolve(&self.config.output_dir)
    }

    fn validate(&self) -> Result<(), CliError> {
        let c = &self.config;
        if c.experiment.n_states == 0 {
            return Err(CliError::config(STAGE, "n_states must be at least 1"));
        }
        if c.experiment.repeats == 0 {
            return Err(CliError::config(STAGE, "repeats must be at least 1"));
        }
        let files = [
            ("questions_file", &c.experiment.questions_file),
            ("template_file", &c.experiment.template_file),
            ("word_file", &c.experiment.word_file),
            ("test_split", &c.classifier.test_split),
            ("russell_terms", &c.tables.russell_terms),
            ("label_map", &c.tables.label_map),
        ];
        for (key, file) in files {
            if let Some(f) = file {
                let p = self.resolve(f);
                if !p.is_file() {
                    return Err(CliError::config(STAGE, format!("{key}: {} not found", p.display())));
                }
            }
        }
        let mut ids: Vec<&str> = c.providers.iter().map(|p| p.id.as_str()).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(CliError::config(STAGE, format!("provider `{}` defined twice", w[0])));
        }
        Ok(())
    }

    pub fn questions(&self) -> Result<Vec<String>, CliError> {
        match &self.config.experiment.questions_file {
            None => Ok(DEFAULT_QUESTIONS.iter().map(|q| q.to_string()).collect()),
            Some(f) => {
                let p = self.resolve(f);
                let src = std::fs::read_to_string(&p)
                    .map_err(|e| CliError::config(STAGE, format!("{}: {e}", p.display())))?;
                let qs: Vec<String> = src
                    .lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty())
                    .map(String::from)
                    .collect();
                if qs.is_empty() {
                    return Err(CliError::config(STAGE, format!("{}: no questions", p.display())));
                }
                Ok(qs)
            }
        }
    }

    pub fn template(&self, mode: PromptMode) -> Result<PromptTemplate, CliError> {
        match &self.config.experiment.template_file {
            Some(f) => PromptTemplate::load(&self.resolve(f)).map_err(|e| CliError::config(STAGE, e.to_string())),
            None => Ok(match mode {
                PromptMode::Numeric => PromptTemplate::default_numeric(),
                PromptMode::Word => PromptTemplate::default_word(),
            }),
        }
    }

    pub fn word_states(&self) -> Result<WordStates, CliError> {
        match &self.config.experiment.word_file {
            Some(f) => WordStates::load(&self.resolve(f)).map_err(|e| CliError::config(STAGE, e.to_string())),
            None => Ok(WordStates::shipped()),
        }
    }

    pub fn label_map(&self) -> Result<LabelMap, CliError> {
        match &self.config.tables.label_map {
            Some(f) => LabelMap::load(&self.resolve(f)).map_err(|e| CliError::config(STAGE, e.to_string())),
            None => Ok(LabelMap::shipped()),
        }
    }

    pub fn term_table(&self) -> Result<RussellTermTable, CliError> {
        match &self.config.tables.russell_terms {
            Some(f) => RussellTermTable::load(&self.resolve(f)).map_err(|e| CliError::config(STAGE, e.to_string())),
            None => Ok(RussellTermTable::shipped()),
        }
    }

    pub fn label_vectors(&self) -> Result<LabelVectors, CliError> {
        LabelVectors::resolve(&self.label_map()?, &self.term_table()?)
            .map_err(|e| CliError::config(STAGE, e.to_string()))
    }

    pub fn violation_detector(&self) -> Result<ViolationDetector, CliError> {
        ViolationDetector::new(&self.config.experiment.violation_patterns)
            .map_err(|e| CliError::config(STAGE, e.to_string()))
    }

    /// Providers selected by `models` (all configured providers when empty).
    pub fn providers(&self, models: &[String]) -> Result<Vec<ProviderConfig>, CliError> {
        if models.is_empty() {
            if self.config.providers.is_empty() {
                return Err(CliError::config(STAGE, "no providers configured"));
            }
            return Ok(self.config.providers.clone());
        }
        models
            .iter()
            .map(|m| {
                self.config
                    .providers
                    .iter()
                    .find(|p| &p.id == m)
                    .cloned()
                    .ok_or_else(|| CliError::config(STAGE, format!("no provider with id `{m}`")))
            })
            .collect()
    }

    pub fn plan(&self, mode: PromptMode, models: &[String]) -> Result<ExperimentPlan, CliError> {
        let e = &self.config.experiment;
        let plan = ExperimentPlan {
            models: self
                .providers(models)?
                .into_iter()
                .map(|p| ModelSpec {
                    provider_id: p.id,
                    model: p.model,
                    params: p.params,
                })
                .collect(),
            questions: self.questions()?,
            mode,
            n_states: e.n_states,
            word_list: self.word_states()?,
            repeats: e.repeats,
            template: self.template(mode)?,
            max_retries: e.max_retries,
        };
        plan.validate().map_err(|e| CliError::config(STAGE, e.to_string()))?;
        Ok(plan)
    }

    pub fn classifier(&self, stage: &'static str, offline: bool) -> Result<Box<dyn Classifier>, CliError> {
        let c = &self.config.classifier;
        if c.is_stub() {
            return Ok(Box::new(StubClassifier));
        }
        if offline {
            return Err(CliError::config(
                stage,
                "offline runs use the stub classifier; set classifier.endpoint = \"stub\"",
            ));
        }
        let options = HttpClassifierOptions {
            batch_size: c.batch_size,
            timeout: Duration::from_secs(c.timeout_seconds),
            max_retries: c.max_retries,
            ..HttpClassifierOptions::default()
        };
        HttpClassifier::connect(&c.endpoint, options)
            .map(|h| Box::new(h) as Box<dyn Classifier>)
            .map_err(|e| CliError::from_classifier(stage, e))
    }
}
