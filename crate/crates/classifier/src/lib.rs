//! Uniform access to the GoEmotions evaluation model: an HTTP client for the
//! inference service and a deterministic keyword stub for offline runs.

mod error;
mod http;
mod result;
mod stub;

pub use error::ClassifierError;
pub use http::{HttpClassifier, HttpClassifierOptions, ServiceInfo};
pub use result::{ClassificationLine, ClassifierResult, TextItem};
pub use stub::{stub_classify, StubClassifier, STUB_RULES, STUB_VERSION};

/// Anything that turns texts into GoEmotions predictions.
pub trait Classifier: Send + Sync {
    /// Results come back in input order, one per item.
    fn classify(&self, items: &[TextItem]) -> Result<Vec<ClassifierResult>, ClassifierError>;

    /// Identifies the model behind the predictions.
    fn model_version(&self) -> String;
}
