//! Provider-agnostic chat-completion access for emotion-conditioned
//! generation: prompt rendering, a content-addressed response cache,
//! retries with exponential backoff, and an offline mock provider.

mod cache;
mod error;
mod gateway;
mod prompt;
pub mod provider;
mod request;
mod retry;

pub use cache::{cache_key, CachedResponse, ResponseCache};
pub use error::{GatewayError, ProviderError};
pub use gateway::{Gateway, GatewayBuilder, LogWriter};
pub use prompt::{render_prompt, EmotionSpec, PromptBundle, PromptTemplate};
pub use provider::{build_provider, ChatProvider, Completion, ProviderConfig, ProviderKind};
pub use request::{word_count, GenerationRecord, GenerationRequest, LogLine, SamplingParams};
pub use retry::RetryPolicy;
