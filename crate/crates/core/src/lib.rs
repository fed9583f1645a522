//! Bounded tree edit distance for labeled ordered forests.

pub mod align;
pub mod engine;
pub mod error;
pub mod fingerprint;
pub mod gen;
pub mod horizontal;
pub mod labeling;
pub mod forest;
pub mod lca;
pub mod naive;
pub mod oracle;
pub mod ors;
pub mod partial;
pub mod reduction;
pub mod vertical;
pub mod runs;
pub mod shallow;

pub use error::{Error, Result};
pub use forest::{parse_json, parse_paren_text, to_json, to_paren_text, Forest, Interner, Label, NodeId};
pub use oracle::{ted_constrained, ted_exact, ted_threshold, TedValue};
pub use labeling::Labeling;
pub use partial::Matching;
pub use engine::{ted_bounded, EngineConfig, Report, Route};
