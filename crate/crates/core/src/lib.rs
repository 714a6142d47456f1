//! Job recommendation toolkit.
//!
//! Four strategies share one attribute model:
//!
//! * [`scoring`]: content-based deterministic scoring of six attributes,
//! * [`llm_reco`]: guided and unguided language-model recommendation, with
//!   chunk-and-merge for catalogs that exceed the context window,
//! * [`hybrid`]: deterministic shortlist followed by an unguided rerank and
//!   organization/role ratings.
//!
//! [`extract`] turns free-text CVs and job descriptions into structured
//! records, [`synth`] generates controlled synthetic data and [`eval`]
//! compares results against manual reference scores.

pub mod backend;
pub mod domain;
pub mod error;
pub mod eval;
pub mod extract;
pub mod hybrid;
pub mod llm_reco;
pub mod parallel;
pub mod scoring;
pub mod synth;

pub use error::{Error, Result};
