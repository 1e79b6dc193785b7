//! File formats, HTML ingest and the end-to-end analysis pipeline for
//! norm-page citation networks. The numerical kernel is `normnet-core`.

pub mod analysis;
pub mod config;
pub mod corpus_io;
pub mod error;
pub mod html;
pub mod html_ingest;
pub mod model_io;
pub mod num;
pub mod pipeline;
pub mod tsv;

pub use error::{NormnetError, Result};
