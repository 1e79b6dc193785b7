//! Analysis kernel for timestamped norm-page citation networks.
//!
//! Everything here is pure computation over in-memory corpora and only needs
//! `alloc`: snapshot construction, eigenvector centrality and inequality,
//! reversed-walk influence and overlap, topic models and Jensen-Shannon
//! distances, Louvain communities, and the regression/agreement statistics
//! that tie them to attention measures. File formats, the HTML link
//! extractor and the command-line pipeline live in the `normnet` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod canonical;
pub mod centrality;
pub mod community;
pub mod corpus;
mod error;
pub mod graph;
pub mod influence;
mod math;
pub mod semantics;
pub mod stats;
pub mod synthetic;
pub mod time;

pub use error::{Error, Result};

pub use corpus::{
    build_snapshot, density, giant_component, in_degree_growth_rates, Category, Corpus,
    GrowthRate, LinkEvent, NormClass, Page, PageId, PopulationSeries, Snapshot,
};
pub use time::{Month, Timestamp};
