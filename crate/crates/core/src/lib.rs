//! Cross-site folksonomy enrichment and blogroll analysis.
//!
//! The pipeline takes an in-domain community (bloggers and the tracks they
//! write about, plus their explicit blogrolls) and an out-of-domain tagging
//! site (listeners tagging tracks). Tags are projected onto bloggers through
//! shared tracks, binary track and tag profiles are built, and each
//! blogger's k most similar peers form an optimal blogroll that can be
//! compared against the explicit one.

pub mod bundle;
pub mod enrich;
pub mod error;
pub mod evaluate;
pub mod graphstats;
pub mod ingest;
pub mod model;
pub mod pipeline;
pub mod profiles;
pub mod records;
pub mod similarity;
pub mod synth;

pub use enrich::{enrich, EnrichedRelation};
pub use error::{Error, Result};
pub use evaluate::{
    avg_blogroll_similarity, blogroll_agreement, quality_report, similarity_histograms,
    BlogrollQualityReport, Histogram, IntersectionDistribution,
};
pub use graphstats::{
    clustering_coefficient, distance_profile, reciprocal_pairs, weak_components, ComponentReport,
    GraphSummary,
};
pub use ingest::{normalize, NormalizationPolicy, ResourceDictionary, SkipReport};
pub use model::{
    BlogrollGraph, Dataset, Interner, Namespace, PostTuple, ResourceId, Symbols, TagAssignment,
    TagId, UserId, Violation,
};
pub use profiles::{ProfileKind, ProfileMatrix, UserProfile, Vocabulary};
pub use similarity::{cosine, optimal_blogrolls, similarity_matrix, NeighborSet, SimilarityMatrix};
pub use synth::SynthConfig;

/// Default number of optimal blogroll members.
pub const DEFAULT_K: usize = 10;
/// Default size of the tag vocabulary.
pub const DEFAULT_TAG_CAP: usize = 20_000;
/// Default similarity histogram bin width.
pub const DEFAULT_BIN_WIDTH: f64 = 0.1;
