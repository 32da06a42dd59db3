//! Glue running the stages in order on an in-memory dataset.

use crate::enrich::{enrich, EnrichedRelation};
use crate::error::Result;
use crate::evaluate::{
    bin_count, blogroll_agreement, quality_report, EvaluationReport, HistogramPair,
};
use crate::model::{BlogrollGraph, Dataset};
use crate::profiles::{
    build_tag_profiles, build_tag_vocabulary, build_track_profiles, ProfileMatrix,
};
use crate::similarity::{
    optimal_blogrolls, similarity_matrix_with_workers, NeighborSet, SimilarityMatrix,
};

#[derive(Debug, Clone)]
pub struct Profiles {
    pub enriched: EnrichedRelation,
    pub track: ProfileMatrix,
    pub tag: ProfileMatrix,
}

/// Enriches the dataset and builds both profile matrices over every
/// in-domain user.
pub fn build_profiles(ds: &Dataset, tag_cap: usize) -> Result<Profiles> {
    let users = ds.in_domain_order();
    let enriched = enrich(&ds.posts, &ds.assignments);
    let vocabulary = build_tag_vocabulary(&ds.assignments, &ds.symbols.tags, tag_cap)?;
    let track = build_track_profiles(&ds.posts, &users, &ds.symbols);
    let tag = build_tag_profiles(&enriched, vocabulary, &users, &ds.symbols)?;
    Ok(Profiles {
        enriched,
        track,
        tag,
    })
}

/// Similarity matrix and optimal blogrolls of one profile kind.
#[derive(Debug, Clone, PartialEq)]
pub struct Neighborhood {
    pub matrix: SimilarityMatrix,
    pub blogrolls: Vec<NeighborSet>,
}

pub fn neighborhood(m: &ProfileMatrix, k: usize, workers: usize) -> Result<Neighborhood> {
    let matrix = similarity_matrix_with_workers(m, workers)?;
    let blogrolls = optimal_blogrolls(&matrix, k)?;
    Ok(Neighborhood { matrix, blogrolls })
}

pub fn evaluation_report(
    blogroll: &BlogrollGraph,
    track: &Neighborhood,
    tag: &Neighborhood,
    k: usize,
    bin_width: f64,
) -> Result<EvaluationReport> {
    bin_count(bin_width)?;
    let track_q = quality_report(blogroll, &track.blogrolls, &track.matrix)?;
    let tag_q = quality_report(blogroll, &tag.blogrolls, &tag.matrix)?;
    Ok(EvaluationReport {
        k,
        bin_width,
        track_histograms: HistogramPair::for_report(&track_q, bin_width)?,
        tag_histograms: HistogramPair::for_report(&tag_q, bin_width)?,
        optimal_agreement: blogroll_agreement(&track.blogrolls, &tag.blogrolls)?,
        track: track_q,
        tag: tag_q,
    })
}
