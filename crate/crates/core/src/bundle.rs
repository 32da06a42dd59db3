//! Single-document export consumed by the graph explorer: nodes with their
//! tracks and tags, the three edge layers, the tag vocabulary and the
//! evaluation metrics.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profiles::ProfileMatrix;
use crate::records::{round6, EdgeRecord, NeighborRecord, VocabRecord};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleTrack {
    pub label: String,
    /// Number of distinct bloggers mentioning the track.
    pub popularity: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleNode {
    pub id: String,
    /// Descending popularity, ties by label.
    pub tracks: Vec<BundleTrack>,
    pub tags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredEdge {
    pub source: String,
    pub target: String,
    #[serde(serialize_with = "round6")]
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bundle {
    pub format_version: u32,
    pub k: usize,
    pub nodes: Vec<BundleNode>,
    pub explicit_edges: Vec<EdgeRecord>,
    pub optimal_track_edges: Vec<ScoredEdge>,
    pub optimal_tag_edges: Vec<ScoredEdge>,
    pub tag_vocabulary: Vec<VocabRecord>,
    pub metrics: serde_json::Value,
}

pub struct BundleInputs<'a> {
    pub k: usize,
    pub track_profiles: &'a ProfileMatrix,
    pub tag_profiles: &'a ProfileMatrix,
    pub explicit_edges: &'a [EdgeRecord],
    pub track_neighbors: &'a [NeighborRecord],
    pub tag_neighbors: &'a [NeighborRecord],
    pub metrics: serde_json::Value,
}

fn scored_edges(
    layer: &str,
    records: &[NeighborRecord],
    users: &BTreeSet<&str>,
    k: usize,
) -> Result<Vec<ScoredEdge>> {
    let owners: BTreeSet<&str> = records.iter().map(|r| r.user.as_str()).collect();
    if owners != *users || owners.len() != records.len() {
        return Err(Error::Inconsistent(format!(
            "{layer} neighbor sets cover {} users, profiles cover {}",
            owners.len(),
            users.len()
        )));
    }
    let mut out = Vec::new();
    for r in records {
        if r.members.len() > k {
            return Err(Error::Inconsistent(format!(
                "{layer} neighbor set of {:?} has {} members but k = {k}",
                r.user,
                r.members.len()
            )));
        }
        for m in &r.members {
            if !users.contains(m.label.as_str()) || !(m.score > 0.0 && m.score <= 1.0) {
                return Err(Error::Inconsistent(format!(
                    "{layer} edge {:?} -> {:?} ({})",
                    r.user, m.label, m.score
                )));
            }
            out.push(ScoredEdge {
                source: r.user.clone(),
                target: m.label.clone(),
                score: m.score,
            });
        }
    }
    Ok(out)
}

pub fn build_bundle(inputs: BundleInputs<'_>) -> Result<Bundle> {
    let track = inputs.track_profiles;
    let tag = inputs.tag_profiles;
    if track.user_labels != tag.user_labels {
        return Err(Error::Inconsistent(
            "track and tag profiles list different users".into(),
        ));
    }
    let users: BTreeSet<&str> = track.user_labels.iter().map(String::as_str).collect();

    let nodes = track
        .profiles
        .iter()
        .zip(&tag.profiles)
        .zip(&track.user_labels)
        .map(|((tp, gp), label)| {
            let mut tracks: Vec<BundleTrack> = tp
                .indices
                .iter()
                .map(|&i| BundleTrack {
                    label: track.vocabulary.labels[i as usize].clone(),
                    popularity: track.vocabulary.counts[i as usize],
                })
                .collect();
            tracks.sort_by(|a, b| {
                b.popularity
                    .cmp(&a.popularity)
                    .then_with(|| a.label.cmp(&b.label))
            });
            BundleNode {
                id: label.clone(),
                tracks,
                tags: gp
                    .indices
                    .iter()
                    .map(|&i| tag.vocabulary.labels[i as usize].clone())
                    .collect(),
            }
        })
        .collect();

    let mut seen = HashSet::new();
    for e in inputs.explicit_edges {
        if !users.contains(e.source.as_str()) || !users.contains(e.target.as_str()) {
            return Err(Error::Inconsistent(format!(
                "blogroll edge {:?} -> {:?} references a user without a profile",
                e.source, e.target
            )));
        }
        if !seen.insert((&e.source, &e.target)) {
            return Err(Error::Inconsistent(format!(
                "duplicate blogroll edge {:?} -> {:?}",
                e.source, e.target
            )));
        }
    }

    Ok(Bundle {
        format_version: FORMAT_VERSION,
        k: inputs.k,
        nodes,
        explicit_edges: inputs.explicit_edges.to_vec(),
        optimal_track_edges: scored_edges("track", inputs.track_neighbors, &users, inputs.k)?,
        optimal_tag_edges: scored_edges("tag", inputs.tag_neighbors, &users, inputs.k)?,
        tag_vocabulary: tag.vocabulary.to_records(),
        metrics: inputs.metrics,
    })
}
