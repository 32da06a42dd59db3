//! Cross-site enrichment: tags applied on the out-of-domain site are
//! projected onto in-domain users who mention the same resource.
//!
//! The result is `{(u_b, t_l, r_b) | (u_b, r_b) ∈ B, (u_l, t_l, r_l) ∈ L,
//! r_b = r_l}` under set semantics, computed as a hash join on the resource.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::Serialize;

use crate::model::{PostTuple, ResourceId, TagAssignment, TagId};

/// Provenance counters of one enrichment run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EnrichStats {
    /// Distinct resources present on both sites.
    pub joined_resources: usize,
    /// Distinct in-domain resources no out-of-domain user tagged.
    pub unmatched_in_domain_resources: usize,
    /// Distinct tagged resources no in-domain user mentions.
    pub unmatched_out_domain_resources: usize,
    /// Out-of-domain tag assignments fed to the join.
    pub out_domain_assignments: usize,
    /// Distinct tags among them.
    pub out_domain_distinct_tags: usize,
    /// Join matches before collapsing to set semantics.
    pub raw_matches: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EnrichedRelation {
    pub assignments: BTreeSet<TagAssignment>,
    pub stats: EnrichStats,
}

impl EnrichedRelation {
    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }
}

/// Projects out-of-domain tags onto in-domain users through shared
/// resources. The output does not depend on input order.
pub fn enrich<'p, 'a, P, A>(posts: P, out_assignments: A) -> EnrichedRelation
where
    P: IntoIterator<Item = &'p PostTuple>,
    A: IntoIterator<Item = &'a TagAssignment>,
{
    let mut stats = EnrichStats::default();

    // Build side: distinct tags per out-of-domain resource. Several
    // listeners applying one tag to one resource collapse here.
    let mut tags_by_resource: HashMap<ResourceId, BTreeSet<TagId>> = HashMap::new();
    let mut multiplicity: HashMap<(ResourceId, TagId), usize> = HashMap::new();
    let mut distinct_tags = HashSet::new();
    for a in out_assignments {
        stats.out_domain_assignments += 1;
        distinct_tags.insert(a.tag);
        tags_by_resource
            .entry(a.resource)
            .or_default()
            .insert(a.tag);
        *multiplicity.entry((a.resource, a.tag)).or_default() += 1;
    }
    stats.out_domain_distinct_tags = distinct_tags.len();

    let mut assignments = BTreeSet::new();
    let mut in_resources = HashSet::new();
    for p in posts {
        in_resources.insert(p.resource);
        if let Some(tags) = tags_by_resource.get(&p.resource) {
            for &t in tags {
                stats.raw_matches += multiplicity[&(p.resource, t)];
                assignments.insert(TagAssignment::new(p.user, t, p.resource));
            }
        }
    }

    stats.joined_resources = in_resources
        .iter()
        .filter(|r| tags_by_resource.contains_key(r))
        .count();
    stats.unmatched_in_domain_resources = in_resources.len() - stats.joined_resources;
    stats.unmatched_out_domain_resources = tags_by_resource.len() - stats.joined_resources;

    EnrichedRelation { assignments, stats }
}

/// Number of raw out-of-domain assignments carrying each tag.
pub fn tag_popularity<'a, A>(out_assignments: A) -> BTreeMap<TagId, u64>
where
    A: IntoIterator<Item = &'a TagAssignment>,
{
    let mut counts = BTreeMap::new();
    for a in out_assignments {
        *counts.entry(a.tag).or_insert(0) += 1;
    }
    counts
}
