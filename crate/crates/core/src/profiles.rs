//! Binary user profiles over a track or tag vocabulary.
//!
//! A profile is stored as the sorted list of set dimensions of the dense
//! vector `u ∈ {0,1}^|V|`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::enrich::{tag_popularity, EnrichedRelation};
use crate::error::{Error, Result};
use crate::model::{Interner, PostTuple, Symbols, TagAssignment, UserId};
use crate::records::{ProfileRecord, VocabRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKind {
    Track,
    Tag,
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProfileKind::Track => "track",
            ProfileKind::Tag => "tag",
        })
    }
}

/// Ordered profile dimensions. Position `i` is dimension `i`.
///
/// For tag vocabularies `counts` holds raw assignment counts and is
/// non-increasing; for track vocabularies it holds the number of distinct
/// users mentioning the track.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    pub kind: ProfileKind,
    pub items: Vec<u32>,
    pub labels: Vec<String>,
    pub counts: Vec<u64>,
    index: HashMap<u32, usize>,
}

impl Vocabulary {
    pub fn new(kind: ProfileKind, items: Vec<u32>, labels: Vec<String>, counts: Vec<u64>) -> Self {
        assert_eq!(items.len(), labels.len());
        assert_eq!(items.len(), counts.len());
        let index = items.iter().enumerate().map(|(i, &h)| (h, i)).collect();
        Vocabulary {
            kind,
            items,
            labels,
            counts,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn position(&self, handle: u32) -> Option<usize> {
        self.index.get(&handle).copied()
    }

    pub fn to_records(&self) -> Vec<VocabRecord> {
        self.labels
            .iter()
            .zip(&self.counts)
            .map(|(l, &c)| VocabRecord {
                label: l.clone(),
                count: c,
            })
            .collect()
    }

    /// Rebuilds a vocabulary from exported records; handles become positions.
    pub fn from_records(kind: ProfileKind, records: &[VocabRecord]) -> Result<Self> {
        let mut seen = HashSet::new();
        for r in records {
            if !seen.insert(r.label.as_str()) {
                return Err(Error::Inconsistent(format!(
                    "{kind} vocabulary lists {:?} twice",
                    r.label
                )));
            }
        }
        Ok(Vocabulary::new(
            kind,
            (0..records.len() as u32).collect(),
            records.iter().map(|r| r.label.clone()).collect(),
            records.iter().map(|r| r.count).collect(),
        ))
    }
}

/// The `cap` most frequent tags by raw assignment count, ties broken by
/// ascending normalized label.
pub fn build_tag_vocabulary<'a, A>(
    out_assignments: A,
    tags: &Interner,
    cap: usize,
) -> Result<Vocabulary>
where
    A: IntoIterator<Item = &'a TagAssignment>,
{
    if cap == 0 {
        return Err(Error::InvalidConfig {
            field: "tag-cap",
            message: "must be at least 1".into(),
        });
    }
    let mut ranked: Vec<_> = tag_popularity(out_assignments).into_iter().collect();
    ranked.sort_by(|a, b| {
        b.1.cmp(&a.1)
            .then_with(|| tags.label(a.0 .0).cmp(tags.label(b.0 .0)))
    });
    ranked.truncate(cap);
    Ok(Vocabulary::new(
        ProfileKind::Tag,
        ranked.iter().map(|(t, _)| t.0).collect(),
        ranked
            .iter()
            .map(|(t, _)| tags.label(t.0).to_owned())
            .collect(),
        ranked.iter().map(|(_, c)| *c).collect(),
    ))
}

/// Resources mentioned in `posts`, in ascending handle order.
pub fn build_track_vocabulary<'a, P>(posts: P, resources: &Interner) -> Vocabulary
where
    P: IntoIterator<Item = &'a PostTuple>,
{
    let mut mentions: BTreeMap<u32, HashSet<UserId>> = BTreeMap::new();
    for p in posts {
        mentions.entry(p.resource.0).or_default().insert(p.user);
    }
    Vocabulary::new(
        ProfileKind::Track,
        mentions.keys().copied().collect(),
        mentions
            .keys()
            .map(|&h| resources.label(h).to_owned())
            .collect(),
        mentions.values().map(|s| s.len() as u64).collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UserProfile {
    pub user: UserId,
    pub kind: ProfileKind,
    /// Vocabulary size.
    pub dim: usize,
    /// Strictly increasing set dimensions, each `< dim`.
    pub indices: Vec<u32>,
}

impl UserProfile {
    /// Builds a profile from arbitrary dimension indices (sorted and
    /// deduplicated here).
    pub fn new(user: UserId, kind: ProfileKind, dim: usize, mut indices: Vec<u32>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        debug_assert!(indices.last().is_none_or(|&i| (i as usize) < dim));
        UserProfile {
            user,
            kind,
            dim,
            indices,
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn to_dense(&self) -> Vec<bool> {
        let mut v = vec![false; self.dim];
        for &i in &self.indices {
            v[i as usize] = true;
        }
        v
    }

    pub fn from_dense(user: UserId, kind: ProfileKind, dense: &[bool]) -> Self {
        let indices = dense
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i as u32))
            .collect();
        UserProfile {
            user,
            kind,
            dim: dense.len(),
            indices,
        }
    }
}

/// One profile per in-domain user, in ascending handle order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileMatrix {
    pub vocabulary: Vocabulary,
    pub users: Vec<UserId>,
    pub user_labels: Vec<String>,
    pub profiles: Vec<UserProfile>,
}

impl ProfileMatrix {
    fn assemble(
        vocabulary: Vocabulary,
        users: &[UserId],
        user_labels: Vec<String>,
        mut dims: HashMap<UserId, Vec<u32>>,
    ) -> Self {
        let mut order = users.to_vec();
        order.sort_unstable();
        order.dedup();
        let dim = vocabulary.len();
        let kind = vocabulary.kind;
        let profiles = order
            .iter()
            .map(|&u| UserProfile::new(u, kind, dim, dims.remove(&u).unwrap_or_default()))
            .collect();
        ProfileMatrix {
            vocabulary,
            users: order,
            user_labels,
            profiles,
        }
    }

    pub fn kind(&self) -> ProfileKind {
        self.vocabulary.kind
    }

    pub fn len(&self) -> usize {
        self.users.len()
    }

    pub fn is_empty(&self) -> bool {
        self.users.is_empty()
    }

    pub fn empty_profiles(&self) -> usize {
        self.profiles.iter().filter(|p| p.is_empty()).count()
    }

    pub fn to_records(&self) -> Vec<ProfileRecord> {
        self.profiles
            .iter()
            .zip(&self.user_labels)
            .map(|(p, label)| ProfileRecord {
                user: label.clone(),
                kind: p.kind,
                items: p
                    .indices
                    .iter()
                    .map(|&i| self.vocabulary.labels[i as usize].clone())
                    .collect(),
            })
            .collect()
    }

    /// Rebuilds a matrix from exported records. Users receive handles in
    /// record order.
    pub fn from_records(vocabulary: Vocabulary, records: &[ProfileRecord]) -> Result<Self> {
        let by_label: HashMap<&str, u32> = vocabulary
            .labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i as u32))
            .collect();
        let kind = vocabulary.kind;
        let mut seen = HashSet::new();
        let mut profiles = Vec::with_capacity(records.len());
        for (i, r) in records.iter().enumerate() {
            if r.kind != kind {
                return Err(Error::VocabularyMismatch {
                    left: kind.to_string(),
                    right: r.kind.to_string(),
                });
            }
            if !seen.insert(r.user.as_str()) {
                return Err(Error::Inconsistent(format!(
                    "user {:?} listed twice",
                    r.user
                )));
            }
            let indices = r
                .items
                .iter()
                .map(|item| {
                    by_label.get(item.as_str()).copied().ok_or_else(|| {
                        Error::Inconsistent(format!("{kind} {item:?} is not in the vocabulary"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            profiles.push(UserProfile::new(
                UserId::from(i),
                kind,
                vocabulary.len(),
                indices,
            ));
        }
        Ok(ProfileMatrix {
            users: (0..records.len()).map(UserId::from).collect(),
            user_labels: records.iter().map(|r| r.user.clone()).collect(),
            vocabulary,
            profiles,
        })
    }
}

fn labels_of(users: &[UserId], symbols: &Symbols) -> Vec<String> {
    let mut order = users.to_vec();
    order.sort_unstable();
    order.dedup();
    order.iter().map(|&u| symbols.user(u).to_owned()).collect()
}

/// Track profiles: user `u` has dimension `i` set iff it mentions track
/// `r_i`. Every user in `users` gets a row, possibly empty.
pub fn build_track_profiles<'a, P>(posts: P, users: &[UserId], symbols: &Symbols) -> ProfileMatrix
where
    P: IntoIterator<Item = &'a PostTuple> + Clone,
{
    let vocabulary = build_track_vocabulary(posts.clone(), &symbols.resources);
    let mut dims: HashMap<UserId, Vec<u32>> = HashMap::new();
    for p in posts {
        let pos = vocabulary
            .position(p.resource.0)
            .expect("vocabulary covers every post");
        dims.entry(p.user).or_default().push(pos as u32);
    }
    ProfileMatrix::assemble(vocabulary, users, labels_of(users, symbols), dims)
}

/// Tag profiles: user `u` has dimension `i` set iff tag `t_i` reached it
/// through enrichment and is part of `vocabulary`.
pub fn build_tag_profiles(
    enriched: &EnrichedRelation,
    vocabulary: Vocabulary,
    users: &[UserId],
    symbols: &Symbols,
) -> Result<ProfileMatrix> {
    if vocabulary.kind != ProfileKind::Tag {
        return Err(Error::VocabularyMismatch {
            left: ProfileKind::Tag.to_string(),
            right: vocabulary.kind.to_string(),
        });
    }
    let mut dims: HashMap<UserId, Vec<u32>> = HashMap::new();
    for a in &enriched.assignments {
        if let Some(pos) = vocabulary.position(a.tag.0) {
            dims.entry(a.user).or_default().push(pos as u32);
        }
    }
    Ok(ProfileMatrix::assemble(
        vocabulary,
        users,
        labels_of(users, symbols),
        dims,
    ))
}
