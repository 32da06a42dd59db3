//! Synthetic two-site datasets with planted genre communities.
//!
//! Each community is a genre with its own tracks and tags. Bloggers mostly
//! write about tracks of their own genre, listeners tag tracks of their
//! genre with that genre's tags, and explicit blogrolls mix in-community
//! links with random ones.
//!
//! Randomness comes from PCG-XSL-RR 128/64 (`rand_pcg::Pcg64`) seeded with
//! `seed_from_u64`. A uniform `f64` is `(next_u64() >> 11) · 2⁻⁵³` and a
//! Bernoulli(p) draw is `uniform < p`. Draws happen in this order:
//!
//! 1. posts: for each blogger (community-major), for each track
//!    (community-major), one draw with the in- or cross-community
//!    probability; a blogger left with no track then draws one track of its
//!    own community uniformly (`next_u64() % tracks`);
//! 2. assignments: listener `l` belongs to genre `l mod communities`; for
//!    each of its genre's tracks, for each of its genre's tags, one draw;
//! 3. blogroll: for each ordered pair of distinct bloggers, one draw with
//!    `1 - (1 - p_in)(1 - p_random)` inside a community and `p_random`
//!    across.

use std::fs;
use std::path::Path;

use rand_core::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::records::{write_jsonl, AssignmentRecord, EdgeRecord, PostRecord};

/// Seed of the reference fixture.
pub const FIXTURE_SEED: u64 = 20_090_601;

pub const POSTS_FILE: &str = "posts.jsonl";
pub const ASSIGNMENTS_FILE: &str = "assignments.jsonl";
pub const BLOGROLL_FILE: &str = "blogroll.jsonl";
pub const DICTIONARY_FILE: &str = "dictionary.txt";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub seed: u64,
    pub communities: usize,
    pub bloggers_per_community: usize,
    pub tracks_per_community: usize,
    /// Probability that a blogger mentions a given track of its own genre.
    pub mention_in: f64,
    /// Probability that a blogger mentions a given track of another genre.
    pub mention_across: f64,
    pub listeners: usize,
    pub tags_per_genre: usize,
    /// Probability that a listener applies a given genre tag to a given
    /// track of its genre.
    pub genre_tag_prob: f64,
    pub blogroll_in: f64,
    pub blogroll_random: f64,
}

impl SynthConfig {
    /// The reference fixture: 4 communities of 25 bloggers.
    pub fn fixture() -> Self {
        SynthConfig {
            seed: FIXTURE_SEED,
            communities: 4,
            bloggers_per_community: 25,
            tracks_per_community: 40,
            mention_in: 0.15,
            mention_across: 0.01,
            listeners: 60,
            tags_per_genre: 6,
            genre_tag_prob: 0.3,
            blogroll_in: 0.1,
            blogroll_random: 0.02,
        }
    }

    pub fn bloggers(&self) -> usize {
        self.communities * self.bloggers_per_community
    }

    pub fn validate(&self) -> Result<()> {
        let probs = [
            ("mention_in", self.mention_in),
            ("mention_across", self.mention_across),
            ("genre_tag_prob", self.genre_tag_prob),
            ("blogroll_in", self.blogroll_in),
            ("blogroll_random", self.blogroll_random),
        ];
        for (field, p) in probs {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidConfig {
                    field,
                    message: format!("probability {p} outside [0, 1]"),
                });
            }
        }
        Ok(())
    }
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self::fixture()
    }
}

struct Draws(Pcg64);

impl Draws {
    fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn bernoulli(&mut self, p: f64) -> bool {
        self.unit() < p
    }

    fn below(&mut self, n: usize) -> usize {
        (self.0.next_u64() % n as u64) as usize
    }
}

/// Generated records for both sites.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthData {
    pub config: SynthConfig,
    pub posts: Vec<PostRecord>,
    pub assignments: Vec<AssignmentRecord>,
    pub blogroll: Vec<EdgeRecord>,
    pub dictionary: Vec<String>,
}

pub fn blogger_label(i: usize) -> String {
    format!("blogger-{i:04}")
}

pub fn track_label(community: usize, t: usize) -> String {
    format!("track-{community}-{t:03}")
}

pub fn tag_label(community: usize, j: usize) -> String {
    format!("genre{community}-tag{j}")
}

pub fn listener_label(l: usize) -> String {
    format!("listener-{l:04}")
}

/// Community of blogger `i`.
pub fn community_of(config: &SynthConfig, i: usize) -> usize {
    i / config.bloggers_per_community.max(1)
}

pub fn generate(config: &SynthConfig) -> Result<SynthData> {
    config.validate()?;
    let mut rng = Draws(Pcg64::seed_from_u64(config.seed));
    let c = config.communities;
    let tpc = config.tracks_per_community;
    let n = config.bloggers();

    let mut posts = Vec::new();
    for b in 0..n {
        let home = community_of(config, b);
        let before = posts.len();
        for g in 0..c {
            let p = if g == home {
                config.mention_in
            } else {
                config.mention_across
            };
            for t in 0..tpc {
                if rng.bernoulli(p) {
                    posts.push(PostRecord {
                        user: blogger_label(b),
                        resource: track_label(g, t),
                    });
                }
            }
        }
        if posts.len() == before && tpc > 0 {
            posts.push(PostRecord {
                user: blogger_label(b),
                resource: track_label(home, rng.below(tpc)),
            });
        }
    }

    let mut assignments = Vec::new();
    if c > 0 {
        for l in 0..config.listeners {
            let g = l % c;
            for t in 0..tpc {
                for j in 0..config.tags_per_genre {
                    if rng.bernoulli(config.genre_tag_prob) {
                        assignments.push(AssignmentRecord {
                            user: listener_label(l),
                            tag: tag_label(g, j),
                            resource: track_label(g, t),
                        });
                    }
                }
            }
        }
    }

    let p_same = 1.0 - (1.0 - config.blogroll_in) * (1.0 - config.blogroll_random);
    let mut blogroll = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let p = if community_of(config, a) == community_of(config, b) {
                p_same
            } else {
                config.blogroll_random
            };
            if rng.bernoulli(p) {
                blogroll.push(EdgeRecord {
                    source: blogger_label(a),
                    target: blogger_label(b),
                });
            }
        }
    }

    let dictionary = (0..c)
        .flat_map(|g| (0..tpc).map(move |t| track_label(g, t)))
        .collect();

    Ok(SynthData {
        config: config.clone(),
        posts,
        assignments,
        blogroll,
        dictionary,
    })
}

impl SynthData {
    /// Writes the four input files and a manifest of the config into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::file(dir, e))?;
        let create = |name: &str| {
            let p = dir.join(name);
            fs::File::create(&p)
                .map(std::io::BufWriter::new)
                .map_err(|e| Error::file(p, e))
        };
        write_jsonl(create(POSTS_FILE)?, &self.posts)?;
        write_jsonl(create(ASSIGNMENTS_FILE)?, &self.assignments)?;
        write_jsonl(create(BLOGROLL_FILE)?, &self.blogroll)?;
        let mut dict = String::new();
        for d in &self.dictionary {
            dict.push_str(d);
            dict.push('\n');
        }
        let p = dir.join(DICTIONARY_FILE);
        fs::write(&p, dict).map_err(|e| Error::file(p, e))?;
        let p = dir.join(MANIFEST_FILE);
        let mut manifest = serde_json::to_string_pretty(&self.config)?;
        manifest.push('\n');
        fs::write(&p, manifest).map_err(|e| Error::file(p, e))?;
        Ok(())
    }
}
