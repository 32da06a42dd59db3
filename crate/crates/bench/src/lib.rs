//! Inputs shared by the benchmarks.

use osn_core::model::Dataset;
use osn_core::pipeline::{build_profiles, Profiles};
use osn_core::records::write_jsonl;
use osn_core::synth::{generate, SynthConfig};

/// A synthetic configuration with `communities` groups of 50 bloggers.
pub fn scaled_config(communities: usize) -> SynthConfig {
    SynthConfig {
        communities,
        bloggers_per_community: 50,
        listeners: 30 * communities,
        ..SynthConfig::fixture()
    }
}

/// Loads a synthetic dataset through the regular JSONL readers.
pub fn dataset(config: &SynthConfig) -> Dataset {
    let data = generate(config).expect("valid config");
    let mut posts = Vec::new();
    let mut assignments = Vec::new();
    let mut blogroll = Vec::new();
    write_jsonl(&mut posts, &data.posts).expect("posts");
    write_jsonl(&mut assignments, &data.assignments).expect("assignments");
    write_jsonl(&mut blogroll, &data.blogroll).expect("blogroll");

    let mut ds = Dataset::new();
    osn_core::ingest::load_posts(posts.as_slice(), &mut ds, None).expect("posts");
    osn_core::ingest::load_assignments(assignments.as_slice(), &mut ds).expect("assignments");
    osn_core::ingest::load_blogroll(blogroll.as_slice(), &mut ds, false).expect("blogroll");
    ds
}

pub fn profiles(ds: &Dataset) -> Profiles {
    build_profiles(ds, osn_core::DEFAULT_TAG_CAP).expect("profiles")
}
