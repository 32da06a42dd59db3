//! Pipeline commands behind the `osn` binary.
//!
//! Every command reads its inputs from the paths in [`RunConfig`] and the
//! outputs of earlier stages from the output directory, and writes its own
//! outputs there.

use std::collections::HashMap;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;

use osn_core::bundle::{build_bundle, BundleInputs};
use osn_core::enrich::EnrichStats;
use osn_core::evaluate::{histogram_table, EvaluationReport};
use osn_core::graphstats::{graph_report, ComponentReport, GraphSummary};
use osn_core::ingest::{self, load_dataset, InputFiles, LoadReport, NormalizationPolicy};
use osn_core::model::{BlogrollGraph, UserId};
use osn_core::pipeline::{build_profiles, evaluation_report, neighborhood, Neighborhood};
use osn_core::profiles::{ProfileKind, ProfileMatrix, Vocabulary};
use osn_core::records::{
    read_jsonl, write_jsonl, EdgeRecord, NeighborRecord, ProfileRecord, VocabRecord,
};
use osn_core::similarity::{
    neighbor_records, neighbors_from_records, similarity_matrix_with_workers,
};
use osn_core::synth::{generate, SynthConfig};

pub mod serve;

pub const ENRICHED_FILE: &str = "enriched.jsonl";
pub const ENRICH_SUMMARY_FILE: &str = "enrich_summary.json";
pub const PROFILES_SUMMARY_FILE: &str = "profiles_summary.json";
pub const REPORT_FILE: &str = "report.json";
pub const GRAPH_STATS_FILE: &str = "graph_stats.json";
pub const BUNDLE_FILE: &str = "bundle.json";
/// Number of largest components detailed in the graph statistics.
pub const TOP_COMPONENTS: usize = 5;

pub fn vocab_file(kind: ProfileKind) -> String {
    format!("vocab_{kind}.jsonl")
}

pub fn profiles_file(kind: ProfileKind) -> String {
    format!("profiles_{kind}.jsonl")
}

pub fn neighbors_file(kind: ProfileKind) -> String {
    format!("neighbors_{kind}.jsonl")
}

pub fn histograms_file(kind: ProfileKind) -> String {
    format!("histograms_{kind}.csv")
}

const KINDS: [ProfileKind; 2] = [ProfileKind::Track, ProfileKind::Tag];

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub posts: Option<PathBuf>,
    pub assignments: Option<PathBuf>,
    pub blogroll: Option<PathBuf>,
    pub dictionary: Option<PathBuf>,
    pub tag_cap: usize,
    pub k: usize,
    pub bin_width: f64,
    pub out: PathBuf,
    pub strict: bool,
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            posts: None,
            assignments: None,
            blogroll: None,
            dictionary: None,
            tag_cap: osn_core::DEFAULT_TAG_CAP,
            k: osn_core::DEFAULT_K,
            bin_width: osn_core::DEFAULT_BIN_WIDTH,
            out: PathBuf::from("out"),
            strict: false,
            workers: default_workers(),
        }
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            bail!("invalid --k: must be at least 1");
        }
        if self.tag_cap == 0 {
            bail!("invalid --tag-cap: must be at least 1");
        }
        if self.workers == 0 {
            bail!("invalid --workers: must be at least 1");
        }
        osn_core::evaluate::bin_count(self.bin_width)
            .map_err(|e| anyhow!("invalid --bin-width: {e}"))?;
        Ok(())
    }

    fn input(&self, path: &Option<PathBuf>, flag: &str) -> Result<PathBuf> {
        let p = path
            .clone()
            .ok_or_else(|| anyhow!("missing required input --{flag}"))?;
        if !p.is_file() {
            bail!("input file for --{flag} not found: {}", p.display());
        }
        Ok(p)
    }

    fn optional(&self, path: &Option<PathBuf>, flag: &str) -> Result<Option<PathBuf>> {
        match path {
            None => Ok(None),
            Some(_) => self.input(path, flag).map(Some),
        }
    }

    fn out_path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    /// An output of an earlier stage.
    fn stage_output(&self, name: &str, stage: &str) -> Result<PathBuf> {
        let p = self.out_path(name);
        if !p.is_file() {
            bail!("{} not found; run `osn {stage}` first", p.display());
        }
        Ok(p)
    }

    fn ensure_out(&self) -> Result<()> {
        fs::create_dir_all(&self.out).with_context(|| format!("creating {}", self.out.display()))
    }
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    fs::File::create(path)
        .map(BufWriter::new)
        .with_context(|| format!("writing {}", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    fs::write(path, s).with_context(|| format!("writing {}", path.display()))
}

fn read_records<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let r = ingest::open(path)?;
    read_jsonl(r).with_context(|| format!("reading {}", path.display()))
}

pub fn cmd_synth(config: &SynthConfig, out: &Path) -> Result<()> {
    let data = generate(config)?;
    data.write_to(out)?;
    log::info!(
        "wrote {} posts, {} assignments, {} blogroll edges to {}",
        data.posts.len(),
        data.assignments.len(),
        data.blogroll.len(),
        out.display()
    );
    Ok(())
}

#[derive(Serialize)]
struct EnrichSummary<'a> {
    enriched_assignments: usize,
    join: &'a EnrichStats,
    load: &'a LoadReport,
}

pub fn cmd_enrich(cfg: &RunConfig) -> Result<()> {
    cfg.validate()?;
    let files = InputFiles {
        posts: Some(cfg.input(&cfg.posts, "posts")?),
        assignments: Some(cfg.input(&cfg.assignments, "assignments")?),
        blogroll: None,
        dictionary: cfg.optional(&cfg.dictionary, "dictionary")?,
    };
    let (ds, load) = load_dataset(&files, cfg.strict)?;
    let enriched = osn_core::enrich(&ds.posts, &ds.assignments);
    cfg.ensure_out()?;
    ingest::write_assignments(
        &ds,
        &enriched.assignments,
        create(&cfg.out_path(ENRICHED_FILE))?,
    )?;
    write_json(
        &cfg.out_path(ENRICH_SUMMARY_FILE),
        &EnrichSummary {
            enriched_assignments: enriched.len(),
            join: &enriched.stats,
            load: &load,
        },
    )
}

#[derive(Serialize)]
struct ProfileSummary {
    users: usize,
    track_vocabulary: usize,
    tag_vocabulary: usize,
    tag_cap: usize,
    empty_track_profiles: usize,
    empty_tag_profiles: usize,
    enriched_assignments: usize,
    load: LoadReport,
}

pub fn cmd_profiles(cfg: &RunConfig) -> Result<()> {
    cfg.validate()?;
    let files = InputFiles {
        posts: Some(cfg.input(&cfg.posts, "posts")?),
        assignments: Some(cfg.input(&cfg.assignments, "assignments")?),
        blogroll: cfg.optional(&cfg.blogroll, "blogroll")?,
        dictionary: cfg.optional(&cfg.dictionary, "dictionary")?,
    };
    let (ds, load) = load_dataset(&files, cfg.strict)?;
    let p = build_profiles(&ds, cfg.tag_cap)?;
    cfg.ensure_out()?;
    for m in [&p.track, &p.tag] {
        write_jsonl(
            create(&cfg.out_path(&vocab_file(m.kind())))?,
            m.vocabulary.to_records(),
        )?;
        write_jsonl(
            create(&cfg.out_path(&profiles_file(m.kind())))?,
            m.to_records(),
        )?;
    }
    write_json(
        &cfg.out_path(PROFILES_SUMMARY_FILE),
        &ProfileSummary {
            users: p.track.len(),
            track_vocabulary: p.track.vocabulary.len(),
            tag_vocabulary: p.tag.vocabulary.len(),
            tag_cap: cfg.tag_cap,
            empty_track_profiles: p.track.empty_profiles(),
            empty_tag_profiles: p.tag.empty_profiles(),
            enriched_assignments: p.enriched.len(),
            load,
        },
    )
}

/// Reads the profile matrix of one kind written by `osn profiles`.
pub fn load_profiles(cfg: &RunConfig, kind: ProfileKind) -> Result<ProfileMatrix> {
    let vocab: Vec<VocabRecord> = read_records(&cfg.stage_output(&vocab_file(kind), "profiles")?)?;
    let profiles: Vec<ProfileRecord> =
        read_records(&cfg.stage_output(&profiles_file(kind), "profiles")?)?;
    Ok(ProfileMatrix::from_records(
        Vocabulary::from_records(kind, &vocab)?,
        &profiles,
    )?)
}

pub fn cmd_similarity(cfg: &RunConfig) -> Result<()> {
    cfg.validate()?;
    for kind in KINDS {
        let m = load_profiles(cfg, kind)?;
        let n = neighborhood(&m, cfg.k, cfg.workers)?;
        write_jsonl(
            create(&cfg.out_path(&neighbors_file(kind)))?,
            neighbor_records(&n.matrix, &n.blogrolls),
        )?;
    }
    Ok(())
}

/// Recomputes the similarity matrix from stored profiles and attaches the
/// stored optimal blogrolls to it.
fn load_neighborhood(cfg: &RunConfig, m: &ProfileMatrix) -> Result<Neighborhood> {
    let kind = m.kind();
    let records: Vec<NeighborRecord> =
        read_records(&cfg.stage_output(&neighbors_file(kind), "similarity")?)?;
    let matrix = similarity_matrix_with_workers(m, cfg.workers)?;
    let blogrolls = neighbors_from_records(&matrix, &records).with_context(|| {
        format!(
            "{} does not match the stored profiles",
            neighbors_file(kind)
        )
    })?;
    Ok(Neighborhood { matrix, blogrolls })
}

/// Normalized, deduplicated blogroll edges without self-loops.
fn read_blogroll(path: &Path) -> Result<Vec<EdgeRecord>> {
    let policy = NormalizationPolicy::default();
    let raw: Vec<EdgeRecord> = read_records(path)?;
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for e in raw {
        let s = ingest::normalize(&e.source, &policy);
        let t = ingest::normalize(&e.target, &policy);
        if s.is_empty() || t.is_empty() || s == t {
            continue;
        }
        if seen.insert((s.clone(), t.clone())) {
            out.push(EdgeRecord {
                source: s,
                target: t,
            });
        }
    }
    Ok(out)
}

/// Blogroll over the handles of a profile matrix rebuilt from records.
fn blogroll_for(m: &ProfileMatrix, edges: &[EdgeRecord]) -> Result<BlogrollGraph> {
    let ids: HashMap<&str, UserId> = m
        .user_labels
        .iter()
        .map(String::as_str)
        .zip(m.users.iter().copied())
        .collect();
    let mut g = BlogrollGraph::new();
    for &u in &m.users {
        g.add_node(u);
    }
    for e in edges {
        let id = |l: &str| {
            ids.get(l).copied().ok_or_else(|| {
                anyhow!("blogroll user {l:?} has no profile; pass --blogroll to `osn profiles`")
            })
        };
        g.add_edge(id(&e.source)?, id(&e.target)?);
    }
    Ok(g)
}

pub fn cmd_evaluate(cfg: &RunConfig) -> Result<EvaluationReport> {
    cfg.validate()?;
    let blogroll_path = cfg.input(&cfg.blogroll, "blogroll")?;
    let track = load_profiles(cfg, ProfileKind::Track)?;
    let tag = load_profiles(cfg, ProfileKind::Tag)?;
    if track.user_labels != tag.user_labels {
        bail!("track and tag profiles list different users");
    }
    let track_n = load_neighborhood(cfg, &track)?;
    let tag_n = load_neighborhood(cfg, &tag)?;
    let graph = blogroll_for(&track, &read_blogroll(&blogroll_path)?)?;
    let report = evaluation_report(&graph, &track_n, &tag_n, cfg.k, cfg.bin_width)?;
    write_json(&cfg.out_path(REPORT_FILE), &report)?;
    for (kind, h) in [
        (ProfileKind::Track, &report.track_histograms),
        (ProfileKind::Tag, &report.tag_histograms),
    ] {
        fs::write(
            cfg.out_path(&histograms_file(kind)),
            histogram_table(&h.explicit, &h.optimal),
        )?;
    }
    Ok(report)
}

#[derive(Serialize)]
struct LabeledComponent<'a> {
    smallest_member: &'a str,
    #[serde(flatten)]
    report: &'a ComponentReport,
}

#[derive(Serialize)]
struct GraphStatsDocument<'a> {
    summary: &'a GraphSummary,
    components: Vec<LabeledComponent<'a>>,
    load: &'a LoadReport,
}

pub fn cmd_stats(cfg: &RunConfig) -> Result<GraphSummary> {
    cfg.validate()?;
    let files = InputFiles {
        posts: cfg.optional(&cfg.posts, "posts")?,
        assignments: None,
        blogroll: Some(cfg.input(&cfg.blogroll, "blogroll")?),
        dictionary: cfg.optional(&cfg.dictionary, "dictionary")?,
    };
    let (ds, load) = load_dataset(&files, cfg.strict)?;
    let report = graph_report(&ds.blogroll, TOP_COMPONENTS);
    cfg.ensure_out()?;
    write_json(
        &cfg.out_path(GRAPH_STATS_FILE),
        &GraphStatsDocument {
            summary: &report.summary,
            components: report
                .components
                .iter()
                .map(|c| LabeledComponent {
                    smallest_member: ds.symbols.user(c.id),
                    report: c,
                })
                .collect(),
            load: &load,
        },
    )?;
    Ok(report.summary)
}

pub fn cmd_export_bundle(cfg: &RunConfig) -> Result<PathBuf> {
    cfg.validate()?;
    let blogroll_path = cfg.input(&cfg.blogroll, "blogroll")?;
    let track = load_profiles(cfg, ProfileKind::Track)?;
    let tag = load_profiles(cfg, ProfileKind::Tag)?;
    let track_n: Vec<NeighborRecord> =
        read_records(&cfg.stage_output(&neighbors_file(ProfileKind::Track), "similarity")?)?;
    let tag_n: Vec<NeighborRecord> =
        read_records(&cfg.stage_output(&neighbors_file(ProfileKind::Tag), "similarity")?)?;
    let report_path = cfg.stage_output(REPORT_FILE, "evaluate")?;
    let metrics: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report_path)?)
        .with_context(|| format!("reading {}", report_path.display()))?;
    let edges = read_blogroll(&blogroll_path)?;
    let bundle = build_bundle(BundleInputs {
        k: cfg.k,
        track_profiles: &track,
        tag_profiles: &tag,
        explicit_edges: &edges,
        track_neighbors: &track_n,
        tag_neighbors: &tag_n,
        metrics,
    })?;
    let path = cfg.out_path(BUNDLE_FILE);
    write_json(&path, &bundle)?;
    Ok(path)
}

/// Every stage from enrichment to the bundle, in order.
pub fn cmd_run(cfg: &RunConfig) -> Result<PathBuf> {
    cmd_enrich(cfg)?;
    cmd_profiles(cfg)?;
    cmd_similarity(cfg)?;
    cmd_evaluate(cfg)?;
    cmd_stats(cfg)?;
    cmd_export_bundle(cfg)
}
