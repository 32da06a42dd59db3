//! Loading posts, tag assignments, blogrolls and the resource dictionary
//! from newline-delimited JSON records.
//!
//! Labels are normalized before interning so that the enrichment join can
//! compare resources by plain equality.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};
use crate::model::{Dataset, EdgeInsert, PostTuple, ResourceId, TagAssignment, TagId, UserId};
use crate::records::{content_lines, write_jsonl, AssignmentRecord, EdgeRecord, PostRecord};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalizationPolicy {
    /// Unicode compatibility normalization (NFKC).
    pub compatibility: bool,
    pub case_fold: bool,
    /// Trim and collapse inner whitespace runs to a single space.
    pub collapse_whitespace: bool,
}

impl Default for NormalizationPolicy {
    fn default() -> Self {
        NormalizationPolicy {
            compatibility: true,
            case_fold: true,
            collapse_whitespace: true,
        }
    }
}

fn normalize_once(label: &str, policy: &NormalizationPolicy) -> String {
    let mut s: String = if policy.compatibility {
        label.nfkc().collect()
    } else {
        label.to_owned()
    };
    if policy.case_fold {
        s = s.to_lowercase();
        if policy.compatibility {
            s = s.nfkc().collect();
        }
    }
    if policy.collapse_whitespace {
        s = s.split_whitespace().collect::<Vec<_>>().join(" ");
    }
    s
}

/// Canonical form of a label under `policy`. Idempotent.
pub fn normalize(label: &str, policy: &NormalizationPolicy) -> String {
    // Case mapping can leave a string outside NFKC (and vice versa) for a
    // handful of code points; iterate to the fixed point.
    let mut cur = normalize_once(label, policy);
    for _ in 0..4 {
        let next = normalize_once(&cur, policy);
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

/// Resource labels admitted as valid resources, stored normalized.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResourceDictionary {
    entries: HashSet<String>,
    policy: NormalizationPolicy,
}

impl ResourceDictionary {
    pub fn new(policy: NormalizationPolicy) -> Self {
        ResourceDictionary {
            entries: HashSet::new(),
            policy,
        }
    }

    /// One label per line; blank lines and `#` comments are ignored.
    pub fn from_reader<R: BufRead>(r: R, policy: NormalizationPolicy) -> Result<Self> {
        let mut d = ResourceDictionary::new(policy);
        for item in content_lines(r) {
            let (_, line) = item?;
            d.insert(&line);
        }
        Ok(d)
    }

    pub fn insert(&mut self, label: &str) -> bool {
        let n = normalize(label, &self.policy);
        !n.is_empty() && self.entries.insert(n)
    }

    pub fn contains(&self, label: &str) -> bool {
        self.entries.contains(&normalize(label, &self.policy))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(String::as_str)
    }
}

/// Per-file audit of records that did not make it into the dataset.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SkipReport {
    pub records: usize,
    pub loaded: usize,
    pub duplicates: usize,
    pub empty_labels: usize,
    pub not_in_dictionary: usize,
    pub self_loops: usize,
    pub unknown_endpoints: usize,
    pub created_users: usize,
}

impl SkipReport {
    pub fn skipped(&self) -> usize {
        self.duplicates
            + self.empty_labels
            + self.not_in_dictionary
            + self.self_loops
            + self.unknown_endpoints
    }
}

fn field<'a>(obj: &'a Value, line: usize, name: &'static str) -> Result<&'a str> {
    match obj.get(name) {
        None | Some(Value::Null) => Err(Error::MissingField { line, field: name }),
        Some(Value::String(s)) => Ok(s),
        Some(_) => Err(Error::Malformed {
            line,
            message: format!("field `{name}` is not a string"),
        }),
    }
}

fn parse_object(line: usize, text: &str) -> Result<Value> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Malformed {
        line,
        message: e.to_string(),
    })?;
    if !v.is_object() {
        return Err(Error::Malformed {
            line,
            message: "expected a JSON object".into(),
        });
    }
    Ok(v)
}

fn intern_in_domain(ds: &mut Dataset, line: usize, label: &str) -> Result<UserId> {
    let u = UserId(ds.symbols.users.intern(label)?);
    if ds.out_domain_users.contains(&u) {
        return Err(Error::DomainOverlap {
            line,
            label: ds.symbols.user(u).to_owned(),
        });
    }
    ds.in_domain_users.insert(u);
    Ok(u)
}

/// Loads in-domain `(user, resource)` mentions into `ds`.
///
/// With a dictionary, mentions of resources outside it are skipped.
pub fn load_posts<R: BufRead>(
    r: R,
    ds: &mut Dataset,
    dictionary: Option<&ResourceDictionary>,
) -> Result<SkipReport> {
    let mut rep = SkipReport::default();
    let policy = ds.symbols.users.policy().clone();
    for item in content_lines(r) {
        let (line, text) = item?;
        rep.records += 1;
        let obj = parse_object(line, &text)?;
        let user = field(&obj, line, "user")?;
        let resource = field(&obj, line, "resource")?;
        if normalize(user, &policy).is_empty() || normalize(resource, &policy).is_empty() {
            rep.empty_labels += 1;
            continue;
        }
        if let Some(d) = dictionary {
            if !d.contains(resource) {
                rep.not_in_dictionary += 1;
                continue;
            }
        }
        let u = intern_in_domain(ds, line, user)?;
        let res = ResourceId(ds.symbols.resources.intern(resource)?);
        if ds.posts.insert(PostTuple::new(u, res)) {
            rep.loaded += 1;
        } else {
            rep.duplicates += 1;
        }
    }
    Ok(rep)
}

/// Loads out-of-domain `(user, tag, resource)` assignments into `ds`.
pub fn load_assignments<R: BufRead>(r: R, ds: &mut Dataset) -> Result<SkipReport> {
    let mut rep = SkipReport::default();
    let policy = ds.symbols.users.policy().clone();
    for item in content_lines(r) {
        let (line, text) = item?;
        rep.records += 1;
        let obj = parse_object(line, &text)?;
        let user = field(&obj, line, "user")?;
        let tag = field(&obj, line, "tag")?;
        let resource = field(&obj, line, "resource")?;
        if [user, tag, resource]
            .iter()
            .any(|l| normalize(l, &policy).is_empty())
        {
            rep.empty_labels += 1;
            continue;
        }
        let u = UserId(ds.symbols.users.intern(user)?);
        if ds.in_domain_users.contains(&u) {
            return Err(Error::DomainOverlap {
                line,
                label: ds.symbols.user(u).to_owned(),
            });
        }
        ds.out_domain_users.insert(u);
        let t = TagId(ds.symbols.tags.intern(tag)?);
        let res = ResourceId(ds.symbols.resources.intern(resource)?);
        if ds.assignments.insert(TagAssignment::new(u, t, res)) {
            rep.loaded += 1;
        } else {
            rep.duplicates += 1;
        }
    }
    Ok(rep)
}

/// Loads explicit blogroll edges into `ds`.
///
/// Endpoints that are not yet in-domain users become profile-less
/// in-domain users, unless `strict` is set, in which case the edge is
/// skipped. Self-loops and duplicate edges are dropped and counted.
pub fn load_blogroll<R: BufRead>(r: R, ds: &mut Dataset, strict: bool) -> Result<SkipReport> {
    let mut rep = SkipReport::default();
    let policy = ds.symbols.users.policy().clone();
    for &u in &ds.in_domain_users {
        ds.blogroll.add_node(u);
    }
    for item in content_lines(r) {
        let (line, text) = item?;
        rep.records += 1;
        let obj = parse_object(line, &text)?;
        let source = field(&obj, line, "source")?;
        let target = field(&obj, line, "target")?;
        if normalize(source, &policy).is_empty() || normalize(target, &policy).is_empty() {
            rep.empty_labels += 1;
            continue;
        }
        if strict {
            let known = |l: &str| {
                ds.symbols
                    .users
                    .get(l)
                    .is_some_and(|h| ds.in_domain_users.contains(&UserId(h)))
            };
            if !known(source) || !known(target) {
                rep.unknown_endpoints += 1;
                continue;
            }
        }
        let before = ds.in_domain_users.len();
        let s = intern_in_domain(ds, line, source)?;
        let t = intern_in_domain(ds, line, target)?;
        rep.created_users += ds.in_domain_users.len() - before;
        ds.blogroll.add_node(s);
        ds.blogroll.add_node(t);
        match ds.blogroll.add_edge(s, t) {
            EdgeInsert::Added => rep.loaded += 1,
            EdgeInsert::SelfLoop => rep.self_loops += 1,
            EdgeInsert::Duplicate => rep.duplicates += 1,
        }
    }
    if rep.self_loops > 0 {
        log::warn!("dropped {} blogroll self-loops", rep.self_loops);
    }
    Ok(rep)
}

pub fn write_posts<W: Write>(ds: &Dataset, w: W) -> Result<()> {
    write_jsonl(
        w,
        ds.posts.iter().map(|p| PostRecord {
            user: ds.symbols.user(p.user).to_owned(),
            resource: ds.symbols.resource(p.resource).to_owned(),
        }),
    )
}

/// Writes assignments in the assignments file format, in iteration order.
pub fn write_assignments<'a, W, I>(ds: &Dataset, assignments: I, w: W) -> Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a TagAssignment>,
{
    write_jsonl(
        w,
        assignments.into_iter().map(|a| AssignmentRecord {
            user: ds.symbols.user(a.user).to_owned(),
            tag: ds.symbols.tag(a.tag).to_owned(),
            resource: ds.symbols.resource(a.resource).to_owned(),
        }),
    )
}

pub fn write_blogroll<W: Write>(ds: &Dataset, w: W) -> Result<()> {
    write_jsonl(
        w,
        ds.blogroll.edges.iter().map(|&(s, t)| EdgeRecord {
            source: ds.symbols.user(s).to_owned(),
            target: ds.symbols.user(t).to_owned(),
        }),
    )
}

/// Paths of the input files of one run. Any of them may be absent.
#[derive(Debug, Clone, Default)]
pub struct InputFiles {
    pub posts: Option<PathBuf>,
    pub assignments: Option<PathBuf>,
    pub blogroll: Option<PathBuf>,
    pub dictionary: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct LoadReport {
    pub posts: SkipReport,
    pub assignments: SkipReport,
    pub blogroll: SkipReport,
}

pub fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::file(path, e))
}

/// Loads posts, then assignments, then the blogroll. Handles are allocated
/// in that order, so reloading written files reproduces them exactly.
pub fn load_dataset(files: &InputFiles, strict: bool) -> Result<(Dataset, LoadReport)> {
    let mut ds = Dataset::new();
    let mut report = LoadReport::default();
    let dictionary = match &files.dictionary {
        Some(p) => Some(ResourceDictionary::from_reader(
            open(p)?,
            NormalizationPolicy::default(),
        )?),
        None => None,
    };
    if let Some(p) = &files.posts {
        report.posts =
            load_posts(open(p)?, &mut ds, dictionary.as_ref()).map_err(|e| with_path(p, e))?;
    }
    if let Some(p) = &files.assignments {
        report.assignments = load_assignments(open(p)?, &mut ds).map_err(|e| with_path(p, e))?;
    }
    if let Some(p) = &files.blogroll {
        report.blogroll = load_blogroll(open(p)?, &mut ds, strict).map_err(|e| with_path(p, e))?;
    } else {
        for &u in &ds.in_domain_users {
            ds.blogroll.add_node(u);
        }
    }
    Ok((ds, report))
}

fn with_path(path: &Path, e: Error) -> Error {
    match e {
        Error::Malformed { line, message } => Error::Malformed {
            line,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    }
}
