//! Folksonomy data model: interned users, tags and resources, the
//! in-domain post relation, the out-of-domain tag relation and the explicit
//! blogroll graph.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{normalize, NormalizationPolicy};

macro_rules! handle {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub u32);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }

        impl From<usize> for $name {
            fn from(i: usize) -> Self {
                $name(u32::try_from(i).expect("handle space exhausted"))
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

handle!(
    /// Dense handle of a user on either site.
    UserId
);
handle!(
    /// Dense handle of a tag.
    TagId
);
handle!(
    /// Dense handle of a resource (a track).
    ResourceId
);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Namespace {
    User,
    Tag,
    Resource,
}

/// Bijective map between normalized labels and dense 0-based handles.
#[derive(Debug, Clone, Default)]
pub struct Interner {
    policy: NormalizationPolicy,
    labels: Vec<String>,
    index: HashMap<String, u32>,
}

impl PartialEq for Interner {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
    }
}

impl Eq for Interner {}

impl Interner {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_policy(policy: NormalizationPolicy) -> Self {
        Interner {
            policy,
            ..Self::default()
        }
    }

    /// Returns the handle of `label`, allocating the next dense handle the
    /// first time a normalized label is seen.
    pub fn intern(&mut self, label: &str) -> Result<u32> {
        let norm = normalize(label, &self.policy);
        if norm.is_empty() {
            return Err(Error::EmptyLabel {
                raw: label.to_owned(),
            });
        }
        if let Some(&h) = self.index.get(&norm) {
            return Ok(h);
        }
        let h = u32::try_from(self.labels.len()).expect("handle space exhausted");
        self.index.insert(norm.clone(), h);
        self.labels.push(norm);
        Ok(h)
    }

    /// Looks up a label without allocating.
    pub fn get(&self, label: &str) -> Option<u32> {
        self.index.get(&normalize(label, &self.policy)).copied()
    }

    pub fn label(&self, handle: u32) -> &str {
        &self.labels[handle as usize]
    }

    pub fn try_label(&self, handle: u32) -> Option<&str> {
        self.labels.get(handle as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn policy(&self) -> &NormalizationPolicy {
        &self.policy
    }
}

/// The three interning tables shared by every relation of a dataset.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Symbols {
    pub users: Interner,
    pub tags: Interner,
    pub resources: Interner,
}

impl Symbols {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_policy(policy: NormalizationPolicy) -> Self {
        Symbols {
            users: Interner::with_policy(policy.clone()),
            tags: Interner::with_policy(policy.clone()),
            resources: Interner::with_policy(policy),
        }
    }

    pub fn intern(&mut self, label: &str, namespace: Namespace) -> Result<u32> {
        self.table_mut(namespace).intern(label)
    }

    pub fn table(&self, namespace: Namespace) -> &Interner {
        match namespace {
            Namespace::User => &self.users,
            Namespace::Tag => &self.tags,
            Namespace::Resource => &self.resources,
        }
    }

    fn table_mut(&mut self, namespace: Namespace) -> &mut Interner {
        match namespace {
            Namespace::User => &mut self.users,
            Namespace::Tag => &mut self.tags,
            Namespace::Resource => &mut self.resources,
        }
    }

    pub fn user(&self, id: UserId) -> &str {
        self.users.label(id.0)
    }

    pub fn tag(&self, id: TagId) -> &str {
        self.tags.label(id.0)
    }

    pub fn resource(&self, id: ResourceId) -> &str {
        self.resources.label(id.0)
    }
}

/// One element of the ternary relation Y ⊆ U × T × R.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TagAssignment {
    pub user: UserId,
    pub tag: TagId,
    pub resource: ResourceId,
}

impl TagAssignment {
    pub fn new(user: UserId, tag: TagId, resource: ResourceId) -> Self {
        TagAssignment {
            user,
            tag,
            resource,
        }
    }
}

/// An in-domain (user, resource) mention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PostTuple {
    pub user: UserId,
    pub resource: ResourceId,
}

impl PostTuple {
    pub fn new(user: UserId, resource: ResourceId) -> Self {
        PostTuple { user, resource }
    }
}

/// Outcome of inserting an edge into a [`BlogrollGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeInsert {
    Added,
    SelfLoop,
    Duplicate,
}

/// Directed graph of explicit blogroll links.
///
/// Fields are public so that hand-built (possibly invalid) graphs can be
/// checked with [`Dataset::validate`]; the insertion helpers keep the
/// invariants.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BlogrollGraph {
    pub nodes: BTreeSet<UserId>,
    pub edges: IndexSet<(UserId, UserId)>,
}

impl BlogrollGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from an edge list, adding endpoints as nodes and
    /// dropping self-loops and duplicates.
    pub fn from_edges<I>(edges: I) -> Self
    where
        I: IntoIterator<Item = (UserId, UserId)>,
    {
        let mut g = BlogrollGraph::new();
        for (s, t) in edges {
            g.add_edge(s, t);
        }
        g
    }

    pub fn add_node(&mut self, node: UserId) {
        self.nodes.insert(node);
    }

    pub fn add_edge(&mut self, source: UserId, target: UserId) -> EdgeInsert {
        if source == target {
            return EdgeInsert::SelfLoop;
        }
        self.nodes.insert(source);
        self.nodes.insert(target);
        if self.edges.insert((source, target)) {
            EdgeInsert::Added
        } else {
            EdgeInsert::Duplicate
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, source: UserId, target: UserId) -> bool {
        self.edges.contains(&(source, target))
    }

    /// Out-neighbours of every node, i.e. each blogger's explicit blogroll.
    pub fn out_neighbors(&self) -> HashMap<UserId, BTreeSet<UserId>> {
        let mut out: HashMap<UserId, BTreeSet<UserId>> = HashMap::new();
        for &(s, t) in &self.edges {
            out.entry(s).or_default().insert(t);
        }
        out
    }
}

/// A breached model invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    SelfLoop { user: UserId },
    DanglingEdge { source: UserId, target: UserId },
    DomainOverlap { user: UserId },
    UnknownHandle { namespace: Namespace, handle: u32 },
    PostFromOutOfDomainUser { user: UserId },
    AssignmentFromInDomainUser { user: UserId },
    BlogrollNodeOutOfDomain { user: UserId },
}

/// Both sites' relations over one set of interning tables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dataset {
    pub symbols: Symbols,
    pub in_domain_users: BTreeSet<UserId>,
    pub out_domain_users: BTreeSet<UserId>,
    pub posts: IndexSet<PostTuple>,
    pub assignments: IndexSet<TagAssignment>,
    pub blogroll: BlogrollGraph,
}

impl Dataset {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns one violation per breached invariant; empty when the dataset
    /// is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n_users = self.symbols.users.len() as u32;
        let n_tags = self.symbols.tags.len() as u32;
        let n_res = self.symbols.resources.len() as u32;
        let mut unknown = BTreeSet::new();
        let mut check = |ns: Namespace, h: u32, bound: u32| {
            if h >= bound {
                unknown.insert((ns, h));
            }
        };

        for u in self.in_domain_users.intersection(&self.out_domain_users) {
            out.push(Violation::DomainOverlap { user: *u });
        }
        for u in self.in_domain_users.iter().chain(&self.out_domain_users) {
            check(Namespace::User, u.0, n_users);
        }
        for p in &self.posts {
            check(Namespace::User, p.user.0, n_users);
            check(Namespace::Resource, p.resource.0, n_res);
            if !self.in_domain_users.contains(&p.user) {
                out.push(Violation::PostFromOutOfDomainUser { user: p.user });
            }
        }
        for a in &self.assignments {
            check(Namespace::User, a.user.0, n_users);
            check(Namespace::Tag, a.tag.0, n_tags);
            check(Namespace::Resource, a.resource.0, n_res);
            if self.in_domain_users.contains(&a.user) {
                out.push(Violation::AssignmentFromInDomainUser { user: a.user });
            }
        }
        for &(s, t) in &self.blogroll.edges {
            if s == t {
                out.push(Violation::SelfLoop { user: s });
            }
            if !self.blogroll.nodes.contains(&s) || !self.blogroll.nodes.contains(&t) {
                out.push(Violation::DanglingEdge {
                    source: s,
                    target: t,
                });
            }
        }
        for &u in &self.blogroll.nodes {
            check(Namespace::User, u.0, n_users);
            if !self.in_domain_users.contains(&u) {
                out.push(Violation::BlogrollNodeOutOfDomain { user: u });
            }
        }
        out.extend(
            unknown
                .into_iter()
                .map(|(namespace, handle)| Violation::UnknownHandle { namespace, handle }),
        );
        out
    }

    /// In-domain users in ascending handle order.
    pub fn in_domain_order(&self) -> Vec<UserId> {
        self.in_domain_users.iter().copied().collect()
    }
}
