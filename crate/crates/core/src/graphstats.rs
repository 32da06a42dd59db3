//! Structure of the explicit blogroll network: weak components, reciprocal
//! links, clustering and average distances.
//!
//! Clustering and distances are computed on the undirected projection of
//! the blogroll digraph.

use std::collections::{HashMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::model::{BlogrollGraph, UserId};
use crate::records::round6;

/// Undirected projection with dense node positions in ascending id order.
#[derive(Debug, Clone)]
pub struct UndirectedView {
    pub nodes: Vec<UserId>,
    pub adjacency: Vec<Vec<usize>>,
    position: HashMap<UserId, usize>,
}

impl UndirectedView {
    pub fn new(g: &BlogrollGraph) -> Self {
        let nodes: Vec<UserId> = g.nodes.iter().copied().collect();
        let position: HashMap<UserId, usize> =
            nodes.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for &(s, t) in &g.edges {
            let (a, b) = (position[&s], position[&t]);
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
            adj.dedup();
        }
        UndirectedView {
            nodes,
            adjacency,
            position,
        }
    }

    pub fn position(&self, u: UserId) -> Option<usize> {
        self.position.get(&u).copied()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    /// Hop distances from `source`; `usize::MAX` marks unreachable nodes.
    pub fn bfs(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.nodes.len()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }
}

/// Connected components of the undirected projection. Each component is
/// sorted, and components are ordered by their smallest member, which is
/// also their id.
pub fn weak_components(g: &BlogrollGraph) -> Vec<Vec<UserId>> {
    weak_components_of(&UndirectedView::new(g))
}

fn weak_components_of(view: &UndirectedView) -> Vec<Vec<UserId>> {
    let n = view.nodes.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut members = vec![start];
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &v in &view.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    members.push(v);
                    stack.push(v);
                }
            }
        }
        members.sort_unstable();
        out.push(members.into_iter().map(|i| view.nodes[i]).collect());
    }
    out
}

/// Unordered pairs `{u, v}` linked in both directions.
pub fn reciprocal_pairs(g: &BlogrollGraph) -> usize {
    g.edges
        .iter()
        .filter(|&&(s, t)| s < t && g.has_edge(t, s))
        .count()
}

fn local_clustering(view: &UndirectedView, i: usize) -> f64 {
    let neigh = &view.adjacency[i];
    let d = neigh.len();
    if d < 2 {
        return 0.0;
    }
    let set: HashSet<usize> = neigh.iter().copied().collect();
    let links: usize = neigh
        .iter()
        .map(|&a| {
            view.adjacency[a]
                .iter()
                .filter(|&&b| b > a && set.contains(&b))
                .count()
        })
        .sum();
    links as f64 / (d * (d - 1) / 2) as f64
}

/// Mean local clustering coefficient over the nodes of `component`, summed
/// in ascending id order. Nodes of undirected degree below 2 count as 0.
pub fn clustering_coefficient(g: &BlogrollGraph, component: &[UserId]) -> f64 {
    clustering_of(&UndirectedView::new(g), component)
}

fn sorted_positions(view: &UndirectedView, component: &[UserId]) -> Vec<usize> {
    let mut pos: Vec<usize> = component.iter().filter_map(|&u| view.position(u)).collect();
    pos.sort_unstable();
    pos.dedup();
    pos
}

fn clustering_of(view: &UndirectedView, component: &[UserId]) -> f64 {
    let pos = sorted_positions(view, component);
    if pos.is_empty() {
        return 0.0;
    }
    let sum: f64 = pos.iter().map(|&i| local_clustering(view, i)).sum();
    sum / pos.len() as f64
}

/// Minimum and maximum, over the nodes of `component`, of a node's mean
/// hop distance to every other node of the component. `(0, 0)` for
/// components with fewer than two nodes.
pub fn distance_profile(g: &BlogrollGraph, component: &[UserId]) -> (f64, f64) {
    distance_profile_of(&UndirectedView::new(g), component)
}

fn distance_profile_of(view: &UndirectedView, component: &[UserId]) -> (f64, f64) {
    let pos = sorted_positions(view, component);
    if pos.len() < 2 {
        return (0.0, 0.0);
    }
    let means: Vec<f64> = pos
        .par_iter()
        .map(|&src| {
            let dist = view.bfs(src);
            let (total, reached) = pos
                .iter()
                .filter(|&&j| j != src && dist[j] != usize::MAX)
                .fold((0usize, 0usize), |(t, r), &j| (t + dist[j], r + 1));
            if reached == 0 {
                0.0
            } else {
                total as f64 / reached as f64
            }
        })
        .collect();
    let min = means.iter().copied().fold(f64::INFINITY, f64::min);
    let max = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (min, max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentReport {
    /// Smallest user handle in the component.
    pub id: UserId,
    pub nodes: usize,
    pub edges: usize,
    #[serde(serialize_with = "round6")]
    pub clustering_coefficient: f64,
    #[serde(serialize_with = "round6")]
    pub shortest_avg_distance: f64,
    #[serde(serialize_with = "round6")]
    pub longest_avg_distance: f64,
    pub reciprocal_pairs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphSummary {
    pub nodes: usize,
    pub edges: usize,
    pub weak_components: usize,
    #[serde(serialize_with = "round6")]
    pub avg_component_size: f64,
    pub max_component_size: usize,
    pub min_component_size: usize,
    pub reciprocal_pairs: usize,
    /// Directed edges whose reverse edge also exists (twice the pairs).
    pub reciprocal_directed_edges: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphReport {
    pub summary: GraphSummary,
    /// Largest components first, ties by id.
    pub components: Vec<ComponentReport>,
}

fn component_report(
    g: &BlogrollGraph,
    view: &UndirectedView,
    members: &[UserId],
) -> ComponentReport {
    let set: HashSet<UserId> = members.iter().copied().collect();
    let edges = g.edges.iter().filter(|(s, _)| set.contains(s)).count();
    let reciprocal = g
        .edges
        .iter()
        .filter(|&&(s, t)| s < t && set.contains(&s) && g.has_edge(t, s))
        .count();
    let (shortest, longest) = distance_profile_of(view, members);
    ComponentReport {
        id: members[0],
        nodes: members.len(),
        edges,
        clustering_coefficient: clustering_of(view, members),
        shortest_avg_distance: shortest,
        longest_avg_distance: longest,
        reciprocal_pairs: reciprocal,
    }
}

pub fn summary(g: &BlogrollGraph) -> GraphSummary {
    let comps = weak_components(g);
    summary_of(g, &comps)
}

fn summary_of(g: &BlogrollGraph, comps: &[Vec<UserId>]) -> GraphSummary {
    let sizes: Vec<usize> = comps.iter().map(Vec::len).collect();
    let pairs = reciprocal_pairs(g);
    GraphSummary {
        nodes: g.node_count(),
        edges: g.edge_count(),
        weak_components: comps.len(),
        avg_component_size: if sizes.is_empty() {
            0.0
        } else {
            sizes.iter().sum::<usize>() as f64 / sizes.len() as f64
        },
        max_component_size: sizes.iter().copied().max().unwrap_or(0),
        min_component_size: sizes.iter().copied().min().unwrap_or(0),
        reciprocal_pairs: pairs,
        reciprocal_directed_edges: 2 * pairs,
    }
}

/// Summary plus detailed reports for the `top` largest components.
pub fn graph_report(g: &BlogrollGraph, top: usize) -> GraphReport {
    let view = UndirectedView::new(g);
    let comps = weak_components_of(&view);
    let mut order: Vec<&Vec<UserId>> = comps.iter().collect();
    order.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    GraphReport {
        summary: summary_of(g, &comps),
        components: order
            .into_iter()
            .take(top)
            .map(|c| component_report(g, &view, c))
            .collect(),
    }
}
