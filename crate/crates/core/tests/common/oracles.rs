//! Brute-force reference implementations. They share no code with the
//! library paths they check.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeSet;

use osn_core::model::{BlogrollGraph, PostTuple, TagAssignment, UserId};
use osn_core::profiles::ProfileMatrix;

/// Materializes B × L, keeps equal resources, projects (u_b, t_l, r_b).
pub fn enrich_nested_loop(posts: &[PostTuple], out: &[TagAssignment]) -> BTreeSet<TagAssignment> {
    let mut y = BTreeSet::new();
    for b in posts {
        for l in out {
            if b.resource == l.resource {
                y.insert(TagAssignment::new(b.user, l.tag, b.resource));
            }
        }
    }
    y
}

/// Dense pairwise cosine over materialized {0,1} vectors: overlap count
/// divided by the square root of the product of the sizes.
pub fn cosine_matrix(m: &ProfileMatrix) -> Vec<Vec<f64>> {
    let dense: Vec<Vec<bool>> = m.profiles.iter().map(|p| p.to_dense()).collect();
    let n = dense.len();
    let mut s = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let a = dense[i].iter().filter(|&&x| x).count();
            let b = dense[j].iter().filter(|&&x| x).count();
            let both = dense[i]
                .iter()
                .zip(&dense[j])
                .filter(|(x, y)| **x && **y)
                .count();
            s[i][j] = if a == 0 || b == 0 {
                0.0
            } else {
                both as f64 / ((a * b) as f64).sqrt()
            };
        }
    }
    s
}

/// Sorts every other user by (score desc, index asc), drops zeros, keeps k.
pub fn top_k_by_sorting(s: &[Vec<f64>], k: usize) -> Vec<Vec<(usize, f64)>> {
    (0..s.len())
        .map(|i| {
            let mut all: Vec<(usize, f64)> = (0..s.len())
                .filter(|&j| j != i && s[i][j] > 0.0)
                .map(|j| (j, s[i][j]))
                .collect();
            all.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
            all.truncate(k);
            all
        })
        .collect()
}

pub struct DenseGraph {
    pub nodes: Vec<UserId>,
    pub directed: Vec<Vec<bool>>,
    pub undirected: Vec<Vec<bool>>,
}

impl DenseGraph {
    pub fn new(g: &BlogrollGraph) -> Self {
        let nodes: Vec<UserId> = g.nodes.iter().copied().collect();
        let n = nodes.len();
        let idx = |u: UserId| nodes.iter().position(|&x| x == u).unwrap();
        let mut directed = vec![vec![false; n]; n];
        let mut undirected = vec![vec![false; n]; n];
        for &(s, t) in &g.edges {
            let (a, b) = (idx(s), idx(t));
            directed[a][b] = true;
            undirected[a][b] = true;
            undirected[b][a] = true;
        }
        DenseGraph {
            nodes,
            directed,
            undirected,
        }
    }

    /// All-pairs hop distances (Floyd–Warshall); `None` = unreachable.
    pub fn distances(&self) -> Vec<Vec<Option<usize>>> {
        let n = self.nodes.len();
        let mut d = vec![vec![None; n]; n];
        for i in 0..n {
            d[i][i] = Some(0);
            for j in 0..n {
                if self.undirected[i][j] {
                    d[i][j] = Some(1);
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                        if d[i][j].is_none_or(|c| a + b < c) {
                            d[i][j] = Some(a + b);
                        }
                    }
                }
            }
        }
        d
    }

    /// Components from reachability: node i belongs to the component
    /// labelled by the smallest node reachable from it.
    pub fn components(&self) -> Vec<Vec<UserId>> {
        let d = self.distances();
        let n = self.nodes.len();
        let mut groups: Vec<Vec<UserId>> = Vec::new();
        let mut leader_of = Vec::new();
        for i in 0..n {
            let leader = (0..n).find(|&j| d[i][j].is_some()).unwrap();
            leader_of.push(leader);
        }
        for leader in 0..n {
            let members: Vec<UserId> = (0..n)
                .filter(|&i| leader_of[i] == leader)
                .map(|i| self.nodes[i])
                .collect();
            if !members.is_empty() {
                groups.push(members);
            }
        }
        groups
    }

    pub fn reciprocal_pairs(&self) -> usize {
        let n = self.nodes.len();
        let mut c = 0;
        for a in 0..n {
            for b in a + 1..n {
                if self.directed[a][b] && self.directed[b][a] {
                    c += 1;
                }
            }
        }
        c
    }

    fn index_set(&self, component: &[UserId]) -> Vec<usize> {
        let mut v: Vec<usize> = component
            .iter()
            .map(|u| self.nodes.iter().position(|x| x == u).unwrap())
            .collect();
        v.sort_unstable();
        v
    }

    /// Triple enumeration: for each node, count linked neighbour pairs.
    pub fn clustering(&self, component: &[UserId]) -> f64 {
        let n = self.nodes.len();
        let members = self.index_set(component);
        if members.is_empty() {
            return 0.0;
        }
        let mut sum = 0.0;
        for &i in &members {
            let neigh: Vec<usize> = (0..n).filter(|&j| self.undirected[i][j]).collect();
            let d = neigh.len();
            if d < 2 {
                sum += 0.0;
                continue;
            }
            let mut tri = 0usize;
            for (x, &a) in neigh.iter().enumerate() {
                for &b in &neigh[x + 1..] {
                    if self.undirected[a][b] {
                        tri += 1;
                    }
                }
            }
            sum += tri as f64 / (d * (d - 1) / 2) as f64;
        }
        sum / members.len() as f64
    }

    pub fn distance_profile(&self, component: &[UserId]) -> (f64, f64) {
        let members = self.index_set(component);
        if members.len() < 2 {
            return (0.0, 0.0);
        }
        let d = self.distances();
        let means: Vec<f64> = members
            .iter()
            .map(|&i| {
                let total: usize = members
                    .iter()
                    .filter(|&&j| j != i)
                    .map(|&j| d[i][j].unwrap())
                    .sum();
                total as f64 / (members.len() - 1) as f64
            })
            .collect();
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for m in means {
            min = min.min(m);
            max = max.max(m);
        }
        (min, max)
    }
}
