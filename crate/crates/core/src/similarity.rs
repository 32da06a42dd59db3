//! Cosine similarity between binary profiles, the all-pairs similarity
//! matrix, and top-k optimal blogrolls.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::UserId;
use crate::profiles::{ProfileMatrix, UserProfile};
use crate::records::{fixed6, MemberRecord, NeighborRecord};

/// Cosine of two binary vectors given their overlap and sizes.
///
/// Every similarity in this crate goes through this function so that the
/// sparse and brute-force paths agree bit for bit.
#[inline]
pub fn binary_cosine(intersection: usize, len_a: usize, len_b: usize) -> f64 {
    if len_a == 0 || len_b == 0 {
        return 0.0;
    }
    intersection as f64 / ((len_a as u64 * len_b as u64) as f64).sqrt()
}

fn intersection_size(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// `|u ∩ v| / sqrt(|u|·|v|)`; zero when either profile is empty.
pub fn cosine(u: &UserProfile, v: &UserProfile) -> Result<f64> {
    if u.kind != v.kind || u.dim != v.dim {
        return Err(Error::VocabularyMismatch {
            left: format!("{} over {} items", u.kind, u.dim),
            right: format!("{} over {} items", v.kind, v.dim),
        });
    }
    Ok(binary_cosine(
        intersection_size(&u.indices, &v.indices),
        u.len(),
        v.len(),
    ))
}

/// Symmetric user-user similarity matrix holding only nonzero off-diagonal
/// entries. Rows and columns are positions in the profile matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    pub users: Vec<UserId>,
    pub user_labels: Vec<String>,
    rows: Vec<Vec<(u32, f64)>>,
    position: HashMap<UserId, usize>,
}

impl SimilarityMatrix {
    /// Builds a matrix from full rows (each sorted by column, both triangles
    /// present).
    pub fn from_rows(
        users: Vec<UserId>,
        user_labels: Vec<String>,
        rows: Vec<Vec<(u32, f64)>>,
    ) -> Self {
        let position = users.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        SimilarityMatrix {
            users,
            user_labels,
            rows,
            position,
        }
    }

    pub fn len(&self) -> usize {
        self.users.len()
    }

    pub fn is_empty(&self) -> bool {
        self.users.is_empty()
    }

    pub fn position(&self, user: UserId) -> Option<usize> {
        self.position.get(&user).copied()
    }

    /// Nonzero entries of row `i`, ascending by column.
    pub fn row(&self, i: usize) -> &[(u32, f64)] {
        &self.rows[i]
    }

    /// `S[i][j]` by position; zero when absent.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let row = &self.rows[i];
        match row.binary_search_by_key(&(j as u32), |&(c, _)| c) {
            Ok(k) => row[k].1,
            Err(_) => 0.0,
        }
    }

    /// `S[u][v]` by user handle; zero for unknown users.
    pub fn score(&self, u: UserId, v: UserId) -> f64 {
        match (self.position(u), self.position(v)) {
            (Some(i), Some(j)) => self.get(i, j),
            _ => 0.0,
        }
    }

    /// Number of unordered user pairs with nonzero similarity.
    pub fn nonzero_pairs(&self) -> usize {
        self.rows.iter().map(Vec::len).sum::<usize>() / 2
    }
}

fn posting_lists(m: &ProfileMatrix) -> Vec<Vec<u32>> {
    let mut postings = vec![Vec::new(); m.vocabulary.len()];
    for (pos, p) in m.profiles.iter().enumerate() {
        for &i in &p.indices {
            postings[i as usize].push(pos as u32);
        }
    }
    postings
}

fn compute_rows(m: &ProfileMatrix) -> Vec<Vec<(u32, f64)>> {
    let n = m.profiles.len();
    let postings = posting_lists(m);
    (0..n)
        .into_par_iter()
        .map_init(
            || (vec![0u32; n], Vec::<u32>::new()),
            |(counts, touched), u| {
                let pu = &m.profiles[u];
                for &item in &pu.indices {
                    for &v in &postings[item as usize] {
                        if v as usize == u {
                            continue;
                        }
                        if counts[v as usize] == 0 {
                            touched.push(v);
                        }
                        counts[v as usize] += 1;
                    }
                }
                touched.sort_unstable();
                let row = touched
                    .iter()
                    .map(|&v| {
                        let inter = counts[v as usize] as usize;
                        counts[v as usize] = 0;
                        (
                            v,
                            binary_cosine(inter, pu.len(), m.profiles[v as usize].len()),
                        )
                    })
                    .collect();
                touched.clear();
                row
            },
        )
        .collect()
}

/// Exact pairwise cosines through an inverted index over vocabulary items;
/// only pairs sharing at least one item get an entry. Runs on the global
/// thread pool.
pub fn similarity_matrix(m: &ProfileMatrix) -> SimilarityMatrix {
    SimilarityMatrix::from_rows(m.users.clone(), m.user_labels.clone(), compute_rows(m))
}

/// [`similarity_matrix`] on a dedicated pool of `workers` threads. The
/// result does not depend on `workers`.
pub fn similarity_matrix_with_workers(
    m: &ProfileMatrix,
    workers: usize,
) -> Result<SimilarityMatrix> {
    if workers == 0 {
        return Err(Error::InvalidConfig {
            field: "workers",
            message: "must be at least 1".into(),
        });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidConfig {
            field: "workers",
            message: e.to_string(),
        })?;
    Ok(pool.install(|| similarity_matrix(m)))
}

/// Optimal blogroll of one user: up to k most similar peers.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborSet {
    pub owner: UserId,
    /// Descending score, ties by ascending user handle. Scores are > 0.
    pub members: Vec<(UserId, f64)>,
}

impl NeighborSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, user: UserId) -> bool {
        self.members.iter().any(|&(u, _)| u == user)
    }

    pub fn mean_score(&self) -> Option<f64> {
        if self.members.is_empty() {
            None
        } else {
            Some(self.members.iter().map(|&(_, s)| s).sum::<f64>() / self.members.len() as f64)
        }
    }
}

/// For every user, the k peers with the highest similarity. Users with
/// zero similarity are never included, so a set may hold fewer than k
/// members.
pub fn optimal_blogrolls(s: &SimilarityMatrix, k: usize) -> Result<Vec<NeighborSet>> {
    if k == 0 {
        return Err(Error::InvalidConfig {
            field: "k",
            message: "must be at least 1".into(),
        });
    }
    Ok((0..s.len())
        .into_par_iter()
        .map(|i| {
            let mut members: Vec<(UserId, f64)> = s
                .row(i)
                .iter()
                .filter(|&&(_, score)| score > 0.0)
                .map(|&(j, score)| (s.users[j as usize], score))
                .collect();
            let order =
                |a: &(UserId, f64), b: &(UserId, f64)| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0));
            if members.len() > k {
                members.select_nth_unstable_by(k - 1, order);
                members.truncate(k);
            }
            members.sort_unstable_by(order);
            NeighborSet {
                owner: s.users[i],
                members,
            }
        })
        .collect())
}

pub fn neighbor_records(s: &SimilarityMatrix, sets: &[NeighborSet]) -> Vec<NeighborRecord> {
    let label = |u: UserId| s.user_labels[s.position(u).expect("member of matrix")].clone();
    sets.iter()
        .map(|n| NeighborRecord {
            user: label(n.owner),
            members: n
                .members
                .iter()
                .map(|&(u, score)| MemberRecord {
                    label: label(u),
                    score,
                })
                .collect(),
        })
        .collect()
}

/// Maps exported neighbor records back onto `s`, taking scores from the
/// matrix. Fails when a record disagrees with the matrix.
pub fn neighbors_from_records(
    s: &SimilarityMatrix,
    records: &[NeighborRecord],
) -> Result<Vec<NeighborSet>> {
    let by_label: HashMap<&str, usize> = s
        .user_labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let lookup = |l: &str| {
        by_label
            .get(l)
            .copied()
            .ok_or_else(|| Error::Inconsistent(format!("unknown user {l:?} in neighbor sets")))
    };
    let mut sets = Vec::with_capacity(records.len());
    for r in records {
        let i = lookup(&r.user)?;
        let mut members = Vec::with_capacity(r.members.len());
        for m in &r.members {
            let j = lookup(&m.label)?;
            let score = s.get(i, j);
            if score <= 0.0 || (fixed6(score) - m.score).abs() > 1e-6 {
                return Err(Error::Inconsistent(format!(
                    "neighbor {:?} of {:?} has score {} but the profiles give {}",
                    m.label, r.user, m.score, score
                )));
            }
            members.push((s.users[j], score));
        }
        sets.push(NeighborSet {
            owner: s.users[i],
            members,
        });
    }
    if sets.len() != s.len() {
        return Err(Error::PopulationMismatch(format!(
            "{} neighbor sets for {} users",
            sets.len(),
            s.len()
        )));
    }
    Ok(sets)
}
