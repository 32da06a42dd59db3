//! How well explicit blogrolls are explained by profile similarity:
//! average similarity of explicit vs. optimal blogrolls, their overlap,
//! similarity histograms, and agreement between track- and tag-based
//! optimal blogrolls.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{BlogrollGraph, UserId};
use crate::records::{round6, round6_opt};
use crate::similarity::{NeighborSet, SimilarityMatrix};

/// Mean similarity between `user` and the members of its blogroll, or
/// `None` for an empty blogroll.
pub fn avg_blogroll_similarity(
    user: UserId,
    roll: &BTreeSet<UserId>,
    s: &SimilarityMatrix,
) -> Result<Option<f64>> {
    if roll.contains(&user) {
        return Err(Error::SelfInBlogroll { user: user.index() });
    }
    if roll.is_empty() {
        return Ok(None);
    }
    let sum: f64 = roll.iter().map(|&v| s.score(user, v)).sum();
    Ok(Some(sum / roll.len() as f64))
}

fn mean(xs: impl IntoIterator<Item = f64>) -> Option<f64> {
    let (mut sum, mut n) = (0.0, 0usize);
    for x in xs {
        sum += x;
        n += 1;
    }
    (n > 0).then(|| sum / n as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UserQuality {
    pub user: UserId,
    pub explicit_size: usize,
    pub optimal_size: usize,
    pub explicit_avg: Option<f64>,
    pub optimal_avg: Option<f64>,
    pub overlap: usize,
}

/// Population-level comparison of explicit (B) and optimal (B*) blogrolls.
///
/// `avg_sim_explicit` averages over users with a nonempty explicit
/// blogroll, `avg_sim_optimal` over users with a nonempty optimal one.
/// `avg_overlap` is the mean `|B ∩ B*|` over users where it is nonempty,
/// and `overlap_probability` is the share of users with a nonempty explicit
/// blogroll for which it is nonempty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlogrollQualityReport {
    pub users: usize,
    pub users_with_blogroll: usize,
    pub users_with_optimal: usize,
    #[serde(serialize_with = "round6_opt")]
    pub avg_sim_explicit: Option<f64>,
    #[serde(serialize_with = "round6_opt")]
    pub avg_sim_optimal: Option<f64>,
    #[serde(serialize_with = "round6_opt")]
    pub improvement_percent: Option<f64>,
    #[serde(serialize_with = "round6_opt")]
    pub avg_overlap: Option<f64>,
    #[serde(serialize_with = "round6_opt")]
    pub overlap_probability: Option<f64>,
    pub overlap_users: usize,
    pub overlap_denominator: &'static str,
    #[serde(skip)]
    pub per_user: Vec<UserQuality>,
}

impl BlogrollQualityReport {
    /// Per-user explicit-blogroll averages, for users that have one.
    pub fn explicit_scores(&self) -> Vec<f64> {
        self.per_user
            .iter()
            .filter_map(|q| q.explicit_avg)
            .collect()
    }

    /// Per-user optimal-blogroll averages, for users that have one.
    pub fn optimal_scores(&self) -> Vec<f64> {
        self.per_user.iter().filter_map(|q| q.optimal_avg).collect()
    }
}

pub fn improvement_percent(explicit: f64, optimal: f64) -> Option<f64> {
    (explicit > 0.0).then(|| (optimal - explicit) / explicit * 100.0)
}

pub fn quality_report(
    blogroll: &BlogrollGraph,
    optimal: &[NeighborSet],
    s: &SimilarityMatrix,
) -> Result<BlogrollQualityReport> {
    let by_owner: HashMap<UserId, &NeighborSet> = optimal.iter().map(|n| (n.owner, n)).collect();
    if by_owner.len() != s.len() || s.users.iter().any(|u| !by_owner.contains_key(u)) {
        return Err(Error::PopulationMismatch(format!(
            "{} optimal blogrolls for {} users",
            optimal.len(),
            s.len()
        )));
    }
    let rolls = blogroll.out_neighbors();
    let empty = BTreeSet::new();
    let mut per_user = Vec::with_capacity(s.len());
    for &u in &s.users {
        let roll = rolls.get(&u).unwrap_or(&empty);
        let opt = by_owner[&u];
        per_user.push(UserQuality {
            user: u,
            explicit_size: roll.len(),
            optimal_size: opt.len(),
            explicit_avg: avg_blogroll_similarity(u, roll, s)?,
            optimal_avg: opt.mean_score(),
            overlap: opt.members.iter().filter(|(v, _)| roll.contains(v)).count(),
        });
    }

    let avg_sim_explicit = mean(per_user.iter().filter_map(|q| q.explicit_avg));
    let avg_sim_optimal = mean(per_user.iter().filter_map(|q| q.optimal_avg));
    let users_with_blogroll = per_user.iter().filter(|q| q.explicit_size > 0).count();
    let overlapping: Vec<usize> = per_user
        .iter()
        .filter(|q| q.overlap > 0)
        .map(|q| q.overlap)
        .collect();
    Ok(BlogrollQualityReport {
        users: per_user.len(),
        users_with_blogroll,
        users_with_optimal: per_user.iter().filter(|q| q.optimal_size > 0).count(),
        avg_sim_explicit,
        avg_sim_optimal,
        improvement_percent: match (avg_sim_explicit, avg_sim_optimal) {
            (Some(b), Some(bs)) => improvement_percent(b, bs),
            _ => None,
        },
        avg_overlap: mean(overlapping.iter().map(|&x| x as f64)),
        overlap_probability: (users_with_blogroll > 0)
            .then(|| overlapping.len() as f64 / users_with_blogroll as f64),
        overlap_users: overlapping.len(),
        overlap_denominator: "users_with_blogroll",
        per_user,
    })
}

/// Frequencies of scores over equal-width bins of `[0, 1]`; the last bin
/// is closed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    #[serde(serialize_with = "round6")]
    pub width: f64,
    pub counts: Vec<u64>,
    pub cumulative: Vec<u64>,
    pub total: u64,
}

/// Number of bins for `width`, which must divide 1 evenly.
pub fn bin_count(width: f64) -> Result<usize> {
    let bad = |m: &str| Error::InvalidConfig {
        field: "bin-width",
        message: format!("{width}: {m}"),
    };
    if !(width > 0.0 && width <= 1.0) {
        return Err(bad("must lie in (0, 1]"));
    }
    let n = (1.0 / width).round();
    if (n * width - 1.0).abs() > 1e-9 {
        return Err(bad("1/width must be an integer"));
    }
    Ok(n as usize)
}

impl Histogram {
    pub fn build(scores: &[f64], width: f64) -> Result<Self> {
        let bins = bin_count(width)?;
        let mut counts = vec![0u64; bins];
        for &x in scores {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::ScoreOutOfRange(x));
            }
            // x * bins rather than x / width: 0.3 * 10 lands in bin 3,
            // 0.3 / 0.1 would not.
            let b = ((x * bins as f64).floor() as usize).min(bins - 1);
            counts[b] += 1;
        }
        let cumulative = counts
            .iter()
            .scan(0u64, |acc, &c| {
                *acc += c;
                Some(*acc)
            })
            .collect();
        Ok(Histogram {
            width,
            counts,
            cumulative,
            total: scores.len() as u64,
        })
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn bin_start(&self, i: usize) -> f64 {
        i as f64 / self.bins() as f64
    }

    /// Share of scores in the bins starting at 0.5 or above.
    pub fn fraction_over_half(&self) -> Option<f64> {
        if self.total == 0 {
            return None;
        }
        let first = (self.bins() as f64 * 0.5).ceil() as usize;
        let n: u64 = self.counts[first..].iter().sum();
        Some(n as f64 / self.total as f64)
    }
}

/// Histograms of per-user explicit and optimal blogroll similarity.
pub fn similarity_histograms(
    explicit: &[f64],
    optimal: &[f64],
    width: f64,
) -> Result<(Histogram, Histogram)> {
    Ok((
        Histogram::build(explicit, width)?,
        Histogram::build(optimal, width)?,
    ))
}

/// Delimited table of a histogram pair, one row per bin.
pub fn histogram_table(explicit: &Histogram, optimal: &Histogram) -> String {
    let mut out =
        String::from("bin_start,bin_end,explicit,explicit_cumulative,optimal,optimal_cumulative\n");
    for i in 0..explicit.bins() {
        let _ = writeln!(
            out,
            "{:.6},{:.6},{},{},{},{}",
            explicit.bin_start(i),
            explicit.bin_start(i + 1),
            explicit.counts[i],
            explicit.cumulative[i],
            optimal.counts[i],
            optimal.cumulative[i]
        );
    }
    out
}

/// Distribution of `|B*_a ∩ B*_b|` over users.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntersectionDistribution {
    /// `counts[s]` = number of users whose two sets share `s` members.
    pub counts: Vec<u64>,
    pub users: usize,
    #[serde(serialize_with = "round6")]
    pub agreement: f64,
    #[serde(serialize_with = "round6_opt")]
    pub mean_over_agreeing: Option<f64>,
}

pub fn blogroll_agreement(
    a: &[NeighborSet],
    b: &[NeighborSet],
) -> Result<IntersectionDistribution> {
    let b_by: HashMap<UserId, &NeighborSet> = b.iter().map(|n| (n.owner, n)).collect();
    if a.len() != b.len() || b_by.len() != b.len() {
        return Err(Error::PopulationMismatch(format!(
            "{} vs {} neighbor sets",
            a.len(),
            b.len()
        )));
    }
    let max = a.iter().chain(b).map(NeighborSet::len).max().unwrap_or(0);
    let mut counts = vec![0u64; max + 1];
    let mut agreeing = Vec::new();
    for na in a {
        let nb = b_by.get(&na.owner).ok_or_else(|| {
            Error::PopulationMismatch(format!("user {} missing from second population", na.owner))
        })?;
        let shared = na.members.iter().filter(|(u, _)| nb.contains(*u)).count();
        counts[shared] += 1;
        if shared > 0 {
            agreeing.push(shared as f64);
        }
    }
    let users = a.len();
    Ok(IntersectionDistribution {
        counts,
        users,
        agreement: if users == 0 {
            0.0
        } else {
            agreeing.len() as f64 / users as f64
        },
        mean_over_agreeing: mean(agreeing),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramPair {
    pub explicit: Histogram,
    pub optimal: Histogram,
    #[serde(serialize_with = "round6_opt")]
    pub explicit_fraction_over_half: Option<f64>,
    #[serde(serialize_with = "round6_opt")]
    pub optimal_fraction_over_half: Option<f64>,
}

impl HistogramPair {
    pub fn for_report(r: &BlogrollQualityReport, width: f64) -> Result<Self> {
        let (explicit, optimal) =
            similarity_histograms(&r.explicit_scores(), &r.optimal_scores(), width)?;
        Ok(HistogramPair {
            explicit_fraction_over_half: explicit.fraction_over_half(),
            optimal_fraction_over_half: optimal.fraction_over_half(),
            explicit,
            optimal,
        })
    }
}

/// The metrics document written by the evaluate stage.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub k: usize,
    #[serde(serialize_with = "round6")]
    pub bin_width: f64,
    pub track: BlogrollQualityReport,
    pub tag: BlogrollQualityReport,
    pub optimal_agreement: IntersectionDistribution,
    pub track_histograms: HistogramPair,
    pub tag_histograms: HistogramPair,
}

/// Values measured on the original crawl of 976 music bloggers. The
/// dataset is not distributed; these are for comparison only.
pub mod reference {
    pub const TRACK_AVG_SIM_EXPLICIT: f64 = 0.295;
    pub const TRACK_AVG_SIM_OPTIMAL: f64 = 0.547;
    pub const TRACK_IMPROVEMENT_PERCENT: f64 = 85.0;
    pub const TRACK_AVG_OVERLAP: f64 = 1.48;
    pub const TRACK_OVERLAP_PROBABILITY: f64 = 0.085;
    pub const TAG_AVG_SIM_EXPLICIT: f64 = 0.293;
    pub const TAG_AVG_SIM_OPTIMAL: f64 = 0.645;
    pub const TAG_IMPROVEMENT_PERCENT: f64 = 120.0;
    pub const TAG_AVG_OVERLAP: f64 = 1.37;
    pub const TAG_OVERLAP_PROBABILITY: f64 = 0.081;
    pub const OPTIMAL_AGREEMENT: f64 = 0.7766;
    pub const OPTIMAL_AGREEMENT_MEAN: f64 = 4.64;
    pub const TRACK_OPTIMAL_OVER_HALF: f64 = 0.4927;
    pub const TAG_OPTIMAL_OVER_HALF: f64 = 0.6432;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::similarity::SimilarityMatrix;

    fn ids(xs: &[u32]) -> BTreeSet<UserId> {
        xs.iter().map(|&x| UserId(x)).collect()
    }

    /// Matrix over users 0..n from a list of (i, j, score) upper-triangle entries.
    fn matrix(n: usize, entries: &[(u32, u32, f64)]) -> SimilarityMatrix {
        let mut rows = vec![Vec::new(); n];
        for &(i, j, x) in entries {
            rows[i as usize].push((j, x));
            rows[j as usize].push((i, x));
        }
        for r in &mut rows {
            r.sort_by_key(|e| e.0);
        }
        SimilarityMatrix::from_rows(
            (0..n).map(UserId::from).collect(),
            (0..n).map(|i| format!("u{i}")).collect(),
            rows,
        )
    }

    #[test]
    fn avg_similarity_examples() {
        let s = matrix(3, &[(0, 1, 0.4), (0, 2, 0.6)]);
        assert_eq!(
            avg_blogroll_similarity(UserId(0), &ids(&[1, 2]), &s).unwrap(),
            Some(0.5)
        );
        assert_eq!(
            avg_blogroll_similarity(UserId(0), &ids(&[]), &s).unwrap(),
            None
        );
        assert_eq!(
            avg_blogroll_similarity(UserId(1), &ids(&[2]), &s).unwrap(),
            Some(0.0)
        );
        assert!(avg_blogroll_similarity(UserId(0), &ids(&[0]), &s).is_err());
    }

    #[test]
    fn histogram_bins() {
        let h = Histogram::build(&[0.05, 0.15, 0.95], 0.1).unwrap();
        assert_eq!(h.counts, [1, 1, 0, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(h.cumulative.last(), Some(&3));
        let h = Histogram::build(&[1.0, 0.3, 0.7], 0.1).unwrap();
        assert_eq!(h.counts[9], 1);
        assert_eq!(h.counts[3], 1);
        assert_eq!(h.counts[7], 1);
    }

    #[test]
    fn empty_histogram() {
        let h = Histogram::build(&[], 0.1).unwrap();
        assert_eq!(h.counts, vec![0; 10]);
        assert_eq!(h.total, 0);
        assert_eq!(h.fraction_over_half(), None);
    }

    #[test]
    fn histogram_rejects_bad_input() {
        assert!(matches!(
            Histogram::build(&[1.2], 0.1),
            Err(Error::ScoreOutOfRange(_))
        ));
        assert!(Histogram::build(&[-0.1], 0.1).is_err());
        assert!(Histogram::build(&[f64::NAN], 0.1).is_err());
        assert!(Histogram::build(&[0.5], 0.3).is_err());
        assert!(Histogram::build(&[0.5], 0.0).is_err());
        assert_eq!(Histogram::build(&[0.5], 0.25).unwrap().bins(), 4);
    }

    #[test]
    fn fraction_over_half_counts_upper_bins() {
        let h = Histogram::build(&[0.1, 0.5, 0.55, 0.49, 1.0], 0.1).unwrap();
        assert_eq!(h.fraction_over_half(), Some(0.6));
    }

    fn sets(v: &[(u32, &[u32])]) -> Vec<NeighborSet> {
        v.iter()
            .map(|(o, m)| NeighborSet {
                owner: UserId(*o),
                members: m.iter().map(|&x| (UserId(x), 0.5)).collect(),
            })
            .collect()
    }

    #[test]
    fn identical_optimal_sets_agree_fully() {
        let members: Vec<u32> = (10..20).collect();
        let a = sets(&[(0, &members), (1, &members)]);
        let d = blogroll_agreement(&a, &a).unwrap();
        assert_eq!(d.agreement, 1.0);
        assert_eq!(d.mean_over_agreeing, Some(10.0));
        assert_eq!(d.counts[10], 2);
    }

    #[test]
    fn disjoint_sets_never_agree() {
        let a = sets(&[(0, &[1, 2]), (1, &[0])]);
        let b = sets(&[(0, &[3]), (1, &[2])]);
        let d = blogroll_agreement(&a, &b).unwrap();
        assert_eq!(d.agreement, 0.0);
        assert_eq!(d.mean_over_agreeing, None);
        assert_eq!(d.counts[0], 2);
        assert_eq!(d.counts.iter().sum::<u64>(), 2);
    }

    #[test]
    fn agreement_is_symmetric_and_checks_population() {
        let a = sets(&[(0, &[1, 2, 3]), (1, &[0, 2])]);
        let b = sets(&[(0, &[2, 3]), (1, &[3])]);
        assert_eq!(
            blogroll_agreement(&a, &b).unwrap(),
            blogroll_agreement(&b, &a).unwrap()
        );
        let c = sets(&[(0, &[2, 3]), (5, &[3])]);
        assert!(blogroll_agreement(&a, &c).is_err());
        assert!(blogroll_agreement(&a, &c[..1]).is_err());
    }

    #[test]
    fn identical_blogrolls_show_no_improvement() {
        let s = matrix(4, &[(0, 1, 0.8), (0, 2, 0.4), (1, 2, 0.2), (2, 3, 0.6)]);
        let opt = crate::similarity::optimal_blogrolls(&s, 2).unwrap();
        let g = BlogrollGraph::from_edges(
            opt.iter()
                .flat_map(|n| n.members.iter().map(move |&(v, _)| (n.owner, v))),
        );
        let r = quality_report(&g, &opt, &s).unwrap();
        assert_eq!(r.improvement_percent, Some(0.0));
        assert_eq!(r.overlap_probability, Some(1.0));
        let mean_size = opt.iter().map(|n| n.len() as f64).sum::<f64>() / opt.len() as f64;
        assert_eq!(r.avg_overlap, Some(mean_size));
    }

    #[test]
    fn quality_report_requires_full_population() {
        let s = matrix(2, &[(0, 1, 0.5)]);
        let opt = crate::similarity::optimal_blogrolls(&s, 1).unwrap();
        assert!(quality_report(&BlogrollGraph::new(), &opt[..1], &s).is_err());
    }
}
