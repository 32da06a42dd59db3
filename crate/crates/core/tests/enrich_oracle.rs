use std::collections::HashSet;

mod common;
use common::oracles::enrich_nested_loop as nested_loop;

use osn_core::enrich::enrich;
use osn_core::model::{PostTuple, ResourceId, TagAssignment, TagId, UserId};
use proptest::prelude::*;

fn posts_strategy() -> impl Strategy<Value = Vec<PostTuple>> {
    prop::collection::vec((0u32..20, 0u32..30), 0..120).prop_map(|v| {
        v.into_iter()
            .map(|(u, r)| PostTuple::new(UserId(u), ResourceId(r)))
            .collect()
    })
}

fn out_strategy() -> impl Strategy<Value = Vec<TagAssignment>> {
    // out-of-domain users live in 1000.. so they never collide with bloggers
    prop::collection::vec((1000u32..1030, 0u32..15, 0u32..40), 0..200).prop_map(|v| {
        v.into_iter()
            .map(|(u, t, r)| TagAssignment::new(UserId(u), TagId(t), ResourceId(r)))
            .collect()
    })
}

proptest! {
    #[test]
    fn matches_nested_loop(posts in posts_strategy(), out in out_strategy()) {
        let got = enrich(&posts, &out);
        prop_assert_eq!(&got.assignments, &nested_loop(&posts, &out));
    }

    #[test]
    fn independent_of_input_order(posts in posts_strategy(), out in out_strategy()) {
        let mut rp = posts.clone();
        rp.reverse();
        let mut ro = out.clone();
        ro.reverse();
        prop_assert_eq!(enrich(&posts, &out), enrich(&rp, &ro));
    }

    #[test]
    fn adding_a_triple_never_removes_output(
        posts in posts_strategy(),
        out in out_strategy(),
        extra in (1000u32..1030, 0u32..15, 0u32..40),
    ) {
        let before = enrich(&posts, &out).assignments;
        let mut more = out.clone();
        more.push(TagAssignment::new(UserId(extra.0), TagId(extra.1), ResourceId(extra.2)));
        let after = enrich(&posts, &more).assignments;
        prop_assert!(before.is_subset(&after));
    }

    #[test]
    fn output_is_bounded_and_in_domain(posts in posts_strategy(), out in out_strategy()) {
        let y = enrich(&posts, &out).assignments;
        let pairs: HashSet<_> = out.iter().map(|a| (a.tag, a.resource)).collect();
        let bloggers: HashSet<_> = posts.iter().map(|p| p.user).collect();
        prop_assert!(y.len() <= pairs.len() * bloggers.len());
        prop_assert!(y.iter().all(|a| bloggers.contains(&a.user)));
        for a in &y {
            prop_assert!(posts.contains(&PostTuple::new(a.user, a.resource)));
            prop_assert!(out.iter().any(|l| l.tag == a.tag && l.resource == a.resource));
        }
    }
}
