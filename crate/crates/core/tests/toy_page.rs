//! The eight-post toy page checked against hand-countable oracles.

use std::collections::BTreeSet;

use usmc::fixture::{toy_page, toy_random_draw, TOY_BUDGET};
use usmc::metrics::coverage_at;
use usmc::network::{build_bipartite, build_bipartite_all, layered_recall, project_layered};
use usmc::strategies::{plan_page, take_budget};
use usmc::{InteractionDef, Page, PostId, Strategy};

fn ids(xs: &[u64]) -> Vec<PostId> {
    xs.iter().map(|&x| PostId(x)).collect()
}

/// Users and per-layer co-interaction pairs counted directly from the posts.
fn layered_oracle(page: &Page, subset: &[PostId]) -> (usize, usize) {
    let mut users = BTreeSet::new();
    let mut like_pairs = BTreeSet::new();
    let mut comment_pairs = BTreeSet::new();
    for p in page.posts.iter().filter(|p| subset.contains(&p.id)) {
        let likers: BTreeSet<_> = p.likers.iter().copied().collect();
        let commenters: BTreeSet<_> = p.comments.iter().map(|c| c.author).collect();
        users.extend(likers.iter().copied());
        users.extend(commenters.iter().copied());
        for &a in &likers {
            for &b in &likers {
                if a < b {
                    like_pairs.insert((a, b));
                }
            }
        }
        for &a in &commenters {
            for &b in &commenters {
                if a < b {
                    comment_pairs.insert((a, b));
                }
            }
        }
    }
    (users.len(), like_pairs.len() + comment_pairs.len())
}

#[test]
fn budget_buys_three_posts() {
    let page = toy_page();
    let plan = take_budget(&plan_page(&page, Strategy::ByLikes).unwrap(), TOY_BUDGET);
    assert_eq!(plan.posts, ids(&[6, 1, 7]));
    let chrono = take_budget(&plan_page(&page, Strategy::Chronological).unwrap(), TOY_BUDGET);
    assert_eq!(chrono.posts, ids(&[1, 2, 3]));
}

#[test]
fn coverage_matches_hand_counts() {
    let page = toy_page();
    let def = InteractionDef::LikesAndComments;
    assert_eq!(page.total_interactions(def), 56);
    let cov = |plan| coverage_at::<f64>(&page, &plan, def).unwrap();
    let likes = take_budget(&plan_page(&page, Strategy::ByLikes).unwrap(), TOY_BUDGET);
    let chrono = take_budget(&plan_page(&page, Strategy::Chronological).unwrap(), TOY_BUDGET);
    assert_eq!(cov(likes), 43.0 / 56.0);
    assert_eq!(cov(chrono), 18.0 / 56.0);
    assert_eq!(cov(toy_random_draw()), 15.0 / 56.0);
}

#[test]
fn layered_recall_matches_pair_oracle() {
    let page = toy_page();
    let all: Vec<PostId> = page.posts.iter().map(|p| p.id).collect();
    let (n_full, e_full) = layered_oracle(&page, &all);
    assert_eq!((n_full, e_full), (6, 18));
    let full = project_layered(&build_bipartite_all(&page), Default::default()).unwrap();
    for (subset, expect) in [
        (ids(&[6, 1, 7]), (6, 17)),
        (ids(&[1, 2, 3]), (4, 5)),
        (toy_random_draw().posts, (3, 4)),
    ] {
        assert_eq!(layered_oracle(&page, &subset), expect);
        let sample = project_layered(&build_bipartite(&page, &subset).unwrap(), Default::default()).unwrap();
        let (nodes, edges) = layered_recall::<f64>(&sample, &full).unwrap();
        assert_eq!(nodes, expect.0 as f64 / 6.0);
        assert_eq!(edges, expect.1 as f64 / 18.0);
    }
}
