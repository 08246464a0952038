#![allow(dead_code)]

use proptest::prelude::*;
use usmc::{Comment, Page, PageId, Post, PostId, UserId};

/// Small arbitrary pages: up to `max_posts` posts, users drawn from `1..=users`.
pub fn arb_page(max_posts: usize, users: u64) -> impl Strategy<Value = Page> {
    let comment = (1..=users, 0i64..1000, prop::collection::btree_set(1..=users, 0..3));
    let post = (
        0i64..10_000,
        prop::collection::btree_set(1..=users, 0..8),
        prop::collection::vec(comment, 0..8),
    );
    prop::collection::vec(post, 1..=max_posts).prop_map(|posts| {
        let posts = posts
            .into_iter()
            .enumerate()
            .map(|(i, (created, likers, mut comments))| {
                comments.sort_by_key(|c| c.1);
                Post {
                    id: PostId(i as u64 + 1),
                    created_at: created,
                    likers: likers.into_iter().map(UserId).collect(),
                    comments: comments
                        .into_iter()
                        .map(|(a, t, l)| Comment {
                            author: UserId(a),
                            created_at: created + t,
                            likers: l.into_iter().map(UserId).collect(),
                        })
                        .collect(),
                }
            })
            .collect();
        Page {
            id: PageId(1),
            snapshot_time: 20_000,
            posts,
        }
    })
}

pub fn small_params(pages: usize) -> usmc::corpus::GenParams {
    usmc::corpus::GenParams {
        pages,
        posts_per_page: usmc::corpus::CountDist::LogNormal { mu: 2.5, sigma: 0.8 },
        min_posts: 3,
        max_posts: 40,
        user_pool: 300,
        ..Default::default()
    }
}
