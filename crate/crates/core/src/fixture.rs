//! Eight-post, six-user toy page used as a golden test asset.
//!
//! | post | likers      | commenters (comments) |
//! |------|-------------|-----------------------|
//! | P1   | U3 U4 U5    | U1 U3 (12)            |
//! | P2   |             | U3 U5 (2)             |
//! | P3   | U1          |                       |
//! | P4   | U3          | U5 U6 (2)             |
//! | P5   |             | U2 U3 (2)             |
//! | P6   | U1 U2 U3 U6 | U1 U2 U3 U4 (13)      |
//! | P7   | U2 U3       | U2 U3 U5 (9)          |
//! | P8   | U6          | U1 U2 U3 U4 (4)       |
//!
//! P1 is the oldest post and P8 the newest. At a budget of three posts the
//! like ranking picks {P1, P6, P7} (43 of 56 interactions), oldest-first picks
//! {P1, P2, P3} (18 of 56) and the reference random draw {P2, P5, P7} holds
//! 15 of 56. On the two-layer like/comment projection these samples keep
//! 6/6, 4/6 and 3/6 users and 17/18, 5/18 and 4/18 edges.

use crate::corpus::{Comment, Page, PageId, Post, PostId, Timestamp, UserId};
use crate::strategies::{CrawlPlan, Strategy};

pub const TOY_BUDGET: f64 = 0.375;

const BASE: Timestamp = 1_500_000_000;
const HOUR: Timestamp = 3600;

/// `(likers, distinct commenters, total comments)` per post.
const POSTS: [(&[u64], &[u64], usize); 8] = [
    (&[3, 4, 5], &[1, 3], 12),
    (&[], &[3, 5], 2),
    (&[1], &[], 0),
    (&[3], &[5, 6], 2),
    (&[], &[2, 3], 2),
    (&[1, 2, 3, 6], &[1, 2, 3, 4], 13),
    (&[2, 3], &[2, 3, 5], 9),
    (&[6], &[1, 2, 3, 4], 4),
];

pub fn toy_page() -> Page {
    let posts = POSTS
        .iter()
        .enumerate()
        .map(|(i, &(likers, commenters, n_comments))| {
            let created = BASE + i as Timestamp * HOUR;
            Post {
                id: PostId(i as u64 + 1),
                created_at: created,
                likers: likers.iter().map(|&u| UserId(u)).collect(),
                // Commenters take turns; repeats are extra comments.
                comments: (0..n_comments)
                    .map(|c| Comment {
                        author: UserId(commenters[c % commenters.len()]),
                        created_at: created + 60 * (c as Timestamp + 1),
                        likers: vec![],
                    })
                    .collect(),
            }
        })
        .collect();
    Page {
        id: PageId(1),
        snapshot_time: BASE + 10 * 24 * HOUR,
        posts,
    }
}

/// The reference random draw {P2, P5, P7}.
pub fn toy_random_draw() -> CrawlPlan {
    CrawlPlan {
        page_id: PageId(1),
        posts: vec![PostId(2), PostId(5), PostId(7)],
        strategy: Strategy::Random {
            seed: 0,
            iteration: 0,
        },
    }
}
