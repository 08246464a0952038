//! Pages, posts and the interactions hanging off them.
//!
//! A [`Corpus`] is the crawlable universe. Every type here is plain data and is
//! never mutated after a loader or generator has validated it.

mod describe;
mod generate;
mod io;

pub use describe::{descriptive_stats, quantile, StatsRow, StatsTable};
pub use generate::{generate_synthetic, CountDist, GenParams};
pub use io::{load_corpus, read_corpus, write_corpus, write_corpus_file};

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Unix time in seconds.
pub type Timestamp = i64;

macro_rules! id_type {
    ($(#[$m:meta])* $name:ident) => {
        $(#[$m])*
        #[derive(
            Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
        )]
        #[serde(transparent)]
        pub struct $name(pub u64);

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

id_type!(
    /// Opaque user identifier, unique within a corpus.
    UserId
);
id_type!(PostId);
id_type!(PageId);

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: malformed record: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: duplicate post id {post} in page {page}")]
    DuplicatePost {
        line: usize,
        page: PageId,
        post: PostId,
    },
    #[error("line {line}: duplicate page id {page}")]
    DuplicatePage { line: usize, page: PageId },
    #[error("line {line}: comment created at {comment} precedes its post (created at {post})")]
    CommentBeforePost {
        line: usize,
        post: Timestamp,
        comment: Timestamp,
    },
    #[error("{}invariant violated: {msg}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Invariant { line: Option<usize>, msg: String },
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error("corpus has no pages")]
    Empty,
}

/// Which user actions count as interactions when measuring coverage.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InteractionDef {
    /// Likes on the post plus comments on the post.
    #[default]
    LikesAndComments,
    /// Additionally counts likes on comments.
    WithCommentLikes,
}

impl InteractionDef {
    pub fn token(self) -> &'static str {
        match self {
            InteractionDef::LikesAndComments => "likes+comments",
            InteractionDef::WithCommentLikes => "likes+comments+comment_likes",
        }
    }
}

impl std::str::FromStr for InteractionDef {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "likes+comments" | "default" => Ok(InteractionDef::LikesAndComments),
            "likes+comments+comment_likes" | "all" => Ok(InteractionDef::WithCommentLikes),
            other => Err(format!("unknown interaction definition `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comment {
    pub author: UserId,
    pub created_at: Timestamp,
    pub likers: Vec<UserId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Post {
    pub id: PostId,
    pub created_at: Timestamp,
    pub likers: Vec<UserId>,
    /// Ascending by `created_at`.
    pub comments: Vec<Comment>,
}

impl Post {
    pub fn like_count(&self) -> u64 {
        self.likers.len() as u64
    }

    pub fn comment_count(&self) -> u64 {
        self.comments.len() as u64
    }

    pub fn comment_like_count(&self) -> u64 {
        self.comments.iter().map(|c| c.likers.len() as u64).sum()
    }

    pub fn interactions(&self, def: InteractionDef) -> u64 {
        let base = self.like_count() + self.comment_count();
        match def {
            InteractionDef::LikesAndComments => base,
            InteractionDef::WithCommentLikes => base + self.comment_like_count(),
        }
    }

    /// Checks the post-local invariants. `Err` carries a description.
    fn check(&self) -> Result<(), String> {
        if has_duplicates(&self.likers) {
            return Err(format!("post {} has duplicate likers", self.id));
        }
        let mut prev = self.created_at;
        for c in &self.comments {
            if c.created_at < self.created_at {
                return Err(format!("post {} has a comment before the post", self.id));
            }
            if c.created_at < prev {
                return Err(format!("post {} comments are not ordered by time", self.id));
            }
            if has_duplicates(&c.likers) {
                return Err(format!("post {} has a comment with duplicate likers", self.id));
            }
            prev = c.created_at;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Page {
    pub id: PageId,
    /// Moment the post metadata was observed.
    pub snapshot_time: Timestamp,
    pub posts: Vec<Post>,
}

impl Page {
    pub fn validate(&self) -> Result<(), CorpusError> {
        let mut seen = HashSet::with_capacity(self.posts.len());
        for post in &self.posts {
            if !seen.insert(post.id) {
                return Err(CorpusError::Invariant {
                    line: None,
                    msg: format!("duplicate post id {} in page {}", post.id, self.id),
                });
            }
            if post.created_at > self.snapshot_time {
                return Err(CorpusError::Invariant {
                    line: None,
                    msg: format!("post {} created after the page snapshot", post.id),
                });
            }
            post.check().map_err(|msg| CorpusError::Invariant { line: None, msg })?;
        }
        Ok(())
    }

    pub fn total_interactions(&self, def: InteractionDef) -> u64 {
        self.posts.iter().map(|p| p.interactions(def)).sum()
    }

    pub fn post(&self, id: PostId) -> Option<&Post> {
        self.posts.iter().find(|p| p.id == id)
    }

    /// Number of distinct users with any interaction on the page.
    pub fn unique_users(&self) -> usize {
        let mut users = HashSet::new();
        for post in &self.posts {
            users.extend(post.likers.iter().copied());
            for c in &post.comments {
                users.insert(c.author);
                users.extend(c.likers.iter().copied());
            }
        }
        users.len()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    pub pages: Vec<Page>,
    /// File path or generator description.
    pub provenance: String,
}

impl Corpus {
    pub fn validate(&self) -> Result<(), CorpusError> {
        let mut ids = HashSet::with_capacity(self.pages.len());
        for page in &self.pages {
            if !ids.insert(page.id) {
                return Err(CorpusError::Invariant {
                    line: None,
                    msg: format!("duplicate page id {}", page.id),
                });
            }
            page.validate()?;
        }
        Ok(())
    }

    pub fn page(&self, id: PageId) -> Option<&Page> {
        self.pages.iter().find(|p| p.id == id)
    }

    pub fn post_count(&self) -> usize {
        self.pages.iter().map(|p| p.posts.len()).sum()
    }
}

/// Metadata visible in the initial, cheap crawl of a page.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PostMeta {
    pub post_id: PostId,
    pub created_at: Timestamp,
    pub like_count: u64,
    pub comment_count: u64,
    /// Seconds between creation and the page snapshot.
    pub lifetime: u64,
}

/// One [`PostMeta`] per post, in page order.
pub fn page_metadata(page: &Page) -> Vec<PostMeta> {
    page.posts
        .iter()
        .map(|p| PostMeta {
            post_id: p.id,
            created_at: p.created_at,
            like_count: p.like_count(),
            comment_count: p.comment_count(),
            lifetime: (page.snapshot_time - p.created_at).max(0) as u64,
        })
        .collect()
}

fn has_duplicates(users: &[UserId]) -> bool {
    let mut seen = HashSet::with_capacity(users.len());
    users.iter().any(|u| !seen.insert(*u))
}
