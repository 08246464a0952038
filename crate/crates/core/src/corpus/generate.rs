//! Synthetic corpora with heavy-tailed interaction counts.
//!
//! Per post, a like count and a comment count are drawn from a Gaussian
//! copula: the like count uses a standard normal `z`, the comment count uses
//! `rho * z + sqrt(1 - rho^2) * z'`, and each is mapped through its
//! [`CountDist`]. Interacting users come from a per-page
//! preferential-reuse process over a shared pool of `user_pool` ids: with
//! `T` prior interactions on the page and `A` active users, an existing user
//! is picked proportionally to its prior interaction count (total weight `T`),
//! uniformly among active users (total weight `smoothing * A`), or a fresh
//! pool user is drawn (weight `novelty`).

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;

use super::{Comment, Corpus, CorpusError, Page, PageId, Post, PostId, Timestamp, UserId};
use crate::rng::{rng_from_seed, CrawlRng};

/// Distribution of a non-negative count.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CountDist {
    Zero,
    Constant(u64),
    /// `floor(exp(mu + sigma * z))` for standard normal `z`.
    LogNormal { mu: f64, sigma: f64 },
}

impl CountDist {
    /// Maps a standard-normal draw onto this distribution.
    pub fn from_normal(&self, z: f64) -> u64 {
        match *self {
            CountDist::Zero => 0,
            CountDist::Constant(n) => n,
            CountDist::LogNormal { mu, sigma } => {
                let x = (mu + sigma * z).exp().floor();
                if x >= u64::MAX as f64 {
                    u64::MAX
                } else {
                    x as u64
                }
            }
        }
    }

    fn validate(&self, name: &str) -> Result<(), CorpusError> {
        if let CountDist::LogNormal { mu, sigma } = *self {
            if !mu.is_finite() || !sigma.is_finite() || sigma < 0.0 {
                return Err(CorpusError::InvalidParams(format!(
                    "{name}: log-normal needs finite mu and sigma >= 0"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for CountDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountDist::Zero => write!(f, "zero"),
            CountDist::Constant(n) => write!(f, "constant({n})"),
            CountDist::LogNormal { mu, sigma } => write!(f, "lognormal({mu}, {sigma})"),
        }
    }
}

impl FromStr for CountDist {
    type Err = String;

    /// Accepts `zero`, `constant(n)` and `lognormal(mu, sigma)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "zero" {
            return Ok(CountDist::Zero);
        }
        let (name, rest) = s
            .split_once('(')
            .ok_or_else(|| format!("bad distribution `{s}`"))?;
        let args: Vec<&str> = rest
            .strip_suffix(')')
            .ok_or_else(|| format!("bad distribution `{s}`"))?
            .split(',')
            .map(str::trim)
            .collect();
        let num = |a: &str| a.parse::<f64>().map_err(|e| format!("`{a}`: {e}"));
        match (name.trim(), args.as_slice()) {
            ("constant", [n]) => n
                .parse()
                .map(CountDist::Constant)
                .map_err(|e| format!("`{n}`: {e}")),
            ("lognormal", [mu, sigma]) => Ok(CountDist::LogNormal {
                mu: num(mu)?,
                sigma: num(sigma)?,
            }),
            _ => Err(format!("bad distribution `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenParams {
    pub pages: usize,
    pub posts_per_page: CountDist,
    pub min_posts: usize,
    pub max_posts: usize,
    pub user_pool: u64,
    pub likes: CountDist,
    pub comments: CountDist,
    /// Likes on each individual comment.
    pub comment_likes: CountDist,
    /// Copula correlation between a post's like and comment draws.
    pub rho: f64,
    pub start_time: Timestamp,
    /// Posts are created uniformly in `[start_time, start_time + time_span]`;
    /// the page snapshot is taken at the end of the span.
    pub time_span: i64,
    pub smoothing: f64,
    pub novelty: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            pages: 160,
            posts_per_page: CountDist::LogNormal { mu: 6.2, sigma: 0.5 },
            min_posts: 50,
            max_posts: 5000,
            user_pool: 200_000,
            likes: CountDist::LogNormal { mu: 1.5, sigma: 1.5 },
            comments: CountDist::LogNormal { mu: 0.5, sigma: 1.5 },
            comment_likes: CountDist::LogNormal { mu: -1.5, sigma: 1.0 },
            rho: 0.8,
            start_time: 1_404_172_800,
            time_span: 60_000_000,
            smoothing: 1.0,
            novelty: 20.0,
        }
    }
}

impl GenParams {
    pub fn validate(&self) -> Result<(), CorpusError> {
        let bad = |m: &str| Err(CorpusError::InvalidParams(m.to_string()));
        if self.pages == 0 {
            return bad("pages must be at least 1");
        }
        if self.min_posts == 0 || self.min_posts > self.max_posts {
            return bad("need 1 <= min_posts <= max_posts");
        }
        if self.user_pool == 0 {
            return bad("user_pool must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.rho) {
            return bad("rho must lie in [0, 1]");
        }
        if self.time_span < 0 {
            return bad("time_span must be non-negative");
        }
        if !(self.smoothing >= 0.0 && self.smoothing.is_finite()) {
            return bad("smoothing must be finite and non-negative");
        }
        if !(self.novelty > 0.0 && self.novelty.is_finite()) {
            return bad("novelty must be finite and positive");
        }
        self.posts_per_page.validate("posts_per_page")?;
        self.likes.validate("likes")?;
        self.comments.validate("comments")?;
        self.comment_likes.validate("comment_likes")?;
        Ok(())
    }
}

/// Pure function of `(params, seed)`.
pub fn generate_synthetic(params: &GenParams, seed: u64) -> Result<Corpus, CorpusError> {
    params.validate()?;
    let mut rng = rng_from_seed(seed);
    let pages = (0..params.pages)
        .map(|i| generate_page(params, PageId(i as u64 + 1), &mut rng))
        .collect();
    Ok(Corpus {
        pages,
        provenance: format!("synthetic seed={seed} {params:?}"),
    })
}

fn generate_page(params: &GenParams, id: PageId, rng: &mut CrawlRng) -> Page {
    let n_posts = (params.posts_per_page.from_normal(normal(rng)) as usize)
        .clamp(params.min_posts, params.max_posts);
    let snapshot = params.start_time + params.time_span;
    let mut users = UserSampler::new(params);
    let rho_c = (1.0 - params.rho * params.rho).max(0.0).sqrt();

    let mut posts = Vec::with_capacity(n_posts);
    for i in 0..n_posts {
        let created = params.start_time + rng.random_range(0..=params.time_span);
        let z = normal(rng);
        let zc = params.rho * z + rho_c * normal(rng);
        let n_likes = params.likes.from_normal(z).min(params.user_pool);
        let n_comments = params.comments.from_normal(zc);

        let likers = users.distinct(n_likes, rng);
        let mut times: Vec<Timestamp> = (0..n_comments)
            .map(|_| rng.random_range(created..=snapshot))
            .collect();
        times.sort_unstable();
        let comments = times
            .into_iter()
            .map(|t| {
                let author = users.draw(rng);
                let n = params
                    .comment_likes
                    .from_normal(normal(rng))
                    .min(params.user_pool);
                Comment {
                    author,
                    created_at: t,
                    likers: users.distinct(n, rng),
                }
            })
            .collect();
        posts.push(Post {
            id: PostId(i as u64 + 1),
            created_at: created,
            likers,
            comments,
        });
    }
    Page {
        id,
        snapshot_time: snapshot,
        posts,
    }
}

fn normal(rng: &mut CrawlRng) -> f64 {
    rng.sample(StandardNormal)
}

struct UserSampler {
    pool: u64,
    smoothing: f64,
    novelty: f64,
    /// One entry per prior interaction.
    tokens: Vec<UserId>,
    active: Vec<UserId>,
    active_set: HashSet<UserId>,
}

impl UserSampler {
    fn new(params: &GenParams) -> Self {
        UserSampler {
            pool: params.user_pool,
            smoothing: params.smoothing,
            novelty: params.novelty,
            tokens: Vec::new(),
            active: Vec::new(),
            active_set: HashSet::new(),
        }
    }

    fn pick(&self, rng: &mut CrawlRng) -> UserId {
        let t = self.tokens.len() as f64;
        let a = self.smoothing * self.active.len() as f64;
        let r = rng.random::<f64>() * (t + a + self.novelty);
        if r < t {
            self.tokens[rng.random_range(0..self.tokens.len())]
        } else if r < t + a {
            self.active[rng.random_range(0..self.active.len())]
        } else {
            UserId(rng.random_range(1..=self.pool))
        }
    }

    fn record(&mut self, u: UserId) {
        self.tokens.push(u);
        if self.active_set.insert(u) {
            self.active.push(u);
        }
    }

    fn draw(&mut self, rng: &mut CrawlRng) -> UserId {
        let u = self.pick(rng);
        self.record(u);
        u
    }

    /// `n` distinct users, `n <= pool`.
    fn distinct(&mut self, n: u64, rng: &mut CrawlRng) -> Vec<UserId> {
        let n = n.min(self.pool) as usize;
        let mut chosen = HashSet::with_capacity(n);
        let mut out = Vec::with_capacity(n);
        let mut attempts = 0usize;
        while out.len() < n && attempts < 20 * n + 100 {
            attempts += 1;
            let u = self.pick(rng);
            if chosen.insert(u) {
                out.push(u);
            }
        }
        // Dense requests relative to the pool: fill deterministically.
        let mut next = 1;
        while out.len() < n {
            let u = UserId(next);
            next += 1;
            if chosen.insert(u) {
                out.push(u);
            }
        }
        for &u in &out {
            self.record(u);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> GenParams {
        GenParams {
            pages: 3,
            posts_per_page: CountDist::Constant(40),
            min_posts: 1,
            max_posts: 100,
            user_pool: 500,
            ..GenParams::default()
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let a = generate_synthetic(&small(), 11).unwrap();
        let b = generate_synthetic(&small(), 11).unwrap();
        let c = generate_synthetic(&small(), 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        a.validate().unwrap();
    }

    #[test]
    fn zero_distributions_give_bare_posts() {
        let p = GenParams {
            likes: CountDist::Zero,
            comments: CountDist::Zero,
            comment_likes: CountDist::Zero,
            ..small()
        };
        let c = generate_synthetic(&p, 1).unwrap();
        for page in &c.pages {
            for m in super::super::page_metadata(page) {
                assert_eq!((m.like_count, m.comment_count), (0, 0));
            }
        }
    }

    #[test]
    fn rejects_invalid_params() {
        for p in [
            GenParams { pages: 0, ..small() },
            GenParams { rho: 1.5, ..small() },
            GenParams { user_pool: 0, ..small() },
            GenParams { min_posts: 10, max_posts: 5, ..small() },
            GenParams {
                likes: CountDist::LogNormal { mu: 0.0, sigma: -1.0 },
                ..small()
            },
        ] {
            assert!(matches!(
                generate_synthetic(&p, 0),
                Err(CorpusError::InvalidParams(_))
            ));
        }
    }

    #[test]
    fn likers_fit_a_tiny_pool() {
        let p = GenParams {
            user_pool: 3,
            likes: CountDist::Constant(10),
            ..small()
        };
        let c = generate_synthetic(&p, 5).unwrap();
        c.validate().unwrap();
        assert!(c.pages[0].posts.iter().all(|p| p.likers.len() == 3));
    }

    #[test]
    fn count_dist_parses() {
        assert_eq!("zero".parse::<CountDist>().unwrap(), CountDist::Zero);
        assert_eq!("constant(4)".parse::<CountDist>().unwrap(), CountDist::Constant(4));
        assert_eq!(
            "lognormal(1.5, 2)".parse::<CountDist>().unwrap(),
            CountDist::LogNormal { mu: 1.5, sigma: 2.0 }
        );
        assert!("poisson(3)".parse::<CountDist>().is_err());
        let d = CountDist::LogNormal { mu: 0.25, sigma: 1.5 };
        assert_eq!(d.to_string().parse::<CountDist>().unwrap(), d);
    }
}
