//! User-post bipartite graphs and their one-mode user projections.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Page, PostId, UserId};
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq)]
pub enum NetworkError {
    #[error("post {0} is not on the page")]
    ForeignPost(PostId),
    #[error("post {post} has {commenters} distinct commenters, above the projection cap of {cap}")]
    CliqueTooLarge {
        post: PostId,
        commenters: usize,
        cap: usize,
    },
    #[error("the reference network has no nodes")]
    EmptyReference,
    #[error("degree distribution is empty")]
    EmptyDistribution,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    Like,
    Comment,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BipartiteGraph {
    users: BTreeSet<UserId>,
    posts: BTreeSet<PostId>,
    edges: BTreeSet<(UserId, PostId, EdgeKind)>,
}

impl BipartiteGraph {
    pub fn users(&self) -> &BTreeSet<UserId> {
        &self.users
    }

    pub fn posts(&self) -> &BTreeSet<PostId> {
        &self.posts
    }

    pub fn edges(&self) -> &BTreeSet<(UserId, PostId, EdgeKind)> {
        &self.edges
    }

    pub fn edge_count(&self, kind: EdgeKind) -> usize {
        self.edges.iter().filter(|e| e.2 == kind).count()
    }

    /// Users with an edge of `kind`, grouped by post.
    fn by_post(&self, kind: EdgeKind) -> BTreeMap<PostId, Vec<UserId>> {
        let mut out: BTreeMap<PostId, Vec<UserId>> = BTreeMap::new();
        for &(u, p, k) in &self.edges {
            if k == kind {
                out.entry(p).or_default().push(u);
            }
        }
        out
    }
}

/// Like edges per `(liker, post)` and comment edges per distinct
/// `(commenter, post)` over the posts of `subset`.
pub fn build_bipartite<'a>(
    page: &Page,
    subset: impl IntoIterator<Item = &'a PostId>,
) -> Result<BipartiteGraph, NetworkError> {
    let index: HashMap<PostId, usize> = page.posts.iter().enumerate().map(|(i, p)| (p.id, i)).collect();
    let mut g = BipartiteGraph::default();
    for id in subset {
        let post = &page.posts[*index.get(id).ok_or(NetworkError::ForeignPost(*id))?];
        g.posts.insert(post.id);
        for &u in &post.likers {
            g.users.insert(u);
            g.edges.insert((u, post.id, EdgeKind::Like));
        }
        for c in &post.comments {
            g.users.insert(c.author);
            g.edges.insert((c.author, post.id, EdgeKind::Comment));
        }
    }
    Ok(g)
}

pub fn build_bipartite_all(page: &Page) -> BipartiteGraph {
    let ids: Vec<PostId> = page.posts.iter().map(|p| p.id).collect();
    build_bipartite(page, &ids).expect("page posts are on the page")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProjectionLimits {
    /// Largest per-post commenter set that may be expanded into a clique.
    pub max_clique: usize,
}

impl Default for ProjectionLimits {
    fn default() -> Self {
        ProjectionLimits { max_clique: 100_000 }
    }
}

/// Undirected simple graph on users. Nodes and edges are kept sorted; every
/// edge `(a, b)` has `a < b`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SocialNetwork {
    nodes: Vec<UserId>,
    edges: Vec<(UserId, UserId)>,
}

impl SocialNetwork {
    /// Builds a network from arbitrary node and edge lists, normalizing pair
    /// order and removing duplicates and self-loops. Edge endpoints are added
    /// as nodes.
    pub fn from_parts(
        nodes: impl IntoIterator<Item = UserId>,
        edges: impl IntoIterator<Item = (UserId, UserId)>,
    ) -> Self {
        let mut edges: Vec<(UserId, UserId)> = edges
            .into_iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| if a < b { (a, b) } else { (b, a) })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        let mut nodes: Vec<UserId> = nodes.into_iter().collect();
        nodes.extend(edges.iter().flat_map(|&(a, b)| [a, b]));
        nodes.sort_unstable();
        nodes.dedup();
        SocialNetwork { nodes, edges }
    }

    pub fn nodes(&self) -> &[UserId] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(UserId, UserId)] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_node(&self, u: UserId) -> bool {
        self.nodes.binary_search(&u).is_ok()
    }

    pub fn has_edge(&self, a: UserId, b: UserId) -> bool {
        let key = if a < b { (a, b) } else { (b, a) };
        self.edges.binary_search(&key).is_ok()
    }

    pub fn is_subgraph_of(&self, other: &SocialNetwork) -> bool {
        self.nodes.iter().all(|&u| other.has_node(u))
            && self.edges.iter().all(|&(a, b)| other.has_edge(a, b))
    }

    pub fn degrees(&self) -> BTreeMap<UserId, usize> {
        let mut deg: BTreeMap<UserId, usize> = self.nodes.iter().map(|&u| (u, 0)).collect();
        for &(a, b) in &self.edges {
            *deg.get_mut(&a).unwrap() += 1;
            *deg.get_mut(&b).unwrap() += 1;
        }
        deg
    }

    /// `<uid> <uid>` per edge, sorted.
    pub fn edge_list(&self) -> String {
        let mut out = String::with_capacity(self.edges.len() * 16);
        for (a, b) in &self.edges {
            out.push_str(&format!("{a} {b}\n"));
        }
        out
    }
}

fn co_interaction_pairs(
    groups: BTreeMap<PostId, Vec<UserId>>,
    limits: ProjectionLimits,
) -> Result<Vec<(UserId, UserId)>, NetworkError> {
    let mut pairs = Vec::new();
    for (post, mut users) in groups {
        users.sort_unstable();
        users.dedup();
        if users.len() > limits.max_clique {
            return Err(NetworkError::CliqueTooLarge {
                post,
                commenters: users.len(),
                cap: limits.max_clique,
            });
        }
        for (i, &a) in users.iter().enumerate() {
            for &b in &users[i + 1..] {
                pairs.push((a, b));
            }
        }
    }
    Ok(pairs)
}

/// Users adjacent iff they commented on a common post. Nodes are the users
/// with at least one comment edge; like edges are ignored.
pub fn project_comment_network(
    bip: &BipartiteGraph,
    limits: ProjectionLimits,
) -> Result<SocialNetwork, NetworkError> {
    let groups = bip.by_post(EdgeKind::Comment);
    let nodes: Vec<UserId> = groups.values().flatten().copied().collect();
    let pairs = co_interaction_pairs(groups, limits)?;
    Ok(SocialNetwork::from_parts(nodes, pairs))
}

/// Two-layer projection: a like layer (co-liking a post) and a comment layer
/// (co-commenting a post) over all interacting users.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LayeredNetwork {
    pub nodes: Vec<UserId>,
    pub like_layer: SocialNetwork,
    pub comment_layer: SocialNetwork,
}

impl LayeredNetwork {
    /// Edges summed over both layers.
    pub fn edge_count(&self) -> usize {
        self.like_layer.edge_count() + self.comment_layer.edge_count()
    }
}

pub fn project_layered(bip: &BipartiteGraph, limits: ProjectionLimits) -> Result<LayeredNetwork, NetworkError> {
    let likes = bip.by_post(EdgeKind::Like);
    let like_nodes: Vec<UserId> = likes.values().flatten().copied().collect();
    let like_layer = SocialNetwork::from_parts(like_nodes, co_interaction_pairs(likes, limits)?);
    Ok(LayeredNetwork {
        nodes: bip.users.iter().copied().collect(),
        like_layer,
        comment_layer: project_comment_network(bip, limits)?,
    })
}

/// `(node fraction, edge fraction)` of `full` present in `sample`. A reference
/// without edges gives an edge fraction of one.
pub fn network_recall<T: Scalar>(sample: &SocialNetwork, full: &SocialNetwork) -> Result<(T, T), NetworkError> {
    recall_counts(
        sample.node_count(),
        full.node_count(),
        sample.edge_count(),
        full.edge_count(),
    )
}

pub fn layered_recall<T: Scalar>(sample: &LayeredNetwork, full: &LayeredNetwork) -> Result<(T, T), NetworkError> {
    recall_counts(
        sample.nodes.len(),
        full.nodes.len(),
        sample.edge_count(),
        full.edge_count(),
    )
}

fn recall_counts<T: Scalar>(
    sample_nodes: usize,
    full_nodes: usize,
    sample_edges: usize,
    full_edges: usize,
) -> Result<(T, T), NetworkError> {
    if full_nodes == 0 {
        return Err(NetworkError::EmptyReference);
    }
    let nodes = T::of_usize(sample_nodes) / T::of_usize(full_nodes);
    let edges = if full_edges == 0 {
        T::one()
    } else {
        T::of_usize(sample_edges) / T::of_usize(full_edges)
    };
    Ok((nodes, edges))
}

/// Histogram degree -> number of nodes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DegreeDistribution {
    pub counts: BTreeMap<usize, usize>,
    pub total: usize,
}

impl DegreeDistribution {
    pub fn from_degrees(degrees: impl IntoIterator<Item = usize>) -> Self {
        let mut counts = BTreeMap::new();
        let mut total = 0;
        for d in degrees {
            *counts.entry(d).or_insert(0) += 1;
            total += 1;
        }
        DegreeDistribution { counts, total }
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// `degree,count` rows with header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,count\n");
        for (d, c) in &self.counts {
            out.push_str(&format!("{d},{c}\n"));
        }
        out
    }

    /// `(d, P(D >= d))` for every observed degree.
    pub fn ccdf<T: Scalar>(&self) -> Vec<(usize, T)> {
        let mut remaining = self.total;
        let n = T::of_usize(self.total.max(1));
        self.counts
            .iter()
            .map(|(&d, &c)| {
                let p = T::of_usize(remaining) / n;
                remaining -= c;
                (d, p)
            })
            .collect()
    }
}

pub fn degree_distribution(net: &SocialNetwork) -> DegreeDistribution {
    DegreeDistribution::from_degrees(net.degrees().into_values())
}

/// Two-sample Kolmogorov-Smirnov statistic between the degree sequences.
pub fn degree_distance<T: Scalar>(a: &DegreeDistribution, b: &DegreeDistribution) -> Result<T, NetworkError> {
    if a.is_empty() || b.is_empty() {
        return Err(NetworkError::EmptyDistribution);
    }
    let support: BTreeSet<usize> = a.counts.keys().chain(b.counts.keys()).copied().collect();
    let (na, nb) = (T::of_usize(a.total), T::of_usize(b.total));
    let (mut ca, mut cb) = (0usize, 0usize);
    let mut sup = T::zero();
    for d in support {
        ca += a.counts.get(&d).copied().unwrap_or(0);
        cb += b.counts.get(&d).copied().unwrap_or(0);
        let gap = (T::of_usize(ca) / na - T::of_usize(cb) / nb).abs();
        if gap > sup {
            sup = gap;
        }
    }
    Ok(sup)
}

/// Comment-network `(nodes, edges)` after each prefix length in `cutoffs`
/// (ascending) of the post sequence `order`. Equivalent to projecting every
/// prefix separately, but built in one incremental pass.
pub fn prefix_network_sizes(
    page: &Page,
    order: &[PostId],
    cutoffs: &[usize],
    limits: ProjectionLimits,
) -> Result<Vec<(usize, usize)>, NetworkError> {
    let index: HashMap<PostId, usize> = page.posts.iter().enumerate().map(|(i, p)| (p.id, i)).collect();
    let mut nodes: HashSet<UserId> = HashSet::new();
    let mut edges: HashSet<(UserId, UserId)> = HashSet::new();
    let mut out = Vec::with_capacity(cutoffs.len());
    let mut done = 0;
    for &cut in cutoffs {
        for id in &order[done..cut.min(order.len())] {
            let post = &page.posts[*index.get(id).ok_or(NetworkError::ForeignPost(*id))?];
            let mut users: Vec<UserId> = post.comments.iter().map(|c| c.author).collect();
            users.sort_unstable();
            users.dedup();
            if users.len() > limits.max_clique {
                return Err(NetworkError::CliqueTooLarge {
                    post: post.id,
                    commenters: users.len(),
                    cap: limits.max_clique,
                });
            }
            for (i, &a) in users.iter().enumerate() {
                nodes.insert(a);
                for &b in &users[i + 1..] {
                    edges.insert((a, b));
                }
            }
        }
        done = done.max(cut.min(order.len()));
        out.push((nodes.len(), edges.len()));
    }
    Ok(out)
}
