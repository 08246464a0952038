use super::{Corpus, CorpusError};
use crate::network::{build_bipartite_all, project_comment_network, ProjectionLimits};

/// Per-page summary of one metric across the corpus.
#[derive(Clone, Debug, PartialEq)]
pub struct StatsRow {
    pub metric: String,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub sum: f64,
}

impl StatsRow {
    pub fn from_values(metric: &str, values: &[f64]) -> Self {
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let sum: f64 = sorted.iter().sum();
        let mean = sum / n;
        let std = if sorted.len() > 1 {
            (sorted.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        StatsRow {
            metric: metric.to_string(),
            mean,
            std,
            min: sorted[0],
            q1: quantile(&sorted, 0.25),
            median: quantile(&sorted, 0.5),
            q3: quantile(&sorted, 0.75),
            max: sorted[sorted.len() - 1],
            sum,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct StatsTable {
    pub rows: Vec<StatsRow>,
}

impl StatsTable {
    pub const HEADER: [&'static str; 9] =
        ["Metric", "Mean", "Std.", "Min", "Q1", "Median", "Q3", "Max", "Sum"];

    pub fn row(&self, metric: &str) -> Option<&StatsRow> {
        self.rows.iter().find(|r| r.metric == metric)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric,mean,std,min,q1,median,q3,max,sum\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.metric, r.mean, r.std, r.min, r.q1, r.median, r.q3, r.max, r.sum
            ));
        }
        out
    }

    /// Fixed-width text table with the column layout of a descriptive
    /// statistics summary.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{:<10}{:>14}{:>14}{:>12}{:>12}{:>12}{:>12}{:>14}{:>16}\n",
            Self::HEADER[0],
            Self::HEADER[1],
            Self::HEADER[2],
            Self::HEADER[3],
            Self::HEADER[4],
            Self::HEADER[5],
            Self::HEADER[6],
            Self::HEADER[7],
            Self::HEADER[8]
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{:<10}{:>14.0}{:>14.0}{:>12.0}{:>12.0}{:>12.0}{:>12.0}{:>14.0}{:>16.0}\n",
                r.metric, r.mean, r.std, r.min, r.q1, r.median, r.q3, r.max, r.sum
            ));
        }
        out
    }
}

/// Quantile of ascending `sorted` by linear interpolation between closest
/// ranks: position `p * (n - 1)`.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty slice");
    let pos = p.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Rows `Posts`, `Users`, `Comments` and `Likes` (post likes plus comment
/// likes); with `with_network`, also `Edges` and `Nodes` of each page's
/// comment projection.
pub fn descriptive_stats(corpus: &Corpus, with_network: bool) -> Result<StatsTable, CorpusError> {
    if corpus.pages.is_empty() {
        return Err(CorpusError::Empty);
    }
    let per_page = |f: &dyn Fn(&super::Page) -> f64| -> Vec<f64> { corpus.pages.iter().map(f).collect() };
    let mut rows = vec![
        StatsRow::from_values("Posts", &per_page(&|p| p.posts.len() as f64)),
        StatsRow::from_values("Users", &per_page(&|p| p.unique_users() as f64)),
        StatsRow::from_values(
            "Comments",
            &per_page(&|p| p.posts.iter().map(|x| x.comment_count()).sum::<u64>() as f64),
        ),
        StatsRow::from_values(
            "Likes",
            &per_page(&|p| {
                p.posts
                    .iter()
                    .map(|x| x.like_count() + x.comment_like_count())
                    .sum::<u64>() as f64
            }),
        ),
    ];
    if with_network {
        let mut edges = Vec::with_capacity(corpus.pages.len());
        let mut nodes = Vec::with_capacity(corpus.pages.len());
        for page in &corpus.pages {
            let net = project_comment_network(&build_bipartite_all(page), ProjectionLimits::default())
                .map_err(|e| CorpusError::Invariant {
                    line: None,
                    msg: format!("page {}: {e}", page.id),
                })?;
            edges.push(net.edge_count() as f64);
            nodes.push(net.node_count() as f64);
        }
        rows.push(StatsRow::from_values("Edges", &edges));
        rows.push(StatsRow::from_values("Nodes", &nodes));
    }
    Ok(StatsTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Page, PageId, Post, PostId};

    fn page_with_posts(id: u64, n: u64) -> Page {
        Page {
            id: PageId(id),
            snapshot_time: 10,
            posts: (1..=n)
                .map(|i| Post {
                    id: PostId(i),
                    created_at: 0,
                    likers: vec![],
                    comments: vec![],
                })
                .collect(),
        }
    }

    #[test]
    fn single_page_is_degenerate() {
        let c = Corpus {
            pages: vec![page_with_posts(1, 5)],
            provenance: String::new(),
        };
        let t = descriptive_stats(&c, true).unwrap();
        let r = t.row("Posts").unwrap();
        assert_eq!((r.mean, r.min, r.max, r.median, r.std), (5.0, 5.0, 5.0, 5.0, 0.0));
    }

    #[test]
    fn two_pages() {
        let c = Corpus {
            pages: vec![page_with_posts(1, 10), page_with_posts(2, 30)],
            provenance: String::new(),
        };
        let r = descriptive_stats(&c, false).unwrap().rows[0].clone();
        assert_eq!((r.mean, r.median, r.sum), (20.0, 20.0, 40.0));
    }

    #[test]
    fn empty_corpus_errors() {
        assert!(matches!(
            descriptive_stats(&Corpus::default(), false),
            Err(CorpusError::Empty)
        ));
    }

    #[test]
    fn quantile_interpolates() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&v, 0.0), 1.0);
        assert_eq!(quantile(&v, 1.0), 4.0);
        assert!((quantile(&v, 0.25) - 1.75).abs() < 1e-12);
        assert!((quantile(&v, 0.5) - 2.5).abs() < 1e-12);
    }
}
