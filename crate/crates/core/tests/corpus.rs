mod common;

use proptest::prelude::*;
use usmc::corpus::{
    descriptive_stats, generate_synthetic, page_metadata, quantile, read_corpus, write_corpus, CountDist,
    GenParams,
};
use usmc::{Corpus, CorpusError};

fn serialize(c: &Corpus) -> Vec<u8> {
    let mut out = Vec::new();
    write_corpus(c, &mut out).unwrap();
    out
}

#[test]
fn generated_corpus_round_trips_byte_identically() {
    let c = generate_synthetic(&common::small_params(12), 5).unwrap();
    let bytes = serialize(&c);
    let back = read_corpus(bytes.as_slice()).unwrap();
    assert_eq!(back.pages, c.pages);
    assert_eq!(serialize(&back), bytes);
}

#[test]
fn generation_is_a_pure_function_of_params_and_seed() {
    let p = common::small_params(6);
    assert_eq!(serialize(&generate_synthetic(&p, 9).unwrap()), serialize(&generate_synthetic(&p, 9).unwrap()));
    assert_ne!(serialize(&generate_synthetic(&p, 9).unwrap()), serialize(&generate_synthetic(&p, 10).unwrap()));
}

#[test]
fn generated_pages_satisfy_invariants() {
    let c = generate_synthetic(&common::small_params(20), 1).unwrap();
    c.validate().unwrap();
    for page in &c.pages {
        for post in &page.posts {
            assert!(post.created_at <= page.snapshot_time);
            assert!(post.comments.windows(2).all(|w| w[0].created_at <= w[1].created_at));
        }
    }
}

#[test]
fn full_correlation_couples_like_and_comment_counts() {
    let dist = CountDist::LogNormal { mu: 1.0, sigma: 1.0 };
    let p = GenParams {
        pages: 10,
        posts_per_page: CountDist::Constant(1000),
        min_posts: 1000,
        max_posts: 1000,
        user_pool: 100_000,
        likes: dist,
        comments: dist,
        comment_likes: CountDist::Zero,
        rho: 1.0,
        ..Default::default()
    };
    let c = generate_synthetic(&p, 3).unwrap();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for page in &c.pages {
        for m in page_metadata(page) {
            xs.push(m.like_count as f64);
            ys.push(m.comment_count as f64);
        }
    }
    assert_eq!(xs.len(), 10_000);
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    assert!(sxy / (sxx * syy).sqrt() > 0.9);
}

#[test]
fn zero_distributions_give_silent_posts() {
    let p = GenParams {
        likes: CountDist::Zero,
        comments: CountDist::Zero,
        ..common::small_params(4)
    };
    let c = generate_synthetic(&p, 0).unwrap();
    for page in &c.pages {
        assert!(page_metadata(page).iter().all(|m| m.like_count == 0 && m.comment_count == 0));
    }
}

#[test]
fn metadata_recounts_interaction_lists() {
    let c = generate_synthetic(&common::small_params(30), 2).unwrap();
    let text = String::from_utf8(serialize(&c)).unwrap();
    // Recount from the serialized records, independent of the in-memory types.
    let mut like_records = 0u64;
    let mut comment_records = 0u64;
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        if v.get("post").is_some() {
            like_records += v["likers"].as_array().unwrap().len() as u64;
            comment_records += v["comments"].as_array().unwrap().len() as u64;
        }
    }
    let meta: Vec<_> = c.pages.iter().flat_map(page_metadata).collect();
    assert_eq!(meta.iter().map(|m| m.like_count).sum::<u64>(), like_records);
    assert_eq!(meta.iter().map(|m| m.comment_count).sum::<u64>(), comment_records);
    for page in &c.pages {
        for (m, p) in page_metadata(page).iter().zip(&page.posts) {
            assert_eq!(m.lifetime as i64, page.snapshot_time - p.created_at);
        }
    }
}

/// Linear interpolation between closest ranks, by explicit case analysis.
fn quantile_oracle(values: &[f64], p: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let h = p * (v.len() - 1) as f64;
    let lo = h.floor() as usize;
    if lo + 1 >= v.len() {
        return v[v.len() - 1];
    }
    v[lo] * (1.0 - (h - lo as f64)) + v[lo + 1] * (h - lo as f64)
}

#[test]
fn stats_table_quantiles_match_sort_oracle() {
    let params = GenParams {
        pages: 160,
        posts_per_page: CountDist::LogNormal { mu: 3.0, sigma: 0.7 },
        min_posts: 5,
        max_posts: 200,
        user_pool: 2000,
        ..Default::default()
    };
    let c = generate_synthetic(&params, 11).unwrap();
    let t = descriptive_stats(&c, false).unwrap();
    let posts: Vec<f64> = c.pages.iter().map(|p| p.posts.len() as f64).collect();
    let row = t.row("Posts").unwrap();
    assert_eq!(row.sum, c.post_count() as f64);
    for (p, got) in [(0.25, row.q1), (0.5, row.median), (0.75, row.q3)] {
        assert!((quantile_oracle(&posts, p) - got).abs() < 1e-9);
    }
    let likes: Vec<f64> = c
        .pages
        .iter()
        .map(|p| p.posts.iter().map(|q| q.like_count() + q.comment_like_count()).sum::<u64>() as f64)
        .collect();
    let row = t.row("Likes").unwrap();
    assert!((quantile_oracle(&likes, 0.5) - row.median).abs() < 1e-9);
}

#[test]
fn empty_corpus_has_no_stats() {
    let c = read_corpus(&b""[..]).unwrap();
    assert!(c.pages.is_empty());
    assert!(matches!(descriptive_stats(&c, false), Err(CorpusError::Empty)));
}

proptest! {
    #[test]
    fn arbitrary_pages_round_trip(page in common::arb_page(8, 20)) {
        let c = Corpus { pages: vec![page], provenance: String::new() };
        let bytes = serialize(&c);
        let back = read_corpus(bytes.as_slice()).unwrap();
        prop_assert_eq!(&back.pages, &c.pages);
        prop_assert_eq!(serialize(&back), bytes);
    }

    #[test]
    fn quantile_matches_oracle(mut v in prop::collection::vec(-1e6f64..1e6, 1..50), p in 0.0f64..=1.0) {
        let want = quantile_oracle(&v, p);
        v.sort_by(f64::total_cmp);
        prop_assert!((quantile(&v, p) - want).abs() <= 1e-9 * want.abs().max(1.0));
    }
}
