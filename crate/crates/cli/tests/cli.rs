//! End-to-end runs of the `usmc` binary: CSV schemas against golden files,
//! exit codes and reproducibility from a manifest.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use usmc::corpus::{generate_synthetic, write_corpus_file, CountDist, GenParams};
use usmc::fixture::toy_page;
use usmc::{Corpus, Page, PageId};

fn usmc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_usmc"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> Output {
    let out = usmc(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    fs::read_to_string(path).unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn write_pages(dir: &Path, name: &str, pages: Vec<Page>) -> String {
    let corpus = Corpus {
        pages,
        provenance: String::new(),
    };
    write_corpus_file(&corpus, dir.join(name)).unwrap();
    format!("corpus.path={name}")
}

fn toy_corpus(dir: &Path) -> String {
    write_pages(dir, "toy.jsonl", vec![toy_page()])
}

#[test]
fn crawl_matches_golden() {
    let tmp = tempfile::tempdir().unwrap();
    let corpus = toy_corpus(tmp.path());
    ok(
        tmp.path(),
        &["crawl", "--set", &corpus, "--out", "o", "--strategy", "likes", "--budget-fraction", "0.375"],
    );
    let o = tmp.path().join("o");
    assert_eq!(read(&o, "crawl_summary.csv"), golden("toy_crawl_summary.csv"));
    assert_eq!(read(&o, "crawl_trace.csv"), golden("toy_crawl_trace.csv"));
}

#[test]
fn crawl_stops_at_post_boundaries() {
    let tmp = tempfile::tempdir().unwrap();
    let corpus = toy_corpus(tmp.path());
    // Time budget 4 s: P6 ends at 3 s (< 4), so P1 starts and the crawl stops after it.
    ok(tmp.path(), &["crawl", "--set", &corpus, "--out", "t", "--time-budget", "4"]);
    let summary = read(&tmp.path().join("t"), "crawl_summary.csv");
    assert_eq!(summary.lines().nth(1).unwrap(), "1,likes,8,2,6,1,6,32,0.5714285714285714");
    ok(tmp.path(), &["crawl", "--set", &corpus, "--out", "m", "--interaction-target", "33"]);
    let summary = read(&tmp.path().join("m"), "crawl_summary.csv");
    assert!(summary.lines().nth(1).unwrap().starts_with("1,likes,8,3,"));
    let clash = usmc(tmp.path(), &["crawl", "--set", &corpus, "--time-budget", "4", "--budget-fraction", "0.5"]);
    assert_eq!(clash.status.code(), Some(2));
}

#[test]
fn evaluate_matches_golden() {
    let tmp = tempfile::tempdir().unwrap();
    let corpus = toy_corpus(tmp.path());
    ok(
        tmp.path(),
        &[
            "evaluate",
            "--set",
            &corpus,
            "--out",
            "e",
            "--set",
            "eval.strategies=[\"likes\", \"chrono\"]",
            "--set",
            "eval.grid=[0.0, 0.375, 1.0]",
            "--set",
            "eval.sample_grid=[0.375, 1.0]",
            "--set",
            "eval.svg=false",
        ],
    );
    let e = tmp.path().join("e");
    assert_eq!(read(&e, "coverage_posts.csv"), golden("toy_coverage_posts.csv"));
    assert_eq!(read(&e, "recall.csv"), golden("toy_recall.csv"));
    assert!(read(&e, "coverage_time.csv").starts_with("strategy,axis,grid,mean,std,page_count\nlikes,time,0,0,0,1\n"));
    assert_eq!(read(&e, "degree_median_full.csv"), golden("toy_degree_1.csv"));
    assert!(read(&e, "degree_ks.csv").starts_with("quantile,page,posts,strategy,ks\nq1,1,8,likes,"));
    assert_eq!(read(&e, "skipped_pages.csv"), "page,reason\n");
    assert!(!e.join("coverage_posts.svg").exists());
}

#[test]
fn full_budget_recall_is_complete_for_every_strategy() {
    let tmp = tempfile::tempdir().unwrap();
    let params = GenParams {
        pages: 4,
        posts_per_page: CountDist::Constant(30),
        min_posts: 30,
        max_posts: 30,
        user_pool: 500,
        ..Default::default()
    };
    let pages = generate_synthetic(&params, 3).unwrap().pages;
    let corpus = write_pages(tmp.path(), "c.jsonl", pages);
    ok(
        tmp.path(),
        &["evaluate", "--set", &corpus, "--out", "e", "--set", "eval.iterations=5", "--set", "eval.sample_grid=[0.5, 1.0]"],
    );
    let recall = read(&tmp.path().join("e"), "recall.csv");
    let full: Vec<&str> = recall.lines().filter(|l| l.split(',').nth(1) == Some("1")).collect();
    assert_eq!(full.len(), 5);
    for line in full {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(&cols[2..6], ["1", "0", "1", "0"], "{line}");
    }
    for svg in ["coverage_posts.svg", "coverage_time.svg", "recall_nodes.svg", "degree_q1.svg"] {
        assert!(read(&tmp.path().join("e"), svg).starts_with("<svg"));
    }
}

#[test]
fn identical_pages_have_zero_spread() {
    let tmp = tempfile::tempdir().unwrap();
    let mut twin = toy_page();
    twin.id = PageId(2);
    let corpus = write_pages(tmp.path(), "twins.jsonl", vec![toy_page(), twin]);
    ok(
        tmp.path(),
        &["evaluate", "--set", &corpus, "--out", "e", "--set", "eval.strategies=[\"likes\", \"comments\", \"lifetime\", \"chrono\"]"],
    );
    for axis in ["posts", "time"] {
        let csv = read(&tmp.path().join("e"), &format!("coverage_{axis}.csv"));
        for line in csv.lines().skip(1) {
            let cols: Vec<&str> = line.split(',').collect();
            assert_eq!(cols[4], "0", "{line}");
            assert_eq!(cols[5], "2");
        }
    }
}

#[test]
fn netstats_exports_edge_list_and_degrees() {
    let tmp = tempfile::tempdir().unwrap();
    let corpus = toy_corpus(tmp.path());
    ok(tmp.path(), &["netstats", "--set", &corpus, "--out", "n", "--page", "1"]);
    let n = tmp.path().join("n");
    assert_eq!(read(&n, "network_stats.csv"), golden("toy_network_stats.csv"));
    assert_eq!(read(&n, "edges_1.txt"), golden("toy_edges_1.txt"));
    assert_eq!(read(&n, "degree_1.csv"), golden("toy_degree_1.csv"));
    assert!(read(&n, "degree_1.svg").contains("<polyline"));
}

#[test]
fn generate_is_deterministic_and_reports_post_lines() {
    let tmp = tempfile::tempdir().unwrap();
    let args = |out: &'static str| vec!["generate", "--seed", "17", "--out", out, "--set", "gen.pages=6", "--set", "gen.posts_per_page=lognormal(4, 0.5)"];
    let stdout = ok(tmp.path(), &args("a")).stdout;
    ok(tmp.path(), &args("b"));
    let a = fs::read(tmp.path().join("a/corpus.jsonl")).unwrap();
    assert_eq!(a, fs::read(tmp.path().join("b/corpus.jsonl")).unwrap());
    let text = String::from_utf8(a).unwrap();
    let post_lines = text.lines().filter(|l| l.starts_with("{\"post\"")).count();
    let stats = read(&tmp.path().join("a"), "corpus_stats.csv");
    let posts_row: Vec<&str> = stats.lines().find(|l| l.starts_with("Posts,")).unwrap().split(',').collect();
    assert_eq!(posts_row[8].parse::<f64>().unwrap(), post_lines as f64);
    let table = String::from_utf8(stdout).unwrap();
    for col in ["Mean", "Std.", "Min", "Q1", "Median", "Q3", "Max", "Sum"] {
        assert!(table.lines().next().unwrap().contains(col));
    }
}

#[test]
fn zero_pages_is_a_config_error_and_writes_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let out = usmc(tmp.path(), &["generate", "--out", "z", "--set", "gen.pages=0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!tmp.path().join("z").exists());
}

#[test]
fn stats_on_likes_only_interactions() {
    let tmp = tempfile::tempdir().unwrap();
    let params = GenParams {
        pages: 6,
        posts_per_page: CountDist::Constant(40),
        min_posts: 40,
        max_posts: 40,
        user_pool: 1000,
        comments: CountDist::Zero,
        ..Default::default()
    };
    let corpus = write_pages(tmp.path(), "c.jsonl", generate_synthetic(&params, 2).unwrap().pages);
    ok(tmp.path(), &["stats", "--set", &corpus, "--out", "s", "--set", "eval.iterations=5"]);
    let s = tmp.path().join("s");
    let r2 = read(&s, "r2.csv");
    assert_eq!(r2.lines().next().unwrap(), "page,posts,lifetime,comments,likes,combined");
    assert_eq!(r2.lines().count(), 7);
    for line in r2.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[4], "1", "{line}");
        assert_eq!(cols[3], "0", "{line}");
    }
    let tests = read(&s, "tests.csv");
    let rows: Vec<Vec<&str>> = tests.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0][3], "2");
    assert_eq!(rows[1][3], "3");
    let nem = read(&s, "nemenyi.csv");
    assert_eq!(nem.lines().count(), 5);
    assert!(nem.lines().all(|l| l.split(',').count() == 5));
    assert!(read(&s, "cohens_d.csv").starts_with("strategy_a,strategy_b,grid,mean_a,mean_b,d\nlikes,comments,0.01,"));
    assert!(read(&s, "r2_boxplot.svg").contains("<rect"));
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    assert_eq!(usmc(dir, &["evaluate", "--set", "nope=1"]).status.code(), Some(2));
    assert_eq!(usmc(dir, &["evaluate", "--set", "eval.iterations=0"]).status.code(), Some(2));
    fs::write(dir.join("bad.toml"), "seed = [").unwrap();
    assert_eq!(usmc(dir, &["evaluate", "--config", "bad.toml"]).status.code(), Some(2));
    assert_eq!(usmc(dir, &["evaluate", "--set", "corpus.path=missing.jsonl"]).status.code(), Some(3));
    fs::write(dir.join("broken.jsonl"), "{\"page\": 1, \"snapshot\": 5}\n{\"post\": 1}\n").unwrap();
    let out = usmc(dir, &["report", "--set", "corpus.path=broken.jsonl"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let mut silent = toy_page();
    for p in &mut silent.posts {
        p.likers.clear();
        p.comments.clear();
    }
    let corpus = write_pages(dir, "silent.jsonl", vec![silent]);
    let out = usmc(dir, &["evaluate", "--set", &corpus, "--out", "e"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(read(&dir.join("e"), "skipped_pages.csv"), "page,reason\n1,zero interactions\n");
    let toy = toy_corpus(dir);
    assert_eq!(usmc(dir, &["stats", "--set", &toy, "--out", "s"]).status.code(), Some(4));
}

#[test]
fn manifest_reproduces_run_for_any_job_count() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    ok(
        dir,
        &[
            "evaluate", "--seed", "5", "--out", "a", "--jobs", "1", "--set", "gen.pages=5", "--set",
            "gen.posts_per_page=lognormal(3.5, 0.3)", "--set", "gen.min_posts=10", "--set", "eval.iterations=8",
        ],
    );
    ok(dir, &["evaluate", "--config", "a/manifest.toml", "--out", "b", "--jobs", "3"]);
    let mut compared = 0;
    for entry in fs::read_dir(dir.join("a")).unwrap() {
        let name = entry.unwrap().file_name().into_string().unwrap();
        if name.ends_with(".csv") || name.ends_with(".svg") {
            assert_eq!(read(&dir.join("a"), &name), read(&dir.join("b"), &name), "{name}");
            compared += 1;
        }
    }
    assert!(compared > 10);
    let m = read(&dir.join("b"), "manifest.toml");
    assert!(m.contains("seed = 5\n") && m.contains("tool.version = "));
}
