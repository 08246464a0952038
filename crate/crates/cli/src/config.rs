//! Flat key-value experiment configuration.
//!
//! Files are TOML with dotted keys (`gen.pages = 40`); nested tables are
//! flattened to the same dotted names. Precedence, lowest first: built-in
//! defaults, `--config` file, `--set key=value`, dedicated flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use toml::Value;
use usmc::corpus::{CountDist, GenParams};
use usmc::strategies::MetricWeights;
use usmc::{Axis, CostModel, InteractionDef, Strategy, StrategyKind};

use crate::error::{CliError, Result};

/// Every recognised key with a one-line description, in manifest order.
pub const KEYS: &[(&str, &str)] = &[
    ("seed", "root seed for generation and random crawl orders"),
    ("jobs", "worker threads, 0 = all cores; never changes results"),
    ("out", "output directory"),
    ("corpus.path", "corpus file to load; empty = generate from gen.*"),
    ("gen.seed", "generator seed; defaults to `seed`"),
    ("gen.pages", "number of pages"),
    ("gen.posts_per_page", "post count distribution"),
    ("gen.min_posts", "lower clamp on posts per page"),
    ("gen.max_posts", "upper clamp on posts per page"),
    ("gen.user_pool", "distinct user ids available per page"),
    ("gen.likes", "likes per post distribution"),
    ("gen.comments", "comments per post distribution"),
    ("gen.comment_likes", "likes per comment distribution"),
    ("gen.rho", "copula correlation of like and comment counts"),
    ("gen.start_time", "earliest post time, unix seconds"),
    ("gen.time_span", "seconds from start_time to the snapshot"),
    ("gen.smoothing", "uniform weight added to every active user"),
    ("gen.novelty", "weight of drawing a fresh user"),
    ("eval.strategies", "strategies to evaluate"),
    ("eval.axes", "coverage axes: posts, time"),
    ("eval.grid", "budget fractions for coverage curves"),
    ("eval.sample_grid", "budget fractions for network recall and Cohen's d"),
    ("eval.iterations", "repetitions of the random strategy"),
    ("eval.interactions", "likes+comments or likes+comments+comment_likes"),
    ("eval.degree_budget", "budget fraction of the degree-distribution samples"),
    ("eval.svg", "also render SVG plots"),
    ("eval.max_clique", "largest commenter set expanded into a clique"),
    ("cost.items_per_request", "items per paginated request"),
    ("cost.seconds_per_request", "model seconds per request"),
    ("weights.likes", "combined ranking weight of likes"),
    ("weights.comments", "combined ranking weight of comments"),
    ("weights.lifetime", "combined ranking weight of lifetime"),
    ("crawl.strategy", "strategy of the `crawl` command"),
    ("crawl.page", "page to crawl, 0 = every page"),
    ("crawl.stop", "whole, fraction:<f>, time:<seconds> or target:<interactions>"),
    ("crawl.iteration", "random stream index for `crawl`"),
    ("netstats.page", "page to export, 0 = every page"),
    ("netstats.strategy", "sample strategy, empty = full network"),
    ("netstats.budget", "sample budget fraction"),
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Stop {
    Whole,
    /// Share of the page's posts, taken from the head of the plan.
    Fraction(f64),
    /// Model seconds.
    Time(f64),
    /// Interactions under the configured definition.
    Target(u64),
}

impl std::fmt::Display for Stop {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Stop::Whole => write!(f, "whole"),
            Stop::Fraction(x) => write!(f, "fraction:{x}"),
            Stop::Time(t) => write!(f, "time:{t}"),
            Stop::Target(m) => write!(f, "target:{m}"),
        }
    }
}

impl std::str::FromStr for Stop {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let err = || format!("bad stop rule `{s}` (whole, fraction:<f>, time:<seconds>, target:<n>)");
        if s == "whole" {
            return Ok(Stop::Whole);
        }
        let (kind, v) = s.split_once(':').ok_or_else(err)?;
        let num = |v: &str| v.trim().parse::<f64>().map_err(|_| err());
        match kind.trim() {
            "fraction" => {
                let f = num(v)?;
                if (0.0..=1.0).contains(&f) {
                    Ok(Stop::Fraction(f))
                } else {
                    Err(err())
                }
            }
            "time" => {
                let t = num(v)?;
                if t >= 0.0 && t.is_finite() {
                    Ok(Stop::Time(t))
                } else {
                    Err(err())
                }
            }
            "target" => v.trim().parse().map(Stop::Target).map_err(|_| err()),
            _ => Err(err()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CorpusSource {
    Path(PathBuf),
    Generate { params: GenParams, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub jobs: usize,
    pub out: PathBuf,
    pub corpus: CorpusSource,
    pub gen: GenParams,
    pub gen_seed: u64,
    pub strategies: Vec<StrategyKind>,
    pub axes: Vec<Axis>,
    pub grid: Vec<f64>,
    pub sample_grid: Vec<f64>,
    pub iterations: usize,
    pub interactions: InteractionDef,
    pub degree_budget: f64,
    pub svg: bool,
    pub max_clique: usize,
    pub cost: CostModel,
    pub weights: MetricWeights,
    pub crawl_strategy: StrategyKind,
    pub crawl_page: u64,
    pub crawl_stop: Stop,
    pub crawl_iteration: u64,
    pub net_page: u64,
    pub net_strategy: Option<StrategyKind>,
    pub net_budget: f64,
}

/// Raw dotted-key map.
pub type Flat = BTreeMap<String, Value>;

pub fn flatten(table: &toml::Table, prefix: &str, out: &mut Flat) {
    for (k, v) in table {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match v {
            Value::Table(t) => flatten(t, &key, out),
            other => {
                out.insert(key, other.clone());
            }
        }
    }
}

pub fn read_file(path: &Path) -> Result<Flat> {
    let text = std::fs::read_to_string(path).map_err(|e| crate::error::io_err(path, e))?;
    let table: toml::Table = text
        .parse()
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let mut flat = Flat::new();
    flatten(&table, "", &mut flat);
    Ok(flat)
}

/// `key=value`; the value is parsed as a TOML value, falling back to a bare string.
pub fn parse_assignment(raw: &str) -> Result<(String, Value)> {
    let (k, v) = raw
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("expected key=value, got `{raw}`")))?;
    let (k, v) = (k.trim(), v.trim());
    let value = format!("v = {v}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(v.to_string()));
    Ok((k.to_string(), value))
}

fn bad(key: &str, want: &str, got: &Value) -> CliError {
    CliError::Config(format!("`{key}` must be {want}, got {got}"))
}

struct Reader<'a> {
    flat: &'a Flat,
}

impl Reader<'_> {
    fn get(&self, key: &str) -> Option<&Value> {
        self.flat.get(key)
    }

    fn u64(&self, key: &str, default: u64) -> Result<u64> {
        match self.get(key) {
            None => Ok(default),
            Some(Value::Integer(i)) if *i >= 0 => Ok(*i as u64),
            // Seeds above i64::MAX round-trip as strings.
            Some(Value::String(s)) => s.parse().map_err(|_| bad(key, "a non-negative integer", &Value::String(s.clone()))),
            Some(v) => Err(bad(key, "a non-negative integer", v)),
        }
    }

    fn usize(&self, key: &str, default: usize) -> Result<usize> {
        self.u64(key, default as u64).map(|v| v as usize)
    }

    fn i64(&self, key: &str, default: i64) -> Result<i64> {
        match self.get(key) {
            None => Ok(default),
            Some(Value::Integer(i)) => Ok(*i),
            Some(v) => Err(bad(key, "an integer", v)),
        }
    }

    fn f64(&self, key: &str, default: f64) -> Result<f64> {
        match self.get(key) {
            None => Ok(default),
            Some(Value::Float(x)) => Ok(*x),
            Some(Value::Integer(i)) => Ok(*i as f64),
            Some(v) => Err(bad(key, "a number", v)),
        }
    }

    fn bool(&self, key: &str, default: bool) -> Result<bool> {
        match self.get(key) {
            None => Ok(default),
            Some(Value::Boolean(b)) => Ok(*b),
            Some(v) => Err(bad(key, "true or false", v)),
        }
    }

    fn string(&self, key: &str) -> Result<Option<String>> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(v) => Err(bad(key, "a string", v)),
        }
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        match self.string(key)? {
            None => Ok(default),
            Some(s) => s.parse().map_err(|e| CliError::Config(format!("`{key}`: {e}"))),
        }
    }

    fn list<T: std::str::FromStr>(&self, key: &str, default: Vec<T>) -> Result<Vec<T>>
    where
        T::Err: std::fmt::Display,
    {
        let items: Vec<String> = match self.get(key) {
            None => return Ok(default),
            Some(Value::Array(a)) => a
                .iter()
                .map(|v| match v {
                    Value::String(s) => Ok(s.clone()),
                    other => Err(bad(key, "an array of strings", other)),
                })
                .collect::<Result<_>>()?,
            Some(Value::String(s)) => s.split(',').map(|x| x.trim().to_string()).collect(),
            Some(v) => return Err(bad(key, "an array of strings", v)),
        };
        items
            .iter()
            .map(|s| s.parse().map_err(|e| CliError::Config(format!("`{key}`: {e}"))))
            .collect()
    }

    fn grid(&self, key: &str, default: Vec<f64>) -> Result<Vec<f64>> {
        let grid = match self.get(key) {
            None => default,
            Some(Value::String(s)) if s == "dense" => usmc::metrics::dense_grid(),
            Some(Value::Array(a)) => a
                .iter()
                .map(|v| match v {
                    Value::Float(x) => Ok(*x),
                    Value::Integer(i) => Ok(*i as f64),
                    other => Err(bad(key, "an array of numbers", other)),
                })
                .collect::<Result<_>>()?,
            Some(v) => return Err(bad(key, "an array of fractions or \"dense\"", v)),
        };
        usmc::metrics::validate_grid(&grid)
            .map_err(|_| CliError::Config(format!("`{key}` must be ascending fractions in [0, 1]")))?;
        Ok(grid)
    }
}

impl ExperimentConfig {
    pub fn from_flat(flat: &Flat) -> Result<Self> {
        for key in flat.keys() {
            if !key.starts_with("tool.") && !KEYS.iter().any(|(k, _)| k == key) {
                return Err(CliError::Config(format!("unknown key `{key}`")));
            }
        }
        let r = Reader { flat };
        let d = GenParams::default();
        let seed = r.u64("seed", 1)?;
        let gen = GenParams {
            pages: r.usize("gen.pages", d.pages)?,
            posts_per_page: r.parsed::<CountDist>("gen.posts_per_page", d.posts_per_page)?,
            min_posts: r.usize("gen.min_posts", d.min_posts)?,
            max_posts: r.usize("gen.max_posts", d.max_posts)?,
            user_pool: r.u64("gen.user_pool", d.user_pool)?,
            likes: r.parsed("gen.likes", d.likes)?,
            comments: r.parsed("gen.comments", d.comments)?,
            comment_likes: r.parsed("gen.comment_likes", d.comment_likes)?,
            rho: r.f64("gen.rho", d.rho)?,
            start_time: r.i64("gen.start_time", d.start_time)?,
            time_span: r.i64("gen.time_span", d.time_span)?,
            smoothing: r.f64("gen.smoothing", d.smoothing)?,
            novelty: r.f64("gen.novelty", d.novelty)?,
        };
        let gen_seed = r.u64("gen.seed", seed)?;
        let corpus = match r.string("corpus.path")?.filter(|s| !s.is_empty()) {
            Some(p) => CorpusSource::Path(PathBuf::from(p)),
            None => CorpusSource::Generate {
                params: gen.clone(),
                seed: gen_seed,
            },
        };
        let cost = CostModel {
            items_per_request: r.u64("cost.items_per_request", 25)?,
            seconds_per_request: r.f64("cost.seconds_per_request", 1.0)?,
        };
        cost.validate().map_err(|e| CliError::Config(e.to_string()))?;
        let wd = MetricWeights::default();
        let weights = MetricWeights {
            likes: r.f64("weights.likes", wd.likes)?,
            comments: r.f64("weights.comments", wd.comments)?,
            lifetime: r.f64("weights.lifetime", wd.lifetime)?,
        };
        let iterations = r.usize("eval.iterations", 100)?;
        if iterations == 0 {
            return Err(CliError::Config("`eval.iterations` must be at least 1".into()));
        }
        let degree_budget = r.f64("eval.degree_budget", 0.2)?;
        if !(0.0..=1.0).contains(&degree_budget) {
            return Err(CliError::Config("`eval.degree_budget` must lie in [0, 1]".into()));
        }
        let strategies = r.list(
            "eval.strategies",
            vec![
                StrategyKind::Likes,
                StrategyKind::Comments,
                StrategyKind::Lifetime,
                StrategyKind::Chrono,
                StrategyKind::Random,
            ],
        )?;
        if strategies.is_empty() {
            return Err(CliError::Config("`eval.strategies` is empty".into()));
        }
        let net_strategy = match r.string("netstats.strategy")?.filter(|s| !s.is_empty()) {
            None => None,
            Some(s) => Some(s.parse().map_err(|e| CliError::Config(format!("`netstats.strategy`: {e}")))?),
        };
        let net_budget = r.f64("netstats.budget", 1.0)?;
        if !(0.0..=1.0).contains(&net_budget) {
            return Err(CliError::Config("`netstats.budget` must lie in [0, 1]".into()));
        }
        Ok(ExperimentConfig {
            crawl_strategy: r.parsed("crawl.strategy", StrategyKind::Likes)?,
            crawl_page: r.u64("crawl.page", 0)?,
            crawl_stop: r.parsed("crawl.stop", Stop::Whole)?,
            crawl_iteration: r.u64("crawl.iteration", 0)?,
            net_page: r.u64("netstats.page", 0)?,
            net_strategy,
            net_budget,
            seed,
            jobs: r.usize("jobs", 0)?,
            out: PathBuf::from(r.string("out")?.unwrap_or_else(|| "out".into())),
            corpus,
            gen,
            gen_seed,
            strategies,
            axes: r.list("eval.axes", vec![Axis::PostBudget, Axis::TimeBudget])?,
            grid: r.grid("eval.grid", usmc::metrics::dense_grid())?,
            sample_grid: r.grid("eval.sample_grid", usmc::metrics::network_grid())?,
            iterations,
            interactions: r.parsed("eval.interactions", InteractionDef::default())?,
            degree_budget,
            svg: r.bool("eval.svg", true)?,
            max_clique: r.usize("eval.max_clique", 100_000)?,
            cost,
            weights,
        })
    }

    /// The concrete ranking or sampling rule for `kind` under this config.
    pub fn strategy(&self, kind: StrategyKind) -> Strategy {
        match kind {
            StrategyKind::Combined => Strategy::Combined(self.weights),
            StrategyKind::Random => Strategy::Random {
                seed: self.seed,
                iteration: 0,
            },
            k => k.with_seed(self.seed, 0),
        }
    }

    /// Resolved configuration as a flat map; feeding it back through
    /// [`ExperimentConfig::from_flat`] reproduces `self`.
    pub fn to_flat(&self) -> Flat {
        let mut m = Flat::new();
        let mut put = |k: &str, v: Value| {
            m.insert(k.to_string(), v);
        };
        let s = |x: &str| Value::String(x.to_string());
        let int = |x: u64| {
            if x <= i64::MAX as u64 {
                Value::Integer(x as i64)
            } else {
                Value::String(x.to_string())
            }
        };
        let floats = |g: &[f64]| Value::Array(g.iter().map(|&x| Value::Float(x)).collect());
        let strings = |xs: Vec<String>| Value::Array(xs.into_iter().map(Value::String).collect());
        put("seed", int(self.seed));
        put("jobs", int(self.jobs as u64));
        put("out", s(&self.out.display().to_string()));
        put(
            "corpus.path",
            s(&match &self.corpus {
                CorpusSource::Path(p) => p.display().to_string(),
                CorpusSource::Generate { .. } => String::new(),
            }),
        );
        let g = &self.gen;
        put("gen.seed", int(self.gen_seed));
        put("gen.pages", int(g.pages as u64));
        put("gen.posts_per_page", s(&g.posts_per_page.to_string()));
        put("gen.min_posts", int(g.min_posts as u64));
        put("gen.max_posts", int(g.max_posts as u64));
        put("gen.user_pool", int(g.user_pool));
        put("gen.likes", s(&g.likes.to_string()));
        put("gen.comments", s(&g.comments.to_string()));
        put("gen.comment_likes", s(&g.comment_likes.to_string()));
        put("gen.rho", Value::Float(g.rho));
        put("gen.start_time", Value::Integer(g.start_time));
        put("gen.time_span", Value::Integer(g.time_span));
        put("gen.smoothing", Value::Float(g.smoothing));
        put("gen.novelty", Value::Float(g.novelty));
        put("eval.strategies", strings(self.strategies.iter().map(|k| k.to_string()).collect()));
        put("eval.axes", strings(self.axes.iter().map(|a| a.to_string()).collect()));
        put("eval.grid", floats(&self.grid));
        put("eval.sample_grid", floats(&self.sample_grid));
        put("eval.iterations", int(self.iterations as u64));
        put("eval.interactions", s(self.interactions.token()));
        put("eval.degree_budget", Value::Float(self.degree_budget));
        put("eval.svg", Value::Boolean(self.svg));
        put("eval.max_clique", int(self.max_clique as u64));
        put("cost.items_per_request", int(self.cost.items_per_request));
        put("cost.seconds_per_request", Value::Float(self.cost.seconds_per_request));
        put("weights.likes", Value::Float(self.weights.likes));
        put("weights.comments", Value::Float(self.weights.comments));
        put("weights.lifetime", Value::Float(self.weights.lifetime));
        put("crawl.strategy", s(self.crawl_strategy.token()));
        put("crawl.page", int(self.crawl_page));
        put("crawl.stop", s(&self.crawl_stop.to_string()));
        put("crawl.iteration", int(self.crawl_iteration));
        put("netstats.page", int(self.net_page));
        put("netstats.strategy", s(self.net_strategy.map_or("", |k| k.token())));
        put("netstats.budget", Value::Float(self.net_budget));
        m
    }
}

/// `key = value` lines in [`KEYS`] order, then any extra keys sorted.
pub fn render_flat(flat: &Flat) -> String {
    let mut out = String::new();
    for (k, _) in KEYS {
        if let Some(v) = flat.get(*k) {
            out.push_str(&format!("{k} = {v}\n"));
        }
    }
    for (k, v) in flat {
        if !KEYS.iter().any(|(key, _)| key == k) {
            out.push_str(&format!("{k} = {v}\n"));
        }
    }
    out
}
