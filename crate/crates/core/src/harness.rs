//! Clique deciders through each reduction, verification campaigns against
//! the brute-force oracle, and timing runs.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::dyck::{dyck_distance, DyckError};
use crate::folding::{wrna_fold, FoldError};
use crate::grammars::{clique_grammar, to_cnf, CnfGrammar, Grammar};
use crate::graphs::{all_graphs, enumerate_k_cliques, gen_random_gnp, has_3k_clique, Graph};
use crate::recognition::{RecognitionError, Recognizer};
use crate::reductions::{
    build_cfg_string, build_dyck_instance_with_budget, build_rna_instance, dyck_alphabet, DyckPadding,
    ReductionError, DEFAULT_TOKEN_BUDGET,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Recognition(#[from] RecognitionError),
    #[error(transparent)]
    Fold(#[from] FoldError),
    #[error(transparent)]
    Dyck(#[from] DyckError),
    #[error("calibration failed: {0}")]
    Calibration(String),
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

/// CNF of `g`, computed once per distinct grammar text.
pub fn cached_cnf(g: &Grammar) -> Arc<CnfGrammar> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<CnfGrammar>>>> = OnceLock::new();
    let key = hex::encode(Sha256::digest(g.to_text().as_bytes()));
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.lock().expect("cache lock").get(&key) {
        return Arc::clone(c);
    }
    let cnf = Arc::new(to_cnf(g));
    cache.lock().expect("cache lock").entry(key).or_insert(cnf).clone()
}

pub fn clique_cnf() -> Arc<CnfGrammar> {
    static GRAMMAR: OnceLock<Grammar> = OnceLock::new();
    cached_cnf(GRAMMAR.get_or_init(clique_grammar))
}

/// A decision together with the score and threshold behind it, when the
/// target problem has one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub decision: bool,
    pub score: Option<u64>,
    pub threshold: Option<u64>,
    pub tokens: usize,
}

impl Outcome {
    fn short_circuit() -> Self {
        Self { decision: false, score: None, threshold: None, tokens: 0 }
    }
}

pub fn cfg_outcome(g: &Graph, k: usize, recognizer: Recognizer) -> Result<Outcome, HarnessError> {
    let w = build_cfg_string(g, k);
    if w.is_empty() {
        return Ok(Outcome::short_circuit());
    }
    let decision = recognizer.recognize(&clique_cnf(), &w)?;
    Ok(Outcome { decision, score: None, threshold: None, tokens: w.len() })
}

pub fn rna_outcome(g: &Graph, k: usize) -> Result<Outcome, HarnessError> {
    if enumerate_k_cliques(g, k).is_empty() {
        return Ok(Outcome::short_circuit());
    }
    let inst = build_rna_instance(g, k)?;
    let score = wrna_fold(&inst.sequence)?.score;
    let ec = inst.thresholds.ec;
    Ok(Outcome { decision: score == ec, score: Some(score), threshold: Some(ec), tokens: inst.sequence.tokens.len() })
}

fn dyck_score_memo() -> &'static Mutex<HashMap<String, u64>> {
    static MEMO: OnceLock<Mutex<HashMap<String, u64>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

pub fn dyck_outcome(g: &Graph, k: usize, padding: &DyckPadding, budget: u64) -> Result<Outcome, HarnessError> {
    if enumerate_k_cliques(g, k).is_empty() {
        return Ok(Outcome::short_circuit());
    }
    let inst = build_dyck_instance_with_budget(g, k, padding, budget)?;
    let key = format!("{}/{k}/{:?}", g.digest(), inst.ell);
    let cached = dyck_score_memo().lock().expect("memo lock").get(&key).copied();
    let score = match cached {
        Some(s) => s,
        None => {
            let s = dyck_distance(&inst.tokens, &dyck_alphabet())?;
            dyck_score_memo().lock().expect("memo lock").insert(key, s);
            s
        }
    };
    let ec = inst.thresholds.ec;
    Ok(Outcome { decision: score == ec, score: Some(score), threshold: Some(ec), tokens: inst.tokens.len() })
}

pub fn decide_via_cfg(g: &Graph, k: usize, recognizer: Recognizer) -> Result<bool, HarnessError> {
    Ok(cfg_outcome(g, k, recognizer)?.decision)
}

pub fn decide_via_rna(g: &Graph, k: usize) -> Result<bool, HarnessError> {
    Ok(rna_outcome(g, k)?.decision)
}

pub fn decide_via_dyck(g: &Graph, k: usize, padding: &DyckPadding) -> Result<bool, HarnessError> {
    Ok(dyck_outcome(g, k, padding, DEFAULT_TOKEN_BUDGET)?.decision)
}

/// Graph on `n` nodes containing a `3k`-clique on the first `3k` nodes
/// and nothing else, and the same graph with the edge `{1, 2}` removed.
fn calibration_pair(n: usize, k: usize) -> (Option<Graph>, Graph) {
    let m = 3 * k;
    let mut with = Graph::empty(n);
    let mut without = Graph::empty(n);
    for u in 1..=m.min(n) {
        for v in u + 1..=m.min(n) {
            with.add_edge(u, v).expect("valid edge");
            if (u, v) != (1, 2) {
                without.add_edge(u, v).expect("valid edge");
            }
        }
    }
    ((n >= m).then_some(with), without)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Calibration {
    pub n: usize,
    pub k: usize,
    pub padding: DyckPadding,
    pub clique_score: Option<u64>,
    pub clique_threshold: Option<u64>,
    pub plain_score: Option<u64>,
    pub plain_threshold: Option<u64>,
}

/// Checks the Dyck thresholds for `(n, k, padding)` on the smallest graphs
/// with and without a `3k`-clique: the first must score exactly `E_C`, the
/// second strictly more than its own `E_C`.
pub fn calibrate_dyck(n: usize, k: usize, padding: &DyckPadding, budget: u64) -> Result<Calibration, HarnessError> {
    let (with, without) = calibration_pair(n, k);
    let mut cal = Calibration {
        n,
        k,
        padding: *padding,
        clique_score: None,
        clique_threshold: None,
        plain_score: None,
        plain_threshold: None,
    };
    if let Some(g) = with {
        let o = dyck_outcome(&g, k, padding, budget)?;
        cal.clique_score = o.score;
        cal.clique_threshold = o.threshold;
        if o.score != o.threshold {
            return Err(HarnessError::Calibration(format!(
                "n={n} k={k}: clique graph scored {:?}, expected {:?}",
                o.score, o.threshold
            )));
        }
    }
    let o = dyck_outcome(&without, k, padding, budget)?;
    cal.plain_score = o.score;
    cal.plain_threshold = o.threshold;
    if let (Some(s), Some(t)) = (o.score, o.threshold) {
        if s <= t {
            return Err(HarnessError::Calibration(format!(
                "n={n} k={k}: clique-free graph scored {s}, not above {t}"
            )));
        }
    }
    Ok(cal)
}

/// A decider used in a campaign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "method")]
pub enum Method {
    Cfg { recognizer: Recognizer },
    Rna,
    Dyck {
        padding: DyckPadding,
    },
}

impl Method {
    pub fn name(&self) -> String {
        match self {
            Method::Cfg { recognizer } => format!("cfg-{}", recognizer.name()),
            Method::Rna => "rna".into(),
            Method::Dyck { padding } => match padding.base() {
                Some(b) => format!("dyck-{}-{b}", padding.name()),
                None => format!("dyck-{}", padding.name()),
            },
        }
    }

    pub fn outcome(&self, g: &Graph, k: usize, budget: u64) -> Result<Outcome, HarnessError> {
        match self {
            Method::Cfg { recognizer } => cfg_outcome(g, k, *recognizer),
            Method::Rna => rna_outcome(g, k),
            Method::Dyck { padding } => dyck_outcome(g, k, padding, budget),
        }
    }
}

/// Which graphs, parameters and deciders a campaign covers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignSpec {
    /// Every labelled graph is checked for these sizes.
    pub exhaustive: Vec<usize>,
    /// Seeded random graphs are drawn for these sizes.
    pub random: Vec<usize>,
    pub trials: usize,
    pub edge_probability: f64,
    pub ks: Vec<usize>,
    pub methods: Vec<Method>,
    pub seed: u64,
    pub workers: usize,
    /// Record wall times; off keeps reports byte-identical across runs.
    pub timing: bool,
    pub budget: u64,
}

impl Default for CampaignSpec {
    fn default() -> Self {
        Self {
            exhaustive: vec![],
            random: vec![],
            trials: 0,
            edge_probability: 0.5,
            ks: vec![1],
            methods: vec![Method::Cfg { recognizer: Recognizer::Chart }, Method::Rna],
            seed: 0,
            workers: 1,
            timing: false,
            budget: DEFAULT_TOKEN_BUDGET,
        }
    }
}

impl CampaignSpec {
    /// The corpus in a fixed order.
    pub fn graphs(&self) -> Vec<Graph> {
        let mut out = Vec::new();
        for &n in &self.exhaustive {
            out.extend(all_graphs(n));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for &n in &self.random {
            for _ in 0..self.trials {
                out.push(gen_random_gnp(n, self.edge_probability, rng.gen()));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignRecord {
    pub graph_digest: String,
    pub graph: String,
    pub n: usize,
    pub k: usize,
    pub method: String,
    pub decision: Option<bool>,
    pub oracle: bool,
    pub score: Option<u64>,
    pub threshold: Option<u64>,
    pub tokens: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

impl CampaignRecord {
    pub fn agrees(&self) -> bool {
        self.decision == Some(self.oracle)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub seed: u64,
    pub records: Vec<CampaignRecord>,
    pub calibrations: Vec<Calibration>,
    pub total: usize,
    pub agreements: usize,
    pub agreement_rate: f64,
    pub disagreements: Vec<CampaignRecord>,
}

impl CampaignReport {
    pub fn all_agree(&self) -> bool {
        self.disagreements.is_empty()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Pools several reports into one.
    pub fn merge(seed: u64, reports: Vec<CampaignReport>) -> Self {
        let mut records = Vec::new();
        let mut calibrations = Vec::new();
        for r in reports {
            records.extend(r.records);
            calibrations.extend(r.calibrations);
        }
        Self::from_records(seed, records, calibrations)
    }

    fn from_records(seed: u64, mut records: Vec<CampaignRecord>, calibrations: Vec<Calibration>) -> Self {
        records.sort_by(|a, b| {
            (&a.graph_digest, a.k, &a.method).cmp(&(&b.graph_digest, b.k, &b.method))
        });
        let total = records.len();
        let disagreements: Vec<CampaignRecord> = records.iter().filter(|r| !r.agrees()).cloned().collect();
        let agreements = total - disagreements.len();
        let agreement_rate = if total == 0 { 1.0 } else { agreements as f64 / total as f64 };
        Self { seed, records, calibrations, total, agreements, agreement_rate, disagreements }
    }
}

/// Runs every method on every corpus graph and compares with the oracle.
///
/// Dyck thresholds are calibrated first for each `(n, k, padding)` in use;
/// a failed calibration aborts the campaign.
pub fn run_campaign(spec: &CampaignSpec) -> Result<CampaignReport, HarnessError> {
    let graphs = spec.graphs();
    let mut calibrations = Vec::new();
    let mut sizes: Vec<usize> = graphs.iter().map(Graph::n).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers.max(1))
        .build()
        .map_err(|e| HarnessError::Pool(e.to_string()))?;

    let mut jobs = Vec::new();
    for method in &spec.methods {
        for &k in &spec.ks {
            if let Method::Dyck { padding } = method {
                for &n in &sizes {
                    calibrations.push(pool.install(|| calibrate_dyck(n, k, padding, spec.budget))?);
                }
            }
            for g in &graphs {
                jobs.push((method, k, g));
            }
        }
    }

    let records: Vec<CampaignRecord> = pool.install(|| {
        jobs.par_iter()
            .map(|&(method, k, g)| {
                let start = Instant::now();
                let result = method.outcome(g, k, spec.budget);
                let wall_ms = spec.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
                let (outcome, error) = match result {
                    Ok(o) => (Some(o), None),
                    Err(e) => (None, Some(e.to_string())),
                };
                CampaignRecord {
                    graph_digest: g.digest(),
                    graph: g.to_text(),
                    n: g.n(),
                    k,
                    method: method.name(),
                    decision: outcome.as_ref().map(|o| o.decision),
                    oracle: has_3k_clique(g, k),
                    score: outcome.as_ref().and_then(|o| o.score),
                    threshold: outcome.as_ref().and_then(|o| o.threshold),
                    tokens: outcome.as_ref().map_or(0, |o| o.tokens),
                    error,
                    wall_ms,
                }
            })
            .collect()
    });
    Ok(CampaignReport::from_records(spec.seed, records, calibrations))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchSpec {
    pub sizes: Vec<usize>,
    pub k: usize,
    pub recognizers: Vec<Recognizer>,
    pub repeats: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub method: String,
    pub n: usize,
    pub tokens: usize,
    pub median_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchTable {
    pub rows: Vec<BenchRow>,
    /// Log-log slope of time against token count, per method.
    pub slopes: Vec<(String, f64)>,
    /// Observations worth a second look, such as a slow kernel.
    pub flags: Vec<String>,
}

impl BenchTable {
    /// Tab-separated, one row per `(method, n)`.
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("method\tn\ttokens\tmedian_ms\n");
        for r in &self.rows {
            s.push_str(&format!("{}\t{}\t{}\t{:.3}\n", r.method, r.n, r.tokens, r.median_ms));
        }
        s
    }

    pub fn slope(&self, method: &str) -> Option<f64> {
        self.slopes.iter().find(|(m, _)| m == method).map(|&(_, s)| s)
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len();
    if m % 2 == 1 {
        xs[m / 2]
    } else {
        (xs[m / 2 - 1] + xs[m / 2]) / 2.0
    }
}

/// Times each recognizer on the CFG string of the complete graph `K_n`.
pub fn run_bench(spec: &BenchSpec) -> Result<BenchTable, HarnessError> {
    let cnf = clique_cnf();
    let mut rows = Vec::new();
    for &r in &spec.recognizers {
        for &n in &spec.sizes {
            let w = build_cfg_string(&Graph::complete(n), spec.k);
            let mut times = Vec::new();
            for _ in 0..spec.repeats.max(1) {
                let start = Instant::now();
                r.recognize(&cnf, &w)?;
                times.push(start.elapsed().as_secs_f64() * 1e3);
            }
            rows.push(BenchRow { method: r.name(), n, tokens: w.len(), median_ms: median(times) });
        }
    }
    let mut slopes = Vec::new();
    for r in &spec.recognizers {
        let pts: Vec<(f64, f64)> =
            rows.iter().filter(|row| row.method == r.name()).map(|row| (row.tokens as f64, row.median_ms)).collect();
        if let Some(s) = log_log_slope(&pts) {
            slopes.push((r.name(), s));
        }
    }
    let mut flags = Vec::new();
    if let Some(&n) = spec.sizes.iter().max() {
        let at = |name: &str| rows.iter().find(|row| row.method == name && row.n == n).map(|row| row.median_ms);
        for r in &spec.recognizers {
            if let (Recognizer::Valiant(_), Some(v), Some(c)) = (r, at(&r.name()), at("cyk")) {
                if v > 2.0 * c {
                    flags.push(format!("{} takes {v:.1} ms at n={n}, over twice cyk's {c:.1} ms", r.name()));
                }
            }
        }
    }
    Ok(BenchTable { rows, slopes, flags })
}
