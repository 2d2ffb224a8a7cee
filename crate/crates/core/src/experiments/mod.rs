//! Seeded experiment harness.
//!
//! Every experiment is a grid of cells `(n, d, replicate)`; a cell draws all
//! of its randomness from the stream `(seed, experiment/n, replicate)` and
//! yields one [`ExperimentRecord`], so any row can be replayed on its own.
//! Cells run in parallel and rows are sorted before they are written.

mod census;
mod expansion;
mod measure;
mod obstruction;
pub mod plot;
mod scaling;

pub use census::{census_cell, run_path_census, CensusConfig, CensusOutcome, CensusSummary};
pub use expansion::{
    expansion_cell, run_expansion_check, ExpansionConfig, ExpansionOutcome, ExpansionSummary,
};
pub use measure::{measure_component, MeasureConfig, Measurement};
pub use obstruction::{
    obstruction_graph, run_obstruction_demo, ObstructionConfig, ObstructionGraph,
    ObstructionReport,
};
pub use scaling::{
    run_scaling_study, scaling_cell, FitReport, FitRow, Regime, ScalingConfig, ScalingOutcome,
};

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::ln_binomial;
use crate::rng::RngSeed;

/// One replicate of one experiment cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub experiment_id: String,
    pub n: usize,
    pub d: f64,
    /// Always `d / n`.
    pub p: f64,
    pub seed: u64,
    pub replicate: u64,
    pub giant_size: usize,
    pub core_size: usize,
    pub longest_path: usize,
    pub t_mix: Option<u64>,
    pub t_mix_cesaro: Option<u64>,
    pub phi_global: Option<f64>,
    pub bound_lower: Option<f64>,
    pub bound_js: Option<f64>,
    pub bound_dyadic: Option<f64>,
    pub censored: bool,
    pub metrics: BTreeMap<String, f64>,
}

/// Column order of the CSV output.
#[derive(Serialize)]
struct CsvRow<'a> {
    experiment_id: &'a str,
    n: usize,
    d: f64,
    p: f64,
    seed: u64,
    replicate: u64,
    giant_size: usize,
    core_size: usize,
    longest_path: usize,
    t_mix: Option<u64>,
    t_mix_cesaro: Option<u64>,
    phi_global: Option<f64>,
    bound_lower: Option<f64>,
    bound_js: Option<f64>,
    bound_dyadic: Option<f64>,
    censored: bool,
}

impl ExperimentRecord {
    pub fn new(experiment_id: &str, n: usize, d: f64, seed: u64, replicate: u64) -> Self {
        ExperimentRecord {
            experiment_id: experiment_id.to_string(),
            n,
            d,
            p: if n == 0 { 0.0 } else { d / n as f64 },
            seed,
            replicate,
            giant_size: 0,
            core_size: 0,
            longest_path: 0,
            t_mix: None,
            t_mix_cesaro: None,
            phi_global: None,
            bound_lower: None,
            bound_js: None,
            bound_dyadic: None,
            censored: false,
            metrics: BTreeMap::new(),
        }
    }

    /// The random stream of this cell.
    pub fn stream(&self) -> RngSeed {
        cell_stream(self.seed, &self.experiment_id, self.n, self.replicate)
    }

    fn row(&self) -> CsvRow<'_> {
        CsvRow {
            experiment_id: &self.experiment_id,
            n: self.n,
            d: self.d,
            p: self.p,
            seed: self.seed,
            replicate: self.replicate,
            giant_size: self.giant_size,
            core_size: self.core_size,
            longest_path: self.longest_path,
            t_mix: self.t_mix,
            t_mix_cesaro: self.t_mix_cesaro,
            phi_global: self.phi_global,
            bound_lower: self.bound_lower,
            bound_js: self.bound_js,
            bound_dyadic: self.bound_dyadic,
            censored: self.censored,
        }
    }

    /// This record as one CSV line (no header, trailing newline).
    pub fn csv_line(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(Vec::new());
        w.serialize(self.row()).expect("in-memory write");
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }
}

pub(crate) fn cell_stream(seed: u64, experiment_id: &str, n: usize, replicate: u64) -> RngSeed {
    RngSeed::stream(seed, format!("{experiment_id}/n={n}"), replicate)
}

pub const CSV_HEADER: &str = "experiment_id,n,d,p,seed,replicate,giant_size,core_size,longest_path,\
t_mix,t_mix_cesaro,phi_global,bound_lower,bound_js,bound_dyadic,censored";

/// Sorts rows by `(experiment, n, d, replicate)`.
pub fn sort_records(records: &mut [ExperimentRecord]) {
    records.sort_by(|a, b| {
        a.experiment_id
            .cmp(&b.experiment_id)
            .then(a.n.cmp(&b.n))
            .then(a.d.total_cmp(&b.d))
            .then(a.replicate.cmp(&b.replicate))
    });
}

/// CSV text of the records in sorted order. A config block, when given, is
/// written first as `#`-prefixed lines.
pub fn to_csv(records: &[ExperimentRecord], config: Option<&serde_json::Value>) -> String {
    let mut sorted = records.to_vec();
    sort_records(&mut sorted);
    let mut out = String::new();
    if let Some(c) = config {
        out.push_str(&config_comment(c));
    }
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &sorted {
        out.push_str(&r.csv_line());
    }
    out
}

/// `# config: {...}` followed by a newline.
pub fn config_comment(config: &serde_json::Value) -> String {
    format!("# config: {config}\n")
}

/// Closed-form predictors for one `(n, d)` cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PredictorSet {
    /// `(ln n / d)^2`
    pub local_obstruction: f64,
    /// `ln n / ln d`
    pub diameter_term: f64,
    /// `sqrt(ln n ln ln n) / n`
    pub threshold_p: f64,
    /// `ln n / (4d)`
    pub path_lower: f64,
    /// `10 ln n / d`
    pub path_upper: f64,
}

/// Predictors at `n` (real-valued, so `n = e^9` is allowed) and `d > 1`.
pub fn predictors(n: f64, d: f64) -> Result<PredictorSet> {
    if !(n >= 3.0) {
        return Err(Error::param("n", format!("{n} is below 3")));
    }
    if !(d > 1.0) {
        return Err(Error::param(
            "d",
            format!("{d} is not above 1; the giant component needs d > 1"),
        ));
    }
    let ln_n = n.ln();
    Ok(PredictorSet {
        local_obstruction: (ln_n / d).powi(2),
        diameter_term: ln_n / d.ln(),
        threshold_p: (ln_n * ln_n.ln()).sqrt() / n,
        path_lower: ln_n / (4.0 * d),
        path_upper: 10.0 * ln_n / d,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TreeCount {
    pub ln_expected: f64,
    pub expected: f64,
    /// `ln(n (e d)^k)` with `d = pn`.
    pub ln_upper_bound: f64,
}

/// Expected number of `k`-vertex trees in `G(n, p)`:
/// `C(n, k) k^{k-2} p^{k-1}`, with `k^{k-2} = 1` at `k = 1`.
pub fn expected_tree_count(n: u64, k: u64, p: f64) -> Result<TreeCount> {
    if k == 0 || k > n {
        return Err(Error::param("k", format!("{k} is outside 1..={n}")));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::param("p", format!("{p} is outside (0, 1]")));
    }
    let (nf, kf) = (n as f64, k as f64);
    let ln_expected = ln_binomial(nf, kf) + (kf - 2.0) * kf.ln() + (kf - 1.0) * p.ln();
    let d = p * nf;
    Ok(TreeCount {
        ln_expected,
        expected: ln_expected.exp(),
        ln_upper_bound: nf.ln() + kf * (1.0 + d.ln()),
    })
}
