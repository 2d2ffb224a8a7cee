//! Longest induced degree-2 path in the giant of `G(n, d/n)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{cell_stream, predictors, ExperimentRecord};
use crate::decompose::decompose;
use crate::error::Result;
use crate::generators::sample_gnp;

pub const CENSUS_ID: &str = "census";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusConfig {
    pub n: usize,
    pub d: f64,
    pub replicates: u64,
    pub seed: u64,
    /// Fraction of replicates that must reach `ln n / (4d)`.
    pub min_fraction_above_lower: f64,
    /// Fraction of replicates that must stay within `10 ln n / d`.
    pub min_fraction_below_upper: f64,
}

impl CensusConfig {
    pub fn new(n: usize, d: f64, replicates: u64, seed: u64) -> Self {
        CensusConfig {
            n,
            d,
            replicates,
            seed,
            min_fraction_above_lower: 0.9,
            min_fraction_below_upper: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusSummary {
    pub lower_threshold: f64,
    pub upper_threshold: f64,
    pub above_lower: Vec<bool>,
    pub below_upper: Vec<bool>,
    pub fraction_above_lower: f64,
    pub fraction_below_upper: f64,
    pub passes: bool,
    pub warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusOutcome {
    pub config: CensusConfig,
    pub records: Vec<ExperimentRecord>,
    pub summary: CensusSummary,
}

/// One replicate: giant, core and longest path interior.
pub fn census_cell(n: usize, d: f64, seed: u64, replicate: u64) -> Result<ExperimentRecord> {
    let mut r = ExperimentRecord::new(CENSUS_ID, n, d, seed, replicate);
    let stream = cell_stream(seed, CENSUS_ID, n, replicate);
    let g = sample_gnp(n, r.p, &stream)?;
    let report = decompose(&g)?;
    r.giant_size = report.giant_set().map_or(0, |s| s.len());
    r.core_size = report.core.len();
    r.longest_path = report.degree2.longest_interior;
    r.metrics.insert("edges".into(), g.edge_count() as f64);
    r.metrics
        .insert("pure_cycles".into(), report.degree2.pure_cycles.len() as f64);
    Ok(r)
}

pub fn run_path_census(cfg: &CensusConfig) -> Result<CensusOutcome> {
    let pred = predictors(cfg.n as f64, cfg.d)?;
    let warning = (cfg.d >= (cfg.n as f64).ln() / 5.0).then(|| {
        format!(
            "d = {} is not below ln n / 5 = {:.4}; the path-length law is not expected to hold",
            cfg.d,
            (cfg.n as f64).ln() / 5.0
        )
    });
    let mut records = (0..cfg.replicates)
        .into_par_iter()
        .map(|rep| census_cell(cfg.n, cfg.d, cfg.seed, rep))
        .collect::<Result<Vec<_>>>()?;
    let mut above_lower = Vec::new();
    let mut below_upper = Vec::new();
    for r in &mut records {
        let lo = r.longest_path as f64 >= pred.path_lower;
        let hi = r.longest_path as f64 <= pred.path_upper;
        r.metrics.insert("above_lower".into(), f64::from(u8::from(lo)));
        r.metrics.insert("below_upper".into(), f64::from(u8::from(hi)));
        above_lower.push(lo);
        below_upper.push(hi);
    }
    let frac = |v: &[bool]| {
        if v.is_empty() {
            0.0
        } else {
            v.iter().filter(|&&b| b).count() as f64 / v.len() as f64
        }
    };
    let fraction_above_lower = frac(&above_lower);
    let fraction_below_upper = frac(&below_upper);
    Ok(CensusOutcome {
        config: cfg.clone(),
        records,
        summary: CensusSummary {
            lower_threshold: pred.path_lower,
            upper_threshold: pred.path_upper,
            passes: fraction_above_lower >= cfg.min_fraction_above_lower
                && fraction_below_upper >= cfg.min_fraction_below_upper,
            above_lower,
            below_upper,
            fraction_above_lower,
            fraction_below_upper,
            warning,
        },
    })
}
