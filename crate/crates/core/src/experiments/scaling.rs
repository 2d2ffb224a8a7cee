//! Mixing-time scaling of the giant of `G(n, d/n)` across an `n` grid.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{cell_stream, measure_component, predictors, ExperimentRecord, MeasureConfig};
use crate::decompose::decompose;
use crate::error::{Error, Result};
use crate::generators::sample_gnp;

/// How `d` depends on `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime", rename_all = "kebab-case")]
pub enum Regime {
    ConstantD { d: f64 },
    /// `d = sqrt(ln n ln ln n)`
    Threshold,
    /// `d = 2 ln n`
    Dense,
}

impl Regime {
    pub fn d_for(&self, n: usize) -> f64 {
        let ln_n = (n as f64).ln();
        match *self {
            Regime::ConstantD { d } => d,
            Regime::Threshold => (ln_n * ln_n.ln()).sqrt(),
            Regime::Dense => 2.0 * ln_n,
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            Regime::ConstantD { .. } => "scaling-constant-d",
            Regime::Threshold => "scaling-threshold",
            Regime::Dense => "scaling-dense",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingConfig {
    pub regime: Regime,
    pub ns: Vec<usize>,
    pub replicates: u64,
    pub seed: u64,
    pub measure: MeasureConfig,
    /// Largest accepted `|T_mix - ln n / ln d|`.
    pub diameter_tolerance: f64,
}

impl ScalingConfig {
    pub fn new(regime: Regime, ns: Vec<usize>, replicates: u64, seed: u64) -> Self {
        ScalingConfig {
            regime,
            ns,
            replicates,
            seed,
            measure: MeasureConfig::default(),
            diameter_tolerance: 3.0,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.ns.is_empty() {
            return Err(Error::param("n", "empty grid"));
        }
        for &n in &self.ns {
            predictors(n as f64, self.regime.d_for(n))?;
        }
        Ok(())
    }
}

/// Means over the completed replicates of one grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitRow {
    pub n: usize,
    pub d: f64,
    pub local_obstruction: f64,
    pub diameter_term: f64,
    pub completed: u64,
    pub censored: u64,
    pub mean_t_mix: Option<f64>,
    pub mean_t_mix_cesaro: Option<f64>,
    /// Mean of `T'_mix / (ln n / d)^2`.
    pub cesaro_ratio: Option<f64>,
    /// Mean of `T_mix / (ln n / ln d)`.
    pub mixing_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    pub experiment_id: String,
    pub rows: Vec<FitRow>,
    /// Max over min of the per-`n` Cesaro ratio.
    pub cesaro_ratio_spread: Option<f64>,
    pub mixing_ratio_spread: Option<f64>,
    /// Replicates with `|T_mix - ln n / ln d| <= tolerance`.
    pub within_tolerance: u64,
    pub tolerance: f64,
    pub measured: u64,
    pub censored: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingOutcome {
    pub config: ScalingConfig,
    pub records: Vec<ExperimentRecord>,
    pub fit: FitReport,
}

/// One `(n, replicate)` cell, replayable on its own.
pub fn scaling_cell(cfg: &ScalingConfig, n: usize, replicate: u64) -> Result<ExperimentRecord> {
    let d = cfg.regime.d_for(n);
    let pred = predictors(n as f64, d)?;
    let id = cfg.regime.id();
    let mut r = ExperimentRecord::new(id, n, d, cfg.seed, replicate);
    let stream = cell_stream(cfg.seed, id, n, replicate);
    let g = sample_gnp(n, r.p, &stream)?;
    let report = decompose(&g)?;
    let m = &mut r.metrics;
    m.insert("pred_local_obstruction".into(), pred.local_obstruction);
    m.insert("pred_diameter".into(), pred.diameter_term);
    let Some(giant) = report.giant_set().cloned() else {
        return Ok(r);
    };
    r.giant_size = giant.len();
    r.core_size = report.core.len();
    r.longest_path = report.degree2.longest_interior;
    if giant.len() < 2 {
        return Ok(r);
    }
    let measured = measure_component(&g, &giant, &report, &cfg.measure, &stream.child("measure"))?;
    measured.fill(&mut r);
    if let Some(t) = r.t_mix_cesaro {
        r.metrics
            .insert("ratio_cesaro_local".into(), t as f64 / pred.local_obstruction);
    }
    if let Some(t) = r.t_mix {
        r.metrics
            .insert("ratio_mixing_diameter".into(), t as f64 / pred.diameter_term);
        r.metrics
            .insert("mixing_minus_diameter".into(), t as f64 - pred.diameter_term);
    }
    Ok(r)
}

fn mean(v: &[f64]) -> Option<f64> {
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

fn spread(v: impl Iterator<Item = f64>) -> Option<f64> {
    let v: Vec<f64> = v.collect();
    if v.is_empty() {
        return None;
    }
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    Some(hi / lo)
}

fn fit(cfg: &ScalingConfig, records: &[ExperimentRecord]) -> Result<FitReport> {
    let mut by_n: BTreeMap<usize, Vec<&ExperimentRecord>> = BTreeMap::new();
    for r in records {
        by_n.entry(r.n).or_default().push(r);
    }
    let mut rows = Vec::new();
    let (mut within, mut measured, mut censored) = (0, 0, 0);
    for (&n, cell) in &by_n {
        let d = cfg.regime.d_for(n);
        let pred = predictors(n as f64, d)?;
        let pick = |f: fn(&ExperimentRecord) -> Option<u64>| -> Vec<f64> {
            cell.iter().filter_map(|r| f(r)).map(|t| t as f64).collect()
        };
        let t_mix = pick(|r| r.t_mix);
        let cesaro = pick(|r| r.t_mix_cesaro);
        let cell_censored = cell.iter().filter(|r| r.censored).count() as u64;
        for &t in &t_mix {
            measured += 1;
            if (t - pred.diameter_term).abs() <= cfg.diameter_tolerance {
                within += 1;
            }
        }
        censored += cell_censored;
        rows.push(FitRow {
            n,
            d,
            local_obstruction: pred.local_obstruction,
            diameter_term: pred.diameter_term,
            completed: cell.len() as u64 - cell_censored,
            censored: cell_censored,
            mean_t_mix: mean(&t_mix),
            mean_t_mix_cesaro: mean(&cesaro),
            cesaro_ratio: mean(&cesaro).map(|m| m / pred.local_obstruction),
            mixing_ratio: mean(&t_mix).map(|m| m / pred.diameter_term),
        });
    }
    Ok(FitReport {
        experiment_id: cfg.regime.id().to_string(),
        cesaro_ratio_spread: spread(rows.iter().filter_map(|r| r.cesaro_ratio)),
        mixing_ratio_spread: spread(rows.iter().filter_map(|r| r.mixing_ratio)),
        rows,
        within_tolerance: within,
        tolerance: cfg.diameter_tolerance,
        measured,
        censored,
    })
}

pub fn run_scaling_study(cfg: &ScalingConfig) -> Result<ScalingOutcome> {
    cfg.validate()?;
    let cells: Vec<(usize, u64)> = cfg
        .ns
        .iter()
        .flat_map(|&n| (0..cfg.replicates).map(move |rep| (n, rep)))
        .collect();
    let mut records = cells
        .into_par_iter()
        .map(|(n, rep)| scaling_cell(cfg, n, rep))
        .collect::<Result<Vec<_>>>()?;
    super::sort_records(&mut records);
    let fit = fit(cfg, &records)?;
    Ok(ScalingOutcome {
        config: cfg.clone(),
        records,
        fit,
    })
}
