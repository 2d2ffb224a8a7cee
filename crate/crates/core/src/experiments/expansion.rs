//! Edge expansion of sampled connected sets of the giant.
//!
//! Sets come from truncated breadth-first search and from random frontier
//! growth, with `|S| >= c ln n / d` and `d(S) <= d(H) / 2`. The harness
//! reports empirical extremes; fitted constants are descriptive only.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{cell_stream, ExperimentRecord};
use crate::decompose::decompose;
use crate::error::{Error, Result};
use crate::generators::sample_gnp;
use crate::graph::{Graph, VertexSet};
use crate::rng::below;

pub const EXPANSION_ID: &str = "expansion";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionConfig {
    pub n: usize,
    pub d: f64,
    pub replicates: u64,
    pub samples_per_graph: usize,
    pub seed: u64,
    /// Minimum set size is `ceil(c ln n / d)`.
    pub c: f64,
    /// Maximum set size is this multiple of the minimum (capped at half the
    /// giant).
    pub max_size_factor: usize,
}

impl ExpansionConfig {
    pub fn new(n: usize, d: f64, replicates: u64, samples_per_graph: usize, seed: u64) -> Self {
        ExpansionConfig {
            n,
            d,
            replicates,
            samples_per_graph,
            seed,
            c: 1.0,
            max_size_factor: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionSummary {
    /// Least `e_out(S) / (d |S|)` over all samples.
    pub epsilon_hat: Option<f64>,
    /// Least `e_out(S) / |S|`.
    pub epsilon_abs_hat: Option<f64>,
    /// `1 / min |S cap core| / |S|`.
    pub l_hat: Option<f64>,
    /// Largest `d(S) / |S|`.
    pub big_l_hat: Option<f64>,
    pub samples: u64,
    pub skipped: u64,
    /// Sets with `|S| <= n / (60 d^2)` and `e(S) > 2|S|`.
    pub violations: u64,
    pub all_positive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionOutcome {
    pub config: ExpansionConfig,
    pub records: Vec<ExperimentRecord>,
    pub summary: ExpansionSummary,
}

/// Reusable membership marks.
struct Marks {
    stamp: Vec<u32>,
    now: u32,
}

impl Marks {
    fn new(n: usize) -> Self {
        Marks {
            stamp: vec![0; n],
            now: 0,
        }
    }

    fn reset(&mut self) {
        self.now += 2;
    }

    fn set(&mut self, v: usize, kind: u32) {
        self.stamp[v] = self.now + kind;
    }

    fn is(&self, v: usize, kind: u32) -> bool {
        self.stamp[v] == self.now + kind
    }
}

const MEMBER: u32 = 1;
const SEEN: u32 = 2;

fn bfs_prefix(g: &Graph, root: usize, size: usize, marks: &mut Marks) -> Vec<usize> {
    marks.reset();
    let mut order = vec![root];
    marks.set(root, MEMBER);
    let mut head = 0;
    while head < order.len() && order.len() < size {
        let v = order[head];
        head += 1;
        for (w, _) in g.neighbors(v) {
            if order.len() == size {
                break;
            }
            if !marks.is(w, MEMBER) {
                marks.set(w, MEMBER);
                order.push(w);
            }
        }
    }
    order
}

fn random_growth<R: Rng>(g: &Graph, root: usize, size: usize, marks: &mut Marks, rng: &mut R) -> Vec<usize> {
    marks.reset();
    let mut set = Vec::with_capacity(size);
    let mut frontier = vec![root];
    marks.set(root, SEEN);
    while set.len() < size && !frontier.is_empty() {
        let k = below(rng, frontier.len() as u64) as usize;
        let v = frontier.swap_remove(k);
        marks.set(v, MEMBER);
        set.push(v);
        for (w, _) in g.neighbors(v) {
            if !marks.is(w, MEMBER) && !marks.is(w, SEEN) {
                marks.set(w, SEEN);
                frontier.push(w);
            }
        }
    }
    // Leave only members marked.
    for &v in &frontier {
        marks.stamp[v] = 0;
    }
    set
}

struct SetStats {
    size: usize,
    degree: u64,
    e_out: u64,
    e_in: u64,
    in_core: usize,
}

fn stats(g: &Graph, set: &[usize], marks: &Marks, core: &VertexSet) -> SetStats {
    let mut degree = 0;
    let mut e_out = 0;
    for &v in set {
        degree += g.degree(v);
        for (w, m) in g.neighbors(v) {
            if !marks.is(w, MEMBER) {
                e_out += m as u64;
            }
        }
    }
    SetStats {
        size: set.len(),
        degree,
        e_out,
        e_in: (degree - e_out) / 2,
        in_core: set.iter().filter(|&&v| core.contains(v)).count(),
    }
}

/// One replicate: samples sets in its giant and stores the extremes.
pub fn expansion_cell(cfg: &ExpansionConfig, replicate: u64) -> Result<ExperimentRecord> {
    if !(cfg.d > 1.0) {
        return Err(Error::param("d", format!("{} is not above 1", cfg.d)));
    }
    let mut r = ExperimentRecord::new(EXPANSION_ID, cfg.n, cfg.d, cfg.seed, replicate);
    let stream = cell_stream(cfg.seed, EXPANSION_ID, cfg.n, replicate);
    let g = sample_gnp(cfg.n, r.p, &stream)?;
    let report = decompose(&g)?;
    let Some(giant) = report.giant_set() else {
        return Ok(r);
    };
    r.giant_size = giant.len();
    r.core_size = report.core.len();
    r.longest_path = report.degree2.longest_interior;
    let volume = g.volume(giant.as_slice());
    let ln_n = (cfg.n as f64).ln();
    let min_size = ((cfg.c * ln_n / cfg.d).ceil() as usize).max(2);
    let max_size = (min_size * cfg.max_size_factor).min(giant.len() / 2);
    let small_limit = cfg.n as f64 / (60.0 * cfg.d * cfg.d);
    let mut rng = stream.rng_for("sets");
    let mut marks = Marks::new(g.n());
    let (mut eps, mut eps_abs, mut core_frac, mut big_l) = (f64::INFINITY, f64::INFINITY, f64::INFINITY, 0f64);
    let (mut samples, mut skipped, mut violations) = (0u64, 0u64, 0u64);
    if max_size >= min_size {
        for i in 0..cfg.samples_per_graph {
            let root = giant.as_slice()[below(&mut rng, giant.len() as u64) as usize];
            let size = min_size + below(&mut rng, (max_size - min_size + 1) as u64) as usize;
            let set = if i % 2 == 0 {
                bfs_prefix(&g, root, size, &mut marks)
            } else {
                random_growth(&g, root, size, &mut marks, &mut rng)
            };
            let s = stats(&g, &set, &marks, &report.core);
            if 2 * s.degree > volume || s.size < min_size {
                skipped += 1;
                continue;
            }
            samples += 1;
            let size = s.size as f64;
            eps = eps.min(s.e_out as f64 / (cfg.d * size));
            eps_abs = eps_abs.min(s.e_out as f64 / size);
            core_frac = core_frac.min(s.in_core as f64 / size);
            big_l = big_l.max(s.degree as f64 / size);
            if size <= small_limit && s.e_in > 2 * s.size as u64 {
                violations += 1;
            }
        }
    }
    let m = &mut r.metrics;
    m.insert("samples".into(), samples as f64);
    m.insert("skipped".into(), skipped as f64);
    m.insert("violations".into(), violations as f64);
    m.insert("min_size".into(), min_size as f64);
    if samples > 0 {
        m.insert("min_eout_per_d_size".into(), eps);
        m.insert("min_eout_per_size".into(), eps_abs);
        m.insert("min_core_fraction".into(), core_frac);
        m.insert("max_degree_per_size".into(), big_l);
    }
    Ok(r)
}

pub fn run_expansion_check(cfg: &ExpansionConfig) -> Result<ExpansionOutcome> {
    let records = (0..cfg.replicates)
        .into_par_iter()
        .map(|rep| expansion_cell(cfg, rep))
        .collect::<Result<Vec<_>>>()?;
    let get = |r: &ExperimentRecord, k: &str| r.metrics.get(k).copied();
    let fold = |k: &str, init: f64, f: fn(f64, f64) -> f64| {
        let vals: Vec<f64> = records.iter().filter_map(|r| get(r, k)).collect();
        (!vals.is_empty()).then(|| vals.into_iter().fold(init, f))
    };
    let eps = fold("min_eout_per_d_size", f64::INFINITY, f64::min);
    let sum = |k: &str| records.iter().filter_map(|r| get(r, k)).sum::<f64>() as u64;
    Ok(ExpansionOutcome {
        config: cfg.clone(),
        summary: ExpansionSummary {
            epsilon_hat: eps,
            epsilon_abs_hat: fold("min_eout_per_size", f64::INFINITY, f64::min),
            l_hat: fold("min_core_fraction", f64::INFINITY, f64::min)
                .map(|f| if f > 0.0 { 1.0 / f } else { f64::INFINITY }),
            big_l_hat: fold("max_degree_per_size", 0.0, f64::max),
            samples: sum("samples"),
            skipped: sum("skipped"),
            violations: sum("violations"),
            all_positive: eps.is_some_and(|e| e > 0.0),
        },
        records,
    })
}
