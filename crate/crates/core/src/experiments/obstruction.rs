//! A long induced path between two random cubic blobs.
//!
//! A walk started at the middle of a path with `2l + 1` interior vertices
//! needs on the order of `l^2` steps to leave it, so the mixing time of the
//! whole graph is at least that large.

use serde::{Deserialize, Serialize};

use super::{measure_component, MeasureConfig, Measurement};
use crate::conductance::bound_lower;
use crate::decompose::{decompose, Degree2Path};
use crate::error::{Error, Result};
use crate::generators::{sample_configuration, DegreeSequence};
use crate::graph::{Graph, VertexSet};
use crate::rng::RngSeed;
use crate::walk::trajectory_escape_probability;

const MAX_ATTEMPTS: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObstructionConfig {
    /// Half-length: the path has `2l + 1` interior vertices.
    pub l: usize,
    /// Vertices per blob (even).
    pub expander_n: usize,
    pub walks: u64,
    pub seed: u64,
    pub measure: MeasureConfig,
}

impl ObstructionConfig {
    pub fn new(l: usize, expander_n: usize, walks: u64, seed: u64) -> Self {
        let measure = MeasureConfig {
            // The half-split set is the relevant witness; the profile search
            // is not needed for the demo.
            conductance: false,
            max_steps: 1_000_000,
            ..MeasureConfig::default()
        };
        ObstructionConfig {
            l,
            expander_n,
            walks,
            seed,
            measure,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ObstructionGraph {
    pub graph: Graph,
    /// Blob endpoint, interior, blob endpoint.
    pub path: Degree2Path,
    /// First blob plus the `l` interior vertices next to it.
    pub half: VertexSet,
    /// Number of blob attempts that were rejected.
    pub rejected: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObstructionReport {
    pub config: ObstructionConfig,
    pub n: usize,
    pub edges: u64,
    pub rejected_blobs: u64,
    pub escape_at_zero: f64,
    pub escape_steps: u64,
    pub escape_probability: f64,
    pub bound_lower: f64,
    pub measurement: Measurement,
    pub t_mix: Option<u64>,
    pub t_mix_cesaro: Option<u64>,
    /// `bound_lower <= T_mix`; `None` when `T_mix` was censored.
    pub lower_bound_holds: Option<bool>,
}

/// Simple connected cubic multigraph-free blob on `m` vertices.
fn blob(m: usize, seed: &RngSeed, rejected: &mut u64) -> Result<Graph> {
    let ds = DegreeSequence::regular(m, 3)?;
    for attempt in 0..MAX_ATTEMPTS {
        let g = sample_configuration(&ds, &seed.with_replicate(attempt))?;
        if !g.is_multigraph() && g.is_connected_within(&VertexSet::full(m)) {
            return Ok(g);
        }
        *rejected += 1;
    }
    Err(Error::param("expander_n", "no simple connected cubic blob found"))
}

/// Blob A on `0..m`, blob B on `m..2m`, path interior on `2m..2m+2l+1`,
/// joining vertex 0 to vertex `m`.
pub fn obstruction_graph(l: usize, expander_n: usize, seed: &RngSeed) -> Result<ObstructionGraph> {
    if l < 2 {
        return Err(Error::param("l", format!("{l} is below 2")));
    }
    if expander_n < 4 || expander_n % 2 == 1 {
        return Err(Error::param(
            "expander_n",
            format!("{expander_n} must be even and at least 4"),
        ));
    }
    let m = expander_n;
    let mut rejected = 0;
    let a = blob(m, &seed.child("blob-a"), &mut rejected)?;
    let b = blob(m, &seed.child("blob-b"), &mut rejected)?;
    let n = 2 * m + 2 * l + 1;
    let mut edges: Vec<(usize, usize)> = a.edges().collect();
    edges.extend(b.edges().map(|(u, v)| (u + m, v + m)));
    let mut vertices = vec![0];
    vertices.extend(2 * m..n);
    vertices.push(m);
    edges.extend(vertices.windows(2).map(|w| (w[0], w[1])));
    let graph = Graph::build(n, &edges, false)?;
    let half = VertexSet::from_vertices(n, (0..m).chain(2 * m..2 * m + l))?;
    Ok(ObstructionGraph {
        graph,
        path: Degree2Path { vertices },
        half,
        rejected,
    })
}

pub fn run_obstruction_demo(cfg: &ObstructionConfig) -> Result<ObstructionReport> {
    if cfg.walks == 0 {
        return Err(Error::param("walks", "must be positive"));
    }
    let root = RngSeed::stream(cfg.seed, "obstruction", 0);
    let og = obstruction_graph(cfg.l, cfg.expander_n, &root.child("graph"))?;
    let g = &og.graph;
    let all = VertexSet::full(g.n());
    let escape_steps = (cfg.l * cfg.l / 10) as u64;
    let escape_seed = root.child("escape");
    let escape_at_zero = trajectory_escape_probability(g, &og.path, 0, cfg.walks, &escape_seed)?;
    let escape_probability =
        trajectory_escape_probability(g, &og.path, escape_steps, cfg.walks, &escape_seed)?;
    let lower = bound_lower(g, &all, std::slice::from_ref(&og.half))?;
    let report = decompose(g)?;
    let measurement = measure_component(g, &all, &report, &cfg.measure, &root.child("measure"))?;
    let t_mix = measurement.t_mix.as_ref().and_then(|m| m.value);
    let t_mix_cesaro = measurement.t_mix_cesaro.as_ref().and_then(|m| m.value);
    Ok(ObstructionReport {
        config: cfg.clone(),
        n: g.n(),
        edges: g.edge_count(),
        rejected_blobs: og.rejected,
        escape_at_zero,
        escape_steps,
        escape_probability,
        bound_lower: lower,
        t_mix,
        t_mix_cesaro,
        lower_bound_holds: t_mix.map(|t| lower <= t as f64),
        measurement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction() {
        let og = obstruction_graph(3, 10, &RngSeed::new(4)).unwrap();
        let g = &og.graph;
        assert_eq!(g.n(), 27);
        assert_eq!(g.edge_count(), 15 + 15 + 8);
        assert!(g.is_connected_within(&VertexSet::full(27)));
        let report = decompose(g).unwrap();
        assert_eq!(report.degree2.longest_interior, 7);
        assert!(report.degree2.paths.contains(&og.path));
        // Blob plus three interior vertices: volume 31 + 6 of 76.
        let s = g.subset_stats(&og.half);
        assert_eq!((s.total_degree, s.e_out), (37, 1));
        assert_eq!(g.volume(VertexSet::full(27).as_slice()), 76);
    }

    #[test]
    fn rejects_bad_parameters() {
        let s = RngSeed::new(1);
        assert!(obstruction_graph(1, 10, &s).is_err());
        assert!(obstruction_graph(3, 9, &s).is_err());
        assert!(obstruction_graph(3, 2, &s).is_err());
    }

    #[test]
    fn small_demo() {
        let cfg = ObstructionConfig::new(6, 16, 2000, 3);
        let r = run_obstruction_demo(&cfg).unwrap();
        assert_eq!(r.escape_at_zero, 1.0);
        assert_eq!(r.escape_steps, 3);
        // Three steps from the middle of 13 interior vertices cannot escape.
        assert_eq!(r.escape_probability, 1.0);
        assert_eq!(r.lower_bound_holds, Some(true));
        assert!(r.t_mix_cesaro.is_some());
        let again = run_obstruction_demo(&cfg).unwrap();
        assert_eq!(r, again);
    }
}
