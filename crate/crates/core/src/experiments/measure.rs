//! Mixing times, conductance profile and bounds for one component.

use serde::{Deserialize, Serialize};

use super::ExperimentRecord;
use crate::conductance::{conductance_profile, BoundsReport, ConductanceProfile, ExactBudget};
use crate::decompose::DecompositionReport;
use crate::error::Result;
use crate::graph::{Graph, VertexSet};
use crate::rng::RngSeed;
use crate::walk::{
    cesaro_mixing_time, heuristic_worst_starts, mixing_time, sample_without_replacement,
    MixingReport, StartPolicy, WalkConfig,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureConfig {
    /// Candidates from [`heuristic_worst_starts`].
    pub worst_starts: usize,
    /// Lowest-degree vertices added as starts.
    pub low_degree_starts: usize,
    /// Uniformly sampled extra starts.
    pub sampled_starts: usize,
    pub epsilon: f64,
    pub max_steps: u64,
    pub mixing: bool,
    pub cesaro: bool,
    pub conductance: bool,
    /// Constant `C` of the upper bounds.
    pub c: f64,
    pub exact_all_subsets_max: usize,
    pub exact_connected_max: usize,
    pub exact_max_sets: u64,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        let b = ExactBudget::default();
        MeasureConfig {
            worst_starts: 16,
            low_degree_starts: 8,
            sampled_starts: 16,
            epsilon: (-1.0f64).exp(),
            max_steps: 200_000,
            mixing: true,
            cesaro: true,
            conductance: true,
            c: 1.0,
            exact_all_subsets_max: b.all_subsets_max,
            exact_connected_max: b.connected_max,
            exact_max_sets: b.max_sets,
        }
    }
}

impl MeasureConfig {
    pub fn budget(&self) -> ExactBudget {
        ExactBudget {
            all_subsets_max: self.exact_all_subsets_max,
            connected_max: self.exact_connected_max,
            max_sets: self.exact_max_sets,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measurement {
    pub starts: Vec<usize>,
    /// Laziness used for `T_mix`: 0, or 1/2 on bipartite components.
    pub laziness: f64,
    pub t_mix: Option<MixingReport>,
    pub t_mix_cesaro: Option<MixingReport>,
    pub profile: Option<ConductanceProfile>,
    pub bounds: Option<BoundsReport>,
}

/// Worst-start candidates, then the lowest-degree vertices, then uniform
/// samples, without repeats. Every vertex when these cover the component.
fn start_set(
    g: &Graph,
    component: &VertexSet,
    report: &DecompositionReport,
    cfg: &MeasureConfig,
    seed: &RngSeed,
) -> Vec<usize> {
    let want = cfg.worst_starts + cfg.low_degree_starts + cfg.sampled_starts;
    if want >= component.len() {
        return component.as_slice().to_vec();
    }
    let mut starts = heuristic_worst_starts(component, report, cfg.worst_starts, &seed.child("worst"));
    let mut by_degree: Vec<usize> = component.as_slice().to_vec();
    by_degree.sort_by_key(|&v| (g.degree(v), v));
    starts.extend(
        by_degree
            .into_iter()
            .filter(|v| !starts.contains(v))
            .take(cfg.low_degree_starts)
            .collect::<Vec<_>>(),
    );
    let rest: Vec<usize> = component.iter().filter(|v| !starts.contains(v)).collect();
    starts.extend(sample_without_replacement(&rest, cfg.sampled_starts, &seed.child("sampled")));
    starts
}

/// Runs the configured measurements on a connected component.
pub fn measure_component(
    g: &Graph,
    component: &VertexSet,
    report: &DecompositionReport,
    cfg: &MeasureConfig,
    seed: &RngSeed,
) -> Result<Measurement> {
    let starts = start_set(g, component, report, cfg, seed);
    let bipartite = g.is_bipartite(component)?;
    let laziness = if bipartite { 0.5 } else { 0.0 };
    let walk = |laziness: f64| -> Result<WalkConfig> {
        Ok(WalkConfig::new(laziness, cfg.epsilon, StartPolicy::Designated(starts.clone()))?
            .with_max_steps(cfg.max_steps))
    };
    let t_mix = if cfg.mixing {
        Some(mixing_time::<f64>(g, component, &walk(laziness)?)?)
    } else {
        None
    };
    let t_mix_cesaro = if cfg.cesaro {
        Some(cesaro_mixing_time::<f64>(g, component, &walk(0.0)?)?)
    } else {
        None
    };
    let (profile, bounds) = if cfg.conductance && component.len() >= 2 {
        let profile =
            conductance_profile(g, component, Some(report), &cfg.budget(), &seed.child("conductance"))?;
        let bounds = BoundsReport::compute(g, component, &profile, cfg.c)?;
        (Some(profile), Some(bounds))
    } else {
        (None, None)
    };
    Ok(Measurement {
        starts,
        laziness,
        t_mix,
        t_mix_cesaro,
        profile,
        bounds,
    })
}

impl Measurement {
    /// Copies the measured values into a record.
    pub fn fill(&self, r: &mut ExperimentRecord) {
        r.metrics.insert("starts".into(), self.starts.len() as f64);
        r.metrics.insert("t_mix_laziness".into(), self.laziness);
        for (key, m, slot) in [
            ("t_mix", &self.t_mix, &mut r.t_mix),
            ("t_mix_cesaro", &self.t_mix_cesaro, &mut r.t_mix_cesaro),
        ] {
            if let Some(m) = m {
                *slot = m.value;
                if m.censored() {
                    r.censored = true;
                    if let Some(lo) = m.max_completed() {
                        r.metrics.insert(format!("{key}_completed_max"), lo as f64);
                    }
                }
            }
        }
        if let Some(b) = &self.bounds {
            r.phi_global = Some(b.phi_global);
            r.bound_lower = Some(b.lower);
            r.bound_js = Some(b.jerrum_sinclair);
            r.bound_dyadic = Some(b.dyadic_sum);
            r.metrics.insert("bound_dyadic_integral".into(), b.dyadic_integral);
            r.metrics.insert("c".into(), b.c);
        }
        if let Some(p) = &self.profile {
            r.metrics.insert("phi_scales".into(), p.scale_count() as f64);
            r.metrics.insert(
                "phi_exact".into(),
                f64::from(u8::from(p.global_method == crate::conductance::Method::Exact)),
            );
        }
    }
}
