//! The dyadic conductance profile: for each scale `j = 1..=J`, with
//! `J = ceil(log2(1 / pi_min))`, the least conductance of a connected set
//! whose stationary mass lies in `[2^{-j-1}, 2^{-j}]`, or 1 when no
//! connected set falls in that band.

use serde::{Serialize, Serializer};

use super::exact::{exact_tally, ExactBudget};
use super::heuristic::heuristic_tallies;
use super::{in_scale, Candidate, ComponentView, PhiFraction, Tally};
use crate::decompose::DecompositionReport;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::rng::RngSeed;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Heuristic,
    #[serde(rename = "default-1")]
    Default,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaleEntry {
    pub j: usize,
    pub phi: PhiFraction,
    pub method: Method,
    /// Sorted; empty for defaulted scales.
    pub witness: Vec<usize>,
}

impl ScaleEntry {
    pub fn pi_low(&self) -> f64 {
        (-(self.j as f64) - 1.0).exp2()
    }

    pub fn pi_high(&self) -> f64 {
        (-(self.j as f64)).exp2()
    }
}

impl Serialize for ScaleEntry {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        #[derive(Serialize)]
        struct Row {
            j: usize,
            pi_low: f64,
            pi_high: f64,
            phi: f64,
            phi_exact: String,
            method: Method,
            witness_size: usize,
        }
        Row {
            j: self.j,
            pi_low: self.pi_low(),
            pi_high: self.pi_high(),
            phi: self.phi.to_f64(),
            phi_exact: self.phi.to_string(),
            method: self.method,
            witness_size: self.witness.len(),
        }
        .serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConductanceProfile {
    pub volume: u64,
    pub min_degree: u64,
    pub scales: Vec<ScaleEntry>,
    /// Least conductance found over all connected sets with `pi <= 1/2`.
    pub global: PhiFraction,
    #[serde(skip)]
    pub global_witness: Vec<usize>,
    pub global_method: Method,
}

impl ConductanceProfile {
    pub fn pi_min(&self) -> f64 {
        self.min_degree as f64 / self.volume as f64
    }

    pub fn scale_count(&self) -> usize {
        self.scales.len()
    }

    /// `min(Phi*, 1)`: every profile entry is at least this value, since
    /// each is either a conductance over a subfamily or the default 1.
    pub fn phi_floor(&self) -> PhiFraction {
        self.global.min(PhiFraction::ONE)
    }

    /// `J * min(Phi*, 1)^{-2}`, which dominates the dyadic sum.
    pub fn dominance_bound<S: Scalar>(&self) -> S {
        S::from_count(self.scale_count() as u64) * self.phi_floor().inverse_square::<S>()
    }

    /// Every witness recomputed from the graph: connected, inside its band,
    /// and with the recorded conductance.
    pub fn verify(&self, g: &Graph, component: &VertexSet) -> Result<()> {
        let check = |witness: &[usize], phi: PhiFraction, j: Option<usize>| -> Result<()> {
            let set = VertexSet::from_vertices(g.n(), witness.iter().copied())?;
            if !set.is_subset(component) || !g.is_connected_within(&set) {
                return Err(Error::Inconsistent(format!(
                    "witness {witness:?} is not a connected subset of the component"
                )));
            }
            let stats = g.subset_stats(&set);
            let d = stats.total_degree;
            if 2 * d > self.volume || PhiFraction::new(stats.e_out, d, self.volume) != phi {
                return Err(Error::Inconsistent(format!("witness {witness:?} does not give {phi}")));
            }
            if let Some(j) = j {
                if !in_scale(d, self.volume, j) {
                    return Err(Error::Inconsistent(format!(
                        "witness {witness:?} lies outside scale {j}"
                    )));
                }
            }
            Ok(())
        };
        check(&self.global_witness, self.global, None)?;
        for e in &self.scales {
            match e.method {
                Method::Default => {
                    if e.phi != PhiFraction::ONE || !e.witness.is_empty() {
                        return Err(Error::Inconsistent(format!("scale {} default", e.j)));
                    }
                }
                _ => check(&e.witness, e.phi, Some(e.j))?,
            }
        }
        Ok(())
    }
}

fn assemble(
    view: &ComponentView,
    best: Option<Candidate>,
    per_scale: Vec<Option<Candidate>>,
    method: Method,
) -> Result<ConductanceProfile> {
    let best =
        best.ok_or_else(|| Error::param("component", "has no set with 0 < pi(S) <= 1/2"))?;
    let scales = per_scale
        .into_iter()
        .enumerate()
        .map(|(i, c)| match c {
            Some(c) => ScaleEntry {
                j: i + 1,
                phi: c.phi,
                method,
                witness: c.witness,
            },
            None => ScaleEntry {
                j: i + 1,
                phi: PhiFraction::ONE,
                method: Method::Default,
                witness: Vec::new(),
            },
        })
        .collect();
    Ok(ConductanceProfile {
        volume: view.volume,
        min_degree: view.min_degree,
        scales,
        global: best.phi,
        global_witness: best.witness,
        global_method: method,
    })
}

/// Conductance profile of a component: exact when the component fits the
/// enumeration budget, otherwise the best sets from the heuristic families
/// (which then only bound each scale from above).
pub fn conductance_profile(
    g: &Graph,
    component: &VertexSet,
    report: Option<&DecompositionReport>,
    budget: &ExactBudget,
    seed: &RngSeed,
) -> Result<ConductanceProfile> {
    let view = ComponentView::new(g, component)?;
    if let Some(route) = budget.route_for(view.vertices.len()) {
        match exact_tally(&view, route, budget) {
            Ok(t) => {
                let (best, per_scale) = t.into_parts();
                let profile = assemble(&view, best, per_scale, Method::Exact)?;
                profile.verify(g, component)?;
                return Ok(profile);
            }
            Err(Error::BudgetExceeded(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let mut total: Tally = view.tally();
    for (_, t) in heuristic_tallies(&view, component, report, seed) {
        total.merge(t);
    }
    let (best, per_scale) = total.into_parts();
    let profile = assemble(&view, best, per_scale, Method::Heuristic)?;
    profile.verify(g, component)?;
    Ok(profile)
}
