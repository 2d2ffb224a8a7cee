//! Exact minimum conductance by enumeration.
//!
//! Small components scan every vertex subset with incremental degree and
//! edge counts. Larger ones grow connected sets from their least vertex,
//! each set produced exactly once, and stop growing once `d(S)` passes half
//! the volume (adding vertices only increases it).

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use super::{ComponentView, MinConductance, PhiFraction, Tally};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    AllSubsets,
    ConnectedSets,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExactBudget {
    /// Largest component scanned subset by subset.
    pub all_subsets_max: usize,
    /// Largest component handled by connected-set growth.
    pub connected_max: usize,
    /// Cap on the number of connected sets visited.
    pub max_sets: u64,
}

impl Default for ExactBudget {
    fn default() -> Self {
        ExactBudget {
            all_subsets_max: 18,
            connected_max: 40,
            max_sets: 20_000_000,
        }
    }
}

impl ExactBudget {
    pub(crate) fn route_for(&self, size: usize) -> Option<Route> {
        if size <= self.all_subsets_max.min(26) {
            Some(Route::AllSubsets)
        } else if size <= self.connected_max.min(64) {
            Some(Route::ConnectedSets)
        } else {
            None
        }
    }
}

/// Component in local indices with bitmask adjacency.
struct Local {
    vertices: Vec<usize>,
    degree: Vec<u64>,
    loops: Vec<u64>,
    adjacent: Vec<Vec<(usize, u64)>>,
    mask: Vec<u64>,
}

impl Local {
    fn new(view: &ComponentView) -> Self {
        let g = view.g;
        let vertices = view.vertices.clone();
        let k = vertices.len();
        let local = |v: usize| vertices.binary_search(&v).expect("closed component");
        let mut adjacent = vec![Vec::new(); k];
        let mut loops = vec![0; k];
        let mut mask = vec![0u64; k];
        for (i, &v) in vertices.iter().enumerate() {
            for (w, m) in g.neighbors(v) {
                if w == v {
                    loops[i] = m as u64;
                } else {
                    let j = local(w);
                    adjacent[i].push((j, m as u64));
                    mask[i] |= 1 << j;
                }
            }
        }
        let degree = vertices.iter().map(|&v| g.degree(v)).collect();
        Local {
            vertices,
            degree,
            loops,
            adjacent,
            mask,
        }
    }

    fn witness(&self, bits: u64) -> Vec<usize> {
        let mut out = Vec::with_capacity(bits.count_ones() as usize);
        let mut b = bits;
        while b != 0 {
            out.push(self.vertices[b.trailing_zeros() as usize]);
            b &= b - 1;
        }
        out
    }

    fn connected(&self, bits: u64) -> bool {
        let mut reach = bits & bits.wrapping_neg();
        loop {
            let mut next = reach;
            let mut b = reach;
            while b != 0 {
                next |= self.mask[b.trailing_zeros() as usize];
                b &= b - 1;
            }
            next &= bits;
            if next == reach {
                return reach == bits;
            }
            reach = next;
        }
    }

    fn edges_into(&self, v: usize, bits: u64) -> u64 {
        self.adjacent[v]
            .iter()
            .filter(|&&(w, _)| bits >> w & 1 == 1)
            .map(|&(_, m)| m)
            .sum()
    }
}

fn scan_all_subsets(local: &Local, tally: &mut Tally, volume: u64) {
    let k = local.vertices.len();
    let full = 1usize << k;
    let mut degree = vec![0u64; full];
    let mut inside = vec![0u64; full];
    for mask in 1..full {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let d = degree[rest] + local.degree[v];
        let e = inside[rest] + local.loops[v] + local.edges_into(v, rest as u64);
        degree[mask] = d;
        inside[mask] = e;
        if !tally.admissible(d) {
            continue;
        }
        let cut = d - 2 * e;
        if !tally.wants(PhiFraction::new(cut, d, volume), d) {
            continue;
        }
        if local.connected(mask as u64) {
            tally.offer(cut, d, || local.witness(mask as u64));
        }
    }
}

struct Growth<'a> {
    local: &'a Local,
    above: u64,
    volume: u64,
    visited: &'a AtomicU64,
    budget: u64,
}

impl Growth<'_> {
    fn grow(
        &self,
        tally: &mut Tally,
        set: u64,
        degree: u64,
        inside: u64,
        candidates: u64,
        forbidden: u64,
    ) -> Result<()> {
        if self.visited.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(Error::BudgetExceeded(format!(
                "more than {} connected sets; use the heuristic instead",
                self.budget
            )));
        }
        tally.offer(degree - 2 * inside, degree, || self.local.witness(set));
        let mut rest = candidates;
        let mut forbidden = forbidden;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            let bit = 1u64 << w;
            rest &= !bit;
            let d = degree + self.local.degree[w];
            if 2 * d <= self.volume {
                let e = inside + self.local.loops[w] + self.local.edges_into(w, set);
                let grown = set | bit;
                let next = (rest | self.local.mask[w]) & !grown & !forbidden & self.above;
                self.grow(tally, grown, d, e, next, forbidden)?;
            }
            forbidden |= bit;
        }
        Ok(())
    }
}

fn grow_connected_sets(local: &Local, view: &ComponentView, budget: u64) -> Result<Tally> {
    let k = local.vertices.len();
    let visited = AtomicU64::new(0);
    let tallies = (0..k)
        .into_par_iter()
        .map(|v| {
            let mut tally = view.tally();
            let above = if v + 1 >= 64 { 0 } else { !0u64 << (v + 1) };
            let growth = Growth {
                local,
                above,
                volume: view.volume,
                visited: &visited,
                budget,
            };
            if 2 * local.degree[v] <= view.volume {
                growth.grow(
                    &mut tally,
                    1 << v,
                    local.degree[v],
                    local.loops[v],
                    local.mask[v] & above,
                    0,
                )?;
            }
            Ok(tally)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = view.tally();
    for t in tallies {
        total.merge(t);
    }
    Ok(total)
}

pub(crate) fn exact_tally(view: &ComponentView, route: Route, budget: &ExactBudget) -> Result<Tally> {
    let k = view.vertices.len();
    let local = Local::new(view);
    match route {
        Route::AllSubsets => {
            if k > 26 {
                return Err(Error::BudgetExceeded(format!(
                    "{k} vertices is too many for a full subset scan"
                )));
            }
            let mut tally = view.tally();
            scan_all_subsets(&local, &mut tally, view.volume);
            Ok(tally)
        }
        Route::ConnectedSets => {
            if k > 64 {
                return Err(Error::BudgetExceeded(format!(
                    "{k} vertices is too many for connected-set growth"
                )));
            }
            grow_connected_sets(&local, view, budget.max_sets)
        }
    }
}

fn finish(g: &Graph, tally: &Tally) -> Result<MinConductance> {
    tally
        .best()
        .map(|c| MinConductance::from_candidate(g.n(), c))
        .ok_or_else(|| Error::param("component", "has no set with 0 < pi(S) <= 1/2"))
}

/// Exact minimum of `Phi(S)` over connected `S` with `0 < pi(S) <= 1/2`.
/// Among minimizers the lexicographically least sorted vertex list wins.
pub fn exact_min_conductance(
    g: &Graph,
    component: &VertexSet,
    budget: &ExactBudget,
) -> Result<MinConductance> {
    let view = ComponentView::new(g, component)?;
    let route = budget.route_for(view.vertices.len()).ok_or_else(|| {
        Error::BudgetExceeded(format!(
            "component of {} vertices exceeds the exact limit of {}; use the heuristic instead",
            view.vertices.len(),
            budget.connected_max
        ))
    })?;
    finish(g, &exact_tally(&view, route, budget)?)
}

/// As [`exact_min_conductance`] with a forced enumeration route.
pub fn exact_min_conductance_via(
    g: &Graph,
    component: &VertexSet,
    route: Route,
    budget: &ExactBudget,
) -> Result<MinConductance> {
    let view = ComponentView::new(g, component)?;
    finish(g, &exact_tally(&view, route, budget)?)
}
