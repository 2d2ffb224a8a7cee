//! Conductance of vertex sets, its exact and heuristic minimization, the
//! dyadic conductance profile and the mixing-time bounds built on them.
//!
//! For a set `S` inside a component of volume `2e*`:
//! `Q(S) = e_out(S) / 2e*`, `pi(S) = d(S) / 2e*` and
//! `Phi(S) = Q(S) / (pi(S) pi(V \ S)) = 2e* e_out(S) / (d(S) (2e* - d(S)))`.
//! Every quantity is a ratio of integers, so minima are compared exactly.

mod bounds;
mod exact;
mod heuristic;
mod profile;

pub use bounds::{
    bound_dyadic_sum, bound_jerrum_sinclair, bound_lower, bound_lower_exact, talagrand_tail,
    BoundsReport, DyadicBound,
};
pub use exact::{exact_min_conductance, exact_min_conductance_via, ExactBudget, Route};
pub use heuristic::{heuristic_min_conductance, Family, HeuristicResult};
pub use profile::{conductance_profile, ConductanceProfile, Method, ScaleEntry};

use std::cmp::Ordering;
use std::fmt;

use num::integer::gcd;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::scalar::Scalar;

/// `Phi(S)` as a reduced fraction `num / den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PhiFraction {
    pub num: u64,
    pub den: u64,
}

impl PhiFraction {
    /// From the cut size, `d(S)` and the component volume; requires
    /// `0 < d(S) < volume`.
    pub fn new(cut: u64, set_degree: u64, volume: u64) -> Self {
        debug_assert!(set_degree > 0 && set_degree < volume);
        let num = volume as u128 * cut as u128;
        let den = set_degree as u128 * (volume - set_degree) as u128;
        let g = gcd(num, den).max(1);
        PhiFraction {
            num: u64::try_from(num / g).expect("conductance numerator fits u64"),
            den: u64::try_from(den / g).expect("conductance denominator fits u64"),
        }
    }

    pub const ONE: PhiFraction = PhiFraction { num: 1, den: 1 };

    pub fn value<S: Scalar>(&self) -> S {
        S::ratio(self.num, self.den)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `Phi^{-2}`, exact for exact scalars. `Phi` must be positive.
    pub fn inverse_square<S: Scalar>(&self) -> S {
        let r = S::ratio(self.den, self.num);
        r.clone() * r
    }
}

impl Ord for PhiFraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for PhiFraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PhiFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// A connected set together with its exact conductance. The witness is a
/// sorted vertex list, or a cheaper handle while a sweep is running.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate<W = Vec<usize>> {
    pub phi: PhiFraction,
    pub set_degree: u64,
    pub cut: u64,
    pub witness: W,
}

impl<W: Ord> Candidate<W> {
    /// Ordered by conductance, then by witness.
    fn better_than(&self, other: &Self) -> bool {
        (self.phi, &self.witness) < (other.phi, &other.witness)
    }
}

/// Running minima of `Phi` over connected sets with `0 < pi(S) <= 1/2`,
/// globally and per dyadic scale `j = 1..=scales`.
#[derive(Debug, Clone)]
pub(crate) struct Tally<W = Vec<usize>> {
    volume: u64,
    best: Option<Candidate<W>>,
    per_scale: Vec<Option<Candidate<W>>>,
}

/// Number of dyadic scales: the least `J` with `2^J d_min >= volume`, i.e.
/// `ceil(log2(1 / pi_min))`.
pub(crate) fn scale_count(volume: u64, min_degree: u64) -> usize {
    let mut j = 0;
    while (min_degree as u128) << j < volume as u128 {
        j += 1;
    }
    j
}

/// Whether `2^{-j-1} <= d / volume <= 2^{-j}`.
pub(crate) fn in_scale(set_degree: u64, volume: u64, j: usize) -> bool {
    let d = set_degree as u128;
    let v = volume as u128;
    (d << (j + 1)) >= v && (d << j) <= v
}

impl<W: Ord + Clone> Tally<W> {
    pub(crate) fn new(volume: u64, scales: usize) -> Self {
        Tally {
            volume,
            best: None,
            per_scale: vec![None; scales],
        }
    }

    /// Scales (1-based) whose band contains `d / volume`; at most two.
    fn scales_of(&self, set_degree: u64) -> impl Iterator<Item = usize> + '_ {
        let q = self.volume / set_degree.max(1);
        let top = if q == 0 { 0 } else { q.ilog2() as usize };
        [top.saturating_sub(1), top]
            .into_iter()
            .filter(move |&j| j >= 1 && j <= self.per_scale.len())
            .filter(move |&j| in_scale(set_degree, self.volume, j))
    }

    pub(crate) fn admissible(&self, set_degree: u64) -> bool {
        set_degree > 0 && 2 * set_degree <= self.volume
    }

    /// Whether a set with this conductance could replace a current entry,
    /// counting ties (which are then broken by witness).
    pub(crate) fn wants(&self, phi: PhiFraction, set_degree: u64) -> bool {
        if !self.admissible(set_degree) {
            return false;
        }
        let beats = |c: &Option<Candidate<W>>| c.as_ref().is_none_or(|c| phi <= c.phi);
        beats(&self.best) || self.scales_of(set_degree).any(|j| beats(&self.per_scale[j - 1]))
    }

    /// Offers a connected set; `witness` is only called when needed and must
    /// return sorted ids.
    pub(crate) fn offer(
        &mut self,
        cut: u64,
        set_degree: u64,
        witness: impl FnOnce() -> W,
    ) -> bool {
        if !self.admissible(set_degree) {
            return false;
        }
        let phi = PhiFraction::new(cut, set_degree, self.volume);
        if !self.wants(phi, set_degree) {
            return false;
        }
        let cand = Candidate {
            phi,
            set_degree,
            cut,
            witness: witness(),
        };
        self.insert(cand)
    }

    fn insert(&mut self, cand: Candidate<W>) -> bool {
        let mut changed = false;
        let scales: Vec<usize> = self.scales_of(cand.set_degree).collect();
        for j in scales {
            let slot = &mut self.per_scale[j - 1];
            if slot.as_ref().is_none_or(|c| cand.better_than(c)) {
                *slot = Some(cand.clone());
                changed = true;
            }
        }
        if self.best.as_ref().is_none_or(|c| cand.better_than(c)) {
            self.best = Some(cand);
            changed = true;
        }
        changed
    }

    pub(crate) fn merge(&mut self, other: Tally<W>) {
        for c in other.per_scale.into_iter().flatten() {
            self.insert(c);
        }
        if let Some(c) = other.best {
            self.insert(c);
        }
    }

    pub(crate) fn best(&self) -> Option<&Candidate<W>> {
        self.best.as_ref()
    }

    pub(crate) fn into_parts(self) -> (Option<Candidate<W>>, Vec<Option<Candidate<W>>>) {
        (self.best, self.per_scale)
    }

    /// Every distinct held candidate, best first.
    pub(crate) fn held(&self) -> Vec<&Candidate<W>> {
        let mut out: Vec<&Candidate<W>> = self.best.iter().chain(self.per_scale.iter().flatten()).collect();
        out.sort_by(|a, b| (a.phi, &a.witness).cmp(&(b.phi, &b.witness)));
        out.dedup_by(|a, b| a.witness == b.witness);
        out
    }
}

/// `Q`, `pi` and `Phi` of one set, with the surrogate
/// `e_out / (2 e(S) + e_out) = e_out / d(S)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SetConductance<S> {
    pub q: S,
    pub pi: S,
    pub phi: S,
    pub surrogate: S,
    pub exact: PhiFraction,
}

fn set_counts(g: &Graph, component: &VertexSet, set: &VertexSet) -> Result<(u64, u64, u64)> {
    if !set.is_subset(component) {
        return Err(Error::param("set", "not contained in the component"));
    }
    let stats = g.subset_stats(set);
    Ok((stats.e_out, stats.total_degree, g.volume(component.as_slice())))
}

/// Stationary escape flow `Q(S) = e_out(S) / 2e*`.
pub fn q_of<S: Scalar>(g: &Graph, component: &VertexSet, set: &VertexSet) -> Result<S> {
    let (cut, _, volume) = set_counts(g, component, set)?;
    if volume == 0 {
        return Err(Error::IsolatedVertex(component.as_slice()[0]));
    }
    Ok(S::ratio(cut, volume))
}

/// Conductance of `set`; rejects sets of stationary mass 0 or 1.
pub fn phi_of<S: Scalar>(
    g: &Graph,
    component: &VertexSet,
    set: &VertexSet,
) -> Result<SetConductance<S>> {
    let (cut, d, volume) = set_counts(g, component, set)?;
    if d == 0 || d == volume {
        return Err(Error::param("set", "stationary mass must lie strictly between 0 and 1"));
    }
    let exact = PhiFraction::new(cut, d, volume);
    Ok(SetConductance {
        q: S::ratio(cut, volume),
        pi: S::ratio(d, volume),
        phi: exact.value(),
        surrogate: S::ratio(cut, d),
        exact,
    })
}

/// Result of a conductance minimization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinConductance {
    pub phi: PhiFraction,
    pub witness: VertexSet,
}

impl MinConductance {
    pub(crate) fn from_candidate(n: usize, c: &Candidate) -> Self {
        MinConductance {
            phi: c.phi,
            witness: VertexSet::from_vertices(n, c.witness.iter().copied()).expect("in range"),
        }
    }
}

/// Per-component data shared by the enumerators and sweeps.
pub(crate) struct ComponentView<'g> {
    pub g: &'g Graph,
    pub vertices: Vec<usize>,
    pub volume: u64,
    pub min_degree: u64,
}

impl<'g> ComponentView<'g> {
    pub(crate) fn new(g: &'g Graph, component: &VertexSet) -> Result<Self> {
        g.check_component(component)?;
        let vertices = component.as_slice().to_vec();
        let volume = g.volume(&vertices);
        let min_degree = vertices.iter().map(|&v| g.degree(v)).min().unwrap_or(0);
        if min_degree == 0 {
            return Err(Error::IsolatedVertex(vertices[0]));
        }
        Ok(ComponentView {
            g,
            vertices,
            volume,
            min_degree,
        })
    }

    pub(crate) fn scales(&self) -> usize {
        scale_count(self.volume, self.min_degree)
    }

    pub(crate) fn tally<W: Ord + Clone>(&self) -> Tally<W> {
        Tally::new(self.volume, self.scales())
    }
}
