//! Simple random walks restricted to one connected component.
//!
//! The walk moves from `i` to a uniformly chosen incident edge end, so
//! `p(i, j) = mult(i, j) / d(i)` and a loop returns with `2 / d(i)`. The lazy
//! variant stays put with probability `laziness`. The stationary law is
//! `pi(i) = d(i) / 2e*`, and the chain is reversible:
//! `pi(i) p(i, j) = mult(i, j) / 2e* = pi(j) p(j, i)`.
//!
//! Mixing times are suprema over starting distributions. Total variation is
//! convex in its first argument and `x0 P^t` is linear in `x0`, so the
//! supremum over all `x0` equals the maximum over point masses; the engine
//! only evolves point masses.
//!
//! Total variation to `pi` is non-increasing in `t` for any kernel that fixes
//! `pi`. Every evolution asserts that, and the first `t` under the threshold
//! is found by stepping forward one sparse pass at a time.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::decompose::{Degree2Path, DecompositionReport};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::rng::{below, RngSeed};
use crate::scalar::{sum, Scalar};

/// Probability vector over the vertices of one component.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<S> {
    support: Vec<usize>,
    mass: Vec<S>,
}

impl<S: Scalar> Distribution<S> {
    /// `support` must be sorted; masses must be non-negative and sum to one
    /// (exactly for exact scalars, within `1e-9` otherwise).
    pub fn new(support: Vec<usize>, mass: Vec<S>) -> Result<Self> {
        if support.len() != mass.len() || support.is_empty() {
            return Err(Error::param("mass", "length must match a nonempty support"));
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("support", "must be strictly increasing"));
        }
        if mass.iter().any(|m| m.is_negative()) {
            return Err(Error::param("mass", "negative entry"));
        }
        let total = sum(&mass);
        let ok = if S::EXACT {
            total == S::one()
        } else {
            (total.to_f64_lossy() - 1.0).abs() <= 1e-9
        };
        if !ok {
            return Err(Error::param(
                "mass",
                format!("sums to {} instead of 1", total.to_f64_lossy()),
            ));
        }
        Ok(Distribution { support, mass })
    }

    pub fn point_mass(support: &[usize], v: usize) -> Result<Self> {
        let k = support
            .binary_search(&v)
            .map_err(|_| Error::param("start", format!("vertex {v} not in support")))?;
        let mut mass = vec![S::zero(); support.len()];
        mass[k] = S::one();
        Ok(Distribution {
            support: support.to_vec(),
            mass,
        })
    }

    pub fn uniform(support: &[usize]) -> Result<Self> {
        let k = support.len() as u64;
        Self::new(support.to_vec(), vec![S::ratio(1, k); support.len()])
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn mass(&self) -> &[S] {
        &self.mass
    }

    pub fn get(&self, v: usize) -> S {
        match self.support.binary_search(&v) {
            Ok(k) => self.mass[k].clone(),
            Err(_) => S::zero(),
        }
    }

    pub fn total(&self) -> S {
        sum(&self.mass)
    }
}

/// `(1/2) sum_i |a_i - b_i|`, which equals `max_A |a(A) - b(A)|` over all
/// vertex subsets `A` (take `A = {i : a_i > b_i}`).
pub fn tv_distance<S: Scalar>(a: &Distribution<S>, b: &Distribution<S>) -> Result<S> {
    if a.support != b.support {
        return Err(Error::SupportMismatch);
    }
    Ok(half_l1(&a.mass, &b.mass))
}

fn half_l1<S: Scalar>(a: &[S], b: &[S]) -> S {
    let total = a
        .iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + (x.clone() - y.clone()).abs());
    total * S::half()
}

/// Stationary law `d(i) / 2e*` of a component.
pub fn stationary<S: Scalar>(g: &Graph, component: &VertexSet) -> Result<Distribution<S>> {
    g.check_component(component)?;
    let volume = g.volume(component.as_slice());
    if volume == 0 {
        return Err(Error::IsolatedVertex(component.as_slice()[0]));
    }
    let mass = component
        .iter()
        .map(|v| S::ratio(g.degree(v), volume))
        .collect();
    Ok(Distribution {
        support: component.as_slice().to_vec(),
        mass,
    })
}

/// The walk's transition operator on one component, stored by incoming rows
/// so each output entry is an independent dot product.
#[derive(Debug, Clone)]
pub struct Chain<S> {
    vertices: Vec<usize>,
    offsets: Vec<usize>,
    sources: Vec<u32>,
    weights: Vec<S>,
    stay: S,
    travel: S,
    pi: Vec<S>,
}

/// Rows at least this long per rayon task; below it steps run inline.
const PARALLEL_CHUNK: usize = 8192;

impl<S: Scalar> Chain<S> {
    pub fn new(g: &Graph, component: &VertexSet, laziness: f64) -> Result<Self> {
        check_laziness(laziness)?;
        g.check_component(component)?;
        let vertices = component.as_slice().to_vec();
        if let Some(&v) = vertices.iter().find(|&&v| g.degree(v) == 0) {
            return Err(Error::IsolatedVertex(v));
        }
        let local = |v: usize| vertices.binary_search(&v).expect("closed component") as u32;
        let mut offsets = Vec::with_capacity(vertices.len() + 1);
        let mut sources = Vec::new();
        let mut weights = Vec::new();
        offsets.push(0);
        for &j in &vertices {
            for (i, m) in g.neighbors(j) {
                let m = if i == j { 2 * m as u64 } else { m as u64 };
                sources.push(local(i));
                weights.push(S::ratio(m, g.degree(i)));
            }
            offsets.push(sources.len());
        }
        let volume = g.volume(&vertices);
        let pi = vertices.iter().map(|&v| S::ratio(g.degree(v), volume)).collect();
        let stay = S::from_param(laziness);
        let travel = S::one() - stay.clone();
        Ok(Chain {
            vertices,
            offsets,
            sources,
            weights,
            stay,
            travel,
            pi,
        })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn pi(&self) -> &[S] {
        &self.pi
    }

    fn row(&self, j: usize, x: &[S]) -> S {
        let mut acc = S::zero();
        for k in self.offsets[j]..self.offsets[j + 1] {
            acc = acc + self.weights[k].clone() * x[self.sources[k] as usize].clone();
        }
        if self.stay.is_zero() {
            acc
        } else {
            self.stay.clone() * x[j].clone() + self.travel.clone() * acc
        }
    }

    /// One application of the kernel: `out = x P`. Output entries are
    /// computed independently, so the result does not depend on how many
    /// worker threads run the pass.
    pub fn step_into(&self, x: &[S], out: &mut [S]) {
        if out.len() < 2 * PARALLEL_CHUNK {
            for (j, y) in out.iter_mut().enumerate() {
                *y = self.row(j, x);
            }
        } else {
            out.par_chunks_mut(PARALLEL_CHUNK)
                .enumerate()
                .for_each(|(c, chunk)| {
                    for (k, y) in chunk.iter_mut().enumerate() {
                        *y = self.row(c * PARALLEL_CHUNK + k, x);
                    }
                });
        }
    }

    pub fn point_mass(&self, v: usize) -> Result<Vec<S>> {
        let k = self
            .vertices
            .binary_search(&v)
            .map_err(|_| Error::param("start", format!("vertex {v} not in component")))?;
        let mut x = vec![S::zero(); self.len()];
        x[k] = S::one();
        Ok(x)
    }

    pub fn tv_to_pi(&self, x: &[S]) -> S {
        half_l1(x, &self.pi)
    }
}

fn check_laziness(laziness: f64) -> Result<()> {
    if !(0.0..1.0).contains(&laziness) {
        return Err(Error::param("laziness", format!("{laziness} is outside [0, 1)")));
    }
    Ok(())
}

/// One step of the (lazy) walk applied to a distribution supported on a
/// whole component.
pub fn step<S: Scalar>(g: &Graph, x: &Distribution<S>, laziness: f64) -> Result<Distribution<S>> {
    let component = VertexSet::from_vertices(g.n(), x.support.iter().copied())?;
    let chain = Chain::new(g, &component, laziness)?;
    let mut out = vec![S::zero(); chain.len()];
    chain.step_into(&x.mass, &mut out);
    Ok(Distribution {
        support: x.support.clone(),
        mass: out,
    })
}

/// Which point masses a mixing-time computation starts from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StartPolicy {
    AllVertices,
    /// `count` vertices drawn uniformly without replacement.
    Sampled { count: usize, seed: RngSeed },
    Designated(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WalkConfig {
    pub laziness: f64,
    pub epsilon: f64,
    pub start_policy: StartPolicy,
    /// Maximum number of sparse passes per start.
    pub max_steps: u64,
    /// Largest component evolved exactly.
    pub max_vertices: usize,
}

pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;
pub const DEFAULT_MAX_VERTICES: usize = 200_000;

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            laziness: 0.0,
            epsilon: (-1.0f64).exp(),
            start_policy: StartPolicy::AllVertices,
            max_steps: DEFAULT_MAX_STEPS,
            max_vertices: DEFAULT_MAX_VERTICES,
        }
    }
}

impl WalkConfig {
    pub fn new(laziness: f64, epsilon: f64, start_policy: StartPolicy) -> Result<Self> {
        let cfg = WalkConfig {
            laziness,
            epsilon,
            start_policy,
            ..Default::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check_laziness(self.laziness)?;
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::param(
                "epsilon",
                format!("{} is outside (0, 1)", self.epsilon),
            ));
        }
        Ok(())
    }

    pub fn with_starts(mut self, policy: StartPolicy) -> Self {
        self.start_policy = policy;
        self
    }

    pub fn with_max_steps(mut self, max_steps: u64) -> Self {
        self.max_steps = max_steps;
        self
    }
}

fn resolve_starts(policy: &StartPolicy, vertices: &[usize]) -> Result<Vec<usize>> {
    match policy {
        StartPolicy::AllVertices => Ok(vertices.to_vec()),
        StartPolicy::Sampled { count, seed } => {
            Ok(sample_without_replacement(vertices, *count, seed))
        }
        StartPolicy::Designated(list) => {
            if list.is_empty() {
                return Err(Error::param("starts", "designated list is empty"));
            }
            for &v in list {
                if vertices.binary_search(&v).is_err() {
                    return Err(Error::param("starts", format!("vertex {v} not in component")));
                }
            }
            Ok(list.clone())
        }
    }
}

/// Partial Fisher-Yates over `pool`; returns `count` distinct entries (all of
/// them when `count >= pool.len()`), in draw order.
pub(crate) fn sample_without_replacement(pool: &[usize], count: usize, seed: &RngSeed) -> Vec<usize> {
    let mut pool = pool.to_vec();
    let k = count.min(pool.len());
    let mut rng = seed.rng_for("sample");
    for i in 0..k {
        let j = i + below(&mut rng, (pool.len() - i) as u64) as usize;
        pool.swap(i, j);
    }
    pool.truncate(k);
    pool
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StartOutcome {
    pub start: usize,
    /// First qualifying `t`, or `None` when the step budget ran out.
    pub steps: Option<u64>,
    pub final_tv: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixingReport {
    pub averaged: bool,
    pub laziness: f64,
    pub epsilon: f64,
    pub step_budget: u64,
    pub component_size: usize,
    pub per_start: Vec<StartOutcome>,
    /// Maximum over starts; `None` when any start was censored.
    pub value: Option<u64>,
}

impl MixingReport {
    pub fn censored(&self) -> bool {
        self.value.is_none()
    }

    /// Largest completed value, a lower bound on the true maximum when
    /// censored.
    pub fn max_completed(&self) -> Option<u64> {
        self.per_start.iter().filter_map(|o| o.steps).max()
    }
}

fn prepare<S: Scalar>(
    g: &Graph,
    component: &VertexSet,
    cfg: &WalkConfig,
) -> Result<(Chain<S>, Vec<usize>)> {
    cfg.validate()?;
    if component.len() > cfg.max_vertices {
        return Err(Error::BudgetExceeded(format!(
            "component has {} vertices, exact evolution is limited to {}",
            component.len(),
            cfg.max_vertices
        )));
    }
    let chain = Chain::new(g, component, cfg.laziness)?;
    let starts = resolve_starts(&cfg.start_policy, chain.vertices())?;
    Ok((chain, starts))
}

fn renormalize<S: Scalar>(x: &mut [S]) {
    let total = sum(x);
    for v in x.iter_mut() {
        *v = v.clone() / total.clone();
    }
}

const RENORMALIZE_EVERY: u64 = 256;

fn first_mixing_step<S: Scalar>(
    chain: &Chain<S>,
    start: usize,
    epsilon: &S,
    max_steps: u64,
) -> Result<StartOutcome> {
    let mut x = chain.point_mass(start)?;
    let mut next = vec![S::zero(); chain.len()];
    let mut tv = chain.tv_to_pi(&x);
    let slack = if S::EXACT { S::zero() } else { S::from_param(1e-12) };
    let mut t = 0;
    while tv >= *epsilon {
        if t == max_steps {
            return Ok(StartOutcome {
                start,
                steps: None,
                final_tv: tv.to_f64_lossy(),
            });
        }
        chain.step_into(&x, &mut next);
        std::mem::swap(&mut x, &mut next);
        t += 1;
        if !S::EXACT && t % RENORMALIZE_EVERY == 0 {
            renormalize(&mut x);
        }
        let current = chain.tv_to_pi(&x);
        if current > tv.clone() + slack.clone() {
            return Err(Error::NonMonotoneTv {
                step: t,
                previous: tv.to_f64_lossy(),
                current: current.to_f64_lossy(),
            });
        }
        tv = current;
    }
    Ok(StartOutcome {
        start,
        steps: Some(t),
        final_tv: tv.to_f64_lossy(),
    })
}

/// `T_mix`: the largest over starts of the first `t` with
/// `d_TV(x0 P^t, pi) < epsilon`.
///
/// A non-lazy walk on a bipartite component never converges and is rejected.
pub fn mixing_time<S: Scalar>(
    g: &Graph,
    component: &VertexSet,
    cfg: &WalkConfig,
) -> Result<MixingReport> {
    let (chain, starts) = prepare::<S>(g, component, cfg)?;
    if cfg.laziness == 0.0 && g.is_bipartite(component)? {
        return Err(Error::BipartiteNotLazy);
    }
    let epsilon = S::from_param(cfg.epsilon);
    let per_start = starts
        .par_iter()
        .map(|&s| first_mixing_step(&chain, s, &epsilon, cfg.max_steps))
        .collect::<Result<Vec<_>>>()?;
    Ok(report(false, cfg, chain.len(), per_start))
}

fn first_averaged_step<S: Scalar>(
    chain: &Chain<S>,
    start: usize,
    epsilon: &S,
    max_steps: u64,
) -> Result<StartOutcome> {
    let mut x = chain.point_mass(start)?;
    let mut next = vec![S::zero(); chain.len()];
    let mut running = x.clone();
    let mut t: u64 = 1;
    // d_TV(running / t, pi) = (1 / 2t) sum |running_i - t pi_i|
    let averaged_tv = |running: &[S], t: u64| -> S {
        let tt = S::from_count(t);
        let total = running
            .iter()
            .zip(&chain.pi)
            .fold(S::zero(), |acc, (r, p)| {
                acc + (r.clone() - tt.clone() * p.clone()).abs()
            });
        total * S::half() / tt
    };
    let mut tv = averaged_tv(&running, t);
    while tv >= *epsilon {
        if t > max_steps {
            return Ok(StartOutcome {
                start,
                steps: None,
                final_tv: tv.to_f64_lossy(),
            });
        }
        chain.step_into(&x, &mut next);
        std::mem::swap(&mut x, &mut next);
        if !S::EXACT && t % RENORMALIZE_EVERY == 0 {
            renormalize(&mut x);
        }
        for (r, v) in running.iter_mut().zip(&x) {
            *r = r.clone() + v.clone();
        }
        t += 1;
        tv = averaged_tv(&running, t);
    }
    Ok(StartOutcome {
        start,
        steps: Some(t),
        final_tv: tv.to_f64_lossy(),
    })
}

/// `T'_mix`: like [`mixing_time`] but measured on the averaged law
/// `(1/t) sum_{s<t} x0 P^s`, i.e. the walk stopped at a uniform time in
/// `{0, ..., t-1}`. The smallest possible value is 1. Defined for bipartite
/// components as well.
pub fn cesaro_mixing_time<S: Scalar>(
    g: &Graph,
    component: &VertexSet,
    cfg: &WalkConfig,
) -> Result<MixingReport> {
    let (chain, starts) = prepare::<S>(g, component, cfg)?;
    let epsilon = S::from_param(cfg.epsilon);
    let per_start = starts
        .par_iter()
        .map(|&s| first_averaged_step(&chain, s, &epsilon, cfg.max_steps))
        .collect::<Result<Vec<_>>>()?;
    Ok(report(true, cfg, chain.len(), per_start))
}

/// Averaged mixing time from an arbitrary initial distribution.
pub fn cesaro_mixing_time_from<S: Scalar>(
    g: &Graph,
    x0: &Distribution<S>,
    cfg: &WalkConfig,
) -> Result<u64> {
    let component = VertexSet::from_vertices(g.n(), x0.support.iter().copied())?;
    let chain = Chain::new(g, &component, cfg.laziness)?;
    let epsilon = S::from_param(cfg.epsilon);
    let mut x = x0.mass.clone();
    let mut next = x.clone();
    let mut running = x.clone();
    let mut t = 1u64;
    loop {
        let tt = S::from_count(t);
        let avg: Vec<S> = running.iter().map(|r| r.clone() / tt.clone()).collect();
        if chain.tv_to_pi(&avg) < epsilon {
            return Ok(t);
        }
        if t > cfg.max_steps {
            return Err(Error::BudgetExceeded(format!(
                "no mixing within {} steps",
                cfg.max_steps
            )));
        }
        chain.step_into(&x, &mut next);
        std::mem::swap(&mut x, &mut next);
        for (r, v) in running.iter_mut().zip(&x) {
            *r = r.clone() + v.clone();
        }
        t += 1;
    }
}

fn report(averaged: bool, cfg: &WalkConfig, size: usize, per_start: Vec<StartOutcome>) -> MixingReport {
    let value = per_start
        .iter()
        .map(|o| o.steps)
        .collect::<Option<Vec<_>>>()
        .map(|v| v.into_iter().max().unwrap_or(0));
    MixingReport {
        averaged,
        laziness: cfg.laziness,
        epsilon: cfg.epsilon,
        step_budget: cfg.max_steps,
        component_size: size,
        per_start,
        value,
    }
}

/// Moves one simple-walk step from `v`, choosing an incident edge end
/// uniformly (a loop offers two ends).
fn walk_step<R: Rng>(g: &Graph, v: usize, rng: &mut R) -> usize {
    let mut r = below(rng, g.degree(v));
    for (w, m) in g.neighbors(v) {
        let weight = if w == v { 2 * m as u64 } else { m as u64 };
        if r < weight {
            return w;
        }
        r -= weight;
    }
    unreachable!("degree equals the sum of incident weights")
}

/// Monte-Carlo estimate of the probability that a simple walk started at the
/// path's midpoint has not visited either path endpoint within `t` steps.
///
/// For an even interior the lower-index centre is used.
pub fn trajectory_escape_probability(
    g: &Graph,
    path: &Degree2Path,
    t: u64,
    walks: u64,
    seed: &RngSeed,
) -> Result<f64> {
    let start = path
        .midpoint()
        .ok_or_else(|| Error::param("path", "interior is empty"))?;
    if walks == 0 {
        return Err(Error::param("walks", "must be positive"));
    }
    let (a, b) = path.endpoints();
    let mut rng = seed.rng_for("escape");
    let mut stayed = 0u64;
    for _ in 0..walks {
        let mut v = start;
        let mut hit = false;
        for _ in 0..t {
            v = walk_step(g, v, &mut rng);
            if v == a || v == b {
                hit = true;
                break;
            }
        }
        if !hit {
            stayed += 1;
        }
    }
    Ok(stayed as f64 / walks as f64)
}

/// Candidate slow starts: midpoints of the longest degree-2 paths, then the
/// deepest vertices of the tallest decorations, then uniform samples from
/// the component. Returns every vertex when `k` covers the component.
pub fn heuristic_worst_starts(
    component: &VertexSet,
    report: &DecompositionReport,
    k: usize,
    seed: &RngSeed,
) -> Vec<usize> {
    if k >= component.len() {
        return component.as_slice().to_vec();
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    let push = |v: usize, chosen: &mut Vec<usize>| {
        if chosen.len() < k && component.contains(v) && !chosen.contains(&v) {
            chosen.push(v);
        }
    };
    for p in report.degree2.longest_first() {
        if let Some(m) = p.midpoint() {
            push(m, &mut chosen);
        }
        if chosen.len() * 2 >= k {
            break;
        }
    }
    let mut trees: Vec<_> = report.decorations.iter().filter(|t| t.height > 0).collect();
    trees.sort_by(|a, b| b.height.cmp(&a.height).then(a.root.cmp(&b.root)));
    for t in trees {
        push(t.deepest, &mut chosen);
        if chosen.len() * 4 >= 3 * k {
            break;
        }
    }
    let rest: Vec<usize> = component.iter().filter(|v| !chosen.contains(v)).collect();
    for v in sample_without_replacement(&rest, k - chosen.len(), seed) {
        push(v, &mut chosen);
    }
    chosen
}
