//! Upper bounds on the minimum conductance of large components.
//!
//! Three candidate families are swept and the best connected set wins:
//! breadth-first balls around sampled roots and long-path midpoints, prefix
//! sets of an approximate second eigenvector of the lazy walk, and pieces cut
//! off by long degree-2 paths or by bridges. Prefix sweeps record only
//! `(conductance, prefix length)` and build vertex lists for the winners.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use super::{Candidate, ComponentView, MinConductance, PhiFraction, Tally};
use crate::decompose::{degree2_paths, DecompositionReport, PathCensus};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::rng::{below, RngSeed};
use crate::walk::sample_without_replacement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    BfsBall,
    Spectral,
    PathHalf,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyBest {
    pub family: Family,
    pub phi: Option<PhiFraction>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeuristicResult {
    pub best: MinConductance,
    pub family: Family,
    pub per_family: Vec<FamilyBest>,
}

/// Components up to this size use every vertex as a ball centre.
const ALL_ROOTS_MAX: usize = 64;
const SAMPLED_ROOTS: usize = 32;
const PATH_ROOTS: usize = 16;
const PATH_SWEEPS: usize = 32;
const POWER_ITERATIONS: usize = 500;
const POWER_TOLERANCE: f64 = 1e-8;

/// Best-so-far over the prefixes of one vertex order.
struct PrefixSweep<'a> {
    view: &'a ComponentView<'a>,
    order: Vec<usize>,
    position: Vec<u32>,
}

impl<'a> PrefixSweep<'a> {
    fn new(view: &'a ComponentView<'a>, order: Vec<usize>) -> Self {
        let mut position = vec![u32::MAX; view.g.n()];
        for (k, &v) in order.iter().enumerate() {
            position[v] = k as u32;
        }
        PrefixSweep {
            view,
            order,
            position,
        }
    }

    /// Feeds every prefix with `pi <= 1/2` to `connected`, and to `any`
    /// regardless of connectivity. Connectivity is tracked with a
    /// union-find unless the order is known to keep prefixes connected.
    fn run(
        &self,
        assume_connected: bool,
        connected: &mut Tally<usize>,
        mut any: Option<&mut Tally<usize>>,
    ) {
        let g = self.view.g;
        let mut parent: Vec<u32> = if assume_connected {
            Vec::new()
        } else {
            (0..self.order.len() as u32).collect()
        };
        let mut pieces = 0usize;
        let (mut degree, mut cut) = (0u64, 0u64);
        for (k, &v) in self.order.iter().enumerate() {
            let d = g.degree(v);
            if 2 * (degree + d) > self.view.volume {
                break;
            }
            let mut inner = 0u64;
            pieces += 1;
            for (w, m) in g.neighbors(v) {
                let p = self.position[w];
                if w == v {
                    inner += 2 * m as u64;
                } else if (p as usize) < k {
                    inner += 2 * m as u64;
                    if !assume_connected && union(&mut parent, p, k as u32) {
                        pieces -= 1;
                    }
                }
            }
            degree += d;
            cut = cut + d - inner;
            let len = k + 1;
            if assume_connected || pieces == 1 {
                connected.offer(cut, degree, || len);
            }
            if let Some(t) = any.as_deref_mut() {
                t.offer(cut, degree, || len);
            }
        }
    }

    fn prefix(&self, len: usize) -> Vec<usize> {
        let mut out = self.order[..len].to_vec();
        out.sort_unstable();
        out
    }

    /// Moves the sweep's results into a tally of vertex lists.
    fn export(&self, sweep: Tally<usize>, into: &mut Tally) {
        for c in sweep.held() {
            let c = c.clone();
            let w = self.prefix(c.witness);
            let (cut, d) = (c.cut, c.set_degree);
            into.offer(cut, d, || w);
        }
    }
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let up = parent[parent[x as usize] as usize];
        parent[x as usize] = up;
        x = up;
    }
    x
}

fn union(parent: &mut [u32], a: u32, b: u32) -> bool {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra == rb {
        return false;
    }
    parent[ra.max(rb) as usize] = ra.min(rb);
    true
}

fn ball_family(view: &ComponentView, component: &VertexSet, census: &PathCensus, seed: &RngSeed) -> Tally {
    let g = view.g;
    let mut roots: Vec<usize> = if view.vertices.len() <= ALL_ROOTS_MAX {
        view.vertices.clone()
    } else {
        sample_without_replacement(&view.vertices, SAMPLED_ROOTS, &seed.child("roots"))
    };
    for p in census.longest_first().into_iter().take(PATH_ROOTS) {
        if let Some(m) = p.midpoint() {
            if !roots.contains(&m) {
                roots.push(m);
            }
        }
    }
    let tallies: Vec<Tally> = roots
        .par_iter()
        .map(|&root| {
            let mut seen = FixedBitSet::with_capacity(g.n());
            let order = g.bfs_with(root, |w| component.contains(w), &mut seen);
            let sweep = PrefixSweep::new(view, order);
            let mut local = view.tally();
            sweep.run(true, &mut local, None);
            let mut out = view.tally();
            sweep.export(local, &mut out);
            out
        })
        .collect();
    let mut total = view.tally();
    for t in tallies {
        total.merge(t);
    }
    for &v in &view.vertices {
        let d = g.degree(v);
        total.offer(d - 2 * g.loops(v) as u64, d, || vec![v]);
    }
    total
}

/// Approximate second eigenvector of the lazy walk `(I + P) / 2`, by power
/// iteration orthogonal (in the `pi` inner product) to constants.
fn second_eigenvector(view: &ComponentView, seed: &RngSeed) -> Vec<f64> {
    let g = view.g;
    let k = view.vertices.len();
    let local = |v: usize| view.vertices.binary_search(&v).expect("closed component");
    let rows: Vec<Vec<(usize, f64)>> = view
        .vertices
        .iter()
        .map(|&v| {
            let d = g.degree(v) as f64;
            g.neighbors(v)
                .map(|(w, m)| {
                    let m = if w == v { 2.0 * m as f64 } else { m as f64 };
                    (local(w), m / d)
                })
                .collect()
        })
        .collect();
    let pi: Vec<f64> = view
        .vertices
        .iter()
        .map(|&v| g.degree(v) as f64 / view.volume as f64)
        .collect();
    let deflate = |f: &mut [f64]| {
        let mean: f64 = f.iter().zip(&pi).map(|(x, p)| x * p).sum();
        f.iter_mut().for_each(|x| *x -= mean);
    };
    let norm = |f: &[f64]| f.iter().zip(&pi).map(|(x, p)| x * x * p).sum::<f64>().sqrt();
    let mut rng = seed.rng_for("spectral");
    let mut f: Vec<f64> = (0..k)
        .map(|_| if below(&mut rng, 2) == 0 { -1.0 } else { 1.0 })
        .collect();
    deflate(&mut f);
    let mut next = vec![0.0; k];
    for _ in 0..POWER_ITERATIONS {
        let n0 = norm(&f);
        if n0 == 0.0 {
            break;
        }
        f.iter_mut().for_each(|x| *x /= n0);
        next.par_iter_mut()
            .with_min_len(4096)
            .enumerate()
            .for_each(|(i, y)| {
                let walk: f64 = rows[i].iter().map(|&(j, w)| w * f[j]).sum();
                *y = 0.5 * f[i] + 0.5 * walk;
            });
        deflate(&mut next);
        let lambda: f64 = next.iter().zip(&f).zip(&pi).map(|((a, b), p)| a * b * p).sum();
        let residual = next
            .iter()
            .zip(&f)
            .zip(&pi)
            .map(|((a, b), p)| (a - lambda * b).powi(2) * p)
            .sum::<f64>()
            .sqrt();
        std::mem::swap(&mut f, &mut next);
        if residual < POWER_TOLERANCE {
            break;
        }
    }
    f
}

/// Splits a vertex list into the connected pieces it induces.
fn pieces_of(g: &Graph, vertices: &[usize]) -> Vec<Vec<usize>> {
    let set = VertexSet::from_vertices(g.n(), vertices.iter().copied()).expect("in range");
    let mut seen = FixedBitSet::with_capacity(g.n());
    let mut out = Vec::new();
    for &v in set.as_slice() {
        if !seen.contains(v) {
            let mut piece = g.bfs_with(v, |w| set.contains(w), &mut seen);
            piece.sort_unstable();
            out.push(piece);
        }
    }
    out
}

fn spectral_family(view: &ComponentView, seed: &RngSeed) -> Tally {
    let g = view.g;
    let f = second_eigenvector(view, seed);
    let mut idx: Vec<usize> = (0..view.vertices.len()).collect();
    idx.sort_by(|&a, &b| f[a].total_cmp(&f[b]).then(a.cmp(&b)));
    let mut total = view.tally();
    for descending in [false, true] {
        let mut order: Vec<usize> = idx.iter().map(|&i| view.vertices[i]).collect();
        if descending {
            order.reverse();
        }
        let sweep = PrefixSweep::new(view, order);
        let mut connected = view.tally();
        let mut any = view.tally();
        sweep.run(false, &mut connected, Some(&mut any));
        sweep.export(connected, &mut total);
        // A disconnected prefix is never better than its best piece.
        if let Some(c) = any.best() {
            for piece in pieces_of(g, &sweep.order[..c.witness]) {
                let stats = g.subset_stats_of(&piece).expect("in range");
                total.offer(stats.e_out, stats.total_degree, || piece);
            }
        }
    }
    total
}

/// Bridges of the component as `(parent, child)` tree edges of a DFS from
/// the least vertex, with the DFS preorder and subtree ranges.
struct BridgeTree {
    preorder: Vec<usize>,
    enter: Vec<u32>,
    leave: Vec<u32>,
    subtree_volume: Vec<u64>,
    bridges: Vec<usize>,
}

fn bridge_tree(view: &ComponentView) -> BridgeTree {
    let g = view.g;
    let n = g.n();
    let adjacency: Vec<Vec<(usize, u32)>> = (0..n)
        .map(|v| {
            if view.vertices.binary_search(&v).is_ok() {
                g.neighbors(v).collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    let mut enter = vec![u32::MAX; n];
    let mut leave = vec![0u32; n];
    let mut low = vec![0u32; n];
    let mut parent = vec![usize::MAX; n];
    let mut subtree_volume = vec![0u64; n];
    let mut preorder = Vec::with_capacity(view.vertices.len());
    let mut bridges = Vec::new();
    let root = view.vertices[0];
    let mut stack = vec![(root, 0usize)];
    enter[root] = 0;
    low[root] = 0;
    preorder.push(root);
    while let Some(top) = stack.last_mut() {
        let v = top.0;
        if top.1 < adjacency[v].len() {
            let (w, m) = adjacency[v][top.1];
            top.1 += 1;
            if w == v {
                continue;
            }
            if enter[w] == u32::MAX {
                parent[w] = v;
                enter[w] = preorder.len() as u32;
                low[w] = enter[w];
                preorder.push(w);
                stack.push((w, 0));
            } else if !(w == parent[v] && m == 1) {
                low[v] = low[v].min(enter[w]);
            }
        } else {
            stack.pop();
            leave[v] = preorder.len() as u32;
            subtree_volume[v] += g.degree(v);
            let p = parent[v];
            if p != usize::MAX {
                subtree_volume[p] += subtree_volume[v];
                low[p] = low[p].min(low[v]);
                if low[v] > enter[p] {
                    bridges.push(v);
                }
            }
        }
    }
    BridgeTree {
        preorder,
        enter,
        leave,
        subtree_volume,
        bridges,
    }
}

fn path_family(view: &ComponentView, component: &VertexSet, census: &PathCensus) -> Tally {
    let mut total = view.tally();
    for p in census.longest_first().into_iter().take(PATH_SWEEPS) {
        let interior = p.interior();
        if interior.is_empty() {
            continue;
        }
        for order in [interior.to_vec(), interior.iter().rev().copied().collect()] {
            let sweep = PrefixSweep::new(view, order);
            let mut local = view.tally();
            sweep.run(true, &mut local, None);
            sweep.export(local, &mut total);
        }
    }
    // Bridge sides: the child subtree, or its complement when heavier.
    let tree = bridge_tree(view);
    let mut sides: Tally<(usize, bool)> = view.tally();
    for &c in &tree.bridges {
        let d = tree.subtree_volume[c];
        let (d, flip) = if 2 * d <= view.volume {
            (d, false)
        } else {
            (view.volume - d, true)
        };
        sides.offer(1, d, || (c, flip));
    }
    for c in sides.held() {
        let (child, flip) = c.witness;
        let range = tree.enter[child] as usize..tree.leave[child] as usize;
        let mut w: Vec<usize> = tree.preorder[range].to_vec();
        if flip {
            let inside = VertexSet::from_vertices(view.g.n(), w).expect("in range");
            w = component.difference(&inside).as_slice().to_vec();
        }
        w.sort_unstable();
        total.offer(c.cut, c.set_degree, || w);
    }
    total
}

pub(crate) fn heuristic_tallies(
    view: &ComponentView,
    component: &VertexSet,
    report: Option<&DecompositionReport>,
    seed: &RngSeed,
) -> Vec<(Family, Tally)> {
    let own;
    let census = match report {
        Some(r) if r.giant_set() == Some(component) => &r.degree2,
        _ => {
            own = degree2_paths(view.g, component);
            &own
        }
    };
    let (balls, (spectral, paths)) = rayon::join(
        || ball_family(view, component, census, seed),
        || {
            rayon::join(
                || spectral_family(view, seed),
                || path_family(view, component, census),
            )
        },
    );
    vec![
        (Family::BfsBall, balls),
        (Family::Spectral, spectral),
        (Family::PathHalf, paths),
    ]
}

/// Best conductance over the candidate families; an upper bound on the
/// exact minimum. Ties go to the earlier family in [`Family`] order.
pub fn heuristic_min_conductance(
    g: &Graph,
    component: &VertexSet,
    report: Option<&DecompositionReport>,
    seed: &RngSeed,
) -> Result<HeuristicResult> {
    let view = ComponentView::new(g, component)?;
    let tallies = heuristic_tallies(&view, component, report, seed);
    let mut winner: Option<(Family, Candidate)> = None;
    let mut per_family = Vec::new();
    for (family, t) in &tallies {
        let best = t.best().cloned();
        per_family.push(FamilyBest {
            family: *family,
            phi: best.as_ref().map(|c| c.phi),
        });
        if let Some(c) = best {
            if winner.as_ref().is_none_or(|(_, w)| c.phi < w.phi) {
                winner = Some((*family, c));
            }
        }
    }
    let (family, c) =
        winner.ok_or_else(|| Error::param("component", "has no set with 0 < pi(S) <= 1/2"))?;
    Ok(HeuristicResult {
        best: MinConductance::from_candidate(g.n(), &c),
        family,
        per_family,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conductance::{exact_min_conductance, ExactBudget};
    use crate::decompose::{components, decompose};
    use crate::generators::sample_gnp;
    use crate::graph::fixtures::*;

    #[test]
    fn cycle_matches_exact() {
        let g = cycle(8);
        let r = heuristic_min_conductance(&g, &VertexSet::full(8), None, &RngSeed::new(1)).unwrap();
        assert_eq!(r.best.phi, PhiFraction { num: 1, den: 2 });
        assert!(g.is_connected_within(&r.best.witness));
    }

    fn barbell(clique: usize, interior: usize) -> Graph {
        let mut edges = Vec::new();
        for base in [0, clique] {
            for u in 0..clique {
                for v in u + 1..clique {
                    edges.push((base + u, base + v));
                }
            }
        }
        let mut prev = clique - 1;
        for k in 0..interior {
            edges.push((prev, 2 * clique + k));
            prev = 2 * clique + k;
        }
        edges.push((prev, clique));
        Graph::build(2 * clique + interior, &edges, false).unwrap()
    }

    #[test]
    fn barbell_half_contains_one_clique() {
        let g = barbell(20, 101);
        let all = VertexSet::full(g.n());
        let report = decompose(&g).unwrap();
        let r = heuristic_min_conductance(&g, &all, Some(&report), &RngSeed::new(3)).unwrap();
        let w = &r.best.witness;
        let first = (0..20).all(|v| w.contains(v));
        let second = (20..40).all(|v| w.contains(v));
        assert!(first ^ second, "witness should hold exactly one clique");
        // Volume 2 * (380 + 102) = 964; a clique side has odd volume 381 + 2h.
        assert_eq!(r.best.phi, PhiFraction::new(1, 481, 964));
        assert!(g.is_connected_within(w));
    }

    #[test]
    fn bridges_found() {
        // Triangle 0-1-2 with a pendant path 2-3-4.
        let g = Graph::build(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)], false).unwrap();
        let view = ComponentView::new(&g, &VertexSet::full(5)).unwrap();
        let t = bridge_tree(&view);
        let mut b: Vec<usize> = t.bridges.clone();
        b.sort();
        assert_eq!(b, vec![3, 4]);
        // A doubled edge is not a bridge.
        let g = Graph::build(3, &[(0, 1), (0, 1), (1, 2)], true).unwrap();
        let view = ComponentView::new(&g, &VertexSet::full(3)).unwrap();
        assert_eq!(bridge_tree(&view).bridges, vec![2]);
    }

    #[test]
    fn never_below_exact() {
        let budget = ExactBudget::default();
        for r in 0..60 {
            let seed = RngSeed::stream(11, "heur", r);
            let n = 6 + (r as usize % 10);
            let g = sample_gnp(n, 2.5 / n as f64, &seed).unwrap();
            let giant = components(&g).remove(0);
            if giant.len() < 3 {
                continue;
            }
            let exact = exact_min_conductance(&g, &giant, &budget).unwrap();
            let h = heuristic_min_conductance(&g, &giant, None, &seed).unwrap();
            assert!(h.best.phi >= exact.phi);
            assert!(g.is_connected_within(&h.best.witness));
        }
    }

    #[test]
    fn deterministic() {
        let seed = RngSeed::stream(4, "heur-det", 0);
        let g = sample_gnp(3000, 2.0 / 3000.0, &seed).unwrap();
        let giant = components(&g).remove(0);
        let a = heuristic_min_conductance(&g, &giant, None, &seed).unwrap();
        let b = heuristic_min_conductance(&g, &giant, None, &seed).unwrap();
        assert_eq!(a, b);
    }
}
