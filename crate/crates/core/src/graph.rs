//! Immutable sparse (multi)graphs and subset statistics.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};

/// A set of vertex ids over a universe `0..n`.
///
/// Keeps a sorted member list; sets holding at least 1/64 of the universe
/// also keep a bit mask for O(1) membership, smaller ones binary-search.
#[derive(Debug, Clone)]
pub struct VertexSet {
    list: Vec<usize>,
    universe: usize,
    mask: Option<FixedBitSet>,
}

impl PartialEq for VertexSet {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe && self.list == other.list
    }
}

impl Eq for VertexSet {}

impl VertexSet {
    fn from_sorted(universe: usize, list: Vec<usize>) -> Self {
        let mask = (list.len() * 64 >= universe).then(|| {
            let mut m = FixedBitSet::with_capacity(universe);
            for &v in &list {
                m.insert(v);
            }
            m
        });
        VertexSet {
            list,
            universe,
            mask,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted(n, Vec::new())
    }

    pub fn full(n: usize) -> Self {
        Self::from_sorted(n, (0..n).collect())
    }

    /// Builds a set over a universe of `n` vertices. Duplicates are ignored.
    pub fn from_vertices(n: usize, vertices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut list: Vec<usize> = vertices.into_iter().collect();
        if let Some(&v) = list.iter().find(|&&v| v >= n) {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        list.sort_unstable();
        list.dedup();
        Ok(Self::from_sorted(n, list))
    }

    pub(crate) fn from_mask(mask: FixedBitSet) -> Self {
        let list = mask.ones().collect();
        Self::from_sorted(mask.len(), list)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        match &self.mask {
            Some(m) => v < m.len() && m.contains(v),
            None => self.list.binary_search(&v).is_ok(),
        }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.list
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.list.iter().copied()
    }

    /// Membership mask over the whole universe.
    pub fn to_mask(&self) -> FixedBitSet {
        match &self.mask {
            Some(m) => m.clone(),
            None => {
                let mut m = FixedBitSet::with_capacity(self.universe);
                for &v in &self.list {
                    m.insert(v);
                }
                m
            }
        }
    }

    pub fn complement(&self) -> VertexSet {
        let list = (0..self.universe).filter(|&v| !self.contains(v)).collect();
        Self::from_sorted(self.universe, list)
    }

    /// Members of `self` not in `other`.
    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let list = self.iter().filter(|&v| !other.contains(v)).collect();
        Self::from_sorted(self.universe, list)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.list.iter().all(|&v| other.contains(v))
    }
}

/// Serialized as the sorted member list.
impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.list.serialize(s)
    }
}

/// Undirected multigraph in compressed adjacency form.
///
/// Each vertex stores `(neighbor, multiplicity)` pairs sorted by neighbor. A
/// loop at `v` appears once in `v`'s list with its loop count as multiplicity;
/// it adds 2 per loop to `degree(v)` and 1 per loop to the edge count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    multiplicity: Vec<u32>,
    degree: Vec<u64>,
    edge_count: u64,
    is_multigraph: bool,
}

impl Graph {
    /// Builds a graph from an edge list. With `allow_multi == false` any loop
    /// or repeated pair is rejected.
    pub fn build(n: usize, edges: &[(usize, usize)], allow_multi: bool) -> Result<Graph> {
        let mut half_edges: Vec<(u32, u32)> = Vec::with_capacity(edges.len() * 2);
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                if !allow_multi {
                    return Err(Error::LoopInSimpleGraph(u));
                }
                half_edges.push((u as u32, v as u32));
            } else {
                half_edges.push((u as u32, v as u32));
                half_edges.push((v as u32, u as u32));
            }
        }
        half_edges.sort_unstable();

        let mut offsets = vec![0usize; n + 1];
        let mut neighbors = Vec::with_capacity(half_edges.len());
        let mut multiplicity: Vec<u32> = Vec::with_capacity(half_edges.len());
        let mut degree = vec![0u64; n];
        let mut is_multigraph = false;
        let mut i = 0;
        while i < half_edges.len() {
            let (u, v) = half_edges[i];
            let mut j = i;
            while j < half_edges.len() && half_edges[j] == (u, v) {
                j += 1;
            }
            let m = (j - i) as u32;
            if m > 1 && !allow_multi {
                let (a, b) = (u.min(v) as usize, u.max(v) as usize);
                return Err(Error::DuplicateEdge(a, b));
            }
            is_multigraph |= m > 1 || u == v;
            neighbors.push(v);
            multiplicity.push(m);
            degree[u as usize] += if u == v { 2 * m as u64 } else { m as u64 };
            offsets[u as usize + 1] += 1;
            i = j;
        }
        for k in 0..n {
            offsets[k + 1] += offsets[k];
        }
        let edge_count = degree.iter().sum::<u64>() / 2;
        Ok(Graph {
            offsets,
            neighbors,
            multiplicity,
            degree,
            edge_count,
            is_multigraph,
        })
    }

    pub fn n(&self) -> usize {
        self.degree.len()
    }

    /// Number of edges `e*`, loops counted once.
    pub fn edge_count(&self) -> u64 {
        self.edge_count
    }

    /// Whether a loop or a repeated edge is present.
    pub fn is_multigraph(&self) -> bool {
        self.is_multigraph
    }

    #[inline]
    pub fn degree(&self, v: usize) -> u64 {
        self.degree[v]
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degree
    }

    /// `(neighbor, multiplicity)` pairs of `v`, sorted by neighbor.
    #[inline]
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, u32)> + '_ {
        let range = self.offsets[v]..self.offsets[v + 1];
        self.neighbors[range.clone()]
            .iter()
            .zip(&self.multiplicity[range])
            .map(|(&w, &m)| (w as usize, m))
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u32 {
        let range = self.offsets[u]..self.offsets[u + 1];
        match self.neighbors[range.clone()].binary_search(&(v as u32)) {
            Ok(k) => self.multiplicity[range.start + k],
            Err(_) => 0,
        }
    }

    /// Number of loops at `v`.
    pub fn loops(&self, v: usize) -> u32 {
        self.multiplicity(v, v)
    }

    /// Every edge once as `(u, v)` with `u <= v`, repeated by multiplicity, in
    /// lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&(v, _)| v >= u)
                .flat_map(move |(v, m)| std::iter::repeat_n((u, v), m as usize))
        })
    }

    /// Total degree `d(S)` of a vertex list.
    pub fn volume(&self, vertices: &[usize]) -> u64 {
        vertices.iter().map(|&v| self.degree[v]).sum()
    }

    /// Statistics `e(S)`, `e^out(S)`, `d(S)` of a vertex set.
    pub fn subset_stats(&self, members: &VertexSet) -> VertexSubset {
        let mut total_degree = 0u64;
        let mut e_out = 0u64;
        for v in members.iter() {
            total_degree += self.degree[v];
            for (w, m) in self.neighbors(v) {
                if !members.contains(w) {
                    e_out += m as u64;
                }
            }
        }
        VertexSubset {
            members: members.clone(),
            e_in: (total_degree - e_out) / 2,
            e_out,
            total_degree,
        }
    }

    pub fn subset_stats_of(&self, vertices: &[usize]) -> Result<VertexSubset> {
        let set = VertexSet::from_vertices(self.n(), vertices.iter().copied())?;
        Ok(self.subset_stats(&set))
    }

    /// Breadth-first search from `start` through vertices accepted by
    /// `allowed`, skipping and marking vertices in `seen`. Returns the visited
    /// vertices in BFS order.
    pub fn bfs_with(
        &self,
        start: usize,
        allowed: impl Fn(usize) -> bool,
        seen: &mut FixedBitSet,
    ) -> Vec<usize> {
        let mut order = vec![start];
        seen.insert(start);
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for (w, _) in self.neighbors(v) {
                if !seen.contains(w) && allowed(w) {
                    seen.insert(w);
                    order.push(w);
                }
            }
        }
        order
    }

    /// Vertices of `within` reachable from `start` without leaving `within`.
    pub fn reach_within(&self, start: usize, within: &VertexSet) -> VertexSet {
        let mut seen = FixedBitSet::with_capacity(self.n());
        let order = self.bfs_with(start, |w| within.contains(w), &mut seen);
        VertexSet::from_vertices(self.n(), order).expect("in range")
    }

    /// Whether the subgraph induced on `set` is connected. The empty set is
    /// not considered connected.
    pub fn is_connected_within(&self, set: &VertexSet) -> bool {
        match set.as_slice().first() {
            None => false,
            Some(&s) => self.reach_within(s, set).len() == set.len(),
        }
    }

    /// Checks that `set` is a nonempty connected union of whole components.
    pub fn check_component(&self, set: &VertexSet) -> Result<()> {
        if !self.is_connected_within(set) {
            return Err(Error::NotConnected);
        }
        for v in set.iter() {
            for (w, _) in self.neighbors(v) {
                if !set.contains(w) {
                    return Err(Error::NotClosed(v, w));
                }
            }
        }
        Ok(())
    }

    /// Two-colours a connected vertex set. Returns `None` when bipartite,
    /// otherwise an odd cycle as a closed vertex sequence (first vertex not
    /// repeated at the end; a loop yields a one-vertex witness).
    pub fn odd_cycle(&self, component: &VertexSet) -> Result<Option<Vec<usize>>> {
        if !self.is_connected_within(component) {
            return Err(Error::NotConnected);
        }
        let n = self.n();
        let root = component.as_slice()[0];
        let mut colour = vec![u8::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![0usize; n];
        let mut queue = VecDeque::new();
        colour[root] = 0;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            for (w, _) in self.neighbors(v) {
                if !component.contains(w) {
                    continue;
                }
                if w == v {
                    return Ok(Some(vec![v]));
                }
                if colour[w] == u8::MAX {
                    colour[w] = 1 - colour[v];
                    parent[w] = v;
                    depth[w] = depth[v] + 1;
                    queue.push_back(w);
                } else if colour[w] == colour[v] {
                    // Walk both tree paths up to their meeting point.
                    let (mut a, mut b) = (v, w);
                    let mut left = vec![a];
                    let mut right = vec![b];
                    while depth[a] > depth[b] {
                        a = parent[a];
                        left.push(a);
                    }
                    while depth[b] > depth[a] {
                        b = parent[b];
                        right.push(b);
                    }
                    while a != b {
                        a = parent[a];
                        b = parent[b];
                        left.push(a);
                        right.push(b);
                    }
                    right.pop();
                    left.reverse();
                    left.extend(right);
                    return Ok(Some(left));
                }
            }
        }
        Ok(None)
    }

    pub fn is_bipartite(&self, component: &VertexSet) -> Result<bool> {
        Ok(self.odd_cycle(component)?.is_none())
    }
}

/// A vertex set together with its cached edge statistics.
///
/// `total_degree == 2 * e_in + e_out` always holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSubset {
    pub members: VertexSet,
    pub e_in: u64,
    pub e_out: u64,
    pub total_degree: u64,
}

impl VertexSubset {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Degree-sequence summary used in reports.
#[derive(Debug, Clone, Serialize)]
pub struct GraphSummary {
    pub n: usize,
    pub edges: u64,
    pub multigraph: bool,
    pub max_degree: u64,
}

impl From<&Graph> for GraphSummary {
    fn from(g: &Graph) -> Self {
        GraphSummary {
            n: g.n(),
            edges: g.edge_count(),
            multigraph: g.is_multigraph(),
            max_degree: g.degrees().iter().copied().max().unwrap_or(0),
        }
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn triangle() {
        let g = Graph::build(3, &[(0, 1), (1, 2), (0, 2)], false).unwrap();
        assert_eq!(g.degrees(), &[2, 2, 2]);
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn empty_graph() {
        let g = Graph::build(2, &[], false).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.degrees(), &[0, 0]);
    }

    #[test]
    fn single_loop() {
        let g = Graph::build(1, &[(0, 0)], true).unwrap();
        assert_eq!(g.degree(0), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.loops(0), 1);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 0)]);
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(
            Graph::build(3, &[(0, 1), (1, 0)], false),
            Err(Error::DuplicateEdge(0, 1))
        );
        assert_eq!(
            Graph::build(3, &[(2, 2)], false),
            Err(Error::LoopInSimpleGraph(2))
        );
        assert_eq!(
            Graph::build(3, &[(0, 3)], true),
            Err(Error::VertexOutOfRange { vertex: 3, n: 3 })
        );
    }

    #[test]
    fn multi_edges_are_counted() {
        let g = Graph::build(2, &[(0, 1), (1, 0), (1, 1)], true).unwrap();
        assert_eq!(g.multiplicity(0, 1), 2);
        assert_eq!(g.degree(1), 4);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 1), (1, 1)]);
    }

    #[test]
    fn k4_pair_stats() {
        let g = complete(4);
        let s = g.subset_stats_of(&[0, 1]).unwrap();
        assert_eq!((s.e_in, s.e_out, s.total_degree), (1, 4, 6));
    }

    #[test]
    fn full_set_stats() {
        let g = complete(5);
        let s = g.subset_stats(&VertexSet::full(5));
        assert_eq!((s.e_in, s.e_out, s.total_degree), (10, 0, 20));
    }

    #[test]
    fn c8_arc_stats() {
        let g = cycle(8);
        let s = g.subset_stats_of(&[2, 3, 4, 5]).unwrap();
        assert_eq!((s.e_in, s.e_out, s.total_degree), (3, 2, 8));
    }

    #[test]
    fn empty_subset_is_zero() {
        let g = cycle(8);
        let s = g.subset_stats(&VertexSet::empty(8));
        assert_eq!((s.e_in, s.e_out, s.total_degree), (0, 0, 0));
    }

    #[test]
    fn bipartiteness() {
        let c8 = cycle(8);
        assert!(c8.is_bipartite(&VertexSet::full(8)).unwrap());

        let tri = complete(3);
        let w = tri.odd_cycle(&VertexSet::full(3)).unwrap().unwrap();
        assert_eq!(w.len(), 3);

        let lp = Graph::build(1, &[(0, 0)], true).unwrap();
        assert_eq!(lp.odd_cycle(&VertexSet::full(1)).unwrap(), Some(vec![0]));

        let two = Graph::build(4, &[(0, 1), (2, 3)], false).unwrap();
        assert_eq!(
            two.is_bipartite(&VertexSet::full(4)),
            Err(Error::NotConnected)
        );
    }

    #[test]
    fn odd_cycle_witness_is_a_closed_walk() {
        // C7 with a pendant path; witness must be an odd cycle of real edges.
        let mut edges: Vec<_> = (0..7).map(|i| (i, (i + 1) % 7)).collect();
        edges.extend([(3, 7), (7, 8)]);
        let g = Graph::build(9, &edges, false).unwrap();
        let w = g.odd_cycle(&VertexSet::full(9)).unwrap().unwrap();
        assert_eq!(w.len() % 2, 1);
        for k in 0..w.len() {
            assert!(g.multiplicity(w[k], w[(k + 1) % w.len()]) > 0);
        }
    }

    #[test]
    fn component_checks() {
        let g = Graph::build(4, &[(0, 1), (2, 3)], false).unwrap();
        let a = VertexSet::from_vertices(4, [0, 1]).unwrap();
        assert!(g.check_component(&a).is_ok());
        let b = VertexSet::from_vertices(4, [0]).unwrap();
        assert_eq!(g.check_component(&b), Err(Error::NotClosed(0, 1)));
        let c = VertexSet::from_vertices(4, [0, 2]).unwrap();
        assert_eq!(g.check_component(&c), Err(Error::NotConnected));
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..64).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..(3 * n))
                .prop_map(move |edges| Graph::build(n, &edges, true).unwrap())
        })
    }

    fn brute_force(g: &Graph, members: &[bool]) -> (u64, u64, u64) {
        let (mut e_in, mut e_out, mut deg) = (0, 0, 0);
        for (u, v) in g.edges() {
            match (members[u], members[v]) {
                (true, true) => e_in += 1,
                (true, false) | (false, true) => e_out += 1,
                _ => {}
            }
        }
        for v in 0..g.n() {
            if members[v] {
                for (u, w) in g.edges() {
                    if u == v {
                        deg += 1;
                    }
                    if w == v {
                        deg += 1;
                    }
                }
            }
        }
        (e_in, e_out, deg)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn subset_stats_match_brute_force(
            g in arb_graph(),
            bits in proptest::collection::vec(any::<bool>(), 64),
        ) {
            let members = &bits[..g.n()];
            let set = VertexSet::from_vertices(
                g.n(),
                (0..g.n()).filter(|&v| members[v]),
            ).unwrap();
            let s = g.subset_stats(&set);
            prop_assert_eq!((s.e_in, s.e_out, s.total_degree), brute_force(&g, members));
            prop_assert_eq!(s.total_degree, 2 * s.e_in + s.e_out);
            let c = g.subset_stats(&set.complement());
            prop_assert_eq!(s.e_out, c.e_out);
            prop_assert_eq!(g.degrees().iter().sum::<u64>(), 2 * g.edge_count());
        }
    }
}
