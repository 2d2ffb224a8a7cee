//! Structural decomposition of a graph: connected components, the giant, its
//! 2-core, the trees hanging off the core, dangling trees, and maximal
//! induced paths of degree-2 vertices.

use std::collections::{BTreeMap, VecDeque};


use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Connected components sorted by decreasing size, ties broken by the smallest
/// vertex id in the component.
pub fn components(g: &Graph) -> Vec<VertexSet> {
    let n = g.n();
    let mut seen = FixedBitSet::with_capacity(n);
    let mut comps = Vec::new();
    for v in 0..n {
        if seen.contains(v) {
            continue;
        }
        let order = g.bfs_with(v, |_| true, &mut seen);
        comps.push(VertexSet::from_vertices(n, order).expect("in range"));
    }
    // Components were discovered in order of their least vertex; a stable sort
    // by size keeps that order among equal sizes.
    comps.sort_by_key(|c| std::cmp::Reverse(c.len()));
    comps
}

/// Degree of `v` counted only over edges into `within` (loops count twice).
fn degree_within(g: &Graph, v: usize, within: &VertexSet) -> u64 {
    g.neighbors(v)
        .filter(|&(w, _)| within.contains(w))
        .map(|(w, m)| if w == v { 2 * m as u64 } else { m as u64 })
        .sum()
}

/// The 2-core of the subgraph induced on `within`: the largest subset whose
/// induced subgraph has minimum degree 2. Computed by peeling vertices of
/// degree at most one from a queue in `O(n + e*)`.
pub fn two_core(g: &Graph, within: &VertexSet) -> VertexSet {
    let n = g.n();
    let mut deg = vec![0u64; n];
    let mut alive = within.to_mask();
    let mut queue = VecDeque::new();
    for v in within.iter() {
        deg[v] = degree_within(g, v, within);
        if deg[v] <= 1 {
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        if !alive.contains(v) {
            continue;
        }
        alive.set(v, false);
        for (w, m) in g.neighbors(v) {
            if w != v && alive.contains(w) {
                let before = deg[w];
                deg[w] -= m as u64;
                if before > 1 && deg[w] <= 1 {
                    queue.push_back(w);
                }
            }
        }
    }
    VertexSet::from_mask(alive)
}

/// A tree hanging from the core, or a whole tree component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootedTree {
    pub root: usize,
    /// Core vertex the root is joined to; `None` for a tree with no core.
    pub attachment: Option<usize>,
    /// All tree vertices in breadth-first order from the root.
    pub vertices: Vec<usize>,
    /// Distance from the root to the farthest tree vertex.
    pub height: usize,
    /// A vertex at distance `height` (smallest id among ties).
    pub deepest: usize,
}

impl RootedTree {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }
}

/// BFS of a tree from `root` through `allowed` vertices; returns
/// `(order, height, deepest)`. `depth` is scratch space, all `usize::MAX` on
/// entry and on exit.
fn tree_bfs(
    g: &Graph,
    root: usize,
    allowed: impl Fn(usize) -> bool,
    depth: &mut [usize],
) -> (Vec<usize>, usize, usize) {
    let mut order = vec![root];
    depth[root] = 0;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for (w, _) in g.neighbors(v) {
            if depth[w] == usize::MAX && allowed(w) {
                depth[w] = depth[v] + 1;
                order.push(w);
            }
        }
    }
    let height = order.iter().map(|&v| depth[v]).max().unwrap_or(0);
    let deepest = order
        .iter()
        .copied()
        .filter(|&v| depth[v] == height)
        .min()
        .unwrap_or(root);
    for &v in &order {
        depth[v] = usize::MAX;
    }
    (order, height, deepest)
}

/// Root convention for a tree with no core: the vertex of maximum degree,
/// ties broken by the smallest id.
fn max_degree_vertex(g: &Graph, vertices: &[usize]) -> usize {
    let mut best = vertices[0];
    for &v in vertices {
        if g.degree(v) > g.degree(best) || (g.degree(v) == g.degree(best) && v < best) {
            best = v;
        }
    }
    best
}

/// The components of `giant - core`, each rooted at its unique vertex adjacent
/// to the core. When the core is empty the giant itself is one tree.
pub fn decorations(g: &Graph, giant: &VertexSet, core: &VertexSet) -> Result<Vec<RootedTree>> {
    let n = g.n();
    let rest = giant.difference(core);
    let mut seen = FixedBitSet::with_capacity(n);
    let mut in_piece = FixedBitSet::with_capacity(n);
    let mut depth = vec![usize::MAX; n];
    let mut out = Vec::new();
    for v in rest.iter() {
        if seen.contains(v) {
            continue;
        }
        let piece = g.bfs_with(v, |w| rest.contains(w), &mut seen);
        for &u in &piece {
            in_piece.insert(u);
        }
        let mut contacts: Vec<(usize, usize, u32)> = Vec::new();
        let mut degree_sum = 0u64;
        for &u in &piece {
            for (w, m) in g.neighbors(u) {
                if core.contains(w) {
                    contacts.push((u, w, m));
                } else if in_piece.contains(w) {
                    degree_sum += if w == u { 2 * m as u64 } else { m as u64 };
                }
            }
        }
        for &u in &piece {
            in_piece.set(u, false);
        }
        let (root, attachment) = match contacts.as_slice() {
            [] if core.is_empty() => (max_degree_vertex(g, &piece), None),
            [(u, w, 1)] => (*u, Some(*w)),
            [] => {
                return Err(Error::Inconsistent(format!(
                    "piece containing {v} does not touch the core"
                )))
            }
            _ => {
                return Err(Error::Inconsistent(format!(
                    "piece containing {v} meets the core through {} edges",
                    contacts.iter().map(|c| c.2 as usize).sum::<usize>()
                )))
            }
        };
        if degree_sum / 2 + 1 != piece.len() as u64 {
            return Err(Error::Inconsistent(format!(
                "piece containing {v} is not a tree"
            )));
        }
        let (vertices, height, deepest) = tree_bfs(g, root, |w| rest.contains(w), &mut depth);
        out.push(RootedTree {
            root,
            attachment,
            vertices,
            height,
            deepest,
        });
    }
    Ok(out)
}

/// A maximal dangling tree: `root` plus `members`, where no member touches an
/// edge outside the tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DanglingTree {
    pub root: usize,
    /// Non-root vertices in breadth-first order.
    pub members: Vec<usize>,
}

impl DanglingTree {
    /// Vertex count including the root.
    pub fn size(&self) -> usize {
        self.members.len() + 1
    }
}

/// All maximal dangling trees of `g`.
///
/// In a component with a nonempty 2-core, the maximal dangling trees are
/// rooted at core vertices and contain everything hanging from them. A tree
/// component is one dangling tree rooted at its maximum-degree vertex.
/// Isolated vertices are size-1 trees.
pub fn dangling_trees(g: &Graph) -> Vec<DanglingTree> {
    let n = g.n();
    let core = two_core(g, &VertexSet::full(n));
    let mut seen = core.to_mask();
    let mut depth = vec![usize::MAX; n];
    let mut hanging: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut out = Vec::new();
    for v in 0..n {
        if seen.contains(v) {
            continue;
        }
        let piece = g.bfs_with(v, |w| !core.contains(w), &mut seen);
        let contact = piece.iter().find_map(|&u| {
            g.neighbors(u)
                .find(|&(w, _)| core.contains(w))
                .map(|(w, _)| (u, w))
        });
        let off_core = |w: usize| !core.contains(w);
        match contact {
            Some((u, w)) => {
                let (order, _, _) = tree_bfs(g, u, off_core, &mut depth);
                hanging.entry(w).or_default().extend(order);
            }
            None => {
                let root = max_degree_vertex(g, &piece);
                let (order, _, _) = tree_bfs(g, root, off_core, &mut depth);
                out.push(DanglingTree {
                    root,
                    members: order[1..].to_vec(),
                });
            }
        }
    }
    out.extend(
        hanging
            .into_iter()
            .map(|(root, members)| DanglingTree { root, members }),
    );
    out.sort_by_key(|t| t.root);
    out
}

/// Number of vertices lying in dangling trees with at least `min_size`
/// vertices.
pub fn vertices_in_large_dangling_trees(trees: &[DanglingTree], min_size: usize) -> usize {
    trees
        .iter()
        .filter(|t| t.size() >= min_size)
        .map(DanglingTree::size)
        .sum()
}

/// A maximal path whose interior vertices have degree exactly two and whose
/// endpoints have degree at least three. Single edges between two such
/// endpoints are paths with an empty interior.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Degree2Path {
    pub vertices: Vec<usize>,
}

impl Degree2Path {
    pub fn interior(&self) -> &[usize] {
        &self.vertices[1..self.vertices.len() - 1]
    }

    pub fn interior_len(&self) -> usize {
        self.vertices.len() - 2
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.vertices[0], self.vertices[self.vertices.len() - 1])
    }

    /// Middle interior vertex; for an even interior the lower-index centre.
    pub fn midpoint(&self) -> Option<usize> {
        let interior = self.interior();
        if interior.is_empty() {
            None
        } else {
            Some(interior[(interior.len() - 1) / 2])
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PathCensus {
    pub paths: Vec<Degree2Path>,
    /// Components made only of degree-2 vertices, as closed vertex sequences.
    pub pure_cycles: Vec<Vec<usize>>,
    pub longest_interior: usize,
}

impl PathCensus {
    /// Paths sorted by decreasing interior length (ties by vertex sequence).
    pub fn longest_first(&self) -> Vec<&Degree2Path> {
        let mut v: Vec<_> = self.paths.iter().collect();
        v.sort_by(|a, b| {
            b.interior_len()
                .cmp(&a.interior_len())
                .then_with(|| a.vertices.cmp(&b.vertices))
        });
        v
    }
}

/// Follows the degree-2 chain that leaves `start` towards `first`. Returns
/// the vertex sequence when it ends at a vertex of degree >= 3 inside
/// `within`.
fn trace_chain(g: &Graph, within: &VertexSet, start: usize, first: usize) -> Option<Vec<usize>> {
    let mut seq = vec![start, first];
    let (mut prev, mut cur) = (start, first);
    while g.degree(cur) == 2 {
        let mut next = None;
        for (w, m) in g.neighbors(cur) {
            if w == cur {
                return None;
            }
            if m == 2 || w != prev {
                next = Some(w);
                break;
            }
        }
        let next = next?;
        if !within.contains(next) || seq.len() > g.n() + 1 {
            return None;
        }
        seq.push(next);
        prev = cur;
        cur = next;
    }
    (g.degree(cur) >= 3).then_some(seq)
}

/// Census of maximal degree-2 paths inside `within`, plus the pure cycles.
pub fn degree2_paths(g: &Graph, within: &VertexSet) -> PathCensus {
    let mut paths = Vec::new();
    let mut covered = FixedBitSet::with_capacity(g.n());
    for u in within.iter().filter(|&u| g.degree(u) >= 3) {
        for (w, m) in g.neighbors(u) {
            if !within.contains(w) {
                continue;
            }
            if g.degree(w) >= 3 || w == u {
                if u <= w {
                    for _ in 0..m {
                        paths.push(Degree2Path {
                            vertices: vec![u, w],
                        });
                    }
                }
                continue;
            }
            let Some(seq) = trace_chain(g, within, u, w) else {
                continue;
            };
            let last = seq.len() - 1;
            if (seq[0], seq[1]) <= (seq[last], seq[last - 1]) {
                for &x in &seq[1..last] {
                    covered.insert(x);
                }
                paths.push(Degree2Path { vertices: seq });
            }
        }
    }

    let mut pure_cycles = Vec::new();
    let is_free_deg2 =
        |v: usize| within.contains(v) && g.degree(v) == 2 && !covered.contains(v);
    let mut seen = FixedBitSet::with_capacity(g.n());
    let mut in_group = FixedBitSet::with_capacity(g.n());
    for v in within.iter() {
        if seen.contains(v) || !is_free_deg2(v) {
            continue;
        }
        let group = g.bfs_with(v, is_free_deg2, &mut seen);
        for &x in &group {
            in_group.insert(x);
        }
        let closed = group
            .iter()
            .all(|&x| g.neighbors(x).all(|(w, _)| in_group.contains(w)));
        for &x in &group {
            in_group.set(x, false);
        }
        if closed {
            pure_cycles.push(cycle_order(g, &group));
        }
    }

    let longest_interior = paths.iter().map(Degree2Path::interior_len).max().unwrap_or(0);
    PathCensus {
        paths,
        pure_cycles,
        longest_interior,
    }
}

/// Orders the vertices of a connected 2-regular vertex set along the cycle,
/// starting from the smallest id.
fn cycle_order(g: &Graph, group: &[usize]) -> Vec<usize> {
    let start = *group.iter().min().expect("nonempty");
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = g
            .neighbors(cur)
            .map(|(w, _)| w)
            .find(|&w| w != prev && w != cur)
            .or_else(|| g.neighbors(cur).map(|(w, _)| w).next());
        match next {
            Some(w) if w != start && order.len() < group.len() => {
                order.push(w);
                prev = cur;
                cur = w;
            }
            _ => break,
        }
    }
    order
}

/// Everything the decomposition produces for one graph.
#[derive(Debug, Clone)]
pub struct DecompositionReport {
    pub components: Vec<VertexSet>,
    /// Index of the giant in `components`, `None` for the empty graph.
    pub giant: Option<usize>,
    pub core: VertexSet,
    pub decorations: Vec<RootedTree>,
    pub dangling_trees: Vec<DanglingTree>,
    /// Degree-2 path census restricted to the giant.
    pub degree2: PathCensus,
}

impl DecompositionReport {
    pub fn giant_set(&self) -> Option<&VertexSet> {
        self.giant.map(|i| &self.components[i])
    }

    pub fn summary(&self) -> ReportSummary {
        fn histogram(sizes: impl Iterator<Item = usize>) -> BTreeMap<usize, usize> {
            let mut h = BTreeMap::new();
            for s in sizes {
                *h.entry(s).or_insert(0) += 1;
            }
            h
        }
        ReportSummary {
            component_sizes: self.components.iter().map(VertexSet::len).collect(),
            giant_size: self.giant_set().map_or(0, VertexSet::len),
            core_size: self.core.len(),
            decoration_sizes: histogram(self.decorations.iter().map(RootedTree::size)),
            dangling_tree_sizes: histogram(self.dangling_trees.iter().map(DanglingTree::size)),
            path_interior_lengths: histogram(
                self.degree2.paths.iter().map(Degree2Path::interior_len),
            ),
            pure_cycles: self.degree2.pure_cycles.len(),
            longest_path_interior: self.degree2.longest_interior,
        }
    }
}

/// JSON-facing digest of a [`DecompositionReport`]. Histograms map a size to
/// the number of objects of that size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportSummary {
    pub component_sizes: Vec<usize>,
    pub giant_size: usize,
    pub core_size: usize,
    pub decoration_sizes: BTreeMap<usize, usize>,
    pub dangling_tree_sizes: BTreeMap<usize, usize>,
    pub path_interior_lengths: BTreeMap<usize, usize>,
    pub pure_cycles: usize,
    pub longest_path_interior: usize,
}

/// Runs the full decomposition.
pub fn decompose(g: &Graph) -> Result<DecompositionReport> {
    let components = components(g);
    let giant = (!components.is_empty()).then_some(0);
    let (core, decorations, degree2) = match giant {
        Some(i) => {
            let giant = &components[i];
            let core = two_core(g, giant);
            let decorations = decorations(g, giant, &core)?;
            let degree2 = degree2_paths(g, giant);
            (core, decorations, degree2)
        }
        None => (VertexSet::empty(0), Vec::new(), PathCensus::default()),
    };
    Ok(DecompositionReport {
        components,
        giant,
        core,
        decorations,
        dangling_trees: dangling_trees(g),
        degree2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn set(n: usize, vs: &[usize]) -> VertexSet {
        VertexSet::from_vertices(n, vs.iter().copied()).unwrap()
    }

    /// C5 on 0..5 with a pendant path 0-5-6-7.
    fn c5_with_tail() -> Graph {
        let mut edges: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        edges.extend([(0, 5), (5, 6), (6, 7)]);
        Graph::build(8, &edges, false).unwrap()
    }

    #[test]
    fn components_order() {
        let g = Graph::build(6, &[(3, 4), (4, 5), (3, 5), (0, 1), (1, 2), (0, 2)], false).unwrap();
        let c = components(&g);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].as_slice(), &[0, 1, 2]);
        assert_eq!(c[1].as_slice(), &[3, 4, 5]);

        let e = Graph::build(4, &[], false).unwrap();
        let c = components(&e);
        assert_eq!(c.len(), 4);
        assert!(c.iter().all(|s| s.len() == 1));

        let g = Graph::build(5, &[(3, 4), (0, 1), (1, 2)], false).unwrap();
        let sizes: Vec<_> = components(&g).iter().map(|c| c.len()).collect();
        assert_eq!(sizes, vec![3, 2]);
    }

    #[test]
    fn core_of_tree_is_empty() {
        let g = path(6);
        assert!(two_core(&g, &VertexSet::full(6)).is_empty());
        let star = Graph::build(5, &[(0, 1), (0, 2), (0, 3), (0, 4)], false).unwrap();
        assert!(two_core(&star, &VertexSet::full(5)).is_empty());
    }

    #[test]
    fn core_of_cycle_and_tail() {
        let g = cycle(5);
        assert_eq!(two_core(&g, &VertexSet::full(5)).len(), 5);
        let g = c5_with_tail();
        assert_eq!(
            two_core(&g, &VertexSet::full(8)).as_slice(),
            &[0, 1, 2, 3, 4]
        );
    }

    #[test]
    fn loop_survives_peeling() {
        let g = Graph::build(2, &[(0, 0), (0, 1)], true).unwrap();
        assert_eq!(two_core(&g, &VertexSet::full(2)).as_slice(), &[0]);
    }

    #[test]
    fn decoration_of_tail() {
        let g = c5_with_tail();
        let giant = VertexSet::full(8);
        let core = two_core(&g, &giant);
        let d = decorations(&g, &giant, &core).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].root, 5);
        assert_eq!(d[0].attachment, Some(0));
        assert_eq!(d[0].vertices, vec![5, 6, 7]);
        assert_eq!((d[0].height, d[0].deepest), (2, 7));
    }

    #[test]
    fn no_decorations_when_core_is_everything() {
        let g = cycle(6);
        let all = VertexSet::full(6);
        assert!(decorations(&g, &all, &all).unwrap().is_empty());
    }

    #[test]
    fn decoration_touching_core_twice_is_rejected() {
        // Passing a "core" that is not the real core exposes the check.
        let g = cycle(5);
        let giant = VertexSet::full(5);
        let fake_core = set(5, &[0]);
        assert!(matches!(
            decorations(&g, &giant, &fake_core),
            Err(Error::Inconsistent(_))
        ));
    }

    #[test]
    fn tree_giant_is_one_decoration() {
        let g = path(4);
        let giant = VertexSet::full(4);
        let core = two_core(&g, &giant);
        let d = decorations(&g, &giant, &core).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].attachment, None);
        assert_eq!(d[0].root, 1);
        assert_eq!(d[0].size(), 4);
    }

    #[test]
    fn star_component_rooted_at_centre() {
        let star = Graph::build(5, &[(3, 0), (3, 1), (3, 2), (3, 4)], false).unwrap();
        let t = dangling_trees(&star);
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].root, 3);
        assert_eq!(t[0].size(), 5);
    }

    #[test]
    fn pendant_edge_on_cycle() {
        let mut edges: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        edges.push((2, 5));
        let g = Graph::build(6, &edges, false).unwrap();
        let t = dangling_trees(&g);
        assert_eq!(
            t,
            vec![DanglingTree {
                root: 2,
                members: vec![5]
            }]
        );
        assert_eq!(vertices_in_large_dangling_trees(&t, 2), 2);
        assert_eq!(vertices_in_large_dangling_trees(&t, 3), 0);
    }

    #[test]
    fn isolated_vertices_are_trivial_trees() {
        let g = Graph::build(3, &[(0, 1)], false).unwrap();
        let t = dangling_trees(&g);
        assert_eq!(t.len(), 2);
        assert_eq!((t[0].root, t[0].size()), (0, 2));
        assert_eq!((t[1].root, t[1].size()), (2, 1));
    }

    #[test]
    fn subdivided_k4() {
        // K4 on 0..4, each edge subdivided by a new vertex 4..10.
        let mut edges = Vec::new();
        let mut next = 4;
        for u in 0..4 {
            for v in u + 1..4 {
                edges.push((u, next));
                edges.push((next, v));
                next += 1;
            }
        }
        let g = Graph::build(10, &edges, false).unwrap();
        let census = degree2_paths(&g, &VertexSet::full(10));
        assert_eq!(census.paths.len(), 6);
        assert!(census.paths.iter().all(|p| p.interior_len() == 1));
        assert!(census.pure_cycles.is_empty());
        assert_eq!(census.longest_interior, 1);
    }

    #[test]
    fn plain_k4_has_empty_interior_paths() {
        let g = complete(4);
        let census = degree2_paths(&g, &VertexSet::full(4));
        assert_eq!(census.paths.len(), 6);
        assert!(census.paths.iter().all(|p| p.interior_len() == 0));
    }

    #[test]
    fn cycle_is_reported_separately() {
        let g = cycle(8);
        let census = degree2_paths(&g, &VertexSet::full(8));
        assert!(census.paths.is_empty());
        assert_eq!(census.pure_cycles.len(), 1);
        assert_eq!(census.pure_cycles[0], vec![0, 1, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn path_graph_has_no_paths() {
        let g = path(5);
        let census = degree2_paths(&g, &VertexSet::full(5));
        assert!(census.paths.is_empty());
        assert!(census.pure_cycles.is_empty());
    }

    #[test]
    fn theta_graph_and_midpoint() {
        // Two degree-3 hubs 0 and 1 joined by paths with 0, 1 and 4 interior
        // vertices.
        let edges = [
            (0, 1),
            (0, 2),
            (2, 1),
            (0, 3),
            (3, 4),
            (4, 5),
            (5, 6),
            (6, 1),
        ];
        let g = Graph::build(7, &edges, false).unwrap();
        let census = degree2_paths(&g, &VertexSet::full(7));
        let mut lens: Vec<_> = census.paths.iter().map(|p| p.interior_len()).collect();
        lens.sort();
        assert_eq!(lens, vec![0, 1, 4]);
        let long = census.longest_first()[0];
        assert_eq!(long.vertices, vec![0, 3, 4, 5, 6, 1]);
        assert_eq!(long.midpoint(), Some(4));
    }

    #[test]
    fn multigraph_paths() {
        // Hub 0 with a loop and a double edge to 1 (degree 2): 0 = 1 = 0.
        // Vertex 2 has degree 3 through its own loop.
        let g = Graph::build(3, &[(0, 0), (0, 1), (0, 1), (0, 2), (2, 2)], true).unwrap();
        let census = degree2_paths(&g, &VertexSet::full(3));
        let mut found: Vec<_> = census.paths.iter().map(|p| p.vertices.clone()).collect();
        found.sort();
        assert_eq!(found, vec![vec![0, 0], vec![0, 1, 0], vec![0, 2], vec![2, 2]]);
    }

    #[test]
    fn full_report() {
        let g = c5_with_tail();
        let r = decompose(&g).unwrap();
        let s = r.summary();
        assert_eq!(s.giant_size, 8);
        assert_eq!(s.core_size, 5);
        assert_eq!(s.decoration_sizes.get(&3), Some(&1));
        assert_eq!(s.dangling_tree_sizes.get(&4), Some(&1));
        // Vertex 0 is the only degree-3 vertex; its cycle is a path 0..0.
        assert_eq!(s.longest_path_interior, 4);
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"core_size\":5"));
    }
}
