#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use walklab::Graph;

pub fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xa11ce ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::build(n, &edges, false).unwrap()
}

pub fn complete(n: usize) -> Graph {
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    Graph::build(n, &edges, false).unwrap()
}

/// Simple random graph by independent coin flips per pair.
pub fn coin_graph(n: usize, p: f64, r: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::build(n, &edges, false).unwrap()
}

/// Random multigraph with `m` uniformly drawn vertex pairs (loops allowed).
pub fn random_multigraph(n: usize, m: usize, r: &mut ChaCha8Rng) -> Graph {
    let edges: Vec<_> = (0..m)
        .map(|_| (r.random_range(0..n), r.random_range(0..n)))
        .collect();
    Graph::build(n, &edges, true).unwrap()
}

/// Two disjoint `K_k` joined by a path with `len` interior vertices.
pub fn barbell(k: usize, len: usize) -> Graph {
    let mut edges = Vec::new();
    for base in [0, k] {
        for u in 0..k {
            for v in u + 1..k {
                edges.push((base + u, base + v));
            }
        }
    }
    let mut chain = vec![k - 1];
    chain.extend(2 * k..2 * k + len);
    chain.push(k);
    edges.extend(chain.windows(2).map(|w| (w[0], w[1])));
    Graph::build(2 * k + len, &edges, false).unwrap()
}
