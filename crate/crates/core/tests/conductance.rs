mod common;

use num::BigRational;
use rand::Rng;

use common::{barbell, coin_graph, complete, random_multigraph, rng};
use walklab::conductance::{
    bound_dyadic_sum, bound_lower, conductance_profile, exact_min_conductance,
    heuristic_min_conductance, phi_of, q_of, ExactBudget,
};
use walklab::decompose::components;
use walklab::{Exact, Graph, RngSeed, VertexSet};

fn random_subset(c: &VertexSet, r: &mut rand_chacha::ChaCha8Rng) -> VertexSet {
    let picked: Vec<usize> = c.iter().filter(|_| r.random_bool(0.5)).collect();
    VertexSet::from_vertices(c.universe(), picked).unwrap()
}

#[test]
fn conductance_and_flow_are_symmetric() {
    let mut r = rng(20);
    for _ in 0..300 {
        let n = r.random_range(3..=30);
        let g = if r.random_bool(0.5) {
            coin_graph(n, 0.3, &mut r)
        } else {
            random_multigraph(n, 2 * n, &mut r)
        };
        let c = components(&g).swap_remove(0);
        if g.volume(c.as_slice()) == 0 {
            continue;
        }
        let s = random_subset(&c, &mut r);
        let rest = c.difference(&s);
        let ds = g.volume(s.as_slice());
        if ds == 0 || ds == g.volume(c.as_slice()) {
            continue;
        }
        let a = phi_of::<Exact>(&g, &c, &s).unwrap();
        let b = phi_of::<Exact>(&g, &c, &rest).unwrap();
        assert_eq!(a.exact, b.exact);
        assert_eq!(a.q, b.q);
        assert_eq!(q_of::<Exact>(&g, &c, &s).unwrap(), a.q);
        // Phi = Q / (pi(S) pi(S^c)).
        let one = BigRational::from_integer(1.into());
        assert_eq!(a.phi, a.q.clone() / (a.pi.clone() * (one - a.pi.clone())));
    }
}

#[test]
fn heuristic_never_beats_exact() {
    let mut r = rng(21);
    let budget = ExactBudget::default();
    for case in 0..60 {
        let n = r.random_range(4..=16);
        let g = coin_graph(n, r.random_range(0.15..0.6), &mut r);
        let c = components(&g).swap_remove(0);
        if c.len() < 2 {
            continue;
        }
        let exact = exact_min_conductance(&g, &c, &budget).unwrap();
        let heur = heuristic_min_conductance(&g, &c, None, &RngSeed::new(case)).unwrap();
        assert!(exact.phi <= heur.best.phi, "case {case}");
        let w = phi_of::<Exact>(&g, &c, &exact.witness).unwrap();
        assert_eq!(w.exact, exact.phi);
    }
}

#[test]
fn clique_conductance() {
    // Balanced cut of K_{2m}.
    for m in 2..=6u64 {
        let g = complete(2 * m as usize);
        let c = VertexSet::full(g.n());
        let phi = exact_min_conductance(&g, &c, &ExactBudget::default()).unwrap().phi;
        // e_out = m^2, d(S) = m(2m-1), volume = 2m(2m-1).
        let (cut, ds, vol) = (m * m, m * (2 * m - 1), 2 * m * (2 * m - 1));
        let want = (vol * cut) as f64 / (ds * (vol - ds)) as f64;
        assert_eq!(phi.to_f64(), want, "m = {m}");
    }
}

fn half_with_clique(g: &Graph, k: usize, len: usize) -> VertexSet {
    let mut half: Vec<usize> = (0..k).collect();
    half.extend(2 * k..2 * k + len / 2);
    VertexSet::from_vertices(g.n(), half).unwrap()
}

#[test]
fn barbell_witness_and_lower_bound() {
    let mut bounds = Vec::new();
    for len in [25, 50, 100] {
        let g = barbell(20, len);
        let c = VertexSet::full(g.n());
        let profile =
            conductance_profile(&g, &c, None, &ExactBudget::default(), &RngSeed::new(3)).unwrap();
        // The best set keeps one clique whole and cuts the path.
        let w = VertexSet::from_vertices(g.n(), profile.global_witness.iter().copied()).unwrap();
        let clique_a = (0..20).all(|v| w.contains(v));
        let clique_b = (20..40).all(|v| w.contains(v));
        assert!(clique_a ^ clique_b, "len {len}");
        assert_eq!(g.subset_stats(&w).e_out, 1);
        let phi = profile.global.to_f64();
        let vol = g.volume(c.as_slice()) as f64;
        assert!(phi <= 4.0 / vol * 1.05, "len {len}: {phi}");
        bounds.push(bound_lower(&g, &c, &[half_with_clique(&g, 20, len)]).unwrap());
        let dyadic = bound_dyadic_sum::<f64>(&profile, 1.0).unwrap();
        assert!(dyadic.sum <= profile.dominance_bound::<f64>() + 1e-9);
    }
    // d(S) grows with the path and e_out stays 1: linear growth.
    for w in bounds.windows(2) {
        let ratio = w[1] / w[0];
        assert!((1.03..=2.5).contains(&ratio), "{bounds:?}");
    }
    assert!(bounds[0] >= 38.0);
}

#[test]
fn dyadic_sum_grows_with_bottleneck() {
    let sums: Vec<f64> = [10, 20, 40]
        .iter()
        .map(|&len| {
            let g = barbell(6, len);
            let c = VertexSet::full(g.n());
            let p =
                conductance_profile(&g, &c, None, &ExactBudget::default(), &RngSeed::new(1)).unwrap();
            bound_dyadic_sum::<f64>(&p, 1.0).unwrap().sum
        })
        .collect();
    assert!(sums.windows(2).all(|w| w[1] > w[0]), "{sums:?}");
}
