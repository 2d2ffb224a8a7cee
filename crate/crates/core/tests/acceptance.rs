//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so the summary lines are always printed; exits nonzero when any
//! criterion fails.

use std::time::Instant;

use num::{BigInt, BigRational, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use walklab::conductance::{
    bound_dyadic_sum, bound_lower_exact, conductance_profile, exact_min_conductance,
    heuristic_min_conductance, ExactBudget, Method,
};
use walklab::decompose::decompose;
use walklab::experiments::{
    census_cell, expansion_cell, run_expansion_check, run_obstruction_demo, run_path_census,
    run_scaling_study, scaling_cell, to_csv, CensusConfig, ExpansionConfig, ObstructionConfig,
    Regime, ScalingConfig,
};
use walklab::generators::{pairing_isolation_probability, sample_configuration, DegreeSequence};
use walklab::walk::{
    cesaro_mixing_time, mixing_time, tv_distance, Distribution, StartPolicy, WalkConfig,
};
use walklab::{Exact, Graph, RngSeed, Scalar, VertexSet};

type Q = BigRational;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn epsilon() -> f64 {
    (-1.0f64).exp()
}

fn full(g: &Graph) -> VertexSet {
    VertexSet::full(g.n())
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + tag)
}

fn gnp(n: usize, p: f64, r: &mut ChaCha8Rng) -> Graph {
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

fn tree_plus(n: usize, extra: usize, r: &mut ChaCha8Rng) -> Graph {
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (r.random_range(0..v), v)).collect();
    for _ in 0..extra {
        let (u, v) = (r.random_range(0..n), r.random_range(0..n));
        if u != v && !edges.contains(&(u.min(v), u.max(v))) && !edges.contains(&(u.max(v), u.min(v))) {
            edges.push((u.min(v), u.max(v)));
        }
    }
    Graph::build(n, &edges, false).unwrap()
}

/// 200 connected non-bipartite graphs on 3..=7 vertices.
fn small_chain_suite() -> Vec<Graph> {
    let mut r = rng(1);
    let mut out = Vec::new();
    while out.len() < 200 {
        let n = r.random_range(3..=7);
        let p = r.random_range(0.3..1.0);
        let g = gnp(n, p, &mut r);
        let all = full(&g);
        if g.is_connected_within(&all) && !g.is_bipartite(&all).unwrap() {
            out.push(g);
        }
    }
    out
}

/// 200 connected graphs on 3..=18 vertices from three families.
fn conductance_suite() -> Vec<Graph> {
    let mut r = rng(3);
    let mut out = Vec::new();
    while out.len() < 200 {
        let n = r.random_range(3..=18);
        let g = match out.len() % 3 {
            0 => {
                let p = r.random_range((2.0 * (n as f64).ln() / n as f64).min(0.9)..1.0);
                gnp(n, p, &mut r)
            }
            1 => {
                let extra = r.random_range(0..=n / 2);
                tree_plus(n, extra, &mut r)
            }
            _ => {
                let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
                if n == 3 {
                    edges.truncate(3);
                }
                for _ in 0..r.random_range(0..=3) {
                    let (u, v) = (r.random_range(0..n), r.random_range(0..n));
                    let e = (u.min(v), u.max(v));
                    let near = (v + n - u) % n;
                    if u != v && near != 1 && near != n - 1 && !edges.contains(&e) {
                        edges.push(e);
                    }
                }
                Graph::build(n, &edges, false).unwrap()
            }
        };
        if g.is_connected_within(&full(&g)) {
            out.push(g);
        }
    }
    out
}

/// Dense transition matrix `(1 - a) D^{-1} A + a I` with exact entries.
fn transition_matrix(g: &Graph, laziness: &Q) -> Vec<Vec<Q>> {
    let n = g.n();
    let mut p = vec![vec![Q::zero(); n]; n];
    for (u, row) in p.iter_mut().enumerate() {
        let d = Q::from_integer(BigInt::from(g.degree(u)));
        for (v, m) in g.neighbors(u) {
            let w = if u == v { 2 * m } else { m };
            row[v] += (Q::one() - laziness) * Q::from_integer(BigInt::from(w)) / &d;
        }
        row[u] += laziness;
    }
    p
}

fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(Q::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

fn row_tv(row: &[Q], pi: &[Q]) -> Q {
    row.iter()
        .zip(pi)
        .fold(Q::zero(), |acc, (x, p)| acc + (x - p).abs())
        / Q::from_integer(BigInt::from(2))
}

/// `(T_mix, T'_mix)` by explicit matrix powers.
fn matrix_power_oracle(g: &Graph, eps: &Q) -> (u64, u64) {
    let n = g.n();
    let vol: u64 = g.degrees().iter().sum();
    let pi: Vec<Q> = (0..n)
        .map(|v| Q::new(BigInt::from(g.degree(v)), BigInt::from(vol)))
        .collect();
    let p = transition_matrix(g, &Q::zero());
    let identity: Vec<Vec<Q>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect();
    let mut power = identity.clone();
    let mut partial = vec![vec![Q::zero(); n]; n];
    let mut mix: Vec<Option<u64>> = vec![None; n];
    let mut avg: Vec<Option<u64>> = vec![None; n];
    let mut t = 0u64;
    while mix.iter().any(Option::is_none) || avg.iter().any(Option::is_none) {
        // `power` is P^t, `partial` becomes sum_{s <= t} P^s.
        for i in 0..n {
            for j in 0..n {
                partial[i][j] = &partial[i][j] + &power[i][j];
            }
        }
        let count = Q::from_integer(BigInt::from(t + 1));
        for i in 0..n {
            if mix[i].is_none() && row_tv(&power[i], &pi) < *eps {
                mix[i] = Some(t);
            }
            if avg[i].is_none() {
                let row: Vec<Q> = partial[i].iter().map(|x| x / &count).collect();
                if row_tv(&row, &pi) < *eps {
                    avg[i] = Some(t + 1);
                }
            }
        }
        power = mat_mul(&power, &p);
        t += 1;
        assert!(t < 10_000, "oracle did not converge");
    }
    (
        mix.into_iter().map(Option::unwrap).max().unwrap(),
        avg.into_iter().map(Option::unwrap).max().unwrap(),
    )
}

fn all_starts(laziness: f64) -> WalkConfig {
    WalkConfig::new(laziness, epsilon(), StartPolicy::AllVertices).unwrap()
}

fn criterion_1() -> Outcome {
    let eps = Q::from_param(epsilon());
    let mut mismatches = Vec::new();
    for (i, g) in small_chain_suite().iter().enumerate() {
        let all = full(g);
        let t = mixing_time::<Exact>(g, &all, &all_starts(0.0)).unwrap().value.unwrap();
        let tc = cesaro_mixing_time::<Exact>(g, &all, &all_starts(0.0))
            .unwrap()
            .value
            .unwrap();
        let (ot, otc) = matrix_power_oracle(g, &eps);
        if (t, tc) != (ot, otc) {
            mismatches.push(format!("graph {i}: ({t},{tc}) vs oracle ({ot},{otc})"));
        }
    }
    outcome(
        mismatches.is_empty(),
        format!("200 graphs, mismatches: {:?}", mismatches),
    )
}

fn criterion_2() -> Outcome {
    let mut r = rng(2);
    let mut worst = 0f64;
    for _ in 0..500 {
        let n = r.random_range(1..=10);
        let support: Vec<usize> = (0..n).collect();
        let mut draw = || {
            let w: Vec<f64> = (0..n).map(|_| r.random::<f64>()).collect();
            let s: f64 = w.iter().sum();
            w.into_iter().map(|x| x / s).collect::<Vec<_>>()
        };
        let (a, b) = (draw(), draw());
        let tv = tv_distance(
            &Distribution::new(support.clone(), a.clone()).unwrap(),
            &Distribution::new(support.clone(), b.clone()).unwrap(),
        )
        .unwrap();
        let mut brute = 0f64;
        for mask in 0u32..1 << n {
            let diff: f64 = (0..n)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| a[i] - b[i])
                .sum();
            brute = brute.max(diff.abs());
        }
        worst = worst.max((tv - brute).abs());
    }
    outcome(worst <= 1e-12, format!("500 pairs, max |half-L1 - max_A| = {worst:.3e}"))
}

fn criterion_3() -> Outcome {
    let budget = ExactBudget::default();
    let c8 = cycle(8);
    let k4 = complete(4);
    let e8 = exact_min_conductance(&c8, &full(&c8), &budget).unwrap();
    let e4 = exact_min_conductance(&k4, &full(&k4), &budget).unwrap();
    let c8_ok = e8.phi.to_string() == "1/2"
        && e8.witness.len() == 4
        && c8.is_connected_within(&e8.witness);
    let k4_ok = e4.phi.to_string() == "4/3";
    let mut bad = Vec::new();
    let mut worst = 1f64;
    for (i, g) in conductance_suite().iter().enumerate() {
        let all = full(g);
        let exact = exact_min_conductance(g, &all, &budget).unwrap();
        let report = decompose(g).unwrap();
        let h = heuristic_min_conductance(g, &all, Some(&report), &RngSeed::new(i as u64))
            .unwrap()
            .best;
        let ratio = h.phi.to_f64() / exact.phi.to_f64();
        worst = worst.max(ratio);
        // Exact cross-multiplied comparisons.
        let above = h.phi >= exact.phi;
        let within = (h.phi.num as u128) * (exact.phi.den as u128)
            <= 2 * (exact.phi.num as u128) * (h.phi.den as u128);
        if !above || !within {
            bad.push(format!("graph {i}: heuristic {} exact {}", h.phi, exact.phi));
        }
    }
    outcome(
        c8_ok && k4_ok && bad.is_empty(),
        format!(
            "C8 = {} (witness {:?}), K4 = {}, suite max heuristic/exact = {worst:.4}, failures {:?}",
            e8.phi,
            e8.witness.as_slice(),
            e4.phi,
            bad
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    let samples = 100_000u64;
    let mut lines = Vec::new();
    let mut pass = true;
    let mut case = 0;
    while case < 10 {
        let n = r.random_range(4..=12);
        let degrees: Vec<u32> = (0..n).map(|_| r.random_range(1..=3)).collect();
        let Ok(ds) = DegreeSequence::new(degrees.clone()) else {
            continue;
        };
        let members: Vec<usize> = (0..n).filter(|_| r.random::<f64>() < 0.4).collect();
        let ds_sum: u64 = members.iter().map(|&v| degrees[v] as u64).sum();
        let pairs = ds.pairs();
        if members.is_empty() || ds_sum % 2 == 1 || ds_sum == 2 * pairs {
            continue;
        }
        let exact: f64 = pairing_isolation_probability::<f64>(pairs, ds_sum).unwrap();
        if exact < 1e-3 {
            continue;
        }
        let set = VertexSet::from_vertices(n, members.iter().copied()).unwrap();
        let root = RngSeed::stream(40 + case, "pairing", 0);
        let mut hits = 0u64;
        for s in 0..samples {
            let g = sample_configuration(&ds, &root.with_replicate(s)).unwrap();
            if g.subset_stats(&set).e_out == 0 {
                hits += 1;
            }
        }
        let freq = hits as f64 / samples as f64;
        let se = (exact * (1.0 - exact) / samples as f64).sqrt();
        let z = (freq - exact) / se;
        pass &= z.abs() <= 3.0;
        lines.push(format!("{z:+.2}"));
        case += 1;
    }
    outcome(pass, format!("10 cases, z-scores [{}]", lines.join(", ")))
}

fn criterion_5() -> Outcome {
    let mut values = Vec::new();
    for n in [16usize, 32, 64, 128] {
        let g = cycle(n);
        let cfg = all_starts(0.5).with_max_steps(1_000_000);
        let t = cesaro_mixing_time::<f64>(&g, &full(&g), &cfg).unwrap().value.unwrap();
        values.push(t);
    }
    let factors: Vec<f64> = values.windows(2).map(|w| w[1] as f64 / w[0] as f64).collect();
    let pass = factors.iter().all(|f| (3.3..=4.7).contains(f));
    outcome(
        pass,
        format!("lazy cycle T'_mix {values:?}, doubling factors {factors:.3?}"),
    )
}

fn criterion_6() -> Outcome {
    let cfg = ObstructionConfig::new(50, 200, 10_000, 6);
    let r = run_obstruction_demo(&cfg).unwrap();
    let pass = r.escape_probability > 0.5 && r.lower_bound_holds == Some(true);
    outcome(
        pass,
        format!(
            "l = 50: stay probability at {} steps = {:.4}, bound_lower = {:.1}, T_mix = {:?}, T'_mix = {:?}",
            r.escape_steps, r.escape_probability, r.bound_lower, r.t_mix, r.t_mix_cesaro
        ),
    )
}

fn criterion_7() -> Outcome {
    let cfg = CensusConfig::new(200_000, 1.5, 30, 7);
    let out = run_path_census(&cfg).unwrap();
    let above = out.summary.above_lower.iter().filter(|&&b| b).count();
    let below = out.summary.below_upper.iter().filter(|&&b| b).count();
    let lengths: Vec<usize> = out.records.iter().map(|r| r.longest_path).collect();
    outcome(
        above >= 27 && below == 30,
        format!(
            "longest interior >= {:.3} in {above}/30, <= {:.2} in {below}/30; lengths {lengths:?}",
            out.summary.lower_threshold, out.summary.upper_threshold
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut cfg = ScalingConfig::new(Regime::Dense, vec![1 << 13], 10, 8);
    cfg.measure.conductance = false;
    let out = run_scaling_study(&cfg).unwrap();
    let target = out.fit.rows[0].diameter_term;
    let values: Vec<Option<u64>> = out.records.iter().map(|r| r.t_mix).collect();
    outcome(
        out.fit.within_tolerance >= 9,
        format!(
            "n = 8192, d = {:.3}: ln n / ln d = {target:.3}, T_mix {values:?}, within 3 in {}/10",
            out.fit.rows[0].d, out.fit.within_tolerance
        ),
    )
}

/// Lower bound against measured `T_mix` and the dyadic dominance, both in
/// exact arithmetic. Returns a failure note, if any, and whether the
/// dominance fails with `Phi*` in place of `min(Phi*, 1)`.
fn bound_consistency(g: &Graph, seed: u64) -> (Option<String>, bool) {
    let all = full(g);
    let profile =
        conductance_profile(g, &all, None, &ExactBudget::default(), &RngSeed::new(seed)).unwrap();
    assert_eq!(profile.global_method, Method::Exact);
    let report = decompose(g).unwrap();
    let heuristic = heuristic_min_conductance(g, &all, Some(&report), &RngSeed::new(seed)).unwrap();
    let mut candidates = vec![
        VertexSet::from_vertices(g.n(), profile.global_witness.iter().copied()).unwrap(),
        heuristic.best.witness.clone(),
    ];
    for e in &profile.scales {
        if !e.witness.is_empty() {
            candidates.push(VertexSet::from_vertices(g.n(), e.witness.iter().copied()).unwrap());
        }
    }
    let lower: Q = bound_lower_exact(g, &all, &candidates).unwrap();
    let laziness = if g.is_bipartite(&all).unwrap() { 0.5 } else { 0.0 };
    let t = mixing_time::<Exact>(g, &all, &all_starts(laziness))
        .unwrap()
        .value
        .unwrap();
    let sum: Q = bound_dyadic_sum::<Exact>(&profile, 1.0).unwrap().sum;
    let dominance: Q = profile.dominance_bound::<Exact>();
    let literal = Q::from_integer(BigInt::from(profile.scale_count()))
        * profile.global.inverse_square::<Exact>();
    let mut note = None;
    if lower > Q::from_integer(BigInt::from(t)) {
        note = Some(format!("bound_lower {lower} > T_mix {t}"));
    }
    if sum > dominance {
        note = Some(format!("dyadic sum {sum} > {dominance}"));
    }
    let literal_fails = sum > literal;
    if literal_fails {
        // Only possible through a defaulted scale while Phi* > 1.
        let explained = profile.global.to_f64() > 1.0
            && profile.scales.iter().any(|e| e.method == Method::Default);
        if !explained {
            note = Some(format!("dyadic sum {sum} > J Phi*^-2 = {literal} unexplained"));
        }
    }
    (note, literal_fails)
}

fn criterion_9() -> Outcome {
    let mut failures = Vec::new();
    let mut literal = 0;
    let graphs: Vec<Graph> = small_chain_suite()
        .into_iter()
        .chain(conductance_suite())
        .chain([cycle(8), complete(4)])
        .collect();
    for (i, g) in graphs.iter().enumerate() {
        let (note, lit) = bound_consistency(g, i as u64);
        if let Some(n) = note {
            failures.push(format!("graph {i}: {n}"));
        }
        literal += usize::from(lit);
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} graphs: bound_lower <= T_mix and dyadic sum <= J min(Phi*,1)^-2 exactly; \
             {literal} graphs have Phi* > 1 with a defaulted scale, where J Phi*^-2 alone is smaller; failures {:?}",
            graphs.len(),
            failures
        ),
    )
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

fn criterion_10() -> Outcome {
    let census = CensusConfig::new(20_000, 1.5, 4, 10);
    let expansion = ExpansionConfig::new(5_000, 3.0, 3, 200, 10);
    let mut scaling = ScalingConfig::new(Regime::ConstantD { d: 3.0 }, vec![400, 800], 3, 10);
    scaling.measure.worst_starts = 6;
    scaling.measure.sampled_starts = 6;
    let run_all = || {
        let mut rows = Vec::new();
        rows.extend(run_path_census(&census).unwrap().records);
        rows.extend(run_expansion_check(&expansion).unwrap().records);
        rows.extend(run_scaling_study(&scaling).unwrap().records);
        to_csv(&rows, None)
    };
    let one = in_pool(1, run_all);
    let four = in_pool(4, run_all);
    let mut replay = Vec::new();
    for line in one.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        let (id, n, rep): (&str, usize, u64) =
            (fields[0], fields[1].parse().unwrap(), fields[5].parse().unwrap());
        let record = in_pool(3, || match id {
            "census" => census_cell(n, census.d, census.seed, rep).unwrap(),
            "expansion" => expansion_cell(&expansion, rep).unwrap(),
            _ => scaling_cell(&scaling, n, rep).unwrap(),
        });
        if record.csv_line().trim_end() != line {
            replay.push(format!("{id}/{n}/{rep}"));
        }
    }
    let rows = one.lines().count() - 1;
    outcome(
        one == four && replay.is_empty(),
        format!(
            "{rows} rows; 1 vs 4 workers identical: {}; single-cell replays differing: {replay:?}",
            one == four
        ),
    )
}

fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::build(n, &edges, false).unwrap()
}

fn complete(n: usize) -> Graph {
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    Graph::build(n, &edges, false).unwrap()
}

fn main() {
    let only: Option<usize> = std::env::args()
        .skip(1)
        .find_map(|a| a.strip_prefix("criterion=").and_then(|s| s.parse().ok()));
    let checks: [(usize, &str, fn() -> Outcome); 10] = [
        (1, "small-chain oracle equivalence", criterion_1),
        (2, "total variation as max over events", criterion_2),
        (3, "exact and heuristic conductance", criterion_3),
        (4, "pairing isolation frequency", criterion_4),
        (5, "lazy cycle averaged mixing scaling", criterion_5),
        (6, "long path obstruction", criterion_6),
        (7, "degree-2 path census frequency", criterion_7),
        (8, "dense regime mixing shape", criterion_8),
        (9, "bound consistency", criterion_9),
        (10, "replay determinism", criterion_10),
    ];
    let mut failed = 0;
    for (k, name, check) in checks {
        if only.is_some_and(|o| o != k) {
            continue;
        }
        let start = Instant::now();
        let o = check();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {k:>2} {verdict} {name} ({:.1}s): {}",
            start.elapsed().as_secs_f64(),
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
