//! Subcommand implementations.

use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use walklab::conductance::{conductance_profile, BoundsReport, ExactBudget};
use walklab::decompose::{decompose, DecompositionReport};
use walklab::experiments::plot::{curves_by_n, svg_chart, Curve};
use walklab::experiments::{
    run_expansion_check, run_obstruction_demo, run_path_census, run_scaling_study, to_csv,
    CensusConfig, CensusSummary, ExpansionConfig, ExpansionSummary, ExperimentRecord,
    ObstructionConfig, Regime, ScalingConfig,
};
use walklab::generators::{sample_configuration, sample_gnp, DegreeSequence};
use walklab::walk::{cesaro_mixing_time, mixing_time, MixingReport, StartPolicy, WalkConfig};
use walklab::{edgelist, Error, Graph, RngSeed, VertexSet};

use crate::output::{emit, in_dir, json_document, sidecar};
use crate::{
    Cli, Command, ConductanceArgs, DemoArgs, Density, Experiment, Failure, GenArgs, GridArgs,
    InputArgs, RegimeArg, Status, WalkArgs,
};

pub fn dispatch(cli: &Cli) -> Result<Status, Failure> {
    match &cli.command {
        Command::Gen(a) => gen(a, cli.workers),
        Command::Decompose(a) => decompose_cmd(a, cli.workers),
        Command::Walk(a) => walk(a, cli.workers),
        Command::Conductance(a) => conductance(a, cli.workers),
        Command::Experiment { which } => experiment(which, cli.workers),
        Command::Demo(a) => demo(a, cli.workers),
    }
}

fn usage(flag: &str, reason: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("--{flag}: {reason}"))
}

/// The given seed, or a fresh one that is reported so the run can be
/// repeated.
fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        eprintln!("seed: {s}");
        s
    })
}

fn config(command: &str, workers: Option<usize>, fields: Value) -> Value {
    let mut c = json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "workers": workers,
    });
    if let (Value::Object(c), Value::Object(f)) = (&mut c, fields) {
        c.extend(f);
    }
    c
}

fn check_p(p: f64) -> Result<f64, Failure> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(usage("p", format!("{p} is outside [0, 1]")))
    }
}

/// Edge probability for `n` vertices from `--p` or `--d`.
fn probability(n: usize, density: &Density) -> Result<f64, Failure> {
    match (density.p, density.d) {
        (Some(p), None) => check_p(p),
        (None, Some(d)) => {
            if !(d >= 0.0) || (n > 0 && d > n as f64) {
                return Err(usage("d", format!("{d} is outside [0, n]")));
            }
            Ok(if n == 0 { 0.0 } else { d / n as f64 })
        }
        _ => Err(Failure::Usage("one of --p or --d is required".into())),
    }
}

/// Average degree for `n` vertices from `--p` or `--d`.
fn degree(n: usize, density: &Density) -> Result<f64, Failure> {
    Ok(probability(n, density)? * n as f64)
}

fn load(path: &Path) -> Result<Graph, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Run(format!("{}: {e}", path.display())))?;
    edgelist::from_text(&text, true).map_err(|e| Failure::Run(format!("{}: {e}", path.display())))
}

fn giant(g: &Graph) -> Result<(DecompositionReport, VertexSet), Failure> {
    let report = decompose(g)?;
    let giant = report
        .giant_set()
        .cloned()
        .ok_or_else(|| Failure::Run("graph has no vertices".into()))?;
    Ok((report, giant))
}

fn gen(a: &GenArgs, workers: Option<usize>) -> Result<Status, Failure> {
    let seed = resolve_seed(a.seed);
    let stream = RngSeed::stream(seed, "gen", 0);
    let (g, cfg) = if let Some(spec) = &a.degrees {
        let text = if Path::new(spec).is_file() {
            fs::read_to_string(spec)?
        } else {
            spec.replace(',', " ")
        };
        let ds = DegreeSequence::parse(&text).map_err(|e| usage("degrees", e))?;
        let g = sample_configuration(&ds, &stream)?;
        let cfg = json!({ "model": "configuration", "degrees": ds.degrees(), "seed": seed });
        (g, cfg)
    } else {
        let n = a
            .n
            .ok_or_else(|| Failure::Usage("--n is required unless --degrees is given".into()))?;
        let p = probability(n, &a.density)?;
        let g = sample_gnp(n, p, &stream)?;
        let cfg = json!({ "model": "gnp", "n": n, "p": p, "d": p * n as f64, "seed": seed });
        (g, cfg)
    };
    let cfg = config("gen", workers, cfg);
    let text = edgelist::to_text(&g);
    match &a.out {
        Some(path) => {
            emit(Some(path), &text)?;
            let mut c = serde_json::to_string_pretty(&cfg).expect("json");
            c.push('\n');
            emit(Some(&sidecar(path)), &c)?;
        }
        None => {
            emit(None, &text)?;
            eprintln!("config: {cfg}");
        }
    }
    Ok(Status::Complete)
}

fn decompose_cmd(a: &InputArgs, workers: Option<usize>) -> Result<Status, Failure> {
    let g = load(&a.input)?;
    let report = decompose(&g)?;
    let cfg = config("decompose", workers, json!({ "input": a.input }));
    let result = json!({
        "n": g.n(),
        "edges": g.edge_count(),
        "multigraph": g.is_multigraph(),
        "summary": report.summary(),
    });
    emit(a.out.as_deref(), &json_document(&cfg, &result)?)?;
    Ok(Status::Complete)
}

fn epsilon(e: Option<f64>) -> Result<f64, Failure> {
    let e = e.unwrap_or((-1.0f64).exp());
    if e > 0.0 && e < 1.0 {
        Ok(e)
    } else {
        Err(usage("epsilon", format!("{e} is outside (0, 1)")))
    }
}

fn start_policy(spec: &str, seed: u64) -> Result<StartPolicy, Failure> {
    if spec == "all" {
        return Ok(StartPolicy::AllVertices);
    }
    if let Some(k) = spec.strip_prefix("sample:") {
        let count = k
            .parse()
            .map_err(|e| usage("starts", format!("`{k}`: {e}")))?;
        return Ok(StartPolicy::Sampled {
            count,
            seed: RngSeed::stream(seed, "walk/starts", 0),
        });
    }
    spec.split(',')
        .map(|v| v.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map(StartPolicy::Designated)
        .map_err(|e| usage("starts", format!("`{spec}` is not `all`, `sample:K` or a vertex list: {e}")))
}

#[derive(Serialize)]
struct WalkResult {
    component_size: usize,
    bipartite: bool,
    t_mix: Option<MixingReport>,
    t_mix_error: Option<String>,
    t_mix_cesaro: MixingReport,
}

fn walk(a: &WalkArgs, workers: Option<usize>) -> Result<Status, Failure> {
    if !(0.0..1.0).contains(&a.laziness) {
        return Err(usage("laziness", format!("{} is outside [0, 1)", a.laziness)));
    }
    let eps = epsilon(a.epsilon)?;
    let seed = resolve_seed(a.seed);
    let g = load(&a.io.input)?;
    let (_, component) = giant(&g)?;
    let policy = start_policy(&a.starts, seed)?;
    if let StartPolicy::Designated(vs) = &policy {
        if let Some(v) = vs.iter().find(|&&v| !component.contains(v)) {
            return Err(usage("starts", format!("vertex {v} is not in the largest component")));
        }
    }
    let cfg = WalkConfig::new(a.laziness, eps, policy)
        .map_err(|e| Failure::Usage(e.to_string()))?
        .with_max_steps(a.budget);
    let (t_mix, t_mix_error) = match mixing_time::<f64>(&g, &component, &cfg) {
        Ok(r) => (Some(r), None),
        Err(e @ Error::BipartiteNotLazy) => (None, Some(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let t_mix_cesaro = cesaro_mixing_time::<f64>(&g, &component, &cfg)?;
    let censored = t_mix.as_ref().is_some_and(|r| r.censored()) || t_mix_cesaro.censored();
    let result = WalkResult {
        component_size: component.len(),
        bipartite: g.is_bipartite(&component)?,
        t_mix,
        t_mix_error,
        t_mix_cesaro,
    };
    let config = config(
        "walk",
        workers,
        json!({
            "input": a.io.input,
            "laziness": a.laziness,
            "epsilon": eps,
            "starts": a.starts,
            "budget": a.budget,
            "seed": seed,
        }),
    );
    emit(a.io.out.as_deref(), &json_document(&config, &result)?)?;
    Ok(if censored { Status::Censored } else { Status::Complete })
}

fn conductance(a: &ConductanceArgs, workers: Option<usize>) -> Result<Status, Failure> {
    if !(a.c > 0.0 && a.c.is_finite()) {
        return Err(usage("c", format!("{} must be positive", a.c)));
    }
    let seed = resolve_seed(a.seed);
    let g = load(&a.io.input)?;
    let (report, component) = giant(&g)?;
    if component.len() < 2 {
        return Err(Failure::Run("largest component has a single vertex".into()));
    }
    let budget = ExactBudget {
        max_sets: a.budget,
        ..ExactBudget::default()
    };
    let profile = conductance_profile(
        &g,
        &component,
        Some(&report),
        &budget,
        &RngSeed::stream(seed, "conductance", 0),
    )?;
    let bounds = BoundsReport::compute(&g, &component, &profile, a.c)?;
    let config = config(
        "conductance",
        workers,
        json!({ "input": a.io.input, "budget": a.budget, "c": a.c, "seed": seed }),
    );
    let result = json!({
        "component_size": component.len(),
        "global_witness": profile.global_witness,
        "profile": profile,
        "bounds": bounds,
    });
    emit(a.io.out.as_deref(), &json_document(&config, &result)?)?;
    Ok(Status::Complete)
}

/// CSV, summary JSON and plot data for one experiment.
struct Artifacts<'a> {
    id: &'a str,
    config: Value,
    records: Vec<ExperimentRecord>,
    summary: Value,
    curves: Vec<Curve>,
}

fn write_artifacts(out: Option<&Path>, a: Artifacts) -> Result<(), Failure> {
    let csv = to_csv(&a.records, Some(&a.config));
    let Some(dir) = out else {
        return emit(None, &csv);
    };
    emit(Some(&in_dir(dir, &format!("{}.csv", a.id))?), &csv)?;
    emit(
        Some(&in_dir(dir, &format!("{}.summary.json", a.id))?),
        &json_document(&a.config, &a.summary)?,
    )?;
    for c in &a.curves {
        let name = c.name.replace(':', ".");
        emit(Some(&in_dir(dir, &format!("{name}.dat"))?), &c.to_text(Some(&a.config)))?;
        emit(
            Some(&in_dir(dir, &format!("{name}.svg"))?),
            &svg_chart(&c.name, std::slice::from_ref(c), Some(&a.config)),
        )?;
    }
    Ok(())
}

fn grid_config(g: &GridArgs, seed: u64) -> Value {
    json!({
        "n": g.n,
        "p": g.density.p,
        "d": g.density.d,
        "replicates": g.replicates,
        "seed": seed,
    })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn experiment(which: &Experiment, workers: Option<usize>) -> Result<Status, Failure> {
    match which {
        Experiment::Census(g) => {
            let seed = resolve_seed(g.seed);
            let mut records = Vec::new();
            let mut summaries: Vec<(usize, f64, CensusSummary)> = Vec::new();
            for &n in &g.n {
                let d = degree(n, &g.density)?;
                let out = run_path_census(&CensusConfig::new(n, d, g.replicates, seed))?;
                if let Some(w) = &out.summary.warning {
                    eprintln!("warning: n = {n}: {w}");
                }
                summaries.push((n, d, out.summary));
                records.extend(out.records);
            }
            let curves = curves_by_n(&records, "longest_path", |r| Some(r.longest_path as f64));
            let cfg = config("experiment census", workers, grid_config(g, seed));
            let summary = json!(summaries
                .iter()
                .map(|(n, d, s)| json!({ "n": n, "d": d, "summary": s }))
                .collect::<Vec<_>>());
            write_artifacts(
                g.out.as_deref(),
                Artifacts { id: "census", config: cfg, records, summary, curves },
            )?;
            Ok(Status::Complete)
        }
        Experiment::Expansion { grid: g, samples } => {
            let seed = resolve_seed(g.seed);
            let mut records = Vec::new();
            let mut summaries: Vec<(usize, f64, ExpansionSummary)> = Vec::new();
            for &n in &g.n {
                let d = degree(n, &g.density)?;
                if d <= 1.0 {
                    return Err(usage("d", format!("{d} is not above 1 at n = {n}")));
                }
                let out =
                    run_expansion_check(&ExpansionConfig::new(n, d, g.replicates, *samples, seed))?;
                summaries.push((n, d, out.summary));
                records.extend(out.records);
            }
            let curves = curves_by_n(&records, "min_eout_per_d_size", |r| {
                r.metrics.get("min_eout_per_d_size").copied()
            });
            let cfg = config(
                "experiment expansion",
                workers,
                merge(grid_config(g, seed), json!({ "samples": samples })),
            );
            let summary = json!(summaries
                .iter()
                .map(|(n, d, s)| json!({ "n": n, "d": d, "summary": s }))
                .collect::<Vec<_>>());
            write_artifacts(
                g.out.as_deref(),
                Artifacts { id: "expansion", config: cfg, records, summary, curves },
            )?;
            Ok(Status::Complete)
        }
        Experiment::Scaling { grid: g, regime, budget, epsilon: eps, no_conductance } => {
            let regime = match regime {
                RegimeArg::ConstantD => {
                    let d = g.density.d.ok_or_else(|| usage("d", "required for --regime constant-d"))?;
                    if g.density.p.is_some() {
                        return Err(usage("p", "use --d with --regime constant-d"));
                    }
                    Regime::ConstantD { d }
                }
                RegimeArg::Threshold | RegimeArg::Dense => {
                    if g.density.p.is_some() || g.density.d.is_some() {
                        return Err(usage("regime", "threshold and dense regimes set d themselves"));
                    }
                    if *regime == RegimeArg::Dense {
                        Regime::Dense
                    } else {
                        Regime::Threshold
                    }
                }
            };
            let seed = resolve_seed(g.seed);
            let mut cfg = ScalingConfig::new(regime, g.n.clone(), g.replicates, seed);
            cfg.measure.max_steps = *budget;
            cfg.measure.epsilon = epsilon(*eps)?;
            cfg.measure.conductance = !no_conductance;
            let out = run_scaling_study(&cfg).map_err(|e| match e {
                Error::InvalidParameter { name, reason } => usage(name, reason),
                e => e.into(),
            })?;
            let mut curves = curves_by_n(&out.records, "t_mix_cesaro", |r| {
                r.t_mix_cesaro.map(|t| t as f64)
            });
            curves.extend(curves_by_n(&out.records, "t_mix", |r| r.t_mix.map(|t| t as f64)));
            curves.extend(curves_by_n(&out.records, "ratio_cesaro_local", |r| {
                r.metrics.get("ratio_cesaro_local").copied()
            }));
            let config = config(
                "experiment scaling",
                workers,
                merge(grid_config(g, seed), json!({ "scaling": cfg })),
            );
            let censored = out.fit.censored > 0;
            write_artifacts(
                g.out.as_deref(),
                Artifacts {
                    id: regime.id(),
                    config,
                    records: out.records,
                    summary: json!(out.fit),
                    curves,
                },
            )?;
            Ok(if censored { Status::Censored } else { Status::Complete })
        }
    }
}

fn demo(a: &DemoArgs, workers: Option<usize>) -> Result<Status, Failure> {
    if a.l < 2 {
        return Err(usage("l", format!("{} is below 2", a.l)));
    }
    if a.expander_n < 4 || a.expander_n % 2 == 1 {
        return Err(usage("expander-n", format!("{} must be even and at least 4", a.expander_n)));
    }
    if a.walks == 0 {
        return Err(usage("walks", "must be positive"));
    }
    let seed = resolve_seed(a.seed);
    let mut cfg = ObstructionConfig::new(a.l, a.expander_n, a.walks, seed);
    cfg.measure.max_steps = a.budget;
    let report = run_obstruction_demo(&cfg)?;
    let config = config("demo", workers, json!({ "obstruction": cfg }));
    emit(a.out.as_deref(), &json_document(&config, &report)?)?;
    Ok(if report.t_mix.is_none() || report.t_mix_cesaro.is_none() {
        Status::Censored
    } else {
        Status::Complete
    })
}
