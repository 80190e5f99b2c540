use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::Instant;

use nue_core::calibrate::{calibrate, Calibration, CalibrationConfig};
use nue_core::hyperbolic::{
    adapted_hyperbolic_time, first_hyperbolic_time, lp_tail_check, recurrence_exponent, tail_table,
    trace_orbit, HyperbolicParams, TailConfig,
};
use nue_core::maps::{build_map, MapConfig, MapModel};
use nue_core::mc::{par_samples, sample_rng, stream, uniform_point};
use nue_core::measure::{stability_curve, stationary_measure, SamplingConfig, StabilityConfig};
use nue_core::noise::{
    choose_constants, preservation_experiment, AdaptedConstants, AdaptedPerturbation, HSource,
    PreservationConfig,
};
use nue_core::stats::{
    correlation_sweep, fit_decay, ld_curve, series_csv, ChainConfig, DecayFit, LdConfig, MeasureMode,
};
use nue_core::ENGINE_VERSION;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, ExperimentKind, HypSection, Observable};
use crate::error::{config_error, RunError};

/// Everything needed to reproduce and audit a run.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub engine_version: String,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub wall_time_s: f64,
    pub censoring: BTreeMap<String, usize>,
    pub files: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub calibration: Option<Calibration>,
    pub summary: Value,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub manifest: RunManifest,
    pub manifest_path: PathBuf,
}

struct Artifacts {
    files: Vec<(String, String)>,
    censoring: BTreeMap<String, usize>,
    summary: Value,
}

impl Artifacts {
    fn new() -> Self {
        Artifacts { files: Vec::new(), censoring: BTreeMap::new(), summary: Value::Null }
    }

    fn file(&mut self, suffix: &str, body: String) {
        self.files.push((suffix.to_string(), body));
    }
}

fn fresh_seed() -> u64 {
    let t = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_nanos() as u64)
        .unwrap_or(0);
    // splitmix64 finaliser
    let mut z = t.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn json_pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Runs one experiment, writing `<out>.*` files and `<out>.manifest.json`.
pub fn run(mut cfg: ExperimentConfig) -> Result<RunOutput, RunError> {
    let start = Instant::now();
    cfg.apply_defaults()?;
    let seed = *cfg.seed.get_or_insert_with(fresh_seed);
    let map = build_map(&cfg.map).map_err(config_error)?;
    let map = map.as_ref();

    let needs_hyp = !matches!(cfg.experiment, ExperimentKind::Orbit | ExperimentKind::Ld | ExperimentKind::Corr);
    let (hyp, calibration) = if needs_hyp {
        let (h, c) = hyperbolic_setup(map, cfg.hyp.clone().unwrap_or_default(), seed)?;
        (Some(h), c)
    } else {
        (None, None)
    };
    if let Some(h) = &hyp {
        cfg.hyp = Some(HypSection { sigma: Some(h.params.sigma), delta: Some(h.params.delta), gamma: Some(h.gamma) });
    }

    let mut art = Artifacts::new();
    match cfg.experiment {
        ExperimentKind::Orbit => run_orbit(map, &mut cfg, seed, &mut art),
        ExperimentKind::Hyptimes => run_hyptimes(map, &cfg, hyp.as_ref().unwrap(), seed, &mut art),
        ExperimentKind::Adapted => run_adapted(map, &cfg, hyp.as_ref().unwrap(), seed, &mut art)?,
        ExperimentKind::Preservation => run_preservation(map, &mut cfg, hyp.as_ref().unwrap(), seed, &mut art)?,
        ExperimentKind::Tails => run_tails(map, &mut cfg, hyp.as_ref().unwrap(), calibration.as_ref(), seed, &mut art)?,
        ExperimentKind::Stationary => run_stationary(map, &mut cfg, hyp.as_ref().unwrap(), seed, &mut art)?,
        ExperimentKind::Stability => run_stability(map, &mut cfg, hyp.as_ref().unwrap(), seed, &mut art)?,
        ExperimentKind::Ld => run_ld(map, &cfg, seed, &mut art)?,
        ExperimentKind::Corr => run_corr(map, &cfg, seed, &mut art)?,
    }

    let prefix = cfg.out.clone().expect("defaulted");
    let mut written = Vec::new();
    for (suffix, body) in &art.files {
        let path = format!("{prefix}{suffix}");
        write_file(Path::new(&path), body)?;
        written.push(path);
    }
    let manifest = RunManifest {
        engine_version: ENGINE_VERSION.to_string(),
        seed,
        config: cfg,
        wall_time_s: start.elapsed().as_secs_f64(),
        censoring: art.censoring,
        files: written,
        calibration,
        summary: art.summary,
    };
    let manifest_path = PathBuf::from(format!("{prefix}.manifest.json"));
    write_file(&manifest_path, &json_pretty(&manifest))?;
    Ok(RunOutput { manifest, manifest_path })
}

fn write_file(path: &Path, body: &str) -> Result<(), RunError> {
    let io = |e: std::io::Error| RunError::Io { path: path.display().to_string(), message: e.to_string() };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(path, body).map_err(io)
}

struct HypSetup {
    params: HyperbolicParams,
    gamma: f64,
    constants: AdaptedConstants,
}

fn hyperbolic_setup(
    map: &dyn MapModel,
    hyp: HypSection,
    seed: u64,
) -> Result<(HypSetup, Option<Calibration>), RunError> {
    let nd = map
        .nondegeneracy()
        .ok_or_else(|| RunError::Config(format!("map {} has no (B, beta) constants", map.name())))?;
    let calibration = match (hyp.sigma, hyp.delta) {
        (Some(_), Some(_)) => None,
        _ => Some(calibrate(map, &CalibrationConfig { seed, ..Default::default() })?),
    };
    let sigma = hyp.sigma.or(calibration.as_ref().map(|c| c.sigma)).unwrap();
    let delta = hyp.delta.or(calibration.as_ref().map(|c| c.delta)).unwrap();
    let params = HyperbolicParams::from_nondegeneracy(sigma, delta, nd)?;
    let gamma = hyp.gamma.unwrap_or_else(|| recurrence_exponent(nd.beta) * (-sigma.ln()) / 4.0);
    let constants = choose_constants(&params, gamma)?;
    Ok((HypSetup { params, gamma, constants }, calibration))
}

fn observable(o: Observable, map: &dyn MapModel) -> impl Fn(f64) -> f64 + Sync + '_ {
    let d = map.domain();
    move |x| match o {
        Observable::Identity => x,
        Observable::LogDeriv => map.raw_deriv(x).abs().ln(),
        Observable::Cos => (2.0 * PI * (x - d.lower) / d.length()).cos(),
    }
}

fn perturbation<'a>(
    map: &'a dyn MapModel,
    cfg: &ExperimentConfig,
    hyp: &HypSetup,
    epsilon: f64,
) -> Result<AdaptedPerturbation<'a>, RunError> {
    let depth = cfg.noise.depth.expect("defaulted");
    let horizon = cfg.noise.horizon.expect("defaulted");
    let source = match cfg.noise.cells {
        Some(0) | None => HSource::Exact,
        Some(n) => HSource::Cells(n),
    };
    Ok(AdaptedPerturbation::new(map, hyp.params, hyp.constants, epsilon, depth, horizon)?.with_source(source))
}

fn opt(v: Option<usize>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn run_orbit(map: &dyn MapModel, cfg: &mut ExperimentConfig, seed: u64, art: &mut Artifacts) {
    let n = cfg.mc.n.expect("defaulted");
    let x0 = *cfg
        .analysis
        .x0
        .get_or_insert_with(|| uniform_point(&map.domain(), &mut sample_rng(seed, stream::INITIAL)));
    let delta = cfg.hyp.as_ref().and_then(|h| h.delta).unwrap_or(0.5);
    let t = trace_orbit(map, x0, n, delta);
    let mut s = String::from("j,x,log_inv_deriv,log_trunc_dist\n");
    for (j, x) in t.points.iter().enumerate() {
        match (t.log_inv_deriv.get(j), t.log_trunc_dist.get(j)) {
            (Some(a), Some(b)) => s.push_str(&format!("{j},{x},{a},{b}\n")),
            _ => s.push_str(&format!("{j},{x},,\n")),
        }
    }
    art.censoring.insert("hit_critical".into(), usize::from(t.hit_critical.is_some()));
    art.summary = json!({ "points": t.points.len(), "hit_critical": t.hit_critical });
    art.file(".csv", s);
}

fn run_hyptimes(map: &dyn MapModel, cfg: &ExperimentConfig, hyp: &HypSetup, seed: u64, art: &mut Artifacts) {
    let samples = cfg.mc.samples.expect("defaulted");
    let horizon = cfg.noise.horizon.expect("defaulted");
    let rows = par_samples(samples, seed, stream::INITIAL, |_, rng| {
        let x = uniform_point(&map.domain(), rng);
        let t = trace_orbit(map, x, horizon, hyp.params.delta);
        (x, t.hyperbolic_times(&hyp.params), t.hit_critical.is_some())
    });
    let mut s = String::from("x,first,count,density\n");
    for (x, r, _) in &rows {
        s.push_str(&format!("{x},{},{},{}\n", opt(r.first), r.times.len(), r.density));
    }
    let censored = rows.iter().filter(|r| r.1.first.is_none()).count();
    art.censoring.insert("h_censored".into(), censored);
    art.censoring.insert("hit_critical".into(), rows.iter().filter(|r| r.2).count());
    let found: Vec<usize> = rows.iter().filter_map(|r| r.1.first).collect();
    let mean = found.iter().sum::<usize>() as f64 / found.len().max(1) as f64;
    art.summary = json!({ "mean_first": mean, "found": found.len() });
    art.file(".csv", s);
}

fn run_adapted(
    map: &dyn MapModel,
    cfg: &ExperimentConfig,
    hyp: &HypSetup,
    seed: u64,
    art: &mut Artifacts,
) -> Result<(), RunError> {
    let samples = cfg.mc.samples.expect("defaulted");
    let depth = cfg.noise.depth.expect("defaulted");
    let horizon = cfg.noise.horizon.expect("defaulted");
    let rows = par_samples(samples, seed, stream::INITIAL, |_, rng| {
        let x = uniform_point(&map.domain(), rng);
        let h = first_hyperbolic_time(map, x, &hyp.params, horizon).value();
        adapted_hyperbolic_time(map, x, &hyp.params, depth, horizon, nue_core::hyperbolic::DEFAULT_NODE_BUDGET)
            .map(|a| (x, h, a))
    });
    let mut s = String::from("x,h,adapted,nodes,censored_nodes\n");
    let (mut censored, mut unresolved) = (0, 0);
    for r in rows {
        let (x, h, a) = r?;
        censored += usize::from(h.is_none());
        unresolved += usize::from(!a.is_resolved());
        s.push_str(&format!("{x},{},{},{},{}\n", opt(h), a.value, a.nodes, a.censored_nodes));
    }
    art.censoring.insert("h_censored".into(), censored);
    art.censoring.insert("adapted_by_convention".into(), unresolved);
    art.file(".csv", s);
    Ok(())
}

fn run_preservation(
    map: &dyn MapModel,
    cfg: &mut ExperimentConfig,
    hyp: &HypSetup,
    seed: u64,
    art: &mut Artifacts,
) -> Result<(), RunError> {
    let eps = *cfg.noise.epsilon.get_or_insert(hyp.constants.epsilon0 / 2.0);
    let sigma_hat = *cfg.noise.sigma_hat.get_or_insert(hyp.params.sigma.sqrt());
    let pert = perturbation(map, cfg, hyp, eps)?.with_source(HSource::Exact);
    let pc = PreservationConfig {
        samples: cfg.mc.samples.expect("defaulted"),
        trials: cfg.mc.trials.expect("defaulted"),
        h_max: cfg.analysis.h_max.expect("defaulted"),
        sigma_hat,
        max_attempts: 1000,
        seed,
    };
    let report = preservation_experiment(&pert, &pc)?;
    let mut s = String::from("x,h,adapted,fails_a,fails_b,fails_c,worst_ratio\n");
    for p in &report.points {
        s.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            p.x, p.h, p.adapted, p.fails_a, p.fails_b, p.fails_c, p.worst_ratio
        ));
    }
    art.censoring.insert("skipped_samples".into(), report.skipped);
    art.summary = json!({ "pass_a": report.pass_a, "pass_b": report.pass_b, "pass_c": report.pass_c });
    art.file(".csv", s);
    let mut summary = serde_json::to_value(&report).expect("serializable");
    if let Value::Object(m) = &mut summary {
        m.remove("points");
    }
    art.file(".json", json_pretty(&summary));
    Ok(())
}

fn run_tails(
    map: &dyn MapModel,
    cfg: &mut ExperimentConfig,
    hyp: &HypSetup,
    calibration: Option<&Calibration>,
    seed: u64,
    art: &mut Artifacts,
) -> Result<(), RunError> {
    let c = *cfg
        .analysis
        .c
        .get_or_insert_with(|| calibration.map(|c| c.lyapunov).unwrap_or(-3.0 * hyp.params.sigma.ln()));
    let tc = TailConfig {
        c,
        gamma: hyp.gamma,
        ns: cfg.analysis.ns.clone().expect("defaulted"),
        samples: cfg.mc.samples.expect("defaulted"),
        horizon: cfg.mc.n,
        seed,
    };
    let table = tail_table(map, &hyp.params, &tc)?;
    let lp = lp_tail_check(&table.h_samples, cfg.analysis.p.expect("defaulted"));
    let fit = fit_decay(&table.ns, &table.gamma_mass);
    art.censoring.insert("h_censored".into(), table.censored);
    art.summary = json!({
        "lp_converged": lp.converged,
        "fit": fit_value(&fit),
    });
    art.file(".csv", table.to_csv());
    art.file(".json", json_pretty(&json!({ "table": table, "lp": lp, "fit": fit_value(&fit) })));
    Ok(())
}

fn fit_value(fit: &Result<DecayFit, nue_core::Error>) -> Value {
    match fit {
        Ok(f) => json!({ "slope": f.slope, "intercept": f.intercept, "r2": f.r2 }),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn sampling(cfg: &ExperimentConfig, seed: u64) -> SamplingConfig {
    SamplingConfig {
        n: cfg.mc.n.expect("defaulted"),
        samples: cfg.mc.samples.expect("defaulted"),
        bins: cfg.mc.bins.expect("defaulted"),
        burn_in: cfg.mc.burn_in.expect("defaulted"),
        seed,
    }
}

fn run_stationary(
    map: &dyn MapModel,
    cfg: &mut ExperimentConfig,
    hyp: &HypSetup,
    seed: u64,
    art: &mut Artifacts,
) -> Result<(), RunError> {
    let eps = *cfg.noise.epsilon.get_or_insert(hyp.constants.epsilon0 / 2.0);
    let pert = perturbation(map, cfg, hyp, eps)?;
    let run = stationary_measure(&pert, eps, &sampling(cfg, seed))?;
    art.censoring.insert("dropped_orbits".into(), run.dropped);
    art.file(".csv", run.measure.to_csv());
    Ok(())
}

fn run_stability(
    map: &dyn MapModel,
    cfg: &mut ExperimentConfig,
    hyp: &HypSetup,
    seed: u64,
    art: &mut Artifacts,
) -> Result<(), RunError> {
    let e0 = hyp.constants.epsilon0;
    let epsilons = cfg.noise.epsilons.get_or_insert_with(|| vec![e0 / 2.0, e0 / 4.0, e0 / 8.0, e0 / 16.0]).clone();
    let top = epsilons.iter().cloned().fold(0.0, f64::max);
    let pert = perturbation(map, cfg, hyp, top.max(f64::MIN_POSITIVE))?;
    let sampling = sampling(cfg, seed);
    let reference = SamplingConfig {
        n: cfg.mc.reference_n.expect("defaulted"),
        burn_in: cfg.mc.reference_burn_in.expect("defaulted"),
        samples: cfg.mc.reference_samples.expect("defaulted"),
        ..sampling
    };
    let sc = StabilityConfig {
        epsilons,
        sampling,
        reference: Some(reference),
        batches: cfg.mc.batches.expect("defaulted"),
    };
    let curve = stability_curve(&pert, &sc)?;
    art.censoring.insert("dropped_orbits".into(), curve.dropped);
    art.summary = json!({
        "mc_error": curve.mc_error,
        "non_increasing_within_2mc": curve.non_increasing_within(2.0 * curve.mc_error),
    });
    art.file(".csv", curve.to_csv());
    Ok(())
}

fn run_ld(map: &dyn MapModel, cfg: &ExperimentConfig, seed: u64, art: &mut Artifacts) -> Result<(), RunError> {
    let ns = cfg.analysis.ns.clone().expect("defaulted");
    let lc = LdConfig {
        eps_dev: cfg.analysis.eps_dev.expect("defaulted"),
        samples: cfg.mc.samples.expect("defaulted"),
        mode: cfg.analysis.mode.unwrap_or(MeasureMode::Physical),
        burn_in: cfg.mc.burn_in.expect("defaulted"),
        reference_len: None,
        seed,
    };
    let phi = observable(cfg.analysis.observable.expect("defaulted"), map);
    let est = ld_curve(map, phi, &ns, &lc)?;
    let rows: Vec<(usize, f64, f64)> = est.iter().map(|e| (e.n, e.value, e.stderr)).collect();
    let fit = fit_decay(&ns, &rows.iter().map(|r| r.1).collect::<Vec<_>>());
    art.censoring.insert("dropped_orbits".into(), est.first().map_or(0, |e| e.dropped));
    art.summary = json!({ "reference_mean": est.first().map(|e| e.reference_mean), "fit": fit_value(&fit) });
    art.file(".csv", series_csv(&rows, fit.as_ref().ok()));
    Ok(())
}

fn run_corr(map: &dyn MapModel, cfg: &ExperimentConfig, seed: u64, art: &mut Artifacts) -> Result<(), RunError> {
    let ns = cfg.analysis.ns.clone().expect("defaulted");
    let cc = ChainConfig {
        chains: cfg.mc.chains.expect("defaulted"),
        length: cfg.mc.n.expect("defaulted"),
        burn_in: cfg.mc.burn_in.expect("defaulted"),
        seed,
    };
    let o = cfg.analysis.observable.expect("defaulted");
    let est = correlation_sweep(map, observable(o, map), observable(o, map), &ns, &cc)?;
    let rows: Vec<(usize, f64, f64)> = est.iter().map(|e| (e.n, e.covariance.abs(), e.stderr)).collect();
    let fit = fit_decay(&ns, &rows.iter().map(|r| r.1).collect::<Vec<_>>());
    art.summary = json!({
        "normalized": est.iter().map(|e| e.normalized).collect::<Vec<_>>(),
        "fit": fit_value(&fit),
    });
    art.file(".csv", series_csv(&rows, fit.as_ref().ok()));
    Ok(())
}

/// Calibration report for a map config: constants plus Birkhoff diagnostics.
pub fn calibrate_map(map_cfg: &MapConfig, seed: u64) -> Result<Value, RunError> {
    let map = build_map(map_cfg).map_err(config_error)?;
    let cal = calibrate(map.as_ref(), &CalibrationConfig { seed, ..Default::default() })?;
    Ok(json!({
        "map": map_cfg.resolved().map_err(config_error)?,
        "seed": seed,
        "calibration": cal,
    }))
}
