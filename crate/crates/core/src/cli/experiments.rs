//! Study runners behind `tht run`.

use serde_json::json;

use crate::diagnostics::{
    count_mode_hops, delta_h_trace_from, pilot_vbar_trace, recommend_tuning, time_to_reach, visited_modes,
    DiagnosticsReport, NearestReferenceClassifier, PilotOptions, ProjectionClassifier,
};
use crate::error::Error;
use crate::gibbs::{gibbs_kernel, joint_log_posterior, GibbsState, LocationKernel};
use crate::hamiltonian::sample_initial_velocity;
use crate::mass::MassSpec;
use crate::model::PotentialModel;
use crate::rng::{RandomSource, RngStream};
use crate::samplers::{hmc_step, run_parallel_chains, tht_step, ChainOutput, HmcConfig};
use crate::schedule::MassSchedule;
use crate::state::ThtConfig;
use crate::targets::{
    rejection_filter, AugmentedTarget, GaussianMixture, PowerPotential, SensorDataset, SensorPosterior,
    TruncatedNormal,
};

use super::config::{Kind, RunConfig, SamplerSection};
use super::output::{chain_header, chain_plot_script, num, ArtifactWriter};
use super::presets;

/// Command-line values that take precedence over the configuration file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub iters: Option<usize>,
    pub workers: Option<usize>,
    pub dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunError {
    /// Invalid settings; exit code 2.
    Config(String),
    /// Sampler or I/O failure; exit code 3.
    Runtime(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Runtime(_) => 3,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(m) => write!(f, "config error: {m}"),
            RunError::Runtime(m) => write!(f, "run failed: {m}"),
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidSchedule(_)
            | Error::InvalidIndexDistribution(_)
            | Error::InvalidMass(_)
            | Error::InvalidConfig(_)
            | Error::DimensionMismatch { .. }
            | Error::DegenerateBox { .. } => RunError::Config(e.to_string()),
            _ => RunError::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Runtime(e.to_string())
    }
}

type Outcome = Result<(), RunError>;

const INIT_STREAM: u64 = 0x1a17_5eed_0000_0000;

struct Settings {
    seed: u64,
    iters: usize,
    chains: usize,
    workers: usize,
    burn_in: usize,
    trace: bool,
}

impl Settings {
    fn resolve(cfg: &RunConfig, ov: &Overrides, iters: usize, chains: usize, burn_in: usize) -> Result<Self, RunError> {
        let s = Settings {
            seed: ov.seed.or(cfg.seed).unwrap_or(7),
            iters: ov.iters.or(cfg.iters).unwrap_or(iters),
            chains: cfg.chains.unwrap_or(chains),
            workers: ov
                .workers
                .or(cfg.workers)
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
            burn_in: cfg.burn_in.unwrap_or(burn_in),
            trace: cfg.trace,
        };
        if s.iters == 0 || s.chains == 0 || s.workers == 0 {
            return Err(RunError::Config("iters, chains and workers must be positive".into()));
        }
        Ok(s)
    }

    fn init_rng(&self, chain: usize) -> RngStream {
        RngStream::derive(self.seed ^ INIT_STREAM, chain as u64)
    }

    fn burn(&self) -> usize {
        self.burn_in.min(self.iters)
    }
}

/// Runs one configured study, writing artifacts through `out`.
pub fn run_experiment(cfg: &RunConfig, ov: &Overrides, out: &mut ArtifactWriter) -> Outcome {
    match cfg.kind {
        Kind::Mixture1d => mixture_1d(cfg, ov, out),
        Kind::MixtureHd => mixture_hd(cfg, ov, out),
        Kind::PowerPilot => power_pilot(cfg, ov, out),
        Kind::Sensor => sensor(cfg, ov, out),
        Kind::SensorGibbs => sensor_gibbs(cfg, ov, out),
        Kind::GapBridge => gap_bridge(cfg, ov, out),
    }
}

fn sampler_or(cfg: &RunConfig, default: SamplerSection) -> SamplerSection {
    cfg.sampler.clone().unwrap_or(default)
}

fn write_chains<F>(out: &mut ArtifactWriter, name: &str, columns: &[String], chains: &[ChainOutput], row: F) -> Outcome
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let rows = chains.iter().enumerate().flat_map(|(c, chain)| {
        let row = &row;
        chain.states.iter().enumerate().map(move |(i, s)| {
            let mut r = vec![i.to_string(), c.to_string()];
            r.extend(row(s).into_iter().map(num));
            r
        })
    });
    out.csv(name, &chain_header(columns), rows)?;
    Ok(())
}

/// Long-format `series,step,value` table.
fn write_traces(out: &mut ArtifactWriter, traces: &[(String, Vec<(usize, f64)>)]) -> Outcome {
    let rows = traces
        .iter()
        .flat_map(|(name, t)| t.iter().map(move |(n, v)| vec![name.clone(), n.to_string(), num(*v)]));
    out.csv("trace.csv", &["series".into(), "step".into(), "value".into()], rows)?;
    Ok(())
}

fn trace_plot() -> String {
    "set datafile separator ','\nset xlabel 'leapfrog step'\nset ylabel 'value'\n\
     plot 'trace.csv' using 2:3 every ::1 with lines title 'trace'\npause mouse close\n"
        .to_string()
}

fn delta_h_paths<M: PotentialModel + ?Sized>(
    model: &M,
    x0: &[f64],
    cfg: &ThtConfig,
    seed: u64,
    paths: usize,
) -> Vec<(String, Vec<(usize, f64)>)> {
    let full = ThtConfig { max_proposals: cfg.schedule.period(), ..cfg.clone() };
    let mut rng = RngStream::derive(seed ^ INIT_STREAM, u64::MAX);
    (0..paths)
        .map(|p| {
            let v0 = sample_initial_velocity(&cfg.mass, model.dim(), cfg.schedule.alpha(0), &mut rng);
            (format!("delta_h_path{p}"), delta_h_trace_from(model, x0, &v0, 0, &full))
        })
        .collect()
}

fn tht_chains<M: PotentialModel + ?Sized>(
    model: &M,
    cfg: &ThtConfig,
    inits: &[Vec<f64>],
    s: &Settings,
) -> Result<Vec<ChainOutput>, RunError> {
    Ok(run_parallel_chains(
        |_| |x: &[f64], r: &mut RngStream| tht_step(model, x, cfg, r),
        inits,
        s.iters,
        s.seed,
        s.workers,
    )?)
}

fn hops_after_burn_in<C: crate::diagnostics::ModeClassifier>(chains: &[ChainOutput], burn: usize, c: &C) -> Vec<usize> {
    chains.iter().map(|o| count_mode_hops(&o.states[burn..], c)).collect()
}

fn mixture_1d(cfg: &RunConfig, ov: &Overrides, out: &mut ArtifactWriter) -> Outcome {
    let s = Settings::resolve(cfg, ov, 500, 4, 0)?;
    let mix_cfg = cfg.mixture.clone().unwrap_or_default();
    let half = 0.5 * mix_cfg.separation;
    let model = GaussianMixture::symmetric_pair(vec![-half], vec![half], mix_cfg.sd)?;
    let tht = sampler_or(cfg, presets::far_pair_1d()).to_tht()?;
    let inits: Vec<Vec<f64>> = (0..s.chains)
        .map(|i| {
            let centre = if i % 2 == 0 { -half } else { half };
            vec![centre + mix_cfg.sd * s.init_rng(i).standard_normal()]
        })
        .collect();
    let chains = tht_chains(&model, &tht, &inits, &s)?;
    let classifier = ProjectionClassifier::between(&[-half], &[half]);
    let hops = hops_after_burn_in(&chains, s.burn(), &classifier);
    let right: Vec<f64> = chains
        .iter()
        .map(|c| {
            let post = &c.states[s.burn()..];
            post.iter().filter(|x| x[0] > 0.0).count() as f64 / post.len() as f64
        })
        .collect();
    let cols = vec!["x".to_string()];
    write_chains(out, "chains.csv", &cols, &chains, |x| x.to_vec())?;
    let mut report = DiagnosticsReport::new(Kind::Mixture1d.name(), &chains, s.burn())
        .with_hops(&hops)
        .with_rhat(&chains, &cols);
    report.extra = json!({ "right_mode_fraction": right });
    out.text("diagnostics.json", &report.to_json())?;
    let mut plot = chain_plot_script("chains.csv", "mixture1d", &cols, 3);
    if s.trace {
        write_traces(out, &delta_h_paths(&model, &inits[0], &tht, s.seed, 10))?;
        plot += &trace_plot();
    }
    out.text("plot.gp", &plot)?;
    Ok(())
}

fn mixture_hd(cfg: &RunConfig, ov: &Overrides, out: &mut ArtifactWriter) -> Outcome {
    let s = Settings::resolve(cfg, ov, 100, 1, 0)?;
    let mix_cfg = cfg.mixture.clone().unwrap_or_default();
    let dim = ov.dim.or(mix_cfg.dim).unwrap_or(10_000);
    if dim < 2 {
        return Err(RunError::Config("mixture_hd needs dim >= 2".into()));
    }
    let half = 0.5 * mix_cfg.separation;
    let (mut a, mut b) = (vec![0.0; dim], vec![0.0; dim]);
    a[0] = -half;
    b[0] = half;
    let model = GaussianMixture::symmetric_pair(a.clone(), b.clone(), mix_cfg.sd)?;
    let tht = sampler_or(cfg, presets::far_pair_high_dim()).to_tht()?;
    let inits: Vec<Vec<f64>> = (0..s.chains)
        .map(|i| {
            let mut rng = s.init_rng(i);
            a.iter().map(|m| m + mix_cfg.sd * rng.standard_normal()).collect()
        })
        .collect();
    let chains = tht_chains(&model, &tht, &inits, &s)?;
    let classifier = ProjectionClassifier::between(&a, &b);
    let hops = hops_after_burn_in(&chains, s.burn(), &classifier);
    let cols = vec!["projection".to_string(), "x1".to_string()];
    write_chains(out, "chains.csv", &cols, &chains, |x| vec![x[0], x[1]])?;
    let mut report = DiagnosticsReport::new(Kind::MixtureHd.name(), &chains, s.burn()).with_hops(&hops);
    report.extra = json!({
        "dim": dim,
        "accepted_moves": chains.iter().map(|c| c.step_results.iter().filter(|r| r.accepted_move).count()).collect::<Vec<_>>(),
        "wall_seconds": chains.iter().map(|c| c.wall_time.as_secs_f64()).collect::<Vec<_>>(),
    });
    out.text("diagnostics.json", &report.to_json())?;
    let mut plot = chain_plot_script("chains.csv", "mixture_hd", &cols, 3);
    if s.trace {
        write_traces(out, &delta_h_paths(&model, &inits[0], &tht, s.seed, 3))?;
        plot += &trace_plot();
    }
    out.text("plot.gp", &plot)?;
    Ok(())
}

fn power_pilot(cfg: &RunConfig, ov: &Overrides, out: &mut ArtifactWriter) -> Outcome {
    let s = Settings::resolve(cfg, ov, 1000, 4, 100)?;
    let pilot_cfg = cfg.pilot.clone().unwrap_or_default();
    let sampler = sampler_or(cfg, presets::pilot());
    let model = PowerPotential::isotropic(1, pilot_cfg.gamma)?;
    let grid = pilot_cfg
        .a_grid
        .clone()
        .unwrap_or_else(|| (0..11).map(|i| (30 + 5 * i) as f64 / 100.0).collect());
    let start = vec![pilot_cfg.start.unwrap_or(1.0)];
    let opts = PilotOptions { eps: sampler.eps, period: sampler.period, ..PilotOptions::default() };
    let mut pilot_rng = s.init_rng(usize::MAX);
    let advice = recommend_tuning(&model, &start, sampler.eta_star, &grid, &opts, &mut pilot_rng)?;

    let mut vel_rng = s.init_rng(usize::MAX);
    let v0 = sample_initial_velocity(&MassSpec::Identity, 1, 1.0, &mut vel_rng);
    let schedule = MassSchedule::cosine(sampler.eta_star, 0.0, sampler.period)?;
    let traces: Vec<(String, Vec<(usize, f64)>)> = grid
        .iter()
        .filter_map(|&a| {
            pilot_vbar_trace(&model, &start, &v0, &schedule, a, &opts)
                .ok()
                .map(|t| (format!("vbar_a{a:.4}"), t.into_iter().enumerate().collect()))
        })
        .collect();
    write_traces(out, &traces)?;

    let eps = sampler.eps.min(advice.eps_max);
    let period = advice.k_min.max(100);
    let tuned = SamplerSection {
        eps,
        period,
        gamma_hat: advice.gamma_hat,
        max_proposals: period + 2 * sampler.psi_half_width,
        ..sampler.clone()
    }
    .to_tht()?;
    let inits: Vec<Vec<f64>> = (0..s.chains).map(|i| vec![s.init_rng(i).standard_normal()]).collect();
    let chains = tht_chains(&model, &tuned, &inits, &s)?;
    let cols = vec!["x".to_string()];
    write_chains(out, "chains.csv", &cols, &chains, |x| x.to_vec())?;
    let mut report = DiagnosticsReport::new(Kind::PowerPilot.name(), &chains, s.burn()).with_rhat(&chains, &cols);
    report.extra = json!({
        "gamma": pilot_cfg.gamma,
        "a_grid": grid,
        "advice": advice,
        "tuned": { "eps": eps, "period": period, "a": tuned.a },
    });
    out.text("diagnostics.json", &report.to_json())?;
    let plot = trace_plot() + &chain_plot_script("chains.csv", "power_pilot", &cols, 3);
    out.text("plot.gp", &plot)?;
    Ok(())
}

fn load_dataset(cfg: &RunConfig) -> Result<SensorDataset, RunError> {
    match cfg.sensor.as_ref().and_then(|s| s.dataset.as_ref()) {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| RunError::Config(format!("{path}: {e}")))?;
            SensorDataset::from_json(&text).map_err(|e| RunError::Config(format!("{path}: {e}")))
        }
        None => Ok(SensorDataset::study_default()),
    }
}

fn location_columns(n_unknown: usize) -> Vec<String> {
    (0..n_unknown).flat_map(|i| [format!("x{i}"), format!("y{i}")]).collect()
}

fn reference_classifier(ds: &SensorDataset) -> Option<NearestReferenceClassifier> {
    let truth = ds.truth_vector()?;
    let mirror = ds.mirror(&truth);
    Some(NearestReferenceClassifier::new(vec![truth, mirror]))
}

fn uniform_locations(s: &Settings, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| {
            let mut rng = s.init_rng(i);
            (0..dim).map(|_| rng.uniform()).collect()
        })
        .collect()
}

fn sensor(cfg: &RunConfig, ov: &Overrides, out: &mut ArtifactWriter) -> Outcome {
    let s = Settings::resolve(cfg, ov, 1000, 12, 30)?;
    let ds = load_dataset(cfg)?;
    let section = cfg.sensor.clone().unwrap_or_default();
    let model = SensorPosterior::new(&ds)?;
    let sampler = sampler_or(cfg, presets::sensor());
    let tht = sampler.to_tht()?;
    let inits = uniform_locations(&s, s.chains, model.dim());
    let cols = location_columns(ds.n_unknown);
    let classifier = reference_classifier(&ds);

    let arm = |chains: &[ChainOutput], name: &str| {
        let mut report = DiagnosticsReport::new(name, chains, s.burn()).with_rhat(chains, &cols);
        if let Some(c) = &classifier {
            report = report.with_hops(&hops_after_burn_in(chains, s.burn(), c));
            report.extra = json!({
                "modes_visited": chains.iter().map(|o| visited_modes(&o.states[s.burn()..], c)).collect::<Vec<_>>(),
            });
        }
        report
    };

    let chains = tht_chains(&model, &tht, &inits, &s)?;
    let mut all_cols = cols.clone();
    all_cols.push("potential".into());
    let row = |x: &[f64]| {
        let mut r = x.to_vec();
        r.push(model.potential(x));
        r
    };
    write_chains(out, "chains.csv", &all_cols, &chains, row)?;
    let mut report = arm(&chains, Kind::Sensor.name());

    if section.compare_hmc {
        let hmc = HmcConfig { eps: sampler.eps, n_leapfrog: sampler.period, mass: MassSpec::Identity };
        hmc.validate()?;
        let hmc_chains = run_parallel_chains(
            |_| |x: &[f64], r: &mut RngStream| hmc_step(&model, x, &hmc, r),
            &inits,
            s.iters,
            s.seed ^ INIT_STREAM.rotate_left(16),
            s.workers,
        )?;
        write_chains(out, "chains_hmc.csv", &all_cols, &hmc_chains, row)?;
        let hmc_report = arm(&hmc_chains, "sensor_hmc");
        let mut extra = report.extra.take();
        extra["hmc"] = serde_json::to_value(&hmc_report).expect("report serializes");
        report.extra = extra;
    }
    out.text("diagnostics.json", &report.to_json())?;
    let last = all_cols.len() - 1;
    let mut plot = chain_plot_script("chains.csv", "sensor", &all_cols[last..], 3 + last);
    plot += &chain_plot_script("chains.csv", "sensor", &cols, 3);
    if s.trace {
        write_traces(out, &delta_h_paths(&model, &inits[0], &tht, s.seed, 5))?;
        plot += &trace_plot();
    }
    out.text("plot.gp", &plot)?;
    Ok(())
}

/// t_reach per chain: first sweep at which the 20-sweep average log
/// posterior comes within 5 of the pooled second-half mean.
fn reach_times(log_posts: &[Vec<f64>]) -> Vec<Option<usize>> {
    let tail: Vec<f64> = log_posts.iter().flat_map(|lp| lp[lp.len() / 2..].iter().cloned()).collect();
    let level = tail.iter().sum::<f64>() / tail.len() as f64;
    log_posts.iter().map(|lp| time_to_reach(lp, level - 5.0, 20)).collect()
}

fn gibbs_arm(
    ds: &SensorDataset,
    kernel: &LocationKernel,
    hyper: &HmcConfig,
    inits: &[Vec<f64>],
    sweeps: usize,
    s: &Settings,
) -> Result<Vec<ChainOutput>, RunError> {
    Ok(run_parallel_chains(|_| gibbs_kernel(ds, kernel, hyper), inits, sweeps, s.seed, s.workers)?)
}

fn gibbs_summary(
    name: &str,
    ds: &SensorDataset,
    chains: &[ChainOutput],
    names: &[String],
    burn: usize,
) -> Result<DiagnosticsReport, RunError> {
    let classifier = reference_classifier(ds);
    let loc_dim = 2 * ds.n_unknown;
    let mut report = DiagnosticsReport::new(name, chains, burn).with_rhat(chains, names);
    if let Some(c) = &classifier {
        let hops: Vec<usize> = chains
            .iter()
            .map(|o| {
                let locs: Vec<&[f64]> = o.states[burn..].iter().map(|x| &x[..loc_dim]).collect();
                count_mode_hops(&locs, c)
            })
            .collect();
        report = report.with_hops(&hops);
    }
    let log_posts = chains
        .iter()
        .map(|o| o.states.iter().map(|x| joint_log_posterior(&GibbsState::from_vector(x), ds)).collect())
        .collect::<crate::Result<Vec<Vec<f64>>>>()?;
    let mean_of = |j: usize| {
        let vals: Vec<f64> = chains.iter().flat_map(|o| o.states[burn..].iter().map(move |x| x[j].exp())).collect();
        vals.iter().sum::<f64>() / vals.len() as f64
    };
    let reach = reach_times(&log_posts);
    let reach_secs: Vec<Option<f64>> = reach
        .iter()
        .zip(chains)
        .map(|(t, c)| t.map(|t| c.wall_time.as_secs_f64() * t as f64 / (c.states.len() - 1) as f64))
        .collect();
    report.extra = json!({
        "posterior_mean_R": mean_of(loc_dim),
        "posterior_mean_sigma_e": mean_of(loc_dim + 1),
        "t_reach_sweeps": reach,
        "t_reach_seconds": reach_secs,
        "wall_seconds": chains.iter().map(|c| c.wall_time.as_secs_f64()).collect::<Vec<_>>(),
    });
    Ok(report)
}

fn sensor_gibbs(cfg: &RunConfig, ov: &Overrides, out: &mut ArtifactWriter) -> Outcome {
    let s = Settings::resolve(cfg, ov, 1000, 12, 0)?;
    let ds = load_dataset(cfg)?;
    let section = cfg.sensor.clone().unwrap_or_default();
    let hyper = HmcConfig { eps: section.hyper_eps, n_leapfrog: section.hyper_steps, mass: MassSpec::Identity };
    hyper.validate()?;
    let tht = LocationKernel::Tht(sampler_or(cfg, presets::sensor()).to_tht()?);
    let loc_dim = 2 * ds.n_unknown;
    let inits: Vec<Vec<f64>> = uniform_locations(&s, s.chains, loc_dim)
        .into_iter()
        .map(|mut v| {
            // Prior means of R and σ_e.
            v.push(0.5f64.ln());
            v.push(0.05f64.ln());
            v
        })
        .collect();
    let mut names = location_columns(ds.n_unknown);
    names.push("log_R".into());
    names.push("log_sigma_e".into());
    let burn = if cfg.burn_in.is_some() { s.burn() } else { s.iters / 2 };

    let chains = gibbs_arm(&ds, &tht, &hyper, &inits, s.iters, &s)?;
    let mut csv_cols = names.clone();
    csv_cols.push("log_posterior".into());
    let row = |x: &[f64]| {
        let mut r = x.to_vec();
        r.push(joint_log_posterior(&GibbsState::from_vector(x), &ds).unwrap_or(f64::NAN));
        r
    };
    write_chains(out, "chains.csv", &csv_cols, &chains, row)?;
    let mut report = gibbs_summary(Kind::SensorGibbs.name(), &ds, &chains, &names, burn)?;

    if section.compare_hmc {
        let loc = presets::sensor_gibbs_hmc();
        let tht_steps: usize = chains.iter().flat_map(|c| c.step_results.iter().map(|r| r.proposals_used)).sum();
        let per_sweep = tht_steps as f64 / (chains.len() * s.iters) as f64;
        let hyper_cost = 2.0 * hyper.n_leapfrog as f64;
        let sweeps = (s.iters as f64 * (per_sweep + hyper_cost) / (loc.n_leapfrog as f64 + hyper_cost)).ceil() as usize;
        let hmc_chains = gibbs_arm(&ds, &LocationKernel::Hmc(loc), &hyper, &inits, sweeps, &s)?;
        write_chains(out, "chains_hmc.csv", &csv_cols, &hmc_chains, row)?;
        let hmc_burn = sweeps * burn / s.iters;
        let hmc_report = gibbs_summary("sensor_gibbs_hmc", &ds, &hmc_chains, &names, hmc_burn)?;
        report.extra["gradient_budget_per_chain"] = json!(tht_steps as f64 / chains.len() as f64 + s.iters as f64 * hyper_cost);
        report.extra["hmc"] = serde_json::to_value(&hmc_report).expect("report serializes");
    }
    out.text("diagnostics.json", &report.to_json())?;
    let n = csv_cols.len();
    let plot = chain_plot_script("chains.csv", "sensor_gibbs", &csv_cols[n - 3..], n);
    out.text("plot.gp", &plot)?;
    Ok(())
}

fn gap_bridge(cfg: &RunConfig, ov: &Overrides, out: &mut ArtifactWriter) -> Outcome {
    let s = Settings::resolve(cfg, ov, 20_000, 4, 500)?;
    let section = cfg.gap.clone().unwrap_or_default();
    let base = TruncatedNormal::gap_example();
    let masses = base.interval_masses();
    let truth_left = masses[0] / masses.iter().sum::<f64>();
    let bridge = GaussianMixture::normal(vec![0.0], section.bridge_sd)?;
    let target = AugmentedTarget::new(base, bridge, section.log_nu)?;
    let tht = sampler_or(cfg, presets::gap_bridge()).to_tht()?;
    let inits: Vec<Vec<f64>> = (0..s.chains).map(|i| vec![if i % 2 == 0 { -2.0 } else { 2.0 }]).collect();
    let chains = tht_chains(&target, &tht, &inits, &s)?;

    let mut filter_rng = s.init_rng(usize::MAX - 1);
    let mut kept_all = Vec::new();
    let mut survival = Vec::new();
    let mut kept_flags = Vec::new();
    for c in &chains {
        let post = &c.states[s.burn()..];
        let kept = rejection_filter(post, &target, &mut filter_rng);
        survival.push(kept.len() as f64 / post.len() as f64);
        kept_flags.push(c.states.iter().map(|x| target.base.contains(x[0])).collect::<Vec<_>>());
        kept_all.extend(kept);
    }
    let left = kept_all.iter().filter(|x| x[0] < 0.0).count() as f64 / kept_all.len().max(1) as f64;
    let cols = vec!["x".to_string(), "in_support".to_string()];
    let rows = chains.iter().enumerate().flat_map(|(c, chain)| {
        let flags = &kept_flags[c];
        chain.states.iter().enumerate().map(move |(i, x)| {
            vec![i.to_string(), c.to_string(), num(x[0]), (flags[i] as u8).to_string()]
        })
    });
    out.csv("chains.csv", &chain_header(&cols), rows)?;
    let classifier = |x: &[f64]| Some((x[0] > 0.0) as usize);
    let hops = hops_after_burn_in(&chains, s.burn(), &classifier);
    let mut report = DiagnosticsReport::new(Kind::GapBridge.name(), &chains, s.burn())
        .with_hops(&hops)
        .with_rhat(&chains, &cols[..1]);
    report.extra = json!({
        "log_nu": section.log_nu,
        "left_fraction_filtered": left,
        "left_fraction_truth": truth_left,
        "survival": survival,
    });
    out.text("diagnostics.json", &report.to_json())?;
    let plot = chain_plot_script("chains.csv", "gap_bridge", &cols[..1], 3)
        + "set style data histograms\nbinwidth = 0.1\nbin(x) = binwidth * floor(x / binwidth)\n\
           plot 'chains.csv' using (bin($3)):(1.0) every ::1 smooth frequency with boxes title 'x'\npause mouse close\n";
    out.text("plot.gp", &plot)?;
    Ok(())
}
