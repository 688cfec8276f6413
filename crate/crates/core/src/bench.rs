//! Experiment runner and topology benchmark.

use std::io;
use std::thread;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimator::{run_scheme, SchemeConfig, Trajectory, DEFAULT_ROUNDS};
use crate::graph::{Graph, TopologySummary};
use crate::measurement::{
    gen_truth, measure, GroundTruth, MeasurementSet, TruthMode, DEFAULT_NOISE,
};
use crate::metrics::{perf_report, PerfReport, DEFAULT_K_NEG};
use crate::spectral::{
    all_bounds, rho_star, spectrum_f, spectrum_normalized_laplacian, RhoPlan, Spectrum,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "policy", rename_all = "snake_case")]
pub enum RhoPolicy {
    Fixed {
        rho: f64,
    },
    /// ρ⋆ from the normalized-Laplacian spectrum.
    Optimal,
    /// The unpenalized scheme.
    Sigma0,
}

/// Shared experiment parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub rounds: usize,
    pub k_neg: usize,
    pub seed: u64,
    pub noise_amplitude: f64,
    /// Linear truth step: `x_i = i · step`.
    pub truth_step: f64,
    /// Explicit truth values; overrides `truth_step` when set.
    pub custom_truth: Option<Vec<f64>>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            rounds: DEFAULT_ROUNDS,
            k_neg: DEFAULT_K_NEG,
            seed: 1,
            noise_amplitude: DEFAULT_NOISE,
            truth_step: 1.0,
            custom_truth: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.noise_amplitude.is_finite() && self.noise_amplitude >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "noise amplitude must be >= 0, got {}",
                self.noise_amplitude
            )));
        }
        if !self.truth_step.is_finite() {
            return Err(Error::InvalidConfig("truth step must be finite".into()));
        }
        Ok(())
    }

    pub fn measurements(&self, g: &Graph) -> Result<(GroundTruth, MeasurementSet)> {
        self.validate()?;
        let truth = match &self.custom_truth {
            Some(values) => gen_truth(g.n(), TruthMode::Custom, Some(values.clone()))?,
            None => gen_truth(
                g.n(),
                TruthMode::Linear {
                    step: self.truth_step,
                },
                None,
            )?,
        };
        let meas = measure(g, &truth, self.noise_amplitude, self.seed)?;
        Ok((truth, meas))
    }
}

/// One estimation run.
#[derive(Debug, Clone)]
pub struct EstimateOutcome {
    pub plan: Option<RhoPlan>,
    pub rho: f64,
    pub measurements: MeasurementSet,
    pub trajectory: Trajectory,
    pub report: PerfReport,
}

pub fn estimate(g: &Graph, policy: RhoPolicy, cfg: &ExperimentConfig) -> Result<EstimateOutcome> {
    let (plan, rho) = match policy {
        RhoPolicy::Fixed { rho } => (None, rho),
        RhoPolicy::Sigma0 => (None, 0.0),
        RhoPolicy::Optimal => {
            let plan = rho_star(g)?;
            let rho = plan.rho_star;
            (Some(plan), rho)
        }
    };
    let (_, measurements) = cfg.measurements(g)?;
    let trajectory = run_scheme(g, &measurements, &SchemeConfig::new(rho, cfg.rounds))?;
    let report = scheme_report(g, &measurements, &trajectory, cfg.k_neg)?;
    Ok(EstimateOutcome {
        plan,
        rho,
        measurements,
        trajectory,
        report,
    })
}

/// [`perf_report`], except that the unpenalized scheme on a bipartite graph
/// gets no effective rate: it oscillates instead of converging.
pub fn scheme_report(
    g: &Graph,
    meas: &MeasurementSet,
    traj: &Trajectory,
    k_neg: usize,
) -> Result<PerfReport> {
    let mut report = perf_report(g, meas, traj, k_neg)?;
    if traj.rho == 0.0 && g.is_bipartite() {
        report.r_e = None;
        report.r_e_note = Some("unpenalized scheme does not converge on a bipartite graph".into());
    }
    Ok(report)
}

/// Plot-ready spectral data for one graph.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    pub summary: TopologySummary,
    pub rho: f64,
    pub normalized_laplacian: Spectrum,
    pub f0: Spectrum,
    pub f_rho: Spectrum,
    pub sigma_l: f64,
    pub sigma_f0: f64,
    pub sigma_f_rho: f64,
    /// Per-index bounds on `F_ρ` eigenvalues (index 0 is always 1).
    pub bounds_lower: Vec<f64>,
    pub bounds_upper: Vec<f64>,
    pub plan: RhoPlan,
}

/// Spectra of `𝓛`, `F₀` and `F_ρ`; `rho` defaults to ρ⋆.
pub fn spectral_report(g: &Graph, rho: Option<f64>) -> Result<SpectralReport> {
    let plan = rho_star(g)?;
    let rho = rho.unwrap_or(plan.rho_star);
    let lap = spectrum_normalized_laplacian(g)?;
    let f0 = spectrum_f(g, 0.0)?;
    let f_rho = spectrum_f(g, rho)?;
    let (bounds_lower, bounds_upper) = all_bounds(&f0, rho, g.min_degree(), g.max_degree());
    Ok(SpectralReport {
        summary: g.summarize(),
        rho,
        sigma_l: lap.centroid(),
        sigma_f0: f0.centroid(),
        sigma_f_rho: f_rho.centroid(),
        normalized_laplacian: lap,
        f0,
        f_rho,
        bounds_lower,
        bounds_upper,
        plan,
    })
}

/// One benchmark row: structure, spectrum-derived predictions and measured
/// performance of both schemes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub topology: String,
    pub seed: u64,
    pub noise_amplitude: f64,
    #[serde(flatten)]
    pub data: Option<RowData>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowData {
    pub n: usize,
    pub regular: bool,
    pub bipartite: bool,
    pub density: f64,
    pub diameter: usize,
    pub d_avg: f64,
    pub d_min: usize,
    pub d_max: usize,
    pub lambda1_l: f64,
    pub lambda_max_l: f64,
    pub sigma_l: f64,
    pub rho_lo: f64,
    pub rho_star: f64,
    pub rho_hi: f64,
    pub rate_lo: f64,
    pub rate: f64,
    pub rate_hi: f64,
    pub rate_sigma0: f64,
    pub r_e_sigma0: Option<f64>,
    pub r_e_rho_star: Option<f64>,
    pub mse_sigma0: f64,
    pub mse_rho_star: f64,
}

pub const BENCH_COLUMNS: [&str; 25] = [
    "topology",
    "n",
    "regular",
    "bipartite",
    "dens",
    "phi",
    "d_av",
    "d_m",
    "d_M",
    "lambda1_L",
    "lambdamax_L",
    "sigma_L",
    "rho_lo",
    "rho_star",
    "rho_hi",
    "rate_lo",
    "rate",
    "rate_hi",
    "rate_0",
    "r_e_sigma0",
    "r_e_rho_star",
    "mse_sigma0",
    "mse_rho_star",
    "seed",
    "noise_amplitude",
];

fn compute_row(g: &Graph, cfg: &ExperimentConfig) -> Result<RowData> {
    let summary = g.summarize();
    let diameter = summary.diameter.ok_or(Error::Disconnected)?;
    let plan = rho_star(g)?;
    let (_, meas) = cfg.measurements(g)?;
    let runs = [0.0, plan.rho_star].map(|rho| -> Result<PerfReport> {
        let traj = run_scheme(g, &meas, &SchemeConfig::new(rho, cfg.rounds))?;
        scheme_report(g, &meas, &traj, cfg.k_neg)
    });
    let [plain, tuned] = runs;
    let (plain, tuned) = (plain?, tuned?);
    let (rho_lo, rho_star, rho_hi) = plan.bracket_or_point();
    Ok(RowData {
        n: summary.n,
        regular: summary.regular,
        bipartite: summary.bipartite,
        density: summary.density,
        diameter,
        d_avg: summary.d_avg,
        d_min: summary.d_min,
        d_max: summary.d_max,
        lambda1_l: plan.lambda1_l,
        lambda_max_l: plan.lambda_max_l,
        sigma_l: plan.sigma_l,
        rho_lo,
        rho_star,
        rho_hi,
        rate_lo: plan.rate_lo,
        rate: plan.rate,
        rate_hi: plan.rate_hi,
        rate_sigma0: plan.rate_sigma0,
        r_e_sigma0: plain.r_e,
        r_e_rho_star: tuned.r_e,
        mse_sigma0: plain.mse,
        mse_rho_star: tuned.mse,
    })
}

pub fn bench_row(label: &str, g: &Graph, cfg: &ExperimentConfig) -> BenchRow {
    let (data, error) = match compute_row(g, cfg) {
        Ok(d) => (Some(d), None),
        Err(e) => (None, Some(e.to_string())),
    };
    BenchRow {
        topology: label.to_string(),
        seed: cfg.seed,
        noise_amplitude: cfg.noise_amplitude,
        data,
        error,
    }
}

/// Runs every `(label, graph)` entry on its own thread; rows come back in
/// input order.
pub fn run_bench(entries: &[(String, Graph)], cfg: &ExperimentConfig) -> Vec<BenchRow> {
    thread::scope(|s| {
        let handles: Vec<_> = entries
            .iter()
            .map(|(label, g)| s.spawn(move || bench_row(label, g, cfg)))
            .collect();
        handles
            .into_iter()
            .zip(entries)
            .map(|(h, (label, _))| {
                h.join().unwrap_or_else(|_| BenchRow {
                    topology: label.clone(),
                    seed: cfg.seed,
                    noise_amplitude: cfg.noise_amplitude,
                    data: None,
                    error: Some("worker panicked".into()),
                })
            })
            .collect()
    })
}

/// Four decimals; scientific notation for small nonzero magnitudes so that
/// tiny errors stay visible.
pub fn format_decimal(v: f64) -> String {
    if v != 0.0 && v.abs() < 1e-3 {
        format!("{v:.4e}")
    } else {
        format!("{v:.4}")
    }
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn optional(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), format_decimal)
}

impl BenchRow {
    pub fn csv_record(&self) -> Vec<String> {
        let mut rec = vec![self.topology.clone()];
        match &self.data {
            Some(d) => rec.extend([
                d.n.to_string(),
                yes_no(d.regular),
                yes_no(d.bipartite),
                format_decimal(d.density),
                d.diameter.to_string(),
                format_decimal(d.d_avg),
                d.d_min.to_string(),
                d.d_max.to_string(),
                format_decimal(d.lambda1_l),
                format_decimal(d.lambda_max_l),
                format_decimal(d.sigma_l),
                format_decimal(d.rho_lo),
                format_decimal(d.rho_star),
                format_decimal(d.rho_hi),
                format_decimal(d.rate_lo),
                format_decimal(d.rate),
                format_decimal(d.rate_hi),
                format_decimal(d.rate_sigma0),
                optional(d.r_e_sigma0),
                optional(d.r_e_rho_star),
                format_decimal(d.mse_sigma0),
                format_decimal(d.mse_rho_star),
            ]),
            None => rec.extend(std::iter::repeat_n(
                "error".to_string(),
                BENCH_COLUMNS.len() - 3,
            )),
        }
        rec.push(self.seed.to_string());
        rec.push(self.noise_amplitude.to_string());
        rec
    }
}

pub fn write_bench_csv<W: io::Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BENCH_COLUMNS)?;
    for row in rows {
        w.write_record(row.csv_record())?;
    }
    w.flush()?;
    Ok(())
}
