//! Centralized least-squares solution and the distributed proximal-point
//! schemes.
//!
//! The distributed path is a synchronous round-based simulation: each agent
//! owns an [`AgentState`] holding only its own estimate, degree and the
//! measurements on its incident edges. Every round all agents broadcast their
//! estimate to their neighbors, then all of them apply [`pp_step`] to what
//! arrived in their inbox. [`matrix_iterate`] realizes the same recursion as
//! `x(k+1) = F_ρ x(k) + u_ρ` and serves as the oracle for the agent code.

use std::collections::BTreeMap;
use std::io;

use serde::Serialize;

use crate::edgelist::graph_digest;
use crate::eigen::symmetric_eigen;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::DenseMatrix;
use crate::measurement::MeasurementSet;
use crate::metrics::cost;

/// Upper bound on recorded rounds.
pub const MAX_ROUNDS: usize = 100_000;
pub const DEFAULT_ROUNDS: usize = 20;

/// `x⋆ = ½ L† x̃`, the minimum-norm minimizer of the cost.
pub fn centralized_solve(g: &Graph, aggregated: &[f64]) -> Result<Vec<f64>> {
    let n = g.n();
    if aggregated.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: aggregated.len(),
        });
    }
    g.ensure_connected()?;
    let eig = symmetric_eigen(&g.operators()?.laplacian)?;
    let lambda_max = eig.values.last().copied().unwrap_or(0.0);
    let cutoff = n as f64 * lambda_max * f64::EPSILON;
    if eig.values.iter().filter(|&&l| l <= cutoff).count() > 1 {
        return Err(Error::Disconnected);
    }
    let mut x = vec![0.0; n];
    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda <= cutoff {
            continue;
        }
        let proj: f64 = (0..n).map(|r| eig.vectors[(r, k)] * aggregated[r]).sum();
        let coef = 0.5 * proj / lambda;
        for (r, xr) in x.iter_mut().enumerate() {
            *xr += coef * eig.vectors[(r, k)];
        }
    }
    Ok(x)
}

/// `F_ρ = (D + ρ/2·I)⁻¹(A + ρ/2·I)` and the gain `½ / (deg(v_i) + ρ/2)` that
/// turns `x̃` into `u_ρ`.
pub fn build_system(g: &Graph, rho: f64) -> Result<(DenseMatrix, Vec<f64>)> {
    check_rho(rho)?;
    g.ensure_connected()?;
    let n = g.n();
    let half = 0.5 * rho;
    let mut f = DenseMatrix::zeros(n, n);
    let mut gain = Vec::with_capacity(n);
    for i in 0..n {
        let denom = g.degree(i) as f64 + half;
        f[(i, i)] = half / denom;
        for &j in g.neighbors(i) {
            f[(i, j)] = 1.0 / denom;
        }
        gain.push(0.5 / denom);
    }
    Ok((f, gain))
}

fn check_rho(rho: f64) -> Result<()> {
    if rho.is_finite() && rho >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "rho must be finite and >= 0, got {rho}"
        )))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    Zeros,
    Given(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeConfig {
    /// Penalty; 0 selects the plain scheme.
    pub rho: f64,
    pub rounds: usize,
    pub initial_state: InitialState,
}

impl SchemeConfig {
    pub fn new(rho: f64, rounds: usize) -> Self {
        Self {
            rho,
            rounds,
            initial_state: InitialState::Zeros,
        }
    }

    pub fn with_initial(mut self, x0: Vec<f64>) -> Self {
        self.initial_state = InitialState::Given(x0);
        self
    }

    fn validate(&self, n: usize) -> Result<Vec<f64>> {
        check_rho(self.rho)?;
        if self.rounds > MAX_ROUNDS {
            return Err(Error::InvalidConfig(format!(
                "rounds = {} exceeds the limit of {MAX_ROUNDS}",
                self.rounds
            )));
        }
        match &self.initial_state {
            InitialState::Zeros => Ok(vec![0.0; n]),
            InitialState::Given(x0) if x0.len() != n => Err(Error::DimensionMismatch {
                expected: n,
                got: x0.len(),
            }),
            InitialState::Given(x0) if x0.iter().any(|v| !v.is_finite()) => Err(
                Error::InvalidConfig("initial state has non-finite entries".into()),
            ),
            InitialState::Given(x0) => Ok(x0.clone()),
        }
    }
}

/// Everything agent `id` knows.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentState {
    pub id: usize,
    pub x: f64,
    /// `j → x̃_ij`, measured by this agent.
    pub own_meas: BTreeMap<usize, f64>,
    /// `j → x̃_ji`, received from neighbor `j` during setup.
    pub reverse_meas: BTreeMap<usize, f64>,
    pub degree: usize,
}

impl AgentState {
    /// `Σ_j (x̃_ji − x̃_ij)` over the agent's neighborhood.
    pub fn correction(&self) -> f64 {
        self.own_meas
            .iter()
            .map(|(j, own)| self.reverse_meas[j] - own)
            .sum()
    }
}

/// One proximal-point update of a single agent:
/// `(ρ x_i + 2 Σ x_j + Σ (x̃_ji − x̃_ij)) / (2 deg + ρ)`.
///
/// `neighbor_values` must be keyed by exactly the agent's neighbors.
pub fn pp_step(
    agent: &AgentState,
    neighbor_values: &BTreeMap<usize, f64>,
    rho: f64,
) -> Result<f64> {
    if let Some(&sender) = neighbor_values
        .keys()
        .find(|j| !agent.own_meas.contains_key(j))
    {
        return Err(Error::UnexpectedSender {
            agent: agent.id,
            sender,
        });
    }
    let mut neighbor_sum = 0.0;
    for &j in agent.own_meas.keys() {
        neighbor_sum += neighbor_values.get(&j).ok_or(Error::MissingNeighbor {
            agent: agent.id,
            neighbor: j,
        })?;
    }
    let numerator = rho * agent.x + 2.0 * neighbor_sum + agent.correction();
    Ok(numerator / (2.0 * agent.degree as f64 + rho))
}

#[derive(Debug, Clone, Copy)]
struct Message {
    from: usize,
    to: usize,
    value: f64,
}

/// Delivers every message to its recipient's inbox.
fn deliver(n: usize, outbox: Vec<Message>) -> Vec<BTreeMap<usize, f64>> {
    let mut inboxes = vec![BTreeMap::new(); n];
    for m in outbox {
        inboxes[m.to].insert(m.from, m.value);
    }
    inboxes
}

/// Creates the agents and runs the one-off exchange that hands every agent
/// the reverse measurements `x̃_ji` of its incident edges.
pub fn setup_agents(g: &Graph, meas: &MeasurementSet, x0: &[f64]) -> Result<Vec<AgentState>> {
    let n = g.n();
    let mut own = Vec::with_capacity(n);
    for i in 0..n {
        let mut m = BTreeMap::new();
        for &j in g.neighbors(i) {
            let v = meas
                .pairwise
                .get(&(i, j))
                .copied()
                .ok_or(Error::MissingMeasurement(i, j))?;
            m.insert(j, v);
        }
        own.push(m);
    }
    let outbox = own
        .iter()
        .enumerate()
        .flat_map(|(i, m)| {
            m.iter().map(move |(&j, &v)| Message {
                from: i,
                to: j,
                value: v,
            })
        })
        .collect();
    let received = deliver(n, outbox);
    Ok(own
        .into_iter()
        .zip(received)
        .enumerate()
        .map(|(i, (own_meas, reverse_meas))| AgentState {
            id: i,
            x: x0[i],
            degree: own_meas.len(),
            own_meas,
            reverse_meas,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Gauge {
    /// Subtract the first component from every entry.
    #[default]
    SubtractFirst,
    /// Subtract the mean.
    ZeroMean,
}

/// `(x − x₀·1) − (ref − ref₀·1)`.
pub fn gauge_align(x: &[f64], reference: &[f64]) -> Vec<f64> {
    gauge_align_with(x, reference, Gauge::SubtractFirst)
}

pub fn gauge_align_with(x: &[f64], reference: &[f64], gauge: Gauge) -> Vec<f64> {
    assert_eq!(x.len(), reference.len(), "gauge_align: length mismatch");
    let (sx, sr) = match gauge {
        Gauge::SubtractFirst => (x[0], reference[0]),
        Gauge::ZeroMean => {
            let n = x.len() as f64;
            (x.iter().sum::<f64>() / n, reference.iter().sum::<f64>() / n)
        }
    };
    x.iter()
        .zip(reference)
        .map(|(a, b)| (a - sx) - (b - sr))
        .collect()
}

/// Per-round estimates of all agents.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Row `k` is `x(k)`; `rounds + 1` rows.
    pub states: Vec<Vec<f64>>,
    pub rho: f64,
    pub centralized_ref: Vec<f64>,
    pub gauge: Gauge,
}

impl Trajectory {
    pub fn rounds(&self) -> usize {
        self.states.len() - 1
    }

    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("trajectory has an initial row")
    }

    pub fn aligned_error(&self, k: usize) -> Vec<f64> {
        gauge_align_with(&self.states[k], &self.centralized_ref, self.gauge)
    }

    /// `‖x(k) − x⋆‖₂` after gauge alignment, for every recorded round.
    pub fn error_norms(&self) -> Vec<f64> {
        (0..self.states.len())
            .map(|k| {
                self.aligned_error(k)
                    .iter()
                    .map(|e| e * e)
                    .sum::<f64>()
                    .sqrt()
            })
            .collect()
    }

    /// Header `k,x_0,…,x_{n-1}`, one row per round.
    pub fn write_csv<W: io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let n = self.centralized_ref.len();
        let mut header = vec!["k".to_string()];
        header.extend((0..n).map(|i| format!("x_{i}")));
        w.write_record(&header)?;
        for (k, row) in self.states.iter().enumerate() {
            let mut rec = vec![k.to_string()];
            rec.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn sidecar(&self, g: &Graph, meas: &MeasurementSet) -> TrajectorySidecar {
        TrajectorySidecar {
            rho: self.rho,
            seed: meas.seed,
            noise_amplitude: meas.noise_amplitude,
            graph_digest: graph_digest(g),
            rounds: self.rounds(),
            gauge: self.gauge,
        }
    }
}

/// Metadata written next to an exported trajectory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectorySidecar {
    pub rho: f64,
    pub seed: u64,
    pub noise_amplitude: f64,
    pub graph_digest: String,
    pub rounds: usize,
    pub gauge: Gauge,
}

/// Runs the scheme as a synchronous message-passing simulation.
pub fn run_scheme(g: &Graph, meas: &MeasurementSet, cfg: &SchemeConfig) -> Result<Trajectory> {
    g.ensure_connected()?;
    let x0 = cfg.validate(g.n())?;
    let centralized_ref = centralized_solve(g, &meas.aggregated)?;
    let mut agents = setup_agents(g, meas, &x0)?;
    let n = agents.len();

    let mut states = Vec::with_capacity(cfg.rounds + 1);
    states.push(x0);
    for _ in 0..cfg.rounds {
        let outbox = agents
            .iter()
            .flat_map(|a| {
                a.own_meas.keys().map(move |&j| Message {
                    from: a.id,
                    to: j,
                    value: a.x,
                })
            })
            .collect();
        let inboxes = deliver(n, outbox);
        let next = agents
            .iter()
            .zip(&inboxes)
            .map(|(a, inbox)| pp_step(a, inbox, cfg.rho))
            .collect::<Result<Vec<f64>>>()?;
        for (a, &x) in agents.iter_mut().zip(&next) {
            a.x = x;
        }
        states.push(next);
    }
    Ok(Trajectory {
        states,
        rho: cfg.rho,
        centralized_ref,
        gauge: Gauge::SubtractFirst,
    })
}

/// Dense global recursion `x(k+1) = F_ρ x(k) + u_ρ`.
pub fn matrix_iterate(g: &Graph, meas: &MeasurementSet, cfg: &SchemeConfig) -> Result<Trajectory> {
    g.ensure_connected()?;
    let x0 = cfg.validate(g.n())?;
    if meas.aggregated.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: meas.aggregated.len(),
        });
    }
    let centralized_ref = centralized_solve(g, &meas.aggregated)?;
    let (f, gain) = build_system(g, cfg.rho)?;
    let u: Vec<f64> = gain
        .iter()
        .zip(&meas.aggregated)
        .map(|(a, b)| a * b)
        .collect();

    let mut states = Vec::with_capacity(cfg.rounds + 1);
    states.push(x0);
    for k in 0..cfg.rounds {
        let fx = f.mul_vec(&states[k])?;
        states.push(fx.iter().zip(&u).map(|(a, b)| a + b).collect());
    }
    Ok(Trajectory {
        states,
        rho: cfg.rho,
        centralized_ref,
        gauge: Gauge::SubtractFirst,
    })
}

/// `h(x_next) + ρ/2 ‖x_next − x_prev‖²`.
pub fn regularized_objective(
    x_next: &[f64],
    x_prev: &[f64],
    g: &Graph,
    meas: &MeasurementSet,
    rho: f64,
) -> Result<f64> {
    if x_prev.len() != x_next.len() {
        return Err(Error::DimensionMismatch {
            expected: x_next.len(),
            got: x_prev.len(),
        });
    }
    let anchor: f64 = x_next
        .iter()
        .zip(x_prev)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(cost(g, meas, x_next)? + 0.5 * rho * anchor)
}

/// `[∇h]_i = 2 deg(v_i) x_i − 2 Σ_j x_j − Σ_j (x̃_ji − x̃_ij)`.
pub fn cost_gradient(g: &Graph, meas: &MeasurementSet, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != g.n() || meas.aggregated.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: x.len(),
        });
    }
    Ok((0..g.n())
        .map(|i| {
            let nsum: f64 = g.neighbors(i).iter().map(|&j| x[j]).sum();
            2.0 * g.degree(i) as f64 * x[i] - 2.0 * nsum - meas.aggregated[i]
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, star};
    use crate::measurement::{measure, GroundTruth};

    fn path3() -> Graph {
        Graph::new(3, [(0, 1), (1, 2)]).unwrap()
    }

    fn agent(x: f64, neighbors: &[usize], correction_pairs: &[(f64, f64)]) -> AgentState {
        let own_meas = neighbors
            .iter()
            .zip(correction_pairs)
            .map(|(&j, p)| (j, p.0))
            .collect();
        let reverse_meas = neighbors
            .iter()
            .zip(correction_pairs)
            .map(|(&j, p)| (j, p.1))
            .collect();
        AgentState {
            id: 99,
            x,
            own_meas,
            reverse_meas,
            degree: neighbors.len(),
        }
    }

    #[test]
    fn centralized_path_example() {
        let x = centralized_solve(&path3(), &[-2.0, 0.0, 2.0]).unwrap();
        for (got, want) in x.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        let zero = centralized_solve(&path3(), &[0.0; 3]).unwrap();
        assert!(zero.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn centralized_recovers_centered_truth() {
        let g = star(7).unwrap();
        let t = GroundTruth::custom(vec![3.0, -1.0, 4.0, 1.5, -9.0, 2.0, 6.0]).unwrap();
        let m = measure(&g, &t, 0.0, 0).unwrap();
        let x = centralized_solve(&g, &m.aggregated).unwrap();
        let mean = t.values.iter().sum::<f64>() / 7.0;
        for (xi, ti) in x.iter().zip(&t.values) {
            assert!((xi - (ti - mean)).abs() < 1e-9);
        }
        assert!(centralized_solve(&g, &[0.0; 3]).is_err());
    }

    #[test]
    fn centralized_rejects_disconnected() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            centralized_solve(&g, &[0.0; 4]),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn system_matrices() {
        let k2 = complete(2).unwrap();
        let (f, gain) = build_system(&k2, 0.0).unwrap();
        assert_eq!(f.entries(), &[0.0, 1.0, 1.0, 0.0]);
        assert_eq!(gain, vec![0.5, 0.5]);
        let (f, _) = build_system(&k2, 2.0).unwrap();
        assert_eq!(f.entries(), &[0.5, 0.5, 0.5, 0.5]);
        let (f, _) = build_system(&star(9).unwrap(), 3.7).unwrap();
        assert!(f.row_sums().iter().all(|s| (s - 1.0).abs() < 1e-12));
    }

    #[test]
    fn pp_step_examples() {
        let a = agent(0.0, &[4], &[(0.25, 0.25)]);
        let vals = BTreeMap::from([(4, 5.0)]);
        assert_eq!(pp_step(&a, &vals, 0.0).unwrap(), 5.0);

        let a = agent(1.0, &[2, 3], &[(0.0, 0.0), (0.0, 0.0)]);
        let vals = BTreeMap::from([(2, 2.0), (3, 4.0)]);
        assert!((pp_step(&a, &vals, 2.0).unwrap() - 7.0 / 3.0).abs() < 1e-15);

        let a = agent(1.0, &[4], &[(0.0, 0.0)]);
        let vals = BTreeMap::from([(4, 5.0)]);
        assert!((pp_step(&a, &vals, 1e9).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn pp_step_rejects_bad_inbox() {
        let a = agent(0.0, &[1, 2], &[(0.0, 0.0), (0.0, 0.0)]);
        let missing = BTreeMap::from([(1, 1.0)]);
        assert!(matches!(
            pp_step(&a, &missing, 0.0),
            Err(Error::MissingNeighbor { neighbor: 2, .. })
        ));
        let extra = BTreeMap::from([(1, 1.0), (2, 1.0), (5, 1.0)]);
        assert!(matches!(
            pp_step(&a, &extra, 0.0),
            Err(Error::UnexpectedSender { sender: 5, .. })
        ));
    }

    #[test]
    fn gauge_examples() {
        let r = [1.0, 3.0, -2.0];
        let shifted: Vec<f64> = r.iter().map(|v| v + 7.0).collect();
        assert!(gauge_align(&shifted, &r).iter().all(|v| *v == 0.0));
        assert!(gauge_align(&r, &r).iter().all(|v| *v == 0.0));
        assert_eq!(gauge_align(&[0.0, 1.0], &[1.0, 3.0]), vec![0.0, -1.0]);
        let zm = gauge_align_with(&[0.0, 1.0], &[1.0, 3.0], Gauge::ZeroMean);
        assert_eq!(zm, vec![0.5, -0.5]);
    }

    #[test]
    fn zero_rounds_keeps_initial_row() {
        let g = path3();
        let m = measure(&g, &GroundTruth::linear(3, 1.0).unwrap(), 0.1, 1).unwrap();
        let cfg = SchemeConfig::new(0.5, 0).with_initial(vec![1.0, 2.0, 3.0]);
        let t = run_scheme(&g, &m, &cfg).unwrap();
        assert_eq!(t.states, vec![vec![1.0, 2.0, 3.0]]);
        assert_eq!(t.rounds(), 0);
    }

    #[test]
    fn config_validation() {
        let g = path3();
        let m = measure(&g, &GroundTruth::linear(3, 1.0).unwrap(), 0.1, 1).unwrap();
        assert!(run_scheme(&g, &m, &SchemeConfig::new(-1.0, 3)).is_err());
        assert!(run_scheme(&g, &m, &SchemeConfig::new(0.0, MAX_ROUNDS + 1)).is_err());
        let bad = SchemeConfig::new(0.0, 3).with_initial(vec![0.0; 2]);
        assert!(matches!(
            run_scheme(&g, &m, &bad),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn shifted_optimum_is_a_fixed_point() {
        let g = complete(5).unwrap();
        let m = measure(&g, &GroundTruth::linear(5, 1.0).unwrap(), 0.1, 3).unwrap();
        let xs = centralized_solve(&g, &m.aggregated).unwrap();
        let start: Vec<f64> = xs.iter().map(|v| v + 4.0).collect();
        for rho in [0.0, 1.5] {
            let t = matrix_iterate(
                &g,
                &m,
                &SchemeConfig::new(rho, 10).with_initial(start.clone()),
            )
            .unwrap();
            for row in &t.states {
                for (a, b) in row.iter().zip(&start) {
                    assert!((a - b).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn objective_examples() {
        let g = path3();
        let t = GroundTruth::linear(3, 1.0).unwrap();
        let m = measure(&g, &t, 0.0, 0).unwrap();
        assert_eq!(
            regularized_objective(&t.values, &t.values, &g, &m, 3.0).unwrap(),
            0.0
        );
        let x = [0.5, -1.0, 2.0];
        let h = cost(&g, &m, &x).unwrap();
        assert_eq!(
            regularized_objective(&x, &t.values, &g, &m, 0.0).unwrap(),
            h
        );
    }

    #[test]
    fn gradient_vanishes_at_optimum() {
        let g = star(6).unwrap();
        let m = measure(&g, &GroundTruth::linear(6, 1.0).unwrap(), 0.1, 5).unwrap();
        let xs = centralized_solve(&g, &m.aggregated).unwrap();
        assert!(cost_gradient(&g, &m, &xs)
            .unwrap()
            .iter()
            .all(|v| v.abs() < 1e-8));
    }

    #[test]
    fn trajectory_csv_layout() {
        let g = path3();
        let m = measure(&g, &GroundTruth::linear(3, 1.0).unwrap(), 0.0, 0).unwrap();
        let t = run_scheme(&g, &m, &SchemeConfig::new(1.0, 2)).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "k,x_0,x_1,x_2");
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1], "0,0,0,0");
        let side = t.sidecar(&g, &m);
        assert_eq!(side.rho, 1.0);
        assert_eq!(side.graph_digest.len(), 64);
    }
}
