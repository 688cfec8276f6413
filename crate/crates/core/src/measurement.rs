//! Ground-truth states and noisy relative measurements.

use std::collections::BTreeMap;
use std::io;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::pair_noise;

/// Default half-width of the uniform measurement noise.
pub const DEFAULT_NOISE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TruthMode {
    /// `x_i = i · step`.
    Linear {
        step: f64,
    },
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroundTruth {
    pub values: Vec<f64>,
    pub mode: TruthMode,
}

impl GroundTruth {
    pub fn linear(n: usize, step: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "ground truth needs n >= 2, got {n}"
            )));
        }
        Ok(Self {
            values: (0..n).map(|i| i as f64 * step).collect(),
            mode: TruthMode::Linear { step },
        })
    }

    pub fn custom(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidParameter(
                "ground truth needs at least 2 values".into(),
            ));
        }
        Ok(Self {
            values,
            mode: TruthMode::Custom,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `x̃_ij` for every ordered neighbor pair, plus the per-vertex aggregate
/// `[x̃]_i = Σ_{j∈N_i} (x̃_ji − x̃_ij)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet {
    pub pairwise: BTreeMap<(usize, usize), f64>,
    pub aggregated: Vec<f64>,
    pub noise_amplitude: f64,
    pub seed: u64,
}

impl MeasurementSet {
    /// Wraps externally supplied pairwise values, checking completeness.
    pub fn from_pairwise(
        g: &Graph,
        pairwise: BTreeMap<(usize, usize), f64>,
        noise_amplitude: f64,
        seed: u64,
    ) -> Result<Self> {
        if let Some(&(i, j)) = pairwise
            .keys()
            .find(|&&(i, j)| i >= g.n() || !g.has_edge(i, j))
        {
            return Err(Error::InvalidParameter(format!(
                "measurement for ({i}, {j}) does not correspond to an edge"
            )));
        }
        let aggregated = aggregate(g, &pairwise)?;
        Ok(Self {
            pairwise,
            aggregated,
            noise_amplitude,
            seed,
        })
    }

    /// `x̃_ij`; panics if `(i, j)` is not an ordered edge.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.pairwise[&(i, j)]
    }

    /// Writes `i,j,value` rows, sorted by `(i, j)`.
    pub fn write_csv<W: io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["i", "j", "value"])?;
        for (&(i, j), &v) in &self.pairwise {
            w.write_record([i.to_string(), j.to_string(), v.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    i: usize,
    j: usize,
    value: f64,
}

/// Reads the `i,j,value` CSV layout back into a pairwise map.
pub fn read_pairwise_csv<R: io::Read>(input: R) -> Result<BTreeMap<(usize, usize), f64>> {
    let mut r = csv::Reader::from_reader(input);
    let mut map = BTreeMap::new();
    for row in r.deserialize() {
        let row: CsvRow = row?;
        map.insert((row.i, row.j), row.value);
    }
    Ok(map)
}

pub fn gen_truth(n: usize, mode: TruthMode, custom: Option<Vec<f64>>) -> Result<GroundTruth> {
    match mode {
        TruthMode::Linear { step } => GroundTruth::linear(n, step),
        TruthMode::Custom => {
            let values = custom
                .ok_or_else(|| Error::InvalidParameter("custom truth needs values".into()))?;
            if values.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: values.len(),
                });
            }
            GroundTruth::custom(values)
        }
    }
}

/// `x̃_ij = x_j − x_i + ν_ij`, `ν_ij ~ U[−a, a)` from the pinned per-pair
/// stream. Pairs are enumerated by ascending `i`, then ascending `j`.
pub fn measure(
    g: &Graph,
    truth: &GroundTruth,
    amplitude: f64,
    seed: u64,
) -> Result<MeasurementSet> {
    if truth.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: truth.len(),
        });
    }
    if !(amplitude.is_finite() && amplitude >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "noise amplitude must be finite and >= 0, got {amplitude}"
        )));
    }
    let x = &truth.values;
    let mut pairwise = BTreeMap::new();
    for i in 0..g.n() {
        for &j in g.neighbors(i) {
            let noise = if amplitude == 0.0 {
                0.0
            } else {
                pair_noise(seed, i, j, amplitude)
            };
            pairwise.insert((i, j), x[j] - x[i] + noise);
        }
    }
    let aggregated = aggregate(g, &pairwise)?;
    Ok(MeasurementSet {
        pairwise,
        aggregated,
        noise_amplitude: amplitude,
        seed,
    })
}

pub fn aggregate(g: &Graph, pairwise: &BTreeMap<(usize, usize), f64>) -> Result<Vec<f64>> {
    let lookup = |i: usize, j: usize| {
        pairwise
            .get(&(i, j))
            .copied()
            .ok_or(Error::MissingMeasurement(i, j))
    };
    (0..g.n())
        .map(|i| {
            g.neighbors(i)
                .iter()
                .try_fold(0.0, |acc, &j| Ok(acc + (lookup(j, i)? - lookup(i, j)?)))
        })
        .collect()
}
