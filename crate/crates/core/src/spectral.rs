//! Spectra of the iteration matrices `F_ρ = (D + ρ/2·I)⁻¹(A + ρ/2·I)` and of
//! the normalized Laplacian, plus penalty selection.
//!
//! `F_ρ` is not symmetric, but it is similar to
//! `(2D + ρI)^{-1/2} (2A + ρI) (2D + ρI)^{-1/2}`, which is. All `F`-type
//! spectra are computed from that symmetric form and stored descending
//! (`λ₀ = 1 ≥ λ₁ ≥ … ≥ λ_{n-1}`). Normalized-Laplacian spectra are stored
//! ascending (`0 = λ₀ < λ₁ ≤ … ≤ λ_{n-1} ≤ 2`). With those two orderings the
//! centroid is `(λ₁ + λ_{n-1}) / 2` in both cases, and
//! `λᵢ(𝓛) = 1 − λᵢ(F₀)` index by index.

use serde::Serialize;

use crate::eigen::symmetric_eigenvalues;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::DenseMatrix;

/// Absolute tolerance for eigenvalue comparisons.
pub const EIG_TOL: f64 = 1e-10;

const BRACKET_WIDEN: f64 = 1e-9;
const CENTROID_TOL: f64 = 1e-12;
const RHO_REL_TOL: f64 = 1e-10;
const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpectrumSource {
    FRho { rho: f64 },
    NormalizedLaplacian,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub source: SpectrumSource,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `(λ₁ + λ_{n-1}) / 2` in the ordering of the source.
    pub fn centroid(&self) -> f64 {
        let n = self.values.len();
        0.5 * (self.values[1] + self.values[n - 1])
    }

    pub fn rho(&self) -> Option<f64> {
        match self.source {
            SpectrumSource::FRho { rho } => Some(rho),
            SpectrumSource::NormalizedLaplacian => None,
        }
    }
}

/// The symmetric matrix similar to `F_ρ`.
pub fn symmetrized_f(g: &Graph, rho: f64) -> DenseMatrix {
    let n = g.n();
    let scale: Vec<f64> = (0..n)
        .map(|i| 1.0 / (2.0 * g.degree(i) as f64 + rho).sqrt())
        .collect();
    let mut m = DenseMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = rho * scale[i] * scale[i];
    }
    for (i, j) in g.edges() {
        let w = 2.0 * scale[i] * scale[j];
        m[(i, j)] = w;
        m[(j, i)] = w;
    }
    m
}

fn check_rho(rho: f64) -> Result<()> {
    if rho.is_finite() && rho >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "penalty must be finite and >= 0, got {rho}"
        )))
    }
}

/// Spectrum of `F_ρ`, descending.
pub fn spectrum_f(g: &Graph, rho: f64) -> Result<Spectrum> {
    check_rho(rho)?;
    g.ensure_connected()?;
    let mut values = symmetric_eigenvalues(&symmetrized_f(g, rho))?;
    values.reverse();
    Ok(Spectrum {
        values,
        source: SpectrumSource::FRho { rho },
    })
}

/// Spectrum of the normalized Laplacian, ascending.
pub fn spectrum_normalized_laplacian(g: &Graph) -> Result<Spectrum> {
    g.ensure_connected()?;
    let ops = g.operators()?;
    let values = symmetric_eigenvalues(&ops.normalized_laplacian)?;
    Ok(Spectrum {
        values,
        source: SpectrumSource::NormalizedLaplacian,
    })
}

/// `max(|λ₁|, |λ_{n-1}|)` of an `F_ρ` spectrum.
pub fn convergence_rate(s: &Spectrum) -> Result<f64> {
    if s.rho().is_none() {
        return Err(Error::InvalidParameter(
            "convergence rate is defined on F-type spectra only".into(),
        ));
    }
    let n = s.values.len();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "spectrum has fewer than 2 values".into(),
        ));
    }
    Ok(s.values[1].abs().max(s.values[n - 1].abs()))
}

/// Lower/upper bound for one eigenvalue of `F_ρ` given the matching
/// eigenvalue of `F₀` and the degree extremes.
pub fn bound_pair(lambda_f0: f64, rho: f64, d_min: usize, d_max: usize) -> (f64, f64) {
    let (dm, dmx) = (d_min as f64, d_max as f64);
    let lower = (rho + 2.0 * lambda_f0 * dmx) / (rho + 2.0 * dmx);
    let upper = (rho + 2.0 * lambda_f0 * dm) / (rho + 2.0 * dm);
    (lower, upper)
}

/// Bounds on `λᵢ(F_ρ)` for `i ∈ 1..n`, `ρ > 0`.
pub fn eig_bounds(g: &Graph, rho: f64, i: usize) -> Result<(f64, f64)> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "eigenvalue bounds need rho > 0, got {rho}"
        )));
    }
    if i == 0 || i >= g.n() {
        return Err(Error::InvalidParameter(format!(
            "eigenvalue index {i} outside 1..{}",
            g.n()
        )));
    }
    let f0 = spectrum_f(g, 0.0)?;
    Ok(bound_pair(
        f0.values[i],
        rho,
        g.min_degree(),
        g.max_degree(),
    ))
}

/// Bounds for every index of an `F₀` spectrum (index 0 evaluates to 1).
pub fn all_bounds(f0: &Spectrum, rho: f64, d_min: usize, d_max: usize) -> (Vec<f64>, Vec<f64>) {
    f0.values
        .iter()
        .map(|&l| bound_pair(l, rho, d_min, d_max))
        .unzip()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoMethod {
    /// Centroid of 𝓛 at most 1: plain scheme, ρ⋆ = 0.
    Unpenalized,
    /// Regular graph: ρ⋆ = 2(ς − 1)d.
    ClosedForm,
    Bisection,
}

/// Outcome of penalty optimization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RhoPlan {
    pub lambda1_l: f64,
    pub lambda_max_l: f64,
    pub sigma_l: f64,
    pub rho_star: f64,
    pub bracket_lo: Option<f64>,
    pub bracket_hi: Option<f64>,
    pub rate: f64,
    /// Rate bounds with the eigenvalue bounds evaluated at ρ⋆.
    pub rate_lo: f64,
    pub rate_hi: f64,
    /// Literal a-priori bracket: eigenvalue bounds evaluated at the bracket
    /// ends instead of at ρ⋆.
    pub apriori_rate_lo: Option<f64>,
    pub apriori_rate_hi: Option<f64>,
    pub rate_sigma0: f64,
    pub method: RhoMethod,
}

impl RhoPlan {
    /// `(lo, ρ⋆, hi)` with the collapsed bracket `(ρ⋆, ρ⋆, ρ⋆)` when ρ⋆ = 0.
    pub fn bracket_or_point(&self) -> (f64, f64, f64) {
        (
            self.bracket_lo.unwrap_or(self.rho_star),
            self.rho_star,
            self.bracket_hi.unwrap_or(self.rho_star),
        )
    }
}

fn centroid_at(g: &Graph, rho: f64) -> Result<f64> {
    Ok(spectrum_f(g, rho)?.centroid())
}

/// Root of `ρ ↦ centroid(F_ρ)` inside `[lo, hi]` (widened slightly).
pub fn bisect_rho_plus(g: &Graph, lo: f64, hi: f64) -> Result<f64> {
    let mut a = (lo - BRACKET_WIDEN).max(0.0);
    let mut b = hi + BRACKET_WIDEN;
    let fa = centroid_at(g, a)?;
    let fb = centroid_at(g, b)?;
    if fa.abs() < CENTROID_TOL {
        return Ok(a);
    }
    if fb.abs() < CENTROID_TOL {
        return Ok(b);
    }
    if fa > 0.0 || fb < 0.0 {
        return Err(Error::BracketFailure(format!(
            "centroid has no sign change on [{a}, {b}]: f(a) = {fa:e}, f(b) = {fb:e}"
        )));
    }
    let width_tol = RHO_REL_TOL * hi.max(1.0);
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (a + b);
        let fm = centroid_at(g, mid)?;
        if fm.abs() < CENTROID_TOL {
            return Ok(mid);
        }
        if fm < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
        if b - a < width_tol {
            break;
        }
    }
    Ok(0.5 * (a + b))
}

/// Chooses ρ⋆ and reports the predicted rates.
pub fn rho_star(g: &Graph) -> Result<RhoPlan> {
    g.ensure_connected()?;
    let lap = spectrum_normalized_laplacian(g)?;
    let n = lap.len();
    let (lambda1_l, lambda_max_l) = (lap.values[1], lap.values[n - 1]);
    let sigma_l = lap.centroid();

    let f0 = spectrum_f(g, 0.0)?;
    let rate_sigma0 = convergence_rate(&f0)?;

    if sigma_l <= 1.0 {
        let rate = 1.0 - lambda1_l;
        return Ok(RhoPlan {
            lambda1_l,
            lambda_max_l,
            sigma_l,
            rho_star: 0.0,
            bracket_lo: None,
            bracket_hi: None,
            rate,
            rate_lo: rate,
            rate_hi: rate,
            apriori_rate_lo: None,
            apriori_rate_hi: None,
            rate_sigma0,
            method: RhoMethod::Unpenalized,
        });
    }

    let (d_min, d_max) = (g.min_degree(), g.max_degree());
    let lo = 2.0 * (sigma_l - 1.0) * d_min as f64;
    let hi = 2.0 * (sigma_l - 1.0) * d_max as f64;
    let (rho, method) = if g.is_regular() {
        (lo, RhoMethod::ClosedForm)
    } else {
        (bisect_rho_plus(g, lo, hi)?, RhoMethod::Bisection)
    };
    let rate = convergence_rate(&spectrum_f(g, rho)?)?;

    let l1 = f0.values[1];
    let ln = f0.values[n - 1];
    let rate_bounds = |rho_lower_end: f64, rho_upper_end: f64| {
        let (lb1, _) = bound_pair(l1, rho_lower_end, d_min, d_max);
        let (lbn, _) = bound_pair(ln, rho_lower_end, d_min, d_max);
        let (_, ub1) = bound_pair(l1, rho_upper_end, d_min, d_max);
        let (_, ubn) = bound_pair(ln, rho_upper_end, d_min, d_max);
        let upper = (-lbn).max(ub1);
        let lower = (-ubn.min(0.0)).max(lb1.max(0.0));
        (lower, upper)
    };
    let (rate_lo, rate_hi) = rate_bounds(rho, rho);
    let (apriori_lo, apriori_hi) = rate_bounds(lo, hi);

    Ok(RhoPlan {
        lambda1_l,
        lambda_max_l,
        sigma_l,
        rho_star: rho,
        bracket_lo: Some(lo),
        bracket_hi: Some(hi),
        rate,
        rate_lo,
        rate_hi,
        apriori_rate_lo: Some(apriori_lo),
        apriori_rate_hi: Some(apriori_hi),
        rate_sigma0,
        method,
    })
}
