//! Spectra, diagonal states, entropies and Rényi divergences.
//!
//! Conventions: `k_B = 1`, natural logarithms, `beta = 1 / T`.

use std::sync::Arc;

use crate::error::{param, Error, Result};
use crate::numerics::{h2_unchecked, logsumexp};

/// Tolerance on the sum of a probability vector.
pub const NORMALIZATION_TOL: f64 = 1e-12;
/// Largest composite spectrum `compose` will build.
pub const MAX_COMPOSITE_LEVELS: usize = 1 << 22;
/// Finite alphas closer than this to 1 use the relative-entropy branch.
pub const NEAR_ONE: f64 = 1e-6;

/// Energy eigenvalues of a diagonal Hamiltonian, sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySpectrum {
    levels: Vec<f64>,
    label: Option<String>,
}

impl EnergySpectrum {
    pub fn new(mut levels: Vec<f64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(param("spectrum needs at least one level"));
        }
        if levels.iter().any(|e| !e.is_finite()) {
            return Err(param("spectrum levels must be finite"));
        }
        levels.sort_by(f64::total_cmp);
        Ok(Self { levels, label: None })
    }

    /// Two levels `{0, gap}`.
    pub fn qubit(gap: f64) -> Result<Self> {
        if !(gap > 0.0) || !gap.is_finite() {
            return Err(param(format!("qubit gap must be positive, got {gap}")));
        }
        Self::new(vec![0.0, gap])
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.levels[0]
    }

    pub fn max(&self) -> f64 {
        self.levels[self.levels.len() - 1]
    }

    /// `ln Z(beta)`.
    pub fn log_partition(&self, beta: f64) -> f64 {
        let xs: Vec<f64> = self.levels.iter().map(|e| -beta * e).collect();
        logsumexp(&xs)
    }

    /// Exact level equality; labels are ignored.
    pub fn same_levels(&self, other: &Self) -> bool {
        self.levels == other.levels
    }
}

/// A bath of `n` non-interacting qubits with gaps `E_1..E_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitBath {
    gaps: Vec<f64>,
}

impl QubitBath {
    pub fn new(gaps: Vec<f64>) -> Result<Self> {
        if gaps.is_empty() {
            return Err(param("qubit bath needs at least one qubit"));
        }
        if gaps.iter().any(|&e| !(e > 0.0) || !e.is_finite()) {
            return Err(param("every qubit gap must be positive and finite"));
        }
        Ok(Self { gaps })
    }

    pub fn identical(gap: f64, n: usize) -> Result<Self> {
        Self::new(vec![gap; n])
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn n(&self) -> usize {
        self.gaps.len()
    }

    pub fn min_gap(&self) -> f64 {
        self.gaps.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_identical(&self) -> bool {
        self.gaps.iter().all(|&e| e == self.gaps[0])
    }

    /// Thermal state of the whole bath on the composed `2^n`-level spectrum.
    pub fn thermal_state(&self, beta: f64) -> Result<DiagonalState> {
        let parts = self
            .gaps
            .iter()
            .map(|&e| thermal_state(&EnergySpectrum::qubit(e)?, beta))
            .collect::<Result<Vec<_>>>()?;
        compose(&parts)
    }
}

/// Probability vector aligned with an [`EnergySpectrum`].
#[derive(Debug, Clone)]
pub struct DiagonalState {
    probs: Vec<f64>,
    log_probs: Vec<f64>,
    spectrum: Arc<EnergySpectrum>,
}

impl DiagonalState {
    /// `probs[i]` is the weight of `spectrum.levels()[i]`.
    pub fn new(spectrum: Arc<EnergySpectrum>, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != spectrum.len() {
            return Err(param(format!(
                "state has {} entries but spectrum has {} levels",
                probs.len(),
                spectrum.len()
            )));
        }
        if probs.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(param("probabilities must be finite and nonnegative"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(param(format!("probabilities sum to {total}, not 1")));
        }
        let log_probs = probs.iter().map(|p| p.ln()).collect();
        Ok(Self {
            probs,
            log_probs,
            spectrum,
        })
    }

    /// Normalizes nonnegative weights first.
    pub fn from_weights(spectrum: Arc<EnergySpectrum>, weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(param("weights must have a positive finite sum"));
        }
        Self::new(spectrum, weights.iter().map(|w| w / total).collect())
    }

    /// Builds a state from unsorted `(energy, probability)` pairs.
    pub fn from_pairs(mut pairs: Vec<(f64, f64)>) -> Result<Self> {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let spectrum = Arc::new(EnergySpectrum::new(pairs.iter().map(|p| p.0).collect())?);
        Self::new(spectrum, pairs.into_iter().map(|p| p.1).collect())
    }

    /// Point mass on level `index`.
    pub fn pure(spectrum: Arc<EnergySpectrum>, index: usize) -> Result<Self> {
        if index >= spectrum.len() {
            return Err(param("level index out of range"));
        }
        let mut probs = vec![0.0; spectrum.len()];
        probs[index] = 1.0;
        Self::new(spectrum, probs)
    }

    fn from_log_probs(spectrum: Arc<EnergySpectrum>, log_probs: Vec<f64>) -> Self {
        let probs = log_probs.iter().map(|l| l.exp()).collect();
        Self {
            probs,
            log_probs,
            spectrum,
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn log_probs(&self) -> &[f64] {
        &self.log_probs
    }

    pub fn spectrum(&self) -> &EnergySpectrum {
        &self.spectrum
    }

    pub fn spectrum_arc(&self) -> Arc<EnergySpectrum> {
        Arc::clone(&self.spectrum)
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn is_full_rank(&self) -> bool {
        self.probs.iter().all(|&p| p > 0.0)
    }

    pub fn shares_spectrum(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.spectrum, &other.spectrum) || self.spectrum.same_levels(&other.spectrum)
    }

    pub fn mean_energy(&self) -> f64 {
        self.probs
            .iter()
            .zip(self.spectrum.levels())
            .map(|(p, e)| p * e)
            .sum()
    }

    pub fn entropy(&self) -> f64 {
        self.probs
            .iter()
            .zip(&self.log_probs)
            .filter(|(p, _)| **p > 0.0)
            .map(|(p, l)| -p * l)
            .sum()
    }
}

/// `exp(-beta E_i) / Z`, evaluated in the log domain.
pub fn thermal_state(spectrum: &EnergySpectrum, beta: f64) -> Result<DiagonalState> {
    thermal_state_arc(Arc::new(spectrum.clone()), beta)
}

/// As [`thermal_state`] but shares the spectrum allocation.
pub fn thermal_state_arc(spectrum: Arc<EnergySpectrum>, beta: f64) -> Result<DiagonalState> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(param(format!("inverse temperature must be positive, got {beta}")));
    }
    let log_z = spectrum.log_partition(beta);
    let log_probs = spectrum.levels().iter().map(|e| -beta * e - log_z).collect();
    Ok(DiagonalState::from_log_probs(spectrum, log_probs))
}

/// Mean energy, energy variance and von Neumann entropy (nats).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    pub entropy: f64,
}

pub fn state_moments(state: &DiagonalState) -> Moments {
    let mean = state.mean_energy();
    let variance = state
        .probs()
        .iter()
        .zip(state.spectrum().levels())
        .map(|(p, e)| p * (e - mean) * (e - mean))
        .sum();
    Moments {
        mean,
        variance,
        entropy: state.entropy(),
    }
}

/// `-eps ln eps - (1 - eps) ln(1 - eps)`, zero at both endpoints.
pub fn binary_entropy(eps: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(param(format!("eps must lie in [0, 1], got {eps}")));
    }
    Ok(h2_unchecked(eps))
}

/// Order of a Rényi divergence. Finite values exclude 0 and 1, which have tags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaValue {
    Zero,
    Finite(f64),
    One,
    Infinity,
}

impl AlphaValue {
    pub fn finite(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() || alpha == 1.0 {
            return Err(param(format!("finite alpha must be positive and not 1, got {alpha}")));
        }
        Ok(Self::Finite(alpha))
    }

    /// Maps 0, 1 and +inf onto their tags.
    pub fn from_f64(alpha: f64) -> Result<Self> {
        if alpha == 0.0 {
            Ok(Self::Zero)
        } else if alpha == 1.0 {
            Ok(Self::One)
        } else if alpha == f64::INFINITY {
            Ok(Self::Infinity)
        } else {
            Self::finite(alpha)
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Finite(a) => a,
            Self::One => 1.0,
            Self::Infinity => f64::INFINITY,
        }
    }
}

impl std::fmt::Display for AlphaValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Zero => write!(f, "0"),
            Self::Finite(a) => write!(f, "{a}"),
            Self::One => write!(f, "1"),
            Self::Infinity => write!(f, "inf"),
        }
    }
}

/// A divergence value plus whether the near-one expansion was used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Divergence {
    pub value: f64,
    pub near_one: bool,
}

fn check_pair(p: &DiagonalState, q: &DiagonalState) -> Result<()> {
    if !p.shares_spectrum(q) {
        return Err(param("states live on different spectra"));
    }
    if !q.is_full_rank() {
        return Err(Error::Domain("reference state has a zero entry".into()));
    }
    Ok(())
}

fn kl(p: &DiagonalState, q: &DiagonalState) -> f64 {
    p.probs()
        .iter()
        .zip(p.log_probs().iter().zip(q.log_probs()))
        .filter(|(pi, _)| **pi > 0.0)
        .map(|(pi, (lp, lq))| pi * (lp - lq))
        .sum()
}

/// Rényi divergence `D_alpha(p || q)` of diagonal states.
pub fn renyi_divergence(p: &DiagonalState, q: &DiagonalState, alpha: AlphaValue) -> Result<f64> {
    renyi_divergence_detail(p, q, alpha).map(|d| d.value)
}

pub fn renyi_divergence_detail(
    p: &DiagonalState,
    q: &DiagonalState,
    alpha: AlphaValue,
) -> Result<Divergence> {
    check_pair(p, q)?;
    let support = || {
        p.probs()
            .iter()
            .enumerate()
            .filter(|(_, pi)| **pi > 0.0)
            .map(|(i, _)| i)
    };
    let value = match alpha {
        AlphaValue::Zero => {
            if p.is_full_rank() {
                0.0
            } else {
                let xs: Vec<f64> = support().map(|i| q.log_probs()[i]).collect();
                -logsumexp(&xs)
            }
        }
        AlphaValue::One => kl(p, q),
        AlphaValue::Infinity => support()
            .map(|i| p.log_probs()[i] - q.log_probs()[i])
            .fold(f64::NEG_INFINITY, f64::max),
        AlphaValue::Finite(a) if (a - 1.0).abs() < NEAR_ONE => {
            // first-order expansion around 1: D_a ~ KL + (a - 1) Var_p[ln p/q] / 2
            let d1 = kl(p, q);
            let second: f64 = support()
                .map(|i| {
                    let r = p.log_probs()[i] - q.log_probs()[i];
                    p.probs()[i] * r * r
                })
                .sum();
            let var = second - d1 * d1;
            return Ok(Divergence {
                value: d1 + 0.5 * (a - 1.0) * var,
                near_one: true,
            });
        }
        AlphaValue::Finite(a) => {
            let xs: Vec<f64> = support()
                .map(|i| a * p.log_probs()[i] + (1.0 - a) * q.log_probs()[i])
                .collect();
            logsumexp(&xs) / (a - 1.0)
        }
    };
    Ok(Divergence {
        value,
        near_one: false,
    })
}

/// `F_alpha = (D_alpha(rho || tau_h) - ln Z_h) / beta_h`.
pub fn alpha_free_energy(
    rho: &DiagonalState,
    tau_h: &DiagonalState,
    alpha: AlphaValue,
    beta_h: f64,
) -> Result<f64> {
    if !(beta_h > 0.0) {
        return Err(param("beta_h must be positive"));
    }
    let log_z = rho.spectrum().log_partition(beta_h);
    let mismatch = tau_h
        .spectrum()
        .levels()
        .iter()
        .zip(tau_h.log_probs())
        .map(|(e, l)| (l - (-beta_h * e - log_z)).abs())
        .fold(0.0, f64::max);
    if mismatch > 1e-9 {
        return Err(param("reference state is not thermal at beta_h"));
    }
    let d = renyi_divergence(rho, tau_h, alpha)?;
    Ok((d - log_z) / beta_h)
}

/// Tensor product of diagonal states on the product spectrum.
pub fn compose(parts: &[DiagonalState]) -> Result<DiagonalState> {
    if parts.is_empty() {
        return Err(param("compose needs at least one part"));
    }
    if parts.len() == 1 {
        return Ok(parts[0].clone());
    }
    let mut size: usize = 1;
    for part in parts {
        size = size
            .checked_mul(part.len())
            .filter(|&s| s <= MAX_COMPOSITE_LEVELS)
            .ok_or(Error::Capacity {
                levels: parts.iter().map(|s| s.len() as f64).product::<f64>() as usize,
                limit: MAX_COMPOSITE_LEVELS,
            })?;
    }
    let mut levels = vec![0.0];
    let mut log_probs = vec![0.0];
    for part in parts {
        let mut next_levels = Vec::with_capacity(levels.len() * part.len());
        let mut next_logs = Vec::with_capacity(levels.len() * part.len());
        for (e0, l0) in levels.iter().zip(&log_probs) {
            for (e1, l1) in part.spectrum().levels().iter().zip(part.log_probs()) {
                next_levels.push(e0 + e1);
                next_logs.push(l0 + l1);
            }
        }
        levels = next_levels;
        log_probs = next_logs;
    }
    let mut order: Vec<usize> = (0..levels.len()).collect();
    order.sort_by(|&a, &b| levels[a].total_cmp(&levels[b]));
    let spectrum = Arc::new(EnergySpectrum::new(order.iter().map(|&i| levels[i]).collect())?);
    let log_probs = order.iter().map(|&i| log_probs[i]).collect();
    Ok(DiagonalState::from_log_probs(spectrum, log_probs))
}
