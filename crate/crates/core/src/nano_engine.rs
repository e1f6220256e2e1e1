//! Quasi-static analysis of qubit cold baths: `B_alpha`, `gamma(alpha)`,
//! Omega, the sign structure of `G(alpha)`, failure-probability families and
//! the predicted versus numerically solved work and efficiency.
//!
//! Alphas are plain `f64` here; `f64::INFINITY` selects the limit value.

use std::sync::Arc;

use crate::error::{param, Error, Result};
use crate::macro_engine::{carnot, efficiency_breakdown};
use crate::numerics::{bisect, h2_unchecked, log_diff_exp, logaddexp, logspace, softplus};
use crate::second_laws::{max_extractable_work, BatterySpec, TransitionInstance};
use crate::thermo_core::{
    thermal_state, thermal_state_arc, AlphaValue, EnergySpectrum, QubitBath, NEAR_ONE,
};

/// Largest bath composed level by level; bigger identical baths use additivity.
pub const MAX_COMPOSED_QUBITS: usize = 10;
/// Grid size for the dichotomy search.
pub const DICHOTOMY_GRID: usize = 10_000;
/// Interior minima must undercut both endpoints by more than this to count.
pub const DICHOTOMY_TOL: f64 = 1e-9;
/// Frozen constant of the prediction band `C (g + eps + eps^kappa / g)`.
pub const BAND_CONSTANT: f64 = 0.05;
/// Depth at which the log-log slope estimator probes a family.
pub const KAPPA_PROBE_G: f64 = 1e-40;

fn check_temps(e: f64, beta_c: f64, beta_h: f64) -> Result<()> {
    if !(e > 0.0) || !e.is_finite() {
        return Err(param(format!("gap must be positive, got {e}")));
    }
    if !(beta_h > 0.0) || !(beta_c > beta_h) || !beta_c.is_finite() {
        return Err(param("need beta_c > beta_h > 0"));
    }
    Ok(())
}

/// `ln |e^hi - e^lo|` and the sign of `alpha - 1`, plus `ln` of the denominator.
fn b_parts(e: f64, beta_c: f64, beta_h: f64, a: f64) -> (f64, f64, f64, f64) {
    let hi = (beta_h + a * beta_c) * e;
    let lo = (beta_c + a * beta_h) * e;
    let a1 = a * beta_h * e;
    let sign = if a > 1.0 { 1.0 } else { -1.0 };
    let log_num = if hi >= lo { log_diff_exp(hi, lo) } else { log_diff_exp(lo, hi) };
    let log_den = logaddexp(a1, hi);
    (sign, log_num, log_den, hi + a1)
}

/// Qubit `B_alpha` in closed form, evaluated in the log domain.
pub fn b_alpha(e: f64, beta_c: f64, beta_h: f64, alpha: f64) -> Result<f64> {
    check_temps(e, beta_c, beta_h)?;
    if !(alpha > 0.0) {
        return Err(param("alpha must be positive"));
    }
    let log_k = e.ln() - softplus(beta_c * e);
    if alpha == f64::INFINITY {
        return Ok(log_k.exp());
    }
    if alpha == 1.0 {
        return Ok(0.0);
    }
    let (sign, log_num, log_den, _) = b_parts(e, beta_c, beta_h, alpha);
    Ok(sign * (log_k + log_num - log_den).exp())
}

/// `B_alpha = sum w_i (<H>_c - E_i) / sum w_i` with `w_i = p_i^alpha q_i^(1-alpha)`.
pub fn b_alpha_spectrum(spectrum: &EnergySpectrum, beta_c: f64, beta_h: f64, alpha: f64) -> Result<f64> {
    let p = thermal_state(spectrum, beta_c)?;
    let q = thermal_state(spectrum, beta_h)?;
    let mean = p.mean_energy();
    let logs: Vec<f64> = p
        .log_probs()
        .iter()
        .zip(q.log_probs())
        .map(|(lp, lq)| alpha * lp + (1.0 - alpha) * lq)
        .collect();
    let m = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logs.iter().map(|l| (l - m).exp()).collect();
    let total: f64 = w.iter().sum();
    Ok(w
        .iter()
        .zip(spectrum.levels())
        .map(|(wi, ei)| wi * (mean - ei))
        .sum::<f64>()
        / total)
}

/// `dB_alpha / d alpha`, positive whenever `beta_c > beta_h`.
pub fn b_alpha_prime(e: f64, beta_c: f64, beta_h: f64, alpha: f64) -> Result<f64> {
    check_temps(e, beta_c, beta_h)?;
    if alpha == f64::INFINITY {
        return Ok(0.0);
    }
    let a1 = alpha * beta_h * e;
    let hi = (beta_h + alpha * beta_c) * e;
    let log_den = logaddexp(a1, hi);
    Ok((2.0 * e.ln() + (beta_c - beta_h).ln() + hi + a1 - 2.0 * log_den).exp())
}

/// `gamma(alpha) = alpha B_alpha / (alpha - 1)` with its limits at 1 and infinity.
pub fn gamma(e: f64, beta_c: f64, beta_h: f64, alpha: f64) -> Result<f64> {
    check_temps(e, beta_c, beta_h)?;
    if !(alpha > 0.0) {
        return Err(param("alpha must be positive"));
    }
    if alpha == f64::INFINITY {
        return b_alpha(e, beta_c, beta_h, alpha);
    }
    if alpha == 1.0 {
        return Ok(gamma_one(e, beta_c, beta_h));
    }
    if (alpha - 1.0).abs() < NEAR_ONE {
        // B vanishes at 1; midpoint slope keeps second-order accuracy
        return Ok(alpha * b_alpha_prime(e, beta_c, beta_h, 0.5 * (1.0 + alpha))?);
    }
    Ok(alpha * b_alpha(e, beta_c, beta_h, alpha)? / (alpha - 1.0))
}

/// `(beta_c - beta_h) var_{beta_c}(H)` for a qubit.
pub fn gamma_one(e: f64, beta_c: f64, beta_h: f64) -> f64 {
    let x = beta_c * e;
    // e^x / (1 + e^x)^2 = exp(x - 2 softplus(x))
    e * e * (beta_c - beta_h) * (x - 2.0 * softplus(x)).exp()
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaProfile {
    pub e: f64,
    pub beta_c: f64,
    pub beta_h: f64,
    pub gamma_1: f64,
    pub gamma_inf: f64,
    pub samples: Vec<(f64, f64)>,
}

pub fn gamma_profile(e: f64, beta_c: f64, beta_h: f64) -> Result<GammaProfile> {
    check_temps(e, beta_c, beta_h)?;
    let samples = logspace(1e-3, 1e3, 200)
        .into_iter()
        .map(|a| gamma(e, beta_c, beta_h, a).map(|g| (a, g)))
        .collect::<Result<Vec<_>>>()?;
    Ok(GammaProfile {
        e,
        beta_c,
        beta_h,
        gamma_1: gamma_one(e, beta_c, beta_h),
        gamma_inf: gamma(e, beta_c, beta_h, f64::INFINITY)?,
        samples,
    })
}

/// `E (beta_c - beta_h) / (1 + e^{-beta_c E})` for one gap.
pub fn omega_single(e: f64, beta_c: f64, beta_h: f64) -> f64 {
    e * (beta_c - beta_h) * (-softplus(-beta_c * e)).exp()
}

/// Minimum of the per-qubit Omega over the bath.
pub fn omega(bath: &QubitBath, beta_c: f64, beta_h: f64) -> Result<f64> {
    check_temps(bath.min_gap(), beta_c, beta_h)?;
    let min = bath
        .gaps()
        .iter()
        .map(|&e| omega_single(e, beta_c, beta_h))
        .fold(f64::INFINITY, f64::min);
    // Omega increases with the gap, so the minimum sits at the smallest gap
    debug_assert_eq!(min, omega_single(bath.min_gap(), beta_c, beta_h));
    Ok(min)
}

/// `G(alpha) = alpha (alpha - 1) - B_alpha / B'_alpha`.
pub fn g_function(e: f64, beta_c: f64, beta_h: f64, alpha: f64) -> f64 {
    if alpha == 1.0 {
        return 0.0;
    }
    let (sign, log_num, log_den, hi_a1) = b_parts(e, beta_c, beta_h, alpha);
    let log_k = e.ln() - softplus(beta_c * e);
    let log_ratio = log_k + log_num + log_den - 2.0 * e.ln() - (beta_c - beta_h).ln() - hi_a1;
    alpha * (alpha - 1.0) - sign * log_ratio.exp()
}

/// `G'(alpha) = 2 alpha - 1 - cosh(w E) / cosh(beta_c E / 2)`.
pub fn g_prime(e: f64, beta_c: f64, beta_h: f64, alpha: f64) -> f64 {
    let w = (beta_c - beta_h) * alpha + beta_h - beta_c / 2.0;
    2.0 * alpha - 1.0 - cosh_ratio(w * e, beta_c * e / 2.0)
}

fn cosh_ratio(x: f64, y: f64) -> f64 {
    let (x, y) = (x.abs(), y.abs());
    // cosh(x)/cosh(y) = e^{x-y} (1 + e^{-2x}) / (1 + e^{-2y})
    (x - y + (-2.0 * x).exp().ln_1p() - (-2.0 * y).exp().ln_1p()).exp()
}

/// `E (beta_c - beta_h) tanh(beta_c E / 2)`.
pub fn tanh_indicator(e: f64, beta_c: f64, beta_h: f64) -> f64 {
    e * (beta_c - beta_h) * (beta_c * e / 2.0).tanh()
}

/// Sign structure of `G` on `(0, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GCase {
    /// Indicator above 2: `G < 0` on `(tau, 1)` and `(1, inf)`.
    Gt2,
    /// Indicator below 2: `G > 0` on `(0, 1)` and `(1, alpha_bar)`, negative beyond.
    Lt2,
    /// Indicator equal to 2: `G > 0` on `(0, 1)`, negative on `(1, inf)`.
    Eq2,
}

impl GCase {
    pub fn label(self) -> &'static str {
        match self {
            Self::Gt2 => "CASE_GT2",
            Self::Lt2 => "CASE_LT2",
            Self::Eq2 => "CASE_EQ2",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeClassification {
    pub omega: f64,
    pub tanh_indicator: f64,
    pub g_case: GCase,
    pub carnot_achievable: bool,
    pub eta_quasistatic: f64,
    pub eta_carnot: f64,
    pub gamma_1: f64,
    pub gamma_inf: f64,
    /// Sign changes of `G` on `[1e-3, 1e3]`, excluding the double root at 1.
    pub g_roots: Vec<f64>,
    pub g_pattern_consistent: bool,
}

/// `(1 + beta_h / (beta_c - beta_h) max(1, omega))^-1`.
pub fn eta_quasistatic(omega: f64, beta_c: f64, beta_h: f64) -> f64 {
    1.0 / (1.0 + beta_h / (beta_c - beta_h) * omega.max(1.0))
}

pub fn classify_regime(e: f64, beta_c: f64, beta_h: f64) -> Result<RegimeClassification> {
    check_temps(e, beta_c, beta_h)?;
    let om = omega_single(e, beta_c, beta_h);
    let ind = tanh_indicator(e, beta_c, beta_h);
    let g_case = if ind > 2.0 {
        GCase::Gt2
    } else if ind < 2.0 {
        GCase::Lt2
    } else {
        GCase::Eq2
    };
    let g = |a: f64| g_function(e, beta_c, beta_h, a);
    let grid = logspace(1e-3, 1e3, 2000);
    let mut roots = Vec::new();
    for pair in grid.windows(2) {
        let (ga, gb) = (g(pair[0]), g(pair[1]));
        if ga.signum() != gb.signum() && ga != 0.0 && gb != 0.0 {
            if let Some(r) = bisect(g, pair[0], pair[1], 100) {
                roots.push(r);
            }
        }
    }
    let near_one = |r: f64| (r - 1.0).abs() <= 1e-7;
    let consistent = match roots.as_slice() {
        [] => match g_case {
            GCase::Gt2 => g(1e-3) < 0.0 && g(1e3) < 0.0,
            GCase::Lt2 => g(1e-3) > 0.0 && g(1e3) > 0.0,
            GCase::Eq2 => false,
        },
        [r] => match g_case {
            GCase::Gt2 => *r < 1.0 || near_one(*r),
            GCase::Lt2 => *r > 1.0 || near_one(*r),
            GCase::Eq2 => near_one(*r),
        },
        _ => false,
    };
    let eta_c = carnot(beta_c, beta_h);
    Ok(RegimeClassification {
        omega: om,
        tanh_indicator: ind,
        g_case,
        carnot_achievable: om <= 1.0,
        eta_quasistatic: eta_quasistatic(om, beta_c, beta_h),
        eta_carnot: eta_c,
        gamma_1: gamma_one(e, beta_c, beta_h),
        gamma_inf: gamma(e, beta_c, beta_h, f64::INFINITY)?,
        g_roots: roots,
        g_pattern_consistent: consistent,
    })
}

/// How the failure probability vanishes with `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsilonFamily {
    /// `exp(-1/g)`
    Exponential,
    /// `g ln(1/g)`
    LogLinear,
    /// `c g^(1/k)`
    Power { c: f64, k: f64 },
}

impl EpsilonFamily {
    pub fn power(c: f64, k: f64) -> Result<Self> {
        if !(c > 0.0) || !(k > 0.0) || !c.is_finite() || !k.is_finite() {
            return Err(param("power family needs c > 0 and k > 0"));
        }
        Ok(Self::Power { c, k })
    }

    /// `ln eps(g)`, valid far below the underflow threshold of `eps`.
    pub fn ln_eps(&self, g: f64) -> f64 {
        match *self {
            Self::Exponential => -1.0 / g,
            Self::LogLinear => g.ln() + (-g.ln()).ln(),
            Self::Power { c, k } => c.ln() + g.ln() / k,
        }
    }

    pub fn eps(&self, g: f64) -> Result<f64> {
        if !(g > 0.0) || !g.is_finite() {
            return Err(Error::Range(format!("g must be positive, got {g}")));
        }
        if matches!(self, Self::LogLinear) && g >= 1.0 {
            return Err(Error::Range(format!("g ln(1/g) is not a probability at g = {g}")));
        }
        let eps = self.ln_eps(g).exp();
        if !(eps < 1.0) {
            return Err(Error::Range(format!("eps(g = {g}) = {eps} is not below 1")));
        }
        Ok(eps)
    }

    pub fn kappa_bar(&self) -> f64 {
        match *self {
            Self::Exponential => 0.0,
            Self::LogLinear => 1.0,
            Self::Power { k, .. } => k,
        }
    }

    /// `lim eps^kappa_bar / g`; `None` stands for an infinite limit.
    pub fn sigma(&self) -> Option<f64> {
        match *self {
            Self::Exponential | Self::LogLinear => None,
            Self::Power { c, k } => Some(c.powf(k)),
        }
    }

    /// Whether `eps ln(eps) / g` vanishes as `g -> 0`.
    pub fn near_perfect(&self) -> bool {
        match *self {
            Self::Exponential => true,
            Self::LogLinear => false,
            Self::Power { k, .. } => k < 1.0,
        }
    }

    pub fn name(&self) -> String {
        match *self {
            Self::Exponential => "exponential".into(),
            Self::LogLinear => "log-linear".into(),
            Self::Power { c, k } => format!("power(c={c},k={k})"),
        }
    }
}

/// Inverse of the log-log slope of `eps(g)` over `[g, 10 g]`.
pub fn estimate_kappa_bar(family: &EpsilonFamily, g: f64) -> f64 {
    let slope = (family.ln_eps(10.0 * g) - family.ln_eps(g)) / std::f64::consts::LN_10;
    1.0 / slope
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonEval {
    pub eps: f64,
    pub kappa_bar: f64,
    pub sigma: Option<f64>,
    pub kappa_bar_numeric: f64,
}

pub fn epsilon_family_eval(family: &EpsilonFamily, g: f64) -> Result<EpsilonEval> {
    Ok(EpsilonEval {
        eps: family.eps(g)?,
        kappa_bar: family.kappa_bar(),
        sigma: family.sigma(),
        kappa_bar_numeric: estimate_kappa_bar(family, KAPPA_PROBE_G),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfimumEndpoint {
    Kappa,
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfimumLocation {
    pub endpoint: InfimumEndpoint,
    pub gamma_kappa: f64,
    /// `gamma` at the top of the grid.
    pub gamma_tail: f64,
    pub gamma_inf: f64,
    pub interior_min: f64,
}

impl InfimumLocation {
    pub fn as_alpha(&self, kappa_bar: f64) -> AlphaValue {
        match self.endpoint {
            InfimumEndpoint::Infinity => AlphaValue::Infinity,
            InfimumEndpoint::Kappa => AlphaValue::from_f64(kappa_bar).unwrap_or(AlphaValue::One),
        }
    }
}

/// Where `gamma` is smallest on `[kappa_bar, alpha_max]`, checked on a dense grid.
pub fn infimum_location(e: f64, beta_c: f64, beta_h: f64, kappa_bar: f64, alpha_max: f64) -> Result<InfimumLocation> {
    infimum_location_on(e, beta_c, beta_h, kappa_bar, alpha_max, DICHOTOMY_GRID)
}

fn infimum_location_on(
    e: f64,
    beta_c: f64,
    beta_h: f64,
    kappa_bar: f64,
    alpha_max: f64,
    points: usize,
) -> Result<InfimumLocation> {
    check_temps(e, beta_c, beta_h)?;
    if !(kappa_bar > 0.0 && kappa_bar < 1.0) {
        return Err(param(format!("kappa_bar must lie in (0, 1), got {kappa_bar}")));
    }
    if !(alpha_max > 1.0) {
        return Err(param("alpha_max must exceed 1"));
    }
    let grid = logspace(kappa_bar, alpha_max, points);
    let vals = grid
        .iter()
        .map(|&a| gamma(e, beta_c, beta_h, a))
        .collect::<Result<Vec<_>>>()?;
    let (first, last) = (vals[0], vals[vals.len() - 1]);
    let (mut interior_min, mut arg) = (f64::INFINITY, 1.0);
    for (a, v) in grid[1..points - 1].iter().zip(&vals[1..points - 1]) {
        if *v < interior_min {
            interior_min = *v;
            arg = *a;
        }
    }
    if interior_min < first.min(last) - DICHOTOMY_TOL {
        return Err(Error::DichotomyViolation {
            alpha: arg,
            interior: interior_min,
            at_kappa: first,
            at_infinity: last,
        });
    }
    Ok(InfimumLocation {
        endpoint: if first <= last {
            InfimumEndpoint::Kappa
        } else {
            InfimumEndpoint::Infinity
        },
        gamma_kappa: first,
        gamma_tail: last,
        gamma_inf: gamma(e, beta_c, beta_h, f64::INFINITY)?,
        interior_min,
    })
}

/// Largest sampled `kappa < 1` where the dichotomy fails, if any.
pub fn estimate_nu(e: f64, beta_c: f64, beta_h: f64) -> Result<Option<f64>> {
    for i in (1..100).rev() {
        let kappa = i as f64 / 100.0;
        match infimum_location_on(e, beta_c, beta_h, kappa, 1e3, 2000) {
            Ok(_) => continue,
            Err(Error::DichotomyViolation { .. }) => return Ok(Some(kappa)),
            Err(other) => return Err(other),
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiStaticConfig {
    pub bath: QubitBath,
    pub beta_c: f64,
    pub beta_h: f64,
    pub g: f64,
    pub family: EpsilonFamily,
}

impl QuasiStaticConfig {
    pub fn new(bath: QubitBath, beta_c: f64, beta_h: f64, g: f64, family: EpsilonFamily) -> Result<Self> {
        check_temps(bath.min_gap(), beta_c, beta_h)?;
        if !(g > 0.0) || g >= beta_c - beta_h {
            return Err(param(format!("g must lie in (0, beta_c - beta_h), got {g}")));
        }
        Ok(Self {
            bath,
            beta_c,
            beta_h,
            g,
            family,
        })
    }

    pub fn kappa_bar(&self) -> f64 {
        self.family.kappa_bar()
    }

    pub fn beta_f(&self) -> f64 {
        self.beta_c - self.g
    }

    fn with_g(&self, g: f64) -> Result<Self> {
        Self::new(self.bath.clone(), self.beta_c, self.beta_h, g, self.family)
    }

    /// Transition instance for the whole bath at this `g`.
    pub fn instance(&self) -> Result<TransitionInstance> {
        // an underflowed eps would turn the battery perfect and pin the work to zero
        let eps = self.family.eps(self.g)?.max(f64::MIN_POSITIVE);
        let n = self.bath.n();
        if self.bath.is_identical() && (n > MAX_COMPOSED_QUBITS || n == 1) {
            let s = Arc::new(EnergySpectrum::qubit(self.bath.gaps()[0])?);
            return TransitionInstance::thermal(s, self.beta_c, self.beta_f(), self.beta_h, eps)?
                .with_copies(n as u32);
        }
        if n > MAX_COMPOSED_QUBITS {
            return Err(param(format!(
                "non-identical baths are composed explicitly and limited to {MAX_COMPOSED_QUBITS} qubits"
            )));
        }
        let initial = self.bath.thermal_state(self.beta_c)?;
        let final_state = thermal_state_arc(initial.spectrum_arc(), self.beta_f())?;
        TransitionInstance::new(initial, final_state, self.beta_c, self.beta_h, BatterySpec::new(eps)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiStaticReport {
    pub eps: f64,
    pub omega: f64,
    pub w_ext_predicted: f64,
    pub w_ext_numeric: f64,
    pub eta_predicted: f64,
    pub eta_numeric: f64,
    pub argmin_alpha: AlphaValue,
    /// `BAND_CONSTANT (g + eps + eps^kappa / g)`.
    pub band: f64,
    pub within_band: bool,
}

/// Leading-order prediction next to the numerically solved engine.
pub fn quasistatic_engine(cfg: &QuasiStaticConfig) -> Result<QuasiStaticReport> {
    let (bc, bh, g) = (cfg.beta_c, cfg.beta_h, cfg.g);
    let kappa = cfg.kappa_bar();
    let om = omega(&cfg.bath, bc, bh)?;
    let at = if om <= 1.0 { kappa } else { f64::INFINITY };
    let mut gamma_at = 0.0;
    let mut gamma_1 = 0.0;
    for &e in cfg.bath.gaps() {
        gamma_at += if at == 0.0 { 0.0 } else { gamma(e, bc, bh, at)? };
        gamma_1 += gamma_one(e, bc, bh);
    }
    let w_ext_predicted = g / bh * gamma_at;
    let eta_predicted = if gamma_at > 0.0 {
        1.0 / (1.0 + bh / (bc - bh) * gamma_1 / gamma_at)
    } else {
        0.0
    };

    let inst = cfg.instance()?;
    let eps = inst.eps();
    let solved = max_extractable_work(&inst)?;
    let eta_numeric = efficiency_breakdown(&inst, solved.w_ext)?.eta;
    let band = BAND_CONSTANT * (g + eps + eps.powf(kappa) / g);
    Ok(QuasiStaticReport {
        eps,
        omega: om,
        w_ext_predicted,
        w_ext_numeric: solved.w_ext,
        eta_predicted,
        eta_numeric,
        argmin_alpha: solved.argmin_alpha,
        band,
        within_band: (eta_numeric - eta_predicted).abs() <= band,
    })
}

/// `Delta S / W_ext` along a sequence of `g`.
pub fn near_perfect_ratio(cfg: &QuasiStaticConfig, g_sequence: &[f64]) -> Result<Vec<(f64, f64)>> {
    g_sequence
        .iter()
        .map(|&g| {
            let inst = cfg.with_g(g)?.instance()?;
            let w = max_extractable_work(&inst)?.w_ext;
            Ok((g, h2_unchecked(inst.eps()) / w))
        })
        .collect()
}
