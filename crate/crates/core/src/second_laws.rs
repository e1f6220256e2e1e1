//! Feasibility under the whole family of Rényi free energies, and the
//! maximum-extractable-work solver `W_ext = inf_{alpha > 0} W_alpha`.

use std::sync::Arc;

use crate::error::{param, Error, Result};
use crate::numerics::{golden_section, h2_unchecked, logspace, logsumexp};
use crate::thermo_core::{
    renyi_divergence, thermal_state_arc, AlphaValue, DiagonalState, EnergySpectrum, NEAR_ONE,
};

/// Slack allowed when comparing free energies.
pub const FEASIBILITY_TOL: f64 = 1e-12;
/// Relative closeness to `W_inf` for reporting the infinite endpoint.
pub const TAIL_TOL: f64 = 1e-8;

/// Failure probability of the battery and, optionally, its level ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct BatterySpec {
    eps: f64,
    ladder: Option<(Arc<EnergySpectrum>, usize, usize)>,
}

impl BatterySpec {
    pub fn new(eps: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&eps) {
            return Err(param(format!("battery failure probability must lie in [0, 1), got {eps}")));
        }
        Ok(Self { eps, ladder: None })
    }

    /// Attaches explicit battery levels; work is `E_k - E_j`.
    pub fn with_levels(mut self, levels: Arc<EnergySpectrum>, j: usize, k: usize) -> Result<Self> {
        if j >= levels.len() || k >= levels.len() {
            return Err(param("battery level index out of range"));
        }
        if !(levels.levels()[k] > levels.levels()[j]) {
            return Err(param("battery needs E_k > E_j"));
        }
        self.ladder = Some((levels, j, k));
        Ok(self)
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn levels(&self) -> Option<&EnergySpectrum> {
        self.ladder.as_ref().map(|l| l.0.as_ref())
    }

    pub fn j_index(&self) -> Option<usize> {
        self.ladder.as_ref().map(|l| l.1)
    }

    pub fn k_index(&self) -> Option<usize> {
        self.ladder.as_ref().map(|l| l.2)
    }

    /// `E_k - E_j` when levels are attached.
    pub fn work_gap(&self) -> Option<f64> {
        self.ladder
            .as_ref()
            .map(|(s, j, k)| s.levels()[*k] - s.levels()[*j])
    }
}

/// Cold-bath transition plus hot reference, the unit of work analysis.
///
/// `copies` counts identical independent copies of the cold system; the
/// divergences of the whole bath are `copies` times the per-copy ones.
#[derive(Debug, Clone)]
pub struct TransitionInstance {
    cold_initial: DiagonalState,
    cold_final: DiagonalState,
    hot_reference: DiagonalState,
    beta_c: f64,
    beta_h: f64,
    battery: BatterySpec,
    copies: u32,
    d1: (f64, f64),
    dinf: (f64, f64),
}

impl TransitionInstance {
    pub fn new(
        cold_initial: DiagonalState,
        cold_final: DiagonalState,
        beta_c: f64,
        beta_h: f64,
        battery: BatterySpec,
    ) -> Result<Self> {
        if !(beta_h > 0.0) || !(beta_c > beta_h) || !beta_c.is_finite() {
            return Err(param(format!(
                "need beta_c > beta_h > 0, got beta_c = {beta_c}, beta_h = {beta_h}"
            )));
        }
        if !cold_initial.shares_spectrum(&cold_final) {
            return Err(param("initial and final cold states live on different spectra"));
        }
        let expected = thermal_state_arc(cold_initial.spectrum_arc(), beta_c)?;
        let off = expected
            .probs()
            .iter()
            .zip(cold_initial.probs())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if off > 1e-12 {
            return Err(param("initial cold state is not thermal at beta_c"));
        }
        let hot_reference = thermal_state_arc(cold_initial.spectrum_arc(), beta_h)?;
        let d1 = (
            renyi_divergence(&cold_initial, &hot_reference, AlphaValue::One)?,
            renyi_divergence(&cold_final, &hot_reference, AlphaValue::One)?,
        );
        let dinf = (
            renyi_divergence(&cold_initial, &hot_reference, AlphaValue::Infinity)?,
            renyi_divergence(&cold_final, &hot_reference, AlphaValue::Infinity)?,
        );
        Ok(Self {
            cold_initial,
            cold_final,
            hot_reference,
            beta_c,
            beta_h,
            battery,
            copies: 1,
            d1,
            dinf,
        })
    }

    /// Initial state thermal at `beta_c`, final state thermal at `beta_f`.
    pub fn thermal(
        spectrum: Arc<EnergySpectrum>,
        beta_c: f64,
        beta_f: f64,
        beta_h: f64,
        eps: f64,
    ) -> Result<Self> {
        let initial = thermal_state_arc(Arc::clone(&spectrum), beta_c)?;
        let final_state = thermal_state_arc(spectrum, beta_f)?;
        Self::new(initial, final_state, beta_c, beta_h, BatterySpec::new(eps)?)
    }

    /// Treat the cold bath as `n` identical copies of this one.
    pub fn with_copies(mut self, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(param("copies must be at least 1"));
        }
        self.copies = n;
        Ok(self)
    }

    pub fn with_battery(mut self, battery: BatterySpec) -> Self {
        self.battery = battery;
        self
    }

    pub fn cold_initial(&self) -> &DiagonalState {
        &self.cold_initial
    }

    pub fn cold_final(&self) -> &DiagonalState {
        &self.cold_final
    }

    pub fn hot_reference(&self) -> &DiagonalState {
        &self.hot_reference
    }

    pub fn beta_c(&self) -> f64 {
        self.beta_c
    }

    pub fn beta_h(&self) -> f64 {
        self.beta_h
    }

    pub fn eps(&self) -> f64 {
        self.battery.eps
    }

    pub fn battery(&self) -> &BatterySpec {
        &self.battery
    }

    pub fn copies(&self) -> u32 {
        self.copies
    }

    /// Mean-energy change of the whole cold bath.
    pub fn delta_cold(&self) -> f64 {
        self.copies as f64 * (self.cold_final.mean_energy() - self.cold_initial.mean_energy())
    }

    fn n(&self) -> f64 {
        self.copies as f64
    }

    /// `ln A(alpha)` for the whole bath.
    fn log_ratio(&self, a: f64) -> f64 {
        let lq = self.hot_reference.log_probs();
        let weighted = |s: &DiagonalState| {
            let xs: Vec<f64> = s
                .probs()
                .iter()
                .zip(s.log_probs().iter().zip(lq))
                .filter(|(p, _)| **p > 0.0)
                .map(|(_, (lp, lq))| a * lp + (1.0 - a) * lq)
                .collect();
            logsumexp(&xs)
        };
        self.n() * (weighted(&self.cold_initial) - weighted(&self.cold_final))
    }

    fn w_one(&self) -> f64 {
        let eps = self.eps();
        (self.n() * (self.d1.0 - self.d1.1) + h2_unchecked(eps)) / (self.beta_h * (1.0 - eps))
    }

    fn w_infinity(&self) -> f64 {
        (self.n() * (self.dinf.0 - self.dinf.1) - (-self.eps()).ln_1p()) / self.beta_h
    }

    fn w_zero(&self) -> Result<f64> {
        if self.eps() > 0.0 {
            return Ok(f64::INFINITY);
        }
        let d0 = |s: &DiagonalState| renyi_divergence(s, &self.hot_reference, AlphaValue::Zero);
        Ok(self.n() * (d0(&self.cold_initial)? - d0(&self.cold_final)?) / self.beta_h)
    }

    fn w_finite(&self, a: f64) -> Result<f64> {
        if (a - 1.0).abs() < NEAR_ONE {
            return Ok(self.w_one());
        }
        let eps = self.eps();
        let log_a = self.log_ratio(a);
        let log_eps_a = if eps > 0.0 { a * eps.ln() } else { f64::NEG_INFINITY };
        // ln(A - eps^a), keeping precision when A - eps^a is close to 1
        let log_arg = if log_a > 30.0 {
            log_a + (-(log_eps_a - log_a).exp()).ln_1p()
        } else {
            let x = log_a.exp_m1() - log_eps_a.exp();
            if x <= -1.0 {
                f64::NAN
            } else {
                x.ln_1p()
            }
        };
        if log_arg.is_nan() || log_arg == f64::NEG_INFINITY {
            if a < 1.0 {
                return Ok(f64::INFINITY);
            }
            return Err(Error::ConstraintViolation {
                alpha: a,
                value: log_a.exp() - log_eps_a.exp(),
            });
        }
        Ok((log_arg - a * (-eps).ln_1p()) / (self.beta_h * (a - 1.0)))
    }
}

/// Work bound from the `alpha` second law.
pub fn w_alpha(inst: &TransitionInstance, alpha: AlphaValue) -> Result<f64> {
    match alpha {
        AlphaValue::Zero => inst.w_zero(),
        AlphaValue::One => Ok(inst.w_one()),
        AlphaValue::Infinity => Ok(inst.w_infinity()),
        AlphaValue::Finite(a) => inst.w_finite(a),
    }
}

/// Sampled `W_alpha` curve with its tagged endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkCurve {
    pub samples: Vec<(f64, f64)>,
    pub at_zero: f64,
    pub at_one: f64,
    pub at_infinity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkResult {
    pub w_ext: f64,
    pub argmin_alpha: AlphaValue,
    pub curve: WorkCurve,
    /// Final bracket width in `ln alpha`; zero when an endpoint wins.
    pub refinement_width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    pub grid_points: usize,
    pub xtol: f64,
    /// Restricts the search to `alpha >= cutoff`.
    pub cutoff: Option<f64>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            alpha_lo: 1e-6,
            alpha_hi: 1e6,
            grid_points: 400,
            xtol: 1e-8,
            cutoff: None,
        }
    }
}

pub fn max_extractable_work(inst: &TransitionInstance) -> Result<WorkResult> {
    max_extractable_work_with(inst, &SolverOptions::default())
}

pub fn max_extractable_work_with(inst: &TransitionInstance, opts: &SolverOptions) -> Result<WorkResult> {
    let lo = match opts.cutoff {
        Some(k) if k > opts.alpha_lo => k,
        Some(k) if !(k > 0.0) => return Err(param("cutoff must be positive")),
        _ => opts.alpha_lo,
    };
    if !(opts.alpha_hi > lo) || opts.grid_points < 3 {
        return Err(param("alpha grid needs hi > lo and at least 3 points"));
    }
    let grid = logspace(lo, opts.alpha_hi, opts.grid_points);
    let samples = grid
        .iter()
        .map(|&a| inst.w_finite(a).map(|w| (a, w)))
        .collect::<Result<Vec<_>>>()?;
    let at_zero = if opts.cutoff.is_some() { f64::INFINITY } else { inst.w_zero()? };
    let at_one = if lo <= 1.0 { inst.w_one() } else { f64::INFINITY };
    let at_infinity = inst.w_infinity();
    let curve = WorkCurve {
        samples,
        at_zero,
        at_one,
        at_infinity,
    };

    // grid minimum, ties toward smaller alpha
    let mut best_i = 0;
    for (i, s) in curve.samples.iter().enumerate() {
        if s.1 < curve.samples[best_i].1 {
            best_i = i;
        }
    }
    let grid_best = curve.samples[best_i].1;
    if !grid_best.is_finite()
        && !at_one.is_finite()
        && !at_infinity.is_finite()
        && !at_zero.is_finite()
    {
        return Err(Error::NoConstraint);
    }

    let mut best = (AlphaValue::Infinity, f64::INFINITY);
    let mut width = 0.0;
    if grid_best.is_finite() {
        let left = curve.samples[best_i.saturating_sub(1)].0.ln();
        let right = curve.samples[(best_i + 1).min(grid.len() - 1)].0.ln();
        let f = |x: f64| inst.w_finite(x.exp()).unwrap_or(f64::INFINITY);
        let (x, fx) = golden_section(f, left, right, opts.xtol);
        let (a, w) = if fx < grid_best { (x.exp(), fx) } else { curve.samples[best_i] };
        best = (AlphaValue::Finite(a), w);
        width = opts.xtol.min(right - left);
        if (a - 1.0).abs() < NEAR_ONE {
            best.0 = AlphaValue::One;
        }
    }
    if at_one < best.1 {
        best = (AlphaValue::One, at_one);
        width = 0.0;
    }
    if at_zero < best.1 {
        best = (AlphaValue::Zero, at_zero);
        width = 0.0;
    }
    let tail = best_i == grid.len() - 1;
    let near_tail = (best.1 - at_infinity).abs() <= TAIL_TOL * at_infinity.abs().max(f64::MIN_POSITIVE);
    if at_infinity < best.1 || (tail && near_tail) {
        best = (AlphaValue::Infinity, at_infinity.min(best.1));
        width = 0.0;
    }
    Ok(WorkResult {
        w_ext: best.1,
        argmin_alpha: best.0,
        curve,
        refinement_width: width,
    })
}

/// Outcome of checking every sampled second law.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub feasible: bool,
    /// Smallest `F_alpha(rho0) - F_alpha(rho1)` seen.
    pub worst_gap: f64,
    pub worst_alpha: AlphaValue,
    pub violations: Vec<AlphaValue>,
}

/// The alphas checked by [`transition_feasible`]: the solver grid plus tags.
pub fn feasibility_alphas() -> Vec<AlphaValue> {
    let mut out = vec![AlphaValue::Zero, AlphaValue::One, AlphaValue::Infinity];
    out.extend(logspace(1e-6, 1e6, 400).into_iter().map(AlphaValue::Finite));
    out
}

/// Whether `rho0 -> rho1` satisfies `F_alpha(rho0) >= F_alpha(rho1)` for all sampled alpha.
pub fn transition_feasible(rho0: &DiagonalState, rho1: &DiagonalState, beta_h: f64) -> Result<FeasibilityReport> {
    if !(beta_h > 0.0) {
        return Err(param("beta_h must be positive"));
    }
    if !rho0.shares_spectrum(rho1) {
        return Err(param("states live on different spectra"));
    }
    let tau = thermal_state_arc(rho0.spectrum_arc(), beta_h)?;
    let mut report = FeasibilityReport {
        feasible: true,
        worst_gap: f64::INFINITY,
        worst_alpha: AlphaValue::One,
        violations: Vec::new(),
    };
    for alpha in feasibility_alphas() {
        // ln Z_h cancels in the difference
        let gap = (renyi_divergence(rho0, &tau, alpha)? - renyi_divergence(rho1, &tau, alpha)?) / beta_h;
        if gap < report.worst_gap {
            report.worst_gap = gap;
            report.worst_alpha = alpha;
        }
        if gap < -FEASIBILITY_TOL {
            report.feasible = false;
            report.violations.push(alpha);
        }
    }
    Ok(report)
}

/// Witness that charging a battery with certainty is forbidden.
#[derive(Debug, Clone, PartialEq)]
pub struct PerfectWorkCertificate {
    pub work: f64,
    /// `F_0(final) - F_0(initial)`; positive means the alpha = 0 law is broken.
    pub free_energy_increase: f64,
    /// `tr[(P_rho0 - P_rho1) tau_W]` on the two battery levels.
    pub projector_weight_gap: f64,
    /// Largest work the alpha = 0 law allows; never positive.
    pub max_allowed_work: f64,
    pub impossible: bool,
}

/// Certifies that `work > 0` with `eps = 0` violates the alpha = 0 law.
pub fn no_perfect_work(inst: &TransitionInstance, work: f64) -> Result<PerfectWorkCertificate> {
    if inst.eps() != 0.0 {
        return Err(param("no_perfect_work needs a battery with eps = 0"));
    }
    if !inst.cold_initial.is_full_rank() {
        return Err(Error::Inapplicable("initial cold state is not full rank".into()));
    }
    if !work.is_finite() || work < 0.0 {
        return Err(param("requested work must be finite and nonnegative"));
    }
    let bh = inst.beta_h;
    let d0_final = renyi_divergence(&inst.cold_final, &inst.hot_reference, AlphaValue::Zero)?;
    let max_allowed_work = -inst.n() * d0_final / bh;
    let free_energy_increase = work + inst.n() * d0_final / bh;
    // two-level window {0, W}: (1 - e^{-bh W}) / (1 + e^{-bh W})
    let projector_weight_gap = (bh * work / 2.0).tanh();
    Ok(PerfectWorkCertificate {
        work,
        free_energy_increase,
        projector_weight_gap,
        max_allowed_work,
        impossible: work > 0.0 && free_energy_increase > 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermo_core::binary_entropy;

    fn qubit(e: f64) -> Arc<EnergySpectrum> {
        Arc::new(EnergySpectrum::qubit(e).unwrap())
    }

    fn identity_instance(eps: f64, beta_h: f64) -> TransitionInstance {
        TransitionInstance::thermal(qubit(1.0), 2.0 * beta_h, 2.0 * beta_h, beta_h, eps).unwrap()
    }

    #[test]
    fn battery_validation() {
        assert!(BatterySpec::new(1.0).is_err());
        assert!(BatterySpec::new(-0.1).is_err());
        let levels = Arc::new(EnergySpectrum::new(vec![0.0, 1.0, 2.0]).unwrap());
        assert!(BatterySpec::new(0.1).unwrap().with_levels(levels.clone(), 2, 1).is_err());
        let b = BatterySpec::new(0.1).unwrap().with_levels(levels, 0, 2).unwrap();
        assert_eq!(b.work_gap(), Some(2.0));
    }

    #[test]
    fn instance_validation() {
        assert!(TransitionInstance::thermal(qubit(1.0), 0.5, 0.5, 1.0, 0.0).is_err());
        let s = qubit(1.0);
        let not_thermal = DiagonalState::new(s.clone(), vec![0.5, 0.5]).unwrap();
        let fin = thermal_state_arc(s, 1.0).unwrap();
        assert!(TransitionInstance::new(not_thermal, fin, 1.0, 0.5, BatterySpec::new(0.0).unwrap()).is_err());
    }

    #[test]
    fn unchanged_state_without_failure_gives_zero_work() {
        let inst = identity_instance(0.0, 0.7);
        for a in [0.01, 0.5, 2.0, 50.0] {
            assert!(w_alpha(&inst, AlphaValue::Finite(a)).unwrap().abs() < 1e-12);
        }
        assert!(w_alpha(&inst, AlphaValue::One).unwrap().abs() < 1e-12);
        assert!(w_alpha(&inst, AlphaValue::Infinity).unwrap().abs() < 1e-12);
        let r = max_extractable_work(&inst).unwrap();
        assert!(r.w_ext.abs() < 1e-12);
    }

    #[test]
    fn unchanged_state_with_failure() {
        let inst = identity_instance(0.01, 1.0);
        let w1 = w_alpha(&inst, AlphaValue::One).unwrap();
        let winf = w_alpha(&inst, AlphaValue::Infinity).unwrap();
        assert!((w1 - binary_entropy(0.01).unwrap() / 0.99).abs() < 1e-15);
        assert!((w1 - 0.0565672).abs() < 5e-8);
        assert!((winf - 0.0100503).abs() < 5e-8);
        assert_eq!(w_alpha(&inst, AlphaValue::Zero).unwrap(), f64::INFINITY);
    }

    #[test]
    fn alpha_two_matches_log_domain_oracle() {
        let (bc, bh, g, eps) = (1.0, 0.5, 1e-3, 1e-6);
        let inst = TransitionInstance::thermal(qubit(1.0), bc, bc - g, bh, eps).unwrap();
        let th = |b: f64| [1.0 / (1.0 + (-b).exp()), (-b).exp() / (1.0 + (-b).exp())];
        let (p, pp, q) = (th(bc), th(bc - g), th(bh));
        let a = 2.0;
        let s = |x: [f64; 2]| (0..2).map(|i| x[i].powf(a) * q[i].powf(1.0 - a)).sum::<f64>();
        let big_a = s(p) / s(pp);
        let oracle = ((big_a - eps.powf(a)).ln() - a * (1.0 - eps).ln()) / (bh * (a - 1.0));
        let w = w_alpha(&inst, AlphaValue::Finite(a)).unwrap();
        assert!((w - oracle).abs() < 1e-10 * oracle.abs().max(1e-12));
    }

    #[test]
    fn seam_at_alpha_one_is_continuous() {
        // the two sides straddle the relative-entropy branch symmetrically
        let inst = TransitionInstance::thermal(qubit(1.0), 1.0, 0.9, 0.5, 1e-3).unwrap();
        let w1 = w_alpha(&inst, AlphaValue::One).unwrap();
        let lo = w_alpha(&inst, AlphaValue::Finite(1.0 - 1e-4)).unwrap();
        let hi = w_alpha(&inst, AlphaValue::Finite(1.0 + 1e-4)).unwrap();
        assert!((0.5 * (lo + hi) - w1).abs() <= 1e-6 * w1.abs());
        assert!((lo - w1).abs() <= 1e-3 * w1.abs());
    }

    #[test]
    fn nano_never_exceeds_macro_bound() {
        let inst = TransitionInstance::thermal(qubit(2.0), 1.0, 0.95, 0.4, 1e-4).unwrap();
        let r = max_extractable_work(&inst).unwrap();
        assert!(r.w_ext <= w_alpha(&inst, AlphaValue::One).unwrap() + 1e-12);
        for (a, w) in &r.curve.samples {
            assert!(r.w_ext <= w + 1e-10, "alpha {a}");
        }
    }

    #[test]
    fn small_alpha_blows_up() {
        let g = 1e-3;
        let inst = TransitionInstance::thermal(qubit(1.0), 1.0, 1.0 - g, 0.5, g * g).unwrap();
        let r = max_extractable_work(&inst).unwrap();
        let w_small = w_alpha(&inst, AlphaValue::Finite(1e-6)).unwrap();
        assert!(w_small > 1e3 * r.w_ext);
    }

    #[test]
    fn constraint_violation_above_one() {
        // cooling the cold bath pushes A below eps^alpha for alpha > 1
        let s = qubit(1.0);
        let inst = TransitionInstance::thermal(s, 1.0, 3.0, 0.5, 0.9).unwrap();
        let err = w_alpha(&inst, AlphaValue::Finite(3.0));
        assert!(matches!(err, Err(Error::ConstraintViolation { .. })), "{err:?}");
        let below = w_alpha(&inst, AlphaValue::Finite(0.5)).unwrap();
        assert!(below.is_finite() || below == f64::INFINITY);
    }

    #[test]
    fn copies_scale_divergence_terms() {
        let s = qubit(1.0);
        let one = TransitionInstance::thermal(s.clone(), 1.0, 0.99, 0.5, 0.0).unwrap();
        let three = one.clone().with_copies(3).unwrap();
        let w1 = w_alpha(&one, AlphaValue::Finite(2.0)).unwrap();
        let w3 = w_alpha(&three, AlphaValue::Finite(2.0)).unwrap();
        assert!((w3 - 3.0 * w1).abs() < 1e-12);
        assert!((three.delta_cold() - 3.0 * one.delta_cold()).abs() < 1e-15);
    }

    #[test]
    fn feasibility_examples() {
        let s = Arc::new(EnergySpectrum::new(vec![0.0, 1.0, 2.5]).unwrap());
        let rho = DiagonalState::new(s.clone(), vec![0.2, 0.5, 0.3]).unwrap();
        let same = transition_feasible(&rho, &rho, 0.5).unwrap();
        assert!(same.feasible);
        assert!(same.worst_gap.abs() < 1e-15);

        let tau = thermal_state_arc(s.clone(), 0.5).unwrap();
        assert!(transition_feasible(&rho, &tau, 0.5).unwrap().feasible);

        let cold = thermal_state_arc(s.clone(), 1.0).unwrap();
        let colder = thermal_state_arc(s, 1.3).unwrap();
        let r = transition_feasible(&cold, &colder, 0.5).unwrap();
        assert!(!r.feasible);
        assert!(r.violations.contains(&AlphaValue::One));
    }

    #[test]
    fn perfect_work_is_impossible() {
        let inst = TransitionInstance::thermal(qubit(1.0), 1.0, 0.9, 0.5, 0.0).unwrap();
        let c = no_perfect_work(&inst, 0.1).unwrap();
        assert!(c.impossible);
        assert!(c.projector_weight_gap > 0.0);
        assert!(c.max_allowed_work <= 0.0);
        let vacuous = no_perfect_work(&inst, 0.0).unwrap();
        assert!(!vacuous.impossible);
    }

    #[test]
    fn perfect_work_needs_full_rank_and_zero_eps() {
        let with_eps = TransitionInstance::thermal(qubit(1.0), 1.0, 0.9, 0.5, 0.1).unwrap();
        assert!(no_perfect_work(&with_eps, 0.1).is_err());
    }
}
