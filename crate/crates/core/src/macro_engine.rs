//! Helmholtz-only baseline: macroscopic work, efficiency bookkeeping,
//! thermal-state optimality, derivative identities and the Carnot limit.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::error::{param, Error, Result};
use crate::numerics::{bisect, h2_unchecked};
use crate::second_laws::{w_alpha, BatterySpec, TransitionInstance};
use crate::thermo_core::{
    renyi_divergence, state_moments, thermal_state_arc, AlphaValue, DiagonalState, EnergySpectrum,
};

/// Largest amount by which a random state may beat the thermal one.
pub const OPTIMALITY_SLACK: f64 = 1e-9;
/// Central-difference step for the derivative identities.
pub const FD_STEP: f64 = 1e-5;

/// Energy flows of one engine cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyBreakdown {
    pub w_ext: f64,
    pub delta_c: f64,
    pub delta_w: f64,
    pub delta_h: f64,
    pub eta: f64,
    pub eps: f64,
    pub delta_s: f64,
}

impl EfficiencyBreakdown {
    /// `1 - eps + delta_c / w_ext`.
    pub fn inverse_eta_from_cold(&self) -> f64 {
        1.0 - self.eps + self.delta_c / self.w_ext
    }
}

/// Work allowed by the Helmholtz free energy alone.
pub fn macro_work(inst: &TransitionInstance) -> f64 {
    // the alpha = 1 branch never errors
    w_alpha(inst, AlphaValue::One).unwrap_or(f64::NAN)
}

pub fn efficiency_breakdown(inst: &TransitionInstance, w_ext: f64) -> Result<EfficiencyBreakdown> {
    if !(w_ext > 0.0) {
        return Err(param(format!("efficiency needs positive work, got {w_ext}")));
    }
    let eps = inst.eps();
    let delta_c = inst.delta_cold();
    let delta_w = (1.0 - eps) * w_ext;
    let delta_h = delta_c + delta_w;
    if !(delta_h > 0.0) {
        return Err(Error::DegenerateEngine(format!("hot-bath energy change {delta_h} is not positive")));
    }
    Ok(EfficiencyBreakdown {
        w_ext,
        delta_c,
        delta_w,
        delta_h,
        eta: w_ext / delta_h,
        eps,
        delta_s: h2_unchecked(eps),
    })
}

/// `<H>_{beta'} - <H>_{beta_c} = target` solved on `[beta_h, beta_c]`.
pub fn beta_for_heat(spectrum: &Arc<EnergySpectrum>, beta_c: f64, beta_h: f64, target: f64) -> Result<f64> {
    let mean = |b: f64| thermal_state_arc(Arc::clone(spectrum), b).map(|t| t.mean_energy());
    let base = mean(beta_c)?;
    let reach = mean(beta_h)? - base;
    if !(target >= 0.0) || target > reach {
        return Err(param(format!(
            "heat target {target} is outside the reachable range [0, {reach}]"
        )));
    }
    if target == 0.0 {
        return Ok(beta_c);
    }
    let f = |b: f64| mean(b).map(|m| m - base - target).unwrap_or(f64::NAN);
    bisect(f, beta_h, beta_c, 80).ok_or_else(|| param("heat target not bracketed"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimalityReport {
    pub beta_prime: f64,
    pub thermal_work: f64,
    pub thermal_d1: f64,
    /// Largest `W(sample) - W(thermal)` over accepted samples.
    pub max_excess: f64,
    pub accepted: usize,
    pub rejected: usize,
    pub violations: usize,
}

/// Random search for a state beating the thermal one at fixed heat.
pub fn thermal_optimality_check(
    spectrum: &EnergySpectrum,
    beta_c: f64,
    beta_h: f64,
    delta_c_target: f64,
    trials: usize,
    seed: u64,
) -> Result<OptimalityReport> {
    let spectrum = Arc::new(spectrum.clone());
    let beta_prime = beta_for_heat(&spectrum, beta_c, beta_h, delta_c_target)?;
    let initial = thermal_state_arc(Arc::clone(&spectrum), beta_c)?;
    let thermal_final = thermal_state_arc(Arc::clone(&spectrum), beta_prime)?;
    let target_mean = thermal_final.mean_energy();
    let battery = BatterySpec::new(0.0)?;
    let work_of = |fin: DiagonalState| -> Result<f64> {
        let inst = TransitionInstance::new(initial.clone(), fin, beta_c, beta_h, battery.clone())?;
        Ok(macro_work(&inst))
    };
    let thermal_work = work_of(thermal_final.clone())?;
    let thermal_d1 = renyi_divergence(
        &thermal_final,
        &thermal_state_arc(Arc::clone(&spectrum), beta_h)?,
        AlphaValue::One,
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let levels = spectrum.levels();
    let n = levels.len();
    let mut report = OptimalityReport {
        beta_prime,
        thermal_work,
        thermal_d1,
        max_excess: f64::NEG_INFINITY,
        accepted: 0,
        rejected: 0,
        violations: 0,
    };
    for _ in 0..trials {
        let mut p: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= total);
        let mean: f64 = p.iter().zip(levels).map(|(a, e)| a * e).sum();
        let shift = target_mean - mean;
        let mut placed = false;
        for _ in 0..8 {
            let i = rng.random_range(0..n);
            let j = rng.random_range(0..n);
            if levels[i] == levels[j] {
                continue;
            }
            let t = shift / (levels[j] - levels[i]);
            if p[i] - t >= 0.0 && p[j] + t >= 0.0 {
                p[i] -= t;
                p[j] += t;
                placed = true;
                break;
            }
        }
        if !placed {
            report.rejected += 1;
            continue;
        }
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= total);
        let state = DiagonalState::new(Arc::clone(&spectrum), p)?;
        let excess = work_of(state)? - thermal_work;
        report.accepted += 1;
        report.max_excess = report.max_excess.max(excess);
        if excess > OPTIMALITY_SLACK {
            report.violations += 1;
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub finite_difference: f64,
    pub analytic: f64,
    /// Relative error, or absolute error when the analytic value is zero.
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeReport {
    pub checks: Vec<IdentityCheck>,
}

impl DerivativeReport {
    pub fn max_error(&self) -> f64 {
        self.checks.iter().map(|c| c.error).fold(0.0, f64::max)
    }

    pub fn all_within(&self, tol: f64) -> bool {
        self.checks.iter().all(|c| c.error <= tol)
    }
}

/// Central differences against the closed-form derivatives of mean energy,
/// entropy, cold-bath heat and macroscopic work.
pub fn derivative_identities(spectrum: &EnergySpectrum, beta_f: f64, beta_h: f64) -> Result<DerivativeReport> {
    if !(beta_f > 0.0) || !(beta_h > 0.0) {
        return Err(param("inverse temperatures must be positive"));
    }
    if beta_f <= FD_STEP {
        return Err(param("beta_f too small for the finite-difference step"));
    }
    let spectrum = Arc::new(spectrum.clone());
    let tau_h = thermal_state_arc(Arc::clone(&spectrum), beta_h)?;
    let at = |b: f64| thermal_state_arc(Arc::clone(&spectrum), b);
    let mean = |b: f64| at(b).map(|t| t.mean_energy());
    let entropy = |b: f64| at(b).map(|t| t.entropy());
    // heat relative to the reference at beta_f; the offset drops out of the derivative
    let base = mean(beta_f)?;
    let heat = |b: f64| mean(b).map(|m| m - base);
    let work = |b: f64| -> Result<f64> {
        Ok(-renyi_divergence(&at(b)?, &tau_h, AlphaValue::One)? / beta_h)
    };
    let var = state_moments(&at(beta_f)?).variance;
    let h = FD_STEP;
    let fd = |f: &dyn Fn(f64) -> Result<f64>| -> Result<f64> {
        Ok((f(beta_f + h)? - f(beta_f - h)?) / (2.0 * h))
    };
    let mut checks = Vec::with_capacity(4);
    let mut push = |name, finite_difference: f64, analytic: f64| {
        let diff = (finite_difference - analytic).abs();
        let error = if analytic != 0.0 { diff / analytic.abs() } else { diff };
        checks.push(IdentityCheck {
            name,
            finite_difference,
            analytic,
            error,
        });
    };
    push("mean_energy", fd(&mean)?, -var);
    push("entropy", fd(&entropy)?, -beta_f * var);
    push("cold_heat", fd(&heat)?, -var);
    push("macro_work", fd(&work)?, (beta_h - beta_f) / beta_h * var);
    Ok(DerivativeReport { checks })
}

/// Efficiency along `beta_f = beta_c - g` for each `g`.
pub fn macro_carnot_limit(
    spectrum: &EnergySpectrum,
    beta_c: f64,
    beta_h: f64,
    g_sequence: &[f64],
    eps_of_g: &dyn Fn(f64) -> f64,
) -> Result<Vec<(f64, f64)>> {
    let spectrum = Arc::new(spectrum.clone());
    g_sequence
        .iter()
        .map(|&g| {
            if !(g > 0.0) || g >= beta_c - beta_h {
                return Err(Error::OutOfRegime(format!(
                    "g = {g} must lie in (0, beta_c - beta_h = {})",
                    beta_c - beta_h
                )));
            }
            let inst = TransitionInstance::thermal(Arc::clone(&spectrum), beta_c, beta_c - g, beta_h, eps_of_g(g))?;
            let w = macro_work(&inst);
            Ok((g, efficiency_breakdown(&inst, w)?.eta))
        })
        .collect()
}

/// `1 - beta_h / beta_c`.
pub fn carnot(beta_c: f64, beta_h: f64) -> f64 {
    1.0 - beta_h / beta_c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qubit(e: f64) -> EnergySpectrum {
        EnergySpectrum::qubit(e).unwrap()
    }

    #[test]
    fn macro_work_examples() {
        let s = Arc::new(qubit(1.0));
        let same = TransitionInstance::thermal(s.clone(), 2.0, 2.0, 1.0, 0.0).unwrap();
        assert!(macro_work(&same).abs() < 1e-15);
        let failing = TransitionInstance::thermal(s.clone(), 2.0, 2.0, 1.0, 0.01).unwrap();
        assert!((macro_work(&failing) - 0.0565672).abs() < 5e-8);
        let inst = TransitionInstance::thermal(s, 1.0, 0.8, 0.5, 0.02).unwrap();
        assert!((macro_work(&inst) - w_alpha(&inst, AlphaValue::One).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn breakdown_identities() {
        let s = Arc::new(EnergySpectrum::new(vec![0.0, 0.7, 2.0]).unwrap());
        let inst = TransitionInstance::thermal(s, 1.2, 1.1, 0.4, 0.01).unwrap();
        let w = macro_work(&inst);
        let b = efficiency_breakdown(&inst, w).unwrap();
        assert!((b.delta_h - (b.delta_c + b.delta_w)).abs() < 1e-12);
        assert!((1.0 / b.eta - b.inverse_eta_from_cold()).abs() < 1e-10);
        assert!(efficiency_breakdown(&inst, 0.0).is_err());
    }

    #[test]
    fn zero_eps_inverse_efficiency() {
        let s = Arc::new(qubit(1.0));
        let inst = TransitionInstance::thermal(s, 1.0, 0.9, 0.5, 0.0).unwrap();
        let w = macro_work(&inst);
        let b = efficiency_breakdown(&inst, w).unwrap();
        assert!((1.0 / b.eta - (1.0 + b.delta_c / w)).abs() < 1e-12);
    }

    #[test]
    fn quasi_static_macro_is_carnot() {
        let (bh, bc) = (1.0 / 15.0, 1.0 / 10.0);
        let eta = macro_carnot_limit(&qubit(15.0), bc, bh, &[1e-6], &|_| 0.0).unwrap()[0].1;
        assert!((eta - 1.0 / 3.0).abs() < 1e-4);
        let eta_np = macro_carnot_limit(&qubit(15.0), bc, bh, &[1e-6], &|g| g * g).unwrap()[0].1;
        assert!((eta_np - 1.0 / 3.0).abs() < 1e-4);
    }

    #[test]
    fn carnot_limit_is_approached_monotonically() {
        let (bh, bc) = (1.0 / 15.0, 1.0 / 10.0);
        let seq = macro_carnot_limit(&qubit(15.0), bc, bh, &[1e-2, 1e-3, 1e-4], &|_| 0.0).unwrap();
        assert!(seq[0].1 < seq[1].1 && seq[1].1 < seq[2].1);
        for (_, eta) in &seq {
            assert!(*eta <= carnot(bc, bh) + 1e-6);
        }
    }

    #[test]
    fn carnot_limit_out_of_regime() {
        let r = macro_carnot_limit(&qubit(1.0), 1.0, 0.5, &[0.6], &|_| 0.0);
        assert!(matches!(r, Err(Error::OutOfRegime(_))));
    }

    #[test]
    fn optimality_trivial_target() {
        let r = thermal_optimality_check(&qubit(1.0), 1.0, 0.5, 0.0, 10, 1).unwrap();
        assert_eq!(r.beta_prime, 1.0);
        assert!(r.thermal_work.abs() < 1e-15);
        assert_eq!(r.violations, 0);
    }

    #[test]
    fn optimality_qubit_and_three_level() {
        let r = thermal_optimality_check(&qubit(1.0), 1.0, 0.5, 0.05, 1000, 7).unwrap();
        assert_eq!(r.violations, 0);
        assert!(r.accepted > 0);
        let s = EnergySpectrum::new(vec![0.0, 1.0, 3.0]).unwrap();
        let r = thermal_optimality_check(&s, 1.0, 0.5, 0.05, 1000, 8).unwrap();
        assert_eq!(r.violations, 0);
        assert!(r.accepted > 500);
        assert!(r.max_excess <= OPTIMALITY_SLACK);
    }

    #[test]
    fn optimality_rejects_unreachable_target() {
        assert!(thermal_optimality_check(&qubit(1.0), 1.0, 0.5, 10.0, 10, 1).is_err());
    }

    #[test]
    fn derivative_identity_examples() {
        let r = derivative_identities(&qubit(1.0), 2f64.ln(), 0.3).unwrap();
        assert!((r.checks[0].analytic + 2.0 / 9.0).abs() < 1e-15);
        assert!(r.all_within(1e-6), "{r:?}");

        let same = derivative_identities(&qubit(1.0), 0.5, 0.5).unwrap();
        let w = &same.checks[3];
        assert_eq!(w.analytic, 0.0);
        assert!(w.finite_difference.abs() < 1e-9);

        let four = EnergySpectrum::new(vec![0.0, 0.3, 1.1, 2.4]).unwrap();
        assert!(derivative_identities(&four, 0.9, 0.4).unwrap().all_within(1e-6));
    }
}
