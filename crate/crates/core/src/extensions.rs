//! Checks beyond the product-state setup: final correlations between
//! cold bath, machine and battery, and final battery states with junk
//! spread over other levels.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{param, Error, Result};
use crate::macro_engine::carnot;
use crate::nano_engine::{eta_quasistatic, omega_single, EpsilonFamily};
use crate::numerics::softplus;
use crate::second_laws::{w_alpha, BatterySpec, TransitionInstance};
use crate::thermo_core::{
    renyi_divergence, thermal_state, thermal_state_arc, AlphaValue, DiagonalState, EnergySpectrum,
    NORMALIZATION_TOL,
};

/// Diagonal state of three subsystems stored in row-major `(a, b, c)` order.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    dims: [usize; 3],
    probs: Vec<f64>,
}

impl JointState {
    pub fn new(dims: [usize; 3], probs: Vec<f64>) -> Result<Self> {
        if dims.contains(&0) || probs.len() != dims.iter().product::<usize>() {
            return Err(param("joint probabilities do not match the dimensions"));
        }
        if probs.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
            return Err(Error::Domain("joint probabilities must be nonnegative".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Domain(format!("joint probabilities sum to {total}")));
        }
        Ok(Self { dims, probs })
    }

    pub fn product(a: &[f64], b: &[f64], c: &[f64]) -> Result<Self> {
        let mut probs = Vec::with_capacity(a.len() * b.len() * c.len());
        for pa in a {
            for pb in b {
                for pc in c {
                    probs.push(pa * pb * pc);
                }
            }
        }
        Self::new([a.len(), b.len(), c.len()], probs)
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.probs[(i * self.dims[1] + j) * self.dims[2] + k]
    }

    pub fn marginal(&self, axis: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.dims[axis]];
        for i in 0..self.dims[0] {
            for j in 0..self.dims[1] {
                for k in 0..self.dims[2] {
                    out[[i, j, k][axis]] += self.get(i, j, k);
                }
            }
        }
        out
    }

    pub fn entropy(&self) -> f64 {
        self.probs
            .iter()
            .filter(|p| **p > 0.0)
            .map(|p| -p * p.ln())
            .sum()
    }

    /// Mean of an additive energy `e_a + e_b + e_c`.
    pub fn mean_energy(&self, levels: [&[f64]; 3]) -> f64 {
        (0..3)
            .map(|axis| {
                self.marginal(axis)
                    .iter()
                    .zip(levels[axis])
                    .map(|(p, e)| p * e)
                    .sum::<f64>()
            })
            .sum()
    }
}

/// Random direction whose three one-axis marginals all vanish.
fn zero_marginal_direction<R: Rng>(dims: [usize; 3], rng: &mut R) -> Vec<f64> {
    let [na, nb, nc] = dims;
    let x: Vec<f64> = (0..na * nb * nc).map(|_| rng.random_range(-1.0..1.0)).collect();
    let idx = |i: usize, j: usize, k: usize| (i * nb + j) * nc + k;
    let (mut xa, mut xb, mut xc) = (vec![0.0; na], vec![0.0; nb], vec![0.0; nc]);
    let mut tot = 0.0;
    for i in 0..na {
        for j in 0..nb {
            for k in 0..nc {
                let v = x[idx(i, j, k)];
                xa[i] += v;
                xb[j] += v;
                xc[k] += v;
                tot += v;
            }
        }
    }
    let (fa, fb, fc) = (na as f64, nb as f64, nc as f64);
    let mut d = vec![0.0; x.len()];
    for i in 0..na {
        for j in 0..nb {
            for k in 0..nc {
                d[idx(i, j, k)] = x[idx(i, j, k)] - xa[i] / (fb * fc) - xb[j] / (fa * fc) - xc[k] / (fa * fb)
                    + 2.0 * tot / (fa * fb * fc);
            }
        }
    }
    d
}

/// Zero-marginal direction supported on one random slice of the last axis.
fn slice_direction<R: Rng>(dims: [usize; 3], rng: &mut R) -> Vec<f64> {
    let [na, nb, nc] = dims;
    let s = rng.random_range(0..nc);
    let x: Vec<f64> = (0..na * nb).map(|_| rng.random_range(-1.0..1.0)).collect();
    let row: Vec<f64> = (0..na).map(|i| x[i * nb..(i + 1) * nb].iter().sum()).collect();
    let col: Vec<f64> = (0..nb).map(|j| (0..na).map(|i| x[i * nb + j]).sum()).collect();
    let tot: f64 = x.iter().sum();
    let (fa, fb) = (na as f64, nb as f64);
    let mut d = vec![0.0; na * nb * nc];
    for i in 0..na {
        for j in 0..nb {
            d[(i * nb + j) * nc + s] = x[i * nb + j] - row[i] / fb - col[j] / fa + tot / (fa * fb);
        }
    }
    d
}

/// `(1 - k) no_corr + k corr`, where `no_corr` is the product of the marginals.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatedFinalState {
    k: f64,
    no_corr: JointState,
    corr: JointState,
}

impl CorrelatedFinalState {
    pub fn new(k: f64, no_corr: JointState, corr: JointState) -> Result<Self> {
        if !(0.0..=1.0).contains(&k) {
            return Err(param(format!("mixing weight must lie in [0, 1], got {k}")));
        }
        if no_corr.dims != corr.dims {
            return Err(param("correlated and product parts differ in shape"));
        }
        for axis in [1, 2] {
            let (a, b) = (no_corr.marginal(axis), corr.marginal(axis));
            if a.iter().zip(&b).any(|(x, y)| (x - y).abs() > 1e-12) {
                return Err(Error::Invariant(format!("marginal {axis} of the correlated part differs")));
            }
        }
        Ok(Self { k, no_corr, corr })
    }

    /// Random correlated part with all one-axis marginals of `no_corr` kept.
    pub fn sample<R: Rng>(k: f64, no_corr: JointState, rng: &mut R) -> Result<Self> {
        let d = if rng.random_bool(0.5) {
            zero_marginal_direction(no_corr.dims, rng)
        } else {
            slice_direction(no_corr.dims, rng)
        };
        let t_max = no_corr
            .probs
            .iter()
            .zip(&d)
            .filter(|(_, di)| **di < 0.0)
            .map(|(p, di)| p / -di)
            .fold(f64::INFINITY, f64::min);
        let t = rng.random_range(0.0..1.0) * t_max.min(1e6);
        let probs: Vec<f64> = no_corr
            .probs
            .iter()
            .zip(&d)
            .map(|(p, di)| (p + t * di).max(0.0))
            .collect();
        let total: f64 = probs.iter().sum();
        let corr = JointState::new(no_corr.dims, probs.iter().map(|p| p / total).collect())?;
        Self::new(k, no_corr, corr)
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn no_corr(&self) -> &JointState {
        &self.no_corr
    }

    pub fn corr(&self) -> &JointState {
        &self.corr
    }

    pub fn mixture(&self) -> JointState {
        let probs = self
            .no_corr
            .probs
            .iter()
            .zip(&self.corr.probs)
            .map(|(a, b)| (1.0 - self.k) * a + self.k * b)
            .collect();
        JointState {
            dims: self.no_corr.dims,
            probs,
        }
    }
}

/// Entropy lost to correlations, in work units of the battery.
pub fn chi(state: &CorrelatedFinalState, eps: f64, beta_h: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&eps) || !(beta_h > 0.0) {
        return Err(param("need eps in [0, 1) and beta_h > 0"));
    }
    let gap = state.no_corr.entropy() - state.mixture().entropy();
    Ok(gap / (beta_h * (1.0 - eps)))
}

/// `k = c g^p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationFamily {
    pub c: f64,
    pub p: f64,
}

impl CorrelationFamily {
    pub fn k(&self, g: f64) -> f64 {
        (self.c * g.powf(self.p)).clamp(0.0, 1.0)
    }

    /// Whether `k / g -> 0`.
    pub fn vanishes_faster_than_g(&self) -> bool {
        self.c == 0.0 || self.p > 1.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatedBoundReport {
    pub k: f64,
    pub eps: f64,
    pub samples: usize,
    pub infeasible_samples: usize,
    pub eta_uncorrelated: f64,
    pub eta_max: f64,
    pub eta_reduced: f64,
    pub eta_carnot: f64,
    pub chi_max: f64,
    pub satisfies_necessary: bool,
}

impl CorrelatedBoundReport {
    pub fn within(&self, band: f64) -> bool {
        self.eta_max <= self.eta_reduced + band
    }

    pub fn below_carnot(&self, margin: f64) -> bool {
        self.eta_max <= self.eta_carnot - margin
    }
}

/// Gap of the two-level machine used by the correlated check.
pub const MACHINE_GAP: f64 = 1.0;

struct CorrelatedSetup {
    cold: DiagonalState,
    cold_final: DiagonalState,
    hot_cold: DiagonalState,
    machine: DiagonalState,
    machine_hot: DiagonalState,
    beta_h: f64,
    eps: f64,
    log_r: f64,
}

impl CorrelatedSetup {
    /// Largest work such that the final `D_inf` does not exceed the initial one.
    fn w_inf(&self, joint: &JointState) -> Option<f64> {
        let (q, t) = (self.hot_cold.probs(), self.machine_hot.probs());
        let mut best = f64::INFINITY;
        for c in 0..2 {
            for m in 0..2 {
                let base = self.log_r + q[c].ln() + t[m].ln();
                let pj = joint.get(c, m, 0);
                if pj > 0.0 && pj.ln() > base + 1e-12 {
                    return None;
                }
                let pk = joint.get(c, m, 1);
                if pk > 0.0 {
                    best = best.min(base - pk.ln());
                }
            }
        }
        Some(best / self.beta_h)
    }

    fn eta(&self, joint: &JointState, w: f64) -> f64 {
        let cold_marginal = joint.marginal(0);
        let levels = self.cold.spectrum().levels();
        let after: f64 = cold_marginal.iter().zip(levels).map(|(p, e)| p * e).sum();
        let delta_c = after - self.cold.mean_energy();
        w / (delta_c + (1.0 - self.eps) * w)
    }
}

/// Samples correlated final states of cold qubit, machine and battery window
/// and bounds their efficiency with the `F_inf` condition.
pub fn correlated_bound_check(
    e: f64,
    beta_c: f64,
    beta_h: f64,
    g: f64,
    family: CorrelationFamily,
    samples: usize,
    seed: u64,
) -> Result<CorrelatedBoundReport> {
    let om = omega_single(e, beta_c, beta_h);
    if !(om > 1.0) {
        return Err(Error::OutOfRegime(format!("Omega = {om} does not exceed 1")));
    }
    if !(g > 0.0) || g >= beta_c - beta_h {
        return Err(param("g must lie in (0, beta_c - beta_h)"));
    }
    let eps = EpsilonFamily::power(1.0, 0.5)?.eps(g)?;
    let spec = Arc::new(EnergySpectrum::qubit(e)?);
    let cold = thermal_state_arc(spec.clone(), beta_c)?;
    let cold_final = thermal_state_arc(spec.clone(), beta_c - g)?;
    let hot_cold = thermal_state_arc(spec, beta_h)?;
    let mspec = EnergySpectrum::qubit(MACHINE_GAP)?;
    let machine = thermal_state(&mspec, beta_c)?;
    let machine_hot = thermal_state(&mspec, beta_h)?;
    let log_r = renyi_divergence(&cold, &hot_cold, AlphaValue::Infinity)?
        + renyi_divergence(&machine, &machine_hot, AlphaValue::Infinity)?;
    let setup = CorrelatedSetup {
        cold,
        cold_final,
        hot_cold,
        machine,
        machine_hot,
        beta_h,
        eps,
        log_r,
    };

    let no_corr = JointState::product(setup.cold_final.probs(), setup.machine.probs(), &[eps, 1.0 - eps])?;
    let w0 = setup
        .w_inf(&no_corr)
        .ok_or_else(|| Error::Invariant("uncorrelated final state violates F_inf".into()))?;
    let eta_uncorrelated = setup.eta(&no_corr, w0);

    let k = family.k(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut eta_max, mut chi_max, mut infeasible) = (eta_uncorrelated, 0.0f64, 0);
    for _ in 0..samples {
        let state = CorrelatedFinalState::sample(k, no_corr.clone(), &mut rng)?;
        let mix = state.mixture();
        chi_max = chi_max.max(chi(&state, eps, beta_h)?);
        match setup.w_inf(&mix) {
            Some(w) if w > 0.0 => eta_max = eta_max.max(setup.eta(&mix, w)),
            _ => infeasible += 1,
        }
    }
    Ok(CorrelatedBoundReport {
        k,
        eps,
        samples,
        infeasible_samples: infeasible,
        eta_uncorrelated,
        eta_max,
        eta_reduced: eta_quasistatic(om, beta_c, beta_h),
        eta_carnot: carnot(beta_c, beta_h),
        chi_max,
        satisfies_necessary: family.vanishes_faster_than_g(),
    })
}

/// Battery whose failure weight is spread over junk levels.
#[derive(Debug, Clone)]
pub struct GeneralBattery {
    base: BatterySpec,
    junk: DiagonalState,
}

impl GeneralBattery {
    pub fn new(base: BatterySpec, junk: DiagonalState) -> Result<Self> {
        let (levels, k) = match (base.levels(), base.k_index()) {
            (Some(l), Some(k)) => (l, k),
            _ => return Err(param("general battery needs explicit ladder levels")),
        };
        if !junk.spectrum().same_levels(levels) {
            return Err(param("junk state must live on the battery ladder"));
        }
        if junk.probs()[k] != 0.0 {
            return Err(Error::Invariant("junk state has weight on the target level".into()));
        }
        Ok(Self { base, junk })
    }

    pub fn base(&self) -> &BatterySpec {
        &self.base
    }

    pub fn junk(&self) -> &DiagonalState {
        &self.junk
    }

    /// `(1 - eps) |k> + eps junk`.
    pub fn final_state(&self) -> Vec<f64> {
        let eps = self.base.eps();
        let k = self.base.k_index().unwrap_or(0);
        let mut out: Vec<f64> = self.junk.probs().iter().map(|p| eps * p).collect();
        out[k] += 1.0 - eps;
        out
    }

    /// Trace distance of the final state to the target level.
    pub fn trace_distance(&self) -> f64 {
        let k = self.base.k_index().unwrap_or(0);
        0.5 * self
            .final_state()
            .iter()
            .enumerate()
            .map(|(i, p)| if i == k { (1.0 - p).abs() } else { p.abs() })
            .sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BatteryBranch {
    Target,
    Junk,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralBatteryPair {
    pub w_inf_simple: f64,
    /// `-inf` when the junk alone breaks the `F_inf` condition.
    pub w_inf_general: f64,
    pub eps_hat: f64,
    pub branch: BatteryBranch,
    pub equal: bool,
}

/// `(1 + e^{beta_h (E_max - E_j)})^-1`.
pub fn eps_hat(beta_h: f64, top_minus_start: f64) -> f64 {
    (-softplus(beta_h * top_minus_start)).exp()
}

pub fn general_battery_pair(inst: &TransitionInstance, gb: &GeneralBattery) -> Result<GeneralBatteryPair> {
    let eps = gb.base.eps();
    if !(eps > 0.0) {
        return Err(param("general battery comparison needs eps > 0"));
    }
    let inst = inst.clone().with_battery(gb.base.clone());
    let bh = inst.beta_h();
    let w_inf_simple = w_alpha(&inst, AlphaValue::Infinity)?;

    let levels = gb.junk.spectrum().levels();
    let ej = levels[gb.base.j_index().unwrap_or(0)];
    let n = f64::from(inst.copies());
    let budget = n
        * (renyi_divergence(inst.cold_initial(), inst.hot_reference(), AlphaValue::Infinity)?
            - renyi_divergence(inst.cold_final(), inst.hot_reference(), AlphaValue::Infinity)?);
    // junk terms of D_inf do not depend on the work
    let junk_term = gb
        .junk
        .probs()
        .iter()
        .zip(levels)
        .filter(|(p, _)| **p > 0.0)
        .map(|(p, e)| (eps * p).ln() + bh * (e - ej))
        .fold(f64::NEG_INFINITY, f64::max);
    let target_term = (1.0 - eps).ln() + bh * w_inf_simple;
    let branch = if junk_term > target_term {
        BatteryBranch::Junk
    } else {
        BatteryBranch::Target
    };
    let w_inf_general = if junk_term <= budget {
        w_alpha(&inst, AlphaValue::Infinity)?
    } else {
        f64::NEG_INFINITY
    };
    Ok(GeneralBatteryPair {
        w_inf_simple,
        w_inf_general,
        eps_hat: eps_hat(bh, gb.junk.spectrum().max() - ej),
        branch,
        equal: w_inf_simple == w_inf_general,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BH: f64 = 1.0 / 15.0;
    const BC: f64 = 0.1;

    fn random_product(rng: &mut ChaCha8Rng) -> JointState {
        let mut v = |n: usize| {
            let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
            let s: f64 = w.iter().sum();
            w.into_iter().map(|x| x / s).collect::<Vec<_>>()
        };
        let (a, b, c) = (v(3), v(2), v(2));
        JointState::product(&a, &b, &c).unwrap()
    }

    #[test]
    fn direction_has_zero_marginals() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let d = zero_marginal_direction([3, 2, 4], &mut rng);
        let js = JointState { dims: [3, 2, 4], probs: d };
        for axis in 0..3 {
            assert!(js.marginal(axis).iter().all(|m| m.abs() < 1e-14));
        }
        let js = JointState { dims: [3, 2, 4], probs: slice_direction([3, 2, 4], &mut rng) };
        for axis in 0..3 {
            assert!(js.marginal(axis).iter().all(|m| m.abs() < 1e-14));
        }
    }

    #[test]
    fn chi_zero_without_correlation() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = CorrelatedFinalState::sample(0.0, random_product(&mut rng), &mut rng).unwrap();
        assert_eq!(chi(&s, 0.1, BH).unwrap(), 0.0);
    }

    #[test]
    fn chi_positive_and_convex() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let base = random_product(&mut rng);
        let s = CorrelatedFinalState::sample(1.0, base.clone(), &mut rng).unwrap();
        let vals: Vec<f64> = (0..=10)
            .map(|i| {
                let st = CorrelatedFinalState::new(i as f64 / 10.0, base.clone(), s.corr().clone()).unwrap();
                chi(&st, 0.2, BH).unwrap()
            })
            .collect();
        assert!(vals[1..].iter().all(|v| *v > 0.0));
        for w in vals.windows(3) {
            assert!(w[0] + w[2] - 2.0 * w[1] >= -1e-14);
        }
    }

    #[test]
    fn eps_hat_example() {
        assert!((eps_hat(BH, 15.0) - 0.268941).abs() < 5e-7);
    }

    #[test]
    fn correlated_reference_instance() {
        let r = correlated_bound_check(45.0, BC, BH, 1e-4, CorrelationFamily { c: 1.0, p: 2.0 }, 50, 7).unwrap();
        assert!(r.satisfies_necessary);
        assert!(r.within(1e-2), "{r:?}");
        assert!(r.below_carnot(5e-2), "{r:?}");
        assert!(!CorrelationFamily { c: 1.0, p: 1.0 }.vanishes_faster_than_g());
    }

    #[test]
    fn uncorrelated_matches_simple_battery() {
        let r = correlated_bound_check(45.0, BC, BH, 1e-4, CorrelationFamily { c: 0.0, p: 1.0 }, 5, 1).unwrap();
        let s = Arc::new(EnergySpectrum::qubit(45.0).unwrap());
        let inst = TransitionInstance::thermal(s, BC, BC - 1e-4, BH, r.eps).unwrap();
        let w = w_alpha(&inst, AlphaValue::Infinity).unwrap();
        let eta = crate::macro_engine::efficiency_breakdown(&inst, w).unwrap().eta;
        assert!((r.eta_uncorrelated - eta).abs() < 1e-9);
        assert_eq!(r.eta_max, r.eta_uncorrelated);
    }

    #[test]
    fn general_battery_equal_below_eps_hat() {
        let ladder = Arc::new(EnergySpectrum::new(vec![0.0, 0.5, 1.0, 15.0]).unwrap());
        let base = BatterySpec::new(0.1).unwrap().with_levels(ladder.clone(), 0, 2).unwrap();
        let junk = DiagonalState::new(ladder, vec![0.3, 0.3, 0.0, 0.4]).unwrap();
        let gb = GeneralBattery::new(base, junk).unwrap();
        assert!((gb.trace_distance() - 0.1).abs() < 1e-12);
        let s = Arc::new(EnergySpectrum::qubit(45.0).unwrap());
        let inst = TransitionInstance::thermal(s, BC, BC - 1e-3, BH, 0.1).unwrap();
        let pair = general_battery_pair(&inst, &gb).unwrap();
        assert!(pair.eps_hat > 0.1);
        assert!(pair.equal);
        assert_eq!(pair.branch, BatteryBranch::Target);
    }

    #[test]
    fn junk_on_target_rejected() {
        let ladder = Arc::new(EnergySpectrum::new(vec![0.0, 1.0, 2.0]).unwrap());
        let base = BatterySpec::new(0.1).unwrap().with_levels(ladder.clone(), 0, 1).unwrap();
        let junk = DiagonalState::new(ladder, vec![0.5, 0.5, 0.0]).unwrap();
        assert!(matches!(GeneralBattery::new(base, junk), Err(Error::Invariant(_))));
    }
}
