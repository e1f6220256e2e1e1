//! Many quasi-static cycles charging one battery ladder.
//!
//! The number of cycles is chosen first and the per-cycle temperature step
//! follows from it, so cycles aggregate analytically.

use crate::error::{param, Error, Result};
use crate::macro_engine::{carnot, efficiency_breakdown};
use crate::nano_engine::{gamma, omega_single, EpsilonFamily, QuasiStaticConfig};
use crate::numerics::h2_unchecked;
use crate::second_laws::max_extractable_work;
use crate::thermo_core::QubitBath;

/// Default geometric schedule for convergence reports.
pub const DEFAULT_SCHEDULE: [u64; 4] = [100, 1_000, 10_000, 100_000];

#[derive(Debug, Clone, PartialEq)]
pub struct CycleLedger {
    pub n_cycles: u64,
    pub w_target: f64,
    pub e: f64,
    pub beta_c: f64,
    pub beta_h: f64,
    pub kappa_bar: f64,
    pub g: f64,
    pub eps: f64,
    pub w_per_cycle: f64,
    pub w_cyc: f64,
    /// Weight of the top rung, `(1 - eps)^N`.
    pub r: f64,
    pub battery_entropy: f64,
    pub eta: f64,
}

impl CycleLedger {
    /// Weight left off the top rung, computed without cancellation.
    pub fn one_minus_r(&self) -> f64 {
        -(self.n_cycles as f64 * (-self.eps).ln_1p()).exp_m1()
    }
}

pub fn plan_cycles(w: f64, e: f64, beta_c: f64, beta_h: f64, kappa_bar: f64, n: u64) -> Result<CycleLedger> {
    if !(w > 0.0) || !w.is_finite() {
        return Err(param("target work must be positive"));
    }
    if n == 0 {
        return Err(param("need at least one cycle"));
    }
    if !(kappa_bar > 0.0 && kappa_bar < 1.0) {
        return Err(param(format!("kappa_bar must lie in (0, 1), got {kappa_bar}")));
    }
    let gam = gamma(e, beta_c, beta_h, kappa_bar)?;
    let om = omega_single(e, beta_c, beta_h);
    if om > 1.0 {
        return Err(Error::OutOfRegime(format!("Omega = {om} exceeds 1")));
    }
    let g = beta_h * w / (gam * n as f64);
    let family = EpsilonFamily::power(1.0, kappa_bar)?;
    let cfg = QuasiStaticConfig::new(QubitBath::identical(e, 1)?, beta_c, beta_h, g, family)?;
    let inst = cfg.instance()?;
    let eps = inst.eps();
    let w_per_cycle = max_extractable_work(&inst)?.w_ext;
    let eta = efficiency_breakdown(&inst, w_per_cycle)?.eta;
    let nf = n as f64;
    Ok(CycleLedger {
        n_cycles: n,
        w_target: w,
        e,
        beta_c,
        beta_h,
        kappa_bar,
        g,
        eps,
        w_per_cycle,
        w_cyc: nf * w_per_cycle,
        r: (nf * (-eps).ln_1p()).exp(),
        battery_entropy: nf * h2_unchecked(eps),
        eta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleReport {
    pub n_cycles: u64,
    /// Carnot minus the per-cycle efficiency.
    pub delta_eta: f64,
    /// Shortfall of the charged work, `max(0, W - W_cyc)`.
    pub delta_work: f64,
    pub delta_entropy: f64,
    pub delta_failure: f64,
}

impl CycleReport {
    pub fn max(&self) -> f64 {
        self.delta_eta
            .max(self.delta_work)
            .max(self.delta_entropy)
            .max(self.delta_failure)
    }
}

pub fn run_cycles(ledger: &CycleLedger) -> CycleReport {
    CycleReport {
        n_cycles: ledger.n_cycles,
        delta_eta: carnot(ledger.beta_c, ledger.beta_h) - ledger.eta,
        delta_work: (ledger.w_target - ledger.w_cyc).max(0.0),
        delta_entropy: ledger.battery_entropy,
        delta_failure: ledger.one_minus_r(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Convergence {
    pub reports: Vec<CycleReport>,
    /// One flag per deficit, in report field order.
    pub decreasing: [bool; 4],
}

impl Convergence {
    pub fn all_decreasing(&self) -> bool {
        self.decreasing.iter().all(|d| *d)
    }

    /// Whether every deficit of the last report is below `delta`.
    pub fn final_below(&self, delta: f64) -> bool {
        self.reports.last().is_some_and(|r| r.max() < delta)
    }
}

/// Plans and runs each cycle count of an increasing schedule.
pub fn convergence(w: f64, e: f64, beta_c: f64, beta_h: f64, kappa_bar: f64, schedule: &[u64]) -> Result<Convergence> {
    if schedule.windows(2).any(|p| p[1] <= p[0]) {
        return Err(param("schedule must be strictly increasing"));
    }
    let reports = schedule
        .iter()
        .map(|&n| plan_cycles(w, e, beta_c, beta_h, kappa_bar, n).map(|l| run_cycles(&l)))
        .collect::<Result<Vec<_>>>()?;
    let dec = |f: fn(&CycleReport) -> f64| reports.windows(2).all(|p| f(&p[1]) < f(&p[0]) || f(&p[1]) == 0.0);
    let decreasing = [
        dec(|r| r.delta_eta),
        dec(|r| r.delta_work),
        dec(|r| r.delta_entropy),
        dec(|r| r.delta_failure),
    ];
    Ok(Convergence { reports, decreasing })
}
