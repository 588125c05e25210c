//! Online lifetime estimation over the per-interval loss-of-life stream.
//!
//! A cumulative moving average tracks the mean per-interval loss. Each
//! step the lifetime estimate is the remaining life at the average
//! consumption rate plus the time already elapsed, and a convergence
//! monitor watches the estimate settle.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Hours in one year of hourly intervals.
pub const HOURS_PER_YEAR: f64 = 8760.0;

/// Default relative-change tolerance for convergence detection.
pub const DEFAULT_TOLERANCE: f64 = 1e-5;

/// Default number of consecutive below-tolerance steps required.
pub const DEFAULT_WINDOW: usize = 24;

/// Running count and cumulative moving average of per-interval losses.
///
/// The average is updated with the recursive form
/// `CMA_{n+1} = (loss + n CMA_n) / (n + 1)`; [`cma_batch`] is the
/// batch-mean counterpart used as an independent check.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CmaState {
    count: u64,
    cma: f64,
}

impl CmaState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rebuild a state from persisted parts. `cma` is ignored when
    /// `count` is 0.
    pub fn from_parts(count: u64, cma: f64) -> Result<Self> {
        if count > 0 && !(cma >= 0.0) {
            return Err(Error::domain(format!("cma must be >= 0, got {cma}")));
        }
        Ok(Self {
            count,
            cma: if count == 0 { 0.0 } else { cma },
        })
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// The running mean, or `None` before the first update.
    pub fn cma(&self) -> Option<f64> {
        (self.count > 0).then_some(self.cma)
    }

    /// Fold one per-interval loss into the running average.
    pub fn update(&mut self, new_loss: f64) -> Result<()> {
        if !(new_loss >= 0.0) {
            return Err(Error::domain(format!(
                "loss must be >= 0, got {new_loss}"
            )));
        }
        let n = self.count as f64;
        self.cma = if self.count == 0 {
            new_loss
        } else {
            (new_loss + n * self.cma) / (n + 1.0)
        };
        self.count += 1;
        Ok(())
    }
}

/// Batch arithmetic mean of a loss sequence, using compensated (Kahan)
/// summation. Independent of the recursive update path.
pub fn cma_batch(losses: &[f64]) -> Result<f64> {
    if losses.is_empty() {
        return Err(Error::usage("batch mean requires a nonempty sequence"));
    }
    let mut sum = 0.0;
    let mut carry = 0.0;
    for &loss in losses {
        let y = loss - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    Ok(sum / losses.len() as f64)
}

/// Lifetime estimate after `step_index` samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifetimeEstimate {
    /// Remaining plus elapsed, years.
    pub total_years: f64,
    /// Remaining life at the average consumption rate: `Δt/(8760 CMA)`.
    pub remaining_years: f64,
    /// Time already observed: `n Δt / 8760`.
    pub elapsed_years: f64,
    /// Number of samples folded in so far (n).
    pub step_index: u64,
}

/// Estimated total lifetime from the current average loss rate.
pub fn estimate_lifetime(state: &CmaState, interval_hours: f64) -> Result<LifetimeEstimate> {
    if !(interval_hours > 0.0) {
        return Err(Error::domain(format!(
            "interval_hours must be > 0, got {interval_hours}"
        )));
    }
    let cma = state
        .cma()
        .ok_or_else(|| Error::usage("lifetime estimation requires at least one sample"))?;
    if cma == 0.0 {
        return Err(Error::NoObservableAging);
    }
    let remaining_years = interval_hours / (HOURS_PER_YEAR * cma);
    let elapsed_years = state.count as f64 * interval_hours / HOURS_PER_YEAR;
    Ok(LifetimeEstimate {
        total_years: remaining_years + elapsed_years,
        remaining_years,
        elapsed_years,
        step_index: state.count,
    })
}

/// Outcome of feeding one estimate to the convergence monitor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvergenceStatus {
    /// First step at which `window` consecutive relative changes stayed
    /// below the tolerance. Never moves once set.
    ConvergedAt(u64),
    NotConverged,
}

/// Detects when successive lifetime estimates settle: converged at the
/// first step where the last `window` relative changes
/// `|est_k - est_{k-1}| / est_{k-1}` are all below `tolerance`.
#[derive(Debug, Clone)]
pub struct ConvergenceMonitor {
    tolerance: f64,
    window: usize,
    // Last window+1 totals: enough to recompute the current streak.
    recent: VecDeque<f64>,
    converged_at: Option<u64>,
    last_step: Option<u64>,
}

impl ConvergenceMonitor {
    pub fn new(tolerance: f64, window: usize) -> Result<Self> {
        if !(tolerance > 0.0) {
            return Err(Error::domain(format!(
                "tolerance must be > 0, got {tolerance}"
            )));
        }
        if window < 1 {
            return Err(Error::domain("window must be >= 1".to_string()));
        }
        Ok(Self {
            tolerance,
            window,
            recent: VecDeque::with_capacity(window + 1),
            converged_at: None,
            last_step: None,
        })
    }

    /// Rebuild a monitor from persisted parts. `recent` must hold at most
    /// `window + 1` estimates, oldest first.
    pub fn from_parts(
        tolerance: f64,
        window: usize,
        recent: Vec<f64>,
        converged_at: Option<u64>,
        last_step: Option<u64>,
    ) -> Result<Self> {
        let mut monitor = Self::new(tolerance, window)?;
        if recent.len() > window + 1 {
            return Err(Error::usage(format!(
                "recent history holds {} entries, monitor window admits at most {}",
                recent.len(),
                window + 1
            )));
        }
        monitor.recent = recent.into();
        monitor.converged_at = converged_at;
        monitor.last_step = last_step;
        Ok(monitor)
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// Recent estimates, oldest first.
    pub fn recent(&self) -> impl Iterator<Item = f64> + '_ {
        self.recent.iter().copied()
    }

    pub fn converged_at(&self) -> Option<u64> {
        self.converged_at
    }

    pub fn last_step(&self) -> Option<u64> {
        self.last_step
    }

    /// Feed the next estimate, in step order, and report the status.
    pub fn check(&mut self, estimate: &LifetimeEstimate) -> Result<ConvergenceStatus> {
        if let Some(last) = self.last_step {
            if estimate.step_index <= last {
                return Err(Error::usage(format!(
                    "estimates must arrive in step order: got step {} after {}",
                    estimate.step_index, last
                )));
            }
        }
        self.last_step = Some(estimate.step_index);
        self.recent.push_back(estimate.total_years);
        while self.recent.len() > self.window + 1 {
            self.recent.pop_front();
        }
        if self.converged_at.is_none() && self.streak() >= self.window {
            self.converged_at = Some(estimate.step_index);
        }
        Ok(match self.converged_at {
            Some(step) => ConvergenceStatus::ConvergedAt(step),
            None => ConvergenceStatus::NotConverged,
        })
    }

    // Consecutive below-tolerance changes ending at the newest estimate.
    fn streak(&self) -> usize {
        let mut streak = 0;
        for i in (1..self.recent.len()).rev() {
            let prev = self.recent[i - 1];
            let rel = (self.recent[i] - prev).abs() / prev;
            if rel < self.tolerance {
                streak += 1;
            } else {
                break;
            }
        }
        streak
    }
}
