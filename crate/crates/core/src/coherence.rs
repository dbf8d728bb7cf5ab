//! Trace-norm (= l1) coherence of a single qubit in the computational basis,
//! C(ρ) = 2|ρ12|, and its closed-form evolution C(t) = C(0)√p(t) under the
//! amplitude-damping channel.
//!
//! Coherence is basis-dependent by definition; this crate commits to the
//! fixed |0>/|1> basis everywhere and offers no basis rotations.

use std::io::{self, Write};

use crate::channel::{apply_channel, survival_p_tau, ChannelParams, SurvivalProbability};
use crate::error::{Error, Result};
use crate::qubit::DensityMatrix;

/// Coherence magnitude in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CoherenceValue(f64);

impl CoherenceValue {
    pub fn new(c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::NonFinite { context: "coherence value" });
        }
        if !(-1e-12..=1.0 + 1e-12).contains(&c) {
            return Err(Error::InvalidParameter(format!(
                "coherence must lie in [0, 1], got {c}"
            )));
        }
        Ok(CoherenceValue(c.clamp(0.0, 1.0)))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// C(ρ) = 2|ρ12|.
pub fn coherence(rho: &DensityMatrix) -> CoherenceValue {
    let c = 2.0 * rho.r12().norm();
    // positivity bounds |ρ12| by 1/2 up to invariant round-off
    CoherenceValue(c.clamp(0.0, 1.0))
}

/// C(t) = C(0) √p(t).
pub fn coherence_closed_form(c0: CoherenceValue, p: SurvivalProbability) -> CoherenceValue {
    CoherenceValue((c0.value() * p.value().sqrt()).clamp(0.0, 1.0))
}

/// One sample of a coherence time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    /// Dimensionless time τ = Γt.
    pub tau: f64,
    pub coherence: f64,
}

/// Coherence sampled on a uniform grid of dimensionless times, starting at
/// τ = 0.
#[derive(Debug, Clone)]
pub struct CoherenceTrace {
    params: ChannelParams,
    initial_state: DensityMatrix,
    points: Vec<TracePoint>,
}

impl CoherenceTrace {
    pub fn params(&self) -> &ChannelParams {
        &self.params
    }

    pub fn initial_state(&self) -> &DensityMatrix {
        &self.initial_state
    }

    pub fn points(&self) -> &[TracePoint] {
        &self.points
    }

    pub fn coherence_values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.coherence).collect()
    }

    /// CSV export, one row per sample. The γt column is the display
    /// conversion (α/2)·Γt.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "gamma_t,Gamma_t,coherence")?;
        for pt in &self.points {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e}",
                self.params.gamma_t(pt.tau),
                pt.tau,
                pt.coherence
            )?;
        }
        Ok(())
    }
}

/// Sample C(t) for an initial state evolved through the channel, on the
/// uniform grid of `n_steps + 1` points covering [0, tau_max].
pub fn trace_coherence(
    params: &ChannelParams,
    rho0: &DensityMatrix,
    tau_max: f64,
    n_steps: usize,
) -> Result<CoherenceTrace> {
    if !tau_max.is_finite() || tau_max <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "trace window must be positive, got Γt = {tau_max}"
        )));
    }
    if n_steps < 2 {
        return Err(Error::InvalidParameter(format!(
            "at least 2 grid steps required, got {n_steps}"
        )));
    }
    if n_steps > 20_000_000 {
        return Err(Error::InvalidParameter(format!(
            "grid of {n_steps} steps is too large"
        )));
    }
    let mut points = Vec::with_capacity(n_steps + 1);
    for k in 0..=n_steps {
        let tau = tau_max * k as f64 / n_steps as f64;
        let p = survival_p_tau(params.alpha(), tau)?;
        let c = coherence(&apply_channel(rho0, p));
        points.push(TracePoint { tau, coherence: c.value() });
    }
    Ok(CoherenceTrace { params: *params, initial_state: *rho0, points })
}
