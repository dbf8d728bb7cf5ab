//! Coherence-based non-Markovianity quantifier N_C for the amplitude-damping
//! channel.
//!
//! N_C integrates dC/dt over the intervals where coherence rises, maximized
//! over initial states. For this channel C(t) = C(0)√p(t), so the rises are
//! the revivals of p and everything reduces to the revival geometry:
//!
//! * maxima at t_m = 2πm / (Γ√(α-1)), where C = C(0) e^{-πm/√(α-1)},
//! * zeros at t_m^min = t_{m+1}^max - 2 arctan(√(α-1)) / (Γ√(α-1)),
//!
//! giving the partial sums Σ_{m=1..k} e^{-πm/√(α-1)} over k revivals and the
//! closed form (e^{π/√(α-1)} - 1)^{-1} for the full series. For α <= 1 the
//! decay is monotone and N_C = 0.
//!
//! The numeric route sums positive first differences of C on a uniform grid
//! and exists to cross-check the closed forms (and to process sampled,
//! experiment-style traces where no closed form applies).

use std::f64::consts::PI;
use std::io::{self, Write};

use serde::{Serialize, Serializer};

use crate::channel::{survival_p_tau, ChannelParams};
use crate::coherence::trace_coherence;
use crate::error::{Error, Result};
use crate::qubit::{from_bloch, BlochVector, DensityMatrix};

/// Default peak prominence used when counting revivals in sampled traces.
/// Filters grid noise while keeping peaks down to the few-percent scale.
pub const REVIVAL_PROMINENCE: f64 = 1e-3;

/// How a non-Markovianity value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Closed form, all revivals.
    AnalyticInfinite,
    /// Partial sum over the first k revivals.
    AnalyticPartial(u32),
    /// Positive-increment sum over a sampled trace.
    NumericGrid,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::AnalyticInfinite => write!(f, "analytic_infinite"),
            Method::AnalyticPartial(k) => write!(f, "analytic_partial({k})"),
            Method::NumericGrid => write!(f, "numeric_grid"),
        }
    }
}

impl Serialize for Method {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A non-Markovianity value together with its provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonMarkovianity {
    pub value: f64,
    pub method: Method,
    pub alpha: f64,
}

/// Times of the first k coherence maxima (m = 1..k) and the zeros preceding
/// them (m = 0..k-1), in real time units. Only defined for α > 1.
#[derive(Debug, Clone)]
pub struct RevivalSchedule {
    params: ChannelParams,
    maxima: Vec<f64>,
    minima: Vec<f64>,
}

impl RevivalSchedule {
    pub fn params(&self) -> &ChannelParams {
        &self.params
    }

    /// t_m^max for m = 1..k.
    pub fn maxima(&self) -> &[f64] {
        &self.maxima
    }

    /// t_m^min for m = 0..k-1; the m-th rise runs from minima[m] to
    /// maxima[m].
    pub fn minima(&self) -> &[f64] {
        &self.minima
    }

    /// The rising intervals (t_{m-1}^min, t_m^max) whose coherence gains sum
    /// to the partial N_C.
    pub fn rising_intervals(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.minima.iter().copied().zip(self.maxima.iter().copied())
    }
}

fn require_revivals(alpha: f64) -> Result<f64> {
    if !alpha.is_finite() {
        return Err(Error::NonFinite { context: "alpha" });
    }
    if alpha <= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "no revivals exist for alpha = {alpha} (Markovian regime, alpha <= 1)"
        )));
    }
    Ok((alpha - 1.0).sqrt())
}

/// Closed-form N_C(α): (e^{π/√(α-1)} - 1)^{-1} for α > 1, zero otherwise.
pub fn nc_analytic(alpha: f64) -> Result<NonMarkovianity> {
    if !alpha.is_finite() {
        return Err(Error::NonFinite { context: "alpha" });
    }
    if alpha < 0.0 {
        return Err(Error::InvalidParameter(format!("alpha must be >= 0, got {alpha}")));
    }
    let value = if alpha > 1.0 {
        ((PI / (alpha - 1.0).sqrt()).exp() - 1.0).recip()
    } else {
        0.0
    };
    Ok(NonMarkovianity { value, method: Method::AnalyticInfinite, alpha })
}

/// Partial sum over the first k revivals, Σ_{m=1..k} e^{-πm/√(α-1)}
/// (maximal initial coherence, C(0) = 1).
pub fn nc_partial(alpha: f64, revivals: u32) -> Result<NonMarkovianity> {
    let s = require_revivals(alpha)?;
    if revivals == 0 {
        return Err(Error::InvalidParameter("at least one revival required".into()));
    }
    let q = (-PI / s).exp();
    let mut value = 0.0;
    let mut term = 1.0;
    for _ in 0..revivals {
        term *= q;
        value += term;
        if term < f64::MIN_POSITIVE {
            break;
        }
    }
    Ok(NonMarkovianity { value, method: Method::AnalyticPartial(revivals), alpha })
}

/// √α/π, the large-α behavior of the closed form.
///
/// Defined for any α >= 0 so sweeps can tabulate the reference curve, but
/// only meaningful deep in the strong-coupling regime.
pub fn nc_asymptotic(alpha: f64) -> f64 {
    alpha.sqrt() / PI
}

/// Times of the first k coherence maxima and the preceding zeros.
pub fn revival_schedule(params: &ChannelParams, revivals: u32) -> Result<RevivalSchedule> {
    let s = require_revivals(params.alpha())?;
    if revivals == 0 {
        return Err(Error::InvalidParameter("at least one revival required".into()));
    }
    let gamma_rate = params.gamma_rate();
    let spacing = 2.0 * PI / (gamma_rate * s);
    let pullback = 2.0 * s.atan() / (gamma_rate * s);
    let maxima: Vec<f64> = (1..=revivals).map(|m| spacing * m as f64).collect();
    let minima: Vec<f64> = (0..revivals)
        .map(|m| spacing * (m + 1) as f64 - pullback)
        .collect();
    Ok(RevivalSchedule { params: *params, maxima, minima })
}

/// Dimensionless window [0, Γ t_k^min] that contains exactly k complete
/// revivals: the k-th rise and its following fall both end inside it.
pub fn window_for_revivals(alpha: f64, revivals: u32) -> Result<f64> {
    let s = require_revivals(alpha)?;
    if revivals == 0 {
        return Err(Error::InvalidParameter("at least one revival required".into()));
    }
    Ok((2.0 * PI * (revivals + 1) as f64 - 2.0 * s.atan()) / s)
}

/// Dimensionless window for a weak-coupling (α <= 1) trace: the time at
/// which the survival probability has dropped below 1e-4, i.e. coherence
/// below 1% of its initial value.
pub fn decay_window_tau(alpha: f64) -> Result<f64> {
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::InvalidParameter(format!("alpha must be >= 0, got {alpha}")));
    }
    if alpha > 1.0 {
        return Err(Error::InvalidParameter(
            "decay window is only defined in the Markovian regime (alpha <= 1)".into(),
        ));
    }
    if alpha == 0.0 {
        // zero coupling never decays; fall back to a fixed window
        return Ok(30.0);
    }
    let mut tau = 0.0;
    while tau < 10_000.0 {
        tau += 0.01;
        if survival_p_tau(alpha, tau)?.value() < 1e-4 {
            return Ok(tau);
        }
    }
    Ok(10_000.0)
}

/// Sum of the positive first differences of a sampled series — the discrete
/// backflow integral.
pub fn positive_increment_sum(values: &[f64]) -> f64 {
    let sum: f64 = values
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|d| *d > 0.0)
        .sum();
    // the empty sum folds from -0.0
    if sum == 0.0 {
        0.0
    } else {
        sum
    }
}

/// Count local maxima with at least `min_prominence` of height above the
/// deeper of the valleys separating them from higher ground.
pub fn count_revivals(values: &[f64], min_prominence: f64) -> usize {
    let n = values.len();
    let mut count = 0;
    for i in 1..n.saturating_sub(1) {
        let v = values[i];
        if !(v > values[i - 1] && v > values[i + 1]) {
            continue;
        }
        // walk outward until a higher sample (or the boundary), tracking the
        // lowest point passed on each side
        let mut left_min = v;
        for j in (0..i).rev() {
            left_min = left_min.min(values[j]);
            if values[j] > v {
                break;
            }
        }
        let mut right_min = v;
        for value in values.iter().skip(i + 1) {
            right_min = right_min.min(*value);
            if *value > v {
                break;
            }
        }
        if v - left_min.max(right_min) >= min_prominence {
            count += 1;
        }
    }
    count
}

/// Smallest grid size admissible for `nc_numeric` over [0, tau_max]:
/// at least 200 samples per oscillation half-period 2π/√(α-1) of p for
/// α > 1, and at least 10⁴ samples in the monotone regime.
pub fn min_grid_steps(alpha: f64, tau_max: f64) -> Result<usize> {
    if !alpha.is_finite() || !tau_max.is_finite() || alpha < 0.0 || tau_max <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "need alpha >= 0 and tau_max > 0, got alpha = {alpha}, tau_max = {tau_max}"
        )));
    }
    if alpha <= 1.0 {
        return Ok(10_000);
    }
    let s = (alpha - 1.0).sqrt();
    let h_max = PI / (100.0 * s);
    let required = (tau_max / h_max).ceil();
    if required > 2e7 {
        return Err(Error::InvalidParameter(format!(
            "grid rule needs {required:.0} steps for alpha = {alpha} over Γt = {tau_max}; \
             shrink the window"
        )));
    }
    Ok((required as usize).max(2))
}

/// Grid size targeting a positive-increment quadrature error well under
/// 1e-3.
///
/// C = C(0) e^{-τ/2} |cos(u) + sin(u)/s| has a kink at each zero with slope
/// √α/2 · e^{-τ/2}; a uniform grid of step h loses at most slope·h/2 of each
/// rise there, and the smooth peaks only contribute O(h²). Sizing h against
/// the summed kink slopes bounds the total error by `target_err`.
pub fn recommended_steps(alpha: f64, tau_max: f64) -> Result<usize> {
    let floor = min_grid_steps(alpha, tau_max)?;
    if alpha <= 1.0 {
        return Ok(floor);
    }
    let s = (alpha - 1.0).sqrt();
    let spacing = 2.0 * PI / s;
    let pullback = 2.0 * s.atan() / s;
    let target_err = 2.5e-4;
    let mut slope_sum = 0.0;
    let mut m = 0u32;
    loop {
        let tau_min_m = spacing * (m + 1) as f64 - pullback;
        if tau_min_m >= tau_max || m > 10_000 {
            break;
        }
        slope_sum += 0.5 * alpha.sqrt() * (-0.5 * tau_min_m).exp();
        m += 1;
    }
    if slope_sum == 0.0 {
        return Ok(floor);
    }
    let h = 2.0 * target_err / slope_sum;
    let wanted = (tau_max / h).ceil().min(2e7) as usize;
    Ok(wanted.max(floor))
}

/// Backflow of coherence for a fixed initial state: sum of the positive
/// increments of C over a uniform grid on [0, tau_max].
///
/// The grid must satisfy [`min_grid_steps`]; too-coarse grids are rejected
/// rather than silently producing under-resolved values.
pub fn nc_numeric(
    params: &ChannelParams,
    rho0: &DensityMatrix,
    tau_max: f64,
    n_steps: usize,
) -> Result<NonMarkovianity> {
    let floor = min_grid_steps(params.alpha(), tau_max)?;
    if n_steps < floor {
        return Err(Error::InvalidParameter(format!(
            "grid of {n_steps} steps violates the resolution rule ({floor} required \
             for alpha = {} over Γt = {tau_max})",
            params.alpha()
        )));
    }
    let trace = trace_coherence(params, rho0, tau_max, n_steps)?;
    let value = positive_increment_sum(&trace.coherence_values());
    Ok(NonMarkovianity { value, method: Method::NumericGrid, alpha: params.alpha() })
}

/// Result of the initial-state maximization.
#[derive(Debug, Clone, Copy)]
pub struct NcMaximum {
    pub nc: NonMarkovianity,
    pub argmax: BlochVector,
}

/// Maximize `nc_numeric` over a grid of initial states: pure states over a
/// polar × azimuthal angle grid plus mixed states along radial lines.
///
/// The polar grid always contains the equator, where |ρ12| = 1/2 and the
/// maximum lives. Ties resolve deterministically toward the lexicographically
/// larger (s_z, s_x, s_y), so the reported argmax does not depend on
/// evaluation order.
pub fn nc_maximize(
    params: &ChannelParams,
    tau_max: f64,
    n_steps: usize,
    bloch_grid: usize,
) -> Result<NcMaximum> {
    if bloch_grid < 8 {
        return Err(Error::InvalidParameter(format!(
            "bloch grid needs at least 8 samples per angular dimension, got {bloch_grid}"
        )));
    }
    let mut polar: Vec<f64> = (0..bloch_grid)
        .map(|i| PI * i as f64 / (bloch_grid - 1) as f64)
        .collect();
    if bloch_grid.is_multiple_of(2) {
        polar.push(0.5 * PI);
    }
    let azimuth: Vec<f64> = (0..bloch_grid)
        .map(|j| 2.0 * PI * j as f64 / bloch_grid as f64)
        .collect();
    let radii = [0.25, 0.5, 0.75, 1.0];

    let mut best: Option<(NonMarkovianity, BlochVector)> = None;
    for &theta in &polar {
        for &phi in &azimuth {
            for &r in &radii {
                let b = BlochVector {
                    x: r * theta.sin() * phi.cos(),
                    y: r * theta.sin() * phi.sin(),
                    z: r * theta.cos(),
                };
                let rho0 = from_bloch(&b)?;
                let nc = nc_numeric(params, &rho0, tau_max, n_steps)?;
                let better = match &best {
                    None => true,
                    Some((cur, arg)) => {
                        nc.value > cur.value
                            || (nc.value == cur.value
                                && (b.z, b.x, b.y) > (arg.z, arg.x, arg.y))
                    }
                };
                if better {
                    best = Some((nc, b));
                }
            }
        }
    }
    let (nc, argmax) = best.expect("grid is never empty");
    Ok(NcMaximum { nc, argmax })
}

/// One row of an α sweep.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepPoint {
    pub alpha: f64,
    pub nc_analytic: f64,
    pub nc_numeric: f64,
    pub nc_asymptotic: f64,
    /// Revivals contained in the numeric window (0 in the Markovian regime).
    pub k_revivals_in_window: u32,
}

/// Evaluate one sweep row: the closed form, the asymptote, and a numeric
/// cross-check over a window of `revivals` complete revivals (or a fixed
/// Γt = 30 window when α <= 1).
pub fn sweep_point(params: &ChannelParams, revivals: u32) -> Result<SweepPoint> {
    let alpha = params.alpha();
    let analytic = nc_analytic(alpha)?.value;
    let (numeric, k) = if alpha > 1.0 {
        let window = window_for_revivals(alpha, revivals)?;
        let steps = recommended_steps(alpha, window)?;
        (nc_numeric(params, &DensityMatrix::plus(), window, steps)?.value, revivals)
    } else {
        (nc_numeric(params, &DensityMatrix::plus(), 30.0, 10_000)?.value, 0)
    };
    Ok(SweepPoint {
        alpha,
        nc_analytic: analytic,
        nc_numeric: numeric,
        nc_asymptotic: nc_asymptotic(alpha),
        k_revivals_in_window: k,
    })
}

pub fn write_sweep_csv<W: Write>(points: &[SweepPoint], w: &mut W) -> io::Result<()> {
    writeln!(w, "alpha,nc_analytic,nc_numeric,nc_asymptotic,k_revivals_in_window")?;
    for p in points {
        writeln!(
            w,
            "{:.16e},{:.16e},{:.16e},{:.16e},{}",
            p.alpha, p.nc_analytic, p.nc_numeric, p.nc_asymptotic, p.k_revivals_in_window
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{apply_channel, survival_p};
    use crate::coherence::coherence;
    use approx::assert_relative_eq;

    fn params(alpha: f64) -> ChannelParams {
        ChannelParams::new(alpha, 1.0).unwrap()
    }

    #[test]
    fn analytic_is_zero_in_markovian_regime() {
        for alpha in [0.0, 0.4, 1.0] {
            assert_eq!(nc_analytic(alpha).unwrap().value, 0.0);
        }
    }

    #[test]
    fn analytic_reference_values() {
        let nc20 = nc_analytic(20.0).unwrap();
        assert!((nc20.value - 0.95).abs() <= 0.005, "got {}", nc20.value);
        assert_eq!(nc20.method, Method::AnalyticInfinite);
        let nc200 = nc_analytic(200.0).unwrap();
        assert!((nc200.value - 4.01).abs() <= 0.01, "got {}", nc200.value);
    }

    #[test]
    fn analytic_rejects_negative_alpha() {
        assert!(nc_analytic(-1.0).is_err());
    }

    #[test]
    fn analytic_monotone_and_continuous_at_one() {
        let mut prev = 0.0;
        for i in 0..=400 {
            let alpha = i as f64 * 0.5;
            let v = nc_analytic(alpha).unwrap().value;
            assert!(v >= prev);
            prev = v;
        }
        assert!(nc_analytic(1.0 + 1e-6).unwrap().value <= 1e-6);
    }

    #[test]
    fn partial_reference_values() {
        let v = nc_partial(20.0, 5).unwrap();
        assert!((v.value - 0.92).abs() <= 0.005, "got {}", v.value);
        assert_eq!(v.method, Method::AnalyticPartial(5));
        let v = nc_partial(200.0, 3).unwrap();
        assert!((v.value - 1.95).abs() <= 0.005, "got {}", v.value);
    }

    #[test]
    fn single_revival_is_first_geometric_term() {
        for alpha in [2.0, 7.0, 50.0] {
            let s = (alpha - 1.0_f64).sqrt();
            assert_relative_eq!(
                nc_partial(alpha, 1).unwrap().value,
                (-PI / s).exp(),
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn partial_sums_monotone_and_bounded() {
        let full = nc_analytic(20.0).unwrap().value;
        let mut prev = 0.0;
        for k in 1..=60 {
            let v = nc_partial(20.0, k).unwrap().value;
            assert!(v >= prev);
            assert!(v <= full + 1e-15);
            prev = v;
        }
        assert!((nc_partial(20.0, 2000).unwrap().value - full).abs() <= 1e-12);
    }

    #[test]
    fn partial_rejects_markovian_alpha() {
        assert!(nc_partial(0.4, 5).is_err());
        assert!(nc_partial(1.0, 5).is_err());
        assert!(nc_partial(20.0, 0).is_err());
    }

    #[test]
    fn schedule_times_match_closed_forms() {
        // γt_1^max = 20π/√19 ≈ 14.41 for α = 20
        let sched = revival_schedule(&params(20.0), 1).unwrap();
        let p = params(20.0);
        assert!((p.gamma_t(p.tau(sched.maxima()[0])) - 14.41).abs() < 0.01);

        // Γt_1^max = 2π when √(α-1) = 1
        let sched = revival_schedule(&params(2.0), 1).unwrap();
        assert_relative_eq!(sched.maxima()[0], 2.0 * PI, max_relative = 1e-14);

        // α = 200: γt_m^max ≈ 44.54·m, three inside γt <= 140
        let sched = revival_schedule(&params(200.0), 3).unwrap();
        let p = params(200.0);
        for (m, t) in sched.maxima().iter().enumerate() {
            let gt = p.gamma_t(p.tau(*t));
            assert_relative_eq!(gt, 44.5404 * (m + 1) as f64, epsilon = 0.01);
            assert!(gt <= 140.0);
        }
    }

    #[test]
    fn schedule_interleaves() {
        let sched = revival_schedule(&params(5.0), 6).unwrap();
        for m in 0..6 {
            assert!(sched.minima()[m] < sched.maxima()[m]);
            if m > 0 {
                assert!(sched.maxima()[m - 1] < sched.minima()[m]);
            }
        }
    }

    #[test]
    fn coherence_at_schedule_extrema() {
        for alpha in [2.0, 20.0, 200.0] {
            let pr = params(alpha);
            let s = (alpha - 1.0_f64).sqrt();
            let sched = revival_schedule(&pr, 3).unwrap();
            for (m, t) in sched.maxima().iter().enumerate() {
                let p = survival_p(&pr, *t).unwrap();
                let c = coherence(&apply_channel(&DensityMatrix::plus(), p)).value();
                let expected = (-PI * (m + 1) as f64 / s).exp();
                assert!(
                    (c - expected).abs() <= 1e-10,
                    "alpha={alpha} m={} c={c} expected={expected}",
                    m + 1
                );
            }
            for t in sched.minima() {
                let p = survival_p(&pr, *t).unwrap();
                let c = coherence(&apply_channel(&DensityMatrix::plus(), p)).value();
                assert!(c <= 1e-10, "alpha={alpha} c={c} at minimum");
            }
        }
    }

    #[test]
    fn schedule_rejects_markovian_alpha() {
        assert!(revival_schedule(&params(0.4), 3).is_err());
    }

    #[test]
    fn numeric_vanishes_in_markovian_regime() {
        let v = nc_numeric(&params(0.4), &DensityMatrix::plus(), 30.0, 10_000).unwrap();
        assert!(v.value <= 1e-6, "got {}", v.value);
        assert_eq!(v.method, Method::NumericGrid);
    }

    #[test]
    fn numeric_matches_partial_sum_for_weak_revivals() {
        // 20 complete revivals at α = 2 reach the infinite sum to ~1e-28;
        // independent oracle: direct numeric summation of the series
        let oracle: f64 = (1..200).map(|m| (-PI * m as f64).exp()).sum();
        let window = window_for_revivals(2.0, 20).unwrap();
        let steps = recommended_steps(2.0, window).unwrap();
        let v = nc_numeric(&params(2.0), &DensityMatrix::plus(), window, steps).unwrap();
        assert!((v.value - oracle).abs() <= 1e-3, "got {} vs {}", v.value, oracle);
        assert!((oracle - 0.0452).abs() < 1e-4);
    }

    #[test]
    fn numeric_matches_partial_sum_at_alpha_20() {
        let window = window_for_revivals(20.0, 5).unwrap();
        let steps = recommended_steps(20.0, window).unwrap();
        let v = nc_numeric(&params(20.0), &DensityMatrix::plus(), window, steps).unwrap();
        let reference = nc_partial(20.0, 5).unwrap().value;
        assert!((v.value - reference).abs() <= 1e-2);
    }

    #[test]
    fn numeric_rejects_coarse_grids() {
        let window = window_for_revivals(20.0, 5).unwrap();
        let floor = min_grid_steps(20.0, window).unwrap();
        let err = nc_numeric(&params(20.0), &DensityMatrix::plus(), window, floor - 1);
        assert!(err.is_err());
    }

    #[test]
    fn maximizer_sits_on_the_equator() {
        let window = window_for_revivals(20.0, 2).unwrap();
        let steps = recommended_steps(20.0, window).unwrap();
        let max = nc_maximize(&params(20.0), window, steps, 8).unwrap();
        assert!(max.argmax.z.abs() <= 1e-12, "argmax off equator: {:?}", max.argmax);
        assert_relative_eq!(max.argmax.norm(), 1.0, epsilon = 1e-12);

        let rho = from_bloch(&max.argmax).unwrap();
        assert_relative_eq!(rho.r12().norm(), 0.5, epsilon = 1e-12);

        let at_plus = nc_numeric(&params(20.0), &DensityMatrix::plus(), window, steps).unwrap();
        assert!((max.nc.value - at_plus.value).abs() <= 1e-9);
    }

    #[test]
    fn maximize_is_zero_in_markovian_regime() {
        let max = nc_maximize(&params(0.4), 30.0, 10_000, 8).unwrap();
        assert_eq!(max.nc.value, 0.0);
    }

    #[test]
    fn maximize_rejects_tiny_grid() {
        assert!(nc_maximize(&params(20.0), 10.0, 100_000, 7).is_err());
    }

    #[test]
    fn backflow_is_linear_in_initial_coherence() {
        let window = window_for_revivals(20.0, 3).unwrap();
        let steps = recommended_steps(20.0, window).unwrap();
        let full = nc_numeric(&params(20.0), &DensityMatrix::plus(), window, steps)
            .unwrap()
            .value;
        let half_state = from_bloch(&BlochVector { x: 0.5, y: 0.0, z: 0.0 }).unwrap();
        let half = nc_numeric(&params(20.0), &half_state, window, steps).unwrap().value;
        assert!((half - 0.5 * full).abs() <= 1e-15, "half {half} vs full {full}");
    }

    #[test]
    fn asymptote_values() {
        assert!((nc_asymptotic(1e4) - 100.0 / PI).abs() <= 1e-2);
        assert!((nc_asymptotic(200.0) - 4.50).abs() <= 0.005);
        let ratio = nc_analytic(1e4).unwrap().value / nc_asymptotic(1e4);
        assert!((ratio - 1.0).abs() <= 0.02);
    }

    #[test]
    fn revival_counting_with_prominence_filter() {
        // two genuine peaks, one sub-prominence ripple
        let values = [0.0, 0.5, 0.1, 0.1004, 0.1, 0.3, 0.0];
        assert_eq!(count_revivals(&values, 1e-3), 2);
        assert_eq!(count_revivals(&values, 1e-5), 3);
        // monotone data has no peaks
        let values = [1.0, 0.8, 0.5, 0.2, 0.0];
        assert_eq!(count_revivals(&values, 1e-3), 0);
    }

    #[test]
    fn positive_increments_ignore_falls() {
        let sum = positive_increment_sum(&[1.0, 0.5, 0.7, 0.2, 0.4]);
        assert_relative_eq!(sum, 0.4, epsilon = 1e-15);
        assert_eq!(positive_increment_sum(&[1.0, 0.5, 0.25]), 0.0);
    }

    #[test]
    fn sweep_point_columns_are_consistent() {
        let pt = sweep_point(&params(20.0), 5).unwrap();
        assert_relative_eq!(pt.nc_analytic, nc_analytic(20.0).unwrap().value);
        assert!((pt.nc_numeric - nc_partial(20.0, 5).unwrap().value).abs() <= 1e-3);
        assert_eq!(pt.k_revivals_in_window, 5);

        let pt = sweep_point(&params(0.4), 5).unwrap();
        assert_eq!(pt.nc_analytic, 0.0);
        assert!(pt.nc_numeric <= 1e-6);
        assert_eq!(pt.k_revivals_in_window, 0);
    }
}
