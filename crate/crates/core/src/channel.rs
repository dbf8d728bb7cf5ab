//! Amplitude-damping channel driven by the damped Jaynes-Cummings model on
//! resonance.
//!
//! The channel is parameterized by the qubit decay rate Γ and the
//! dimensionless coupling ratio α = 2γ/Γ (γ is the system-reservoir
//! coupling). Its entire action is captured by the excited-state survival
//! probability p(t):
//!
//! * α > 1 (strong coupling): p(t) = e^{-Γt} [cos(ωt) + sin(ωt)/√(α-1)]²
//!   with ω = Γ√(α-1)/2 — damped oscillations, coherence revivals.
//! * α < 1 (weak coupling): the analytic continuation replaces cos/sin with
//!   cosh/sinh of ω̃ = Γ√(1-α)/2 — monotone decay.
//! * α = 1: the degenerate limit e^{-Γt} (1 + Γt/2)².
//!
//! p depends only on the pair (Γt, α), so everything here works in the
//! dimensionless time τ = Γt internally.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qubit::{DensityMatrix, Mat2, INVARIANT_TOL};

/// Branch threshold around the degenerate point α = 1. Inside it the limit
/// form is used to avoid dividing by a vanishing √|α-1|.
pub const DEGENERATE_ALPHA_TOL: f64 = 1e-9;

/// Round-off guard for computed probabilities: values this far outside
/// [0, 1] are clamped; anything worse is an internal error.
const CLAMP_TOL: f64 = 1e-12;

/// Physical knobs of the channel: α = 2γ/Γ and the decay rate Γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    alpha: f64,
    gamma_rate: f64,
}

impl ChannelParams {
    pub fn new(alpha: f64, gamma_rate: f64) -> Result<Self> {
        if !alpha.is_finite() || !gamma_rate.is_finite() {
            return Err(Error::NonFinite { context: "channel parameters" });
        }
        if alpha < 0.0 {
            return Err(Error::InvalidParameter(format!("alpha must be >= 0, got {alpha}")));
        }
        if gamma_rate <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "decay rate must be > 0, got {gamma_rate}"
            )));
        }
        Ok(ChannelParams { alpha, gamma_rate })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Γ, the qubit decay rate.
    pub fn gamma_rate(&self) -> f64 {
        self.gamma_rate
    }

    /// System-reservoir coupling γ = αΓ/2.
    pub fn coupling(&self) -> f64 {
        0.5 * self.alpha * self.gamma_rate
    }

    /// Dimensionless time τ = Γt for a real time t.
    pub fn tau(&self, t: f64) -> f64 {
        self.gamma_rate * t
    }

    /// Display conversion γt = (α/2)·Γt used on plot axes.
    pub fn gamma_t(&self, tau: f64) -> f64 {
        0.5 * self.alpha * tau
    }

    /// True in the strong-coupling (revival) regime.
    pub fn non_markovian(&self) -> bool {
        self.alpha > 1.0
    }
}

/// Excited-state survival probability, guaranteed inside [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SurvivalProbability(f64);

impl SurvivalProbability {
    /// Strict constructor for externally supplied probabilities.
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() {
            return Err(Error::NonFinite { context: "survival probability" });
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "survival probability must lie in [0, 1], got {p}"
            )));
        }
        Ok(SurvivalProbability(p))
    }

    /// Constructor for internally computed values: round-off within
    /// [`CLAMP_TOL`] of the [0, 1] boundary is clamped and logged, anything
    /// beyond that indicates a numerics bug.
    pub fn from_computed(p: f64) -> Result<Self> {
        if !p.is_finite() {
            return Err(Error::Internal("computed survival probability is not finite".into()));
        }
        if (0.0..=1.0).contains(&p) {
            return Ok(SurvivalProbability(p));
        }
        if (-CLAMP_TOL..0.0).contains(&p) {
            log::warn!("clamping survival probability round-off {p:e} to 0");
            return Ok(SurvivalProbability(0.0));
        }
        if p > 1.0 && p <= 1.0 + CLAMP_TOL {
            log::warn!("clamping survival probability round-off {p:e} to 1");
            return Ok(SurvivalProbability(1.0));
        }
        Err(Error::Internal(format!("computed survival probability {p} far outside [0, 1]")))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// p as a function of (α, τ = Γt) only. Inputs are assumed validated.
fn p_dimensionless(alpha: f64, tau: f64) -> f64 {
    let half_tau = 0.5 * tau;
    let g = if (alpha - 1.0).abs() <= DEGENERATE_ALPHA_TOL {
        (1.0 + half_tau) * (-half_tau).exp()
    } else if alpha > 1.0 {
        let s = (alpha - 1.0).sqrt();
        let u = s * half_tau;
        (u.cos() + u.sin() / s) * (-half_tau).exp()
    } else {
        let s = (1.0 - alpha).sqrt();
        let u = s * half_tau;
        if u <= 350.0 {
            (u.cosh() + u.sinh() / s) * (-half_tau).exp()
        } else {
            // cosh/sinh would overflow; drop the decaying exponential
            // (relative weight below e^{-700}) and fold the growing one
            // into the envelope. s < 1 keeps the exponent negative.
            0.5 * (1.0 + 1.0 / s) * ((s - 1.0) * half_tau).exp()
        }
    };
    g * g
}

/// Survival probability at dimensionless time τ = Γt.
pub fn survival_p_tau(alpha: f64, tau: f64) -> Result<SurvivalProbability> {
    if !alpha.is_finite() || !tau.is_finite() {
        return Err(Error::NonFinite { context: "survival probability arguments" });
    }
    if alpha < 0.0 {
        return Err(Error::InvalidParameter(format!("alpha must be >= 0, got {alpha}")));
    }
    if tau < 0.0 {
        return Err(Error::InvalidParameter(format!("time must be >= 0, got Γt = {tau}")));
    }
    SurvivalProbability::from_computed(p_dimensionless(alpha, tau))
}

/// Survival probability at real time t >= 0.
pub fn survival_p(params: &ChannelParams, t: f64) -> Result<SurvivalProbability> {
    if !t.is_finite() {
        return Err(Error::NonFinite { context: "time" });
    }
    if t < 0.0 {
        return Err(Error::InvalidParameter(format!("time must be >= 0, got {t}")));
    }
    survival_p_tau(params.alpha(), params.tau(t))
}

/// The incoherent Kraus pair of the channel,
/// K0 = |0><0| + √p |1><1| and K1 = √(1-p) |0><1|.
pub fn kraus_operators(p: SurvivalProbability) -> (Mat2, Mat2) {
    let sp = p.value().sqrt();
    let sq = (1.0 - p.value()).sqrt();
    let k0 = Mat2::diag(Complex64::ONE, Complex64::new(sp, 0.0));
    let k1 = Mat2::new(
        Complex64::ZERO,
        Complex64::new(sq, 0.0),
        Complex64::ZERO,
        Complex64::ZERO,
    );
    (k0, k1)
}

/// Apply the channel: ρ -> K0 ρ K0† + K1 ρ K1†.
///
/// The result has populations (ρ11 + (1-p)ρ22, p ρ22) and coherence √p ρ12.
pub fn apply_channel(rho: &DensityMatrix, p: SurvivalProbability) -> DensityMatrix {
    let (k0, k1) = kraus_operators(p);
    let m = rho.matrix();
    let out = k0 * m * k0.adjoint() + k1 * m * k1.adjoint();
    DensityMatrix::from_matrix(&out)
        .expect("amplitude damping maps valid states to valid states")
}

/// Joint system-reservoir pure state over the basis
/// {|0>_S|0>_R, |1>_S|0>_R, |0>_S|1>_R, |1>_S|1>_R}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointState {
    amps: [Complex64; 4],
}

impl JointState {
    pub fn new(amps: [Complex64; 4]) -> Result<Self> {
        if !amps.iter().all(|a| a.re.is_finite() && a.im.is_finite()) {
            return Err(Error::NonFinite { context: "joint state amplitudes" });
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > INVARIANT_TOL {
            return Err(Error::InvalidState(format!(
                "joint state norm {norm} deviates from 1"
            )));
        }
        Ok(JointState { amps })
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Partial trace over the reservoir, leaving the system state.
    pub fn trace_out_reservoir(&self) -> DensityMatrix {
        let v0 = (self.amps[0], self.amps[1]);
        let v1 = (self.amps[2], self.amps[3]);
        let m = Mat2::outer(v0) + Mat2::outer(v1);
        DensityMatrix::from_matrix(&m).expect("partial trace of a unit vector is a valid state")
    }
}

/// Action of the channel on |ψ+>_S |0>_R as a joint pure state:
/// amplitudes (1, √p, √(1-p), 0) / √2.
pub fn joint_map(p: SurvivalProbability) -> JointState {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let sp = p.value().sqrt();
    let sq = (1.0 - p.value()).sqrt();
    JointState::new([
        Complex64::new(inv_sqrt2, 0.0),
        Complex64::new(sp * inv_sqrt2, 0.0),
        Complex64::new(sq * inv_sqrt2, 0.0),
        Complex64::ZERO,
    ])
    .expect("map amplitudes are normalized by construction")
}
