//! Jones-calculus emulation of the all-optical amplitude-damping bench.
//!
//! Layout: an H-polarized beam is rotated to +45° by a half-wave plate at
//! 22.5°, then enters a polarizing-interferometer channel. PBS1 splits H and
//! V; the reflected V arm carries a piezo phase Δφ and a half-wave plate
//! whose angle θ (measured from the vertical) sets the damping strength via
//! sin(2θ) = √(1-p); PBS2 recombines the arms into output path 0 while the
//! H component created in the V arm exits into path 1, playing the role of
//! the reservoir excitation. A final polarization tomography on the merged
//! output (tracing out the path) reads the system state back out.
//!
//! All Jones matrices use angles measured from the horizontal; the bench
//! converts the from-vertical θ of the damping plate internally.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_8};

use crate::channel::SurvivalProbability;
use crate::error::{Error, Result};
use crate::qubit::{DensityMatrix, Mat2, INVARIANT_TOL};
use crate::tomography::TomographyRecord;

/// Wave plate flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlateKind {
    Half,
    Quarter,
}

/// Ideal wave plate with its fast axis at `angle` radians from the
/// horizontal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavePlate {
    pub kind: PlateKind,
    pub angle: f64,
}

impl WavePlate {
    pub fn hwp(angle: f64) -> Self {
        WavePlate { kind: PlateKind::Half, angle }
    }

    pub fn qwp(angle: f64) -> Self {
        WavePlate { kind: PlateKind::Quarter, angle }
    }

    /// Jones matrix (unitary up to round-off).
    pub fn jones(&self) -> Mat2 {
        let c = self.angle.cos();
        let s = self.angle.sin();
        match self.kind {
            PlateKind::Half => {
                // HWP: |H> -> cos2θ|H> + sin2θ|V>, |V> -> sin2θ|H> - cos2θ|V>
                let c2 = Complex64::new(c * c - s * s, 0.0);
                let s2 = Complex64::new(2.0 * s * c, 0.0);
                Mat2::new(c2, s2, s2, -c2)
            }
            PlateKind::Quarter => {
                // QWP: retards the slow axis by i
                let i = Complex64::I;
                let cc = Complex64::new(c * c, 0.0);
                let ss = Complex64::new(s * s, 0.0);
                let sc = Complex64::new(s * c, 0.0);
                Mat2::new(cc + i * ss, sc - i * sc, sc - i * sc, ss + i * cc)
            }
        }
    }

    pub fn apply(&self, pol: (Complex64, Complex64)) -> (Complex64, Complex64) {
        self.jones().mul_vec(pol)
    }
}

/// Piezo-driven relative phase between the interferometer arms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseShifter {
    pub delta_phi: f64,
}

impl PhaseShifter {
    pub fn new(delta_phi: f64) -> Self {
        PhaseShifter { delta_phi }
    }

    pub fn apply(&self, pol: (Complex64, Complex64)) -> (Complex64, Complex64) {
        let phase = Complex64::from_polar(1.0, self.delta_phi);
        (pol.0 * phase, pol.1 * phase)
    }
}

/// Polarization ⊗ path amplitudes over {|H>|0>, |V>|0>, |H>|1>, |V>|1>}.
///
/// The bench has no lossy elements, so the state is held at unit norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesState {
    amps: [Complex64; 4],
}

impl JonesState {
    pub fn new(amps: [Complex64; 4]) -> Result<Self> {
        if !amps.iter().all(|a| a.re.is_finite() && a.im.is_finite()) {
            return Err(Error::NonFinite { context: "Jones amplitudes" });
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > INVARIANT_TOL {
            return Err(Error::InvalidState(format!(
                "Jones state norm {norm} deviates from 1 (lossless bench)"
            )));
        }
        Ok(JonesState { amps })
    }

    /// Amplitudes in basis order [H0, V0, H1, V1].
    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Partial trace over the path degree of freedom.
    pub fn reduced_state(&self) -> DensityMatrix {
        let path0 = (self.amps[0], self.amps[1]);
        let path1 = (self.amps[2], self.amps[3]);
        let m = Mat2::outer(path0) + Mat2::outer(path1);
        DensityMatrix::from_matrix(&m).expect("partial trace of a unit vector is a valid state")
    }
}

/// Bench settings: damping-plate angle θ (radians, from the vertical),
/// arm phase Δφ, interferometer visibility, per-port intensity noise
/// (Gaussian, relative to the total beam intensity), and the RNG seed for
/// that noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchConfig {
    theta: f64,
    delta_phi: f64,
    visibility: f64,
    intensity_noise: f64,
    rng_seed: u64,
}

impl BenchConfig {
    pub fn new(
        theta: f64,
        delta_phi: f64,
        visibility: f64,
        intensity_noise: f64,
        rng_seed: u64,
    ) -> Result<Self> {
        if !theta.is_finite() || !delta_phi.is_finite() {
            return Err(Error::NonFinite { context: "bench angles" });
        }
        if !visibility.is_finite() || !(0.0..=1.0).contains(&visibility) {
            return Err(Error::InvalidParameter(format!(
                "visibility must lie in [0, 1], got {visibility}"
            )));
        }
        if !intensity_noise.is_finite() || intensity_noise < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "intensity noise must be >= 0, got {intensity_noise}"
            )));
        }
        Ok(BenchConfig { theta, delta_phi, visibility, intensity_noise, rng_seed })
    }

    /// Noise-free bench at Δφ = 0 with perfect visibility.
    pub fn ideal(theta: f64) -> Self {
        BenchConfig { theta, delta_phi: 0.0, visibility: 1.0, intensity_noise: 0.0, rng_seed: 0 }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn delta_phi(&self) -> f64 {
        self.delta_phi
    }

    pub fn visibility(&self) -> f64 {
        self.visibility
    }

    pub fn intensity_noise(&self) -> f64 {
        self.intensity_noise
    }

    pub fn rng_seed(&self) -> u64 {
        self.rng_seed
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }
}

/// Plate angle emulating survival probability p: θ = ½ arcsin √(1-p),
/// in [0, π/4].
pub fn theta_from_p(p: SurvivalProbability) -> f64 {
    0.5 * (1.0 - p.value()).sqrt().asin()
}

/// Survival probability emulated by plate angle θ: p = cos²(2θ).
pub fn p_from_theta(theta: f64) -> Result<SurvivalProbability> {
    if !theta.is_finite() {
        return Err(Error::NonFinite { context: "plate angle" });
    }
    let c = (2.0 * theta).cos();
    SurvivalProbability::new(c * c)
}

/// Propagate the H-polarized input beam through the full bench.
///
/// With Δφ = 0 the output is (|H> + cos2θ |V>)|0> /√2 + sin2θ |H>|1> /√2;
/// a nonzero Δφ multiplies everything that traversed the reflected arm.
pub fn run_bench(config: &BenchConfig) -> JonesState {
    let zero = Complex64::ZERO;

    // preparation: H beam through HWP1 @ 22.5° -> |+>
    let prep = WavePlate::hwp(FRAC_PI_8).apply((Complex64::ONE, zero));

    // PBS1: H transmits, V reflects (reflection phase fixed to +1)
    let mut arm_t = (prep.0, zero);
    let mut arm_r = (zero, prep.1);

    // transmitted arm: HWP3 @ 0° keeps |H> unchanged
    arm_t = WavePlate::hwp(0.0).apply(arm_t);

    // reflected arm: piezo mirror phase, then the damping plate. Its θ is
    // specified from the vertical; from-horizontal equivalent is π/2 - θ,
    // which realizes |V> -> sin2θ|H> + cos2θ|V>.
    arm_r = PhaseShifter::new(config.delta_phi).apply(arm_r);
    arm_r = WavePlate::hwp(FRAC_PI_2 - config.theta).apply(arm_r);

    // PBS2 recombination: transmitted-arm H and reflected-arm V merge into
    // path 0; the reflected arm's H component exits into path 1.
    JonesState::new([arm_t.0, arm_r.1, arm_r.0, arm_t.1])
        .expect("lossless elements preserve the norm")
}

/// Polarization tomography of the merged output: ideal projective
/// intensities in the {H,V}, {+,-}, {R,L} bases computed from the reduced
/// state, degraded by the interferometer visibility (which scales ρ12) and
/// per-port detection noise, then renormalized per basis pair and clamped
/// to [0, 1].
///
/// Identical seeds produce bit-identical records.
pub fn measure_tomography(state: &JonesState, config: &BenchConfig) -> TomographyRecord {
    let rho = state.reduced_state();
    let r12 = rho.r12() * config.visibility;

    // |+> = (|H>+|V>)/√2, |R> = (|H>+i|V>)/√2 so that the Stokes inversion
    // reads s_x = I+ - I-, s_y = IR - IL
    let ideal = [
        rho.r11(),
        rho.r22(),
        0.5 + r12.re,
        0.5 - r12.re,
        0.5 - r12.im,
        0.5 + r12.im,
    ];

    let mut rng = ChaCha12Rng::seed_from_u64(config.rng_seed);
    let sigma = config.intensity_noise;
    let mut noisy = [0.0f64; 6];
    for (out, i) in noisy.iter_mut().zip(ideal) {
        let xi: f64 = StandardNormal.sample(&mut rng);
        *out = i + sigma * xi;
    }

    let mut normalized = [0.0f64; 6];
    for pair in 0..3 {
        let (a, b) = (noisy[2 * pair], noisy[2 * pair + 1]);
        let sum = a + b;
        let (a, b) = if sum > 1e-9 { (a / sum, b / sum) } else { (0.5, 0.5) };
        normalized[2 * pair] = a.clamp(0.0, 1.0);
        normalized[2 * pair + 1] = b.clamp(0.0, 1.0);
    }

    TomographyRecord {
        theta_deg: config.theta.to_degrees(),
        i_h: normalized[0],
        i_v: normalized[1],
        i_plus: normalized[2],
        i_minus: normalized[3],
        i_r: normalized[4],
        i_l: normalized[5],
        i_total: 1.0,
        seed: config.rng_seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::apply_channel;
    use approx::assert_relative_eq;
    use rand::Rng;
    use std::f64::consts::{FRAC_PI_4, PI};

    const S2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn theta_endpoints() {
        assert_eq!(theta_from_p(SurvivalProbability::new(1.0).unwrap()), 0.0);
        assert_relative_eq!(
            theta_from_p(SurvivalProbability::new(0.0).unwrap()),
            FRAC_PI_4,
            epsilon = 1e-15
        );
    }

    #[test]
    fn theta_quarter_damping_is_fifteen_degrees() {
        // p = 0.75 -> sin(2θ) = 0.5 -> θ = π/12
        let theta = theta_from_p(SurvivalProbability::new(0.75).unwrap());
        assert_relative_eq!(theta, PI / 12.0, epsilon = 1e-15);
    }

    #[test]
    fn theta_p_round_trip() {
        for k in 0..=100 {
            let p = SurvivalProbability::new(k as f64 / 100.0).unwrap();
            let back = p_from_theta(theta_from_p(p)).unwrap();
            assert!((back.value() - p.value()).abs() <= 1e-12);
        }
    }

    #[test]
    fn plates_are_unitary() {
        for i in 0..=16 {
            let angle = PI * i as f64 / 16.0;
            for plate in [WavePlate::hwp(angle), WavePlate::qwp(angle)] {
                let j = plate.jones();
                let dev = (j.adjoint() * j).max_dev_from_identity();
                assert!(dev < 1e-12, "{plate:?} deviates by {dev:e}");
            }
        }
    }

    #[test]
    fn damping_plate_action_on_vertical_input() {
        // from-vertical angle θ: |V> -> sin2θ|H> + cos2θ|V>
        for theta in [0.0, FRAC_PI_8, FRAC_PI_4] {
            let plate = WavePlate::hwp(FRAC_PI_2 - theta);
            let (h, v) = plate.apply((Complex64::ZERO, Complex64::ONE));
            assert_relative_eq!(h.re, (2.0 * theta).sin(), epsilon = 1e-12);
            assert_relative_eq!(v.re, (2.0 * theta).cos(), epsilon = 1e-12);
            assert!(h.im.abs() < 1e-15 && v.im.abs() < 1e-15);
        }
    }

    #[test]
    fn bench_at_zero_angle_recovers_plus_state() {
        let st = run_bench(&BenchConfig::ideal(0.0));
        let a = st.amplitudes();
        assert_relative_eq!(a[0].re, S2, epsilon = 1e-12);
        assert_relative_eq!(a[1].re, S2, epsilon = 1e-12);
        assert!(a[2].norm() < 1e-15 && a[3].norm() < 1e-15);
    }

    #[test]
    fn bench_at_full_damping_reroutes_excitation() {
        let st = run_bench(&BenchConfig::ideal(FRAC_PI_4));
        let a = st.amplitudes();
        assert_relative_eq!(a[0].re, S2, epsilon = 1e-12);
        assert!(a[1].norm() < 1e-12);
        assert_relative_eq!(a[2].re, S2, epsilon = 1e-12);
        assert!(a[3].norm() < 1e-15);
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn bench_at_thirty_degree_rotation() {
        // θ = π/12: cos30° = √3/2, sin30° = 1/2, over √2
        let st = run_bench(&BenchConfig::ideal(PI / 12.0));
        let a = st.amplitudes();
        assert_relative_eq!(a[0].re, 0.7071, epsilon = 1e-4);
        assert_relative_eq!(a[1].re, 0.6124, epsilon = 1e-4);
        assert_relative_eq!(a[2].re, 0.3536, epsilon = 1e-4);
    }

    #[test]
    fn piezo_phase_lands_on_reflected_arm() {
        let config = BenchConfig::new(PI / 12.0, 0.7, 1.0, 0.0, 0).unwrap();
        let a = *run_bench(&config).amplitudes();
        let phase = Complex64::from_polar(1.0, 0.7);
        assert!((a[1] / a[0] - phase * Complex64::new((PI / 6.0).cos(), 0.0)).norm() < 1e-12);
        assert_relative_eq!(run_bench(&config).norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn reduced_state_at_zero_angle_is_plus() {
        let rho = run_bench(&BenchConfig::ideal(0.0)).reduced_state();
        assert_relative_eq!(rho.r12().re, 0.5, epsilon = 1e-12);
        assert_relative_eq!(rho.r11(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn reduced_state_general_angle() {
        for i in 0..=8 {
            let theta = FRAC_PI_4 * i as f64 / 8.0;
            let rho = run_bench(&BenchConfig::ideal(theta)).reduced_state();
            let c2 = (2.0 * theta).cos();
            assert_relative_eq!(rho.r12().re, 0.5 * c2, epsilon = 1e-12);
            assert_relative_eq!(rho.r22(), 0.5 * c2 * c2, epsilon = 1e-12);
        }
    }

    #[test]
    fn all_horizontal_state_reduces_to_ground() {
        let st = JonesState::new([
            Complex64::new(S2, 0.0),
            Complex64::ZERO,
            Complex64::new(S2, 0.0),
            Complex64::ZERO,
        ])
        .unwrap();
        let rho = st.reduced_state();
        assert_relative_eq!(rho.r11(), 1.0, epsilon = 1e-12);
        assert!(rho.r12().norm() < 1e-15);
    }

    #[test]
    fn circuit_matches_kraus_channel() {
        let mut rng = ChaCha12Rng::seed_from_u64(20);
        for _ in 0..1000 {
            let p = SurvivalProbability::new(rng.random_range(0.0..=1.0)).unwrap();
            let config = BenchConfig::ideal(theta_from_p(p));
            let from_bench = run_bench(&config).reduced_state();
            let from_kraus = apply_channel(&DensityMatrix::plus(), p);
            assert!((from_bench.r11() - from_kraus.r11()).abs() <= 1e-12);
            assert!((from_bench.r22() - from_kraus.r22()).abs() <= 1e-12);
            assert!((from_bench.r12() - from_kraus.r12()).norm() <= 1e-12);
        }
    }

    #[test]
    fn ideal_tomography_of_initial_state() {
        let config = BenchConfig::ideal(0.0);
        let rec = measure_tomography(&run_bench(&config), &config);
        assert_relative_eq!(rec.i_h, 0.5, epsilon = 1e-12);
        assert_relative_eq!(rec.i_v, 0.5, epsilon = 1e-12);
        assert_relative_eq!(rec.i_plus, 1.0, epsilon = 1e-12);
        assert_relative_eq!(rec.i_minus, 0.0, epsilon = 1e-12);
        assert_relative_eq!(rec.i_r, 0.5, epsilon = 1e-12);
        assert_relative_eq!(rec.i_l, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn ideal_tomography_of_fully_damped_state() {
        let config = BenchConfig::ideal(FRAC_PI_4);
        let rec = measure_tomography(&run_bench(&config), &config);
        assert_relative_eq!(rec.i_h, 1.0, epsilon = 1e-12);
        assert_relative_eq!(rec.i_v, 0.0, epsilon = 1e-12);
        assert_relative_eq!(rec.i_plus, 0.5, epsilon = 1e-12);
        assert_relative_eq!(rec.i_r, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn visibility_scales_reconstructed_coherence() {
        let config = BenchConfig::new(0.0, 0.0, 0.98, 0.0, 0).unwrap();
        let rec = measure_tomography(&run_bench(&config), &config);
        let c = rec.i_plus - rec.i_minus;
        assert_relative_eq!(c, 0.98, epsilon = 1e-12);
    }

    #[test]
    fn tomography_is_deterministic_per_seed() {
        let config = BenchConfig::new(0.3, 0.0, 0.98, 0.015, 42).unwrap();
        let st = run_bench(&config);
        let a = measure_tomography(&st, &config);
        let b = measure_tomography(&st, &config);
        assert_eq!(a, b);
        let c = measure_tomography(&st, &config.with_seed(43));
        assert_ne!(a, c);
    }

    #[test]
    fn noisy_pairs_still_sum_to_one() {
        for seed in 0..200 {
            let config = BenchConfig::new(0.2, 0.0, 0.98, 0.015, seed).unwrap();
            let rec = measure_tomography(&run_bench(&config), &config);
            assert!((rec.i_h + rec.i_v - 1.0).abs() <= 1e-9);
            assert!((rec.i_plus + rec.i_minus - 1.0).abs() <= 1e-9);
            assert!((rec.i_r + rec.i_l - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn config_validation() {
        assert!(BenchConfig::new(0.0, 0.0, 1.1, 0.0, 0).is_err());
        assert!(BenchConfig::new(0.0, 0.0, 1.0, -0.1, 0).is_err());
        assert!(BenchConfig::new(f64::NAN, 0.0, 1.0, 0.0, 0).is_err());
    }
}
