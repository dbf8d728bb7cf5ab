//! Exact 2x2 complex linear algebra and validated single-qubit states.
//!
//! Basis convention, fixed once for the whole crate: index 0 is the ground
//! state |0> (horizontal polarization |H>), index 1 the excited state |1>
//! (vertical polarization |V>). The density matrix element `r12` is the
//! coherence between them; `r21` is implied by Hermiticity.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical tolerance for state invariants (Hermiticity, unit trace,
/// positivity). 2x2 double-precision algebra stays far inside this.
pub const INVARIANT_TOL: f64 = 1e-12;

/// A 2x2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub fn new(m00: Complex64, m01: Complex64, m10: Complex64, m11: Complex64) -> Self {
        Mat2([[m00, m01], [m10, m11]])
    }

    pub fn zero() -> Self {
        Mat2([[Complex64::ZERO; 2]; 2])
    }

    pub fn identity() -> Self {
        Mat2::new(Complex64::ONE, Complex64::ZERO, Complex64::ZERO, Complex64::ONE)
    }

    pub fn diag(a: Complex64, b: Complex64) -> Self {
        Mat2::new(a, Complex64::ZERO, Complex64::ZERO, b)
    }

    /// Outer product v v† of a two-component column vector.
    pub fn outer(v: (Complex64, Complex64)) -> Self {
        Mat2::new(v.0 * v.0.conj(), v.0 * v.1.conj(), v.1 * v.0.conj(), v.1 * v.1.conj())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Mat2::new(
            self.0[0][0].conj(),
            self.0[1][0].conj(),
            self.0[0][1].conj(),
            self.0[1][1].conj(),
        )
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: (Complex64, Complex64)) -> (Complex64, Complex64) {
        (
            self.0[0][0] * v.0 + self.0[0][1] * v.1,
            self.0[1][0] * v.0 + self.0[1][1] * v.1,
        )
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest absolute deviation from the identity, ∞-norm style.
    pub fn max_dev_from_identity(&self) -> f64 {
        let i = Mat2::identity();
        let mut dev: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                dev = dev.max((self.0[r][c] - i.0[r][c]).norm());
            }
        }
        dev
    }
}

impl std::ops::Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let mut out = Mat2::zero();
        for r in 0..2 {
            for c in 0..2 {
                out.0[r][c] = self.0[r][0] * rhs.0[0][c] + self.0[r][1] * rhs.0[1][c];
            }
        }
        out
    }
}

impl std::ops::Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let mut out = Mat2::zero();
        for r in 0..2 {
            for c in 0..2 {
                out.0[r][c] = self.0[r][c] + rhs.0[r][c];
            }
        }
        out
    }
}

impl std::ops::Mul<Complex64> for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Complex64) -> Mat2 {
        let mut out = self;
        for r in 0..2 {
            for c in 0..2 {
                out.0[r][c] *= rhs;
            }
        }
        out
    }
}

/// Real 3-vector (s_x, s_y, s_z) parameterizing a single-qubit state,
/// ρ = (I + s_x X + s_y Y + s_z Z) / 2.
///
/// Physical states satisfy |s| <= 1; that bound is enforced when a vector is
/// turned into a [`DensityMatrix`], not here, so that raw tomography output
/// (which can leave the ball under noise) is still representable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    #[serde(rename = "s_x")]
    pub x: f64,
    #[serde(rename = "s_y")]
    pub y: f64,
    #[serde(rename = "s_z")]
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::NonFinite { context: "Bloch vector components" });
        }
        Ok(BlochVector { x, y, z })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }
}

/// Validated 2x2 density matrix: Hermitian, unit trace, positive
/// semidefinite (all within [`INVARIANT_TOL`]).
///
/// Stored as the two real populations and the upper off-diagonal element;
/// `r21 = conj(r12)` always holds exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityMatrixJson", into = "DensityMatrixJson")]
pub struct DensityMatrix {
    r11: f64,
    r12: Complex64,
    r22: f64,
}

/// Wire format: `{"r11": x, "r22": x, "r12_re": x, "r12_im": x}`.
#[derive(Serialize, Deserialize)]
struct DensityMatrixJson {
    r11: f64,
    r22: f64,
    r12_re: f64,
    r12_im: f64,
}

impl From<DensityMatrix> for DensityMatrixJson {
    fn from(rho: DensityMatrix) -> Self {
        DensityMatrixJson {
            r11: rho.r11,
            r22: rho.r22,
            r12_re: rho.r12.re,
            r12_im: rho.r12.im,
        }
    }
}

impl TryFrom<DensityMatrixJson> for DensityMatrix {
    type Error = Error;
    fn try_from(j: DensityMatrixJson) -> Result<Self> {
        DensityMatrix::new(j.r11, Complex64::new(j.r12_re, j.r12_im), j.r22)
    }
}

impl DensityMatrix {
    /// Build a state from its populations and upper off-diagonal element.
    pub fn new(r11: f64, r12: Complex64, r22: f64) -> Result<Self> {
        if !(r11.is_finite() && r22.is_finite() && r12.re.is_finite() && r12.im.is_finite()) {
            return Err(Error::NonFinite { context: "density matrix entries" });
        }
        let trace_dev = (r11 + r22 - 1.0).abs();
        if trace_dev > INVARIANT_TOL {
            return Err(Error::InvalidState(format!(
                "trace deviates from 1 by {trace_dev:.3e}"
            )));
        }
        let det = r11 * r22 - r12.norm_sqr();
        if det < -INVARIANT_TOL || r11 < -INVARIANT_TOL || r22 < -INVARIANT_TOL {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (det = {det:.3e}, diag = ({r11:.3e}, {r22:.3e}))"
            )));
        }
        Ok(DensityMatrix { r11, r12, r22 })
    }

    /// Build a state from a full 2x2 matrix.
    ///
    /// Hermiticity deviations below [`INVARIANT_TOL`] are repaired by
    /// averaging `r21` against `conj(r12)`; larger deviations are errors.
    pub fn from_matrix(m: &Mat2) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite { context: "density matrix entries" });
        }
        let herm_dev = (m.0[1][0] - m.0[0][1].conj())
            .norm()
            .max(m.0[0][0].im.abs())
            .max(m.0[1][1].im.abs());
        if herm_dev > INVARIANT_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {herm_dev:.3e})"
            )));
        }
        let r12 = 0.5 * (m.0[0][1] + m.0[1][0].conj());
        DensityMatrix::new(m.0[0][0].re, r12, m.0[1][1].re)
    }

    /// Ground state |0><0| (= |H><H|).
    pub fn ground() -> Self {
        DensityMatrix { r11: 1.0, r12: Complex64::ZERO, r22: 0.0 }
    }

    /// Excited state |1><1| (= |V><V|).
    pub fn excited() -> Self {
        DensityMatrix { r11: 0.0, r12: Complex64::ZERO, r22: 1.0 }
    }

    /// Maximally coherent state |+><+|.
    pub fn plus() -> Self {
        DensityMatrix { r11: 0.5, r12: Complex64::new(0.5, 0.0), r22: 0.5 }
    }

    /// Maximally mixed state I/2.
    pub fn maximally_mixed() -> Self {
        DensityMatrix { r11: 0.5, r12: Complex64::ZERO, r22: 0.5 }
    }

    pub fn r11(&self) -> f64 {
        self.r11
    }

    pub fn r22(&self) -> f64 {
        self.r22
    }

    pub fn r12(&self) -> Complex64 {
        self.r12
    }

    pub fn r21(&self) -> Complex64 {
        self.r12.conj()
    }

    pub fn matrix(&self) -> Mat2 {
        Mat2::new(
            Complex64::new(self.r11, 0.0),
            self.r12,
            self.r12.conj(),
            Complex64::new(self.r22, 0.0),
        )
    }

    pub fn det(&self) -> f64 {
        self.r11 * self.r22 - self.r12.norm_sqr()
    }

    /// tr(ρ²) = (1 + |s|²) / 2 for Bloch vector s.
    pub fn purity(&self) -> f64 {
        self.r11 * self.r11 + self.r22 * self.r22 + 2.0 * self.r12.norm_sqr()
    }

    pub fn to_bloch(&self) -> BlochVector {
        BlochVector {
            x: 2.0 * self.r12.re,
            y: -2.0 * self.r12.im,
            z: self.r11 - self.r22,
        }
    }
}

/// ρ = (I + s·σ)/2. Rejects vectors outside the unit ball
/// (|s| > 1 + [`INVARIANT_TOL`]), which would not be a physical state.
pub fn from_bloch(b: &BlochVector) -> Result<DensityMatrix> {
    if !(b.x.is_finite() && b.y.is_finite() && b.z.is_finite()) {
        return Err(Error::NonFinite { context: "Bloch vector components" });
    }
    let n2 = b.norm_sqr();
    if n2 > 1.0 + INVARIANT_TOL {
        return Err(Error::InvalidParameter(format!(
            "Bloch vector norm {} exceeds 1 (unphysical state)",
            n2.sqrt()
        )));
    }
    Ok(DensityMatrix {
        r11: 0.5 * (1.0 + b.z),
        // + 0.0 normalizes a negative zero out of serialized output
        r12: Complex64::new(0.5 * b.x, -0.5 * b.y + 0.0),
        r22: 0.5 * (1.0 - b.z),
    })
}

/// Outcome of checking an arbitrary 2x2 matrix against the density-matrix
/// invariants. Pure report: nothing is rejected here.
#[derive(Debug, Clone, Copy)]
pub struct ValidationReport {
    /// max(|Im m11|, |Im m22|, |m21 - conj(m12)|)
    pub hermiticity_deviation: f64,
    /// |tr - 1|
    pub trace_deviation: f64,
    /// Smaller of the two real diagonal entries.
    pub min_diagonal: f64,
    /// Determinant of the Hermitized matrix.
    pub determinant: f64,
    pub finite: bool,
}

impl ValidationReport {
    pub fn hermitian_ok(&self) -> bool {
        self.finite && self.hermiticity_deviation <= INVARIANT_TOL
    }

    pub fn trace_ok(&self) -> bool {
        self.finite && self.trace_deviation <= INVARIANT_TOL
    }

    pub fn positive_ok(&self) -> bool {
        self.finite && self.determinant >= -INVARIANT_TOL && self.min_diagonal >= -INVARIANT_TOL
    }

    pub fn is_valid(&self) -> bool {
        self.hermitian_ok() && self.trace_ok() && self.positive_ok()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let flag = |ok: bool| if ok { "pass" } else { "FAIL" };
        writeln!(f, "finite:    {}", flag(self.finite))?;
        writeln!(
            f,
            "hermitian: {} (deviation {:.3e})",
            flag(self.hermitian_ok()),
            self.hermiticity_deviation
        )?;
        writeln!(
            f,
            "trace:     {} (deviation {:.3e})",
            flag(self.trace_ok()),
            self.trace_deviation
        )?;
        write!(
            f,
            "positive:  {} (det {:.3e}, min diag {:.3e})",
            flag(self.positive_ok()),
            self.determinant,
            self.min_diagonal
        )
    }
}

/// Check any 2x2 complex matrix against the state invariants and report the
/// measured violation magnitudes.
pub fn validate(m: &Mat2) -> ValidationReport {
    let finite = m.is_finite();
    let hermiticity_deviation = (m.0[1][0] - m.0[0][1].conj())
        .norm()
        .max(m.0[0][0].im.abs())
        .max(m.0[1][1].im.abs());
    let trace_deviation = (m.trace().re - 1.0).abs().max(m.trace().im.abs());
    let r12 = 0.5 * (m.0[0][1] + m.0[1][0].conj());
    let (d1, d2) = (m.0[0][0].re, m.0[1][1].re);
    ValidationReport {
        hermiticity_deviation,
        trace_deviation,
        min_diagonal: d1.min(d2),
        determinant: d1 * d2 - r12.norm_sqr(),
        finite,
    }
}
