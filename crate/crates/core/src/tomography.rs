//! Single-qubit state reconstruction from three-basis intensity records.
//!
//! Stokes-style linear inversion (s_z = I_H - I_V, s_x = I_+ - I_-,
//! s_y = I_R - I_L) followed by a radial projection back into the Bloch
//! ball, which for one qubit is the nearest physical state in Frobenius
//! distance. Deterministic and exact on noiseless data; no iterative
//! maximum-likelihood machinery.

use serde::{Deserialize, Serialize};

use crate::coherence::coherence;
use crate::error::{Error, Result};
use crate::qubit::{from_bloch, BlochVector, DensityMatrix};

/// Tolerance on each normalized basis pair summing to one.
pub const PAIR_SUM_TOL: f64 = 1e-9;

/// Normalized intensities of the six tomographic projections plus the
/// pre-normalization total intensity.
///
/// Serialized as `{"theta_deg", "I_H", "I_V", "I_plus", "I_minus", "I_R",
/// "I_L", "seed"}`; `I_total` is accepted on input and defaults to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TomographyRecord {
    pub theta_deg: f64,
    #[serde(rename = "I_H")]
    pub i_h: f64,
    #[serde(rename = "I_V")]
    pub i_v: f64,
    #[serde(rename = "I_plus")]
    pub i_plus: f64,
    #[serde(rename = "I_minus")]
    pub i_minus: f64,
    #[serde(rename = "I_R")]
    pub i_r: f64,
    #[serde(rename = "I_L")]
    pub i_l: f64,
    #[serde(rename = "I_total", default = "unit_total", skip_serializing_if = "is_unit_total")]
    pub i_total: f64,
    pub seed: u64,
}

fn unit_total() -> f64 {
    1.0
}

#[allow(clippy::trivially_copy_pass_by_ref)]
fn is_unit_total(v: &f64) -> bool {
    *v == 1.0
}

pub const RECORD_CSV_HEADER: &str = "theta_deg,I_H,I_V,I_plus,I_minus,I_R,I_L,seed";

impl TomographyRecord {
    /// Check the record invariants: finite intensities in [0, 1], positive
    /// total, each basis pair summing to one within [`PAIR_SUM_TOL`].
    pub fn check(&self) -> Result<()> {
        let all = [self.i_h, self.i_v, self.i_plus, self.i_minus, self.i_r, self.i_l];
        if !all.iter().all(|v| v.is_finite()) || !self.i_total.is_finite() {
            return Err(Error::MalformedRecord("non-finite intensity".into()));
        }
        if self.i_total <= 0.0 {
            return Err(Error::MalformedRecord(format!(
                "total intensity must be positive, got {}",
                self.i_total
            )));
        }
        for v in all {
            if !(-PAIR_SUM_TOL..=1.0 + PAIR_SUM_TOL).contains(&v) {
                return Err(Error::MalformedRecord(format!(
                    "normalized intensity {v} outside [0, 1]"
                )));
            }
        }
        for (name, a, b) in [
            ("H/V", self.i_h, self.i_v),
            ("+/-", self.i_plus, self.i_minus),
            ("R/L", self.i_r, self.i_l),
        ] {
            let dev = (a + b - 1.0).abs();
            if dev > PAIR_SUM_TOL {
                return Err(Error::MalformedRecord(format!(
                    "{name} pair sums to {} (deviation {dev:.3e})",
                    a + b
                )));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rec: TomographyRecord = serde_json::from_str(text)
            .map_err(|e| Error::MalformedRecord(e.to_string()))?;
        Ok(rec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serialization cannot fail")
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
            self.theta_deg,
            self.i_h,
            self.i_v,
            self.i_plus,
            self.i_minus,
            self.i_r,
            self.i_l,
            self.seed
        )
    }

    /// Parse one CSV data row in [`RECORD_CSV_HEADER`] order.
    pub fn from_csv_row(line: &str) -> Result<Self> {
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != 8 {
            return Err(Error::MalformedRecord(format!(
                "expected 8 CSV fields, got {}",
                fields.len()
            )));
        }
        let num = |idx: usize| -> Result<f64> {
            fields[idx]
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::MalformedRecord(format!("bad number {:?}", fields[idx])))
        };
        let seed = fields[7]
            .trim()
            .parse::<u64>()
            .map_err(|_| Error::MalformedRecord(format!("bad seed {:?}", fields[7])))?;
        Ok(TomographyRecord {
            theta_deg: num(0)?,
            i_h: num(1)?,
            i_v: num(2)?,
            i_plus: num(3)?,
            i_minus: num(4)?,
            i_r: num(5)?,
            i_l: num(6)?,
            i_total: 1.0,
            seed,
        })
    }
}

/// CSV batch export, one row per record.
pub fn write_records_csv<W: std::io::Write>(
    records: &[TomographyRecord],
    w: &mut W,
) -> std::io::Result<()> {
    writeln!(w, "{RECORD_CSV_HEADER}")?;
    for rec in records {
        writeln!(w, "{}", rec.to_csv_row())?;
    }
    Ok(())
}

/// Stokes inversion of a normalized record. The result may leave the unit
/// ball under noise; see [`project_physical`].
pub fn linear_inversion(rec: &TomographyRecord) -> Result<BlochVector> {
    rec.check()?;
    BlochVector::new(rec.i_plus - rec.i_minus, rec.i_r - rec.i_l, rec.i_h - rec.i_v)
}

/// Map a raw Bloch vector to a physical state: inside the ball it is used
/// as-is, outside it is radially rescaled onto the sphere (the closest
/// single-qubit state in Frobenius distance). Returns the state and whether
/// projection was needed.
pub fn project_physical(b: &BlochVector) -> (DensityMatrix, bool) {
    let n2 = b.norm_sqr();
    if n2 <= 1.0 {
        (from_bloch(b).expect("vector inside the ball is physical"), false)
    } else {
        let scale = n2.sqrt().recip();
        let scaled = BlochVector { x: b.x * scale, y: b.y * scale, z: b.z * scale };
        (from_bloch(&scaled).expect("rescaled vector lies on the sphere"), true)
    }
}

/// Full reconstruction output.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ReconstructionResult {
    pub rho: DensityMatrix,
    /// Inversion output before any physicality projection.
    pub raw_bloch: BlochVector,
    pub projected: bool,
    /// C = 2|ρ12| of the projected state.
    pub coherence: f64,
}

/// Linear inversion, physicality projection, and coherence extraction.
pub fn reconstruct(rec: &TomographyRecord) -> Result<ReconstructionResult> {
    let raw = linear_inversion(rec)?;
    let (rho, projected) = project_physical(&raw);
    Ok(ReconstructionResult { rho, raw_bloch: raw, projected, coherence: coherence(&rho).value() })
}
