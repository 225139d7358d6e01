//! The built-in potential families, one module each.

pub mod eckart;
pub mod poschl_teller;
pub mod rosen_morse;
pub mod scarf;

use crate::spectra::{BoundLevel, SpectralFormula, CLOSED_FORM};
use crate::{Error, Result, C64};

pub(crate) const DEFAULT_H: f64 = 0.01;
pub(crate) const DEFAULT_HALF_WIDTH: f64 = 12.0;

/// `E = √(m² + ζ² - (ζ-n)²)` for `n = 0, 1, …`, shared by the Scarf and
/// Rosen-Morse II families. Levels inside the reality window
/// `|n - ζ| < √(m² + ζ²)` are emitted; those with `n ≥ ζ` are flagged
/// inadmissible because the reference state is not normalizable.
pub(crate) struct ShiftedSquareFormula {
    pub zeta: f64,
    pub m: f64,
    /// `b = η_R + iη_I` when the family has eigenfunctions to attach.
    pub eigen_b: Option<C64>,
}

impl SpectralFormula for ShiftedSquareFormula {
    fn name(&self) -> &'static str {
        CLOSED_FORM
    }

    fn summary(&self) -> &'static str {
        "E^2 = m^2 + zeta^2 - (zeta - n)^2, n = 0, 1, ..."
    }

    fn levels(&self) -> Result<Vec<BoundLevel>> {
        let (zeta, m) = (self.zeta, self.m);
        let reality = (m * m + zeta * zeta).sqrt();
        let q = zeta + 0.5;
        let mut levels = Vec::new();
        for n in 0u32.. {
            let nf = n as f64;
            if nf - zeta >= reality {
                break;
            }
            let reality_margin = reality - (nf - zeta).abs();
            if reality_margin <= 0.0 {
                continue;
            }
            let normalizable = nf < zeta;
            let e2 = m * m + nf * (2.0 * zeta - nf);
            let margin = reality_margin.min(zeta - nf);
            let Some(mut level) = BoundLevel::from_squared(n, e2, -(zeta - nf).powi(2), normalizable, margin) else {
                continue;
            };
            if let (Some(b), true) = (self.eigen_b, normalizable) {
                let ib = crate::I * b;
                level = level.with_jacobi(ib - q, -ib - q, n as usize);
            }
            levels.push(level);
        }
        Ok(levels)
    }
}

/// Rejects contours that touch or cross the real axis, where the
/// hyperbolic singularities and the branch cuts of the complex powers sit,
/// or that leave the strip `|Im z| < π/2`.
pub(crate) fn check_strip(points: &[C64], family: &str) -> Result<()> {
    let Some(first) = points.first() else {
        return Ok(());
    };
    let side = first.im.signum();
    let bad = points.iter().find(|z| z.im == 0.0 || z.im.signum() != side || z.im.abs() >= std::f64::consts::FRAC_PI_2);
    match bad {
        Some(z) => Err(Error::BranchCut(format!(
            "{family} eigenfunction needs 0 < |Im z| < pi/2 on one side of the real axis; point {z} violates it"
        ))),
        None => Ok(()),
    }
}

pub(crate) fn require_positive_zeta(zeta: f64, family: &str) -> Result<()> {
    if zeta > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("the {family} family requires zeta > 0 (got {zeta})")))
    }
}
