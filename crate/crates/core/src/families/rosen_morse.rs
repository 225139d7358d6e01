//! Rosen-Morse II family: `W = ζ coth r - (η_R + iη_I) csch r`.
//!
//! The pole at the origin is avoided by shifting the contour below the real
//! axis. No closed-form eigenfunction is offered for this family.

use std::sync::Arc;

use super::{require_positive_zeta, ShiftedSquareFormula, DEFAULT_H, DEFAULT_HALF_WIDTH};
use crate::hyperbolic::{coth, csch};
use crate::potentials::{require, FamilyModel, GridDefaults, PotentialFamily, PotentialSpec, ReferenceParams};
use crate::spectra::SpectralFormula;
use crate::transform::{ComplexFn, FourVectorPotential};
use crate::{Result, C64};

pub const DEFAULT_SHIFT: f64 = 0.3;

pub struct RosenMorse2Family;

impl PotentialFamily for RosenMorse2Family {
    fn name(&self) -> &'static str {
        "rosen-morse2"
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["rosen-morse-2", "rosen-morse-ii", "rmii", "rm2"]
    }

    fn keys(&self) -> &'static [&'static str] {
        &["zeta", "eta_r", "eta_i"]
    }

    fn build(&self, spec: &PotentialSpec) -> Result<Box<dyn FamilyModel>> {
        let zeta = require(spec, "zeta")?;
        require_positive_zeta(zeta, "rosen-morse2")?;
        Ok(Box::new(RosenMorse2 {
            zeta,
            b: C64::new(spec.eta_r.unwrap_or(0.0), spec.eta_i.unwrap_or(0.0)),
            m: spec.m,
            kappa: spec.kappa,
        }))
    }
}

#[derive(Debug, Clone)]
pub struct RosenMorse2 {
    pub zeta: f64,
    pub b: C64,
    pub m: f64,
    pub kappa: i32,
}

impl FamilyModel for RosenMorse2 {
    fn family(&self) -> &'static str {
        "rosen-morse2"
    }

    fn spec(&self) -> PotentialSpec {
        PotentialSpec::rosen_morse2(self.zeta, self.b.re, self.b.im, self.m).with_kappa(self.kappa)
    }

    fn mass(&self) -> f64 {
        self.m
    }

    fn kappa(&self) -> i32 {
        self.kappa
    }

    fn four_vector(&self) -> FourVectorPotential {
        let (zeta, b) = (self.zeta, self.b);
        let zero: ComplexFn = Arc::new(|_| C64::new(0.0, 0.0));
        let w: ComplexFn = Arc::new(move |z| zeta * coth(z) - b * csch(z));
        let dw: ComplexFn = Arc::new(move |z| {
            let s = csch(z);
            -zeta * s * s + b * s * coth(z)
        });
        FourVectorPotential::with_superpotential(zero.clone(), w, self.kappa).with_derivatives(zero, dw)
    }

    fn closed_form(&self, _energy: Option<f64>) -> Result<(ComplexFn, C64)> {
        let (zeta, b) = (self.zeta, self.b);
        let value: ComplexFn = Arc::new(move |z| {
            let s = csch(z);
            (b * b + zeta * (zeta + 1.0)) * s * s - (2.0 * zeta + 1.0) * b * s * coth(z) + zeta * zeta
        });
        Ok((value, C64::new(self.zeta * self.zeta, 0.0)))
    }

    fn reference(&self, _energy: Option<f64>) -> Result<ReferenceParams> {
        Ok(ReferenceParams::RosenMorse2 { q: self.zeta + 0.5, b_r: self.b.re, b_i: self.b.im })
    }

    fn formulas(&self) -> Vec<Arc<dyn SpectralFormula>> {
        vec![Arc::new(ShiftedSquareFormula { zeta: self.zeta, m: self.m, eigen_b: None })]
    }

    fn grid_defaults(&self) -> GridDefaults {
        GridDefaults { h: DEFAULT_H, half_width: DEFAULT_HALF_WIDTH, shift: DEFAULT_SHIFT }
    }
}
