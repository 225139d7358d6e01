//! Scarf family: `W = ζ tanh r - (η_R + iη_I) sech r` on the full line.

use std::sync::Arc;

use super::{require_positive_zeta, ShiftedSquareFormula, DEFAULT_H, DEFAULT_HALF_WIDTH};
use crate::hyperbolic::{gudermannian, ln_cosh, sech, sinh, tanh};
use crate::jacobi::{jacobi_eval, JacobiParams};
use crate::potentials::{require, FamilyModel, GridDefaults, PotentialFamily, PotentialSpec, ReferenceParams};
use crate::spectra::{BoundLevel, SpectralFormula, CLOSED_FORM};
use crate::transform::{ComplexFn, FourVectorPotential};
use crate::{Error, Result, C64, I};

pub struct ScarfFamily;

impl PotentialFamily for ScarfFamily {
    fn name(&self) -> &'static str {
        "scarf"
    }

    fn keys(&self) -> &'static [&'static str] {
        &["zeta", "eta_r", "eta_i"]
    }

    fn build(&self, spec: &PotentialSpec) -> Result<Box<dyn FamilyModel>> {
        let zeta = require(spec, "zeta")?;
        require_positive_zeta(zeta, "scarf")?;
        Ok(Box::new(Scarf {
            zeta,
            b: C64::new(spec.eta_r.unwrap_or(0.0), spec.eta_i.unwrap_or(0.0)),
            m: spec.m,
            kappa: spec.kappa,
        }))
    }
}

#[derive(Debug, Clone)]
pub struct Scarf {
    pub zeta: f64,
    pub b: C64,
    pub m: f64,
    pub kappa: i32,
}

impl FamilyModel for Scarf {
    fn family(&self) -> &'static str {
        "scarf"
    }

    fn spec(&self) -> PotentialSpec {
        PotentialSpec::scarf(self.zeta, self.b.re, self.b.im, self.m).with_kappa(self.kappa)
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
        let w: ComplexFn = Arc::new(move |z| zeta * tanh(z) - b * sech(z));
        let dw: ComplexFn = Arc::new(move |z| {
            let s = sech(z);
            zeta * s * s + b * s * tanh(z)
        });
        FourVectorPotential::with_superpotential(zero.clone(), w, self.kappa).with_derivatives(zero, dw)
    }

    fn closed_form(&self, _energy: Option<f64>) -> Result<(ComplexFn, C64)> {
        let (zeta, b) = (self.zeta, self.b);
        let value: ComplexFn = Arc::new(move |z| {
            let s = sech(z);
            (b * b - zeta * (zeta + 1.0)) * s * s - (2.0 * zeta + 1.0) * b * s * tanh(z) + zeta * zeta
        });
        Ok((value, C64::new(self.zeta * self.zeta, 0.0)))
    }

    fn reference(&self, _energy: Option<f64>) -> Result<ReferenceParams> {
        Ok(ReferenceParams::Scarf { q: self.zeta + 0.5, b_r: self.b.re, b_i: self.b.im })
    }

    fn formulas(&self) -> Vec<Arc<dyn SpectralFormula>> {
        vec![Arc::new(ShiftedSquareFormula { zeta: self.zeta, m: self.m, eigen_b: Some(self.b) })]
    }

    fn wavefunction_formula(&self) -> Option<&'static str> {
        Some(CLOSED_FORM)
    }

    /// `sech^ζ(z) e^{b·gd(z)} P_n^{(ib-q, -ib-q)}(i sinh z)`.
    fn eigenfunction(&self, level: &BoundLevel, points: &[C64]) -> Result<Vec<C64>> {
        let jacobi = level
            .jacobi
            .ok_or_else(|| Error::InvalidParameter(format!("level n = {} carries no eigenfunction data", level.n)))?;
        let params = JacobiParams::new(jacobi.degree, jacobi.alpha, jacobi.beta)?;
        let (zeta, b) = (self.zeta, self.b);
        points
            .iter()
            .map(|&z| {
                let envelope = (-zeta * ln_cosh(z) + b * gudermannian(z)).exp();
                Ok(envelope * jacobi_eval(params, I * sinh(z))?)
            })
            .collect()
    }

    fn grid_defaults(&self) -> GridDefaults {
        GridDefaults { h: DEFAULT_H, half_width: DEFAULT_HALF_WIDTH, shift: 0.0 }
    }
}
