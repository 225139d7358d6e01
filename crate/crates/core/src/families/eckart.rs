//! Eckart family: `eV = iζ coth r`, `eA = (Cζ/S) coth r - κ/r`.
//!
//! The scalar part makes the effective potential depend on the energy
//! through `γ = 2E(C² - S²)ζ`, so every formula here is a statement about a
//! self-consistent problem.

use std::sync::Arc;

use super::{check_strip, DEFAULT_H, DEFAULT_HALF_WIDTH};
use crate::hyperbolic::{coth, csch};
use crate::jacobi::{jacobi_eval, JacobiParams};
use crate::potentials::{require, FamilyModel, GridDefaults, PotentialFamily, PotentialSpec, ReferenceParams};
use crate::spectra::{BoundLevel, SpectralFormula, CLOSED_FORM};
use crate::transform::{ComplexFn, FourVectorPotential, TransformParams};
use crate::{Error, Result, C64, I};

/// Root of the implicit equation with the constructive `+η²` shift.
pub const IMPLICIT_ROOT: &str = "implicit-root";
/// Root of the implicit equation with the `-η²` shift of the printed form.
pub const IMPLICIT_ROOT_NEGATIVE_SHIFT: &str = "implicit-root-negative-shift";

/// Imaginary offset of the default contour. Smaller offsets leave the
/// discretized operator too non-normal near the pole at the origin for the
/// bound states to separate from the continuum.
pub const DEFAULT_SHIFT: f64 = 1.0;

pub struct EckartFamily;

impl PotentialFamily for EckartFamily {
    fn name(&self) -> &'static str {
        "eckart"
    }

    fn keys(&self) -> &'static [&'static str] {
        &["zeta", "a", "b"]
    }

    fn build(&self, spec: &PotentialSpec) -> Result<Box<dyn FamilyModel>> {
        let zeta = require(spec, "zeta")?;
        let (tp, rescaled) = TransformParams::normalized(require(spec, "a")?, require(spec, "b")?)?;
        if rescaled {
            log::warn!("rotation pair rescaled onto the unit circle: (a, b) = ({}, {})", tp.a(), tp.b());
        }
        if tp.s() == 0.0 || tp.c() == 0.0 {
            return Err(Error::InvalidParameter(format!(
                "the eckart family needs S = 2ab != 0 and C = a^2 - b^2 != 0 (got S = {}, C = {})",
                tp.s(),
                tp.c()
            )));
        }
        Ok(Box::new(Eckart::new(zeta, tp, spec.m, spec.kappa)))
    }
}

#[derive(Debug, Clone)]
pub struct Eckart {
    pub zeta: f64,
    pub tp: TransformParams,
    pub m: f64,
    pub kappa: i32,
    /// `η = ζ(S² - C²)/S`.
    pub eta: f64,
    /// `B/E`, where `B = γ/2` is the reference coupling.
    pub b_slope: f64,
}

impl Eckart {
    pub fn new(zeta: f64, tp: TransformParams, m: f64, kappa: i32) -> Self {
        let (s, c) = (tp.s(), tp.c());
        Eckart { zeta, tp, m, kappa, eta: zeta * (s * s - c * c) / s, b_slope: zeta * (c * c - s * s) }
    }

    /// `k = η - n`.
    pub fn decay(&self, n: u32) -> f64 {
        self.eta - n as f64
    }

    /// Jacobi data of level `n` at energy `energy`: `(y-1)^p (y+1)^q
    /// P_{n-1}^{(2p, 2q)}(y)` with `y = coth t` and `p, q = (k ∓ iB/k)/2`.
    pub fn jacobi_at(&self, n: u32, energy: f64) -> (C64, C64, usize) {
        let k = self.decay(n);
        let b = self.b_slope * energy;
        let p = C64::new(k, -b / k) / 2.0;
        let q = C64::new(k, b / k) / 2.0;
        (2.0 * p, 2.0 * q, n.saturating_sub(1) as usize)
    }
}

impl FamilyModel for Eckart {
    fn family(&self) -> &'static str {
        "eckart"
    }

    fn spec(&self) -> PotentialSpec {
        PotentialSpec::eckart(self.zeta, self.tp, self.m).with_kappa(self.kappa)
    }

    fn mass(&self) -> f64 {
        self.m
    }

    fn kappa(&self) -> i32 {
        self.kappa
    }

    fn four_vector(&self) -> FourVectorPotential {
        let zeta = self.zeta;
        let ratio = self.tp.c() / self.tp.s() * zeta;
        let scalar: ComplexFn = Arc::new(move |z| I * zeta * coth(z));
        let dscalar: ComplexFn = Arc::new(move |z| {
            let s = csch(z);
            -I * zeta * s * s
        });
        let w: ComplexFn = Arc::new(move |z| ratio * coth(z));
        let dw: ComplexFn = Arc::new(move |z| {
            let s = csch(z);
            -ratio * s * s
        });
        FourVectorPotential::with_superpotential(scalar, w, self.kappa).with_derivatives(dscalar, dw)
    }

    fn transform(&self) -> Option<TransformParams> {
        Some(self.tp)
    }

    fn energy_dependent(&self) -> bool {
        true
    }

    /// `η(η-1) csch² r - iγ coth r + η²`.
    fn closed_form(&self, energy: Option<f64>) -> Result<(ComplexFn, C64)> {
        let e = energy.ok_or(Error::MissingEnergy)?;
        let (eta, b) = (self.eta, self.b_slope * e);
        let value: ComplexFn = Arc::new(move |z| {
            let s = csch(z);
            eta * (eta - 1.0) * s * s - 2.0 * I * b * coth(z) + eta * eta
        });
        Ok((value, C64::new(self.eta * self.eta, 0.0)))
    }

    fn reference(&self, energy: Option<f64>) -> Result<ReferenceParams> {
        let e = energy.ok_or(Error::MissingEnergy)?;
        Ok(ReferenceParams::Eckart { a: self.eta, b: self.b_slope * e })
    }

    fn formulas(&self) -> Vec<Arc<dyn SpectralFormula>> {
        [Variant::Printed, Variant::Constructive, Variant::NegativeShift]
            .into_iter()
            .map(|variant| Arc::new(EckartSpectrum { model: self.clone(), variant }) as Arc<dyn SpectralFormula>)
            .collect()
    }

    fn wavefunction_formula(&self) -> Option<&'static str> {
        Some(IMPLICIT_ROOT)
    }

    fn eigenfunction(&self, level: &BoundLevel, points: &[C64]) -> Result<Vec<C64>> {
        let jacobi = level.jacobi.ok_or_else(|| {
            Error::InvalidParameter(format!(
                "level n = {} carries no eigenfunction data; use the {IMPLICIT_ROOT} formula",
                level.n
            ))
        })?;
        check_strip(points, "eckart")?;
        let params = JacobiParams::new(jacobi.degree, jacobi.alpha, jacobi.beta)?;
        let (p, q) = (jacobi.alpha / 2.0, jacobi.beta / 2.0);
        let one = C64::new(1.0, 0.0);
        points
            .iter()
            .map(|&t| {
                // y - 1 and y + 1 without cancellation on either tail.
                let (below, above) = if t.re >= 0.0 {
                    let w = (-2.0 * t).exp();
                    (2.0 * w / (one - w), 2.0 / (one - w))
                } else {
                    let u = (2.0 * t).exp();
                    (-2.0 / (one - u), -2.0 * u / (one - u))
                };
                let envelope = (p * below.ln() + q * above.ln()).exp();
                Ok(envelope * jacobi_eval(params, coth(t))?)
            })
            .collect()
    }

    fn grid_defaults(&self) -> GridDefaults {
        GridDefaults { h: DEFAULT_H, half_width: DEFAULT_HALF_WIDTH, shift: DEFAULT_SHIFT }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Variant {
    /// `(1 ± 2S)` denominator factors, `-η²` shift.
    Printed,
    /// `(1 ± S)` factors, `+η²` shift.
    Constructive,
    /// `(1 ± S)` factors, `-η²` shift.
    NegativeShift,
}

struct EckartSpectrum {
    model: Eckart,
    variant: Variant,
}

impl SpectralFormula for EckartSpectrum {
    fn name(&self) -> &'static str {
        match self.variant {
            Variant::Printed => CLOSED_FORM,
            Variant::Constructive => IMPLICIT_ROOT,
            Variant::NegativeShift => IMPLICIT_ROOT_NEGATIVE_SHIFT,
        }
    }

    fn summary(&self) -> &'static str {
        match self.variant {
            Variant::Printed => {
                "E^2 = [m^2 - eta^2 - k^2] k^2 / ([(1 - 2S) eta - n][(1 + 2S) eta - n]), k = eta - n, n >= 1"
            }
            Variant::Constructive => {
                "E^2 = [m^2 + eta^2 - k^2] k^2 / ([(1 - S) eta - n][(1 + S) eta - n]), k = eta - n > 0"
            }
            Variant::NegativeShift => {
                "E^2 = [m^2 - eta^2 - k^2] k^2 / ([(1 - S) eta - n][(1 + S) eta - n]), k = eta - n > 0"
            }
        }
    }

    fn levels(&self) -> Result<Vec<BoundLevel>> {
        let p = &self.model;
        let (eta, m2, s) = (p.eta, p.m * p.m, p.tp.s());
        let split = |factor: f64, n: f64| ((1.0 - factor) * eta - n) * ((1.0 + factor) * eta - n);
        let mut levels = Vec::new();
        match self.variant {
            Variant::Printed => {
                if eta * eta <= m2 {
                    return Ok(levels);
                }
                let width = (eta * eta - m2).sqrt();
                let first = ((eta - width).floor() + 1.0).max(1.0) as u32;
                for n in first.. {
                    let nf = n as f64;
                    let window = width - (nf - eta).abs();
                    if window <= 0.0 {
                        if nf > eta {
                            break;
                        }
                        continue;
                    }
                    let k = eta - nf;
                    let e2 = (m2 - eta * eta - k * k) * k * k / split(2.0 * s, nf);
                    if let Some(level) = BoundLevel::from_squared(n, e2, e2 - m2 + eta * eta, k > 0.0, window.min(k)) {
                        levels.push(level);
                    }
                }
            }
            Variant::Constructive | Variant::NegativeShift => {
                let sign = if self.variant == Variant::Constructive { 1.0 } else { -1.0 };
                for n in 1u32.. {
                    let nf = n as f64;
                    let k = eta - nf;
                    if k <= 0.0 {
                        break;
                    }
                    let e2 = (m2 + sign * eta * eta - k * k) * k * k / split(s, nf);
                    if let Some(mut level) = BoundLevel::from_squared(n, e2, e2 - m2 - sign * eta * eta, true, k) {
                        if self.variant == Variant::Constructive {
                            let (alpha, beta, degree) = p.jacobi_at(n, level.energy);
                            level = level.with_jacobi(alpha, beta, degree);
                        }
                        levels.push(level);
                    }
                }
            }
        }
        Ok(levels)
    }

    fn nominal_window(&self) -> Result<Vec<u32>> {
        let p = &self.model;
        let (eta, m2) = (p.eta, p.m * p.m);
        if self.variant != Variant::Printed {
            return Ok((1u32..).take_while(|&n| eta - n as f64 > 0.0).collect());
        }
        if eta * eta <= m2 {
            return Ok(Vec::new());
        }
        let width = (eta * eta - m2).sqrt();
        Ok((1u32..)
            .take_while(|&n| (n as f64) < eta + width)
            .filter(|&n| (n as f64 - eta).abs() < width && (n as f64) < eta)
            .collect())
    }
}
