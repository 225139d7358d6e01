//! Pöschl-Teller family: `W = ζ tanh t - η coth t` with `t = r - iε`.
//!
//! All functions take the contour coordinate `t` itself, so the natural grid
//! for this family is shifted by `ε` below the real axis.

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use super::{check_strip, DEFAULT_H, DEFAULT_HALF_WIDTH};
use crate::hyperbolic::{cosh, coth, csch, ln_cosh, ln_sinh, sech, tanh};
use crate::jacobi::{jacobi_eval, JacobiParams};
use crate::potentials::{
    require, sign_parameter, FamilyModel, GridDefaults, PotentialFamily, PotentialSpec, ReferenceParams,
};
use crate::spectra::{BoundLevel, SpectralFormula, CLOSED_FORM};
use crate::transform::{ComplexFn, FourVectorPotential};
use crate::{Error, Result, C64};

/// Formula built from the exponents that solve the indicial equations of
/// the effective potential itself.
pub const EXPONENT_ROOTS: &str = "exponent-roots";

/// Union of the exponent-root spectra over every `(σ, τ)` branch. The contour
/// passes below the singularity at `t = 0`, so both origin exponents give
/// admissible eigenfunctions there, and both asymptotic exponents are kept
/// whenever the total decay rate is positive.
pub const ALL_BRANCHES: &str = "all-branches";

pub struct PoschlTellerFamily;

impl PotentialFamily for PoschlTellerFamily {
    fn name(&self) -> &'static str {
        "poschl-teller"
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["poeschl-teller", "pöschl-teller", "pt"]
    }

    fn keys(&self) -> &'static [&'static str] {
        &["zeta", "eta", "epsilon", "sigma", "tau"]
    }

    fn build(&self, spec: &PotentialSpec) -> Result<Box<dyn FamilyModel>> {
        let zeta = require(spec, "zeta")?;
        let eta = require(spec, "eta")?;
        let epsilon = require(spec, "epsilon")?;
        if !(epsilon > 0.0 && epsilon < FRAC_PI_2) {
            return Err(Error::InvalidParameter(format!("epsilon must lie strictly inside (0, pi/2) (got {epsilon})")));
        }
        Ok(Box::new(PoschlTeller {
            zeta,
            eta,
            epsilon,
            sigma: sign_parameter(spec.sigma, "sigma")?,
            tau: sign_parameter(spec.tau, "tau")?,
            m: spec.m,
            kappa: spec.kappa,
        }))
    }
}

#[derive(Debug, Clone)]
pub struct PoschlTeller {
    pub zeta: f64,
    pub eta: f64,
    pub epsilon: f64,
    pub sigma: i32,
    pub tau: i32,
    pub m: f64,
    pub kappa: i32,
}

impl PoschlTeller {
    /// Exponents `(a, c)` of `sinh^a t cosh^c t` selected by `(τ, σ)`:
    /// `a ∈ {η, 1-η}` and `c ∈ {ζ+1, -ζ}`, the `+1` sign picking the first.
    pub fn exponents(&self) -> (f64, f64) {
        self.exponents_for(self.sigma, self.tau)
    }

    pub fn exponents_for(&self, sigma: i32, tau: i32) -> (f64, f64) {
        let (sigma, tau) = (sigma as f64, tau as f64);
        (tau * self.eta + (1.0 - tau) / 2.0, sigma * self.zeta + (1.0 + sigma) / 2.0)
    }

    /// Levels `λ_n = -(2n + a + c)²` of one exponent branch.
    fn branch_levels(&self, sigma: i32, tau: i32) -> Vec<BoundLevel> {
        let (a, c) = self.exponents_for(sigma, tau);
        let mut levels = Vec::new();
        for n in 0u32.. {
            let s = 2.0 * n as f64 + a + c;
            if s >= 0.0 {
                break;
            }
            let lambda = -s * s;
            if let Some(level) = BoundLevel::from_squared(n, self.m * self.m + self.shift() + lambda, lambda, true, -s)
            {
                levels.push(level.with_branch(sigma, tau).with_jacobi(
                    C64::new(a - 0.5, 0.0),
                    C64::new(c - 0.5, 0.0),
                    n as usize,
                ));
            }
        }
        levels
    }

    fn shift(&self) -> f64 {
        (self.zeta - self.eta).powi(2)
    }
}

impl FamilyModel for PoschlTeller {
    fn family(&self) -> &'static str {
        "poschl-teller"
    }

    fn spec(&self) -> PotentialSpec {
        PotentialSpec::poschl_teller(self.zeta, self.eta, self.epsilon, self.sigma, self.tau, self.m)
            .with_kappa(self.kappa)
    }

    fn mass(&self) -> f64 {
        self.m
    }

    fn kappa(&self) -> i32 {
        self.kappa
    }

    fn four_vector(&self) -> FourVectorPotential {
        let (zeta, eta) = (self.zeta, self.eta);
        let zero: ComplexFn = Arc::new(|_| C64::new(0.0, 0.0));
        let w: ComplexFn = Arc::new(move |t| zeta * tanh(t) - eta * coth(t));
        let dw: ComplexFn = Arc::new(move |t| {
            let (s, c) = (csch(t), sech(t));
            zeta * c * c + eta * s * s
        });
        FourVectorPotential::with_superpotential(zero.clone(), w, self.kappa).with_derivatives(zero, dw)
    }

    fn closed_form(&self, _energy: Option<f64>) -> Result<(ComplexFn, C64)> {
        let (zeta, eta, shift) = (self.zeta, self.eta, self.shift());
        let value: ComplexFn = Arc::new(move |t| {
            let (s, c) = (csch(t), sech(t));
            eta * (eta - 1.0) * s * s - zeta * (zeta + 1.0) * c * c + shift
        });
        Ok((value, C64::new(shift, 0.0)))
    }

    fn reference(&self, _energy: Option<f64>) -> Result<ReferenceParams> {
        Ok(ReferenceParams::poschl_teller(self.eta, self.zeta, self.sigma, self.tau))
    }

    fn formulas(&self) -> Vec<Arc<dyn SpectralFormula>> {
        vec![
            Arc::new(PrintedSpectrum { model: self.clone() }),
            Arc::new(ExponentRootSpectrum { model: self.clone() }),
            Arc::new(AllBranchSpectrum { model: self.clone() }),
        ]
    }

    fn wavefunction_formula(&self) -> Option<&'static str> {
        Some(EXPONENT_ROOTS)
    }

    /// `sinh^a t cosh^c t P_n^{(a-1/2, c-1/2)}(cosh 2t)`.
    fn eigenfunction(&self, level: &BoundLevel, points: &[C64]) -> Result<Vec<C64>> {
        let jacobi = level.jacobi.ok_or_else(|| {
            Error::InvalidParameter(format!(
                "level n = {} carries no eigenfunction data; use the {EXPONENT_ROOTS} formula",
                level.n
            ))
        })?;
        check_strip(points, "poschl-teller")?;
        let params = JacobiParams::new(jacobi.degree, jacobi.alpha, jacobi.beta)?;
        let (a, c) = (jacobi.alpha + 0.5, jacobi.beta + 0.5);
        points
            .iter()
            .map(|&t| {
                let envelope = (a * ln_sinh(t) + c * ln_cosh(t)).exp();
                Ok(envelope * jacobi_eval(params, cosh(2.0 * t))?)
            })
            .collect()
    }

    fn grid_defaults(&self) -> GridDefaults {
        GridDefaults { h: DEFAULT_H, half_width: DEFAULT_HALF_WIDTH, shift: self.epsilon }
    }
}

/// `E = √(m² - (ζ-η)² - (2n + σζ + τη + (τ-σ)/2)²)`, `n = 1, 2, …`, inside
/// `2n < √(m² - (ζ-η)²) - (σζ + τη + (τ-σ)/2)`.
struct PrintedSpectrum {
    model: PoschlTeller,
}

impl SpectralFormula for PrintedSpectrum {
    fn name(&self) -> &'static str {
        CLOSED_FORM
    }

    fn summary(&self) -> &'static str {
        "E^2 = m^2 - (zeta - eta)^2 - (2n + sigma zeta + tau eta + (tau - sigma)/2)^2, n >= 1"
    }

    fn levels(&self) -> Result<Vec<BoundLevel>> {
        let p = &self.model;
        let (sigma, tau) = (p.sigma as f64, p.tau as f64);
        let offset = sigma * p.zeta + tau * p.eta + (tau - sigma) / 2.0;
        let base = p.m * p.m - p.shift();
        if base <= 0.0 {
            return Ok(Vec::new());
        }
        let bound = base.sqrt() - offset;
        let mut levels = Vec::new();
        for n in 1u32.. {
            let margin = bound - 2.0 * n as f64;
            if margin <= 0.0 {
                break;
            }
            let s = 2.0 * n as f64 + offset;
            if let Some(level) = BoundLevel::from_squared(n, base - s * s, -s * s, true, margin) {
                levels.push(level);
            }
        }
        Ok(levels)
    }

    fn nominal_window(&self) -> Result<Vec<u32>> {
        let p = &self.model;
        let (sigma, tau) = (p.sigma as f64, p.tau as f64);
        let offset = sigma * p.zeta + tau * p.eta + (tau - sigma) / 2.0;
        let base = p.m * p.m - p.shift();
        if base <= 0.0 {
            return Ok(Vec::new());
        }
        let bound = base.sqrt() - offset;
        Ok((1u32..).take_while(|&n| 2.0 * (n as f64) < bound).collect())
    }
}

/// `λ_n = -(2n + a + c)²` for `n = 0, 1, …` while `2n + a + c < 0`, with the
/// exponents of [`PoschlTeller::exponents`], and `E² = m² + (ζ-η)² + λ_n`.
struct ExponentRootSpectrum {
    model: PoschlTeller,
}

impl SpectralFormula for ExponentRootSpectrum {
    fn name(&self) -> &'static str {
        EXPONENT_ROOTS
    }

    fn summary(&self) -> &'static str {
        "E^2 = m^2 + (zeta - eta)^2 - (2n + a + c)^2, n >= 0, a in {eta, 1 - eta}, c in {zeta + 1, -zeta}"
    }

    fn levels(&self) -> Result<Vec<BoundLevel>> {
        Ok(self.model.branch_levels(self.model.sigma, self.model.tau))
    }
}

struct AllBranchSpectrum {
    model: PoschlTeller,
}

impl SpectralFormula for AllBranchSpectrum {
    fn name(&self) -> &'static str {
        ALL_BRANCHES
    }

    fn summary(&self) -> &'static str {
        "exponent-roots levels of all four (sigma, tau) branches, duplicate exponent pairs removed"
    }

    fn levels(&self) -> Result<Vec<BoundLevel>> {
        let p = &self.model;
        let mut seen: Vec<(f64, f64)> = Vec::new();
        let mut levels = Vec::new();
        for (sigma, tau) in [(-1, -1), (-1, 1), (1, -1), (1, 1)] {
            let pair = p.exponents_for(sigma, tau);
            if seen.iter().any(|&(a, c)| (a - pair.0).abs() < 1e-12 && (c - pair.1).abs() < 1e-12) {
                continue;
            }
            seen.push(pair);
            levels.extend(p.branch_levels(sigma, tau));
        }
        levels.sort_by(|x, y| x.energy.total_cmp(&y.energy));
        Ok(levels)
    }
}
