//! Closed-form relativistic bound-state energies, their admissibility
//! windows, and the reference Schrödinger spectra they are derived from.

use serde::{Deserialize, Serialize};

use crate::potentials::{FamilyModel, PotentialSpec, ReferenceParams};
use crate::{Error, Result, C64};

/// Name of the formula every family offers as its default.
pub const CLOSED_FORM: &str = "closed-form";

/// Parameters of the Jacobi factor of a level's eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiIndices {
    pub alpha: C64,
    pub beta: C64,
    pub degree: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundLevel {
    pub n: u32,
    pub energy: f64,
    pub schrodinger_energy: f64,
    pub admissible: bool,
    /// Distance to the nearest window edge; negative outside.
    pub admissibility_margin: f64,
    /// `[σ, τ]` of the exponent branch, for formulas that mix branches.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<[i32; 2]>,
    #[serde(skip)]
    pub jacobi: Option<JacobiIndices>,
}

impl BoundLevel {
    /// Builds a level from its squared energy. `None` unless `E² > 0`.
    pub fn from_squared(
        n: u32,
        energy_squared: f64,
        schrodinger_energy: f64,
        admissible: bool,
        admissibility_margin: f64,
    ) -> Option<Self> {
        (energy_squared.is_finite() && energy_squared > 0.0).then(|| BoundLevel {
            n,
            energy: energy_squared.sqrt(),
            schrodinger_energy,
            admissible,
            admissibility_margin,
            branch: None,
            jacobi: None,
        })
    }

    pub fn with_branch(mut self, sigma: i32, tau: i32) -> Self {
        self.branch = Some([sigma, tau]);
        self
    }

    pub fn with_jacobi(mut self, alpha: C64, beta: C64, degree: usize) -> Self {
        self.jacobi = Some(JacobiIndices { alpha, beta, degree });
        self
    }
}

/// One way of predicting a family's spectrum, selectable by name.
pub trait SpectralFormula: Send + Sync {
    fn name(&self) -> &'static str;

    fn summary(&self) -> &'static str;

    /// Every level the formula emits, ascending in `n`, including levels
    /// flagged inadmissible.
    fn levels(&self) -> Result<Vec<BoundLevel>>;

    /// Quantum numbers the formula's stated window admits, whether or not
    /// they yield a real energy.
    fn nominal_window(&self) -> Result<Vec<u32>> {
        Ok(self.levels()?.into_iter().filter(|l| l.admissible).map(|l| l.n).collect())
    }
}

/// Levels of the named formula.
pub fn levels_with(model: &dyn FamilyModel, formula: &str) -> Result<Vec<BoundLevel>> {
    let formulas = model.formulas();
    let found = formulas.iter().find(|f| f.name() == formula).ok_or_else(|| {
        let names: Vec<_> = formulas.iter().map(|f| f.name()).collect();
        Error::InvalidParameter(format!(
            "the {} family has no formula `{formula}` (available: {})",
            model.family(),
            names.join(", ")
        ))
    })?;
    found.levels()
}

/// Closed-form spectrum of the spec.
pub fn spectrum(spec: &PotentialSpec) -> Result<Vec<BoundLevel>> {
    levels_with(spec.model()?.as_ref(), CLOSED_FORM)
}

pub fn spectrum_with(spec: &PotentialSpec, formula: &str) -> Result<Vec<BoundLevel>> {
    levels_with(spec.model()?.as_ref(), formula)
}

/// Levels the eigenfunction code understands, for families that have them.
pub fn wavefunction_levels(model: &dyn FamilyModel) -> Result<Vec<BoundLevel>> {
    let formula = model.wavefunction_formula().ok_or_else(|| {
        Error::UnsupportedFamily(format!("no closed-form eigenfunction is available for the {} family", model.family()))
    })?;
    levels_with(model, formula)
}

/// Bound-state energies of the reference Schrödinger problem, ascending in `n`.
pub fn reference_spectrum(reference: &ReferenceParams) -> Vec<f64> {
    match *reference {
        ReferenceParams::Eckart { a, b } => {
            (1..).map(|n| a - n as f64).take_while(|&k| k > 0.0).map(|k| b * b / (k * k) - k * k).collect()
        }
        ReferenceParams::RosenMorse2 { q, .. } | ReferenceParams::Scarf { q, .. } => {
            (0..).map(|n| q - n as f64 - 0.5).take_while(|&k| k > 0.0).map(|k| -k * k).collect()
        }
        ReferenceParams::PoschlTeller { m_roots, n_roots, sigma, tau } => {
            let (sigma, tau) = (sigma as f64, tau as f64);
            let offset = sigma * n_roots[0] + tau * m_roots[0] + (tau - sigma) / 2.0;
            (1..).map(|n| 2.0 * n as f64 + offset).take_while(|&s| s < 0.0).map(|s| -s * s).collect()
        }
    }
}

/// `η = ζ(S² - C²)/S` and the slope of `B = γ/2` in the energy.
pub(crate) fn eckart_couplings(spec: &PotentialSpec) -> Result<(f64, f64, f64)> {
    if !spec.family.eq_ignore_ascii_case("eckart") {
        return Err(Error::InvalidParameter(format!("`{}` is not an Eckart spec", spec.family)));
    }
    let model = spec.model()?;
    let tp = model.transform().ok_or_else(|| Error::Domain("Eckart spec without rotation".into()))?;
    let zeta = spec.zeta.unwrap_or_default();
    let (s, c) = (tp.s(), tp.c());
    let eta = zeta * (s * s - c * c) / s;
    Ok((eta, zeta * (c * c - s * s), s))
}

/// Residual of the implicit equation behind the printed Eckart spectrum,
/// `|E² + η² - m² - [γ(E)²/(4(η-n)²) - (η-n)²]|`, at the level's energy.
pub fn eckart_self_consistency(spec: &PotentialSpec, level: &BoundLevel) -> Result<f64> {
    let (eta, b_slope, _) = eckart_couplings(spec)?;
    let k = eta - level.n as f64;
    let e = level.energy;
    let b = b_slope * e;
    Ok((e * e + eta * eta - spec.m * spec.m - (b * b / (k * k) - k * k)).abs())
}

/// Same residual with the shift sign that the constructive potential has:
/// `|E² - η² - m² - [γ(E)²/(4(η-n)²) - (η-n)²]|`.
pub fn eckart_constructive_defect(spec: &PotentialSpec, level: &BoundLevel) -> Result<f64> {
    let (eta, b_slope, _) = eckart_couplings(spec)?;
    let k = eta - level.n as f64;
    let e = level.energy;
    let b = b_slope * e;
    Ok((e * e - eta * eta - spec.m * spec.m - (b * b / (k * k) - k * k)).abs())
}

/// Squared energies for level `n` from the three Eckart candidates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EckartCandidates {
    pub n: u32,
    /// Printed closed form with `(1 ± 2S)` factors.
    pub printed: f64,
    /// Root of the implicit equation with the `-η²` shift, `(1 ± S)` factors.
    pub implicit_printed_shift: f64,
    /// Root of the implicit equation with the constructive `+η²` shift.
    pub implicit_constructive: f64,
}

pub fn eckart_candidates(spec: &PotentialSpec, n: u32) -> Result<EckartCandidates> {
    let (eta, _, s) = eckart_couplings(spec)?;
    let m2 = spec.m * spec.m;
    let nf = n as f64;
    let k = eta - nf;
    let split = |factor: f64| ((1.0 - factor) * eta - nf) * ((1.0 + factor) * eta - nf);
    Ok(EckartCandidates {
        n,
        printed: (m2 - eta * eta - k * k) * k * k / split(2.0 * s),
        implicit_printed_shift: (m2 - eta * eta - k * k) * k * k / split(s),
        implicit_constructive: (m2 + eta * eta - k * k) * k * k / split(s),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::TransformParams;

    fn energies(levels: &[BoundLevel]) -> Vec<f64> {
        levels.iter().filter(|l| l.admissible).map(|l| l.energy).collect()
    }

    #[test]
    fn scarf_levels() {
        let levels = spectrum(&PotentialSpec::scarf(3.0, 0.0, 0.5, 1.0)).unwrap();
        let e = energies(&levels);
        assert_eq!(e.len(), 3);
        assert!((e[0] - 1.0).abs() < 1e-15);
        assert!((e[1] - 6f64.sqrt()).abs() < 1e-15);
        assert!((e[2] - 3.0).abs() < 1e-15);
        // n = 3..=6 pass the reality window only.
        let extra: Vec<u32> = levels.iter().filter(|l| !l.admissible).map(|l| l.n).collect();
        assert_eq!(extra, vec![3, 4, 5, 6]);
    }

    #[test]
    fn rosen_morse_ground_state_is_rest_mass() {
        let levels = spectrum(&PotentialSpec::rosen_morse2(3.0, 0.0, 0.0, 1.0)).unwrap();
        assert_eq!(levels[0].n, 0);
        assert_eq!(levels[0].energy, 1.0);
    }

    #[test]
    fn eckart_worked_level() {
        let tp = TransformParams::from_s_c(0.5, 0.75f64.sqrt()).unwrap();
        let spec = PotentialSpec::eckart(-5.0, tp, 3.0);
        let levels = spectrum(&spec).unwrap();
        let level = levels.iter().find(|l| l.n == 2).unwrap();
        assert!((level.energy - 3.75).abs() < 1e-12, "{}", level.energy);
        assert!(level.admissible);
        // |2 - 5| = 3 < sqrt(25 - 9) = 4
        assert!((level.admissibility_margin - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eckart_candidates_separate() {
        let tp = TransformParams::from_s_c(0.5, 0.75f64.sqrt()).unwrap();
        let spec = PotentialSpec::eckart(-5.0, tp, 3.0);
        let c = eckart_candidates(&spec, 2).unwrap();
        assert!((c.printed - 14.0625).abs() < 1e-12);
        assert!((c.implicit_printed_shift - (-225.0 / 2.75)).abs() < 1e-12);
        assert!((c.implicit_constructive - 225.0 / 2.75).abs() < 1e-12);
        // The printed energy does not solve its own implicit equation.
        let level = spectrum(&spec).unwrap().into_iter().find(|l| l.n == 2).unwrap();
        let defect = eckart_self_consistency(&spec, &level).unwrap();
        assert!((defect - (14.0625 + 25.0 - 9.0 - (87.890625 / 9.0 - 9.0))).abs() < 1e-9, "{defect}");
        // The constructive root does solve the constructive implicit equation.
        let root = BoundLevel::from_squared(2, c.implicit_constructive, 0.0, true, 1.0).unwrap();
        assert!(eckart_constructive_defect(&spec, &root).unwrap() < 1e-10);
    }

    #[test]
    fn poschl_teller_printed_level() {
        let spec = PotentialSpec::poschl_teller(3.0, 3.0, 0.3, -1, -1, 2.0);
        let levels = spectrum(&spec).unwrap();
        let three = levels.iter().find(|l| l.n == 3).unwrap();
        assert!((three.energy - 2.0).abs() < 1e-15);
    }

    #[test]
    fn reference_spectra() {
        let scarf = reference_spectrum(&ReferenceParams::Scarf { q: 3.5, b_r: 0.0, b_i: 0.0 });
        assert_eq!(scarf, vec![-9.0, -4.0, -1.0]);
        let eckart = reference_spectrum(&ReferenceParams::Eckart { a: 5.0, b: 2.0 });
        assert!((eckart[0] + 15.75).abs() < 1e-15);
        let pt = reference_spectrum(&ReferenceParams::poschl_teller(2.0, 3.0, -1, -1));
        assert_eq!(pt, vec![-9.0, -1.0]);
    }

    #[test]
    fn unknown_formula_is_reported() {
        let err = spectrum_with(&PotentialSpec::scarf(3.0, 0.0, 0.0, 1.0), "wkb").unwrap_err();
        assert!(err.to_string().contains("closed-form"), "{err}");
    }
}
