//! The four complex potential families, their parameter records and the
//! name-keyed registry that maps a [`PotentialSpec`] onto a validated model.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::families;
use crate::hyperbolic::{coth, csch, sech, tanh};
use crate::spectra::{BoundLevel, SpectralFormula};
use crate::transform::{
    effective_potential_scalar, effective_potential_vector, ComplexFn, EffectivePotential, FourVectorPotential,
    TransformParams,
};
use crate::{Error, Result, C64, I};

/// Deviation above which a closed form is reported as disagreeing with the
/// constructive route.
pub const CROSS_CHECK_TOLERANCE: f64 = 1e-8;

fn default_kappa() -> i32 {
    -1
}

/// Flat, serializable description of one potential.
///
/// Only the keys that belong to `family` may be present; everything else is
/// rejected when the spec is resolved against the registry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSpec {
    pub family: String,
    pub m: f64,
    #[serde(default = "default_kappa")]
    pub kappa: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_i: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
}

impl PotentialSpec {
    pub fn new(family: &str, m: f64) -> Self {
        PotentialSpec {
            family: family.to_string(),
            m,
            kappa: default_kappa(),
            zeta: None,
            eta: None,
            eta_r: None,
            eta_i: None,
            epsilon: None,
            sigma: None,
            tau: None,
            a: None,
            b: None,
        }
    }

    pub fn scarf(zeta: f64, eta_r: f64, eta_i: f64, m: f64) -> Self {
        PotentialSpec { zeta: Some(zeta), eta_r: Some(eta_r), eta_i: Some(eta_i), ..Self::new("scarf", m) }
    }

    pub fn rosen_morse2(zeta: f64, eta_r: f64, eta_i: f64, m: f64) -> Self {
        PotentialSpec { zeta: Some(zeta), eta_r: Some(eta_r), eta_i: Some(eta_i), ..Self::new("rosen-morse2", m) }
    }

    pub fn poschl_teller(zeta: f64, eta: f64, epsilon: f64, sigma: i32, tau: i32, m: f64) -> Self {
        PotentialSpec {
            zeta: Some(zeta),
            eta: Some(eta),
            epsilon: Some(epsilon),
            sigma: Some(sigma),
            tau: Some(tau),
            ..Self::new("poschl-teller", m)
        }
    }

    pub fn eckart(zeta: f64, tp: TransformParams, m: f64) -> Self {
        PotentialSpec { zeta: Some(zeta), a: Some(tp.a()), b: Some(tp.b()), ..Self::new("eckart", m) }
    }

    pub fn with_kappa(mut self, kappa: i32) -> Self {
        self.kappa = kappa;
        self
    }

    /// Keys currently set, by their JSON names.
    pub fn present_keys(&self) -> Vec<&'static str> {
        let mut keys = Vec::new();
        let optional: [(&'static str, bool); 9] = [
            ("zeta", self.zeta.is_some()),
            ("eta", self.eta.is_some()),
            ("eta_r", self.eta_r.is_some()),
            ("eta_i", self.eta_i.is_some()),
            ("epsilon", self.epsilon.is_some()),
            ("sigma", self.sigma.is_some()),
            ("tau", self.tau.is_some()),
            ("a", self.a.is_some()),
            ("b", self.b.is_some()),
        ];
        for (key, set) in optional {
            if set {
                keys.push(key);
            }
        }
        keys
    }

    /// Reads a real-valued parameter by its JSON name.
    pub fn get(&self, key: &str) -> Option<f64> {
        match key {
            "m" => Some(self.m),
            "kappa" => Some(self.kappa as f64),
            "zeta" => self.zeta,
            "eta" => self.eta,
            "eta_r" => self.eta_r,
            "eta_i" => self.eta_i,
            "epsilon" => self.epsilon,
            "sigma" => self.sigma.map(f64::from),
            "tau" => self.tau.map(f64::from),
            "a" => self.a,
            "b" => self.b,
            _ => None,
        }
    }

    /// Overwrites a real-valued parameter. Integer-valued keys and the
    /// family tag cannot be set this way.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let slot = match key {
            "m" => {
                self.m = value;
                return Ok(());
            }
            "zeta" => &mut self.zeta,
            "eta" => &mut self.eta,
            "eta_r" => &mut self.eta_r,
            "eta_i" => &mut self.eta_i,
            "epsilon" => &mut self.epsilon,
            "a" => &mut self.a,
            "b" => &mut self.b,
            other => return Err(Error::InvalidParameter(format!("`{other}` is not a real-valued parameter"))),
        };
        *slot = Some(value);
        Ok(())
    }

    /// Resolves the spec against the standard registry.
    pub fn model(&self) -> Result<Box<dyn FamilyModel>> {
        registry().resolve(self)
    }
}

/// Parameters of the reference Schrödinger problem a family maps onto.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ReferenceParams {
    /// `A(A-1) csch²x - 2iB coth x`.
    Eckart { a: f64, b: f64 },
    /// `[b² + q² - 1/4] csch²x - 2qb csch x coth x`.
    RosenMorse2 { q: f64, b_r: f64, b_i: f64 },
    /// `[b² - q² + 1/4] sech²x - 2qb sech x tanh x`.
    Scarf { q: f64, b_r: f64, b_i: f64 },
    /// `M(M-1) csch²t - N(N+1) sech²t`. Index 0 of each root pair is the
    /// one substituted into the printed spectrum; index 1 is the other root
    /// of the same quadratic.
    PoschlTeller { m_roots: [f64; 2], n_roots: [f64; 2], sigma: i32, tau: i32 },
}

impl ReferenceParams {
    /// Pöschl-Teller reference data from one root of each quadratic.
    pub fn poschl_teller(m: f64, n: f64, sigma: i32, tau: i32) -> Self {
        ReferenceParams::PoschlTeller { m_roots: [m, 1.0 - m], n_roots: [n, -n - 1.0], sigma, tau }
    }

    /// The reference potential at contour coordinate `z`.
    pub fn potential_at(&self, z: C64) -> C64 {
        match *self {
            ReferenceParams::Eckart { a, b } => {
                let s = csch(z);
                a * (a - 1.0) * s * s - 2.0 * I * b * coth(z)
            }
            ReferenceParams::RosenMorse2 { q, b_r, b_i } => {
                let b = C64::new(b_r, b_i);
                let s = csch(z);
                (b * b + q * q - 0.25) * s * s - 2.0 * q * b * s * coth(z)
            }
            ReferenceParams::Scarf { q, b_r, b_i } => {
                let b = C64::new(b_r, b_i);
                let s = sech(z);
                (b * b - q * q + 0.25) * s * s - 2.0 * q * b * s * tanh(z)
            }
            ReferenceParams::PoschlTeller { m_roots, n_roots, .. } => {
                let (m, n) = (m_roots[0], n_roots[0]);
                let (s, c) = (csch(z), sech(z));
                m * (m - 1.0) * s * s - n * (n + 1.0) * c * c
            }
        }
    }
}

/// Grid settings a family is verified on unless the caller overrides them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridDefaults {
    pub h: f64,
    pub half_width: f64,
    pub shift: f64,
}

/// A validated potential: one family with concrete parameters.
pub trait FamilyModel: Send + Sync + fmt::Debug {
    fn family(&self) -> &'static str;

    /// Canonical spec: family name normalized, defaults filled in.
    fn spec(&self) -> PotentialSpec;

    fn mass(&self) -> f64;

    fn kappa(&self) -> i32;

    /// The `(eV, eA)` pair as functions of the contour coordinate.
    fn four_vector(&self) -> FourVectorPotential;

    /// The rotation used by the scalar-potential reduction, if any.
    fn transform(&self) -> Option<TransformParams> {
        None
    }

    fn energy_dependent(&self) -> bool {
        false
    }

    /// Closed-form effective potential and its constant shift.
    fn closed_form(&self, energy: Option<f64>) -> Result<(ComplexFn, C64)>;

    fn reference(&self, energy: Option<f64>) -> Result<ReferenceParams>;

    /// The spectral formulas this family offers, by name.
    fn formulas(&self) -> Vec<Arc<dyn SpectralFormula>>;

    /// Formula whose levels carry eigenfunction data.
    fn wavefunction_formula(&self) -> Option<&'static str> {
        None
    }

    /// Analytic upper component at the given contour points, unnormalized.
    fn eigenfunction(&self, _level: &BoundLevel, _points: &[C64]) -> Result<Vec<C64>> {
        Err(Error::UnsupportedFamily(format!(
            "no closed-form eigenfunction is available for the {} family",
            self.family()
        )))
    }

    fn grid_defaults(&self) -> GridDefaults;

    /// Sample points used to compare the closed and constructive forms.
    fn probe_points(&self) -> Vec<C64> {
        let shift = self.grid_defaults().shift;
        [-2.6, -1.7, -0.9, -0.3, 0.4, 1.0, 1.8, 2.5].iter().map(|&x| C64::new(x, -shift)).collect()
    }
}

/// A family registered by name: validates specs and builds models.
pub trait PotentialFamily: Send + Sync {
    fn name(&self) -> &'static str;

    fn aliases(&self) -> &'static [&'static str] {
        &[]
    }

    /// Family-specific keys that may appear in a spec.
    fn keys(&self) -> &'static [&'static str];

    fn build(&self, spec: &PotentialSpec) -> Result<Box<dyn FamilyModel>>;
}

#[derive(Default)]
pub struct FamilyRegistry {
    families: BTreeMap<&'static str, Arc<dyn PotentialFamily>>,
    aliases: BTreeMap<&'static str, &'static str>,
}

impl FamilyRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// The four families built into the crate.
    pub fn standard() -> Self {
        let mut registry = Self::new();
        registry.register(Arc::new(families::eckart::EckartFamily));
        registry.register(Arc::new(families::rosen_morse::RosenMorse2Family));
        registry.register(Arc::new(families::scarf::ScarfFamily));
        registry.register(Arc::new(families::poschl_teller::PoschlTellerFamily));
        registry
    }

    pub fn register(&mut self, family: Arc<dyn PotentialFamily>) {
        for alias in family.aliases() {
            self.aliases.insert(alias, family.name());
        }
        self.families.insert(family.name(), family);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.families.keys().copied().collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn PotentialFamily> {
        let key = name.trim().to_ascii_lowercase().replace('_', "-");
        let canonical = self.aliases.get(key.as_str()).copied().unwrap_or(key.as_str());
        self.families.get(canonical).map(|f| f.as_ref()).ok_or_else(|| {
            Error::InvalidParameter(format!("unknown family `{name}` (expected one of: {})", self.names().join(", ")))
        })
    }

    /// Checks the spec's common fields and key set, then builds the model.
    pub fn resolve(&self, spec: &PotentialSpec) -> Result<Box<dyn FamilyModel>> {
        let family = self.get(&spec.family)?;
        if !(spec.m.is_finite() && spec.m > 0.0) {
            return Err(Error::InvalidParameter(format!("mass m must be positive (got {})", spec.m)));
        }
        let allowed = family.keys();
        if let Some(bad) = spec.present_keys().into_iter().find(|k| !allowed.contains(k)) {
            return Err(Error::InvalidParameter(format!(
                "`{bad}` is not a parameter of the {} family (allowed: {})",
                family.name(),
                allowed.join(", ")
            )));
        }
        for key in spec.present_keys() {
            if let Some(v) = spec.get(key) {
                if !v.is_finite() {
                    return Err(Error::InvalidParameter(format!("`{key}` must be finite")));
                }
            }
        }
        family.build(spec)
    }
}

/// The process-wide registry of built-in families.
pub fn registry() -> &'static FamilyRegistry {
    static REGISTRY: OnceLock<FamilyRegistry> = OnceLock::new();
    REGISTRY.get_or_init(FamilyRegistry::standard)
}

pub fn require(spec: &PotentialSpec, key: &str) -> Result<f64> {
    spec.get(key).ok_or_else(|| Error::InvalidParameter(format!("the {} family requires `{key}`", spec.family)))
}

pub fn sign_parameter(value: Option<i32>, key: &str) -> Result<i32> {
    match value.unwrap_or(-1) {
        s @ (-1 | 1) => Ok(s),
        other => Err(Error::InvalidParameter(format!("`{key}` must be +1 or -1 (got {other})"))),
    }
}

pub fn build_four_vector(spec: &PotentialSpec) -> Result<FourVectorPotential> {
    Ok(spec.model()?.four_vector())
}

/// The constructive effective potential: the scalar reduction when the
/// family rotates the spinor, `W² - W'` otherwise. Carries the family's
/// constant shift.
pub fn constructive_effective(model: &dyn FamilyModel, energy: Option<f64>) -> Result<EffectivePotential> {
    let (_, shift) = model.closed_form(energy)?;
    let fv = model.four_vector();
    let mut veff = match model.transform() {
        Some(tp) => {
            let e = energy.ok_or(Error::MissingEnergy)?;
            effective_potential_scalar(&tp, &fv, e)?
        }
        None => effective_potential_vector(&fv),
    };
    veff.constant_shift = shift;
    veff.energy_dependent = model.energy_dependent();
    Ok(veff)
}

/// The closed-form effective potential, compared against the constructive
/// route at the family's probe points.
pub fn effective_for(model: &dyn FamilyModel, energy: Option<f64>) -> Result<EffectivePotential> {
    if model.energy_dependent() && energy.is_none() {
        return Err(Error::MissingEnergy);
    }
    let (value, shift) = model.closed_form(energy)?;
    let constructive = constructive_effective(model, energy)?;
    let deviation =
        model.probe_points().into_iter().map(|z| (value(z) - constructive.value_at(z)).norm()).fold(0.0, f64::max);
    if !(deviation <= CROSS_CHECK_TOLERANCE) {
        log::warn!(
            "closed-form effective potential of the {} family deviates from the constructive form by {deviation:e}",
            model.family()
        );
    }
    let mut veff = EffectivePotential::new(value, shift, model.energy_dependent());
    veff.cross_check_deviation = Some(deviation);
    Ok(veff)
}

pub fn build_effective(spec: &PotentialSpec, energy: Option<f64>) -> Result<EffectivePotential> {
    effective_for(spec.model()?.as_ref(), energy)
}

/// Reference-problem parameters. The Eckart coupling `B` is proportional to
/// the energy, so that family needs `energy`.
pub fn to_reference(spec: &PotentialSpec, energy: Option<f64>) -> Result<ReferenceParams> {
    spec.model()?.reference(energy)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_json_round_trip() {
        let json = r#"{"family": "scarf", "m": 1.0, "kappa": -1, "zeta": 3.0, "eta_r": 1.0, "eta_i": 0.5}"#;
        let spec: PotentialSpec = serde_json::from_str(json).unwrap();
        assert_eq!(spec, PotentialSpec::scarf(3.0, 1.0, 0.5, 1.0));
        let back: PotentialSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn unknown_json_keys_are_rejected() {
        let json = r#"{"family": "scarf", "m": 1.0, "zeta": 3.0, "colour": 2}"#;
        assert!(serde_json::from_str::<PotentialSpec>(json).is_err());
    }

    #[test]
    fn foreign_family_keys_are_rejected() {
        let mut spec = PotentialSpec::scarf(3.0, 0.0, 0.0, 1.0);
        spec.epsilon = Some(0.3);
        let err = spec.model().unwrap_err();
        assert!(err.to_string().contains("epsilon"), "{err}");
    }

    #[test]
    fn family_names_resolve_with_aliases() {
        for name in ["scarf", "Scarf", "rosen-morse2", "rosen_morse2", "poschl-teller", "eckart"] {
            assert!(registry().get(name).is_ok(), "{name}");
        }
        assert!(registry().get("morse").is_err());
        assert_eq!(registry().names().len(), 4);
    }

    #[test]
    fn mass_must_be_positive() {
        assert!(PotentialSpec::scarf(3.0, 0.0, 0.0, 0.0).model().is_err());
        assert!(PotentialSpec::scarf(3.0, 0.0, 0.0, f64::NAN).model().is_err());
    }

    #[test]
    fn set_and_get_real_parameters() {
        let mut spec = PotentialSpec::scarf(3.0, 0.0, 0.0, 1.0);
        spec.set("zeta", 2.5).unwrap();
        assert_eq!(spec.get("zeta"), Some(2.5));
        assert!(spec.set("kappa", 1.0).is_err());
        assert!(spec.set("family", 1.0).is_err());
    }
}
