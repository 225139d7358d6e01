//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::process::Command;
use std::time::{Duration, Instant};

use dirac_spectra::families::poschl_teller::ALL_BRANCHES;
use dirac_spectra::jacobi::{jacobi_derivative, jacobi_eval, jacobi_eval_series, JacobiParams};
use dirac_spectra::potentials::{build_effective, constructive_effective, FamilyModel};
use dirac_spectra::spectra::{levels_with, spectrum, spectrum_with, wavefunction_levels, CLOSED_FORM};
use dirac_spectra::transform::{gauge_fix_check, TransformParams};
use dirac_spectra::verify::{residual_norm, solver, verify_family, ContourGrid, Tolerances, VerificationReport};
use dirac_spectra::wavefun::{eigenfunction_for, level_with_index, normalize};
use dirac_spectra::{PotentialSpec, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BIN: &str = env!("CARGO_BIN_EXE_dirac-spectra");

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn scarf(eta_r: f64) -> PotentialSpec {
    PotentialSpec::scarf(3.0, eta_r, 0.5, 1.0)
}

fn poschl_teller() -> PotentialSpec {
    PotentialSpec::poschl_teller(3.0, 1.0, 0.3, -1, -1, 3.0)
}

fn eckart() -> PotentialSpec {
    let tp = TransformParams::from_s_c(0.5, 0.75f64.sqrt()).expect("unit pair");
    PotentialSpec::eckart(-5.0, tp, 3.0)
}

fn grid(h: f64, shift: f64) -> ContourGrid {
    ContourGrid::symmetric(12.0, h, shift).expect("valid grid")
}

fn verify(spec: &PotentialSpec, h: f64) -> Result<VerificationReport, String> {
    let model = spec.model().map_err(|e| e.to_string())?;
    let g = grid(h, model.grid_defaults().shift);
    let ql = solver("tridiagonal").map_err(|e| e.to_string())?;
    verify_family(spec, &g, Tolerances::default(), ql.as_ref()).map_err(|e| e.to_string())
}

fn energies_match(report: &VerificationReport, expected: &[f64]) -> Result<(), String> {
    let closed: Vec<f64> = report.levels.iter().map(|l| l.closed_form).collect();
    if closed.len() != expected.len() || closed.iter().zip(expected).any(|(a, b)| (a - b).abs() > 1e-12) {
        return Err(format!("closed-form energies {closed:?}, expected {expected:?}"));
    }
    if let Some(bad) = report.levels.iter().find(|l| !l.matched) {
        return Err(format!("level n = {} unmatched: {bad:?}", bad.n));
    }
    if report.spurious_count != 0 {
        return Err(format!("{} spurious eigenvalues", report.spurious_count));
    }
    Ok(())
}

fn worst_rel(report: &VerificationReport) -> f64 {
    report.levels.iter().filter_map(|l| l.rel_error).fold(0.0, f64::max)
}

fn scarf_oracle() -> Outcome {
    let started = Instant::now();
    let report = verify(&scarf(0.0), 0.01)?;
    let elapsed = started.elapsed();
    energies_match(&report, &[1.0, 6f64.sqrt(), 3.0])?;
    if elapsed > Duration::from_secs(60) {
        return Err(format!("took {elapsed:?}"));
    }
    let broken = verify(&scarf(1.0), 0.01)?;
    let persists = broken.max_abs_imag.is_some_and(|m| m <= 1e-5) && broken.passed();
    Ok(format!(
        "max rel {:.2e}, max |Im E| {:.2e}, {:.1?}; eta_r = 1: realness persists = {persists} (max |Im E| {:.2e})",
        worst_rel(&report),
        report.max_abs_imag.unwrap_or(0.0),
        elapsed,
        broken.max_abs_imag.unwrap_or(f64::NAN)
    ))
}

fn rosen_morse_oracle() -> Outcome {
    let report = verify(&PotentialSpec::rosen_morse2(3.0, 1.0, 0.5, 1.0), 0.01)?;
    let expected: Vec<f64> = (0..3).map(|n| (1.0 + 9.0 - (3.0 - n as f64).powi(2)).sqrt()).collect();
    energies_match(&report, &expected)?;
    Ok(format!("max rel {:.2e}, max |Im E| {:.2e}", worst_rel(&report), report.max_abs_imag.unwrap_or(0.0)))
}

fn poschl_teller_adjudication() -> Outcome {
    let spec = poschl_teller();
    let printed = spectrum(&spec).map_err(|e| e.to_string())?;
    if printed.iter().filter(|l| l.admissible).count() < 2 {
        return Err("fewer than two printed levels for the chosen mass".into());
    }
    let report = verify(&spec, 0.01)?;
    let verdict = |name: &str| report.adjudication.iter().find(|v| v.formula == name);
    let closed = verdict(CLOSED_FORM).ok_or("no closed-form verdict")?;
    let matching = report.matching_formulas();
    let Some(winner) = matching.first().and_then(|name| verdict(name)) else {
        return Err(format!("no formula matched; numeric {:?}", report.numeric_energies));
    };
    if winner.max_rel_error.is_none_or(|r| r > 1e-3) {
        return Err(format!("{} matched with rel error {:?}", winner.formula, winner.max_rel_error));
    }
    Ok(format!(
        "{} matches ({} levels, max rel {:.2e}); closed form deviates: {}/{} matched, max rel {:.3}, {} unexplained",
        winner.formula,
        winner.level_count,
        winner.max_rel_error.unwrap_or(0.0),
        closed.matched_count,
        closed.level_count,
        closed.max_rel_error.unwrap_or(f64::NAN),
        closed.spurious_count
    ))
}

fn eckart_worked_level() -> Outcome {
    let spec = eckart();
    let levels = spectrum_with(&spec, CLOSED_FORM).map_err(|e| e.to_string())?;
    let level = levels.iter().find(|l| l.n == 2).ok_or("no n = 2 level")?;
    if (level.energy - 3.75).abs() > 1e-12 || !level.admissible {
        return Err(format!("n = 2 gives {level:?}"));
    }
    let report = verify(&spec, 0.01)?;
    let section = report.eckart.as_ref().ok_or("no Eckart section")?;
    let run =
        section.fixed_points.first().ok_or_else(|| format!("no fixed point converged: {:?}", section.failures))?;
    let tail = &run.steps[run.steps.len().saturating_sub(5)..];
    if tail.windows(2).any(|w| w[1] > w[0]) {
        return Err(format!("steps not contracting: {:?}", run.steps));
    }
    if section.defects.is_empty() || section.denominator_verdict.starts_with("undecided") {
        return Err(format!("adjudication missing: {}", section.denominator_verdict));
    }
    Ok(format!(
        "E(n=2) = 3.75; fixed point n = {} at E = {:.6} in {} iterations; denominator: {}; {} level(s) unresolved",
        run.n,
        run.energy_re,
        run.iterations,
        section.denominator_verdict,
        section.failures.len()
    ))
}

fn residual_ratios(model: &dyn FamilyModel, formula: Option<&str>) -> Result<Vec<f64>, String> {
    let levels = match formula {
        Some(name) => levels_with(model, name),
        None => wavefunction_levels(model),
    }
    .map_err(|e| e.to_string())?;
    let shift = model.grid_defaults().shift;
    levels
        .iter()
        .filter(|l| l.admissible)
        .map(|l| {
            let coarse = residual_norm(model, l, &grid(0.02, shift)).map_err(|e| e.to_string())?;
            let fine = residual_norm(model, l, &grid(0.01, shift)).map_err(|e| e.to_string())?;
            Ok(coarse / fine)
        })
        .collect()
}

fn residual_convergence() -> Outcome {
    let scarf_model = scarf(0.0).model().map_err(|e| e.to_string())?;
    let pt_model = poschl_teller().model().map_err(|e| e.to_string())?;
    let mut ratios = residual_ratios(scarf_model.as_ref(), None)?;
    ratios.extend(residual_ratios(pt_model.as_ref(), Some(ALL_BRANCHES))?);
    if ratios.is_empty() || ratios.iter().any(|r| !(3.5..=4.5).contains(r)) {
        return Err(format!("ratios {ratios:?}"));
    }
    Ok(format!("{} levels, ratios in [{:.3}, {:.3}]", ratios.len(), min(&ratios), max(&ratios)))
}

fn min(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

fn max(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn jacobi_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut worst_value: f64 = 0.0;
    let mut worst_derivative: f64 = 0.0;
    for _ in 0..50 {
        let mut c = |r: f64| C64::new(rng.gen_range(-r..r), rng.gen_range(-r..r));
        let (alpha, beta, z) = (c(3.0), c(3.0), c(1.0));
        let n = rng.gen_range(0..=20);
        let params = JacobiParams::new(n, alpha, beta).map_err(|e| e.to_string())?;
        let recurrence = jacobi_eval(params, z).map_err(|e| e.to_string())?;
        let series = jacobi_eval_series(params, z).map_err(|e| e.to_string())?;
        worst_value = worst_value.max((recurrence - series).norm() / series.norm().max(1.0));
        let h = 1e-5;
        let fd = (jacobi_eval(params, z + h).map_err(|e| e.to_string())?
            - jacobi_eval(params, z - h).map_err(|e| e.to_string())?)
            / (2.0 * h);
        let d = jacobi_derivative(params, z).map_err(|e| e.to_string())?;
        worst_derivative = worst_derivative.max((d - fd).norm() / d.norm().max(1.0));
    }
    if worst_value > 1e-11 || worst_derivative > 1e-6 {
        return Err(format!("value {worst_value:.2e}, derivative {worst_derivative:.2e}"));
    }
    Ok(format!("50 draws: value {worst_value:.2e}, derivative {worst_derivative:.2e}"))
}

fn structural_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let tp = TransformParams::from_angle(rng.gen_range(-3.0..3.0));
        let unit = tp.s().powi(2) + tp.c().powi(2);
        if (unit - 1.0).abs() > 1e-14 {
            return Err(format!("S^2 + C^2 = {unit}"));
        }
    }

    let specs = [scarf(0.4), PotentialSpec::rosen_morse2(2.0, 1.0, 0.5, 1.0), poschl_teller(), eckart()];
    let mut worst_kappa: f64 = 0.0;
    for spec in &specs {
        let base = spec.model().map_err(|e| e.to_string())?;
        let energy = base.energy_dependent().then_some(4.0);
        let points = base.probe_points();
        let reference = constructive_effective(base.as_ref(), energy).map_err(|e| e.to_string())?;
        let closed_reference = build_effective(spec, energy).map_err(|e| e.to_string())?;
        for kappa in [-2, -1, 1, 3] {
            let model = spec.clone().with_kappa(kappa).model().map_err(|e| e.to_string())?;
            let veff = constructive_effective(model.as_ref(), energy).map_err(|e| e.to_string())?;
            let closed = build_effective(&spec.clone().with_kappa(kappa), energy).map_err(|e| e.to_string())?;
            for &z in &points {
                let scale = 1.0 + reference.value_at(z).norm();
                worst_kappa = worst_kappa.max((veff.value_at(z) - reference.value_at(z)).norm() / scale);
                worst_kappa = worst_kappa.max((closed.value_at(z) - closed_reference.value_at(z)).norm() / scale);
            }
        }
    }
    if worst_kappa > 1e-12 {
        return Err(format!("kappa dependence {worst_kappa:.2e}"));
    }

    let pt_gap = |eta_r: f64| -> Result<f64, String> {
        let veff = build_effective(&scarf(eta_r), None).map_err(|e| e.to_string())?;
        Ok((1..=20)
            .map(|j| {
                let x = 0.37 * j as f64;
                (veff.value_at(C64::new(-x, 0.0)).conj() - veff.value_at(C64::new(x, 0.0))).norm()
            })
            .fold(0.0, f64::max))
    };
    let (symmetric, broken) = (pt_gap(0.0)?, pt_gap(1.0)?);
    if symmetric > 1e-12 || broken < 1e-3 {
        return Err(format!("PT gap {symmetric:.2e} at eta_r = 0, {broken:.2e} at eta_r = 1"));
    }

    let model = eckart().model().map_err(|e| e.to_string())?;
    let tp = model.transform().ok_or("Eckart without rotation")?;
    let gauge = gauge_fix_check(&tp, &model.four_vector(), &model.probe_points()).map_err(|e| e.to_string())?;
    if gauge > 1e-12 {
        return Err(format!("gauge defect {gauge:.2e}"));
    }
    Ok(format!("kappa {worst_kappa:.1e}, PT gap {symmetric:.1e} (eta_r = 1: {broken:.2}), gauge {gauge:.1e}"))
}

fn run_cli(args: &[&str]) -> Result<(i32, Vec<u8>), String> {
    let out = Command::new(BIN).args(args).output().map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

fn edge_behavior() -> Outcome {
    for spec in [scarf(0.0), PotentialSpec::rosen_morse2(3.0, 1.0, 0.5, 1.0)] {
        let ground = spectrum(&spec).map_err(|e| e.to_string())?.into_iter().find(|l| l.n == 0);
        if ground.as_ref().map(|l| l.energy) != Some(spec.m) {
            return Err(format!("{} ground state {ground:?}", spec.family));
        }
    }
    let (code, _) = run_cli(&[
        "spectrum",
        "--family",
        "poschl-teller",
        "--zeta",
        "0.5",
        "--eta",
        "0.5",
        "--epsilon",
        "0.3",
        "--m",
        "1",
    ])?;
    if code != 3 {
        return Err(format!("empty spectrum exit {code}"));
    }
    let model = scarf(0.0).model().map_err(|e| e.to_string())?;
    let level = level_with_index(model.as_ref(), 0).map_err(|e| e.to_string())?;
    let sampled = eigenfunction_for(model.as_ref(), &level, &grid(0.01, 0.0)).map_err(|e| e.to_string())?;
    let (once, _) = normalize(&sampled).map_err(|e| e.to_string())?;
    let (twice, scale) = normalize(&once).map_err(|e| e.to_string())?;
    let norm = twice.norm_squared();
    if (scale - 1.0).abs() > 1e-12 || (norm - 1.0).abs() > 1e-8 {
        return Err(format!("rescale {scale}, norm {norm}"));
    }
    Ok(format!("E(n=0) = m for scarf and rosen-morse2, empty exit 3, norm {:.1e} off", (norm - 1.0).abs()))
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let scarf_args =
        ["--family", "scarf", "--zeta", "3", "--m", "1", "--eta-r", "0", "--eta-i", "0.5", "--stable-output"];
    let pt_args =
        ["--family", "poschl-teller", "--zeta", "3", "--eta", "1", "--epsilon", "0.3", "--m", "3", "--stable-output"];
    for (label, args) in [("scarf", &scarf_args[..]), ("poschl-teller", &pt_args[..])] {
        let spectrum_args: Vec<&str> = std::iter::once("spectrum").chain(args.iter().copied()).collect();
        let (code, first) = run_cli(&spectrum_args)?;
        let (_, second) = run_cli(&spectrum_args)?;
        if code != 0 || first != second {
            return Err(format!("{label} spectrum not reproducible (exit {code})"));
        }
        let path = dir.path().join(format!("{label}.json"));
        std::fs::write(&path, &first).map_err(|e| e.to_string())?;
        let path = path.to_string_lossy().into_owned();
        let (_, replay) = run_cli(&["spectrum", "--config", &path, "--stable-output"])?;
        if replay != first {
            return Err(format!("{label} config round trip differs"));
        }
    }
    let verify_args: Vec<&str> = std::iter::once("verify").chain(scarf_args.iter().copied()).collect();
    let (code, first) = run_cli(&verify_args)?;
    let (_, second) = run_cli(&verify_args)?;
    if code != 0 || first != second {
        return Err(format!("verify report not reproducible (exit {code})"));
    }
    Ok("spectrum and verify byte-identical; config round trip identical".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("scarf oracle match", scarf_oracle),
        ("rosen-morse2 oracle match", rosen_morse_oracle),
        ("poschl-teller adjudication", poschl_teller_adjudication),
        ("eckart worked level and fixed point", eckart_worked_level),
        ("residual convergence", residual_convergence),
        ("jacobi correctness", jacobi_correctness),
        ("structural invariants", structural_invariants),
        ("edge behavior", edge_behavior),
        ("cli determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (index, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", index + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", index + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
