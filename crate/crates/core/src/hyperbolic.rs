//! Hyperbolic functions of a complex argument.
//!
//! The reciprocal functions are written in terms of `e^{-2|z|}` so they stay
//! finite far out on the contour, where `sinh` and `cosh` themselves would
//! overflow.

use crate::C64;

/// Beyond this real part the exponential forms are used exclusively.
const REDUCTION_THRESHOLD: f64 = 30.0;

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// `(e^{-2z}, sign)` for the half-plane-reduced argument `sign * z`.
fn reduced(z: C64) -> (C64, f64) {
    if z.re >= 0.0 {
        ((-2.0 * z).exp(), 1.0)
    } else {
        ((2.0 * z).exp(), -1.0)
    }
}

pub fn sinh(z: C64) -> C64 {
    z.sinh()
}

pub fn cosh(z: C64) -> C64 {
    z.cosh()
}

pub fn tanh(z: C64) -> C64 {
    let (w, s) = reduced(z);
    (one() - w) / (one() + w) * s
}

pub fn coth(z: C64) -> C64 {
    let (w, s) = reduced(z);
    (one() + w) / (one() - w) * s
}

pub fn sech(z: C64) -> C64 {
    if z.re.abs() < REDUCTION_THRESHOLD {
        return z.cosh().inv();
    }
    let (w, s) = reduced(z);
    // e^{-|z|} with the sign of Re z folded in.
    let half = (-(z * s)).exp();
    2.0 * half / (one() + w)
}

pub fn csch(z: C64) -> C64 {
    if z.re.abs() < REDUCTION_THRESHOLD {
        return z.sinh().inv();
    }
    let (w, s) = reduced(z);
    let half = (-(z * s)).exp();
    2.0 * half / (one() - w) * s
}

/// Principal logarithm of `cosh z`, accurate for large `|Re z|`.
pub fn ln_cosh(z: C64) -> C64 {
    if z.re.abs() < REDUCTION_THRESHOLD {
        return z.cosh().ln();
    }
    let (w, s) = reduced(z);
    z * s + (one() + w).ln() - std::f64::consts::LN_2
}

/// Principal logarithm of `sinh z`, accurate for large `|Re z|`.
pub fn ln_sinh(z: C64) -> C64 {
    if z.re.abs() < REDUCTION_THRESHOLD {
        return z.sinh().ln();
    }
    let (w, s) = reduced(z);
    let base = z * s + (one() - w).ln() - std::f64::consts::LN_2;
    if s > 0.0 {
        base
    } else {
        // sinh z = -sinh(-z); shift the branch back into (-pi, pi].
        let shifted = base + C64::new(0.0, std::f64::consts::PI);
        if shifted.im > std::f64::consts::PI {
            shifted - C64::new(0.0, 2.0 * std::f64::consts::PI)
        } else {
            shifted
        }
    }
}

/// Gudermannian `gd(z) = arctan(sinh z)`, continued off the real axis as
/// `2 arctan(tanh(z / 2))`.
pub fn gudermannian(z: C64) -> C64 {
    2.0 * tanh(z / 2.0).atan()
}

/// `w^s` on the principal branch.
pub fn cpow(w: C64, s: C64) -> C64 {
    if w == C64::new(0.0, 0.0) {
        return if s.re > 0.0 { w } else { C64::new(f64::INFINITY, 0.0) };
    }
    (s * w.ln()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn reciprocal_functions_match_direct_forms() {
        for &(re, im) in &[(0.3, -0.2), (-1.7, 0.4), (4.0, -1.0), (-0.05, 0.3)] {
            let z = C64::new(re, im);
            assert!(close(tanh(z), z.tanh(), 1e-14));
            assert!(close(coth(z), z.tanh().inv(), 1e-14));
            assert!(close(sech(z), z.cosh().inv(), 1e-14));
            assert!(close(csch(z), z.sinh().inv(), 1e-14));
            assert!(close(ln_cosh(z), z.cosh().ln(), 1e-14));
            assert!(close(ln_sinh(z), z.sinh().ln(), 1e-14));
        }
    }

    #[test]
    fn large_arguments_stay_finite() {
        let z = C64::new(800.0, -0.3);
        assert!(sech(z).norm() < 1e-300 || sech(z).norm() == 0.0);
        assert!(close(tanh(z), C64::new(1.0, 0.0), 1e-15));
        assert!(close(coth(-z), C64::new(-1.0, 0.0), 1e-15));
        assert!(ln_cosh(z).re.is_finite());
        assert!(ln_sinh(-z).re.is_finite());
    }

    #[test]
    fn reduced_logs_agree_with_direct_logs_past_threshold() {
        for &(re, im) in &[(35.0, -0.3), (-35.0, -0.3), (-35.0, 0.4), (31.0, 1.2)] {
            let z = C64::new(re, im);
            assert!(close(ln_cosh(z), z.cosh().ln(), 1e-13), "ln_cosh {z}");
            assert!(close(ln_sinh(z), z.sinh().ln(), 1e-13), "ln_sinh {z}");
            assert!(close(sech(z), z.cosh().inv(), 1e-13));
            assert!(close(csch(z), z.sinh().inv(), 1e-13));
        }
    }

    #[test]
    fn gudermannian_is_arctan_sinh_on_real_axis() {
        for x in [-3.0, -0.5, 0.0, 0.7, 5.0] {
            let g = gudermannian(C64::new(x, 0.0));
            assert!((g.re - f64::sinh(x).atan()).abs() < 1e-14);
            assert!(g.im.abs() < 1e-15);
        }
    }
}
