//! Jacobi polynomials `P_n^{(α,β)}(z)` with complex parameters and argument.

use num_complex::Complex;
use twofloat::TwoFloat;

use crate::{Error, Result, C64};

/// Highest degree accepted by the explicit-sum evaluator.
pub const SERIES_MAX_DEGREE: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub alpha: C64,
    pub beta: C64,
    pub n: usize,
}

impl JacobiParams {
    pub fn new(n: usize, alpha: C64, beta: C64) -> Result<Self> {
        let p = JacobiParams { alpha, beta, n };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let finite = |c: C64| c.re.is_finite() && c.im.is_finite();
        if finite(self.alpha) && finite(self.beta) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "Jacobi parameters must be finite (alpha = {}, beta = {})",
                self.alpha, self.beta
            )))
        }
    }
}

fn check_argument(z: C64) -> Result<()> {
    if z.re.is_nan() || z.im.is_nan() {
        Err(Error::Domain("Jacobi argument is NaN".into()))
    } else {
        Ok(())
    }
}

/// Evaluates `P_n^{(α,β)}(z)` by the three-term recurrence in the degree.
///
/// Parameter combinations that zero the recurrence's leading coefficient
/// (for instance `n + α + β = 0` at some intermediate degree) are evaluated
/// from the explicit terminating sum instead.
pub fn jacobi_eval(params: JacobiParams, z: C64) -> Result<C64> {
    params.validate()?;
    check_argument(z)?;
    Ok(recurrence(params, z).unwrap_or_else(|| explicit_sum(params, z)))
}

fn recurrence(params: JacobiParams, z: C64) -> Option<C64> {
    let JacobiParams { alpha: a, beta: b, n } = params;
    let one = C64::new(1.0, 0.0);
    let p0 = one;
    if n == 0 {
        return Some(p0);
    }
    let p1 = (a + 1.0) + (a + b + 2.0) * (z - 1.0) * 0.5;
    if n == 1 {
        return Some(p1);
    }
    let ab = a + b;
    let (mut prev, mut cur) = (p0, p1);
    for k in 2..=n {
        let k = k as f64;
        let s = 2.0 * k + ab;
        let lead = 2.0 * k * (k + ab) * (s - 2.0);
        let scale = 2.0 * k * (k + ab.norm()) * (s.norm() + 2.0);
        if lead.norm() <= 1e-12 * scale {
            return None;
        }
        let linear = (s - 1.0) * (a * a - b * b);
        let cubic = (s - 2.0) * (s - 1.0) * s;
        let back = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        let next = ((linear + cubic * z) * cur - back * prev) / lead;
        prev = cur;
        cur = next;
    }
    Some(cur)
}

type Wide = Complex<TwoFloat>;

fn widen(z: C64) -> Wide {
    Complex::new(TwoFloat::from(z.re), TwoFloat::from(z.im))
}

// twofloat's wide-by-wide division drops its correction term; dividing by a
// plain f64 keeps the full width.
fn scale_down(w: Wide, k: usize) -> Wide {
    Complex::new(w.re / k as f64, w.im / k as f64)
}

/// `Σ_s (α+β+n+1)_s (α+s+1)_{n-s} / (s! (n-s)!) ((z-1)/2)^s`, accumulated in
/// double-double arithmetic. The terms can exceed the sum by many orders of
/// magnitude near a zero of the polynomial, which double precision cannot
/// absorb.
fn explicit_sum(params: JacobiParams, z: C64) -> C64 {
    let JacobiParams { alpha, beta, n } = params;
    let a = widen(alpha);
    let ab = a + widen(beta);
    let real = |x: usize| Complex::new(TwoFloat::from(x as f64), TwoFloat::from(0.0));
    let half = (widen(z) - real(1)) * Complex::new(TwoFloat::from(0.5), TwoFloat::from(0.0));
    let mut total = real(0);
    let mut power = real(1);
    for s in 0..=n {
        let mut coeff = real(1);
        for j in 0..s {
            coeff = scale_down(coeff * (ab + real(n + 1 + j)), j + 1);
        }
        for j in 0..(n - s) {
            coeff = scale_down(coeff * (a + real(s + 1 + j)), j + 1);
        }
        total += coeff * power;
        power *= half;
    }
    C64::new(f64::from(total.re), f64::from(total.im))
}

/// Evaluates `P_n^{(α,β)}(z)` from its explicit terminating hypergeometric
/// sum in extended precision. Independent of [`jacobi_eval`]'s recurrence;
/// limited to `n <= SERIES_MAX_DEGREE`.
pub fn jacobi_eval_series(params: JacobiParams, z: C64) -> Result<C64> {
    params.validate()?;
    check_argument(z)?;
    if params.n > SERIES_MAX_DEGREE {
        return Err(Error::DegreeTooLarge { n: params.n, max: SERIES_MAX_DEGREE });
    }
    Ok(explicit_sum(params, z))
}

/// `d/dz P_n^{(α,β)}(z) = (n + α + β + 1)/2 · P_{n-1}^{(α+1,β+1)}(z)`.
pub fn jacobi_derivative(params: JacobiParams, z: C64) -> Result<C64> {
    params.validate()?;
    check_argument(z)?;
    if params.n == 0 {
        return Ok(C64::new(0.0, 0.0));
    }
    let JacobiParams { alpha, beta, n } = params;
    let shifted = JacobiParams { alpha: alpha + 1.0, beta: beta + 1.0, n: n - 1 };
    Ok((alpha + beta + (n + 1) as f64) * 0.5 * jacobi_eval(shifted, z)?)
}
