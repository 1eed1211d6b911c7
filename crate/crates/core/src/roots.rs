//! Scalar root bracketing and refinement shared by the spectral and shooting code.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Scans `f` on `start, start + step, ...` and returns the first `count` brackets
/// `(lo, hi)` with a strict sign change. Gives up after `max_steps` evaluations.
pub fn scan_sign_changes<T, F>(
    mut f: F,
    start: T,
    step: T,
    count: usize,
    max_steps: usize,
) -> Result<Vec<(T, T)>>
where
    T: Real,
    F: FnMut(T) -> T,
{
    let mut out = Vec::with_capacity(count);
    let mut a = start;
    let mut fa = f(a);
    for _ in 0..max_steps {
        if out.len() == count {
            return Ok(out);
        }
        let b = a + step;
        let fb = f(b);
        if fa == T::zero() {
            // exact hit on a grid point: bracket it tightly
            out.push((a - step * T::lit(1e-3), a + step * T::lit(1e-3)));
        } else if fa * fb < T::zero() {
            out.push((a, b));
        }
        a = b;
        fa = fb;
    }
    if out.len() == count {
        Ok(out)
    } else {
        Err(Error::NoConvergence(max_steps))
    }
}

/// Bisection until the bracket is narrower than `width`, followed by safeguarded
/// Newton iterations using `fdf(x) -> (f, f')`. Falls back to bisection whenever a
/// Newton step leaves the bracket.
pub fn refine_root<T, F>(mut fdf: F, lo: T, hi: T, width: T, tol: T) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> (T, T),
{
    let (mut a, mut b) = if lo < hi { (lo, hi) } else { (hi, lo) };
    let (mut fa, _) = fdf(a);
    let (fb, _) = fdf(b);
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa * fb > T::zero() {
        return Err(Error::NoSignChange { lo: a.to_f64_lossy(), hi: b.to_f64_lossy() });
    }
    let half = T::lit(0.5);
    let mut guard = 0;
    while b - a > width && guard < 200 {
        let m = (a + b) * half;
        let (fm, _) = fdf(m);
        if fm == T::zero() {
            return Ok(m);
        }
        if fa * fm < T::zero() {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
        guard += 1;
    }
    let eps_floor = T::epsilon() * T::lit(4.0);
    let mut x = (a + b) * half;
    for _ in 0..100 {
        let (fx, dfx) = fdf(x);
        if fx == T::zero() {
            return Ok(x);
        }
        if fa * fx < T::zero() {
            b = x;
        } else {
            a = x;
            fa = fx;
        }
        let newton = if dfx != T::zero() { x - fx / dfx } else { T::nan() };
        let next = if newton.is_finite() && newton > a && newton < b {
            newton
        } else {
            (a + b) * half
        };
        let dx = (next - x).abs();
        x = next;
        if dx <= tol.max(eps_floor * x.abs()) || b - a <= eps_floor * x.abs().max(T::one()) {
            return Ok(x);
        }
    }
    Ok(x)
}
