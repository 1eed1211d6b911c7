//! Adaptive Gauss–Kronrod quadrature and a few fixed composite rules.

use crate::error::{Error, Result};
use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    /// Maximum number of interval bisections.
    pub max_subdivisions: usize,
}

impl<T: Real> Default for QuadOptions<T> {
    fn default() -> Self {
        Self { abs_tol: T::lit(1e-13), rel_tol: T::lit(1e-11), max_subdivisions: 2000 }
    }
}

impl<T: Real> QuadOptions<T> {
    pub fn tol(abs_tol: T, rel_tol: T) -> Self {
        Self { abs_tol, rel_tol, ..Self::default() }
    }
}

/// One 15-point Kronrod panel: (integral, error estimate).
pub fn kronrod15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let half = (b - a) * T::lit(0.5);
    let center = (a + b) * T::lit(0.5);
    let fc = f(center);
    let mut rk = fc * T::lit(WGK[7]);
    let mut rg = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let s = f(center - dx) + f(center + dx);
        rk = rk + s * T::lit(WGK[j]);
        if j % 2 == 1 {
            rg = rg + s * T::lit(WG[j / 2]);
        }
    }
    (rk * half, ((rk - rg) * half).abs())
}

/// Globally adaptive G7K15 on `[a, b]`. The worst panel is bisected until the
/// summed error estimate falls below `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, b: T, opts: &QuadOptions<T>) -> Result<(T, T)> {
    if a == b {
        return Ok((T::zero(), T::zero()));
    }
    let (v, e) = kronrod15(&mut f, a, b);
    let mut panels = vec![(a, b, v, e)];
    let mut total = v;
    let mut err = e;
    for _ in 0..opts.max_subdivisions {
        if !total.is_finite() {
            return Err(Error::Domain("non-finite integrand".into()));
        }
        if err <= opts.abs_tol.max(opts.rel_tol * total.abs()) {
            return Ok((total, err));
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |acc, (k, p)| if p.3 > acc.1 { (k, p.3) } else { acc });
        let (lo, hi, pv, pe) = panels.swap_remove(worst);
        let mid = (lo + hi) * T::lit(0.5);
        let (v1, e1) = kronrod15(&mut f, lo, mid);
        let (v2, e2) = kronrod15(&mut f, mid, hi);
        total = total - pv + v1 + v2;
        err = err - pe + e1 + e2;
        panels.push((lo, mid, v1, e1));
        panels.push((mid, hi, v2, e2));
        // recompute now and then to stop drift in the running sums
        if panels.len() % 64 == 0 {
            total = panels.iter().map(|p| p.2).sum();
            err = panels.iter().map(|p| p.3).sum();
        }
    }
    let total: T = panels.iter().map(|p| p.2).sum();
    let err: T = panels.iter().map(|p| p.3).sum();
    if err <= opts.abs_tol.max(opts.rel_tol * total.abs()) * T::lit(100.0) {
        Ok((total, err))
    } else {
        Err(Error::NoConvergence(opts.max_subdivisions))
    }
}

/// Integrates over consecutive breakpoints, adaptively on each piece.
pub fn integrate_pieces<T: Real, F: FnMut(T) -> T>(mut f: F, breaks: &[T], opts: &QuadOptions<T>) -> Result<T> {
    let mut sum = T::zero();
    for w in breaks.windows(2) {
        sum = sum + integrate(&mut f, w[0], w[1], opts)?.0;
    }
    Ok(sum)
}

/// Simpson's rule on one panel of width `h` with a midpoint sample.
#[inline]
pub fn simpson_panel<T: Real>(h: T, f0: T, fm: T, f1: T) -> T {
    h / T::lit(6.0) * (f0 + T::lit(4.0) * fm + f1)
}

/// Composite trapezoid rule on a (possibly non-uniform) grid.
pub fn trapezoid<T: Real>(x: &[T], y: &[T]) -> T {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| (xs[1] - xs[0]) * (ys[0] + ys[1]) * T::lit(0.5))
        .sum()
}
