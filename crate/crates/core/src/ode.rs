//! Dormand–Prince 5(4) with Hairer's fourth-order dense output.
//!
//! The state is a fixed-size array so the radial problems (2, 4 or 6 components)
//! run without allocation. Every accepted step is handed to an observer as a
//! [`DenseSegment`], which can evaluate the interpolant anywhere in the step and
//! may stop the integration.

use crate::error::{Error, Result};
use crate::scalar::Real;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Step-size control settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dopri5<T> {
    pub rtol: T,
    pub atol: T,
    /// Initial step; `None` picks one from the local derivative scale.
    pub h_init: Option<T>,
    pub h_max: T,
    pub max_steps: usize,
}

impl<T: Real> Default for Dopri5<T> {
    fn default() -> Self {
        Self { rtol: T::lit(1e-10), atol: T::lit(1e-10), h_init: None, h_max: T::infinity(), max_steps: 200_000 }
    }
}

/// Dense output over one accepted step `[t0, t0 + h]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenseSegment<T, const D: usize> {
    pub t0: T,
    pub h: T,
    rc: [[T; D]; 5],
    /// Derivative at the end of the step.
    pub dy1: [T; D],
}

impl<T: Real, const D: usize> DenseSegment<T, D> {
    #[inline]
    pub fn t1(&self) -> T {
        self.t0 + self.h
    }

    #[inline]
    pub fn y0(&self) -> [T; D] {
        self.rc[0]
    }

    pub fn y1(&self) -> [T; D] {
        let mut y = [T::zero(); D];
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.rc[0][i] + self.rc[1][i];
        }
        y
    }

    /// Interpolated state at `t` (extrapolates outside the step).
    pub fn eval(&self, t: T) -> [T; D] {
        let th = (t - self.t0) / self.h;
        let th1 = T::one() - th;
        let mut y = [T::zero(); D];
        for (i, yi) in y.iter_mut().enumerate() {
            let rc = &self.rc;
            *yi = rc[0][i] + th * (rc[1][i] + th1 * (rc[2][i] + th * (rc[3][i] + th1 * rc[4][i])));
        }
        y
    }

    /// Single component of the interpolant.
    #[inline]
    pub fn eval_component(&self, t: T, i: usize) -> T {
        let th = (t - self.t0) / self.h;
        let th1 = T::one() - th;
        let rc = &self.rc;
        rc[0][i] + th * (rc[1][i] + th1 * (rc[2][i] + th * (rc[3][i] + th1 * rc[4][i])))
    }
}

/// Observer verdict after each accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Stop,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome<T, const D: usize> {
    pub t: T,
    pub y: [T; D],
    pub accepted: usize,
    pub rejected: usize,
    /// True when the observer requested the stop.
    pub stopped: bool,
}

#[inline]
fn axpy<T: Real, const D: usize>(y: &[T; D], h: T, terms: &[(f64, &[T; D])]) -> [T; D] {
    let mut out = *y;
    for (c, k) in terms {
        let c = T::lit(*c) * h;
        for i in 0..D {
            out[i] = out[i] + c * k[i];
        }
    }
    out
}

impl<T: Real> Dopri5<T> {
    pub fn with_tol(rtol: T, atol: T) -> Self {
        Self { rtol, atol, ..Self::default() }
    }

    fn err_norm<const D: usize>(&self, y0: &[T; D], y1: &[T; D], e: &[T; D]) -> T {
        let mut acc = T::zero();
        for i in 0..D {
            let sk = self.atol + self.rtol * y0[i].abs().max(y1[i].abs());
            let q = e[i] / sk;
            acc = acc + q * q;
        }
        (acc / T::from_count(D)).sqrt()
    }

    fn initial_step<const D: usize, F>(&self, f: &mut F, t0: T, y0: &[T; D], f0: &[T; D], dir: T) -> T
    where
        F: FnMut(T, &[T; D]) -> [T; D],
    {
        let scale = |y: &[T; D], v: &[T; D]| {
            let mut acc = T::zero();
            for i in 0..D {
                let sk = self.atol + self.rtol * y[i].abs();
                acc = acc + (v[i] / sk) * (v[i] / sk);
            }
            (acc / T::from_count(D)).sqrt()
        };
        let d0 = scale(y0, y0);
        let d1 = scale(y0, f0);
        let mut h0 = if d0 < T::lit(1e-5) || d1 < T::lit(1e-5) { T::lit(1e-6) } else { T::lit(0.01) * d0 / d1 };
        h0 = h0.min(self.h_max);
        let y1 = axpy(y0, h0 * dir, &[(1.0, f0)]);
        let f1 = f(t0 + h0 * dir, &y1);
        let mut diff = [T::zero(); D];
        for i in 0..D {
            diff[i] = f1[i] - f0[i];
        }
        let d2 = scale(y0, &diff) / h0;
        let dm = d1.max(d2);
        let h1 = if dm <= T::lit(1e-15) {
            (h0 * T::lit(1e-3)).max(T::lit(1e-6))
        } else {
            (T::lit(0.01) / dm).powf(T::lit(0.2))
        };
        (h0 * T::lit(100.0)).min(h1).min(self.h_max)
    }

    /// Integrates `y' = f(t, y)` from `t0` to `t_end`, calling `observe` on every
    /// accepted step.
    pub fn solve<const D: usize, F, O>(&self, mut f: F, t0: T, y0: [T; D], t_end: T, mut observe: O) -> Result<Outcome<T, D>>
    where
        F: FnMut(T, &[T; D]) -> [T; D],
        O: FnMut(&DenseSegment<T, D>) -> Flow,
    {
        let mut t = t0;
        let mut y = y0;
        let mut out = Outcome { t, y, accepted: 0, rejected: 0, stopped: false };
        if t_end == t0 {
            return Ok(out);
        }
        let dir = if t_end > t0 { T::one() } else { -T::one() };
        let mut k1 = f(t, &y);
        let mut h = match self.h_init {
            Some(h) => h.abs().min(self.h_max),
            None => self.initial_step(&mut f, t, &y, &k1, dir),
        };
        let mut last_rejected = false;
        let span = (t_end - t0).abs();
        for _ in 0..self.max_steps {
            let remaining = (t_end - t).abs();
            if remaining <= T::epsilon() * T::lit(16.0) * span.max(t.abs()) {
                break;
            }
            let mut final_step = false;
            if h >= remaining {
                h = remaining;
                final_step = true;
            }
            let hmin = T::epsilon() * T::lit(16.0) * t.abs().max(span * T::lit(1e-3));
            if h < hmin {
                return Err(Error::StepUnderflow { radius: t.to_f64_lossy() });
            }
            let hs = h * dir;
            let k2 = f(t + hs * T::lit(C2), &axpy(&y, hs, &[(A21, &k1)]));
            let k3 = f(t + hs * T::lit(C3), &axpy(&y, hs, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(t + hs * T::lit(C4), &axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = f(t + hs * T::lit(C5), &axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
            let ysti = axpy(&y, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]);
            let tnew = if final_step { t_end } else { t + hs };
            let k6 = f(tnew, &ysti);
            let ynew = axpy(&y, hs, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let k7 = f(tnew, &ynew);
            let mut e = [T::zero(); D];
            for i in 0..D {
                e[i] = hs
                    * (T::lit(E1) * k1[i]
                        + T::lit(E3) * k3[i]
                        + T::lit(E4) * k4[i]
                        + T::lit(E5) * k5[i]
                        + T::lit(E6) * k6[i]
                        + T::lit(E7) * k7[i]);
            }
            let mut err = self.err_norm(&y, &ynew, &e);
            if !err.is_finite() || ynew.iter().any(|v| !v.is_finite()) {
                err = T::infinity();
            }
            if err <= T::one() {
                let mut rc = [[T::zero(); D]; 5];
                for i in 0..D {
                    let ydiff = ynew[i] - y[i];
                    let bspl = hs * k1[i] - ydiff;
                    rc[0][i] = y[i];
                    rc[1][i] = ydiff;
                    rc[2][i] = bspl;
                    rc[3][i] = ydiff - hs * k7[i] - bspl;
                    rc[4][i] = hs
                        * (T::lit(D1) * k1[i]
                            + T::lit(D3) * k3[i]
                            + T::lit(D4) * k4[i]
                            + T::lit(D5) * k5[i]
                            + T::lit(D6) * k6[i]
                            + T::lit(D7) * k7[i]);
                }
                let seg = DenseSegment { t0: t, h: hs, rc, dy1: k7 };
                t = tnew;
                y = ynew;
                k1 = k7;
                out.accepted += 1;
                if observe(&seg) == Flow::Stop {
                    out.t = t;
                    out.y = y;
                    out.stopped = true;
                    return Ok(out);
                }
                if final_step {
                    break;
                }
                let mut fac = T::lit(0.9) * err.max(T::lit(1e-10)).powf(T::lit(-0.2));
                fac = fac.min(T::lit(5.0)).max(T::lit(0.2));
                if last_rejected {
                    fac = fac.min(T::one());
                }
                h = (h * fac).min(self.h_max);
                last_rejected = false;
            } else {
                out.rejected += 1;
                let fac = if err.is_finite() {
                    (T::lit(0.9) * err.powf(T::lit(-0.2))).max(T::lit(0.2))
                } else {
                    T::lit(0.2)
                };
                h = h * fac;
                last_rejected = true;
            }
        }
        if (t_end - t).abs() > T::epsilon() * T::lit(16.0) * span.max(t.abs()) {
            return Err(Error::TooManySteps(self.max_steps));
        }
        out.t = t;
        out.y = y;
        Ok(out)
    }
}
