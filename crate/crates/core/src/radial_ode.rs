//! Radial initial-value problem
//! `u'' + (N−1)/r u' = G(u)`, `u(0) = γ`, `u'(0) = 0`, where
//! `G(u) = u − |u|^{p−2}u` for the pure power (λ = 1) and
//! `G(u) = (u − f(u))/ε` for the diffusion-scaled problem.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{DenseSegment, Dopri5, Flow, Outcome};
use crate::quad::simpson_panel;
use crate::scalar::{sphere_area, Real};

/// `f(u) = Σ c_m |u|^{q_m−1} u` (odd extension of `Σ c_m u^{q_m}`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumOfPowers<T> {
    terms: Vec<(T, T)>,
}

impl<T: Real> SumOfPowers<T> {
    /// Checks `q_m > 1` (hence `f(0) = f'(0) = 0`), `f(1) = 1` and `f'(1) > 1`.
    pub fn new(terms: Vec<(T, T)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidNonlinearity("no terms".into()));
        }
        for &(c, q) in &terms {
            if !c.is_finite() || !q.is_finite() || q <= T::one() {
                return Err(Error::InvalidNonlinearity(format!("term {c}·u^{q} needs a finite exponent > 1")));
            }
        }
        let f = Self { terms };
        let tol = T::lit(1e-10).max(T::epsilon() * T::lit(64.0));
        if (f.value(T::one()) - T::one()).abs() > tol {
            return Err(Error::InvalidNonlinearity(format!("f(1) = {} but must equal 1", f.value(T::one()))));
        }
        if !(f.deriv(T::one()) > T::one()) {
            return Err(Error::InvalidNonlinearity(format!("f'(1) = {} must exceed 1", f.deriv(T::one()))));
        }
        Ok(f)
    }

    /// `f(u) = |u|^{p−2}u`.
    pub fn power(p: T) -> Result<Self> {
        Self::new(vec![(T::one(), p - T::one())])
    }

    /// `f(u) = |u|u`.
    pub fn quadratic() -> Self {
        Self::new(vec![(T::one(), T::lit(2.0))]).expect("valid")
    }

    /// `5u² − 8u³ + 4u⁴`: `f(u) − u = u(u−1)(2u−1)²`, so `F − u²/2` has a
    /// degenerate critical point at 1/2, and `f'(1) = 2`.
    pub fn f1_like() -> Self {
        Self::new(vec![(T::lit(5.0), T::lit(2.0)), (T::lit(-8.0), T::lit(3.0)), (T::lit(4.0), T::lit(4.0))]).expect("valid")
    }

    /// `7u² − 14u³ + 8u⁴`: `f(u) − u = u(u−1)(2u−1)(4u−1)`, so `F − u²/2` has a
    /// local minimum at 1/4 and a local maximum at 1/2, and `f'(1) = 4`.
    pub fn f2_like() -> Self {
        Self::new(vec![(T::lit(7.0), T::lit(2.0)), (T::lit(-14.0), T::lit(3.0)), (T::lit(8.0), T::lit(4.0))]).expect("valid")
    }

    pub fn terms(&self) -> &[(T, T)] {
        &self.terms
    }

    pub fn value(&self, u: T) -> T {
        let a = u.abs();
        self.terms.iter().map(|&(c, q)| c * a.powf(q - T::one()) * u).sum()
    }

    pub fn deriv(&self, u: T) -> T {
        let a = u.abs();
        self.terms.iter().map(|&(c, q)| c * q * a.powf(q - T::one())).sum()
    }

    pub fn second_deriv(&self, u: T) -> T {
        let a = u.abs();
        self.terms
            .iter()
            .map(|&(c, q)| {
                if q == T::lit(2.0) {
                    // q(q−1)|u|^{q−3}u degenerates to 2·sign(u)
                    c * T::lit(2.0) * u.signum()
                } else {
                    c * q * (q - T::one()) * a.powf(q - T::lit(3.0)) * u
                }
            })
            .sum()
    }

    /// `F(u) = ∫₀^u f`.
    pub fn primitive(&self, u: T) -> T {
        let a = u.abs();
        self.terms.iter().map(|&(c, q)| c * a.powf(q + T::one()) / (q + T::one())).sum()
    }
}

impl<T: Real> FromStr for SumOfPowers<T> {
    type Err = Error;

    /// Registry names: `quadratic`, `f1-like`, `f2-like`, `power:P` and
    /// `sumpow:c1,q1;c2,q2;...`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str| -> Result<T> {
            t.trim()
                .parse::<f64>()
                .map(T::lit)
                .map_err(|_| Error::InvalidNonlinearity(format!("not a number: {t:?}")))
        };
        match s {
            "quadratic" => Ok(Self::quadratic()),
            "f1-like" => Ok(Self::f1_like()),
            "f2-like" => Ok(Self::f2_like()),
            _ => {
                if let Some(p) = s.strip_prefix("power:") {
                    Self::power(num(p)?)
                } else if let Some(body) = s.strip_prefix("sumpow:") {
                    let mut terms = Vec::new();
                    for pair in body.split(';').filter(|t| !t.trim().is_empty()) {
                        let (c, q) = pair
                            .split_once(',')
                            .ok_or_else(|| Error::InvalidNonlinearity(format!("expected c,q in {pair:?}")))?;
                        terms.push((num(c)?, num(q)?));
                    }
                    Self::new(terms)
                } else {
                    Err(Error::InvalidNonlinearity(format!("unknown nonlinearity {s:?}")))
                }
            }
        }
    }
}

/// Right-hand side family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Nonlinearity<T> {
    /// `−Δu + u = |u|^{p−2}u`.
    PurePower { p: T },
    /// `−εΔu + u = f(u)`.
    General { f: SumOfPowers<T>, eps: T },
}

/// Which parameter continuation varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    P,
    Eps,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::P => "p",
            Family::Eps => "eps",
        })
    }
}

impl<T: Real> Nonlinearity<T> {
    pub fn power(p: T) -> Result<Self> {
        if !(p > T::lit(2.0)) || !p.is_finite() {
            return Err(Error::InvalidNonlinearity(format!("exponent p = {p} must exceed 2")));
        }
        Ok(Self::PurePower { p })
    }

    pub fn general(f: SumOfPowers<T>, eps: T) -> Result<Self> {
        if !(eps > T::zero()) || !eps.is_finite() {
            return Err(Error::InvalidNonlinearity(format!("diffusion eps = {eps} must be positive")));
        }
        Ok(Self::General { f, eps })
    }

    pub fn family(&self) -> Family {
        match self {
            Self::PurePower { .. } => Family::P,
            Self::General { .. } => Family::Eps,
        }
    }

    /// The continuation parameter (p or ε).
    pub fn param(&self) -> T {
        match self {
            Self::PurePower { p } => *p,
            Self::General { eps, .. } => *eps,
        }
    }

    pub fn with_param(&self, value: T) -> Result<Self> {
        match self {
            Self::PurePower { .. } => Self::power(value),
            Self::General { f, .. } => Self::general(f.clone(), value),
        }
    }

    /// Nonlinear term `f(u)` (`|u|^{p−2}u` for the pure power).
    pub fn f(&self, u: T) -> T {
        match self {
            Self::PurePower { p } => u.abs().powf(*p - T::lit(2.0)) * u,
            Self::General { f, .. } => f.value(u),
        }
    }

    pub fn df(&self, u: T) -> T {
        match self {
            Self::PurePower { p } => (*p - T::one()) * u.abs().powf(*p - T::lit(2.0)),
            Self::General { f, .. } => f.deriv(u),
        }
    }

    /// `F(u) = ∫₀^u f`.
    pub fn primitive(&self, u: T) -> T {
        match self {
            Self::PurePower { p } => u.abs().powf(*p) / *p,
            Self::General { f, .. } => f.primitive(u),
        }
    }

    /// Diffusion coefficient multiplying −Δ (1 for the pure power).
    pub fn diffusion(&self) -> T {
        match self {
            Self::PurePower { .. } => T::one(),
            Self::General { eps, .. } => *eps,
        }
    }

    /// `G(u) = (u − f(u)) / diffusion`.
    #[inline]
    pub fn g(&self, u: T) -> T {
        (u - self.f(u)) / self.diffusion()
    }

    #[inline]
    pub fn dg(&self, u: T) -> T {
        (T::one() - self.df(u)) / self.diffusion()
    }

    /// `∂G/∂p` or `∂G/∂ε`.
    pub fn dg_dparam(&self, u: T) -> T {
        match self {
            Self::PurePower { p } => {
                let a = u.abs();
                if a == T::zero() {
                    T::zero()
                } else {
                    -a.powf(*p - T::lit(2.0)) * u * a.ln()
                }
            }
            Self::General { f, eps } => -(u - f.value(u)) / (*eps * *eps),
        }
    }
}

/// Dimension, radius and nonlinearity. The constant state is `u₀ = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec<T> {
    pub dim: usize,
    pub radius: T,
    pub nonlinearity: Nonlinearity<T>,
}

impl<T: Real> ProblemSpec<T> {
    pub fn new(dim: usize, radius: T, nonlinearity: Nonlinearity<T>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("dimension must be >= 1".into()));
        }
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(Error::Domain(format!("radius must be positive, got {radius}")));
        }
        Ok(Self { dim, radius, nonlinearity })
    }

    pub fn power(dim: usize, radius: T, p: T) -> Result<Self> {
        Self::new(dim, radius, Nonlinearity::power(p)?)
    }

    pub fn eps(dim: usize, radius: T, f: SumOfPowers<T>, eps: T) -> Result<Self> {
        Self::new(dim, radius, Nonlinearity::general(f, eps)?)
    }

    /// The constant solution.
    #[inline]
    pub fn fix_point(&self) -> T {
        T::one()
    }

    pub fn param(&self) -> T {
        self.nonlinearity.param()
    }

    pub fn with_param(&self, value: T) -> Result<Self> {
        Ok(Self { nonlinearity: self.nonlinearity.with_param(value)?, ..self.clone() })
    }

    pub fn family(&self) -> Family {
        self.nonlinearity.family()
    }

    /// `|S^{N−1}|` (2 for N = 1, i.e. the interval (−R, R)).
    pub fn area(&self) -> T {
        sphere_area::<T>(self.dim)
    }

    /// `|B_R|`.
    pub fn volume(&self) -> T {
        self.area() * self.radius.powi(self.dim as i32) / T::from_count(self.dim)
    }

    /// Energy of the constant solution.
    pub fn constant_energy(&self) -> T {
        let nl = &self.nonlinearity;
        let one = T::one();
        (one * one * T::lit(0.5) - nl.primitive(one)) * self.volume()
    }
}

/// `h = d·u'²/2 + F(u) − u²/2` with `d` the diffusion coefficient.
pub fn hamiltonian<T: Real>(problem: &ProblemSpec<T>, u: T, du: T) -> T {
    let nl = &problem.nonlinearity;
    nl.diffusion() * du * du * T::lit(0.5) + nl.primitive(u) - u * u * T::lit(0.5)
}

/// Integration controls for the radial IVP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IvpOptions<T> {
    pub tol: T,
    /// `|u|` above this aborts with a blow-up error.
    pub ceiling: T,
    /// Radius of the Taylor start; `None` picks one from γ.
    pub r0: Option<T>,
    pub max_steps: usize,
}

impl<T: Real> Default for IvpOptions<T> {
    fn default() -> Self {
        Self { tol: T::lit(1e-10).max(T::epsilon() * T::lit(64.0)), ceiling: T::lit(1e6), r0: None, max_steps: 200_000 }
    }
}

impl<T: Real> IvpOptions<T> {
    pub fn with_tol(tol: T) -> Self {
        Self { tol, ..Self::default() }
    }
}

/// Taylor data at the centre: `u ≈ γ + a r² + b r⁴`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct CenterStart<T> {
    r0: T,
    gamma: T,
    a: T,
    b: T,
}

impl<T: Real> CenterStart<T> {
    fn new(problem: &ProblemSpec<T>, gamma: T, r0: Option<T>) -> Self {
        let nl = &problem.nonlinearity;
        let n = T::from_count(problem.dim);
        let g = nl.g(gamma);
        let dg = nl.dg(gamma);
        let a = g / (T::lit(2.0) * n);
        let b = dg * a / (T::lit(4.0) * n + T::lit(8.0));
        let base = T::lit(1e-8).max(T::lit(1e-5) * problem.radius);
        // keep r0 well inside the region where the r⁴ truncation is accurate
        let r0 = r0.unwrap_or_else(|| base.min(T::lit(1e-3) / (T::one() + dg.abs()).sqrt()));
        Self { r0, gamma, a, b }
    }

    fn eval(&self, r: T) -> (T, T) {
        let r2 = r * r;
        (self.gamma + self.a * r2 + self.b * r2 * r2, T::lit(2.0) * self.a * r + T::lit(4.0) * self.b * r2 * r)
    }
}

/// Integrates the IVP with optional variational components.
///
/// `D = 2`: `[u, u']`; `D = 4`: adds `v = ∂u/∂γ`; `D = 6`: adds `w = ∂u/∂param`.
/// The observer sees every accepted step; the first element of the returned
/// tuple is the start radius of the Taylor patch.
pub(crate) fn flow<T: Real, const D: usize, O>(
    problem: &ProblemSpec<T>,
    gamma: T,
    r_end: T,
    opts: &IvpOptions<T>,
    mut observe: O,
) -> Result<(T, Outcome<T, D>)>
where
    O: FnMut(&DenseSegment<T, D>) -> Flow,
{
    assert!(D == 2 || D == 4 || D == 6, "unsupported state size");
    if !(gamma > T::zero()) || !gamma.is_finite() {
        return Err(Error::Domain(format!("gamma must be positive, got {gamma}")));
    }
    let nl = &problem.nonlinearity;
    let start = CenterStart::new(problem, gamma, opts.r0);
    let r0 = start.r0.min(r_end * T::lit(0.5));
    let (u0, du0) = start.eval(r0);
    let n = T::from_count(problem.dim);
    let mut y0 = [T::zero(); D];
    y0[0] = u0;
    y0[1] = du0;
    if D >= 4 {
        let dg = nl.dg(gamma);
        y0[2] = T::one() + dg * r0 * r0 / (T::lit(2.0) * n);
        y0[3] = dg * r0 / n;
    }
    if D >= 6 {
        let gp = nl.dg_dparam(gamma);
        y0[4] = gp * r0 * r0 / (T::lit(2.0) * n);
        y0[5] = gp * r0 / n;
    }
    let damp = n - T::one();
    let rhs = |r: T, y: &[T; D]| {
        let mut d = [T::zero(); D];
        let c = damp / r;
        d[0] = y[1];
        d[1] = nl.g(y[0]) - c * y[1];
        if D >= 4 {
            let a = nl.dg(y[0]);
            d[2] = y[3];
            d[3] = a * y[2] - c * y[3];
            if D >= 6 {
                d[4] = y[5];
                d[5] = a * y[4] + nl.dg_dparam(y[0]) - c * y[5];
            }
        }
        d
    };
    let solver = Dopri5 {
        rtol: opts.tol,
        atol: opts.tol * gamma.min(T::one()),
        h_init: None,
        h_max: problem.radius.max(r_end) / T::lit(8.0),
        max_steps: opts.max_steps,
    };
    let mut blown: Option<(T, T)> = None;
    let ceiling = opts.ceiling;
    let out = solver.solve(rhs, r0, y0, r_end, |seg| {
        let y = seg.y1();
        if y[0].abs() > ceiling || !y[0].is_finite() {
            blown = Some((seg.t1(), y[0]));
            return Flow::Stop;
        }
        observe(seg)
    })?;
    if let Some((r, v)) = blown {
        return Err(Error::BlowUp { radius: r.to_f64_lossy(), value: v.to_f64_lossy() });
    }
    Ok((r0, out))
}

/// Dense radial trajectory with derived diagnostics.
#[derive(Debug, Clone)]
pub struct RadialProfile<T> {
    /// Sample radii: 0, the Taylor patch end, then every step end and midpoint.
    pub r: Vec<T>,
    pub u: Vec<T>,
    pub du: Vec<T>,
    pub gamma: T,
    pub problem: ProblemSpec<T>,
    /// Sign changes of `u − u₀` on the sample grid.
    pub zero_count: usize,
    /// Local extrema `(r, u)` including both endpoints.
    pub crit_points: Vec<(T, T)>,
    pub energy: T,
    pub hamiltonian_trace: Vec<T>,
    center: CenterStart<T>,
    segments: Vec<DenseSegment<T, 2>>,
}

/// Integrates the radial IVP from the centre to `r_end` and builds the profile.
pub fn integrate_ivp<T: Real>(problem: &ProblemSpec<T>, gamma: T, r_end: T, tol: T) -> Result<RadialProfile<T>> {
    let lo = T::lit(1e-13).max(T::epsilon() * T::lit(4.0));
    if !(tol >= lo && tol <= T::lit(1e-6)) {
        return Err(Error::Domain(format!("tol = {tol} outside [{lo}, 1e-6]")));
    }
    integrate_ivp_with(problem, gamma, r_end, &IvpOptions { tol, ..IvpOptions::default() })
}

pub fn integrate_ivp_with<T: Real>(problem: &ProblemSpec<T>, gamma: T, r_end: T, opts: &IvpOptions<T>) -> Result<RadialProfile<T>> {
    if !(r_end > T::zero()) {
        return Err(Error::Domain(format!("r_end must be positive, got {r_end}")));
    }
    let mut segments = Vec::new();
    let (r0, _) = flow::<T, 2, _>(problem, gamma, r_end, opts, |seg| {
        segments.push(*seg);
        Flow::Continue
    })?;
    let center = CenterStart { r0, ..CenterStart::new(problem, gamma, Some(r0)) };
    Ok(RadialProfile::build(problem.clone(), gamma, center, segments))
}

impl<T: Real> RadialProfile<T> {
    fn build(problem: ProblemSpec<T>, gamma: T, center: CenterStart<T>, segments: Vec<DenseSegment<T, 2>>) -> Self {
        let mut r = vec![T::zero()];
        let mut u = vec![gamma];
        let mut du = vec![T::zero()];
        let (u0, d0) = center.eval(center.r0);
        r.push(center.r0);
        u.push(u0);
        du.push(d0);
        for seg in &segments {
            let mid = seg.t0 + seg.h * T::lit(0.5);
            let ym = seg.eval(mid);
            let y1 = seg.y1();
            r.push(mid);
            u.push(ym[0]);
            du.push(ym[1]);
            r.push(seg.t1());
            u.push(y1[0]);
            du.push(y1[1]);
        }
        let fix = problem.fix_point();
        let mut zero_count = 0;
        let mut last = T::zero();
        for &v in &u {
            let s = v - fix;
            if s != T::zero() {
                if last * s < T::zero() {
                    zero_count += 1;
                }
                last = s;
            }
        }
        let hamiltonian_trace = u.iter().zip(&du).map(|(&a, &b)| hamiltonian(&problem, a, b)).collect();
        let mut out = Self {
            r,
            u,
            du,
            gamma,
            problem,
            zero_count,
            crit_points: Vec::new(),
            energy: T::zero(),
            hamiltonian_trace,
            center,
            segments,
        };
        out.crit_points = out.locate_extrema();
        out.energy = energy(&out);
        out
    }

    pub fn r_end(&self) -> T {
        *self.r.last().unwrap()
    }

    /// `(u, u')` at any radius covered by the profile.
    pub fn eval(&self, r: T) -> (T, T) {
        if r <= self.center.r0 {
            return self.center.eval(r);
        }
        let idx = self.segments.partition_point(|s| s.t1() < r).min(self.segments.len().saturating_sub(1));
        match self.segments.get(idx) {
            Some(seg) => {
                let y = seg.eval(r);
                (y[0], y[1])
            }
            None => self.center.eval(r),
        }
    }

    pub fn u_end(&self) -> T {
        *self.u.last().unwrap()
    }

    /// `u'(r_end)`, the Neumann residual when `r_end = R`.
    pub fn du_end(&self) -> T {
        *self.du.last().unwrap()
    }

    pub fn max_u(&self) -> T {
        self.u.iter().cloned().fold(T::neg_infinity(), T::max)
    }

    pub fn min_u(&self) -> T {
        self.u.iter().cloned().fold(T::infinity(), T::min)
    }

    pub fn max_abs_du(&self) -> T {
        self.du.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Radii where `u − u₀` changes sign, with `|u'|` there.
    pub fn crossings(&self) -> Vec<(T, T)> {
        let fix = self.problem.fix_point();
        let mut out = Vec::new();
        for j in 1..self.r.len() {
            let a = self.u[j - 1] - fix;
            let b = self.u[j] - fix;
            if a * b < T::zero() {
                let rc = self.bisect(self.r[j - 1], self.r[j], |u, _| u - fix);
                out.push((rc, self.eval(rc).1.abs()));
            }
        }
        out
    }

    fn bisect(&self, mut a: T, mut b: T, f: impl Fn(T, T) -> T) -> T {
        let val = |r: T| {
            let (u, du) = self.eval(r);
            f(u, du)
        };
        let fa = val(a);
        for _ in 0..100 {
            let m = (a + b) * T::lit(0.5);
            if m <= a || m >= b {
                break;
            }
            if val(m) * fa > T::zero() {
                a = m;
            } else {
                b = m;
            }
        }
        (a + b) * T::lit(0.5)
    }

    fn locate_extrema(&self) -> Vec<(T, T)> {
        let mut out = vec![(T::zero(), self.gamma)];
        let n = self.r.len();
        // skip the centre sample, where u' = 0 exactly
        for j in 2..n {
            let a = self.du[j - 1];
            let b = self.du[j];
            if a * b < T::zero() {
                let rc = self.bisect(self.r[j - 1], self.r[j], |_, du| du);
                out.push((rc, self.eval(rc).0));
            }
        }
        out.push((self.r_end(), self.u_end()));
        out
    }

    /// `|S^{N−1}| ∫₀^{r_end} h(r, u, u') r^{N−1} dr`, Simpson on every step with
    /// one level of refinement and Richardson correction.
    pub fn integrate<F: Fn(T, T, T) -> T>(&self, h: F) -> T {
        let wd = self.problem.dim as i32 - 1;
        let f = |r: T| {
            let (u, du) = self.eval(r);
            h(r, u, du) * r.powi(wd)
        };
        let panel = |a: T, b: T| {
            let m = (a + b) * T::lit(0.5);
            let (fa, fm, fb) = (f(a), f(m), f(b));
            let coarse = simpson_panel(b - a, fa, fm, fb);
            let fine = simpson_panel(m - a, fa, f((a + m) * T::lit(0.5)), fm) + simpson_panel(b - m, fm, f((m + b) * T::lit(0.5)), fb);
            fine + (fine - coarse) / T::lit(15.0)
        };
        let mut sum = panel(T::zero(), self.center.r0);
        for seg in &self.segments {
            sum = sum + panel(seg.t0, seg.t1());
        }
        self.problem.area() * sum
    }
}

/// Energy `|S^{N−1}| ∫ [d·u'²/2 + u²/2 − F(u)] r^{N−1} dr`.
pub fn energy<T: Real>(profile: &RadialProfile<T>) -> T {
    let nl = &profile.problem.nonlinearity;
    let d = nl.diffusion();
    profile.integrate(|_, u, du| T::lit(0.5) * (d * du * du + u * u) - nl.primitive(u))
}

/// Integral identities satisfied by every Neumann solution. Residuals are
/// normalised; a check fails when its residual exceeds `1e-5`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    /// `|∫u − ∫f(u)| / ∫|u|` (integrated equation with the Neumann condition).
    pub integral_residual: f64,
    /// `|d‖∇u‖² + ‖u‖² − ∫f(u)u| / (d‖∇u‖² + ‖u‖²)`.
    pub nehari_residual: f64,
    /// Pure power: `|E − (½ − 1/p)‖u‖²| / |E|`; general f: `|E − (½∫f(u)u − ∫F(u))| / |E|`.
    pub energy_residual: f64,
    /// Pure power with `γ < 1`: `max u ≤ (p/2)^{1/(p−2)}`.
    pub max_u_bound: Option<bool>,
    /// Pure power with `γ < 1`: `max |u'| ≤ √((p−2)/p)`.
    pub du_bound: Option<bool>,
    pub flags: Vec<String>,
}

impl IdentityReport {
    pub fn ok(&self) -> bool {
        self.flags.is_empty()
    }
}

pub const IDENTITY_TOL: f64 = 1e-5;

pub fn verify_solution_identities<T: Real>(profile: &RadialProfile<T>) -> IdentityReport {
    let nl = &profile.problem.nonlinearity;
    let d = nl.diffusion();
    let int_u = profile.integrate(|_, u, _| u);
    let int_abs_u = profile.integrate(|_, u, _| u.abs());
    let int_f = profile.integrate(|_, u, _| nl.f(u));
    let grad = profile.integrate(|_, _, du| du * du);
    let l2 = profile.integrate(|_, u, _| u * u);
    let fu = profile.integrate(|_, u, _| nl.f(u) * u);
    let big_f = profile.integrate(|_, u, _| nl.primitive(u));
    let h1 = d * grad + l2;
    let e = profile.energy;
    let safe = |num: T, den: T| {
        let den = den.abs();
        if den == T::zero() {
            num.abs().to_f64_lossy()
        } else {
            (num.abs() / den).to_f64_lossy()
        }
    };
    let integral_residual = safe(int_u - int_f, int_abs_u);
    let nehari_residual = safe(h1 - fu, h1);
    let energy_residual = match nl {
        Nonlinearity::PurePower { p } => safe(e - (T::lit(0.5) - p.recip()) * h1, e),
        Nonlinearity::General { .. } => safe(e - (T::lit(0.5) * fu - big_f), e),
    };
    let mut flags = Vec::new();
    for (name, v) in [("integral", integral_residual), ("nehari", nehari_residual), ("energy", energy_residual)] {
        if !(v <= IDENTITY_TOL) {
            flags.push(format!("{name} identity residual {v:e} exceeds {IDENTITY_TOL:e}"));
        }
    }
    let (mut max_u_bound, mut du_bound) = (None, None);
    if let Nonlinearity::PurePower { p } = nl {
        if profile.gamma < profile.problem.fix_point() {
            let slack = T::lit(1e-7);
            let ub = (*p / T::lit(2.0)).powf((*p - T::lit(2.0)).recip());
            let db = ((*p - T::lit(2.0)) / *p).sqrt();
            let a = profile.max_u() <= ub + slack;
            let b = profile.max_abs_du() <= db + slack;
            if !a {
                flags.push(format!("max u = {} exceeds {}", profile.max_u(), ub));
            }
            if !b {
                flags.push(format!("max |u'| = {} exceeds {}", profile.max_abs_du(), db));
            }
            max_u_bound = Some(a);
            du_bound = Some(b);
        }
    }
    IdentityReport { integral_residual, nehari_residual, energy_residual, max_u_bound, du_bound, flags }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_parses() {
        let f: SumOfPowers<f64> = "sumpow:1,2".parse().unwrap();
        assert_eq!(f, SumOfPowers::quadratic());
        let g: SumOfPowers<f64> = "power:3.5".parse().unwrap();
        assert!((g.value(2.0) - 2f64.powf(2.5)).abs() < 1e-12);
        assert!("sumpow:2,2".parse::<SumOfPowers<f64>>().is_err());
        assert!("sumpow:1,1".parse::<SumOfPowers<f64>>().is_err());
        assert!("sumpow:1,1.5".parse::<SumOfPowers<f64>>().is_ok());
        assert!("cubic".parse::<SumOfPowers<f64>>().is_err());
    }

    #[test]
    fn stand_in_fixpoints() {
        let f1 = SumOfPowers::<f64>::f1_like();
        let f2 = SumOfPowers::<f64>::f2_like();
        for u in [0.0, 0.5, 1.0] {
            assert!((f1.value(u) - u).abs() < 1e-14);
        }
        assert!((f1.deriv(0.5) - 1.0).abs() < 1e-14);
        for u in [0.0, 0.25, 0.5, 1.0] {
            assert!((f2.value(u) - u).abs() < 1e-14);
        }
        assert!(f2.deriv(0.25) > 1.0 && f2.deriv(0.5) < 1.0);
        assert_eq!(f1.deriv(1.0), 2.0);
        assert_eq!(f2.deriv(1.0), 4.0);
    }

    #[test]
    fn derivatives_match_differences() {
        let f = SumOfPowers::<f64>::f2_like();
        let h = 1e-6;
        for u in [0.1, 0.7, 1.3] {
            assert!((f.deriv(u) - (f.value(u + h) - f.value(u - h)) / (2.0 * h)).abs() < 1e-7);
            assert!((f.second_deriv(u) - (f.deriv(u + h) - f.deriv(u - h)) / (2.0 * h)).abs() < 1e-6);
            assert!((f.value(u) - (f.primitive(u + h) - f.primitive(u - h)) / (2.0 * h)).abs() < 1e-7);
        }
    }

    #[test]
    fn hamiltonian_examples() {
        let p = 3.0_f64;
        let pr = ProblemSpec::power(2, 1.0, p).unwrap();
        assert!((hamiltonian(&pr, 1.0, 0.0) - (1.0 / p - 0.5)).abs() < 1e-15);
        let top = (p / 2.0f64).powf(1.0 / (p - 2.0));
        assert!(hamiltonian(&pr, top, 0.0).abs() < 1e-14);
        assert!(hamiltonian(&pr, 1.0, ((p - 2.0) / p).sqrt()).abs() < 1e-15);
    }
}
