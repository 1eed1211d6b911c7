//! Shooting on `γ = u(0)` for the Neumann condition `u'(R) = 0`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::Flow;
use crate::radial_ode::{flow, integrate_ivp_with, IvpOptions, ProblemSpec, RadialProfile};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            other => Err(Error::Domain(format!("sign must be + or -, got {other:?}"))),
        }
    }
}

/// Type `i±`: `u − u₀` has `i − 1` sign changes and `u(0)` lies above (+) or
/// below (−) the constant state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SolutionType {
    pub i: usize,
    pub sign: Sign,
}

impl SolutionType {
    pub fn new(i: usize, sign: Sign) -> Result<Self> {
        if i < 2 {
            return Err(Error::Domain(format!("solution type index must be >= 2, got {i}")));
        }
        Ok(Self { i, sign })
    }
}

impl fmt::Display for SolutionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.i, self.sign)
    }
}

impl FromStr for SolutionType {
    type Err = Error;

    /// Parses `2-`, `3+`, ...
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.len() < 2 {
            return Err(Error::Domain(format!("bad solution type {s:?}")));
        }
        let (num, sign) = s.split_at(s.len() - 1);
        let i = num.parse::<usize>().map_err(|_| Error::Domain(format!("bad solution type {s:?}")))?;
        Self::new(i, sign.parse()?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootOptions<T> {
    pub ivp: IvpOptions<T>,
    pub max_iter: usize,
    /// Convergence: `|u'(R)| ≤ rel_tol · max(1, max|u'|)`.
    pub rel_tol: T,
    /// Relative bracket width below which bisection hands over to secant steps.
    pub bisect_width: T,
    /// Absolute slack for the extrema envelope checks in [`classify`].
    pub envelope_slack: T,
}

impl<T: Real> Default for ShootOptions<T> {
    fn default() -> Self {
        Self {
            ivp: IvpOptions::with_tol(T::lit(1e-11).max(T::epsilon() * T::lit(64.0))),
            max_iter: 80,
            rel_tol: T::lit(1e-9).max(T::epsilon() * T::lit(1024.0)),
            bisect_width: T::lit(1e-3),
            envelope_slack: T::lit(1e-7),
        }
    }
}

/// End state of one shot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shot<T> {
    pub u: T,
    pub du: T,
    /// `max |u'|` over the trajectory.
    pub du_scale: T,
    /// `∂u(R)/∂γ`, `∂u'(R)/∂γ` when the variational equation was carried.
    pub dgamma: Option<(T, T)>,
    /// `∂u(R)/∂param`, `∂u'(R)/∂param`.
    pub dparam: Option<(T, T)>,
}

fn shot<T: Real, const D: usize>(problem: &ProblemSpec<T>, gamma: T, opts: &IvpOptions<T>) -> Result<Shot<T>> {
    let mut scale = T::zero();
    let (_, out) = flow::<T, D, _>(problem, gamma, problem.radius, opts, |seg| {
        scale = scale.max(seg.y1()[1].abs()).max(seg.eval_component(seg.t0 + seg.h * T::lit(0.5), 1).abs());
        Flow::Continue
    })?;
    let y = out.y;
    Ok(Shot {
        u: y[0],
        du: y[1],
        du_scale: scale,
        dgamma: if D >= 4 { Some((y[2], y[3])) } else { None },
        dparam: if D >= 6 { Some((y[4], y[5])) } else { None },
    })
}

/// `u'(R)` for the trajectory started at `γ`.
pub fn shoot_residual<T: Real>(problem: &ProblemSpec<T>, gamma: T) -> Result<T> {
    shoot_residual_with(problem, gamma, &ShootOptions::default().ivp)
}

pub fn shoot_residual_with<T: Real>(problem: &ProblemSpec<T>, gamma: T, opts: &IvpOptions<T>) -> Result<T> {
    Ok(shot::<T, 2>(problem, gamma, opts)?.du)
}

/// End state with `∂/∂γ` from the variational equation.
pub fn shoot_with_dgamma<T: Real>(problem: &ProblemSpec<T>, gamma: T, opts: &IvpOptions<T>) -> Result<Shot<T>> {
    shot::<T, 4>(problem, gamma, opts)
}

/// End state with derivatives in both `γ` and the family parameter.
pub fn shoot_with_jacobian<T: Real>(problem: &ProblemSpec<T>, gamma: T, opts: &IvpOptions<T>) -> Result<Shot<T>> {
    shot::<T, 6>(problem, gamma, opts)
}

/// Central finite difference of the residual in `γ` with step `1e-6·max(1, γ)`.
pub fn residual_dgamma_fd<T: Real>(problem: &ProblemSpec<T>, gamma: T, opts: &IvpOptions<T>) -> Result<T> {
    let h = T::lit(1e-6) * gamma.max(T::one());
    let h = h.min(gamma * T::lit(0.5));
    let a = shoot_residual_with(problem, gamma + h, opts)?;
    let b = shoot_residual_with(problem, gamma - h, opts)?;
    Ok((a - b) / (h + h))
}

/// Solves `u'(R) = 0` inside a sign-change bracket and optionally checks the type.
pub fn solve_solution<T: Real>(problem: &ProblemSpec<T>, bracket: (T, T), want: Option<SolutionType>) -> Result<RadialProfile<T>> {
    solve_solution_with(problem, bracket, want, &ShootOptions::default())
}

pub fn solve_solution_with<T: Real>(
    problem: &ProblemSpec<T>,
    bracket: (T, T),
    want: Option<SolutionType>,
    opts: &ShootOptions<T>,
) -> Result<RadialProfile<T>> {
    let gamma = solve_gamma(problem, bracket, opts)?;
    let profile = integrate_ivp_with(problem, gamma, problem.radius, &opts.ivp)?;
    if let Some(want) = want {
        let found = classify_with(&profile, opts.envelope_slack)?;
        if found != want {
            return Err(Error::TypeMismatch { expected: want.to_string(), found: found.to_string() });
        }
    }
    Ok(profile)
}

/// The root `γ` of the residual inside `bracket`.
pub fn solve_gamma<T: Real>(problem: &ProblemSpec<T>, bracket: (T, T), opts: &ShootOptions<T>) -> Result<T> {
    let (mut a, mut b) = if bracket.0 < bracket.1 { bracket } else { (bracket.1, bracket.0) };
    if !(a > T::zero()) {
        return Err(Error::Domain(format!("bracket must be positive, got ({a}, {b})")));
    }
    let eval = |g: T| shot::<T, 2>(problem, g, &opts.ivp);
    let sa = eval(a)?;
    let sb = eval(b)?;
    let (mut fa, mut fb) = (sa.du, sb.du);
    let converged = |s: &Shot<T>| s.du.abs() <= opts.rel_tol * s.du_scale.max(T::one());
    if converged(&sa) {
        return Ok(a);
    }
    if converged(&sb) {
        return Ok(b);
    }
    if fa * fb > T::zero() {
        return Err(Error::NoSignChange { lo: a.to_f64_lossy(), hi: b.to_f64_lossy() });
    }
    let half = T::lit(0.5);
    let mut side = 0i32;
    for _ in 0..opts.max_iter {
        let wide = b - a > opts.bisect_width * b;
        let m = if wide {
            // geometric midpoint handles brackets spanning decades
            if b / a > T::lit(4.0) {
                (a * b).sqrt()
            } else {
                (a + b) * half
            }
        } else {
            // Illinois-safeguarded secant (regula falsi)
            let mut wa = fa;
            let mut wb = fb;
            if side == -1 {
                wb = wb * half;
            } else if side == 1 {
                wa = wa * half;
            }
            let s = (a * wb - b * wa) / (wb - wa);
            if s > a && s < b && s.is_finite() {
                s
            } else {
                (a + b) * half
            }
        };
        if m <= a || m >= b {
            return Ok(if fa.abs() < fb.abs() { a } else { b });
        }
        let sm = eval(m)?;
        if converged(&sm) {
            return Ok(m);
        }
        if fa * sm.du < T::zero() {
            b = m;
            fb = sm.du;
            side = if wide { 0 } else { 1 };
        } else {
            a = m;
            fa = sm.du;
            side = if wide { 0 } else { -1 };
        }
        if b - a <= T::epsilon() * T::lit(8.0) * b {
            return Ok(if fa.abs() < fb.abs() { a } else { b });
        }
    }
    Err(Error::NoConvergence(opts.max_iter))
}

/// Type of a converged non-constant solution, with the critical-point
/// structure checked: exactly `i` critical points (endpoints included),
/// alternating about `u₀`, maxima decreasing and minima increasing.
pub fn classify<T: Real>(profile: &RadialProfile<T>) -> Result<SolutionType> {
    classify_with(profile, ShootOptions::<T>::default().envelope_slack)
}

pub fn classify_with<T: Real>(profile: &RadialProfile<T>, slack: T) -> Result<SolutionType> {
    let fix = profile.problem.fix_point();
    let dev = (profile.gamma - fix).abs();
    if dev <= T::epsilon() * T::lit(16.0) {
        return Err(Error::ConstantSolution);
    }
    let sign = if profile.gamma > fix { Sign::Plus } else { Sign::Minus };
    if !(profile.min_u() > T::zero()) {
        return Err(Error::StructureViolation(format!("not a positive solution (min u = {})", profile.min_u())));
    }
    let i = profile.zero_count + 1;
    if i < 2 {
        return Err(Error::StructureViolation("u − u₀ does not change sign".into()));
    }
    let crit = significant_extrema(profile);
    if crit.len() != i {
        return Err(Error::StructureViolation(format!("{} critical points for a type-{i} profile", crit.len())));
    }
    let mut last_max: Option<T> = None;
    let mut last_min: Option<T> = None;
    for (k, &(r, u)) in crit.iter().enumerate() {
        let is_max = (k % 2 == 0) == (sign == Sign::Plus);
        if is_max {
            if !(u > fix) {
                return Err(Error::StructureViolation(format!("maximum {u} at r = {r} is not above u₀")));
            }
            if let Some(prev) = last_max {
                if u > prev + slack {
                    return Err(Error::StructureViolation(format!("maximum {u} at r = {r} exceeds the previous {prev}")));
                }
            }
            last_max = Some(u);
        } else {
            if !(u < fix) {
                return Err(Error::StructureViolation(format!("minimum {u} at r = {r} is not below u₀")));
            }
            if let Some(prev) = last_min {
                if u < prev - slack {
                    return Err(Error::StructureViolation(format!("minimum {u} at r = {r} is below the previous {prev}")));
                }
            }
            last_min = Some(u);
        }
    }
    Ok(SolutionType { i, sign })
}

/// Critical points with spurious sign flips of `u'` next to `r = R` (where
/// `u'(R)` is only zero to shooting accuracy) dropped: those within `R·1e-6`
/// of the end, or whose value matches `u(R)` to `1e-10·max(1, max u)`.
fn significant_extrema<T: Real>(profile: &RadialProfile<T>) -> Vec<(T, T)> {
    let r_end = profile.r_end();
    let u_end = profile.u_end();
    let cut = r_end * T::lit(1e-6);
    let flat = T::lit(1e-10) * profile.max_u().max(T::one());
    let mut pts = profile.crit_points.clone();
    let end = pts.pop();
    while pts.len() > 1 {
        let &(r, u) = pts.last().unwrap();
        if r_end - r <= cut || (u - u_end).abs() <= flat {
            pts.pop();
        } else {
            break;
        }
    }
    pts.extend(end);
    pts
}

/// First positive radius where `u'` vanishes again for `u(0) = γ ∈ (0, 1)`.
pub fn time_map<T: Real>(dim: usize, p: T, gamma: T) -> Result<T> {
    time_map_with(dim, p, gamma, T::lit(100.0), &IvpOptions::with_tol(T::lit(1e-11).max(T::epsilon() * T::lit(64.0))))
}

pub fn time_map_with<T: Real>(dim: usize, p: T, gamma: T, r_max: T, opts: &IvpOptions<T>) -> Result<T> {
    if !(gamma > T::zero() && gamma < T::one()) {
        return Err(Error::Domain(format!("time map needs 0 < gamma < 1, got {gamma}")));
    }
    let problem = ProblemSpec::power(dim, r_max, p)?;
    let mut hit: Option<T> = None;
    flow::<T, 2, _>(&problem, gamma, r_max, opts, |seg| {
        // u' > 0 right after the centre for γ < 1
        let d1 = seg.y1()[1];
        if d1 <= T::zero() {
            let (mut a, mut b) = (seg.t0, seg.t1());
            for _ in 0..200 {
                let m = (a + b) * T::lit(0.5);
                if m <= a || m >= b {
                    break;
                }
                if seg.eval_component(m, 1) > T::zero() {
                    a = m;
                } else {
                    b = m;
                }
            }
            hit = Some((a + b) * T::lit(0.5));
            return Flow::Stop;
        }
        Flow::Continue
    })?;
    hit.ok_or(Error::Horizon { r_max: r_max.to_f64_lossy() })
}

/// Sampling of `γ` used to bracket solutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions<T> {
    pub points: usize,
    /// Upper end of the `+` grid.
    pub gamma_max: T,
}

impl<T: Real> Default for ScanOptions<T> {
    fn default() -> Self {
        Self { points: 300, gamma_max: T::lit(1e3) }
    }
}

/// `γ` sample grid: logit-spaced on `(0, 1)` for `−`, log-spaced in `γ − 1`
/// up to `gamma_max` for `+`.
pub fn gamma_grid<T: Real>(sign: Sign, scan: &ScanOptions<T>) -> Vec<T> {
    let n = scan.points.max(8);
    match sign {
        Sign::Minus => {
            let lo = (T::lit(1e-10) / (T::one() - T::lit(1e-10))).ln();
            let hi = ((T::one() - T::lit(1e-6)) / T::lit(1e-6)).ln();
            (0..n)
                .map(|k| {
                    let s = lo + (hi - lo) * T::from_count(k) / T::from_count(n - 1);
                    T::one() / (T::one() + (-s).exp())
                })
                .collect()
        }
        Sign::Plus => {
            let lo = T::lit(1e-6).ln();
            let hi = (scan.gamma_max - T::one()).ln();
            (0..n).map(|k| T::one() + (lo + (hi - lo) * T::from_count(k) / T::from_count(n - 1)).exp()).collect()
        }
    }
}

/// All positive solutions with `u(0)` on the requested side of `u₀` found from sign
/// changes of the residual on [`gamma_grid`]; filtered by type when `want` is
/// given, sorted by `γ`.
pub fn find_solutions<T: Real>(
    problem: &ProblemSpec<T>,
    sign: Sign,
    want: Option<SolutionType>,
    scan: &ScanOptions<T>,
    opts: &ShootOptions<T>,
) -> Result<Vec<RadialProfile<T>>> {
    let grid = gamma_grid(sign, scan);
    let vals: Vec<Option<T>> = grid.iter().map(|&g| shoot_residual_with(problem, g, &opts.ivp).ok()).collect();
    let mut out = Vec::new();
    for k in 1..grid.len() {
        if let (Some(fa), Some(fb)) = (vals[k - 1], vals[k]) {
            if fa * fb < T::zero() {
                match solve_solution_with(problem, (grid[k - 1], grid[k]), want, opts) {
                    Ok(p) => {
                        if classify_with(&p, opts.envelope_slack).is_ok() {
                            out.push(p);
                        }
                    }
                    Err(Error::TypeMismatch { .. }) | Err(Error::StructureViolation(_)) | Err(Error::ConstantSolution) => {}
                    Err(e) => return Err(e),
                }
            }
        }
    }
    out.sort_by(|a, b| a.gamma.partial_cmp(&b.gamma).unwrap());
    Ok(out)
}
