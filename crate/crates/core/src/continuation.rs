//! Pseudo-arclength continuation of the radial branches `B_i^±` (in `p`) and
//! `C_i^±` (in `ε`), with fold detection and layer statistics.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::analysis::{morse_index_radial, MorseReport};
use crate::error::{Error, Result};
use crate::radial_ode::{integrate_ivp_with, Family, ProblemSpec, RadialProfile, SumOfPowers};
use crate::scalar::Real;
use crate::shooting::{classify_with, residual_dgamma_fd, shoot_with_jacobian, solve_solution_with, ShootOptions, Shot, Sign, SolutionType};
use crate::spectrum::radial_eigenvalue;

/// `2 + λ_i^rad(B_R)` for `i = 2..=count+1`.
pub fn bifurcation_points_p<T: Real>(dim: usize, radius: T, count: usize) -> Result<Vec<T>> {
    (2..count + 2).map(|i| Ok(T::lit(2.0) + radial_eigenvalue(dim, radius, i)?)).collect()
}

/// `ε_i = (f'(1) − 1)/λ_i^rad` for `i = 2..=count+1`, descending.
pub fn bifurcation_points_eps<T: Real>(dim: usize, radius: T, f: &SumOfPowers<T>, count: usize) -> Result<Vec<T>> {
    let slope = f.deriv(T::one()) - T::one();
    if !(slope > T::zero()) {
        return Err(Error::InvalidNonlinearity(format!("f'(1) = {} must exceed 1", slope + T::one())));
    }
    (2..count + 2).map(|i| Ok(slope / radial_eigenvalue::<T>(dim, radius, i)?)).collect()
}

/// Bifurcation value of branch `i` for the family of `problem`.
pub fn bifurcation_value<T: Real>(problem: &ProblemSpec<T>, i: usize) -> Result<T> {
    let lambda = radial_eigenvalue::<T>(problem.dim, problem.radius, i)?;
    match problem.family() {
        Family::P => Ok(T::lit(2.0) + lambda),
        Family::Eps => Ok((problem.nonlinearity.df(T::one()) - T::one()) / lambda),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl<T> {
    /// First arclength step in `(param, ln γ)`.
    pub initial: T,
    pub max_step: T,
    pub min_step: T,
    /// Growth factor after `easy_steps` consecutive quick corrections.
    pub grow: T,
    pub easy_steps: usize,
    /// Consecutive corrector failures before giving up.
    pub max_failures: usize,
    /// `|γ − u₀|` of the seed point.
    pub seed_offset: T,
    pub max_newton: usize,
    pub max_points: usize,
    /// `γ` above which the branch is declared blown up.
    pub ceiling: T,
    /// Cap on `|Δparam| / |param|` per step.
    pub max_relative_param_step: T,
    pub shoot: ShootOptions<T>,
}

impl<T: Real> Default for StepControl<T> {
    fn default() -> Self {
        Self {
            initial: T::lit(1e-3),
            max_step: T::lit(0.05),
            min_step: T::lit(1e-9),
            grow: T::lit(1.3),
            easy_steps: 4,
            max_failures: 10,
            seed_offset: T::lit(1e-3),
            max_newton: 8,
            max_points: 20_000,
            ceiling: T::lit(1e6),
            max_relative_param_step: T::lit(0.1),
            shoot: ShootOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    ParamLimit,
    BlowUp,
    StepFailure,
}

impl std::fmt::Display for Termination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::ParamLimit => "param_limit",
            Self::BlowUp => "blow_up",
            Self::StepFailure => "step_failure",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchPoint<T> {
    pub param: T,
    pub gamma: T,
    pub energy: T,
    pub max_u: T,
    pub min_u: T,
    pub zero_count: usize,
    /// Unit tangent `(dparam/ds, d ln γ/ds)`.
    pub tangent: (T, T),
    #[serde(skip)]
    morse: OnceLock<usize>,
}

impl<T: Real> BranchPoint<T> {
    fn from_profile(param: T, profile: &RadialProfile<T>, tangent: (T, T)) -> Self {
        Self {
            param,
            gamma: profile.gamma,
            energy: profile.energy,
            max_u: profile.max_u(),
            min_u: profile.min_u(),
            zero_count: profile.zero_count,
            tangent,
            morse: OnceLock::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fold<T> {
    pub param: T,
    pub gamma: T,
    /// Index of the last branch point before the fold.
    pub after_point: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Branch<T> {
    pub identity: SolutionType,
    pub family: Family,
    pub dim: usize,
    pub radius: T,
    /// Bifurcation value the branch was seeded from.
    pub bifurcation: T,
    pub points: Vec<BranchPoint<T>>,
    pub folds: Vec<Fold<T>>,
    pub termination: Termination,
    #[serde(skip)]
    base: Option<ProblemSpec<T>>,
    #[serde(skip)]
    shoot: Option<ShootOptions<T>>,
}

impl<T: Real> Branch<T> {
    pub fn problem_at(&self, param: T) -> Result<ProblemSpec<T>> {
        self.base.as_ref().ok_or_else(|| Error::Domain("branch has no problem attached".into()))?.with_param(param)
    }

    fn ivp(&self) -> ShootOptions<T> {
        self.shoot.unwrap_or_default()
    }

    /// Re-integrates the profile of point `k`.
    pub fn profile(&self, k: usize) -> Result<RadialProfile<T>> {
        let pt = self.points.get(k).ok_or_else(|| Error::Domain(format!("no branch point {k}")))?;
        let pr = self.problem_at(pt.param)?;
        integrate_ivp_with(&pr, pt.gamma, pr.radius, &self.ivp().ivp)
    }

    /// Radial Morse index of point `k`, computed once and cached.
    pub fn morse_index(&self, k: usize) -> Result<usize> {
        let pt = self.points.get(k).ok_or_else(|| Error::Domain(format!("no branch point {k}")))?;
        if let Some(&m) = pt.morse.get() {
            return Ok(m);
        }
        let m = morse_index_radial(&self.profile(k)?)?.index;
        Ok(*pt.morse.get_or_init(|| m))
    }

    /// Solutions on the branch at `param`, one per crossing of consecutive
    /// points, solved at fixed `param` from the bracketing `γ` pair.
    pub fn solutions_at(&self, param: T) -> Result<Vec<RadialProfile<T>>> {
        let pr = self.problem_at(param)?;
        let opts = self.ivp();
        let mut out = Vec::new();
        for w in self.points.windows(2) {
            if (w[0].param - param) * (w[1].param - param) > T::zero() {
                continue;
            }
            let (lo, hi) = if w[0].gamma < w[1].gamma { (w[0].gamma, w[1].gamma) } else { (w[1].gamma, w[0].gamma) };
            let mut width = hi - lo;
            let mut found = None;
            for _ in 0..6 {
                // stay on the branch's side of the constant state
                let (a, b) = match self.identity.sign {
                    Sign::Plus => ((lo - width).max((lo + T::one()) * T::lit(0.5)), hi + width),
                    Sign::Minus => ((lo - width).max(lo * T::lit(0.5)), (hi + width).min((hi + T::one()) * T::lit(0.5))),
                };
                match solve_solution_with(&pr, (a, b), Some(self.identity), &opts) {
                    Err(Error::NoSignChange { .. }) => width = width * T::lit(2.0),
                    other => {
                        found = Some(other?);
                        break;
                    }
                }
            }
            match found {
                Some(p) => out.push(p),
                None => return Err(Error::NoSignChange { lo: lo.to_f64_lossy(), hi: hi.to_f64_lossy() }),
            }
        }
        Ok(out)
    }

    /// Parameter values of the branch in order.
    pub fn params(&self) -> Vec<T> {
        self.points.iter().map(|p| p.param).collect()
    }
}

struct Eval<T> {
    shot: Shot<T>,
    f_param: T,
    f_y: T,
}

fn evaluate<T: Real>(base: &ProblemSpec<T>, param: T, y: T, ctrl: &StepControl<T>) -> Result<Eval<T>> {
    let pr = base.with_param(param)?;
    let gamma = y.exp();
    if gamma > ctrl.ceiling {
        return Err(Error::BlowUp { radius: 0.0, value: gamma.to_f64_lossy() });
    }
    let shot = shoot_with_jacobian(&pr, gamma, &ctrl.shoot.ivp)?;
    let (_, dg) = shot.dgamma.unwrap_or((T::zero(), T::zero()));
    let (_, dp) = shot.dparam.unwrap_or((T::zero(), T::zero()));
    Ok(Eval { shot, f_param: dp, f_y: dg * gamma })
}

fn converged<T: Real>(shot: &Shot<T>, ctrl: &StepControl<T>) -> bool {
    shot.du.abs() <= ctrl.shoot.rel_tol * shot.du_scale.max(T::one())
}

fn unit<T: Real>(a: T, b: T) -> (T, T) {
    let n = (a * a + b * b).sqrt();
    (a / n, b / n)
}

/// Solves `F(param, y) = 0` in `param` at fixed `y` inside a sign-change bracket.
fn solve_param<T: Real>(base: &ProblemSpec<T>, y: T, lo: T, hi: T, ctrl: &StepControl<T>) -> Result<(T, Eval<T>)> {
    let (mut a, mut b) = (lo, hi);
    let mut fa = evaluate(base, a, y, ctrl)?.shot.du;
    let fb = evaluate(base, b, y, ctrl)?.shot.du;
    if fa * fb > T::zero() {
        return Err(Error::NoSignChange { lo: a.to_f64_lossy(), hi: b.to_f64_lossy() });
    }
    let mut x = (a + b) * T::lit(0.5);
    for _ in 0..100 {
        let e = evaluate(base, x, y, ctrl)?;
        if converged(&e.shot, ctrl) {
            return Ok((x, e));
        }
        if fa * e.shot.du < T::zero() {
            b = x;
        } else {
            a = x;
            fa = e.shot.du;
        }
        let newton = x - e.shot.du / e.f_param;
        x = if newton.is_finite() && newton > a && newton < b { newton } else { (a + b) * T::lit(0.5) };
        if b - a <= T::epsilon() * T::lit(8.0) * x.abs() {
            let e = evaluate(base, x, y, ctrl)?;
            return Ok((x, e));
        }
    }
    Err(Error::NoConvergence(100))
}

fn profile_checked<T: Real>(base: &ProblemSpec<T>, param: T, gamma: T, want: SolutionType, ctrl: &StepControl<T>) -> Result<RadialProfile<T>> {
    let pr = base.with_param(param)?;
    let profile = integrate_ivp_with(&pr, gamma, pr.radius, &ctrl.shoot.ivp)?;
    let found = classify_with(&profile, ctrl.shoot.envelope_slack)?;
    if found != want {
        return Err(Error::TypeMismatch { expected: want.to_string(), found: found.to_string() });
    }
    Ok(profile)
}

fn in_range<T: Real>(param: T, range: (T, T)) -> bool {
    let (lo, hi) = if range.0 < range.1 { range } else { (range.1, range.0) };
    param >= lo && param <= hi
}

/// Traces the branch of type `(i, sign)` bifurcating from the constant solution
/// for the family of `base` (its own parameter value is ignored) within
/// `param_range`.
pub fn trace_branch<T: Real>(
    base: &ProblemSpec<T>,
    i: usize,
    sign: Sign,
    param_range: (T, T),
    ctrl: &StepControl<T>,
) -> Result<Branch<T>> {
    let identity = SolutionType::new(i, sign)?;
    let star = bifurcation_value(base, i)?;
    let s = T::lit(sign.as_f64());
    let seed_failure = |reason: String| Error::SeedFailure { param: star.to_f64_lossy(), reason };

    // seed: fix γ = 1 ± δ and solve for the parameter near the bifurcation value
    let y0 = (T::one() + s * ctrl.seed_offset).ln();
    let mut found = None;
    let mut w = T::lit(1e-2) * star.abs();
    for _ in 0..6 {
        let (lo, hi) = (star - w, star + w);
        match solve_param(base, y0, lo, hi, ctrl) {
            Ok(v) => {
                found = Some(v);
                break;
            }
            Err(Error::NoSignChange { .. }) => w = w * T::lit(2.0),
            Err(e) => return Err(seed_failure(e.to_string())),
        }
    }
    let (p0, e0) = found.ok_or_else(|| seed_failure("no parameter sign change near the bifurcation value".into()))?;
    if !in_range(p0, param_range) {
        return Err(seed_failure(format!("seed parameter {p0} outside the requested range")));
    }
    let prof0 = profile_checked(base, p0, y0.exp(), identity, ctrl).map_err(|e| seed_failure(e.to_string()))?;
    let mut t = unit(-e0.f_y, e0.f_param);
    if t.1 * s < T::zero() {
        t = (-t.0, -t.1);
    }
    let mut branch = Branch {
        identity,
        family: base.family(),
        dim: base.dim,
        radius: base.radius,
        bifurcation: star,
        points: vec![BranchPoint::from_profile(p0, &prof0, t)],
        folds: Vec::new(),
        termination: Termination::StepFailure,
        base: Some(base.clone()),
        shoot: Some(ctrl.shoot),
    };

    let mut x = (p0, y0);
    let mut fy_prev = e0.f_y;
    let mut ds = ctrl.initial;
    let mut failures = 0;
    let mut easy = 0;
    while branch.points.len() < ctrl.max_points {
        let mut step = ds;
        // keep relative parameter moves bounded
        if t.0.abs() * step > ctrl.max_relative_param_step * x.0.abs() {
            step = ctrl.max_relative_param_step * x.0.abs() / t.0.abs();
        }
        let pred = (x.0 + step * t.0, x.1 + step * t.1);
        match correct(base, pred, t, ctrl) {
            Ok((xn, e, iters)) => {
                let gamma = xn.1.exp();
                if gamma > ctrl.ceiling {
                    branch.termination = Termination::BlowUp;
                    break;
                }
                let mut tn = unit(-e.f_y, e.f_param);
                if tn.0 * t.0 + tn.1 * t.1 < T::zero() {
                    tn = (-tn.0, -tn.1);
                }
                let turn = tn.0 * t.0 + tn.1 * t.1;
                let accepted = if turn < T::lit(0.8) || (gamma - T::one()) * s <= T::zero() {
                    None
                } else {
                    profile_checked(base, xn.0, gamma, identity, ctrl).ok()
                };
                match accepted {
                    Some(profile) => {
                        if !in_range(xn.0, param_range) {
                            let (lo, hi) = if param_range.0 < param_range.1 { param_range } else { (param_range.1, param_range.0) };
                            let edge = if xn.0 < lo { lo } else { hi };
                            let bracket = (x.1.exp(), gamma);
                            if let Ok(p) = base.with_param(edge).and_then(|pr| solve_solution_with(&pr, bracket, Some(identity), &ctrl.shoot)) {
                                branch.points.push(BranchPoint::from_profile(edge, &p, tn));
                            }
                            branch.termination = Termination::ParamLimit;
                            break;
                        }
                        if e.f_y * fy_prev < T::zero() {
                            let k = branch.points.len() - 1;
                            let fold = refine_fold(base, (x.1, xn.1), (x.0, xn.0), ctrl)
                                .unwrap_or(((x.0 + xn.0) * T::lit(0.5), ((x.1 + xn.1) * T::lit(0.5)).exp()));
                            branch.folds.push(Fold { param: fold.0, gamma: fold.1, after_point: k });
                        }
                        branch.points.push(BranchPoint::from_profile(xn.0, &profile, tn));
                        x = xn;
                        t = tn;
                        fy_prev = e.f_y;
                        failures = 0;
                        if iters <= 3 {
                            easy += 1;
                            if easy >= ctrl.easy_steps {
                                ds = (ds * ctrl.grow).min(ctrl.max_step);
                                easy = 0;
                            }
                        } else {
                            easy = 0;
                        }
                        continue;
                    }
                    None => {}
                }
            }
            Err(Error::BlowUp { .. }) if pred.1.exp() > ctrl.ceiling * T::lit(0.5) => {
                branch.termination = Termination::BlowUp;
                break;
            }
            Err(_) => {}
        }
        failures += 1;
        easy = 0;
        ds = ds * T::lit(0.5);
        if failures >= ctrl.max_failures || ds < ctrl.min_step {
            branch.termination = Termination::StepFailure;
            break;
        }
    }
    Ok(branch)
}

/// Newton on `F = 0`, `t·(x − x̂) = 0`. Returns the point, its evaluation and the iteration count.
fn correct<T: Real>(base: &ProblemSpec<T>, pred: (T, T), t: (T, T), ctrl: &StepControl<T>) -> Result<((T, T), Eval<T>, usize)> {
    let mut x = pred;
    for it in 0..ctrl.max_newton {
        let e = evaluate(base, x.0, x.1, ctrl)?;
        let g = t.0 * (x.0 - pred.0) + t.1 * (x.1 - pred.1);
        if converged(&e.shot, ctrl) && g.abs() <= T::lit(1e-10) {
            return Ok(polish(base, x, e, t, pred, ctrl, it));
        }
        // [F_p F_y; t_p t_y] Δ = −[F; g]
        let det = e.f_param * t.1 - e.f_y * t.0;
        if det == T::zero() || !det.is_finite() {
            break;
        }
        let d0 = (-e.shot.du * t.1 + g * e.f_y) / det;
        let d1 = (-g * e.f_param + e.shot.du * t.0) / det;
        x = (x.0 + d0, x.1 + d1);
        if !(x.0.is_finite() && x.1.is_finite()) {
            break;
        }
    }
    Err(Error::NoConvergence(ctrl.max_newton))
}

/// Extra Newton steps while `|u'(R)|` keeps dropping. The relative test in
/// `converged` is loose once `max |u'|` is large and `u(R)` is tiny.
fn polish<T: Real>(base: &ProblemSpec<T>, mut x: (T, T), mut e: Eval<T>, t: (T, T), pred: (T, T), ctrl: &StepControl<T>, it: usize) -> ((T, T), Eval<T>, usize) {
    for _ in 0..4 {
        let g = t.0 * (x.0 - pred.0) + t.1 * (x.1 - pred.1);
        let det = e.f_param * t.1 - e.f_y * t.0;
        if det == T::zero() || !det.is_finite() {
            break;
        }
        let d0 = (-e.shot.du * t.1 + g * e.f_y) / det;
        let d1 = (-g * e.f_param + e.shot.du * t.0) / det;
        let xn = (x.0 + d0, x.1 + d1);
        match evaluate(base, xn.0, xn.1, ctrl) {
            Ok(en) if en.shot.du.abs() < T::lit(0.5) * e.shot.du.abs() => {
                x = xn;
                e = en;
            }
            _ => break,
        }
    }
    (x, e, it)
}

/// Locates `F = F_y = 0` between two branch points by bisecting `F_y` in `ln γ`.
fn refine_fold<T: Real>(base: &ProblemSpec<T>, ys: (T, T), ps: (T, T), ctrl: &StepControl<T>) -> Result<(T, T)> {
    let width = (ps.0 - ps.1).abs().max(T::lit(1e-6) * ps.0.abs());
    let solve_at = |y: T, guess: T| -> Result<(T, Eval<T>)> {
        let mut w = width;
        for _ in 0..8 {
            match solve_param(base, y, guess - w, guess + w, ctrl) {
                Err(Error::NoSignChange { .. }) => w = w * T::lit(2.0),
                other => return other,
            }
        }
        Err(Error::NoConvergence(8))
    };
    let (mut ya, mut yb) = ys;
    let (mut pa, ea) = solve_at(ya, ps.0)?;
    let (mut pb, eb) = solve_at(yb, ps.1)?;
    let mut fa = ea.f_y;
    if fa * eb.f_y > T::zero() {
        return Err(Error::NoSignChange { lo: ya.to_f64_lossy(), hi: yb.to_f64_lossy() });
    }
    for _ in 0..60 {
        let ym = (ya + yb) * T::lit(0.5);
        let (pm, em) = solve_at(ym, (pa + pb) * T::lit(0.5))?;
        if em.f_y * fa < T::zero() {
            yb = ym;
            pb = pm;
        } else {
            ya = ym;
            pa = pm;
            fa = em.f_y;
        }
        if (yb - ya).abs() <= T::lit(1e-12) {
            break;
        }
    }
    let ym = (ya + yb) * T::lit(0.5);
    let (pm, _) = solve_at(ym, (pa + pb) * T::lit(0.5))?;
    Ok((pm, ym.exp()))
}

/// Degenerate solution found at a fold.
#[derive(Debug, Clone)]
pub struct FoldRecord<T> {
    pub param: T,
    pub gamma: T,
    pub profile: RadialProfile<T>,
    /// Central-difference `∂_γ u'(R)`.
    pub dgamma_fd: T,
    /// `max(1, max |u'|)`, the scale the derivative is compared with.
    pub scale: T,
    /// `|∂_γ u'(R)| ≤ 1e-4 · scale`.
    pub degenerate: bool,
    pub morse: Option<MorseReport>,
    /// The fold lies on the subcritical side of the bifurcation value.
    pub before_bifurcation: bool,
}

pub fn fold_report<T: Real>(branch: &Branch<T>) -> Result<Vec<FoldRecord<T>>> {
    let opts = branch.ivp();
    branch
        .folds
        .iter()
        .map(|f| {
            let pr = branch.problem_at(f.param)?;
            let profile = integrate_ivp_with(&pr, f.gamma, pr.radius, &opts.ivp)?;
            let d = residual_dgamma_fd(&pr, f.gamma, &opts.ivp)?;
            let scale = profile.max_abs_du().max(T::one());
            let morse = morse_index_radial(&profile).ok();
            let before = match branch.family {
                Family::P => f.param < branch.bifurcation,
                Family::Eps => f.param > branch.bifurcation,
            };
            Ok(FoldRecord {
                param: f.param,
                gamma: f.gamma,
                profile,
                dgamma_fd: d,
                scale,
                degenerate: d.abs() <= T::lit(1e-4) * scale,
                morse,
                before_bifurcation: before,
            })
        })
        .collect()
}

/// Boundary-layer statistics of a clustered solution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayerDiagnostics<T> {
    pub eps: T,
    /// Interior local maxima radii, outermost first.
    pub maxima: Vec<T>,
    /// `(R − r₁)/R`.
    pub boundary_gap: Option<T>,
    /// `(r_k − r_{k+1})/R`.
    pub inter_gaps: Vec<T>,
    /// Every gap above divided by `ε log(1/ε)`, boundary gap first.
    pub ratios: Vec<T>,
}

pub fn layer_diagnostics<T: Real>(profile: &RadialProfile<T>, eps: T) -> LayerDiagnostics<T> {
    let radius = profile.problem.radius;
    let cp = &profile.crit_points;
    let mut maxima: Vec<T> = (1..cp.len().saturating_sub(1))
        .filter(|&k| cp[k].1 > cp[k - 1].1 && cp[k].1 > cp[k + 1].1)
        .map(|k| cp[k].0)
        .collect();
    maxima.reverse();
    let boundary_gap = maxima.first().map(|&r1| (radius - r1) / radius);
    let inter_gaps: Vec<T> = maxima.windows(2).map(|w| (w[0] - w[1]) / radius).collect();
    let unit = eps * (T::one() / eps).ln();
    let ratios = boundary_gap.iter().chain(inter_gaps.iter()).map(|&g| g / unit).collect();
    LayerDiagnostics { eps, maxima, boundary_gap, inter_gaps, ratios }
}
