//! Crandall–Rabinowitz coefficients, the Bessel integral lemma and Morse indices.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ode::{Dopri5, Flow};
use crate::quad::{integrate, integrate_pieces, QuadOptions};
use crate::radial_ode::{RadialProfile, SumOfPowers};
use crate::scalar::{sphere_area, Real};
use crate::specfun::{bessel_j, bessel_j_root, bessel_j_scaled_series, gamma_fn, SpecFunConfig};
use crate::spectrum::{bessel_order, char_root, radial_eigenvalue, spectrum_list, RadialEigenfunction};

/// Which bifurcation the coefficients belong to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CoeffContext<T> {
    RadialP { dim: usize, radius: T, i: usize },
    RadialEps { dim: usize, radius: T, i: usize },
    OneDim { radius: T, i: usize },
    NonradialFirst { dim: usize, radius: T },
}

impl<T: Real> CoeffContext<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Self::RadialP { .. } => "radial-p",
            Self::RadialEps { .. } => "radial-eps",
            Self::OneDim { .. } => "one-dim",
            Self::NonradialFirst { .. } => "nonradial-first",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BifurcationCoefficients<T> {
    pub context: CoeffContext<T>,
    pub a: T,
    pub b: Option<T>,
    pub c: Option<T>,
    /// Intermediate integrals, by name.
    pub quadratures: Vec<(String, T)>,
}

fn quad_opts<T: Real>() -> QuadOptions<T> {
    QuadOptions::tol(T::lit(1e-300).max(T::min_positive_value()), T::lit(1e-12).max(T::epsilon() * T::lit(64.0)))
}

pub fn coeff_a<T: Real>(context: &CoeffContext<T>) -> Result<T> {
    match *context {
        CoeffContext::RadialEps { dim, radius, i } => radial_eigenvalue(dim, radius, i),
        _ => Ok(-T::one()),
    }
}

fn check_index(i: usize) -> Result<()> {
    if i < 2 {
        return Err(Error::Domain(format!("bifurcation index must be at least 2, got {i}")));
    }
    Ok(())
}

/// `∫_{B_R} φ_i³` by weighted quadrature of the normalised eigenfunction.
pub fn cube_integral_direct<T: Real>(dim: usize, radius: T, i: usize) -> Result<T> {
    check_index(i)?;
    let phi = RadialEigenfunction::new(dim, radius, i)?;
    let nu = bessel_order::<T>(dim, 0);
    let mut breaks = vec![T::zero()];
    for m in 1..i {
        breaks.push((bessel_j_root::<T>(nu, m)? / phi.lambda.sqrt()).min(radius));
    }
    breaks.push(radius);
    let wd = dim as i32 - 1;
    let v = integrate_pieces(
        |r: T| {
            let f = phi.eval(r).unwrap_or(T::zero());
            f * f * f * r.powi(wd)
        },
        &breaks,
        &quad_opts(),
    )?;
    Ok(sphere_area::<T>(dim) * v)
}

/// `∫_{B_R} φ_i³` through `∫₀^z t^{1−ν} J_ν(t)³ dt` and the closed-form normalisation.
pub fn cube_integral_reduced<T: Real>(dim: usize, radius: T, i: usize) -> Result<T> {
    check_index(i)?;
    let phi = RadialEigenfunction::new(dim, radius, i)?;
    let c = phi.norm_const_closed_form()?;
    let nu = bessel_order::<T>(dim, 0);
    let lambda = phi.lambda;
    let z = lambda.sqrt() * radius;
    let mut breaks = vec![T::zero()];
    for m in 1..i {
        breaks.push(bessel_j_root::<T>(nu, m)?.min(z));
    }
    breaks.push(z);
    let one = T::one();
    let t_int = integrate_pieces(
        |t: T| {
            let j = bessel_j(nu, t).unwrap_or(T::zero());
            t.powf(one - nu) * j * j * j
        },
        &breaks,
        &quad_opts(),
    )?;
    let scale = lambda.powf(-(T::lit(2.0) - nu) * T::lit(0.5));
    Ok(sphere_area::<T>(dim) * c * c * c * scale * t_int)
}

/// `b = −½(1 + λ_i)λ_i ∫φ_i³` for the radial bifurcation from `(2 + λ_i^rad, 1)`.
pub fn coeff_b_radial<T: Real>(dim: usize, radius: T, i: usize) -> Result<T> {
    let lambda = radial_eigenvalue::<T>(dim, radius, i)?;
    let cube = cube_integral_direct(dim, radius, i)?;
    Ok(-T::lit(0.5) * (T::one() + lambda) * lambda * cube)
}

/// Both evaluation paths of [`coeff_b_radial`]: (direct, reduced Bessel integral).
pub fn coeff_b_radial_paths<T: Real>(dim: usize, radius: T, i: usize) -> Result<(T, T)> {
    let lambda = radial_eigenvalue::<T>(dim, radius, i)?;
    let pre = -T::lit(0.5) * (T::one() + lambda) * lambda;
    Ok((pre * cube_integral_direct(dim, radius, i)?, pre * cube_integral_reduced(dim, radius, i)?))
}

/// `b = f''(1)/(2λ_i) ∫φ_i³` for the ε-family.
pub fn coeff_b_eps<T: Real>(dim: usize, radius: T, f: &SumOfPowers<T>, i: usize) -> Result<T> {
    let lambda = radial_eigenvalue::<T>(dim, radius, i)?;
    let f2 = f.second_deriv(T::one());
    if f2 == T::zero() {
        return Ok(T::zero());
    }
    Ok(f2 / (T::lit(2.0) * lambda) * cube_integral_direct(dim, radius, i)?)
}

/// One-dimensional `c` on `(−R, R)` for the eigenvalue `λ = (iπ/(2R))²`:
/// `π²i²/(12R³) + 5π⁴i⁴/(192R⁵) + π⁶i⁶/(768R⁷)`.
pub fn coeff_c_1d<T: Real>(radius: T, i: usize) -> Result<T> {
    if !(radius > T::zero()) || i == 0 {
        return Err(Error::Domain(format!("need R > 0 and i ≥ 1, got R = {radius}, i = {i}")));
    }
    let x = T::PI() * T::from_count(i) / radius;
    let x2 = x * x;
    Ok(x2 / (T::lit(12.0) * radius) + T::lit(5.0) * x2 * x2 / (T::lit(192.0) * radius) + x2 * x2 * x2 / (T::lit(768.0) * radius))
}

/// `|S^{N−1}|⁻¹`-free angular moments: `∫_S (x₁/r)² = |S|/N`.
pub fn angular_second_moment<T: Real>(dim: usize) -> T {
    sphere_area::<T>(dim) / T::from_count(dim)
}

/// `∫_S (x₁/r)⁴ = 3|S|/(N(N+2))`.
pub fn angular_fourth_moment<T: Real>(dim: usize) -> T {
    T::lit(3.0) * sphere_area::<T>(dim) / T::from_count(dim * (dim + 2))
}

/// Unit-ball data for the first non-radial bifurcation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonradialData {
    pub dim: usize,
    /// `λ̄₂ = z_{1,1}²`, the first non-zero Neumann eigenvalue of `B₁`.
    pub lambda_bar: f64,
    /// `α = ∫_{B₁} φ̄₂⁴`.
    pub alpha: f64,
    /// `β = −3λ̄₂ ∫_{B₁} φ̄₂² w̄`.
    pub beta: f64,
    /// `∫_{B₁} φ̄₂² w̄` split into its radial and degree-two parts.
    pub w_radial: f64,
    pub w_quadrupole: f64,
}

impl NonradialData {
    /// `R^{N+2} c` from the stored constants.
    pub fn scaled_c(&self, radius: f64) -> f64 {
        let (l, a, b) = (self.lambda_bar, self.alpha, self.beta);
        let s = l / (radius * radius);
        l / 6.0 * (1.0 + s) * ((b - a) * s + b + a)
    }

    pub fn c(&self, radius: f64) -> f64 {
        self.scaled_c(radius) / radius.powi(self.dim as i32 + 2)
    }
}

static NONRADIAL: OnceLock<Mutex<HashMap<usize, NonradialData>>> = OnceLock::new();

/// Cached [`NonradialData`] for dimension `N`; safe to call from many threads.
pub fn nonradial_data(dim: usize) -> Result<NonradialData> {
    let cache = NONRADIAL.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(d) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&dim) {
        return Ok(*d);
    }
    let fresh = compute_nonradial(dim)?;
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    Ok(*guard.entry(dim).or_insert(fresh))
}

/// `c` at the first non-radial bifurcation `p = 2 + λ₂(B_R)` together with `R^{N+2}c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonradialC<T> {
    pub data: NonradialData,
    pub radius: T,
    pub scaled_c: T,
    pub c: T,
}

pub fn coeff_c_nonradial_first<T: Real>(dim: usize, radius: T) -> Result<NonradialC<T>> {
    if !(radius > T::zero()) {
        return Err(Error::Domain(format!("radius must be positive, got {radius}")));
    }
    let data = nonradial_data(dim)?;
    let r = radius.to_f64_lossy();
    Ok(NonradialC { data, radius, scaled_c: T::lit(data.scaled_c(r)), c: T::lit(data.c(r)) })
}

fn compute_nonradial(dim: usize) -> Result<NonradialData> {
    if dim < 2 {
        return Err(Error::Domain(format!("dimension must be at least 2, got {dim}")));
    }
    let n = dim as f64;
    let z: f64 = char_root(dim, 1, 1)?;
    let lambda = z * z;
    let nu = n / 2.0;
    let cfg = SpecFunConfig::<f64>::default();
    let pre = (z / 2.0).powf(nu);
    // unnormalised radial factor of φ̄₂: r^{−(N−2)/2} J_{N/2}(z r) = (z/2)^{N/2} r S(zr)
    let shape = move |r: f64| {
        let x = z * r;
        if x < 1.0 {
            pre * r * bessel_j_scaled_series(nu, x, cfg.max_terms)
        } else {
            bessel_j(nu, x).unwrap_or(0.0) / r.powf(nu - 1.0)
        }
    };
    let area: f64 = sphere_area(dim);
    let wd = dim as i32 - 1;
    let opts = QuadOptions::tol(1e-300, 1e-13);
    let sq = integrate(|r: f64| shape(r).powi(2) * r.powi(wd), 0.0, 1.0, &opts)?.0;
    let norm = (area / n * sq).sqrt().recip();
    let g = move |r: f64| norm * shape(r);
    let quart = integrate(|r: f64| g(r).powi(4) * r.powi(wd), 0.0, 1.0, &opts)?.0;
    let alpha = angular_fourth_moment::<f64>(dim) * quart;

    // regular series at the centre: g ≈ g1 r
    let g1 = norm * pre / gamma_fn(nu + 1.0)?;
    let r0: f64 = 1e-4;
    let a0 = -g1 * g1 / (n * (4.0 * n + 8.0));
    let a2 = -g1 * g1 / (2.0 * n + 8.0);
    let h0 = |r: f64| 1.0 - lambda * r * r / (2.0 * n) + lambda * lambda * r.powi(4) / (8.0 * n * (n + 2.0));
    let h0d = |r: f64| -lambda * r / n + lambda * lambda * r.powi(3) / (2.0 * n * (n + 2.0));
    let b2 = -lambda / (2.0 * n + 8.0);
    let y0 = [
        a0 * r0.powi(4),
        4.0 * a0 * r0.powi(3),
        h0(r0),
        h0d(r0),
        a2 * r0.powi(4),
        4.0 * a2 * r0.powi(3),
        r0 * r0 * (1.0 + b2 * r0 * r0),
        2.0 * r0 + 4.0 * b2 * r0.powi(3),
        0.0,
        0.0,
        0.0,
        0.0,
    ];
    let rhs = |r: f64, y: &[f64; 12]| {
        let gg = g(r).powi(2);
        let damp = (n - 1.0) / r;
        let ang = 2.0 * n / (r * r);
        let w = r.powi(wd);
        [
            y[1],
            -damp * y[1] - lambda * y[0] - gg / n,
            y[3],
            -damp * y[3] - lambda * y[2],
            y[5],
            -damp * y[5] + (ang - lambda) * y[4] - gg,
            y[7],
            -damp * y[7] + (ang - lambda) * y[6],
            gg * y[0] * w,
            gg * y[2] * w,
            gg * y[4] * w,
            gg * y[6] * w,
        ]
    };
    let solver = Dopri5 { max_steps: 200_000, ..Dopri5::with_tol(1e-12, 1e-16) };
    let out = solver.solve(rhs, r0, y0, 1.0, |_| Flow::Continue)?;
    let y = out.y;
    let resonant = |d: f64, scale: f64| d.abs() <= 1e-10 * scale.max(1e-300);
    if resonant(y[3], y[2].abs() + y[3].abs()) || resonant(y[7], y[6].abs() + y[7].abs()) {
        return Err(Error::Resonance(format!("λ̄ = {lambda} is a Neumann eigenvalue of a reduced radial operator")));
    }
    let c0 = -y[1] / y[3];
    let c2 = -y[5] / y[7];
    let w_radial = area / n * (y[8] + c0 * y[9]);
    let w_quadrupole = area * 2.0 * (n - 1.0) / (n * n * (n + 2.0)) * (y[10] + c2 * y[11]);
    let beta = -3.0 * lambda * (w_radial + w_quadrupole);
    Ok(NonradialData { dim, lambda_bar: lambda, alpha, beta, w_radial, w_quadrupole })
}

/// All coefficients of the radial bifurcation from `(2 + λ_i^rad, 1)`.
pub fn radial_p_coefficients<T: Real>(dim: usize, radius: T, i: usize) -> Result<BifurcationCoefficients<T>> {
    let context = CoeffContext::RadialP { dim, radius, i };
    let lambda = radial_eigenvalue::<T>(dim, radius, i)?;
    let (b, b_reduced) = coeff_b_radial_paths(dim, radius, i)?;
    let cube = cube_integral_direct(dim, radius, i)?;
    Ok(BifurcationCoefficients {
        context,
        a: coeff_a(&context)?,
        b: Some(b),
        c: None,
        quadratures: vec![
            ("lambda".into(), lambda),
            ("int_phi3".into(), cube),
            ("b_reduced".into(), b_reduced),
        ],
    })
}

pub fn radial_eps_coefficients<T: Real>(dim: usize, radius: T, f: &SumOfPowers<T>, i: usize) -> Result<BifurcationCoefficients<T>> {
    let context = CoeffContext::RadialEps { dim, radius, i };
    let cube = cube_integral_direct(dim, radius, i)?;
    Ok(BifurcationCoefficients {
        context,
        a: coeff_a(&context)?,
        b: Some(coeff_b_eps(dim, radius, f, i)?),
        c: None,
        quadratures: vec![("int_phi3".into(), cube), ("f2".into(), f.second_deriv(T::one()))],
    })
}

pub fn one_dim_coefficients<T: Real>(radius: T, i: usize) -> Result<BifurcationCoefficients<T>> {
    let context = CoeffContext::OneDim { radius, i };
    Ok(BifurcationCoefficients { context, a: -T::one(), b: Some(T::zero()), c: Some(coeff_c_1d(radius, i)?), quadratures: Vec::new() })
}

pub fn nonradial_first_coefficients<T: Real>(dim: usize, radius: T) -> Result<BifurcationCoefficients<T>> {
    let context = CoeffContext::NonradialFirst { dim, radius };
    let nc = coeff_c_nonradial_first(dim, radius)?;
    Ok(BifurcationCoefficients {
        context,
        a: -T::one(),
        b: Some(T::zero()),
        c: Some(nc.c),
        quadratures: vec![
            ("lambda_bar".into(), T::lit(nc.data.lambda_bar)),
            ("alpha".into(), T::lit(nc.data.alpha)),
            ("beta".into(), T::lit(nc.data.beta)),
            ("scaled_c".into(), nc.scaled_c),
        ],
    })
}

/// Whether `b` is large enough for the bifurcation to count as transcritical.
pub fn is_transcritical<T: Real>(b: T, lambda: T) -> bool {
    b.abs() > T::lit(1e-8) * (T::one() + lambda) * lambda
}

/// Cumulative integral `I(x) = ∫₀^x s^α J_ν^β(s) ds` with `J^β = sign(J)|J|^β`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaScan<T> {
    /// Minimum of `I` over grid points and roots past the first root of `J_ν`.
    pub min_value: T,
    pub argmin: T,
    /// `(x, I(x))` on the sample grid merged with the roots.
    pub samples: Vec<(T, T)>,
    /// `(j_{ν,m}, I(j_{ν,m}))`.
    pub at_roots: Vec<(T, T)>,
}

impl<T: Real> LemmaScan<T> {
    /// Mean of `I` over `[x_max − window, x_max]`, which damps the oscillating tail.
    pub fn tail_mean(&self, window: T) -> T {
        let end = self.samples.last().map(|s| s.0).unwrap_or(T::zero());
        let pts: Vec<_> = self.samples.iter().filter(|s| s.0 >= end - window).collect();
        if pts.len() < 2 {
            return pts.last().map(|s| s.1).unwrap_or(T::zero());
        }
        let mut acc = T::zero();
        for w in pts.windows(2) {
            acc = acc + (w[1].0 - w[0].0) * (w[0].1 + w[1].1) * T::lit(0.5);
        }
        acc / (pts[pts.len() - 1].0 - pts[0].0)
    }
}

pub fn lemma_integral_scan<T: Real>(nu: T, alpha: T, beta: T, x_max: T, samples: usize) -> Result<LemmaScan<T>> {
    if nu < T::zero() || !(beta > T::zero()) || !(x_max > T::zero()) {
        return Err(Error::Domain(format!("need ν ≥ 0, β > 0, x_max > 0; got ν = {nu}, β = {beta}, x_max = {x_max}")));
    }
    let expo = alpha + nu * beta;
    if !(expo > -T::one()) {
        return Err(Error::NotIntegrable(expo.to_f64_lossy()));
    }
    let cfg = SpecFunConfig::<T>::default();
    let half = T::lit(0.5);
    let f = |s: T| {
        if s < T::one() {
            // s^α J_ν(s)^β = s^{α+νβ} 2^{−νβ} S(s)^β with S the scaled series
            let sc = bessel_j_scaled_series(nu, s, cfg.max_terms);
            s.powf(expo) * half.powf(nu * beta) * sc.signum() * sc.abs().powf(beta)
        } else {
            let j = bessel_j(nu, s).unwrap_or(T::zero());
            s.powf(alpha) * j.signum() * j.abs().powf(beta)
        }
    };
    let mut roots = Vec::new();
    for m in 1.. {
        let z = bessel_j_root::<T>(nu, m)?;
        if z >= x_max {
            break;
        }
        roots.push(z);
    }
    let n = samples.max(2);
    let mut pts: Vec<(T, bool)> = (1..=n).map(|k| (x_max * T::from_count(k) / T::from_count(n), false)).collect();
    pts.extend(roots.iter().map(|&z| (z, true)));
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let opts = QuadOptions::tol(T::lit(1e-14).max(T::epsilon()), T::lit(1e-11).max(T::epsilon() * T::lit(64.0)));
    let mut acc = T::zero();
    let mut prev = T::zero();
    let first_root = roots.first().copied().unwrap_or(x_max);
    let mut out = LemmaScan { min_value: T::infinity(), argmin: x_max, samples: Vec::with_capacity(pts.len()), at_roots: Vec::new() };
    for (x, is_root) in pts {
        if x > prev {
            acc = acc + integrate(f, prev, x, &opts)?.0;
            prev = x;
        }
        out.samples.push((x, acc));
        if is_root {
            out.at_roots.push((x, acc));
        }
        if x >= first_root && acc < out.min_value {
            out.min_value = acc;
            out.argmin = x;
        }
    }
    if out.min_value == T::infinity() {
        out.min_value = acc;
    }
    Ok(out)
}

/// `∫₀^∞ x^{1−ν} J_ν(x)³ dx = 2^{ν−1}(3/16)^{ν−1/2} / (√π Γ(ν+1/2))`.
pub fn j_cubed_tail<T: Real>(nu: T) -> Result<T> {
    if nu < T::zero() {
        return Err(Error::Domain(format!("ν must be non-negative, got {nu}")));
    }
    let half = T::lit(0.5);
    Ok(T::lit(2.0).powf(nu - T::one()) * T::lit(3.0 / 16.0).powf(nu - half) / (T::PI().sqrt() * gamma_fn(nu + half)?))
}

/// Morse index of the constant solution `u = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MorseCount {
    pub index: usize,
    /// Some eigenvalue lies within `1e-10` of `p − 2`.
    pub degenerate: bool,
}

pub fn morse_index_constant<T: Real>(dim: usize, radius: T, p: T, radial_only: bool) -> Result<MorseCount> {
    if !(p > T::lit(2.0)) {
        return Err(Error::Domain(format!("p must exceed 2, got {p}")));
    }
    let thr = p - T::lit(2.0);
    let near = |l: T| (l - thr).abs() < T::lit(1e-10);
    let mut degenerate = false;
    if radial_only {
        let mut index = 1;
        for i in 2.. {
            let l = radial_eigenvalue::<T>(dim, radius, i)?;
            degenerate |= near(l);
            if l >= thr {
                break;
            }
            index += 1;
        }
        return Ok(MorseCount { index, degenerate });
    }
    let mut count = 8;
    loop {
        let list = spectrum_list::<T>(dim, radius, count)?;
        if list.last().map(|r| r.lambda >= thr).unwrap_or(false) {
            let mut index = 0;
            for r in &list {
                degenerate |= near(r.lambda);
                if r.lambda < thr {
                    index += r.multiplicity as usize;
                }
            }
            return Ok(MorseCount { index, degenerate });
        }
        count *= 2;
    }
}

/// Radial Morse index of a computed solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MorseReport {
    pub index: usize,
    /// Richardson-extrapolated `min |μ|` over the eigenvalues adjacent to zero.
    pub min_abs_mu: f64,
    /// `min_abs_mu < 1e-6`: the solution is (numerically) degenerate.
    pub near_zero: bool,
    /// Node counts of the two meshes that agreed (or the last two tried).
    pub meshes: (usize, usize),
    pub stable: bool,
}

pub const NEAR_ZERO_MU: f64 = 1e-6;

/// Symmetric tridiagonal finite-volume form of `−(r^{N−1}v')' + r^{N−1}q v = μ r^{N−1} v`
/// with natural Neumann closure at both ends.
struct SturmMesh {
    diag: Vec<f64>,
    off: Vec<f64>,
    weight: Vec<f64>,
}

impl SturmMesh {
    fn new<T: Real>(profile: &RadialProfile<T>, nodes: usize) -> Self {
        let dim = profile.problem.dim as i32;
        let radius = profile.problem.radius.to_f64_lossy();
        let h = radius / (nodes - 1) as f64;
        let nl = &profile.problem.nonlinearity;
        let vol = |a: f64, b: f64| (b.powi(dim) - a.powi(dim)) / dim as f64;
        let flux = |x: f64| x.powi(dim - 1) / h;
        let mut diag = vec![0.0; nodes];
        let mut off = vec![0.0; nodes - 1];
        let mut weight = vec![0.0; nodes];
        for j in 0..nodes {
            let r = j as f64 * h;
            let lo = (r - 0.5 * h).max(0.0);
            let hi = (r + 0.5 * h).min(radius);
            weight[j] = vol(lo, hi);
            let (u, _) = profile.eval(T::lit(r.min(radius)));
            let q = nl.dg(u).to_f64_lossy();
            let mut d = weight[j] * q;
            if j > 0 {
                d += flux(lo);
            }
            if j + 1 < nodes {
                let a = flux(hi);
                d += a;
                off[j] = -a;
            }
            diag[j] = d;
        }
        Self { diag, off, weight }
    }

    /// Number of eigenvalues below `mu` (Sylvester inertia of `A − μW`).
    fn count_below(&self, mu: f64) -> usize {
        let mut neg = 0;
        let mut d_prev = 1.0;
        for j in 0..self.diag.len() {
            let mut d = self.diag[j] - mu * self.weight[j];
            if j > 0 {
                d -= self.off[j - 1] * self.off[j - 1] / d_prev;
            }
            if d == 0.0 {
                d = -f64::EPSILON * (self.diag[j].abs() + 1.0);
            }
            if d < 0.0 {
                neg += 1;
            }
            d_prev = d;
        }
        neg
    }

    /// The `m`-th eigenvalue (1-based) by Sturm bisection.
    fn eigenvalue(&self, m: usize) -> f64 {
        let mut lo = -1.0;
        while self.count_below(lo) >= m {
            lo *= 2.0;
        }
        let mut hi = 1.0;
        while self.count_below(hi) < m {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) >= m {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Number of negative eigenvalues of the radial linearisation
/// `−v'' − (N−1)/r v' + G'(u) v = μ v`, `v'(0) = v'(R) = 0`, on meshes of
/// 2001, 4001, … nodes until two consecutive counts agree.
pub fn morse_index_radial<T: Real>(profile: &RadialProfile<T>) -> Result<MorseReport> {
    let mut coarse_nodes = 2001;
    let mut coarse = SturmMesh::new(profile, coarse_nodes);
    let mut fine_nodes = 2 * coarse_nodes - 1;
    let mut fine = SturmMesh::new(profile, fine_nodes);
    let mut stable = coarse.count_below(0.0) == fine.count_below(0.0);
    while !stable && fine_nodes < 32_001 {
        coarse = fine;
        coarse_nodes = fine_nodes;
        fine_nodes = 2 * coarse_nodes - 1;
        fine = SturmMesh::new(profile, fine_nodes);
        stable = coarse.count_below(0.0) == fine.count_below(0.0);
    }
    let index = fine.count_below(0.0);
    let mut min_abs = f64::INFINITY;
    for m in [index, index + 1] {
        if m == 0 {
            continue;
        }
        // second-order scheme: Richardson on the halved mesh
        let mu = (4.0 * fine.eigenvalue(m) - coarse.eigenvalue(m)) / 3.0;
        min_abs = min_abs.min(mu.abs());
    }
    Ok(MorseReport { index, min_abs_mu: min_abs, near_zero: min_abs < NEAR_ZERO_MU, meshes: (coarse_nodes, fine_nodes), stable })
}
