//! Gamma and Bessel functions of the first kind for real order ν ≥ 0.
//!
//! `bessel_j` switches between three regimes:
//!
//! * the ascending power series when `x` is small (no cancellation to speak of),
//! * the large-argument Hankel expansion once `x ≥ max(asymptotic_cutoff, ν²)`,
//! * Miller's backward recurrence normalised by
//!   `(x/2)^ν₀ = Σ_k (ν₀ + 2k) Γ(ν₀ + k) / k! · J_{ν₀+2k}(x)` in between.

use crate::error::{Error, Result};
use crate::roots::{refine_root, scan_sign_changes};
use crate::scalar::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunConfig<T> {
    /// Below this argument the power series is always used.
    pub series_cutoff: T,
    /// Hankel expansion is used for `x ≥ max(asymptotic_cutoff, ν²)`.
    pub asymptotic_cutoff: T,
    /// Absolute tolerance of root refinement.
    pub root_tol: T,
    /// Truncation bound for the series and the asymptotic expansion.
    pub max_terms: usize,
}

impl<T: Real> Default for SpecFunConfig<T> {
    fn default() -> Self {
        Self {
            series_cutoff: T::lit(5.0),
            asymptotic_cutoff: T::lit(30.0),
            root_tol: T::lit(1e-12),
            max_terms: 600,
        }
    }
}

impl<T: Real> SpecFunConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.series_cutoff > T::zero()) {
            return Err(Error::Domain("series_cutoff must be positive".into()));
        }
        if !(self.root_tol > T::zero()) {
            return Err(Error::Domain("root_tol must be positive".into()));
        }
        Ok(())
    }
}

fn lanczos_sum<T: Real>(xm1: T) -> T {
    let mut a = T::lit(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a = a + T::lit(c) / (xm1 + T::from_count(i));
    }
    a
}

/// Γ(x) without argument checks; `x > 0` is assumed.
pub(crate) fn gamma_unchecked<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    if x < half {
        // reflection keeps the Lanczos sum in its accurate range
        return T::PI() / ((T::PI() * x).sin() * gamma_unchecked(T::one() - x));
    }
    if x == x.floor() && x <= T::lit(30.0) {
        let mut acc = T::one();
        let mut k = T::lit(2.0);
        while k < x {
            acc = acc * k;
            k = k + T::one();
        }
        return acc;
    }
    let xm1 = x - T::one();
    let t = xm1 + T::lit(LANCZOS_G) + half;
    (T::lit(2.0) * T::PI()).sqrt() * t.powf(xm1 + half) * (-t).exp() * lanczos_sum(xm1)
}

/// ln Γ(x) for `x > 0`.
pub(crate) fn ln_gamma_unchecked<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    if x < half {
        return (T::PI() / (T::PI() * x).sin()).ln() - ln_gamma_unchecked(T::one() - x);
    }
    let xm1 = x - T::one();
    let t = xm1 + T::lit(LANCZOS_G) + half;
    half * (T::lit(2.0) * T::PI()).ln() + (xm1 + half) * t.ln() - t + lanczos_sum(xm1).ln()
}

/// Gamma function for positive arguments.
pub fn gamma_fn<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) {
        return Err(Error::Domain(format!("gamma_fn requires x > 0, got {x}")));
    }
    Ok(gamma_unchecked(x))
}

fn check_order<T: Real>(nu: T, x: T) -> Result<()> {
    if !(nu >= T::zero()) || !nu.is_finite() {
        return Err(Error::Domain(format!("Bessel order must be >= 0, got {nu}")));
    }
    if !(x >= T::zero()) || !x.is_finite() {
        return Err(Error::Domain(format!("Bessel argument must be >= 0, got {x}")));
    }
    Ok(())
}

/// `J_ν(x) / (x/2)^ν` by the power series; regular at `x = 0`.
pub(crate) fn bessel_j_scaled_series<T: Real>(nu: T, x: T, max_terms: usize) -> T {
    let q = x * x / T::lit(4.0);
    let mut term = (-ln_gamma_unchecked(nu + T::one())).exp();
    let mut sum = term;
    for k in 0..max_terms {
        let kf = T::from_count(k);
        term = -term * q / ((kf + T::one()) * (kf + T::one() + nu));
        sum = sum + term;
        if term.abs() <= T::epsilon() * sum.abs() * T::lit(0.25) && (kf + T::one()) * (kf + T::one()) > q {
            break;
        }
    }
    sum
}

fn series<T: Real>(nu: T, x: T, max_terms: usize) -> T {
    if x == T::zero() {
        return if nu == T::zero() { T::one() } else { T::zero() };
    }
    let scaled = bessel_j_scaled_series(nu, x, max_terms);
    let log_pref = nu * (x * T::lit(0.5)).ln();
    scaled * log_pref.exp()
}

fn hankel<T: Real>(nu: T, x: T, max_terms: usize) -> T {
    let mu = T::lit(4.0) * nu * nu;
    let eight_x = T::lit(8.0) * x;
    let mut p = T::one();
    let mut q = T::zero();
    let mut term = T::one();
    let mut last = T::infinity();
    for k in 1..max_terms {
        let kf = T::from_count(k);
        let odd = T::lit(2.0) * kf - T::one();
        term = term * (mu - odd * odd) / (kf * eight_x);
        let mag = term.abs();
        if mag > last {
            break;
        }
        last = mag;
        // signs: P = a0 - a2 + a4 - ..., Q = a1 - a3 + ...
        match k % 4 {
            1 => q = q + term,
            2 => p = p - term,
            3 => q = q - term,
            _ => p = p + term,
        }
        if mag <= T::epsilon() * T::lit(1e-2) {
            break;
        }
    }
    let chi = x - (nu * T::lit(0.5) + T::lit(0.25)) * T::PI();
    (T::lit(2.0) / (T::PI() * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Miller backward recurrence; returns `(J_ν(x), J_{ν+1}(x))`.
fn miller<T: Real>(nu: T, x: T) -> (T, T) {
    let n = nu.floor();
    let frac = nu - n;
    let n_idx = n.to_usize().unwrap_or(0);
    let reach = nu.max(x);
    let extra = (T::lit(4.0) * reach.sqrt()).ceil() + T::lit(40.0);
    let mut m = (reach + extra).ceil().to_usize().unwrap_or(n_idx + 60).max(n_idx + 2);
    if m % 2 == 1 {
        m += 1;
    }

    // normalisation weights w_k = (frac + 2k) Γ(frac + k) / k!
    let half_m = m / 2;
    let mut weights = Vec::with_capacity(half_m + 1);
    weights.push(gamma_unchecked(frac + T::one()));
    let mut g = gamma_unchecked(frac + T::one()); // Γ(frac + 1) / 1!
    for k in 1..=half_m {
        let kf = T::from_count(k);
        if k > 1 {
            g = g * (frac + kf - T::one()) / kf;
        }
        weights.push((frac + T::lit(2.0) * kf) * g);
    }

    let big = T::max_value().sqrt();
    let rescale = T::one() / big;
    let two_over_x = T::lit(2.0) / x;
    let mut f_next = T::zero(); // f_{j+1}
    let mut f_cur = T::min_positive_value().sqrt(); // f_j, j = m
    let mut sum = T::zero();
    let mut jn = T::zero();
    let mut jn1 = T::zero();
    let mut j = m;
    loop {
        if j == n_idx {
            jn = f_cur;
        }
        if j == n_idx + 1 {
            jn1 = f_cur;
        }
        if j % 2 == 0 {
            sum = sum + weights[j / 2] * f_cur;
        }
        if j == 0 {
            break;
        }
        let order = frac + T::from_count(j);
        let f_prev = order * two_over_x * f_cur - f_next;
        f_next = f_cur;
        f_cur = f_prev;
        j -= 1;
        if f_cur.abs() > big {
            f_cur = f_cur * rescale;
            f_next = f_next * rescale;
            sum = sum * rescale;
            jn = jn * rescale;
            jn1 = jn1 * rescale;
        }
    }
    let scale = (x * T::lit(0.5)).powf(frac) / sum;
    (jn * scale, jn1 * scale)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Regime {
    Series,
    Hankel,
    Recurrence,
}

fn regime<T: Real>(nu: T, x: T, cfg: &SpecFunConfig<T>) -> Regime {
    if x <= cfg.series_cutoff || x * x <= T::lit(8.0) * (nu + T::one()) {
        Regime::Series
    } else if x >= cfg.asymptotic_cutoff && x >= nu * nu {
        Regime::Hankel
    } else {
        Regime::Recurrence
    }
}

fn j_raw<T: Real>(nu: T, x: T, cfg: &SpecFunConfig<T>) -> T {
    match regime(nu, x, cfg) {
        Regime::Series => series(nu, x, cfg.max_terms),
        Regime::Hankel => hankel(nu, x, cfg.max_terms),
        Regime::Recurrence => miller(nu, x).0,
    }
}

/// `(J_ν(x), J_{ν+1}(x))` with the shared recurrence when possible.
pub(crate) fn j_pair_raw<T: Real>(nu: T, x: T, cfg: &SpecFunConfig<T>) -> (T, T) {
    if regime(nu, x, cfg) == Regime::Recurrence && regime(nu + T::one(), x, cfg) == Regime::Recurrence {
        miller(nu, x)
    } else {
        (j_raw(nu, x, cfg), j_raw(nu + T::one(), x, cfg))
    }
}

/// Bessel function of the first kind `J_ν(x)` with the default configuration.
pub fn bessel_j<T: Real>(nu: T, x: T) -> Result<T> {
    bessel_j_with(nu, x, &SpecFunConfig::default())
}

pub fn bessel_j_with<T: Real>(nu: T, x: T, cfg: &SpecFunConfig<T>) -> Result<T> {
    check_order(nu, x)?;
    Ok(j_raw(nu, x, cfg))
}

/// `J'_ν(x) = (ν/x) J_ν(x) − J_{ν+1}(x)`.
pub fn bessel_j_deriv<T: Real>(nu: T, x: T) -> Result<T> {
    bessel_j_deriv_with(nu, x, &SpecFunConfig::default())
}

pub fn bessel_j_deriv_with<T: Real>(nu: T, x: T, cfg: &SpecFunConfig<T>) -> Result<T> {
    check_order(nu, x)?;
    if x == T::zero() {
        if nu < T::one() {
            return Err(Error::Domain(format!("J'_ν(0) requested for ν = {nu} < 1")));
        }
        return Ok(if nu == T::one() { T::lit(0.5) } else { T::zero() });
    }
    let (j, j1) = j_pair_raw(nu, x, cfg);
    Ok(nu / x * j - j1)
}

/// The ℓ-th positive root `j_{ν,ℓ}` of `J_ν`.
pub fn bessel_j_root<T: Real>(nu: T, l: usize) -> Result<T> {
    bessel_j_root_with(nu, l, &SpecFunConfig::default())
}

pub fn bessel_j_root_with<T: Real>(nu: T, l: usize, cfg: &SpecFunConfig<T>) -> Result<T> {
    check_order(nu, T::zero())?;
    if l == 0 {
        return Err(Error::Domain("root index starts at 1".into()));
    }
    // j_{ν,1} > ν, and consecutive roots are at least ~π apart
    let start = nu.max(T::one());
    let step = T::FRAC_PI_4();
    let brackets = scan_sign_changes(|z| j_raw(nu, z, cfg), start, step, l, 40 * l + 400)?;
    let (lo, hi) = brackets[l - 1];
    refine_root(
        |z| {
            let (j, j1) = j_pair_raw(nu, z, cfg);
            (j, nu / z * j - j1)
        },
        lo,
        hi,
        T::lit(1e-3),
        cfg.root_tol,
    )
}
