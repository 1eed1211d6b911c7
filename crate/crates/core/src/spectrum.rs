//! Neumann spectrum of −Δ on the ball B_R ⊂ ℝ^N.
//!
//! Separating variables, an eigenfunction of angular degree k is
//! `r^{-(N-2)/2} J_ν(√λ r) Y_k(x/r)` with `ν = k + (N-2)/2`, and the Neumann
//! condition turns into `k J_ν(z) − z J_{ν+1}(z) = 0` for `z = √λ R`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{integrate_pieces, QuadOptions};
use crate::roots::{refine_root, scan_sign_changes};
use crate::scalar::{sphere_area, Real};
use crate::specfun::{bessel_j_root, bessel_j_scaled_series, j_pair_raw, SpecFunConfig};

/// One Neumann eigenvalue with its separation data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueRecord<T> {
    /// Angular degree.
    pub k: usize,
    /// Radial index; `0` only for the constant mode `λ = 0`.
    pub l: usize,
    pub z: T,
    pub lambda: T,
    pub multiplicity: u64,
    pub is_radial: bool,
}

impl<T: Real> EigenvalueRecord<T> {
    /// Bifurcation exponent `2 + λ` of the pure-power problem.
    pub fn p_threshold(&self) -> T {
        T::lit(2.0) + self.lambda
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * (n - j) as u128 / (j + 1) as u128;
    }
    acc as u64
}

/// Dimension of the space of degree-k spherical harmonics in ℝ^N.
pub fn multiplicity(dim: usize, k: usize) -> u64 {
    let (n, k) = (dim as u64, k as u64);
    match k {
        0 => 1,
        1 => n,
        _ => binomial(n + k - 1, k) - binomial(n + k - 3, k - 2),
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::Domain(format!("dimension must be >= 2, got {dim}")));
    }
    Ok(())
}

/// `ν = k + (N−2)/2`.
#[inline]
pub fn bessel_order<T: Real>(dim: usize, k: usize) -> T {
    T::from_count(k) + (T::from_count(dim) - T::lit(2.0)) * T::lit(0.5)
}

/// ℓ-th positive root of `k J_ν(z) − z J_{ν+1}(z)`.
pub fn char_root<T: Real>(dim: usize, k: usize, l: usize) -> Result<T> {
    check_dim(dim)?;
    if l == 0 {
        return Err(Error::Domain("radial index starts at 1".into()));
    }
    let nu = bessel_order::<T>(dim, k);
    if k == 0 {
        return bessel_j_root(nu + T::one(), l);
    }
    let cfg = SpecFunConfig::<T>::default();
    let kf = T::from_count(k);
    let charf = |z: T| {
        let (j, j1) = j_pair_raw(nu, z, &cfg);
        kf * j - z * j1
    };
    // z² > k(k+N−2) for every root, so the scan can start there
    let start = (kf * (kf + T::from_count(dim) - T::lit(2.0))).sqrt() * (T::one() - T::lit(1e-9));
    let brackets = scan_sign_changes(charf, start, T::FRAC_PI_4() * T::lit(0.5), l, 80 * l + 800)?;
    let (lo, hi) = brackets[l - 1];
    refine_root(
        |z| {
            let (j, j1) = j_pair_raw(nu, z, &cfg);
            let (j2, _) = j_pair_raw(nu + T::lit(2.0), z, &cfg);
            // d/dz: k J_ν' − J_{ν+1} − z J_{ν+1}', using J_ν' = (ν/z)J_ν − J_{ν+1}
            // and z J_{ν+1}' = (ν+1) J_{ν+1} − z J_{ν+2}
            let dj = nu / z * j - j1;
            let d = kf * dj - j1 - ((nu + T::one()) * j1 - z * j2);
            (kf * j - z * j1, d)
        },
        lo,
        hi,
        T::lit(1e-3),
        cfg.root_tol,
    )
}

/// i-th eigenvalue of −Δ on radial functions (`λ₁ = 0`).
pub fn radial_eigenvalue<T: Real>(dim: usize, radius: T, i: usize) -> Result<T> {
    check_dim(dim)?;
    if i == 0 {
        return Err(Error::Domain("eigenvalue index starts at 1".into()));
    }
    if !(radius > T::zero()) {
        return Err(Error::Domain(format!("radius must be positive, got {radius}")));
    }
    if i == 1 {
        return Ok(T::zero());
    }
    let z = char_root::<T>(dim, 0, i - 1)?;
    Ok(z * z / (radius * radius))
}

fn record<T: Real>(dim: usize, radius: T, k: usize, l: usize) -> Result<EigenvalueRecord<T>> {
    let z = char_root::<T>(dim, k, l)?;
    Ok(EigenvalueRecord { k, l, z, lambda: z * z / (radius * radius), multiplicity: multiplicity(dim, k), is_radial: k == 0 })
}

/// The `count` smallest Neumann eigenvalues (each (k, ℓ) pair listed once with
/// its multiplicity), ascending with ties broken by `(k, ℓ)`.
pub fn spectrum_list<T: Real>(dim: usize, radius: T, count: usize) -> Result<Vec<EigenvalueRecord<T>>> {
    check_dim(dim)?;
    if count == 0 {
        return Err(Error::Domain("count must be >= 1".into()));
    }
    if !(radius > T::zero()) {
        return Err(Error::Domain(format!("radius must be positive, got {radius}")));
    }
    let mut all = vec![EigenvalueRecord {
        k: 0,
        l: 0,
        z: T::zero(),
        lambda: T::zero(),
        multiplicity: 1,
        is_radial: true,
    }];
    let need = count - 1;
    if need > 0 {
        let mut k = 0;
        loop {
            let first = record(dim, radius, k, 1)?;
            if all.len() >= count {
                let mut sorted: Vec<T> = all.iter().map(|r| r.lambda).collect();
                sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
                if first.lambda > sorted[count - 1] {
                    break;
                }
            }
            all.push(first);
            for l in 2..=need {
                all.push(record(dim, radius, k, l)?);
            }
            k += 1;
        }
    }
    all.sort_by(|a, b| a.lambda.partial_cmp(&b.lambda).unwrap().then(a.k.cmp(&b.k)).then(a.l.cmp(&b.l)));
    all.truncate(count);
    Ok(all)
}

/// L²(B_R)-normalised radial eigenfunction `φ_i`, positive at the centre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialEigenfunction<T> {
    pub dim: usize,
    pub radius: T,
    pub index: usize,
    pub lambda: T,
    nu: T,
    sqrt_lambda: T,
    norm: T,
}

impl<T: Real> RadialEigenfunction<T> {
    pub fn new(dim: usize, radius: T, index: usize) -> Result<Self> {
        let lambda = radial_eigenvalue(dim, radius, index)?;
        let nu = bessel_order::<T>(dim, 0);
        let area = sphere_area::<T>(dim);
        let mut out = Self { dim, radius, index, lambda, nu, sqrt_lambda: lambda.sqrt(), norm: T::one() };
        if index == 1 {
            let vol = area * radius.powi(dim as i32) / T::from_count(dim);
            out.norm = vol.sqrt().recip();
            return Ok(out);
        }
        // split the quadrature at the interior zeros of J_ν(√λ r)
        let mut breaks = vec![T::zero()];
        for m in 1..index {
            let r = bessel_j_root::<T>(nu, m)? / out.sqrt_lambda;
            if r < radius {
                breaks.push(r);
            }
        }
        breaks.push(radius);
        let wdim = dim as i32 - 1;
        let sq = integrate_pieces(
            |r: T| {
                let v = out.shape(r);
                v * v * r.powi(wdim)
            },
            &breaks,
            &QuadOptions::tol(T::lit(1e-300).max(T::min_positive_value()), T::lit(1e-13).max(T::epsilon() * T::lit(8.0))),
        )?;
        out.norm = (area * sq).sqrt().recip();
        Ok(out)
    }

    /// Unnormalised `r^{-ν} J_ν(√λ r)`, with the limit at `r = 0`.
    fn shape(&self, r: T) -> T {
        let x = self.sqrt_lambda * r;
        let cfg = SpecFunConfig::<T>::default();
        let pre = (self.sqrt_lambda * T::lit(0.5)).powf(self.nu);
        if x < T::one() {
            pre * bessel_j_scaled_series(self.nu, x, cfg.max_terms)
        } else {
            let (j, _) = j_pair_raw(self.nu, x, &cfg);
            j / r.powf(self.nu)
        }
    }

    /// `r^{-ν} J_{ν+1}(√λ r)`, which vanishes at the centre.
    fn shape_next(&self, r: T) -> T {
        let x = self.sqrt_lambda * r;
        let cfg = SpecFunConfig::<T>::default();
        if x < T::one() {
            let pre = (self.sqrt_lambda * T::lit(0.5)).powf(self.nu) * x * T::lit(0.5);
            pre * bessel_j_scaled_series(self.nu + T::one(), x, cfg.max_terms)
        } else {
            let (_, j1) = j_pair_raw(self.nu, x, &cfg);
            j1 / r.powf(self.nu)
        }
    }

    fn check_r(&self, r: T) -> Result<()> {
        let slack = self.radius * T::epsilon() * T::lit(16.0);
        if !(r >= T::zero() && r <= self.radius + slack) {
            return Err(Error::Domain(format!("radius {r} outside [0, {}]", self.radius)));
        }
        Ok(())
    }

    pub fn eval(&self, r: T) -> Result<T> {
        self.check_r(r)?;
        if self.index == 1 {
            return Ok(self.norm);
        }
        Ok(self.norm * self.shape(r))
    }

    /// `φ_i'(r) = −c √λ r^{-ν} J_{ν+1}(√λ r)`.
    pub fn deriv(&self, r: T) -> Result<T> {
        self.check_r(r)?;
        if self.index == 1 {
            return Ok(T::zero());
        }
        Ok(-self.norm * self.sqrt_lambda * self.shape_next(r))
    }

    /// Normalisation constant `c_i`.
    pub fn norm_const(&self) -> T {
        self.norm
    }

    /// Closed-form normalisation: the weight `r^{-2ν} r^{N-1}` equals `r`, so
    /// `∫₀^R J_ν(√λ r)² r dr = (R²/2)(J_ν(z)² − J_{ν−1}(z)J_{ν+1}(z))`.
    pub fn norm_const_closed_form(&self) -> Result<T> {
        if self.index == 1 {
            return Ok(self.norm);
        }
        let cfg = SpecFunConfig::<T>::default();
        let z = self.sqrt_lambda * self.radius;
        let (j, j1) = j_pair_raw(self.nu, z, &cfg);
        let jm = if self.nu >= T::one() {
            j_pair_raw(self.nu - T::one(), z, &cfg).0
        } else {
            // J_{ν−1} = (2ν/z) J_ν − J_{ν+1} also covers ν = 0 and ν = 1/2
            T::lit(2.0) * self.nu / z * j - j1
        };
        // substituting t = √λ r gives (1/λ)∫₀^z J_ν(t)² t dt
        let integral = z * z * T::lit(0.5) * (j * j - jm * j1) / self.lambda;
        let area = sphere_area::<T>(self.dim);
        Ok((area * integral).sqrt().recip())
    }

    /// `max |φ_i|`, attained at the centre.
    pub fn sup_norm(&self) -> T {
        self.norm * self.shape(T::zero()).abs()
    }

    /// Number of sign changes on `(0, R)`; equals `i − 1`.
    pub fn zero_count(&self) -> usize {
        (1..self.index).filter(|&m| {
            bessel_j_root::<T>(self.nu, m).map(|z| z / self.sqrt_lambda < self.radius).unwrap_or(false)
        }).count()
    }
}
