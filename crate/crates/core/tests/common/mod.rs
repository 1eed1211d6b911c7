//! Test-only oracles that share no code path with the library.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

const DIGITS: u32 = 160;

fn pow10(d: u32) -> BigInt {
    BigInt::from(10u32).pow(d)
}

fn big_to_f64_scaled(s: &BigInt, digits: u32) -> f64 {
    // s / 10^digits with ~17 significant digits
    let text = s.abs().to_string();
    let len = text.len() as i64;
    let keep = len.min(30) as usize;
    let mantissa: f64 = text[..keep].parse().unwrap();
    let exp10 = len - keep as i64 - digits as i64;
    let v = mantissa * 10f64.powi(exp10 as i32);
    if s.is_negative() {
        -v
    } else {
        v
    }
}

/// Exact-rational power series for `J_ν(p/q)` with `ν = twice_nu / 2`, evaluated
/// in fixed point with 160 guard digits. Returns `(sign, value)`.
pub fn bessel_j_series_oracle(twice_nu: u32, p: u64, q: u64) -> f64 {
    let sum = scaled_sum(twice_nu, p, q);
    let x = p as f64 / q as f64;
    let n = twice_nu / 2;
    let mut pref = (x / 2.0).powi(n as i32);
    if twice_nu % 2 == 1 {
        pref *= (x / (2.0 * std::f64::consts::PI)).sqrt();
    }
    pref * big_to_f64_scaled(&sum, DIGITS)
}

/// Sign of `J_ν(p/q)` from the exact series.
pub fn bessel_j_sign_oracle(twice_nu: u32, p: &BigInt, q: &BigInt) -> i32 {
    let sum = scaled_sum_big(twice_nu, p, q);
    if sum.is_zero() {
        0
    } else if sum.is_negative() {
        -1
    } else {
        1
    }
}

fn scaled_sum(twice_nu: u32, p: u64, q: u64) -> BigInt {
    scaled_sum_big(twice_nu, &BigInt::from(p), &BigInt::from(q))
}

fn scaled_sum_big(twice_nu: u32, p: &BigInt, q: &BigInt) -> BigInt {
    let n = (twice_nu / 2) as u64;
    let half = twice_nu % 2 == 1;
    let scale = pow10(DIGITS);
    let mut term = if half {
        // √π / Γ(n + 3/2) = 4^{n+1} (n+1)! / (2n+2)!
        let m = n + 1;
        let mut num = BigInt::from(4u32).pow(m as u32);
        for i in 1..=m {
            num *= i;
        }
        let mut den = BigInt::one();
        for i in 1..=(2 * m) {
            den *= i;
        }
        scale * num / den
    } else {
        let mut den = BigInt::one();
        for i in 1..=n {
            den *= i;
        }
        scale / den
    };
    let p2 = p * p;
    let q2 = q * q;
    let mut sum = term.clone();
    let x_approx = p.to_f64().unwrap() / q.to_f64().unwrap();
    let mut k: u64 = 1;
    loop {
        let den = if half {
            // (x²/4) / (k (k + n + 1/2)) = p² / (2 q² k (2k + 2n + 1))
            &q2 * BigInt::from(2 * k * (2 * k + 2 * n + 1))
        } else {
            &q2 * BigInt::from(4 * k * (k + n))
        };
        term = -(term * &p2) / den;
        sum += &term;
        if term.is_zero() && (k as f64) > x_approx {
            break;
        }
        k += 1;
        assert!(k < 5000, "oracle series did not terminate");
    }
    sum
}

/// ℓ-th positive root of `J_ν` by bisection on the sign of the exact series,
/// scanning from `start` in steps of `step`.
pub fn bessel_root_oracle(twice_nu: u32, l: usize) -> f64 {
    // dyadic grid with denominator 2^60
    let denom_bits = 60u32;
    let q = BigInt::one() << denom_bits;
    let to_big = |x: f64| BigInt::from((x * 2f64.powi(20)).round() as i64) << (denom_bits - 20);
    let mut x = (twice_nu as f64 / 2.0).max(1.0);
    let step = 0.1;
    let mut found = 0;
    let mut s_prev = bessel_j_sign_oracle(twice_nu, &to_big(x), &q);
    loop {
        let xn = x + step;
        let s = bessel_j_sign_oracle(twice_nu, &to_big(xn), &q);
        if s != s_prev {
            found += 1;
            if found == l {
                let mut lo = to_big(x);
                let mut hi = to_big(xn);
                let s_lo = s_prev;
                for _ in 0..56 {
                    let mid: BigInt = (&lo + &hi) >> 1;
                    let sm = bessel_j_sign_oracle(twice_nu, &mid, &q);
                    if sm == s_lo {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let mid: BigInt = (&lo + &hi) >> 1;
                return mid.to_f64().unwrap() / 2f64.powi(denom_bits as i32);
            }
        }
        s_prev = s;
        x = xn;
    }
}

/// Adaptive Simpson used only by tests as an independent quadrature.
pub fn simpson_adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    // a fixed pre-split guards against early exits on symmetric integrands
    let pieces = 64;
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|k| {
            let (lo, hi) = (a + k as f64 * h, if k + 1 == pieces { b } else { a + (k + 1) as f64 * h });
            let (fa, fb) = (f(lo), f(hi));
            let fm = f(0.5 * (lo + hi));
            let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
            rec(f, lo, hi, fa, fm, fb, whole, tol / pieces as f64, 50)
        })
        .sum()
}

/// Classical RK4 on `u'' + (N−1)/r u' = g(u)` with a tiny fixed step and a
/// second-order series start. Slow but independent of the library integrator.
pub fn rk4_radial(dim: usize, g: &dyn Fn(f64) -> f64, gamma: f64, r_end: f64, n: usize) -> (f64, f64) {
    let r0 = 1e-6;
    let a = g(gamma) / (2.0 * dim as f64);
    let mut y = [gamma + a * r0 * r0, 2.0 * a * r0];
    let h = (r_end - r0) / n as f64;
    let c = dim as f64 - 1.0;
    let f = |r: f64, y: [f64; 2]| [y[1], g(y[0]) - c / r * y[1]];
    let mut r = r0;
    for _ in 0..n {
        let k1 = f(r, y);
        let k2 = f(r + h / 2.0, [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]]);
        let k3 = f(r + h / 2.0, [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]]);
        let k4 = f(r + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        for i in 0..2 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        r += h;
    }
    (y[0], y[1])
}

/// Plain f64 ascending series for `J_ν(x)` with `2ν` integral; adequate for `x ≲ 10`.
pub fn bessel_j_float(nu: f64, x: f64) -> f64 {
    let twice = (2.0 * nu).round() as u32;
    // Γ(ν + 1) from Γ(1) = 1 or Γ(1/2) = √π by the recurrence
    let mut gamma = if twice % 2 == 0 { 1.0 } else { std::f64::consts::PI.sqrt() };
    let mut s = if twice % 2 == 0 { 1.0 } else { 0.5 };
    while s < nu + 1.0 - 1e-9 {
        gamma *= s;
        s += 1.0;
    }
    let h = 0.5 * x;
    let mut term = h.powf(nu) / gamma;
    let mut sum = term;
    for k in 1..200 {
        term *= -h * h / (k as f64 * (k as f64 + nu));
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}
