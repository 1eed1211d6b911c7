mod common;

use common::{bessel_root_oracle, simpson_adaptive};
use neumann_radial::scalar::sphere_area;
use neumann_radial::specfun::{bessel_j, bessel_j_root};
use neumann_radial::spectrum::{char_root, radial_eigenvalue, spectrum_list, RadialEigenfunction};
use proptest::prelude::*;

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    assert!(fa * f(b) < 0.0);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if f(m) * fa > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[test]
fn char_root_examples() {
    // tan z = z, written without poles
    let oracle = bisect(|z| z * z.cos() - z.sin(), 4.0, 4.7);
    assert!((char_root::<f64>(3, 0, 1).unwrap() - oracle).abs() < 1e-10);
    assert!((oracle - 4.493_409_457_9).abs() < 1e-10);
    let j2 = bessel_root_oracle(4, 1);
    assert!((char_root::<f64>(4, 0, 1).unwrap() - j2).abs() < 1e-10);
    assert!((j2 - 5.135_622_301_9).abs() < 1e-10);
    // N = 3, k = 1: stationary point of the spherical Bessel j_1, tan z = 2z/(2 − z²)
    let oracle = bisect(|z| (2.0 - z * z) * z.sin() - 2.0 * z * z.cos(), 1.5, 2.5);
    let z = char_root::<f64>(3, 1, 1).unwrap();
    assert!((z - oracle).abs() < 1e-10);
    let lam2 = (z / 2.0).powi(2);
    assert!((2.0 + lam2 - 3.083_240).abs() < 1e-4, "2 + λ₂(B₂) = {}", 2.0 + lam2);
}

#[test]
fn no_root_below_scan_start() {
    // brute-force fine scan from the origin finds the same first root
    for dim in 2..=7 {
        for k in 1..=4 {
            let nu = k as f64 + (dim as f64 - 2.0) / 2.0;
            let f = |z: f64| k as f64 * bessel_j(nu, z).unwrap() - z * bessel_j(nu + 1.0, z).unwrap();
            let mut z = 1e-3;
            let h = 1e-3;
            while f(z) * f(z + h) > 0.0 {
                z += h;
            }
            let brute = bisect(f, z, z + h);
            let got = char_root::<f64>(dim, k, 1).unwrap();
            assert!((got - brute).abs() < 1e-9, "N = {dim}, k = {k}: {got} vs {brute}");
        }
    }
}

#[test]
fn radial_eigenvalue_examples() {
    assert_eq!(radial_eigenvalue::<f64>(3, 2.0, 1).unwrap(), 0.0);
    let lam = radial_eigenvalue::<f64>(2, 4.0, 2).unwrap();
    assert!((2.0 + lam - 2.92).abs() < 5e-3);
    assert!((lam - 0.91766).abs() < 1e-4);
    let z = bessel_root_oracle(2, 1);
    assert!((lam - z * z / 16.0).abs() < 1e-11);
    assert!((radial_eigenvalue::<f64>(4, 9.0, 4).unwrap() - 1.66692).abs() < 1e-5);
}

#[test]
fn spectrum_list_examples() {
    let one = spectrum_list::<f64>(5, 3.0, 1).unwrap();
    assert_eq!(one.len(), 1);
    assert_eq!(one[0].lambda, 0.0);
    assert_eq!(one[0].multiplicity, 1);
    let two = spectrum_list::<f64>(3, 2.0, 2).unwrap();
    assert_eq!(two[1].k, 1);
    assert_eq!(two[1].multiplicity, 3);
    assert!((two[1].lambda - 1.083_240).abs() < 1e-6);
    let list = spectrum_list::<f64>(4, 4.0, 8).unwrap();
    let pos = list.iter().position(|r| (2.0 + r.lambda - 3.64841).abs() < 1e-5).unwrap();
    assert_eq!(pos, 4, "2 + λ₂^rad should be 2 + λ₅");
    assert!(list[pos].is_radial && list[pos].k == 0);
    let n4r3 = spectrum_list::<f64>(4, 3.0, 2).unwrap();
    assert!((2.0 + n4r3[1].lambda - 2.58773).abs() < 1e-4);
}

#[test]
fn spectrum_list_is_complete_and_sorted() {
    // compare with a brute-force enumeration over a generous (k, ℓ) box
    for dim in 2..=5 {
        let radius = 3.0;
        let list = spectrum_list::<f64>(dim, radius, 15).unwrap();
        let mut brute = vec![0.0];
        for k in 0..12 {
            for l in 1..12 {
                let z = char_root::<f64>(dim, k, l).unwrap();
                brute.push(z * z / (radius * radius));
            }
        }
        brute.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (rec, b) in list.iter().zip(&brute) {
            assert!((rec.lambda - b).abs() < 1e-12);
        }
        assert!(list.windows(2).all(|w| w[0].lambda <= w[1].lambda));
    }
}

#[test]
fn k_zero_roots_are_bessel_roots() {
    for dim in 2..=7 {
        for l in 1..=6 {
            let a = char_root::<f64>(dim, 0, l).unwrap();
            let b = bessel_j_root(dim as f64 / 2.0, l).unwrap();
            assert!((a - b).abs() <= 1e-12);
        }
    }
}

#[test]
fn monotone_in_l_and_k() {
    for dim in [2, 3, 4, 7] {
        for k in 0..=4 {
            for l in 1..=6 {
                let z = char_root::<f64>(dim, k, l).unwrap();
                assert!(z < char_root::<f64>(dim, k, l + 1).unwrap());
                // along k the radial ladder starts with the constant mode, so
                // compare λ^rad_ℓ (λ^rad_1 = 0) with the k = 1 ladder
                let lower = if k == 0 { radial_eigenvalue::<f64>(dim, 1.0, l).unwrap().sqrt() } else { z };
                assert!(lower < char_root::<f64>(dim, k + 1, l).unwrap(), "N = {dim}, k = {k}, l = {l}");
            }
        }
    }
}

fn ball_inner(f: &RadialEigenfunction<f64>, g: &RadialEigenfunction<f64>) -> f64 {
    let wd = f.dim as i32 - 1;
    let h = |r: f64| f.eval(r).unwrap() * g.eval(r).unwrap() * r.powi(wd);
    // split into pieces so the adaptive Simpson sees smooth panels
    let pieces = 16;
    let mut s = 0.0;
    for j in 0..pieces {
        let a = f.radius * j as f64 / pieces as f64;
        let b = f.radius * (j + 1) as f64 / pieces as f64;
        s += simpson_adaptive(&h, a, b, 1e-14);
    }
    sphere_area::<f64>(f.dim) * s
}

#[test]
fn eigenfunctions_are_orthonormal() {
    for dim in [2, 3, 5] {
        let radius = 4.0;
        let phis: Vec<_> = (1..=6).map(|i| RadialEigenfunction::new(dim, radius, i).unwrap()).collect();
        for (a, fa) in phis.iter().enumerate() {
            for fb in &phis[a..] {
                let v = ball_inner(fa, fb);
                let expect = if fa.index == fb.index { 1.0 } else { 0.0 };
                assert!((v - expect).abs() <= 1e-9, "N = {dim}, ({}, {}): {v}", fa.index, fb.index);
            }
        }
    }
}

#[test]
fn normalisation_matches_closed_form() {
    for dim in 2..=7 {
        for i in 2..=6 {
            let phi = RadialEigenfunction::<f64>::new(dim, 2.5, i).unwrap();
            let c = phi.norm_const();
            let cf = phi.norm_const_closed_form().unwrap();
            assert!((c - cf).abs() <= 1e-10 * cf, "N = {dim}, i = {i}: {c} vs {cf}");
        }
    }
}

#[test]
fn zeros_neumann_condition_and_sign() {
    for dim in [2, 3, 4, 6] {
        for i in 2..=6 {
            let phi = RadialEigenfunction::<f64>::new(dim, 4.0, i).unwrap();
            assert!(phi.eval(0.0).unwrap() > 0.0);
            assert!(phi.deriv(4.0).unwrap().abs() < 1e-9);
            let n = 20000;
            let mut changes = 0;
            let mut prev = phi.eval(0.0).unwrap();
            for j in 1..=n {
                let v = phi.eval(4.0 * j as f64 / n as f64).unwrap();
                if v * prev < 0.0 {
                    changes += 1;
                }
                prev = v;
            }
            assert_eq!(changes, i - 1);
            assert_eq!(phi.zero_count(), i - 1);
            assert!((phi.sup_norm() - phi.eval(0.0).unwrap()).abs() < 1e-15);
        }
    }
    assert!(RadialEigenfunction::new(3, 4.0, 2).unwrap().eval(4.5).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvalue_scaling(dim in 2usize..8, i in 2usize..7, r in 0.3f64..12.0) {
        let a = radial_eigenvalue::<f64>(dim, r, i).unwrap() * r * r;
        let b = radial_eigenvalue::<f64>(dim, 1.0, i).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * b);
    }

    #[test]
    fn eigenfunction_derivative_matches_difference(dim in 2usize..8, i in 2usize..6, t in 0.01f64..0.99) {
        let phi = RadialEigenfunction::new(dim, 3.0, i).unwrap();
        let r = 3.0 * t;
        let h = 1e-5;
        let fd = (phi.eval(r + h).unwrap() - phi.eval(r - h).unwrap()) / (2.0 * h);
        prop_assert!((phi.deriv(r).unwrap() - fd).abs() < 1e-7);
    }

    #[test]
    fn eigenfunction_solves_helmholtz(dim in 2usize..8, i in 2usize..6, t in 0.05f64..0.95) {
        // φ'' + (N−1)/r φ' + λ φ = 0, φ'' by central differences of φ'
        let phi = RadialEigenfunction::new(dim, 3.0, i).unwrap();
        let r = 3.0 * t;
        let h = 1e-5;
        let d2 = (phi.deriv(r + h).unwrap() - phi.deriv(r - h).unwrap()) / (2.0 * h);
        let res = d2 + (dim as f64 - 1.0) / r * phi.deriv(r).unwrap() + phi.lambda * phi.eval(r).unwrap();
        prop_assert!(res.abs() < 1e-6 * (1.0 + phi.lambda));
    }
}
