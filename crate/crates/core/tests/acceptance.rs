//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use common::simpson_adaptive;
use neumann_radial::analysis::{
    coeff_b_radial_paths, coeff_c_1d, coeff_c_nonradial_first, j_cubed_tail, lemma_integral_scan, nonradial_data,
};
use neumann_radial::continuation::{bifurcation_points_eps, bifurcation_points_p, trace_branch, Branch, StepControl};
use neumann_radial::radial_ode::{integrate_ivp, ProblemSpec, RadialProfile, SumOfPowers};
use neumann_radial::scalar::sphere_area;
use neumann_radial::shooting::{find_solutions, time_map, ScanOptions, ShootOptions, Sign, SolutionType};
use neumann_radial::spectrum::{radial_eigenvalue, spectrum_list, RadialEigenfunction};
use neumann_radial::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Failures collected by one criterion.
#[derive(Default)]
struct Check {
    failures: Vec<String>,
}

impl Check {
    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn criterion_1(c: &mut Check) {
    for (dim, want) in [(2, 2.92), (3, 3.26), (4, 3.65)] {
        let got = 2.0 + radial_eigenvalue::<f64>(dim, 4.0, 2).unwrap();
        c.require((got - want).abs() <= 5e-3, || format!("N={dim} R=4: 2+λ₂ = {got:.6}, want {want}"));
    }
    let got = bifurcation_points_p(4, 9.0_f64, 5).unwrap();
    for (k, (g, w)) in got.iter().zip([2.32561, 2.87469, 3.66692, 4.70272, 5.98216]).enumerate() {
        c.require((g - w).abs() <= 1e-4, || format!("N=4 R=9 i={}: {g:.6}, want {w}", k + 2));
    }
}

fn criterion_2(c: &mut Check) {
    for (dim, radius, want) in [(3, 2.0, 3.083240), (4, 3.0, 2.58773)] {
        let got = 2.0 + spectrum_list::<f64>(dim, radius, 2).unwrap()[1].lambda;
        c.require((got - want).abs() <= 1e-4, || format!("N={dim} R={radius}: 2+λ₂ = {got:.6}, want {want}"));
    }
}

fn two_types(dim: usize, p: f64, sign: Sign) -> Vec<RadialProfile<f64>> {
    let pr = ProblemSpec::power(dim, 4.0, p).unwrap();
    let want = SolutionType::new(2, sign).unwrap();
    find_solutions(&pr, sign, Some(want), &ScanOptions::default(), &ShootOptions::default()).unwrap()
}

fn compare_row(c: &mut Check, tag: &str, u: Option<&RadialProfile<f64>>, want: [f64; 3]) {
    let Some(u) = u else {
        c.failures.push(format!("{tag}: solution not found"));
        return;
    };
    for (name, got, w) in [("min", u.min_u(), want[0]), ("max", u.max_u(), want[1]), ("E", u.energy, want[2])] {
        c.require(rel(got, w) <= 0.02, || format!("{tag} {name} u = {got:.6}, table {w}"));
    }
}

fn criterion_3(c: &mut Check) {
    // (N, E(1), min u₁, max u₁, E(u₁), min u₂, max u₂, E(u₂))
    let below = [
        (2, 7.604, [0.447, 2.05, 7.45], [0.915, 1.202, 7.606]),
        (3, 50.576, [0.130, 4.05, 34.85], [0.979, 1.095, 50.578]),
        (4, 280.581, [0.016, 13.3, 66.39], [0.999, 1.00003, 280.581]),
    ];
    let above = [
        (2, 8.48, [0.76, 1.09, 8.47], [0.261, 2.25, 7.39]),
        (3, 54.30, [0.85, 1.03, 54.29], [0.092, 4.12, 30.74]),
        (4, 294.63, [0.90, 1.01, 294.62], [0.008, 17.25, 49.61]),
    ];
    for (dim, e1, u1, u2) in below {
        let p = 1.95 + radial_eigenvalue::<f64>(dim, 4.0, 2).unwrap();
        let e = ProblemSpec::power(dim, 4.0, p).unwrap().constant_energy();
        c.require(rel(e, e1) <= 1e-3, || format!("N={dim} p=1.95+λ₂: E(1) = {e:.4}, table {e1}"));
        // u₁ is the far decreasing solution, u₂ the one close to 1
        let plus = two_types(dim, p, Sign::Plus);
        c.require(plus.len() == 2, || format!("N={dim} p=1.95+λ₂: {} solutions of type 2+", plus.len()));
        compare_row(c, &format!("N={dim} p=1.95+λ₂ u₁"), plus.last(), u1);
        compare_row(c, &format!("N={dim} p=1.95+λ₂ u₂"), plus.first().filter(|_| plus.len() > 1), u2);
    }
    for (dim, e1, u1, u2) in above {
        let p = 2.1 + radial_eigenvalue::<f64>(dim, 4.0, 2).unwrap();
        let e = ProblemSpec::power(dim, 4.0, p).unwrap().constant_energy();
        c.require(rel(e, e1) <= 1e-3, || format!("N={dim} p=2.1+λ₂: E(1) = {e:.4}, table {e1}"));
        // u₁ increasing, u₂ decreasing
        compare_row(c, &format!("N={dim} p=2.1+λ₂ u₁"), two_types(dim, p, Sign::Minus).first(), u1);
        compare_row(c, &format!("N={dim} p=2.1+λ₂ u₂"), two_types(dim, p, Sign::Plus).first(), u2);
    }
}

fn criterion_4(c: &mut Check) {
    let got = bifurcation_points_eps(3, 4.0_f64, &SumOfPowers::quadratic(), 6).unwrap();
    let want = [0.792443, 0.268099, 0.134567, 0.0808662, 0.053953, 0.0385551];
    for (k, (g, w)) in got.iter().zip(want).enumerate() {
        c.require((g - w).abs() <= 1e-5, || format!("ε_{} = {g:.7}, want {w}", k + 2));
    }
}

fn criterion_5(c: &mut Check) {
    let base = ProblemSpec::power(4, 4.0, 3.0).unwrap();
    let b = trace_branch(&base, 2, Sign::Plus, (2.5, 4.5), &StepControl::default()).unwrap();
    c.require(b.folds.len() == 1, || format!("{} folds", b.folds.len()));
    if let Some(f) = b.folds.first() {
        c.require(rel(f.param, 2.910) <= 0.02, || format!("fold p = {:.5}, want 2.910", f.param));
        c.require(rel(f.gamma, 6.011) <= 0.02, || format!("fold u(0) = {:.5}, want 6.011", f.gamma));
        let k = f.after_point;
        let before = b.morse_index(k).unwrap();
        let after = b.morse_index(k + 1).unwrap();
        c.require(before == 2 && after == 1, || format!("Morse index {before} → {after}, want 2 → 1"));
    }
}

fn criterion_6(c: &mut Check) {
    let mut cases: Vec<(usize, f64, usize)> = Vec::new();
    for dim in 3..=7 {
        for i in 2..=6 {
            for radius in [1.0, 4.0] {
                cases.push((dim, radius, i));
            }
        }
    }
    for i in 10..=14 {
        for radius in [1.0, 4.0] {
            cases.push((2, radius, i));
        }
    }
    for (dim, radius, i) in cases {
        let (direct, reduced) = coeff_b_radial_paths(dim, radius, i).unwrap();
        c.require(direct < 0.0 && reduced < 0.0, || format!("N={dim} R={radius} i={i}: b = {direct:e}"));
        c.require(rel(direct, reduced) <= 1e-6, || format!("N={dim} R={radius} i={i}: paths {direct:e} vs {reduced:e}"));
    }
}

fn criterion_7(c: &mut Check) {
    let grid: Vec<f64> = (0..200).map(|k| 0.3 + 4.2 * k as f64 / 199.0).collect();
    for &r in &grid {
        let v = coeff_c_nonradial_first(2, r).unwrap().scaled_c;
        c.require(v > 0.0, || format!("N=2 R={r:.3}: R^4 c = {v:e}"));
    }
    let vals: Vec<f64> = grid.iter().map(|&r| coeff_c_nonradial_first(7, r).unwrap().scaled_c).collect();
    let changes = vals.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
    c.require(changes == 1, || format!("N=7: {changes} sign changes"));
    for dim in 3..=7 {
        let crit = 2.0 * dim as f64 / (dim as f64 - 2.0);
        let r = (nonradial_data(dim).unwrap().lambda_bar / (crit - 2.0)).sqrt();
        let v = coeff_c_nonradial_first(dim, r).unwrap().c;
        c.require(v > 0.0, || format!("N={dim} at R={r:.4}: c = {v:e}"));
    }
}

fn criterion_8(c: &mut Check) {
    let mut cases: Vec<(String, f64, f64)> = (3..=7)
        .map(|n| {
            let nu = n as f64 / 2.0 - 1.0;
            (format!("N={n}"), nu, 1.0 - nu)
        })
        .collect();
    cases.push(("N=2".into(), 0.0, 1.0));
    for (tag, nu, alpha) in cases {
        let s = lemma_integral_scan(nu, alpha, 3.0, 60.0, 1200).unwrap();
        c.require(s.min_value > 0.0, || format!("{tag}: min value {:e} at {}", s.min_value, s.argmin));
        let tail = s.tail_mean(2.0 * PI);
        let exact = j_cubed_tail(nu).unwrap();
        c.require(rel(tail, exact) <= 0.01, || format!("{tag}: tail {tail:.6} vs {exact:.6}"));
    }
}

fn pi_rational() -> BigRational {
    let digits = "314159265358979323846264338327950288419716939937510";
    BigRational::new(digits.parse::<BigInt>().unwrap(), BigInt::from(10).pow(50))
}

/// The printed closed form `π²i²/(12R³) + 5π⁴i⁴/(192R⁵) + π⁶i⁶/(768R⁷)` in exact rationals.
fn c1d_oracle(radius: &BigRational, i: i64) -> f64 {
    let int = |n: i64| BigRational::from_integer(BigInt::from(n));
    let x2 = (pi_rational() * int(i) / radius).pow(2);
    let t1 = &x2 / (int(12) * radius);
    let t2 = int(5) * x2.pow(2) / (int(192) * radius);
    let t3 = x2.pow(3) / (int(768) * radius);
    (t1 + t2 + t3).to_f64().unwrap()
}

fn criterion_9(c: &mut Check) {
    for (num, den) in [(1, 2), (1, 1), (3, 2), (5, 2), (4, 1)] {
        let radius = BigRational::new(BigInt::from(num), BigInt::from(den));
        let r = num as f64 / den as f64;
        for i in 1..=5 {
            let got = coeff_c_1d(r, i as usize).unwrap();
            let want = c1d_oracle(&radius, i);
            c.require(rel(got, want) <= 1e-12, || format!("R={r} i={i}: {got:e} vs {want:e}"));
        }
    }
}

fn ball_inner(f: &RadialEigenfunction<f64>, g: &RadialEigenfunction<f64>) -> f64 {
    let wd = f.dim as i32 - 1;
    let h = |r: f64| f.eval(r).unwrap() * g.eval(r).unwrap() * r.powi(wd);
    sphere_area::<f64>(f.dim) * simpson_adaptive(&h, 0.0, f.radius, 1e-13)
}

fn criterion_10(c: &mut Check) {
    let mut rng = StdRng::seed_from_u64(2024);

    // Hamiltonian monotonicity
    for _ in 0..200 {
        let dim = rng.random_range(2..8);
        let p: f64 = rng.random_range(2.05..6.0);
        let gamma: f64 = rng.random_range(0.02..3.0);
        let radius: f64 = rng.random_range(0.5..12.0);
        let pr = ProblemSpec::power(dim, radius, p).unwrap();
        match integrate_ivp(&pr, gamma, radius, 1e-10) {
            Ok(prof) => {
                let bad = prof.hamiltonian_trace.windows(2).any(|w| w[1] > w[0] + 1e-9 * (1.0 + w[0].abs()));
                c.require(!bad, || format!("h increases: N={dim} p={p:.3} γ={gamma:.3} R={radius:.3}"));
            }
            Err(Error::BlowUp { .. }) => {}
            Err(e) => c.failures.push(format!("trajectory N={dim} p={p:.3} γ={gamma:.3}: {e}")),
        }
    }

    // zero count along traced branches
    let ctrl = StepControl::default();
    let pbase = ProblemSpec::power(4, 4.0, 3.0).unwrap();
    let ebase = ProblemSpec::eps(3, 4.0, SumOfPowers::quadratic(), 0.1).unwrap();
    let mut branches: Vec<Branch<f64>> = Vec::new();
    for sign in [Sign::Plus, Sign::Minus] {
        branches.push(trace_branch(&pbase, 2, sign, (2.5, 4.5), &ctrl).unwrap());
    }
    for i in 2..=7 {
        branches.push(trace_branch(&ebase, i, Sign::Minus, (0.02, 1.0), &ctrl).unwrap());
    }
    for b in &branches {
        let want = b.identity.i - 1;
        let bad = b.points.iter().filter(|p| p.zero_count != want).count();
        c.require(bad == 0, || format!("branch {}: {bad} points with zero count != {want}", b.identity));
    }

    // ε ↔ R scaling
    for _ in 0..20 {
        let dim = rng.random_range(1..6);
        let p = rng.random_range(2.2..4.5);
        let eps: f64 = rng.random_range(0.05..2.0);
        let gamma = rng.random_range(0.1..1.8);
        let radius = 3.0;
        let s = eps.sqrt();
        let a = ProblemSpec::eps(dim, radius, SumOfPowers::power(p).unwrap(), eps).unwrap();
        let b = ProblemSpec::power(dim, radius / s, p).unwrap();
        match (integrate_ivp(&a, gamma, radius, 1e-12), integrate_ivp(&b, gamma, radius / s, 1e-12)) {
            (Ok(pa), Ok(pb)) => {
                let worst = (1..=20)
                    .map(|j| {
                        let r = radius * j as f64 / 20.0;
                        let (ua, da) = pa.eval(r);
                        let (ub, db) = pb.eval(r / s);
                        ((ua - ub).abs() / (1.0 + ub.abs())).max((da * s - db).abs() / (1.0 + db.abs()))
                    })
                    .fold(0.0, f64::max);
                c.require(worst <= 1e-7, || format!("scaling N={dim} p={p:.3} ε={eps:.3}: {worst:e}"));
            }
            (Err(Error::BlowUp { .. }), Err(Error::BlowUp { .. })) => {}
            (ra, rb) => c.failures.push(format!("scaling N={dim}: {:?} / {:?}", ra.err(), rb.err())),
        }
    }

    // time map: monotone decrease and the linear limit j_{N/2,1}/√(p−2)
    for dim in [2, 3, 4] {
        let ts: Vec<f64> = (0..50).map(|k| time_map(dim, 4.0, 0.02 + 0.96 * k as f64 / 49.0).unwrap()).collect();
        c.require(ts.windows(2).all(|w| w[1] < w[0]), || format!("time map N={dim} p=4 not decreasing"));
    }
    for (dim, root) in [(2, 3.831_705_970_207_512), (3, 4.493_409_457_909_064), (4, 5.135_622_301_840_683)] {
        let t: f64 = time_map(dim, 3.0, 0.999).unwrap();
        c.require((t - root).abs() <= 1e-2, || format!("time map N={dim} γ=0.999: {t:.5} vs {root:.5}"));
    }

    // orthonormality of radial eigenfunctions
    for dim in [2, 3, 5] {
        let phis: Vec<_> = (1..=6).map(|i| RadialEigenfunction::new(dim, 4.0, i).unwrap()).collect();
        for (a, fa) in phis.iter().enumerate() {
            for fb in &phis[a..] {
                let v = ball_inner(fa, fb);
                let want = if fa.index == fb.index { 1.0 } else { 0.0 };
                c.require((v - want).abs() <= 1e-8, || format!("⟨φ{}, φ{}⟩ = {v:e} for N={dim}", fa.index, fb.index));
            }
        }
    }
}

type Criterion = (usize, &'static str, fn(&mut Check), Duration);

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "eigenvalue thresholds", criterion_1, Duration::from_secs(1)),
        (2, "non-radial threshold", criterion_2, Duration::from_secs(1)),
        (3, "solution tables", criterion_3, Duration::from_secs(30)),
        (4, "ε bifurcation values", criterion_4, Duration::from_secs(1)),
        (5, "fold on B₂⁺", criterion_5, Duration::from_secs(120)),
        (6, "sign of b and dual paths", criterion_6, Duration::from_secs(10)),
        (7, "non-radial c curves", criterion_7, Duration::from_secs(60)),
        (8, "lemma integral", criterion_8, Duration::from_secs(10)),
        (9, "1-D closed form", criterion_9, Duration::from_secs(1)),
        (10, "property suites", criterion_10, Duration::from_secs(120)),
    ];
    let mut failed = 0;
    for (n, name, run, budget) in criteria {
        let mut check = Check::default();
        let start = Instant::now();
        run(&mut check);
        let took = start.elapsed();
        check.require(took <= budget, || format!("took {took:.2?}, budget {budget:?}"));
        let verdict = if check.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} {verdict} {name} ({took:.2?})");
        for f in &check.failures {
            println!("             {f}");
        }
        failed += usize::from(!check.failures.is_empty());
    }
    if failed > 0 {
        println!("{failed} criterion/criteria failed");
        std::process::exit(1);
    }
}
