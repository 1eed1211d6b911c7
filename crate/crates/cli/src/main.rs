mod args;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use neumann_radial::analysis::{
    coeff_c_nonradial_first, j_cubed_tail, lemma_integral_scan, morse_index_radial, one_dim_coefficients,
    radial_eps_coefficients, radial_p_coefficients,
};
use neumann_radial::continuation::{bifurcation_value, fold_report, trace_branch, Branch, StepControl};
use neumann_radial::export::{branch_table, coefficient_rows, profile_table, write_atomic, write_json, BranchSummary, ProfileMeta};
use neumann_radial::radial_ode::{verify_solution_identities, IvpOptions, ProblemSpec, RadialProfile};
use neumann_radial::shooting::{find_solutions, time_map_with, ScanOptions, ShootOptions, Sign, SolutionType};
use neumann_radial::spectrum::{radial_eigenvalue, spectrum_list};
use neumann_radial::Error;

const THREADS_ENV: &str = "NEUMANN_RADIAL_THREADS";

#[derive(Parser)]
#[command(name = "neumann-radial", version, about = "Radial Neumann problems on balls: spectra, solutions, branches, coefficients")]
struct Cli {
    /// Worker threads (default: $NEUMANN_RADIAL_THREADS, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(flatten)]
    tol: TolArgs,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Copy, Serialize)]
struct TolArgs {
    /// Local error tolerance of the radial integrator.
    #[arg(long, global = true, default_value_t = 1e-11)]
    tol: f64,
    /// Shooting convergence: |u'(R)| <= rel_tol * max(1, max|u'|).
    #[arg(long, global = true, default_value_t = 1e-9)]
    rel_tol: f64,
    /// Slack of the critical-point envelope checks in the type classification.
    #[arg(long, global = true, default_value_t = 1e-7)]
    slack: f64,
}

impl TolArgs {
    fn shoot(&self) -> ShootOptions<f64> {
        ShootOptions {
            ivp: IvpOptions::with_tol(self.tol),
            rel_tol: self.rel_tol,
            envelope_slack: self.slack,
            ..ShootOptions::default()
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Neumann eigenvalues of the ball.
    Eigs(EigsArgs),
    /// Radial solutions of a given type.
    Solve(SolveArgs),
    /// Trace bifurcation branches from the constant solution.
    Branch(BranchArgs),
    /// Time map of increasing solutions.
    Timemap(TimemapArgs),
    /// Bifurcation coefficients and related integrals.
    Coeffs(CoeffsArgs),
}

#[derive(Args, Serialize)]
struct EigsArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    radius: f64,
    #[arg(long)]
    count: usize,
    /// Only radial eigenvalues, starting from λ₂^rad.
    #[arg(long)]
    radial_only: bool,
    /// Nonlinearity for the ε_i column.
    #[arg(long, default_value = "quadratic")]
    f: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct SolveArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    radius: f64,
    /// Exponent; accepts e.g. 2.1+lam2rad.
    #[arg(long, conflicts_with_all = ["f", "eps"])]
    p: Option<String>,
    #[arg(long, requires = "eps")]
    f: Option<String>,
    #[arg(long, requires = "f")]
    eps: Option<f64>,
    /// Solution type such as 2- or 3+.
    #[arg(long = "type")]
    kind: String,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Points of the γ scan used to bracket solutions.
    #[arg(long, default_value_t = 300)]
    scan_points: usize,
    /// Upper end of the γ scan for + types.
    #[arg(long, default_value_t = 1e3)]
    gamma_max: f64,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum FamilyArg {
    P,
    Eps,
}

#[derive(Args, Serialize)]
struct BranchArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    radius: f64,
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, default_value = "quadratic")]
    f: String,
    /// Branch index, list or range such as 2..7.
    #[arg(long)]
    i: String,
    /// + or -.
    #[arg(long, allow_hyphen_values = true)]
    sign: String,
    /// Parameter window A:B.
    #[arg(long)]
    range: String,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add the radial Morse index column (one eigenvalue count per point).
    #[arg(long)]
    morse: bool,
    #[arg(long, default_value_t = 1e-3)]
    initial_step: f64,
    #[arg(long, default_value_t = 0.05)]
    max_step: f64,
    #[arg(long, default_value_t = 1e-3)]
    seed_offset: f64,
    /// u(0) above which the branch counts as blown up.
    #[arg(long, default_value_t = 1e6)]
    ceiling: f64,
    #[arg(long, default_value_t = 20_000)]
    max_points: usize,
}

#[derive(Args, Serialize)]
struct TimemapArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    p: f64,
    /// γ grid a:b:n inside (0, 1).
    #[arg(long)]
    gammas: String,
    /// Radius at which the search for the first critical point gives up.
    #[arg(long, default_value_t = 100.0)]
    r_max: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
enum Mode {
    BRadial,
    BEps,
    #[value(name = "c-1d")]
    #[serde(rename = "c-1d")]
    C1d,
    CNonradial,
    LemmaScan,
    Tail,
}

#[derive(Args, Serialize)]
struct CoeffsArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    /// Dimension, list or range.
    #[arg(long)]
    dim: Option<String>,
    #[arg(long)]
    radius: Option<f64>,
    /// Eigenvalue index, list or range.
    #[arg(long)]
    i: Option<String>,
    #[arg(long, default_value = "quadratic")]
    f: String,
    #[arg(long, default_value_t = 0.3)]
    rmin: f64,
    #[arg(long, default_value_t = 4.5)]
    rmax: f64,
    #[arg(long, default_value_t = 100)]
    points: usize,
    #[arg(long)]
    nu: Option<f64>,
    /// Defaults to 1 − ν.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 3.0)]
    beta: f64,
    #[arg(long, default_value_t = 60.0)]
    xmax: f64,
    #[arg(long, default_value_t = 4000)]
    samples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum CliError {
    Usage(String),
    NoSolution(String),
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            Self::Usage(_) => 2,
            Self::NoSolution(_) => 3,
            Self::Numerical(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Usage(m) | Self::NoSolution(m) | Self::Numerical(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::InvalidNonlinearity(_) => Self::Usage(e.to_string()),
            Error::SeedFailure { .. } => Self::NoSolution(e.to_string()),
            _ => Self::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Numerical(format!("i/o: {e}"))
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(r: std::result::Result<T, String>) -> CliResult<T> {
    r.map_err(CliError::Usage)
}

#[derive(Serialize)]
struct RunManifest {
    command: String,
    parameters: Value,
    tol: TolArgs,
    tool_version: String,
    outputs: Vec<String>,
    wall_time: f64,
    report: Value,
}

/// Collects written files; the manifest goes last.
struct Run {
    command: &'static str,
    start: Instant,
    outputs: Vec<PathBuf>,
}

impl Run {
    fn new(command: &'static str) -> Self {
        Self { command, start: Instant::now(), outputs: Vec::new() }
    }

    fn write(&mut self, path: &Path, text: &str) -> CliResult<()> {
        write_atomic(path, text.as_bytes())?;
        self.outputs.push(path.to_path_buf());
        Ok(())
    }

    fn write_json<S: Serialize>(&mut self, path: &Path, value: &S) -> CliResult<()> {
        write_json(path, value)?;
        self.outputs.push(path.to_path_buf());
        Ok(())
    }

    fn finish<P: Serialize>(self, manifest: &Path, params: &P, tol: TolArgs, report: Value) -> CliResult<()> {
        let m = RunManifest {
            command: self.command.into(),
            parameters: serde_json::to_value(params).map_err(|e| CliError::Numerical(e.to_string()))?,
            tol,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            outputs: self.outputs.iter().map(|p| p.display().to_string()).collect(),
            wall_time: self.start.elapsed().as_secs_f64(),
            report,
        };
        write_json(manifest, &m)?;
        Ok(())
    }
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("json")
}

/// `dir/stem-tag.ext` next to `path`.
fn tagged(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}-{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{tag}"),
    };
    path.with_file_name(name)
}

fn sign_word(s: Sign) -> &'static str {
    match s {
        Sign::Plus => "plus",
        Sign::Minus => "minus",
    }
}

/// Table to `out` (with a manifest) or to stdout.
fn emit<P: Serialize>(run: Run, out: Option<&Path>, text: &str, params: &P, tol: TolArgs, report: Value) -> CliResult<()> {
    match out {
        Some(path) => {
            let mut run = run;
            run.write(path, text)?;
            run.finish(&manifest_path(path), params, tol, report)
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

fn cmd_eigs(a: &EigsArgs, tol: TolArgs) -> CliResult<()> {
    let run = Run::new("eigs");
    if a.count == 0 {
        return Err(CliError::Usage("--count must be >= 1".into()));
    }
    let f = usage(args::parse_nonlinearity(&a.f))?;
    let slope = f.deriv(1.0) - 1.0;
    let eps = |lam: f64| if lam > 0.0 { num(slope / lam) } else { "inf".into() };
    let mut text = String::new();
    if a.radial_only {
        text.push_str("# i lambda two_plus_lambda eps\n");
        for i in 2..a.count + 2 {
            let lam: f64 = radial_eigenvalue(a.dim, a.radius, i)?;
            text.push_str(&format!("{i} {} {} {}\n", num(lam), num(2.0 + lam), eps(lam)));
        }
    } else {
        text.push_str("# index k l lambda multiplicity two_plus_lambda eps\n");
        for (n, r) in spectrum_list(a.dim, a.radius, a.count)?.iter().enumerate() {
            text.push_str(&format!(
                "{} {} {} {} {} {} {}\n",
                n + 1,
                r.k,
                r.l,
                num(r.lambda),
                r.multiplicity,
                num(r.p_threshold()),
                eps(r.lambda)
            ));
        }
    }
    emit(run, a.out.as_deref(), &text, a, tol, Value::Null)
}

fn solve_problem(a: &SolveArgs) -> CliResult<ProblemSpec<f64>> {
    match (&a.p, &a.f, a.eps) {
        (Some(p), None, None) => {
            let p = usage(args::resolve_param(p, a.dim, a.radius))?;
            Ok(ProblemSpec::power(a.dim, a.radius, p)?)
        }
        (None, Some(f), Some(eps)) => Ok(ProblemSpec::eps(a.dim, a.radius, usage(args::parse_nonlinearity(f))?, eps)?),
        _ => Err(CliError::Usage("give either --p or both --f and --eps".into())),
    }
}

fn checked_profile(profile: &RadialProfile<f64>) -> CliResult<()> {
    let rep = verify_solution_identities(profile);
    if rep.ok() {
        Ok(())
    } else {
        Err(CliError::Numerical(format!(
            "solution with u(0) = {} fails its integral identities: {}",
            profile.gamma,
            rep.flags.join("; ")
        )))
    }
}

fn cmd_solve(a: &SolveArgs, tol: TolArgs) -> CliResult<()> {
    let mut run = Run::new("solve");
    let kind: SolutionType = a.kind.parse().map_err(|e: Error| CliError::Usage(e.to_string()))?;
    let pr = solve_problem(a)?;
    let scan = ScanOptions { points: a.scan_points, gamma_max: a.gamma_max };
    let sols = find_solutions(&pr, kind.sign, Some(kind), &scan, &tol.shoot())?;
    if sols.is_empty() {
        return Err(CliError::NoSolution(format!(
            "no solution of type {kind} found for N = {}, R = {}, {} = {}",
            a.dim,
            a.radius,
            pr.family(),
            pr.param()
        )));
    }
    for s in &sols {
        checked_profile(s)?;
    }
    let out = a.out.clone().unwrap_or_else(|| {
        PathBuf::from(format!("solve-{}-N{}-R{}-{}{}.dat", pr.family(), a.dim, a.radius, kind.i, sign_word(kind.sign)))
    });
    let metas: Vec<ProfileMeta> = sols
        .iter()
        .map(|s| ProfileMeta::new(s, Some(kind), morse_index_radial(s).ok().map(|m| m.index)))
        .collect();
    println!("# gamma min_u max_u energy constant_energy zero_count morse_index_rad");
    for (k, (s, m)) in sols.iter().zip(&metas).enumerate() {
        let path = if sols.len() == 1 { out.clone() } else { tagged(&out, &(k + 1).to_string()) };
        run.write(&path, &profile_table(s, true))?;
        run.write_json(&sidecar_path(&path), m)?;
        let mi = m.morse_index_rad.map(|x| x.to_string()).unwrap_or_else(|| "nan".into());
        println!(
            "{} {} {} {} {} {} {}",
            num(m.gamma),
            num(m.min_u),
            num(m.max_u),
            num(m.energy),
            num(m.constant_energy),
            m.zero_count,
            mi
        );
    }
    let report = json!({ "param": pr.param(), "solutions": metas });
    run.finish(&manifest_path(&out), a, tol, report)
}

fn cmd_branch(a: &BranchArgs, tol: TolArgs) -> CliResult<()> {
    let mut run = Run::new("branch");
    let indices = usage(args::parse_indices(&a.i))?;
    let sign: Sign = a.sign.parse().map_err(|e: Error| CliError::Usage(e.to_string()))?;
    let range = usage(args::parse_range(&a.range))?;
    let base = match a.family {
        FamilyArg::P => ProblemSpec::power(a.dim, a.radius, 3.0)?,
        FamilyArg::Eps => ProblemSpec::eps(a.dim, a.radius, usage(args::parse_nonlinearity(&a.f))?, 1.0)?,
    };
    let ctrl = StepControl {
        initial: a.initial_step,
        max_step: a.max_step,
        seed_offset: a.seed_offset,
        ceiling: a.ceiling,
        max_points: a.max_points,
        shoot: tol.shoot(),
        ..StepControl::default()
    };
    let traced: Vec<(usize, Result<Branch<f64>, Error>)> =
        indices.par_iter().map(|&i| (i, trace_branch(&base, i, sign, range, &ctrl))).collect();
    let family = match a.family {
        FamilyArg::P => "p",
        FamilyArg::Eps => "eps",
    };
    let out = a
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("branch-{family}-N{}-R{}-{}.dat", a.dim, a.radius, sign_word(sign))));
    let mut summaries = Vec::new();
    let mut first_err = None;
    for (i, res) in traced {
        let b = match res {
            Ok(b) => b,
            Err(e) => {
                let star = bifurcation_value(&base, i).ok();
                eprintln!("branch {i}{sign}: {e} (bifurcation value {star:?})");
                summaries.push(json!({ "i": i, "error": e.to_string(), "bifurcation": star }));
                first_err.get_or_insert(CliError::from(e));
                continue;
            }
        };
        let morse = if a.morse {
            Some((0..b.points.len()).into_par_iter().map(|k| b.morse_index(k)).collect::<Result<Vec<_>, _>>()?)
        } else {
            None
        };
        let path = if indices.len() == 1 { out.clone() } else { tagged(&out, &format!("{i}{}", sign_word(sign))) };
        run.write(&path, &branch_table(&b, true, morse.as_deref()))?;
        let report = fold_report(&b)?;
        let summary = BranchSummary::new(&b, Some(&report));
        println!(
            "{}{}: {} points, bifurcation {}, {} fold(s), termination {}",
            i,
            sign,
            b.points.len(),
            num(b.bifurcation),
            b.folds.len(),
            b.termination
        );
        for f in &summary.folds {
            println!("  fold at param {} u(0) {}", num(f.param), num(f.gamma));
        }
        summaries.push(serde_json::to_value(&summary).map_err(|e| CliError::Numerical(e.to_string()))?);
    }
    run.finish(&manifest_path(&out), a, tol, Value::Array(summaries))?;
    match first_err {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn cmd_timemap(a: &TimemapArgs, tol: TolArgs) -> CliResult<()> {
    let run = Run::new("timemap");
    let gammas = usage(args::parse_grid(&a.gammas))?;
    if gammas.iter().any(|&g| !(g > 0.0 && g < 1.0)) {
        return Err(CliError::Usage("time map grid must lie inside (0, 1)".into()));
    }
    let opts = IvpOptions::with_tol(tol.tol);
    let rows: Vec<Result<f64, Error>> = gammas.par_iter().map(|&g| time_map_with(a.dim, a.p, g, a.r_max, &opts)).collect();
    let mut text = String::from("# gamma T\n");
    let mut ok = Vec::new();
    for (g, r) in gammas.iter().zip(&rows) {
        match r {
            Ok(t) => {
                text.push_str(&format!("{} {}\n", num(*g), num(*t)));
                ok.push(*t);
            }
            Err(Error::Horizon { r_max }) => text.push_str(&format!("{} nan # horizon {r_max}\n", num(*g))),
            Err(e @ (Error::Domain(_) | Error::InvalidNonlinearity(_))) => return Err(CliError::Usage(e.to_string())),
            Err(e) => text.push_str(&format!("{} nan # {e}\n", num(*g))),
        }
    }
    let decreasing = ok.windows(2).all(|w| w[1] < w[0]);
    let failed = rows.iter().filter(|r| r.is_err()).count();
    if a.out.is_some() {
        println!("strictly decreasing: {decreasing}; failed rows: {failed}");
    }
    emit(run, a.out.as_deref(), &text, a, tol, json!({ "strictly_decreasing": decreasing, "failed_rows": failed }))
}

fn need<T: Copy>(x: Option<T>, flag: &str) -> CliResult<T> {
    x.ok_or_else(|| CliError::Usage(format!("this mode needs --{flag}")))
}

fn need_list(x: &Option<String>, flag: &str) -> CliResult<Vec<usize>> {
    usage(args::parse_indices(x.as_deref().ok_or_else(|| CliError::Usage(format!("this mode needs --{flag}")))?))
}

fn cmd_coeffs(a: &CoeffsArgs, tol: TolArgs) -> CliResult<()> {
    let mut run = Run::new("coeffs");
    let pairs = |dims: &[usize], is: &[usize]| -> Vec<(usize, usize)> {
        dims.iter().flat_map(|&d| is.iter().map(move |&i| (d, i))).collect()
    };
    let text = match a.mode {
        Mode::BRadial => {
            let r = need(a.radius, "radius")?;
            let jobs = pairs(&need_list(&a.dim, "dim")?, &need_list(&a.i, "i")?);
            let rows = jobs.par_iter().map(|&(d, i)| radial_p_coefficients(d, r, i)).collect::<Result<Vec<_>, _>>()?;
            coefficient_rows(&rows)
        }
        Mode::BEps => {
            let r = need(a.radius, "radius")?;
            let f = usage(args::parse_nonlinearity(&a.f))?;
            let jobs = pairs(&need_list(&a.dim, "dim")?, &need_list(&a.i, "i")?);
            let rows = jobs.par_iter().map(|&(d, i)| radial_eps_coefficients(d, r, &f, i)).collect::<Result<Vec<_>, _>>()?;
            coefficient_rows(&rows)
        }
        Mode::C1d => {
            let r = need(a.radius, "radius")?;
            let rows = need_list(&a.i, "i")?.iter().map(|&i| one_dim_coefficients(r, i)).collect::<Result<Vec<_>, _>>()?;
            coefficient_rows(&rows)
        }
        Mode::CNonradial => {
            let dims = need_list(&a.dim, "dim")?;
            if !(a.rmin > 0.0 && a.rmax > a.rmin) || a.points < 2 {
                return Err(CliError::Usage("need 0 < rmin < rmax and points >= 2".into()));
            }
            let radii: Vec<f64> = (0..a.points).map(|k| a.rmin + (a.rmax - a.rmin) * k as f64 / (a.points - 1) as f64).collect();
            let curves = dims
                .par_iter()
                .map(|&d| {
                    let mut s = format!("# N = {d}\n# R scaled_c c\n");
                    for &r in &radii {
                        let c = coeff_c_nonradial_first(d, r)?;
                        s.push_str(&format!("{} {} {}\n", num(r), num(c.scaled_c), num(c.c)));
                    }
                    Ok((d, s))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            if let (Some(out), true) = (&a.out, dims.len() > 1) {
                for (d, s) in &curves {
                    run.write(&tagged(out, &format!("N{d}")), s)?;
                }
                return run.finish(&manifest_path(out), a, tol, Value::Null);
            }
            curves.into_iter().map(|(_, s)| s).collect::<Vec<_>>().join("\n\n")
        }
        Mode::LemmaScan => {
            let nu = need(a.nu, "nu")?;
            let alpha = a.alpha.unwrap_or(1.0 - nu);
            let scan = lemma_integral_scan(nu, alpha, a.beta, a.xmax, a.samples)?;
            let mut s = format!(
                "# nu {nu} alpha {alpha} beta {}\n# min_value {} at {}\n# x integral\n",
                a.beta,
                num(scan.min_value),
                num(scan.argmin)
            );
            for (x, v) in &scan.samples {
                s.push_str(&format!("{} {}\n", num(*x), num(*v)));
            }
            s
        }
        Mode::Tail => {
            let nu = need(a.nu, "nu")?;
            format!("# nu tail\n{} {}\n", num(nu), num(j_cubed_tail(nu)?))
        }
    };
    emit(run, a.out.as_deref(), &text, a, tol, Value::Null)
}

fn init_threads(flag: Option<usize>) -> CliResult<()> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(v.trim().parse().map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a count, got {v:?}")))?),
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        // a second build in the same process is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    init_threads(cli.threads)?;
    let tol = cli.tol;
    if !(tol.tol > 0.0 && tol.rel_tol > 0.0 && tol.slack >= 0.0) {
        return Err(CliError::Usage("tolerances must be positive".into()));
    }
    match &cli.cmd {
        Cmd::Eigs(a) => cmd_eigs(a, tol),
        Cmd::Solve(a) => cmd_solve(a, tol),
        Cmd::Branch(a) => cmd_branch(a, tol),
        Cmd::Timemap(a) => cmd_timemap(a, tol),
        Cmd::Coeffs(a) => cmd_coeffs(a, tol),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
