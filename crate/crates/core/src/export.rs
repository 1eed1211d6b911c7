//! Plain-text data files with `#` headers and JSON sidecars.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::{BifurcationCoefficients, CoeffContext};
use crate::continuation::{Branch, FoldRecord, Termination};
use crate::radial_ode::{Family, RadialProfile};
use crate::scalar::Real;
use crate::shooting::SolutionType;

/// Writes `bytes` to a sibling temp file, syncs it and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "path has no file name"))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp: PathBuf = dir.join(tmp_name);
    let res = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if res.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    res
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> io::Result<()> {
    let mut s = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
    s.push('\n');
    write_atomic(path, s.as_bytes())
}

/// Shortest round-trip decimal form.
fn num<T: Real>(x: T) -> String {
    format!("{:e}", x.to_f64_lossy())
}

/// `r u` columns (plus `du` when asked) on the profile's own sample grid.
pub fn profile_table<T: Real>(profile: &RadialProfile<T>, with_du: bool) -> String {
    let mut out = String::from(if with_du { "# r u du\n" } else { "# r u\n" });
    for k in 0..profile.r.len() {
        if k > 0 && profile.r[k] == profile.r[k - 1] {
            continue;
        }
        let _ = write!(out, "{} {}", num(profile.r[k]), num(profile.u[k]));
        if with_du {
            let _ = write!(out, " {}", num(profile.du[k]));
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileMeta {
    pub dim: usize,
    pub radius: f64,
    pub family: Family,
    /// `p` or `ε`.
    pub param: f64,
    pub gamma: f64,
    pub solution_type: Option<String>,
    pub zero_count: usize,
    pub energy: f64,
    pub constant_energy: f64,
    pub min_u: f64,
    pub max_u: f64,
    pub morse_index_rad: Option<usize>,
}

impl ProfileMeta {
    pub fn new<T: Real>(profile: &RadialProfile<T>, solution_type: Option<SolutionType>, morse_index_rad: Option<usize>) -> Self {
        let pr = &profile.problem;
        Self {
            dim: pr.dim,
            radius: pr.radius.to_f64_lossy(),
            family: pr.family(),
            param: pr.param().to_f64_lossy(),
            gamma: profile.gamma.to_f64_lossy(),
            solution_type: solution_type.map(|t| t.to_string()),
            zero_count: profile.zero_count,
            energy: profile.energy.to_f64_lossy(),
            constant_energy: pr.constant_energy().to_f64_lossy(),
            min_u: profile.min_u().to_f64_lossy(),
            max_u: profile.max_u().to_f64_lossy(),
            morse_index_rad,
        }
    }
}

/// `param u0` rows; the extended form adds energy, zero count and, when
/// `morse` holds one entry per point, the radial Morse index.
pub fn branch_table<T: Real>(branch: &Branch<T>, extended: bool, morse: Option<&[usize]>) -> String {
    let mut out = String::from(match (extended, morse.is_some()) {
        (false, _) => "# param u0\n",
        (true, false) => "# param u0 energy zero_count\n",
        (true, true) => "# param u0 energy zero_count morse_index_rad\n",
    });
    for (k, pt) in branch.points.iter().enumerate() {
        let _ = write!(out, "{} {}", num(pt.param), num(pt.gamma));
        if extended {
            let _ = write!(out, " {} {}", num(pt.energy), pt.zero_count);
            if let Some(m) = morse.and_then(|m| m.get(k)) {
                let _ = write!(out, " {m}");
            }
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldEntry {
    pub param: f64,
    pub gamma: f64,
    pub after_point: usize,
    pub dgamma_residual: Option<f64>,
    pub scale: Option<f64>,
    pub degenerate: Option<bool>,
    pub morse_index_rad: Option<usize>,
    pub before_bifurcation: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchSummary {
    pub identity: String,
    pub family: Family,
    pub dim: usize,
    pub radius: f64,
    pub bifurcation: f64,
    pub points: usize,
    pub param_span: (f64, f64),
    pub gamma_span: (f64, f64),
    pub termination: Termination,
    pub folds: Vec<FoldEntry>,
}

impl BranchSummary {
    /// `report` is the output of `fold_report` for the same branch, if computed.
    pub fn new<T: Real>(branch: &Branch<T>, report: Option<&[FoldRecord<T>]>) -> Self {
        let span = |f: &dyn Fn(usize) -> f64| {
            (0..branch.points.len()).map(f).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
        };
        let folds = branch
            .folds
            .iter()
            .enumerate()
            .map(|(k, f)| {
                let rec = report.and_then(|r| r.get(k));
                FoldEntry {
                    param: f.param.to_f64_lossy(),
                    gamma: f.gamma.to_f64_lossy(),
                    after_point: f.after_point,
                    dgamma_residual: rec.map(|r| r.dgamma_fd.to_f64_lossy()),
                    scale: rec.map(|r| r.scale.to_f64_lossy()),
                    degenerate: rec.map(|r| r.degenerate),
                    morse_index_rad: rec.and_then(|r| r.morse.as_ref().map(|m| m.index)),
                    before_bifurcation: rec.map(|r| r.before_bifurcation),
                }
            })
            .collect();
        Self {
            identity: branch.identity.to_string(),
            family: branch.family,
            dim: branch.dim,
            radius: branch.radius.to_f64_lossy(),
            bifurcation: branch.bifurcation.to_f64_lossy(),
            points: branch.points.len(),
            param_span: span(&|k| branch.points[k].param.to_f64_lossy()),
            gamma_span: span(&|k| branch.points[k].gamma.to_f64_lossy()),
            termination: branch.termination,
            folds,
        }
    }
}

/// `(dim, radius, i)` of a coefficient context; `dim` is 1 for the interval and
/// `i` is 2 for the first non-radial bifurcation.
pub fn context_key<T: Real>(ctx: &CoeffContext<T>) -> (usize, T, usize) {
    match *ctx {
        CoeffContext::RadialP { dim, radius, i } | CoeffContext::RadialEps { dim, radius, i } => (dim, radius, i),
        CoeffContext::OneDim { radius, i } => (1, radius, i),
        CoeffContext::NonradialFirst { dim, radius } => (dim, radius, 2),
    }
}

/// `context N R i a b c` rows; a missing coefficient is written as `nan`.
pub fn coefficient_rows<T: Real>(rows: &[BifurcationCoefficients<T>]) -> String {
    let mut out = String::from("# context N R i a b c\n");
    for row in rows {
        let (dim, radius, i) = context_key(&row.context);
        let opt = |x: Option<T>| x.map(num).unwrap_or_else(|| "nan".into());
        let _ = writeln!(out, "{} {} {} {} {} {} {}", row.context.name(), dim, num(radius), i, num(row.a), opt(row.b), opt(row.c));
    }
    out
}

/// Parses whitespace-separated numeric rows; `#` starts a comment.
pub fn read_table(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| l.split_whitespace().map(|w| w.parse().unwrap_or(f64::NAN)).collect())
        .collect()
}
