//! Parsers for the value syntaxes accepted on the command line.

use neumann_radial::radial_ode::SumOfPowers;
use neumann_radial::spectrum::radial_eigenvalue;

/// `7`, `2..6` (inclusive) or `2,3,5`.
pub fn parse_indices(s: &str) -> Result<Vec<usize>, String> {
    let s = s.trim();
    let bad = || format!("bad index list {s:?}; use 3, 2..6 or 2,4,5");
    let out: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        (a..=b).collect()
    } else {
        s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

/// `A:B` with `A ≠ B`.
pub fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("bad range {s:?}; use A:B"))?;
    let a: f64 = a.trim().parse().map_err(|_| format!("bad range start {a:?}"))?;
    let b: f64 = b.trim().parse().map_err(|_| format!("bad range end {b:?}"))?;
    if !(a.is_finite() && b.is_finite()) || a == b {
        return Err(format!("bad range {s:?}"));
    }
    Ok((a, b))
}

/// `a:b:n` with `n` points from `a` to `b`; `n = 1` gives just `a`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("bad grid {s:?}; use a:b:n"));
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| format!("bad grid start {:?}", parts[0]))?;
    let b: f64 = parts[1].trim().parse().map_err(|_| format!("bad grid end {:?}", parts[1]))?;
    let n: usize = parts[2].trim().parse().map_err(|_| format!("bad grid count {:?}", parts[2]))?;
    if n == 0 || !(a.is_finite() && b.is_finite()) || (n > 1 && a >= b) {
        return Err(format!("bad grid {s:?}; need a < b and n >= 1"));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect())
}

/// A number, or `A+lamIrad` / `A-lamIrad` meaning `A ± λ_I^rad(B_R)`.
pub fn resolve_param(s: &str, dim: usize, radius: f64) -> Result<f64, String> {
    let s = s.trim();
    if let Ok(x) = s.parse::<f64>() {
        return Ok(x);
    }
    let bad = || format!("bad parameter {s:?}; use a number or e.g. 2.1+lam2rad");
    let pos = s.find("lam").ok_or_else(bad)?;
    let (head, tail) = s.split_at(pos);
    let idx: usize = tail
        .strip_prefix("lam")
        .and_then(|t| t.strip_suffix("rad"))
        .ok_or_else(bad)?
        .parse()
        .map_err(|_| bad())?;
    let (base, sign) = if let Some(h) = head.strip_suffix('+') {
        (h, 1.0)
    } else if let Some(h) = head.strip_suffix('-') {
        (h, -1.0)
    } else if head.is_empty() {
        ("0", 1.0)
    } else {
        return Err(bad());
    };
    let base: f64 = base.trim().parse().map_err(|_| bad())?;
    let lam: f64 = radial_eigenvalue(dim, radius, idx).map_err(|e| e.to_string())?;
    Ok(base + sign * lam)
}

/// Named nonlinearities: `quadratic`, `power:P`, `f1-like`, `f2-like`, or
/// `sumpow:c1,q1;c2,q2;…` for `Σ c u^q`.
pub fn parse_nonlinearity(s: &str) -> Result<SumOfPowers<f64>, String> {
    let s = s.trim();
    let r = match s {
        "quadratic" => Ok(SumOfPowers::quadratic()),
        "f1-like" => Ok(SumOfPowers::f1_like()),
        "f2-like" => Ok(SumOfPowers::f2_like()),
        _ => {
            if let Some(p) = s.strip_prefix("power:") {
                let p: f64 = p.trim().parse().map_err(|_| format!("bad exponent in {s:?}"))?;
                SumOfPowers::power(p)
            } else if let Some(spec) = s.strip_prefix("sumpow:") {
                let terms = spec
                    .split(';')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| {
                        let (c, q) = t.split_once(',').ok_or_else(|| format!("bad term {t:?}; use c,q"))?;
                        let c: f64 = c.trim().parse().map_err(|_| format!("bad coefficient {c:?}"))?;
                        let q: f64 = q.trim().parse().map_err(|_| format!("bad exponent {q:?}"))?;
                        Ok((c, q))
                    })
                    .collect::<Result<Vec<_>, String>>()?;
                SumOfPowers::new(terms)
            } else {
                return Err(format!("unknown nonlinearity {s:?}; use quadratic, power:P, f1-like, f2-like or sumpow:c,q;…"));
            }
        }
    };
    r.map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_lists() {
        assert_eq!(parse_indices("4").unwrap(), vec![4]);
        assert_eq!(parse_indices("2..5").unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(parse_indices("2..=3").unwrap(), vec![2, 3]);
        assert_eq!(parse_indices("2, 7").unwrap(), vec![2, 7]);
        assert!(parse_indices("5..2").is_err());
        assert!(parse_indices("x").is_err());
    }

    #[test]
    fn ranges_and_grids() {
        assert_eq!(parse_range("2.5:4.5").unwrap(), (2.5, 4.5));
        assert!(parse_range("1:1").is_err());
        assert_eq!(parse_grid("0.1:0.5:3").unwrap(), vec![0.1, 0.30000000000000004, 0.5]);
        assert_eq!(parse_grid("0.999:0.999:1").unwrap(), vec![0.999]);
        assert!(parse_grid("0.5:0.1:4").is_err());
    }

    #[test]
    fn lambda_sugar() {
        let lam: f64 = radial_eigenvalue(3, 4.0, 2).unwrap();
        assert_eq!(resolve_param("2.1+lam2rad", 3, 4.0).unwrap(), 2.1 + lam);
        assert_eq!(resolve_param("2-lam2rad", 3, 4.0).unwrap(), 2.0 - lam);
        assert_eq!(resolve_param("lam2rad", 3, 4.0).unwrap(), lam);
        assert_eq!(resolve_param("3.5", 3, 4.0).unwrap(), 3.5);
        assert!(resolve_param("2.1+lam2", 3, 4.0).is_err());
    }

    #[test]
    fn registry() {
        assert_eq!(parse_nonlinearity("quadratic").unwrap(), SumOfPowers::quadratic());
        assert_eq!(parse_nonlinearity("power:3").unwrap(), SumOfPowers::quadratic());
        assert_eq!(parse_nonlinearity("sumpow:5,2;-8,3;4,4").unwrap(), SumOfPowers::f1_like());
        assert!(parse_nonlinearity("sumpow:1,0.5").is_err());
        assert!(parse_nonlinearity("cubic").is_err());
    }
}
