use affrep::bridge::{algebra_from_surface, OrderingSpec, SurfaceSpec};
use affrep::classify::classify_surface;
use affrep::existence::{existence_profile, ExistenceProfile};
use affrep::export::to_json_line;
use affrep::Tolerances;
use clap::Args;
use serde::Serialize;

use crate::CliError;

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    /// `lo:hi:n`, a comma-separated list, or a single value.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha0: String,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha1: String,
    #[arg(long, allow_hyphen_values = true)]
    pub c0: String,
    #[arg(long, default_value_t = 0.1)]
    pub hbar: f64,
    /// Worker threads; output order does not depend on it.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

/// Parses one axis of the grid.
pub fn parse_axis(s: &str) -> Result<Vec<f64>, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    let parts: Vec<&str> = s.split(':').collect();
    let values = match parts.as_slice() {
        [lo, hi, n] => {
            let (lo, hi) = (num(lo)?, num(hi)?);
            let n: usize = n.trim().parse().map_err(|e| format!("{n:?}: {e}"))?;
            match n {
                0 => return Err("a range needs at least one point".into()),
                1 => vec![lo],
                _ => (0..n)
                    .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
                    .collect(),
            }
        }
        [list] => list.split(',').map(num).collect::<Result<_, _>>()?,
        _ => return Err(format!("expected lo:hi:n or a list, got {s:?}")),
    };
    if values.iter().any(|v| !v.is_finite()) {
        return Err("grid values must be finite".into());
    }
    Ok(values)
}

#[derive(Serialize)]
struct Record {
    index: usize,
    alpha0: f64,
    alpha1: f64,
    c0: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    code: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    geometry: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    profile: Option<ExistenceProfile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn record(index: usize, s: SurfaceSpec, hbar: f64, nmax: usize, tol: &Tolerances) -> Record {
    let mut rec = Record {
        index,
        alpha0: s.alpha0,
        alpha1: s.alpha1,
        c0: s.c0,
        code: None,
        geometry: None,
        profile: None,
        error: None,
    };
    let cls = match classify_surface(&s) {
        Ok(c) => c,
        Err(e) => {
            rec.error = Some(e.to_string());
            return rec;
        }
    };
    rec.code = Some(cls.code.to_string());
    rec.geometry = Some(cls.geometry);
    let o = OrderingSpec::symmetric(s.alpha1, hbar);
    match algebra_from_surface(&s, &o)
        .and_then(|p| existence_profile(&p, Some(&cls), Some(&o), nmax, tol))
    {
        Ok(mut p) => {
            p.witnesses.clear();
            rec.profile = Some(p);
        }
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec
}

pub fn grid(args: &SweepArgs) -> Result<Vec<SurfaceSpec>, CliError> {
    let axis =
        |v: &str, name: &str| parse_axis(v).map_err(|e| CliError::parse(format!("--{name}: {e}")));
    let (a0, a1, c0) = (
        axis(&args.alpha0, "alpha0")?,
        axis(&args.alpha1, "alpha1")?,
        axis(&args.c0, "c0")?,
    );
    let mut points = Vec::with_capacity(a0.len() * a1.len() * c0.len());
    for &x in &a0 {
        for &y in &a1 {
            for &z in &c0 {
                points.push(SurfaceSpec::new(x, y, z));
            }
        }
    }
    Ok(points)
}

/// JSON lines in grid order. With `jobs > 1` contiguous shards are computed
/// on separate threads and concatenated by index.
pub fn run(args: &SweepArgs, nmax: usize, tol: &Tolerances) -> Result<String, CliError> {
    if !(args.hbar > 0.0) {
        return Err(CliError::parse("--hbar must be positive"));
    }
    let points = grid(args)?;
    let jobs = args.jobs.max(1).min(points.len().max(1));
    let chunk = points.len().div_ceil(jobs).max(1);
    let shards: Vec<Vec<Record>> = std::thread::scope(|scope| {
        let handles: Vec<_> = points
            .chunks(chunk)
            .enumerate()
            .map(|(k, shard)| {
                scope.spawn(move || {
                    shard
                        .iter()
                        .enumerate()
                        .map(|(i, s)| record(k * chunk + i, *s, args.hbar, nmax, tol))
                        .collect()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    let mut out = String::new();
    for rec in shards.iter().flatten() {
        out.push_str(&to_json_line(rec)?);
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_forms() {
        assert_eq!(parse_axis("-1:1:3").unwrap(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(parse_axis("0.5").unwrap(), vec![0.5]);
        assert_eq!(parse_axis("1,2").unwrap(), vec![1.0, 2.0]);
        assert!(parse_axis("1:2").is_err());
        assert!(parse_axis("0:1:0").is_err());
    }
}
