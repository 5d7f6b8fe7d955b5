//! CSV writing and reading.
//!
//! All files are RFC-4180-style, UTF-8, '.' decimal separator; values with
//! magnitude below 1e-3 are written in scientific notation. Formatting is
//! via Rust's shortest-roundtrip float printing, so identical runs produce
//! byte-identical files.

use std::io::Write;
use std::path::Path;

use ghost_core::ssa::SsaSweepPoint;
use ghost_core::{PathWeightSample, PhaseCurves, ScalingCurve, TrajectoryRecord};

use crate::CliError;

/// Canonical number formatting for CSV cells.
pub fn fmt_value(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.is_nan() {
        "nan".to_string()
    } else if v.abs() < 1e-3 {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(contents.as_bytes())?;
    Ok(())
}

/// `phi_s,mean_TE,sem,n,n_censored` rows of an extinction-time sweep.
pub fn ssa_sweep_csv(points: &[SsaSweepPoint]) -> String {
    let mut out = String::from("phi_s,mean_TE,sem,n,n_censored\r\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{},{}\r\n",
            fmt_value(p.phi_s),
            fmt_value(p.stats.mean),
            fmt_value(p.stats.sem),
            p.stats.n_uncensored(),
            p.stats.n_censored
        ));
    }
    out
}

/// Shared figure schema: `phi,value,spread,n,provenance,model`.
pub fn curve_csv(curves: &[(&ScalingCurve, &str)]) -> String {
    let mut out = String::from("phi,value,spread,n,provenance,model\r\n");
    for (curve, model) in curves {
        for p in &curve.points {
            out.push_str(&format!(
                "{},{},{},{},{},{}\r\n",
                fmt_value(p.phi),
                fmt_value(p.value),
                fmt_value(p.spread),
                p.n,
                curve.provenance.as_str(),
                model
            ));
        }
    }
    out
}

/// `t,x,p,S` samples of one orbit.
pub fn orbit_csv(rec: &TrajectoryRecord) -> String {
    let mut out = String::from("t,x,p,S\r\n");
    for s in &rec.samples {
        out.push_str(&format!(
            "{},{},{},{}\r\n",
            fmt_value(s.t),
            fmt_value(s.x),
            fmt_value(s.p),
            fmt_value(s.action)
        ));
    }
    out
}

/// `x,p_H,p1,p2` of the phase-space curves.
pub fn curves_csv(pc: &PhaseCurves) -> String {
    let mut out = String::from("x,p_H,p1,p2\r\n");
    for i in 0..pc.x.len() {
        out.push_str(&format!(
            "{},{},{},{}\r\n",
            fmt_value(pc.x[i]),
            fmt_value(pc.p_h[i]),
            fmt_value(pc.p1[i]),
            fmt_value(pc.p2[i])
        ));
    }
    out
}

/// `p0,action,log_weight,weight`; an underflowed weight prints empty.
pub fn weights_csv(samples: &[PathWeightSample]) -> String {
    let mut out = String::from("p0,action,log_weight,weight\r\n");
    for s in samples {
        out.push_str(&format!(
            "{},{},{},{}\r\n",
            fmt_value(s.p0),
            fmt_value(s.action),
            fmt_value(s.log_weight),
            s.weight.map(fmt_value).unwrap_or_default()
        ));
    }
    out
}

/// Parsed scaling-curve CSV: accepts both the sweep schema
/// (`phi_s,mean_TE,sem,n[,n_censored]`) and the figure schema
/// (`phi,value,spread,n[,provenance,model]`).
pub fn read_curve_csv(path: &Path) -> Result<Vec<(f64, f64, f64, usize)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::config(format!("{}: empty file", path.display())))?
        .trim_end_matches('\r');
    let cols: Vec<&str> = header.split(',').collect();
    let known = (cols.first(), cols.get(1), cols.get(2), cols.get(3));
    match known {
        (Some(&"phi_s"), Some(&"mean_TE"), Some(&"sem"), Some(&"n"))
        | (Some(&"phi"), Some(&"value"), Some(&"spread"), Some(&"n")) => {}
        _ => {
            return Err(CliError::config(format!(
                "{}: unrecognized curve header `{header}`",
                path.display()
            )))
        }
    }
    let mut out = Vec::new();
    for (lineno, raw) in lines.enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < 4 {
            return Err(CliError::config(format!(
                "{}:{}: expected at least 4 fields",
                path.display(),
                lineno + 2
            )));
        }
        let parse = |s: &str, what: &str| -> Result<f64, CliError> {
            s.parse().map_err(|_| {
                CliError::config(format!("{}:{}: bad {what}: {s}", path.display(), lineno + 2))
            })
        };
        let phi = parse(fields[0], "phi")?;
        let value = parse(fields[1], "value")?;
        let spread = parse(fields[2], "spread")?;
        let n: usize = fields[3].parse().map_err(|_| {
            CliError::config(format!("{}:{}: bad count: {}", path.display(), lineno + 2, fields[3]))
        })?;
        out.push((phi, value, spread, n));
    }
    Ok(out)
}
