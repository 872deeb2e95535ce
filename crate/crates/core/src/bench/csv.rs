use std::io::Write;

use super::dirichlet::BenchmarkRow;
use super::sweep::{TradeoffCurve, TradeoffPoint};
use crate::error::{Error, Result};

pub const CURVE_HEADER: &str = "beta,utility_kl,mi_input,mi_output,objective,empirical_agreement";
pub const BENCHMARK_HEADER: &str = "beta,utility_kl,mi_input,mi_output,objective,empirical_agreement,a_param,b_param,replications";

/// Six significant digits, shortest form (like C's `%g`).
pub fn format_g6(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (5 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn row(values: &[f64]) -> String {
    values.iter().map(|&v| format_g6(v)).collect::<Vec<_>>().join(",")
}

pub fn emit_curve_csv<W: Write>(curve: &TradeoffCurve, mut out: W) -> Result<()> {
    writeln!(out, "{CURVE_HEADER}")?;
    for p in curve.points() {
        writeln!(out, "{}", row(&p.values()))?;
    }
    out.flush()?;
    Ok(())
}

pub fn emit_benchmark_csv<W: Write>(rows: &[BenchmarkRow], mut out: W) -> Result<()> {
    writeln!(out, "{BENCHMARK_HEADER}")?;
    for r in rows {
        writeln!(out, "{},{},{},{}", row(&r.point.values()), format_g6(r.a_param), format_g6(r.b_param), r.replications)?;
    }
    out.flush()?;
    Ok(())
}

fn records<'a>(text: &'a str, header: &str) -> Result<impl Iterator<Item = (usize, Vec<&'a str>)>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == header => {}
        _ => return Err(Error::domain(format!("expected header `{header}`"))),
    }
    Ok(lines.map(|(i, l)| (i + 1, l.trim().split(',').collect())))
}

fn number(line: usize, field: &str) -> Result<f64> {
    field.trim().parse().map_err(|_| Error::domain(format!("line {line}: `{field}` is not a number")))
}

fn point(line: usize, fields: &[&str]) -> Result<TradeoffPoint> {
    let mut v = [0.0; 6];
    for (slot, f) in v.iter_mut().zip(fields) {
        *slot = number(line, f)?;
    }
    Ok(TradeoffPoint::from_values(v))
}

pub fn parse_curve_csv(text: &str) -> Result<TradeoffCurve> {
    let mut points = Vec::new();
    for (line, fields) in records(text, CURVE_HEADER)? {
        if fields.len() != 6 {
            return Err(Error::domain(format!("line {line}: expected 6 fields, found {}", fields.len())));
        }
        points.push(point(line, &fields)?);
    }
    TradeoffCurve::new(points)
}

pub fn parse_benchmark_csv(text: &str) -> Result<Vec<BenchmarkRow>> {
    let mut rows = Vec::new();
    for (line, fields) in records(text, BENCHMARK_HEADER)? {
        if fields.len() != 9 {
            return Err(Error::domain(format!("line {line}: expected 9 fields, found {}", fields.len())));
        }
        rows.push(BenchmarkRow {
            point: point(line, &fields[..6])?,
            a_param: number(line, fields[6])?,
            b_param: number(line, fields[7])?,
            replications: fields[8]
                .trim()
                .parse()
                .map_err(|_| Error::domain(format!("line {line}: bad replication count `{}`", fields[8])))?,
        });
    }
    Ok(rows)
}
