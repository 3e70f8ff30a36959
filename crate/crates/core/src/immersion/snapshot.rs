//! Columnar text snapshots of discrete immersions.
//!
//! Every float is written with 17 significant digits, which identifies an
//! `f64` uniquely, so a write/read cycle reproduces the samples bit for bit.

use super::{Blend, Chart, ChartGrid, DiscreteImmersion};
use crate::error::{Error, Result};
use std::fmt::Write as _;

const MAGIC: &str = "# willmore immersion snapshot v1";
const COLUMNS: &str = "chart,i,j,x,y,phi1,phi2,phi3";

pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Renders the snapshot text.
pub fn write_snapshot(im: &DiscreteImmersion) -> String {
    let g = im.grid();
    let mut s = String::with_capacity(2 * g.len() * 120);
    let _ = writeln!(s, "{MAGIC}");
    let _ = writeln!(s, "# n = {}", im.n);
    let _ = writeln!(s, "# order = {}", im.order);
    let _ = writeln!(s, "# blend_inner = {}", format_float(im.blend.inner));
    let _ = writeln!(s, "# blend_outer = {}", format_float(im.blend.outer));
    let _ = writeln!(s, "{COLUMNS}");
    for c in Chart::BOTH {
        for (k, p) in im.chart(c).iter().enumerate() {
            let (i, j) = g.ij(k);
            let z = g.z(k);
            let _ = writeln!(
                s,
                "{},{i},{j},{},{},{},{},{}",
                c.id(),
                format_float(z[0]),
                format_float(z[1]),
                format_float(p[0]),
                format_float(p[1]),
                format_float(p[2])
            );
        }
    }
    s
}

fn header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, key: &str) -> Result<&'a str> {
    let (no, line) = lines.next().ok_or_else(|| Error::Parse(format!("missing header `{key}`")))?;
    line.strip_prefix("# ")
        .and_then(|r| r.strip_prefix(key))
        .and_then(|r| r.trim_start().strip_prefix('='))
        .map(str::trim)
        .ok_or_else(|| Error::Parse(format!("line {}: expected `# {key} = ...`", no + 1)))
}

fn num<T: std::str::FromStr>(s: &str, no: usize) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    s.trim().parse().map_err(|e| Error::Parse(format!("line {}: `{s}`: {e}", no + 1)))
}

/// Parses snapshot text written by [`write_snapshot`].
pub fn read_snapshot(text: &str) -> Result<DiscreteImmersion> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, l)) if l.trim() == MAGIC => {}
        _ => return Err(Error::Parse("not an immersion snapshot".into())),
    }
    let n: usize = num(header(&mut lines, "n")?, 1)?;
    let order: usize = num(header(&mut lines, "order")?, 2)?;
    let inner: f64 = num(header(&mut lines, "blend_inner")?, 3)?;
    let outer: f64 = num(header(&mut lines, "blend_outer")?, 4)?;
    match lines.next() {
        Some((_, l)) if l.trim() == COLUMNS => {}
        _ => return Err(Error::Parse("missing column header".into())),
    }
    if n < 8 || !n.is_multiple_of(2) {
        return Err(Error::Parse(format!("invalid resolution n = {n}")));
    }
    let g = ChartGrid::new(n);
    let mut charts = [vec![[f64::NAN; 3]; g.len()], vec![[f64::NAN; 3]; g.len()]];
    let mut seen = [vec![false; g.len()], vec![false; g.len()]];
    for (no, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 8 {
            return Err(Error::Parse(format!("line {}: expected 8 columns", no + 1)));
        }
        let c: usize = num(f[0], no)?;
        let i: usize = num(f[1], no)?;
        let j: usize = num(f[2], no)?;
        if c > 1 || i > n || j > n {
            return Err(Error::Parse(format!("line {}: node out of range", no + 1)));
        }
        let k = g.index(i, j);
        if seen[c][k] {
            return Err(Error::Parse(format!("line {}: duplicate node", no + 1)));
        }
        seen[c][k] = true;
        charts[c][k] = [num(f[5], no)?, num(f[6], no)?, num(f[7], no)?];
    }
    if seen.iter().flatten().any(|s| !s) {
        return Err(Error::Parse("snapshot is missing nodes".into()));
    }
    let [north, south] = charts;
    Ok(DiscreteImmersion { n, blend: Blend { inner, outer }, order, north, south })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let im = DiscreteImmersion::from_sphere_map(16, |p| [p[0] / 3.0, p[1] * 1e-7 + 0.1, p[2].exp()]);
        let back = read_snapshot(&write_snapshot(&im)).unwrap();
        assert_eq!(back, im);
        for (a, b) in im.north.iter().zip(&back.north) {
            for k in 0..3 {
                assert_eq!(a[k].to_bits(), b[k].to_bits());
            }
        }
    }

    #[test]
    fn truncated_file_is_rejected() {
        let im = DiscreteImmersion::round_sphere(8, 1.0, [0.0; 3]);
        let text = write_snapshot(&im);
        let cut: String = text.lines().take(40).map(|l| format!("{l}\n")).collect();
        assert!(read_snapshot(&cut).is_err());
    }
}
