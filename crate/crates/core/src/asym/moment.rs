//! Error terms on a grid, second moments and growth exponents.

use std::io::{self, Write};

use num_bigint::BigInt;
use rayon::prelude::*;

use super::CompensatedSum;
use crate::arith::SievedSequence;
use crate::error::{Error, Result};

/// One grid point of an [`AsymptoticReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub x: u64,
    pub s: BigInt,
    pub m: f64,
    pub delta: f64,
    pub ratio: f64,
}

/// `X` and `int_1^X Delta^2`, with the exponent fitted to all rows so far.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentRow {
    pub x: u64,
    pub moment: f64,
    pub exponent: Option<f64>,
}

/// Sampled `S(x)`, `M(x)`, `Delta(x) = S(x) - M(x)` and `S/M`.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticReport {
    pub rows: Vec<ReportRow>,
    /// Set when `M` is only the leading term of the main term.
    pub note: Option<String>,
    pub moments: Vec<MomentRow>,
}

impl AsymptoticReport {
    pub fn last(&self) -> Option<&ReportRow> {
        self.rows.last()
    }

    /// Columns `x,S,M,delta,ratio`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "x,S,M,delta,ratio")?;
        for r in &self.rows {
            writeln!(w, "{},{},{:e},{:e},{}", r.x, r.s, r.m, r.delta, r.ratio)?;
        }
        Ok(())
    }

    /// Columns `X,moment,fitted_exponent_so_far`.
    pub fn write_moment_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "X,moment,fitted_exponent_so_far")?;
        for r in &self.moments {
            let e = r.exponent.map(|e| e.to_string()).unwrap_or_default();
            writeln!(w, "{},{:e},{}", r.x, r.moment, e)?;
        }
        Ok(())
    }
}

/// Integers `round(x_min * ratio^k)` up to `x_max`, deduplicated, ending at `x_max`.
pub fn geometric_grid(x_min: u64, x_max: u64, ratio: f64) -> Result<Vec<u64>> {
    if x_min == 0 || x_min > x_max {
        return Err(Error::invalid(format!("grid needs 1 <= x_min <= x_max, got {x_min}..{x_max}")));
    }
    if !(ratio > 1.0) {
        return Err(Error::invalid(format!("grid ratio must exceed 1, got {ratio}")));
    }
    let mut grid = Vec::new();
    let mut k = 0;
    loop {
        let x = (x_min as f64 * ratio.powi(k)).round() as u64;
        if x >= x_max {
            break;
        }
        if grid.last() != Some(&x) {
            grid.push(x);
        }
        k += 1;
    }
    grid.push(x_max);
    Ok(grid)
}

/// `Delta(x) = S(x) - M(x)` on the grid.
pub fn error_term(
    seq: &SievedSequence,
    main: impl Fn(f64) -> f64 + Sync,
    grid: &[u64],
    note: Option<String>,
) -> Result<AsymptoticReport> {
    let bound = seq.bound() as u64;
    if let Some(&x) = grid.iter().find(|&&x| x == 0 || x > bound) {
        return Err(Error::invalid(format!("grid point {x} outside [1, {bound}]")));
    }
    let rows = grid
        .par_iter()
        .map(|&x| {
            let s = seq.summatory(x as usize);
            let m = main(x as f64);
            let delta = seq.summatory_f64(x as usize) - m;
            let ratio = seq.summatory_f64(x as usize) / m;
            ReportRow { x, s, m, delta, ratio }
        })
        .collect();
    Ok(AsymptoticReport { rows, note, moments: Vec::new() })
}

// 5-point Gauss-Legendre on [-1, 1]
const GL_NODES: [f64; 5] =
    [0.0, -0.538_469_310_105_683_1, 0.538_469_310_105_683_1, -0.906_179_845_938_664, 0.906_179_845_938_664];
const GL_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

fn gauss5(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let h = 0.5 * (b - a);
    let c = 0.5 * (a + b);
    h * GL_NODES.iter().zip(&GL_WEIGHTS).map(|(x, w)| w * f(c + h * x)).sum::<f64>()
}

fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, whole: f64, depth: u32) -> f64 {
    let mid = 0.5 * (a + b);
    let left = gauss5(f, a, mid);
    let right = gauss5(f, mid, b);
    let both = left + right;
    if depth == 0 || (both - whole).abs() <= 1e-10 * both.abs() {
        both
    } else {
        adaptive(f, a, mid, left, depth - 1) + adaptive(f, mid, b, right, depth - 1)
    }
}

/// `int_n^{n+1} (S(n) - M(x))^2 dx`.
fn unit_interval(seq: &SievedSequence, main: &(impl Fn(f64) -> f64 + Sync), n: u64) -> f64 {
    let s = seq.summatory_f64(n as usize);
    let g = |x: f64| {
        let d = s - main(x);
        d * d
    };
    let (a, b) = (n as f64, (n + 1) as f64);
    adaptive(&g, a, b, gauss5(&g, a, b), 8)
}

/// `int_1^X Delta(x)^2 dx` at each `X`, with running exponent fits.
///
/// Unit intervals are integrated independently and summed in index order,
/// so the result does not depend on the thread count.
pub fn moment_curve(seq: &SievedSequence, main: impl Fn(f64) -> f64 + Sync, xs: &[u64]) -> Result<Vec<MomentRow>> {
    let bound = seq.bound() as u64;
    if xs.is_empty() {
        return Ok(Vec::new());
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("moment points must be strictly increasing"));
    }
    let x_max = *xs.last().expect("nonempty");
    if xs[0] == 0 || x_max > bound {
        return Err(Error::invalid(format!("moment points must lie in [1, {bound}]")));
    }
    let pieces: Vec<f64> = (1..x_max).into_par_iter().map(|n| unit_interval(seq, &main, n)).collect();

    let mut acc = CompensatedSum::default();
    let mut out = Vec::with_capacity(xs.len());
    let mut next = 1u64;
    let mut points: Vec<(f64, f64)> = Vec::new();
    for &x in xs {
        while next < x {
            acc.add(pieces[(next - 1) as usize]);
            next += 1;
        }
        let moment = acc.value().max(0.0);
        if moment > 0.0 {
            points.push((x as f64, moment));
        }
        let exponent = if points.len() >= 2 { empirical_exponent(&points).ok() } else { None };
        out.push(MomentRow { x, moment, exponent });
    }
    Ok(out)
}

/// `int_1^X (S(x) - M(x))^2 dx` with `S` piecewise constant.
pub fn second_moment(seq: &SievedSequence, main: impl Fn(f64) -> f64 + Sync, x: u64) -> Result<f64> {
    Ok(moment_curve(seq, main, &[x])?[0].moment)
}

/// Least-squares slope of `log V` against `log X`.
pub fn empirical_exponent(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::invalid("exponent fit needs at least two points"));
    }
    if points.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::invalid("exponent fit needs strictly increasing X"));
    }
    if let Some(&(x, v)) = points.iter().find(|p| !(p.1 > 0.0) || !(p.0 > 0.0)) {
        return Err(Error::invalid(format!("exponent fit needs positive values, got ({x}, {v})")));
    }
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let lv: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let mv = lv.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&lv).map(|(x, v)| (x - mx) * (v - mv)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones(n: usize) -> SievedSequence {
        SievedSequence::from_values(vec![1; n])
    }

    #[test]
    fn grid_shape() {
        let g = geometric_grid(1, 100, 2f64.powf(0.25)).unwrap();
        assert_eq!(g[0], 1);
        assert_eq!(*g.last().unwrap(), 100);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(geometric_grid(0, 10, 2.0).is_err());
        assert!(geometric_grid(1, 10, 1.0).is_err());
    }

    #[test]
    fn exact_main_term_gives_zero_delta() {
        let seq = ones(50);
        let report = error_term(&seq, |x| x.floor(), &[1, 7, 50], None).unwrap();
        assert!(report.rows.iter().all(|r| r.delta == 0.0));
        assert!(error_term(&seq, |x| x, &[51], None).is_err());
    }

    #[test]
    fn floor_minus_x() {
        let seq = ones(100);
        let report = error_term(&seq, |x| x, &[1, 10, 100], None).unwrap();
        for r in &report.rows {
            assert!(r.delta <= 0.0 && r.delta > -1.0);
        }
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x,S,M,delta,ratio\n1,1,"));
    }

    #[test]
    fn moment_examples() {
        let seq = ones(10);
        assert!((second_moment(&seq, |x| x, 10).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(second_moment(&seq, |x| x.floor(), 10).unwrap(), 0.0);
        // S = 1 on [1, 2) only for the indicator of n = 1; with M = 0 the moment is int S^2
        let single = SievedSequence::from_values(vec![1, 0, 0, 0, 0]);
        assert!((second_moment(&single, |_| 0.0, 5).unwrap() - 4.0).abs() < 1e-12);
        assert_eq!(second_moment(&seq, |x| x, 1).unwrap(), 0.0);
    }

    #[test]
    fn moment_curve_is_monotone() {
        let seq = ones(1000);
        let rows = moment_curve(&seq, |x| 0.5 * x, &[10, 100, 1000]).unwrap();
        assert!(rows.windows(2).all(|w| w[0].moment <= w[1].moment));
        assert!(rows[0].exponent.is_none());
        // Delta ~ x / 2, so the moment grows like X^3 up to lower-order terms
        assert!((rows[2].exponent.unwrap() - 3.0).abs() < 0.1, "{rows:?}");
    }

    #[test]
    fn exponent_fits() {
        assert!((empirical_exponent(&[(2.0, 8.0), (4.0, 64.0)]).unwrap() - 3.0).abs() < 1e-12);
        assert!(empirical_exponent(&[(2.0, 5.0), (9.0, 5.0)]).unwrap().abs() < 1e-12);
        let pts: Vec<(f64, f64)> = [3.0f64, 30.0, 300.0].iter().map(|&x| (x, 7.0 * x.powf(2.5))).collect();
        assert!((empirical_exponent(&pts).unwrap() - 2.5).abs() < 1e-12);
        assert!(empirical_exponent(&[(1.0, 1.0)]).is_err());
        assert!(empirical_exponent(&[(1.0, 1.0), (2.0, 0.0)]).is_err());
        assert!(empirical_exponent(&[(2.0, 1.0), (1.0, 2.0)]).is_err());
    }
}
