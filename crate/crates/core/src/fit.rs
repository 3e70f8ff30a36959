//! Convergence-order fits.

/// Least-squares slope of `ln y` against `ln x`. Pairs with a non-positive
/// or non-finite entry are skipped; fewer than two usable pairs give NaN.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0 && a.is_finite() && b.is_finite())
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Convergence order under grid refinement: the slope of `err` against
/// `1/n`.
pub fn refinement_order(n: &[usize], err: &[f64]) -> f64 {
    let h: Vec<f64> = n.iter().map(|&k| 1.0 / k as f64).collect();
    loglog_slope(&h, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_laws() {
        let x = [0.2, 0.1, 0.05, 0.025];
        let y: Vec<f64> = x.iter().map(|v: &f64| 7.0 * v.powi(3)).collect();
        assert!((loglog_slope(&x, &y) - 3.0).abs() < 1e-12);
        let e = [1.0, 1.0 / 16.0, 1.0 / 256.0];
        assert!((refinement_order(&[64, 128, 256], &e) - 4.0).abs() < 1e-12);
        assert!(loglog_slope(&[1.0], &[1.0]).is_nan());
    }
}
