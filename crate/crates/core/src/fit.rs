//! Least-squares slope fits on log-log data.

/// Slope of log y against log x, using only points with y > floor.
/// Returns `None` with fewer than three usable points.
pub fn loglog_slope(xs: &[f64], ys: &[f64], floor: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(&x, &y)| x > 0.0 && y > floor && y.is_finite())
        .map(|(&x, &y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Worst (largest) slope over the two tails t > 0 and t < 0 of |t|-indexed data.
pub fn two_sided_slope(ts: &[f64], ys: &[f64], floor: f64) -> Option<f64> {
    let side = |pos: bool| {
        let (x, y): (Vec<f64>, Vec<f64>) = ts
            .iter()
            .zip(ys)
            .filter(|(&t, _)| (t > 0.0) == pos)
            .map(|(&t, &y)| (t.abs(), y))
            .unzip();
        loglog_slope(&x, &y, floor)
    };
    match (side(true), side(false)) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_power_law() {
        let xs: Vec<f64> = (1..20).map(|k| 10.0 * k as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(-2.5)).collect();
        assert!((loglog_slope(&xs, &ys, 0.0).unwrap() + 2.5).abs() < 1e-12);
        assert!(loglog_slope(&xs[..2], &ys[..2], 0.0).is_none());
    }
}
