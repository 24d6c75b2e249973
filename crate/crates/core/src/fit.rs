//! Least-squares line fits for scaling-law analysis.

/// Slope/intercept of an ordinary least-squares line, with the RMS residual
/// of the dependent variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub rms_residual: f64,
}

/// Fit y = slope·x + intercept. Needs at least two distinct x values.
pub fn linear_fit(points: &[(f64, f64)]) -> LineFit {
    let n = points.len() as f64;
    assert!(points.len() >= 2, "need at least two points to fit a line");
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = points
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).powi(2))
        .sum();
    LineFit {
        slope,
        intercept,
        rms_residual: (ss_res / n).sqrt(),
    }
}

/// Fit ln y vs ln x; the slope is the power-law exponent. Points with
/// non-positive coordinates are skipped.
pub fn log_log_fit(points: &[(f64, f64)]) -> LineFit {
    let logged: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.0 > 0.0 && p.1 > 0.0)
        .map(|p| (p.0.ln(), p.1.ln()))
        .collect();
    linear_fit(&logged)
}
