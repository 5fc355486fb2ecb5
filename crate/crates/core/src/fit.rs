//! Least-squares line fits.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
}

/// Fits `y ≈ slope·x + intercept`; `None` with fewer than two distinct `x`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    if n < 2 || xs.iter().all(|&x| x == xs[0]) {
        return None;
    }
    // Centering keeps the normal equations well conditioned.
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let a = DMatrix::from_fn(n, 1, |r, _| xs[r] - mx);
    let b = DVector::from_iterator(n, ys.iter().map(|y| y - my));
    let slope = a.svd(true, true).solve(&b, 0.0).ok()?[0];
    Some(LineFit { slope, intercept: my - slope * mx })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let xs: Vec<f64> = (0..10).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.75 * x - 2.0).collect();
        let f = fit_line(&xs, &ys).unwrap();
        assert!((f.slope - 0.75).abs() < 1e-14);
        assert!((f.intercept + 2.0).abs() < 1e-13);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(fit_line(&[1.0], &[2.0]).is_none());
        assert!(fit_line(&[1.0, 1.0], &[2.0, 3.0]).is_none());
    }
}
