//! Small numeric helpers shared across modules.

/// x·ln(y) with the convention that a zero weight contributes nothing,
/// even when ln(y) diverges (0·ln 0 ≡ 0).
pub fn x_ln_y(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln()
    }
}

/// x·ln(x) with 0·ln 0 ≡ 0.
pub fn x_ln_x(x: f64) -> f64 {
    x_ln_y(x, x)
}

/// Log-spaced grid of `n` points from `lo` to `hi` (both > 0, inclusive).
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && lo > 0.0 && hi > lo);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Linear grid of `n` points from `lo` to `hi` (inclusive).
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xlogy_conventions() {
        assert_eq!(x_ln_x(0.0), 0.0);
        assert_eq!(x_ln_y(0.0, 0.0), 0.0);
        assert!(x_ln_y(1.0, 0.0).is_infinite());
        assert!((x_ln_x(1.0)).abs() < 1e-15);
    }

    #[test]
    fn grids() {
        let g = logspace(1e-2, 1e2, 5);
        assert!((g[0] - 1e-2).abs() < 1e-15 && (g[4] - 1e2).abs() < 1e-12);
        assert!((g[2] - 1.0).abs() < 1e-12);
        let l = linspace(0.0, 1.0, 3);
        assert_eq!(l, vec![0.0, 0.5, 1.0]);
    }
}
