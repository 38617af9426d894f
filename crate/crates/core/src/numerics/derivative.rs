use num_complex::Complex64;

/// Fourth-order finite-difference derivative of uniformly spaced samples.
///
/// Interior points use the centered 5-point stencil, the two points at each
/// end the matching one-sided stencils. Fewer than five samples fall back to
/// second order.
pub fn differentiate_samples(samples: &[Complex64], dx: f64) -> Vec<Complex64> {
    let n = samples.len();
    let f = samples;
    match n {
        0 => Vec::new(),
        1 => vec![Complex64::new(0.0, 0.0)],
        2 => vec![(f[1] - f[0]) / dx; 2],
        3 | 4 => (0..n)
            .map(|j| {
                if j == 0 {
                    (f[0] * -3.0 + f[1] * 4.0 - f[2]) / (2.0 * dx)
                } else if j == n - 1 {
                    (f[n - 3] - f[n - 2] * 4.0 + f[n - 1] * 3.0) / (2.0 * dx)
                } else {
                    (f[j + 1] - f[j - 1]) / (2.0 * dx)
                }
            })
            .collect(),
        _ => (0..n)
            .map(|j| {
                let d = 12.0 * dx;
                if j == 0 {
                    (f[0] * -25.0 + f[1] * 48.0 - f[2] * 36.0 + f[3] * 16.0 - f[4] * 3.0) / d
                } else if j == 1 {
                    (f[0] * -3.0 - f[1] * 10.0 + f[2] * 18.0 - f[3] * 6.0 + f[4]) / d
                } else if j == n - 2 {
                    let g = &f[n - 5..];
                    (g[4] * 3.0 + g[3] * 10.0 - g[2] * 18.0 + g[1] * 6.0 - g[0]) / d
                } else if j == n - 1 {
                    let g = &f[n - 5..];
                    (g[4] * 25.0 - g[3] * 48.0 + g[2] * 36.0 - g[1] * 16.0 + g[0] * 3.0) / d
                } else {
                    (f[j - 2] - f[j - 1] * 8.0 + f[j + 1] * 8.0 - f[j + 2]) / d
                }
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_quartics() {
        let dx = 0.1;
        let p = |x: f64| Complex64::new(x.powi(4) - 2.0 * x, 0.5 * x.powi(3));
        let dp = |x: f64| Complex64::new(4.0 * x.powi(3) - 2.0, 1.5 * x * x);
        let xs: Vec<f64> = (0..11).map(|j| j as f64 * dx).collect();
        let samples: Vec<Complex64> = xs.iter().map(|&x| p(x)).collect();
        for (d, &x) in differentiate_samples(&samples, dx).iter().zip(&xs) {
            assert!((d - dp(x)).norm() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn fourth_order_on_smooth_function() {
        let err = |n: usize| {
            let dx = 1.0 / n as f64;
            let samples: Vec<Complex64> =
                (0..=n).map(|j| Complex64::new(0.0, j as f64 * dx).exp()).collect();
            differentiate_samples(&samples, dx)
                .iter()
                .enumerate()
                .map(|(j, d)| (d - Complex64::i() * Complex64::new(0.0, j as f64 * dx).exp()).norm())
                .fold(0.0, f64::max)
        };
        let ratio = err(50) / err(100);
        assert!(ratio > 14.0, "{ratio}");
    }

    #[test]
    fn short_inputs() {
        let s = [Complex64::new(1.0, 0.0), Complex64::new(3.0, 0.0), Complex64::new(5.0, 0.0)];
        assert!(differentiate_samples(&s, 0.5).iter().all(|d| *d == Complex64::new(4.0, 0.0)));
    }
}
