//! Monotone cubic (Fritsch-Carlson) interpolation on an increasing abscissa.
//!
//! Used to resample fields under the scaling transform. Slope limiting keeps
//! the interpolant free of overshoot, so rescaling a nonnegative decaying
//! profile cannot create spurious extrema.

use alloc::vec::Vec;

pub(crate) struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    slope: Vec<f64>,
}

impl MonotoneCubic {
    /// `x` strictly increasing, `y` same length (≥ 2).
    pub(crate) fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        let n = x.len();
        debug_assert!(n >= 2 && n == y.len());
        let mut delta = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            delta.push((y[i + 1] - y[i]) / (x[i + 1] - x[i]));
        }
        let mut slope = Vec::with_capacity(n);
        slope.push(delta[0]);
        for i in 1..n - 1 {
            if delta[i - 1] * delta[i] <= 0.0 {
                slope.push(0.0);
            } else {
                // Weighted harmonic mean keeps the interpolant monotone on
                // monotone data (Fritsch-Carlson condition).
                let w1 = 2.0 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
                let w2 = (x[i + 1] - x[i]) + 2.0 * (x[i] - x[i - 1]);
                slope.push((w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]));
            }
        }
        slope.push(delta[n - 2]);
        Self { x, y, slope }
    }

    /// Evaluate at `t`; clamps to the end values outside the abscissa range.
    pub(crate) fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        if t <= self.x[0] {
            return self.y[0];
        }
        if t >= self.x[n - 1] {
            return self.y[n - 1];
        }
        // partition_point: first index with x > t, so the interval is [i-1, i].
        let hi = self.x.partition_point(|&v| v <= t);
        let (i0, i1) = (hi - 1, hi);
        let h = self.x[i1] - self.x[i0];
        let s = (t - self.x[i0]) / h;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.y[i0] + h10 * h * self.slope[i0] + h01 * self.y[i1] + h11 * h * self.slope[i1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math;
    use alloc::vec;

    #[test]
    fn reproduces_knot_values_exactly() {
        let x = vec![0.0, 0.5, 1.3, 2.0];
        let y = vec![1.0, 0.4, 0.7, -0.2];
        let c = MonotoneCubic::new(x.clone(), y.clone());
        for (xi, yi) in x.iter().zip(&y) {
            assert_eq!(c.eval(*xi), *yi);
        }
    }

    #[test]
    fn monotone_data_stays_monotone() {
        let x: Vec<f64> = (0..40).map(|i| 0.1 * i as f64).collect();
        let y: Vec<f64> = x.iter().map(|&r| 1.0 / (1.0 + r)).collect();
        let c = MonotoneCubic::new(x, y);
        let mut prev = f64::INFINITY;
        for k in 0..400 {
            let v = c.eval(0.01 * k as f64);
            assert!(v <= prev + 1e-15, "overshoot at {k}");
            prev = v;
        }
    }

    #[test]
    fn cubic_accuracy_on_smooth_profile() {
        let x: Vec<f64> = (0..200).map(|i| 0.02 * i as f64).collect();
        let y: Vec<f64> = x.iter().map(|&r| math::exp(-r * r)).collect();
        let c = MonotoneCubic::new(x, y);
        let mut worst = 0.0f64;
        for k in 0..1000 {
            let t = 0.00397 * k as f64;
            let err = (c.eval(t) - math::exp(-t * t)).abs();
            worst = worst.max(err);
        }
        assert!(worst < 2e-4, "interp error {worst}");
    }
}
