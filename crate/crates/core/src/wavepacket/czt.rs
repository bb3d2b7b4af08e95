//! Chirp-z evaluation of `y_j = Σ_n a_n e^{i s n j θ}` (s = ±1) for arbitrary
//! θ, via Bluestein's convolution.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub struct Czt {
    n: usize,
    m: usize,
    len: usize,
    pre: Vec<Complex64>,
    post: Vec<Complex64>,
    kernel_hat: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// e^{i·sign·θ·q/2}.
fn chirp(theta: f64, q: u64, sign: f64) -> Complex64 {
    Complex64::cis(sign * 0.5 * theta * q as f64)
}

impl Czt {
    /// `n` inputs, `m` outputs, step `theta`, exponent sign `sign` (±1).
    pub fn new(n: usize, m: usize, theta: f64, sign: f64) -> Self {
        let len = (n + m - 1).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        let pre: Vec<Complex64> = (0..n as u64).map(|i| chirp(theta, i * i, sign)).collect();
        let post: Vec<Complex64> = (0..m as u64).map(|j| chirp(theta, j * j, sign)).collect();
        // kernel e^{−i s θ q²/2} at offsets q = j − n in [−(n−1), m−1], wrapped
        let mut kernel = vec![Complex64::new(0.0, 0.0); len];
        for (q, v) in kernel.iter_mut().enumerate().take(m) {
            *v = chirp(theta, (q * q) as u64, -sign);
        }
        for q in 1..n {
            kernel[len - q] = chirp(theta, (q * q) as u64, -sign);
        }
        forward.process(&mut kernel);
        let scale = 1.0 / len as f64;
        for v in &mut kernel {
            *v *= scale;
        }
        Czt { n, m, len, pre, post, kernel_hat: kernel, forward, inverse }
    }

    /// Evaluates the transform of `input` (length `n`) into `out` (length `m`).
    pub fn apply(&self, input: &[Complex64], out: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        assert_eq!(input.len(), self.n);
        assert_eq!(out.len(), self.m);
        scratch.clear();
        scratch.resize(self.len, Complex64::new(0.0, 0.0));
        for ((s, a), p) in scratch.iter_mut().zip(input).zip(&self.pre) {
            *s = a * p;
        }
        self.forward.process(scratch);
        for (s, k) in scratch.iter_mut().zip(&self.kernel_hat) {
            *s *= k;
        }
        self.inverse.process(scratch);
        for ((o, s), p) in out.iter_mut().zip(scratch.iter()).zip(&self.post) {
            *o = s * p;
        }
    }
}
