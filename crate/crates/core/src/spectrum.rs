//! Unnormalised 2D DFT on row-major square buffers, backed by rustfft.
//!
//! Forward: `X[k,l] = sum x[m,n] exp(-j2pi(mk/M + nl/N))`.
//! Inverse: `x[m,n] = sum X[k,l] exp(+j2pi(mk/M + nl/N))` (no 1/MN factor).

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

pub struct Fft2d {
    size: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    column: Vec<Complex64>,
}

impl Fft2d {
    pub fn new(size: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft(size, FftDirection::Forward);
        let inverse = planner.plan_fft(size, FftDirection::Inverse);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Fft2d {
            size,
            forward,
            inverse,
            scratch: vec![Complex64::default(); scratch_len],
            column: vec![Complex64::default(); size],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn forward(&mut self, data: &mut [Complex64]) {
        let plan = Arc::clone(&self.forward);
        self.process(plan.as_ref(), data);
    }

    pub fn inverse(&mut self, data: &mut [Complex64]) {
        let plan = Arc::clone(&self.inverse);
        self.process(plan.as_ref(), data);
    }

    fn process(&mut self, plan: &dyn Fft<f64>, data: &mut [Complex64]) {
        let s = self.size;
        assert_eq!(data.len(), s * s, "buffer does not match the planned size");
        for row in data.chunks_exact_mut(s) {
            plan.process_with_scratch(row, &mut self.scratch);
        }
        for col in 0..s {
            for (row, c) in self.column.iter_mut().enumerate() {
                *c = data[row * s + col];
            }
            plan.process_with_scratch(&mut self.column, &mut self.scratch);
            for (row, c) in self.column.iter().enumerate() {
                data[row * s + col] = *c;
            }
        }
    }

    /// Forward transform of a real buffer.
    pub fn forward_real(&mut self, data: &[f64]) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward(&mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft(data: &[f64], size: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); size * size];
        for k in 0..size {
            for l in 0..size {
                let mut acc = Complex64::default();
                for m in 0..size {
                    for n in 0..size {
                        let phase =
                            -2.0 * std::f64::consts::PI * ((m * k + n * l) as f64) / size as f64;
                        acc += data[m * size + n] * Complex64::from_polar(1.0, phase);
                    }
                }
                out[k * size + l] = acc;
            }
        }
        out
    }

    #[test]
    fn matches_naive_dft_and_inverts() {
        let size = 6;
        let data: Vec<f64> = (0..size * size)
            .map(|i| ((i * 7919) % 23) as f64 - 11.0)
            .collect();
        let mut fft = Fft2d::new(size);
        let spec = fft.forward_real(&data);
        let naive = naive_dft(&data, size);
        for (a, b) in spec.iter().zip(&naive) {
            assert!((a - b).norm() < 1e-10);
        }
        let mut back = spec;
        fft.inverse(&mut back);
        for (a, &b) in back.iter().zip(&data) {
            assert!((a.re / (size * size) as f64 - b).abs() < 1e-12);
        }
    }
}
