//! Unnormalized discrete Fourier transforms.
//!
//! `forward` computes `U_k = sum_m u_m e^{-2 pi i k m / N}` and `inverse`
//! the conjugate sum, both without any `1/N` normalization; callers apply
//! the quadrature/synthesis prefactors. Power-of-two lengths use an
//! iterative radix-2 FFT, other even lengths fall back to a naive DFT.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

fn twiddles(n: usize, sign: f64) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            let ang = sign * 2.0 * PI * k as f64 / n as f64;
            Complex64::new(libm::cos(ang), libm::sin(ang))
        })
        .collect()
}

fn fft_radix2(data: &mut [Complex64], sign: f64) {
    let n = data.len();
    debug_assert!(n.is_power_of_two());
    // bit reversal permutation
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            data.swap(i, j);
        }
    }
    let tw = twiddles(n, sign);
    let mut len = 2;
    while len <= n {
        let step = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..len / 2 {
                let w = tw[k * step];
                let u = data[start + k];
                let v = data[start + k + len / 2] * w;
                data[start + k] = u + v;
                data[start + k + len / 2] = u - v;
            }
        }
        len <<= 1;
    }
}

fn dft_naive(data: &mut [Complex64], sign: f64) {
    let n = data.len();
    let tw = twiddles(n, sign);
    let input: Vec<Complex64> = data.to_vec();
    for (k, slot) in data.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, &x) in input.iter().enumerate() {
            acc += x * tw[(k * m) % n];
        }
        *slot = acc;
    }
}

fn transform_1d(data: &mut [Complex64], sign: f64) {
    if data.len().is_power_of_two() {
        fft_radix2(data, sign);
    } else {
        dft_naive(data, sign);
    }
}

/// n-dimensional unnormalized transform of a row-major array with `points`
/// entries along each of `dim` axes. `sign = -1` is the forward (analysis)
/// kernel, `sign = +1` the inverse.
pub fn transform_nd(data: &mut [Complex64], dim: usize, points: usize, sign: f64) {
    debug_assert_eq!(data.len(), points.pow(dim as u32));
    let total = data.len();
    let mut scratch = alloc::vec![Complex64::new(0.0, 0.0); points];
    for axis in 0..dim {
        // stride between consecutive entries along `axis`
        let stride = points.pow((dim - 1 - axis) as u32);
        let block = stride * points;
        for base in (0..total).step_by(block) {
            for off in 0..stride {
                for i in 0..points {
                    scratch[i] = data[base + off + i * stride];
                }
                transform_1d(&mut scratch, sign);
                for i in 0..points {
                    data[base + off + i * stride] = scratch[i];
                }
            }
        }
    }
}

pub fn forward_nd(data: &mut [Complex64], dim: usize, points: usize) {
    transform_nd(data, dim, points, -1.0);
}

pub fn inverse_nd(data: &mut [Complex64], dim: usize, points: usize) {
    transform_nd(data, dim, points, 1.0);
}
