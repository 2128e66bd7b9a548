//! Forward discrete Fourier transform for arbitrary lengths.
//!
//! Power-of-two lengths use an iterative radix-2 transform; everything else
//! goes through Bluestein's chirp-z reformulation on a padded power-of-two
//! grid. Convention: `X[k] = sum_t x[t] * exp(-2*pi*i*k*t/n)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

pub use num_complex::Complex64;

use crate::math;

/// In-place forward DFT.
pub fn fft(data: &mut [Complex64]) {
    let n = data.len();
    if n <= 1 {
        return;
    }
    if n.is_power_of_two() {
        radix2(data, false);
    } else {
        bluestein(data);
    }
}

/// Forward DFT of a real series.
pub fn fft_real(series: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = series.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fft(&mut buf);
    buf
}

fn radix2(data: &mut [Complex64], inverse: bool) {
    let n = data.len();
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            data.swap(i, j);
        }
    }
    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let step = sign * 2.0 * PI / len as f64;
        // Twiddles computed directly per index rather than by recurrence to
        // keep rounding error flat across long transforms.
        let twiddles: Vec<Complex64> = (0..half)
            .map(|k| {
                let a = step * k as f64;
                Complex64::new(math::cos(a), math::sin(a))
            })
            .collect();
        for chunk in data.chunks_exact_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((a, b), w) in lo.iter_mut().zip(hi.iter_mut()).zip(&twiddles) {
                let t = *b * w;
                *b = *a - t;
                *a += t;
            }
        }
        len <<= 1;
    }
}

fn bluestein(data: &mut [Complex64]) {
    let n = data.len();
    let m = (2 * n - 1).next_power_of_two();
    // chirp[k] = exp(-i*pi*k^2/n); k^2 is reduced mod 2n to keep the angle small.
    let chirp: Vec<Complex64> = (0..n)
        .map(|k| {
            let k2 = ((k as u128 * k as u128) % (2 * n as u128)) as f64;
            let a = -PI * k2 / n as f64;
            Complex64::new(math::cos(a), math::sin(a))
        })
        .collect();

    let mut a = vec![Complex64::new(0.0, 0.0); m];
    for (slot, (x, c)) in a.iter_mut().zip(data.iter().zip(&chirp)) {
        *slot = x * c;
    }
    let mut b = vec![Complex64::new(0.0, 0.0); m];
    b[0] = chirp[0].conj();
    for k in 1..n {
        let c = chirp[k].conj();
        b[k] = c;
        b[m - k] = c;
    }
    radix2(&mut a, false);
    radix2(&mut b, false);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    radix2(&mut a, true);
    let scale = 1.0 / m as f64;
    for (k, out) in data.iter_mut().enumerate() {
        *out = a[k] * chirp[k] * scale;
    }
}
