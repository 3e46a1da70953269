//! Discrete Fourier transform of arbitrary length: iterative radix-2 for
//! powers of two, Bluestein's chirp-z otherwise.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::Complex;

use super::linalg::{C64, ZERO};

/// Plan for `X_m = sum_k x_k exp(-2 pi i k m / n)`.
pub(crate) struct Dft {
    n: usize,
    kind: Kind,
}

enum Kind {
    Radix2 { twiddles: Vec<C64> },
    Bluestein { len: usize, twiddles: Vec<C64>, chirp: Vec<C64>, kernel: Vec<C64> },
}

impl Dft {
    pub(crate) fn new(n: usize) -> Self {
        assert!(n > 0);
        if n.is_power_of_two() {
            return Dft { n, kind: Kind::Radix2 { twiddles: twiddles(n) } };
        }
        let len = (2 * n - 1).next_power_of_two();
        // exp(-i pi k^2 / n), with k^2 reduced mod 2n to keep the angle small.
        let chirp: Vec<C64> = (0..n)
            .map(|k| {
                let k2 = ((k as u128 * k as u128) % (2 * n as u128)) as f64;
                Complex::from_polar(1.0, -PI * k2 / n as f64)
            })
            .collect();
        let mut kernel = vec![ZERO; len];
        kernel[0] = chirp[0].conj();
        for k in 1..n {
            kernel[k] = chirp[k].conj();
            kernel[len - k] = chirp[k].conj();
        }
        let tw = twiddles(len);
        radix2(&mut kernel, &tw);
        Dft { n, kind: Kind::Bluestein { len, twiddles: tw, chirp, kernel } }
    }

    /// In-place forward transform of `data` (length `n`).
    pub(crate) fn forward(&self, data: &mut [C64]) {
        debug_assert_eq!(data.len(), self.n);
        match &self.kind {
            Kind::Radix2 { twiddles } => radix2(data, twiddles),
            Kind::Bluestein { len, twiddles, chirp, kernel } => {
                let mut buf = vec![ZERO; *len];
                for k in 0..self.n {
                    buf[k] = data[k] * chirp[k];
                }
                radix2(&mut buf, twiddles);
                for (b, k) in buf.iter_mut().zip(kernel) {
                    *b *= k;
                }
                // inverse via conjugation
                for b in buf.iter_mut() {
                    *b = b.conj();
                }
                radix2(&mut buf, twiddles);
                let scale = 1.0 / *len as f64;
                for m in 0..self.n {
                    data[m] = buf[m].conj() * scale * chirp[m];
                }
            }
        }
    }
}

fn twiddles(n: usize) -> Vec<C64> {
    (0..n / 2).map(|k| Complex::from_polar(1.0, -2.0 * PI * k as f64 / n as f64)).collect()
}

fn radix2(data: &mut [C64], twiddles: &[C64]) {
    let n = data.len();
    if n <= 1 {
        return;
    }
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            data.swap(i, j);
        }
    }
    let mut size = 2;
    while size <= n {
        let half = size / 2;
        let step = n / size;
        for start in (0..n).step_by(size) {
            for k in 0..half {
                let w = twiddles[k * step];
                let a = data[start + k];
                let b = data[start + k + half] * w;
                data[start + k] = a + b;
                data[start + k + half] = a - b;
            }
        }
        size *= 2;
    }
}
