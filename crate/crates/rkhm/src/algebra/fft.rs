//! Discrete Fourier transforms for the circulant algebra.
//!
//! Everything in this crate uses the plus-sign convention
//!
//! ```text
//! X[n] = sum_z x[z] * omega^(z*n),   omega = exp(+2*pi*i/p),
//! ```
//!
//! which is the transform that diagonalizes a circulant matrix as
//! `circ(x) = F diag(X) F*` with `F[i][j] = omega^(i*j)/sqrt(p)`. The
//! minus-sign transform found in most signal-processing libraries is never
//! exposed; the inverse here is `x[z] = (1/p) sum_n X[n] omega^(-z*n)`.
//!
//! A radix-2 Cooley-Tukey kernel handles power-of-two lengths and a
//! Bluestein chirp-z reduction handles everything else, so the transform is
//! O(p log p) for arbitrary p. `transform_cost` is the deterministic
//! operation-count model used by the solver flop counters.

use num_complex::Complex64;
use std::f64::consts::PI;

/// In-place radix-2 transform with `omega = exp(+2*pi*i/len)` twiddles.
/// Length must be a power of two.
fn fft_pow2(buf: &mut [Complex64]) {
    let n = buf.len();
    debug_assert!(n.is_power_of_two());
    // Bit-reversal permutation.
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            buf.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let ang = 2.0 * PI / len as f64;
        let wlen = Complex64::new(ang.cos(), ang.sin());
        for start in (0..n).step_by(len) {
            let mut w = Complex64::new(1.0, 0.0);
            for k in 0..len / 2 {
                let u = buf[start + k];
                let v = buf[start + k + len / 2] * w;
                buf[start + k] = u + v;
                buf[start + k + len / 2] = u - v;
                w *= wlen;
            }
        }
        len <<= 1;
    }
}

/// Chirp value `exp(i*pi*t^2/p)` computed with the exponent reduced mod 2p,
/// so large `t` loses no precision.
fn chirp(t: u64, p: u64) -> Complex64 {
    let r = (t % (2 * p)) * (t % (2 * p)) % (2 * p);
    let ang = PI * r as f64 / p as f64;
    Complex64::new(ang.cos(), ang.sin())
}

/// Bluestein chirp-z evaluation of the plus-sign transform for arbitrary
/// length, via one zero-padded power-of-two cyclic convolution.
fn dft_bluestein(input: &[Complex64]) -> Vec<Complex64> {
    let p = input.len();
    let pu = p as u64;
    let m = (2 * p - 1).next_power_of_two();
    // X[k] = c[k] * sum_n (x[n] c[n]) conj(c[k-n]), c[t] = exp(i pi t^2 / p).
    let mut a = vec![Complex64::new(0.0, 0.0); m];
    let mut b = vec![Complex64::new(0.0, 0.0); m];
    for n in 0..p {
        a[n] = input[n] * chirp(n as u64, pu);
    }
    b[0] = chirp(0, pu).conj();
    for t in 1..p {
        let v = chirp(t as u64, pu).conj();
        b[t] = v;
        b[m - t] = v;
    }
    fft_pow2(&mut a);
    fft_pow2(&mut b);
    for i in 0..m {
        a[i] *= b[i];
    }
    // Inverse of the plus-sign transform: conjugate trick plus 1/m.
    for v in a.iter_mut() {
        *v = v.conj();
    }
    fft_pow2(&mut a);
    let scale = 1.0 / m as f64;
    (0..p)
        .map(|k| a[k].conj() * scale * chirp(k as u64, pu))
        .collect()
}

/// Forward transform `X[n] = sum_z x[z] omega^(z*n)` with `omega = e^(2 pi i/p)`.
pub fn dft(input: &[Complex64]) -> Vec<Complex64> {
    let p = input.len();
    assert!(p >= 1, "empty transform");
    if p == 1 {
        return input.to_vec();
    }
    if p.is_power_of_two() {
        let mut buf = input.to_vec();
        fft_pow2(&mut buf);
        buf
    } else {
        dft_bluestein(input)
    }
}

/// Inverse transform `x[z] = (1/p) sum_n X[n] omega^(-z*n)`.
pub fn idft(input: &[Complex64]) -> Vec<Complex64> {
    let p = input.len();
    let conj: Vec<Complex64> = input.iter().map(|v| v.conj()).collect();
    let mut out = dft(&conj);
    let scale = 1.0 / p as f64;
    for v in out.iter_mut() {
        *v = v.conj() * scale;
    }
    out
}

/// Number of complex multiply-adds charged for one length-`p` transform.
///
/// Power-of-two lengths cost the radix-2 butterfly count `(p/2) log2 p`;
/// other lengths are charged the Bluestein reduction (three power-of-two
/// transforms of the padded length plus the pointwise and chirp products).
/// The model is what the solver flop counters record, so counts are
/// deterministic regardless of spectrum caching.
pub fn transform_cost(p: usize) -> u64 {
    if p <= 1 {
        return 0;
    }
    if p.is_power_of_two() {
        let logp = p.trailing_zeros() as u64;
        (p as u64 / 2) * logp
    } else {
        let m = (2 * p - 1).next_power_of_two();
        let logm = m.trailing_zeros() as u64;
        3 * (m as u64 / 2) * logm + m as u64 + 2 * p as u64
    }
}
