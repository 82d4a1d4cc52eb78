use std::f64::consts::PI;

use super::{tally, ComplexVector, C64, ZERO};

pub fn is_power_of_two(n: usize) -> bool {
    n != 0 && n & (n - 1) == 0
}

/// `exp(2πi·k/n)`, reduced modulo `n` before evaluation for accuracy.
pub fn root_of_unity(n: usize, k: i64) -> C64 {
    let r = k.rem_euclid(n as i64) as f64;
    C64::from_polar(1.0, 2.0 * PI * r / n as f64)
}

/// `Ω·v` with `Ω = (ω^{ij})`, `ω = exp(2πi/n)`.
pub fn dft(v: &[C64]) -> ComplexVector {
    let mut out = v.to_vec();
    dft_in_place(&mut out);
    ComplexVector::raw(out)
}

/// `Ω⁻¹·v = (1/n)·Ω^H·v`.
pub fn idft(v: &[C64]) -> ComplexVector {
    let mut out = v.to_vec();
    idft_in_place(&mut out);
    ComplexVector::raw(out)
}

pub fn dft_in_place(v: &mut [C64]) {
    transform(v, 1);
}

pub fn idft_in_place(v: &mut [C64]) {
    transform(v, -1);
    let inv = 1.0 / v.len().max(1) as f64;
    for z in v.iter_mut() {
        *z *= inv;
    }
}

fn transform(v: &mut [C64], sign: i64) {
    let n = v.len();
    if n <= 1 {
        return;
    }
    if is_power_of_two(n) {
        radix2(v, sign);
    } else {
        direct(v, sign);
    }
}

fn direct(v: &mut [C64], sign: i64) {
    let n = v.len();
    let roots: Vec<C64> = (0..n).map(|k| root_of_unity(n, sign * k as i64)).collect();
    let out: Vec<C64> = (0..n)
        .map(|i| {
            let mut acc = ZERO;
            for (j, &x) in v.iter().enumerate() {
                acc += roots[(i * j) % n] * x;
            }
            acc
        })
        .collect();
    tally::add((n * n) as u64);
    v.copy_from_slice(&out);
}

fn radix2(v: &mut [C64], sign: i64) {
    let n = v.len();
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            v.swap(i, j);
        }
    }
    let twiddles: Vec<C64> = (0..n / 2).map(|k| root_of_unity(n, sign * k as i64)).collect();
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let w = twiddles[k * stride];
                let a = v[start + k];
                let b = v[start + k + half] * w;
                v[start + k] = a + b;
                v[start + k + half] = a - b;
            }
        }
        len <<= 1;
    }
    tally::add((n / 2) as u64 * bits as u64);
}
