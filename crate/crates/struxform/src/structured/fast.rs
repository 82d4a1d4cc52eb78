use super::{FCirculantSpec, HankelSpec, ToeplitzSpec};
use crate::error::{check_dim, Result, StruxError};
use crate::numkernel::{
    dft_in_place, idft_in_place, is_power_of_two, tally, ComplexVector, C64, ONE, ZERO,
};

/// Cyclic convolution of two equal-length power-of-two buffers, in place into `a`.
pub(crate) fn cyclic_convolve(a: &mut [C64], mut b: Vec<C64>) {
    dft_in_place(a);
    dft_in_place(&mut b);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    tally::add(a.len() as u64);
    idft_in_place(a);
}

/// `T·x` by embedding `T` in a circulant of order `2^⌈log₂(2n−1)⌉`.
pub fn toeplitz_matvec(t: &ToeplitzSpec, x: &[C64]) -> Result<ComplexVector> {
    let n = t.dim();
    check_dim("toeplitz matvec", n, x.len())?;
    if n == 1 {
        return Ok(ComplexVector::raw(vec![t.first_col[0] * x[0]]));
    }
    let size = (2 * n - 1).next_power_of_two();
    let mut c = vec![ZERO; size];
    c[..n].copy_from_slice(&t.first_col);
    for j in 1..n {
        c[size - j] = t.first_row[j];
    }
    let mut xp = vec![ZERO; size];
    xp[..n].copy_from_slice(x);
    cyclic_convolve(&mut c, xp);
    c.truncate(n);
    Ok(ComplexVector::raw(c))
}

/// `H·x` through `H = J·T`.
pub fn hankel_matvec(h: &HankelSpec, x: &[C64]) -> Result<ComplexVector> {
    Ok(toeplitz_matvec(&h.reflected_toeplitz(), x)?.reversed())
}

/// `Z_f(v)·x`; power-of-two orders with moderate `|f|` use a size-`n` transform
/// after scaling by the powers of an `n`-th root of `f`, all others use the
/// Toeplitz embedding.
pub fn f_circulant_matvec(c: &FCirculantSpec, x: &[C64]) -> Result<ComplexVector> {
    let n = c.dim();
    check_dim("f-circulant matvec", n, x.len())?;
    let fnorm = c.f.norm();
    if n < 2 || !is_power_of_two(n) || !(0.5..=2.0).contains(&fnorm) {
        return toeplitz_matvec(&c.as_toeplitz(), x);
    }
    let g = c.f.powf(1.0 / n as f64);
    let mut powers = Vec::with_capacity(n);
    let mut p = ONE;
    for _ in 0..n {
        powers.push(p);
        p *= g;
    }
    let mut v: Vec<C64> = c.first_col.iter().zip(&powers).map(|(a, b)| a * b).collect();
    let xs: Vec<C64> = x.iter().zip(&powers).map(|(a, b)| a * b).collect();
    cyclic_convolve(&mut v, xs);
    for (y, p) in v.iter_mut().zip(&powers) {
        *y /= p;
    }
    tally::add(3 * n as u64);
    Ok(ComplexVector::raw(v))
}

/// `Z_f(v)ᵀ·x`.
pub fn f_circulant_matvec_transpose(c: &FCirculantSpec, x: &[C64]) -> Result<ComplexVector> {
    toeplitz_matvec(&c.as_toeplitz().transposed(), x)
}

/// `V_f·x` with `V_f = Ω·diag(f^j)` (knots `f·ω_n^i`), or `V_f⁻¹·x` when `inverse`.
pub fn dft_vandermonde_matvec(f: C64, x: &[C64], inverse: bool) -> Result<ComplexVector> {
    if f == ZERO {
        return Err(StruxError::InvalidInput("scale f must be nonzero".into()));
    }
    let n = x.len();
    let powers = scale_powers(f, n);
    let mut v = x.to_vec();
    if inverse {
        idft_in_place(&mut v);
        for (y, p) in v.iter_mut().zip(&powers) {
            *y /= p;
        }
    } else {
        for (y, p) in v.iter_mut().zip(&powers) {
            *y *= p;
        }
        dft_in_place(&mut v);
    }
    tally::add(n as u64);
    Ok(ComplexVector::raw(v))
}

/// `V_fᵀ·x = diag(f^j)·Ω·x`, or `V_f⁻ᵀ·x = Ω⁻¹·diag(f^{−j})·x` when `inverse`.
pub fn dft_vandermonde_matvec_transpose(f: C64, x: &[C64], inverse: bool) -> Result<ComplexVector> {
    if f == ZERO {
        return Err(StruxError::InvalidInput("scale f must be nonzero".into()));
    }
    let n = x.len();
    let powers = scale_powers(f, n);
    let mut v = x.to_vec();
    if inverse {
        for (y, p) in v.iter_mut().zip(&powers) {
            *y /= p;
        }
        idft_in_place(&mut v);
    } else {
        dft_in_place(&mut v);
        for (y, p) in v.iter_mut().zip(&powers) {
            *y *= p;
        }
    }
    tally::add(n as u64);
    Ok(ComplexVector::raw(v))
}

fn scale_powers(f: C64, n: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(n);
    let mut p = ONE;
    for _ in 0..n {
        out.push(p);
        p *= f;
    }
    out
}
