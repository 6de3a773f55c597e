//! Discrete Fourier transforms over `Z/qZ`, computed directly.

use num_complex::Complex64;

use crate::arith::PhaseTable;
use crate::{Error, Result};

/// `FT(f)(t) = -p^(-1/2) sum_x f(x) e(tx/p)`.
pub fn fourier_transform_p(values: &[Complex64], p: u64) -> Result<Vec<Complex64>> {
    if values.len() as u64 != p {
        return Err(Error::LengthMismatch { expected: p as usize, got: values.len() });
    }
    let mut out = transform(values, false);
    let s = -1.0 / (p as f64).sqrt();
    out.iter_mut().for_each(|z| *z *= s);
    Ok(out)
}

/// `F_hat(t) = q^(-1/2) sum_x F(x) e(-tx/q)`, unitary on `Z/qZ`.
pub fn normalized_dft(values: &[Complex64]) -> Vec<Complex64> {
    let mut out = transform(values, true);
    let s = 1.0 / (values.len() as f64).sqrt();
    out.iter_mut().for_each(|z| *z *= s);
    out
}

fn transform(values: &[Complex64], negate: bool) -> Vec<Complex64> {
    let q = values.len() as u64;
    if q == 0 {
        return Vec::new();
    }
    let phases = PhaseTable::new(q);
    (0..q)
        .map(|t| {
            let step = if negate { (q - t) % q } else { t };
            let mut idx = 0u64;
            let mut acc = Complex64::new(0.0, 0.0);
            for v in values {
                acc += v * phases.get(idx);
                idx += step;
                if idx >= q {
                    idx -= q;
                }
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::e_frac;

    #[test]
    fn delta_and_characters() {
        let p = 13u64;
        let mut delta = vec![Complex64::new(0.0, 0.0); p as usize];
        delta[0] = Complex64::new(1.0, 0.0);
        let ft = fourier_transform_p(&delta, p).unwrap();
        let c = -1.0 / (p as f64).sqrt();
        assert!(ft.iter().all(|z| (z - c).norm() < 1e-12));

        let a = 4u64;
        let chi: Vec<Complex64> = (0..p).map(|x| e_frac(a * x % p, p)).collect();
        let ft = fourier_transform_p(&chi, p).unwrap();
        for (t, z) in ft.iter().enumerate() {
            let expect = if (t as u64 + a) % p == 0 { -(p as f64).sqrt() } else { 0.0 };
            assert!((z - expect).norm() < 1e-9, "t={t}");
        }
        assert!(fourier_transform_p(&chi[1..], p).is_err());
    }

    #[test]
    fn involution() {
        let p = 11u64;
        let f: Vec<Complex64> = (0..p).map(|x| Complex64::new(x as f64, (x * x % 5) as f64)).collect();
        let ff = fourier_transform_p(&fourier_transform_p(&f, p).unwrap(), p).unwrap();
        for x in 0..p {
            assert!((ff[x as usize] - f[((p - x) % p) as usize]).norm() < 1e-9);
        }
    }
}
