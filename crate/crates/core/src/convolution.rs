//! Exact cyclic convolution over Z/p.

use crate::error::{Error, Result};

/// (f * g)(u) = Σ_a f(a) g(u - a mod p), computed with checked 128-bit arithmetic.
pub fn cyclic_convolve(f: &[u128], g: &[u128]) -> Result<Vec<u128>> {
    if f.len() != g.len() {
        return Err(Error::input(format!(
            "convolution operands have lengths {} and {}",
            f.len(),
            g.len()
        )));
    }
    let p = f.len();
    let mut out = vec![0u128; p];
    for (a, &fa) in f.iter().enumerate() {
        if fa == 0 {
            continue;
        }
        for (b, &gb) in g.iter().enumerate() {
            if gb == 0 {
                continue;
            }
            let u = (a + b) % p;
            let term = fa.checked_mul(gb).ok_or_else(|| overflow(p, a, b, fa, gb))?;
            out[u] = out[u].checked_add(term).ok_or_else(|| overflow(p, a, b, fa, gb))?;
        }
    }
    Ok(out)
}

fn overflow(p: usize, a: usize, b: usize, fa: u128, gb: u128) -> Error {
    Error::Overflow(format!(
        "cyclic convolution mod {p}: accumulating f({a}) = {fa} times g({b}) = {gb}"
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_is_identity() {
        let delta = vec![1, 0, 0, 0, 0, 0, 0];
        let g = vec![3, 0, 9, 1, 4, 4, 2];
        assert_eq!(cyclic_convolve(&delta, &g).unwrap(), g);
    }

    #[test]
    fn hand_enumerated_indicators() {
        // {1,2} * {2,3} in F_5: 1+2=3, 1+3=4, 2+2=4, 2+3=0
        let a = vec![0, 1, 1, 0, 0];
        let b = vec![0, 0, 1, 1, 0];
        assert_eq!(cyclic_convolve(&a, &b).unwrap(), vec![1, 0, 0, 1, 2]);
    }

    #[test]
    fn overflow_is_reported() {
        let f = vec![u128::MAX, 0, 0];
        let g = vec![2, 0, 0];
        assert!(matches!(cyclic_convolve(&f, &g), Err(Error::Overflow(_))));
    }

    #[test]
    fn length_mismatch() {
        assert!(cyclic_convolve(&[1, 2], &[1, 2, 3]).is_err());
    }
}
