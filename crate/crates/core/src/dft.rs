//! Discrete Fourier transform on Z/p with the additive character e(x) = exp(2πix/p).
//!
//! The transform is the direct O(p²) sum. Everything here is generic over the
//! floating-point scalar; the crate root provides `f64` aliases.

use std::fmt::Debug;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

use crate::residue_set::ResidueSet;

/// Real scalar usable for spectra: `f32` or `f64`.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {
    /// Tolerance for identities that hold exactly in exact arithmetic (â(0) = |A|,
    /// the spectral bound), scaled by p or by the compared magnitude at use sites.
    const EXACT_TOL: Self;
    /// Relative tolerance for accumulated sums (Parseval, Fourier inversion).
    const SUM_TOL: Self;
}

impl Real for f64 {
    const EXACT_TOL: f64 = 1e-9;
    const SUM_TOL: f64 = 1e-6;
}

impl Real for f32 {
    const EXACT_TOL: f32 = 1e-4;
    const SUM_TOL: f32 = 1e-3;
}

#[inline]
pub(crate) fn real<T: Real>(v: f64) -> T {
    T::from_f64(v).expect("scalar conversion")
}

/// e(k) = exp(2πik/p) for k in [0, p).
pub fn characters<T: Real>(p: u32) -> Vec<Complex<T>> {
    let step = T::TAU() / real::<T>(p as f64);
    (0..p).map(|k| Complex::from_polar(T::one(), step * real(k as f64))).collect()
}

/// â(r) = Σ_x a(x) e(xr).
pub fn dft_real<T: Real>(seq: &[T]) -> Vec<Complex<T>> {
    let p = seq.len();
    let chars = characters::<T>(p as u32);
    (0..p)
        .map(|r| {
            seq.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .fold(Complex::new(T::zero(), T::zero()), |acc, (x, &v)| acc + chars[x * r % p] * v)
        })
        .collect()
}

/// a(u) = (1/p) Σ_r â(r) e(-ru).
pub fn inverse_dft<T: Real>(values: &[Complex<T>]) -> Vec<Complex<T>> {
    let p = values.len();
    let chars = characters::<T>(p as u32);
    let scale = T::one() / real(p as f64);
    (0..p)
        .map(|u| {
            let sum = values.iter().enumerate().fold(Complex::new(T::zero(), T::zero()), |acc, (r, &v)| {
                acc + v * chars[(p - r * u % p) % p]
            });
            sum * scale
        })
        .collect()
}

/// The Fourier transform of the indicator of a subset of Z/p.
#[derive(Debug, Clone)]
pub struct Spectrum<T> {
    values: Vec<Complex<T>>,
    source_cardinality: u64,
}

impl<T: Real> Spectrum<T> {
    #[inline]
    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    #[inline]
    pub fn source_cardinality(&self) -> u64 {
        self.source_cardinality
    }

    pub fn p(&self) -> usize {
        self.values.len()
    }

    /// Σ_r |â(r)|².
    pub fn energy(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, v| acc + v.norm_sqr())
    }

    /// Checks â(0) = |A| and Parseval Σ|â(r)|² = p|A| at the given tolerances.
    pub fn satisfies_invariants(&self, zero_tol: T, parseval_rel_tol: T) -> bool {
        let card: T = real(self.source_cardinality as f64);
        let p: T = real(self.p() as f64);
        let v0 = self.values[0];
        let zero_ok = (v0.re - card).abs() <= zero_tol * p && v0.im.abs() <= zero_tol * p;
        let expected = p * card;
        let parseval_ok = (self.energy() - expected).abs() <= parseval_rel_tol * expected.max(T::one());
        zero_ok && parseval_ok
    }

    /// Inverse transform, real parts only.
    pub fn recover(&self) -> Vec<T> {
        inverse_dft(&self.values).into_iter().map(|c| c.re).collect()
    }
}

/// Â(r) = Σ_{x∈A} e(xr).
pub fn dft_indicator<T: Real>(set: &ResidueSet) -> Spectrum<T> {
    let p = set.p() as usize;
    let chars = characters::<T>(p as u32);
    let members = set.to_vec();
    let mut values: Vec<Complex<T>> = (0..p)
        .map(|r| {
            members
                .iter()
                .fold(Complex::new(T::zero(), T::zero()), |acc, &x| acc + chars[x as usize * r % p])
        })
        .collect();
    // the r = 0 term is an exact count
    values[0] = Complex::new(real(members.len() as f64), T::zero());
    Spectrum { values, source_cardinality: members.len() as u64 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn delta_has_flat_spectrum() {
        let f = PrimeField::new(7).unwrap();
        let s = dft_indicator::<f64>(&ResidueSet::singleton(&f, 0).unwrap());
        for v in s.values() {
            assert!((v - Complex::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn full_set_is_orthogonal() {
        let f = PrimeField::new(11).unwrap();
        let s = dft_indicator::<f64>(&ResidueSet::full(&f));
        assert_eq!(s.values()[0].re, 11.0);
        for v in &s.values()[1..] {
            assert!(v.norm() < 1e-9);
        }
    }

    #[test]
    fn pair_in_f5() {
        // direct evaluation: |Â(r)|² = 2 + 2cos(2πr/5) and the sum over r is 2·5
        let f = PrimeField::new(5).unwrap();
        let a = ResidueSet::from_residues(&f, [1, 2]).unwrap();
        let s = dft_indicator::<f64>(&a);
        assert_eq!(s.values()[0].re, 2.0);
        assert!((s.energy() - 10.0).abs() < 1e-9);
        for r in 0..5 {
            let expect = 2.0 + 2.0 * (std::f64::consts::TAU * r as f64 / 5.0).cos();
            assert!((s.values()[r].norm_sqr() - expect).abs() < 1e-12);
        }
        assert!(s.satisfies_invariants(1e-9, 1e-6));
    }

    #[test]
    fn single_precision_spectrum() {
        let f = PrimeField::new(13).unwrap();
        let a = ResidueSet::from_residues(&f, [1, 4, 5, 9]).unwrap();
        let s = dft_indicator::<f32>(&a);
        assert!(s.satisfies_invariants(1e-5, 1e-4));
        for (u, v) in s.recover().into_iter().enumerate() {
            let want = if a.contains(u as u32) { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-4);
        }
    }
}
