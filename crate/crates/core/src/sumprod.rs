//! Coverage of F by mZ + Σ X_j·Y_j, decided exactly and cross-checked through
//! the Fourier expansion of the solution count.
//!
//! With f_j(t) = (1/|X_j|) Σ_{a∈X_j} Y_j(t/a), the normalized number of
//! solutions S(u) = N(u)/Π|X_j| of u = z_1 + … + z_m + Σ x_j y_j satisfies
//!
//! ```text
//! p·S(u) = Σ_r Ẑ(r)^m Π_j f̂_j(r) e(-ru)
//! ```
//!
//! N(u) itself is computed by exact integer convolution; every yes/no answer
//! rests on that path.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::convolution::cyclic_convolve;
use crate::dft::{characters, dft_indicator, dft_real, real, Real};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::residue_set::{product_count_table, ResidueSet, SetSpec};

/// The data (m, X_1..X_n, Y_1..Y_n, Z).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumProdInstance {
    m: u32,
    xs: Vec<ResidueSet>,
    ys: Vec<ResidueSet>,
    z: ResidueSet,
}

impl SumProdInstance {
    pub fn new(m: u32, xs: Vec<ResidueSet>, ys: Vec<ResidueSet>, z: ResidueSet) -> Result<Self> {
        if m == 0 {
            return Err(Error::input("m must be at least 1"));
        }
        if xs.is_empty() || xs.len() != ys.len() {
            return Err(Error::input(format!("need n >= 1 X and Y sets, got {} and {}", xs.len(), ys.len())));
        }
        for s in xs.iter().chain(&ys) {
            z.field().same_as(s.field())?;
            if s.is_empty() || s.contains(0) {
                return Err(Error::input("X_j and Y_j must be nonempty subsets of F*"));
            }
        }
        if z.is_empty() {
            return Err(Error::input("Z is empty"));
        }
        Ok(SumProdInstance { m, xs, ys, z })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> usize {
        self.xs.len()
    }

    pub fn p(&self) -> u32 {
        self.z.p()
    }

    pub fn xs(&self) -> &[ResidueSet] {
        &self.xs
    }

    pub fn ys(&self) -> &[ResidueSet] {
        &self.ys
    }

    pub fn z(&self) -> &ResidueSet {
        &self.z
    }

    /// |Z|²·Π|X_j||Y_j|.
    pub fn condition_lhs(&self) -> BigUint {
        let z = BigUint::from(self.z.len());
        self.xs.iter().chain(&self.ys).map(|s| BigUint::from(s.len())).product::<BigUint>() * &z * &z
    }

    /// p^(n+2).
    pub fn condition_rhs(&self) -> BigUint {
        BigUint::from(self.p()).pow(self.n() as u32 + 2)
    }

    /// |Z|²Π|X_j||Y_j| − p^(n+2); coverage is guaranteed when positive and m ≥ 2.
    pub fn condition_margin(&self) -> BigInt {
        BigInt::from(self.condition_lhs()) - BigInt::from(self.condition_rhs())
    }

    pub fn condition_holds(&self) -> bool {
        self.condition_lhs() > self.condition_rhs()
    }

    /// |Z|^m Π|Y_j| − p|Z|^(m−1) Π√(p|Y_j|/|X_j|), the lower bound on p·S(u)
    /// obtained from the spectral estimate; `None` for m < 2, where the
    /// estimate does not apply.
    pub fn positivity_margin(&self) -> Option<f64> {
        if self.m < 2 {
            return None;
        }
        let p = self.p() as f64;
        let z = self.z.len() as f64;
        let m = self.m as i32;
        let main = z.powi(m) * self.ys.iter().map(|y| y.len() as f64).product::<f64>();
        let tail = p * z.powi(m - 1)
            * self.xs.iter().zip(&self.ys).map(|(x, y)| (p * y.len() as f64 / x.len() as f64).sqrt()).product::<f64>();
        Some(main - tail)
    }

    /// N(u) for every u, by repeated exact convolution.
    pub fn exact_counts(&self) -> Result<Vec<u128>> {
        let zind = self.z.indicator();
        let mut acc = zind.clone();
        for _ in 1..self.m {
            acc = cyclic_convolve(&acc, &zind)?;
        }
        for (x, y) in self.xs.iter().zip(&self.ys) {
            let table: Vec<u128> = product_count_table(x, y)?.into_iter().map(u128::from).collect();
            acc = cyclic_convolve(&acc, &table)?;
        }
        Ok(acc)
    }

    /// Π|X_j|.
    fn x_product(&self) -> u128 {
        self.xs.iter().map(|x| x.len() as u128).product()
    }
}

/// f(t) = (1/|X|)·#{a ∈ X : t/a ∈ Y}.
pub fn normalized_f<T: Real>(xs: &ResidueSet, ys: &ResidueSet) -> Result<Vec<T>> {
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::input("normalized_f needs nonempty sets"));
    }
    let table = product_count_table(xs, ys)?;
    let norm: T = real(xs.len() as f64);
    Ok(table.into_iter().map(|c| real::<T>(c as f64) / norm).collect())
}

/// The two spectral facts about f: f̂(0) = |Y| and |f̂(r)| ≤ √(p|Y|/|X|) for r ≠ 0.
#[derive(Debug, Clone, Serialize)]
pub struct FSpectrumCheck<T> {
    pub f_hat_zero: T,
    pub y_len: usize,
    pub bound: T,
    pub max_nonzero_magnitude: T,
    pub argmax: u32,
    pub zero_ok: bool,
    pub bound_ok: bool,
}

impl<T> FSpectrumCheck<T> {
    pub fn passed(&self) -> bool {
        self.zero_ok && self.bound_ok
    }
}

pub fn f_spectrum_checks<T: Real>(xs: &ResidueSet, ys: &ResidueSet) -> Result<FSpectrumCheck<T>> {
    let f = normalized_f::<T>(xs, ys)?;
    let spec = dft_real(&f);
    let p: T = real(xs.p() as f64);
    let y_len: T = real(ys.len() as f64);
    let bound = (p * y_len / real(xs.len() as f64)).sqrt();
    let (argmax, max) = spec
        .iter()
        .enumerate()
        .skip(1)
        .map(|(r, v)| (r as u32, v.norm()))
        .fold((0, T::zero()), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
    let zero_ok = (spec[0].re - y_len).abs() <= T::EXACT_TOL * p && spec[0].im.abs() <= T::EXACT_TOL * p;
    Ok(FSpectrumCheck {
        f_hat_zero: spec[0].re,
        y_len: ys.len(),
        bound,
        max_nonzero_magnitude: max,
        argmax,
        zero_ok,
        bound_ok: max <= bound * (T::one() + T::EXACT_TOL),
    })
}

/// Both computations of the solution count.
#[derive(Debug, Clone, Serialize)]
pub struct SolutionProfile<T> {
    /// N(u), exact.
    pub exact_counts: Vec<u128>,
    /// S(u) = N(u)/Π|X_j|.
    pub normalized: Vec<T>,
    /// Σ_r Ẑ(r)^m Π f̂_j(r) e(-ru) / p, the Fourier value of S(u).
    pub fourier: Vec<T>,
    /// max_u |p·S(u) − Fourier sum| / (p·max(1, S(u))).
    pub max_relative_deviation: T,
    pub threshold_holds: bool,
}

impl<T: Real> SolutionProfile<T> {
    pub fn agrees(&self, rel_tol: T) -> bool {
        self.max_relative_deviation <= rel_tol
    }

    /// (min_u N(u), smallest argmin).
    pub fn min_count(&self) -> (u128, u32) {
        self.exact_counts
            .iter()
            .enumerate()
            .map(|(u, &c)| (c, u as u32))
            .min()
            .expect("p > 0")
    }
}

pub fn solution_profile<T: Real>(inst: &SumProdInstance) -> Result<SolutionProfile<T>> {
    let p = inst.p() as usize;
    let exact_counts = inst.exact_counts()?;
    let xprod: T = real(inst.x_product() as f64);
    let normalized: Vec<T> = exact_counts.iter().map(|&c| real::<T>(c as f64) / xprod).collect();

    let zhat = dft_indicator::<T>(inst.z());
    let fhats = inst
        .xs()
        .iter()
        .zip(inst.ys())
        .map(|(x, y)| normalized_f::<T>(x, y).map(|f| dft_real(&f)))
        .collect::<Result<Vec<_>>>()?;
    let coeffs: Vec<Complex<T>> = (0..p)
        .map(|r| {
            let zr = zhat.values()[r].powu(inst.m());
            fhats.iter().fold(zr, |acc, fh| acc * fh[r])
        })
        .collect();
    let chars = characters::<T>(p as u32);
    let pt: T = real(p as f64);
    let mut fourier = Vec::with_capacity(p);
    let mut worst = T::zero();
    for u in 0..p {
        let sum = coeffs
            .iter()
            .enumerate()
            .fold(Complex::new(T::zero(), T::zero()), |acc, (r, &c)| acc + c * chars[(p - r * u % p) % p]);
        let dev = (pt * normalized[u] - sum.re).abs().max(sum.im.abs()) / (pt * normalized[u].max(T::one()));
        worst = worst.max(dev);
        fourier.push(sum.re / pt);
    }
    Ok(SolutionProfile {
        exact_counts,
        normalized,
        fourier,
        max_relative_deviation: worst,
        threshold_holds: inst.condition_holds(),
    })
}

/// Outcome of the exact coverage test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coverage {
    pub covered: bool,
    /// Smallest residue with no representation, when not covered.
    pub missed: Option<u32>,
    pub condition_holds: bool,
    pub condition_margin: String,
    pub min_count: u128,
    pub argmin: u32,
}

/// Decides mZ + Σ X_j·Y_j = F from exact counts.
///
/// Fails with [`Error::Inconsistency`] if the size condition holds with m ≥ 2
/// and yet some residue is missed.
pub fn covers_field(inst: &SumProdInstance) -> Result<Coverage> {
    let counts = inst.exact_counts()?;
    let missed = counts.iter().position(|&c| c == 0).map(|u| u as u32);
    let (min_count, argmin) =
        counts.iter().enumerate().map(|(u, &c)| (c, u as u32)).min().expect("p > 0");
    let cov = Coverage {
        covered: missed.is_none(),
        missed,
        condition_holds: inst.condition_holds(),
        condition_margin: inst.condition_margin().to_string(),
        min_count,
        argmin,
    };
    if cov.condition_holds && inst.m() >= 2 && !cov.covered {
        return Err(Error::Inconsistency(format!(
            "size condition holds (margin {}) but residue {} is not covered",
            cov.condition_margin,
            missed.unwrap_or_default()
        )));
    }
    Ok(cov)
}

/// Instance JSON: the brick layout plus "m".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumProdSpec {
    pub p: u32,
    pub n: usize,
    pub m: u32,
    #[serde(rename = "X")]
    pub x: Vec<SetSpec>,
    #[serde(rename = "Y")]
    pub y: Vec<SetSpec>,
    #[serde(rename = "Z")]
    pub z: SetSpec,
}

impl SumProdSpec {
    pub fn build(&self) -> Result<SumProdInstance> {
        let field = PrimeField::new(self.p)?;
        if self.x.len() != self.n || self.y.len() != self.n {
            return Err(Error::input(format!("n = {} but {} X sets and {} Y sets were given", self.n, self.x.len(), self.y.len())));
        }
        let resolve = |v: &Vec<SetSpec>| v.iter().map(|s| s.resolve(&field)).collect::<Result<Vec<_>>>();
        SumProdInstance::new(self.m, resolve(&self.x)?, resolve(&self.y)?, self.z.resolve(&field)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn set(f: &PrimeField, items: &[u32]) -> ResidueSet {
        ResidueSet::from_residues(f, items.iter().copied()).unwrap()
    }

    #[test]
    fn f_by_hand() {
        // inverses in F_5: 1⁻¹ = 1, 2⁻¹ = 3; f(t) = ([t ∈ Y] + [3t ∈ Y]) / 2
        let f5 = field(5);
        let f = normalized_f::<f64>(&set(&f5, &[1, 2]), &set(&f5, &[1, 3])).unwrap();
        assert_eq!(f, vec![0.0, 1.0, 0.5, 0.5, 0.0]);
        let single = normalized_f::<f64>(&set(&f5, &[3]), &set(&f5, &[1, 2])).unwrap();
        let image = set(&f5, &[1, 2]).dilate(3).unwrap();
        for t in 0..5 {
            assert_eq!(single[t as usize], image.contains(t) as u8 as f64);
        }
        assert!(normalized_f::<f64>(&set(&f5, &[0, 1]), &set(&f5, &[1])).is_err());
    }

    #[test]
    fn spectrum_of_full_units() {
        let f = field(13);
        let u = ResidueSet::units(&f);
        let c = f_spectrum_checks::<f64>(&u, &u).unwrap();
        assert!(c.passed());
        assert!((c.f_hat_zero - 12.0).abs() < 1e-9);
        assert!((c.max_nonzero_magnitude - 1.0).abs() < 1e-9);
        assert!((c.bound - 13f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn profile_of_product_counts() {
        let f5 = field(5);
        let inst = SumProdInstance::new(1, vec![set(&f5, &[1, 2])], vec![set(&f5, &[1, 3])], set(&f5, &[0])).unwrap();
        let prof = solution_profile::<f64>(&inst).unwrap();
        assert_eq!(prof.exact_counts, vec![0, 2, 1, 1, 0]);
        assert!(prof.agrees(1e-6));
        assert_eq!(prof.min_count(), (0, 0));
    }

    #[test]
    fn profile_in_single_precision() {
        let f = field(11);
        let inst = SumProdInstance::new(2, vec![set(&f, &[1, 2, 5])], vec![set(&f, &[3, 4])], set(&f, &[0, 1, 7])).unwrap();
        let prof = solution_profile::<f32>(&inst).unwrap();
        assert!(prof.agrees(f32::SUM_TOL));
    }

    #[test]
    fn coverage_examples() {
        let f11 = field(11);
        let u = ResidueSet::units(&f11);
        let inst = SumProdInstance::new(2, vec![u.clone()], vec![u.clone()], set(&f11, &[0, 1, 2, 3])).unwrap();
        assert_eq!(inst.condition_margin(), BigInt::from(1600 - 1331));
        let cov = covers_field(&inst).unwrap();
        assert!(cov.covered && cov.condition_holds);

        // 2Z + XY = {0} + {1, 2, 4} misses 0 and 3
        let f5 = field(5);
        let inst = SumProdInstance::new(2, vec![set(&f5, &[1, 2])], vec![set(&f5, &[1, 2])], set(&f5, &[0])).unwrap();
        assert_eq!(inst.condition_lhs(), BigUint::from(4u32));
        let cov = covers_field(&inst).unwrap();
        assert!(!cov.covered && !cov.condition_holds);
        assert_eq!(cov.missed, Some(0));

        let full = SumProdInstance::new(1, vec![set(&f5, &[1])], vec![set(&f5, &[2])], ResidueSet::full(&f5)).unwrap();
        assert!(covers_field(&full).unwrap().covered);
    }

    #[test]
    fn invalid_instances() {
        let f5 = field(5);
        assert!(SumProdInstance::new(0, vec![set(&f5, &[1])], vec![set(&f5, &[1])], set(&f5, &[0])).is_err());
        assert!(SumProdInstance::new(1, vec![set(&f5, &[0])], vec![set(&f5, &[1])], set(&f5, &[0])).is_err());
        assert!(SumProdInstance::new(1, vec![], vec![], set(&f5, &[0])).is_err());
    }

    #[test]
    fn spec_round_trip() {
        let spec: SumProdSpec =
            serde_json::from_str(r#"{"p": 11, "n": 1, "m": 2, "X": [{"lo": 1, "hi": 11}], "Y": [{"lo": 1, "hi": 11}], "Z": [0, 1, 2, 3]}"#)
                .unwrap();
        let inst = spec.build().unwrap();
        assert_eq!(inst.xs()[0].len(), 10);
        assert_eq!(inst.m(), 2);
    }
}
