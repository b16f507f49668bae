//! Cosets [a, b, F] of the center inside B·B.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use super::popular::{choose_popular_shift, representation_counts};
use super::{ratio_to_f64, ratio_to_string};
use crate::brick::{odometer_at, Brick, FiberedProductSet, Slice};
use crate::error::{Error, Result};
use crate::residue_set::ResidueSet;
use crate::sumprod::{covers_field, SumProdInstance};

/// Full fibers of a product set, compared with |B|/p.
#[derive(Debug, Clone, Serialize)]
pub struct CosetReport {
    pub center_coset_count: usize,
    pub coset_witnesses: Vec<Slice>,
    #[serde(serialize_with = "ser_ratio")]
    pub threshold_count: BigRational,
    pub meets_threshold: bool,
}

pub(crate) fn ser_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&ratio_to_string(r))
}

/// Counts slices (u, v) whose fiber is all of F; each is a coset [u, v, F] ⊆ P.
pub fn count_center_cosets(product: &FiberedProductSet, brick: &Brick) -> Result<CosetReport> {
    if product.group() != brick.group() {
        return Err(Error::input("product set and brick live in different groups"));
    }
    let coset_witnesses: Vec<Slice> =
        product.iter().filter(|(_, f)| f.is_full()).map(|(s, _)| s.clone()).collect();
    let threshold_count = BigRational::new(BigInt::from(brick.cardinality()), BigInt::from(brick.p()));
    let count = coset_witnesses.len();
    Ok(CosetReport {
        center_coset_count: count,
        meets_threshold: BigRational::from_integer(BigInt::from(count)) >= threshold_count,
        coset_witnesses,
        threshold_count,
    })
}

/// One coset of the center found from popular shifts.
#[derive(Debug, Clone, Serialize)]
pub struct Th1Certificate {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub tilde_x_sizes: Vec<usize>,
    pub tilde_y_sizes: Vec<usize>,
    /// |Z|²·Π|X̃_i||Ỹ_i|
    pub condition_lhs: String,
    /// p^(n+2)
    pub condition_rhs: String,
    pub condition_holds: bool,
    /// (a, b) when the size condition holds.
    pub witness: Option<Slice>,
    /// Coverage of 2Z + Σ X̃_i·Ỹ_i decided by the exact counting oracle.
    pub sumprod_covers: Option<bool>,
    /// Whether the fiber of B·B over (a, b) is F.
    pub fiber_full: Option<bool>,
}

/// Builds (a, b) from popular shifts and, if |Z|²Π|X̃_i||Ỹ_i| > p^(n+2), checks
/// that [a, b, F] ⊆ B·B twice: through coverage of 2Z + Σ X̃_i·Ỹ_i and through
/// the fiber of B·B itself.
pub fn th1_certificate(brick: &Brick) -> Result<Th1Certificate> {
    let xs: Vec<_> = brick.xs().iter().map(choose_popular_shift).collect::<Result<_>>()?;
    let ys: Vec<_> = brick.ys().iter().map(choose_popular_shift).collect::<Result<_>>()?;
    let z = BigUint::from(brick.z().len());
    let lhs = xs.iter().chain(&ys).map(|s| BigUint::from(s.tilde.len())).product::<BigUint>() * &z * &z;
    let rhs = BigUint::from(brick.p()).pow(brick.n() as u32 + 2);
    let holds = lhs > rhs;
    let a: Vec<u32> = xs.iter().map(|s| s.shift).collect();
    let b: Vec<u32> = ys.iter().map(|s| s.shift).collect();
    let mut cert = Th1Certificate {
        tilde_x_sizes: xs.iter().map(|s| s.tilde.len()).collect(),
        tilde_y_sizes: ys.iter().map(|s| s.tilde.len()).collect(),
        condition_lhs: lhs.to_string(),
        condition_rhs: rhs.to_string(),
        condition_holds: holds,
        witness: None,
        sumprod_covers: None,
        fiber_full: None,
        a,
        b,
    };
    if holds {
        let inst = SumProdInstance::new(
            2,
            xs.iter().map(|s| s.tilde.clone()).collect(),
            ys.iter().map(|s| s.tilde.clone()).collect(),
            brick.z().clone(),
        )?;
        let covered = covers_field(&inst)?.covered;
        let fiber_full = brick.product_fiber(brick, &cert.a, &cert.b)?.is_full();
        if covered != fiber_full {
            return Err(Error::Inconsistency(format!(
                "coverage oracle says {covered} but the fiber over ({:?}, {:?}) says {fiber_full}",
                cert.a, cert.b
            )));
        }
        cert.sumprod_covers = Some(covered);
        cert.fiber_full = Some(fiber_full);
        cert.witness = Some(Slice { u: cert.a.clone(), v: cert.b.clone() });
    }
    Ok(cert)
}

/// The set E of pairs (a, b) with |Z|²Π|X_i ∩ (a_i − X_i)||Y_i ∩ (b_i − Y_i)| > p^(n+2).
#[derive(Debug, Clone, Serialize)]
pub struct GoodPairReport {
    pub members: Vec<Slice>,
    pub size: usize,
    /// Members whose fiber in B·B is not F; must be empty.
    pub non_full_members: Vec<Slice>,
    /// (Π|X_i|²|Y_i|² − p^(3n+2)) / (Π|X_i||Y_i| − p^(n+2)), when the denominator is positive.
    #[serde(serialize_with = "ser_opt_ratio")]
    pub two_step_bound: Option<BigRational>,
    pub meets_two_step_bound: Option<bool>,
    /// (1 − p^(−3/2))·Π|X_i||Y_i|.
    pub final_bound: f64,
    /// Whether Π|X_i||Y_i| > p^(3n/2 + 7/4), under which the final bound follows.
    pub final_bound_hypothesis: bool,
    pub meets_final_bound: bool,
}

fn ser_opt_ratio<S: serde::Serializer>(r: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&ratio_to_string(r)),
        None => s.serialize_none(),
    }
}

impl GoodPairReport {
    pub fn two_step_bound_f64(&self) -> Option<f64> {
        self.two_step_bound.as_ref().map(ratio_to_f64)
    }
}

/// Enumerates E, verifies every member's fiber, and compares |E| with both
/// closed-form lower bounds. `pair_cap` bounds the number of candidate pairs.
pub fn good_pair_set(brick: &Brick, pair_cap: u128) -> Result<GoodPairReport> {
    let p = brick.p();
    let n = brick.n();
    let xr: Vec<Vec<usize>> = brick.xs().iter().map(representation_counts).collect();
    let yr: Vec<Vec<usize>> = brick.ys().iter().map(representation_counts).collect();
    let lists: Vec<Vec<u32>> = xr
        .iter()
        .chain(&yr)
        .map(|r| (0..p).filter(|&a| r[a as usize] > 0).collect())
        .collect();
    let candidates: u128 = lists.iter().map(|l| l.len() as u128).product();
    if candidates > pair_cap {
        return Err(Error::CapExceeded { what: "candidate pair count for E", required: candidates, cap: pair_cap });
    }
    let z2 = (brick.z().len() as u128).pow(2);
    let rhs = (p as u128)
        .checked_pow(n as u32 + 2)
        .ok_or_else(|| Error::Overflow("p^(n+2) exceeds 128 bits".into()))?;

    // products[i][a·p + b] = (X_i ∩ (a − X_i))·(Y_i ∩ (b − Y_i))
    let field = brick.field();
    let products: Vec<Vec<ResidueSet>> = (0..n)
        .map(|i| {
            let xt: Vec<ResidueSet> = (0..p).map(|a| brick.xs()[i].intersection(&brick.xs()[i].reflect(a))).collect::<Result<_>>()?;
            let yt: Vec<ResidueSet> = (0..p).map(|b| brick.ys()[i].intersection(&brick.ys()[i].reflect(b))).collect::<Result<_>>()?;
            let mut table = Vec::with_capacity((p * p) as usize);
            for x in &xt {
                for y in &yt {
                    table.push(if x.is_empty() || y.is_empty() { ResidueSet::empty(field) } else { x.product_set(y)? });
                }
            }
            Ok(table)
        })
        .collect::<Result<_>>()?;
    let doubled_z = brick.z().sumset(brick.z())?;
    let fiber_full = |u: &[u32], v: &[u32]| -> Result<bool> {
        let mut acc = doubled_z.clone();
        for i in 0..n {
            if acc.is_full() {
                break;
            }
            acc = acc.sumset(&products[i][(u[i] * p + v[i]) as usize])?;
        }
        Ok(acc.is_full())
    };

    let scored: Vec<(Slice, bool)> = (0..candidates as usize)
        .into_par_iter()
        .filter_map(|idx| {
            let digits = odometer_at(&lists, idx);
            let mut lhs = z2;
            for (i, &d) in digits.iter().enumerate() {
                let r = if i < n { xr[i][d as usize] } else { yr[i - n][d as usize] };
                lhs = match lhs.checked_mul(r as u128) {
                    Some(v) => v,
                    None => return Some(Err(Error::Overflow("E membership product exceeds 128 bits".into()))),
                };
            }
            (lhs > rhs).then(|| {
                let slice = Slice { u: digits[..n].to_vec(), v: digits[n..].to_vec() };
                let full = fiber_full(&slice.u, &slice.v)?;
                Ok((slice, full))
            })
        })
        .collect::<Result<_>>()?;
    let non_full: Vec<Slice> = scored.iter().filter(|(_, full)| !full).map(|(s, _)| s.clone()).collect();
    let members: Vec<Slice> = scored.into_iter().map(|(s, _)| s).collect();

    let xy = BigInt::from(brick.xy_cardinality());
    let pb = BigInt::from(p);
    let denom = &xy - pb.pow(n as u32 + 2);
    let size = members.len();
    let e = BigRational::from_integer(BigInt::from(size));
    let two_step_bound = denom
        .is_positive()
        .then(|| BigRational::new(&xy * &xy - pb.pow(3 * n as u32 + 2), denom));
    let meets_two_step_bound = two_step_bound.as_ref().map(|b| &e >= b);

    // Π|X||Y| > p^(3n/2 + 7/4)  ⇔  (Π|X||Y|)^4 > p^(6n + 7)
    let final_bound_hypothesis = xy.pow(4) > pb.pow(6 * n as u32 + 7);
    let xy_f = ratio_to_f64(&BigRational::from_integer(xy.clone()));
    let final_bound = (1.0 - (p as f64).powf(-1.5)) * xy_f;
    let meets_final_bound = size as f64 >= final_bound;

    Ok(GoodPairReport {
        members,
        size,
        non_full_members: non_full,
        two_step_bound,
        meets_two_step_bound,
        final_bound,
        final_bound_hypothesis,
        meets_final_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brick::DEFAULT_FIBER_CAP;
    use crate::field::PrimeField;
    use crate::residue_set::ResidueSet;

    fn set(f: &PrimeField, items: &[u32]) -> ResidueSet {
        ResidueSet::from_residues(f, items.iter().copied()).unwrap()
    }

    #[test]
    fn single_slice_with_doubled_z() {
        // 2{0,1,2} = F_5, single slice (2, 2)
        let f = PrimeField::new(5).unwrap();
        let b = Brick::new(vec![set(&f, &[1])], vec![set(&f, &[1])], set(&f, &[0, 1, 2])).unwrap();
        let r = count_center_cosets(&b.square(DEFAULT_FIBER_CAP).unwrap(), &b).unwrap();
        assert_eq!(r.center_coset_count, 1);
        assert_eq!(r.coset_witnesses, vec![Slice { u: vec![2], v: vec![2] }]);
        assert_eq!(ratio_to_string(&r.threshold_count), "3/5");
        assert!(r.meets_threshold);
    }

    #[test]
    fn worked_instance_p11() {
        let f = PrimeField::new(11).unwrap();
        let u = ResidueSet::units(&f);
        let b = Brick::new(vec![u.clone()], vec![u.clone()], set(&f, &[0, 1, 2, 3, 4])).unwrap();
        let cert = th1_certificate(&b).unwrap();
        // |X ∩ (a − X)| = 10 at a = 0 (the popular shift), 9 elsewhere
        assert_eq!(cert.a, vec![0]);
        assert_eq!(cert.tilde_x_sizes, vec![10]);
        assert!(cert.condition_holds);
        assert_eq!(cert.fiber_full, Some(true));
        assert_eq!(cert.sumprod_covers, Some(true));

        let e = good_pair_set(&b, DEFAULT_FIBER_CAP).unwrap();
        assert_eq!(e.size, 121);
        assert!(e.non_full_members.is_empty());
        assert!(e.two_step_bound.is_none());
        assert!((e.final_bound - 97.2589).abs() < 1e-3);
        assert!(e.meets_final_bound);

        let cosets = count_center_cosets(&b.square(DEFAULT_FIBER_CAP).unwrap(), &b).unwrap();
        assert_eq!(ratio_to_string(&cosets.threshold_count), "500/11");
        assert!(cosets.meets_threshold);
    }

    #[test]
    fn condition_fails_quietly() {
        let f = PrimeField::new(5).unwrap();
        let b = Brick::new(vec![set(&f, &[1, 2])], vec![set(&f, &[1, 2])], set(&f, &[0])).unwrap();
        let cert = th1_certificate(&b).unwrap();
        assert!(!cert.condition_holds);
        assert_eq!(cert.condition_lhs, "4");
        assert_eq!(cert.condition_rhs, "125");
        assert!(cert.witness.is_none());
    }
}
