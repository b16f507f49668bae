//! Two explicit bricks: one whose square contains no coset of any nontrivial
//! subgroup, and one whose square has the center as period while growing by
//! less than a factor 4.
//!
//! Both place 0 in X and Y, outside the F* requirement for bricks, and are
//! therefore built as relaxed bricks.

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;

use super::cosets::ser_ratio;
use super::period::{brute_stabilizer, structured_period, PeriodReport};
use crate::brick::{Brick, FiberedProductSet, Letter, Projections};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::heisenberg::{CoordinateSubgroup, HeisElement};
use crate::residue_set::ResidueSet;

/// B = [R, R, Z] with R = {r : 0 ≤ r, 2n·r² < p − 1} in every coordinate and
/// Z = {z : 0 ≤ z, 4z < p}.
pub fn prop2_construct(p: u32, n: usize) -> Result<Brick> {
    let field = PrimeField::new(p)?;
    if n == 0 {
        return Err(Error::input("n must be at least 1"));
    }
    let two_n = 2 * n as u64;
    let r = ResidueSet::from_fn(&field, |t| two_n * (t as u64).pow(2) < p as u64 - 1);
    let z = ResidueSet::from_fn(&field, |t| 4 * (t as u64) < p as u64);
    Brick::relaxed(vec![r.clone(); n], vec![r; n], z)
}

#[derive(Debug, Clone, Serialize)]
pub struct Prop2Report {
    pub p: u32,
    pub n: usize,
    pub r: Vec<u32>,
    pub z: Vec<u32>,
    pub cardinality: String,
    /// p^(n+1) / (4(2n)^n), which equals √p·|H_n|^(1/2) / (4(2n)^n).
    #[serde(serialize_with = "ser_ratio")]
    pub size_bound: BigRational,
    pub size_bound_ok: bool,
    pub projections: Projections,
    pub w_is_full: bool,
    pub full_line_u: Option<(usize, Vec<u32>)>,
    pub full_line_v: Option<(usize, Vec<u32>)>,
    pub structured_period: CoordinateSubgroup,
    pub product_cardinality: u128,
    /// Exhaustive checks, present when |H_n| is under the brute-force cap.
    pub brute_matches_fibered: Option<bool>,
    pub brute_stabilizer_order: Option<usize>,
    pub cyclic_coset_witness: Option<(HeisElement, HeisElement)>,
}

impl Prop2Report {
    pub fn passed(&self) -> bool {
        self.size_bound_ok
            && !self.w_is_full
            && self.full_line_u.is_none()
            && self.full_line_v.is_none()
            && self.structured_period.is_trivial()
            && self.brute_matches_fibered != Some(false)
            && self.brute_stabilizer_order.is_none_or(|o| o == 1)
            && self.cyclic_coset_witness.is_none()
    }
}

pub fn prop2_verify(p: u32, n: usize, fiber_cap: u128, brute_cap: u128) -> Result<Prop2Report> {
    let brick = prop2_construct(p, n)?;
    let card = brick.cardinality();
    let size_bound = BigRational::new(
        BigUint::from(p).pow(n as u32 + 1).into(),
        (BigUint::from(4u32) * BigUint::from(2 * n).pow(n as u32)).into(),
    );
    let size_bound_ok = BigRational::from_integer(card.clone().into()) >= size_bound;

    let square = brick.square(fiber_cap)?;
    let projections = square.projections();
    let period = structured_period(&square)?;

    let mut report = Prop2Report {
        p,
        n,
        r: brick.xs()[0].to_vec(),
        z: brick.z().to_vec(),
        cardinality: card.to_string(),
        size_bound,
        size_bound_ok,
        w_is_full: projections.w.is_full(),
        projections,
        full_line_u: square.full_line_witness(Letter::X),
        full_line_v: square.full_line_witness(Letter::Y),
        structured_period: period.period,
        product_cardinality: square.cardinality(),
        brute_matches_fibered: None,
        brute_stabilizer_order: None,
        cyclic_coset_witness: None,
    };

    if brick.group().order().is_some_and(|o| o <= brute_cap) {
        let explicit = brick.to_element_set(brute_cap)?;
        let brute = explicit.product(&explicit)?;
        report.brute_matches_fibered = Some(brute == square.to_element_set(brute_cap)?);
        report.brute_stabilizer_order = Some(brute_stabilizer(&brute)?.len());
        report.cyclic_coset_witness = brute.cyclic_coset_witness();
    }
    Ok(report)
}

/// B = {[x, y, z] : x, y ∈ {t : 4t² < p}, z ∈ F} in H_1.
pub fn small_period_brick(p: u32) -> Result<Brick> {
    let field = PrimeField::new(p)?;
    let x = ResidueSet::from_fn(&field, |t| 4 * (t as u64).pow(2) < p as u64);
    Brick::relaxed(vec![x.clone()], vec![x], ResidueSet::full(&field))
}

#[derive(Debug, Clone, Serialize)]
pub struct SmallPeriodReport {
    pub p: u32,
    pub x: Vec<u32>,
    pub cardinality: String,
    pub product_cardinality: u128,
    #[serde(serialize_with = "ser_ratio")]
    pub ratio: BigRational,
    pub ratio_below_four: bool,
    pub period: PeriodReport,
    pub period_is_center: bool,
}

impl SmallPeriodReport {
    pub fn passed(&self) -> bool {
        self.ratio_below_four && self.period_is_center
    }
}

pub fn small_period_example(p: u32, fiber_cap: u128) -> Result<SmallPeriodReport> {
    let brick = small_period_brick(p)?;
    let square: FiberedProductSet = brick.square(fiber_cap)?;
    let card = brick.cardinality();
    let prod = square.cardinality();
    let ratio = BigRational::new(prod.into(), card.clone().into());
    let period = structured_period(&square)?;
    Ok(SmallPeriodReport {
        p,
        x: brick.xs()[0].to_vec(),
        cardinality: card.to_string(),
        product_cardinality: prod,
        ratio_below_four: ratio < BigRational::from_integer(4.into()),
        ratio,
        period_is_center: period.period == CoordinateSubgroup::center(1),
        period,
    })
}
