//! Growth of B·B against the size of its period.
//!
//! Components are split by size into singletons, medium (1 < s ≤ p/√2, counted
//! by k) and large (s > p/√2, counted by ℓ). Medium components at least grow by
//! √2 under doubling (Cauchy–Davenport), so |B·B| ≥ (√2)^k|B|; with three or
//! more large components, two of the same letter can be pinned at popular sums
//! so that the remaining large ones, together with the center, form a
//! coordinate subgroup of order p^(ℓ−1).

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::cosets::ser_ratio;
use super::period::structured_period;
use super::popular::choose_popular_shift;
use super::ratio_to_f64;
use crate::brick::{odometer, Brick};
use crate::element_set::ElementSet;
use crate::error::{Error, Result};
use crate::heisenberg::CoordinateSubgroup;

/// Multiplicative constant of the growth bound.
pub const GROWTH_CONSTANT: f64 = 0.25;

/// Relative slack for the real-valued bound comparison.
const BOUND_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentClass {
    Singleton,
    Medium,
    Large,
}

/// Exact integer thresholds: large iff 2s² > p².
pub fn classify(size: usize, p: u32) -> ComponentClass {
    let (s, p) = (size as u64, p as u64);
    if s <= 1 {
        ComponentClass::Singleton
    } else if 2 * s * s > p * p {
        ComponentClass::Large
    } else {
        ComponentClass::Medium
    }
}

/// Two large components of one letter fixed at popular sums.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PinnedPair {
    pub letter: char,
    pub i: usize,
    pub w_i: u32,
    pub j: usize,
    pub w_j: u32,
    /// |X_i ∩ (w_i − X_i)| and |X_j ∩ (w_j − X_j)|, both > p/2.
    pub intersection_sizes: (usize, usize),
}

#[derive(Debug, Clone, Serialize)]
pub struct Th13Analysis {
    pub classes: Vec<ComponentClass>,
    pub k: usize,
    pub l: usize,
    pub singletons: usize,
    pub recipe_group: CoordinateSubgroup,
    pub recipe_order: u128,
    pub pinned: Option<PinnedPair>,
    /// Whether every slice with the pinned coordinates has fiber F.
    pub pinned_cosets_full: Option<bool>,
    pub brick_cardinality: String,
    pub product_cardinality: u128,
    #[serde(serialize_with = "ser_ratio")]
    pub ratio: BigRational,
    pub alpha: f64,
    pub verified_period: CoordinateSubgroup,
    pub verified_period_order: u128,
    /// (1/4)·(|B|/|G_ver|)^α
    pub ratio_lower_bound: f64,
    pub bound_holds: bool,
    /// |B·B|/|B| ≥ (√2)^k, checked exactly as |B·B|² ≥ 2^k|B|².
    pub sqrt2_bound_holds: bool,
    /// B·B·G = B·B for the recipe group, at slice level.
    pub recipe_is_period: bool,
    /// The same, by explicit products, when the group is under the brute-force cap.
    pub recipe_brute_check: Option<bool>,
}

impl Th13Analysis {
    pub fn passed(&self) -> bool {
        self.bound_holds && self.sqrt2_bound_holds
    }
}

pub fn th13_analysis(brick: &Brick, fiber_cap: u128, brute_cap: u128) -> Result<Th13Analysis> {
    let p = brick.p();
    let n = brick.n();
    let comps: Vec<_> = brick.xs().iter().chain(brick.ys()).collect();
    let classes: Vec<ComponentClass> = comps.iter().map(|s| classify(s.len(), p)).collect();
    let count = |c| classes.iter().filter(|&&x| x == c).count();
    let (k, l, singletons) =
        (count(ComponentClass::Medium), count(ComponentClass::Large), count(ComponentClass::Singleton));
    let large_x: Vec<usize> = (0..n).filter(|&i| classes[i] == ComponentClass::Large).collect();
    let large_y: Vec<usize> = (0..n).filter(|&i| classes[n + i] == ComponentClass::Large).collect();

    let square = brick.square(fiber_cap)?;

    // with ℓ ≥ 3 and two letters, some letter holds two large components
    let (recipe_group, pinned) = if l >= 3 {
        let (letter, idx, sets) = if large_x.len() >= 2 {
            ('x', &large_x, brick.xs())
        } else {
            ('y', &large_y, brick.ys())
        };
        let (i, j) = (idx[0], idx[1]);
        let si = choose_popular_shift(&sets[i])?;
        let sj = choose_popular_shift(&sets[j])?;
        for s in [&si, &sj] {
            if 2 * s.tilde.len() <= p as usize {
                return Err(Error::Inconsistency(format!(
                    "large component has only {} representations of its popular sum",
                    s.tilde.len()
                )));
            }
        }
        let mut kx: Vec<bool> = (0..n).map(|h| classes[h] == ComponentClass::Large).collect();
        let mut ky: Vec<bool> = (0..n).map(|h| classes[n + h] == ComponentClass::Large).collect();
        let pinned_flags = if letter == 'x' { &mut kx } else { &mut ky };
        pinned_flags[i] = false;
        pinned_flags[j] = false;
        let group = CoordinateSubgroup::try_new(kx, ky, true)?;
        let pin = PinnedPair {
            letter,
            i,
            w_i: si.shift,
            j,
            w_j: sj.shift,
            intersection_sizes: (si.tilde.len(), sj.tilde.len()),
        };
        (group, Some(pin))
    } else {
        (CoordinateSubgroup::trivial(n), None)
    };

    let pinned_cosets_full = match &pinned {
        Some(pin) => {
            let pr = square.projections();
            let mut lists: Vec<Vec<u32>> = pr.us.iter().chain(&pr.vs).map(|s| s.to_vec()).collect();
            let off = if pin.letter == 'x' { 0 } else { n };
            lists[off + pin.i] = vec![pin.w_i];
            lists[off + pin.j] = vec![pin.w_j];
            let all_full = odometer(&lists).all(|d| square.fiber(&d[..n], &d[n..]).is_some_and(|f| f.is_full()));
            Some(all_full)
        }
        None => None,
    };

    let period = structured_period(&square)?;
    let card = brick.cardinality();
    let prod_card = square.cardinality();
    let ratio = BigRational::new(BigInt::from(prod_card), BigInt::from(card.clone()));

    let alpha = 3f64.ln() / (2.0 * (p as f64).ln());
    let ln_b = card.to_f64().map(f64::ln).unwrap_or(f64::INFINITY);
    let ln_g = (period.period_order as f64).ln();
    let ratio_lower_bound = GROWTH_CONSTANT * (alpha * (ln_b - ln_g)).exp();
    let bound_holds = ratio_to_f64(&ratio) >= ratio_lower_bound * (1.0 - BOUND_REL_TOL);

    let card_big = BigUint::from(prod_card);
    let sqrt2_bound_holds = &card_big * &card_big >= (BigUint::from(1u32) << k) * &card * &card;

    let recipe_is_period = recipe_group.is_subgroup_of(&period.period);
    let recipe_brute_check = if brick.group().order().is_some_and(|o| o <= brute_cap) {
        let explicit = square.to_element_set(brute_cap)?;
        let g = ElementSet::coordinate_subgroup(brick.group(), brute_cap, &recipe_group)?;
        Some(explicit.product(&g)? == explicit)
    } else {
        None
    };

    Ok(Th13Analysis {
        classes,
        k,
        l,
        singletons,
        recipe_order: recipe_group.order(p),
        recipe_group,
        pinned,
        pinned_cosets_full,
        brick_cardinality: card.to_string(),
        product_cardinality: prod_card,
        ratio,
        alpha,
        verified_period_order: period.period_order,
        verified_period: period.period,
        ratio_lower_bound,
        bound_holds,
        sqrt2_bound_holds,
        recipe_is_period,
        recipe_brute_check,
    })
}
