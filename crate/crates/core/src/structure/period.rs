//! Periods: subgroups G with P·G = P.

use serde::Serialize;

use crate::brick::{FiberedProductSet, Slice};
use crate::element_set::ElementSet;
use crate::error::{Error, Result};
use crate::heisenberg::{CoordinateSubgroup, Direction, HeisElement};

/// Which unit generators g satisfy P·g = P.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantDirections {
    pub x: Vec<bool>,
    pub y: Vec<bool>,
    pub center: bool,
}

impl InvariantDirections {
    pub fn get(&self, d: Direction) -> bool {
        match d {
            Direction::X(i) => self.x[i],
            Direction::Y(i) => self.y[i],
            Direction::Center => self.center,
        }
    }

    pub fn names(&self) -> Vec<String> {
        let n = self.x.len();
        (0..n)
            .map(Direction::X)
            .chain((0..n).map(Direction::Y))
            .chain(std::iter::once(Direction::Center))
            .filter(|&d| self.get(d))
            .map(|d| d.to_string())
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PeriodReport {
    pub invariant_directions: InvariantDirections,
    /// Largest coordinate subgroup G with P·G = P.
    pub period: CoordinateSubgroup,
    pub period_order: u128,
    /// |{g : P·g = P}| by exhaustion, when the group is small enough.
    pub full_stabilizer_order: Option<u128>,
}

/// Tests right-invariance of P under each unit generator and returns the
/// coordinate subgroup they generate.
///
/// Right multiplication acts on slices as
/// - by [e_i, 0, 0]: (u, v, w) ↦ (u + e_i, v, w)
/// - by [0, e_i, 0]: (u, v, w) ↦ (u, v + e_i, w + u_i)
/// - by [0, 0, 1]:   (u, v, w) ↦ (u, v, w + 1)
///
/// Each is a bijection of H_n, so P·g ⊆ P already forces P·g = P.
pub fn structured_period(product: &FiberedProductSet) -> Result<PeriodReport> {
    let n = product.n();
    let field = product.group().field().clone();
    let shifted_fiber_matches = |s: &Slice, fib: &crate::residue_set::ResidueSet, dir: Direction| -> bool {
        let mut t = s.clone();
        let expect = match dir {
            Direction::X(i) => {
                t.u[i] = field.add(t.u[i], 1);
                fib.clone()
            }
            Direction::Y(i) => {
                t.v[i] = field.add(t.v[i], 1);
                fib.translate(s.u[i])
            }
            Direction::Center => unreachable!(),
        };
        product.fiber_at(&t) == Some(&expect)
    };
    let x: Vec<bool> = (0..n)
        .map(|i| product.iter().all(|(s, f)| shifted_fiber_matches(s, f, Direction::X(i))))
        .collect();
    let y: Vec<bool> = (0..n)
        .map(|i| product.iter().all(|(s, f)| shifted_fiber_matches(s, f, Direction::Y(i))))
        .collect();
    let center = product.iter().all(|(_, f)| f.is_full());

    // [e_i, 0, 0] and [0, e_i, 0] generate the center through their commutator
    let forced = x.iter().zip(&y).any(|(&a, &b)| a && b);
    if forced && !center {
        return Err(Error::Inconsistency(
            "x_i and y_i directions are invariant but the center direction is not".into(),
        ));
    }
    let period = CoordinateSubgroup::try_new(x.clone(), y.clone(), center)?;

    // element-level confirmation through the group law
    let group = product.group();
    for gen in period.generators(group) {
        for (s, f) in product.iter() {
            for w in f.iter() {
                let e = HeisElement::new(s.u.clone(), s.v.clone(), w);
                let moved = group.mul(&e, &gen)?;
                if !product.contains(&moved) {
                    return Err(Error::Inconsistency(format!("{e}·{gen} = {moved} leaves the set")));
                }
            }
        }
    }

    Ok(PeriodReport {
        period_order: period.order(group.p()),
        invariant_directions: InvariantDirections { x, y, center },
        period,
        full_stabilizer_order: None,
    })
}

/// [`structured_period`] plus, when |H_n| ≤ `brute_cap`, the exhaustive
/// stabilizer, which must contain the structured period.
pub fn structured_period_checked(product: &FiberedProductSet, brute_cap: u128) -> Result<PeriodReport> {
    let mut report = structured_period(product)?;
    let under_cap = product.group().order().is_some_and(|o| o <= brute_cap);
    if under_cap {
        let explicit = product.to_element_set(brute_cap)?;
        let stab = brute_stabilizer(&explicit)?;
        let period_elems = ElementSet::coordinate_subgroup(product.group(), brute_cap, &report.period)?;
        if !period_elems.is_subset(&stab) {
            return Err(Error::Inconsistency("structured period is not inside the exhaustive stabilizer".into()));
        }
        report.full_stabilizer_order = Some(stab.len() as u128);
    }
    Ok(report)
}

/// {g : P·g = P} by exhaustion.
pub fn brute_stabilizer(set: &ElementSet) -> Result<ElementSet> {
    set.right_stabilizer()
}
