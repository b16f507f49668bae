//! Bricks B = [X, Y, Z] and their exact product sets, computed slice by slice.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::element_set::ElementSet;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::heisenberg::{HeisElement, HeisenbergGroup};
use crate::residue_set::{ResidueSet, SetSpec};

/// Default bound on the number of (u, v) slices a product may enumerate.
pub const DEFAULT_FIBER_CAP: u128 = 10_000_000;

/// B = {[x, y, z] : x_i ∈ X_i, y_i ∈ Y_i, z ∈ Z}.
///
/// A regular brick has every X_i, Y_i a nonempty subset of F*. The two explicit
/// constructions that place 0 in X_i are built with [`Brick::relaxed`] and carry
/// the flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Brick {
    group: HeisenbergGroup,
    xs: Vec<ResidueSet>,
    ys: Vec<ResidueSet>,
    z: ResidueSet,
    relaxed: bool,
}

impl Brick {
    pub fn new(xs: Vec<ResidueSet>, ys: Vec<ResidueSet>, z: ResidueSet) -> Result<Self> {
        Self::build(xs, ys, z, false)
    }

    /// A brick whose X_i, Y_i may contain 0.
    pub fn relaxed(xs: Vec<ResidueSet>, ys: Vec<ResidueSet>, z: ResidueSet) -> Result<Self> {
        Self::build(xs, ys, z, true)
    }

    fn build(xs: Vec<ResidueSet>, ys: Vec<ResidueSet>, z: ResidueSet, relaxed: bool) -> Result<Self> {
        if xs.len() != ys.len() || xs.is_empty() {
            return Err(Error::input(format!("brick needs n >= 1 X and Y sets, got {} and {}", xs.len(), ys.len())));
        }
        let field = z.field().clone();
        for (letter, sets) in [("X", &xs), ("Y", &ys)] {
            for (i, s) in sets.iter().enumerate() {
                field.same_as(s.field())?;
                if s.is_empty() {
                    return Err(Error::input(format!("{letter}_{} is empty", i + 1)));
                }
                if !relaxed && s.contains(0) {
                    return Err(Error::input(format!("{letter}_{} contains 0; brick sets must lie in F*", i + 1)));
                }
            }
        }
        if z.is_empty() {
            return Err(Error::input("Z is empty"));
        }
        let group = HeisenbergGroup::new(&field, xs.len())?;
        Ok(Brick { group, xs, ys, z, relaxed })
    }

    pub fn group(&self) -> &HeisenbergGroup {
        &self.group
    }

    pub fn field(&self) -> &PrimeField {
        self.group.field()
    }

    pub fn p(&self) -> u32 {
        self.group.p()
    }

    pub fn n(&self) -> usize {
        self.group.n()
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

    pub fn is_relaxed(&self) -> bool {
        self.relaxed
    }

    /// Π|X_i||Y_i|.
    pub fn xy_cardinality(&self) -> BigUint {
        self.xs.iter().chain(&self.ys).map(|s| BigUint::from(s.len())).product()
    }

    /// |B| = |Z|·Π|X_i||Y_i|.
    pub fn cardinality(&self) -> BigUint {
        self.xy_cardinality() * BigUint::from(self.z.len())
    }

    pub fn contains(&self, g: &HeisElement) -> bool {
        g.n() == self.n()
            && g.y.len() == self.n()
            && g.x.iter().zip(&self.xs).all(|(&c, s)| s.contains(c))
            && g.y.iter().zip(&self.ys).all(|(&c, s)| s.contains(c))
            && self.z.contains(g.z)
    }

    /// B as an explicit element set.
    pub fn to_element_set(&self, cap: u128) -> Result<ElementSet> {
        let mut out = ElementSet::empty(&self.group, cap)?;
        let comps: Vec<Vec<u32>> = self.xs.iter().chain(&self.ys).chain(std::iter::once(&self.z)).map(|s| s.to_vec()).collect();
        let n = self.n();
        for digits in odometer(&comps) {
            out.insert(&HeisElement::new(digits[..n].to_vec(), digits[n..2 * n].to_vec(), digits[2 * n]))?;
        }
        Ok(out)
    }

    fn same_shape(&self, other: &Brick) -> Result<()> {
        if self.group != other.group {
            return Err(Error::ParameterMismatch {
                p: self.p(),
                n: self.n(),
                detail: format!("other brick lives in H_{} over F_{}", other.n(), other.p()),
            });
        }
        Ok(())
    }

    /// Slice of B·B' over (u, v):
    /// (Z + Z') + Σ_i {x·y' : x ∈ X_i ∩ (u_i − X'_i), y' ∈ Y'_i ∩ (v_i − Y_i)}.
    /// Empty when some intersection is empty.
    pub fn product_fiber(&self, other: &Brick, u: &[u32], v: &[u32]) -> Result<ResidueSet> {
        self.same_shape(other)?;
        if u.len() != self.n() || v.len() != self.n() {
            return Err(Error::input("slice coordinates have the wrong length"));
        }
        let mut acc = self.z.sumset(&other.z)?;
        for i in 0..self.n() {
            let xi = self.xs[i].intersection(&other.xs[i].reflect(self.field().check_residue(u[i])?))?;
            let yi = other.ys[i].intersection(&self.ys[i].reflect(self.field().check_residue(v[i])?))?;
            if xi.is_empty() || yi.is_empty() {
                return Ok(ResidueSet::empty(self.field()));
            }
            if !acc.is_full() {
                acc = acc.sumset(&xi.product_set(&yi)?)?;
            }
        }
        Ok(acc)
    }

    /// Number of slices the product B·B' enumerates: Π|X_i + X'_i||Y_i + Y'_i|.
    pub fn product_slice_count(&self, other: &Brick) -> Result<u128> {
        self.same_shape(other)?;
        let mut total: u128 = 1;
        for i in 0..self.n() {
            for (a, b) in [(&self.xs[i], &other.xs[i]), (&self.ys[i], &other.ys[i])] {
                total = total.saturating_mul(a.sumset(b)?.len() as u128);
            }
        }
        Ok(total)
    }

    /// B·B' exactly, as a fibered set.
    pub fn product(&self, other: &Brick, fiber_cap: u128) -> Result<FiberedProductSet> {
        let required = self.product_slice_count(other)?;
        if required > fiber_cap {
            return Err(Error::CapExceeded { what: "product slice count", required, cap: fiber_cap });
        }
        let n = self.n();
        let p = self.p();

        // per coordinate: X_i ∩ (u − X'_i) and Y'_i ∩ (v − Y_i) for every reachable u, v
        let mut u_lists = Vec::with_capacity(n);
        let mut v_lists = Vec::with_capacity(n);
        let mut tables: Vec<HashMap<(u32, u32), ResidueSet>> = Vec::with_capacity(n);
        for i in 0..n {
            let xint: BTreeMap<u32, ResidueSet> = (0..p)
                .map(|u| (u, self.xs[i].intersection(&other.xs[i].reflect(u)).expect("same field")))
                .filter(|(_, s)| !s.is_empty())
                .collect();
            let yint: BTreeMap<u32, ResidueSet> = (0..p)
                .map(|v| (v, other.ys[i].intersection(&self.ys[i].reflect(v)).expect("same field")))
                .filter(|(_, s)| !s.is_empty())
                .collect();
            let mut table = HashMap::with_capacity(xint.len() * yint.len());
            for (&u, xs) in &xint {
                for (&v, ys) in &yint {
                    table.insert((u, v), xs.product_set(ys)?);
                }
            }
            u_lists.push(xint.keys().copied().collect::<Vec<_>>());
            v_lists.push(yint.keys().copied().collect::<Vec<_>>());
            tables.push(table);
        }
        let zz = self.z.sumset(&other.z)?;
        let radices: Vec<&Vec<u32>> = u_lists.iter().chain(&v_lists).collect();

        let fibers: Vec<(Slice, ResidueSet)> = (0..required as usize)
            .into_par_iter()
            .map(|idx| {
                let digits = mixed_radix(idx, &radices);
                let (u, v) = digits.split_at(n);
                let mut acc = zz.clone();
                for i in 0..n {
                    if acc.is_full() {
                        break;
                    }
                    acc = acc.sumset(&tables[i][&(u[i], v[i])]).expect("same field");
                }
                (Slice { u: u.to_vec(), v: v.to_vec() }, acc)
            })
            .collect();

        Ok(FiberedProductSet { group: self.group.clone(), fibers: fibers.into_iter().collect() })
    }

    /// B·B.
    pub fn square(&self, fiber_cap: u128) -> Result<FiberedProductSet> {
        self.product(self, fiber_cap)
    }

    /// Wire form.
    pub fn to_spec(&self) -> BrickSpec {
        BrickSpec {
            p: self.p(),
            n: self.n(),
            x: self.xs.iter().map(SetSpec::from_set).collect(),
            y: self.ys.iter().map(SetSpec::from_set).collect(),
            z: SetSpec::from_set(&self.z),
        }
    }
}

fn mixed_radix(mut idx: usize, radices: &[&Vec<u32>]) -> Vec<u32> {
    let mut digits = vec![0u32; radices.len()];
    for (slot, list) in digits.iter_mut().zip(radices).rev() {
        *slot = list[idx % list.len()];
        idx /= list.len();
    }
    digits
}

/// Entry `idx` of [`odometer`].
pub(crate) fn odometer_at(lists: &[Vec<u32>], idx: usize) -> Vec<u32> {
    let refs: Vec<&Vec<u32>> = lists.iter().collect();
    mixed_radix(idx, &refs)
}

/// Cartesian product of the given lists, last list varying fastest.
pub(crate) fn odometer(lists: &[Vec<u32>]) -> impl Iterator<Item = Vec<u32>> + '_ {
    let total: usize = lists.iter().map(|l| l.len()).product();
    let refs: Vec<&Vec<u32>> = lists.iter().collect();
    (0..total).map(move |i| mixed_radix(i, &refs))
}

/// Brick JSON: {"p": int, "n": int, "X": [set, …], "Y": [set, …], "Z": set}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrickSpec {
    pub p: u32,
    pub n: usize,
    #[serde(rename = "X")]
    pub x: Vec<SetSpec>,
    #[serde(rename = "Y")]
    pub y: Vec<SetSpec>,
    #[serde(rename = "Z")]
    pub z: SetSpec,
}

impl BrickSpec {
    pub fn build(&self) -> Result<Brick> {
        self.build_with_max_prime(crate::field::DEFAULT_MAX_PRIME)
    }

    pub fn build_with_max_prime(&self, max_p: u32) -> Result<Brick> {
        let field = PrimeField::with_max(self.p, max_p)?;
        if self.x.len() != self.n || self.y.len() != self.n {
            return Err(Error::input(format!(
                "n = {} but {} X sets and {} Y sets were given",
                self.n,
                self.x.len(),
                self.y.len()
            )));
        }
        let resolve = |v: &Vec<SetSpec>| v.iter().map(|s| s.resolve(&field)).collect::<Result<Vec<_>>>();
        Brick::new(resolve(&self.x)?, resolve(&self.y)?, self.z.resolve(&field)?)
    }
}

/// Coordinates (u, v) ∈ F^n × F^n of one slice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slice {
    pub u: Vec<u32>,
    pub v: Vec<u32>,
}

/// A subset of H_n stored as (u, v) ↦ {w : [u, v, w] in the set}, nonempty slices only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberedProductSet {
    group: HeisenbergGroup,
    fibers: BTreeMap<Slice, ResidueSet>,
}

/// Coordinate projections (U_1..U_n, V_1..V_n, W) of a fibered set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Projections {
    #[serde(rename = "U")]
    pub us: Vec<ResidueSet>,
    #[serde(rename = "V")]
    pub vs: Vec<ResidueSet>,
    #[serde(rename = "W")]
    pub w: ResidueSet,
}

/// Which half of the slice coordinates a full-line search looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    X,
    Y,
}

impl FiberedProductSet {
    /// Regroups an explicit set by slices.
    pub fn from_element_set(set: &ElementSet) -> Self {
        let group = set.group().clone();
        let mut fibers: BTreeMap<Slice, ResidueSet> = BTreeMap::new();
        for e in set.iter() {
            fibers
                .entry(Slice { u: e.x, v: e.y })
                .or_insert_with(|| ResidueSet::empty(group.field()))
                .insert(e.z);
        }
        FiberedProductSet { group, fibers }
    }

    pub fn group(&self) -> &HeisenbergGroup {
        &self.group
    }

    pub fn p(&self) -> u32 {
        self.group.p()
    }

    pub fn n(&self) -> usize {
        self.group.n()
    }

    pub fn support_len(&self) -> usize {
        self.fibers.len()
    }

    pub fn support(&self) -> impl Iterator<Item = &Slice> {
        self.fibers.keys()
    }

    /// (slice, fiber) pairs in lexicographic slice order.
    pub fn iter(&self) -> impl Iterator<Item = (&Slice, &ResidueSet)> {
        self.fibers.iter()
    }

    pub fn fiber(&self, u: &[u32], v: &[u32]) -> Option<&ResidueSet> {
        // BTreeMap lookups need an owned key
        self.fibers.get(&Slice { u: u.to_vec(), v: v.to_vec() })
    }

    pub fn fiber_at(&self, slice: &Slice) -> Option<&ResidueSet> {
        self.fibers.get(slice)
    }

    /// Σ |fiber|.
    pub fn cardinality(&self) -> u128 {
        self.fibers.values().map(|f| f.len() as u128).sum()
    }

    pub fn contains(&self, e: &HeisElement) -> bool {
        self.fiber(&e.x, &e.y).is_some_and(|f| f.contains(e.z))
    }

    pub fn projections(&self) -> Projections {
        let field = self.group.field();
        let n = self.n();
        let mut us = vec![ResidueSet::empty(field); n];
        let mut vs = vec![ResidueSet::empty(field); n];
        let mut w = ResidueSet::empty(field);
        for (s, f) in &self.fibers {
            for i in 0..n {
                us[i].insert(s.u[i]);
                vs[i].insert(s.v[i]);
            }
            w = w.union(f).expect("same field");
        }
        Projections { us, vs, w }
    }

    pub fn to_element_set(&self, cap: u128) -> Result<ElementSet> {
        let mut out = ElementSet::empty(&self.group, cap)?;
        for (s, f) in &self.fibers {
            for w in f.iter() {
                out.insert(&HeisElement::new(s.u.clone(), s.v.clone(), w))?;
            }
        }
        Ok(out)
    }

    /// Finds a full line {c_1}×…×F×…×{c_n} inside the set of u-vectors (or
    /// v-vectors) of the support. Returns the free coordinate and the point
    /// with that coordinate set to 0.
    pub fn full_line_witness(&self, letter: Letter) -> Option<(usize, Vec<u32>)> {
        let vectors: BTreeSet<&Vec<u32>> =
            self.fibers.keys().map(|s| if letter == Letter::X { &s.u } else { &s.v }).collect();
        let p = self.p() as usize;
        for i in 0..self.n() {
            let mut lines: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
            for v in &vectors {
                let mut key = (*v).clone();
                key[i] = 0;
                *lines.entry(key).or_default() += 1;
            }
            if let Some((k, _)) = lines.into_iter().find(|(_, c)| *c == p) {
                return Some((i, k));
            }
        }
        None
    }
}
