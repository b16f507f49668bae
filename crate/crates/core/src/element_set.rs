//! Explicit subsets of H_n for brute-force checks at tiny scale.
//!
//! Elements are encoded as mixed-radix integers with digits
//! (x_1, …, x_n, y_1, …, y_n, z), x_1 most significant, so numeric order is the
//! canonical lexicographic order on (x, y, z).

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::heisenberg::{CoordinateSubgroup, HeisElement, HeisenbergGroup};

/// Default bound on |H_n| for explicit enumeration.
pub const DEFAULT_BRUTE_CAP: u128 = 1_000_000;

/// A subset of H_n held as a bit array over the whole group.
#[derive(Clone, PartialEq, Eq)]
pub struct ElementSet {
    group: HeisenbergGroup,
    order: usize,
    bits: Vec<u64>,
}

impl std::fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ElementSet")
            .field("p", &self.group.p())
            .field("n", &self.group.n())
            .field("len", &self.len())
            .finish()
    }
}

impl ElementSet {
    /// The empty set; fails if p^(2n+1) exceeds `cap`.
    pub fn empty(group: &HeisenbergGroup, cap: u128) -> Result<Self> {
        let order = match group.order() {
            Some(o) if o <= cap => o as usize,
            other => {
                return Err(Error::CapExceeded {
                    what: "brute-force group order p^(2n+1)",
                    required: other.unwrap_or(u128::MAX),
                    cap,
                })
            }
        };
        Ok(ElementSet { group: group.clone(), order, bits: vec![0; order.div_ceil(64)] })
    }

    /// All of H_n.
    pub fn full_group(group: &HeisenbergGroup, cap: u128) -> Result<Self> {
        let mut s = Self::empty(group, cap)?;
        for c in 0..s.order {
            s.insert_code(c);
        }
        Ok(s)
    }

    pub fn from_elements<'a>(
        group: &HeisenbergGroup,
        cap: u128,
        elements: impl IntoIterator<Item = &'a HeisElement>,
    ) -> Result<Self> {
        let mut s = Self::empty(group, cap)?;
        for e in elements {
            s.insert(e)?;
        }
        Ok(s)
    }

    /// Materializes a coordinate subgroup.
    pub fn coordinate_subgroup(group: &HeisenbergGroup, cap: u128, sub: &CoordinateSubgroup) -> Result<Self> {
        let mut s = Self::empty(group, cap)?;
        if sub.n() != group.n() {
            return Err(Error::input("subgroup profile has the wrong n"));
        }
        for c in 0..s.order {
            if sub.contains(&s.decode(c)) {
                s.insert_code(c);
            }
        }
        Ok(s)
    }

    /// Materializes an arbitrary box profile, closed or not.
    pub fn coordinate_box(group: &HeisenbergGroup, cap: u128, kx: &[bool], ky: &[bool], m: bool) -> Result<Self> {
        let mut s = Self::empty(group, cap)?;
        let ok = |full: bool, c: u32| full || c == 0;
        for c in 0..s.order {
            let e = s.decode(c);
            if e.x.iter().zip(kx).all(|(&v, &f)| ok(f, v)) && e.y.iter().zip(ky).all(|(&v, &f)| ok(f, v)) && ok(m, e.z) {
                s.insert_code(c);
            }
        }
        Ok(s)
    }

    pub fn group(&self) -> &HeisenbergGroup {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.order
    }

    pub fn insert(&mut self, e: &HeisElement) -> Result<()> {
        self.group.check(e)?;
        let c = self.encode(e);
        self.insert_code(c);
        Ok(())
    }

    pub fn contains(&self, e: &HeisElement) -> bool {
        self.group.check(e).is_ok() && self.contains_code(self.encode(e))
    }

    /// Members in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = HeisElement> + '_ {
        self.codes().map(move |c| self.decode(c))
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.group == other.group && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    /// {s·t : s ∈ self, t ∈ other}.
    pub fn product(&self, other: &ElementSet) -> Result<ElementSet> {
        self.same_group(other)?;
        let left = self.digit_table();
        let right = other.digit_table();
        let dim = self.group.dim();
        let mut out = ElementSet { group: self.group.clone(), order: self.order, bits: vec![0; self.bits.len()] };
        for s in left.chunks_exact(dim) {
            for t in right.chunks_exact(dim) {
                out.insert_code(self.product_code(s, t));
            }
        }
        Ok(out)
    }

    /// {P⁻¹·s·P : s ∈ self}.
    pub fn conjugate(&self, by: &HeisElement) -> Result<ElementSet> {
        self.group.check(by)?;
        let pinv = self.group.inv_unchecked(by);
        let mut out = ElementSet { group: self.group.clone(), order: self.order, bits: vec![0; self.bits.len()] };
        for s in self.iter() {
            let c = self.group.mul_unchecked(&self.group.mul_unchecked(&pinv, &s), by);
            out.insert_code(self.encode(&c));
        }
        Ok(out)
    }

    /// A pair (a, b) of members with a·b outside the set, if any.
    pub fn closure_witness(&self) -> Option<(HeisElement, HeisElement)> {
        let dim = self.group.dim();
        let table = self.digit_table();
        for s in table.chunks_exact(dim) {
            for t in table.chunks_exact(dim) {
                if !self.contains_code(self.product_code(s, t)) {
                    return Some((self.digits_to_element(s), self.digits_to_element(t)));
                }
            }
        }
        None
    }

    /// Nonempty, contains e, closed under products and inverses.
    pub fn is_subgroup(&self) -> bool {
        if !self.contains_code(0) {
            return false;
        }
        if self.iter().any(|a| !self.contains(&self.group.inv_unchecked(&a))) {
            return false;
        }
        self.closure_witness().is_none()
    }

    /// Right stabilizer {g : self·g = self}.
    ///
    /// Subgroup-ness is asserted whenever the quadratic closure check is affordable
    /// (|result|² ≤ 10^8).
    pub fn right_stabilizer(&self) -> Result<ElementSet> {
        let dim = self.group.dim();
        let members = self.digit_table();
        let candidates: Vec<usize> = (0..self.order)
            .into_par_iter()
            .filter(|&g| {
                let gd = self.code_to_digits(g);
                members.chunks_exact(dim).all(|s| self.contains_code(self.product_code(s, &gd)))
            })
            .collect();
        let mut out = ElementSet { group: self.group.clone(), order: self.order, bits: vec![0; self.bits.len()] };
        for g in candidates {
            out.insert_code(g);
        }
        let n = out.len() as u128;
        if n * n <= 100_000_000 && !out.is_subgroup() {
            return Err(Error::Inconsistency("right stabilizer is not a subgroup".into()));
        }
        Ok(out)
    }

    /// {g : g·h = h·g for all h ∈ H_n}, by exhaustion.
    pub fn brute_center(group: &HeisenbergGroup, cap: u128) -> Result<ElementSet> {
        let all = Self::full_group(group, cap)?;
        let dim = group.dim();
        let table = all.digit_table();
        let mut out = Self::empty(group, cap)?;
        for g in table.chunks_exact(dim) {
            if table.chunks_exact(dim).all(|h| all.product_code(g, h) == all.product_code(h, g)) {
                out.insert_code(all.digits_to_code(g));
            }
        }
        Ok(out)
    }

    /// Finds x ∈ self and g ≠ e with x·⟨g⟩ ⊆ self.
    ///
    /// For odd p every nontrivial subgroup of H_n contains an element of order p,
    /// and any coset of it contains a coset of that cyclic subgroup, so `None`
    /// means no coset of any nontrivial subgroup lies in the set. Each cyclic
    /// subgroup is visited once, through its generator whose first nonzero
    /// coordinate is 1.
    pub fn cyclic_coset_witness(&self) -> Option<(HeisElement, HeisElement)> {
        let p = self.group.p() as usize;
        let dim = self.group.dim();
        let members = self.digit_table();
        let found = (1..self.order).into_par_iter().find_map_first(|g| {
            let gd = self.code_to_digits(g);
            if gd.iter().find(|&&d| d != 0) != Some(&1) {
                return None;
            }
            // powers g, g², …, g^(p-1)
            let mut powers = Vec::with_capacity((p - 1) * dim);
            let mut cur = gd.clone();
            for _ in 1..p {
                powers.extend_from_slice(&cur);
                cur = self.product_digits(&cur, &gd);
            }
            members.chunks_exact(dim).find_map(|x| {
                powers
                    .chunks_exact(dim)
                    .all(|gk| self.contains_code(self.product_code(x, gk)))
                    .then(|| (self.digits_to_element(x), self.digits_to_element(&gd)))
            })
        });
        found
    }

    fn same_group(&self, other: &ElementSet) -> Result<()> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(Error::ParameterMismatch {
                p: self.group.p(),
                n: self.group.n(),
                detail: format!("other set lives in H_{} over F_{}", other.group.n(), other.group.p()),
            })
        }
    }

    fn codes(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    #[inline]
    fn insert_code(&mut self, c: usize) {
        self.bits[c / 64] |= 1 << (c % 64);
    }

    #[inline]
    fn contains_code(&self, c: usize) -> bool {
        self.bits[c / 64] >> (c % 64) & 1 == 1
    }

    fn encode(&self, e: &HeisElement) -> usize {
        let p = self.group.p() as usize;
        e.x.iter().chain(&e.y).chain(std::iter::once(&e.z)).fold(0, |acc, &d| acc * p + d as usize)
    }

    fn decode(&self, c: usize) -> HeisElement {
        self.digits_to_element(&self.code_to_digits(c))
    }

    fn code_to_digits(&self, mut c: usize) -> Vec<u32> {
        let p = self.group.p() as usize;
        let mut d = vec![0u32; self.group.dim()];
        for slot in d.iter_mut().rev() {
            *slot = (c % p) as u32;
            c /= p;
        }
        d
    }

    fn digits_to_code(&self, d: &[u32]) -> usize {
        let p = self.group.p() as usize;
        d.iter().fold(0, |acc, &v| acc * p + v as usize)
    }

    fn digits_to_element(&self, d: &[u32]) -> HeisElement {
        let n = self.group.n();
        HeisElement::new(d[..n].to_vec(), d[n..2 * n].to_vec(), d[2 * n])
    }

    /// Flat digit rows of all members.
    fn digit_table(&self) -> Vec<u32> {
        self.codes().flat_map(|c| self.code_to_digits(c)).collect()
    }

    fn product_digits(&self, s: &[u32], t: &[u32]) -> Vec<u32> {
        let c = self.product_code(s, t);
        self.code_to_digits(c)
    }

    #[inline]
    fn product_code(&self, s: &[u32], t: &[u32]) -> usize {
        let p = self.group.p() as u64;
        let n = self.group.n();
        let mut code = 0u64;
        let mut inner = 0u64;
        for i in 0..2 * n {
            let d = s[i] as u64 + t[i] as u64;
            code = code * p + if d >= p { d - p } else { d };
        }
        for i in 0..n {
            inner += s[i] as u64 * t[n + i] as u64;
        }
        let z = (inner + s[2 * n] as u64 + t[2 * n] as u64) % p;
        (code * p + z) as usize
    }
}
