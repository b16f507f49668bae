//! Subsets of Z/p stored as dense bit arrays.

use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::PrimeField;

const WORD: usize = 64;

/// A subset of Z/p. Bits at positions >= p are always clear.
#[derive(Clone, PartialEq, Eq)]
pub struct ResidueSet {
    field: PrimeField,
    words: Vec<u64>,
}

fn word_count(p: u32) -> usize {
    (p as usize).div_ceil(WORD)
}

impl ResidueSet {
    pub fn empty(field: &PrimeField) -> Self {
        ResidueSet { field: field.clone(), words: vec![0; word_count(field.p())] }
    }

    pub fn full(field: &PrimeField) -> Self {
        let mut s = Self::empty(field);
        s.words.iter_mut().for_each(|w| *w = u64::MAX);
        s.clear_tail();
        s
    }

    /// F* = F \ {0}.
    pub fn units(field: &PrimeField) -> Self {
        let mut s = Self::full(field);
        s.remove(0);
        s
    }

    pub fn singleton(field: &PrimeField, a: u32) -> Result<Self> {
        Self::from_residues(field, [a])
    }

    /// Builds a set from residues, each of which must lie in [0, p).
    pub fn from_residues(field: &PrimeField, items: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut s = Self::empty(field);
        for a in items {
            s.insert(field.check_residue(a)?);
        }
        Ok(s)
    }

    /// {a mod p : lo <= a < hi}.
    pub fn interval(field: &PrimeField, lo: i64, hi: i64) -> Result<Self> {
        if hi < lo {
            return Err(Error::input(format!("interval [{lo}, {hi}) is reversed")));
        }
        let p = field.p() as i64;
        if hi - lo >= p {
            return Ok(Self::full(field));
        }
        let mut s = Self::empty(field);
        for a in lo..hi {
            s.insert(field.reduce(a));
        }
        Ok(s)
    }

    /// Builds a set from an arbitrary predicate on residues.
    pub fn from_fn(field: &PrimeField, mut pred: impl FnMut(u32) -> bool) -> Self {
        let mut s = Self::empty(field);
        for a in 0..field.p() {
            if pred(a) {
                s.insert(a);
            }
        }
        s
    }

    /// Decodes a bit mask (bit `a` set means `a` is a member); used by exhaustive sweeps.
    pub fn from_mask(field: &PrimeField, mask: u64) -> Self {
        assert!(field.p() <= 64, "from_mask needs p <= 64");
        let mut s = Self::empty(field);
        s.words[0] = mask;
        s.clear_tail();
        s
    }

    #[inline]
    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.field.p()
    }

    #[inline]
    pub fn contains(&self, a: u32) -> bool {
        a < self.p() && self.words[a as usize / WORD] >> (a as usize % WORD) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, a: u32) {
        debug_assert!(a < self.p());
        self.words[a as usize / WORD] |= 1 << (a as usize % WORD);
    }

    #[inline]
    pub fn remove(&mut self, a: u32) {
        if a < self.p() {
            self.words[a as usize / WORD] &= !(1 << (a as usize % WORD));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.p() as usize
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some((i * WORD) as u32 + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn min(&self) -> Option<u32> {
        self.iter().next()
    }

    pub fn max(&self) -> Option<u32> {
        self.to_vec().last().copied()
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.field.same_as(&other.field)?;
        let mut out = self.clone();
        out.words.iter_mut().zip(&other.words).for_each(|(a, b)| *a |= b);
        Ok(out)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.field.same_as(&other.field)?;
        let mut out = self.clone();
        out.words.iter_mut().zip(&other.words).for_each(|(a, b)| *a &= b);
        Ok(out)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.field == other.field && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// |self ∩ other| without allocating.
    pub fn intersection_len(&self, other: &Self) -> usize {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    /// {a + k}.
    pub fn translate(&self, k: u32) -> Self {
        let mut out = Self::empty(&self.field);
        out.or_translated(self, k % self.p());
        out
    }

    /// {-a}.
    pub fn negate(&self) -> Self {
        let mut out = Self::empty(&self.field);
        for a in self.iter() {
            out.insert(self.field.neg(a));
        }
        out
    }

    /// c - A = {c - a : a ∈ A}.
    pub fn reflect(&self, c: u32) -> Self {
        self.negate().translate(c)
    }

    /// {λa}; λ must be nonzero.
    pub fn dilate(&self, lambda: u32) -> Result<Self> {
        let lambda = self.field.check_residue(lambda)?;
        if lambda == 0 {
            return Err(Error::input("dilation by zero"));
        }
        let mut out = Self::empty(&self.field);
        for a in self.iter() {
            out.insert(self.field.mul(lambda, a));
        }
        Ok(out)
    }

    /// A + B. Word-parallel: one rotated OR of `other` per member of `self`.
    pub fn sumset(&self, other: &Self) -> Result<Self> {
        self.field.same_as(&other.field)?;
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut out = Self::empty(&self.field);
        for a in small.iter() {
            out.or_translated(large, a);
            if out.is_full() {
                break;
            }
        }
        debug_assert!(
            self.is_empty() || other.is_empty() || out.is_full() || out.len() + 1 >= self.len() + other.len(),
            "Cauchy-Davenport violated"
        );
        Ok(out)
    }

    /// A·B = {ab}. Zero is allowed in either factor.
    pub fn product_set(&self, other: &Self) -> Result<Self> {
        self.field.same_as(&other.field)?;
        let mut out = Self::empty(&self.field);
        if self.is_empty() || other.is_empty() {
            return Ok(out);
        }
        for a in self.iter() {
            if a == 0 {
                out.insert(0);
                continue;
            }
            for b in other.iter() {
                out.insert(self.field.mul(a, b));
            }
        }
        Ok(out)
    }

    /// Indicator as a 0/1 integer sequence of length p.
    pub fn indicator(&self) -> Vec<u128> {
        (0..self.p()).map(|a| self.contains(a) as u128).collect()
    }

    /// self |= other rotated by k, where k < p.
    fn or_translated(&mut self, other: &Self, k: u32) {
        let p = self.p() as usize;
        let k = k as usize;
        // bits x < p - k move up by k; bits x >= p - k wrap to x + k - p
        shl_or(&mut self.words, &other.words, k);
        if k > 0 {
            shr_or(&mut self.words, &other.words, p - k);
        }
        self.clear_tail();
    }

    fn clear_tail(&mut self) {
        let p = self.p() as usize;
        let rem = p % WORD;
        let last = self.words.len() - 1;
        if rem != 0 {
            self.words[last] &= (1u64 << rem) - 1;
        }
    }
}

fn shl_or(dst: &mut [u64], src: &[u64], shift: usize) {
    let ws = shift / WORD;
    let bs = shift % WORD;
    for w in (ws..dst.len()).rev() {
        let mut v = src[w - ws] << bs;
        if bs > 0 && w > ws {
            v |= src[w - ws - 1] >> (WORD - bs);
        }
        dst[w] |= v;
    }
}

fn shr_or(dst: &mut [u64], src: &[u64], shift: usize) {
    let ws = shift / WORD;
    let bs = shift % WORD;
    let n = src.len();
    for w in 0..n.saturating_sub(ws) {
        let mut v = src[w + ws] >> bs;
        if bs > 0 && w + ws + 1 < n {
            v |= src[w + ws + 1] << (WORD - bs);
        }
        dst[w] |= v;
    }
}

impl fmt::Debug for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_vec())?;
        write!(f, " ⊆ {:?}", self.field)
    }
}

impl Serialize for ResidueSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

/// Wire form of a set: a sorted list of residues or a half-open interval reduced mod p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SetSpec {
    List(Vec<i64>),
    Interval { lo: i64, hi: i64 },
}

impl SetSpec {
    pub fn resolve(&self, field: &PrimeField) -> Result<ResidueSet> {
        match self {
            SetSpec::List(items) => {
                let mut s = ResidueSet::empty(field);
                for &a in items {
                    if a < 0 || a >= field.p() as i64 {
                        return Err(Error::input(format!("residue {a} out of range for p = {}", field.p())));
                    }
                    s.insert(a as u32);
                }
                Ok(s)
            }
            SetSpec::Interval { lo, hi } => ResidueSet::interval(field, *lo, *hi),
        }
    }

    pub fn from_set(set: &ResidueSet) -> Self {
        SetSpec::List(set.iter().map(i64::from).collect())
    }
}

/// r(t) = #{(a, b) ∈ X × Y : ab = t}. Both sets must avoid zero.
pub fn product_count_table(xs: &ResidueSet, ys: &ResidueSet) -> Result<Vec<u64>> {
    xs.field.same_as(&ys.field)?;
    if xs.contains(0) || ys.contains(0) {
        return Err(Error::input("product_count_table needs subsets of F*"));
    }
    let field = &xs.field;
    let mut table = vec![0u64; field.order()];
    for a in xs.iter() {
        for b in ys.iter() {
            table[field.mul(a, b) as usize] += 1;
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn set(p: &PrimeField, items: &[u32]) -> ResidueSet {
        ResidueSet::from_residues(p, items.iter().copied()).unwrap()
    }

    fn naive_sumset(a: &ResidueSet, b: &ResidueSet) -> Vec<u32> {
        let field = a.field();
        let mut out = std::collections::BTreeSet::new();
        for x in a.iter() {
            for y in b.iter() {
                out.insert(field.add(x, y));
            }
        }
        out.into_iter().collect()
    }

    #[test]
    fn sumset_examples() {
        let f5 = f(5);
        // all four pairs: 1+2, 1+3, 2+2, 2+3
        assert_eq!(set(&f5, &[1, 2]).sumset(&set(&f5, &[2, 3])).unwrap().to_vec(), vec![0, 3, 4]);
        let full = ResidueSet::full(&f5);
        assert!(ResidueSet::empty(&f5).sumset(&full).unwrap().is_empty());
        assert_eq!(set(&f5, &[0]).sumset(&full).unwrap(), full);
    }

    #[test]
    fn sumset_matches_enumeration_across_word_boundaries() {
        for p in [61, 67, 127, 131, 257] {
            let field = f(p);
            let a = ResidueSet::from_fn(&field, |x| x % 7 == 3 || x == p - 1);
            let b = ResidueSet::from_fn(&field, |x| x % 11 == 5 || x < 3);
            assert_eq!(a.sumset(&b).unwrap().to_vec(), naive_sumset(&a, &b), "p={p}");
        }
    }

    #[test]
    fn sumset_field_mismatch() {
        let a = ResidueSet::full(&f(5));
        let b = ResidueSet::full(&f(7));
        assert_eq!(a.sumset(&b), Err(Error::FieldMismatch { left: 5, right: 7 }));
    }

    #[test]
    fn dilate_examples() {
        let f5 = f(5);
        assert_eq!(set(&f5, &[1, 3]).dilate(2).unwrap().to_vec(), vec![1, 2]);
        let a = set(&f5, &[0, 4]);
        assert_eq!(a.dilate(1).unwrap(), a);
        let units = ResidueSet::units(&f5);
        for l in 1..5 {
            assert_eq!(units.dilate(l).unwrap(), units);
        }
        assert!(matches!(a.dilate(0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn product_count_examples() {
        let f5 = f(5);
        let t = product_count_table(&set(&f5, &[1, 2]), &set(&f5, &[1, 3])).unwrap();
        assert_eq!(t, vec![0, 2, 1, 1, 0]);
        let t = product_count_table(&set(&f5, &[1]), &set(&f5, &[1])).unwrap();
        assert_eq!(t, vec![0, 1, 0, 0, 0]);
        let t = product_count_table(&ResidueSet::units(&f5), &set(&f5, &[1])).unwrap();
        assert_eq!(t, vec![0, 1, 1, 1, 1]);
        assert!(product_count_table(&set(&f5, &[0, 1]), &set(&f5, &[1])).is_err());
    }

    #[test]
    fn translate_reflect_interval() {
        let f7 = f(7);
        assert_eq!(set(&f7, &[0, 5, 6]).translate(3).to_vec(), vec![1, 2, 3]);
        assert_eq!(set(&f7, &[1, 2]).reflect(3).to_vec(), vec![1, 2]);
        assert_eq!(ResidueSet::interval(&f7, 5, 9).unwrap().to_vec(), vec![0, 1, 5, 6]);
        assert!(ResidueSet::interval(&f7, -3, 40).unwrap().is_full());
        assert!(ResidueSet::interval(&f7, 3, 1).is_err());
    }

    #[test]
    fn set_spec_wire_forms() {
        let f7 = f(7);
        let list: SetSpec = serde_json::from_str("[3, 1]").unwrap();
        assert_eq!(list.resolve(&f7).unwrap().to_vec(), vec![1, 3]);
        let iv: SetSpec = serde_json::from_str(r#"{"lo": 5, "hi": 8}"#).unwrap();
        assert_eq!(iv.resolve(&f7).unwrap().to_vec(), vec![0, 5, 6]);
        let bad: SetSpec = serde_json::from_str("[7]").unwrap();
        assert!(bad.resolve(&f7).is_err());
        let s = set(&f7, &[6, 2]);
        assert_eq!(serde_json::to_string(&s).unwrap(), "[2,6]");
    }

    #[test]
    fn bitmask_roundtrip() {
        let f5 = f(5);
        assert_eq!(ResidueSet::from_mask(&f5, 0b10110).to_vec(), vec![1, 2, 4]);
        assert_eq!(ResidueSet::from_mask(&f5, u64::MAX).len(), 5);
    }
}
