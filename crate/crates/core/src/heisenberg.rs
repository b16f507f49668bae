//! The Heisenberg group H_n over F_p.
//!
//! An element [x, y, z] stands for the (n+2)×(n+2) unitriangular matrix with
//! first row (1, x, z), last column (z, yᵀ, 1) and I_n in the middle block. Only
//! the coordinates are stored; the product is
//!
//! ```text
//! [x, y, z]·[x', y', z'] = [x + x', y + y', ⟨x, y'⟩ + z + z']
//! ```

use std::fmt;

use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::PrimeField;

/// An element [x, y, z] of H_n.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HeisElement {
    pub x: Vec<u32>,
    pub y: Vec<u32>,
    pub z: u32,
}

impl HeisElement {
    pub fn new(x: Vec<u32>, y: Vec<u32>, z: u32) -> Self {
        HeisElement { x, y, z }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }
}

impl fmt::Display for HeisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}, {}]", self.x, self.y, self.z)
    }
}

/// H_n over a fixed prime field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeisenbergGroup {
    field: PrimeField,
    n: usize,
}

impl HeisenbergGroup {
    pub fn new(field: &PrimeField, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("H_n needs n >= 1"));
        }
        Ok(HeisenbergGroup { field: field.clone(), n })
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
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of coordinates, 2n + 1.
    #[inline]
    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    /// |H_n| = p^(2n+1), or `None` if it does not fit in 128 bits.
    pub fn order(&self) -> Option<u128> {
        (self.p() as u128).checked_pow(self.dim() as u32)
    }

    pub fn identity(&self) -> HeisElement {
        HeisElement::new(vec![0; self.n], vec![0; self.n], 0)
    }

    /// Builds an element after range-checking every coordinate.
    pub fn element(&self, x: Vec<u32>, y: Vec<u32>, z: u32) -> Result<HeisElement> {
        let e = HeisElement::new(x, y, z);
        self.check(&e)?;
        Ok(e)
    }

    pub fn check(&self, e: &HeisElement) -> Result<()> {
        if e.x.len() != self.n || e.y.len() != self.n {
            return Err(self.mismatch(format!("element has n = {}/{}", e.x.len(), e.y.len())));
        }
        let p = self.p();
        if e.x.iter().chain(&e.y).chain(std::iter::once(&e.z)).any(|&c| c >= p) {
            return Err(self.mismatch(format!("element {e} has a coordinate >= p")));
        }
        Ok(())
    }

    fn mismatch(&self, detail: String) -> Error {
        Error::ParameterMismatch { p: self.p(), n: self.n, detail }
    }

    /// ⟨a, b⟩ = Σ a_i b_i.
    pub fn inner(&self, a: &[u32], b: &[u32]) -> u32 {
        let p = self.p() as u64;
        (a.iter().zip(b).map(|(&s, &t)| s as u64 * t as u64 % p).sum::<u64>() % p) as u32
    }

    pub fn mul(&self, a: &HeisElement, b: &HeisElement) -> Result<HeisElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    pub(crate) fn mul_unchecked(&self, a: &HeisElement, b: &HeisElement) -> HeisElement {
        let f = &self.field;
        let x = a.x.iter().zip(&b.x).map(|(&s, &t)| f.add(s, t)).collect();
        let y = a.y.iter().zip(&b.y).map(|(&s, &t)| f.add(s, t)).collect();
        let z = f.add(f.add(self.inner(&a.x, &b.y), a.z), b.z);
        HeisElement { x, y, z }
    }

    /// [x, y, z]⁻¹ = [-x, -y, ⟨x, y⟩ - z].
    pub fn inv(&self, a: &HeisElement) -> Result<HeisElement> {
        self.check(a)?;
        Ok(self.inv_unchecked(a))
    }

    pub(crate) fn inv_unchecked(&self, a: &HeisElement) -> HeisElement {
        let f = &self.field;
        HeisElement {
            x: a.x.iter().map(|&c| f.neg(c)).collect(),
            y: a.y.iter().map(|&c| f.neg(c)).collect(),
            z: f.sub(self.inner(&a.x, &a.y), a.z),
        }
    }

    /// a·b·a⁻¹·b⁻¹.
    pub fn commutator(&self, a: &HeisElement, b: &HeisElement) -> Result<HeisElement> {
        self.check(a)?;
        self.check(b)?;
        let ab = self.mul_unchecked(a, b);
        let ab_ainv = self.mul_unchecked(&ab, &self.inv_unchecked(a));
        Ok(self.mul_unchecked(&ab_ainv, &self.inv_unchecked(b)))
    }

    /// Evaluates the word a b a⁻¹ b⁻¹ c b a b⁻¹ a⁻¹ c⁻¹, i.e. [[a, b], c], and
    /// reports whether it is the identity. It is for every triple because H_n is
    /// two-step nilpotent.
    pub fn nilpotency_check(&self, a: &HeisElement, b: &HeisElement, c: &HeisElement) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        self.check(c)?;
        let ai = self.inv_unchecked(a);
        let bi = self.inv_unchecked(b);
        let ci = self.inv_unchecked(c);
        let word = [a, b, &ai, &bi, c, b, a, &bi, &ai, &ci];
        let mut acc = self.identity();
        for g in word {
            acc = self.mul_unchecked(&acc, g);
        }
        Ok(acc == self.identity())
    }

    /// a^k.
    pub fn pow(&self, a: &HeisElement, k: u64) -> HeisElement {
        let mut acc = self.identity();
        let mut base = a.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_unchecked(&acc, &base);
            }
            base = self.mul_unchecked(&base, &base);
            k >>= 1;
        }
        acc
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> HeisElement {
        let p = self.p();
        HeisElement {
            x: (0..self.n).map(|_| rng.gen_range(0..p)).collect(),
            y: (0..self.n).map(|_| rng.gen_range(0..p)).collect(),
            z: rng.gen_range(0..p),
        }
    }

    /// Unit generator of one coordinate direction.
    pub fn direction_generator(&self, dir: Direction) -> HeisElement {
        let mut e = self.identity();
        match dir {
            Direction::X(i) => e.x[i] = 1,
            Direction::Y(i) => e.y[i] = 1,
            Direction::Center => e.z = 1,
        }
        e
    }

    /// Directions in canonical order x_1..x_n, y_1..y_n, center.
    pub fn directions(&self) -> impl Iterator<Item = Direction> {
        let n = self.n;
        (0..n).map(Direction::X).chain((0..n).map(Direction::Y)).chain(std::iter::once(Direction::Center))
    }
}

/// One of the 2n + 1 coordinate directions of H_n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    X(usize),
    Y(usize),
    Center,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::X(i) => write!(f, "x{}", i + 1),
            Direction::Y(i) => write!(f, "y{}", i + 1),
            Direction::Center => write!(f, "z"),
        }
    }
}

/// A subgroup whose projection on every coordinate is {0} or F.
///
/// Closure: [e_i, 0, 0] and [0, e_i, 0] have commutator [0, 0, 1], so a profile
/// with both x_i and y_i full must also have the center full.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoordinateSubgroup {
    kx: Vec<bool>,
    ky: Vec<bool>,
    m: bool,
}

impl CoordinateSubgroup {
    pub fn try_new(kx: Vec<bool>, ky: Vec<bool>, m: bool) -> Result<Self> {
        if kx.len() != ky.len() || kx.is_empty() {
            return Err(Error::input(format!("profile lengths {} and {} differ or are zero", kx.len(), ky.len())));
        }
        if let Some(i) = closure_violation(&kx, &ky, m) {
            return Err(Error::input(format!(
                "profile with x{0} and y{0} full but center zero is not closed",
                i + 1
            )));
        }
        Ok(CoordinateSubgroup { kx, ky, m })
    }

    pub fn trivial(n: usize) -> Self {
        CoordinateSubgroup { kx: vec![false; n], ky: vec![false; n], m: false }
    }

    /// [0, 0, F].
    pub fn center(n: usize) -> Self {
        CoordinateSubgroup { kx: vec![false; n], ky: vec![false; n], m: true }
    }

    pub fn full(n: usize) -> Self {
        CoordinateSubgroup { kx: vec![true; n], ky: vec![true; n], m: true }
    }

    pub fn n(&self) -> usize {
        self.kx.len()
    }

    pub fn kx(&self) -> &[bool] {
        &self.kx
    }

    pub fn ky(&self) -> &[bool] {
        &self.ky
    }

    pub fn m(&self) -> bool {
        self.m
    }

    pub fn is_full_direction(&self, dir: Direction) -> bool {
        match dir {
            Direction::X(i) => self.kx[i],
            Direction::Y(i) => self.ky[i],
            Direction::Center => self.m,
        }
    }

    /// Number of full coordinates; the order is p to this power.
    pub fn rank(&self) -> u32 {
        (self.kx.iter().chain(&self.ky).filter(|&&b| b).count() + self.m as usize) as u32
    }

    pub fn order(&self, p: u32) -> u128 {
        (p as u128).pow(self.rank())
    }

    pub fn is_trivial(&self) -> bool {
        self.rank() == 0
    }

    pub fn contains(&self, e: &HeisElement) -> bool {
        let ok = |full: bool, c: u32| full || c == 0;
        e.x.iter().zip(&self.kx).all(|(&c, &f)| ok(f, c))
            && e.y.iter().zip(&self.ky).all(|(&c, &f)| ok(f, c))
            && ok(self.m, e.z)
    }

    /// ⊆ as subgroups.
    pub fn is_subgroup_of(&self, other: &CoordinateSubgroup) -> bool {
        self.n() == other.n()
            && self.kx.iter().zip(&other.kx).all(|(&a, &b)| !a || b)
            && self.ky.iter().zip(&other.ky).all(|(&a, &b)| !a || b)
            && (!self.m || other.m)
    }

    /// Unit generators of the full directions.
    pub fn generators(&self, group: &HeisenbergGroup) -> Vec<HeisElement> {
        group
            .directions()
            .filter(|&d| self.is_full_direction(d))
            .map(|d| group.direction_generator(d))
            .collect()
    }

    pub fn profile_string(&self) -> String {
        format!("{}|{}|{}", bits(&self.kx), bits(&self.ky), self.m as u8)
    }
}

/// First index i with x_i and y_i full while the center is zero.
pub fn closure_violation(kx: &[bool], ky: &[bool], m: bool) -> Option<usize> {
    if m {
        return None;
    }
    kx.iter().zip(ky).position(|(&a, &b)| a && b)
}

fn bits(v: &[bool]) -> String {
    v.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn parse_bits<E: serde::de::Error>(s: &str, what: &str) -> Result<Vec<bool>, E> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(E::custom(format!("{what}: expected '0' or '1', found {other:?}"))),
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct ProfileWire {
    kx: String,
    ky: String,
    m: String,
}

impl Serialize for CoordinateSubgroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ProfileWire { kx: bits(&self.kx), ky: bits(&self.ky), m: bits(&[self.m]) }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CoordinateSubgroup {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let w = ProfileWire::deserialize(deserializer)?;
        let kx = parse_bits(&w.kx, "kx")?;
        let ky = parse_bits(&w.ky, "ky")?;
        let m = parse_bits::<D::Error>(&w.m, "m")?;
        if m.len() != 1 {
            return Err(D::Error::custom("m must be a single '0' or '1'"));
        }
        CoordinateSubgroup::try_new(kx, ky, m[0]).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn h(p: u32, n: usize) -> HeisenbergGroup {
        HeisenbergGroup::new(&PrimeField::new(p).unwrap(), n).unwrap()
    }

    fn el(x: &[u32], y: &[u32], z: u32) -> HeisElement {
        HeisElement::new(x.to_vec(), y.to_vec(), z)
    }

    #[test]
    fn product_rule_by_hand() {
        let g = h(5, 1);
        // ⟨1, 1⟩ + 3 + 4 = 8 ≡ 3
        assert_eq!(g.mul(&el(&[1], &[2], 3), &el(&[2], &[1], 4)).unwrap(), el(&[3], &[3], 3));
        let g2 = h(7, 2);
        let x = el(&[3, 5], &[0, 0], 0);
        let y = el(&[0, 0], &[2, 4], 0);
        assert_eq!(g2.mul(&x, &y).unwrap(), el(&[3, 5], &[2, 4], (6 + 20) % 7));
    }

    #[test]
    fn identity_and_inverse() {
        let g = h(5, 1);
        assert_eq!(g.inv(&el(&[1], &[2], 3)).unwrap(), el(&[4], &[3], 4));
        assert_eq!(g.inv(&g.identity()).unwrap(), g.identity());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = h(7, 2);
        for _ in 0..200 {
            let a = g.random_element(&mut rng);
            let e = g.identity();
            assert_eq!(g.mul(&a, &e).unwrap(), a);
            assert_eq!(g.mul(&e, &a).unwrap(), a);
            let ai = g.inv(&a).unwrap();
            assert_eq!(g.mul(&a, &ai).unwrap(), e);
            assert_eq!(g.mul(&ai, &a).unwrap(), e);
            assert_eq!(g.inv(&ai).unwrap(), a);
        }
    }

    #[test]
    fn commutators() {
        let g = h(5, 1);
        assert_eq!(g.commutator(&el(&[1], &[0], 0), &el(&[0], &[1], 0)).unwrap(), el(&[0], &[0], 1));
        let a = el(&[2], &[3], 1);
        assert_eq!(g.commutator(&a, &g.identity()).unwrap(), g.identity());
        let g = h(7, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let (a, b, c) = (g.random_element(&mut rng), g.random_element(&mut rng), g.random_element(&mut rng));
            assert!(g.nilpotency_check(&a, &b, &c).unwrap());
        }
    }

    #[test]
    fn parameter_mismatch() {
        let g = h(5, 1);
        assert!(matches!(
            g.mul(&el(&[1, 2], &[0, 0], 0), &g.identity()),
            Err(Error::ParameterMismatch { .. })
        ));
        assert!(g.element(vec![5], vec![0], 0).is_err());
        assert!(HeisenbergGroup::new(&PrimeField::new(5).unwrap(), 0).is_err());
    }

    #[test]
    fn powers_have_order_p() {
        let g = h(7, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = g.random_element(&mut rng);
            assert_eq!(g.pow(&a, 7), g.identity());
        }
    }

    #[test]
    fn coordinate_subgroup_profiles() {
        assert!(CoordinateSubgroup::try_new(vec![true], vec![true], false).is_err());
        let c = CoordinateSubgroup::center(2);
        assert_eq!(c.order(5), 5);
        assert_eq!(CoordinateSubgroup::full(2).order(5), 3125);
        let g = CoordinateSubgroup::try_new(vec![true, false], vec![false, true], false).unwrap();
        assert_eq!(g.rank(), 2);
        assert!(g.contains(&el(&[3, 0], &[0, 4], 0)));
        assert!(!g.contains(&el(&[3, 0], &[0, 4], 1)));
        assert!(CoordinateSubgroup::trivial(2).is_subgroup_of(&g));
        assert!(!c.is_subgroup_of(&g));
    }

    #[test]
    fn profile_json() {
        let g = CoordinateSubgroup::try_new(vec![false, true], vec![true, false], true).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"kx":"01","ky":"10","m":"1"}"#);
        assert_eq!(serde_json::from_str::<CoordinateSubgroup>(&s).unwrap(), g);
        assert!(serde_json::from_str::<CoordinateSubgroup>(r#"{"kx":"1","ky":"1","m":"0"}"#).is_err());
        assert!(serde_json::from_str::<CoordinateSubgroup>(r#"{"kx":"2","ky":"1","m":"1"}"#).is_err());
        let e: HeisElement = serde_json::from_str(r#"{"x":[1],"y":[2],"z":3}"#).unwrap();
        assert_eq!(e, el(&[1], &[2], 3));
    }
}
