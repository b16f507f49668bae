//! Seeded random bricks.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::brick::Brick;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::residue_set::ResidueSet;

/// How one X_i or Y_i is drawn from F*.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentProfile {
    Singleton,
    /// {s, …, s + len − 1} with s uniform in [1, p − len].
    Interval { len: usize },
    /// `size` distinct residues, uniform without replacement.
    Uniform { size: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomBrickSpec {
    pub p: u32,
    pub n: usize,
    pub x: Vec<ComponentProfile>,
    pub y: Vec<ComponentProfile>,
    pub z_size: usize,
}

impl RandomBrickSpec {
    /// Same profile in every component.
    pub fn uniform(p: u32, n: usize, profile: ComponentProfile, z_size: usize) -> Self {
        RandomBrickSpec { p, n, x: vec![profile; n], y: vec![profile; n], z_size }
    }

    /// A spec with randomly mixed profiles and sizes, used by the randomized suites.
    pub fn sample<R: Rng + ?Sized>(p: u32, n: usize, rng: &mut R) -> Self {
        let units = p as usize - 1;
        let draw = |rng: &mut R| match rng.gen_range(0..4) {
            0 => ComponentProfile::Singleton,
            1 => ComponentProfile::Interval { len: rng.gen_range(1..=units) },
            _ => ComponentProfile::Uniform { size: rng.gen_range(1..=units) },
        };
        let x = (0..n).map(|_| draw(rng)).collect();
        let y = (0..n).map(|_| draw(rng)).collect();
        RandomBrickSpec { p, n, x, y, z_size: rng.gen_range(1..=p as usize) }
    }
}

fn draw_component<R: Rng>(field: &PrimeField, profile: ComponentProfile, rng: &mut R) -> Result<ResidueSet> {
    let units = field.order() - 1;
    match profile {
        ComponentProfile::Singleton => ResidueSet::singleton(field, rng.gen_range(1..field.p())),
        ComponentProfile::Interval { len } => {
            if len == 0 || len > units {
                return Err(Error::input(format!("interval length {len} not in [1, {units}]")));
            }
            let start = rng.gen_range(1..=(units - len + 1)) as i64;
            ResidueSet::interval(field, start, start + len as i64)
        }
        ComponentProfile::Uniform { size } => {
            if size == 0 || size > units {
                return Err(Error::input(format!("component size {size} not in [1, {units}]")));
            }
            ResidueSet::from_residues(field, sample(rng, units, size).into_iter().map(|i| i as u32 + 1))
        }
    }
}

/// Deterministic in (spec, seed).
pub fn random_brick(spec: &RandomBrickSpec, seed: u64) -> Result<Brick> {
    let field = PrimeField::new(spec.p)?;
    if spec.x.len() != spec.n || spec.y.len() != spec.n {
        return Err(Error::input("profile count does not match n"));
    }
    if spec.z_size == 0 || spec.z_size > field.order() {
        return Err(Error::input(format!("z_size {} not in [1, {}]", spec.z_size, spec.p)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs = spec.x.iter().map(|&pr| draw_component(&field, pr, &mut rng)).collect::<Result<Vec<_>>>()?;
    let ys = spec.y.iter().map(|&pr| draw_component(&field, pr, &mut rng)).collect::<Result<Vec<_>>>()?;
    let z = ResidueSet::from_residues(&field, sample(&mut rng, field.order(), spec.z_size).into_iter().map(|i| i as u32))?;
    Brick::new(xs, ys, z)
}

/// `count` bricks with mixed profiles; instance i depends only on (p, n, seed, i).
pub fn random_suite(p: u32, n: usize, count: usize, seed: u64) -> Result<Vec<Brick>> {
    (0..count)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let spec = RandomBrickSpec::sample(p, n, &mut rng);
            random_brick(&spec, rng.gen())
        })
        .collect()
}
