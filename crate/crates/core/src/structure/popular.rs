use crate::error::{Error, Result};
use crate::residue_set::ResidueSet;

/// A residue a maximizing |X ∩ (a − X)| together with X̃ = X ∩ (a − X).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopularShift {
    pub shift: u32,
    pub tilde: ResidueSet,
}

/// |X ∩ (a − X)| for every a, i.e. the number of ways to write a = x + x'.
pub fn representation_counts(xs: &ResidueSet) -> Vec<usize> {
    let neg = xs.negate();
    (0..xs.p()).map(|a| xs.intersection_len(&neg.translate(a))).collect()
}

/// Most popular sum of X; ties go to the smallest residue.
///
/// Averaging gives |X̃| ≥ |X|²/p, which is checked.
pub fn choose_popular_shift(xs: &ResidueSet) -> Result<PopularShift> {
    if xs.is_empty() {
        return Err(Error::input("popular shift of an empty set"));
    }
    let counts = representation_counts(xs);
    let best = *counts.iter().max().expect("p > 0");
    let shift = counts.iter().position(|&c| c == best).expect("max exists") as u32;
    let tilde = xs.intersection(&xs.reflect(shift))?;
    let (t, x, p) = (tilde.len() as u64, xs.len() as u64, xs.p() as u64);
    if t * p < x * x {
        return Err(Error::Inconsistency(format!("popular shift {shift} has {t} representations, below |X|²/p")));
    }
    Ok(PopularShift { shift, tilde })
}
