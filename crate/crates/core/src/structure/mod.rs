//! Substructure inside product sets: cosets of the center, periods, and the
//! growth-versus-period trade-off for bricks.

mod constructions;
mod cosets;
mod growth;
mod period;
mod popular;

pub use constructions::{prop2_construct, prop2_verify, small_period_brick, small_period_example, Prop2Report, SmallPeriodReport};
pub use cosets::{count_center_cosets, good_pair_set, th1_certificate, CosetReport, GoodPairReport, Th1Certificate};
pub use growth::{classify, th13_analysis, ComponentClass, PinnedPair, Th13Analysis};
pub use period::{brute_stabilizer, structured_period, structured_period_checked, InvariantDirections, PeriodReport};
pub use popular::{choose_popular_shift, representation_counts, PopularShift};

use num_rational::BigRational;

pub(crate) fn ratio_to_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
