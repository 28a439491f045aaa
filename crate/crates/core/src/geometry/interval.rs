use crate::error::{Error, Result};
use crate::Rational;

/// Closed interval `[lo, hi]` of the real line with rational endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RationalInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        RationalInterval { lo, hi }
    }

    pub fn integral(lo: i64, hi: i64) -> Self {
        RationalInterval::new(Rational::from_integer(lo as i128), Rational::from_integer(hi as i128))
    }

    /// `(ceil lo, floor hi)`, the integer points of the interval when nonempty.
    pub fn integer_hull(&self) -> Option<(i128, i128)> {
        let (a, b) = (self.lo.ceil().to_integer(), self.hi.floor().to_integer());
        (a <= b).then_some((a, b))
    }
}

/// Splits `z` as `c1 + c2` with `c1` an integer of `first` and `c2` an integer of
/// `second`; `second` must have integral endpoints. Returns the pair with the
/// smallest `c1`.
pub fn decompose_interval(
    first: RationalInterval,
    second: RationalInterval,
    z: i128,
) -> Result<(i128, i128)> {
    if !second.lo.is_integer() || !second.hi.is_integer() || second.lo > second.hi {
        return Err(Error::precondition("second interval must have integral endpoints"));
    }
    let Some((lo1, hi1)) = first.integer_hull() else {
        return Err(Error::precondition("first interval contains no integer"));
    };
    let (lo2, hi2) = (second.lo.to_integer(), second.hi.to_integer());
    let zq = Rational::from_integer(z);
    if zq < first.lo + second.lo || zq > first.hi + second.hi {
        return Err(Error::out_of_range(format!(
            "{z} is outside [{}, {}]",
            first.lo + second.lo,
            first.hi + second.hi
        )));
    }
    let c1 = lo1.max(z - hi2);
    debug_assert!(c1 <= hi1.min(z - lo2));
    Ok((c1, z - c1))
}
