use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest accepted absolute value of an input coordinate.
pub const COORD_BOUND: i64 = 1_000_000;

#[inline]
pub(crate) fn ck_mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

#[inline]
pub(crate) fn ck_add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(Error::Overflow)
}

#[inline]
pub(crate) fn ck_sub(a: i128, b: i128) -> Result<i128> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

#[inline]
pub(crate) fn floor_div(a: i128, b: i128) -> i128 {
    Integer::div_floor(&a, &b)
}

#[inline]
pub(crate) fn ceil_div(a: i128, b: i128) -> i128 {
    -Integer::div_floor(&(-a), &b)
}

pub(crate) fn narrow(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow)
}

/// A point of the rank-2 character lattice (or a ray generator of the dual lattice).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct LatticeVector {
    pub x: i64,
    pub y: i64,
}

impl LatticeVector {
    pub const ZERO: LatticeVector = LatticeVector { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        LatticeVector { x, y }
    }

    /// Checks both coordinates against [`COORD_BOUND`].
    pub fn check_bound(self) -> Result<Self> {
        for c in [self.x, self.y] {
            if c.unsigned_abs() > COORD_BOUND as u64 {
                return Err(Error::CoordinateBound(c as i128));
            }
        }
        Ok(self)
    }

    #[inline]
    pub fn dot(self, other: LatticeVector) -> i128 {
        self.x as i128 * other.x as i128 + self.y as i128 * other.y as i128
    }

    /// `det(self, other)`; positive when `other` is counterclockwise from `self`.
    #[inline]
    pub fn cross(self, other: LatticeVector) -> i128 {
        self.x as i128 * other.y as i128 - self.y as i128 * other.x as i128
    }

    pub fn gcd(self) -> i64 {
        self.x.gcd(&self.y)
    }

    pub fn is_primitive(self) -> bool {
        self.gcd() == 1
    }

    pub fn checked_add(self, other: LatticeVector) -> Option<LatticeVector> {
        Some(LatticeVector::new(
            self.x.checked_add(other.x)?,
            self.y.checked_add(other.y)?,
        ))
    }

    pub fn checked_sub(self, other: LatticeVector) -> Option<LatticeVector> {
        Some(LatticeVector::new(
            self.x.checked_sub(other.x)?,
            self.y.checked_sub(other.y)?,
        ))
    }

    /// Upper half-turn `[0, pi)` gets 0, lower half-turn `[pi, 2pi)` gets 1.
    pub(crate) fn half_turn(self) -> u8 {
        if self.y > 0 || (self.y == 0 && self.x > 0) {
            0
        } else {
            1
        }
    }

    /// Total order by polar angle in `[0, 2pi)` measured from the positive x-axis.
    pub fn angle_cmp(self, other: LatticeVector) -> Ordering {
        self.half_turn()
            .cmp(&other.half_turn())
            .then_with(|| 0.cmp(&self.cross(other)))
    }
}

impl Add for LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: LatticeVector) -> LatticeVector {
        self.checked_add(rhs).expect("lattice vector overflow")
    }
}

impl Sub for LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: LatticeVector) -> LatticeVector {
        self.checked_sub(rhs).expect("lattice vector overflow")
    }
}

impl Neg for LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector::new(-self.x, -self.y)
    }
}

impl From<(i64, i64)> for LatticeVector {
    fn from((x, y): (i64, i64)) -> Self {
        LatticeVector::new(x, y)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// A point with rational coordinates `(x_num / den, y_num / den)`.
///
/// Always normalized: `den >= 1` and `gcd(x_num, y_num, den) = 1`, so two equal points
/// have identical fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalPoint {
    x_num: i128,
    y_num: i128,
    den: i128,
}

impl RationalPoint {
    pub fn new(x_num: i128, y_num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::precondition("rational point with zero denominator"));
        }
        let (mut x, mut y, mut d) = (x_num, y_num, den);
        if d < 0 {
            x = x.checked_neg().ok_or(Error::Overflow)?;
            y = y.checked_neg().ok_or(Error::Overflow)?;
            d = d.checked_neg().ok_or(Error::Overflow)?;
        }
        let g = x.gcd(&y).gcd(&d);
        Ok(RationalPoint {
            x_num: x / g,
            y_num: y / g,
            den: d / g,
        })
    }

    pub const fn from_lattice(v: LatticeVector) -> Self {
        RationalPoint {
            x_num: v.x as i128,
            y_num: v.y as i128,
            den: 1,
        }
    }

    pub fn x_num(&self) -> i128 {
        self.x_num
    }

    pub fn y_num(&self) -> i128 {
        self.y_num
    }

    pub fn den(&self) -> i128 {
        self.den
    }

    pub fn is_lattice(&self) -> bool {
        self.den == 1
    }

    pub fn to_lattice(&self) -> Option<LatticeVector> {
        if self.den != 1 {
            return None;
        }
        Some(LatticeVector::new(
            i64::try_from(self.x_num).ok()?,
            i64::try_from(self.y_num).ok()?,
        ))
    }

    pub fn x(&self) -> crate::Rational {
        crate::Rational::new(self.x_num, self.den)
    }

    pub fn y(&self) -> crate::Rational {
        crate::Rational::new(self.y_num, self.den)
    }

    pub fn checked_add(&self, o: &RationalPoint) -> Result<RationalPoint> {
        let l = self.den.lcm(&o.den);
        let (s, t) = (l / self.den, l / o.den);
        RationalPoint::new(
            ck_add(ck_mul(self.x_num, s)?, ck_mul(o.x_num, t)?)?,
            ck_add(ck_mul(self.y_num, s)?, ck_mul(o.y_num, t)?)?,
            l,
        )
    }

    pub fn checked_sub(&self, o: &RationalPoint) -> Result<RationalPoint> {
        self.checked_add(&o.neg())
    }

    pub fn neg(&self) -> RationalPoint {
        RationalPoint {
            x_num: -self.x_num,
            y_num: -self.y_num,
            den: self.den,
        }
    }

    /// `<self, v>` as a fraction `(num, den)` with `den = self.den()`.
    pub fn dot(&self, v: LatticeVector) -> Result<(i128, i128)> {
        Ok((
            ck_add(ck_mul(self.x_num, v.x as i128)?, ck_mul(self.y_num, v.y as i128)?)?,
            self.den,
        ))
    }

    /// Sign of `det(self, o)` when both are read as vectors.
    pub(crate) fn cross_sign(&self, o: &RationalPoint) -> Result<Ordering> {
        let l = ck_mul(self.x_num, o.y_num)?;
        let r = ck_mul(self.y_num, o.x_num)?;
        Ok(l.cmp(&r))
    }

    /// Primitive integer vector pointing in the same direction (self read as a vector).
    pub(crate) fn primitive_direction(&self) -> Option<(i128, i128)> {
        if self.x_num == 0 && self.y_num == 0 {
            return None;
        }
        let g = self.x_num.gcd(&self.y_num);
        Some((self.x_num / g, self.y_num / g))
    }

    /// Polar angle order of `self` and `o` read as vectors, over the turn `(-pi/2, 3pi/2]`.
    /// This is the order in which a canonical polygon's edges appear when walked
    /// counterclockwise from its lexicographically smallest vertex.
    pub(crate) fn edge_angle_cmp(&self, o: &RationalPoint) -> Result<Ordering> {
        let half = |p: &RationalPoint| u8::from(!(p.x_num > 0 || (p.x_num == 0 && p.y_num > 0)));
        match half(self).cmp(&half(o)) {
            Ordering::Equal => o.cross_sign(self),
            other => Ok(other),
        }
    }

    /// Checked lexicographic comparison.
    pub fn try_cmp(&self, o: &RationalPoint) -> Result<Ordering> {
        let a = ck_mul(self.x_num, o.den)?;
        let b = ck_mul(o.x_num, self.den)?;
        if a != b {
            return Ok(a.cmp(&b));
        }
        let a = ck_mul(self.y_num, o.den)?;
        let b = ck_mul(o.y_num, self.den)?;
        Ok(a.cmp(&b))
    }
}

impl From<LatticeVector> for RationalPoint {
    fn from(v: LatticeVector) -> Self {
        RationalPoint::from_lattice(v)
    }
}

impl PartialOrd for RationalPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic `(x, y)` order. Panics only if the cross-multiplication overflows
/// `i128`; use [`RationalPoint::try_cmp`] for a checked comparison.
impl Ord for RationalPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.try_cmp(other).expect("rational comparison overflow")
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "({},{})", self.x_num, self.y_num)
        } else {
            write!(f, "({}/{},{}/{})", self.x_num, self.den, self.y_num, self.den)
        }
    }
}

/// Orientation of the triple `(o, a, b)`: `Greater` for a left turn.
pub(crate) fn orient(o: &RationalPoint, a: &RationalPoint, b: &RationalPoint) -> Result<Ordering> {
    let u = a.checked_sub(o)?;
    let v = b.checked_sub(o)?;
    u.cross_sign(&v)
}
