//! Numeric abstraction shared by every solver.
//!
//! All algorithms are generic over [`Scalar`], an exact ordered ring.
//! Routines that divide (the improvement phase scales circulations by
//! `1/k`) additionally require [`Field`], which is only implemented for
//! rational types so that division never truncates.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, NumAssign, Signed, ToPrimitive};

/// Exact ordered scalar used for capacities and flow values.
pub trait Scalar: Clone + Debug + Display + Ord + Num + NumAssign + Send + Sync + 'static {
    fn from_i64(v: i64) -> Self;

    /// Largest integer not exceeding `self`.
    fn floor(&self) -> Self;

    fn is_integral(&self) -> bool;

    /// Lossy conversion, used only for reporting.
    fn to_f64(&self) -> f64;

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    /// `max(self, 0)`.
    fn positive_part(&self) -> Self {
        if self.is_positive() {
            self.clone()
        } else {
            Self::zero()
        }
    }

    fn min_of(a: &Self, b: &Self) -> Self {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    fn max_of(a: &Self, b: &Self) -> Self {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }
}

/// A [`Scalar`] with exact division.
pub trait Field: Scalar {}

macro_rules! impl_int_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            fn from_i64(v: i64) -> Self {
                v as $t
            }
            fn floor(&self) -> Self {
                *self
            }
            fn is_integral(&self) -> bool {
                true
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
        }
    )*};
}

impl_int_scalar!(i64, i128);

impl Scalar for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn floor(&self) -> Self {
        self.clone()
    }
    fn is_integral(&self) -> bool {
        true
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

macro_rules! impl_ratio_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for Ratio<$t> {
            fn from_i64(v: i64) -> Self {
                Ratio::from_integer(v as $t)
            }
            fn floor(&self) -> Self {
                Ratio::floor(self)
            }
            fn is_integral(&self) -> bool {
                Ratio::is_integer(self)
            }
            fn to_f64(&self) -> f64 {
                ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
            }
        }
        impl Field for Ratio<$t> {}
    )*};
}

impl_ratio_scalar!(i64, i128);

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn floor(&self) -> Self {
        Ratio::floor(self)
    }
    fn is_integral(&self) -> bool {
        Ratio::is_integer(self)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

impl Field for BigRational {}

/// Nonnegative capacity extended with a distinct infinity.
///
/// `Finite` orders below `Infinite`; arithmetic with a finite operand
/// leaves infinity unchanged.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Capacity<T> {
    Finite(T),
    Infinite,
}

impl<T: Scalar> Capacity<T> {
    pub fn zero() -> Self {
        Capacity::Finite(T::zero())
    }

    pub fn from_i64(v: i64) -> Self {
        Capacity::Finite(T::from_i64(v))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Capacity::Infinite)
    }

    pub fn finite(&self) -> Option<&T> {
        match self {
            Capacity::Finite(v) => Some(v),
            Capacity::Infinite => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Capacity::Finite(v) if v.is_zero())
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Capacity::Finite(v) => v.is_positive(),
            Capacity::Infinite => true,
        }
    }

    /// `self - v`; infinity absorbs.
    pub fn minus(&self, v: &T) -> Self {
        match self {
            Capacity::Finite(c) => Capacity::Finite(c.clone() - v.clone()),
            Capacity::Infinite => Capacity::Infinite,
        }
    }

    /// `self + v`; infinity absorbs.
    pub fn plus(&self, v: &T) -> Self {
        match self {
            Capacity::Finite(c) => Capacity::Finite(c.clone() + v.clone()),
            Capacity::Infinite => Capacity::Infinite,
        }
    }

    pub fn plus_cap(&self, other: &Self) -> Self {
        match (self, other) {
            (Capacity::Finite(a), Capacity::Finite(b)) => Capacity::Finite(a.clone() + b.clone()),
            _ => Capacity::Infinite,
        }
    }

    pub fn times(&self, v: &T) -> Self {
        match self {
            Capacity::Finite(c) => Capacity::Finite(c.clone() * v.clone()),
            Capacity::Infinite => Capacity::Infinite,
        }
    }

    /// `min(self, v)` as a finite value.
    pub fn min_with(&self, v: &T) -> T {
        match self {
            Capacity::Finite(c) => T::min_of(c, v),
            Capacity::Infinite => v.clone(),
        }
    }

    pub fn min_cap(&self, other: &Self) -> Self {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// True iff `v <= self`.
    pub fn admits(&self, v: &T) -> bool {
        match self {
            Capacity::Finite(c) => v <= c,
            Capacity::Infinite => true,
        }
    }

    /// Amount by which `v` exceeds this capacity, `max(0, v - self)`.
    pub fn excess_of(&self, v: &T) -> T {
        match self {
            Capacity::Finite(c) => (v.clone() - c.clone()).positive_part(),
            Capacity::Infinite => T::zero(),
        }
    }
}

impl<T: Scalar> PartialOrd for Capacity<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for Capacity<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Capacity::Finite(a), Capacity::Finite(b)) => a.cmp(b),
            (Capacity::Finite(_), Capacity::Infinite) => Ordering::Less,
            (Capacity::Infinite, Capacity::Finite(_)) => Ordering::Greater,
            (Capacity::Infinite, Capacity::Infinite) => Ordering::Equal,
        }
    }
}

impl<T: Display> Display for Capacity<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capacity::Finite(v) => write!(f, "{v}"),
            Capacity::Infinite => f.write_str("inf"),
        }
    }
}

impl<T: Debug> Debug for Capacity<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capacity::Finite(v) => write!(f, "{v:?}"),
            Capacity::Infinite => f.write_str("inf"),
        }
    }
}

impl<T> From<T> for Capacity<T> {
    fn from(v: T) -> Self {
        Capacity::Finite(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    #[test]
    fn infinity_absorbs_finite_arithmetic() {
        let inf = Capacity::<Q>::Infinite;
        assert!(inf.minus(&q(1_000_000)).is_infinite());
        assert!(inf.plus(&q(3)).is_infinite());
        assert!(inf > Capacity::Finite(q(i64::MAX)));
        assert_eq!(inf.min_with(&q(7)), q(7));
        assert_eq!(inf.excess_of(&q(7)), q(0));
    }

    #[test]
    fn finite_capacity_ops() {
        let c = Capacity::Finite(q(6));
        assert_eq!(c.excess_of(&q(9)), q(3));
        assert_eq!(c.excess_of(&q(4)), q(0));
        assert!(c.admits(&q(6)));
        assert!(!c.admits(&q(7)));
        assert_eq!(c.minus(&q(2)), Capacity::Finite(q(4)));
    }

    #[test]
    fn rational_floor_and_integrality() {
        let half = Q::new(3.into(), 2.into());
        assert_eq!(Scalar::floor(&half), q(1));
        assert!(!Scalar::is_integral(&half));
        assert!(Scalar::is_integral(&q(4)));
        assert_eq!(<i64 as Scalar>::floor(&5), 5);
    }
}
