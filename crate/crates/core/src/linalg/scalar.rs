use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::Int;

/// Exact integer arithmetic with overflow reporting.
///
/// Machine-word implementations return `None` when a result does not fit;
/// callers then retry the whole computation with [`Int`], which never fails.
pub trait Scalar: Clone + PartialEq + Debug + Send + Sync + Sized {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn signum_i32(&self) -> i32;
    fn add(&self, other: &Self) -> Option<Self>;
    fn sub(&self, other: &Self) -> Option<Self>;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    /// Division that is known to be exact.
    fn div_exact(&self, other: &Self) -> Option<Self>;
    /// Floor division.
    fn div_floor(&self, other: &Self) -> Option<Self>;
    /// Nonnegative gcd.
    fn gcd(&self, other: &Self) -> Option<Self>;
    /// `(g, s, t)` with `g = gcd >= 0` and `s*self + t*other = g`.
    fn xgcd(&self, other: &Self) -> Option<(Self, Self, Self)>;
    fn to_int(&self) -> Int;
    fn from_int(value: &Int) -> Option<Self>;

    fn abs(&self) -> Option<Self> {
        if self.signum_i32() < 0 {
            self.neg()
        } else {
            Some(self.clone())
        }
    }

    /// `self * a + b * c`, the fused step used by most eliminations.
    fn mul_add(&self, a: &Self, b: &Self, c: &Self) -> Option<Self> {
        self.mul(a)?.add(&b.mul(c)?)
    }
}

impl Scalar for i64 {
    #[inline]
    fn zero() -> Self {
        0
    }
    #[inline]
    fn one() -> Self {
        1
    }
    #[inline]
    fn is_zero(&self) -> bool {
        *self == 0
    }
    #[inline]
    fn signum_i32(&self) -> i32 {
        self.signum() as i32
    }
    #[inline]
    fn add(&self, other: &Self) -> Option<Self> {
        self.checked_add(*other)
    }
    #[inline]
    fn sub(&self, other: &Self) -> Option<Self> {
        self.checked_sub(*other)
    }
    #[inline]
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    #[inline]
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    #[inline]
    fn div_exact(&self, other: &Self) -> Option<Self> {
        self.checked_div(*other)
    }
    #[inline]
    fn div_floor(&self, other: &Self) -> Option<Self> {
        if *other == 0 || (*self == i64::MIN && *other == -1) {
            return None;
        }
        Some(Integer::div_floor(self, other))
    }
    #[inline]
    fn gcd(&self, other: &Self) -> Option<Self> {
        if *self == i64::MIN || *other == i64::MIN {
            return None;
        }
        Some(Integer::gcd(self, other))
    }
    fn xgcd(&self, other: &Self) -> Option<(Self, Self, Self)> {
        if *self == i64::MIN || *other == i64::MIN {
            return None;
        }
        let (mut old_r, mut r) = (*self as i128, *other as i128);
        let (mut old_s, mut s) = (1i128, 0i128);
        let (mut old_t, mut t) = (0i128, 1i128);
        while r != 0 {
            let q = old_r.div_euclid(r);
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
            (old_t, t) = (t, old_t - q * t);
        }
        if old_r < 0 {
            old_r = -old_r;
            old_s = -old_s;
            old_t = -old_t;
        }
        Some((
            i64::try_from(old_r).ok()?,
            i64::try_from(old_s).ok()?,
            i64::try_from(old_t).ok()?,
        ))
    }
    fn to_int(&self) -> Int {
        BigInt::from(*self)
    }
    fn from_int(value: &Int) -> Option<Self> {
        value.to_i64()
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn signum_i32(&self) -> i32 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
    fn add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        Some(self / other)
    }
    fn div_floor(&self, other: &Self) -> Option<Self> {
        Some(Integer::div_floor(self, other))
    }
    fn gcd(&self, other: &Self) -> Option<Self> {
        Some(Integer::gcd(self, other))
    }
    fn xgcd(&self, other: &Self) -> Option<(Self, Self, Self)> {
        let e = Integer::extended_gcd(self, other);
        if e.gcd.is_negative() {
            Some((-e.gcd, -e.x, -e.y))
        } else {
            Some((e.gcd, e.x, e.y))
        }
    }
    fn to_int(&self) -> Int {
        self.clone()
    }
    fn from_int(value: &Int) -> Option<Self> {
        Some(value.clone())
    }
}

/// Converts every entry of an integer matrix, failing if one does not fit.
pub fn convert_rows<T: Scalar>(rows: &[Vec<Int>]) -> Option<Vec<Vec<T>>> {
    rows.iter()
        .map(|row| row.iter().map(T::from_int).collect())
        .collect()
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> Option<T> {
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        acc = acc.add(&x.mul(y)?)?;
    }
    Some(acc)
}

/// Gcd of all entries (0 for the zero vector).
pub fn content<T: Scalar>(v: &[T]) -> Option<T> {
    let mut g = T::zero();
    for x in v {
        if !x.is_zero() {
            g = g.gcd(x)?;
        }
    }
    Some(g)
}
