//! Arithmetic abstraction shared by the float and exact-rational solvers.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Ordered field used by the simplex and double-description routines.
///
/// Float implementations compare against a caller-supplied tolerance; exact
/// implementations ignore it.
pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    /// Exact conversion for rationals; panics on non-finite input.
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    /// Sign of `self`, treating `|self| <= tol` as zero for inexact types.
    fn sign(&self, tol: f64) -> Ordering;

    /// Rescale a ray to a canonical representative of its direction.
    fn normalize_ray(v: &mut [Self]) {
        let m = max_abs(v);
        if m.is_pos(0.0) {
            for x in v.iter_mut() {
                *x = x.clone() / m.clone();
            }
        }
    }

    fn is_zero_tol(&self, tol: f64) -> bool {
        self.sign(tol) == Ordering::Equal
    }
    fn is_pos(&self, tol: f64) -> bool {
        self.sign(tol) == Ordering::Greater
    }
    fn is_neg(&self, tol: f64) -> bool {
        self.sign(tol) == Ordering::Less
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn sign(&self, tol: f64) -> Ordering {
        if *self > tol {
            Ordering::Greater
        } else if *self < -tol {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        <BigRational as num_traits::Zero>::zero()
    }
    fn one() -> Self {
        BigRational::from_integer(BigInt::from(1))
    }
    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("finite value required for exact arithmetic")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn normalize_ray(v: &mut [Self]) {
        // primitive integer vector: clear denominators, then divide by the gcd
        use num_integer::Integer;
        let mut lcm = BigInt::from(1);
        for x in v.iter() {
            lcm = lcm.lcm(x.denom());
        }
        let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
        let mut g = <BigInt as num_traits::Zero>::zero();
        for i in &ints {
            g = g.gcd(i);
        }
        if g.is_zero() {
            return;
        }
        for (x, i) in v.iter_mut().zip(ints) {
            *x = BigRational::from_integer(i / &g);
        }
    }

    fn sign(&self, _tol: f64) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

pub(crate) fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Largest absolute entry (zero for an empty slice).
pub(crate) fn max_abs<S: Scalar>(v: &[S]) -> S {
    v.iter().fold(S::zero(), |m, x| {
        let a = x.abs();
        if a > m {
            a
        } else {
            m
        }
    })
}
