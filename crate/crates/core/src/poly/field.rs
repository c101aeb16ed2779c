use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Coefficient fields for polynomial arithmetic.
pub trait Field: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; the caller guarantees `self` is nonzero.
    fn inv(&self) -> Self;
    fn from_integer(n: &BigInt) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_integer(&BigInt::from(n))
    }

    fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }
}

pub type Rational = BigRational;

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        self.recip()
    }
    fn from_integer(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
}

/// Integers modulo the prime `P`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub fn new(x: u64) -> Self {
        Fp(x % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0 as u128;
        let mut acc: u128 = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % P as u128;
            }
            base = base * base % P as u128;
            e >>= 1;
        }
        Fp(acc as u64)
    }

    /// Reduces a rational number; `None` when the denominator vanishes mod `P`.
    pub fn from_rational(r: &BigRational) -> Option<Self> {
        let den = <Self as Field>::from_integer(r.denom());
        if Field::is_zero(&den) {
            return None;
        }
        Some(<Self as Field>::from_integer(r.numer()).div(&den))
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Field for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1 % P)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn is_one(&self) -> bool {
        self.0 == 1
    }
    fn add(&self, other: &Self) -> Self {
        Fp(((self.0 as u128 + other.0 as u128) % P as u128) as u64)
    }
    fn sub(&self, other: &Self) -> Self {
        Fp(((self.0 as u128 + P as u128 - other.0 as u128) % P as u128) as u64)
    }
    fn mul(&self, other: &Self) -> Self {
        Fp((self.0 as u128 * other.0 as u128 % P as u128) as u64)
    }
    fn neg(&self) -> Self {
        Fp((P - self.0) % P)
    }
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero in F_{P}");
        self.pow(P - 2)
    }
    fn from_integer(n: &BigInt) -> Self {
        let r = n.mod_floor(&BigInt::from(P));
        Fp(r.to_u64().expect("residue fits"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        type F = Fp<101>;
        let a = F::new(37);
        assert_eq!(a.mul(&a.inv()), F::one());
        assert_eq!(a.add(&a.neg()), F::zero());
        assert_eq!(F::from_i64(-1), F::new(100));
        let half = F::from_rational(&BigRational::new(1.into(), 2.into())).unwrap();
        assert_eq!(half.mul(&F::new(2)), F::one());
        assert!(F::from_rational(&BigRational::new(1.into(), 101.into())).is_none());
    }
}
