use std::fmt::{self, Debug, Display};
use std::marker::PhantomData;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, Signed, Zero};

use super::{Domain, Field, Ring};

/// Exact number type usable as a characteristic-zero coefficient ring.
pub trait ExactScalar: Num + Clone + Debug + Display + Send + Sync + 'static {
    fn from_bigint(n: &BigInt) -> Self;
    fn from_ratio(q: &BigRational) -> Option<Self>;
    /// `self / other` when the quotient lies in the type.
    fn exact_div(&self, other: &Self) -> Option<Self>;
    fn multiplicative_inverse(&self) -> Option<Self>;
    fn to_ratio(&self) -> BigRational;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
}

macro_rules! ref_ops {
    () => {
        fn add_ref(&self, other: &Self) -> Self {
            self + other
        }
        fn sub_ref(&self, other: &Self) -> Self {
            self - other
        }
        fn mul_ref(&self, other: &Self) -> Self {
            self * other
        }
    };
}

impl ExactScalar for BigInt {
    fn from_bigint(n: &BigInt) -> Self {
        n.clone()
    }

    fn from_ratio(q: &BigRational) -> Option<Self> {
        q.is_integer().then(|| q.to_integer())
    }

    fn exact_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(other);
        r.is_zero().then_some(q)
    }

    fn multiplicative_inverse(&self) -> Option<Self> {
        (self.abs() == BigInt::from(1)).then(|| self.clone())
    }

    fn to_ratio(&self) -> BigRational {
        BigRational::from_integer(self.clone())
    }

    ref_ops!();
}

impl ExactScalar for BigRational {
    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn from_ratio(q: &BigRational) -> Option<Self> {
        Some(q.clone())
    }

    fn exact_div(&self, other: &Self) -> Option<Self> {
        (!other.is_zero()).then(|| self / other)
    }

    fn multiplicative_inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }

    fn to_ratio(&self) -> BigRational {
        self.clone()
    }

    ref_ops!();
}

/// Ring of an [`ExactScalar`] type, e.g. `Scalars<BigInt>` = ℤ.
pub struct Scalars<T>(PhantomData<fn() -> T>);

impl<T> Scalars<T> {
    pub const fn new() -> Self {
        Scalars(PhantomData)
    }
}

impl<T> Default for Scalars<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> Clone for Scalars<T> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<T> Copy for Scalars<T> {}

impl<T> PartialEq for Scalars<T> {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl<T> Debug for Scalars<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalars<{}>", std::any::type_name::<T>())
    }
}

impl<T: ExactScalar> Ring for Scalars<T> {
    type Elem = T;

    fn zero(&self) -> T {
        T::zero()
    }
    fn one(&self) -> T {
        T::one()
    }
    fn is_zero(&self, a: &T) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &T, b: &T) -> T {
        a.add_ref(b)
    }
    fn sub(&self, a: &T, b: &T) -> T {
        a.sub_ref(b)
    }
    fn neg(&self, a: &T) -> T {
        T::zero() - a.clone()
    }
    fn mul(&self, a: &T, b: &T) -> T {
        a.mul_ref(b)
    }
    fn from_int(&self, n: &BigInt) -> T {
        T::from_bigint(n)
    }
    fn from_rational(&self, q: &BigRational) -> Option<T> {
        T::from_ratio(q)
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn to_rational(&self, a: &T) -> Option<BigRational> {
        Some(a.to_ratio())
    }
    fn format_elem(&self, a: &T) -> String {
        a.to_string()
    }
    fn tag(&self) -> String {
        // ℤ is the only scalar type without inverses of 2.
        if T::from_bigint(&BigInt::from(2)).multiplicative_inverse().is_some() {
            "Q".to_string()
        } else {
            "Z".to_string()
        }
    }
}

impl<T: ExactScalar> Domain for Scalars<T> {
    fn div_exact(&self, a: &T, b: &T) -> Option<T> {
        a.exact_div(b)
    }
}

impl Field for Scalars<BigRational> {
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        a.multiplicative_inverse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_exact_division() {
        let zz = Scalars::<BigInt>::new();
        assert_eq!(zz.div_exact(&BigInt::from(12), &BigInt::from(-4)), Some(BigInt::from(-3)));
        assert_eq!(zz.div_exact(&BigInt::from(12), &BigInt::from(5)), None);
        assert_eq!(zz.div_exact(&BigInt::from(1), &BigInt::from(0)), None);
        assert_eq!(zz.tag(), "Z");
    }

    #[test]
    fn rational_ring() {
        let qq = Scalars::<BigRational>::new();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(qq.mul(&half, &qq.from_i64(4)), qq.from_i64(2));
        assert_eq!(qq.inv(&half), Some(qq.from_i64(2)));
        assert_eq!(qq.tag(), "Q");
    }
}
