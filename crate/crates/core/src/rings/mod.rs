//! Exact coefficient rings.
//!
//! Every ring is a small descriptor value implementing [`Ring`]; elements are
//! plain data and all arithmetic goes through the descriptor. This lets the
//! same polynomial and linear-algebra code run over ℤ, ℚ, prime fields,
//! extension fields and the two discrete valuation rings without any global
//! state (the modulus of `F_{p^m}` lives in the descriptor, not the element).

mod dvr;
mod galois;
mod prime_field;
mod scalar;
pub mod upoly;

use std::fmt::Debug;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use dvr::{DvrDescriptor, PLocal, RatFun, TLocal};
pub use galois::{build_extension_field, GaloisField};
pub use prime_field::{is_prime, PrimeField};
pub use scalar::{ExactScalar, Scalars};

/// Commutative ring with identity.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    /// Image of a rational number, or `None` if its denominator is not a unit.
    fn from_rational(&self, q: &BigRational) -> Option<Self::Elem>;
    /// 0 for characteristic zero.
    fn characteristic(&self) -> u64;
    fn format_elem(&self, a: &Self::Elem) -> String;
    /// Exact image in ℚ for subrings of ℚ.
    fn to_rational(&self, _a: &Self::Elem) -> Option<BigRational> {
        None
    }

    /// Canonical integer representative for quotients of ℤ (the prime fields).
    fn integer_lift(&self, _a: &Self::Elem) -> Option<BigInt> {
        None
    }

    /// Short tag such as `Zp:5`, used in diagnostics and JSON output.
    fn tag(&self) -> String;

    /// Image of a quotient of polynomials in `t` with rational coefficients
    /// (coefficient lists, constant term first). Rings without a `t` only
    /// accept constant quotients.
    fn from_t_fraction(&self, num: &[BigRational], den: &[BigRational]) -> Option<Self::Elem> {
        if num.len() > 1 || den.len() > 1 {
            return None;
        }
        let n = num.first().cloned().unwrap_or_else(BigRational::zero);
        let d = den.first().cloned().unwrap_or_else(BigRational::zero);
        if d.is_zero() {
            return None;
        }
        self.from_rational(&(n / d))
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_int(&BigInt::from(n))
    }

    /// Coefficient for a random elementary change of variables. Integers in
    /// `[-2, 2]` unless the ring has more to offer than the image of ℤ.
    fn shear_coefficient<G: rand::Rng + ?Sized>(&self, rng: &mut G) -> Self::Elem {
        self.from_i64(rng.gen_range(-2i64..=2))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn pow_big(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}

/// Integral domain with exact division.
pub trait Domain: Ring {
    /// `a / b` when `b` divides `a` in the ring, otherwise `None`.
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;
}

pub trait Field: Domain {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }
}

/// Finite field `F_{p^m}` presented by a power basis over `F_p`.
pub trait FiniteField: Field {
    fn prime(&self) -> u64;
    fn degree(&self) -> usize;

    /// Number of elements when it fits in a `u64`.
    fn order(&self) -> Option<u64> {
        (self.prime() as u128)
            .checked_pow(self.degree() as u32)
            .and_then(|q| u64::try_from(q).ok())
    }

    fn order_big(&self) -> BigUint {
        BigUint::from(self.prime()).pow(self.degree() as u32)
    }

    /// Element whose power-basis coordinates are the base-`p` digits of `index`.
    fn element_by_index(&self, index: u64) -> Self::Elem {
        let p = self.prime();
        let mut digits = Vec::with_capacity(self.degree());
        let mut i = index;
        for _ in 0..self.degree() {
            digits.push(i % p);
            i /= p;
        }
        self.from_coords(&digits)
    }

    /// Power-basis coordinates over `F_p` (length = degree).
    fn coords(&self, a: &Self::Elem) -> Vec<u64>;
    fn from_coords(&self, c: &[u64]) -> Self::Elem;

    fn embed_prime(&self, c: u64) -> Self::Elem {
        let mut v = vec![0; self.degree()];
        v[0] = c % self.prime();
        self.from_coords(&v)
    }

    fn frobenius(&self, a: &Self::Elem) -> Self::Elem {
        self.pow(a, self.prime())
    }

    fn random<G: rand::Rng + ?Sized>(&self, rng: &mut G) -> Self::Elem {
        let p = self.prime();
        let v: Vec<u64> = (0..self.degree()).map(|_| rng.gen_range(0..p)).collect();
        self.from_coords(&v)
    }
}

/// Discrete valuation ring with residue field `F_p`.
pub trait Dvr: Domain {
    fn prime(&self) -> u64;
    fn uniformizer(&self) -> Self::Elem;
    fn valuation(&self, a: &Self::Elem) -> Valuation;
    /// Reduction modulo the maximal ideal.
    fn residue(&self, a: &Self::Elem) -> u64;
    /// Canonical lift: the integer representative in `[0, p)` resp. the constant.
    fn lift(&self, a: u64) -> Self::Elem;
    fn descriptor(&self) -> DvrDescriptor;

    fn residue_field(&self) -> PrimeField {
        PrimeField::new(self.prime()).expect("DVR residue characteristic is prime")
    }

    /// `π^k`.
    fn uniformizer_pow(&self, k: u64) -> Self::Elem {
        self.pow(&self.uniformizer(), k)
    }

    /// Random element `lift(r_0) + π·lift(r_1) + … + π^{depth-1}·lift(r_{depth-1})`.
    fn random_element<G: rand::Rng + ?Sized>(&self, rng: &mut G, depth: u32) -> Self::Elem {
        let pi = self.uniformizer();
        let mut acc = self.zero();
        let mut scale = self.one();
        for _ in 0..depth {
            let r = rng.gen_range(0..self.prime());
            acc = self.add(&acc, &self.mul(&scale, &self.lift(r)));
            scale = self.mul(&scale, &pi);
        }
        acc
    }
}

/// Value of a discrete valuation; `Infinite` only for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// `self ≥ k` for a finite threshold.
    pub fn at_least(self, k: u64) -> bool {
        self >= Valuation::Finite(k)
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl std::fmt::Display for Valuation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_u64(*v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Valuation::Finite(v)),
            Raw::Str(s) if s == "inf" => Ok(Valuation::Infinite),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad valuation {s:?}"))),
        }
    }
}

/// Map a residue-field element of `F_p` into a DVR and back is the identity;
/// this helper lifts a whole vector.
pub fn lift_all<R: Dvr>(ring: &R, residues: &[u64]) -> Vec<R::Elem> {
    residues.iter().map(|&a| ring.lift(a)).collect()
}

pub(crate) fn rational_mod_p(q: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let num = ((q.numer() % &pb) + &pb) % &pb;
    let den = ((q.denom() % &pb) + &pb) % &pb;
    if den.is_zero() {
        return None;
    }
    let n: u64 = num.try_into().ok()?;
    let d: u64 = den.try_into().ok()?;
    let inv = prime_field::inv_mod(d, p)?;
    Some(n * inv % p)
}

pub(crate) fn int_mod_p(n: &BigInt, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let r = ((n % &pb) + &pb) % &pb;
    r.try_into().expect("residue fits in u64")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_order_and_sum() {
        assert!(Valuation::Finite(3) < Valuation::Infinite);
        assert!(Valuation::Finite(2) < Valuation::Finite(3));
        assert_eq!(Valuation::Finite(2) + Valuation::Finite(3), Valuation::Finite(5));
        assert_eq!(Valuation::Finite(2) + Valuation::Infinite, Valuation::Infinite);
        assert!(Valuation::Infinite.at_least(1000));
    }

    #[test]
    fn rational_reduction() {
        let q = BigRational::new(BigInt::from(3), BigInt::from(2));
        assert_eq!(rational_mod_p(&q, 7), Some(5));
        let q = BigRational::new(BigInt::from(-1), BigInt::from(1));
        assert_eq!(rational_mod_p(&q, 7), Some(6));
        let q = BigRational::new(BigInt::from(1), BigInt::from(7));
        assert_eq!(rational_mod_p(&q, 7), None);
    }
}
