use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use super::upoly;
use super::{int_mod_p, rational_mod_p, Domain, Field, FiniteField, PrimeField, Ring};
use crate::error::{Error, Result};

#[derive(Debug, PartialEq, Eq)]
struct Inner {
    base: PrimeField,
    m: usize,
    /// Monic modulus, constant term first, length `m + 1`.
    modulus: Vec<u64>,
}

/// `F_{p^m} = F_p[a]/(g(a))` for a verified-irreducible monic `g` of degree `m`.
///
/// Elements are coordinate vectors of length `m` in the basis `1, a, …, a^{m-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisField {
    inner: Arc<Inner>,
}

/// Ben-Or test: `g` of degree `m` is irreducible iff `gcd(g, x^{p^i} − x) = 1`
/// for every `i ≤ m/2`.
pub(crate) fn is_irreducible(base: &PrimeField, g: &[u64]) -> bool {
    let m = match upoly::degree(g) {
        Some(m) if m >= 1 => m,
        _ => return false,
    };
    let g = upoly::monic(base, g);
    let p = BigUint::from(base.p());
    let x = vec![0, 1];
    let mut h = upoly::rem(base, &x, &g);
    for _ in 1..=m / 2 {
        h = upoly::powmod(base, &h, &p, &g);
        let d = upoly::gcd(base, &g, &upoly::sub(base, &h, &x));
        if d.len() != 1 {
            return false;
        }
    }
    true
}

/// Builds `F_{p^m}` using the first monic irreducible of degree `m` in the
/// enumeration order "coefficients as base-`p` digits, constant term least
/// significant".
pub fn build_extension_field(p: u64, m: usize) -> Result<GaloisField> {
    let base = PrimeField::new(p)?;
    if m == 0 {
        return Err(Error::InvalidInput("extension degree must be at least 1".into()));
    }
    if m == 1 {
        return Ok(GaloisField {
            inner: Arc::new(Inner { base, m, modulus: vec![0, 1] }),
        });
    }
    let mut index: u128 = 0;
    loop {
        let mut coeffs = Vec::with_capacity(m + 1);
        let mut i = index;
        for _ in 0..m {
            coeffs.push((i % p as u128) as u64);
            i /= p as u128;
        }
        coeffs.push(1);
        if coeffs[0] != 0 && is_irreducible(&base, &coeffs) {
            return Ok(GaloisField {
                inner: Arc::new(Inner { base, m, modulus: coeffs }),
            });
        }
        index += 1;
    }
}

impl GaloisField {
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        let base = PrimeField::new(p)?;
        let modulus = upoly::trim(&base, modulus.into_iter().map(|c| c % p).collect());
        if !is_irreducible(&base, &modulus) {
            return Err(Error::InvalidInput("modulus is not irreducible".into()));
        }
        let modulus = upoly::monic(&base, &modulus);
        let m = modulus.len() - 1;
        Ok(GaloisField { inner: Arc::new(Inner { base, m, modulus }) })
    }

    pub fn base(&self) -> PrimeField {
        self.inner.base
    }

    /// The defining polynomial; `None` for the prime field itself.
    pub fn modulus(&self) -> Option<&[u64]> {
        (self.inner.m > 1).then_some(self.inner.modulus.as_slice())
    }

    fn reduce(&self, mut prod: Vec<u64>) -> Vec<u64> {
        let m = self.inner.m;
        let p = self.inner.base.p();
        let g = &self.inner.modulus;
        for k in (m..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for j in 0..m {
                prod[k - m + j] = (prod[k - m + j] + (p - g[j]) * c) % p;
            }
            prod[k] = 0;
        }
        prod.truncate(m);
        prod.resize(m, 0);
        prod
    }
}

impl Ring for GaloisField {
    type Elem = Vec<u64>;

    fn shear_coefficient<G: rand::Rng + ?Sized>(&self, rng: &mut G) -> Vec<u64> {
        self.random(rng)
    }

    fn zero(&self) -> Vec<u64> {
        vec![0; self.inner.m]
    }
    fn one(&self) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = 1;
        v
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&c| c == 0)
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let f = &self.inner.base;
        a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let f = &self.inner.base;
        a.iter().zip(b).map(|(x, y)| f.sub(x, y)).collect()
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        let f = &self.inner.base;
        a.iter().map(|x| f.neg(x)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let m = self.inner.m;
        if m == 1 {
            return vec![a[0] * b[0] % self.inner.base.p()];
        }
        let p = self.inner.base.p();
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        self.reduce(prod)
    }
    fn from_int(&self, n: &BigInt) -> Vec<u64> {
        self.embed_prime(int_mod_p(n, self.inner.base.p()))
    }
    fn from_rational(&self, q: &BigRational) -> Option<Vec<u64>> {
        rational_mod_p(q, self.inner.base.p()).map(|c| self.embed_prime(c))
    }
    fn characteristic(&self) -> u64 {
        self.inner.base.p()
    }
    fn integer_lift(&self, a: &Vec<u64>) -> Option<BigInt> {
        (self.inner.m == 1).then(|| BigInt::from(a[0]))
    }
    /// Reads `t` as the generator `a`.
    fn from_t_fraction(&self, num: &[BigRational], den: &[BigRational]) -> Option<Vec<u64>> {
        let p = self.inner.base.p();
        let gen = if self.inner.m == 1 { vec![0] } else { self.from_coords(&[0, 1]) };
        let eval = |c: &[BigRational]| -> Option<Vec<u64>> {
            let mut acc = self.zero();
            for q in c.iter().rev() {
                acc = self.add(&self.mul(&acc, &gen), &self.embed_prime(rational_mod_p(q, p)?));
            }
            Some(acc)
        };
        self.div(&eval(num)?, &eval(den)?)
    }
    fn format_elem(&self, a: &Vec<u64>) -> String {
        if self.inner.m == 1 {
            return a[0].to_string();
        }
        let mut parts = Vec::new();
        for (i, &c) in a.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mon = match i {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            };
            parts.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mon,
                _ => format!("{c}*{mon}"),
            });
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }
    fn tag(&self) -> String {
        if self.inner.m == 1 {
            format!("Fq:{}", self.inner.base.p())
        } else {
            format!("Fq:{}^{}", self.inner.base.p(), self.inner.m)
        }
    }
}

impl Domain for GaloisField {
    fn div_exact(&self, a: &Vec<u64>, b: &Vec<u64>) -> Option<Vec<u64>> {
        self.div(a, b)
    }
}

impl Field for GaloisField {
    fn inv(&self, a: &Vec<u64>) -> Option<Vec<u64>> {
        if self.is_zero(a) {
            return None;
        }
        let base = &self.inner.base;
        let av = upoly::trim(base, a.clone());
        let (g, s, _) = upoly::egcd(base, &av, &self.inner.modulus);
        if g != vec![1] {
            return None;
        }
        let mut s = upoly::rem(base, &s, &self.inner.modulus);
        s.resize(self.inner.m, 0);
        Some(s)
    }
}

impl FiniteField for GaloisField {
    fn prime(&self) -> u64 {
        self.inner.base.p()
    }
    fn degree(&self) -> usize {
        self.inner.m
    }
    fn coords(&self, a: &Vec<u64>) -> Vec<u64> {
        a.clone()
    }
    fn from_coords(&self, c: &[u64]) -> Vec<u64> {
        let p = self.inner.base.p();
        let mut v: Vec<u64> = c.iter().map(|x| x % p).collect();
        v.resize(self.inner.m, 0);
        v
    }
}
