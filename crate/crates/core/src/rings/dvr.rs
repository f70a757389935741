use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::upoly;
use super::{int_mod_p, rational_mod_p, Domain, Dvr, PrimeField, Ring, Valuation};
use crate::error::{Error, Result};

/// Which concrete DVR: rationals localized at `p`, or `F_p(t)` localized at `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DvrDescriptor {
    PLocal(u64),
    TLocal(u64),
}

impl DvrDescriptor {
    pub fn prime(&self) -> u64 {
        match self {
            DvrDescriptor::PLocal(p) | DvrDescriptor::TLocal(p) => *p,
        }
    }
}

impl fmt::Display for DvrDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DvrDescriptor::PLocal(p) => write!(f, "Zp:{p}"),
            DvrDescriptor::TLocal(p) => write!(f, "Fpt:{p}"),
        }
    }
}

impl FromStr for DvrDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, p) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidInput(format!("ring spec {s:?} is not KIND:p")))?;
        let p: u64 = p
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("ring spec {s:?}: bad prime")))?;
        PrimeField::new(p)?;
        match kind.trim() {
            "Zp" => Ok(DvrDescriptor::PLocal(p)),
            "Fpt" => Ok(DvrDescriptor::TLocal(p)),
            other => Err(Error::InvalidInput(format!("unknown ring kind {other:?}"))),
        }
    }
}

fn p_adic_val(n: &BigInt, p: &BigInt) -> u64 {
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// `ℤ_(p)`: rationals whose denominator is prime to `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLocal {
    p: u64,
    pb: BigInt,
}

impl PLocal {
    pub fn new(p: u64) -> Result<Self> {
        PrimeField::new(p)?;
        Ok(PLocal { p, pb: BigInt::from(p) })
    }

    /// Element from a rational, if it lies in the ring.
    pub fn elem(&self, q: BigRational) -> Option<BigRational> {
        self.from_rational(&q)
    }
}

impl Ring for PLocal {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn from_int(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn from_rational(&self, q: &BigRational) -> Option<BigRational> {
        (!q.denom().is_multiple_of(&self.pb)).then(|| q.clone())
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn to_rational(&self, a: &BigRational) -> Option<BigRational> {
        Some(a.clone())
    }
    fn format_elem(&self, a: &BigRational) -> String {
        a.to_string()
    }
    fn tag(&self) -> String {
        format!("Zp:{}", self.p)
    }
}

impl Domain for PLocal {
    fn div_exact(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        if b.is_zero() {
            return None;
        }
        if a.is_zero() {
            return Some(a.clone());
        }
        (self.valuation(a) >= self.valuation(b)).then(|| a / b)
    }
}

impl Dvr for PLocal {
    fn prime(&self) -> u64 {
        self.p
    }
    fn uniformizer(&self) -> BigRational {
        BigRational::from_integer(self.pb.clone())
    }
    fn valuation(&self, a: &BigRational) -> Valuation {
        if a.is_zero() {
            Valuation::Infinite
        } else {
            Valuation::Finite(p_adic_val(a.numer(), &self.pb))
        }
    }
    fn residue(&self, a: &BigRational) -> u64 {
        rational_mod_p(a, self.p).expect("denominator is a unit")
    }
    fn lift(&self, a: u64) -> BigRational {
        BigRational::from_integer(BigInt::from(a % self.p))
    }
    fn descriptor(&self) -> DvrDescriptor {
        DvrDescriptor::PLocal(self.p)
    }
}

/// Rational function `num/den` over `F_p` in lowest terms with a monic
/// denominator not divisible by `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Vec<u64>,
    den: Vec<u64>,
}

impl RatFun {
    pub fn numerator(&self) -> &[u64] {
        &self.num
    }
    pub fn denominator(&self) -> &[u64] {
        &self.den
    }
}

/// `F_p[t]_(t)`: rational functions whose denominator does not vanish at 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TLocal {
    field: PrimeField,
}

impl TLocal {
    pub fn new(p: u64) -> Result<Self> {
        Ok(TLocal { field: PrimeField::new(p)? })
    }

    /// `num/den`, reduced, or `None` if `den(0) = 0` after reduction.
    pub fn fraction(&self, num: &[u64], den: &[u64]) -> Option<RatFun> {
        let f = &self.field;
        let num = upoly::trim(f, num.iter().map(|c| c % f.p()).collect());
        let den = upoly::trim(f, den.iter().map(|c| c % f.p()).collect());
        if den.is_empty() {
            return None;
        }
        if num.is_empty() {
            return Some(RatFun { num, den: vec![1] });
        }
        let g = upoly::gcd(f, &num, &den);
        let (num, _) = upoly::divrem(f, &num, &g);
        let (den, _) = upoly::divrem(f, &den, &g);
        if den[0] == 0 {
            return None;
        }
        let lc_inv = f.inv_u64(*den.last().unwrap());
        Some(RatFun {
            num: upoly::scale(f, &num, &lc_inv),
            den: upoly::scale(f, &den, &lc_inv),
        })
    }

    /// The element `t`.
    pub fn t(&self) -> RatFun {
        RatFun { num: vec![0, 1], den: vec![1] }
    }

    fn format_poly(&self, a: &[u64]) -> String {
        if a.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, &c) in a.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mon = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            parts.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mon,
                _ => format!("{c}*{mon}"),
            });
        }
        parts.join("+")
    }
}

impl PrimeField {
    fn inv_u64(&self, a: u64) -> u64 {
        use super::Field;
        self.inv(&a).expect("nonzero")
    }
}

impl Ring for TLocal {
    type Elem = RatFun;

    fn shear_coefficient<G: rand::Rng + ?Sized>(&self, rng: &mut G) -> RatFun {
        self.random_element(rng, 2)
    }

    fn zero(&self) -> RatFun {
        RatFun { num: vec![], den: vec![1] }
    }
    fn one(&self) -> RatFun {
        RatFun { num: vec![1 % self.field.p()], den: vec![1] }
    }
    fn is_zero(&self, a: &RatFun) -> bool {
        a.num.is_empty()
    }
    fn add(&self, a: &RatFun, b: &RatFun) -> RatFun {
        let f = &self.field;
        if a.den == b.den {
            return self.fraction(&upoly::add(f, &a.num, &b.num), &a.den).expect("unit denominator");
        }
        let num = upoly::add(f, &upoly::mul(f, &a.num, &b.den), &upoly::mul(f, &b.num, &a.den));
        self.fraction(&num, &upoly::mul(f, &a.den, &b.den)).expect("unit denominator")
    }
    fn sub(&self, a: &RatFun, b: &RatFun) -> RatFun {
        self.add(a, &self.neg(b))
    }
    fn neg(&self, a: &RatFun) -> RatFun {
        let f = &self.field;
        RatFun { num: a.num.iter().map(|c| f.neg(c)).collect(), den: a.den.clone() }
    }
    fn mul(&self, a: &RatFun, b: &RatFun) -> RatFun {
        let f = &self.field;
        if a.num.is_empty() || b.num.is_empty() {
            return self.zero();
        }
        self.fraction(&upoly::mul(f, &a.num, &b.num), &upoly::mul(f, &a.den, &b.den))
            .expect("unit denominator")
    }
    fn from_int(&self, n: &BigInt) -> RatFun {
        let c = int_mod_p(n, self.field.p());
        self.fraction(&[c], &[1]).expect("constant")
    }
    fn from_rational(&self, q: &BigRational) -> Option<RatFun> {
        let c = rational_mod_p(q, self.field.p())?;
        self.fraction(&[c], &[1])
    }
    fn from_t_fraction(&self, num: &[BigRational], den: &[BigRational]) -> Option<RatFun> {
        let p = self.field.p();
        let n: Option<Vec<u64>> = num.iter().map(|c| rational_mod_p(c, p)).collect();
        let d: Option<Vec<u64>> = den.iter().map(|c| rational_mod_p(c, p)).collect();
        self.fraction(&n?, &d?)
    }
    fn characteristic(&self) -> u64 {
        self.field.p()
    }
    fn format_elem(&self, a: &RatFun) -> String {
        let num = self.format_poly(&a.num);
        if a.den == [1] {
            num
        } else {
            format!("({})/({})", num, self.format_poly(&a.den))
        }
    }
    fn tag(&self) -> String {
        format!("Fpt:{}", self.field.p())
    }
}

impl Domain for TLocal {
    fn div_exact(&self, a: &RatFun, b: &RatFun) -> Option<RatFun> {
        if b.num.is_empty() {
            return None;
        }
        let f = &self.field;
        self.fraction(&upoly::mul(f, &a.num, &b.den), &upoly::mul(f, &a.den, &b.num))
    }
}

impl Dvr for TLocal {
    fn prime(&self) -> u64 {
        self.field.p()
    }
    fn uniformizer(&self) -> RatFun {
        self.t()
    }
    fn valuation(&self, a: &RatFun) -> Valuation {
        match a.num.iter().position(|&c| c != 0) {
            None => Valuation::Infinite,
            Some(k) => Valuation::Finite(k as u64),
        }
    }
    fn residue(&self, a: &RatFun) -> u64 {
        let n0 = a.num.first().copied().unwrap_or(0);
        self.field.mul(&n0, &self.field.inv_u64(a.den[0]))
    }
    fn lift(&self, a: u64) -> RatFun {
        self.fraction(&[a % self.field.p()], &[1]).expect("constant")
    }
    fn descriptor(&self) -> DvrDescriptor {
        DvrDescriptor::TLocal(self.field.p())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn plocal_valuation_examples() {
        let r = PLocal::new(5).unwrap();
        assert_eq!(r.valuation(&q(50, 1)), Valuation::Finite(2));
        assert_eq!(r.valuation(&q(0, 1)), Valuation::Infinite);
        assert_eq!(r.valuation(&q(3, 7)), Valuation::Finite(0));
        assert!(r.elem(q(1, 5)).is_none());
    }

    #[test]
    fn plocal_residue_examples() {
        assert_eq!(PLocal::new(7).unwrap().residue(&q(3, 2)), 5);
        assert_eq!(PLocal::new(5).unwrap().residue(&q(10, 1)), 0);
        assert_eq!(PLocal::new(5).unwrap().lift(3), q(3, 1));
        assert_eq!(PLocal::new(5).unwrap().lift(0), q(0, 1));
    }

    #[test]
    fn tlocal_examples() {
        let r = TLocal::new(3).unwrap();
        // t^2/(t+1)
        let x = r.fraction(&[0, 0, 1], &[1, 1]).unwrap();
        assert_eq!(r.valuation(&x), Valuation::Finite(2));
        // (1+t)/(1-t)
        let y = r.fraction(&[1, 1], &[1, 2]).unwrap();
        assert_eq!(r.residue(&y), 1);
        assert!(r.fraction(&[1], &[0, 1]).is_none());
        assert_eq!(r.valuation(&r.zero()), Valuation::Infinite);
    }

    #[test]
    fn tlocal_reduces_to_lowest_terms() {
        let r = TLocal::new(5).unwrap();
        // (t^2 - 1)/(t - 1) = t + 1
        let x = r.fraction(&[4, 0, 1], &[4, 1]).unwrap();
        assert_eq!(x.numerator(), &[1, 1]);
        assert_eq!(x.denominator(), &[1]);
        assert_eq!(r.format_elem(&x), "t+1");
    }

    #[test]
    fn descriptor_round_trip() {
        for s in ["Zp:5", "Fpt:7"] {
            let d: DvrDescriptor = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert!("Zp:9".parse::<DvrDescriptor>().is_err());
        assert!("Qp:5".parse::<DvrDescriptor>().is_err());
    }

    fn random_plocal(rng: &mut ChaCha8Rng, p: i64) -> BigRational {
        let n: i64 = rng.gen_range(-500..=500) * p.pow(rng.gen_range(0..3));
        let mut d: i64 = rng.gen_range(1..60);
        while d % p == 0 {
            d += 1;
        }
        q(n, d)
    }

    fn random_tlocal(rng: &mut ChaCha8Rng, r: &TLocal) -> RatFun {
        let p = r.prime();
        let k = rng.gen_range(0..3);
        let mut num: Vec<u64> = vec![0; k];
        num.extend((0..rng.gen_range(0..4)).map(|_| rng.gen_range(0..p)));
        let mut den: Vec<u64> = (0..rng.gen_range(1..3)).map(|_| rng.gen_range(0..p)).collect();
        den[0] = rng.gen_range(1..p);
        r.fraction(&num, &den).unwrap()
    }

    fn check_valuation_laws<R: Dvr>(r: &R, pairs: &[(R::Elem, R::Elem)]) {
        let f = r.residue_field();
        for (x, y) in pairs {
            let (vx, vy) = (r.valuation(x), r.valuation(y));
            assert_eq!(r.valuation(&r.mul(x, y)), vx + vy);
            let vs = r.valuation(&r.add(x, y));
            assert!(vs >= vx.min(vy));
            if vx != vy {
                assert_eq!(vs, vx.min(vy));
            }
            assert_eq!(r.residue(&r.mul(x, y)), f.mul(&r.residue(x), &r.residue(y)));
            assert_eq!(r.residue(&r.add(x, y)), f.add(&r.residue(x), &r.residue(y)));
        }
        for a in 0..r.prime().min(200) {
            assert_eq!(r.residue(&r.lift(a)), a);
        }
    }

    #[test]
    fn plocal_homomorphism_and_valuation_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [2i64, 3, 5] {
            let r = PLocal::new(p as u64).unwrap();
            let pairs: Vec<_> =
                (0..1000).map(|_| (random_plocal(&mut rng, p), random_plocal(&mut rng, p))).collect();
            check_valuation_laws(&r, &pairs);
        }
    }

    #[test]
    fn tlocal_homomorphism_and_valuation_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for p in [2u64, 3, 7] {
            let r = TLocal::new(p).unwrap();
            let pairs: Vec<_> =
                (0..1000).map(|_| (random_tlocal(&mut rng, &r), random_tlocal(&mut rng, &r))).collect();
            check_valuation_laws(&r, &pairs);
        }
    }

    #[test]
    fn exact_division_respects_valuation() {
        let r = PLocal::new(3).unwrap();
        assert_eq!(r.div_exact(&q(18, 1), &q(9, 2)), Some(q(4, 1)));
        assert_eq!(r.div_exact(&q(6, 1), &q(9, 1)), None);
        let t = TLocal::new(3).unwrap();
        let t2 = t.mul(&t.t(), &t.t());
        assert_eq!(t.div_exact(&t2, &t.t()), Some(t.t()));
        assert_eq!(t.div_exact(&t.t(), &t2), None);
    }
}
