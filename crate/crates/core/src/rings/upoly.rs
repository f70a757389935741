//! Dense univariate polynomials over a field, as coefficient vectors with the
//! constant term first and no trailing zeros (the zero polynomial is empty).

use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Field, FiniteField};

pub fn trim<F: Field>(f: &F, mut a: Vec<F::Elem>) -> Vec<F::Elem> {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
    a
}

pub fn degree<T>(a: &[T]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let zero = f.zero();
    let out = (0..n)
        .map(|i| f.add(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(f, out)
}

pub fn sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let zero = f.zero();
    let out = (0..n)
        .map(|i| f.sub(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(f, out)
}

pub fn scale<F: Field>(f: &F, a: &[F::Elem], c: &F::Elem) -> Vec<F::Elem> {
    trim(f, a.iter().map(|x| f.mul(x, c)).collect())
}

pub fn mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, out)
}

/// Quotient and remainder; panics on division by the zero polynomial.
pub fn divrem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = f.inv(&b[db]).expect("leading coefficient is nonzero");
    let mut r: Vec<F::Elem> = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), trim(f, r));
    }
    let mut q = vec![f.zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = f.mul(&r[k + db], &lead_inv);
        if f.is_zero(&c) {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = f.sub(&r[k + j], &f.mul(&c, bj));
        }
        q[k] = c;
    }
    r.truncate(db);
    (trim(f, q), trim(f, r))
}

pub fn rem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    divrem(f, a, b).1
}

pub fn monic<F: Field>(f: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    match a.last() {
        None => Vec::new(),
        Some(lc) => {
            let inv = f.inv(lc).expect("nonzero leading coefficient");
            scale(f, a, &inv)
        }
    }
}

/// Monic greatest common divisor (zero if both inputs are zero).
pub fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut x = trim(f, a.to_vec());
    let mut y = trim(f, b.to_vec());
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

/// Extended gcd: returns `(g, s, t)` with `s·a + t·b = g`, `g` monic.
pub fn egcd<F: Field>(
    f: &F,
    a: &[F::Elem],
    b: &[F::Elem],
) -> (Vec<F::Elem>, Vec<F::Elem>, Vec<F::Elem>) {
    let (mut r0, mut r1) = (trim(f, a.to_vec()), trim(f, b.to_vec()));
    let (mut s0, mut s1) = (vec![f.one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![f.one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s2 = sub(f, &s0, &mul(f, &q, &s1));
        let t2 = sub(f, &t0, &mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match r0.last().cloned() {
        None => (r0, s0, t0),
        Some(lc) => {
            let inv = f.inv(&lc).expect("nonzero");
            (scale(f, &r0, &inv), scale(f, &s0, &inv), scale(f, &t0, &inv))
        }
    }
}

pub fn mulmod<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem], m: &[F::Elem]) -> Vec<F::Elem> {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod<F: Field>(f: &F, base: &[F::Elem], e: &BigUint, m: &[F::Elem]) -> Vec<F::Elem> {
    let mut acc = rem(f, &[f.one()], m);
    let b = rem(f, base, m);
    for i in (0..e.bits()).rev() {
        acc = mulmod(f, &acc, &acc, m);
        if e.bit(i) {
            acc = mulmod(f, &acc, &b, m);
        }
    }
    acc
}

pub fn eval<F: Field>(f: &F, a: &[F::Elem], x: &F::Elem) -> F::Elem {
    a.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

pub fn derivative<F: Field>(f: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| f.mul(&f.from_i64(i as i64), c))
        .collect();
    trim(f, out)
}

/// `x^{q} mod m` where `q = |F|`, computed by repeated `p`-th powers.
pub fn x_pow_field_order<F: FiniteField>(f: &F, m: &[F::Elem], extra_degree: usize) -> Vec<F::Elem> {
    let x = vec![f.zero(), f.one()];
    let p = BigUint::from(f.prime());
    let mut h = rem(f, &x, m);
    for _ in 0..f.degree() * extra_degree.max(1) {
        h = powmod(f, &h, &p, m);
    }
    h
}

/// All roots of `a` in the field `F`, sorted by power-basis coordinates.
///
/// Uses `gcd(a, x^q − x)` to isolate the split part, then equal-degree
/// splitting with a fixed-seed generator so the output is deterministic.
pub fn roots<F: FiniteField>(f: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    let a = trim(f, a.to_vec());
    match degree(&a) {
        None => panic!("roots of the zero polynomial"),
        Some(0) => return Vec::new(),
        _ => {}
    }
    let a = monic(f, &a);
    let xq = x_pow_field_order(f, &a, 1);
    let split = gcd(f, &a, &sub(f, &xq, &[f.zero(), f.one()]));
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x005e_ed0f_2007);
    split_linear(f, &split, &mut rng, &mut out);
    out.sort_by_key(|r| f.coords(r));
    out
}

fn split_linear<F: FiniteField>(
    f: &F,
    g: &[F::Elem],
    rng: &mut ChaCha8Rng,
    out: &mut Vec<F::Elem>,
) {
    match degree(g) {
        None | Some(0) => return,
        Some(1) => {
            let root = f.neg(&f.div(&g[0], &g[1]).expect("nonzero"));
            out.push(root);
            return;
        }
        _ => {}
    }
    loop {
        let c = f.random(rng);
        let h = if f.prime() == 2 {
            // Trace polynomial Σ (c·x)^{2^i}, i < [F:F_2]. A shift x+c would
            // not do: it only adds the constant Tr(c).
            let mut term = rem(f, &[f.zero(), c], g);
            let mut acc = term.clone();
            for _ in 1..f.degree() {
                term = mulmod(f, &term, &term, g);
                acc = add(f, &acc, &term);
            }
            acc
        } else {
            let e = (f.order_big() - BigUint::one()) >> 1;
            let pw = powmod(f, &[c, f.one()], &e, g);
            sub(f, &pw, &[f.one()])
        };
        let d = gcd(f, g, &h);
        let dd = degree(&d).unwrap_or(0);
        if dd > 0 && dd < degree(g).unwrap() {
            let (q, _) = divrem(f, g, &d);
            split_linear(f, &d, rng, out);
            split_linear(f, &monic(f, &q), rng, out);
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{build_extension_field, PrimeField, Ring};

    #[test]
    fn divrem_identity() {
        let f = PrimeField::new(7).unwrap();
        let a = vec![1, 2, 3, 4, 5];
        let b = vec![3, 0, 1];
        let (q, r) = divrem(&f, &a, &b);
        assert_eq!(add(&f, &mul(&f, &q, &b), &r), a);
        assert!(r.len() < b.len());
    }

    #[test]
    fn egcd_bezout() {
        let f = PrimeField::new(5).unwrap();
        let a = vec![1, 0, 1]; // x^2 + 1 = (x-2)(x-3) over F_5
        let b = vec![3, 1]; // x - 2
        let (g, s, t) = egcd(&f, &a, &b);
        assert_eq!(g, vec![3, 1]);
        assert_eq!(add(&f, &mul(&f, &s, &a), &mul(&f, &t, &b)), g);
    }

    #[test]
    fn roots_prime_field_match_enumeration() {
        let f = PrimeField::new(13).unwrap();
        // (x-1)(x-5)(x-5)(x^2+2) : x^2 = -2 = 11, 11 is a square mod 13? squares: 1,4,9,3,12,10
        let mut poly = vec![1u64];
        for r in [1u64, 5, 5] {
            poly = mul(&f, &poly, &[f.neg(&r), 1]);
        }
        poly = mul(&f, &poly, &[2, 0, 1]);
        let got = roots(&f, &poly);
        let brute: Vec<u64> = (0..13).filter(|x| eval(&f, &poly, x) == 0).collect();
        assert_eq!(got, brute);
    }

    #[test]
    fn roots_in_extension_field() {
        for (p, m) in [(2u64, 3usize), (3, 2), (5, 2)] {
            let gf = build_extension_field(p, m).unwrap();
            let q = gf.order().unwrap();
            // x^q - x has every element as a root; take a random cubic instead.
            let coeffs: Vec<_> = (0..4).map(|i| gf.element_by_index((i * 7 + 3) % q)).collect();
            let mut poly = coeffs;
            poly[3] = gf.one();
            let got = roots(&gf, &poly);
            let mut brute: Vec<_> = (0..q)
                .map(|i| gf.element_by_index(i))
                .filter(|x| gf.is_zero(&eval(&gf, &poly, x)))
                .collect();
            brute.sort_by_key(|r| gf.coords(r));
            assert_eq!(got, brute, "p={p} m={m}");
        }
    }

    #[test]
    fn roots_with_equal_trace_split_in_char_two() {
        for m in [2usize, 3, 4] {
            let gf = build_extension_field(2, m).unwrap();
            let q = gf.order().unwrap();
            let mut all: Vec<_> = vec![gf.zero(), gf.one()];
            all.extend((0..q).map(|i| gf.element_by_index(i)).filter(|x| *x != gf.zero() && *x != gf.one()));
            // x(x+1), then the product over all elements.
            for take in [2usize, q as usize] {
                let mut poly = vec![gf.one()];
                for r in &all[..take] {
                    poly = mul(&gf, &poly, &[gf.neg(r), gf.one()]);
                }
                let mut want = all[..take].to_vec();
                want.sort_by_key(|r| gf.coords(r));
                assert_eq!(roots(&gf, &poly), want, "m={m} take={take}");
            }
        }
    }
}
