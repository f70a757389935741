//! Sparse multivariate polynomials over any ring of the tower.

mod monomial;
mod parse;

use std::collections::BTreeMap;

pub use monomial::{
    binomial, cmp_grevlex, cmp_grlex, cmp_lex, monomials_of_degree, Monomial, MonomialOrder,
};
pub use parse::{parse_element, parse_poly};

use crate::error::{Error, Result};
use crate::rings::{Field, Ring};

/// Polynomial in `nvars` variables `x0, x1, …` with coefficients in `R`.
///
/// Zero coefficients are never stored, so structural equality is equality of
/// polynomials. The ring descriptor travels with the value and binary
/// operations between different rings fail.
#[derive(Clone, Debug, PartialEq)]
pub struct MPoly<R: Ring> {
    ring: R,
    nvars: usize,
    terms: BTreeMap<Monomial, R::Elem>,
}

impl<R: Ring> MPoly<R> {
    pub fn zero(ring: &R, nvars: usize) -> Self {
        MPoly { ring: ring.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(ring: &R, nvars: usize, c: R::Elem) -> Self {
        let mut p = Self::zero(ring, nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(ring: &R, nvars: usize) -> Self {
        Self::constant(ring, nvars, ring.one())
    }

    pub fn var(ring: &R, nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(ring, nvars);
        p.add_term(Monomial::var(nvars, i), ring.one());
        p
    }

    /// Sum of the given terms; repeated monomials are combined.
    pub fn from_terms<I>(ring: &R, nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, R::Elem)>,
    {
        let mut p = Self::zero(ring, nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "exponent vector length");
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &R::Elem)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> R::Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn constant_term(&self) -> R::Elem {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Adds `c·m` in place.
    pub fn add_term(&mut self, m: Monomial, c: R::Elem) {
        if self.ring.is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = self.ring.add(o.get(), &c);
                if self.ring.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Least total degree of a term; `None` for the zero polynomial.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    /// Degree of a nonzero homogeneous polynomial.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.total_degree()?;
        self.is_homogeneous(d).then_some(d)
    }

    /// Part of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.degree() == d);
        Self::from_terms(&self.ring, self.nvars, terms.map(|(m, c)| (m.clone(), c.clone())))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.tag(), other.ring.tag()));
        }
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: other.nvars });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(&self.ring, self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), self.ring.mul(ca, cb));
            }
        }
        Ok(out)
    }

    /// Panics on ring or arity mismatch; see [`MPoly::checked_add`].
    pub fn add(&self, other: &Self) -> Self {
        self.checked_add(other).expect("polynomial addition")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.checked_sub(other).expect("polynomial subtraction")
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("polynomial multiplication")
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), self.ring.neg(c)));
        MPoly { ring: self.ring.clone(), nvars: self.nvars, terms: terms.collect() }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), self.ring.mul(a, c)));
        Self::from_terms(&self.ring, self.nvars, terms)
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let terms = self.terms.iter().map(|(a, c)| (a.mul(m), c.clone()));
        MPoly { ring: self.ring.clone(), nvars: self.nvars, terms: terms.collect() }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ring, self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Image under a coefficient map into another ring.
    pub fn map_coeffs<S: Ring>(&self, target: &S, f: impl Fn(&R::Elem) -> S::Elem) -> MPoly<S> {
        MPoly::from_terms(target, self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Formal partial derivative with respect to `x_i`.
    pub fn partial_derivative(&self, i: usize) -> Result<Self> {
        if i >= self.nvars {
            return Err(Error::IndexOutOfRange { index: i, nvars: self.nvars });
        }
        let mut out = Self::zero(&self.ring, self.nvars);
        for (m, c) in &self.terms {
            let e = m.exps()[i];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.exps_mut()[i] -= 1;
            out.add_term(dm, self.ring.mul(&self.ring.from_i64(e as i64), c));
        }
        Ok(out)
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars).map(|i| self.partial_derivative(i).expect("index in range")).collect()
    }

    pub fn evaluate(&self, point: &[R::Elem]) -> Result<R::Elem> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: point.len() });
        }
        let r = &self.ring;
        // Cache powers per variable.
        let maxdeg: Vec<u16> = (0..self.nvars)
            .map(|i| self.terms.keys().map(|m| m.exps()[i]).max().unwrap_or(0))
            .collect();
        let powers: Vec<Vec<R::Elem>> = point
            .iter()
            .zip(&maxdeg)
            .map(|(x, &d)| {
                let mut v = Vec::with_capacity(d as usize + 1);
                v.push(r.one());
                for k in 1..=d as usize {
                    v.push(r.mul(&v[k - 1], x));
                }
                v
            })
            .collect();
        let mut acc = r.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = r.mul(&t, &powers[i][e as usize]);
                }
            }
            acc = r.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Substitutes polynomial `images[i]` for `x_i`; all images must share a
    /// ring and arity, which becomes the arity of the result.
    pub fn compose(&self, images: &[MPoly<R>]) -> Result<MPoly<R>> {
        if images.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: images.len() });
        }
        let target_vars = images.first().map(|p| p.nvars).unwrap_or(0);
        for img in images {
            if img.ring != self.ring {
                return Err(Error::RingMismatch(self.ring.tag(), img.ring.tag()));
            }
            if img.nvars != target_vars {
                return Err(Error::DimensionMismatch { expected: target_vars, got: img.nvars });
            }
        }
        let mut power_cache: Vec<Vec<MPoly<R>>> = images
            .iter()
            .map(|p| vec![MPoly::one(&self.ring, target_vars), p.clone()])
            .collect();
        let mut out = MPoly::zero(&self.ring, target_vars);
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(&self.ring, target_vars, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                let e = e as usize;
                if e == 0 {
                    continue;
                }
                while power_cache[i].len() <= e {
                    let next = power_cache[i].last().unwrap().mul(&images[i]);
                    power_cache[i].push(next);
                }
                t = t.mul(&power_cache[i][e]);
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// `f ∘ T`: each `x_i` is replaced by `Σ_j T[i][j]·x_j`.
    pub fn substitute_linear(&self, t: &[Vec<R::Elem>]) -> Result<Self> {
        let n = self.nvars;
        if t.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: t.len() });
        }
        let images = t
            .iter()
            .map(|row| {
                if row.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, got: row.len() });
                }
                let terms = row.iter().enumerate().map(|(j, c)| (Monomial::var(n, j), c.clone()));
                Ok(MPoly::from_terms(&self.ring, n, terms))
            })
            .collect::<Result<Vec<_>>>()?;
        self.compose(&images)
    }

    /// `g(x) = f(b + x)`, one variable at a time by binomial expansion.
    pub fn taylor_shift(&self, b: &[R::Elem]) -> Result<Self> {
        if b.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: b.len() });
        }
        let r = &self.ring;
        let mut cur = self.clone();
        for (i, bi) in b.iter().enumerate() {
            if r.is_zero(bi) {
                continue;
            }
            let maxdeg = cur.terms.keys().map(|m| m.exps()[i]).max().unwrap_or(0) as u64;
            let mut bpow = vec![r.one()];
            for k in 1..=maxdeg as usize {
                bpow.push(r.mul(&bpow[k - 1], bi));
            }
            let mut next = MPoly::zero(r, self.nvars);
            for (m, c) in &cur.terms {
                let e = m.exps()[i] as u64;
                // (x_i + b)^e = Σ_k C(e,k) b^{e-k} x_i^k
                for k in 0..=e {
                    let coef = r.mul(
                        c,
                        &r.mul(&r.from_i64(binomial(e, k) as i64), &bpow[(e - k) as usize]),
                    );
                    let mut nm = m.clone();
                    nm.exps_mut()[i] = k as u16;
                    next.add_term(nm, coef);
                }
            }
            cur = next;
        }
        Ok(cur)
    }

    /// Affine model near a point: sets `x_chart = point[chart]` and
    /// `x_j = point[j] + y_j` for `j ≠ chart`, returning a polynomial in the
    /// remaining `nvars − 1` variables `y` (in their original order), so the
    /// point is moved to the origin.
    pub fn dehomogenize_at(&self, chart: usize, point: &[R::Elem]) -> Result<Self> {
        let n = self.nvars;
        if chart >= n {
            return Err(Error::IndexOutOfRange { index: chart, nvars: n });
        }
        if point.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: point.len() });
        }
        if self.ring.is_zero(&point[chart]) {
            return Err(Error::ChartCoordinateZero(chart));
        }
        let m = n - 1;
        let mut images = Vec::with_capacity(n);
        let mut k = 0;
        for (j, pj) in point.iter().enumerate() {
            let c = MPoly::constant(&self.ring, m, pj.clone());
            if j == chart {
                images.push(c);
            } else {
                images.push(c.add(&MPoly::var(&self.ring, m, k)));
                k += 1;
            }
        }
        self.compose(&images)
    }

    /// Inserts a new variable at index `at` (not occurring in any term).
    pub fn insert_variable(&self, at: usize) -> Self {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e: Vec<u16> = m.exps().to_vec();
            e.insert(at, 0);
            (Monomial::new(&e), c.clone())
        });
        MPoly::from_terms(&self.ring, self.nvars + 1, terms)
    }

    /// Homogenizes with respect to a new variable inserted at index `at`.
    pub fn homogenize(&self, at: usize) -> Self {
        let d = self.total_degree().unwrap_or(0);
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e: Vec<u16> = m.exps().to_vec();
            e.insert(at, (d - m.degree()) as u16);
            (Monomial::new(&e), c.clone())
        });
        MPoly::from_terms(&self.ring, self.nvars + 1, terms)
    }

    /// Coefficient vector over the degree-`d` monomials listed by
    /// [`monomials_of_degree`].
    pub fn coefficient_vector(&self, d: u32) -> Vec<R::Elem> {
        monomials_of_degree(self.nvars, d).iter().map(|m| self.coeff(m)).collect()
    }

    pub fn from_coefficient_vector(ring: &R, nvars: usize, d: u32, coeffs: &[R::Elem]) -> Self {
        let mons = monomials_of_degree(nvars, d);
        assert_eq!(mons.len(), coeffs.len(), "coefficient vector length");
        Self::from_terms(ring, nvars, mons.into_iter().zip(coeffs.iter().cloned()))
    }

    /// Content-free test helper: true if every coefficient satisfies `pred`.
    pub fn all_coeffs(&self, pred: impl Fn(&R::Elem) -> bool) -> bool {
        self.terms.values().all(pred)
    }
}

impl<R: Ring> std::fmt::Display for MPoly<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&parse::format_poly(self))
    }
}

/// Point of projective space over a field, scaled so its first nonzero
/// coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointProj<E> {
    coords: Vec<E>,
}

impl<E: Clone + PartialEq> PointProj<E> {
    pub fn new<F: Field<Elem = E>>(field: &F, coords: Vec<E>) -> Result<Self> {
        let chart = coords
            .iter()
            .position(|c| !field.is_zero(c))
            .ok_or_else(|| Error::InvalidInput("projective point with all coordinates zero".into()))?;
        let inv = field.inv(&coords[chart]).expect("nonzero");
        let coords = coords.iter().map(|c| field.mul(c, &inv)).collect();
        Ok(PointProj { coords })
    }

    pub fn coords(&self) -> &[E] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Index of the first nonzero coordinate (which equals 1).
    pub fn chart<F: Field<Elem = E>>(&self, field: &F) -> usize {
        self.coords.iter().position(|c| !field.is_zero(c)).expect("normalized point")
    }

    pub fn map<F2: Field>(&self, target: &F2, f: impl Fn(&E) -> F2::Elem) -> PointProj<F2::Elem> {
        PointProj { coords: self.coords.iter().map(f).collect::<Vec<_>>() }
            .renormalized(target)
    }

    fn renormalized<F: Field<Elem = E>>(self, field: &F) -> Self {
        PointProj::new(field, self.coords).expect("nonzero image of a nonzero point")
    }
}
