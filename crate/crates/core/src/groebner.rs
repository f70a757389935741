//! Buchberger's algorithm over a field, with the monomial-ideal invariants
//! (dimension, Hilbert function, standard monomials) read off leading terms.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::mpoly::{monomials_of_degree, MPoly, Monomial, MonomialOrder};
use crate::rings::Field;

/// Terms sorted increasingly for a fixed order, so the leading term is last.
type Terms<E> = Vec<(Monomial, E)>;

fn to_terms<F: Field>(p: &MPoly<F>, order: MonomialOrder) -> Terms<F::Elem> {
    let mut t: Terms<F::Elem> = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    t.sort_by(|a, b| order.cmp(&a.0, &b.0));
    t
}

fn make_monic<F: Field>(field: &F, t: &mut Terms<F::Elem>) {
    if let Some((_, lc)) = t.last() {
        if !field.is_one(lc) {
            let inv = field.inv(lc).expect("nonzero leading coefficient");
            for (_, c) in t.iter_mut() {
                *c = field.mul(c, &inv);
            }
        }
    }
}

/// `p − c · x^shift · g`, all lists increasing in `order`.
fn sub_scaled<F: Field>(
    field: &F,
    order: MonomialOrder,
    p: &[(Monomial, F::Elem)],
    c: &F::Elem,
    shift: &Monomial,
    g: &[(Monomial, F::Elem)],
) -> Terms<F::Elem> {
    let mut out = Vec::with_capacity(p.len() + g.len());
    let mut i = 0;
    let mut j = 0;
    let shifted = |j: usize| g[j].0.mul(shift);
    let mut gm = if g.is_empty() { None } else { Some(shifted(0)) };
    while i < p.len() || gm.is_some() {
        let take = match (&p.get(i), &gm) {
            (Some(a), Some(b)) => order.cmp(&a.0, b),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => unreachable!(),
        };
        match take {
            Ordering::Less => {
                out.push(p[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                let v = field.neg(&field.mul(c, &g[j].1));
                out.push((gm.take().unwrap(), v));
                j += 1;
                gm = (j < g.len()).then(|| shifted(j));
            }
            Ordering::Equal => {
                let v = field.sub(&p[i].1, &field.mul(c, &g[j].1));
                let m = gm.take().unwrap();
                if !field.is_zero(&v) {
                    out.push((m, v));
                }
                i += 1;
                j += 1;
                gm = (j < g.len()).then(|| shifted(j));
            }
        }
    }
    out
}

/// Full reduction of `p` modulo monic `basis`.
fn reduce<F: Field>(
    field: &F,
    order: MonomialOrder,
    mut p: Terms<F::Elem>,
    basis: &[Terms<F::Elem>],
) -> Terms<F::Elem> {
    let mut rem: Terms<F::Elem> = Vec::new();
    while let Some((m, c)) = p.last().cloned() {
        let divisor = basis.iter().find(|g| g.last().unwrap().0.divides(&m));
        match divisor {
            Some(g) => {
                let shift = g.last().unwrap().0.quotient_of(&m).unwrap();
                p = sub_scaled(field, order, &p, &c, &shift, g);
            }
            None => {
                p.pop();
                rem.push((m, c));
            }
        }
    }
    rem.reverse();
    rem
}

/// Reduced Gröbner basis of an ideal of `F[x_0, …]`.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<F: Field> {
    field: F,
    nvars: usize,
    order: MonomialOrder,
    polys: Vec<Terms<F::Elem>>,
}

pub fn groebner_basis<F: Field>(
    field: &F,
    nvars: usize,
    generators: &[MPoly<F>],
    order: MonomialOrder,
) -> GroebnerBasis<F> {
    let mut basis: Vec<Terms<F::Elem>> = Vec::new();
    for g in generators {
        assert_eq!(g.nvars(), nvars, "generator arity");
        assert!(g.ring() == field, "generator ring");
        let mut t = to_terms(g, order);
        t = reduce(field, order, t, &basis);
        if !t.is_empty() {
            make_monic(field, &mut t);
            basis.push(t);
        }
    }
    let lm = |b: &Terms<F::Elem>| b.last().unwrap().0.clone();
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.insert((i, j));
        }
    }
    while !pairs.is_empty() {
        // normal selection: least lcm
        let &(i, j) = pairs
            .iter()
            .min_by(|a, b| {
                let la = lm(&basis[a.0]).lcm(&lm(&basis[a.1]));
                let lb = lm(&basis[b.0]).lcm(&lm(&basis[b.1]));
                order.cmp(&la, &lb)
            })
            .unwrap();
        pairs.remove(&(i, j));
        let (li, lj) = (lm(&basis[i]), lm(&basis[j]));
        if li.is_coprime(&lj) {
            continue;
        }
        let l = li.lcm(&lj);
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && lm(&basis[k]).divides(&l)
                && !pairs.contains(&key(i, k))
                && !pairs.contains(&key(j, k))
        });
        if chain {
            continue;
        }
        let si = li.quotient_of(&l).unwrap();
        let sj = lj.quotient_of(&l).unwrap();
        let zero: Terms<F::Elem> = Vec::new();
        let a = sub_scaled(field, order, &zero, &field.neg(&field.one()), &si, &basis[i]);
        let s = sub_scaled(field, order, &a, &field.one(), &sj, &basis[j]);
        let mut r = reduce(field, order, s, &basis);
        if r.is_empty() {
            continue;
        }
        make_monic(field, &mut r);
        let new = basis.len();
        basis.push(r);
        for k in 0..new {
            pairs.insert((k, new));
        }
    }
    // minimal, then reduced
    let mut keep: Vec<Terms<F::Elem>> = Vec::new();
    for (idx, g) in basis.iter().enumerate() {
        let m = lm(g);
        let redundant = basis.iter().enumerate().any(|(k, h)| {
            let hm = lm(h);
            k != idx && hm.divides(&m) && (hm != m || k < idx)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(keep.len());
    for idx in 0..keep.len() {
        let others: Vec<Terms<F::Elem>> =
            keep.iter().enumerate().filter(|(k, _)| *k != idx).map(|(_, g)| g.clone()).collect();
        let mut g = keep[idx].clone();
        let lead = g.pop().unwrap();
        let mut tail = reduce(field, order, g, &others);
        tail.push(lead);
        reduced.push(tail);
    }
    reduced.sort_by(|a, b| order.cmp(&a.last().unwrap().0, &b.last().unwrap().0));
    GroebnerBasis { field: field.clone(), nvars, order, polys: reduced }
}

impl<F: Field> GroebnerBasis<F> {
    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn generators(&self) -> Vec<MPoly<F>> {
        self.polys
            .iter()
            .map(|t| MPoly::from_terms(&self.field, self.nvars, t.iter().cloned()))
            .collect()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys.iter().map(|t| t.last().unwrap().0.clone()).collect()
    }

    pub fn is_unit(&self) -> bool {
        self.polys.iter().any(|t| t.last().unwrap().0.is_one())
    }

    pub fn normal_form(&self, p: &MPoly<F>) -> MPoly<F> {
        let r = reduce(&self.field, self.order, to_terms(p, self.order), &self.polys);
        MPoly::from_terms(&self.field, self.nvars, r)
    }

    pub fn contains(&self, p: &MPoly<F>) -> bool {
        self.normal_form(p).is_zero()
    }

    /// Krull dimension of `F[x]/I`; −1 for the unit ideal.
    pub fn affine_dimension(&self) -> i64 {
        affine_dimension(&self.leading_monomials(), self.nvars)
    }

    /// Dimension of the projective scheme of a homogeneous ideal; −1 when it
    /// is empty.
    pub fn projective_dimension(&self) -> i64 {
        (self.affine_dimension() - 1).max(-1)
    }
}

/// Largest set of variables containing the support of no leading monomial.
pub fn affine_dimension(lms: &[Monomial], nvars: usize) -> i64 {
    if lms.iter().any(Monomial::is_one) {
        return -1;
    }
    let supports: Vec<u64> = lms
        .iter()
        .map(|m| m.support().fold(0u64, |acc, i| acc | (1 << i)))
        .collect();
    let mut best = 0;
    for set in 0u64..(1 << nvars) {
        let size = set.count_ones() as i64;
        if size > best && supports.iter().all(|&s| s & !set != 0) {
            best = size;
        }
    }
    best
}

/// Number of degree-`t` monomials outside the monomial ideal.
pub fn hilbert_function(lms: &[Monomial], nvars: usize, t: u32) -> u64 {
    monomials_of_degree(nvars, t)
        .iter()
        .filter(|m| !lms.iter().any(|l| l.divides(m)))
        .count() as u64
}

/// Monomials outside the ideal when there are finitely many, else `None`.
pub fn standard_monomials(lms: &[Monomial], nvars: usize) -> Option<Vec<Monomial>> {
    let bounded = (0..nvars)
        .all(|i| lms.iter().any(|m| m.exps()[i] > 0 && m.support().all(|j| j == i)));
    if !bounded && !lms.iter().any(Monomial::is_one) {
        return None;
    }
    let mut out = Vec::new();
    let mut frontier = vec![Monomial::one(nvars)];
    let mut seen = BTreeSet::new();
    while let Some(m) = frontier.pop() {
        if !seen.insert(m.clone()) || lms.iter().any(|l| l.divides(&m)) {
            continue;
        }
        for i in 0..nvars {
            frontier.push(m.mul(&Monomial::var(nvars, i)));
        }
        out.push(m);
    }
    out.sort();
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::parse_poly;
    use crate::rings::{PrimeField, Ring};

    fn polys(f: &PrimeField, n: usize, ss: &[&str]) -> Vec<MPoly<PrimeField>> {
        ss.iter().map(|s| parse_poly(f, n, s).unwrap()).collect()
    }

    #[test]
    fn already_reduced() {
        let f = PrimeField::new(7).unwrap();
        let gb = groebner_basis(&f, 2, &polys(&f, 2, &["x0", "x1"]), MonomialOrder::GrevLex);
        assert_eq!(gb.generators(), polys(&f, 2, &["x1", "x0"]));
    }

    #[test]
    fn small_example() {
        let f = PrimeField::new(7).unwrap();
        let gb = groebner_basis(&f, 2, &polys(&f, 2, &["x0^2", "x0*x1 - x1"]), MonomialOrder::GrevLex);
        // x1 = x0*(x0*x1 - x1) - x1*x0^2 + ... ; the reduced basis is {x0^2, x1}
        assert_eq!(gb.generators(), polys(&f, 2, &["x1", "x0^2"]));
    }

    #[test]
    fn unit_ideal() {
        let f = PrimeField::new(5).unwrap();
        let gb = groebner_basis(&f, 2, &polys(&f, 2, &["x0 + 1", "x0"]), MonomialOrder::Lex);
        assert!(gb.is_unit());
        assert_eq!(gb.generators(), polys(&f, 2, &["1"]));
        assert_eq!(gb.projective_dimension(), -1);
    }

    #[test]
    fn s_pairs_reduce_to_zero() {
        let f = PrimeField::new(11).unwrap();
        for order in [MonomialOrder::GrevLex, MonomialOrder::Lex] {
            let gens = polys(&f, 3, &["x0^2*x1 - x2^3", "x0*x1^2 + x2 - 1", "x1^3 - x0*x2"]);
            let gb = groebner_basis(&f, 3, &gens, order);
            let g = gb.generators();
            for a in &g {
                for b in &g {
                    let la = to_terms(a, order).last().unwrap().0.clone();
                    let lb = to_terms(b, order).last().unwrap().0.clone();
                    let l = la.lcm(&lb);
                    let s = a
                        .mul_monomial(&la.quotient_of(&l).unwrap())
                        .sub(&b.mul_monomial(&lb.quotient_of(&l).unwrap()));
                    assert!(gb.contains(&s));
                }
            }
            for h in &gens {
                assert!(gb.contains(h));
            }
            // leading monomials pairwise non-dividing, leading coefficients 1
            let lms = gb.leading_monomials();
            for (i, a) in lms.iter().enumerate() {
                for (j, b) in lms.iter().enumerate() {
                    assert!(i == j || !a.divides(b));
                }
            }
            for p in &gb.polys {
                assert!(f.is_one(&p.last().unwrap().1));
            }
        }
    }

    #[test]
    fn dimensions() {
        let f = PrimeField::new(7).unwrap();
        // x0^2 + x1^2 over F_7: singular locus is the point (0:0:1)
        let q = parse_poly(&f, 3, "x0^2 + x1^2").unwrap();
        let mut gens = vec![q.clone()];
        gens.extend(q.gradient());
        let gb = groebner_basis(&f, 3, &gens, MonomialOrder::GrevLex);
        assert_eq!(gb.projective_dimension(), 0);
        // double hyperplane: singular locus is the line x0 = 0
        let d = parse_poly(&f, 3, "x0^2").unwrap();
        let mut gens = vec![d.clone()];
        gens.extend(d.gradient());
        assert_eq!(groebner_basis(&f, 3, &gens, MonomialOrder::GrevLex).projective_dimension(), 1);
    }

    #[test]
    fn hilbert_and_standard_monomials() {
        let lms = vec![Monomial::new(&[2, 0]), Monomial::new(&[0, 3])];
        assert_eq!(standard_monomials(&lms, 2).unwrap().len(), 6);
        assert!(standard_monomials(&[Monomial::new(&[2, 0])], 2).is_none());
        // ideal (x0^2) in 3 vars: HF(t) = 2t + 1 for t >= 1
        let lms = vec![Monomial::new(&[2, 0, 0])];
        assert_eq!(hilbert_function(&lms, 3, 4), 9);
    }
}
