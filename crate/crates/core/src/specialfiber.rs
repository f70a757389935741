//! Singular subschemes of hypersurfaces over a prime field `F_p`.
//!
//! The scheme is cut out by `f` and its partial derivatives. Its dimension
//! and degree come from a Gröbner basis of that ideal; when it is finite its
//! points are found over `F_{p^m}` (`m ≤ m_max`) by lexicographic bases on
//! the strata `x_0 = … = x_{i−1} = 0, x_i = 1` and univariate root finding,
//! then grouped into Frobenius orbits (closed points).

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::groebner::{groebner_basis, hilbert_function, standard_monomials, GroebnerBasis};
use crate::linalg::rank;
use crate::mpoly::{monomials_of_degree, MPoly, Monomial, MonomialOrder, PointProj};
use crate::rings::upoly;
use crate::rings::{build_extension_field, FiniteField, GaloisField, PrimeField, Ring};

/// `{f, ∂f/∂x_0, …, ∂f/∂x_n}`; `f` is kept even when it is implied.
pub fn singular_subscheme<R: Ring>(f: &MPoly<R>) -> Vec<MPoly<R>> {
    let mut gens = vec![f.clone()];
    gens.extend(f.gradient());
    gens
}

#[derive(Clone, Debug)]
pub struct LocusOptions {
    pub m_max: usize,
    /// Bound on the number of points scanned when searching for lines.
    pub max_enum: u64,
}

impl Default for LocusOptions {
    fn default() -> Self {
        LocusOptions { m_max: 4, max_enum: 200_000 }
    }
}

/// A closed point: a Frobenius orbit of `degree` geometric points, given by
/// one representative over `F_{p^degree}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedPoint {
    pub degree: usize,
    pub field: GaloisField,
    pub point: PointProj<Vec<u64>>,
    /// Length of the singular subscheme at each geometric point of the orbit.
    pub multiplicity: u64,
}

impl ClosedPoint {
    /// Coordinates in `F_p` for a rational point.
    pub fn rational_coords(&self) -> Option<Vec<u64>> {
        (self.degree == 1).then(|| self.point.coords().iter().map(|c| c[0]).collect())
    }

    pub fn format_coords(&self) -> Vec<String> {
        self.point.coords().iter().map(|c| self.field.format_elem(c)).collect()
    }
}

impl Serialize for ClosedPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ClosedPoint", 4)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("coords", &self.format_coords())?;
        st.serialize_field("modulus", &self.field.modulus())?;
        st.serialize_field("multiplicity", &self.multiplicity)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularLocusReport {
    /// Projective dimension; −1 when empty.
    pub dimension: i64,
    pub closed_points: Vec<ClosedPoint>,
    /// Number of closed points (finite case only).
    pub r: Option<usize>,
    /// Degree of the scheme (finite case only).
    pub degree: Option<u64>,
    /// Dimension of the projective span of the geometric points.
    pub span_dim: Option<i64>,
    /// `Some(true)` only with a proof; `None` when undecided.
    pub contains_line: Option<bool>,
    pub points_possibly_incomplete: bool,
    pub m_max: usize,
}

impl SingularLocusReport {
    pub fn is_empty(&self) -> bool {
        self.dimension < 0
    }

    pub fn rational_points(&self) -> impl Iterator<Item = &ClosedPoint> {
        self.closed_points.iter().filter(|c| c.degree == 1)
    }
}

/// Sets `x_0 … x_{i−1}` to 0 and `x_i` to 1, keeping `x_{i+1} … x_n`.
fn restrict_to_stratum(g: &MPoly<PrimeField>, i: usize) -> MPoly<PrimeField> {
    let n = g.nvars();
    let k = n - i - 1;
    let field = g.ring();
    let images: Vec<MPoly<PrimeField>> = (0..n)
        .map(|j| match j.cmp(&i) {
            std::cmp::Ordering::Less => MPoly::zero(field, k),
            std::cmp::Ordering::Equal => MPoly::one(field, k),
            std::cmp::Ordering::Greater => MPoly::var(field, k, j - i - 1),
        })
        .collect();
    g.compose(&images).expect("arity")
}

pub fn embed(f: &MPoly<PrimeField>, field: &GaloisField) -> MPoly<GaloisField> {
    f.map_coeffs(field, |c| field.embed_prime(*c))
}

/// All common zeros over `field` of an ideal given by a lexicographic basis
/// of a zero-dimensional ideal.
fn solve_lex<F: FiniteField>(gb: &[MPoly<F>], field: &F, k: usize) -> Result<Vec<Vec<F::Elem>>> {
    if k == 0 {
        return Ok(if gb.iter().any(|g| !g.is_zero()) { vec![] } else { vec![vec![]] });
    }
    let mut out = Vec::new();
    let mut partial: Vec<F::Elem> = vec![field.zero(); k];
    solve_level(gb, field, k - 1, &mut partial, &mut out)?;
    Ok(out)
}

fn solve_level<F: FiniteField>(
    gb: &[MPoly<F>],
    field: &F,
    v: usize,
    partial: &mut Vec<F::Elem>,
    out: &mut Vec<Vec<F::Elem>>,
) -> Result<()> {
    // univariate images of basis elements supported on x_v .. x_{k-1}
    let mut g_acc: Option<Vec<F::Elem>> = None;
    for g in gb {
        if g.terms().any(|(m, _)| m.exps()[..v].iter().any(|&e| e > 0)) {
            continue;
        }
        let mut uni: Vec<F::Elem> = Vec::new();
        for (m, c) in g.terms() {
            let mut t = c.clone();
            for (j, &e) in m.exps().iter().enumerate().skip(v + 1) {
                if e > 0 {
                    t = field.mul(&t, &field.pow(&partial[j], e as u64));
                }
            }
            let deg = m.exps()[v] as usize;
            if uni.len() <= deg {
                uni.resize(deg + 1, field.zero());
            }
            uni[deg] = field.add(&uni[deg], &t);
        }
        let uni = upoly::trim(field, uni);
        if uni.is_empty() {
            continue;
        }
        g_acc = Some(match g_acc {
            None => upoly::monic(field, &uni),
            Some(acc) => upoly::gcd(field, &acc, &uni),
        });
    }
    let Some(poly) = g_acc else {
        return Err(Error::Precondition("ideal is not zero-dimensional".into()));
    };
    if poly.len() <= 1 {
        return Ok(());
    }
    for root in upoly::roots(field, &poly) {
        partial[v] = root;
        if v == 0 {
            out.push(partial.clone());
        } else {
            solve_level(gb, field, v - 1, partial, out)?;
        }
    }
    Ok(())
}

/// Length of the local ring of the scheme cut out by homogeneous `gens` at
/// `point`: the dimension of `O/(J + m^N)` once it stops growing in `N`.
pub fn local_length<F: crate::rings::Field>(gens: &[MPoly<F>], point: &PointProj<F::Elem>) -> Result<u64> {
    let field = gens[0].ring().clone();
    let chart = point.chart(&field);
    let local: Vec<MPoly<F>> = gens
        .iter()
        .map(|g| g.dehomogenize_at(chart, point.coords()))
        .collect::<Result<_>>()?;
    if local.iter().any(|g| !field.is_zero(&g.constant_term())) {
        return Ok(0);
    }
    let k = point.dim();
    let mut prev = None;
    for big_n in 1u32.. {
        let mut ideal = local.clone();
        ideal.extend(monomials_of_degree(k, big_n).into_iter().map(|m| {
            MPoly::from_terms(&field, k, [(m, field.one())])
        }));
        let gb = groebner_basis(&field, k, &ideal, MonomialOrder::GrevLex);
        let count = standard_monomials(&gb.leading_monomials(), k)
            .expect("m-primary ideal")
            .len() as u64;
        if prev == Some(count) {
            return Ok(count);
        }
        prev = Some(count);
    }
    unreachable!()
}

/// Degree of a zero-dimensional projective scheme from its Hilbert function.
fn projective_degree<F: crate::rings::Field>(gb: &GroebnerBasis<F>) -> u64 {
    let lms = gb.leading_monomials();
    let nvars = gb.nvars();
    let lcm = lms.iter().fold(Monomial::one(nvars), |acc, m| acc.lcm(m));
    let t0 = lcm.degree();
    let h = hilbert_function(&lms, nvars, t0);
    debug_assert_eq!(h, hilbert_function(&lms, nvars, t0 + 1));
    h
}

fn frobenius_point(field: &GaloisField, p: &PointProj<Vec<u64>>) -> PointProj<Vec<u64>> {
    PointProj::new(field, p.coords().iter().map(|c| field.frobenius(c)).collect())
        .expect("nonzero")
}

fn exact_degree(field: &GaloisField, p: &PointProj<Vec<u64>>) -> usize {
    let m = field.degree();
    let mut q = p.clone();
    for k in 1..=m {
        q = frobenius_point(field, &q);
        if q == *p {
            return k;
        }
    }
    unreachable!("Frobenius has order dividing m")
}

/// Rank over `F_p` of the power-basis components of all points, minus one.
fn span_dimension(points: &[ClosedPoint], nvars: usize) -> i64 {
    let Some(first) = points.first() else {
        return -1;
    };
    let fp = first.field.base();
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for cp in points {
        for b in 0..cp.degree {
            rows.push(
                cp.point.coords().iter().map(|c| cp.field.coords(c)[b]).collect::<Vec<u64>>(),
            );
        }
    }
    debug_assert!(rows.iter().all(|r| r.len() == nvars));
    rank(&fp, &rows) as i64 - 1
}

/// All points of `P^n(F_p)` in normalized form, if there are at most `limit`.
pub fn projective_points(p: u64, nvars: usize, limit: u64) -> Option<Vec<Vec<u64>>> {
    let count = (0..nvars as u32).try_fold(0u64, |acc, k| acc.checked_add(p.checked_pow(k)?))?;
    if count > limit {
        return None;
    }
    let mut out = Vec::with_capacity(count as usize);
    for lead in 0..nvars {
        let free = nvars - lead - 1;
        for idx in 0..p.pow(free as u32) {
            let mut v = vec![0u64; nvars];
            v[lead] = 1;
            let mut i = idx;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = i % p;
                i /= p;
            }
            out.push(v);
        }
    }
    Some(out)
}

/// Whether every generator vanishes identically on the line through `a`, `b`.
pub fn line_in_ideal<R: Ring>(gens: &[MPoly<R>], a: &[R::Elem], b: &[R::Elem]) -> bool {
    let ring = gens[0].ring();
    let images: Vec<MPoly<R>> = a
        .iter()
        .zip(b)
        .map(|(x, y)| {
            MPoly::from_terms(
                ring,
                2,
                [(Monomial::var(2, 0), x.clone()), (Monomial::var(2, 1), y.clone())],
            )
        })
        .collect();
    gens.iter().all(|g| g.compose(&images).expect("arity").is_zero())
}

fn detect_line(gens: &[MPoly<PrimeField>], opts: &LocusOptions) -> Option<bool> {
    let field = gens[0].ring();
    let nvars = gens[0].nvars();
    let mut candidates: Vec<Vec<u64>> = (0..nvars)
        .map(|i| (0..nvars).map(|j| (i == j) as u64).collect())
        .collect();
    if let Some(all) = projective_points(field.p(), nvars, opts.max_enum) {
        let on: Vec<Vec<u64>> = all
            .into_iter()
            .filter(|pt| gens.iter().all(|g| g.evaluate(pt).unwrap() == 0))
            .take(64)
            .collect();
        candidates.extend(on);
    }
    candidates.dedup();
    for (i, a) in candidates.iter().enumerate() {
        for b in &candidates[i + 1..] {
            if a != b && line_in_ideal(gens, a, b) {
                return Some(true);
            }
        }
    }
    None
}

pub fn analyze_singular_locus(
    f: &MPoly<PrimeField>,
    opts: &LocusOptions,
) -> Result<SingularLocusReport> {
    let nvars = f.nvars();
    if f.homogeneous_degree().is_none() {
        return Err(Error::InvalidInput("polynomial is not a nonzero form".into()));
    }
    let field = *f.ring();
    let gens = singular_subscheme(f);
    let gb = groebner_basis(&field, nvars, &gens, MonomialOrder::GrevLex);
    let dimension = gb.projective_dimension();
    let mut report = SingularLocusReport {
        dimension,
        closed_points: vec![],
        r: None,
        degree: None,
        span_dim: None,
        contains_line: Some(false),
        points_possibly_incomplete: false,
        m_max: opts.m_max,
    };
    if dimension < 0 {
        report.r = Some(0);
        report.degree = Some(0);
        report.span_dim = Some(-1);
        return Ok(report);
    }
    if dimension >= 1 {
        report.contains_line = detect_line(&gens, opts);
        return Ok(report);
    }

    let degree = projective_degree(&gb);
    let strata: Vec<Vec<MPoly<PrimeField>>> = (0..nvars)
        .map(|i| {
            let k = nvars - i - 1;
            let restricted: Vec<_> = gens.iter().map(|g| restrict_to_stratum(g, i)).collect();
            groebner_basis(&field, k, &restricted, MonomialOrder::Lex).generators()
        })
        .collect();

    let mut closed = Vec::new();
    let mut covered: u64 = 0;
    for m in 1..=opts.m_max {
        if covered >= degree {
            break;
        }
        let ext = build_extension_field(field.p(), m)?;
        let gens_ext: Vec<MPoly<GaloisField>> = gens.iter().map(|g| embed(g, &ext)).collect();
        let mut found: Vec<PointProj<Vec<u64>>> = Vec::new();
        for (i, basis) in strata.iter().enumerate() {
            let k = nvars - i - 1;
            let basis_ext: Vec<_> = basis.iter().map(|g| embed(g, &ext)).collect();
            for tail in solve_lex(&basis_ext, &ext, k)? {
                let mut coords = vec![ext.zero(); i];
                coords.push(ext.one());
                coords.extend(tail);
                let pt = PointProj::new(&ext, coords)?;
                if exact_degree(&ext, &pt) == m {
                    found.push(pt);
                }
            }
        }
        found.sort_by_key(|p| p.coords().to_vec());
        let mut used = vec![false; found.len()];
        for idx in 0..found.len() {
            if used[idx] {
                continue;
            }
            let mut orbit = vec![found[idx].clone()];
            let mut q = frobenius_point(&ext, &found[idx]);
            while q != found[idx] {
                orbit.push(q.clone());
                q = frobenius_point(&ext, &q);
            }
            for o in &orbit {
                if let Some(pos) = found.iter().position(|x| x == o) {
                    used[pos] = true;
                }
            }
            let rep = orbit.into_iter().min_by_key(|p| p.coords().to_vec()).unwrap();
            let multiplicity = local_length(&gens_ext, &rep)?;
            covered += multiplicity * m as u64;
            closed.push(ClosedPoint { degree: m, field: ext.clone(), point: rep, multiplicity });
        }
    }
    report.span_dim = Some(span_dimension(&closed, nvars));
    report.r = Some(closed.len());
    report.degree = Some(degree);
    report.points_possibly_incomplete = covered < degree;
    report.closed_points = closed;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::parse_poly;

    fn fp(p: u64, n: usize, s: &str) -> MPoly<PrimeField> {
        parse_poly(&PrimeField::new(p).unwrap(), n, s).unwrap()
    }

    #[test]
    fn subscheme_generators() {
        let gens = singular_subscheme(&fp(7, 3, "x0*x1*x2"));
        let expect: Vec<_> =
            ["x0*x1*x2", "x1*x2", "x0*x2", "x0*x1"].iter().map(|s| fp(7, 3, s)).collect();
        assert_eq!(gens, expect);
    }

    #[test]
    fn three_singular_points() {
        let f = fp(7, 3, "x2*(x1 - x0)*(x1 - 2*x0)");
        let rep = analyze_singular_locus(&f, &LocusOptions::default()).unwrap();
        assert_eq!(rep.dimension, 0);
        assert_eq!(rep.r, Some(3));
        let pts: Vec<Vec<u64>> =
            rep.closed_points.iter().map(|c| c.point.coords().iter().map(|x| x[0]).collect()).collect();
        assert_eq!(pts, vec![vec![0, 0, 1], vec![1, 1, 0], vec![1, 2, 0]]);
        assert!(!rep.points_possibly_incomplete);
        assert_eq!(rep.span_dim, Some(2));
    }

    #[test]
    fn smooth_locus_is_empty() {
        let rep = analyze_singular_locus(&fp(7, 3, "x0^3 + x1^3 + x2^3"), &LocusOptions::default()).unwrap();
        assert_eq!(rep.dimension, -1);
        assert_eq!(rep.r, Some(0));
    }

    #[test]
    fn cusp_is_non_reduced() {
        let rep = analyze_singular_locus(&fp(7, 3, "x0^2*x2 + x1^3"), &LocusOptions::default()).unwrap();
        assert_eq!(rep.dimension, 0);
        assert_eq!(rep.r, Some(1));
        assert!(rep.degree.unwrap() > 1);
        assert_eq!(rep.closed_points[0].multiplicity, rep.degree.unwrap());
    }

    #[test]
    fn point_at_cone_vertex() {
        // two conjugate lines over F_49 meeting at a rational point
        let rep = analyze_singular_locus(&fp(7, 3, "x0^2 + x1^2"), &LocusOptions::default()).unwrap();
        assert_eq!(rep.dimension, 0);
        assert_eq!(rep.r, Some(1));
        assert_eq!(rep.closed_points[0].degree, 1);
        assert_eq!(rep.closed_points[0].multiplicity, 1);
    }

    #[test]
    fn irrational_pair_of_points() {
        // conjugate lines meet at (0:0:1) and cross x2 = 0 at a conjugate pair
        let f = fp(7, 3, "(x0^2 + x1^2)*x2");
        let rep = analyze_singular_locus(&f, &LocusOptions::default()).unwrap();
        assert_eq!(rep.dimension, 0);
        let degs: Vec<usize> = rep.closed_points.iter().map(|c| c.degree).collect();
        assert_eq!(degs, vec![1, 2]);
        assert_eq!(rep.r, Some(2));
        assert_eq!(rep.degree, Some(3));
        assert!(!rep.points_possibly_incomplete);
        assert_eq!(rep.span_dim, Some(2));
    }

    #[test]
    fn line_detection() {
        let f = fp(5, 3, "x0^2*x1");
        let rep = analyze_singular_locus(&f, &LocusOptions::default()).unwrap();
        assert_eq!(rep.dimension, 1);
        assert_eq!(rep.contains_line, Some(true));
        let double_conic = fp(5, 3, "(x0^2 + x1^2 + 2*x2^2)^2");
        let rep = analyze_singular_locus(&double_conic, &LocusOptions::default()).unwrap();
        assert_eq!(rep.dimension, 1);
        assert_eq!(rep.contains_line, None);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(projective_points(3, 3, 1000).unwrap().len(), 13);
        assert!(projective_points(101, 4, 1000).is_none());
    }
}
