//! Example families: forms with prescribed singular points, the line-singular
//! auxiliary family, quadric normal forms and Weierstrass cubics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::discriminant::{discriminant_value, DiscOptions};
use crate::error::{Error, Result};
use crate::linalg::{kernel, Matrix};
use crate::mpoly::{monomials_of_degree, MPoly, Monomial, PointProj};
use crate::rings::{Field, PrimeField, Ring};
use crate::specialfiber::{analyze_singular_locus, LocusOptions, SingularLocusReport};

/// Linear conditions on the coefficients of a degree-`d` form (ordered as
/// [`monomials_of_degree`]) for every given point to be singular.
#[derive(Clone, Debug)]
pub struct ConstraintSpace<F: Field> {
    pub points: Vec<PointProj<F::Elem>>,
    pub degree: u32,
    pub matrix: Matrix<F::Elem>,
    pub kernel_dim: usize,
    pub kernel: Vec<Vec<F::Elem>>,
}

impl<F: Field> ConstraintSpace<F> {
    /// Number of coefficients of a form of this degree.
    pub fn ambient_dim(&self) -> usize {
        self.matrix.first().map_or(0, |r| r.len())
    }

    /// Expected nullity when the conditions are independent.
    pub fn expected_dim(&self) -> i64 {
        let nvars = self.points.first().map_or(0, |p| p.dim() + 1);
        self.ambient_dim() as i64 - (self.points.len() * nvars) as i64
    }
}

/// One row per point for `f(P)` and one per affine partial in the chart of
/// `P`; these are the conditions `f ∈ m_P²`.
fn point_rows<F: Field>(field: &F, mons: &[Monomial], p: &PointProj<F::Elem>) -> Matrix<F::Elem> {
    let nv = p.coords().len();
    let chart = p.chart(field);
    let monos: Vec<MPoly<F>> =
        mons.iter().map(|m| MPoly::from_terms(field, nv, [(m.clone(), field.one())])).collect();
    let mut rows = vec![monos.iter().map(|m| m.evaluate(p.coords()).expect("arity")).collect()];
    for j in (0..nv).filter(|&j| j != chart) {
        rows.push(
            monos
                .iter()
                .map(|m| m.partial_derivative(j).expect("index").evaluate(p.coords()).expect("arity"))
                .collect(),
        );
    }
    rows
}

pub fn singularity_constraint_space<F: Field>(
    field: &F,
    points: &[PointProj<F::Elem>],
    d: u32,
) -> Result<ConstraintSpace<F>> {
    let nv = points.first().ok_or_else(|| Error::InvalidInput("no points".into()))?.coords().len();
    if nv < 3 {
        return Err(Error::InvalidInput("need at least 3 variables".into()));
    }
    for (i, p) in points.iter().enumerate() {
        if p.coords().len() != nv {
            return Err(Error::DimensionMismatch { expected: nv, got: p.coords().len() });
        }
        if points[..i].contains(p) {
            return Err(Error::InvalidInput(format!("duplicate point {i}")));
        }
    }
    let mons = monomials_of_degree(nv, d);
    let matrix: Matrix<F::Elem> = points.iter().flat_map(|p| point_rows(field, &mons, p)).collect();
    let kernel = kernel(field, &matrix, mons.len());
    let space = ConstraintSpace {
        points: points.to_vec(),
        degree: d,
        matrix,
        kernel_dim: kernel.len(),
        kernel,
    };
    if d + 1 >= 2 * points.len() as u32 && space.kernel_dim as i64 != space.expected_dim() {
        return Err(Error::Precondition(format!(
            "nullity {} differs from {} although d >= 2r-1",
            space.kernel_dim,
            space.expected_dim()
        )));
    }
    Ok(space)
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub form: MPoly<PrimeField>,
    pub report: SingularLocusReport,
    pub attempts: usize,
}

/// Random search in the constraint space for a form whose singular locus is
/// exactly the given rational points.
pub fn isolated_singularities_example(
    field: &PrimeField,
    points: &[PointProj<u64>],
    d: u32,
    seed: u64,
    budget: usize,
) -> Result<Witness> {
    let r = points.len() as u32;
    if r == 0 || 2 * r + 1 > d {
        return Err(Error::Precondition(format!("need 1 <= r <= (d-1)/2, got r = {r}, d = {d}")));
    }
    let space = singularity_constraint_space(field, points, d)?;
    let nv = points[0].coords().len();
    let opts = LocusOptions { m_max: 2, ..LocusOptions::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=budget {
        let mut coeffs = vec![0u64; space.ambient_dim()];
        for b in &space.kernel {
            let s = rng.gen_range(0..field.p());
            for (c, x) in coeffs.iter_mut().zip(b) {
                *c = field.add(c, &field.mul(&s, x));
            }
        }
        let f = MPoly::from_coefficient_vector(field, nv, d, &coeffs);
        if f.is_zero() {
            continue;
        }
        let Ok(report) = analyze_singular_locus(&f, &opts) else { continue };
        let exact = report.dimension == 0
            && !report.points_possibly_incomplete
            && report.closed_points.len() == points.len()
            && report.closed_points.iter().all(|c| {
                c.degree == 1 && {
                    let q: Vec<u64> = c.point.coords().iter().map(|e| e[0]).collect();
                    points.iter().any(|p| p.coords() == q.as_slice())
                }
            });
        if exact {
            return Ok(Witness { form: f, report, attempts: attempt });
        }
    }
    Err(Error::NotFound)
}

/// `x2·∏(x1 - c_i x0) + g(x3, …, xn)`, singular at the points `(1 : c_i : 0)`
/// of the line `x2 = … = xn = 0`. `g` is a form in `n - 2` variables, or
/// `None` when `n = 2`.
pub fn line_singular_family<R: Ring>(
    ring: &R,
    n: usize,
    d: u32,
    cs: &[R::Elem],
    g: Option<&MPoly<R>>,
) -> Result<MPoly<R>> {
    if n < 2 || d < 2 {
        return Err(Error::InvalidInput("need n, d >= 2".into()));
    }
    if cs.len() != d as usize - 1 {
        return Err(Error::InvalidInput(format!("expected {} values c_i, got {}", d - 1, cs.len())));
    }
    for (i, c) in cs.iter().enumerate() {
        if cs[..i].contains(c) {
            return Err(Error::InvalidInput("repeated c_i".into()));
        }
    }
    let nv = n + 1;
    let mut h = MPoly::var(ring, nv, 2);
    for c in cs {
        let l = MPoly::var(ring, nv, 1).sub(&MPoly::var(ring, nv, 0).scale(c));
        h = h.mul(&l);
    }
    match (n, g) {
        (2, None) => Ok(h),
        (2, Some(_)) => Err(Error::InvalidInput("g must be absent when n = 2".into())),
        (_, None) => Err(Error::InvalidInput("g is required when n >= 3".into())),
        (_, Some(g)) => {
            if g.nvars() != n - 2 || g.homogeneous_degree() != Some(d) {
                return Err(Error::InvalidInput(format!("g must be a form of degree {d} in {} variables", n - 2)));
            }
            let mut lifted = g.clone();
            for _ in 0..3 {
                lifted = lifted.insert_variable(0);
            }
            Ok(h.add(&lifted))
        }
    }
}

/// Random form of degree `d` in `nvars` variables with nonzero discriminant.
pub fn random_smooth_form(field: &PrimeField, nvars: usize, d: u32, seed: u64, budget: usize) -> Result<MPoly<PrimeField>> {
    if nvars == 1 {
        return Ok(MPoly::var(field, 1, 0).pow(d));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = monomials_of_degree(nvars, d).len();
    for _ in 0..budget {
        let cs: Vec<u64> = (0..n).map(|_| rng.gen_range(0..field.p())).collect();
        let f = MPoly::from_coefficient_vector(field, nvars, d, &cs);
        if matches!(discriminant_value(&f, &DiscOptions::default()), Ok(v) if v != 0) {
            return Ok(f);
        }
    }
    Err(Error::NotFound)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadricKind {
    /// `x0 x1 + x2 x3 + …`, with a final `x_n²` when `n` is even.
    SmoothSplit,
    /// `x0² + … + xn²`; needs 2 invertible.
    SmoothDiagonal,
    /// Cone over `x1 x2 + … + x_{n-2} x_{n-1} + x_n²` with vertex
    /// `(1 : 0 : … : 0)`, for `n` odd.
    Char2OddOdp,
}

impl std::str::FromStr for QuadricKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "split" | "smooth-split" => Ok(QuadricKind::SmoothSplit),
            "diagonal" | "smooth-diagonal" => Ok(QuadricKind::SmoothDiagonal),
            "odp" | "char2-odd-odp" => Ok(QuadricKind::Char2OddOdp),
            _ => Err(Error::InvalidInput(format!("unknown quadric kind {s:?}"))),
        }
    }
}

/// Quadric normal form in `n + 1` variables.
pub fn quadric_normal_form<R: Ring>(ring: &R, kind: QuadricKind, n: usize) -> Result<MPoly<R>> {
    let nv = n + 1;
    let x = |i: usize| MPoly::var(ring, nv, i);
    let mut q = MPoly::zero(ring, nv);
    let pairs = |q: &mut MPoly<R>, from: usize, to: usize| {
        let mut i = from;
        while i < to {
            *q = q.add(&x(i).mul(&x(i + 1)));
            i += 2;
        }
        i
    };
    match kind {
        QuadricKind::SmoothSplit => {
            if n.is_multiple_of(2) {
                pairs(&mut q, 0, n - 1);
                q = q.add(&x(n).pow(2));
            } else {
                pairs(&mut q, 0, n);
            }
        }
        QuadricKind::SmoothDiagonal => {
            let half = num_rational::BigRational::new(1.into(), 2.into());
            if ring.from_rational(&half).is_none() {
                return Err(Error::Precondition("diagonal normal form needs 2 invertible".into()));
            }
            for i in 0..nv {
                q = q.add(&x(i).pow(2));
            }
        }
        QuadricKind::Char2OddOdp => {
            if n.is_multiple_of(2) || n < 1 {
                return Err(Error::Precondition("ordinary double point form needs n odd".into()));
            }
            if n > 1 {
                pairs(&mut q, 1, n - 1);
            }
            q = q.add(&x(n).pow(2));
        }
    }
    Ok(q)
}

/// `y²z + a1 xyz + a3 yz² - x³ - a2 x²z - a4 xz² - a6 z³` in `(x, y, z)`,
/// together with its classical discriminant.
pub fn weierstrass_cubic<R: Ring>(ring: &R, a: [&R::Elem; 5]) -> (MPoly<R>, R::Elem) {
    let [a1, a2, a3, a4, a6] = a;
    let m = |e: [u16; 3]| Monomial::new(&e);
    let f = MPoly::from_terms(
        ring,
        3,
        [
            (m([0, 2, 1]), ring.one()),
            (m([1, 1, 1]), a1.clone()),
            (m([0, 1, 2]), a3.clone()),
            (m([3, 0, 0]), ring.neg(&ring.one())),
            (m([2, 0, 1]), ring.neg(a2)),
            (m([1, 0, 2]), ring.neg(a4)),
            (m([0, 0, 3]), ring.neg(a6)),
        ],
    );
    let k = |n: i64| ring.from_i64(n);
    let mul = |x: &R::Elem, y: &R::Elem| ring.mul(x, y);
    let b2 = ring.add(&mul(a1, a1), &mul(&k(4), a2));
    let b4 = ring.add(&mul(&k(2), a4), &mul(a1, a3));
    let b6 = ring.add(&mul(a3, a3), &mul(&k(4), a6));
    let b8 = [
        mul(&mul(a1, a1), a6),
        mul(&k(4), &mul(a2, a6)),
        ring.neg(&mul(&mul(a1, a3), a4)),
        mul(a2, &mul(a3, a3)),
        ring.neg(&mul(a4, a4)),
    ]
    .iter()
    .fold(ring.zero(), |s, t| ring.add(&s, t));
    let disc = [
        ring.neg(&mul(&mul(&b2, &b2), &b8)),
        mul(&k(-8), &ring.pow(&b4, 3)),
        mul(&k(-27), &mul(&b6, &b6)),
        mul(&k(9), &mul(&b2, &mul(&b4, &b6))),
    ]
    .iter()
    .fold(ring.zero(), |s, t| ring.add(&s, t));
    (f, disc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::parse_poly;
    use crate::rings::{Dvr, PLocal, Valuation};
    use crate::Integers;

    fn pts(p: u64, list: &[&[u64]]) -> Vec<PointProj<u64>> {
        let k = PrimeField::new(p).unwrap();
        list.iter().map(|c| PointProj::new(&k, c.to_vec()).unwrap()).collect()
    }

    #[test]
    fn coordinate_point_constraints() {
        let k = PrimeField::new(7).unwrap();
        let s = singularity_constraint_space(&k, &pts(7, &[&[1, 0, 0]]), 4).unwrap();
        assert_eq!(s.kernel_dim, 15 - 3);
        // the forced zeros are the coefficients of x0^4, x0^3 x1, x0^3 x2
        let mons = monomials_of_degree(3, 4);
        for b in &s.kernel {
            for (m, c) in mons.iter().zip(b) {
                if m.exps()[0] >= 3 {
                    assert_eq!(*c, 0);
                }
            }
        }
        let two = singularity_constraint_space(&k, &pts(7, &[&[1, 0, 0], &[0, 1, 0]]), 3).unwrap();
        assert_eq!(two.kernel_dim, 10 - 6);
    }

    #[test]
    fn collinear_points_below_bound() {
        // three points on x2 = 0 with d = 4 = 2r - 2
        let k = PrimeField::new(11).unwrap();
        let s = singularity_constraint_space(&k, &pts(11, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]), 4).unwrap();
        assert!(s.kernel_dim as i64 > s.expected_dim());
        assert!(matches!(
            singularity_constraint_space(&k, &pts(11, &[&[1, 0, 0], &[1, 0, 0]]), 3),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn lemma_witnesses() {
        let k = PrimeField::new(101).unwrap();
        let w = isolated_singularities_example(&k, &pts(101, &[&[1, 2, 3], &[0, 1, 5]]), 5, 1, 20).unwrap();
        assert_eq!(w.report.closed_points.len(), 2);
        let w = isolated_singularities_example(&k, &pts(101, &[&[1, 0, 0]]), 3, 2, 20).unwrap();
        assert_eq!(w.report.closed_points.len(), 1);
        assert!(matches!(
            isolated_singularities_example(&k, &pts(101, &[&[1, 0, 0], &[0, 1, 0]]), 4, 0, 5),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn line_family_points() {
        let k = PrimeField::new(7).unwrap();
        let h = line_singular_family(&k, 2, 3, &[1, 2], None).unwrap();
        assert_eq!(h, parse_poly(&k, 3, "x2*(x1 - x0)*(x1 - 2*x0)").unwrap());
        let rep = analyze_singular_locus(&h, &LocusOptions::default()).unwrap();
        let mut got: Vec<Vec<u64>> =
            rep.rational_points().map(|c| c.point.coords().iter().map(|e| e[0]).collect()).collect();
        got.sort();
        assert_eq!(got, vec![vec![0, 0, 1], vec![1, 1, 0], vec![1, 2, 0]]);
        let h4 = line_singular_family(&k, 2, 4, &[1, 2, 3], None).unwrap();
        let rep = analyze_singular_locus(&h4, &LocusOptions::default()).unwrap();
        assert_eq!(rep.dimension, 0);
        assert!(rep.rational_points().filter(|c| c.point.coords()[2][0] == 0).count() >= 3);
        assert!(line_singular_family(&k, 2, 3, &[1, 1], None).is_err());
        let g = random_smooth_form(&k, 1, 3, 0, 1).unwrap();
        let h3 = line_singular_family(&k, 3, 3, &[1, 2], Some(&g)).unwrap();
        assert_eq!(analyze_singular_locus(&h3, &LocusOptions::default()).unwrap().dimension, 0);
    }

    #[test]
    fn quadric_forms() {
        let z = Integers::new();
        let split3 = quadric_normal_form(&z, QuadricKind::SmoothSplit, 3).unwrap();
        assert_eq!(split3, parse_poly(&z, 4, "x0*x1 + x2*x3").unwrap());
        let split2 = quadric_normal_form(&z, QuadricKind::SmoothSplit, 2).unwrap();
        assert_eq!(split2, parse_poly(&z, 3, "x0*x1 + x2^2").unwrap());
        let odp = quadric_normal_form(&z, QuadricKind::Char2OddOdp, 3).unwrap();
        assert_eq!(odp, parse_poly(&z, 4, "x1*x2 + x3^2").unwrap());
        assert!(quadric_normal_form(&z, QuadricKind::Char2OddOdp, 2).is_err());
        assert!(quadric_normal_form(&z, QuadricKind::SmoothDiagonal, 2).is_err());
        let r = PLocal::new(3).unwrap();
        assert!(quadric_normal_form(&r, QuadricKind::SmoothDiagonal, 2).is_ok());
    }

    #[test]
    fn weierstrass_examples() {
        let r = PLocal::new(5).unwrap();
        let e = |n: i64| r.from_i64(n);
        let (_, d) = weierstrass_cubic(&r, [&e(0), &e(0), &e(0), &e(0), &e(5)]);
        assert_eq!(d, e(-432 * 25));
        let (_, d) = weierstrass_cubic(&r, [&e(0), &e(1), &e(0), &e(0), &e(5)]);
        assert_eq!(d, e(-16 * 5 * (4 + 27 * 5)));
        assert_eq!(r.valuation(&d), Valuation::Finite(1));
        let (f, d) = weierstrass_cubic(&r, [&e(0), &e(0), &e(0), &e(-1), &e(0)]);
        assert_eq!(d, e(64));
        assert_eq!(f, parse_poly(&r, 3, "x1^2*x2 - x0^3 + x0*x2^2").unwrap());
    }
}
