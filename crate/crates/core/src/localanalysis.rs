//! Local analysis at singular points of the special fiber, and over the
//! coefficient space of quadrics.

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::discriminant::{discriminant_value, DiscOptions};
use crate::error::{Error, Result};
use crate::linalg::{det_bareiss, kernel, rank, Matrix};
use crate::mpoly::{monomials_of_degree, MPoly, Monomial, PointProj};
use crate::rings::{Dvr, Field, PrimeField, Ring, Scalars, Valuation};
use crate::specialfiber::{
    analyze_singular_locus, local_length, singular_subscheme, LocusOptions, SingularLocusReport,
};

type Integers = Scalars<BigInt>;

/// Reduction modulo the maximal ideal.
pub fn reduce_mod_pi<R: Dvr>(f: &MPoly<R>) -> MPoly<PrimeField> {
    let ring = f.ring();
    let k = ring.residue_field();
    f.map_coeffs(&k, |c| ring.residue(c))
}

/// Coefficient-wise canonical lift.
pub fn canonical_lift<R: Dvr>(fbar: &MPoly<PrimeField>, ring: &R) -> MPoly<R> {
    fbar.map_coeffs(ring, |c| ring.lift(*c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DoublePointKind {
    Nondegenerate,
    OrdinaryChar2Odd,
    NotDouble,
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoublePointClass {
    pub kind: DoublePointKind,
    pub hessian_rank: usize,
    pub local_multiplicity: u64,
}

/// Matrix of second partials of a quadratic form (constant entries).
fn hessian_of_quadric<F: Ring>(q: &MPoly<F>) -> Matrix<F::Elem> {
    let n = q.nvars();
    (0..n)
        .map(|i| {
            let di = q.partial_derivative(i).expect("index");
            (0..n).map(|j| di.partial_derivative(j).expect("index").constant_term()).collect()
        })
        .collect()
}

fn is_singular_point<F: Field>(f: &MPoly<F>, q: &PointProj<F::Elem>) -> Result<bool> {
    let field = f.ring();
    for g in singular_subscheme(f) {
        if !field.is_zero(&g.evaluate(q.coords())?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Classifies a singular point `q` of the hypersurface `f = 0`.
pub fn classify_double_point<F: Field>(f: &MPoly<F>, q: &PointProj<F::Elem>) -> Result<DoublePointClass> {
    if q.coords().len() != f.nvars() {
        return Err(Error::DimensionMismatch { expected: f.nvars(), got: q.coords().len() });
    }
    if !is_singular_point(f, q)? {
        return Err(Error::NotSingular);
    }
    let field = f.ring();
    let n = f.nvars() - 1;
    let h = f.dehomogenize_at(q.chart(field), q.coords())?;
    let q2 = h.homogeneous_part(2);
    let hess = hessian_of_quadric(&q2);
    let hessian_rank = rank(field, &hess);
    let local_multiplicity = local_length(&singular_subscheme(f), q)?;
    let kind = if q2.is_zero() {
        DoublePointKind::NotDouble
    } else if field.characteristic() != 2 {
        if hessian_rank == n {
            DoublePointKind::Nondegenerate
        } else {
            DoublePointKind::Degenerate
        }
    } else if local_multiplicity == 1 {
        DoublePointKind::Nondegenerate
    } else if n % 2 == 1 && local_multiplicity == 2 && hessian_rank == n - 1 {
        // radical of the polar form must carry a nonzero value of q2
        let rad = kernel(field, &hess, n);
        let residual = rad.first().map(|w| q2.evaluate(w)).transpose()?;
        match residual {
            Some(v) if !field.is_zero(&v) => DoublePointKind::OrdinaryChar2Odd,
            _ => DoublePointKind::Degenerate,
        }
    } else {
        DoublePointKind::Degenerate
    };
    Ok(DoublePointClass { kind, hessian_rank, local_multiplicity })
}

/// Regularity of the total space `f = 0` over `R` at a rational singular
/// point `q` of the special fiber: with `f` expanded around a lift of `q`,
/// the linear coefficients lie in `(π)` and the point is regular exactly when
/// the constant term has valuation 1.
pub fn is_regular_at<R: Dvr>(f: &MPoly<R>, q: &[u64]) -> Result<bool> {
    let ring = f.ring();
    let fbar = reduce_mod_pi(f);
    let k = fbar.ring();
    let qp = PointProj::new(k, q.iter().map(|c| c % k.p()).collect())?;
    if !is_singular_point(&fbar, &qp)? {
        return Err(Error::NotSingular);
    }
    let lift: Vec<R::Elem> = qp.coords().iter().map(|c| ring.lift(*c)).collect();
    let c0 = f.evaluate(&lift)?;
    Ok(ring.valuation(&c0) == Valuation::Finite(1))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Theorem11Report {
    pub valuation: Valuation,
    pub sing_report: SingularLocusReport,
    /// `None` when undetermined.
    pub regular: Option<bool>,
    pub nondeg_single_point: bool,
    /// Classification of the singular point when there is exactly one.
    pub point_class: Option<DoublePointClass>,
    /// `None` when `regular` is needed but undetermined.
    pub equivalence_holds: Option<bool>,
    /// In characteristic 2 with `n` odd: whether `v(Δ) ≠ 1`.
    pub char2_obstruction_ok: Option<bool>,
}

/// Checks both directions of the criterion "`v(Δ(f)) = 1` if and only if the
/// total space is regular and the special fiber has a single nondegenerate
/// double point" on one form.
pub fn check_theorem_1_1<R: Dvr>(
    f: &MPoly<R>,
    disc: &DiscOptions,
    locus: &LocusOptions,
) -> Result<Theorem11Report> {
    let ring = f.ring();
    let n = f.nvars() - 1;
    let valuation = ring.valuation(&discriminant_value(f, disc)?);
    let fbar = reduce_mod_pi(f);
    if fbar.is_zero() {
        return Err(Error::Precondition("the special fiber is not a hypersurface".into()));
    }
    let sing = analyze_singular_locus(&fbar, locus)?;
    let nondeg_single_point = sing.dimension == 0 && sing.degree == Some(1);
    let mut point_class = None;
    if nondeg_single_point {
        let cp = &sing.closed_points[0];
        let pt: Vec<u64> = cp.point.coords().iter().map(|c| c[0]).collect();
        let pt = PointProj::new(fbar.ring(), pt)?;
        let class = classify_double_point(&fbar, &pt)?;
        if class.kind != DoublePointKind::Nondegenerate {
            return Err(Error::Precondition(format!(
                "reduced isolated point classified as {:?}",
                class.kind
            )));
        }
        point_class = Some(class);
    }

    let regular = if valuation.is_infinite() {
        // singular generic fiber; decisive only in characteristic 0
        (ring.characteristic() == 0).then_some(false)
    } else if sing.dimension < 0 {
        Some(true)
    } else if sing.dimension == 0 {
        let mut all = Some(true);
        for cp in &sing.closed_points {
            if cp.degree == 1 {
                let pt: Vec<u64> = cp.point.coords().iter().map(|c| c[0]).collect();
                if !is_regular_at(f, &pt)? {
                    all = Some(false);
                    break;
                }
            } else {
                all = None;
            }
        }
        if sing.points_possibly_incomplete && all == Some(true) {
            all = None;
        }
        all
    } else {
        None
    };

    let lhs = valuation == Valuation::Finite(1);
    let rhs = if nondeg_single_point { regular } else { Some(false) };
    let equivalence_holds = rhs.map(|r| r == lhs);
    let char2_obstruction_ok = (ring.prime() == 2 && n % 2 == 1).then_some(!lhs);
    Ok(Theorem11Report {
        valuation,
        sing_report: sing,
        regular,
        nondeg_single_point,
        point_class,
        equivalence_holds,
        char2_obstruction_ok,
    })
}

/// Orthogonal splitting of a quadratic form over a DVR into blocks of rank
/// one (`d z²`) and two (`a x² + b x y + c y²`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadBlockDecomposition<E> {
    pub rank1_blocks: Vec<E>,
    pub rank2_blocks: Vec<(E, E, E)>,
    /// Columns are the new basis: substituting `x = T y` yields the block form
    /// with the rank-two pairs first.
    pub transform: Matrix<E>,
}

impl<E: Clone> QuadBlockDecomposition<E> {
    /// The block form as a polynomial in the new variables.
    pub fn block_form<R: Ring<Elem = E>>(&self, ring: &R) -> MPoly<R> {
        let nv = self.transform.len();
        let mut terms = Vec::new();
        let e = |idx: &[(usize, u16)]| {
            let mut v = vec![0u16; nv];
            for &(i, k) in idx {
                v[i] += k;
            }
            Monomial::new(&v)
        };
        for (k, (a, b, c)) in self.rank2_blocks.iter().enumerate() {
            let (x, y) = (2 * k, 2 * k + 1);
            terms.push((e(&[(x, 2)]), a.clone()));
            terms.push((e(&[(x, 1), (y, 1)]), b.clone()));
            terms.push((e(&[(y, 2)]), c.clone()));
        }
        let off = 2 * self.rank2_blocks.len();
        for (j, d) in self.rank1_blocks.iter().enumerate() {
            terms.push((e(&[(off + j, 2)]), d.clone()));
        }
        MPoly::from_terms(ring, nv, terms)
    }
}

pub fn decompose_quadratic_form<R: Dvr>(q: &MPoly<R>) -> Result<QuadBlockDecomposition<R::Elem>> {
    let ring = q.ring();
    let nv = q.nvars();
    if !q.is_zero() && q.homogeneous_degree() != Some(2) {
        return Err(Error::InvalidInput("not a quadratic form".into()));
    }
    let qv = |v: &[R::Elem]| q.evaluate(v).expect("arity");
    let beta = |u: &[R::Elem], v: &[R::Elem]| {
        let s: Vec<R::Elem> = u.iter().zip(v).map(|(a, b)| ring.add(a, b)).collect();
        ring.sub(&ring.sub(&qv(&s), &qv(u)), &qv(v))
    };
    let axpy = |w: &[R::Elem], s: &R::Elem, e: &[R::Elem]| -> Vec<R::Elem> {
        w.iter().zip(e).map(|(a, b)| ring.sub(a, &ring.mul(s, b))).collect()
    };
    let mut rest: Vec<Vec<R::Elem>> = (0..nv)
        .map(|i| (0..nv).map(|j| if i == j { ring.one() } else { ring.zero() }).collect())
        .collect();
    let mut pairs: Vec<(Vec<R::Elem>, Vec<R::Elem>)> = Vec::new();
    let mut singles: Vec<Vec<R::Elem>> = Vec::new();
    while !rest.is_empty() {
        let m = rest.len();
        let mut best: Option<(Valuation, usize, usize)> = None;
        for i in 0..m {
            for j in i..m {
                let v = ring.valuation(&beta(&rest[i], &rest[j]));
                // prefer a diagonal entry at equal valuation
                let better = match best {
                    None => true,
                    Some((bv, bi, bj)) => v < bv || (v == bv && i == j && bi != bj),
                };
                if better {
                    best = Some((v, i, j));
                }
            }
        }
        let (v, i, j) = best.expect("nonempty");
        if v.is_infinite() {
            // β vanishes on the remainder: the form is diagonal there
            singles.append(&mut rest);
            break;
        }
        if i == j {
            let e = rest.remove(i);
            let bee = beta(&e, &e);
            for w in rest.iter_mut() {
                let s = ring.div_exact(&beta(w, &e), &bee).expect("minimal valuation");
                *w = axpy(w, &s, &e);
            }
            singles.push(e);
        } else {
            let f2 = rest.remove(j);
            let e = rest.remove(i);
            let (bee, bef, bff) = (beta(&e, &e), beta(&e, &f2), beta(&f2, &f2));
            let det = ring.sub(&ring.mul(&bee, &bff), &ring.mul(&bef, &bef));
            for w in rest.iter_mut() {
                let (we, wf) = (beta(w, &e), beta(w, &f2));
                // [s, t] = G^{-1} [we, wf]
                let s_num = ring.sub(&ring.mul(&bff, &we), &ring.mul(&bef, &wf));
                let t_num = ring.sub(&ring.mul(&bee, &wf), &ring.mul(&bef, &we));
                let s = ring.div_exact(&s_num, &det).expect("unit-scaled Gram matrix");
                let t = ring.div_exact(&t_num, &det).expect("unit-scaled Gram matrix");
                *w = axpy(&axpy(w, &s, &e), &t, &f2);
            }
            pairs.push((e, f2));
        }
    }
    let rank2_blocks = pairs.iter().map(|(e, f2)| (qv(e), beta(e, f2), qv(f2))).collect();
    let rank1_blocks = singles.iter().map(|w| qv(w)).collect();
    let mut cols: Vec<Vec<R::Elem>> = Vec::new();
    for (e, f2) in pairs {
        cols.push(e);
        cols.push(f2);
    }
    cols.extend(singles);
    let transform: Matrix<R::Elem> =
        (0..nv).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    let dec = QuadBlockDecomposition { rank1_blocks, rank2_blocks, transform };
    if q.substitute_linear(&dec.transform)? != dec.block_form(ring) {
        return Err(Error::Precondition("block decomposition does not reconstruct the form".into()));
    }
    let det = det_bareiss(ring, dec.transform.clone());
    if ring.valuation(&det) != Valuation::Finite(0) {
        return Err(Error::Precondition("transform is not unimodular".into()));
    }
    Ok(dec)
}

/// Determinant of the matrix of second partials of a quadric, halved when
/// the number of variables is odd: the discriminant up to sign.
pub fn quadric_discriminant<R: Dvr>(q: &MPoly<R>) -> Result<R::Elem> {
    let ring = q.ring();
    let det = det_bareiss(ring, hessian_of_quadric(q));
    if q.nvars() % 2 == 1 {
        ring.div_exact(&det, &ring.from_i64(2)).ok_or(Error::NonIntegralNormalization)
    } else {
        Ok(det)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadricBound {
    pub valuation: Valuation,
    pub sing_dim: i64,
    pub bound_ok: bool,
}

/// Compares `v(Δ)` with `dim (H_k)_sing + 1` for a quadric.
pub fn quadric_valuation_bound_check<R: Dvr>(q: &MPoly<R>, locus: &LocusOptions) -> Result<QuadricBound> {
    let valuation = q.ring().valuation(&quadric_discriminant(q)?);
    let qbar = reduce_mod_pi(q);
    if qbar.is_zero() {
        return Err(Error::Precondition("quadric vanishes modulo the uniformizer".into()));
    }
    let sing_dim = analyze_singular_locus(&qbar, locus)?.dimension;
    let bound_ok = if sing_dim < 0 {
        valuation == Valuation::Finite(0)
    } else {
        valuation >= Valuation::Finite(sing_dim as u64 + 1)
    };
    Ok(QuadricBound { valuation, sing_dim, bound_ok })
}

/// Least valuation of a coefficient.
pub fn gauss_valuation<R: Dvr>(delta: &MPoly<R>) -> Result<u64> {
    let ring = delta.ring();
    delta
        .terms()
        .map(|(_, c)| ring.valuation(c).finite().expect("stored coefficients are nonzero"))
        .min()
        .ok_or(Error::ZeroPolynomial)
}

fn det_laplace(m: &[Vec<MPoly<Integers>>], nv: usize) -> MPoly<Integers> {
    let z = Integers::new();
    if m.is_empty() {
        return MPoly::one(&z, nv);
    }
    let mut acc = MPoly::zero(&z, nv);
    for j in 0..m.len() {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<MPoly<Integers>>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let t = m[0][j].mul(&det_laplace(&minor, nv));
        acc = if j % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
    }
    acc
}

/// Δ of the generic quadric in `nvars` variables as an integer polynomial in
/// its coefficients, indexed like [`monomials_of_degree`]`(nvars, 2)`.
pub fn symbolic_quadric_discriminant(nvars: usize) -> Result<MPoly<Integers>> {
    if nvars > 5 {
        return Err(Error::SizeLimit("symbolic discriminant only for at most 5 variables".into()));
    }
    let z = Integers::new();
    let mons = monomials_of_degree(nvars, 2);
    let nc = mons.len();
    let coef = |i: usize, j: usize| {
        let mut e = vec![0u16; nvars];
        e[i] += 1;
        e[j] += 1;
        let pos = mons.iter().position(|m| m.exps() == e.as_slice()).expect("monomial");
        MPoly::var(&z, nc, pos)
    };
    let m: Vec<Vec<MPoly<Integers>>> = (0..nvars)
        .map(|i| {
            (0..nvars)
                .map(|j| if i == j { coef(i, i).scale(&BigInt::from(2)) } else { coef(i, j) })
                .collect()
        })
        .collect();
    let det = det_laplace(&m, nc);
    if nvars % 2 == 1 {
        let two = BigInt::from(2);
        Ok(det.map_coeffs(&z, |c| c / &two))
    } else {
        Ok(det)
    }
}

/// Exact `vmin` of the quadric discriminant at residue coefficients `a`:
/// the Gauss valuation of `Δ(b + πx)` for the canonical lift `b`.
pub fn vmin_exact_quadric<R: Dvr>(a: &MPoly<PrimeField>, ring: &R) -> Result<u64> {
    let nvars = a.nvars();
    if a.ring().p() != ring.prime() {
        return Err(Error::RingMismatch(a.ring().tag(), ring.tag()));
    }
    if !a.is_zero() && a.homogeneous_degree() != Some(2) {
        return Err(Error::InvalidInput("not a quadratic form".into()));
    }
    let delta = symbolic_quadric_discriminant(nvars)?;
    let delta_r = delta.map_coeffs(ring, |c| ring.from_int(c));
    let b: Vec<R::Elem> = a.coefficient_vector(2).iter().map(|c| ring.lift(*c)).collect();
    let shifted = delta_r.taylor_shift(&b)?;
    shifted
        .terms()
        .map(|(m, c)| ring.valuation(c).finite().expect("nonzero") + m.degree() as u64)
        .min()
        .ok_or(Error::ZeroPolynomial)
}

/// Whether `vmin ≥ 2` at the quadric `a`, decided without the Gauss
/// valuation: `a` is a singular point of `Δ mod π` and its canonical lift `b`
/// has `v(Δ(b)) ≥ 2`.
pub fn vmin_at_least_two_by_lifting<R: Dvr>(a: &MPoly<PrimeField>, ring: &R) -> Result<bool> {
    let delta = symbolic_quadric_discriminant(a.nvars())?;
    let k = a.ring();
    let dbar = delta.map_coeffs(k, |c| k.from_int(c));
    let av = a.coefficient_vector(2);
    if !k.is_zero(&dbar.evaluate(&av)?) {
        return Ok(false);
    }
    for g in dbar.gradient() {
        if !k.is_zero(&g.evaluate(&av)?) {
            return Ok(false);
        }
    }
    let b: Vec<R::Elem> = av.iter().map(|c| ring.lift(*c)).collect();
    let v = ring.valuation(&delta.map_coeffs(ring, |c| ring.from_int(c)).evaluate(&b)?);
    Ok(v >= Valuation::Finite(2))
}

/// Order of vanishing of `f` at the affine point `a`.
pub fn multiplicity<F: Ring>(f: &MPoly<F>, a: &[F::Elem]) -> Result<u32> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(f.taylor_shift(a)?.order().expect("nonzero"))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VminSample {
    pub bound: Valuation,
    pub trials: usize,
    pub values: Vec<Valuation>,
}

/// Upper bound for `vmin_Δ` at `fbar`: the least `v(Δ)` over random lifts
/// `canonical lift + π·(uniform residues)`.
pub fn vmin_sample<R: Dvr>(
    fbar: &MPoly<PrimeField>,
    ring: &R,
    trials: usize,
    seed: u64,
    disc: &DiscOptions,
) -> Result<VminSample> {
    let d = fbar.homogeneous_degree().ok_or(Error::ZeroPolynomial)?;
    let nvars = fbar.nvars();
    let base = canonical_lift(fbar, ring);
    let mons = monomials_of_degree(nvars, d);
    let pi = ring.uniformizer();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(trials);
    for _ in 0..trials.max(1) {
        let pert = mons.iter().map(|m| (m.clone(), ring.mul(&pi, &ring.random_element(&mut rng, 2))));
        let f = base.add(&MPoly::from_terms(ring, nvars, pert));
        values.push(ring.valuation(&discriminant_value(&f, disc)?));
    }
    let bound = *values.iter().min().expect("at least one trial");
    Ok(VminSample { bound, trials: values.len(), values })
}
