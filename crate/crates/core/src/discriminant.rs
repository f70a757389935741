//! Discriminants of homogeneous forms through Macaulay's resultant of the
//! partial derivatives.
//!
//! For `f` of degree `d` in `n + 1` variables the value returned is
//! `Res(∂f/∂x_0, …, ∂f/∂x_n) / d^a` with `a = ((d−1)^{n+1} − (−1)^{n+1}) / d`,
//! which is an integer polynomial in the coefficients of `f`, well defined up
//! to sign.

use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{det_bareiss, Matrix};
use crate::mpoly::{binomial, monomials_of_degree, MPoly, Monomial};
use crate::rings::{Domain, Dvr, Ring, Scalars, Valuation};

/// Default bound on the number of rows of the Macaulay matrix.
pub const DEFAULT_MAX_MATRIX: usize = 2000;

/// Retries with a random unimodular change of variables when the extraneous
/// minor vanishes.
pub const UNIMODULAR_RETRIES: usize = 8;

type Integers = Scalars<BigInt>;

/// Macaulay's matrix for `n + 1` forms of common degree `e` in `n + 1`
/// variables. Rows and columns are indexed by the monomials of degree
/// `D = (n + 1)(e − 1) + 1`; the row of `x^α` holds `x^α / x_i^e · g_i` for the
/// least `i` with `x_i^e | x^α`.
#[derive(Clone, Debug)]
pub struct MacaulayMatrix<E> {
    pub monomials: Vec<Monomial>,
    pub entries: Matrix<E>,
    /// `true` for monomials divisible by a single `x_i^e`; the others index
    /// the extraneous minor.
    pub reduced: Vec<bool>,
}

impl<E: Clone> MacaulayMatrix<E> {
    pub fn size(&self) -> usize {
        self.monomials.len()
    }

    pub fn extraneous_minor(&self) -> Matrix<E> {
        let idx: Vec<usize> = (0..self.size()).filter(|&i| !self.reduced[i]).collect();
        idx.iter().map(|&r| idx.iter().map(|&c| self.entries[r][c].clone()).collect()).collect()
    }
}

/// Number of rows of the Macaulay matrix for degree-`d` forms in `nvars`
/// variables (forms of degree `d − 1`).
pub fn macaulay_size(nvars: usize, d: u32) -> u64 {
    let e = d as u64 - 1;
    let big_d = nvars as u64 * (e - 1) + 1;
    binomial(big_d + nvars as u64 - 1, nvars as u64 - 1)
}

fn common_degree<R: Ring>(gs: &[MPoly<R>]) -> Result<(usize, u32)> {
    let nvars = gs.len();
    if nvars == 0 {
        return Err(Error::InvalidInput("need at least one form".into()));
    }
    let mut e = None;
    for g in gs {
        if g.nvars() != nvars {
            return Err(Error::DimensionMismatch { expected: nvars, got: g.nvars() });
        }
        if g.is_zero() {
            continue;
        }
        let ge = g
            .homogeneous_degree()
            .ok_or_else(|| Error::InvalidInput("resultant of an inhomogeneous form".into()))?;
        match e {
            None => e = Some(ge),
            Some(x) if x != ge => {
                return Err(Error::InvalidInput(format!("forms of mixed degrees {x} and {ge}")))
            }
            _ => {}
        }
    }
    let e = e.unwrap_or(1);
    if e == 0 {
        return Err(Error::InvalidInput("forms must have degree at least 1".into()));
    }
    Ok((nvars, e))
}

pub fn macaulay_matrix<R: Ring>(gs: &[MPoly<R>]) -> Result<MacaulayMatrix<R::Elem>> {
    let (nvars, e) = common_degree(gs)?;
    let ring = gs[0].ring();
    let big_d = nvars as u32 * (e - 1) + 1;
    let monomials = monomials_of_degree(nvars, big_d);
    let index: HashMap<&Monomial, usize> =
        monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let n = monomials.len();
    let mut entries = vec![vec![ring.zero(); n]; n];
    let mut reduced = Vec::with_capacity(n);
    for (r, alpha) in monomials.iter().enumerate() {
        let big: Vec<usize> =
            (0..nvars).filter(|&i| alpha.exps()[i] as u32 >= e).collect();
        reduced.push(big.len() == 1);
        let i = big[0];
        let mut shift = alpha.clone();
        shift.exps_mut()[i] -= e as u16;
        for (m, c) in gs[i].terms() {
            let col = index[&m.mul(&shift)];
            entries[r][col] = c.clone();
        }
    }
    Ok(MacaulayMatrix { monomials, entries, reduced })
}

/// `Res(g_0, …, g_n) = det(M) / det(M′)`, normalized by `Res(x_i^e) = 1`.
pub fn macaulay_resultant<R: Domain>(gs: &[MPoly<R>]) -> Result<R::Elem> {
    let mm = macaulay_matrix(gs)?;
    let ring = gs[0].ring();
    let minor = det_bareiss(ring, mm.extraneous_minor());
    if ring.is_zero(&minor) {
        return Err(Error::DegenerateMinor);
    }
    let full = det_bareiss(ring, mm.entries);
    ring.div_exact(&full, &minor)
        .ok_or_else(|| Error::InvalidInput("extraneous factor does not divide the determinant".into()))
}

/// Exponent `a` in `Res(∂f) = d^a · Δ(f)`.
pub fn normalization_exponent(n: usize, d: u32) -> u64 {
    let dm1 = BigInt::from(d - 1);
    let sign = if (n + 1).is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let num: BigInt = Pow::pow(&dm1, (n + 1) as u32) - sign;
    let (q, r) = num.div_rem(&BigInt::from(d));
    debug_assert!(r.is_zero());
    u64::try_from(q).expect("normalization exponent fits")
}

/// Degree of Δ as a polynomial in the coefficients of `f`.
pub fn discriminant_degree(n: usize, d: u32) -> u64 {
    (n as u64 + 1) * (d as u64 - 1).pow(n as u32)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscriminantResult<E> {
    pub value: E,
    /// Present when computed over a DVR.
    pub valuation: Option<Valuation>,
    pub degree_d: u32,
    pub n: usize,
}

#[derive(Clone, Debug)]
pub struct DiscOptions {
    pub max_matrix: usize,
    pub retries: usize,
}

impl Default for DiscOptions {
    fn default() -> Self {
        DiscOptions { max_matrix: DEFAULT_MAX_MATRIX, retries: UNIMODULAR_RETRIES }
    }
}

fn check_input<R: Ring>(f: &MPoly<R>, opts: &DiscOptions) -> Result<(usize, u32)> {
    let nvars = f.nvars();
    if nvars < 2 {
        return Err(Error::InvalidInput("need at least two variables".into()));
    }
    let d = match f.homogeneous_degree() {
        Some(d) => d,
        None if f.is_zero() => return Err(Error::ZeroPolynomial),
        None => return Err(Error::InvalidInput("polynomial is not homogeneous".into())),
    };
    if d < 2 {
        return Err(Error::InvalidInput("degree must be at least 2".into()));
    }
    let size = macaulay_size(nvars, d);
    if size > opts.max_matrix as u64 {
        return Err(Error::SizeLimit(format!(
            "Macaulay matrix has {size} rows, limit is {}",
            opts.max_matrix
        )));
    }
    Ok((nvars - 1, d))
}

/// Random matrix of determinant one: a product of elementary shears.
fn random_unimodular<R: Ring>(ring: &R, nvars: usize, rng: &mut ChaCha8Rng) -> Matrix<R::Elem> {
    let mut t: Matrix<R::Elem> = (0..nvars)
        .map(|i| (0..nvars).map(|j| if i == j { ring.one() } else { ring.zero() }).collect())
        .collect();
    for _ in 0..2 * nvars {
        let i = rng.gen_range(0..nvars);
        let j = rng.gen_range(0..nvars);
        if i == j {
            continue;
        }
        let c = ring.shear_coefficient(rng);
        // column op: col_j += c * col_i
        for row in t.iter_mut() {
            let add = ring.mul(&row[i], &c);
            row[j] = ring.add(&row[j], &add);
        }
    }
    t
}

fn seed_of<R: Ring>(f: &MPoly<R>) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    f.to_string().hash(&mut h);
    h.finish()
}

/// Discriminant of an integer form.
fn disc_integer(f: &MPoly<Integers>, n: usize, d: u32, opts: &DiscOptions) -> Result<BigInt> {
    let z = Integers::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed_of(f));
    let mut g = f.clone();
    let mut attempt = 0;
    let res = loop {
        match macaulay_resultant(&g.gradient()) {
            Ok(r) => break r,
            Err(Error::DegenerateMinor) if attempt < opts.retries => {
                attempt += 1;
                let t = random_unimodular(&z, n + 1, &mut rng);
                g = f.substitute_linear(&t)?;
            }
            Err(e) => return Err(e),
        }
    };
    let a = normalization_exponent(n, d);
    let da = Pow::pow(&BigInt::from(d), a);
    z.div_exact(&res, &da).ok_or(Error::NonIntegralNormalization)
}

/// Δ(f) for a homogeneous form over any supported domain.
pub fn discriminant_value<R: Domain>(f: &MPoly<R>, opts: &DiscOptions) -> Result<R::Elem> {
    let (n, d) = check_input(f, opts)?;
    let ring = f.ring();
    let z = Integers::new();
    let nvars = n + 1;

    // Subrings of ℚ: clear denominators and work over ℤ.
    let rationals: Option<Vec<(Monomial, BigRational)>> =
        f.terms().map(|(m, c)| ring.to_rational(c).map(|q| (m.clone(), q))).collect();
    if let Some(terms) = rationals {
        let lcm = terms.iter().fold(BigInt::one(), |acc, (_, q)| acc.lcm(q.denom()));
        let fz = MPoly::from_terms(
            &z,
            nvars,
            terms.iter().map(|(m, q)| (m.clone(), (q * &lcm).to_integer())),
        );
        let dz = disc_integer(&fz, n, d, opts)?;
        let scale = Pow::pow(&lcm, discriminant_degree(n, d));
        let q = BigRational::new(dz, scale);
        return ring.from_rational(&q).ok_or(Error::NonIntegralNormalization);
    }

    // Prime fields: compute for the canonical integer lift and reduce.
    let lifts: Option<Vec<(Monomial, BigInt)>> =
        f.terms().map(|(m, c)| ring.integer_lift(c).map(|l| (m.clone(), l))).collect();
    if let Some(terms) = lifts {
        let fz = MPoly::from_terms(&z, nvars, terms);
        let dz = disc_integer(&fz, n, d, opts)?;
        return Ok(ring.from_int(&dz));
    }

    let a = normalization_exponent(n, d);
    let p = ring.characteristic();
    if a > 0 && p != 0 && (d as u64).is_multiple_of(p) {
        return Err(Error::Unsupported(format!(
            "discriminant over {} when the characteristic divides the degree",
            ring.tag()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed_of(f));
    let mut g = f.clone();
    let mut attempt = 0;
    let res = loop {
        match macaulay_resultant(&g.gradient()) {
            Ok(r) => break r,
            Err(Error::DegenerateMinor) if attempt < opts.retries => {
                attempt += 1;
                let t = random_unimodular(ring, nvars, &mut rng);
                g = f.substitute_linear(&t)?;
            }
            Err(e) => return Err(e),
        }
    };
    let da = ring.pow(&ring.from_i64(d as i64), a);
    ring.div_exact(&res, &da).ok_or(Error::NonIntegralNormalization)
}

pub fn discriminant<R: Domain>(f: &MPoly<R>) -> Result<DiscriminantResult<R::Elem>> {
    let value = discriminant_value(f, &DiscOptions::default())?;
    let d = f.homogeneous_degree().expect("checked");
    Ok(DiscriminantResult { value, valuation: None, degree_d: d, n: f.nvars() - 1 })
}

/// Discriminant over a DVR together with its valuation.
pub fn discriminant_dvr<R: Dvr>(
    f: &MPoly<R>,
    opts: &DiscOptions,
) -> Result<DiscriminantResult<R::Elem>> {
    let value = discriminant_value(f, opts)?;
    let d = f.homogeneous_degree().expect("checked");
    let valuation = Some(f.ring().valuation(&value));
    Ok(DiscriminantResult { value, valuation, degree_d: d, n: f.nvars() - 1 })
}

/// `v(Δ(f))`, infinite exactly when the generic fiber is singular.
pub fn discriminant_valuation<R: Dvr>(f: &MPoly<R>) -> Result<Valuation> {
    let v = discriminant_value(f, &DiscOptions::default())?;
    Ok(f.ring().valuation(&v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::parse_poly;
    use crate::rings::{PLocal, PrimeField};

    const Z: Integers = Scalars::new();

    fn zpoly(n: usize, s: &str) -> MPoly<Integers> {
        parse_poly(&Z, n, s).unwrap()
    }

    #[test]
    fn normalization_exponents() {
        assert_eq!(normalization_exponent(1, 2), 0);
        assert_eq!(normalization_exponent(2, 2), 1);
        assert_eq!(normalization_exponent(3, 2), 0);
        assert_eq!(normalization_exponent(1, 3), 1);
        assert_eq!(normalization_exponent(2, 3), 3);
        assert_eq!(normalization_exponent(2, 7), 31);
    }

    #[test]
    fn macaulay_sizes() {
        assert_eq!(macaulay_size(3, 3), 15);
        assert_eq!(macaulay_size(3, 7), 153);
        assert_eq!(macaulay_size(4, 4), 220);
        for (nv, d) in [(2usize, 5u32), (3, 4), (4, 3)] {
            let f = MPoly::from_coefficient_vector(
                &Z,
                nv,
                d,
                &vec![BigInt::one(); monomials_of_degree(nv, d).len()],
            );
            let mm = macaulay_matrix(&f.gradient()).unwrap();
            assert_eq!(mm.size() as u64, macaulay_size(nv, d));
        }
    }

    #[test]
    fn resultant_of_pure_powers_is_one() {
        for e in 1..4 {
            let gs: Vec<_> = (0..3).map(|i| MPoly::var(&Z, 3, i).pow(e)).collect();
            assert_eq!(macaulay_resultant(&gs).unwrap(), BigInt::one());
        }
    }

    #[test]
    fn linear_forms_give_determinant() {
        let gs = vec![zpoly(3, "2*x0 + x1"), zpoly(3, "x1 - x2"), zpoly(3, "x0 + x1 + 3*x2")];
        // det [[2,1,0],[0,1,-1],[1,1,3]] = 2*(3+1) - 1*(0+1) = 7
        assert_eq!(macaulay_resultant(&gs).unwrap(), BigInt::from(7));
    }

    #[test]
    fn common_zero_gives_zero() {
        // all vanish at (1:0:0)
        let gs = vec![zpoly(3, "x0*x1 + x2^2"), zpoly(3, "x0*x2 - x1^2"), zpoly(3, "x1*x2 + x0*x1")];
        match macaulay_resultant(&gs) {
            Ok(r) => assert!(r.is_zero()),
            Err(e) => assert_eq!(e, Error::DegenerateMinor),
        }
    }

    #[test]
    fn mixed_degrees_rejected() {
        let gs = vec![zpoly(2, "x0^2"), zpoly(2, "x1")];
        assert!(matches!(macaulay_resultant(&gs), Err(Error::InvalidInput(_))));
        let gs = vec![zpoly(2, "x0^2 + x1"), zpoly(2, "x1^2")];
        assert!(matches!(macaulay_resultant(&gs), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn binary_quadratic() {
        let f = zpoly(2, "3*x0^2 + 5*x0*x1 - 2*x1^2");
        let v = discriminant(&f).unwrap().value;
        let b2m4ac = BigInt::from(25 + 24);
        assert!(v == b2m4ac || v == -b2m4ac, "{v}");
    }

    #[test]
    fn split_quadric_has_unit_discriminant() {
        let v = discriminant(&zpoly(4, "x0*x1 + x2*x3")).unwrap().value;
        assert!(v == BigInt::one() || v == -BigInt::one());
    }

    #[test]
    fn plocal_examples() {
        let r = PLocal::new(5).unwrap();
        let f = parse_poly(&r, 3, "x0^2 + x1^2 + 5*x2^2").unwrap();
        assert_eq!(discriminant_valuation(&f).unwrap(), Valuation::Finite(1));
        let g = parse_poly(&r, 3, "x0^2 + 5*x1^2 + 5*x2^2").unwrap();
        assert!(discriminant_valuation(&g).unwrap() >= Valuation::Finite(2));
        let h = parse_poly(&r, 3, "x0^2 + x1^2 + x2^2").unwrap();
        assert_eq!(discriminant_valuation(&h).unwrap(), Valuation::Finite(0));
        let sing = parse_poly(&r, 3, "x0^2 + x1^2").unwrap();
        assert_eq!(discriminant_valuation(&sing).unwrap(), Valuation::Infinite);
        let frac = parse_poly(&r, 3, "1/2*x0^2 + x1^2 + 5*x2^2").unwrap();
        assert_eq!(discriminant_valuation(&frac).unwrap(), Valuation::Finite(1));
    }

    #[test]
    fn nodal_cubic_over_plocal() {
        let r = PLocal::new(5).unwrap();
        let f = parse_poly(&r, 3, "x1^2*x2 - x0^3 - x0^2*x2 - 5*x2^3").unwrap();
        assert_eq!(discriminant_valuation(&f).unwrap(), Valuation::Finite(1));
    }

    #[test]
    fn prime_field_reduces_integer_value() {
        let f7 = PrimeField::new(7).unwrap();
        let f = parse_poly(&f7, 3, "x0^3 + x1^3 + x2^3").unwrap();
        assert_ne!(discriminant_value(&f, &DiscOptions::default()).unwrap(), 0);
        let nodal = parse_poly(&f7, 3, "x1^2*x2 - x0^3 - x0^2*x2").unwrap();
        assert_eq!(discriminant_value(&nodal, &DiscOptions::default()).unwrap(), 0);
    }

    #[test]
    fn size_limit() {
        let f = MPoly::var(&Z, 4, 0).pow(9);
        let opts = DiscOptions { max_matrix: 100, ..Default::default() };
        assert!(matches!(discriminant_value(&f, &opts), Err(Error::SizeLimit(_))));
    }
}
