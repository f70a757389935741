//! Dense exact linear algebra: fraction-free determinants over domains and
//! row reduction over fields.

use crate::rings::{Domain, Field};

pub type Matrix<E> = Vec<Vec<E>>;

/// Determinant by Bareiss elimination; every division is exact.
pub fn det_bareiss<R: Domain>(ring: &R, mut m: Matrix<R::Elem>) -> R::Elem {
    let n = m.len();
    if n == 0 {
        return ring.one();
    }
    debug_assert!(m.iter().all(|row| row.len() == n), "square matrix");
    let mut negate = false;
    let mut prev = ring.one();
    for k in 0..n {
        // Prefer the sparsest nonzero pivot row to keep fill-in down.
        let pivot = (k..n)
            .filter(|&i| !ring.is_zero(&m[i][k]))
            .min_by_key(|&i| m[i][k..].iter().filter(|x| !ring.is_zero(x)).count());
        let Some(pr) = pivot else {
            return ring.zero();
        };
        if pr != k {
            m.swap(pr, k);
            negate = !negate;
        }
        let (top, bottom) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let akk = &pivot_row[k];
        for row in bottom.iter_mut() {
            let aik = row[k].clone();
            let aik_zero = ring.is_zero(&aik);
            for j in k + 1..n {
                // a_ij <- (a_kk a_ij - a_ik a_kj) / prev
                let mut v = ring.mul(akk, &row[j]);
                if !aik_zero && !ring.is_zero(&pivot_row[j]) {
                    v = ring.sub(&v, &ring.mul(&aik, &pivot_row[j]));
                }
                row[j] = if ring.is_one(&prev) {
                    v
                } else {
                    ring.div_exact(&v, &prev).expect("Bareiss division is exact")
                };
            }
            row[k] = ring.zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        ring.neg(&d)
    } else {
        d
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(field: &F, m: &mut Matrix<F::Elem>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !field.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(pr, r);
        let inv = field.inv(&m[r][c]).expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || field.is_zero(&row[c]) {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !field.is_zero(p) {
                    *x = field.sub(x, &field.mul(&f, p));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    rref(field, &mut m.clone()).len()
}

/// Basis of the right kernel `{v : M v = 0}`.
pub fn kernel<F: Field>(field: &F, m: &Matrix<F::Elem>, cols: usize) -> Vec<Vec<F::Elem>> {
    let mut a = m.clone();
    let pivots = rref(field, &mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![field.zero(); cols];
            v[fc] = field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(&a[r][fc]);
            }
            v
        })
        .collect()
}

/// Solves `M x = b` for square invertible `M`.
pub fn solve<F: Field>(field: &F, m: &Matrix<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let n = m.len();
    let mut aug: Matrix<F::Elem> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(field, &mut aug);
    (pivots.len() == n && pivots.iter().all(|&c| c < n))
        .then(|| aug.iter().map(|row| row[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{PrimeField, Ring, Scalars};
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};

    fn ints(rows: &[&[i64]]) -> Matrix<BigInt> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    /// Cofactor expansion, the independent reference.
    fn det_laplace(m: &Matrix<BigInt>) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::from(1);
        }
        let mut acc = BigInt::from(0);
        for j in 0..n {
            let minor: Matrix<BigInt> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let t = &m[0][j] * det_laplace(&minor);
            if j % 2 == 0 {
                acc += t;
            } else {
                acc -= t;
            }
        }
        acc
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let z = Scalars::<BigInt>::new();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for n in 0..6 {
            for _ in 0..30 {
                let m: Matrix<BigInt> = (0..n)
                    .map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(-3..4))).collect())
                    .collect();
                assert_eq!(det_bareiss(&z, m.clone()), det_laplace(&m));
            }
        }
        assert_eq!(det_bareiss(&z, ints(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let f = PrimeField::new(7).unwrap();
        let m: Matrix<u64> = vec![vec![1, 2, 3, 4], vec![2, 4, 6, 1], vec![3, 6, 2, 5]];
        let k = kernel(&f, &m, 4);
        assert_eq!(k.len(), 4 - rank(&f, &m));
        for v in &k {
            for row in &m {
                let s = row.iter().zip(v).fold(0, |acc, (a, b)| f.add(&acc, &f.mul(a, b)));
                assert_eq!(s, 0);
            }
        }
    }

    #[test]
    fn solve_square_system() {
        let f = PrimeField::new(11).unwrap();
        let m = vec![vec![2, 1], vec![1, 3]];
        let x = solve(&f, &m, &[3, 4]).unwrap();
        assert_eq!(f.add(&f.mul(&2, &x[0]), &x[1]), 3);
        assert!(solve(&f, &vec![vec![1, 1], vec![2, 2]], &[1, 2]).is_none());
    }
}
