use discval::discriminant::discriminant_valuation;
use discval::localanalysis::{
    decompose_quadratic_form, multiplicity, symbolic_quadric_discriminant, vmin_at_least_two_by_lifting,
    vmin_exact_quadric,
};
use discval::mpoly::{monomials_of_degree, MPoly};
use discval::rings::{Dvr, Ring};
use discval::{PLocal, PrimeField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_quadric<R: Dvr>(rng: &mut ChaCha8Rng, r: &R, nvars: usize) -> MPoly<R> {
    let n = monomials_of_degree(nvars, 2).len();
    // mix of units and multiples of π so that non-diagonal cases appear
    let cs: Vec<R::Elem> = (0..n).map(|_| r.random_element(rng, 3)).collect();
    MPoly::from_coefficient_vector(r, nvars, 2, &cs)
}

#[test]
fn decomposition_reconstructs_random_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for p in [2u64, 3] {
        let r = PLocal::new(p).unwrap();
        for trial in 0..200 {
            let nv = 1 + trial % 5;
            let q = random_quadric(&mut rng, &r, nv);
            let dec = decompose_quadratic_form(&q).unwrap_or_else(|e| panic!("{q}: {e}"));
            assert_eq!(2 * dec.rank2_blocks.len() + dec.rank1_blocks.len(), nv);
            assert_eq!(q.substitute_linear(&dec.transform).unwrap(), dec.block_form(&r));
        }
    }
}

fn random_residue_quadric(rng: &mut ChaCha8Rng, k: &PrimeField, nvars: usize) -> MPoly<PrimeField> {
    let n = monomials_of_degree(nvars, 2).len();
    let cs: Vec<u64> = (0..n).map(|_| if rng.gen_bool(0.4) { 0 } else { rng.gen_range(0..k.p()) }).collect();
    MPoly::from_coefficient_vector(k, nvars, 2, &cs)
}

#[test]
fn vmin_bounded_by_multiplicity_and_lifting_criterion() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for p in [5u64, 7] {
        let k = PrimeField::new(p).unwrap();
        let r = PLocal::new(p).unwrap();
        for nv in [2usize, 3] {
            let delta = symbolic_quadric_discriminant(nv).unwrap();
            let dbar = delta.map_coeffs(&k, |c| k.from_int(c));
            for _ in 0..50 {
                let a = random_residue_quadric(&mut rng, &k, nv);
                if a.is_zero() {
                    continue;
                }
                let v = vmin_exact_quadric(&a, &r).unwrap();
                let m = multiplicity(&dbar, &a.coefficient_vector(2)).unwrap();
                assert!(v <= m as u64, "{a}: vmin {v} > mult {m}");
                assert_eq!(v >= 2, vmin_at_least_two_by_lifting(&a, &r).unwrap(), "{a}");
                // the canonical lift realizes at most vmin from above
                let b = a.map_coeffs(&r, |c| r.lift(*c));
                assert!(discriminant_valuation(&b).unwrap() >= discval::Valuation::Finite(v));
            }
        }
    }
}
