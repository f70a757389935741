use discval::constructions::{singularity_constraint_space, weierstrass_cubic};
use discval::discriminant::discriminant_valuation;
use discval::mpoly::PointProj;
use discval::rings::Dvr;
use discval::{PLocal, PrimeField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn weierstrass_valuations_agree_for_large_primes() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for p in [5u64, 7, 11] {
        let r = PLocal::new(p).unwrap();
        for _ in 0..30 {
            let a: Vec<_> = (0..5).map(|_| r.random_element(&mut rng, 3)).collect();
            let (f, classical) = weierstrass_cubic(&r, [&a[0], &a[1], &a[2], &a[3], &a[4]]);
            assert_eq!(discriminant_valuation(&f).unwrap(), r.valuation(&classical), "{f}");
        }
    }
}

#[test]
fn constraint_rank_is_full_above_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let k = PrimeField::new(31).unwrap();
    for trial in 0..40 {
        let nv = 3 + trial % 2;
        let r = 1 + trial % 3;
        let d = (2 * r - 1).max(2) as u32 + (trial % 2) as u32;
        let mut pts: Vec<PointProj<u64>> = Vec::new();
        while pts.len() < r {
            let c: Vec<u64> = (0..nv).map(|_| rng.gen_range(0..31)).collect();
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            let p = PointProj::new(&k, c).unwrap();
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        let s = singularity_constraint_space(&k, &pts, d).unwrap();
        assert_eq!(s.kernel_dim as i64, s.expected_dim());
        // kernel vectors make every point singular
        for b in s.kernel.iter().take(3) {
            let f = discval::mpoly::MPoly::from_coefficient_vector(&k, nv, d, b);
            for p in &pts {
                for g in discval::specialfiber::singular_subscheme(&f) {
                    assert_eq!(g.evaluate(p.coords()).unwrap(), 0);
                }
            }
        }
    }
}
