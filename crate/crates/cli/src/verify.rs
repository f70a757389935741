//! Reproducible verification suites. Every instance draws from its own
//! ChaCha stream, so results depend only on (suite, ring, trials, seed) and
//! never on scheduling.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use discval::constructions::{
    isolated_singularities_example, line_singular_family, singularity_constraint_space, weierstrass_cubic,
};
use discval::discriminant::{discriminant_degree, discriminant_value, DiscOptions};
use discval::linalg::det_bareiss;
use discval::localanalysis::{
    check_theorem_1_1, classify_double_point, decompose_quadratic_form, multiplicity, quadric_discriminant,
    quadric_valuation_bound_check, reduce_mod_pi, symbolic_quadric_discriminant, vmin_at_least_two_by_lifting,
    vmin_exact_quadric, DoublePointKind,
};
use discval::mpoly::{monomials_of_degree, MPoly, Monomial, PointProj};
use discval::rings::{Dvr, DvrDescriptor, Ring};
use discval::specialfiber::{analyze_singular_locus, singular_subscheme, LocusOptions};
use discval::{Error, Integers, PLocal, PrimeField, TLocal, Valuation};
use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::spec::RingSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Thm1_1,
    Thm6_1,
    Thm9_4a,
    Thm9_4b,
    Thm9_4c,
    Thm9_4d,
    Prop3_1,
    Prop3_3,
    Prop5_1,
    Lemma9_1,
    Cor8_6,
    DegreeScaling,
    SmoothCriterion,
}

const SUITES: [(Suite, &str); 13] = [
    (Suite::Thm1_1, "thm1_1"),
    (Suite::Thm6_1, "thm6_1"),
    (Suite::Thm9_4a, "thm9_4a"),
    (Suite::Thm9_4b, "thm9_4b"),
    (Suite::Thm9_4c, "thm9_4c"),
    (Suite::Thm9_4d, "thm9_4d"),
    (Suite::Prop3_1, "prop3_1"),
    (Suite::Prop3_3, "prop3_3"),
    (Suite::Prop5_1, "prop5_1"),
    (Suite::Lemma9_1, "lemma9_1"),
    (Suite::Cor8_6, "cor8_6"),
    (Suite::DegreeScaling, "degree_scaling"),
    (Suite::SmoothCriterion, "smooth_criterion"),
];

impl Suite {
    pub fn all() -> impl Iterator<Item = Suite> {
        SUITES.iter().map(|(s, _)| *s)
    }

    pub fn name(self) -> &'static str {
        SUITES.iter().find(|(s, _)| *s == self).map(|(_, n)| *n).expect("listed")
    }

    pub fn default_trials(self) -> usize {
        match self {
            Suite::Thm6_1 => 4,
            Suite::Thm9_4a | Suite::Thm9_4b | Suite::Thm9_4c | Suite::Thm9_4d => 12,
            Suite::Prop3_1 => 300,
            Suite::Prop3_3 => 300,
            Suite::Prop5_1 => 500,
            Suite::Thm1_1 => 500,
            Suite::DegreeScaling => 120,
            _ => 200,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Suite {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        SUITES
            .iter()
            .find(|(_, n)| *n == s)
            .map(|(x, _)| *x)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub suite: Suite,
    /// Overrides the suite's default ring or field; only its kind and prime
    /// are used.
    pub ring: Option<RingSpec>,
    pub trials: usize,
    pub seed: u64,
    /// Random lifts per reduction, where a suite lifts.
    pub lifts: usize,
    pub disc: DiscOptions,
    pub locus: LocusOptions,
}

impl VerifyConfig {
    pub fn new(suite: Suite) -> Self {
        VerifyConfig {
            suite,
            ring: None,
            trials: suite.default_trials(),
            seed: 0,
            lifts: if suite == Suite::Thm6_1 { 20 } else { 10 },
            disc: DiscOptions::default(),
            locus: LocusOptions::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    /// `None` for a suite-level failure.
    pub instance: Option<usize>,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Skip {
    pub instance: usize,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub suite: Suite,
    pub ring: Option<String>,
    pub seed: u64,
    pub trials: usize,
    pub instances_run: usize,
    pub passed: bool,
    pub failures: Vec<Failure>,
    pub skipped: Vec<Skip>,
    pub skip_rate: f64,
    /// Counts of instance tags, e.g. how many instances had valuation 1.
    pub stats: BTreeMap<String, u64>,
}

impl VerifyReport {
    pub fn all_skipped(&self) -> bool {
        self.instances_run > 0 && self.skipped.len() == self.instances_run
    }

    pub fn stat(&self, key: &str) -> u64 {
        self.stats.get(key).copied().unwrap_or(0)
    }

    /// 0 on success, 3 on failures, 4 when every instance was skipped.
    pub fn exit_code(&self) -> i32 {
        if !self.passed {
            3
        } else if self.all_skipped() {
            4
        } else {
            0
        }
    }
}

enum Outcome {
    Pass(Vec<String>),
    Fail(Value),
    Skip(String),
}

fn pass(tags: &[&str]) -> Outcome {
    Outcome::Pass(tags.iter().map(|t| t.to_string()).collect())
}

/// Contradictions become failures; budgets and undecided cases are skips.
fn from_error(e: Error) -> Outcome {
    match e {
        Error::Precondition(_) => Outcome::Fail(json!({ "error": e.to_string() })),
        other => Outcome::Skip(other.to_string()),
    }
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return from_error(e),
        }
    };
}

fn replay(cmd: &str, ring: &str, nvars: usize, poly: &str) -> String {
    let flag = if ring.starts_with("Fq") { "--field" } else { "--ring" };
    format!("disc-val {cmd} {flag} {ring} --vars {nvars} \"{poly}\"")
}

fn counterexample<R: Ring>(cmd: &str, f: &MPoly<R>, extra: Value) -> Value {
    let poly = f.to_string();
    let ring = f.ring().tag();
    let mut v = json!({
        "ring": ring,
        "vars": f.nvars(),
        "poly": poly,
        "replay": replay(cmd, &ring, f.nvars(), &poly),
    });
    if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
        m.extend(e);
    }
    v
}

fn random_int_form(rng: &mut ChaCha8Rng, nvars: usize, d: u32, bound: i64) -> MPoly<Integers> {
    let z = Integers::new();
    let n = monomials_of_degree(nvars, d).len();
    let cs: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
    MPoly::from_coefficient_vector(&z, nvars, d, &cs)
}

fn random_fp_form(rng: &mut ChaCha8Rng, k: &PrimeField, nvars: usize, d: u32) -> MPoly<PrimeField> {
    let n = monomials_of_degree(nvars, d).len();
    let cs: Vec<u64> = (0..n).map(|_| rng.gen_range(0..k.p())).collect();
    MPoly::from_coefficient_vector(k, nvars, d, &cs)
}

fn random_dvr_form<R: Dvr>(rng: &mut ChaCha8Rng, r: &R, nvars: usize, d: u32, depth: u32) -> MPoly<R> {
    let n = monomials_of_degree(nvars, d).len();
    let cs: Vec<R::Elem> = (0..n).map(|_| r.random_element(rng, depth)).collect();
    MPoly::from_coefficient_vector(r, nvars, d, &cs)
}

fn random_invertible(rng: &mut ChaCha8Rng, k: &PrimeField, n: usize) -> Vec<Vec<u64>> {
    loop {
        let t: Vec<Vec<u64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..k.p())).collect()).collect();
        if det_bareiss(k, t.clone()) != 0 {
            return t;
        }
    }
}

/// Uniform form singular at `(1 : 0 : … : 0)`, moved to a random point.
fn singular_fp_form(rng: &mut ChaCha8Rng, k: &PrimeField, nvars: usize, d: u32) -> MPoly<PrimeField> {
    loop {
        let f = random_fp_form(rng, k, nvars, d);
        let kept: Vec<(Monomial, u64)> =
            f.terms().filter(|(m, _)| m.exps()[0] + 1 < d as u16).map(|(m, c)| (m.clone(), *c)).collect();
        let f = MPoly::from_terms(k, nvars, kept);
        if f.is_zero() {
            continue;
        }
        let t = random_invertible(rng, k, nvars);
        return f.substitute_linear(&t).expect("square transform");
    }
}

/// Canonical lift plus `π` times a random form.
fn noisy_lift<R: Dvr>(rng: &mut ChaCha8Rng, r: &R, fbar: &MPoly<PrimeField>) -> MPoly<R> {
    let d = fbar.homogeneous_degree().expect("form");
    let base = fbar.map_coeffs(r, |c| r.lift(*c));
    let noise = random_dvr_form(rng, r, fbar.nvars(), d, 2);
    base.add(&noise.scale(&r.uniformizer()))
}

fn random_point(rng: &mut ChaCha8Rng, k: &PrimeField, nvars: usize) -> PointProj<u64> {
    loop {
        let c: Vec<u64> = (0..nvars).map(|_| rng.gen_range(0..k.p())).collect();
        if c.iter().any(|&x| x != 0) {
            return PointProj::new(k, c).expect("nonzero");
        }
    }
}

fn distinct_points(rng: &mut ChaCha8Rng, k: &PrimeField, nvars: usize, r: usize) -> Vec<PointProj<u64>> {
    let mut pts: Vec<PointProj<u64>> = Vec::new();
    while pts.len() < r {
        let p = random_point(rng, k, nvars);
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    pts
}

fn hessian_det(f: &MPoly<Integers>) -> BigInt {
    let z = Integers::new();
    let n = f.nvars();
    let m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let di = f.partial_derivative(i).expect("index");
            (0..n).map(|j| di.partial_derivative(j).expect("index").constant_term()).collect()
        })
        .collect();
    det_bareiss(&z, m)
}

fn prop3_1(_cfg: &VerifyConfig, i: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let n = 1 + i % 3;
    let f = random_int_form(rng, n + 1, 2, 9);
    let det = hessian_det(&f);
    let expected = if n % 2 == 1 { det } else { det / BigInt::from(2) };
    let got = tri!(discriminant_value(&f, &DiscOptions::default()));
    if got.abs() == expected.abs() {
        pass(&[])
    } else {
        Outcome::Fail(counterexample("disc", &f, json!({"got": got.to_string(), "expected_up_to_sign": expected.to_string()})))
    }
}

const SCALING_PAIRS: [(usize, u32); 6] = [(1, 3), (1, 4), (2, 3), (2, 4), (3, 2), (3, 3)];

fn degree_scaling(cfg: &VerifyConfig, i: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let (n, d) = SCALING_PAIRS[i % SCALING_PAIRS.len()];
    let f = random_int_form(rng, n + 1, d, 5);
    let base = tri!(discriminant_value(&f, &cfg.disc));
    let k = discriminant_degree(n, d);
    for lambda in [2i64, 3, 5] {
        let l = BigInt::from(lambda);
        let scaled = tri!(discriminant_value(&f.scale(&l), &cfg.disc));
        let expected = &base * num_traits::pow(l, k as usize);
        if scaled != expected {
            return Outcome::Fail(counterexample(
                "disc",
                &f,
                json!({"lambda": lambda, "scaled": scaled.to_string(), "expected": expected.to_string()}),
            ));
        }
    }
    pass(&[])
}

fn primes_or(cfg: &VerifyConfig, default: &[u64]) -> Vec<u64> {
    cfg.ring.and_then(RingSpec::prime).map_or_else(|| default.to_vec(), |p| vec![p])
}

fn smooth_criterion(cfg: &VerifyConfig, i: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let primes = primes_or(cfg, &[5, 7]);
    let k = tri!(PrimeField::new(primes[i % primes.len()]));
    let d = 2 + ((i / primes.len()) % 2) as u32;
    // a third of the instances are pushed onto the discriminant locus
    let f = if i.is_multiple_of(3) { singular_fp_form(rng, &k, 3, d) } else { random_fp_form(rng, &k, 3, d) };
    if f.is_zero() {
        return Outcome::Skip("zero form".into());
    }
    let delta = tri!(discriminant_value(&f, &cfg.disc));
    let rep = tri!(analyze_singular_locus(&f, &cfg.locus));
    let found = rep.dimension >= 1 || !rep.closed_points.is_empty();
    if rep.dimension == 0 && rep.closed_points.is_empty() {
        return Outcome::Skip("no singular point of degree <= m_max".into());
    }
    if (delta == 0) == found {
        pass(&[if found { "singular" } else { "smooth" }])
    } else {
        Outcome::Fail(counterexample("singular", &f, json!({"discriminant": delta, "singular_point_found": found})))
    }
}

fn dvrs_or(cfg: &VerifyConfig, default: &[u64]) -> Vec<DvrDescriptor> {
    match cfg.ring.and_then(RingSpec::dvr) {
        Some(d) => vec![d],
        None => {
            let primes = primes_or(cfg, default);
            primes.into_iter().map(DvrDescriptor::PLocal).collect()
        }
    }
}

macro_rules! on_dvr {
    ($desc:expr, $r:ident => $body:expr) => {
        match $desc {
            DvrDescriptor::PLocal(p) => {
                let $r = tri!(PLocal::new(p));
                $body
            }
            DvrDescriptor::TLocal(p) => {
                let $r = tri!(TLocal::new(p));
                $body
            }
        }
    };
}

fn thm1_1(cfg: &VerifyConfig, i: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let dvrs = dvrs_or(cfg, &[5, 7]);
    let desc = dvrs[i % dvrs.len()];
    on_dvr!(desc, r => if i < cfg.trials { thm1_1_random(cfg, &r, rng) } else { thm1_1_constructed(cfg, &r, i, rng) })
}

fn theorem_failure<R: Dvr>(f: &MPoly<R>, rep: &discval::localanalysis::Theorem11Report, why: &str) -> Outcome {
    Outcome::Fail(counterexample(
        "classify",
        f,
        json!({
            "why": why,
            "valuation": rep.valuation,
            "regular": rep.regular,
            "nondeg_single_point": rep.nondeg_single_point,
        }),
    ))
}

fn thm1_1_random<R: Dvr>(cfg: &VerifyConfig, r: &R, rng: &mut ChaCha8Rng) -> Outcome {
    let k = r.residue_field();
    let f = if k.p() == 2 {
        // characteristic 2 with n odd: singular reductions only
        let nvars = if rng.gen_bool(0.5) { 2 } else { 4 };
        // the discriminant needs p ∤ d in equal characteristic
        let d = if r.characteristic() == 2 { 3 } else { rng.gen_range(2..=3) };
        let fbar = singular_fp_form(rng, &k, nvars, d);
        noisy_lift(rng, r, &fbar)
    } else {
        let d = if r.characteristic() == 3 { 2 } else { 3 };
        loop {
            let f = random_dvr_form(rng, r, 3, d, 2);
            if !reduce_mod_pi(&f).is_zero() {
                break f;
            }
        }
    };
    let rep = tri!(check_theorem_1_1(&f, &cfg.disc, &cfg.locus));
    if rep.char2_obstruction_ok == Some(false) {
        return theorem_failure(&f, &rep, "valuation 1 in characteristic 2 with n odd");
    }
    if rep.valuation == Valuation::Finite(1) {
        return if rep.regular == Some(true) && rep.nondeg_single_point {
            pass(&["valuation_one"])
        } else {
            theorem_failure(&f, &rep, "valuation 1 without a regular single nondegenerate double point")
        };
    }
    match rep.equivalence_holds {
        Some(true) => pass(&[if rep.char2_obstruction_ok.is_some() { "char2_singular" } else { "random" }]),
        Some(false) => theorem_failure(&f, &rep, "equivalence fails"),
        None => Outcome::Skip("regularity undetermined".into()),
    }
}

/// Forms built so that the right-hand side holds: Weierstrass cubics whose
/// classical discriminant has valuation 1, a nodal cubic and quadric cones,
/// each with a single coefficient divisible once by the uniformizer.
fn thm1_1_constructed<R: Dvr>(cfg: &VerifyConfig, r: &R, i: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let p = r.prime();
    let unit = |rng: &mut ChaCha8Rng| r.lift(rng.gen_range(1..p));
    let f = if i.is_multiple_of(2) && p >= 5 {
        let mut found = None;
        for _ in 0..500 {
            let a: Vec<R::Elem> = (0..5).map(|_| r.random_element(rng, 2)).collect();
            let (f, classical) = weierstrass_cubic(r, [&a[0], &a[1], &a[2], &a[3], &a[4]]);
            if r.valuation(&classical) == Valuation::Finite(1) {
                found = Some(f);
                break;
            }
        }
        match found {
            Some(f) => f,
            None => return Outcome::Skip("no Weierstrass cubic with valuation 1 found".into()),
        }
    } else if p == 2 && (i.is_multiple_of(2) || r.characteristic() == 2) {
        // nodal cubic u_0 x_0 x_1 x_2 + u_1 x_0^3 + u_2 x_1^3 + π u_3 x_2^3
        let mut terms: Vec<_> =
            [[1u16, 1, 1], [3, 0, 0], [0, 3, 0]].iter().map(|e| (Monomial::new(e), unit(rng))).collect();
        terms.push((Monomial::new(&[0, 0, 3]), r.mul(&unit(rng), &r.uniformizer())));
        MPoly::from_terms(r, 3, terms)
    } else if p == 2 {
        // u_0 x_0 x_1 + ... + π u x_{n}^2 with n even
        let nvars = if rng.gen_bool(0.5) { 3 } else { 5 };
        let mut terms = Vec::new();
        for j in (0..nvars - 1).step_by(2) {
            let mut e = vec![0u16; nvars];
            e[j] = 1;
            e[j + 1] = 1;
            terms.push((Monomial::new(&e), unit(rng)));
        }
        let mut e = vec![0u16; nvars];
        e[nvars - 1] = 2;
        terms.push((Monomial::new(&e), r.mul(&unit(rng), &r.uniformizer())));
        MPoly::from_terms(r, nvars, terms)
    } else {
        // diag(u_0, ..., π u_n)
        let nvars = rng.gen_range(2..=4);
        let terms = (0..nvars).map(|j| {
            let mut e = vec![0u16; nvars];
            e[j] = 2;
            let c = if j == nvars - 1 { r.mul(&unit(rng), &r.uniformizer()) } else { unit(rng) };
            (Monomial::new(&e), c)
        });
        MPoly::from_terms(r, nvars, terms.collect::<Vec<_>>())
    };
    let rep = tri!(check_theorem_1_1(&f, &cfg.disc, &cfg.locus));
    if !(rep.nondeg_single_point && rep.regular == Some(true)) {
        return theorem_failure(&f, &rep, "construction does not give a regular single nondegenerate double point");
    }
    if rep.valuation == Valuation::Finite(1) {
        pass(&["constructed"])
    } else {
        theorem_failure(&f, &rep, "regular single nondegenerate double point but valuation is not 1")
    }
}

fn thm6_1(cfg: &VerifyConfig, i: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let dvrs = dvrs_or(cfg, &[101]);
    let desc = dvrs[i % dvrs.len()];
    let k = tri!(PrimeField::new(desc.prime()));
    let r = 2 + i % 2;
    let d = 2 * r as u32 + 1;
    let pts = distinct_points(rng, &k, 3, r);
    let w = tri!(isolated_singularities_example(&k, &pts, d, rng.gen(), 40));
    on_dvr!(desc, ring => {
        for _ in 0..cfg.lifts {
            let f = noisy_lift(rng, &ring, &w.form);
            let v = ring.valuation(&tri!(discriminant_value(&f, &cfg.disc)));
            if v < Valuation::Finite(r as u64) {
                return Outcome::Fail(counterexample("disc", &f, json!({"valuation": v, "r": r, "reduction": w.form.to_string()})));
            }
        }
        pass(&[if r == 2 { "r2" } else { "r3" }])
    })
}

fn nonzero_form(rng: &mut ChaCha8Rng, k: &PrimeField, nvars: usize, d: u32) -> MPoly<PrimeField> {
    loop {
        let f = if d == 0 {
            MPoly::constant(k, nvars, rng.gen_range(1..k.p()))
        } else {
            random_fp_form(rng, k, nvars, d)
        };
        if !f.is_zero() {
            return f;
        }
    }
}

fn thm9_4(cfg: &VerifyConfig, i: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let dvrs = dvrs_or(cfg, &[7]);
    let desc = dvrs[i % dvrs.len()];
    let k = tri!(PrimeField::new(desc.prime()));
    let d = 3 + (i % 3) as u32;
    let suite = cfg.suite;
    // g linear puts a line into the singular locus
    let m = if suite == Suite::Thm9_4d { 1 } else { rng.gen_range(1..=d / 2) };
    let g = nonzero_form(rng, &k, 3, m);
    let h = nonzero_form(rng, &k, 3, d - 2 * m);
    let fbar = g.mul(&g).mul(&h);
    let rep = tri!(analyze_singular_locus(&fbar, &cfg.locus));
    if rep.dimension < 1 {
        return Outcome::Skip("reduction has a finite singular locus".into());
    }
    if suite == Suite::Thm9_4d {
        if rep.contains_line != Some(true) {
            return Outcome::Skip("line not proven".into());
        }
        if k.p() + 1 >= d as u64 {
            // the auxiliary form is singular at d - 1 points of the line x2 = 0
            let cs: Vec<u64> = (0..d as u64 - 1).collect();
            let aux = tri!(line_singular_family(&k, 2, d, &cs, None));
            let arep = tri!(analyze_singular_locus(&aux, &cfg.locus));
            let on_line = arep.rational_points().filter_map(|c| c.rational_coords()).filter(|q| q[2] == 0).count();
            if arep.dimension != 0 || on_line + 1 < d as usize {
                return Outcome::Fail(counterexample("singular", &aux, json!({"why": "auxiliary form is not as claimed"})));
            }
        }
    }
    let mut tags = vec![format!("d{d}")];
    if suite == Suite::Thm9_4c {
        match transverse_count(cfg, rng, &k, &g, &h, m) {
            Ok(true) => tags.push("transverse".into()),
            Ok(false) => {}
            Err(fail) => return fail,
        }
    }
    let bound = match suite {
        Suite::Thm9_4a => rep.dimension as u64 + 1,
        Suite::Thm9_4b => (d as u64 - 1) / 2,
        Suite::Thm9_4c if d == 4 => 4,
        Suite::Thm9_4c => 2 * d as u64 - 3,
        _ => d as u64 - 1,
    };
    on_dvr!(desc, ring => {
        for _ in 0..cfg.lifts {
            let f = noisy_lift(rng, &ring, &fbar);
            let v = ring.valuation(&tri!(discriminant_value(&f, &cfg.disc)));
            if v < Valuation::Finite(bound) {
                return Outcome::Fail(counterexample(
                    "disc",
                    &f,
                    json!({"valuation": v, "bound": bound, "reduction": fbar.to_string()}),
                ));
            }
        }
        Outcome::Pass(tags)
    })
}

/// Splits `g²` into `g·g₂` with a second smooth `g₂` of the same degree; when
/// `g, g₂, h` are smooth and meet transversally the singular locus has
/// `m² + 2m(d − 2m)` geometric points. `Ok(false)` when the sample is not in
/// that open set or the points were not all found.
fn transverse_count(
    cfg: &VerifyConfig,
    rng: &mut ChaCha8Rng,
    k: &PrimeField,
    g: &MPoly<PrimeField>,
    h: &MPoly<PrimeField>,
    m: u32,
) -> Result<bool, Outcome> {
    let smooth = |f: &MPoly<PrimeField>| -> Result<bool, Outcome> {
        if f.homogeneous_degree() == Some(0) {
            return Ok(true);
        }
        match analyze_singular_locus(f, &cfg.locus) {
            Ok(rep) => Ok(rep.dimension < 0),
            Err(e) => Err(Outcome::Skip(e.to_string())),
        }
    };
    let g2 = nonzero_form(rng, k, 3, m);
    if !(smooth(g)? && smooth(&g2)? && smooth(h)?) {
        return Ok(false);
    }
    let a = g.mul(&g2).mul(h);
    let rep = analyze_singular_locus(&a, &cfg.locus).map_err(|e| Outcome::Skip(e.to_string()))?;
    if rep.dimension != 0 || rep.points_possibly_incomplete || rep.closed_points.iter().any(|c| c.multiplicity != 1) {
        return Ok(false);
    }
    let d = a.homogeneous_degree().expect("form") as u64;
    let m = m as u64;
    let expected = m * m + 2 * m * (d - 2 * m);
    let got: u64 = rep.closed_points.iter().map(|c| c.degree as u64).sum();
    if got == expected && rep.degree == Some(expected) {
        Ok(true)
    } else {
        Err(Outcome::Fail(counterexample(
            "singular",
            &a,
            json!({"why": "transverse factors with the wrong number of singular points", "got": got, "expected": expected}),
        )))
    }
}

fn prop3_3(cfg: &VerifyConfig, i: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let dvrs = dvrs_or(cfg, &[2, 3]);
    let desc = dvrs[i % dvrs.len()];
    let nvars = 2 + (i / dvrs.len()) % 4;
    on_dvr!(desc, r => {
        let q = random_dvr_form(rng, &r, nvars, 2, 3);
        if q.is_zero() {
            return Outcome::Skip("zero form".into());
        }
        tri!(decompose_quadratic_form(&q));
        let v_det = r.valuation(&tri!(quadric_discriminant(&q)));
        let v_disc = r.valuation(&tri!(discriminant_value(&q, &cfg.disc)));
        if v_det != v_disc {
            return Outcome::Fail(counterexample("disc", &q, json!({"determinant_valuation": v_det, "valuation": v_disc})));
        }
        if reduce_mod_pi(&q).is_zero() {
            return pass(&["zero_reduction"]);
        }
        let b = tri!(quadric_valuation_bound_check(&q, &cfg.locus));
        if b.bound_ok {
            pass(&[if b.sing_dim >= 0 { "singular_reduction" } else { "smooth_reduction" }])
        } else {
            Outcome::Fail(counterexample("classify", &q, json!({"valuation": b.valuation, "sing_dim": b.sing_dim})))
        }
    })
}

fn prop5_1(cfg: &VerifyConfig, i: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let primes = primes_or(cfg, &[101]);
    let k = tri!(PrimeField::new(primes[i % primes.len()]));
    let d = 3 + (i % 2) as u32;
    let f = singular_fp_form(rng, &k, 3, d);
    let rep = tri!(analyze_singular_locus(&f, &cfg.locus));
    let single = rep.dimension == 0 && rep.closed_points.len() == 1 && rep.closed_points[0].degree == 1;
    if !single {
        return pass(&["other"]);
    }
    let q = rep.closed_points[0].rational_coords().expect("rational");
    let q = tri!(PointProj::new(&k, q));
    let class = tri!(classify_double_point(&f, &q));
    pass(&[if class.kind == DoublePointKind::Nondegenerate { "single_nondegenerate" } else { "other" }])
}

fn lemma9_1(cfg: &VerifyConfig, i: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let primes = primes_or(cfg, &[31]);
    let k = tri!(PrimeField::new(primes[i % primes.len()]));
    let nvars = 3 + i % 2;
    let r = 1 + (i / 2) % 3;
    let d = ((2 * r - 1) as u32).max(2) + rng.gen_range(0..2);
    let pts = distinct_points(rng, &k, nvars, r);
    let space = tri!(singularity_constraint_space(&k, &pts, d));
    if space.kernel_dim as i64 != space.expected_dim() {
        return Outcome::Fail(json!({"points": pts.iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>(), "d": d}));
    }
    for b in space.kernel.iter().take(2) {
        let f = MPoly::from_coefficient_vector(&k, nvars, d, b);
        for p in &pts {
            if singular_subscheme(&f).iter().any(|g| g.evaluate(p.coords()) != Ok(0)) {
                return Outcome::Fail(counterexample("singular", &f, json!({"why": "kernel form not singular at a point"})));
            }
        }
    }
    if r < 2 || (r as u64) > k.p() {
        return pass(&["general"]);
    }
    // r points on the line x2 = … = 0, one degree below the bound
    let cs: Vec<u64> = (0..r as u64).collect();
    let line: Vec<PointProj<u64>> = cs
        .iter()
        .map(|&c| {
            let mut v = vec![0u64; nvars];
            v[0] = 1;
            v[1] = c;
            PointProj::new(&k, v).expect("nonzero")
        })
        .collect();
    let low = tri!(singularity_constraint_space(&k, &line, 2 * r as u32 - 2));
    if (low.kernel_dim as i64) > low.expected_dim() {
        pass(&["general", "collinear"])
    } else {
        Outcome::Fail(json!({"why": "collinear configuration has expected nullity", "r": r, "nvars": nvars}))
    }
}

fn cor8_6(cfg: &VerifyConfig, i: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let primes = primes_or(cfg, &[5, 7]);
    let p = primes[i % primes.len()];
    let k = tri!(PrimeField::new(p));
    let r = tri!(PLocal::new(p));
    let nvars = 2 + (i / primes.len()) % 3;
    let mons = monomials_of_degree(nvars, 2);
    let (s, a) = loop {
        // coordinate points e_j for j in S are forced singular
        let s: Vec<usize> = (0..nvars).filter(|_| rng.gen_bool(0.3)).collect();
        let cs: Vec<u64> = mons
            .iter()
            .map(|m| {
                if s.iter().any(|&j| m.exps()[j] > 0) || rng.gen_bool(0.3) {
                    0
                } else {
                    rng.gen_range(0..p)
                }
            })
            .collect();
        let a = MPoly::from_coefficient_vector(&k, nvars, 2, &cs);
        if !a.is_zero() {
            break (s, a);
        }
    };
    let delta = tri!(symbolic_quadric_discriminant(nvars));
    let dbar = delta.map_coeffs(&k, |c| k.from_int(c));
    let v = tri!(vmin_exact_quadric(&a, &r));
    let mult = tri!(multiplicity(&dbar, &a.coefficient_vector(2))) as u64;
    let fail = |why: &str| Outcome::Fail(counterexample("singular", &a, json!({"why": why, "vmin": v, "mult": mult})));
    if v > mult {
        return fail("vmin exceeds the multiplicity");
    }
    if (v >= 2) != tri!(vmin_at_least_two_by_lifting(&a, &r)) {
        return fail("lifting criterion disagrees with vmin >= 2");
    }
    let rep = tri!(analyze_singular_locus(&a, &cfg.locus));
    let mut single = rep.dimension == 0 && rep.degree == Some(1);
    if single {
        let q = tri!(PointProj::new(&k, rep.closed_points[0].rational_coords().expect("rational")));
        single = tri!(classify_double_point(&a, &q)).kind == DoublePointKind::Nondegenerate;
    }
    if (v == 1) != single {
        return fail("vmin = 1 does not match a single nondegenerate double point");
    }
    let rs = s.len() as u64;
    if v < rs || mult < rs {
        return fail("coordinate-point span bound violated");
    }
    pass(&[&format!("vmin{v}")])
}

fn run_instance(cfg: &VerifyConfig, i: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(i as u64 + 1);
    match cfg.suite {
        Suite::Thm1_1 => thm1_1(cfg, i, &mut rng),
        Suite::Thm6_1 => thm6_1(cfg, i, &mut rng),
        Suite::Thm9_4a | Suite::Thm9_4b | Suite::Thm9_4c | Suite::Thm9_4d => thm9_4(cfg, i, &mut rng),
        Suite::Prop3_1 => prop3_1(cfg, i, &mut rng),
        Suite::Prop3_3 => prop3_3(cfg, i, &mut rng),
        Suite::Prop5_1 => prop5_1(cfg, i, &mut rng),
        Suite::Lemma9_1 => lemma9_1(cfg, i, &mut rng),
        Suite::Cor8_6 => cor8_6(cfg, i, &mut rng),
        Suite::DegreeScaling => degree_scaling(cfg, i, &mut rng),
        Suite::SmoothCriterion => smooth_criterion(cfg, i, &mut rng),
    }
}

/// Share of generic singular forms that must have a single nondegenerate
/// double point.
pub const GENERIC_THRESHOLD: f64 = 0.95;

fn check_config(cfg: &VerifyConfig) -> Result<(), Error> {
    if cfg.trials == 0 {
        return Err(Error::InvalidInput("trials must be positive".into()));
    }
    let Some(spec) = cfg.ring else { return Ok(()) };
    let ok = match cfg.suite {
        Suite::Prop3_1 | Suite::DegreeScaling => spec == RingSpec::Integers,
        Suite::Thm1_1 | Suite::Thm6_1 | Suite::Prop3_3 => spec.dvr().is_some(),
        Suite::Thm9_4a | Suite::Thm9_4b | Suite::Thm9_4c | Suite::Thm9_4d => spec.dvr().is_some(),
        Suite::SmoothCriterion | Suite::Prop5_1 | Suite::Lemma9_1 | Suite::Cor8_6 => {
            matches!(spec, RingSpec::Prime(_) | RingSpec::Dvr(_))
        }
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("suite {} cannot run over {spec}", cfg.suite)))
    }
}

pub fn run_suite(cfg: &VerifyConfig) -> Result<VerifyReport, Error> {
    check_config(cfg)?;
    let count = match cfg.suite {
        Suite::Thm1_1 => cfg.trials + cfg.trials / 10,
        _ => cfg.trials,
    };
    let outcomes: Vec<Outcome> = (0..count).into_par_iter().map(|i| run_instance(cfg, i)).collect();
    let mut failures = Vec::new();
    let mut skipped = Vec::new();
    let mut stats = BTreeMap::new();
    for (i, o) in outcomes.into_iter().enumerate() {
        match o {
            Outcome::Pass(tags) => {
                *stats.entry("passed".to_string()).or_insert(0) += 1;
                for t in tags {
                    *stats.entry(t).or_insert(0) += 1;
                }
            }
            Outcome::Fail(detail) => failures.push(Failure { instance: Some(i), detail }),
            Outcome::Skip(reason) => skipped.push(Skip { instance: i, reason }),
        }
    }
    if cfg.suite == Suite::Prop5_1 {
        let good = stats.get("single_nondegenerate").copied().unwrap_or(0);
        let total = stats.get("passed").copied().unwrap_or(0);
        if total > 0 && (good as f64) < GENERIC_THRESHOLD * total as f64 {
            failures.push(Failure {
                instance: None,
                detail: json!({"why": "too few single nondegenerate double points", "count": good, "of": total}),
            });
        }
    }
    let skip_rate = if count == 0 { 0.0 } else { skipped.len() as f64 / count as f64 };
    Ok(VerifyReport {
        schema: 1,
        suite: cfg.suite,
        ring: cfg.ring.map(|r| r.to_string()),
        seed: cfg.seed,
        trials: cfg.trials,
        instances_run: count,
        passed: failures.is_empty(),
        failures,
        skipped,
        skip_rate,
        stats,
    })
}
