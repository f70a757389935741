//! One handler per subcommand. Each returns the JSON document for standard
//! output and a one-line summary for standard error.

use discval::constructions::{
    isolated_singularities_example, line_singular_family, quadric_normal_form, weierstrass_cubic, QuadricKind,
};
use discval::discriminant::{discriminant_degree, discriminant_value, DiscOptions};
use discval::localanalysis::{check_theorem_1_1, classify_double_point, vmin_exact_quadric, vmin_sample};
use discval::mpoly::{parse_element, parse_poly, MPoly, PointProj};
use discval::rings::{Domain, Dvr, DvrDescriptor, Ring};
use discval::specialfiber::{analyze_singular_locus, LocusOptions};
use discval::{build_extension_field, Error, GaloisField, Integers, PLocal, PrimeField, Rationals, TLocal, Valuation};
use serde_json::json;

use crate::spec::RingSpec;
use crate::{CliError, Output};

/// Valuation where the ring has one.
pub trait MaybeValuation: Ring {
    fn maybe_valuation(&self, _a: &Self::Elem) -> Option<Valuation> {
        None
    }
}

impl MaybeValuation for Integers {}
impl MaybeValuation for Rationals {}
impl MaybeValuation for PrimeField {}
impl MaybeValuation for GaloisField {}
impl MaybeValuation for PLocal {
    fn maybe_valuation(&self, a: &Self::Elem) -> Option<Valuation> {
        Some(self.valuation(a))
    }
}
impl MaybeValuation for TLocal {
    fn maybe_valuation(&self, a: &Self::Elem) -> Option<Valuation> {
        Some(self.valuation(a))
    }
}

macro_rules! with_ring {
    ($spec:expr, $r:ident => $body:expr) => {
        match $spec {
            RingSpec::Integers => {
                let $r = Integers::new();
                $body
            }
            RingSpec::Rationals => {
                let $r = Rationals::new();
                $body
            }
            RingSpec::Dvr(DvrDescriptor::PLocal(p)) => {
                let $r = PLocal::new(p)?;
                $body
            }
            RingSpec::Dvr(DvrDescriptor::TLocal(p)) => {
                let $r = TLocal::new(p)?;
                $body
            }
            RingSpec::Prime(p) => {
                let $r = PrimeField::new(p)?;
                $body
            }
            RingSpec::Extension(p, m) => {
                let $r = build_extension_field(p, m)?;
                $body
            }
        }
    };
}

macro_rules! with_dvr {
    ($desc:expr, $r:ident => $body:expr) => {
        match $desc {
            DvrDescriptor::PLocal(p) => {
                let $r = PLocal::new(p)?;
                $body
            }
            DvrDescriptor::TLocal(p) => {
                let $r = TLocal::new(p)?;
                $body
            }
        }
    };
}

fn prime_field(spec: RingSpec) -> Result<PrimeField, CliError> {
    match spec {
        RingSpec::Prime(p) => Ok(PrimeField::new(p)?),
        other => Err(CliError::Usage(format!("expected a prime field Fq:p, got {other}"))),
    }
}

fn dvr_of(spec: RingSpec) -> Result<DvrDescriptor, CliError> {
    spec.dvr().ok_or_else(|| CliError::Usage(format!("expected a DVR Zp:p or Fpt:p, got {spec}")))
}

fn form_degree<R: Ring>(f: &MPoly<R>) -> Result<u32, CliError> {
    f.homogeneous_degree().ok_or_else(|| CliError::Usage("input is not a nonzero homogeneous form".into()))
}

fn parse_point(field: &PrimeField, nvars: usize, s: &str) -> Result<PointProj<u64>, CliError> {
    let coords: Result<Vec<u64>, _> = s.split(',').map(|c| parse_element(field, c.trim())).collect();
    let coords = coords?;
    if coords.len() != nvars {
        return Err(CliError::Usage(format!("point {s:?} needs {nvars} coordinates")));
    }
    Ok(PointProj::new(field, coords)?)
}

pub struct DiscArgs {
    pub ring: RingSpec,
    pub vars: usize,
    pub degree: Option<u32>,
    pub poly: String,
    pub max_matrix: usize,
}

fn disc_in<R: Domain + MaybeValuation>(ring: &R, a: &DiscArgs) -> Result<Output, CliError> {
    let f = parse_poly(ring, a.vars, &a.poly)?;
    let d = form_degree(&f)?;
    if a.degree.is_some_and(|e| e != d) {
        return Err(CliError::Usage(format!("form has degree {d}, not {}", a.degree.unwrap_or(0))));
    }
    let opts = DiscOptions { max_matrix: a.max_matrix, ..DiscOptions::default() };
    let value = discriminant_value(&f, &opts)?;
    let valuation = ring.maybe_valuation(&value);
    let n = a.vars - 1;
    let text = ring.format_elem(&value);
    let summary = match valuation {
        Some(v) => format!("discriminant {text}, valuation {v}"),
        None => format!("discriminant {text}"),
    };
    let mut json = json!({
        "schema": 1,
        "ring": ring.tag(),
        "n": n,
        "d": d,
        "value": text,
        "degree_in_coefficients": discriminant_degree(n, d),
    });
    if let Some(v) = valuation {
        json["valuation"] = serde_json::to_value(v).expect("valuation");
    }
    Ok(Output::new(json, summary))
}

pub fn disc(a: &DiscArgs) -> Result<Output, CliError> {
    with_ring!(a.ring, r => disc_in(&r, a))
}

pub struct SingularArgs {
    pub field: RingSpec,
    pub vars: usize,
    pub poly: String,
    pub locus: LocusOptions,
}

pub fn singular(a: &SingularArgs) -> Result<Output, CliError> {
    let k = prime_field(a.field)?;
    let f = parse_poly(&k, a.vars, &a.poly)?;
    form_degree(&f)?;
    let rep = analyze_singular_locus(&f, &a.locus)?;
    let summary = match rep.dimension {
        d if d < 0 => "smooth: singular locus empty".to_string(),
        0 => format!("{} singular closed point(s), scheme degree {}", rep.closed_points.len(), rep.degree.unwrap_or(0)),
        d => format!("singular locus of dimension {d}"),
    };
    let mut json = serde_json::to_value(&rep).expect("report");
    json["schema"] = json!(1);
    json["field"] = json!(k.tag());
    Ok(Output::new(json, summary))
}

pub struct ClassifyArgs {
    pub ring: RingSpec,
    pub vars: usize,
    pub poly: String,
    pub point: Option<String>,
    pub disc: DiscOptions,
    pub locus: LocusOptions,
}

fn classify_dvr<R: Dvr>(ring: &R, a: &ClassifyArgs) -> Result<Output, CliError> {
    let f = parse_poly(ring, a.vars, &a.poly)?;
    form_degree(&f)?;
    let rep = check_theorem_1_1(&f, &a.disc, &a.locus)?;
    let summary = format!(
        "valuation {}, single nondegenerate double point: {}, regular: {}, equivalence: {}",
        rep.valuation,
        rep.nondeg_single_point,
        rep.regular.map_or("undetermined".into(), |b| b.to_string()),
        rep.equivalence_holds.map_or("undetermined".into(), |b| b.to_string()),
    );
    let mut json = serde_json::to_value(&rep).expect("report");
    json["schema"] = json!(1);
    json["ring"] = json!(ring.tag());
    Ok(Output::new(json, summary))
}

pub fn classify(a: &ClassifyArgs) -> Result<Output, CliError> {
    match (a.ring, &a.point) {
        (RingSpec::Dvr(desc), None) => with_dvr!(desc, r => classify_dvr(&r, a)),
        (RingSpec::Prime(_), Some(pt)) => {
            let k = prime_field(a.ring)?;
            let f = parse_poly(&k, a.vars, &a.poly)?;
            form_degree(&f)?;
            let q = parse_point(&k, a.vars, pt)?;
            let class = classify_double_point(&f, &q)?;
            let summary = format!("{:?} (Hessian rank {}, local length {})", class.kind, class.hessian_rank, class.local_multiplicity);
            let mut json = serde_json::to_value(&class).expect("class");
            json["schema"] = json!(1);
            json["field"] = json!(k.tag());
            Ok(Output::new(json, summary))
        }
        (RingSpec::Dvr(_), Some(_)) => Err(CliError::Usage("--point needs a prime field Fq:p".into())),
        (RingSpec::Prime(_), None) => Err(CliError::Usage("classifying over a field needs --point".into())),
        (other, _) => Err(CliError::Usage(format!("classify needs Zp:p, Fpt:p or Fq:p, got {other}"))),
    }
}

pub struct VminArgs {
    pub field: RingSpec,
    pub ring: Option<RingSpec>,
    pub vars: usize,
    pub poly: String,
    pub exact_quadric: bool,
    pub trials: usize,
    pub seed: u64,
    pub disc: DiscOptions,
}

fn vmin_in<R: Dvr>(ring: &R, fbar: &MPoly<PrimeField>, a: &VminArgs) -> Result<Output, CliError> {
    if a.exact_quadric {
        let v = vmin_exact_quadric(fbar, ring)?;
        let json = json!({"schema": 1, "ring": ring.tag(), "exact": true, "vmin": v});
        return Ok(Output::new(json, format!("vmin = {v}")));
    }
    let s = vmin_sample(fbar, ring, a.trials, a.seed, &a.disc)?;
    let summary = format!("vmin <= {} after {} lifts", s.bound, s.trials);
    let json = json!({
        "schema": 1,
        "ring": ring.tag(),
        "exact": false,
        "vmin_upper_bound": s.bound,
        "trials": s.trials,
        "seed": a.seed,
        "values": s.values,
    });
    Ok(Output::new(json, summary))
}

pub fn vmin(a: &VminArgs) -> Result<Output, CliError> {
    let k = prime_field(a.field)?;
    let fbar = parse_poly(&k, a.vars, &a.poly)?;
    form_degree(&fbar)?;
    let desc = match a.ring {
        None => DvrDescriptor::PLocal(k.p()),
        Some(spec) => dvr_of(spec)?,
    };
    if desc.prime() != k.p() {
        return Err(CliError::Usage(format!("residue field of {desc} is not {}", k.tag())));
    }
    with_dvr!(desc, r => vmin_in(&r, &fbar, a))
}

pub enum MakeArgs {
    Lemma93 { field: RingSpec, vars: usize, degree: u32, points: String, seed: u64, budget: usize, locus: LocusOptions },
    LineFamily { field: RingSpec, vars: usize, degree: u32, cs: String, g: Option<String>, locus: LocusOptions },
    Quadric { ring: RingSpec, vars: usize, kind: QuadricKind },
    Weierstrass { ring: RingSpec, a: String },
}

fn weierstrass_in<R: Domain + MaybeValuation>(ring: &R, a: &str) -> Result<Output, CliError> {
    let coeffs: Result<Vec<R::Elem>, _> = a.split(',').map(|c| parse_element(ring, c.trim())).collect();
    let coeffs = coeffs?;
    let [a1, a2, a3, a4, a6] = coeffs.as_slice() else {
        return Err(CliError::Usage("weierstrass needs five coefficients a1,a2,a3,a4,a6".into()));
    };
    let (f, classical) = weierstrass_cubic(ring, [a1, a2, a3, a4, a6]);
    let delta = discriminant_value(&f, &DiscOptions::default())?;
    let mut verification = json!({
        "classical_discriminant": ring.format_elem(&classical),
        "discriminant": ring.format_elem(&delta),
    });
    if let (Some(vc), Some(vd)) = (ring.maybe_valuation(&classical), ring.maybe_valuation(&delta)) {
        verification["classical_valuation"] = serde_json::to_value(vc).expect("valuation");
        verification["valuation"] = serde_json::to_value(vd).expect("valuation");
    }
    let json = json!({"schema": 1, "kind": "weierstrass", "ring": ring.tag(), "vars": 3, "poly": f.to_string(), "verification": verification});
    Ok(Output::new(json, f.to_string()))
}

fn quadric_in<R: Domain + MaybeValuation>(ring: &R, vars: usize, kind: QuadricKind) -> Result<Output, CliError> {
    if vars < 2 {
        return Err(CliError::Usage("a quadric needs at least 2 variables".into()));
    }
    let q = quadric_normal_form(ring, kind, vars - 1)?;
    let delta = discriminant_value(&q, &DiscOptions::default())?;
    let mut verification = json!({"discriminant": ring.format_elem(&delta)});
    if let Some(v) = ring.maybe_valuation(&delta) {
        verification["valuation"] = serde_json::to_value(v).expect("valuation");
    }
    let json = json!({"schema": 1, "kind": kind, "ring": ring.tag(), "vars": vars, "poly": q.to_string(), "verification": verification});
    Ok(Output::new(json, q.to_string()))
}

pub fn make(a: &MakeArgs) -> Result<Output, CliError> {
    match a {
        MakeArgs::Lemma93 { field, vars, degree, points, seed, budget, locus: _ } => {
            let k = prime_field(*field)?;
            let pts: Result<Vec<_>, _> = points.split(';').map(|s| parse_point(&k, *vars, s)).collect();
            let w = isolated_singularities_example(&k, &pts?, *degree, *seed, *budget)?;
            let json = json!({
                "schema": 1,
                "kind": "lemma93",
                "ring": k.tag(),
                "vars": vars,
                "poly": w.form.to_string(),
                "verification": {"attempts": w.attempts, "singular_locus": w.report},
            });
            Ok(Output::new(json, w.form.to_string()))
        }
        MakeArgs::LineFamily { field, vars, degree, cs, g, locus } => {
            let k = prime_field(*field)?;
            let cs: Result<Vec<u64>, _> = cs.split(',').map(|c| parse_element(&k, c.trim())).collect();
            let n = vars.checked_sub(1).ok_or_else(|| CliError::Usage("need at least 3 variables".into()))?;
            let g = g.as_ref().map(|s| parse_poly(&k, n.saturating_sub(2), s)).transpose()?;
            let h = line_singular_family(&k, n, *degree, &cs?, g.as_ref())?;
            let rep = analyze_singular_locus(&h, locus)?;
            let json = json!({
                "schema": 1,
                "kind": "line-family",
                "ring": k.tag(),
                "vars": vars,
                "poly": h.to_string(),
                "verification": {"finite": rep.dimension == 0, "singular_locus": rep},
            });
            Ok(Output::new(json, h.to_string()))
        }
        MakeArgs::Quadric { ring, vars, kind } => with_ring!(*ring, r => quadric_in(&r, *vars, *kind)),
        MakeArgs::Weierstrass { ring, a } => with_ring!(*ring, r => weierstrass_in(&r, a)),
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::InvalidInput(_)
            | Error::DimensionMismatch { .. }
            | Error::IndexOutOfRange { .. }
            | Error::RingMismatch(..) => CliError::Usage(e.to_string()),
            other => CliError::Compute(other),
        }
    }
}
