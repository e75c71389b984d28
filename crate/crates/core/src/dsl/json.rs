//! Canonical JSON. Objects have sorted keys, rationals are
//! `{"num": "p", "den": "q"}` with `q > 0` in lowest terms, and a monomial
//! maps generator names to exponents.
//!
//! Documents round-trip through [`to_json`] and [`from_json`]; the report
//! encoders are output only.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{AlgebraDocument, DslError, Fibration, GeneratorDecl, Section};
use crate::algebra::{AlgebraMap, Derivation, FreeCga, Generator, Monomial, Polynomial};
use crate::cohomology::{GradedAlgebra, Presentation, Surjectivity};
use crate::formality::{
    CertificateReport, FormalityVerdict, GaugeStep, NegativeDerivationReport, ObstructionClass,
    ObstructionStatus, Outcome, ReplayReport, TnczReport,
};
use crate::models::{BigradedModel, FilteredModel, MinimalModel};
use crate::scalar::Scalar;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Rational {
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Term {
    coefficient: Rational,
    monomial: BTreeMap<String, u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorJson {
    name: String,
    degree: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lower: Option<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SectionJson {
    generators: Vec<GeneratorJson>,
    #[serde(default)]
    differential: BTreeMap<String, Vec<Term>>,
    #[serde(default)]
    complete: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FibrationJson {
    base: SectionJson,
    #[serde(default)]
    twist: BTreeMap<String, Vec<Term>>,
    #[serde(default)]
    theta: BTreeMap<String, Vec<Term>>,
    #[serde(default)]
    via: Vec<Term>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocumentJson {
    name: String,
    generators: Vec<GeneratorJson>,
    #[serde(default)]
    differential: BTreeMap<String, Vec<Term>>,
    #[serde(default)]
    complete: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fibration: Option<FibrationJson>,
}

fn rational<F: Scalar>(c: &F) -> Rational {
    let (num, den) = c.to_num_den();
    Rational { num, den }
}

/// A rational as canonical JSON.
pub fn scalar<F: Scalar>(c: &F) -> Value {
    let (num, den) = c.to_num_den();
    json!({ "num": num, "den": den })
}

fn terms<F: Scalar>(alg: &FreeCga, p: &Polynomial<F>) -> Vec<Term> {
    let mut out: Vec<(&Monomial, &F)> = p.iter().collect();
    out.sort_by(|a, b| b.0.lex_cmp(a.0));
    out.into_iter()
        .map(|(m, c)| Term {
            coefficient: rational(c),
            monomial: m
                .factors()
                .iter()
                .map(|&(g, e)| (alg.generator(g as usize).name.clone(), e))
                .collect(),
        })
        .collect()
}

/// A polynomial as a list of terms in descending monomial order.
pub fn polynomial<F: Scalar>(alg: &FreeCga, p: &Polynomial<F>) -> Value {
    serde_json::to_value(terms(alg, p)).expect("terms serialize")
}

/// A derivation by generator name, with its bidegree.
pub fn derivation<F: Scalar>(domain: &FreeCga, values: &FreeCga, theta: &Derivation<F>) -> Value {
    let map: serde_json::Map<String, Value> = theta
        .values()
        .iter()
        .map(|(g, v)| (domain.generator(*g).name.clone(), polynomial(values, v)))
        .collect();
    json!({ "degree": theta.degree, "lower_shift": theta.lower_shift, "values": map })
}

fn generators(alg: &FreeCga) -> Value {
    alg.generators()
        .iter()
        .map(|g| json!({ "name": g.name, "degree": g.degree, "lower": g.lower }))
        .collect()
}

fn algebra_map<F: Scalar>(source: &FreeCga, target: &FreeCga, phi: &AlgebraMap<F>) -> Value {
    let map: serde_json::Map<String, Value> = phi
        .images
        .iter()
        .map(|(g, v)| (source.generator(*g).name.clone(), polynomial(target, v)))
        .collect();
    Value::Object(map)
}

fn section_json<F: Scalar>(s: &Section<F>) -> SectionJson {
    let alg = decl_algebra(&s.generators.iter().collect::<Vec<_>>());
    SectionJson {
        generators: s.generators.iter().map(generator_json).collect(),
        differential: s
            .differential
            .iter()
            .map(|(g, v)| (s.generators[*g].name.clone(), terms(&alg, v)))
            .collect(),
        complete: s.complete,
    }
}

fn generator_json(g: &GeneratorDecl) -> GeneratorJson {
    GeneratorJson {
        name: g.name.clone(),
        degree: g.degree,
        lower: g.lower,
    }
}

fn decl_algebra(decls: &[&GeneratorDecl]) -> FreeCga {
    let gens = decls
        .iter()
        .map(|g| Generator::with_lower(g.name.clone(), g.degree, g.lower.unwrap_or(0)))
        .collect();
    FreeCga::new(gens, 0).expect("document generators are valid")
}

/// A document as canonical JSON.
pub fn to_json<F: Scalar>(doc: &AlgebraDocument<F>) -> Value {
    let main = section_json(&doc.section);
    let fibration = doc.fibration.as_ref().map(|f| {
        let names = |m: &BTreeMap<usize, Polynomial<F>>, alg: &FreeCga| {
            m.iter()
                .map(|(x, v)| (doc.section.generators[*x].name.clone(), terms(alg, v)))
                .collect()
        };
        let total = decl_algebra(&doc.declared().collect::<Vec<_>>());
        let base = decl_algebra(&f.base.generators.iter().collect::<Vec<_>>());
        let fiber = decl_algebra(&doc.section.generators.iter().collect::<Vec<_>>());
        FibrationJson {
            base: section_json(&f.base),
            twist: names(&f.twist, &total),
            theta: names(&f.theta, &fiber),
            via: terms(&base, &f.via),
        }
    });
    let out = DocumentJson {
        name: doc.name.clone(),
        generators: main.generators,
        differential: main.differential,
        complete: main.complete,
        fibration,
    };
    serde_json::to_value(out).expect("documents serialize")
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> DslError {
    DslError::Schema {
        path: path.into(),
        message: message.into(),
    }
}

fn read_poly<F: Scalar>(alg: &FreeCga, ts: &[Term], path: &str) -> Result<Polynomial<F>, DslError> {
    let mut out = Polynomial::zero();
    for (k, t) in ts.iter().enumerate() {
        let here = format!("{path}[{k}]");
        let c = F::from_num_den(&t.coefficient.num, &t.coefficient.den)
            .ok_or_else(|| schema(format!("{here}.coefficient"), "not a rational"))?;
        let mut term = Polynomial::constant(c);
        let mut factors: Vec<(usize, u32)> = Vec::new();
        for (name, e) in &t.monomial {
            let g = alg.index_of(name).ok_or_else(|| {
                schema(
                    format!("{here}.monomial.{name}"),
                    format!("unknown generator `{name}`"),
                )
            })?;
            if *e == 0 || (alg.is_odd(g) && *e > 1) {
                return Err(schema(
                    format!("{here}.monomial.{name}"),
                    format!("bad exponent {e}"),
                ));
            }
            factors.push((g, *e));
        }
        factors.sort_unstable();
        for (g, e) in factors {
            term = alg.mul(&term, &Polynomial::term(Monomial::power(g, e), F::one()));
        }
        out += &term;
    }
    Ok(out)
}

fn read_section<F: Scalar>(s: &SectionJson, path: &str) -> Result<Section<F>, DslError> {
    let generators: Vec<GeneratorDecl> = s
        .generators
        .iter()
        .map(|g| GeneratorDecl {
            name: g.name.clone(),
            degree: g.degree,
            lower: g.lower,
        })
        .collect();
    for (k, g) in generators.iter().enumerate() {
        if g.degree < 2 {
            return Err(schema(
                format!("{path}generators[{k}].degree"),
                "degrees start at 2",
            ));
        }
        if generators[..k].iter().any(|h| h.name == g.name) {
            return Err(schema(
                format!("{path}generators[{k}].name"),
                format!("duplicate generator `{}`", g.name),
            ));
        }
    }
    let alg = decl_algebra(&generators.iter().collect::<Vec<_>>());
    let mut differential = BTreeMap::new();
    for (name, ts) in &s.differential {
        let here = format!("{path}differential.{name}");
        let g = alg
            .index_of(name)
            .ok_or_else(|| schema(&here, format!("unknown generator `{name}`")))?;
        let p = read_poly(&alg, ts, &here)?;
        if !p.is_zero() {
            differential.insert(g, p);
        }
    }
    Ok(Section {
        generators,
        differential,
        complete: s.complete,
    })
}

/// Reads a document from JSON and validates it as [`super::parse`] would.
/// Errors carry a JSON path such as `$.generators[0].degree`.
pub fn from_json<F: Scalar>(text: &str) -> Result<AlgebraDocument<F>, DslError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: DocumentJson = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." {
            "$".to_string()
        } else {
            format!("$.{path}")
        };
        schema(path, e.inner().to_string())
    })?;
    let section = read_section(
        &SectionJson {
            generators: raw.generators,
            differential: raw.differential,
            complete: raw.complete,
        },
        "$.",
    )?;
    let fibration = match &raw.fibration {
        None => None,
        Some(f) => {
            let base = read_section::<F>(&f.base, "$.fibration.base.")?;
            let all: Vec<&GeneratorDecl> = base
                .generators
                .iter()
                .chain(section.generators.iter())
                .collect();
            let total = decl_algebra(&all);
            let fiber = decl_algebra(&section.generators.iter().collect::<Vec<_>>());
            let base_alg = decl_algebra(&base.generators.iter().collect::<Vec<_>>());
            let read_map = |m: &BTreeMap<String, Vec<Term>>, alg: &FreeCga, key: &str| {
                let mut out = BTreeMap::new();
                for (name, ts) in m {
                    let here = format!("$.fibration.{key}.{name}");
                    let x = fiber.index_of(name).ok_or_else(|| {
                        schema(&here, format!("unknown fiber generator `{name}`"))
                    })?;
                    out.insert(x, read_poly(alg, ts, &here)?);
                }
                Ok::<_, DslError>(out)
            };
            Some(Fibration {
                twist: read_map(&f.twist, &total, "twist")?,
                theta: read_map(&f.theta, &fiber, "theta")?,
                via: read_poly(&base_alg, &f.via, "$.fibration.via")?,
                base,
            })
        }
    };
    if all_names_clash(&section, fibration.as_ref()) {
        return Err(schema(
            "$.generators",
            "a fiber generator repeats a base generator name",
        ));
    }
    let doc = AlgebraDocument {
        name: raw.name,
        section,
        fibration,
        warnings: Vec::new(),
    };
    // The text form carries every check; run them on the canonical print.
    super::parse::<F>(&doc.to_string()).map_err(|e| schema("$", e.to_string()))?;
    Ok(doc)
}

fn all_names_clash<F>(section: &Section<F>, fib: Option<&Fibration<F>>) -> bool {
    fib.is_some_and(|f| {
        f.base
            .generators
            .iter()
            .any(|b| section.generators.iter().any(|g| g.name == b.name))
    })
}

/// Pretty-printed canonical JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

pub fn graded_algebra<F: Scalar>(h: &GradedAlgebra<F>) -> Value {
    let labels: Vec<Value> = (0..=h.cap()).map(|n| json!(h.labels(n))).collect();
    let products: Vec<Value> = h
        .products()
        .iter()
        .map(|((i, j), rows)| {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| r.iter().map(scalar).collect())
                .collect();
            json!({ "degrees": [i, j], "products": rows })
        })
        .collect();
    json!({
        "cap": h.cap(),
        "betti": h.betti(),
        "labels": labels,
        "products": products,
        "generators": h.generators().iter().map(|(n, k)| json!({ "degree": n, "index": k })).collect::<Vec<_>>(),
    })
}

/// Betti numbers and a representative cocycle per basis class.
pub fn cohomology<F: Scalar>(alg: &FreeCga, p: &Presentation<F>) -> Value {
    let degrees: Vec<Value> = p
        .degrees
        .iter()
        .filter(|d| d.dim() > 0)
        .map(|d| {
            json!({
                "degree": d.degree,
                "representatives": d.representatives().iter().map(|z| polynomial(alg, z)).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "cap": p.top(),
        "betti": p.algebra.betti(),
        "classes": degrees,
    })
}

pub fn presentation<F: Scalar>(alg: &FreeCga, p: &Presentation<F>) -> Value {
    let mut v = cohomology(alg, p);
    v["algebra"] = graded_algebra(&p.algebra);
    v
}

pub fn minimal_model<F: Scalar>(m: &MinimalModel<F>, target: &FreeCga) -> Value {
    json!({
        "top": m.top,
        "generators": generators(&m.cdga.algebra),
        "differential": derivation(&m.cdga.algebra, &m.cdga.algebra, &m.cdga.differential),
        "map": algebra_map(&m.cdga.algebra, target, &m.phi),
    })
}

pub fn bigraded_model<F: Scalar>(m: &BigradedModel<F>) -> Value {
    let counts: Vec<Value> = m
        .generator_counts()
        .iter()
        .map(|((n, p), k)| json!({ "degree": n, "lower": p, "count": k }))
        .collect();
    json!({
        "top": m.top,
        "generators": generators(&m.algebra),
        "counts": counts,
        "differential": derivation(&m.algebra, &m.algebra, &m.d),
    })
}

/// A filtered model with `D - d` split by stage under `deformation`.
pub fn filtered_model<F: Scalar>(m: &FilteredModel<F>) -> Value {
    let deformation: Vec<Value> = m
        .deformations()
        .iter()
        .map(|(i, di)| json!({ "stage": i, "derivation": derivation(&m.algebra, &m.algebra, di) }))
        .collect();
    json!({
        "valid_through": m.valid_through,
        "generators": generators(&m.algebra),
        "d": derivation(&m.algebra, &m.algebra, &m.d),
        "D": derivation(&m.algebra, &m.algebra, &m.big_d),
        "deformation": deformation,
        "pi": algebra_map(&m.algebra, &m.target.algebra, &m.pi),
    })
}

fn status<F: Scalar>(alg: &FreeCga, s: &ObstructionStatus<F>) -> Value {
    match s {
        ObstructionStatus::Zero => json!({ "kind": "zero" }),
        ObstructionStatus::Exact(mu) => {
            json!({ "kind": "exact", "witness": derivation(alg, alg, mu) })
        }
        ObstructionStatus::NonExact => json!({ "kind": "non_exact" }),
    }
}

pub fn obstruction<F: Scalar>(alg: &FreeCga, o: &ObstructionClass<F>) -> Value {
    json!({
        "stage": o.stage,
        "representative": derivation(alg, alg, &o.representative),
        "status": status(alg, &o.status),
        "rows_through": o.rows_through,
    })
}

fn transcript<F: Scalar>(alg: &FreeCga, t: &[GaugeStep<F>]) -> Value {
    t.iter()
        .map(|s| json!({ "stage": s.stage, "witness": derivation(alg, alg, &s.witness) }))
        .collect()
}

fn outcome<F: Scalar>(alg: &FreeCga, o: &Outcome<F>) -> Value {
    match o {
        Outcome::FormalUpTo(n) => json!({ "label": o.label(), "formal": true, "cap": n }),
        Outcome::NonFormal {
            stage,
            obstruction: ob,
        } => json!({
            "label": o.label(),
            "formal": false,
            "stage": stage,
            "obstruction": obstruction(alg, ob),
        }),
    }
}

pub fn verdict<F: Scalar>(v: &FormalityVerdict<F>) -> Value {
    let alg = &v.model.algebra;
    json!({
        "verdict": outcome(alg, &v.outcome),
        "cap": v.cap,
        "transcript": transcript(alg, &v.transcript),
        "model": filtered_model(&v.model),
    })
}

pub fn halperin<F: Scalar>(r: &NegativeDerivationReport<F>) -> Value {
    let degrees: Vec<Value> = r
        .degrees
        .iter()
        .map(|d| {
            let basis: Vec<Value> = d
                .basis
                .iter()
                .map(|b| {
                    b.iter()
                        .map(|v| v.iter().map(scalar).collect::<Vec<_>>())
                        .collect()
                })
                .collect();
            json!({ "degree": d.q, "dimension": d.basis.len(), "basis": basis })
        })
        .collect();
    json!({
        "halperin": r.halperin,
        "generators": r.generators.iter().map(|(n, k)| json!({ "degree": n, "index": k })).collect::<Vec<_>>(),
        "betti": r.algebra.betti(),
        "degrees": degrees,
    })
}

fn surjectivity(s: &Surjectivity) -> Value {
    match s {
        Surjectivity::Surjective => json!({ "surjective": true }),
        Surjectivity::FailsAt(n) => json!({ "surjective": false, "fails_at": n }),
    }
}

pub fn tncz(r: &TnczReport) -> Value {
    json!({
        "tncz": r.is_tncz(),
        "cap": r.cap,
        "fiber_betti": r.fiber_betti,
        "ranks": r.ranks,
        "result": surjectivity(&r.result),
    })
}

pub fn certificate<F: Scalar>(r: &CertificateReport<F>) -> Value {
    let (certified, reason) = match &r.certificate {
        crate::formality::Certificate::Certified => (true, None),
        crate::formality::Certificate::NotCertified(why) => (false, Some(why.clone())),
    };
    json!({
        "certified": certified,
        "reason": reason,
        "base": r.base.label(),
        "total": r.total.label(),
        "transcript": transcript(&r.algebra, &r.transcript),
        "cap": r.cap,
    })
}

pub fn replay<F: Scalar>(r: &ReplayReport<F>) -> Value {
    let alg = &r.algebra;
    json!({
        "stage": r.stage,
        "top": r.top,
        "base_deformation": derivation(alg, alg, &r.base_deformation),
        "j_matches": r.j_matches,
        "upstairs": status(alg, &r.upstairs),
        "downstairs": status(alg, &r.downstairs),
        "pulled_back": r.pulled_back,
        "total": r.total.as_ref().map(|s| status(alg, s)),
        "injectivity_consistent": r.injectivity_consistent(),
    })
}
