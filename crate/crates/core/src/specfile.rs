//! JSON instance files: a number field, scalar equations, an evaluation point and defaults.
//!
//! Every number is a string holding an exact rational `"p/q"`. A field element is either
//! such a string or an array of strings giving power-basis coordinates. Polynomials in `z`
//! are arrays ascending in degree; minimal polynomials are listed descending.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{FieldElement, NumberField};
use crate::polyseries::{MonomialOrder, MultiPoly, Poly};
use crate::systems::{FunctionSpec, Kind, LinearSystemSpec, RatFunc};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawElement {
    Rational(String),
    Coords(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawField {
    /// Descending coefficients of the minimal polynomial of the generator.
    pub minpoly: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RawKind {
    Differential,
    Mahler,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGrowth {
    pub constant: String,
    pub rate: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFunction {
    #[serde(default)]
    pub name: String,
    pub kind: RawKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    /// `a_0, …, a_m`, each ascending in `z`.
    pub coeffs: Vec<Vec<RawElement>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs: Option<Vec<RawElement>>,
    #[serde(default)]
    pub initial: Vec<RawElement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub growth: Option<RawGrowth>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<String>,
}

/// Sparse polynomial: `[[exponents], coefficient]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMultiPoly {
    pub terms: Vec<(Vec<u32>, RawElement)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRatFunc {
    pub num: Vec<RawElement>,
    #[serde(default = "one_poly")]
    pub den: Vec<RawElement>,
}

fn one_poly() -> Vec<RawElement> {
    vec![RawElement::Rational("1".into())]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSystem {
    pub kind: RawKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    /// Row-major entries of `A`.
    pub matrix: Vec<Vec<RawRatFunc>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RawOrder {
    Lex,
    Grlex,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawIdeal {
    #[serde(default)]
    pub name: String,
    pub nvars: usize,
    pub order: RawOrder,
    pub generators: Vec<RawMultiPoly>,
}

/// Defaults for command parameters; command-line flags take precedence.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Defaults {
    pub precision: Option<u32>,
    pub order: Option<usize>,
    pub seed: Option<u64>,
    pub d: Option<usize>,
    pub h_max: Option<u64>,
    pub n: Option<usize>,
    pub vstar: Option<usize>,
    pub eps: Option<String>,
    pub steps: Option<usize>,
    pub delta: Option<usize>,
    pub h: Option<usize>,
    pub margin: Option<usize>,
    pub z_degree: Option<usize>,
    pub trials: Option<usize>,
    pub big_m: Option<usize>,
    pub big_n: Option<usize>,
    pub schedule: Option<Vec<u64>>,
    pub rho: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpecFile {
    #[serde(default)]
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<RawField>,
    #[serde(default)]
    pub functions: Vec<RawFunction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<RawElement>,
    #[serde(default)]
    pub embedding: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_t: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value_relations: Option<Vec<RawMultiPoly>>,
    /// The polynomial `P` of the dimension ledger, integer coefficients.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ledger_poly: Option<RawMultiPoly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<RawSystem>,
    #[serde(default)]
    pub ideals: Vec<RawIdeal>,
    #[serde(default)]
    pub defaults: Defaults,
}

#[derive(Clone, Debug)]
pub struct Ideal {
    pub name: String,
    pub order: MonomialOrder,
    pub generators: Vec<MultiPoly<FieldElement>>,
}

/// A validated instance file.
#[derive(Clone, Debug)]
pub struct SpecFile {
    pub name: String,
    pub field: NumberField,
    pub functions: Vec<FunctionSpec>,
    pub alpha: Option<FieldElement>,
    pub embedding: usize,
    pub declared_t: Option<u32>,
    pub value_relations: Option<Vec<MultiPoly<FieldElement>>>,
    pub ledger_poly: Option<MultiPoly<BigInt>>,
    pub system: Option<LinearSystemSpec>,
    pub ideals: Vec<Ideal>,
    pub defaults: Defaults,
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    if t.contains('/') {
        let (n, d) = t.split_once('/').unwrap();
        let n = BigInt::from_str(n.trim()).map_err(|_| Error::Invalid(format!("bad rational {s:?}")))?;
        let d = BigInt::from_str(d.trim()).map_err(|_| Error::Invalid(format!("bad rational {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Invalid(format!("zero denominator in {s:?}")));
        }
        Ok(BigRational::new(n, d))
    } else {
        BigInt::from_str(t).map(BigRational::from_integer).map_err(|_| Error::Invalid(format!("bad rational {s:?}")))
    }
}

pub fn rational_string(x: &BigRational) -> String {
    x.to_string()
}

fn element(k: &NumberField, e: &RawElement) -> Result<FieldElement> {
    match e {
        RawElement::Rational(s) => Ok(k.from_rational(parse_rational(s)?)),
        RawElement::Coords(v) => {
            if v.len() > k.degree() {
                return Err(Error::Invalid(format!("{} coordinates for a field of degree {}", v.len(), k.degree())));
            }
            let mut c = v.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
            c.resize(k.degree(), BigRational::zero());
            k.element(c)
        }
    }
}

pub fn raw_element(x: &FieldElement) -> RawElement {
    match x.as_rational() {
        Some(r) => RawElement::Rational(rational_string(r)),
        None => RawElement::Coords(x.coords().iter().map(rational_string).collect()),
    }
}

fn poly(k: &NumberField, v: &[RawElement]) -> Result<Poly> {
    Ok(Poly::new(k, v.iter().map(|e| element(k, e)).collect::<Result<Vec<_>>>()?))
}

pub fn raw_poly(p: &Poly) -> Vec<RawElement> {
    p.coeffs().iter().map(raw_element).collect()
}

fn kind(k: RawKind, q: Option<usize>) -> Result<Kind> {
    match (k, q) {
        (RawKind::Differential, None) => Ok(Kind::Differential),
        (RawKind::Differential, Some(_)) => Err(Error::Invalid("differential equations take no q".into())),
        (RawKind::Mahler, Some(q)) => Ok(Kind::Mahler { q }),
        (RawKind::Mahler, None) => Err(Error::Invalid("Mahler equations need q".into())),
    }
}

fn raw_kind(k: Kind) -> (RawKind, Option<usize>) {
    match k {
        Kind::Differential => (RawKind::Differential, None),
        Kind::Mahler { q } => (RawKind::Mahler, Some(q)),
    }
}

fn multipoly(k: &NumberField, nvars: usize, raw: &RawMultiPoly) -> Result<MultiPoly<FieldElement>> {
    let mut terms = Vec::with_capacity(raw.terms.len());
    for (e, c) in &raw.terms {
        if e.len() != nvars {
            return Err(Error::DimensionMismatch { expected: nvars, found: e.len() });
        }
        terms.push((e.clone(), element(k, c)?));
    }
    Ok(MultiPoly::from_terms(nvars, terms))
}

fn int_multipoly(nvars: usize, raw: &RawMultiPoly) -> Result<MultiPoly<BigInt>> {
    let mut terms = Vec::with_capacity(raw.terms.len());
    for (e, c) in &raw.terms {
        if e.len() != nvars {
            return Err(Error::DimensionMismatch { expected: nvars, found: e.len() });
        }
        let RawElement::Rational(s) = c else { return Err(Error::Invalid("ledger polynomial needs integer coefficients".into())) };
        let r = parse_rational(s)?;
        if !r.is_integer() {
            return Err(Error::Invalid("ledger polynomial needs integer coefficients".into()));
        }
        terms.push((e.clone(), r.to_integer()));
    }
    Ok(MultiPoly::from_terms(nvars, terms))
}

pub fn raw_multipoly(p: &MultiPoly<FieldElement>) -> RawMultiPoly {
    RawMultiPoly { terms: p.sorted_terms(MonomialOrder::GrLex).into_iter().map(|(e, c)| (e.clone(), raw_element(c))).collect() }
}

pub fn raw_function(f: &FunctionSpec) -> RawFunction {
    let (kind, q) = raw_kind(f.kind);
    RawFunction {
        name: f.name.clone(),
        kind,
        q,
        coeffs: f.coeffs.iter().map(raw_poly).collect(),
        rhs: f.rhs.as_ref().map(raw_poly),
        initial: f.initial.iter().map(raw_element).collect(),
        growth: f.growth.as_ref().map(|g| RawGrowth { constant: rational_string(&g.constant), rate: rational_string(&g.rate) }),
        radius: f.radius.as_ref().map(rational_string),
    }
}

pub fn raw_system(s: &LinearSystemSpec) -> RawSystem {
    let (kind, q) = raw_kind(s.kind);
    let matrix = s
        .entries()
        .iter()
        .map(|row| row.iter().map(|e| RawRatFunc { num: raw_poly(&e.num), den: raw_poly(&e.den) }).collect())
        .collect();
    RawSystem { kind, q, matrix }
}

pub fn system(k: &NumberField, raw: &RawSystem) -> Result<LinearSystemSpec> {
    let kind = kind(raw.kind, raw.q)?;
    let entries = raw
        .matrix
        .iter()
        .map(|row| row.iter().map(|e| Ok(RatFunc::new(poly(k, &e.num)?, poly(k, &e.den)?))).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    LinearSystemSpec::from_entries(kind, k, entries)
}

fn function(k: &NumberField, raw: &RawFunction) -> Result<FunctionSpec> {
    let kind = kind(raw.kind, raw.q)?;
    let coeffs = raw.coeffs.iter().map(|c| poly(k, c)).collect::<Result<Vec<_>>>()?;
    let initial = raw.initial.iter().map(|e| element(k, e)).collect::<Result<Vec<_>>>()?;
    let mut f = FunctionSpec::new(k, kind, coeffs, initial)?.named(&raw.name);
    if let Some(b) = &raw.rhs {
        f = f.with_rhs(poly(k, b)?);
    }
    if let Some(g) = &raw.growth {
        f = f.with_growth(parse_rational(&g.constant)?, parse_rational(&g.rate)?);
    }
    if let Some(r) = &raw.radius {
        f = f.with_radius(parse_rational(r)?);
    }
    f.validate()?;
    Ok(f)
}

impl SpecFile {
    pub fn from_json(text: &str) -> Result<SpecFile> {
        let raw: RawSpecFile = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("spec file: {e}")))?;
        SpecFile::from_raw(&raw)
    }

    pub fn from_raw(raw: &RawSpecFile) -> Result<SpecFile> {
        let field = match &raw.field {
            None => NumberField::rationals(),
            Some(f) => {
                let mut m = f.minpoly.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
                m.reverse();
                NumberField::new(m)?
            }
        };
        let functions = raw.functions.iter().map(|f| function(&field, f)).collect::<Result<Vec<_>>>()?;
        if let Some(f0) = functions.first() {
            if functions.iter().any(|f| f.kind != f0.kind) {
                return Err(Error::KindMismatch("all functions of an instance must share their kind and q".into()));
            }
        }
        let m = functions.len();
        let alpha = raw.alpha.as_ref().map(|a| element(&field, a)).transpose()?;
        if raw.embedding >= field.degree() {
            return Err(Error::Invalid(format!("embedding {} out of range for degree {}", raw.embedding, field.degree())));
        }
        let value_relations = raw
            .value_relations
            .as_ref()
            .map(|v| v.iter().map(|p| multipoly(&field, m, p)).collect::<Result<Vec<_>>>())
            .transpose()?;
        let ledger_poly = raw.ledger_poly.as_ref().map(|p| int_multipoly(m, p)).transpose()?;
        let system = raw.system.as_ref().map(|s| system(&field, s)).transpose()?;
        let ideals = raw
            .ideals
            .iter()
            .map(|i| {
                Ok(Ideal {
                    name: i.name.clone(),
                    order: match i.order {
                        RawOrder::Lex => MonomialOrder::Lex,
                        RawOrder::Grlex => MonomialOrder::GrLex,
                    },
                    generators: i.generators.iter().map(|g| multipoly(&field, i.nvars, g)).collect::<Result<Vec<_>>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if functions.is_empty() && system.is_none() && ideals.is_empty() {
            return Err(Error::Invalid("spec file declares no functions, system or ideals".into()));
        }
        Ok(SpecFile {
            name: raw.name.clone(),
            field,
            functions,
            alpha,
            embedding: raw.embedding,
            declared_t: raw.declared_t,
            value_relations,
            ledger_poly,
            system,
            ideals,
            defaults: raw.defaults.clone(),
        })
    }

    /// The common equation kind, if any function is declared.
    pub fn kind(&self) -> Option<Kind> {
        self.functions.first().map(|f| f.kind)
    }
}
