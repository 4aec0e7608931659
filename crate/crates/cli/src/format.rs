//! Model description files.
//!
//! A file is a JSON object with a `domain` block, a `model` block tagged by
//! `kind`, and an optional `check` block holding default settings:
//!
//! ```json
//! {
//!   "domain": { "scales": [3, 3] },
//!   "model": { "kind": "affine", "weights": ["1", "3"], "bias": "0" },
//!   "check": { "reading": "noncontainment", "seed": 7 }
//! }
//! ```
//!
//! Numbers are written as canonical `"p"` or `"p/q"` strings so that no
//! binary float ever reaches the exact core. Output values are strings too:
//! anything starting with a digit or `-` is a rational, anything else must be
//! an atom (`[A-Za-z_][A-Za-z0-9_-]*`); a classifier pair is `["1/2", "cat"]`.
//! Unknown fields are rejected everywhere and every diagnostic names the path
//! of the offending field.

use std::fmt;
use std::str::FromStr;

use learncheck_core::model::{Indicator, ModelKind};
use learncheck_core::value::{format_rational, parse_rational};
use learncheck_core::verifier::{Reading, SubsetPolicy};
use learncheck_core::{DiscreteDomain, Model, OutputValue, Point, Region};
use num_rational::BigRational;
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SpecError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
}

impl SpecError {
    fn at(path: impl Into<String>, message: impl fmt::Display) -> Self {
        SpecError::Schema { path: path.into(), message: message.to_string() }
    }

    pub fn path(&self) -> Option<&str> {
        match self {
            SpecError::Schema { path, .. } => Some(path),
            SpecError::Syntax { .. } => None,
        }
    }
}

/// An exact rational written as a canonical string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rational(pub BigRational);

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Rational;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string such as \"3\" or \"-1/2\"")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
                parse_rational(v).map(Rational).map_err(E::custom)
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
                Err(E::custom(format!("numbers must be strings (hint: write \"{v}\")")))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
                Err(E::custom(format!("numbers must be strings (hint: write \"{v}\")")))
            }
            fn visit_f64<E: de::Error>(self, _: f64) -> Result<Rational, E> {
                Err(E::custom("floating-point numbers are not accepted; write an exact \"p/q\" string"))
            }
        }
        d.deserialize_any(V)
    }
}

fn is_atom(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

/// Parses the string form of an output value: a rational or an atom.
pub fn parse_scalar_value(text: &str) -> Result<OutputValue, String> {
    if text.starts_with('-') || text.starts_with(|c: char| c.is_ascii_digit()) {
        parse_rational(text).map(OutputValue::rational).map_err(|e| e.to_string())
    } else if is_atom(text) {
        Ok(OutputValue::atom(text))
    } else {
        Err(format!(
            "`{text}` is neither a rational nor an atom (atoms match [A-Za-z_][A-Za-z0-9_-]*)"
        ))
    }
}

fn check_atom(text: &str) -> Result<(), String> {
    if is_atom(text) {
        Ok(())
    } else {
        Err(format!("`{text}` is not an atom (atoms match [A-Za-z_][A-Za-z0-9_-]*)"))
    }
}

/// An output value in file syntax.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Literal(pub OutputValue);

impl Literal {
    fn null() -> Self {
        Literal(OutputValue::null())
    }
}

impl Serialize for Literal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match &self.0 {
            OutputValue::Pair(r, a) => {
                let mut seq = s.serialize_seq(Some(2))?;
                seq.serialize_element(&format_rational(r))?;
                seq.serialize_element(a)?;
                seq.end()
            }
            other => s.collect_str(other),
        }
    }
}

impl<'de> Deserialize<'de> for Literal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Literal;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a value literal: \"3\", \"1/2\", an atom such as \"NULL\", or a pair [\"1/2\", \"cat\"]")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Literal, E> {
                parse_scalar_value(v).map(Literal).map_err(E::custom)
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Literal, E> {
                Err(E::custom(format!("values must be strings (hint: write \"{v}\")")))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Literal, E> {
                Err(E::custom(format!("values must be strings (hint: write \"{v}\")")))
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Literal, A::Error> {
                let score: Rational = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(0, &"a pair [score, indicator]"))?;
                let name: String = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(1, &"a pair [score, indicator]"))?;
                if seq.next_element::<de::IgnoredAny>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &"a pair [score, indicator]"));
                }
                check_atom(&name).map_err(de::Error::custom)?;
                Ok(Literal(OutputValue::pair(score.0, name)))
            }
        }
        d.deserialize_any(V)
    }
}

/// `Option<T>` fields stored through `FromStr`/`Display`.
mod by_name {
    use super::*;

    pub fn serialize<S: Serializer, T: fmt::Display>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_str(v),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D, T>(d: D) -> Result<Option<T>, D::Error>
    where
        D: Deserializer<'de>,
        T: FromStr,
        T::Err: fmt::Display,
    {
        Option::<String>::deserialize(d)?
            .map(|s| s.parse().map_err(de::Error::custom))
            .transpose()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub scales: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSpec {
    pub lo: Vec<u64>,
    pub hi: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntrySpec {
    pub point: Vec<u64>,
    pub value: Literal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndicatorSpec {
    pub name: String,
    pub anchor: Vec<u64>,
    pub slope: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PieceSpec {
    pub region: RegionSpec,
    pub model: ModelSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelSpec {
    Table {
        entries: Vec<EntrySpec>,
        default: Literal,
    },
    Affine {
        weights: Vec<Rational>,
        bias: Rational,
    },
    Classifier {
        indicators: Vec<IndicatorSpec>,
        q: u64,
    },
    Piecewise {
        pieces: Vec<PieceSpec>,
        fallback: Literal,
    },
    Restricted {
        #[serde(rename = "box")]
        region: RegionSpec,
        inner: Box<ModelSpec>,
        outside: Literal,
    },
    OracleInjective,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    #[serde(default, with = "by_name", skip_serializing_if = "Option::is_none")]
    pub reading: Option<Reading>,
    #[serde(default, with = "by_name", skip_serializing_if = "Option::is_none")]
    pub policy: Option<SubsetPolicy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_budget: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelSpecDocument {
    pub domain: DomainSpec,
    pub model: ModelSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckSpec>,
}

// Raw shapes: nested models stay as JSON values so each level can be parsed
// with its own path prefix.

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    domain: DomainSpec,
    model: Value,
    #[serde(default)]
    check: Option<CheckSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTable {
    #[serde(default)]
    entries: Vec<EntrySpec>,
    #[serde(default = "Literal::null")]
    default: Literal,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAffine {
    weights: Vec<Rational>,
    #[serde(default = "zero")]
    bias: Rational,
}

fn zero() -> Rational {
    Rational(BigRational::from_integer(0.into()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClassifier {
    indicators: Vec<IndicatorSpec>,
    q: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPiece {
    region: RegionSpec,
    model: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPiecewise {
    #[serde(default)]
    pieces: Vec<RawPiece>,
    #[serde(default = "Literal::null")]
    fallback: Literal,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRestricted {
    #[serde(rename = "box")]
    region: RegionSpec,
    inner: Value,
    #[serde(default = "Literal::null")]
    outside: Literal,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEmpty {}

const KINDS: &str = "table, affine, classifier, piecewise, restricted, oracle-injective";

fn join(prefix: &str, rest: &str) -> String {
    match (prefix, rest) {
        (p, ".") | (p, "") => p.to_string(),
        ("", r) => r.to_string(),
        (p, r) if r.starts_with('[') => format!("{p}{r}"),
        (p, r) => format!("{p}.{r}"),
    }
}

fn decode<T: for<'de> Deserialize<'de>>(value: Value, path: &str) -> Result<T, SpecError> {
    serde_path_to_error::deserialize(value)
        .map_err(|e| SpecError::at(join(path, &e.path().to_string()), e.inner()))
}

fn parse_model_value(value: Value, path: &str) -> Result<ModelSpec, SpecError> {
    let Value::Object(mut map) = value else {
        return Err(SpecError::at(path, "expected an object with a `kind` field"));
    };
    let kind_path = join(path, "kind");
    let kind = match map.remove("kind") {
        Some(Value::String(k)) => k,
        Some(_) => return Err(SpecError::at(kind_path, "expected a string")),
        None => return Err(SpecError::at(kind_path, format!("missing field (one of {KINDS})"))),
    };
    let rest = Value::Object(map);
    Ok(match kind.as_str() {
        "table" => {
            let r: RawTable = decode(rest, path)?;
            ModelSpec::Table { entries: r.entries, default: r.default }
        }
        "affine" => {
            let r: RawAffine = decode(rest, path)?;
            ModelSpec::Affine { weights: r.weights, bias: r.bias }
        }
        "classifier" => {
            let r: RawClassifier = decode(rest, path)?;
            ModelSpec::Classifier { indicators: r.indicators, q: r.q }
        }
        "piecewise" => {
            let r: RawPiecewise = decode(rest, path)?;
            let pieces = r
                .pieces
                .into_iter()
                .enumerate()
                .map(|(i, p)| {
                    let model = parse_model_value(p.model, &join(path, &format!("pieces[{i}].model")))?;
                    Ok(PieceSpec { region: p.region, model })
                })
                .collect::<Result<_, SpecError>>()?;
            ModelSpec::Piecewise { pieces, fallback: r.fallback }
        }
        "restricted" => {
            let r: RawRestricted = decode(rest, path)?;
            let inner = parse_model_value(r.inner, &join(path, "inner"))?;
            ModelSpec::Restricted { region: r.region, inner: Box::new(inner), outside: r.outside }
        }
        "oracle-injective" => {
            let _: RawEmpty = decode(rest, path)?;
            ModelSpec::OracleInjective
        }
        other => {
            return Err(SpecError::at(kind_path, format!("unknown kind `{other}` (expected one of {KINDS})")))
        }
    })
}

/// Parses and validates a model description. The returned document is known
/// to build into a model.
pub fn parse_model_file(text: &str) -> Result<ModelSpecDocument, SpecError> {
    let value: Value = serde_json::from_str(text).map_err(|e| SpecError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if !value.is_object() {
        return Err(SpecError::at("(root)", "expected an object with `domain` and `model`"));
    }
    let raw: RawDocument = decode(value, "")?;
    let model = parse_model_value(raw.model, "model")?;
    let doc = ModelSpecDocument { domain: raw.domain, model, check: raw.check };
    doc.build()?;
    Ok(doc)
}

impl ModelSpecDocument {
    pub fn new(domain: &DiscreteDomain, model: &Model) -> Self {
        let labels = domain.labels();
        let labels = if labels.iter().all(Option::is_some) && !labels.is_empty() {
            Some(labels.iter().flatten().cloned().collect())
        } else {
            None
        };
        ModelSpecDocument {
            domain: DomainSpec { scales: domain.scales().to_vec(), labels },
            model: ModelSpec::from_model(model),
            check: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn build_domain(&self) -> Result<DiscreteDomain, SpecError> {
        let domain =
            DiscreteDomain::new(self.domain.scales.clone()).map_err(|e| SpecError::at("domain.scales", e))?;
        match &self.domain.labels {
            None => Ok(domain),
            Some(labels) => domain
                .with_labels(labels.iter().cloned().map(Some).collect())
                .map_err(|e| SpecError::at("domain.labels", e)),
        }
    }

    pub fn build(&self) -> Result<(DiscreteDomain, Model), SpecError> {
        let domain = self.build_domain()?;
        let model = build_model(&self.model, &domain, "model")?;
        if let Some(check) = &self.check {
            if let Some(s) = &check.schedule {
                if s.is_empty() {
                    return Err(SpecError::at("check.schedule", "schedule must not be empty"));
                }
                if s.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(SpecError::at("check.schedule", "schedule must be strictly increasing"));
                }
            }
        }
        Ok((domain, model))
    }
}

fn check_dims(len: usize, domain: &DiscreteDomain, path: String, what: &str) -> Result<(), SpecError> {
    if len != domain.dims() {
        return Err(SpecError::at(
            path,
            format!("expected {} {what} (one per dimension), got {len}", domain.dims()),
        ));
    }
    Ok(())
}

fn build_region(r: &RegionSpec, domain: &DiscreteDomain, path: &str) -> Result<Region, SpecError> {
    check_dims(r.lo.len(), domain, join(path, "lo"), "coordinates")?;
    check_dims(r.hi.len(), domain, join(path, "hi"), "coordinates")?;
    let region = Region::new(r.lo.clone(), r.hi.clone()).map_err(|e| SpecError::at(path, e))?;
    region.check_within(domain).map_err(|e| SpecError::at(path, e))?;
    Ok(region)
}

fn build_model(spec: &ModelSpec, domain: &DiscreteDomain, path: &str) -> Result<Model, SpecError> {
    let fail = |e: learncheck_core::Error| SpecError::at(path, e);
    match spec {
        ModelSpec::Table { entries, default } => {
            let mut seen = std::collections::BTreeSet::new();
            for (i, e) in entries.iter().enumerate() {
                let p = Point::new(e.point.clone());
                let at = join(path, &format!("entries[{i}].point"));
                check_dims(e.point.len(), domain, at.clone(), "coordinates")?;
                domain.check_point(&p).map_err(|err| SpecError::at(at.clone(), err))?;
                if !seen.insert(p.clone()) {
                    return Err(SpecError::at(at, format!("duplicate entry for {p}")));
                }
            }
            Model::table(
                domain.clone(),
                entries.iter().map(|e| (Point::new(e.point.clone()), e.value.0.clone())),
                default.0.clone(),
            )
            .map_err(fail)
        }
        ModelSpec::Affine { weights, bias } => {
            check_dims(weights.len(), domain, join(path, "weights"), "weights")?;
            Model::affine(domain.clone(), weights.iter().map(|w| w.0.clone()).collect(), bias.0.clone())
                .map_err(fail)
        }
        ModelSpec::Classifier { indicators, q } => {
            if indicators.is_empty() {
                return Err(SpecError::at(join(path, "indicators"), "at least one indicator is required"));
            }
            if *q == 0 {
                return Err(SpecError::at(join(path, "q"), "quantization denominator must be positive"));
            }
            let mut built = Vec::with_capacity(indicators.len());
            for (i, ind) in indicators.iter().enumerate() {
                check_atom(&ind.name).map_err(|m| SpecError::at(join(path, &format!("indicators[{i}].name")), m))?;
                let at = join(path, &format!("indicators[{i}].anchor"));
                check_dims(ind.anchor.len(), domain, at.clone(), "coordinates")?;
                let anchor = Point::new(ind.anchor.clone());
                domain.check_point(&anchor).map_err(|e| SpecError::at(at, e))?;
                built.push(Indicator { name: ind.name.clone(), anchor, slope: ind.slope.0.clone() });
            }
            Model::classifier(domain.clone(), built, *q).map_err(fail)
        }
        ModelSpec::Piecewise { pieces, fallback } => {
            let mut built = Vec::with_capacity(pieces.len());
            for (i, piece) in pieces.iter().enumerate() {
                let region = build_region(&piece.region, domain, &join(path, &format!("pieces[{i}].region")))?;
                let model = build_model(&piece.model, domain, &join(path, &format!("pieces[{i}].model")))?;
                built.push((region, model));
            }
            Model::piecewise(domain.clone(), built, fallback.0.clone()).map_err(fail)
        }
        ModelSpec::Restricted { region, inner, outside } => {
            let region = build_region(region, domain, &join(path, "box"))?;
            let inner = build_model(inner, domain, &join(path, "inner"))?;
            Model::restricted(inner, region, outside.0.clone()).map_err(fail)
        }
        ModelSpec::OracleInjective => Ok(Model::oracle_injective(domain.clone())),
    }
}

fn region_spec(r: &Region) -> RegionSpec {
    RegionSpec { lo: r.lo.clone(), hi: r.hi.clone() }
}

impl ModelSpec {
    pub fn from_model(model: &Model) -> Self {
        match model.kind() {
            ModelKind::Table(t) => ModelSpec::Table {
                entries: t
                    .entries
                    .iter()
                    .map(|(p, v)| EntrySpec { point: p.coords().to_vec(), value: Literal(v.clone()) })
                    .collect(),
                default: Literal(t.default.clone()),
            },
            ModelKind::Affine(a) => ModelSpec::Affine {
                weights: a.weights.iter().cloned().map(Rational).collect(),
                bias: Rational(a.bias.clone()),
            },
            ModelKind::Classifier(c) => ModelSpec::Classifier {
                indicators: c
                    .indicators
                    .iter()
                    .map(|i| IndicatorSpec {
                        name: i.name.clone(),
                        anchor: i.anchor.coords().to_vec(),
                        slope: Rational(i.slope.clone()),
                    })
                    .collect(),
                q: c.q,
            },
            ModelKind::Piecewise(p) => ModelSpec::Piecewise {
                pieces: p
                    .pieces
                    .iter()
                    .map(|(r, m)| PieceSpec { region: region_spec(r), model: ModelSpec::from_model(m) })
                    .collect(),
                fallback: Literal(p.fallback.clone()),
            },
            ModelKind::Restricted(r) => ModelSpec::Restricted {
                region: region_spec(&r.region),
                inner: Box::new(ModelSpec::from_model(&r.inner)),
                outside: Literal(r.outside.clone()),
            },
            ModelKind::OracleInjective => ModelSpec::OracleInjective,
        }
    }
}
