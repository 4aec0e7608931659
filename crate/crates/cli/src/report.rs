//! Report documents and their two renderings.
//!
//! The machine form is pretty-printed JSON with a fixed field order; the human
//! form is line-oriented text derived from the same document, so both carry
//! exactly the same facts.

use std::fmt::Write as _;

use learncheck_core::analysis::{EquivalenceRecord, SplitMergeReport, ValidityReport};
use learncheck_core::value::format_rational;
use learncheck_core::verifier::{Certificate, ConditionReport, StarEntry, StarReport, SubsetWitness};
use learncheck_core::{DiscreteDomain, InformationGenerator, Model, OutputValue, Point};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const TOOL_NAME: &str = "learncheck";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Human,
    Machine,
}

/// Output values as tagged exact literals, e.g. `{"int": "4"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueJson {
    Int(String),
    Rational(String),
    Atom(String),
    Pair(String, String),
}

impl From<&OutputValue> for ValueJson {
    fn from(v: &OutputValue) -> Self {
        match v {
            OutputValue::Int(i) => ValueJson::Int(i.to_string()),
            OutputValue::Rational(r) => ValueJson::Rational(format_rational(r)),
            OutputValue::Atom(a) => ValueJson::Atom(a.clone()),
            OutputValue::Pair(r, a) => ValueJson::Pair(format_rational(r), a.clone()),
        }
    }
}

impl std::fmt::Display for ValueJson {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ValueJson::Int(s) | ValueJson::Rational(s) | ValueJson::Atom(s) => f.write_str(s),
            ValueJson::Pair(r, a) => write!(f, "({r}, {a})"),
        }
    }
}

pub type PointJson = Vec<u64>;

fn point(p: &Point) -> PointJson {
    p.coords().to_vec()
}

fn points<'a>(ps: impl IntoIterator<Item = &'a Point>) -> Vec<PointJson> {
    ps.into_iter().map(point).collect()
}

fn show_point(p: &[u64]) -> String {
    let coords: Vec<String> = p.iter().map(u64::to_string).collect();
    format!("({})", coords.join(","))
}

fn show_points(ps: &[PointJson]) -> String {
    let shown: Vec<String> = ps.iter().map(|p| show_point(p)).collect();
    format!("{{{}}}", shown.join(", "))
}

fn show_list<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub role: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(role: &str, bytes: &[u8]) -> Self {
        InputDigest { role: role.into(), sha256: hex::encode(Sha256::digest(bytes)) }
    }
}

/// Settings the analysis actually ran with, after merging file defaults and
/// command-line flags.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Settings {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reading: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub policy: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_budget: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelSummary {
    pub kind: String,
    pub scales: Vec<u64>,
    pub cardinality: String,
    pub log10_cardinality: String,
}

impl ModelSummary {
    pub fn new(model: &Model, domain: &DiscreteDomain) -> Self {
        ModelSummary {
            kind: model.kind_name().into(),
            scales: domain.scales().to_vec(),
            cardinality: domain.cardinality().to_string(),
            log10_cardinality: format!("{:.3}", domain.log10_cardinality()),
        }
    }

    fn line(&self) -> String {
        let size = if self.cardinality.len() <= 24 {
            format!("{} points", self.cardinality)
        } else {
            format!("~10^{} points", self.log10_cardinality)
        };
        format!("model: {} on [{}] ({size})", self.kind, show_list(&self.scales, ","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubsetJson {
    Explicit(Vec<PointJson>),
    AllBut(PointJson),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollisionJson {
    pub a: PointJson,
    pub b: PointJson,
    pub value: ValueJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StatsJson {
    pub subsets_examined: u64,
    pub candidates_examined: u64,
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckBody {
    pub model: ModelSummary,
    pub verdict: String,
    pub reading: String,
    pub policy: String,
    pub method: String,
    pub failing_subset: Option<SubsetJson>,
    pub collision: Option<CollisionJson>,
    pub stats: StatsJson,
}

impl CheckBody {
    pub fn new(model: &Model, domain: &DiscreteDomain, r: &ConditionReport) -> Self {
        let collision = r.collision.as_ref().map(|(a, b)| CollisionJson {
            a: point(a),
            b: point(b),
            value: (&model.eval(a).expect("witness lies in the domain")).into(),
        });
        CheckBody {
            model: ModelSummary::new(model, domain),
            verdict: r.verdict.as_str().into(),
            reading: r.reading.as_str().into(),
            policy: r.policy.as_str().into(),
            method: r.method.as_str().into(),
            failing_subset: r.failing_subset.as_ref().map(|w| match w {
                SubsetWitness::Explicit(s) => SubsetJson::Explicit(points(s)),
                SubsetWitness::AllBut(a) => SubsetJson::AllBut(point(a)),
            }),
            collision,
            stats: StatsJson {
                subsets_examined: r.stats.subsets_examined,
                candidates_examined: r.stats.candidates_examined,
                evaluations: r.stats.evaluations,
            },
        }
    }

    fn render(&self, out: &mut String) {
        let _ = writeln!(out, "{}", self.model.line());
        let _ = writeln!(out, "reading: {}", self.reading);
        let _ = writeln!(out, "policy: {}", self.policy);
        let _ = writeln!(out, "method: {}", self.method);
        let _ = writeln!(out, "verdict: {}", self.verdict);
        match &self.failing_subset {
            Some(SubsetJson::Explicit(s)) => {
                let _ = writeln!(out, "X_S = {}", show_points(s));
            }
            Some(SubsetJson::AllBut(a)) => {
                let _ = writeln!(out, "X_S = D \\ {{{}}}", show_point(a));
            }
            None => {}
        }
        if let Some(c) = &self.collision {
            let _ = writeln!(out, "collision: {} ~ {} -> {}", show_point(&c.a), show_point(&c.b), c.value);
        }
        let _ = writeln!(
            out,
            "stats: subsets={} candidates={} evaluations={}",
            self.stats.subsets_examined, self.stats.candidates_examined, self.stats.evaluations
        );
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertificateJson {
    Pigeonhole {
        bound: String,
        justification: String,
        extension_scale: u64,
        extension_cardinality: String,
        witness: Option<CollisionJson>,
    },
    SymbolicInjective {
        reason: String,
    },
    CollisionWitness {
        a: PointJson,
        b: PointJson,
        value: ValueJson,
        extension_scale: u64,
    },
    SamplingExhausted {
        samples: u64,
        extensions: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarEntryJson {
    pub dim: usize,
    pub verdict: String,
    pub certificate: CertificateJson,
    pub schedule: Vec<u64>,
}

impl From<&StarEntry> for StarEntryJson {
    fn from(e: &StarEntry) -> Self {
        let certificate = match &e.certificate {
            Certificate::Pigeonhole { bound, justification, extension_scale, extension_cardinality, witness } => {
                CertificateJson::Pigeonhole {
                    bound: bound.to_string(),
                    justification: justification.clone(),
                    extension_scale: *extension_scale,
                    extension_cardinality: extension_cardinality.to_string(),
                    witness: witness.as_ref().map(|(a, b, v)| CollisionJson { a: point(a), b: point(b), value: v.into() }),
                }
            }
            Certificate::SymbolicInjective { reason } => CertificateJson::SymbolicInjective { reason: reason.clone() },
            Certificate::CollisionWitness { a, b, value, extension_scale } => CertificateJson::CollisionWitness {
                a: point(a),
                b: point(b),
                value: value.into(),
                extension_scale: *extension_scale,
            },
            Certificate::SamplingExhausted { samples, extensions } => {
                CertificateJson::SamplingExhausted { samples: *samples, extensions: *extensions }
            }
        };
        StarEntryJson { dim: e.dim, verdict: e.verdict.as_str().into(), certificate, schedule: e.schedule.clone() }
    }
}

impl StarEntryJson {
    /// One status line, e.g. `dim 1: PASS (symbolic-injective)`.
    pub fn line(&self) -> String {
        let detail = match &self.certificate {
            CertificateJson::Pigeonhole { bound, extension_cardinality, .. } => {
                format!("pigeonhole: range<={bound} < extension {extension_cardinality}")
            }
            CertificateJson::SymbolicInjective { .. } => "symbolic-injective".into(),
            CertificateJson::CollisionWitness { a, b, value, .. } => {
                format!("collision-witness {} ~ {} -> {value}", show_point(a), show_point(b))
            }
            CertificateJson::SamplingExhausted { .. } => "sampling-exhausted".into(),
        };
        format!("dim {}: {} ({detail})", self.dim, self.verdict.to_uppercase())
    }

    fn render(&self, out: &mut String) {
        let _ = writeln!(out, "{}", self.line());
        match &self.certificate {
            CertificateJson::Pigeonhole { justification, extension_scale, witness, .. } => {
                let _ = writeln!(out, "  bound: {justification}");
                let _ = writeln!(out, "  flagged scale: {extension_scale}");
                if let Some(w) = witness {
                    let _ = writeln!(out, "  confirmed: {} ~ {} -> {}", show_point(&w.a), show_point(&w.b), w.value);
                }
            }
            CertificateJson::SymbolicInjective { reason } => {
                let _ = writeln!(out, "  reason: {reason}");
            }
            CertificateJson::CollisionWitness { extension_scale, .. } => {
                let _ = writeln!(out, "  found at scale: {extension_scale}");
            }
            CertificateJson::SamplingExhausted { samples, extensions } => {
                let _ = writeln!(out, "  probes: {samples} over {extensions} extensions");
            }
        }
        let _ = writeln!(out, "  schedule: {}", show_list(&self.schedule, " "));
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifyBody {
    pub model: ModelSummary,
    pub entries: Vec<StarEntryJson>,
    pub overall: String,
}

impl ClassifyBody {
    pub fn new(model: &Model, domain: &DiscreteDomain, r: &StarReport) -> Self {
        ClassifyBody {
            model: ModelSummary::new(model, domain),
            entries: r.entries.iter().map(Into::into).collect(),
            overall: r.overall.as_str().into(),
        }
    }

    fn render(&self, out: &mut String) {
        let _ = writeln!(out, "{}", self.model.line());
        for e in &self.entries {
            e.render(out);
        }
        let _ = writeln!(out, "overall: {}", self.overall);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorJson {
    pub representation: ValueJson,
    pub fiber: Vec<PointJson>,
    pub invariant: bool,
}

impl From<&InformationGenerator> for GeneratorJson {
    fn from(g: &InformationGenerator) -> Self {
        GeneratorJson { representation: (&g.representation).into(), fiber: points(&g.fiber), invariant: g.invariant }
    }
}

impl GeneratorJson {
    fn line(&self) -> String {
        let flag = if self.invariant { " [invariant]" } else { "" };
        format!("{} <- {}{flag}", self.representation, show_points(&self.fiber))
    }
}

fn generators(gs: &[InformationGenerator]) -> Vec<GeneratorJson> {
    gs.iter().map(Into::into).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorsBody {
    pub model: ModelSummary,
    pub subset_size: usize,
    pub generators: Vec<GeneratorJson>,
    pub invariant_count: usize,
}

impl GeneratorsBody {
    pub fn new(model: &Model, domain: &DiscreteDomain, subset_size: usize, gs: &[InformationGenerator]) -> Self {
        GeneratorsBody {
            model: ModelSummary::new(model, domain),
            subset_size,
            generators: generators(gs),
            invariant_count: gs.iter().filter(|g| g.invariant).count(),
        }
    }

    fn render(&self, out: &mut String) {
        let _ = writeln!(out, "{}", self.model.line());
        let _ = writeln!(out, "subset: {} points", self.subset_size);
        for g in &self.generators {
            let _ = writeln!(out, "{}", g.line());
        }
        let _ = writeln!(
            out,
            "generators: {} ({} invariant)",
            self.generators.len(),
            self.invariant_count
        );
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockJson {
    pub block: Vec<ValueJson>,
    pub truth: Vec<PointJson>,
    pub guess: Vec<PointJson>,
    pub jaccard: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JaccardBody {
    pub truth: ModelSummary,
    pub hypothesis: ModelSummary,
    pub blocks: Vec<BlockJson>,
    pub mean: String,
}

impl JaccardBody {
    pub fn new(truth: &Model, hypothesis: &Model, domain: &DiscreteDomain, r: &ValidityReport) -> Self {
        JaccardBody {
            truth: ModelSummary::new(truth, domain),
            hypothesis: ModelSummary::new(hypothesis, domain),
            blocks: r
                .blocks
                .iter()
                .map(|b| BlockJson {
                    block: b.block.iter().map(Into::into).collect(),
                    truth: points(&b.truth),
                    guess: points(&b.guess),
                    jaccard: format_rational(&b.jaccard),
                })
                .collect(),
            mean: format_rational(&r.mean),
        }
    }

    fn render(&self, out: &mut String) {
        let _ = writeln!(out, "truth {}", self.truth.line());
        let _ = writeln!(out, "hypothesis {}", self.hypothesis.line());
        for b in &self.blocks {
            let _ = writeln!(
                out,
                "block {{{}}}: J = {} (truth {}, guess {})",
                show_list(&b.block, ", "),
                b.jaccard,
                show_points(&b.truth),
                show_points(&b.guess)
            );
        }
        let _ = writeln!(out, "mean: {}", self.mean);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceJson {
    pub points_checked: u64,
    pub agreements: u64,
    pub distinct_values: usize,
    pub first_disagreement: Option<PointJson>,
    pub equivalent: bool,
}

impl From<&EquivalenceRecord> for EquivalenceJson {
    fn from(r: &EquivalenceRecord) -> Self {
        EquivalenceJson {
            points_checked: r.points_checked,
            agreements: r.agreements,
            distinct_values: r.distinct_values,
            first_disagreement: r.first_disagreement.as_ref().map(point),
            equivalent: r.is_equivalent(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompileBody {
    pub source: ModelSummary,
    pub table_entries: usize,
    pub equivalence: EquivalenceJson,
    pub compiled: ClassifyBody,
}

impl CompileBody {
    fn render(&self, out: &mut String) {
        let _ = writeln!(out, "source {}", self.source.line());
        let _ = writeln!(out, "table entries: {}", self.table_entries);
        let e = &self.equivalence;
        let _ = writeln!(
            out,
            "equivalence: {}/{} points agree, {} distinct values{}",
            e.agreements,
            e.points_checked,
            e.distinct_values,
            if e.equivalent { "" } else { " (NOT equivalent)" }
        );
        if let Some(p) = &e.first_disagreement {
            let _ = writeln!(out, "first disagreement: {}", show_point(p));
        }
        let _ = writeln!(out, "compiled table:");
        self.compiled.render(out);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitBody {
    pub model: ModelSummary,
    pub part1: Vec<GeneratorJson>,
    pub part2: Vec<GeneratorJson>,
    pub union: Vec<GeneratorJson>,
    pub merged: Vec<GeneratorJson>,
}

impl SplitBody {
    pub fn new(model: &Model, domain: &DiscreteDomain, r: &SplitMergeReport) -> Self {
        SplitBody {
            model: ModelSummary::new(model, domain),
            part1: generators(&r.part1),
            part2: generators(&r.part2),
            union: generators(&r.union),
            merged: generators(&r.merged),
        }
    }

    fn render(&self, out: &mut String) {
        let _ = writeln!(out, "{}", self.model.line());
        for (name, gs) in [("part1", &self.part1), ("part2", &self.part2), ("union", &self.union)] {
            let _ = writeln!(out, "{name}: {} generators", gs.len());
            for g in gs {
                let _ = writeln!(out, "  {}", g.line());
            }
        }
        let _ = writeln!(out, "merged: {}", self.merged.len());
        for g in &self.merged {
            let _ = writeln!(out, "  {}", g.line());
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemoSection {
    pub title: String,
    pub result: ReportBody,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportBody {
    Check(CheckBody),
    Classify(ClassifyBody),
    Generators(GeneratorsBody),
    Jaccard(JaccardBody),
    Compile(CompileBody),
    Split(SplitBody),
    Demo(Vec<DemoSection>),
}

impl ReportBody {
    fn render(&self, out: &mut String) {
        match self {
            ReportBody::Check(b) => b.render(out),
            ReportBody::Classify(b) => b.render(out),
            ReportBody::Generators(b) => b.render(out),
            ReportBody::Jaccard(b) => b.render(out),
            ReportBody::Compile(b) => b.render(out),
            ReportBody::Split(b) => b.render(out),
            ReportBody::Demo(sections) => {
                for (i, s) in sections.iter().enumerate() {
                    if i > 0 {
                        out.push('\n');
                    }
                    let _ = writeln!(out, "== {} ==", s.title);
                    s.result.render(out);
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub tool: ToolInfo,
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub settings: Settings,
    pub result: ReportBody,
}

impl ReportDocument {
    pub fn new(command: &str, inputs: Vec<InputDigest>, settings: Settings, result: ReportBody) -> Self {
        ReportDocument {
            tool: ToolInfo { name: TOOL_NAME.into(), version: TOOL_VERSION.into() },
            command: command.into(),
            inputs,
            settings,
            result,
        }
    }
}

pub fn render_report(doc: &ReportDocument, format: Format) -> String {
    match format {
        Format::Machine => {
            let mut s = serde_json::to_string_pretty(doc).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Human => {
            let mut out = String::new();
            let _ = writeln!(out, "{} {} {}", doc.tool.name, doc.tool.version, doc.command);
            for d in &doc.inputs {
                let _ = writeln!(out, "input {}: sha256 {}", d.role, d.sha256);
            }
            doc.result.render(&mut out);
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use learncheck_core::verifier::{check_s_star, StarOptions};
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn star_lines() {
        let d = DiscreteDomain::new(vec![3, 3]).unwrap();
        let m = Model::affine(d.clone(), vec![q(1), q(3)], q(0)).unwrap();
        let opts = StarOptions::default();
        let e0 = StarEntryJson::from(&check_s_star(&m, &d, 0, &opts).unwrap());
        let e1 = StarEntryJson::from(&check_s_star(&m, &d, 1, &opts).unwrap());
        assert_eq!(e0.line(), "dim 0: FAIL (collision-witness (3,0) ~ (0,1) -> 3)");
        assert_eq!(e1.line(), "dim 1: PASS (symbolic-injective)");

        let d = DiscreteDomain::new(vec![10]).unwrap();
        let m = Model::affine(d.clone(), vec![q(2)], q(0)).unwrap();
        let e = StarEntryJson::from(&check_s_star(&m, &d, 0, &opts).unwrap());
        assert_eq!(e.line(), "dim 0: PASS (symbolic-injective)");
    }

    #[test]
    fn tagged_values() {
        let v = OutputValue::pair(BigRational::new(1.into(), 2.into()), "cat");
        assert_eq!(serde_json::to_string(&ValueJson::from(&v)).unwrap(), r#"{"pair":["1/2","cat"]}"#);
        assert_eq!(serde_json::to_string(&ValueJson::from(&OutputValue::int(4))).unwrap(), r#"{"int":"4"}"#);
        assert_eq!(ValueJson::from(&v).to_string(), "(1/2, cat)");
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(
            InputDigest::of("model", b"abc").sha256,
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
