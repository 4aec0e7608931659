//! Argument parsing and subcommand dispatch.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use learncheck_core::analysis::{compile_memory, hypothesis_validity, split_experiment};
use learncheck_core::verifier::{
    check_s_bruteforce, check_s_fast, classify, default_bruteforce_budget, Overall, Reading, StarOptions,
    SubsetPolicy, Verdict,
};
use learncheck_core::{fibers, DiscreteDomain, Model, OutputValue, Point};
use num_rational::BigRational;

use crate::format::{parse_model_file, parse_scalar_value, CheckSpec, ModelSpecDocument, SpecError};
use crate::report::{
    render_report, CheckBody, ClassifyBody, CompileBody, DemoSection, Format, GeneratorsBody, InputDigest,
    JaccardBody, ReportBody, ReportDocument, Settings, SplitBody,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_EXPECTATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Point budget for exhaustive scans when neither the file nor the flags set one.
const DEFAULT_SCAN_BUDGET: u64 = 1_000_000;

#[derive(Debug, Parser)]
#[command(name = "learncheck", version, about = "Decide learnability conditions on finite discrete models")]
struct Cli {
    /// Print the machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide the subset condition on the model's domain.
    Check(CheckArgs),
    /// Per-dimension growth check and overall classification.
    Classify(ClassifyArgs),
    /// List information generators (fibers) on a subset of the domain.
    Generators(GeneratorsArgs),
    /// Hypothesis validity of one model against another.
    Jaccard(JaccardArgs),
    /// Compile a model into a lookup table and classify the table.
    Compile(CompileArgs),
    /// Split a subset in two and report generators merged by the union.
    Split(SplitArgs),
    /// Run built-in demonstrations.
    Demo(DemoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Fast,
    BruteForce,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExpectCheck {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExpectOverall {
    #[value(alias = "learning")]
    CompleteLearning,
    NonLearning,
    Undetermined,
}

impl ExpectOverall {
    fn matches(self, o: Overall) -> bool {
        matches!(
            (self, o),
            (ExpectOverall::CompleteLearning, Overall::CompleteLearning)
                | (ExpectOverall::NonLearning, Overall::NonLearning)
                | (ExpectOverall::Undetermined, Overall::Undetermined)
        )
    }
}

#[derive(Debug, Args)]
struct CheckArgs {
    file: PathBuf,
    /// literal | noncontainment
    #[arg(long)]
    reading: Option<Reading>,
    /// allow-empty | nonempty-proper
    #[arg(long)]
    policy: Option<SubsetPolicy>,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    /// Largest domain the chosen method may enumerate.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, value_enum)]
    expect: Option<ExpectCheck>,
}

#[derive(Debug, Args)]
struct StarArgs {
    /// Comma-separated increasing scales for the grown dimension.
    #[arg(long, value_delimiter = ',')]
    schedule: Option<Vec<u64>>,
    #[arg(long)]
    seed: Option<u64>,
    /// Random probes per scheduled extension.
    #[arg(long)]
    sample_budget: Option<u64>,
    /// Largest extension enumerated when confirming a pigeonhole witness.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    file: PathBuf,
    #[command(flatten)]
    star: StarArgs,
    #[arg(long, value_enum)]
    expect: Option<ExpectOverall>,
}

#[derive(Debug, Args)]
struct GeneratorsArgs {
    file: PathBuf,
    /// Points as `x,y;x,y`; defaults to the whole domain.
    #[arg(long)]
    subset: Option<String>,
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Debug, Args)]
struct JaccardArgs {
    truth: PathBuf,
    hypothesis: PathBuf,
    /// One block of output values as `v;v;...`; repeat for each block.
    /// Defaults to one block per value of the true model.
    #[arg(long)]
    block: Vec<String>,
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Debug, Args)]
struct CompileArgs {
    file: PathBuf,
    /// Write the compiled table as a model file.
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    star: StarArgs,
}

#[derive(Debug, Args)]
struct SplitArgs {
    file: PathBuf,
    /// First part as `x,y;x,y`.
    #[arg(long)]
    part1: String,
    /// Second part as `x,y;x,y`.
    #[arg(long)]
    part2: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DemoName {
    FourModels,
    Literal,
    Shrink,
    PiecewiseCover,
    Memory,
    Merge,
}

#[derive(Debug, Args)]
struct DemoArgs {
    /// Which demonstration; all of them when omitted.
    #[arg(value_enum)]
    name: Option<DemoName>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{file}: {source}")]
    Spec { file: String, source: SpecError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Analysis(#[from] learncheck_core::Error),
}

struct Outcome {
    doc: ReportDocument,
    expectation: Option<(String, String)>,
}

struct Loaded {
    doc: ModelSpecDocument,
    domain: DiscreteDomain,
    model: Model,
    digest: InputDigest,
}

impl Loaded {
    fn check(&self) -> CheckSpec {
        self.doc.check.clone().unwrap_or_default()
    }
}

fn load_text(name: &str, role: &str, text: &str) -> Result<Loaded, CliError> {
    let spec_err = |source| CliError::Spec { file: name.to_string(), source };
    let doc = parse_model_file(text).map_err(spec_err)?;
    let (domain, model) = doc.build().map_err(spec_err)?;
    Ok(Loaded { doc, domain, model, digest: InputDigest::of(role, text.as_bytes()) })
}

fn load(path: &Path, role: &str) -> Result<Loaded, CliError> {
    let shown = path.display().to_string();
    let bytes = std::fs::read(path).map_err(|source| CliError::Io { path: shown.clone(), source })?;
    let text = String::from_utf8(bytes).map_err(|e| CliError::Usage(format!("{shown}: not UTF-8 text ({e})")))?;
    load_text(&shown, role, &text)
}

/// Parses `x,y;x,y` into points of `domain`.
pub fn parse_points(text: &str, domain: &DiscreteDomain) -> Result<BTreeSet<Point>, String> {
    let mut out = BTreeSet::new();
    for item in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let coords = item
            .split(',')
            .map(|c| c.trim().parse::<u64>().map_err(|e| format!("bad coordinate `{c}` in `{item}`: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        let p = Point::new(coords);
        domain.check_point(&p).map_err(|e| e.to_string())?;
        out.insert(p);
    }
    Ok(out)
}

/// Parses one output value as written on the command line: the file syntax,
/// plus `(p/q,atom)` for classifier pairs.
pub fn parse_cli_value(text: &str) -> Result<OutputValue, String> {
    let t = text.trim();
    if let Some(inner) = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        let (score, name) = inner.split_once(',').ok_or_else(|| format!("`{t}`: a pair needs a comma"))?;
        let score = match parse_scalar_value(score.trim())? {
            OutputValue::Int(i) => BigRational::from_integer(i),
            OutputValue::Rational(r) => r,
            _ => return Err(format!("`{t}`: pair score must be a rational")),
        };
        return match parse_scalar_value(name.trim())? {
            OutputValue::Atom(a) => Ok(OutputValue::pair(score, a)),
            _ => Err(format!("`{t}`: pair indicator must be an atom")),
        };
    }
    parse_scalar_value(t)
}

fn star_options(star: &StarArgs, file: &CheckSpec) -> (StarOptions, Settings) {
    let mut opts = StarOptions {
        schedule: star.schedule.clone().or_else(|| file.schedule.clone()),
        seed: star.seed.or(file.seed).unwrap_or(0),
        ..StarOptions::default()
    };
    if let Some(s) = star.sample_budget.or(file.sample_budget) {
        opts.sample_budget = s;
    }
    if let Some(b) = star.budget.or(file.budget) {
        opts.enum_budget = b;
    }
    let settings = Settings {
        seed: Some(opts.seed),
        sample_budget: Some(opts.sample_budget),
        budget: Some(opts.enum_budget),
        schedule: opts.schedule.clone(),
        ..Settings::default()
    };
    (opts, settings)
}

fn run_check(args: &CheckArgs) -> Result<Outcome, CliError> {
    let l = load(&args.file, "model")?;
    let file = l.check();
    let reading = args.reading.or(file.reading).unwrap_or(Reading::Noncontainment);
    let policy = args.policy.or(file.policy).unwrap_or(SubsetPolicy::NonemptyProper);
    let default_pair = reading == Reading::Noncontainment && policy == SubsetPolicy::NonemptyProper;
    let fast = match args.method {
        MethodArg::Auto => default_pair,
        MethodArg::Fast if !default_pair => {
            return Err(CliError::Usage(
                "the fast checker decides only the noncontainment reading with the nonempty-proper policy".into(),
            ))
        }
        MethodArg::Fast => true,
        MethodArg::BruteForce => false,
    };
    let budget = args.budget.or(file.budget);
    let report = if fast {
        check_s_fast(&l.model, &l.domain, budget.unwrap_or(DEFAULT_SCAN_BUDGET))?
    } else {
        check_s_bruteforce(&l.model, &l.domain, reading, policy, budget.unwrap_or(default_bruteforce_budget(reading)))?
    };
    let settings = Settings {
        reading: Some(reading.as_str().into()),
        policy: Some(policy.as_str().into()),
        method: Some(report.method.as_str().into()),
        budget,
        ..Settings::default()
    };
    let expectation = args.expect.map(|e| {
        let want = match e {
            ExpectCheck::Pass => Verdict::Pass,
            ExpectCheck::Fail => Verdict::Fail,
        };
        (want.as_str().to_string(), report.verdict.as_str().to_string())
    });
    let body = ReportBody::Check(CheckBody::new(&l.model, &l.domain, &report));
    Ok(Outcome { doc: ReportDocument::new("check", vec![l.digest], settings, body), expectation })
}

fn run_classify(args: &ClassifyArgs) -> Result<Outcome, CliError> {
    let l = load(&args.file, "model")?;
    let (opts, settings) = star_options(&args.star, &l.check());
    let report = classify(&l.model, &l.domain, &opts)?;
    let expectation = args.expect.map(|e| {
        let want = e.to_possible_value().expect("no skipped variants").get_name().to_string();
        let got = report.overall.as_str().to_string();
        if e.matches(report.overall) {
            (got.clone(), got)
        } else {
            (want, got)
        }
    });
    let body = ReportBody::Classify(ClassifyBody::new(&l.model, &l.domain, &report));
    Ok(Outcome { doc: ReportDocument::new("classify", vec![l.digest], settings, body), expectation })
}

fn run_generators(args: &GeneratorsArgs) -> Result<Outcome, CliError> {
    let l = load(&args.file, "model")?;
    let budget = args.budget.or(l.check().budget);
    let subset: BTreeSet<Point> = match &args.subset {
        Some(text) => parse_points(text, &l.domain).map_err(CliError::Usage)?,
        None => l.domain.enumerate(budget.unwrap_or(DEFAULT_SCAN_BUDGET))?.collect(),
    };
    let gens = fibers(&l.model, &subset)?;
    let settings = Settings { budget, ..Settings::default() };
    let body = ReportBody::Generators(GeneratorsBody::new(&l.model, &l.domain, subset.len(), &gens));
    Ok(Outcome { doc: ReportDocument::new("generators", vec![l.digest], settings, body), expectation: None })
}

fn run_jaccard(args: &JaccardArgs) -> Result<Outcome, CliError> {
    let truth = load(&args.truth, "truth")?;
    let hyp = load(&args.hypothesis, "hypothesis")?;
    if truth.domain.scales() != hyp.domain.scales() {
        return Err(CliError::Usage(format!(
            "truth domain {} and hypothesis domain {} differ",
            truth.domain, hyp.domain
        )));
    }
    let blocks = args
        .block
        .iter()
        .map(|b| {
            b.split(';')
                .filter(|s| !s.trim().is_empty())
                .map(parse_cli_value)
                .collect::<Result<BTreeSet<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::Usage)?;
    let budget = args.budget.or(truth.check().budget);
    let report = hypothesis_validity(
        &truth.model,
        &hyp.model,
        &truth.domain,
        (!blocks.is_empty()).then_some(blocks.as_slice()),
        budget.unwrap_or(DEFAULT_SCAN_BUDGET),
    )?;
    let settings = Settings { budget, ..Settings::default() };
    let body = ReportBody::Jaccard(JaccardBody::new(&truth.model, &hyp.model, &truth.domain, &report));
    Ok(Outcome {
        doc: ReportDocument::new("jaccard", vec![truth.digest, hyp.digest], settings, body),
        expectation: None,
    })
}

fn compile_body(l: &Loaded, star: &StarArgs) -> Result<(CompileBody, Model, Settings), CliError> {
    let (opts, settings) = star_options(star, &l.check());
    let (table, record) = compile_memory(&l.model, &l.domain, opts.enum_budget)?;
    let report = classify(&table, &l.domain, &opts)?;
    let entries = match table.kind() {
        learncheck_core::ModelKind::Table(t) => t.entries.len(),
        _ => unreachable!("compile_memory returns a table"),
    };
    let body = CompileBody {
        source: crate::report::ModelSummary::new(&l.model, &l.domain),
        table_entries: entries,
        equivalence: (&record).into(),
        compiled: ClassifyBody::new(&table, &l.domain, &report),
    };
    Ok((body, table, settings))
}

fn run_compile(args: &CompileArgs) -> Result<Outcome, CliError> {
    let l = load(&args.file, "model")?;
    let (body, table, settings) = compile_body(&l, &args.star)?;
    if let Some(out) = &args.output {
        let text = ModelSpecDocument::new(&l.domain, &table).to_json();
        std::fs::write(out, text).map_err(|source| CliError::Io { path: out.display().to_string(), source })?;
    }
    Ok(Outcome {
        doc: ReportDocument::new("compile", vec![l.digest], settings, ReportBody::Compile(body)),
        expectation: None,
    })
}

fn split_body(l: &Loaded, part1: &BTreeSet<Point>, part2: &BTreeSet<Point>) -> Result<SplitBody, CliError> {
    let subset: BTreeSet<Point> = part1.union(part2).cloned().collect();
    let report = split_experiment(&l.model, &subset, part1, part2)?;
    Ok(SplitBody::new(&l.model, &l.domain, &report))
}

fn run_split(args: &SplitArgs) -> Result<Outcome, CliError> {
    let l = load(&args.file, "model")?;
    let part1 = parse_points(&args.part1, &l.domain).map_err(CliError::Usage)?;
    let part2 = parse_points(&args.part2, &l.domain).map_err(CliError::Usage)?;
    let body = split_body(&l, &part1, &part2)?;
    Ok(Outcome {
        doc: ReportDocument::new("split", vec![l.digest], Settings::default(), ReportBody::Split(body)),
        expectation: None,
    })
}

/// Model files compiled into the binary for the demonstrations.
pub const BUNDLED: &[(&str, &str)] = &[
    ("table_null.json", include_str!("../examples/table_null.json")),
    ("affine_2x.json", include_str!("../examples/affine_2x.json")),
    ("classifier.json", include_str!("../examples/classifier.json")),
    ("oracle_injective.json", include_str!("../examples/oracle_injective.json")),
    ("base3_encoder.json", include_str!("../examples/base3_encoder.json")),
    ("shrunk_box.json", include_str!("../examples/shrunk_box.json")),
    ("piecewise_cover.json", include_str!("../examples/piecewise_cover.json")),
    ("merge_table.json", include_str!("../examples/merge_table.json")),
    ("literal_check.json", include_str!("../examples/literal_check.json")),
];

fn bundled(name: &str) -> Result<Loaded, CliError> {
    let (_, text) = BUNDLED.iter().find(|(n, _)| *n == name).expect("bundled model exists");
    load_text(name, name, text)
}

fn demo_sections(
    name: DemoName,
    seed: Option<u64>,
    digests: &mut Vec<InputDigest>,
) -> Result<Vec<DemoSection>, CliError> {
    let star = StarArgs { schedule: None, seed, sample_budget: None, budget: None };
    let mut use_model = |file: &str| -> Result<Loaded, CliError> {
        let l = bundled(file)?;
        if !digests.contains(&l.digest) {
            digests.push(l.digest.clone());
        }
        Ok(l)
    };
    let classify_section = |title: String, l: &Loaded| -> Result<DemoSection, CliError> {
        let (opts, _) = star_options(&star, &l.check());
        let report = classify(&l.model, &l.domain, &opts)?;
        Ok(DemoSection { title, result: ReportBody::Classify(ClassifyBody::new(&l.model, &l.domain, &report)) })
    };
    let check_section =
        |title: String, l: &Loaded, reading: Reading, policy: SubsetPolicy| -> Result<DemoSection, CliError> {
            let r = check_s_bruteforce(&l.model, &l.domain, reading, policy, default_bruteforce_budget(reading))?;
            Ok(DemoSection { title, result: ReportBody::Check(CheckBody::new(&l.model, &l.domain, &r)) })
        };
    let mut out = Vec::new();
    match name {
        DemoName::FourModels => {
            for (file, role) in [
                ("table_null.json", "database lookup"),
                ("affine_2x.json", "affine y = 2x"),
                ("classifier.json", "quantized classifier"),
                ("oracle_injective.json", "injective oracle"),
            ] {
                let l = use_model(file)?;
                out.push(classify_section(format!("four models: {role}"), &l)?);
            }
        }
        DemoName::Literal => {
            let l = use_model("literal_check.json")?;
            for policy in [SubsetPolicy::AllowEmpty, SubsetPolicy::NonemptyProper] {
                out.push(check_section(format!("literal reading, {policy}"), &l, Reading::Literal, policy)?);
            }
            out.push(check_section(
                "noncontainment reading, nonempty-proper".into(),
                &l,
                Reading::Noncontainment,
                SubsetPolicy::NonemptyProper,
            )?);
        }
        DemoName::Shrink => {
            let l = use_model("shrunk_box.json")?;
            let r = check_s_fast(&l.model, &l.domain, DEFAULT_SCAN_BUDGET)?;
            out.push(DemoSection {
                title: "shrunk model: subset condition".into(),
                result: ReportBody::Check(CheckBody::new(&l.model, &l.domain, &r)),
            });
            out.push(classify_section("shrunk model: growth".into(), &l)?);
        }
        DemoName::PiecewiseCover => {
            let l = use_model("piecewise_cover.json")?;
            let r = check_s_fast(&l.model, &l.domain, DEFAULT_SCAN_BUDGET)?;
            out.push(DemoSection {
                title: "piecewise cover: subset condition".into(),
                result: ReportBody::Check(CheckBody::new(&l.model, &l.domain, &r)),
            });
            out.push(classify_section("piecewise cover: growth".into(), &l)?);
        }
        DemoName::Memory => {
            for file in ["base3_encoder.json", "affine_2x.json"] {
                let l = use_model(file)?;
                let (body, _, _) = compile_body(&l, &star)?;
                out.push(DemoSection { title: format!("memory compilation of {file}"), result: ReportBody::Compile(body) });
            }
        }
        DemoName::Merge => {
            let l = use_model("merge_table.json")?;
            let p = |xs: &[u64]| xs.iter().map(|&x| Point::new(vec![x])).collect::<BTreeSet<_>>();
            out.push(DemoSection {
                title: "merge: table a,b,a,c".into(),
                result: ReportBody::Split(split_body(&l, &p(&[0, 1]), &p(&[2, 3]))?),
            });
            let c = use_model("affine_2x.json")?;
            out.push(DemoSection {
                title: "merge control: injective y = 2x".into(),
                result: ReportBody::Split(split_body(&c, &p(&[0, 1, 2]), &p(&[3, 4, 5]))?),
            });
        }
    }
    Ok(out)
}

fn run_demo(args: &DemoArgs) -> Result<Outcome, CliError> {
    let names: Vec<DemoName> = match args.name {
        Some(n) => vec![n],
        None => DemoName::value_variants().to_vec(),
    };
    let mut digests = Vec::new();
    let mut sections = Vec::new();
    for n in names {
        sections.extend(demo_sections(n, args.seed, &mut digests)?);
    }
    let settings = Settings { seed: Some(args.seed.unwrap_or(0)), ..Settings::default() };
    Ok(Outcome {
        doc: ReportDocument::new("demo", digests, settings, ReportBody::Demo(sections)),
        expectation: None,
    })
}

/// Runs the tool on `args` (program name first), writing the report to `out`
/// and diagnostics to `err`. Returns the process exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Check(a) => run_check(a),
        Command::Classify(a) => run_classify(a),
        Command::Generators(a) => run_generators(a),
        Command::Jaccard(a) => run_jaccard(a),
        Command::Compile(a) => run_compile(a),
        Command::Split(a) => run_split(a),
        Command::Demo(a) => run_demo(a),
    };
    match result {
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
        Ok(outcome) => {
            let format = if cli.json { Format::Machine } else { Format::Human };
            let _ = out.write_all(render_report(&outcome.doc, format).as_bytes());
            match outcome.expectation {
                Some((want, got)) if want != got => {
                    let _ = writeln!(err, "expectation failed: expected {want}, got {got}");
                    EXIT_EXPECTATION
                }
                _ => EXIT_OK,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_lists() {
        let d = DiscreteDomain::new(vec![3, 3]).unwrap();
        let ps = parse_points("0,1; 2,2;", &d).unwrap();
        assert_eq!(ps.len(), 2);
        assert!(parse_points("3,0", &d).is_err());
        assert!(parse_points("a,0", &d).is_err());
        assert!(parse_points("", &d).unwrap().is_empty());
    }

    #[test]
    fn cli_values() {
        assert_eq!(parse_cli_value("NULL").unwrap(), OutputValue::null());
        assert_eq!(
            parse_cli_value("(1/2, cat)").unwrap(),
            OutputValue::pair(BigRational::new(1.into(), 2.into()), "cat")
        );
        assert!(parse_cli_value("(cat, 1)").is_err());
        assert!(parse_cli_value("2/4").unwrap_err().contains("write 1/2"));
    }

    #[test]
    fn bundled_models_parse() {
        for (name, _) in BUNDLED {
            bundled(name).unwrap();
        }
    }
}
