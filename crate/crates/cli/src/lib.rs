//! The `hdx` command line: analyze, spectrum, verify and generate.
//!
//! Exit codes: 0 success, 1 usage, 2 parse or validation failure,
//! 3 hypothesis not met, 4 bound violated.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{Map, Value};

use hdx_core::cochain::{build_down_laplacian, build_full_laplacian, build_up_laplacian};
use hdx_core::generators::{random_facet_weights, GeneratorSpec};
use hdx_core::harness::{self, Outcome, DEFAULT_SAMPLES, DEFAULT_SEED};
use hdx_core::spectral::{betti_numbers, spectral_report, ZERO_TOLERANCE};
use hdx_core::{
    format_number, parse_complex, round_significant, ComplexDocument, Error, HarnessConfig,
    Partition, Simplex, SpectralReport, TheoremId, VerificationReport, WeightedComplex,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "hdx", version, about = "Spectral analysis of weighted simplicial complexes")]
pub struct Cli {
    /// Output encoding.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for random cochains and random generators.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Slack allowed on bound checks; a negative value demands a margin.
    #[arg(long, global = true, allow_hyphen_values = true, default_value_t = harness::BOUND_TOLERANCE)]
    pub tolerance: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OperatorKind {
    Up,
    Down,
    Full,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Family {
    SingleSimplex,
    Complete,
    CompleteMultipartite,
    CrossPolytope,
    RandomPure,
    RandomPartite,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dimension, simplex counts, connectivity and partition.
    Analyze { file: PathBuf },
    /// Spectrum of a Laplacian, optionally on the link of a simplex.
    Spectrum {
        file: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        degree: isize,
        /// Comma-separated vertices, e.g. `0,3`; empty for the whole complex.
        #[arg(long)]
        link: Option<String>,
        /// Defaults to `up` below the top degree and `down` at it.
        #[arg(long, value_enum)]
        operator: Option<OperatorKind>,
    },
    /// Run the verification battery or a single theorem.
    Verify {
        file: PathBuf,
        #[arg(long)]
        theorem: Option<String>,
        /// Random cochains per identity.
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Write a generated complex as a document.
    Generate {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        vertices: Option<usize>,
        /// Part sizes for multipartite families, e.g. `3,3,3`.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        /// Keep probability for random families.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Attach seeded random facet weights.
        #[arg(long)]
        random_weights: bool,
        /// Destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::NotPartite(_) | Error::DisconnectedLink(_) => EXIT_HYPOTHESIS,
            Error::DegreeOutOfRange { .. }
            | Error::DegreeTooHigh { .. }
            | Error::DegreeMismatch { .. }
            | Error::SimplexNotInComplex(_)
            | Error::BadParams(_) => EXIT_USAGE,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == EXIT_OK { out } else { err };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    match &cli.command {
        Command::Analyze { file } => {
            let (doc, wc, partition) = load(file)?;
            let report = analyze(&doc, &wc, partition.as_ref())?;
            emit(out, cli.format, &report, |w| report.write_text(w))?;
            Ok(EXIT_OK)
        }
        Command::Spectrum {
            file,
            degree,
            link,
            operator,
        } => {
            let (_, wc, partition) = load(file)?;
            let tau = link.as_deref().map(parse_simplex).transpose()?;
            let report = spectrum(&wc, partition.as_ref(), *degree, tau.as_ref(), *operator)?;
            emit(out, cli.format, &report, |w| write_spectrum(w, &report))?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            file,
            theorem,
            samples,
        } => {
            let theorem = theorem
                .as_deref()
                .map(|t| t.parse::<TheoremId>())
                .transpose()
                .map_err(|e| Failure::usage(e.to_string()))?;
            let cfg = HarnessConfig {
                tolerance: cli.tolerance,
                seed: cli.seed,
                samples: *samples,
                ..HarnessConfig::default()
            };
            let (_, wc, partition) = load(file)?;
            let (partition, source) = match partition {
                Some(p) => (Some(p), Some("document")),
                None => match wc.complex().detect_partition() {
                    Ok(p) if p.labels().len() == wc.dim() + 1 => (Some(p), Some("detected")),
                    _ => (None, None),
                },
            };
            let reports = match theorem {
                Some(t) => harness::run_theorem(&wc, partition.as_ref(), t, &cfg)?,
                None => harness::run_battery(&wc, partition.as_ref(), &cfg)?,
            };
            let summary = VerifySummary::new(source, cfg.seed, cfg.tolerance, reports);
            emit(out, cli.format, &summary, |w| summary.write_text(w))?;
            Ok(summary.exit_code())
        }
        Command::Generate {
            family,
            n,
            vertices,
            sizes,
            p,
            random_weights,
            out: path,
        } => {
            let spec = generator_spec(*family, *n, *vertices, sizes, *p, cli.seed)?;
            let doc = generate(&spec, random_weights.then_some(cli.seed))?;
            let text = doc.to_json();
            match path {
                Some(path) => fs::write(path, &text).map_err(|e| Failure {
                    code: EXIT_INPUT,
                    message: format!("{}: {e}", path.display()),
                })?,
                None => out.write_all(text.as_bytes()).map_err(io_failure)?,
            }
            Ok(EXIT_OK)
        }
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: e.to_string(),
    }
}

fn load(path: &Path) -> Result<(ComplexDocument, WeightedComplex, Option<Partition>), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_INPUT,
        message: format!("{}: {e}", path.display()),
    })?;
    let doc = parse_complex(&text)?;
    let (wc, partition) = doc.build()?;
    Ok((doc, wc, partition))
}

/// `"0,3"` or `"[0, 3]"`; empty means the empty simplex.
pub fn parse_simplex(s: &str) -> Result<Simplex, Failure> {
    let inner = s.trim().trim_start_matches(['[', '{']).trim_end_matches([']', '}']);
    let vertices = inner
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Failure::usage(format!("bad vertex `{t}` in simplex `{s}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Simplex::new(vertices)?)
}

fn generator_spec(
    family: Family,
    n: Option<usize>,
    vertices: Option<usize>,
    sizes: &[usize],
    p: f64,
    seed: u64,
) -> Result<GeneratorSpec, Failure> {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| Failure::usage(format!("--{flag} is required for this family")))
    };
    let need_sizes = || {
        if sizes.is_empty() {
            Err(Failure::usage("--sizes is required for this family"))
        } else {
            Ok(sizes.to_vec())
        }
    };
    Ok(match family {
        Family::SingleSimplex => GeneratorSpec::SingleSimplex { n: need(n, "n")? },
        Family::Complete => GeneratorSpec::Complete {
            vertices: need(vertices, "vertices")?,
            n: need(n, "n")?,
        },
        Family::CompleteMultipartite => GeneratorSpec::CompleteMultipartite {
            sizes: need_sizes()?,
        },
        Family::CrossPolytope => GeneratorSpec::CrossPolytope { n: need(n, "n")? },
        Family::RandomPure => GeneratorSpec::RandomPure {
            vertices: need(vertices, "vertices")?,
            n: need(n, "n")?,
            p,
            seed,
        },
        Family::RandomPartite => GeneratorSpec::RandomPartite {
            sizes: need_sizes()?,
            p,
            seed,
        },
    })
}

/// The document for a generator, recording the spec under `metadata.generator`.
pub fn generate(spec: &GeneratorSpec, weight_seed: Option<u64>) -> Result<ComplexDocument, Failure> {
    let (x, partition) = spec.generate()?;
    if x.dim() > hdx_core::document::MAX_DOCUMENT_DIMENSION {
        return Err(Failure::usage(format!(
            "dimension {} exceeds the document limit of {}",
            x.dim(),
            hdx_core::document::MAX_DOCUMENT_DIMENSION
        )));
    }
    let weights = weight_seed.map(|s| random_facet_weights(x.facets().len(), s));
    let mut meta = Map::new();
    meta.insert(
        "generator".into(),
        serde_json::to_value(spec).expect("spec serializes"),
    );
    let doc = ComplexDocument::new(&x, weights, partition.as_ref(), Some(meta));
    doc.validate()?;
    Ok(doc)
}

#[derive(Debug, Serialize)]
pub struct PartitionSummary {
    pub source: &'static str,
    pub sides: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    pub dimension: usize,
    pub vertices: usize,
    /// Simplex counts for degrees 0..=n.
    pub simplex_counts: Vec<usize>,
    pub weighted: bool,
    pub one_skeleton_connected: bool,
    pub links_connected: bool,
    pub disconnected_links: Vec<String>,
    pub gallery_connected: bool,
    pub gallery_components: usize,
    pub betti_numbers: Vec<usize>,
    pub partition: Option<PartitionSummary>,
}

pub fn analyze(
    doc: &ComplexDocument,
    wc: &WeightedComplex,
    partition: Option<&Partition>,
) -> Result<AnalyzeReport, Failure> {
    let x = wc.complex();
    let n = x.dim();
    let links = x.check_all_links_connected();
    let gallery = x.gallery_report();
    let partition = match partition {
        Some(p) => Some(PartitionSummary {
            source: "document",
            sides: p.blocks(),
        }),
        None => x
            .detect_partition()
            .ok()
            .filter(|p| p.labels().len() == n + 1)
            .map(|p| PartitionSummary {
                source: "detected",
                sides: p.blocks(),
            }),
    };
    Ok(AnalyzeReport {
        dimension: n,
        vertices: x.count(0),
        simplex_counts: (0..=n as isize).map(|k| x.count(k)).collect(),
        weighted: doc.facet_weights.is_some(),
        one_skeleton_connected: x.is_one_skeleton_connected(),
        links_connected: links.all_connected,
        disconnected_links: links.failures().map(|l| l.tau.to_string()).collect(),
        gallery_connected: gallery.connected,
        gallery_components: gallery.components,
        betti_numbers: betti_numbers(wc)?,
        partition,
    })
}

impl AnalyzeReport {
    fn write_text(&self, w: &mut dyn Write) -> std::io::Result<()> {
        writeln!(w, "dimension: {}", self.dimension)?;
        writeln!(w, "vertices: {}", self.vertices)?;
        for (k, c) in self.simplex_counts.iter().enumerate() {
            writeln!(w, "simplices[{k}]: {c}")?;
        }
        writeln!(w, "weighted: {}", self.weighted)?;
        writeln!(w, "one_skeleton_connected: {}", self.one_skeleton_connected)?;
        writeln!(w, "links_connected: {}", self.links_connected)?;
        for l in &self.disconnected_links {
            writeln!(w, "  disconnected link: {l}")?;
        }
        writeln!(w, "gallery_connected: {}", self.gallery_connected)?;
        writeln!(w, "gallery_components: {}", self.gallery_components)?;
        writeln!(w, "betti_numbers: {}", join(self.betti_numbers.iter()))?;
        match &self.partition {
            None => writeln!(w, "partition: none"),
            Some(p) => {
                writeln!(w, "partition: {} ({} sides)", p.source, p.sides.len())?;
                for (j, s) in p.sides.iter().enumerate() {
                    writeln!(w, "  side {j}: {}", join(s.iter()))?;
                }
                Ok(())
            }
        }
    }
}

pub fn spectrum(
    wc: &WeightedComplex,
    partition: Option<&Partition>,
    degree: isize,
    link: Option<&Simplex>,
    operator: Option<OperatorKind>,
) -> Result<SpectralReport, Failure> {
    let on = match link {
        Some(tau) if !tau.is_empty() => wc.link(tau)?,
        _ => wc.clone(),
    };
    let n = on.dim() as isize;
    let kind = operator.unwrap_or(if degree < n { OperatorKind::Up } else { OperatorKind::Down });
    let (op, name) = match kind {
        OperatorKind::Up => (build_up_laplacian(&on, degree)?, "up_laplacian"),
        OperatorKind::Down => (build_down_laplacian(&on, degree)?, "down_laplacian"),
        OperatorKind::Full => (build_full_laplacian(&on, degree)?, "full_laplacian"),
    };
    let name = match link {
        Some(tau) if !tau.is_empty() => format!("{name} on link {tau}"),
        _ => name.to_string(),
    };
    let mut report = spectral_report(&op, &name, ZERO_TOLERANCE)?;
    // The forced top eigenvalue of a partite complex, reported separately.
    let whole = link.is_none_or(|t| t.is_empty());
    let partite = partition.is_some_and(|p| p.labels().len() == on.dim() + 1);
    if whole && partite && kind == OperatorKind::Up && degree == 0 && n >= 1 {
        let top = (n + 1) as f64 / n as f64;
        report = report.with_partite_top(top, ZERO_TOLERANCE);
    }
    Ok(report)
}

fn write_spectrum(w: &mut dyn Write, r: &SpectralReport) -> std::io::Result<()> {
    writeln!(w, "operator: {}", r.operator)?;
    writeln!(w, "degree: {}", r.degree)?;
    writeln!(w, "eigenvalues: {}", join_numbers(&r.eigenvalues))?;
    writeln!(w, "zero_multiplicity: {}", r.zero_multiplicity)?;
    match r.lambda_min_positive {
        Some(l) => writeln!(w, "lambda_min_positive: {}", format_number(l))?,
        None => writeln!(w, "lambda_min_positive: none")?,
    }
    writeln!(w, "kappa_max: {}", format_number(r.kappa_max))?;
    if let Some(k) = r.kappa_nontrivial {
        writeln!(w, "kappa_nontrivial: {}", format_number(k))?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct VerifySummary {
    pub outcome: &'static str,
    pub seed: u64,
    pub tolerance: f64,
    pub partition: Option<&'static str>,
    pub passed: usize,
    pub hypotheses_not_met: usize,
    pub violated: usize,
    pub reports: Vec<VerificationReport>,
}

impl VerifySummary {
    fn new(
        partition: Option<&'static str>,
        seed: u64,
        tolerance: f64,
        reports: Vec<VerificationReport>,
    ) -> Self {
        let count = |o: Outcome| reports.iter().filter(|r| r.outcome == o).count();
        let (passed, unmet, violated) = (
            count(Outcome::Pass),
            count(Outcome::HypothesisNotMet),
            count(Outcome::BoundViolated),
        );
        let outcome = if violated > 0 {
            "bound_violated"
        } else if unmet > 0 {
            "hypothesis_not_met"
        } else {
            "pass"
        };
        VerifySummary {
            outcome,
            seed,
            tolerance,
            partition,
            passed,
            hypotheses_not_met: unmet,
            violated,
            reports,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.violated > 0 {
            EXIT_VIOLATION
        } else if self.hypotheses_not_met > 0 {
            EXIT_HYPOTHESIS
        } else {
            EXIT_OK
        }
    }

    fn write_text(&self, w: &mut dyn Write) -> std::io::Result<()> {
        for r in &self.reports {
            let degree = r.degree.map(|k| format!(" k={k}")).unwrap_or_default();
            writeln!(w, "{}{degree}: {}", r.theorem, outcome_str(r.outcome))?;
            for h in &r.hypotheses {
                writeln!(w, "  {h}")?;
            }
            for c in &r.checks {
                let rel = match c.relation {
                    harness::Relation::AtMost => "<=",
                    harness::Relation::AtLeast => ">=",
                };
                writeln!(
                    w,
                    "  {} {}: {} {rel} {} slack {}",
                    if c.passed { "ok  " } else { "FAIL" },
                    c.name,
                    format_number(c.measured),
                    format_number(c.bound),
                    format_number(c.slack)
                )?;
            }
            for d in &r.discrepancies {
                writeln!(w, "  note: {d}")?;
            }
        }
        writeln!(
            w,
            "summary: {} ({} passed, {} hypotheses not met, {} violated; seed {}, tolerance {})",
            self.outcome,
            self.passed,
            self.hypotheses_not_met,
            self.violated,
            self.seed,
            format_number(self.tolerance)
        )
    }
}

fn outcome_str(o: Outcome) -> &'static str {
    match o {
        Outcome::Pass => "pass",
        Outcome::HypothesisNotMet => "hypothesis not met",
        Outcome::BoundViolated => "BOUND VIOLATED",
    }
}

fn join<T: ToString>(it: impl Iterator<Item = T>) -> String {
    it.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn join_numbers(xs: &[f64]) -> String {
    join(xs.iter().map(|&x| format_number(x)))
}

/// Rounds every float in a JSON tree to the printed precision.
pub fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_significant(n.as_f64().expect("f64 number"));
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

fn emit<T: Serialize>(
    out: &mut dyn Write,
    format: Format,
    value: &T,
    text: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<(), Failure> {
    match format {
        Format::Text => text(out).map_err(io_failure),
        Format::Json => {
            let v = round_json(serde_json::to_value(value).expect("report serializes"));
            let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
            s.push('\n');
            out.write_all(s.as_bytes()).map_err(io_failure)
        }
    }
}
