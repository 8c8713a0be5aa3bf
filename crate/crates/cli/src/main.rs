//! Command-line front end: batch analysis of surface singularities with
//! JSON (default) or human-readable reports on stdout.
//!
//! Exit codes: 0 on success, 1 on domain errors (the report still carries
//! machine-readable diagnostics), 2 on usage errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use blowade::blowup::{pullback, Chart};
use blowade::certify::{analyze, same_type, AnalyzeOptions};
use blowade::curve::{classify_ade, ProjectivePoint};
use blowade::deform::{check_family, mu_star, CheckOptions, DeformationFamily};
use blowade::error::Error;
use blowade::newton::VarSet;
use blowade::parse_polynomial;
use blowade::report::{
    ade_value, blow_ade_text, blow_ade_value, mu_star_value, pullback_value, same_type_value,
    verdict_value, zeta_value, Diagnostic, Report, ReportOptions,
};
use blowade::series::DEFAULT_TRUNCATION;
use blowade::zeta::varchenko_zeta;
use blowade::{Poly, Rat, TruncatedSeries};

#[derive(Parser)]
#[command(name = "blowade", version, about = "Exact analysis of isolated surface singularities: tangent-cone ADE types, blow-ups, and monodromy zeta-functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct CommonOpts {
    /// Truncation order for series computations
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    truncation: u32,
    /// Output format
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Certify the blow-ADE property of f(z1,z2,z3)
    Analyze {
        /// Polynomial text (omit when using --corpus)
        poly: Option<String>,
        #[command(flatten)]
        common: CommonOpts,
        /// Cap on the blow-order search (default: truncation - d)
        #[arg(long)]
        max_blow_order: Option<u32>,
        /// Supply a singular point "a:b:c" (repeatable); bypasses the
        /// rational-locus solver
        #[arg(long = "point")]
        points: Vec<String>,
        /// Analyze every .poly file in a directory (batch mode)
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Varchenko zeta-function of a Newton non-degenerate germ
    Zeta {
        poly: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// ADE type of a two-variable curve germ
    Classify {
        germ: String,
        /// The two germ variables, e.g. "x2,x3"
        #[arg(long, default_value = "x2,x3")]
        vars: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Pull-back and strict transform of f in one blow-up chart
    Blowup {
        poly: String,
        /// Chart index 1, 2, or 3
        #[arg(long, default_value_t = 1)]
        chart: u8,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Analyze two polynomials and compare their blow-ADE types
    Compare {
        poly1: String,
        poly2: String,
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        max_blow_order: Option<u32>,
    },
    /// Check type stability of a family f_s across rational samples
    DeformCheck {
        family: String,
        #[command(flatten)]
        common: CommonOpts,
        /// Comma-separated rational samples, e.g. "0,1/7,1/3,1/2,1"
        #[arg(long)]
        samples: Option<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        trials: u32,
    },
    /// Teissier mu* triple through the Newton-number route
    MuStar {
        poly: String,
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        trials: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(RunError::Domain(report)) => {
            println!("{}", report);
            ExitCode::from(1)
        }
        Err(RunError::Usage(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}

enum RunError {
    Domain(String),
    Usage(String),
}

fn parse_rat(text: &str) -> Result<Rat, RunError> {
    text.trim()
        .parse::<Rat>()
        .map_err(|_| RunError::Usage(format!("invalid rational '{}'", text.trim())))
}

/// "--vars x2,x3"-style pair into variable slots.
fn parse_var_pair(text: &str) -> Result<(usize, usize), RunError> {
    let err = || RunError::Usage(format!("invalid --vars '{}'; expected e.g. x2,x3", text));
    let parts: Vec<&str> = text.split(',').map(|s| s.trim()).collect();
    if parts.len() != 2 {
        return Err(err());
    }
    let slot = |s: &str| -> Result<usize, RunError> {
        let b = s.as_bytes();
        if b.len() == 2 && matches!(b[0], b'x' | b'y' | b'z') && (b'1'..=b'3').contains(&b[1]) {
            Ok((b[1] - b'1') as usize)
        } else {
            Err(err())
        }
    };
    let a = slot(parts[0])?;
    let b = slot(parts[1])?;
    if a == b {
        return Err(err());
    }
    Ok((a, b))
}

/// Move a two-variable germ into the (x2, x3) slots, respecting the order
/// given on the command line.
fn relabel_to_x2_x3(f: &Poly, slots: (usize, usize)) -> Poly {
    if slots == (1, 2) {
        return f.clone();
    }
    let mut images = [Poly::zero(), Poly::zero(), Poly::zero()];
    images[slots.0] = Poly::var(1);
    images[slots.1] = Poly::var(2);
    for (i, img) in images.iter_mut().enumerate() {
        if i != slots.0 && i != slots.1 {
            *img = Poly::zero();
        }
    }
    f.substitute(&images)
}

fn parse_point(text: &str) -> Result<ProjectivePoint, RunError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(RunError::Usage(format!(
            "point '{}' must have three ':'-separated coordinates",
            text
        )));
    }
    let coords = [
        parse_rat(parts[0])?,
        parse_rat(parts[1])?,
        parse_rat(parts[2])?,
    ];
    ProjectivePoint::new(coords).map_err(|e| RunError::Usage(e.to_string()))
}

fn emit(report: &Report, format: Format, text_body: Option<String>) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(report).unwrap()),
        Format::Text => {
            if let Some(t) = text_body {
                print!("{}", t);
            } else {
                println!("{}", serde_json::to_string_pretty(&report.result).unwrap());
            }
            for d in &report.diagnostics {
                println!("[{}] {}", d.kind, d.message);
            }
        }
    }
}

fn domain_error(command: &str, input: &str, options: ReportOptions, e: &Error, format: Format) -> RunError {
    let report = Report {
        command: command.into(),
        input: input.into(),
        options,
        result: Value::Null,
        diagnostics: vec![Diagnostic::from_error(e)],
    };
    let rendered = match format {
        Format::Json => serde_json::to_string_pretty(&report).unwrap(),
        Format::Text => format!("error [{}]: {}", e.kind(), e),
    };
    RunError::Domain(rendered)
}

fn base_options(truncation: u32, format: Format) -> ReportOptions {
    ReportOptions {
        tool_version: blowade::VERSION.to_string(),
        truncation: Some(truncation),
        format: match format {
            Format::Json => "json".into(),
            Format::Text => "text".into(),
        },
        ..Default::default()
    }
}

fn parse_input_poly(text: &str, command: &str, options: &ReportOptions, format: Format) -> Result<Poly, RunError> {
    parse_polynomial(text).map_err(|e| {
        domain_error(
            command,
            text,
            ReportOptions {
                tool_version: options.tool_version.clone(),
                truncation: options.truncation,
                format: options.format.clone(),
                ..Default::default()
            },
            &e,
            format,
        )
    })
}

fn run(cli: Cli) -> Result<(), RunError> {
    match cli.command {
        Command::Analyze { poly, common, max_blow_order, points, corpus } => {
            let mut options = base_options(common.truncation, common.format);
            options.max_blow_order = max_blow_order;
            options.points = points.clone();
            let user_points: Vec<ProjectivePoint> = points
                .iter()
                .map(|p| parse_point(p))
                .collect::<Result<_, _>>()?;
            let opts = AnalyzeOptions {
                truncation: common.truncation,
                max_blow_order,
                user_points,
            };
            if let Some(dir) = corpus {
                return run_corpus(&dir, &opts, options, common.format);
            }
            let text = poly.ok_or_else(|| {
                RunError::Usage("provide a polynomial or --corpus <dir>".into())
            })?;
            let f = parse_input_poly(&text, "analyze", &options, common.format)?;
            match analyze(&f, &opts) {
                Ok(r) => {
                    let report = Report {
                        command: "analyze".into(),
                        input: text.clone(),
                        options,
                        result: blow_ade_value(&r),
                        diagnostics: r
                            .failures
                            .iter()
                            .map(|m| Diagnostic::note(m.clone()))
                            .collect(),
                    };
                    emit(&report, common.format, Some(blow_ade_text(&r)));
                    Ok(())
                }
                Err(e) => Err(domain_error("analyze", &text, options, &e, common.format)),
            }
        }
        Command::Zeta { poly, common } => {
            let options = base_options(common.truncation, common.format);
            let f = parse_input_poly(&poly, "zeta", &options, common.format)?;
            match varchenko_zeta(&f, VarSet::all3()) {
                Ok(z) => {
                    let report = Report {
                        command: "zeta".into(),
                        input: poly,
                        options,
                        result: json!({
                            "zeta": zeta_value(&z),
                            "degree": z.degree(),
                        }),
                        diagnostics: vec![],
                    };
                    emit(&report, common.format, Some(format!("zeta = {}\ndegree = {}\n", z, z.degree())));
                    Ok(())
                }
                Err(e) => Err(domain_error("zeta", &poly, options, &e, common.format)),
            }
        }
        Command::Classify { germ, vars, common } => {
            let options = base_options(common.truncation, common.format);
            let slots = parse_var_pair(&vars)?;
            let f = parse_input_poly(&germ, "classify", &options, common.format)?;
            // the germ must live in the two named variables
            for (e, _) in f.terms() {
                for (i, &ei) in e.iter().enumerate() {
                    if ei > 0 && i != slots.0 && i != slots.1 {
                        return Err(RunError::Usage(format!(
                            "germ involves a variable outside --vars {}",
                            vars
                        )));
                    }
                }
            }
            // classification is defined on (x2, x3); relabel other pairs
            let relabeled = relabel_to_x2_x3(&f, slots);
            let series = TruncatedSeries::new(relabeled, common.truncation);
            match classify_ade(&series) {
                Ok(cl) => {
                    let report = Report {
                        command: "classify".into(),
                        input: germ,
                        options,
                        result: ade_value(&cl.ade),
                        diagnostics: vec![],
                    };
                    emit(&report, common.format, Some(format!("{}\n", cl.ade)));
                    Ok(())
                }
                Err(e) => Err(domain_error("classify", &germ, options, &e, common.format)),
            }
        }
        Command::Blowup { poly, chart, common } => {
            let options = base_options(common.truncation, common.format);
            let f = parse_input_poly(&poly, "blowup", &options, common.format)?;
            let chart = Chart::new(chart)
                .map_err(|e| RunError::Usage(e.to_string()))?;
            match pullback(&f, &chart) {
                Ok(pb) => {
                    let report = Report {
                        command: "blowup".into(),
                        input: poly,
                        options,
                        result: pullback_value(&pb),
                        diagnostics: vec![],
                    };
                    emit(
                        &report,
                        common.format,
                        Some(format!(
                            "pullback = {}\nstrict transform = {}\n",
                            pb.total.to_string_with(["y1", "y2", "y3"]),
                            pb.strict.to_string_with(["y1", "y2", "y3"])
                        )),
                    );
                    Ok(())
                }
                Err(e) => Err(domain_error("blowup", &poly, options, &e, common.format)),
            }
        }
        Command::Compare { poly1, poly2, common, max_blow_order } => {
            let mut options = base_options(common.truncation, common.format);
            options.max_blow_order = max_blow_order;
            let input = format!("{} ; {}", poly1, poly2);
            let f1 = parse_input_poly(&poly1, "compare", &options, common.format)?;
            let f2 = parse_input_poly(&poly2, "compare", &options, common.format)?;
            let opts = AnalyzeOptions {
                truncation: common.truncation,
                max_blow_order,
                user_points: vec![],
            };
            let run2 = analyze(&f1, &opts).and_then(|a| analyze(&f2, &opts).map(|b| (a, b)));
            match run2 {
                Ok((a, b)) => {
                    let st = same_type(&a, &b);
                    let (cmp_value, diag) = match st {
                        Ok(s) => (same_type_value(&s), vec![]),
                        Err(e) => (Value::Null, vec![Diagnostic::from_error(&e)]),
                    };
                    let report = Report {
                        command: "compare".into(),
                        input,
                        options,
                        result: json!({
                            "first": blow_ade_value(&a),
                            "second": blow_ade_value(&b),
                            "comparison": cmp_value,
                        }),
                        diagnostics: diag,
                    };
                    emit(&report, common.format, None);
                    Ok(())
                }
                Err(e) => Err(domain_error("compare", &input, options, &e, common.format)),
            }
        }
        Command::DeformCheck { family, common, samples, seed, trials } => {
            let mut options = base_options(common.truncation, common.format);
            options.seed = Some(seed);
            options.trials = Some(trials);
            let sample_list: Option<Vec<Rat>> = match &samples {
                None => None,
                Some(s) => Some(
                    s.split(',')
                        .map(parse_rat)
                        .collect::<Result<Vec<_>, _>>()?,
                ),
            };
            options.samples = sample_list
                .as_ref()
                .map(|v| v.iter().map(|r| r.to_string()).collect());
            let fam = match DeformationFamily::parse(&family, sample_list) {
                Ok(f) => f,
                Err(e) => return Err(domain_error("deform-check", &family, options, &e, common.format)),
            };
            let copts = CheckOptions {
                analyze: AnalyzeOptions {
                    truncation: common.truncation,
                    max_blow_order: None,
                    user_points: vec![],
                },
                trials,
                seed,
            };
            match check_family(&fam, &copts) {
                Ok(v) => {
                    let report = Report {
                        command: "deform-check".into(),
                        input: family,
                        options,
                        result: verdict_value(&v),
                        diagnostics: vec![],
                    };
                    emit(&report, common.format, None);
                    Ok(())
                }
                Err(e) => Err(domain_error("deform-check", &family, options, &e, common.format)),
            }
        }
        Command::MuStar { poly, common, seed, trials } => {
            let mut options = base_options(common.truncation, common.format);
            options.seed = Some(seed);
            options.trials = Some(trials);
            let f = parse_input_poly(&poly, "mu-star", &options, common.format)?;
            match mu_star(&f, trials, seed) {
                Ok(m) => {
                    let report = Report {
                        command: "mu-star".into(),
                        input: poly,
                        options,
                        result: mu_star_value(&m),
                        diagnostics: vec![Diagnostic::note(
                            "mu2 is a seeded random-section minimum (heuristic-generic)",
                        )],
                    };
                    emit(
                        &report,
                        common.format,
                        Some(format!("mu* = ({}, {}, {})\n", m.mu3, m.mu2, m.mu1)),
                    );
                    Ok(())
                }
                Err(e) => Err(domain_error("mu-star", &poly, options, &e, common.format)),
            }
        }
    }
}

fn run_corpus(
    dir: &PathBuf,
    opts: &AnalyzeOptions,
    options: ReportOptions,
    format: Format,
) -> Result<(), RunError> {
    let mut entries: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| RunError::Usage(format!("cannot read corpus directory: {}", e)))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "poly"))
        .collect();
    entries.sort();
    let mut results: Vec<Value> = Vec::new();
    let mut diagnostics: Vec<Diagnostic> = Vec::new();
    for path in &entries {
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t.trim().to_string(),
            Err(e) => {
                diagnostics.push(Diagnostic::note(format!("{}: {}", name, e)));
                continue;
            }
        };
        let value = parse_polynomial(&text)
            .and_then(|f| analyze(&f, opts))
            .map(|r| blow_ade_value(&r));
        match value {
            Ok(v) => results.push(json!({"file": name, "input": text, "report": v})),
            Err(e) => {
                results.push(json!({
                    "file": name,
                    "input": text,
                    "error": {"kind": e.kind(), "message": e.to_string()},
                }));
                diagnostics.push(Diagnostic::from_error(&e));
            }
        }
    }
    let report = Report {
        command: "analyze".into(),
        input: dir.to_string_lossy().to_string(),
        options,
        result: Value::Array(results),
        diagnostics,
    };
    emit(&report, format, None);
    Ok(())
}
