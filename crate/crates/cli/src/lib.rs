//! Command-line front end for the three-box analysis.
//!
//! [`run`] takes the argument list and both output streams, so tests can
//! drive the whole command surface in-process. Every report prints exact
//! rationals; there are no floats in any output format.

use std::ffi::OsString;
use std::fmt::{self, Write as _};
use std::io::Write;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};
use threebox::behavior::three_box_behavior;
use threebox::feasibility::figure4_report_sequential;
use threebox::pps::{abl_conditional, postselection_success, postselection_without_intermediate, three_box_scenario};
use threebox::scm::{catalog, CatalogCase};
use threebox::{
    compact_check, decide, figure4_report, format_rational, pairwise_check, Behavior, Choice, DagVariant, Rational, Scm,
};

pub const BUILTIN_THREE_BOX: &str = "builtin:three-box";

#[derive(Parser, Debug)]
#[command(name = "threebox", version, about = "Exact causal analysis of the quantum three-box experiment")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Markdown)]
    format: Format,

    /// Exit with status 1 unless the command's verdict matches.
    #[arg(long, global = true, value_enum)]
    expect: Option<Verdict>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Markdown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Verdict {
    Feasible,
    Infeasible,
    Violated,
    Ok,
    Separated,
    Connected,
    Match,
    Mismatch,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.to_possible_value().expect("no skipped variants");
        f.write_str(name.get_name())
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quantum statistics of the three-box experiment.
    #[command(subcommand, name = "three-box")]
    ThreeBox(ThreeBoxCommand),
    /// Structural causal models.
    #[command(subcommand)]
    Scm(ScmCommand),
    /// Causal diagrams.
    #[command(subcommand)]
    Dag(DagCommand),
    /// Instrumental inequalities.
    #[command(subcommand)]
    Iq(IqCommand),
    /// Exact compatibility of a behavior with a diagram.
    #[command(subcommand)]
    Feasibility(FeasibilityCommand),
    /// Summary reports.
    #[command(subcommand)]
    Report(ReportCommand),
}

#[derive(Subcommand, Debug)]
enum ThreeBoxCommand {
    /// The table P(M1, M2 | C).
    Stats,
    /// ABL conditional P(M1=i | M2=1, C=k).
    Abl {
        #[arg(long)]
        choice: Choice,
        #[arg(long, default_value_t = 1)]
        outcome: usize,
    },
    /// Post-selection probability P(M2=1 | C).
    Success {
        /// Only this choice; all choices by default.
        #[arg(long)]
        choice: Option<Choice>,
        /// Skip the intermediate measurement altogether.
        #[arg(long, conflicts_with = "choice")]
        without_intermediate: bool,
    },
}

#[derive(Subcommand, Debug)]
enum ScmCommand {
    /// Induced behavior, compared with the three-box statistics.
    Run {
        /// Catalog case (a, b1, c, d) or a model JSON file.
        model: String,
        #[arg(long, value_delimiter = ',', default_values_t = vec![1, 2, 3])]
        choices: Vec<Choice>,
    },
    /// Exogenous variables and structural equations of a model.
    Show { model: String },
}

#[derive(Subcommand, Debug)]
enum DagCommand {
    /// d-separation query with every path between the two nodes.
    Dsep {
        #[arg(long, value_parser = parse_variant)]
        variant: DagVariant,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, value_delimiter = ',')]
        given: Vec<String>,
    },
    /// Arrows and Markov factorisation of a diagram.
    Show {
        #[arg(long, value_parser = parse_variant)]
        variant: DagVariant,
    },
}

#[derive(Subcommand, Debug)]
enum IqCommand {
    Check {
        /// Behavior JSON file or `builtin:three-box`.
        #[arg(long, default_value = BUILTIN_THREE_BOX)]
        behavior: String,
        #[arg(long, value_delimiter = ',')]
        restrict: Option<Vec<Choice>>,
        #[arg(long, value_enum, default_value_t = FormArg::Pairwise)]
        form: FormArg,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormArg {
    Compact,
    Pairwise,
}

#[derive(Subcommand, Debug)]
enum FeasibilityCommand {
    Decide {
        #[arg(long, value_parser = parse_variant)]
        variant: DagVariant,
        #[arg(long, default_value = BUILTIN_THREE_BOX)]
        behavior: String,
        #[arg(long, value_delimiter = ',')]
        restrict: Option<Vec<Choice>>,
    },
}

#[derive(Subcommand, Debug)]
enum ReportCommand {
    /// All eight diagrams against the C=1,2 and C=1,2,3 statistics.
    Figure4 {
        #[arg(long, default_value = BUILTIN_THREE_BOX)]
        behavior: String,
        /// Solve the cells one after another instead of in parallel.
        #[arg(long)]
        sequential: bool,
    },
}

fn parse_variant(s: &str) -> Result<DagVariant, String> {
    s.parse().map_err(|e: threebox::Error| format!("{e}; expected pure|realist with optional +o, +p or +op"))
}

/// A rendered report and the verdict `--expect` is checked against.
struct Report {
    body: String,
    verdict: Option<Verdict>,
}

impl Report {
    fn plain(body: String) -> Self {
        Self { body, verdict: None }
    }
}

/// Integers without the `/1`, for one-line statements.
fn short(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format_rational(r)
    }
}

fn pretty(value: &Json) -> String {
    serde_json::to_string_pretty(value).expect("json values serialize")
}

fn embed(json_text: &str) -> Json {
    serde_json::from_str(json_text).expect("library json is well formed")
}

fn load_behavior(source: &str, restrict: Option<&[Choice]>) -> anyhow::Result<Behavior> {
    let b = if source == BUILTIN_THREE_BOX {
        three_box_behavior()
    } else if let Some(name) = source.strip_prefix("builtin:") {
        bail!("unknown builtin behavior {name:?} (available: {BUILTIN_THREE_BOX})");
    } else {
        let text = std::fs::read_to_string(source).with_context(|| format!("reading behavior file {source}"))?;
        Behavior::from_json(&text).with_context(|| format!("in behavior file {source}"))?
    };
    Ok(match restrict {
        Some(keep) => b.restrict(keep)?,
        None => b,
    })
}

fn load_model(source: &str) -> anyhow::Result<(String, Scm)> {
    if let Ok(case) = source.parse::<CatalogCase>() {
        return Ok((format!("case ({case})"), catalog(case)));
    }
    let text = std::fs::read_to_string(source)
        .with_context(|| format!("{source:?} is neither a catalog case (a, b1, c, d) nor a readable file"))?;
    let model = Scm::from_json(&text).with_context(|| format!("in model file {source}"))?;
    Ok((source.to_string(), model))
}

fn choice_list(choices: &[Choice]) -> String {
    choices.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
}

fn three_box(cmd: &ThreeBoxCommand, format: Format) -> anyhow::Result<Report> {
    let scenario = three_box_scenario();
    let body = match cmd {
        ThreeBoxCommand::Stats => {
            let b = threebox::pps::to_behavior(&scenario)?;
            match format {
                Format::Json => b.to_json(),
                Format::Markdown => format!("Three-box statistics P(M1=i,M2=j|C=k)\n\n{}", b.to_markdown()),
            }
        }
        &ThreeBoxCommand::Abl { choice, outcome } => {
            let p = abl_conditional(&scenario, choice, outcome)?;
            match format {
                Format::Json => {
                    pretty(&json!({ "choice": choice, "outcome": outcome, "probability": format_rational(&p) }))
                }
                Format::Markdown => format!("P(M1={outcome}|M2=1,C={choice}) = {}", short(&p)),
            }
        }
        &ThreeBoxCommand::Success { without_intermediate: true, .. } => {
            let p = postselection_without_intermediate(&scenario)?;
            match format {
                Format::Json => pretty(&json!({ "intermediate": false, "probability": format_rational(&p) })),
                Format::Markdown => format!("P(M2=1) = {} without intermediate measurement", short(&p)),
            }
        }
        &ThreeBoxCommand::Success { choice, .. } => {
            let choices = match choice {
                Some(k) => vec![k],
                None => scenario.choices(),
            };
            let rates = choices
                .iter()
                .map(|&k| Ok((k, postselection_success(&scenario, k)?)))
                .collect::<threebox::Result<Vec<_>>>()?;
            match format {
                Format::Json => {
                    let map: serde_json::Map<String, Json> =
                        rates.iter().map(|(k, p)| (format!("C={k}"), json!(format_rational(p)))).collect();
                    pretty(&json!({ "intermediate": true, "probability": map }))
                }
                Format::Markdown => {
                    rates.iter().map(|(k, p)| format!("P(M2=1|C={k}) = {}", short(p))).collect::<Vec<_>>().join("\n")
                }
            }
        }
    };
    Ok(Report::plain(body))
}

fn scm(cmd: &ScmCommand, format: Format) -> anyhow::Result<Report> {
    match cmd {
        ScmCommand::Run { model, choices } => {
            let (label, m) = load_model(model)?;
            let induced = m.induced_behavior(choices)?;
            let reference = three_box_behavior();
            let matches: Vec<(Choice, bool)> =
                induced.columns().map(|(k, col)| (k, reference.column(k).map(|r| r == col).unwrap_or(false))).collect();
            let all = matches.iter().all(|(_, ok)| *ok);
            let body = match format {
                Format::Json => {
                    let per: serde_json::Map<String, Json> =
                        matches.iter().map(|(k, ok)| (format!("C={k}"), json!(ok))).collect();
                    pretty(&json!({
                        "model": label,
                        "variant": m.variant().to_string(),
                        "behavior": embed(&induced.to_json()),
                        "matches_three_box": per,
                    }))
                }
                Format::Markdown => {
                    let mut out = format!(
                        "Model {label} on `{}`, C={}\n\n{}\nAgainst the three-box statistics:",
                        m.variant(),
                        choice_list(choices),
                        induced.to_markdown()
                    );
                    for (k, ok) in &matches {
                        let _ = write!(out, " C={k} {}", if *ok { "match" } else { "mismatch" });
                    }
                    out
                }
            };
            Ok(Report { body, verdict: Some(if all { Verdict::Match } else { Verdict::Mismatch }) })
        }
        ScmCommand::Show { model } => {
            let (label, m) = load_model(model)?;
            let body = match format {
                Format::Json => m.to_json(),
                Format::Markdown => {
                    let mut out = format!("Model {label} on `{}`\n\nExogenous:\n", m.variant());
                    for x in m.exogenous() {
                        let dist: Vec<String> = x
                            .support()
                            .iter()
                            .zip(x.weights())
                            .map(|(v, w)| format!("{v}: {}", format_rational(w)))
                            .collect();
                        let _ = writeln!(out, "- {} ~ {{{}}}", x.name(), dist.join(", "));
                    }
                    out.push_str("\nEquations:\n");
                    for eq in m.equations() {
                        match eq.source() {
                            Some(src) => {
                                let _ = writeln!(out, "- {src}");
                            }
                            None => {
                                let _ = writeln!(
                                    out,
                                    "- {}({}) by table, {} rows",
                                    eq.target(),
                                    eq.inputs().join(","),
                                    eq.table().len()
                                );
                            }
                        }
                    }
                    out.trim_end().to_string()
                }
            };
            Ok(Report::plain(body))
        }
    }
}

fn dag(cmd: &DagCommand, format: Format) -> anyhow::Result<Report> {
    match cmd {
        DagCommand::Dsep { variant, x, y, given } => {
            let g = variant.dag();
            let given: Vec<&str> = given.iter().map(String::as_str).filter(|s| !s.is_empty()).collect();
            let separated = g.d_separated(x, y, &given)?;
            let trails = g.trails(x, y, &given)?;
            let body = match format {
                Format::Json => pretty(&json!({
                    "variant": variant.to_string(),
                    "x": x,
                    "y": y,
                    "given": given,
                    "separated": separated,
                    "paths": trails.iter().map(|(t, active)| json!({ "path": t.rendered, "active": active })).collect::<Vec<_>>(),
                })),
                Format::Markdown => {
                    let verdict = if separated { "d-separated" } else { "d-connected" };
                    let mut out = format!(
                        "{x} and {y} given {{{}}} in `{variant}`: {verdict}\n\n| path | status |\n|---|---|\n",
                        given.join(",")
                    );
                    for (t, active) in &trails {
                        let _ = writeln!(out, "| {t} | {} |", if *active { "active" } else { "blocked" });
                    }
                    out.trim_end().to_string()
                }
            };
            Ok(Report { body, verdict: Some(if separated { Verdict::Separated } else { Verdict::Connected }) })
        }
        DagCommand::Show { variant } => {
            let g = variant.dag();
            let factorization = g.markov_factorization();
            let arrows: Vec<String> = g.arrows().iter().map(|(a, b)| format!("{a}→{b}")).collect();
            let body = match format {
                Format::Json => pretty(&json!({
                    "variant": variant.to_string(),
                    "dag": embed(&g.to_json()),
                    "factorization": factorization.to_string(),
                })),
                Format::Markdown => format!("`{variant}`: {}\n\n{factorization}", arrows.join(", ")),
            };
            Ok(Report::plain(body))
        }
    }
}

fn iq(cmd: &IqCommand, format: Format) -> anyhow::Result<Report> {
    let IqCommand::Check { behavior, restrict, form } = cmd;
    let b = load_behavior(behavior, restrict.as_deref())?;
    let report = match form {
        FormArg::Compact => compact_check(&b)?,
        FormArg::Pairwise => pairwise_check(&b)?,
    };
    let body = match format {
        Format::Json => report.to_json(),
        Format::Markdown => report.to_markdown().trim_end().to_string(),
    };
    Ok(Report { body, verdict: Some(if report.violated() { Verdict::Violated } else { Verdict::Ok }) })
}

fn feasibility(cmd: &FeasibilityCommand, format: Format) -> anyhow::Result<Report> {
    let FeasibilityCommand::Decide { variant, behavior, restrict } = cmd;
    let b = load_behavior(behavior, restrict.as_deref())?;
    let result = decide(&b, *variant)?;
    let body = match format {
        Format::Json => result.to_json(),
        Format::Markdown => result.to_markdown().trim_end().to_string(),
    };
    Ok(Report { body, verdict: Some(if result.feasible { Verdict::Feasible } else { Verdict::Infeasible }) })
}

fn report(cmd: &ReportCommand, format: Format) -> anyhow::Result<Report> {
    let ReportCommand::Figure4 { behavior, sequential } = cmd;
    let b = load_behavior(behavior, None)?;
    let report = if *sequential { figure4_report_sequential(&b)? } else { figure4_report(&b)? };
    let body = match format {
        Format::Json => report.to_json(),
        Format::Markdown => format!("Feasibility of each diagram\n\n{}", report.to_markdown().trim_end()),
    };
    Ok(Report::plain(body))
}

fn execute(cli: &Cli) -> anyhow::Result<Report> {
    match &cli.command {
        Command::ThreeBox(cmd) => three_box(cmd, cli.format),
        Command::Scm(cmd) => scm(cmd, cli.format),
        Command::Dag(cmd) => dag(cmd, cli.format),
        Command::Iq(cmd) => iq(cmd, cli.format),
        Command::Feasibility(cmd) => feasibility(cmd, cli.format),
        Command::Report(cmd) => report(cmd, cli.format),
    }
}

/// Runs one command. Exit status: 0 on success, 1 on a domain error or a
/// failed `--expect`, 2 on a usage error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                return 2;
            }
            let _ = write!(out, "{text}");
            return 0;
        }
    };
    let report = match execute(&cli) {
        Ok(report) => report,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            return 1;
        }
    };
    let _ = writeln!(out, "{}", report.body);
    match (cli.expect, report.verdict) {
        (None, _) => 0,
        (Some(want), None) => {
            let _ = writeln!(err, "error: --expect {want} does not apply to this command");
            2
        }
        (Some(want), Some(got)) if want == got => 0,
        (Some(want), Some(got)) => {
            let _ = writeln!(err, "expectation failed: wanted {want}, got {got}");
            1
        }
    }
}
