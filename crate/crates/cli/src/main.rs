//! `bazi`: charts, analysis, luck cycles, persona prompts and the benchmark.
//!
//! Exit codes: 0 success, 1 validation or runtime failure, 2 usage or
//! configuration error, 3 benchmark run marked invalid.

mod config;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bazi_core::analysis::analyze;
use bazi_core::bench::{
    evaluate, import_release, load_dataset, make_shuffle, CellKey, EvalConfig, EvalReport,
    EvalSetting, Gazetteer, Providers, ReportFormat, RunMetadata, ShuffleScope,
};
use bazi_core::calendrics::{
    format_utc_iso, solar_terms_for_year, CivilDateTime, GeoLocation, TERM_NAMES,
};
use bazi_core::chart::{build_chart, ChartDocument, FourPillarsChart, Gender};
use bazi_core::cycles::{cycles_report, luck_pillars, InteractionOptions};
use bazi_core::llm::{Cache, Client};
use bazi_core::persona::{
    render_prompt, PersonaAssets, PersonaInputs, PromptOptions, QuestionContext, ScenarioDomain,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use config::{ConfigError, GlobalConfig};

#[derive(Parser)]
#[command(
    name = "bazi",
    version,
    about = "BaZi charts, persona prompts and the multiple-choice benchmark"
)]
struct Cli {
    /// Plain-text `key = value` config file (also BAZI_CONFIG).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Day attribution for 23:00-24:00 births.
    #[arg(long, global = true, value_name = "next_day|same_day")]
    late_zi: Option<String>,
    #[arg(long, global = true, value_name = "off|mean_solar|true_solar")]
    solar_time: Option<String>,
    /// Rule profile JSON replacing the bundled one.
    #[arg(long, global = true, value_name = "FILE")]
    rule_profile: Option<String>,
    #[arg(long, global = true, value_name = "VERSION")]
    template_version: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Four Pillars chart as JSON.
    Chart(BirthArgs),
    /// Ten Gods, ShenSha, strength, pattern and favorable elements as JSON.
    Analyze(BirthArgs),
    /// Luck pillars and flowing years with their interactions, as JSON.
    Cycles(CyclesArgs),
    /// Persona prompt text for a chart.
    Persona(PersonaArgs),
    /// The 24 solar-term instants of a year, ISO-8601 UTC, one per line.
    SolarTerms { year: i32 },
    /// Validate a benchmark dataset and print its statistics.
    Validate {
        #[arg(long, value_name = "FILE")]
        dataset: PathBuf,
    },
    /// Run the benchmark and write a report.
    Eval(EvalArgs),
    /// Convert a released dataset file into the benchmark schema.
    Import {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        /// JSON map of place name to {lon, lat, utc_offset_minutes, country}.
        #[arg(long, value_name = "FILE")]
        gazetteer: PathBuf,
        /// Output path; stdout when omitted.
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct BirthArgs {
    /// Local clock time, e.g. 1966-10-18T23:15.
    #[arg(long)]
    birth: String,
    /// Offset of the local clock from UTC, in minutes.
    #[arg(long, allow_hyphen_values = true)]
    utc_offset: i32,
    /// Degrees east.
    #[arg(long, allow_hyphen_values = true)]
    lon: f64,
    /// Degrees north.
    #[arg(long, allow_hyphen_values = true)]
    lat: f64,
    #[arg(long, value_name = "m|f")]
    gender: Gender,
}

#[derive(Args)]
struct CyclesArgs {
    #[command(flatten)]
    birth: BirthArgs,
    /// Number of luck pillars; config `luck_count` by default.
    #[arg(long)]
    count: Option<u32>,
    /// First flowing year; the birth year by default.
    #[arg(long)]
    from: Option<i32>,
    /// Last flowing year; ten years after `--from` by default.
    #[arg(long)]
    to: Option<i32>,
    /// Also report 三合 triads completed by the flowing year.
    #[arg(long)]
    three_harmony: bool,
}

#[derive(Args)]
struct PersonaArgs {
    #[command(flatten)]
    birth: BirthArgs,
    #[arg(long, default_value = "full", value_name = "vanilla|rules|full")]
    setting: EvalSetting,
    /// Scenario dimension; repeatable. All five when omitted.
    #[arg(long = "domain", value_name = "DIMENSION")]
    domains: Vec<ScenarioDomain>,
    #[arg(long)]
    question: Option<String>,
    /// Answer option; repeat in order (A, B, ...).
    #[arg(long = "choice")]
    choices: Vec<String>,
    #[arg(long)]
    reference_year: Option<i32>,
    #[arg(long)]
    birthplace: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    BirthAndPlace,
    DateOnly,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, value_name = "FILE")]
    dataset: PathBuf,
    /// Repeatable; one report cell per setting and model.
    #[arg(
        long = "setting",
        value_name = "vanilla|rules|full",
        default_value = "vanilla"
    )]
    settings: Vec<EvalSetting>,
    /// Reasoning model id; repeatable.
    #[arg(long = "model", value_name = "ID", default_value = "mock-model")]
    models: Vec<String>,
    /// Knowledge-stage model id for `full`; the reasoning model by default.
    #[arg(long, value_name = "ID")]
    knowledge_model: Option<String>,
    /// openai-compatible | mock-gold | mock-uniform:SEED | mock-fixed:X | mock-chart-echo
    #[arg(long, value_name = "KIND")]
    provider: Option<String>,
    #[arg(long, value_name = "KIND")]
    knowledge_provider: Option<String>,
    #[arg(long, value_name = "URL")]
    endpoint_url: Option<String>,
    /// Name of the environment variable holding the API key.
    #[arg(long, value_name = "VAR")]
    credential_env: Option<String>,
    #[arg(long, value_name = "N")]
    max_parallel: Option<String>,
    /// Evaluate against a shuffled-birthday control with this seed.
    #[arg(long, value_name = "N")]
    shuffle_seed: Option<u64>,
    #[arg(long, value_enum, default_value = "birth-and-place")]
    shuffle_scope: ScopeArg,
    /// With `--shuffle-seed`, also run the unshuffled cells.
    #[arg(long)]
    paired: bool,
    #[arg(long, value_name = "DIR")]
    cache_dir: Option<String>,
    /// Report path; format from the extension (.json, .csv, .md).
    #[arg(long, value_name = "FILE")]
    report: Option<PathBuf>,
    /// Cell for relative changes, `model:setting[:shuffled]`.
    #[arg(long, value_name = "KEY")]
    baseline: Option<CellKey>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Invalid(Vec<String>),
    Failed(String),
    InvalidRun(Vec<String>),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Invalid(items)) => {
            for i in items {
                eprintln!("error: {i}");
            }
            ExitCode::from(1)
        }
        Err(CliError::Failed(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(CliError::InvalidRun(cells)) => {
            for c in cells {
                eprintln!("invalid run: {c}");
            }
            ExitCode::from(3)
        }
    }
}

fn resolve_config(cli: &Cli, extra: &[(&str, &Option<String>)]) -> Result<GlobalConfig, CliError> {
    let file_path = cli
        .config
        .clone()
        .or_else(|| std::env::var_os("BAZI_CONFIG").map(PathBuf::from));
    let file = match file_path {
        Some(p) => config::parse_file(&config::read(&p)?)?,
        None => BTreeMap::new(),
    };
    let mut flags = BTreeMap::new();
    let base = [
        ("late_zi_policy", &cli.late_zi),
        ("solar_time", &cli.solar_time),
        ("rule_profile_path", &cli.rule_profile),
        ("template_version", &cli.template_version),
    ];
    for (k, v) in base.iter().chain(extra) {
        if let Some(v) = v {
            flags.insert(k.to_string(), v.clone());
        }
    }
    Ok(GlobalConfig::resolve(
        &file,
        |k| std::env::var(k).ok(),
        &flags,
    )?)
}

/// Writes to stdout; a closed pipe (`bazi ... | head`) is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn print_json(v: &impl serde::Serialize) {
    emit(&format!(
        "{}\n",
        serde_json::to_string_pretty(v).expect("serializable")
    ));
}

fn chart_of(b: &BirthArgs, cfg: &GlobalConfig) -> Result<FourPillarsChart, CliError> {
    let civil = CivilDateTime::parse_local(&b.birth, b.utc_offset).map_err(CliError::Usage)?;
    let loc = GeoLocation::new(b.lon, b.lat).map_err(|e| CliError::Usage(e.to_string()))?;
    build_chart(&civil, &loc, b.gender, &cfg.chart).map_err(failed)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Chart(b) => {
            let cfg = resolve_config(&cli, &[])?;
            print_json(&ChartDocument::new(&chart_of(b, &cfg)?));
        }
        Command::Analyze(b) => {
            let cfg = resolve_config(&cli, &[])?;
            let chart = chart_of(b, &cfg)?;
            print_json(&analyze(&chart, &cfg.profile()?, &cfg.catalog()?));
        }
        Command::Cycles(a) => {
            let cfg = resolve_config(&cli, &[])?;
            let chart = chart_of(&a.birth, &cfg)?;
            let from = a.from.unwrap_or(chart.civil.year);
            let to = a.to.unwrap_or(from + 10);
            let opts = InteractionOptions {
                three_harmony: a.three_harmony,
            };
            let report =
                cycles_report(&chart, a.count.unwrap_or(cfg.luck_count), (from, to), &opts)
                    .map_err(failed)?;
            print_json(&report);
        }
        Command::Persona(a) => persona(&cli, a)?,
        Command::SolarTerms { year } => {
            let terms = solar_terms_for_year(*year).map_err(|e| CliError::Usage(e.to_string()))?;
            if cli.json {
                let rows: Vec<_> = terms
                    .iter()
                    .map(|t| {
                        json!({
                            "index": t.index,
                            "name": TERM_NAMES[t.index],
                            "target_longitude_deg": t.target_longitude_deg,
                            "utc": format_utc_iso(t.instant.jd_utc),
                        })
                    })
                    .collect();
                print_json(&rows);
            } else {
                let lines: String = terms
                    .iter()
                    .map(|t| format_utc_iso(t.instant.jd_utc) + "\n")
                    .collect();
                emit(&lines);
            }
        }
        Command::Validate { dataset } => validate(&cli, dataset)?,
        Command::Eval(a) => eval(&cli, a)?,
        Command::Import {
            input,
            gazetteer,
            output,
        } => import(&cli, input, gazetteer, output.as_deref())?,
    }
    Ok(())
}

fn persona(cli: &Cli, a: &PersonaArgs) -> Result<(), CliError> {
    let cfg = resolve_config(cli, &[])?;
    let chart = chart_of(&a.birth, &cfg)?;
    let bundle = analyze(&chart, &cfg.profile()?, &cfg.catalog()?);
    let luck = luck_pillars(&chart, cfg.luck_count).map_err(failed)?;
    let assets = PersonaAssets::bundled();
    let inputs = PersonaInputs {
        chart: &chart,
        bundle: &bundle,
        luck: &luck,
        assets: &assets,
    };
    let domains = if a.domains.is_empty() {
        ScenarioDomain::ALL.to_vec()
    } else {
        a.domains.clone()
    };
    let question = match (&a.question, a.choices.is_empty()) {
        (Some(text), _) => Some(QuestionContext {
            text: text.clone(),
            choices: a.choices.clone(),
        }),
        (None, false) => return Err(CliError::Usage("--choice needs --question".into())),
        (None, true) => None,
    };
    let options = PromptOptions {
        template_version: cfg.template_version.clone(),
        variant: a.setting.variant(),
        luck_count: cfg.luck_count,
        reference_year: a.reference_year,
        birthplace: a.birthplace.clone(),
        ..PromptOptions::default()
    };
    let prompt = render_prompt(&inputs, &domains, question.as_ref(), &options)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    if cli.json {
        print_json(&prompt);
    } else {
        emit(&prompt.rendered_text);
    }
    Ok(())
}

fn issues(list: &[bazi_core::bench::Issue]) -> Vec<String> {
    list.iter().map(ToString::to_string).collect()
}

fn validate(cli: &Cli, path: &Path) -> Result<(), CliError> {
    let (_, report) = load_dataset(path).map_err(|e| CliError::Invalid(vec![e.to_string()]))?;
    if cli.json {
        print_json(&json!({
            "valid": report.is_valid(),
            "stats": report.stats,
            "errors": report.errors,
            "warnings": report.warnings,
        }));
    } else {
        let s = &report.stats;
        let mut text = format!(
            "persons: {}\ncountries: {}\nquestions: {}\nmale: {}\nfemale: {}\nquestions per person: {:.2}\n",
            s.persons, s.countries, s.questions, s.male, s.female, s.avg_questions_per_person
        );
        for (d, n) in &s.per_dimension {
            text += &format!("  {d}: {n}\n");
        }
        emit(&text);
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if report.is_valid() {
        Ok(())
    } else {
        Err(CliError::Invalid(issues(&report.errors)))
    }
}

fn eval(cli: &Cli, a: &EvalArgs) -> Result<(), CliError> {
    let cfg = resolve_config(
        cli,
        &[
            ("provider", &a.provider),
            ("knowledge_provider", &a.knowledge_provider),
            ("provider.endpoint_url", &a.endpoint_url),
            ("provider.credential_env", &a.credential_env),
            ("provider.max_parallel", &a.max_parallel),
            ("cache_dir", &a.cache_dir),
        ],
    )?;
    let format = match &a.report {
        None => None,
        Some(p) => Some(
            p.extension()
                .and_then(|e| e.to_str())
                .and_then(ReportFormat::from_extension)
                .ok_or_else(|| {
                    CliError::Usage(format!("{}: use .json, .csv or .md", p.display()))
                })?,
        ),
    };
    let (dataset, validation) =
        load_dataset(&a.dataset).map_err(|e| CliError::Invalid(vec![e.to_string()]))?;
    if !validation.is_valid() {
        return Err(CliError::Invalid(issues(&validation.errors)));
    }
    let records = &dataset.persons;
    let reasoning =
        Client::new(cfg.provider.clone()).map_err(|e| CliError::Usage(e.to_string()))?;
    let knowledge = if a.settings.contains(&EvalSetting::FullModel) {
        Some(
            Client::new(cfg.knowledge_provider.clone())
                .map_err(|e| CliError::Usage(e.to_string()))?,
        )
    } else {
        None
    };
    let cache = match &cfg.cache_dir {
        Some(d) => Some(Cache::open(d).map_err(failed)?),
        None => None,
    };
    let providers = Providers {
        reasoning: &reasoning,
        knowledge: knowledge.as_ref(),
        cache: cache.as_ref(),
    };
    let plan = match a.shuffle_seed {
        Some(seed) => {
            let mut p = make_shuffle(records, seed).map_err(failed)?;
            p.scope = match a.shuffle_scope {
                ScopeArg::BirthAndPlace => ShuffleScope::BirthAndPlace,
                ScopeArg::DateOnly => ShuffleScope::DateOnly,
            };
            Some(p)
        }
        None => None,
    };
    let mut arms = Vec::new();
    if plan.is_none() || a.paired {
        arms.push(None);
    }
    if let Some(p) = &plan {
        arms.push(Some(p));
    }
    let (profile, catalog) = (cfg.profile()?, cfg.catalog()?);
    let mut metadata: Option<RunMetadata> = None;
    let mut cells = Vec::new();
    for setting in &a.settings {
        for model in &a.models {
            let mut ec = EvalConfig::new(*setting, model.clone());
            ec.knowledge_model_id = a.knowledge_model.clone();
            ec.template_version = cfg.template_version.clone();
            ec.chart = cfg.chart;
            ec.profile = profile.clone();
            ec.catalog = catalog.clone();
            ec.luck_count = cfg.luck_count;
            ec.temperature = cfg.temperature;
            ec.max_output_tokens = cfg.max_output_tokens;
            let meta = metadata.get_or_insert_with(|| RunMetadata::from_config(&ec, records));
            for arm in &arms {
                let run = evaluate(records, &ec, providers, *arm).map_err(failed)?;
                cells.push(run.cell);
                if let Some(p) = arm {
                    meta.record_shuffle(p);
                }
            }
            meta.record_providers(&ec, providers);
        }
    }
    let mut metadata = metadata.ok_or_else(|| CliError::Usage("no settings or models".into()))?;
    metadata.config = cfg.echo.clone();
    if let Some(c) = &cache {
        metadata.cache = c.stats();
    }
    let mut report = EvalReport::new(metadata);
    report.cells = cells;
    if let Some(key) = &a.baseline {
        report
            .set_baseline(key.clone())
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    if let (Some(path), Some(fmt)) = (&a.report, format) {
        std::fs::write(path, report.render(fmt))
            .map_err(|e| failed(format!("{}: {e}", path.display())))?;
    }
    if cli.json {
        emit(&format!("{}\n", report.to_json()));
    } else {
        emit(&report.to_markdown());
    }
    if report.is_valid() {
        Ok(())
    } else {
        Err(CliError::InvalidRun(
            report
                .cells
                .iter()
                .filter(|c| c.invalid)
                .map(|c| {
                    format!(
                        "{} ({} transport errors of {})",
                        c.key(),
                        c.transport_errors,
                        c.n_questions
                    )
                })
                .collect(),
        ))
    }
}

fn import(
    cli: &Cli,
    input: &Path,
    gazetteer: &Path,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let read =
        |p: &Path| std::fs::read_to_string(p).map_err(|e| failed(format!("{}: {e}", p.display())));
    let raw: serde_json::Value = serde_json::from_str(&read(input)?)
        .map_err(|e| CliError::Invalid(vec![format!("{}: {e}", input.display())]))?;
    let places: Gazetteer = serde_json::from_str(&read(gazetteer)?)
        .map_err(|e| CliError::Invalid(vec![format!("{}: {e}", gazetteer.display())]))?;
    let outcome = import_release(&raw, &places);
    let text = serde_json::to_string_pretty(&outcome.dataset).expect("dataset serializes");
    match output {
        Some(p) => std::fs::write(p, format!("{text}\n"))
            .map_err(|e| failed(format!("{}: {e}", p.display())))?,
        None => emit(&format!("{text}\n")),
    }
    let report = bazi_core::bench::validate(&outcome.dataset);
    if cli.json && output.is_some() {
        print_json(&json!({
            "imported": outcome.dataset.persons.len(),
            "skipped": outcome.issues,
            "stats": report.stats,
            "errors": report.errors,
        }));
    }
    let mut problems = issues(&outcome.issues);
    problems.extend(issues(&report.errors));
    if problems.is_empty() {
        Ok(())
    } else {
        Err(CliError::Invalid(problems))
    }
}
