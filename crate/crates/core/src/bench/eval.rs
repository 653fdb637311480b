use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::dataset::{validate, Dataset, PersonRecord, Question};
use super::metrics::accuracy_pct;
use super::report::{DimensionScore, EvalReport, ReportCell, RunMetadata};
use super::shuffle::ShufflePlan;
use super::BenchError;
use crate::analysis::{analyze, AnalysisBundle, RuleProfile, ShenShaCatalog};
use crate::chart::{build_chart, ChartConfig, FourPillarsChart};
use crate::cycles::{luck_pillars, LuckPillar};
use crate::llm::{
    cached_complete, extract_choice, Cache, ChatRequest, Client, LlmError, RequestMeta,
};
use crate::persona::{
    content_hash, reference_year, render_prompt, PersonaAssets, PersonaInputs, PersonaPrompt,
    PromptOptions, PromptVariant, QuestionContext, ScenarioDomain,
};

pub const SYSTEM_PROMPT: &str = "You are an expert in BaZi (Four Pillars of Destiny). \
Read the information about the person and answer the multiple-choice question.";

pub const KNOWLEDGE_SYSTEM_PROMPT: &str = "You are an expert in BaZi (Four Pillars of Destiny). \
Write interpretation notes for the chart below.";

pub const KNOWLEDGE_INSTRUCTION: &str = "Write concise BaZi knowledge notes for this chart: \
personality, each of the five life domains, and which periods are favorable or unfavorable. \
Do not answer any question.";

/// Runs with more transport errors than this fraction are flagged invalid.
pub const MAX_TRANSPORT_ERROR_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EvalSetting {
    VanillaBaZi,
    BaZiRuleKnowledge,
    FullModel,
}

impl EvalSetting {
    pub const ALL: [EvalSetting; 3] = [
        EvalSetting::VanillaBaZi,
        EvalSetting::BaZiRuleKnowledge,
        EvalSetting::FullModel,
    ];

    pub fn label(self) -> &'static str {
        match self {
            EvalSetting::VanillaBaZi => "Vanilla BaZi",
            EvalSetting::BaZiRuleKnowledge => "BaZi Rule Knowledge",
            EvalSetting::FullModel => "Full model",
        }
    }

    pub fn variant(self) -> PromptVariant {
        match self {
            EvalSetting::VanillaBaZi => PromptVariant::ChartOnly,
            EvalSetting::BaZiRuleKnowledge => PromptVariant::ChartWithKnowledge,
            EvalSetting::FullModel => PromptVariant::Full,
        }
    }
}

impl fmt::Display for EvalSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvalSetting::VanillaBaZi => "vanilla",
            EvalSetting::BaZiRuleKnowledge => "rules",
            EvalSetting::FullModel => "full",
        })
    }
}

impl FromStr for EvalSetting {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EvalSetting::ALL
            .into_iter()
            .find(|x| x.to_string() == s)
            .ok_or_else(|| format!("unknown setting {s:?} (vanilla|rules|full)"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    pub setting: EvalSetting,
    pub model_id: String,
    /// Stage-one model for `FullModel`; defaults to `model_id`.
    pub knowledge_model_id: Option<String>,
    pub template_version: String,
    pub chart: ChartConfig,
    pub profile: RuleProfile,
    pub catalog: ShenShaCatalog,
    pub assets: PersonaAssets,
    pub luck_count: u32,
    pub temperature: f64,
    pub max_output_tokens: u32,
}

impl EvalConfig {
    pub fn new(setting: EvalSetting, model_id: impl Into<String>) -> Self {
        EvalConfig {
            setting,
            model_id: model_id.into(),
            knowledge_model_id: None,
            template_version: "v1".into(),
            chart: ChartConfig::default(),
            profile: RuleProfile::bundled(),
            catalog: ShenShaCatalog::bundled(),
            assets: PersonaAssets::bundled(),
            luck_count: 8,
            temperature: 0.0,
            max_output_tokens: crate::llm::DEFAULT_MAX_OUTPUT_TOKENS,
        }
    }

    pub fn knowledge_model(&self) -> &str {
        self.knowledge_model_id.as_deref().unwrap_or(&self.model_id)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Providers<'a> {
    pub reasoning: &'a Client,
    /// Required for `FullModel`.
    pub knowledge: Option<&'a Client>,
    pub cache: Option<&'a Cache>,
}

/// Chart-side context for one person, built from (possibly donor) birth data.
#[derive(Debug, Clone)]
pub struct Subject {
    pub person_id: String,
    pub chart: FourPillarsChart,
    pub bundle: AnalysisBundle,
    pub luck: Vec<LuckPillar>,
    pub birthplace: String,
}

impl Subject {
    /// Identifies the chart, not the person: equal keys mean equal chart inputs.
    pub fn chart_key(&self) -> String {
        format!("{} {}", self.chart.eight_characters(), self.chart.civil)
    }
}

pub fn prepare_subject(record: &PersonRecord, cfg: &EvalConfig) -> Result<Subject, BenchError> {
    let fail = |message: String| BenchError::Subject {
        person_id: record.person_id.clone(),
        message,
    };
    let civil = record.birth.civil().map_err(fail)?;
    let loc = record.place.location().map_err(fail)?;
    let chart =
        build_chart(&civil, &loc, record.gender, &cfg.chart).map_err(|e| fail(e.to_string()))?;
    let bundle = analyze(&chart, &cfg.profile, &cfg.catalog);
    let luck = luck_pillars(&chart, cfg.luck_count).map_err(|e| fail(e.to_string()))?;
    Ok(Subject {
        person_id: record.person_id.clone(),
        chart,
        bundle,
        luck,
        birthplace: record.place.name.clone(),
    })
}

fn options(
    cfg: &EvalConfig,
    variant: PromptVariant,
    subject: &Subject,
    reference_year: Option<i32>,
) -> PromptOptions {
    PromptOptions {
        template_version: cfg.template_version.clone(),
        variant,
        luck_count: cfg.luck_count,
        reference_year,
        birthplace: Some(subject.birthplace.clone()),
        ..PromptOptions::default()
    }
}

/// The prompt the reasoning model sees for one question.
pub fn question_prompt(
    subject: &Subject,
    question: &Question,
    cfg: &EvalConfig,
    knowledge_notes: Option<&str>,
) -> Result<PersonaPrompt, BenchError> {
    let mut opts = options(cfg, cfg.setting.variant(), subject, question.reference_year);
    opts.knowledge_notes = knowledge_notes.map(str::to_string);
    let inputs = PersonaInputs {
        chart: &subject.chart,
        bundle: &subject.bundle,
        luck: &subject.luck,
        assets: &cfg.assets,
    };
    let q = QuestionContext {
        text: question.text.clone(),
        choices: question.choices.clone(),
    };
    Ok(render_prompt(
        &inputs,
        &[question.dimension],
        Some(&q),
        &opts,
    )?)
}

/// Stage-one prompt for `FullModel`: the full persona, no question.
pub fn knowledge_prompt(
    subject: &Subject,
    cfg: &EvalConfig,
    reference_year: Option<i32>,
) -> Result<String, BenchError> {
    let inputs = PersonaInputs {
        chart: &subject.chart,
        bundle: &subject.bundle,
        luck: &subject.luck,
        assets: &cfg.assets,
    };
    let opts = options(cfg, PromptVariant::Full, subject, reference_year);
    let p = render_prompt(&inputs, &ScenarioDomain::ALL, None, &opts)?;
    Ok(format!("{}{KNOWLEDGE_INSTRUCTION}\n", p.rendered_text))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Correct,
    Incorrect,
    /// No valid letter; scored as incorrect.
    ExtractionFailure,
    /// Provider never answered; scored as incorrect.
    TransportError,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionResult {
    pub person_id: String,
    pub question_id: String,
    pub dimension: ScenarioDomain,
    pub gold_index: usize,
    pub predicted: Option<usize>,
    pub outcome: Outcome,
    pub prompt_hash: String,
    /// SHA-256 of the provider text, when there was one.
    pub response_hash: Option<String>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRun {
    pub cell: ReportCell,
    /// Sorted by (person_id, question_id).
    pub results: Vec<QuestionResult>,
}

/// Order-preserving parallel map over at most `workers` threads.
fn par_map<T: Sync, R: Send>(items: &[T], workers: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..workers.clamp(1, items.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(item) = items.get(i) else { break };
                let r = f(item);
                slots.lock().unwrap_or_else(|e| e.into_inner())[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .unwrap_or_else(|e| e.into_inner())
        .into_iter()
        .map(|r| r.expect("every slot filled"))
        .collect()
}

fn call(client: &Client, cache: Option<&Cache>, req: &ChatRequest) -> Result<String, LlmError> {
    match cache {
        Some(c) => cached_complete(client, c, req),
        None => client.complete(req),
    }
    .map(|r| r.text)
}

/// Transport errors are per-question outcomes; anything else aborts the run.
fn soft(r: Result<String, LlmError>) -> Result<Result<String, String>, BenchError> {
    match r {
        Ok(t) => Ok(Ok(t)),
        Err(e @ LlmError::Transport { .. }) => Ok(Err(e.to_string())),
        Err(e) => Err(BenchError::Llm(e)),
    }
}

fn resolved_year(subject: &Subject, explicit: Option<i32>) -> i32 {
    reference_year(
        &subject.chart,
        &PromptOptions {
            reference_year: explicit,
            ..PromptOptions::default()
        },
    )
}

struct Job<'a> {
    subject: usize,
    record: &'a PersonRecord,
    question: &'a Question,
}

/// One cell: every question of `records` under one setting and model.
pub fn evaluate(
    records: &[PersonRecord],
    cfg: &EvalConfig,
    providers: Providers<'_>,
    shuffle: Option<&ShufflePlan>,
) -> Result<CellRun, BenchError> {
    let report = validate(&Dataset {
        persons: records.to_vec(),
    });
    if !report.is_valid() {
        return Err(BenchError::InvalidDataset(report.errors));
    }
    let knowledge_client = match (cfg.setting, providers.knowledge) {
        (EvalSetting::FullModel, None) => return Err(BenchError::MissingKnowledgeProvider),
        (_, k) => k,
    };
    let chart_inputs = match shuffle {
        Some(plan) => plan.apply(records)?,
        None => records.to_vec(),
    };
    let subjects = chart_inputs
        .iter()
        .map(|r| prepare_subject(r, cfg))
        .collect::<Result<Vec<_>, _>>()?;

    let mut notes: HashMap<(usize, i32), Result<String, String>> = HashMap::new();
    if let (EvalSetting::FullModel, Some(kc)) = (cfg.setting, knowledge_client) {
        let mut keys: Vec<(usize, i32)> = records
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.questions.iter().map(move |q| (i, q.reference_year)))
            .map(|(i, year)| (i, resolved_year(&subjects[i], year)))
            .collect();
        keys.sort();
        keys.dedup();
        let answers = par_map(&keys, kc.config().max_parallel, |&(i, year)| {
            let s = &subjects[i];
            let mut req = ChatRequest::new(
                cfg.knowledge_model(),
                KNOWLEDGE_SYSTEM_PROMPT,
                knowledge_prompt(s, cfg, Some(year))?,
            );
            req.temperature = cfg.temperature;
            req.max_output_tokens = cfg.max_output_tokens;
            req.meta.chart_key = Some(s.chart_key());
            soft(call(kc, providers.cache, &req))
        });
        for (k, a) in keys.into_iter().zip(answers) {
            notes.insert(k, a?);
        }
    }

    let jobs: Vec<Job> = records
        .iter()
        .enumerate()
        .flat_map(|(i, r)| {
            r.questions.iter().map(move |q| Job {
                subject: i,
                record: r,
                question: q,
            })
        })
        .collect();
    let outcomes = par_map(&jobs, providers.reasoning.config().max_parallel, |job| {
        let s = &subjects[job.subject];
        let q = job.question;
        let mut result = QuestionResult {
            person_id: job.record.person_id.clone(),
            question_id: q.question_id.clone(),
            dimension: q.dimension,
            gold_index: q.gold_index,
            predicted: None,
            outcome: Outcome::TransportError,
            prompt_hash: String::new(),
            response_hash: None,
            error: None,
        };
        let note = match notes.get(&(job.subject, resolved_year(s, q.reference_year))) {
            Some(Err(e)) => {
                result.error = Some(format!("knowledge stage: {e}"));
                return Ok(result);
            }
            Some(Ok(text)) => Some(text.as_str()),
            None => None,
        };
        let prompt = question_prompt(s, q, cfg, note)?;
        result.prompt_hash = prompt.content_hash.clone();
        let mut req = ChatRequest::new(&cfg.model_id, SYSTEM_PROMPT, prompt.rendered_text);
        req.temperature = cfg.temperature;
        req.max_output_tokens = cfg.max_output_tokens;
        req.meta = RequestMeta {
            gold_index: Some(q.gold_index),
            n_choices: Some(q.choices.len()),
            chart_key: Some(s.chart_key()),
        };
        match soft(call(providers.reasoning, providers.cache, &req))? {
            Err(e) => result.error = Some(e),
            Ok(text) => {
                result.response_hash = Some(content_hash(&text));
                match extract_choice(&text, q.choices.len()) {
                    Ok(i) => {
                        result.predicted = Some(i);
                        result.outcome = if i == q.gold_index {
                            Outcome::Correct
                        } else {
                            Outcome::Incorrect
                        };
                    }
                    Err(e) => {
                        result.outcome = Outcome::ExtractionFailure;
                        result.error = Some(e.to_string());
                    }
                }
            }
        }
        Ok::<_, BenchError>(result)
    });
    let mut results = outcomes.into_iter().collect::<Result<Vec<_>, _>>()?;
    results.sort_by(|a, b| (&a.person_id, &a.question_id).cmp(&(&b.person_id, &b.question_id)));
    Ok(CellRun {
        cell: aggregate(&results, cfg, shuffle),
        results,
    })
}

pub fn aggregate(
    results: &[QuestionResult],
    cfg: &EvalConfig,
    shuffle: Option<&ShufflePlan>,
) -> ReportCell {
    let count = |o: Outcome| results.iter().filter(|r| r.outcome == o).count();
    let n = results.len();
    let correct = count(Outcome::Correct);
    let transport_errors = count(Outcome::TransportError);
    let mut per_dimension = BTreeMap::new();
    for d in ScenarioDomain::ALL {
        let in_d: Vec<_> = results.iter().filter(|r| r.dimension == d).collect();
        let c = in_d
            .iter()
            .filter(|r| r.outcome == Outcome::Correct)
            .count();
        per_dimension.insert(
            d.to_string().to_lowercase(),
            DimensionScore {
                n_questions: in_d.len(),
                correct: c,
                accuracy: accuracy_pct(c, in_d.len()),
            },
        );
    }
    ReportCell {
        model_id: cfg.model_id.clone(),
        knowledge_model_id: (cfg.setting == EvalSetting::FullModel)
            .then(|| cfg.knowledge_model().to_string()),
        setting: cfg.setting,
        shuffled: shuffle.is_some(),
        shuffle_seed: shuffle.map(|p| p.seed),
        n_questions: n,
        correct,
        accuracy: accuracy_pct(correct, n),
        extraction_failures: count(Outcome::ExtractionFailure),
        transport_errors,
        invalid: transport_errors as f64 > MAX_TRANSPORT_ERROR_FRACTION * n as f64,
        per_dimension,
        relative_change: None,
    }
}

/// Single-cell report with run metadata.
pub fn run_eval(
    records: &[PersonRecord],
    cfg: &EvalConfig,
    providers: Providers<'_>,
    shuffle: Option<&ShufflePlan>,
) -> Result<EvalReport, BenchError> {
    let run = evaluate(records, cfg, providers, shuffle)?;
    let mut meta = RunMetadata::from_config(cfg, records);
    meta.record_providers(cfg, providers);
    if let Some(p) = shuffle {
        meta.record_shuffle(p);
    }
    let mut report = EvalReport::new(meta);
    report.cells.push(run.cell);
    Ok(report)
}
