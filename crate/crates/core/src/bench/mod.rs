//! Multiple-choice benchmark: dataset model and validation, the three
//! evaluation settings, the shuffled-birthday control, metrics and reports.

mod dataset;
mod eval;
mod import;
mod metrics;
mod report;
mod shuffle;
mod synthetic;

use thiserror::Error;

pub use dataset::{
    load_dataset, parse_dataset, stats, validate, BirthSpec, Dataset, DatasetStats, Issue,
    PersonRecord, Place, Question, ValidationReport,
};
pub use eval::{
    aggregate, evaluate, knowledge_prompt, prepare_subject, question_prompt, run_eval, CellRun,
    EvalConfig, EvalSetting, Outcome, Providers, QuestionResult, Subject, KNOWLEDGE_INSTRUCTION,
    KNOWLEDGE_SYSTEM_PROMPT, MAX_TRANSPORT_ERROR_FRACTION, SYSTEM_PROMPT,
};
pub use import::{
    import_release, parse_release_datetime, Gazetteer, GazetteerEntry, ImportOutcome,
};
pub use metrics::{accuracy_pct, relative_change, round1};
pub use report::{
    CellKey, DatasetEcho, DimensionScore, EvalReport, ReportCell, ReportFormat, RunMetadata,
    ShuffleEcho, KNOWLEDGE_BLOCK_VERSION, REPORT_SCHEMA,
};
pub use shuffle::{make_shuffle, ShufflePlan, ShuffleScope};
pub use synthetic::{synthetic_dataset, SYNTHETIC_MALE, SYNTHETIC_PERSONS, SYNTHETIC_QUESTIONS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BenchError {
    #[error("{0}")]
    Io(String),
    #[error("schema error at {path}: {message}")]
    Parse { path: String, message: String },
    #[error("dataset failed validation ({} error(s)): {}", .0.len(), .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidDataset(Vec<Issue>),
    #[error("a derangement needs at least 2 records, got {0}")]
    NoDerangement(usize),
    #[error("duplicate person_id {0:?}")]
    DuplicatePerson(String),
    #[error("shuffle plan does not cover person {0:?}")]
    PlanMismatch(String),
    #[error("person {person_id:?}: {message}")]
    Subject { person_id: String, message: String },
    #[error("FullModel needs a knowledge-stage provider")]
    MissingKnowledgeProvider,
    #[error("baseline accuracy {0} is not positive; relative change is undefined")]
    UndefinedBaseline(f64),
    #[error(transparent)]
    Persona(#[from] crate::persona::PersonaError),
    #[error(transparent)]
    Llm(#[from] crate::llm::LlmError),
    #[error("report: {0}")]
    Report(String),
}
