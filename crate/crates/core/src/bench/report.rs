use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::dataset::{Dataset, PersonRecord};
use super::eval::{EvalConfig, EvalSetting, Providers};
use super::metrics::relative_change;
use super::shuffle::{ShufflePlan, ShuffleScope};
use super::BenchError;
use crate::chart::ChartConfig;
use crate::llm::CacheStats;
use crate::persona::ScenarioDomain;

pub const REPORT_SCHEMA: &str = "bazi-eval-report/1";
pub const KNOWLEDGE_BLOCK_VERSION: &str = "rule_knowledge_v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionScore {
    pub n_questions: usize,
    pub correct: usize,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellKey {
    pub model_id: String,
    pub setting: EvalSetting,
    pub shuffled: bool,
}

impl FromStr for CellKey {
    type Err = String;

    /// `model:setting` or `model:setting:shuffled`; the model may contain ':'.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (rest, shuffled) = match s.strip_suffix(":shuffled") {
            Some(r) => (r, true),
            None => (s, false),
        };
        let (model, setting) = rest
            .rsplit_once(':')
            .ok_or_else(|| format!("expected MODEL:SETTING[:shuffled], got {s:?}"))?;
        Ok(CellKey {
            model_id: model.to_string(),
            setting: setting.parse()?,
            shuffled,
        })
    }
}

impl std::fmt::Display for CellKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.model_id, self.setting)?;
        if self.shuffled {
            f.write_str(":shuffled")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportCell {
    pub model_id: String,
    pub knowledge_model_id: Option<String>,
    pub setting: EvalSetting,
    pub shuffled: bool,
    pub shuffle_seed: Option<u64>,
    pub n_questions: usize,
    pub correct: usize,
    /// Percent, one decimal.
    pub accuracy: f64,
    pub extraction_failures: usize,
    pub transport_errors: usize,
    /// More than 5% transport errors.
    pub invalid: bool,
    pub per_dimension: BTreeMap<String, DimensionScore>,
    /// Percent vs the report baseline, one decimal; `None` for the baseline itself.
    pub relative_change: Option<f64>,
}

impl ReportCell {
    pub fn key(&self) -> CellKey {
        CellKey {
            model_id: self.model_id.clone(),
            setting: self.setting,
            shuffled: self.shuffled,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetEcho {
    pub persons: usize,
    pub questions: usize,
    /// SHA-256 of the canonical JSON of the records.
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShuffleEcho {
    pub seed: u64,
    pub scope: ShuffleScope,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub template_version: String,
    pub rule_profile_version: String,
    pub shensha_catalog_version: String,
    pub lexicon_version: String,
    pub domain_map_version: String,
    pub knowledge_block_version: String,
    pub chart_config: ChartConfig,
    pub luck_count: u32,
    pub temperature: f64,
    pub max_output_tokens: u32,
    pub dataset: DatasetEcho,
    pub shuffles: Vec<ShuffleEcho>,
    /// Model id → provider namespace.
    pub providers: BTreeMap<String, String>,
    pub cache: CacheStats,
    /// Fully resolved configuration, as key/value text.
    pub config: BTreeMap<String, String>,
}

impl RunMetadata {
    pub fn from_config(cfg: &EvalConfig, records: &[PersonRecord]) -> RunMetadata {
        let ds = Dataset {
            persons: records.to_vec(),
        };
        let canonical = serde_json::to_vec(&ds).expect("dataset serializes");
        RunMetadata {
            template_version: cfg.template_version.clone(),
            rule_profile_version: cfg.profile.version.clone(),
            shensha_catalog_version: cfg.catalog.version.clone(),
            lexicon_version: cfg.assets.lexicon.version.clone(),
            domain_map_version: cfg.assets.domains.version.clone(),
            knowledge_block_version: KNOWLEDGE_BLOCK_VERSION.into(),
            chart_config: cfg.chart,
            luck_count: cfg.luck_count,
            temperature: cfg.temperature,
            max_output_tokens: cfg.max_output_tokens,
            dataset: DatasetEcho {
                persons: records.len(),
                questions: records.iter().map(|r| r.questions.len()).sum(),
                sha256: hex::encode(Sha256::digest(&canonical)),
            },
            shuffles: Vec::new(),
            providers: BTreeMap::new(),
            cache: CacheStats::default(),
            config: BTreeMap::new(),
        }
    }

    pub fn record_providers(&mut self, cfg: &EvalConfig, providers: Providers<'_>) {
        self.providers.insert(
            cfg.model_id.clone(),
            providers.reasoning.config().namespace(),
        );
        if let (EvalSetting::FullModel, Some(k)) = (cfg.setting, providers.knowledge) {
            self.providers
                .insert(cfg.knowledge_model().to_string(), k.config().namespace());
        }
        if let Some(c) = providers.cache {
            self.cache = c.stats();
        }
    }

    pub fn record_shuffle(&mut self, plan: &ShufflePlan) {
        let echo = ShuffleEcho {
            seed: plan.seed,
            scope: plan.scope,
        };
        if !self.shuffles.contains(&echo) {
            self.shuffles.push(echo);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Markdown,
}

impl ReportFormat {
    /// From a file extension: json, csv, md.
    pub fn from_extension(ext: &str) -> Option<ReportFormat> {
        match ext.to_ascii_lowercase().as_str() {
            "json" => Some(ReportFormat::Json),
            "csv" => Some(ReportFormat::Csv),
            "md" | "markdown" => Some(ReportFormat::Markdown),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub schema: String,
    pub cells: Vec<ReportCell>,
    pub baseline: Option<CellKey>,
    pub metadata: RunMetadata,
}

const CSV_FIXED: [&str; 13] = [
    "model_id",
    "knowledge_model_id",
    "setting",
    "shuffled",
    "shuffle_seed",
    "n_questions",
    "correct",
    "accuracy",
    "extraction_failures",
    "transport_errors",
    "invalid",
    "relative_change",
    "is_baseline",
];

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

fn csv_err(e: impl std::fmt::Display) -> BenchError {
    BenchError::Report(format!("csv: {e}"))
}

impl EvalReport {
    pub fn new(metadata: RunMetadata) -> EvalReport {
        EvalReport {
            schema: REPORT_SCHEMA.into(),
            cells: Vec::new(),
            baseline: None,
            metadata,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.cells.iter().all(|c| !c.invalid)
    }

    /// Fills `relative_change` of every other cell against `key`.
    pub fn set_baseline(&mut self, key: CellKey) -> Result<(), BenchError> {
        let base = self
            .cells
            .iter()
            .find(|c| c.key() == key)
            .ok_or_else(|| BenchError::Report(format!("no cell {}:{}", key.model_id, key.setting)))?
            .accuracy;
        for c in &mut self.cells {
            c.relative_change = if c.key() == key {
                None
            } else {
                Some(relative_change(c.accuracy, base)?)
            };
        }
        self.baseline = Some(key);
        Ok(())
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => self.to_json(),
            ReportFormat::Csv => self.to_csv(),
            ReportFormat::Markdown => self.to_markdown(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<EvalReport, BenchError> {
        serde_json::from_str(text).map_err(|e| BenchError::Report(e.to_string()))
    }

    /// One row per cell; per-dimension columns follow the fixed ones.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let dims: Vec<String> = ScenarioDomain::ALL
            .iter()
            .map(|d| d.to_string().to_lowercase())
            .collect();
        let mut header: Vec<String> = CSV_FIXED.iter().map(|s| s.to_string()).collect();
        for d in &dims {
            header.extend([
                format!("{d}_n"),
                format!("{d}_correct"),
                format!("{d}_accuracy"),
            ]);
        }
        w.write_record(&header).expect("in-memory write");
        for c in &self.cells {
            let mut row = vec![
                c.model_id.clone(),
                opt(&c.knowledge_model_id),
                c.setting.to_string(),
                c.shuffled.to_string(),
                opt(&c.shuffle_seed),
                c.n_questions.to_string(),
                c.correct.to_string(),
                format!("{:.1}", c.accuracy),
                c.extraction_failures.to_string(),
                c.transport_errors.to_string(),
                c.invalid.to_string(),
                c.relative_change
                    .map(|r| format!("{r:.1}"))
                    .unwrap_or_default(),
                (self.baseline.as_ref() == Some(&c.key())).to_string(),
            ];
            for d in &dims {
                let s = &c.per_dimension[d];
                row.extend([
                    s.n_questions.to_string(),
                    s.correct.to_string(),
                    format!("{:.1}", s.accuracy),
                ]);
            }
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv of utf-8 fields")
    }

    /// Inverse of `to_csv` for the cells and the baseline key.
    pub fn cells_from_csv(text: &str) -> Result<(Vec<ReportCell>, Option<CellKey>), BenchError> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header: Vec<String> = r
            .headers()
            .map_err(csv_err)?
            .iter()
            .map(str::to_string)
            .collect();
        let col = |name: &str| {
            header
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| csv_err(format!("missing column {name}")))
        };
        let mut cells = Vec::new();
        let mut baseline = None;
        for rec in r.records() {
            let rec = rec.map_err(csv_err)?;
            let get =
                |name: &str| -> Result<&str, BenchError> { Ok(rec.get(col(name)?).unwrap_or("")) };
            let num =
                |name: &str| -> Result<usize, BenchError> { get(name)?.parse().map_err(csv_err) };
            let real =
                |name: &str| -> Result<f64, BenchError> { get(name)?.parse().map_err(csv_err) };
            let flag =
                |name: &str| -> Result<bool, BenchError> { get(name)?.parse().map_err(csv_err) };
            let optional = |s: &str| (!s.is_empty()).then(|| s.to_string());
            let mut per_dimension = BTreeMap::new();
            for d in ScenarioDomain::ALL {
                let d = d.to_string().to_lowercase();
                per_dimension.insert(
                    d.clone(),
                    DimensionScore {
                        n_questions: num(&format!("{d}_n"))?,
                        correct: num(&format!("{d}_correct"))?,
                        accuracy: real(&format!("{d}_accuracy"))?,
                    },
                );
            }
            let cell = ReportCell {
                model_id: get("model_id")?.to_string(),
                knowledge_model_id: optional(get("knowledge_model_id")?),
                setting: get("setting")?.parse().map_err(csv_err)?,
                shuffled: flag("shuffled")?,
                shuffle_seed: optional(get("shuffle_seed")?)
                    .map(|s| s.parse())
                    .transpose()
                    .map_err(csv_err)?,
                n_questions: num("n_questions")?,
                correct: num("correct")?,
                accuracy: real("accuracy")?,
                extraction_failures: num("extraction_failures")?,
                transport_errors: num("transport_errors")?,
                invalid: flag("invalid")?,
                per_dimension,
                relative_change: optional(get("relative_change")?)
                    .map(|s| s.parse())
                    .transpose()
                    .map_err(csv_err)?,
            };
            if flag("is_baseline")? {
                baseline = Some(cell.key());
            }
            cells.push(cell);
        }
        Ok((cells, baseline))
    }

    fn ordered(&self) -> Vec<&ReportCell> {
        let mut models: Vec<&str> = Vec::new();
        for c in &self.cells {
            if !models.contains(&c.model_id.as_str()) {
                models.push(&c.model_id);
            }
        }
        let rank = |m: &str| models.iter().position(|x| *x == m).unwrap_or(usize::MAX);
        let mut out: Vec<&ReportCell> = self.cells.iter().collect();
        out.sort_by_key(|c| (c.setting, c.shuffled, rank(&c.model_id)));
        out
    }

    /// Setting × model accuracy table with arrowed relative change, then a
    /// per-dimension table.
    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "| Setting | Model | Accuracy (%) |");
        let _ = writeln!(s, "|---|---|---|");
        for c in self.ordered() {
            let setting = if c.shuffled {
                format!("{} (shuffled birthday)", c.setting.label())
            } else {
                c.setting.label().to_string()
            };
            let mut acc = format!("{:.1}", c.accuracy);
            if let Some(r) = c.relative_change {
                let arrow = if r > 0.0 {
                    "↑"
                } else if r < 0.0 {
                    "↓"
                } else {
                    ""
                };
                let _ = write!(acc, " ({arrow}{:.1}%)", r.abs());
            }
            if c.invalid {
                acc.push_str(" †");
            }
            let _ = writeln!(s, "| {setting} | {} | {acc} |", c.model_id);
        }
        if let Some(b) = &self.baseline {
            let shuffled = if b.shuffled { ", shuffled" } else { "" };
            let _ = writeln!(
                s,
                "\nParentheses: relative change vs {} / {}{shuffled}.",
                b.setting.label(),
                b.model_id
            );
        }
        if self.cells.iter().any(|c| c.invalid) {
            let _ = writeln!(
                s,
                "\n† more than 5% of requests failed in transport; run flagged invalid."
            );
        }
        let _ = writeln!(s, "\n| Setting | Model | Wealth | Health | Kinship | Career | Relationship | Extraction failures |");
        let _ = writeln!(s, "|---|---|---|---|---|---|---|---|");
        for c in self.ordered() {
            let mut row = format!(
                "| {}{} | {} |",
                c.setting.label(),
                if c.shuffled { " (shuffled)" } else { "" },
                c.model_id
            );
            for d in ScenarioDomain::ALL {
                let score = &c.per_dimension[&d.to_string().to_lowercase()];
                let _ = write!(row, " {:.1} (n={}) |", score.accuracy, score.n_questions);
            }
            let _ = writeln!(s, "{row} {} |", c.extraction_failures);
        }
        s
    }
}
