use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::BenchError;
use crate::calendrics::{CivilDateTime, GeoLocation};
use crate::chart::Gender;
use crate::llm::{MAX_CHOICES, MIN_CHOICES};
use crate::persona::ScenarioDomain;

/// Lowercase `Display` out, `FromStr` in.
mod lower {
    use super::*;

    pub fn serialize<T: fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string().to_lowercase())
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr<Err = String>,
        D: Deserializer<'de>,
    {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BirthSpec {
    /// Local wall clock, `YYYY-MM-DDTHH:MM`.
    pub iso_local: String,
    pub utc_offset_minutes: i32,
}

impl BirthSpec {
    pub fn civil(&self) -> Result<CivilDateTime, String> {
        CivilDateTime::parse_local(&self.iso_local, self.utc_offset_minutes)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Place {
    pub name: String,
    pub lon: f64,
    pub lat: f64,
}

impl Place {
    pub fn location(&self) -> Result<GeoLocation, String> {
        GeoLocation::new(self.lon, self.lat).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Question {
    pub question_id: String,
    pub text: String,
    pub choices: Vec<String>,
    pub gold_index: usize,
    #[serde(with = "lower")]
    pub dimension: ScenarioDomain,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_year: Option<i32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PersonRecord {
    pub person_id: String,
    /// Kept for leak checks only; never rendered.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub birth: BirthSpec,
    #[serde(with = "lower")]
    pub gender: Gender,
    pub place: Place,
    pub country: String,
    pub questions: Vec<Question>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dataset {
    pub persons: Vec<PersonRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Issue {
    /// Record path, e.g. `persons[3].questions[0].gold_index`.
    pub path: String,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub persons: usize,
    pub countries: usize,
    pub questions: usize,
    pub male: usize,
    pub female: usize,
    pub avg_questions_per_person: f64,
    pub per_dimension: BTreeMap<String, usize>,
    pub per_country: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub stats: DatasetStats,
    pub errors: Vec<Issue>,
    pub warnings: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }
}

pub fn parse_dataset(text: &str) -> Result<Dataset, BenchError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| BenchError::Parse {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

/// Parsed records plus the validation report. Schema violations are errors;
/// semantic problems land in the report.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<(Dataset, ValidationReport), BenchError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| BenchError::Io(format!("{}: {e}", path.display())))?;
    let ds = parse_dataset(&text)?;
    let report = validate(&ds);
    Ok((ds, report))
}

pub fn stats(ds: &Dataset) -> DatasetStats {
    let questions: usize = ds.persons.iter().map(|p| p.questions.len()).sum();
    let mut per_dimension: BTreeMap<String, usize> = ScenarioDomain::ALL
        .iter()
        .map(|d| (d.to_string().to_lowercase(), 0))
        .collect();
    let mut per_country = BTreeMap::new();
    for p in &ds.persons {
        *per_country.entry(p.country.clone()).or_insert(0) += 1;
        for q in &p.questions {
            *per_dimension
                .entry(q.dimension.to_string().to_lowercase())
                .or_insert(0) += 1;
        }
    }
    let male = ds
        .persons
        .iter()
        .filter(|p| p.gender == Gender::Male)
        .count();
    DatasetStats {
        persons: ds.persons.len(),
        countries: per_country.len(),
        questions,
        male,
        female: ds.persons.len() - male,
        avg_questions_per_person: if ds.persons.is_empty() {
            0.0
        } else {
            questions as f64 / ds.persons.len() as f64
        },
        per_dimension,
        per_country,
    }
}

pub fn validate(ds: &Dataset) -> ValidationReport {
    let mut errors = Vec::new();
    let mut warnings = Vec::new();
    let mut err = |path: String, message: String| errors.push(Issue { path, message });
    if ds.persons.is_empty() {
        err("persons".into(), "dataset has no persons".into());
    }
    let names: Vec<(usize, &str)> = ds
        .persons
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.name.as_deref().map(|n| (i, n.trim())))
        .filter(|(_, n)| !n.is_empty())
        .collect();
    let mut ids = HashSet::new();
    for (i, p) in ds.persons.iter().enumerate() {
        let at = |f: &str| format!("persons[{i}].{f}");
        if p.person_id.trim().is_empty() {
            err(at("person_id"), "empty person_id".into());
        } else if !ids.insert(p.person_id.as_str()) {
            err(
                at("person_id"),
                format!("duplicate person_id {:?}", p.person_id),
            );
        }
        match p.birth.civil() {
            Ok(c) if !c.in_window() => {
                err(at("birth.iso_local"), format!("{c} is outside 1900-2100"))
            }
            Ok(_) => {}
            Err(e) => err(at("birth.iso_local"), e),
        }
        if let Err(e) = p.place.location() {
            err(at("place"), e);
        }
        if p.country.trim().is_empty() {
            err(at("country"), "empty country".into());
        }
        if p.questions.is_empty() {
            err(at("questions"), "person has no questions".into());
        }
        let mut qids = HashSet::new();
        for (j, q) in p.questions.iter().enumerate() {
            let at = |f: &str| format!("persons[{i}].questions[{j}].{f}");
            if !qids.insert(q.question_id.as_str()) {
                err(
                    at("question_id"),
                    format!("duplicate question_id {:?}", q.question_id),
                );
            }
            if q.text.trim().is_empty() {
                err(at("text"), "empty question text".into());
            }
            if !(MIN_CHOICES..=MAX_CHOICES).contains(&q.choices.len()) {
                err(
                    at("choices"),
                    format!(
                        "{} choices; expected {MIN_CHOICES} to {MAX_CHOICES}",
                        q.choices.len()
                    ),
                );
            }
            if q.choices.iter().any(|c| c.trim().is_empty()) {
                err(at("choices"), "empty choice text".into());
            }
            if q.gold_index >= q.choices.len() {
                err(
                    at("gold_index"),
                    format!(
                        "{} is not a valid index into {} choices",
                        q.gold_index,
                        q.choices.len()
                    ),
                );
            }
            for &(k, name) in &names {
                let hit = std::iter::once(&q.text)
                    .chain(&q.choices)
                    .any(|s| s.contains(name));
                if hit {
                    warnings.push(Issue {
                        path: at("text"),
                        message: format!("mentions the name of persons[{k}]"),
                    });
                }
            }
        }
    }
    let countries: BTreeSet<_> = ds
        .persons
        .iter()
        .map(|p| p.country.trim().to_lowercase())
        .collect();
    let distinct_raw: BTreeSet<_> = ds.persons.iter().map(|p| p.country.as_str()).collect();
    if countries.len() != distinct_raw.len() {
        warnings.push(Issue {
            path: "persons[].country".into(),
            message: "country names differ only in case or whitespace".into(),
        });
    }
    ValidationReport {
        stats: stats(ds),
        errors,
        warnings,
    }
}
