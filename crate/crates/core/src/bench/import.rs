//! Best-effort conversion of loosely structured release files into the
//! dataset schema. Birthplaces are resolved through a gazetteer because
//! release files carry names, not coordinates.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::dataset::{BirthSpec, Dataset, Issue, PersonRecord, Place, Question};
use crate::chart::Gender;
use crate::persona::ScenarioDomain;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GazetteerEntry {
    pub lon: f64,
    pub lat: f64,
    pub utc_offset_minutes: i32,
    pub country: String,
}

/// Place name → coordinates. Keys match case-insensitively.
pub type Gazetteer = BTreeMap<String, GazetteerEntry>;

#[derive(Debug, Clone, PartialEq)]
pub struct ImportOutcome {
    pub dataset: Dataset,
    /// Records that could not be converted are skipped and listed here.
    pub issues: Vec<Issue>,
}

/// Keys match case-insensitively with spaces and hyphens read as `_`.
fn field<'a>(obj: &'a Value, names: &[&str]) -> Option<&'a Value> {
    let map = obj.as_object()?;
    let norm = |k: &str| k.trim().to_lowercase().replace([' ', '-'], "_");
    names
        .iter()
        .find_map(|n| map.iter().find(|(k, _)| norm(k) == *n).map(|(_, v)| v))
        .filter(|v| !v.is_null())
}

fn text(obj: &Value, names: &[&str]) -> Option<String> {
    field(obj, names).and_then(|v| match v {
        Value::String(s) => Some(s.trim().to_string()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    })
}

/// `1966/10/18, 11:15 PM`, `1966-10-18 23:15`, `1966-10-18T23:15`.
pub fn parse_release_datetime(s: &str) -> Option<String> {
    let s = s.trim().replace(',', " ");
    let mut parts = s.split_whitespace();
    let first = parts.next()?;
    let (date, time) = match first.split_once('T') {
        Some((d, t)) => (d.to_string(), t.to_string()),
        None => (first.to_string(), parts.next()?.to_string()),
    };
    let meridiem = parts.next().map(|m| m.to_ascii_uppercase());
    let ymd: Vec<u32> = date
        .split(['/', '-', '.'])
        .map(|x| x.parse().ok())
        .collect::<Option<_>>()?;
    let hm: Vec<u32> = time
        .split(':')
        .take(2)
        .map(|x| x.parse().ok())
        .collect::<Option<_>>()?;
    let (&[y, mo, d], &[mut h, mi]) = (ymd.as_slice(), hm.as_slice()) else {
        return None;
    };
    match meridiem.as_deref() {
        Some("PM") if h < 12 => h += 12,
        Some("AM") if h == 12 => h = 0,
        Some("AM" | "PM") | None => {}
        Some(_) => return None,
    }
    Some(format!("{y:04}-{mo:02}-{d:02}T{h:02}:{mi:02}"))
}

fn parse_gender(s: &str) -> Option<Gender> {
    match s.trim() {
        "男" => Some(Gender::Male),
        "女" => Some(Gender::Female),
        other => other.parse().ok(),
    }
}

fn parse_dimension(s: &str) -> Option<ScenarioDomain> {
    let s = s.trim().to_lowercase();
    let s = s.trim_end_matches('s');
    match s {
        "财富" | "财运" | "money" | "finance" => Some(ScenarioDomain::Wealth),
        "健康" => Some(ScenarioDomain::Health),
        "亲情" | "family" | "kin" => Some(ScenarioDomain::Kinship),
        "事业" | "job" | "work" => Some(ScenarioDomain::Career),
        "感情" | "婚姻" | "love" | "marriage" => Some(ScenarioDomain::Relationship),
        other => other.parse().ok(),
    }
}

/// Strips a leading `A.`, `A)`, `(A)` or `A:` label.
fn strip_label(s: &str) -> String {
    let t = s.trim();
    let bytes = t.as_bytes();
    let labelled = |i: usize| bytes.get(i).is_some_and(|b| b.is_ascii_uppercase());
    if t.starts_with('(') && labelled(1) && bytes.get(2) == Some(&b')') {
        return t[3..].trim().to_string();
    }
    if labelled(0) && matches!(bytes.get(1), Some(b'.' | b')' | b':')) {
        return t[2..].trim().to_string();
    }
    t.to_string()
}

fn choices(q: &Value) -> Option<Vec<String>> {
    match field(q, &["choices", "options"])? {
        Value::Array(items) => items.iter().map(|v| v.as_str().map(strip_label)).collect(),
        Value::Object(map) => {
            let mut pairs: Vec<_> = map.iter().collect();
            pairs.sort_by(|a, b| a.0.cmp(b.0));
            pairs
                .into_iter()
                .map(|(_, v)| v.as_str().map(strip_label))
                .collect()
        }
        _ => None,
    }
}

fn gold(q: &Value, n: usize) -> Option<usize> {
    match field(q, &["gold_index", "answer", "label", "correct"])? {
        Value::Number(x) => x.as_u64().map(|i| i as usize),
        Value::String(s) => {
            let s = s.trim().trim_end_matches(['.', ')']);
            let mut c = s.chars();
            match (c.next(), c.next()) {
                (Some(l @ 'A'..='H'), None) => Some((l as u8 - b'A') as usize),
                _ => s.parse().ok(),
            }
        }
        _ => None,
    }
    .filter(|&i| i < n)
}

/// Accepts a top-level array or `{persons|people|data: [...]}`.
pub fn import_release(raw: &Value, places: &Gazetteer) -> ImportOutcome {
    let people = match raw {
        Value::Array(a) => a.as_slice(),
        obj => field(obj, &["persons", "people", "data"])
            .and_then(Value::as_array)
            .map(Vec::as_slice)
            .unwrap_or(&[]),
    };
    let lookup: BTreeMap<String, &GazetteerEntry> =
        places.iter().map(|(k, v)| (k.to_lowercase(), v)).collect();
    let mut issues = Vec::new();
    let mut persons = Vec::new();
    for (i, p) in people.iter().enumerate() {
        let at = |f: &str| format!("[{i}].{f}");
        let mut problem = |f: &str, m: String| {
            issues.push(Issue {
                path: at(f),
                message: m,
            })
        };
        let Some(iso_local) = text(p, &["birth_time", "birth", "birthday", "datetime"])
            .and_then(|s| parse_release_datetime(&s))
        else {
            problem("birth_time", "missing or unreadable birth time".into());
            continue;
        };
        let Some(gender) = text(p, &["gender", "sex"]).and_then(|s| parse_gender(&s)) else {
            problem("gender", "missing or unknown gender".into());
            continue;
        };
        let place_name = text(p, &["birthplace", "place_of_birth", "place"]).unwrap_or_default();
        let Some(geo) = lookup.get(&place_name.to_lowercase()) else {
            problem("birthplace", format!("{place_name:?} not in gazetteer"));
            continue;
        };
        let qs = field(p, &["questions", "qa", "items"])
            .and_then(Value::as_array)
            .cloned()
            .unwrap_or_default();
        let mut questions = Vec::new();
        for (j, q) in qs.iter().enumerate() {
            let qf = format!("questions[{j}]");
            let parsed = (|| {
                let text = text(q, &["question", "text", "stem"])?;
                let choices = choices(q)?;
                let gold_index = gold(q, choices.len())?;
                let dimension = text_dim(q)?;
                Some(Question {
                    question_id: text_id(q).unwrap_or_else(|| format!("q{:02}", j + 1)),
                    text,
                    choices,
                    gold_index,
                    dimension,
                    reference_year: None,
                })
            })();
            match parsed {
                Some(x) => questions.push(x),
                None => problem(
                    &qf,
                    "question lacks text, choices, a valid answer or a known dimension".into(),
                ),
            }
        }
        let country = text(p, &["country", "nationality"]).unwrap_or_else(|| geo.country.clone());
        persons.push(PersonRecord {
            person_id: text(p, &["person_id", "id"]).unwrap_or_else(|| format!("p{:03}", i + 1)),
            name: text(p, &["name", "person", "celebrity"]),
            birth: BirthSpec {
                iso_local,
                utc_offset_minutes: geo.utc_offset_minutes,
            },
            gender,
            place: Place {
                name: place_name,
                lon: geo.lon,
                lat: geo.lat,
            },
            country,
            questions,
        });
    }
    ImportOutcome {
        dataset: Dataset { persons },
        issues,
    }
}

fn text_dim(q: &Value) -> Option<ScenarioDomain> {
    text(q, &["dimension", "category", "aspect", "type"]).and_then(|s| parse_dimension(&s))
}

fn text_id(q: &Value) -> Option<String> {
    text(q, &["question_id", "id"])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn release_datetimes() {
        assert_eq!(
            parse_release_datetime("1966/10/18, 11:15 PM").as_deref(),
            Some("1966-10-18T23:15")
        );
        assert_eq!(
            parse_release_datetime("1970-01-02 12:05 AM").as_deref(),
            Some("1970-01-02T00:05")
        );
        assert_eq!(
            parse_release_datetime("1970-01-02T07:30").as_deref(),
            Some("1970-01-02T07:30")
        );
        assert_eq!(parse_release_datetime("soon"), None);
    }

    #[test]
    fn labels_and_dimensions() {
        assert_eq!(strip_label("A. Lawyer."), "Lawyer.");
        assert_eq!(
            strip_label("(C) Real estate business"),
            "Real estate business"
        );
        assert_eq!(strip_label("Library clerk"), "Library clerk");
        assert_eq!(
            parse_dimension("Relationships"),
            Some(ScenarioDomain::Relationship)
        );
        assert_eq!(parse_dimension("事业"), Some(ScenarioDomain::Career));
    }
}
