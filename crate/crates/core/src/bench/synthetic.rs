//! Deterministic stand-in with the published shape: 50 persons, 29
//! countries, 37 male / 13 female, 488 four-choice questions.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::dataset::{BirthSpec, Dataset, PersonRecord, Place, Question};
use crate::calendrics::days_in_month;
use crate::chart::Gender;
use crate::persona::ScenarioDomain;

pub const SYNTHETIC_PERSONS: usize = 50;
pub const SYNTHETIC_MALE: usize = 37;
pub const SYNTHETIC_QUESTIONS: usize = 488;

/// (country, city, lon, lat, standard UTC offset in minutes)
const PLACES: [(&str, &str, f64, f64, i32); 29] = [
    ("China", "Beijing", 116.40, 39.90, 480),
    ("Hong Kong", "Hong Kong", 114.17, 22.30, 480),
    ("Taiwan", "Taipei", 121.56, 25.04, 480),
    ("Japan", "Tokyo", 139.69, 35.69, 540),
    ("South Korea", "Seoul", 126.98, 37.57, 540),
    ("Singapore", "Singapore", 103.82, 1.35, 480),
    ("India", "Mumbai", 72.88, 19.08, 330),
    ("Thailand", "Bangkok", 100.50, 13.76, 420),
    ("Vietnam", "Hanoi", 105.85, 21.03, 420),
    ("Philippines", "Manila", 120.98, 14.60, 480),
    ("Indonesia", "Jakarta", 106.85, -6.21, 420),
    ("Australia", "Sydney", 151.21, -33.87, 600),
    ("New Zealand", "Auckland", 174.76, -36.85, 720),
    ("United States", "New York", -74.01, 40.71, -300),
    ("Canada", "Toronto", -79.38, 43.65, -300),
    ("Mexico", "Mexico City", -99.13, 19.43, -360),
    ("Brazil", "Sao Paulo", -46.63, -23.55, -180),
    ("Argentina", "Buenos Aires", -58.38, -34.60, -180),
    ("United Kingdom", "London", -0.13, 51.51, 0),
    ("France", "Paris", 2.35, 48.86, 60),
    ("Germany", "Berlin", 13.40, 52.52, 60),
    ("Italy", "Rome", 12.50, 41.90, 60),
    ("Spain", "Madrid", -3.70, 40.42, 60),
    ("Netherlands", "Amsterdam", 4.90, 52.37, 60),
    ("Sweden", "Stockholm", 18.07, 59.33, 60),
    ("Russia", "Moscow", 37.62, 55.76, 180),
    ("Egypt", "Cairo", 31.24, 30.04, 120),
    ("South Africa", "Johannesburg", 28.05, -26.20, 120),
    ("Nigeria", "Lagos", 3.38, 6.52, 60),
];

fn bank(d: ScenarioDomain) -> (&'static [&'static str], [&'static str; 4]) {
    match d {
        ScenarioDomain::Wealth => (
            &[
                "How did this person's finances develop over their life?",
                "What was the main source of this person's wealth?",
            ],
            [
                "Steady salary with modest savings",
                "Large fortune from business",
                "Inherited family assets",
                "Repeated financial hardship",
            ],
        ),
        ScenarioDomain::Health => (
            &[
                "Which health pattern best fits this person?",
                "What kind of health challenge did this person face?",
            ],
            [
                "Robust health into old age",
                "Chronic illness from middle age",
                "Serious accident or injury",
                "Mental strain and exhaustion",
            ],
        ),
        ScenarioDomain::Kinship => (
            &[
                "What was this person's relationship with their family like?",
                "How did this person's parents influence them?",
            ],
            [
                "Close and supportive family",
                "Early separation from parents",
                "Conflict with siblings",
                "Raised by relatives",
            ],
        ),
        ScenarioDomain::Career => (
            &[
                "What kind of job is this person likely to have?",
                "How did this person's career develop?",
            ],
            [
                "Performing arts",
                "Politics or public office",
                "Science or engineering",
                "Business or trade",
            ],
        ),
        ScenarioDomain::Relationship => (
            &[
                "What was this person's marriage like?",
                "How did this person's romantic life unfold?",
            ],
            [
                "One long stable marriage",
                "Several marriages",
                "Never married",
                "Late marriage after a long search",
            ],
        ),
    }
}

pub fn synthetic_dataset(seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut genders: Vec<Gender> = (0..SYNTHETIC_PERSONS)
        .map(|i| {
            if i < SYNTHETIC_MALE {
                Gender::Male
            } else {
                Gender::Female
            }
        })
        .collect();
    genders.shuffle(&mut rng);
    // every country used once, the rest drawn at random
    let mut places: Vec<usize> = (0..PLACES.len()).collect();
    places.extend((PLACES.len()..SYNTHETIC_PERSONS).map(|_| rng.random_range(0..PLACES.len())));
    places.shuffle(&mut rng);
    // 38 persons × 10 + 12 × 9 = 488
    let tens = SYNTHETIC_QUESTIONS - 9 * SYNTHETIC_PERSONS;
    let mut counts: Vec<usize> = (0..SYNTHETIC_PERSONS)
        .map(|i| if i < tens { 10 } else { 9 })
        .collect();
    counts.shuffle(&mut rng);

    let persons = (0..SYNTHETIC_PERSONS)
        .map(|i| {
            let (country, city, lon, lat, offset) = PLACES[places[i]];
            let year = rng.random_range(1901..=2005);
            let month = rng.random_range(1..=12u8);
            let day = rng.random_range(1..=days_in_month(year, month));
            let iso_local = format!(
                "{year:04}-{month:02}-{day:02}T{:02}:{:02}",
                rng.random_range(0..24u8),
                rng.random_range(0..60u8)
            );
            let start = rng.random_range(0..ScenarioDomain::ALL.len());
            let questions = (0..counts[i])
                .map(|j| {
                    let dimension = ScenarioDomain::ALL[(start + j) % ScenarioDomain::ALL.len()];
                    let (texts, choices) = bank(dimension);
                    Question {
                        question_id: format!("q{:02}", j + 1),
                        text: texts[(j / ScenarioDomain::ALL.len()) % texts.len()].to_string(),
                        choices: choices.iter().map(|c| c.to_string()).collect(),
                        gold_index: rng.random_range(0..choices.len()),
                        dimension,
                        reference_year: None,
                    }
                })
                .collect();
            PersonRecord {
                person_id: format!("syn-{:03}", i + 1),
                name: Some(format!("Synthetic Person {:03}", i + 1)),
                birth: BirthSpec {
                    iso_local,
                    utc_offset_minutes: offset,
                },
                gender: genders[i],
                place: Place {
                    name: city.to_string(),
                    lon,
                    lat,
                },
                country: country.to_string(),
                questions,
            }
        })
        .collect();
    Dataset { persons }
}
