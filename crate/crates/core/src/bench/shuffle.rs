use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::dataset::PersonRecord;
use super::BenchError;

/// What a recipient takes from its donor. Gender is never swapped.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShuffleScope {
    /// Birth datetime, UTC offset and birthplace, as one unit.
    #[default]
    BirthAndPlace,
    /// Calendar date only; own time of day, offset and place are kept.
    DateOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShufflePlan {
    pub seed: u64,
    pub scope: ShuffleScope,
    /// Recipient person_id → donor person_id. A derangement.
    pub permutation: BTreeMap<String, String>,
}

/// Uniform derangement by rejection: draw permutations until none has a fixed point.
pub fn make_shuffle(records: &[PersonRecord], seed: u64) -> Result<ShufflePlan, BenchError> {
    let n = records.len();
    if n < 2 {
        return Err(BenchError::NoDerangement(n));
    }
    let mut seen = HashMap::new();
    for r in records {
        if seen.insert(r.person_id.as_str(), ()).is_some() {
            return Err(BenchError::DuplicatePerson(r.person_id.clone()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    loop {
        order.shuffle(&mut rng);
        if order.iter().enumerate().all(|(i, &j)| i != j) {
            break;
        }
    }
    let permutation = order
        .iter()
        .enumerate()
        .map(|(i, &j)| (records[i].person_id.clone(), records[j].person_id.clone()))
        .collect();
    Ok(ShufflePlan {
        seed,
        scope: ShuffleScope::default(),
        permutation,
    })
}

impl ShufflePlan {
    pub fn fixed_points(&self) -> usize {
        self.permutation.iter().filter(|(a, b)| a == b).count()
    }

    pub fn is_bijective(&self) -> bool {
        let mut donors: Vec<_> = self.permutation.values().collect();
        donors.sort();
        donors.dedup();
        donors.len() == self.permutation.len()
            && donors.iter().all(|d| self.permutation.contains_key(*d))
    }

    /// Records with chart inputs swapped per the plan; questions, gold answers
    /// and gender stay with the recipient.
    pub fn apply(&self, records: &[PersonRecord]) -> Result<Vec<PersonRecord>, BenchError> {
        let by_id: HashMap<&str, &PersonRecord> =
            records.iter().map(|r| (r.person_id.as_str(), r)).collect();
        records
            .iter()
            .map(|r| {
                let donor_id = self
                    .permutation
                    .get(&r.person_id)
                    .ok_or_else(|| BenchError::PlanMismatch(r.person_id.clone()))?;
                let donor = by_id
                    .get(donor_id.as_str())
                    .ok_or_else(|| BenchError::PlanMismatch(donor_id.clone()))?;
                let mut out = r.clone();
                match self.scope {
                    ShuffleScope::BirthAndPlace => {
                        out.birth = donor.birth.clone();
                        out.place = donor.place.clone();
                    }
                    ShuffleScope::DateOnly => {
                        let date = donor
                            .birth
                            .iso_local
                            .split(['T', ' '])
                            .next()
                            .unwrap_or_default();
                        let time = r
                            .birth
                            .iso_local
                            .split_once(['T', ' '])
                            .map(|x| x.1)
                            .unwrap_or_default();
                        out.birth.iso_local = format!("{date}T{time}");
                    }
                }
                Ok(out)
            })
            .collect()
    }
}
