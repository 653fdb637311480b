//! Classical interpretation of a chart: Ten Gods, ShenSha marks, day-master
//! strength, pattern structure and favorable elements.
//!
//! Every weight and threshold lives in a [`RuleProfile`]; every ShenSha row in
//! a [`ShenShaCatalog`]. Both ship as JSON assets and can be swapped.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chart::{element_tally, FourPillarsChart, PillarPosition};
use crate::symbols::{Branch, Element, Polarity, Stem};

pub const BUNDLED_PROFILE: &str = include_str!("../assets/rule_profile.json");
pub const BUNDLED_CATALOG: &str = include_str!("../assets/shensha_catalog.json");
pub const ANALYSIS_SCHEMA: &str = "bazi-analysis/1";

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("rule profile: {0}")]
    Profile(String),
    #[error("shensha catalog: {0}")]
    Catalog(String),
}

/// Element relation of another stem to the day master.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Relation {
    Same,
    /// The day master generates it (食伤).
    Output,
    /// The day master controls it (财).
    Wealth,
    /// It controls the day master (官杀).
    Officer,
    /// It generates the day master (印).
    Resource,
}

impl Relation {
    pub fn between(day_master: Element, other: Element) -> Relation {
        match (other.index() + 5 - day_master.index()) % 5 {
            0 => Relation::Same,
            1 => Relation::Output,
            2 => Relation::Wealth,
            3 => Relation::Officer,
            _ => Relation::Resource,
        }
    }

    /// The element standing in this relation to `day_master`.
    pub fn element_for(self, day_master: Element) -> Element {
        let step = match self {
            Relation::Same => 0,
            Relation::Output => 1,
            Relation::Wealth => 2,
            Relation::Officer => 3,
            Relation::Resource => 4,
        };
        Element::from_index(day_master.index() + step)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TenGod {
    BiJian,
    JieCai,
    ShiShen,
    ShangGuan,
    PianCai,
    ZhengCai,
    QiSha,
    ZhengGuan,
    PianYin,
    ZhengYin,
}

impl TenGod {
    pub const ALL: [TenGod; 10] = [
        TenGod::BiJian,
        TenGod::JieCai,
        TenGod::ShiShen,
        TenGod::ShangGuan,
        TenGod::PianCai,
        TenGod::ZhengCai,
        TenGod::QiSha,
        TenGod::ZhengGuan,
        TenGod::PianYin,
        TenGod::ZhengYin,
    ];

    /// Relation × polarity cell; same polarity takes the first of each pair.
    pub fn from_cell(relation: Relation, same_polarity: bool) -> TenGod {
        use TenGod::*;
        match (relation, same_polarity) {
            (Relation::Same, true) => BiJian,
            (Relation::Same, false) => JieCai,
            (Relation::Output, true) => ShiShen,
            (Relation::Output, false) => ShangGuan,
            (Relation::Wealth, true) => PianCai,
            (Relation::Wealth, false) => ZhengCai,
            (Relation::Officer, true) => QiSha,
            (Relation::Officer, false) => ZhengGuan,
            (Relation::Resource, true) => PianYin,
            (Relation::Resource, false) => ZhengYin,
        }
    }

    pub fn relation(self) -> Relation {
        Relation::between(Element::Wood, Element::from_index(self as usize / 2))
    }

    pub fn glyphs(self) -> &'static str {
        [
            "比肩", "劫财", "食神", "伤官", "偏财", "正财", "七杀", "正官", "偏印", "正印",
        ][self as usize]
    }

    pub fn english(self) -> &'static str {
        [
            "Friend",
            "Rob Wealth",
            "Eating God",
            "Hurting Officer",
            "Indirect Wealth",
            "Direct Wealth",
            "Seven Killings",
            "Direct Officer",
            "Indirect Resource",
            "Direct Resource",
        ][self as usize]
    }

    pub fn from_glyphs(s: &str) -> Option<TenGod> {
        TenGod::ALL.into_iter().find(|g| g.glyphs() == s)
    }
}

impl fmt::Display for TenGod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.english(), self.glyphs())
    }
}

pub fn ten_god(day_master: Stem, other: Stem) -> TenGod {
    TenGod::from_cell(
        Relation::between(day_master.element(), other.element()),
        day_master.polarity() == other.polarity(),
    )
}

// ---------------------------------------------------------------- profile

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeasonalWeights {
    /// 旺: month element equals the day master's.
    pub prosperous: f64,
    /// 相: month element generates the day master.
    pub strengthened: f64,
    /// 休: day master generates the month element.
    pub resting: f64,
    /// 囚: day master controls the month element.
    pub confined: f64,
    /// 死: month element controls the day master.
    pub dead: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionWeights {
    pub year: f64,
    pub month: f64,
    pub day: f64,
    pub hour: f64,
}

impl PositionWeights {
    pub fn get(&self, p: PillarPosition) -> f64 {
        match p {
            PillarPosition::Year => self.year,
            PillarPosition::Month => self.month,
            PillarPosition::Day => self.day,
            PillarPosition::Hour => self.hour,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportWeights {
    pub same: f64,
    pub resource: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrainWeights {
    pub output: f64,
    pub wealth: f64,
    pub officer: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// |score| ≤ band is Balanced.
    pub balanced_band: f64,
    /// |score| ≥ extreme is ExtremeStrong / ExtremeWeak.
    pub extreme: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleProfile {
    pub version: String,
    pub seasonal: SeasonalWeights,
    pub position_weights: PositionWeights,
    pub root: SupportWeights,
    pub stem_support: SupportWeights,
    pub drain: DrainWeights,
    pub thresholds: Thresholds,
    /// Enables the 专旺 special pattern for ExtremeStrong charts.
    #[serde(default)]
    pub special_patterns: bool,
}

impl RuleProfile {
    pub fn bundled() -> RuleProfile {
        RuleProfile::from_json(BUNDLED_PROFILE).expect("bundled rule profile is valid")
    }

    pub fn from_json(text: &str) -> Result<RuleProfile, AnalysisError> {
        let p: RuleProfile =
            serde_json::from_str(text).map_err(|e| AnalysisError::Profile(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), AnalysisError> {
        let t = &self.thresholds;
        if !(t.balanced_band >= 0.0 && t.extreme > t.balanced_band) {
            return Err(AnalysisError::Profile(format!(
                "thresholds need 0 <= balanced_band < extreme, got {} and {}",
                t.balanced_band, t.extreme
            )));
        }
        let all = [
            self.position_weights.year,
            self.position_weights.month,
            self.position_weights.day,
            self.position_weights.hour,
            self.root.same,
            self.root.resource,
            self.stem_support.same,
            self.stem_support.resource,
            self.drain.output,
            self.drain.wealth,
            self.drain.officer,
        ];
        if all.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(AnalysisError::Profile(
                "weights must be finite and non-negative".into(),
            ));
        }
        Ok(())
    }

    pub fn seasonal_weight(&self, relation_of_month: Relation) -> f64 {
        match relation_of_month {
            Relation::Same => self.seasonal.prosperous,
            Relation::Resource => self.seasonal.strengthened,
            Relation::Output => self.seasonal.resting,
            Relation::Wealth => self.seasonal.confined,
            Relation::Officer => self.seasonal.dead,
        }
    }

    pub fn drain_weight(&self, relation: Relation) -> f64 {
        match relation {
            Relation::Output => self.drain.output,
            Relation::Wealth => self.drain.wealth,
            Relation::Officer => self.drain.officer,
            Relation::Same | Relation::Resource => 0.0,
        }
    }
}

// ---------------------------------------------------------------- shensha

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShenShaKey {
    DayStem,
    YearStem,
    YearBranch,
    DayBranch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShenShaRule {
    pub id: String,
    pub name: String,
    pub alias: String,
    pub key: ShenShaKey,
    /// `[key symbols, trigger branches]`, both as glyph strings.
    pub rows: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShenShaCatalog {
    pub version: String,
    pub rules: Vec<ShenShaRule>,
}

impl ShenShaCatalog {
    pub fn bundled() -> ShenShaCatalog {
        ShenShaCatalog::from_json(BUNDLED_CATALOG).expect("bundled catalog is valid")
    }

    pub fn from_json(text: &str) -> Result<ShenShaCatalog, AnalysisError> {
        let c: ShenShaCatalog =
            serde_json::from_str(text).map_err(|e| AnalysisError::Catalog(e.to_string()))?;
        for rule in &c.rules {
            for (keys, triggers) in &rule.rows {
                let key_ok = keys.chars().all(|ch| match rule.key {
                    ShenShaKey::DayStem | ShenShaKey::YearStem => Stem::from_glyph(ch).is_some(),
                    ShenShaKey::YearBranch | ShenShaKey::DayBranch => {
                        Branch::from_glyph(ch).is_some()
                    }
                });
                if keys.is_empty()
                    || !key_ok
                    || triggers.is_empty()
                    || !triggers.chars().all(|ch| Branch::from_glyph(ch).is_some())
                {
                    return Err(AnalysisError::Catalog(format!(
                        "rule {}: bad row ({keys}, {triggers})",
                        rule.id
                    )));
                }
            }
        }
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ShenShaMark {
    pub name: String,
    pub pillar: PillarPosition,
    pub symbol: Branch,
    pub rule_id: String,
}

/// Scans every catalog rule; marks are sorted and deduplicated.
pub fn shensha_marks(chart: &FourPillarsChart, catalog: &ShenShaCatalog) -> Vec<ShenShaMark> {
    let mut marks = BTreeSet::new();
    for rule in &catalog.rules {
        let (key, key_pillar) = match rule.key {
            ShenShaKey::DayStem => (chart.day.stem().glyph(), None),
            ShenShaKey::YearStem => (chart.year.stem().glyph(), None),
            ShenShaKey::YearBranch => (chart.year.branch().glyph(), Some(PillarPosition::Year)),
            ShenShaKey::DayBranch => (chart.day.branch().glyph(), Some(PillarPosition::Day)),
        };
        for (keys, triggers) in &rule.rows {
            if !keys.contains(key) {
                continue;
            }
            for (pos, pillar) in chart.pillars() {
                // a branch key never marks its own pillar
                if Some(pos) == key_pillar {
                    continue;
                }
                if triggers.contains(pillar.branch().glyph()) {
                    marks.insert(ShenShaMark {
                        name: rule.name.clone(),
                        pillar: pos,
                        symbol: pillar.branch(),
                        rule_id: rule.id.clone(),
                    });
                }
            }
        }
    }
    marks.into_iter().collect()
}

// ---------------------------------------------------------------- strength

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StrengthCategory {
    ExtremeWeak,
    Weak,
    Balanced,
    Strong,
    ExtremeStrong,
}

impl StrengthCategory {
    pub fn from_score(score: f64, t: &Thresholds) -> StrengthCategory {
        if score >= t.extreme {
            StrengthCategory::ExtremeStrong
        } else if score > t.balanced_band {
            StrengthCategory::Strong
        } else if score >= -t.balanced_band {
            StrengthCategory::Balanced
        } else if score > -t.extreme {
            StrengthCategory::Weak
        } else {
            StrengthCategory::ExtremeWeak
        }
    }

    pub fn is_extreme(self) -> bool {
        matches!(
            self,
            StrengthCategory::ExtremeWeak | StrengthCategory::ExtremeStrong
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrainBreakdown {
    pub output: f64,
    pub wealth: f64,
    pub officer: f64,
}

impl DrainBreakdown {
    pub fn total(&self) -> f64 {
        self.output + self.wealth + self.officer
    }

    /// Largest drain group; ties resolve output, wealth, officer.
    pub fn dominant(&self) -> Relation {
        let mut best = (Relation::Output, self.output);
        for (r, v) in [
            (Relation::Wealth, self.wealth),
            (Relation::Officer, self.officer),
        ] {
            if v > best.1 + 1e-12 {
                best = (r, v);
            }
        }
        best.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contributions {
    pub seasonal: f64,
    pub roots: f64,
    pub stem_support: f64,
    /// Subtracted from the score; itemized by group.
    pub drain: DrainBreakdown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrengthAssessment {
    pub score: f64,
    pub category: StrengthCategory,
    pub contributions: Contributions,
    pub profile_version: String,
}

/// score = seasonal + roots + stem support − drain.
pub fn day_master_strength(chart: &FourPillarsChart, profile: &RuleProfile) -> StrengthAssessment {
    let dm = chart.day_master.element();
    let seasonal = profile.seasonal_weight(Relation::between(dm, chart.month.branch().element()));
    let mut roots = 0.0;
    let mut stem_support = 0.0;
    let mut drain = DrainBreakdown {
        output: 0.0,
        wealth: 0.0,
        officer: 0.0,
    };
    let mut add_drain = |rel: Relation, amount: f64| match rel {
        Relation::Output => drain.output += amount * profile.drain.output,
        Relation::Wealth => drain.wealth += amount * profile.drain.wealth,
        Relation::Officer => drain.officer += amount * profile.drain.officer,
        Relation::Same | Relation::Resource => {}
    };
    for (pos, pillar) in chart.pillars() {
        let pw = profile.position_weights.get(pos);
        for (hs, w) in pillar.branch().hidden_stems() {
            match Relation::between(dm, hs.element()) {
                Relation::Same => roots += w * pw * profile.root.same,
                Relation::Resource => roots += w * pw * profile.root.resource,
                rel => add_drain(rel, w * pw),
            }
        }
        if pos == PillarPosition::Day {
            continue;
        }
        match Relation::between(dm, pillar.stem().element()) {
            Relation::Same => stem_support += profile.stem_support.same,
            Relation::Resource => stem_support += profile.stem_support.resource,
            rel => add_drain(rel, 1.0),
        }
    }
    let score = seasonal + roots + stem_support - drain.total();
    StrengthAssessment {
        score,
        category: StrengthCategory::from_score(score, &profile.thresholds),
        contributions: Contributions {
            seasonal,
            roots,
            stem_support,
            drain,
        },
        profile_version: profile.version.clone(),
    }
}

// ---------------------------------------------------------------- pattern

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FollowerVariant {
    /// 从儿: follows the output element.
    Output,
    /// 从财: follows the wealth element.
    Wealth,
    /// 从杀: follows the officer element.
    Officer,
}

impl FollowerVariant {
    pub fn glyphs(self) -> &'static str {
        match self {
            FollowerVariant::Output => "从儿",
            FollowerVariant::Wealth => "从财",
            FollowerVariant::Officer => "从杀",
        }
    }

    pub fn relation(self) -> Relation {
        match self {
            FollowerVariant::Output => Relation::Output,
            FollowerVariant::Wealth => Relation::Wealth,
            FollowerVariant::Officer => Relation::Officer,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PatternKind {
    Regular(TenGod),
    Follower(FollowerVariant),
    Special(String),
}

impl PatternKind {
    pub fn glyphs(&self) -> String {
        match self {
            PatternKind::Regular(g) => format!("{}格", g.glyphs()),
            PatternKind::Follower(v) => format!("{}格", v.glyphs()),
            PatternKind::Special(name) => format!("{name}格"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternStructure {
    pub kind: PatternKind,
    /// Ten God of the month branch's principal hidden stem (月令).
    pub month_command: TenGod,
    pub basis: Vec<String>,
}

pub fn classify_pattern(
    chart: &FourPillarsChart,
    strength: &StrengthAssessment,
    profile: &RuleProfile,
) -> PatternStructure {
    let dm = chart.day_master;
    let principal = chart.month.branch().principal_stem();
    let month_command = ten_god(dm, principal);
    let mut basis = vec![format!(
        "strength {:.3} → {:?} (band ±{}, extreme ±{})",
        strength.score,
        strength.category,
        profile.thresholds.balanced_band,
        profile.thresholds.extreme
    )];
    basis.push(format!(
        "month command {} in {} is {}",
        principal.glyph(),
        chart.month.branch().glyph(),
        month_command
    ));

    if strength.category == StrengthCategory::ExtremeWeak {
        let d = &strength.contributions.drain;
        let variant = match d.dominant() {
            Relation::Output => FollowerVariant::Output,
            Relation::Wealth => FollowerVariant::Wealth,
            _ => FollowerVariant::Officer,
        };
        basis.push(format!(
            "extreme weakness follows the dominant drain: output {:.3}, wealth {:.3}, officer {:.3}",
            d.output, d.wealth, d.officer
        ));
        return PatternStructure {
            kind: PatternKind::Follower(variant),
            month_command,
            basis,
        };
    }
    if profile.special_patterns && strength.category == StrengthCategory::ExtremeStrong {
        basis.push("extreme strength with special patterns enabled".into());
        return PatternStructure {
            kind: PatternKind::Special("专旺".into()),
            month_command,
            basis,
        };
    }

    let mut god = month_command;
    if matches!(month_command, TenGod::BiJian | TenGod::JieCai) {
        let tally = element_tally(chart);
        // strongest transparent non-peer stem; ties go month, hour, year
        let candidate = [
            PillarPosition::Month,
            PillarPosition::Hour,
            PillarPosition::Year,
        ]
        .into_iter()
        .map(|p| (p, chart.pillar(p).stem()))
        .filter(|(_, s)| Relation::between(dm.element(), s.element()) != Relation::Same)
        .fold(None::<(PillarPosition, Stem)>, |best, cur| match best {
            Some(b)
                if tally.hidden_weighted[b.1.element()] + 1e-12
                    >= tally.hidden_weighted[cur.1.element()] =>
            {
                Some(b)
            }
            _ => Some(cur),
        });
        match candidate {
            Some((pos, s)) => {
                god = ten_god(dm, s);
                basis.push(format!(
                    "peer month command falls back to the strongest transparent stem {} ({} pillar) → {}",
                    s.glyph(),
                    pos.name(),
                    god
                ));
            }
            None => {
                basis.push("no transparent non-peer stem; keeping the peer month command".into())
            }
        }
    }
    if strength.category == StrengthCategory::Balanced {
        basis.push("balanced chart: low-confidence classification".into());
    }
    PatternStructure {
        kind: PatternKind::Regular(god),
        month_command,
        basis,
    }
}

// ---------------------------------------------------------------- 喜/忌

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementPreference {
    pub favorable: Vec<Element>,
    pub unfavorable: Vec<Element>,
}

impl ElementPreference {
    fn from_sets(favorable: BTreeSet<Element>, unfavorable: BTreeSet<Element>) -> Self {
        debug_assert!(favorable.is_disjoint(&unfavorable));
        ElementPreference {
            favorable: favorable.into_iter().collect(),
            unfavorable: unfavorable.into_iter().collect(),
        }
    }

    pub fn is_favorable(&self, e: Element) -> bool {
        self.favorable.contains(&e)
    }

    pub fn is_unfavorable(&self, e: Element) -> bool {
        self.unfavorable.contains(&e)
    }
}

pub fn favorable_elements(
    chart: &FourPillarsChart,
    pattern: &PatternStructure,
    strength: &StrengthAssessment,
) -> ElementPreference {
    let e = chart.day_master.element();
    let rel = |r: Relation| r.element_for(e);
    let set = |rs: &[Relation]| rs.iter().map(|&r| rel(r)).collect::<BTreeSet<_>>();
    match &pattern.kind {
        PatternKind::Follower(v) => {
            let followed = rel(v.relation());
            let favorable: BTreeSet<_> = [followed, followed.generated_by()].into();
            let mut unfavorable: BTreeSet<_> = [followed.controlled_by()].into();
            unfavorable.extend(set(&[Relation::Same, Relation::Resource]));
            let unfavorable = unfavorable.difference(&favorable).copied().collect();
            ElementPreference::from_sets(favorable, unfavorable)
        }
        PatternKind::Special(_) => ElementPreference::from_sets(
            set(&[Relation::Same, Relation::Resource, Relation::Output]),
            set(&[Relation::Officer]),
        ),
        PatternKind::Regular(_) => match strength.category {
            StrengthCategory::Strong | StrengthCategory::ExtremeStrong => {
                ElementPreference::from_sets(
                    set(&[Relation::Output, Relation::Wealth, Relation::Officer]),
                    set(&[Relation::Same, Relation::Resource]),
                )
            }
            StrengthCategory::Weak | StrengthCategory::ExtremeWeak => ElementPreference::from_sets(
                set(&[Relation::Same, Relation::Resource]),
                set(&[Relation::Output, Relation::Wealth, Relation::Officer]),
            ),
            StrengthCategory::Balanced => {
                ElementPreference::from_sets(set(&[Relation::Output]), set(&[Relation::Officer]))
            }
        },
    }
}

// ---------------------------------------------------------------- bundle

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PillarGods {
    pub pillar: PillarPosition,
    /// None for the day stem, which is the day master itself.
    pub stem_god: Option<TenGod>,
    pub branch_god: TenGod,
    /// Secondary hidden stems are reported without god labels.
    pub secondary_hidden: Vec<(Stem, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisBundle {
    pub schema: String,
    pub day_master: Stem,
    pub day_master_element: Element,
    pub day_master_polarity: Polarity,
    pub ten_gods: Vec<PillarGods>,
    pub shensha: Vec<ShenShaMark>,
    pub strength: StrengthAssessment,
    pub pattern: PatternStructure,
    pub preference: ElementPreference,
    pub tally: crate::chart::ElementTally,
}

pub fn pillar_gods(chart: &FourPillarsChart) -> Vec<PillarGods> {
    let dm = chart.day_master;
    chart
        .pillars()
        .into_iter()
        .map(|(pos, p)| PillarGods {
            pillar: pos,
            stem_god: (pos != PillarPosition::Day).then(|| ten_god(dm, p.stem())),
            branch_god: ten_god(dm, p.branch().principal_stem()),
            secondary_hidden: p.branch().hidden_stems().skip(1).collect(),
        })
        .collect()
}

pub fn analyze(
    chart: &FourPillarsChart,
    profile: &RuleProfile,
    catalog: &ShenShaCatalog,
) -> AnalysisBundle {
    let strength = day_master_strength(chart, profile);
    let pattern = classify_pattern(chart, &strength, profile);
    let preference = favorable_elements(chart, &pattern, &strength);
    AnalysisBundle {
        schema: ANALYSIS_SCHEMA.to_string(),
        day_master: chart.day_master,
        day_master_element: chart.day_master.element(),
        day_master_polarity: chart.day_master.polarity(),
        ten_gods: pillar_gods(chart),
        shensha: shensha_marks(chart, catalog),
        strength,
        pattern,
        preference,
        tally: element_tally(chart),
    }
}
