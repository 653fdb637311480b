//! Persona prompts: long-term traits plus short-term scenario states, rendered
//! into a deterministic, versioned text template.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::analysis::{AnalysisBundle, PatternKind};
use crate::calendrics::{CalendricsError, CivilDateTime, SolarTimeMode, WINDOW_LAST_YEAR};
use crate::chart::{FourPillarsChart, PillarPosition};
use crate::cycles::{self, flowing_year, is_clash, luck_pillar_for_year, Granularity, LuckPillar};
use crate::symbols::{Element, Pillar, Stem};

pub const BUNDLED_LEXICON: &str = include_str!("../assets/trait_lexicon.json");
pub const BUNDLED_DOMAIN_MAP: &str = include_str!("../assets/domain_map.json");
pub const RULE_KNOWLEDGE_V1: &str = include_str!("../assets/rule_knowledge_v1.txt");
pub const TEMPLATE_VERSIONS: [&str; 1] = ["v1"];

/// Years after birth used when a question carries no reference year.
pub const DEFAULT_REFERENCE_AGE: i32 = 30;
pub const FLOWING_DRIVER_WEIGHT: f64 = 1.0;
pub const LUCK_DRIVER_WEIGHT: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PersonaError {
    #[error("unknown template version {0:?} (known: v1)")]
    UnknownTemplate(String),
    #[error("asset {0}: {1}")]
    Asset(&'static str, String),
    #[error("domain {0:?} missing from the domain map")]
    MissingDomain(ScenarioDomain),
    #[error("question needs 2 to 8 choices, got {0}")]
    ChoiceCount(usize),
    #[error(transparent)]
    Calendrics(#[from] CalendricsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ScenarioDomain {
    Wealth,
    Health,
    Kinship,
    Career,
    Relationship,
}

impl ScenarioDomain {
    pub const ALL: [ScenarioDomain; 5] = [
        ScenarioDomain::Wealth,
        ScenarioDomain::Health,
        ScenarioDomain::Kinship,
        ScenarioDomain::Career,
        ScenarioDomain::Relationship,
    ];
}

impl std::str::FromStr for ScenarioDomain {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ScenarioDomain::ALL
            .into_iter()
            .find(|d| d.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                format!("unknown dimension {s:?} (wealth|health|kinship|career|relationship)")
            })
    }
}

impl fmt::Display for ScenarioDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

// ---------------------------------------------------------------- assets

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraitSource {
    Pattern,
    Dominant,
    Deficient,
    Shensha,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub source: TraitSource,
    pub key: String,
    pub weight: f64,
    pub tags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraitLexicon {
    pub version: String,
    pub entries: Vec<LexiconEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainEntry {
    pub domain: ScenarioDomain,
    pub key_pillar: PillarPosition,
    pub ten_gods: Vec<String>,
    pub focus: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainMap {
    pub version: String,
    pub domains: Vec<DomainEntry>,
}

impl DomainMap {
    pub fn entry(&self, d: ScenarioDomain) -> Result<&DomainEntry, PersonaError> {
        self.domains
            .iter()
            .find(|e| e.domain == d)
            .ok_or(PersonaError::MissingDomain(d))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PersonaAssets {
    pub lexicon: TraitLexicon,
    pub domains: DomainMap,
}

impl PersonaAssets {
    pub fn bundled() -> PersonaAssets {
        PersonaAssets::from_json(BUNDLED_LEXICON, BUNDLED_DOMAIN_MAP)
            .expect("bundled persona assets are valid")
    }

    pub fn from_json(lexicon: &str, domains: &str) -> Result<PersonaAssets, PersonaError> {
        let lexicon: TraitLexicon = serde_json::from_str(lexicon)
            .map_err(|e| PersonaError::Asset("trait lexicon", e.to_string()))?;
        if let Some(bad) = lexicon
            .entries
            .iter()
            .find(|e| e.weight <= 0.0 || e.tags.is_empty())
        {
            return Err(PersonaError::Asset(
                "trait lexicon",
                format!("entry {} needs weight > 0 and tags", bad.key),
            ));
        }
        let domains: DomainMap = serde_json::from_str(domains)
            .map_err(|e| PersonaError::Asset("domain map", e.to_string()))?;
        for d in ScenarioDomain::ALL {
            domains.entry(d)?;
        }
        Ok(PersonaAssets { lexicon, domains })
    }
}

// ---------------------------------------------------------------- traits

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraitDescriptor {
    pub source: TraitSource,
    pub key: String,
    pub tag: String,
    pub weight: f64,
    /// Position of the tag in the lexicon; the secondary sort key.
    pub lexicon_index: usize,
}

pub fn pattern_key(kind: &PatternKind) -> String {
    match kind {
        PatternKind::Regular(g) => g.glyphs().to_string(),
        PatternKind::Follower(v) => v.glyphs().to_string(),
        PatternKind::Special(name) => name.clone(),
    }
}

/// Sorted by weight (descending), then lexicon position; tags are unique.
pub fn personality_features(
    bundle: &AnalysisBundle,
    lexicon: &TraitLexicon,
) -> Vec<TraitDescriptor> {
    let mut wanted: Vec<(TraitSource, String)> = vec![
        (TraitSource::Pattern, pattern_key(&bundle.pattern.kind)),
        (
            TraitSource::Dominant,
            bundle.tally.dominant().name().to_string(),
        ),
    ];
    wanted.extend(
        bundle
            .tally
            .missing()
            .into_iter()
            .map(|e| (TraitSource::Deficient, e.name().to_string())),
    );
    let marks: BTreeSet<&str> = bundle.shensha.iter().map(|m| m.name.as_str()).collect();
    wanted.extend(
        marks
            .into_iter()
            .map(|n| (TraitSource::Shensha, n.to_string())),
    );

    let mut out = Vec::new();
    let mut index = 0;
    for entry in &lexicon.entries {
        let hit = wanted
            .iter()
            .any(|(s, k)| *s == entry.source && *k == entry.key);
        for tag in &entry.tags {
            if hit {
                out.push(TraitDescriptor {
                    source: entry.source,
                    key: entry.key.clone(),
                    tag: tag.clone(),
                    weight: entry.weight,
                    lexicon_index: index,
                });
            }
            index += 1;
        }
    }
    out.sort_by(|a, b| {
        b.weight
            .total_cmp(&a.weight)
            .then(a.lexicon_index.cmp(&b.lexicon_index))
    });
    let mut seen = BTreeSet::new();
    out.retain(|t| seen.insert(t.tag.clone()));
    out
}

// ---------------------------------------------------------------- temporal state

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Valence {
    Adverse,
    Neutral,
    Supportive,
}

impl Valence {
    pub fn downgrade(self) -> Valence {
        match self {
            Valence::Supportive => Valence::Neutral,
            _ => Valence::Adverse,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DriverKind {
    FlowingYearStem,
    FlowingYearBranch,
    LuckStem,
    LuckBranch,
    /// A flowing or luck branch clashing the domain's key pillar.
    KeyPillarClash,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Effect {
    Favorable,
    Unfavorable,
    Neutral,
    Clash,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Driver {
    pub kind: DriverKind,
    pub symbol: String,
    pub element: Option<Element>,
    pub weight: f64,
    pub effect: Effect,
}

/// Weighted favorable vs unfavorable hits; any key-pillar clash downgrades once.
pub fn valence_of(drivers: &[Driver]) -> Valence {
    let sum = |e: Effect| {
        drivers
            .iter()
            .filter(|d| d.effect == e)
            .map(|d| d.weight)
            .sum::<f64>()
    };
    let (fav, unfav) = (sum(Effect::Favorable), sum(Effect::Unfavorable));
    let base = if fav > unfav + 1e-12 {
        Valence::Supportive
    } else if unfav > fav + 1e-12 {
        Valence::Adverse
    } else {
        Valence::Neutral
    };
    if drivers.iter().any(|d| d.effect == Effect::Clash) {
        base.downgrade()
    } else {
        base
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemporalState {
    pub domain: ScenarioDomain,
    pub year: i32,
    pub flowing: Pillar,
    pub luck: Option<Pillar>,
    pub drivers: Vec<Driver>,
    pub valence: Valence,
}

fn element_driver(
    kind: DriverKind,
    glyph: char,
    element: Element,
    weight: f64,
    bundle: &AnalysisBundle,
) -> Driver {
    let effect = if bundle.preference.is_favorable(element) {
        Effect::Favorable
    } else if bundle.preference.is_unfavorable(element) {
        Effect::Unfavorable
    } else {
        Effect::Neutral
    };
    Driver {
        kind,
        symbol: glyph.to_string(),
        element: Some(element),
        weight,
        effect,
    }
}

pub fn scenario_state(
    chart: &FourPillarsChart,
    bundle: &AnalysisBundle,
    luck: &[LuckPillar],
    domain: &DomainEntry,
    year: i32,
) -> Result<TemporalState, PersonaError> {
    let flowing = flowing_year(year, chart.civil.utc_offset_minutes)?.pillar;
    let luck_pillar = luck_pillar_for_year(luck, year).map(|l| l.pillar);
    let mut drivers = vec![
        element_driver(
            DriverKind::FlowingYearStem,
            flowing.stem().glyph(),
            flowing.stem().element(),
            FLOWING_DRIVER_WEIGHT,
            bundle,
        ),
        element_driver(
            DriverKind::FlowingYearBranch,
            flowing.branch().glyph(),
            flowing.branch().element(),
            FLOWING_DRIVER_WEIGHT,
            bundle,
        ),
    ];
    if let Some(l) = luck_pillar {
        drivers.push(element_driver(
            DriverKind::LuckStem,
            l.stem().glyph(),
            l.stem().element(),
            LUCK_DRIVER_WEIGHT,
            bundle,
        ));
        drivers.push(element_driver(
            DriverKind::LuckBranch,
            l.branch().glyph(),
            l.branch().element(),
            LUCK_DRIVER_WEIGHT,
            bundle,
        ));
    }
    let key = chart.pillar(domain.key_pillar).branch();
    for outside in std::iter::once(flowing).chain(luck_pillar) {
        if is_clash(key, outside.branch()) {
            drivers.push(Driver {
                kind: DriverKind::KeyPillarClash,
                symbol: format!("{}{}", key.glyph(), outside.branch().glyph()),
                element: None,
                weight: 0.0,
                effect: Effect::Clash,
            });
        }
    }
    Ok(TemporalState {
        domain: domain.domain,
        year,
        flowing,
        luck: luck_pillar,
        valence: valence_of(&drivers),
        drivers,
    })
}

// ---------------------------------------------------------------- rendering

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PromptVariant {
    /// Birth data and the eight characters.
    ChartOnly,
    /// Chart plus the static rule-knowledge block.
    ChartWithKnowledge,
    /// Rule analysis, reasoning and scenario interpretation.
    #[default]
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptOptions {
    pub template_version: String,
    pub variant: PromptVariant,
    pub luck_count: u32,
    pub reference_year: Option<i32>,
    pub flowing_month: bool,
    pub flowing_day: bool,
    pub birthplace: Option<String>,
    /// Free text from an earlier pipeline stage, appended as its own section.
    pub knowledge_notes: Option<String>,
}

impl Default for PromptOptions {
    fn default() -> Self {
        PromptOptions {
            template_version: "v1".into(),
            variant: PromptVariant::Full,
            luck_count: 8,
            reference_year: None,
            flowing_month: false,
            flowing_day: false,
            birthplace: None,
            knowledge_notes: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuestionContext {
    pub text: String,
    pub choices: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub title: String,
    pub body: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersonaPrompt {
    pub template_version: String,
    pub variant: PromptVariant,
    pub sections: Vec<Section>,
    pub rendered_text: String,
    /// Lowercase hex SHA-256 of `rendered_text`.
    pub content_hash: String,
}

pub fn content_hash(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

pub fn choice_letter(i: usize) -> char {
    (b'A' + i as u8) as char
}

fn pinyin(p: Pillar) -> String {
    format!(
        "{} {} ({})",
        p.stem().pinyin(),
        p.branch().pinyin(),
        p.glyphs()
    )
}

fn stem_label(s: Stem) -> String {
    format!("{} ({})", s.pinyin(), s.glyph())
}

fn signed(x: f64) -> String {
    // avoid "-0.00"
    let r = (x * 100.0).round() / 100.0;
    format!("{:+.2}", if r == 0.0 { 0.0 } else { r })
}

/// Everything a prompt depends on, computed once per subject.
#[derive(Debug, Clone)]
pub struct PersonaInputs<'a> {
    pub chart: &'a FourPillarsChart,
    pub bundle: &'a AnalysisBundle,
    pub luck: &'a [LuckPillar],
    pub assets: &'a PersonaAssets,
}

pub fn reference_year(chart: &FourPillarsChart, options: &PromptOptions) -> i32 {
    options
        .reference_year
        .unwrap_or(chart.civil.year + DEFAULT_REFERENCE_AGE)
        .min(WINDOW_LAST_YEAR)
}

fn birth_section(chart: &FourPillarsChart, options: &PromptOptions) -> Section {
    let c = &chart.civil;
    let off = c.utc_offset_minutes;
    let mut b = String::new();
    let _ = writeln!(b, "Gender: {}", chart.gender);
    let _ = writeln!(
        b,
        "Birth date and time (local clock): {:04}-{:02}-{:02} {:02}:{:02} (UTC{}{:02}:{:02})",
        c.year,
        c.month,
        c.day,
        c.hour,
        c.minute,
        if off < 0 { '-' } else { '+' },
        off.abs() / 60,
        off.abs() % 60
    );
    if let Some(place) = &options.birthplace {
        let _ = writeln!(b, "Place of birth: {place}");
    }
    let loc = &chart.location;
    let _ = writeln!(
        b,
        "Coordinates: {:.2}°{}, {:.2}°{}",
        loc.latitude_deg_north.abs(),
        if loc.latitude_deg_north < 0.0 {
            'S'
        } else {
            'N'
        },
        loc.longitude_deg_east.abs(),
        if loc.longitude_deg_east < 0.0 {
            'W'
        } else {
            'E'
        }
    );
    let mode = match chart.config.solar_time {
        SolarTimeMode::Off => "local clock time",
        SolarTimeMode::MeanSolar => "local mean solar time",
        SolarTimeMode::TrueSolar => "local true solar time",
    };
    let _ = write!(
        b,
        "Chart time ({mode}): {}",
        chart.birth.local_true_solar.to_string().replace('T', " ")
    );
    Section {
        title: "Birth Information".into(),
        body: b,
    }
}

fn pillars_block(chart: &FourPillarsChart) -> String {
    let mut b = String::new();
    let _ = writeln!(
        b,
        "Four Pillars: Year {}, Month {}, Day {}, Hour {}",
        pinyin(chart.year),
        pinyin(chart.month),
        pinyin(chart.day),
        pinyin(chart.hour)
    );
    let dm = chart.day_master;
    let _ = write!(
        b,
        "Day Master: {}, {:?} {}",
        stem_label(dm),
        dm.polarity(),
        dm.element()
    );
    b
}

fn rule_analysis_section(inputs: &PersonaInputs) -> Section {
    let (chart, bundle) = (inputs.chart, inputs.bundle);
    let mut b = pillars_block(chart);
    b.push_str("\nTen Gods:");
    for g in &bundle.ten_gods {
        let p = chart.pillar(g.pillar);
        let stem = match g.stem_god {
            Some(god) => format!("stem {} is {god}", stem_label(p.stem())),
            None => format!("stem {} is the Day Master", stem_label(p.stem())),
        };
        let principal = p.branch().principal_stem();
        let _ = write!(
            b,
            "\n- {} pillar: {stem}; branch {} ({}) holds {} as {}",
            capitalize(g.pillar.name()),
            p.branch().pinyin(),
            p.branch().glyph(),
            stem_label(principal),
            g.branch_god
        );
        if !g.secondary_hidden.is_empty() {
            let rest: Vec<_> = g
                .secondary_hidden
                .iter()
                .map(|(s, _)| stem_label(*s))
                .collect();
            let _ = write!(b, ", plus {}", rest.join(", "));
        }
    }
    let t = &bundle.tally;
    let visible: Vec<_> = t.visible.iter().map(|(e, n)| format!("{e} {n}")).collect();
    let hidden: Vec<_> = t
        .hidden_weighted
        .iter()
        .map(|(e, w)| format!("{e} {w:.2}"))
        .collect();
    let _ = write!(
        b,
        "\nFive Elements (visible symbols): {}",
        visible.join(", ")
    );
    let _ = write!(
        b,
        "\nFive Elements (with hidden stems): {}",
        hidden.join(", ")
    );
    let missing = t.missing();
    if !missing.is_empty() {
        let names: Vec<_> = missing.iter().map(|e| e.to_string()).collect();
        let _ = write!(b, "\nMissing elements: {}", names.join(", "));
    }
    if bundle.shensha.is_empty() {
        b.push_str("\nShenSha markers: none");
    } else {
        let marks: Vec<_> = bundle
            .shensha
            .iter()
            .map(|m| {
                format!(
                    "{} at the {} branch {}",
                    m.name,
                    m.pillar.name(),
                    m.symbol.glyph()
                )
            })
            .collect();
        let _ = write!(b, "\nShenSha markers: {}", marks.join("; "));
    }
    let s = &bundle.strength;
    let k = &s.contributions;
    let _ = write!(
        b,
        "\nDay Master strength: {:?} (score {}; season {}, roots {}, stem support {}, drain {})",
        s.category,
        signed(s.score),
        signed(k.seasonal),
        signed(k.roots),
        signed(k.stem_support),
        signed(-k.drain.total())
    );
    let _ = write!(
        b,
        "\nPattern structure: {}",
        pattern_label(&bundle.pattern.kind)
    );
    let names = |es: &[Element]| {
        es.iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    let _ = write!(
        b,
        "\nFavorable elements (喜): {}",
        names(&bundle.preference.favorable)
    );
    let _ = write!(
        b,
        "\nUnfavorable elements (忌): {}",
        names(&bundle.preference.unfavorable)
    );
    Section {
        title: "BaZi Rule Analysis".into(),
        body: b,
    }
}

fn pattern_label(kind: &PatternKind) -> String {
    match kind {
        PatternKind::Regular(g) => format!("{} pattern ({})", g.english(), kind.glyphs()),
        PatternKind::Follower(v) => {
            let name = match v {
                crate::analysis::FollowerVariant::Output => "Follows Output",
                crate::analysis::FollowerVariant::Wealth => "Follows Wealth",
                crate::analysis::FollowerVariant::Officer => "Follows Power",
            };
            format!("{name} pattern ({})", kind.glyphs())
        }
        PatternKind::Special(_) => format!("Dominant-element pattern ({})", kind.glyphs()),
    }
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

fn reasoning_section(
    inputs: &PersonaInputs,
    options: &PromptOptions,
    year: i32,
) -> Result<Section, PersonaError> {
    let (chart, bundle) = (inputs.chart, inputs.bundle);
    let mut b = String::new();
    let direction = cycles::luck_direction(chart.year.stem(), chart.gender);
    let _ = write!(b, "Luck pillars run {:?} from the month pillar:", direction);
    for l in inputs.luck {
        let _ = write!(
            b,
            "\n- {}. from age {:.1} ({}): {}",
            l.ordinal,
            l.start_age_years,
            l.start_civil_year,
            pinyin(l.pillar)
        );
    }
    let flowing = flowing_year(year, chart.civil.utc_offset_minutes)?;
    let _ = write!(
        b,
        "\nReference year {year}: flowing year {}",
        pinyin(flowing.pillar)
    );
    if let Some(l) = luck_pillar_for_year(inputs.luck, year) {
        let _ = write!(b, ", within luck pillar {}", pinyin(l.pillar));
    }
    let mid_year = CivilDateTime::new(year, 7, 1, 12, 0, chart.civil.utc_offset_minutes)?;
    for (on, g, label) in [
        (options.flowing_month, Granularity::Month, "month"),
        (options.flowing_day, Granularity::Day, "day"),
    ] {
        if on {
            let f = cycles::flowing_pillar(g, &mid_year, &chart.location, &chart.config)?;
            let _ = write!(b, "\nFlowing {label} at {year}-07-01: {}", pinyin(f.pillar));
        }
    }
    let found = cycles::interactions(chart, &flowing.pillar, &Default::default());
    if found.is_empty() {
        b.push_str("\nInteractions with the natal chart: none");
    } else {
        let items: Vec<_> = found
            .iter()
            .map(|i| {
                let at: Vec<_> = i.natal.iter().map(|p| p.name()).collect();
                format!("{:?} {} ({} pillar)", i.kind, i.symbols, at.join("+"))
            })
            .collect();
        let _ = write!(
            b,
            "\nInteractions with the natal chart: {}",
            items.join("; ")
        );
    }
    let traits: Vec<_> = personality_features(bundle, &inputs.assets.lexicon)
        .into_iter()
        .map(|t| t.tag)
        .collect();
    let _ = write!(b, "\nLong-term traits: {}", traits.join(", "));
    Ok(Section {
        title: "BaZi Reasoning".into(),
        body: b,
    })
}

fn scenario_section(
    inputs: &PersonaInputs,
    domains: &[ScenarioDomain],
    year: i32,
) -> Result<Section, PersonaError> {
    let mut b = String::new();
    for (i, d) in domains.iter().enumerate() {
        let entry = inputs.assets.domains.entry(*d)?;
        let state = scenario_state(inputs.chart, inputs.bundle, inputs.luck, entry, year)?;
        let present: Vec<String> = inputs
            .bundle
            .ten_gods
            .iter()
            .flat_map(|g| g.stem_god.into_iter().chain(Some(g.branch_god)))
            .filter(|g| entry.ten_gods.iter().any(|n| n == g.glyphs()))
            .map(|g| g.to_string())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let drivers: Vec<_> = state
            .drivers
            .iter()
            .map(|dr| match dr.element {
                Some(e) => format!("{} {e} {:?}", dr.symbol, dr.effect),
                None => format!("clash {}", dr.symbol),
            })
            .collect();
        if i > 0 {
            b.push('\n');
        }
        let _ = write!(
            b,
            "- {d} ({}; key pillar {}): {:?} in {year}. Drivers: {}. Related Ten Gods in the chart: {}",
            entry.focus,
            entry.key_pillar.name(),
            state.valence,
            drivers.join(", "),
            if present.is_empty() { "none".to_string() } else { present.join(", ") }
        );
    }
    Ok(Section {
        title: "Scenario Interpretation".into(),
        body: b,
    })
}

pub fn render_prompt(
    inputs: &PersonaInputs,
    domains: &[ScenarioDomain],
    question: Option<&QuestionContext>,
    options: &PromptOptions,
) -> Result<PersonaPrompt, PersonaError> {
    if !TEMPLATE_VERSIONS.contains(&options.template_version.as_str()) {
        return Err(PersonaError::UnknownTemplate(
            options.template_version.clone(),
        ));
    }
    if let Some(q) = question {
        if !(2..=8).contains(&q.choices.len()) {
            return Err(PersonaError::ChoiceCount(q.choices.len()));
        }
    }
    let year = reference_year(inputs.chart, options);
    let mut sections = vec![birth_section(inputs.chart, options)];
    match options.variant {
        PromptVariant::ChartOnly => sections.push(Section {
            title: "BaZi Chart".into(),
            body: pillars_block(inputs.chart),
        }),
        PromptVariant::ChartWithKnowledge => {
            sections.push(Section {
                title: "BaZi Chart".into(),
                body: pillars_block(inputs.chart),
            });
            sections.push(Section {
                title: "BaZi Rule Knowledge".into(),
                body: RULE_KNOWLEDGE_V1.trim_end().to_string(),
            });
        }
        PromptVariant::Full => {
            sections.push(rule_analysis_section(inputs));
            sections.push(reasoning_section(inputs, options, year)?);
            sections.push(scenario_section(inputs, domains, year)?);
        }
    }
    if let Some(notes) = &options.knowledge_notes {
        sections.push(Section {
            title: "Knowledge Notes".into(),
            body: notes.trim_end().to_string(),
        });
    }

    let mut text = String::new();
    for s in &sections {
        let _ = write!(text, "## {}\n{}\n\n", s.title, s.body);
    }
    if let Some(q) = question {
        let _ = writeln!(text, "## Question\n{}", q.text);
        for (i, c) in q.choices.iter().enumerate() {
            let _ = writeln!(text, "{}. {}", choice_letter(i), c);
        }
        let _ = writeln!(
            text,
            "\nReply with the letter of the single best choice (A-{}).",
            choice_letter(q.choices.len() - 1)
        );
    }
    Ok(PersonaPrompt {
        template_version: options.template_version.clone(),
        variant: options.variant,
        content_hash: content_hash(&text),
        rendered_text: text,
        sections,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn drv(effect: Effect, weight: f64) -> Driver {
        Driver {
            kind: DriverKind::FlowingYearStem,
            symbol: "甲".into(),
            element: Some(Element::Wood),
            weight,
            effect,
        }
    }

    #[test]
    fn tie_is_neutral_and_clash_downgrades() {
        assert_eq!(
            valence_of(&[drv(Effect::Favorable, 1.0), drv(Effect::Unfavorable, 1.0)]),
            Valence::Neutral
        );
        assert_eq!(
            valence_of(&[drv(Effect::Favorable, 1.0)]),
            Valence::Supportive
        );
        assert_eq!(
            valence_of(&[drv(Effect::Favorable, 1.0), drv(Effect::Clash, 0.0)]),
            Valence::Neutral
        );
        assert_eq!(
            valence_of(&[drv(Effect::Clash, 0.0), drv(Effect::Clash, 0.0)]),
            Valence::Adverse
        );
        assert_eq!(valence_of(&[]), Valence::Neutral);
    }

    #[test]
    fn domains_parse() {
        assert_eq!(
            "career".parse::<ScenarioDomain>().unwrap(),
            ScenarioDomain::Career
        );
        assert!("luck".parse::<ScenarioDomain>().is_err());
    }

    #[test]
    fn signed_has_no_negative_zero() {
        assert_eq!(signed(-0.001), "+0.00");
        assert_eq!(signed(-1.234), "-1.23");
    }
}
