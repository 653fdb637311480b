//! Four Pillars chart construction.
//!
//! Year and month pillars are decided on the absolute instant against solar
//! term instants (year at 立春, months at each 節). Day and hour pillars use the
//! local solar wall reading.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calendrics::{
    self, from_julian_date, julian_day_number, CalendricsError, CivilDateTime, GeoLocation,
    SolarInstant, SolarTimeMode,
};
use crate::symbols::{Branch, Element, PerElement, Pillar, Polarity, Stem};

pub const CHART_SCHEMA: &str = "bazi-chart/1";

/// `(floor(JDN) + DAY_ANCHOR_OFFSET) mod 60` is the day's sexagenary number.
/// Calibrated on 2000-01-01 (JDN 2451545) = 戊午 (54) and checked against
/// two perpetual calendars at a dozen dates between 1900 and 2030.
pub const DAY_ANCHOR_OFFSET: i64 = 49;

/// 1984 opens a 甲子 year; year pillars count from 4 CE ≡ 1984 (mod 60).
pub const YEAR_ANCHOR: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gender {
    Male,
    Female,
}

impl std::str::FromStr for Gender {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "m" | "male" => Ok(Gender::Male),
            "f" | "female" => Ok(Gender::Female),
            other => Err(format!("unknown gender {other:?} (m|f)")),
        }
    }
}

impl fmt::Display for Gender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gender::Male => "Male",
            Gender::Female => "Female",
        })
    }
}

/// Which day a birth between 23:00 and 24:00 belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LateZiPolicy {
    /// The 子 hour opens the next day (早子/晚子 not distinguished).
    #[default]
    NextDayForLateZi,
    /// The calendar day is kept; the hour stem follows the same day.
    SameDay,
}

impl std::str::FromStr for LateZiPolicy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "next_day" | "next-day" | "NextDayForLateZi" => Ok(Self::NextDayForLateZi),
            "same_day" | "same-day" | "SameDay" => Ok(Self::SameDay),
            other => Err(format!(
                "unknown late-zi policy {other:?} (next_day|same_day)"
            )),
        }
    }
}

impl fmt::Display for LateZiPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::NextDayForLateZi => "next_day",
            Self::SameDay => "same_day",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ChartConfig {
    pub late_zi: LateZiPolicy,
    pub solar_time: SolarTimeMode,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{stage}: {source}")]
pub struct ChartError {
    pub stage: &'static str,
    #[source]
    pub source: CalendricsError,
}

fn at(stage: &'static str) -> impl FnOnce(CalendricsError) -> ChartError {
    move |source| ChartError { stage, source }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourPillarsChart {
    pub year: Pillar,
    pub month: Pillar,
    pub day: Pillar,
    pub hour: Pillar,
    pub day_master: Stem,
    pub gender: Gender,
    pub birth: SolarInstant,
    pub civil: CivilDateTime,
    pub location: GeoLocation,
    pub late_zi_applied: bool,
    pub config: ChartConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PillarPosition {
    Year,
    Month,
    Day,
    Hour,
}

impl PillarPosition {
    pub const ALL: [PillarPosition; 4] = [Self::Year, Self::Month, Self::Day, Self::Hour];

    pub fn name(self) -> &'static str {
        match self {
            Self::Year => "year",
            Self::Month => "month",
            Self::Day => "day",
            Self::Hour => "hour",
        }
    }
}

impl FourPillarsChart {
    /// A chart from four pillars alone, for table-driven analysis. Birth
    /// fields hold the J2000 epoch at Greenwich and carry no meaning.
    pub fn synthetic(pillars: [Pillar; 4], gender: Gender) -> FourPillarsChart {
        let civil = CivilDateTime {
            year: 2000,
            month: 1,
            day: 1,
            hour: 12,
            minute: 0,
            utc_offset_minutes: 0,
        };
        FourPillarsChart {
            year: pillars[0],
            month: pillars[1],
            day: pillars[2],
            hour: pillars[3],
            day_master: pillars[2].stem(),
            gender,
            birth: SolarInstant::from_jd(calendrics::J2000, 0),
            civil,
            location: GeoLocation {
                longitude_deg_east: 0.0,
                latitude_deg_north: 51.48,
            },
            late_zi_applied: false,
            config: ChartConfig::default(),
        }
    }

    pub fn pillar(&self, pos: PillarPosition) -> Pillar {
        match pos {
            PillarPosition::Year => self.year,
            PillarPosition::Month => self.month,
            PillarPosition::Day => self.day,
            PillarPosition::Hour => self.hour,
        }
    }

    pub fn pillars(&self) -> [(PillarPosition, Pillar); 4] {
        PillarPosition::ALL.map(|p| (p, self.pillar(p)))
    }

    /// The eight glyphs, e.g. `丙午 戊戌 辛亥 戊子`.
    pub fn eight_characters(&self) -> String {
        self.pillars()
            .iter()
            .map(|(_, p)| p.glyphs())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Lichun-adjusted Gregorian year of an instant.
pub fn bazi_year(instant: &SolarInstant) -> Result<i32, CalendricsError> {
    let g = from_julian_date(instant.jd_utc, 0).year;
    if instant.jd_utc < calendrics::term_jd(g, 0)? {
        Ok(g - 1)
    } else {
        Ok(g)
    }
}

pub fn year_pillar(instant: &SolarInstant) -> Result<Pillar, CalendricsError> {
    let year = bazi_year(instant)?;
    Ok(Pillar::from_sexagenary((year - YEAR_ANCHOR) as i64))
}

/// Number of the BaZi month (0 = 寅 month) within its BaZi year, and that year.
pub fn month_number(instant: &SolarInstant) -> Result<(i32, usize), CalendricsError> {
    let year = bazi_year(instant)?;
    // latest jie first, so early-window dates never query terms before the window
    for m in (1..12).rev() {
        if instant.jd_utc >= calendrics::term_jd(year, 2 * m)? {
            return Ok((year, m));
        }
    }
    Ok((year, 0))
}

/// Five Tigers rule (五虎遁): 甲己之年丙作首, advancing one stem per month.
pub fn month_pillar(instant: &SolarInstant, year_stem: Stem) -> Result<Pillar, CalendricsError> {
    let (_, k) = month_number(instant)?;
    let first_stem = ((year_stem.index() % 5) * 2 + 2) % 10;
    let stem = Stem::wrapping(first_stem as i64 + k as i64);
    let branch = Branch::wrapping(2 + k as i64);
    Ok(Pillar::new(stem, branch).expect("five tigers keeps parity"))
}

/// Local day used for the day pillar after applying the late-Zi policy.
pub fn pillar_day_jdn(instant: &SolarInstant, policy: LateZiPolicy) -> (i64, bool) {
    let local = instant.local_true_solar;
    let jdn = julian_day_number(local.year, local.month, local.day);
    if policy == LateZiPolicy::NextDayForLateZi && local.hour == 23 {
        (jdn + 1, true)
    } else {
        (jdn, false)
    }
}

pub fn day_pillar(instant: &SolarInstant, policy: LateZiPolicy) -> Result<Pillar, CalendricsError> {
    instant.local_true_solar.validate()?;
    let (jdn, _) = pillar_day_jdn(instant, policy);
    Ok(Pillar::from_sexagenary(jdn + DAY_ANCHOR_OFFSET))
}

/// Two-hour branch of a local hour: 23:00–00:59 → 子, 01:00–02:59 → 丑, …
pub fn hour_branch(hour: u8) -> Branch {
    Branch::wrapping(((hour as i64 + 1) % 24) / 2)
}

/// Five Rats rule (五鼠遁): 甲己还加甲, advancing one stem per two-hour branch.
pub fn hour_pillar(instant: &SolarInstant, day_stem: Stem) -> Result<Pillar, CalendricsError> {
    instant.local_true_solar.validate()?;
    let branch = hour_branch(instant.local_true_solar.hour);
    let stem = Stem::wrapping(((day_stem.index() % 5) * 2) as i64 + branch.index() as i64);
    Ok(Pillar::new(stem, branch).expect("five rats keeps parity"))
}

pub fn build_chart(
    birth: &CivilDateTime,
    loc: &GeoLocation,
    gender: Gender,
    config: &ChartConfig,
) -> Result<FourPillarsChart, ChartError> {
    birth.validate().map_err(at("input"))?;
    loc.validate().map_err(at("input"))?;
    let instant = calendrics::solar_time_with_mode(birth, loc, config.solar_time)
        .map_err(at("solar time"))?;
    chart_from_instant(&instant, *birth, *loc, gender, config)
}

/// Builds a chart from an already-corrected instant.
pub fn chart_from_instant(
    instant: &SolarInstant,
    civil: CivilDateTime,
    location: GeoLocation,
    gender: Gender,
    config: &ChartConfig,
) -> Result<FourPillarsChart, ChartError> {
    let year = year_pillar(instant).map_err(at("year pillar"))?;
    let month = month_pillar(instant, year.stem()).map_err(at("month pillar"))?;
    let day = day_pillar(instant, config.late_zi).map_err(at("day pillar"))?;
    let hour = hour_pillar(instant, day.stem()).map_err(at("hour pillar"))?;
    let (_, late_zi_applied) = pillar_day_jdn(instant, config.late_zi);
    Ok(FourPillarsChart {
        year,
        month,
        day,
        hour,
        day_master: day.stem(),
        gender,
        birth: *instant,
        civil,
        location,
        late_zi_applied,
        config: *config,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementTally {
    /// Counts over the eight visible symbols.
    pub visible: PerElement<u32>,
    /// Stems at full weight plus each branch's hidden stems at their weights.
    pub hidden_weighted: PerElement<f64>,
}

impl ElementTally {
    pub fn dominant(&self) -> Element {
        // ties resolve to the earlier element
        Element::ALL.into_iter().fold(Element::Wood, |best, e| {
            if self.hidden_weighted[e] > self.hidden_weighted[best] + 1e-12 {
                e
            } else {
                best
            }
        })
    }

    /// Elements with no visible symbol.
    pub fn missing(&self) -> Vec<Element> {
        Element::ALL
            .into_iter()
            .filter(|&e| self.visible[e] == 0)
            .collect()
    }
}

pub fn element_tally(chart: &FourPillarsChart) -> ElementTally {
    let mut visible = PerElement::<u32>::default();
    let mut hidden = PerElement::<f64>::default();
    for (_, p) in chart.pillars() {
        visible[p.stem().element()] += 1;
        visible[p.branch().element()] += 1;
        hidden[p.stem().element()] += 1.0;
        for (s, w) in p.branch().hidden_stems() {
            hidden[s.element()] += w;
        }
    }
    ElementTally {
        visible,
        hidden_weighted: hidden,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymbolView {
    pub index: u8,
    pub glyph: String,
    pub pinyin: String,
    pub element: Element,
    pub polarity: Polarity,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HiddenStemView {
    pub glyph: String,
    pub element: Element,
    pub weight: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PillarView {
    pub sexagenary_index: u8,
    pub glyphs: String,
    pub stem: SymbolView,
    pub branch: SymbolView,
    pub hidden_stems: Vec<HiddenStemView>,
}

impl From<Pillar> for PillarView {
    fn from(p: Pillar) -> Self {
        let s = p.stem();
        let b = p.branch();
        PillarView {
            sexagenary_index: p.sexagenary_index(),
            glyphs: p.glyphs(),
            stem: SymbolView {
                index: s.index(),
                glyph: s.glyph().to_string(),
                pinyin: s.pinyin().to_string(),
                element: s.element(),
                polarity: s.polarity(),
            },
            branch: SymbolView {
                index: b.index(),
                glyph: b.glyph().to_string(),
                pinyin: b.pinyin().to_string(),
                element: b.element(),
                polarity: b.polarity(),
            },
            hidden_stems: b
                .hidden_stems()
                .map(|(hs, w)| HiddenStemView {
                    glyph: hs.glyph().to_string(),
                    element: hs.element(),
                    weight: w,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PillarsView {
    pub year: PillarView,
    pub month: PillarView,
    pub day: PillarView,
    pub hour: PillarView,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BirthView {
    pub civil: String,
    pub utc_offset_minutes: i32,
    pub longitude_deg_east: f64,
    pub latitude_deg_north: f64,
    pub jd_utc: f64,
    pub utc: String,
    pub local_solar: String,
}

/// Versioned, self-describing chart document (the `chart` CLI output).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChartDocument {
    pub schema: String,
    pub eight_characters: String,
    pub pillars: PillarsView,
    pub day_master: SymbolView,
    pub gender: Gender,
    pub birth: BirthView,
    pub late_zi_applied: bool,
    pub config: ChartConfigEcho,
    pub element_tally: ElementTally,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChartConfigEcho {
    pub late_zi_policy: LateZiPolicy,
    pub solar_time: SolarTimeMode,
}

impl ChartDocument {
    pub fn new(chart: &FourPillarsChart) -> Self {
        let dm = PillarView::from(chart.day).stem;
        ChartDocument {
            schema: CHART_SCHEMA.to_string(),
            eight_characters: chart.eight_characters(),
            pillars: PillarsView {
                year: chart.year.into(),
                month: chart.month.into(),
                day: chart.day.into(),
                hour: chart.hour.into(),
            },
            day_master: dm,
            gender: chart.gender,
            birth: BirthView {
                civil: chart.civil.to_string(),
                utc_offset_minutes: chart.civil.utc_offset_minutes,
                longitude_deg_east: chart.location.longitude_deg_east,
                latitude_deg_north: chart.location.latitude_deg_north,
                jd_utc: chart.birth.jd_utc,
                utc: calendrics::format_utc_iso(chart.birth.jd_utc),
                local_solar: chart.birth.local_true_solar.to_string(),
            },
            late_zi_applied: chart.late_zi_applied,
            config: ChartConfigEcho {
                late_zi_policy: chart.config.late_zi,
                solar_time: chart.config.solar_time,
            },
            element_tally: element_tally(chart),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn instant(y: i32, mo: u8, d: u8, h: u8, mi: u8) -> SolarInstant {
        let c = CivilDateTime::new(y, mo, d, h, mi, 480).unwrap();
        SolarInstant::from_jd(calendrics::to_julian_date(&c).unwrap(), 480)
    }

    #[test]
    fn year_pillar_anchor_and_lichun_boundary() {
        assert_eq!(
            year_pillar(&instant(1984, 6, 1, 12, 0)).unwrap().glyphs(),
            "甲子"
        );
        assert_eq!(
            year_pillar(&instant(1966, 10, 18, 12, 0)).unwrap().glyphs(),
            "丙午"
        );
        assert_eq!(
            year_pillar(&instant(1966, 1, 20, 12, 0)).unwrap().glyphs(),
            "乙巳"
        );
    }

    #[test]
    fn five_tigers_first_month() {
        // 1984 is a 甲 year; mid-February is the 寅 month
        let i = instant(1984, 2, 20, 12, 0);
        let y = year_pillar(&i).unwrap();
        assert_eq!(y.stem().glyph(), '甲');
        assert_eq!(month_pillar(&i, y.stem()).unwrap().glyphs(), "丙寅");
        // the rule for every year stem: 甲己丙, 乙庚戊, 丙辛庚, 丁壬壬, 戊癸甲
        let firsts: Vec<char> = Stem::all()
            .map(|s| month_pillar(&i, s).unwrap().stem().glyph())
            .collect();
        assert_eq!(
            firsts,
            ['丙', '戊', '庚', '壬', '甲', '丙', '戊', '庚', '壬', '甲']
        );
    }

    #[test]
    fn hour_table() {
        assert_eq!(hour_branch(23).glyph(), '子');
        assert_eq!(hour_branch(0).glyph(), '子');
        assert_eq!(hour_branch(1).glyph(), '丑');
        assert_eq!(hour_branch(11).glyph(), '午');
        assert_eq!(hour_branch(12).glyph(), '午');
        assert_eq!(hour_branch(13).glyph(), '未');
        let jia = Stem::from_glyph('甲').unwrap();
        assert_eq!(
            hour_pillar(&instant(2000, 1, 1, 0, 30), jia)
                .unwrap()
                .glyphs(),
            "甲子"
        );
        // 乙庚丙作初, 丙辛从戊起, 丁壬庚子居, 戊癸何方发 壬子是真途
        let zi: String = Stem::all()
            .map(|s| {
                hour_pillar(&instant(2000, 1, 1, 0, 30), s)
                    .unwrap()
                    .stem()
                    .glyph()
            })
            .collect();
        assert_eq!(zi, "甲丙戊庚壬甲丙戊庚壬");
    }

    #[test]
    fn late_zi_policies() {
        let i = instant(1966, 10, 18, 23, 15);
        assert_eq!(
            day_pillar(&i, LateZiPolicy::NextDayForLateZi)
                .unwrap()
                .glyphs(),
            "辛亥"
        );
        assert_eq!(
            day_pillar(&i, LateZiPolicy::SameDay).unwrap().glyphs(),
            "庚戌"
        );
        let next = instant(1966, 10, 19, 12, 0);
        assert_eq!(
            day_pillar(&next, LateZiPolicy::SameDay).unwrap().glyphs(),
            "辛亥"
        );
    }

    #[test]
    fn tally_of_repeated_jia_yin() {
        let p = Pillar::parse("甲寅").unwrap();
        let base = build_chart(
            &CivilDateTime::new(1984, 6, 1, 12, 0, 480).unwrap(),
            &GeoLocation::new(120.0, 30.0).unwrap(),
            Gender::Male,
            &ChartConfig::default(),
        )
        .unwrap();
        let chart = FourPillarsChart {
            year: p,
            month: p,
            day: p,
            hour: p,
            day_master: p.stem(),
            ..base
        };
        let t = element_tally(&chart);
        assert_eq!(t.visible.wood, 8);
        assert_eq!(t.visible.iter().map(|(_, c)| c).sum::<u32>(), 8);
        let total: f64 = t.hidden_weighted.iter().map(|(_, w)| w).sum();
        assert!((total - 8.0).abs() < 1e-9);
        assert!((t.hidden_weighted.wood - (4.0 + 4.0 * 0.6)).abs() < 1e-9);
        assert_eq!(t.dominant(), Element::Wood);
    }

    #[test]
    fn stage_labels_on_errors() {
        let err = build_chart(
            &CivilDateTime::new(1850, 6, 1, 12, 0, 0).unwrap(),
            &GeoLocation::new(0.0, 0.0).unwrap(),
            Gender::Female,
            &ChartConfig::default(),
        )
        .unwrap_err();
        assert_eq!(err.stage, "solar time");
        assert!(err.to_string().starts_with("solar time:"));
    }
}
