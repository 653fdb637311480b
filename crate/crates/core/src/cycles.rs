//! Luck pillars (大运), flowing pillars (流年/流月/流日) and their
//! interactions with the natal chart.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calendrics::{
    self, from_julian_date, CalendricsError, CivilDateTime, GeoLocation, SolarInstant,
};
use crate::chart::{self, ChartConfig, FourPillarsChart, Gender, PillarPosition};
use crate::symbols::{Branch, Pillar, Polarity, Stem};

pub const MAX_LUCK_PILLARS: u32 = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CyclesError {
    #[error(transparent)]
    Calendrics(#[from] CalendricsError),
    #[error("luck pillar count must be in 1..={MAX_LUCK_PILLARS}, got {0}")]
    BadCount(u32),
    #[error("year range {0}..={1} is empty")]
    EmptyRange(i32, i32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LuckDirection {
    Forward,
    Backward,
}

impl LuckDirection {
    pub fn step(self) -> i64 {
        match self {
            LuckDirection::Forward => 1,
            LuckDirection::Backward => -1,
        }
    }
}

/// 阳男阴女顺行, 阴男阳女逆行.
pub fn luck_direction(year_stem: Stem, gender: Gender) -> LuckDirection {
    let yang = year_stem.polarity() == Polarity::Yang;
    if yang == (gender == Gender::Male) {
        LuckDirection::Forward
    } else {
        LuckDirection::Backward
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LuckPillar {
    pub ordinal: u32,
    pub pillar: Pillar,
    /// Fractional years; days to the adjacent jie divided by three.
    pub start_age_years: f64,
    pub start_civil_year: i32,
}

/// Days from `jd` to the next jie (Forward, inclusive of `jd`) or back to
/// the last jie at or before `jd` (Backward).
pub fn days_to_adjacent_jie(jd: f64, direction: LuckDirection) -> Result<f64, CalendricsError> {
    let instant = SolarInstant::from_jd(jd, 0);
    let year = chart::bazi_year(&instant)?;
    let mut jie = Vec::with_capacity(13);
    for idx in (0..24).step_by(2) {
        jie.push(calendrics::term_jd(year, idx)?);
    }
    match direction {
        LuckDirection::Forward => {
            let next = match jie.iter().copied().find(|&t| t >= jd) {
                Some(t) => t,
                None => calendrics::term_jd(year + 1, 0)?,
            };
            Ok(next - jd)
        }
        LuckDirection::Backward => {
            let last = jie
                .iter()
                .copied()
                .rfind(|&t| t <= jd)
                .expect("a BaZi year starts at its own 立春");
            Ok(jd - last)
        }
    }
}

pub fn luck_pillars(chart: &FourPillarsChart, count: u32) -> Result<Vec<LuckPillar>, CyclesError> {
    if !(1..=MAX_LUCK_PILLARS).contains(&count) {
        return Err(CyclesError::BadCount(count));
    }
    let direction = luck_direction(chart.year.stem(), chart.gender);
    let start_age = days_to_adjacent_jie(chart.birth.jd_utc, direction)? / 3.0;
    let first_year = chart.civil.year + start_age.floor() as i32;
    Ok((1..=count)
        .map(|k| LuckPillar {
            ordinal: k,
            pillar: chart.month.offset(direction.step() * k as i64),
            start_age_years: start_age + 10.0 * (k - 1) as f64,
            start_civil_year: first_year + 10 * (k as i32 - 1),
        })
        .collect())
}

/// The luck pillar in force during `civil_year`, if the first has started.
pub fn luck_pillar_for_year(luck: &[LuckPillar], civil_year: i32) -> Option<&LuckPillar> {
    luck.iter().rev().find(|l| l.start_civil_year <= civil_year)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Granularity {
    Year,
    Month,
    Day,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowingPillar {
    pub granularity: Granularity,
    /// Local civil start of the period (立春, the month's jie, or midnight).
    pub period_start: CivilDateTime,
    pub pillar: Pillar,
}

pub fn flowing_pillar(
    granularity: Granularity,
    civil: &CivilDateTime,
    loc: &GeoLocation,
    config: &ChartConfig,
) -> Result<FlowingPillar, CalendricsError> {
    let instant = calendrics::solar_time_with_mode(civil, loc, config.solar_time)?;
    let offset = civil.utc_offset_minutes;
    let (pillar, period_start) = match granularity {
        Granularity::Year => {
            let year = chart::bazi_year(&instant)?;
            (
                chart::year_pillar(&instant)?,
                from_julian_date(calendrics::term_jd(year, 0)?, offset),
            )
        }
        Granularity::Month => {
            let year_stem = chart::year_pillar(&instant)?.stem();
            let (year, k) = chart::month_number(&instant)?;
            (
                chart::month_pillar(&instant, year_stem)?,
                from_julian_date(calendrics::term_jd(year, 2 * k)?, offset),
            )
        }
        Granularity::Day => {
            let mut start = *civil;
            start.hour = 0;
            start.minute = 0;
            (chart::day_pillar(&instant, config.late_zi)?, start)
        }
    };
    Ok(FlowingPillar {
        granularity,
        period_start,
        pillar,
    })
}

/// Flowing-year pillar of the BaZi year opening at 立春 of `year`.
pub fn flowing_year(year: i32, utc_offset_minutes: i32) -> Result<FlowingPillar, CalendricsError> {
    let lichun = calendrics::term_jd(year, 0)?;
    Ok(FlowingPillar {
        granularity: Granularity::Year,
        period_start: from_julian_date(lichun, utc_offset_minutes),
        pillar: Pillar::from_sexagenary((year - chart::YEAR_ANCHOR) as i64),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InteractionKind {
    /// 六冲: branches six apart.
    Clash,
    /// 六合: 子丑 寅亥 卯戌 辰酉 巳申 午未.
    SixCombination,
    /// 天干五合: stems five apart.
    StemCombination,
    /// 三合: the outside branch completes a triad with two natal branches.
    ThreeHarmony,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Interaction {
    pub kind: InteractionKind,
    pub natal: Vec<PillarPosition>,
    /// Glyphs involved, natal first then the outside symbol.
    pub symbols: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InteractionOptions {
    pub three_harmony: bool,
}

pub fn is_clash(a: Branch, b: Branch) -> bool {
    (a.index() + 12 - b.index()) % 12 == 6
}

/// The six pairs are exactly those whose indices sum to 1 (mod 12).
pub fn is_six_combination(a: Branch, b: Branch) -> bool {
    (a.index() + b.index()) % 12 == 1
}

pub fn is_stem_combination(a: Stem, b: Stem) -> bool {
    a.index().abs_diff(b.index()) == 5
}

/// Triad index: 申子辰 → 0 (water), 亥卯未 → 1, 寅午戌 → 2, 巳酉丑 → 3.
pub fn triad(b: Branch) -> u8 {
    // members of a triad are four apart
    match b.index() % 4 {
        0 => 0,
        3 => 1,
        2 => 2,
        _ => 3,
    }
}

pub fn interactions(
    chart: &FourPillarsChart,
    outside: &Pillar,
    options: &InteractionOptions,
) -> Vec<Interaction> {
    let mut out = Vec::new();
    let (os, ob) = (outside.stem(), outside.branch());
    for (pos, p) in chart.pillars() {
        let pair = |kind, a: char, b: char| Interaction {
            kind,
            natal: vec![pos],
            symbols: format!("{a}{b}"),
        };
        if is_clash(p.branch(), ob) {
            out.push(pair(InteractionKind::Clash, p.branch().glyph(), ob.glyph()));
        }
        if is_six_combination(p.branch(), ob) {
            out.push(pair(
                InteractionKind::SixCombination,
                p.branch().glyph(),
                ob.glyph(),
            ));
        }
        if is_stem_combination(p.stem(), os) {
            out.push(pair(
                InteractionKind::StemCombination,
                p.stem().glyph(),
                os.glyph(),
            ));
        }
    }
    if options.three_harmony {
        let pillars = chart.pillars();
        for (i, (pa, a)) in pillars.iter().enumerate() {
            for (pb, b) in &pillars[i + 1..] {
                let (x, y) = (a.branch(), b.branch());
                let distinct = x != y && x != ob && y != ob;
                if distinct && triad(x) == triad(ob) && triad(y) == triad(ob) {
                    out.push(Interaction {
                        kind: InteractionKind::ThreeHarmony,
                        natal: vec![*pa, *pb],
                        symbols: format!("{}{}{}", x.glyph(), y.glyph(), ob.glyph()),
                    });
                }
            }
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowingYearEntry {
    pub year: i32,
    pub flowing: FlowingPillar,
    pub luck: Option<LuckPillar>,
    pub interactions: Vec<Interaction>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CyclesReport {
    pub direction: LuckDirection,
    pub luck_pillars: Vec<LuckPillar>,
    pub flowing_years: Vec<FlowingYearEntry>,
}

pub fn cycles_report(
    chart: &FourPillarsChart,
    luck_count: u32,
    years: (i32, i32),
    options: &InteractionOptions,
) -> Result<CyclesReport, CyclesError> {
    if years.0 > years.1 {
        return Err(CyclesError::EmptyRange(years.0, years.1));
    }
    let luck = luck_pillars(chart, luck_count)?;
    let mut flowing_years = Vec::new();
    for year in years.0..=years.1 {
        let flowing = flowing_year(year, chart.civil.utc_offset_minutes)?;
        flowing_years.push(FlowingYearEntry {
            year,
            interactions: interactions(chart, &flowing.pillar, options),
            luck: luck_pillar_for_year(&luck, year).cloned(),
            flowing,
        });
    }
    Ok(CyclesReport {
        direction: luck_direction(chart.year.stem(), chart.gender),
        luck_pillars: luck,
        flowing_years,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(c: char) -> Branch {
        Branch::from_glyph(c).unwrap()
    }

    #[test]
    fn six_combination_table() {
        for pair in ["子丑", "寅亥", "卯戌", "辰酉", "巳申", "午未"] {
            let mut it = pair.chars();
            let (x, y) = (b(it.next().unwrap()), b(it.next().unwrap()));
            assert!(
                is_six_combination(x, y) && is_six_combination(y, x),
                "{pair}"
            );
        }
        let count = Branch::all()
            .flat_map(|x| Branch::all().map(move |y| (x, y)))
            .filter(|&(x, y)| is_six_combination(x, y))
            .count();
        assert_eq!(count, 12);
    }

    #[test]
    fn triads() {
        for group in ["申子辰", "亥卯未", "寅午戌", "巳酉丑"] {
            let t: Vec<u8> = group.chars().map(|c| triad(b(c))).collect();
            assert!(t.iter().all(|&x| x == t[0]), "{group}");
        }
    }
}
