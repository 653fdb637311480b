mod common;

use bazi_core::calendrics::*;
use bazi_core::chart::*;
use bazi_core::symbols::Pillar;
use common::PERPETUAL_DAYS;
use proptest::prelude::*;

fn hong_kong() -> GeoLocation {
    GeoLocation::new(114.17, 22.3).unwrap()
}

fn off_config(late_zi: LateZiPolicy) -> ChartConfig {
    ChartConfig {
        late_zi,
        solar_time: SolarTimeMode::Off,
    }
}

fn at_utc(jd: f64) -> SolarInstant {
    SolarInstant::from_jd(jd, 480)
}

#[test]
fn perpetual_calendar_dates() {
    let loc = GeoLocation::new(120.0, 30.0).unwrap();
    for &(y, m, d, day, year, month) in PERPETUAL_DAYS.iter() {
        let birth = CivilDateTime::new(y, m, d, 12, 0, 480).unwrap();
        let chart = build_chart(&birth, &loc, Gender::Male, &ChartConfig::default()).unwrap();
        assert_eq!(chart.day.glyphs(), day, "{y}-{m}-{d} day");
        assert_eq!(chart.year.glyphs(), year, "{y}-{m}-{d} year");
        assert_eq!(chart.month.glyphs(), month, "{y}-{m}-{d} month");
    }
}

#[test]
fn sample_chart_under_both_late_zi_policies() {
    let birth = CivilDateTime::new(1966, 10, 18, 23, 15, 480).unwrap();
    for solar_time in [SolarTimeMode::Off, SolarTimeMode::TrueSolar] {
        let next = ChartConfig {
            late_zi: LateZiPolicy::NextDayForLateZi,
            solar_time,
        };
        let chart = build_chart(&birth, &hong_kong(), Gender::Female, &next).unwrap();
        assert_eq!(
            chart.eight_characters(),
            "丙午 戊戌 辛亥 戊子",
            "{solar_time}"
        );
        assert!(chart.late_zi_applied);
        assert_eq!(chart.config, next);

        let same = ChartConfig {
            late_zi: LateZiPolicy::SameDay,
            solar_time,
        };
        let chart = build_chart(&birth, &hong_kong(), Gender::Female, &same).unwrap();
        assert_eq!(
            chart.eight_characters(),
            "丙午 戊戌 庚戌 丙子",
            "{solar_time}"
        );
        assert!(!chart.late_zi_applied);
    }
}

#[test]
fn chart_document_echoes_config() {
    let birth = CivilDateTime::new(1966, 10, 18, 23, 15, 480).unwrap();
    let chart = build_chart(
        &birth,
        &hong_kong(),
        Gender::Female,
        &ChartConfig::default(),
    )
    .unwrap();
    let doc = serde_json::to_value(ChartDocument::new(&chart)).unwrap();
    assert_eq!(doc["schema"], CHART_SCHEMA);
    assert_eq!(doc["config"]["late_zi_policy"], "NextDayForLateZi");
    assert_eq!(doc["config"]["solar_time"], "true_solar");
    assert_eq!(doc["pillars"]["year"]["glyphs"], "丙午");
    assert_eq!(doc["pillars"]["hour"]["branch"]["glyph"], "子");
    assert_eq!(doc["day_master"]["glyph"], "辛");
    assert_eq!(doc["birth"]["civil"], "1966-10-18T23:15");
}

#[test]
fn mean_solar_moves_sample_into_hai_hour() {
    // 114.17E is 23.3 minutes behind the zone meridian; only the equation of time keeps 23:15 in 子
    let birth = CivilDateTime::new(1966, 10, 18, 23, 15, 480).unwrap();
    let cfg = ChartConfig {
        late_zi: LateZiPolicy::NextDayForLateZi,
        solar_time: SolarTimeMode::MeanSolar,
    };
    let chart = build_chart(&birth, &hong_kong(), Gender::Female, &cfg).unwrap();
    assert_eq!(chart.eight_characters(), "丙午 戊戌 庚戌 丁亥");
}

#[test]
fn month_of_sample_is_xu() {
    let birth = CivilDateTime::new(1966, 10, 18, 12, 0, 480).unwrap();
    let chart = build_chart(&birth, &hong_kong(), Gender::Male, &ChartConfig::default()).unwrap();
    assert_eq!(chart.month.branch().index(), 10);
}

#[test]
fn jie_boundary_one_second_each_side() {
    for year in [1901, 1950, 1966, 2000, 2024, 2099] {
        for idx in (0..24).step_by(2) {
            let jd = term_jd(year, idx).unwrap();
            let eps = 1.0 / 86_400.0;
            let before = at_utc(jd - eps);
            let after = at_utc(jd + eps);
            let yb = year_pillar(&before).unwrap();
            let ya = year_pillar(&after).unwrap();
            let mb = month_pillar(&before, yb.stem()).unwrap();
            let ma = month_pillar(&after, ya.stem()).unwrap();
            assert_eq!(ma, mb.offset(1), "{year} term {idx}");
            assert_eq!((mb.branch().index() + 1) % 12, ma.branch().index());
            if idx == 0 {
                assert_eq!(ya, yb.offset(1), "{year} lichun");
            } else {
                assert_eq!(ya, yb);
            }
        }
    }
}

#[test]
fn sixty_consecutive_days_are_distinct_and_ordered() {
    let start = to_julian_date(&CivilDateTime::new(1999, 12, 1, 12, 0, 480).unwrap()).unwrap();
    let mut seen = std::collections::BTreeSet::new();
    let mut prev: Option<Pillar> = None;
    for d in 0..60 {
        let p = day_pillar(&at_utc(start + d as f64), LateZiPolicy::NextDayForLateZi).unwrap();
        if let Some(q) = prev {
            assert_eq!(p, q.offset(1));
        }
        seen.insert(p.sexagenary_index());
        prev = Some(p);
    }
    assert_eq!(seen.len(), 60);
}

#[test]
fn one_minute_apart_and_gender_swap() {
    let a = CivilDateTime::new(1988, 3, 9, 14, 20, 480).unwrap();
    let b = CivilDateTime::new(1988, 3, 9, 14, 21, 480).unwrap();
    let loc = GeoLocation::new(120.0, 30.0).unwrap();
    let cfg = ChartConfig::default();
    let ca = build_chart(&a, &loc, Gender::Male, &cfg).unwrap();
    let cb = build_chart(&b, &loc, Gender::Male, &cfg).unwrap();
    assert_eq!(ca.eight_characters(), cb.eight_characters());
    let cf = build_chart(&a, &loc, Gender::Female, &cfg).unwrap();
    assert_eq!(ca.pillars(), cf.pillars());
}

#[test]
fn invalid_input_is_stage_labelled() {
    let birth = CivilDateTime {
        year: 2000,
        month: 2,
        day: 30,
        hour: 0,
        minute: 0,
        utc_offset_minutes: 0,
    };
    let err = build_chart(&birth, &hong_kong(), Gender::Male, &ChartConfig::default()).unwrap_err();
    assert_eq!(err.stage, "input");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn pillars_keep_parity_and_day_cycles(minutes in 0i64..(200 * 365 * 1440), late in any::<bool>()) {
        let jd = to_julian_date(&CivilDateTime::new(1900, 3, 1, 0, 0, 480).unwrap()).unwrap()
            + minutes as f64 / 1440.0;
        let policy = if late { LateZiPolicy::NextDayForLateZi } else { LateZiPolicy::SameDay };
        let inst = at_utc(jd);
        let chart = chart_from_instant(
            &inst,
            inst.local_true_solar,
            GeoLocation::new(120.0, 30.0).unwrap(),
            Gender::Male,
            &off_config(policy),
        ).unwrap();
        for (_, p) in chart.pillars() {
            prop_assert_eq!(p.stem().polarity(), p.branch().polarity());
        }
        prop_assert_eq!(chart.day_master, chart.day.stem());
        // sixty days later, same day pillar unless the late-Zi window moves the day
        let later = at_utc(jd + 60.0);
        prop_assert_eq!(day_pillar(&later, policy).unwrap(), chart.day);
        let next = at_utc(jd + 1.0);
        prop_assert_eq!(day_pillar(&next, policy).unwrap(), chart.day.offset(1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn build_chart_is_referentially_transparent(
        y in 1901i32..2099, mo in 1u8..=12, d in 1u8..=28, h in 0u8..24, mi in 0u8..60,
        lon in -180.0f64..180.0, lat in -89.0f64..89.0, off in -720i32..=840,
    ) {
        let birth = CivilDateTime::new(y, mo, d, h, mi, off).unwrap();
        let loc = GeoLocation::new(lon, lat).unwrap();
        let a = build_chart(&birth, &loc, Gender::Female, &ChartConfig::default()).unwrap();
        let b = build_chart(&birth, &loc, Gender::Female, &ChartConfig::default()).unwrap();
        prop_assert_eq!(
            serde_json::to_string(&ChartDocument::new(&a)).unwrap(),
            serde_json::to_string(&ChartDocument::new(&b)).unwrap()
        );
    }
}
