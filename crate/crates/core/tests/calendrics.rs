mod common;

use bazi_core::calendrics::*;
use common::{utc_jd, ALMANAC_TERMS};
use proptest::prelude::*;

fn civil(y: i32, mo: u8, d: u8, h: u8, mi: u8, off: i32) -> CivilDateTime {
    CivilDateTime::new(y, mo, d, h, mi, off).unwrap()
}

#[test]
fn almanac_terms_within_two_minutes() {
    for &(year, index, iso) in ALMANAC_TERMS.iter() {
        let got = solar_term_instant(year, index).unwrap();
        let diff_min = (got.instant.jd_utc - utc_jd(iso)) * 1440.0;
        assert!(
            diff_min.abs() < 2.0,
            "{year} {} expected {iso}, got {} ({diff_min:+.2} min)",
            TERM_NAMES[index],
            format_utc_iso(got.instant.jd_utc)
        );
    }
}

#[test]
fn lichun_1966_on_feb_4_utc() {
    let t = solar_term_instant(1966, 0).unwrap();
    let utc = from_julian_date(t.instant.jd_utc, 0);
    assert_eq!((utc.year, utc.month, utc.day), (1966, 2, 4));
}

#[test]
fn equinox_and_solstice_longitudes() {
    // 2000 March equinox 07:35 UTC, December solstice 13:37 UTC (published)
    let eq = apparent_solar_longitude(utc_jd("2000-03-20T07:35:15")).unwrap();
    assert!(eq.min(360.0 - eq) < 0.01, "equinox longitude {eq}");
    let sol = apparent_solar_longitude(utc_jd("2000-12-21T13:37:30")).unwrap();
    assert!((sol - 270.0).abs() < 0.01, "solstice longitude {sol}");
}

#[test]
fn residual_spacing_and_order_every_year() {
    for year in WINDOW_FIRST_YEAR..=WINDOW_LAST_YEAR {
        let terms = solar_terms_for_year(year).unwrap();
        assert_eq!(terms.len(), 24);
        for t in &terms {
            let l = apparent_solar_longitude(t.instant.jd_utc).unwrap();
            let mut r = (l - t.target_longitude_deg).rem_euclid(360.0);
            if r > 180.0 {
                r -= 360.0;
            }
            assert!(r.abs() < 0.002, "{year} term {} residual {r}", t.index);
        }
        for w in terms.windows(2) {
            let gap = w[1].instant.jd_utc - w[0].instant.jd_utc;
            assert!((14.0..=16.5).contains(&gap), "{year} gap {gap}");
        }
        // the next year's 立春 follows this year's 大寒
        if year < WINDOW_LAST_YEAR {
            let next = solar_term_instant(year + 1, 0).unwrap();
            let gap = next.instant.jd_utc - terms[23].instant.jd_utc;
            assert!((14.0..=16.5).contains(&gap));
        }
    }
}

#[test]
fn equation_of_time_reference_values() {
    // PyMeeus / PyEphem reference values (minutes)
    let cases = [
        ("2000-02-11T00:00:00", -14.23),
        ("2000-11-03T00:00:00", 16.43),
        ("1966-10-18T15:22:00", 14.77),
        ("2024-07-26T00:00:00", -6.55),
        ("1950-04-15T00:00:00", -0.28),
        ("2000-05-14T00:00:00", 3.68),
    ];
    for (iso, expected) in cases {
        let e = equation_of_time(utc_jd(iso)).unwrap();
        assert!((e - expected).abs() < 0.1, "{iso}: {e} vs {expected}");
    }
}

#[test]
fn equation_of_time_bounded_over_a_year() {
    let start = utc_jd("1987-01-01T00:00:00");
    for d in 0..366 {
        let e = equation_of_time(start + d as f64).unwrap();
        assert!(e.abs() < 20.0);
    }
}

#[test]
fn sample_birth_true_solar_time() {
    let hk = GeoLocation::new(114.17, 22.3).unwrap();
    let inst = true_solar_time(&civil(1966, 10, 18, 23, 15, 480), &hk).unwrap();
    let local = inst.local_true_solar;
    assert_eq!(
        (local.year, local.month, local.day, local.hour),
        (1966, 10, 18, 23)
    );
    assert!((6..=8).contains(&local.minute), "{local}");
}

#[test]
fn out_of_window_birth_rejected() {
    let loc = GeoLocation::new(0.0, 51.5).unwrap();
    assert!(true_solar_time(&civil(1850, 6, 1, 12, 0, 0), &loc).is_err());
    assert!(true_solar_time(&civil(2101, 6, 1, 12, 0, 0), &loc).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn civil_julian_round_trip(
        y in 1900i32..=2100, mo in 1u8..=12, d in 1u8..=31, h in 0u8..24, mi in 0u8..60,
        off in -840i32..=840,
    ) {
        prop_assume!(d <= days_in_month(y, mo));
        let c = civil(y, mo, d, h, mi, off);
        let jd = to_julian_date(&c).unwrap();
        prop_assert_eq!(from_julian_date(jd, off), c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn true_solar_time_linear_in_longitude(lon in -170.0f64..170.0, day in 0u32..20_000) {
        let jd = utc_jd("1950-01-01T06:00:00") + day as f64;
        let c = from_julian_date(jd, 0);
        let a = solar_time_with_mode(&c, &GeoLocation::new(lon, 0.0).unwrap(), SolarTimeMode::MeanSolar).unwrap();
        let b = solar_time_with_mode(&c, &GeoLocation::new(lon + 7.5, 0.0).unwrap(), SolarTimeMode::MeanSolar).unwrap();
        let da = to_julian_date(&a.local_true_solar).unwrap();
        let db = to_julian_date(&b.local_true_solar).unwrap();
        // 7.5 degrees is exactly 30 minutes; the readings are floored to the minute
        let diff = (db - da) * 1440.0;
        prop_assert!((diff - 30.0).abs() <= 1.0 + 1e-6, "diff {}", diff);
    }

    #[test]
    fn longitude_monotone_over_one_day(day in 0u32..70_000) {
        let jd = utc_jd("1900-01-02T00:00:00") + day as f64;
        let a = apparent_solar_longitude(jd).unwrap();
        let b = apparent_solar_longitude(jd + 1.0).unwrap();
        let step = (b - a).rem_euclid(360.0);
        prop_assert!(step > 0.9 && step < 1.1);
    }
}
