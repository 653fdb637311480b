//! Julian dates, apparent solar longitude, the 24 solar terms, the equation
//! of time and the true-solar-time correction of a birth instant.
//!
//! The solar longitude is a truncated VSOP87D Earth series with IAU 1980
//! nutation, FK5 frame correction and annual aberration. Terms come out
//! within a few seconds of published almanacs over 1900–2100.

mod series;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// J2000.0 epoch as a Julian Date.
pub const J2000: f64 = 2_451_545.0;

/// First and last Gregorian years accepted for charting.
pub const WINDOW_FIRST_YEAR: i32 = 1900;
pub const WINDOW_LAST_YEAR: i32 = 2100;

// The ephemeris itself is padded so that boundary lookups around the window
// edges (the 小寒 before a January 1900 birth, the 大寒 after a December 2100
// one) still resolve.
const EPHEMERIS_PAD_DAYS: f64 = 62.0;

const MINUTES_PER_DAY: f64 = 1440.0;
const ARCSEC: f64 = 1.0 / 3600.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CalendricsError {
    #[error("invalid calendar date {year:04}-{month:02}-{day:02}")]
    InvalidDate { year: i32, month: u8, day: u8 },
    #[error("invalid time of day {hour:02}:{minute:02}")]
    InvalidTime { hour: u8, minute: u8 },
    #[error("utc offset {0} minutes outside [-840, 840]")]
    InvalidOffset(i32),
    #[error("invalid location: {0}")]
    InvalidLocation(String),
    #[error("julian date {jd} outside the supported {first}-{last} window")]
    OutOfWindow { jd: f64, first: i32, last: i32 },
    #[error("year {0} outside the supported window")]
    YearOutOfWindow(i32),
    #[error("solar term index {0} out of range 0..24")]
    BadTermIndex(usize),
    #[error("solar term {index} of {year} did not converge: {detail}")]
    NoConvergence {
        year: i32,
        index: usize,
        detail: String,
    },
}

/// A wall-clock reading with its fixed UTC offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CivilDateTime {
    pub year: i32,
    pub month: u8,
    pub day: u8,
    pub hour: u8,
    pub minute: u8,
    pub utc_offset_minutes: i32,
}

pub fn is_leap_year(year: i32) -> bool {
    (year % 4 == 0 && year % 100 != 0) || year % 400 == 0
}

pub fn days_in_month(year: i32, month: u8) -> u8 {
    match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 if is_leap_year(year) => 29,
        2 => 28,
        _ => 0,
    }
}

impl CivilDateTime {
    pub fn new(
        year: i32,
        month: u8,
        day: u8,
        hour: u8,
        minute: u8,
        utc_offset_minutes: i32,
    ) -> Result<Self, CalendricsError> {
        let dt = Self {
            year,
            month,
            day,
            hour,
            minute,
            utc_offset_minutes,
        };
        dt.validate()?;
        Ok(dt)
    }

    pub fn validate(&self) -> Result<(), CalendricsError> {
        if !(1..=12).contains(&self.month)
            || self.day == 0
            || self.day > days_in_month(self.year, self.month)
        {
            return Err(CalendricsError::InvalidDate {
                year: self.year,
                month: self.month,
                day: self.day,
            });
        }
        if self.hour > 23 || self.minute > 59 {
            return Err(CalendricsError::InvalidTime {
                hour: self.hour,
                minute: self.minute,
            });
        }
        if !(-840..=840).contains(&self.utc_offset_minutes) {
            return Err(CalendricsError::InvalidOffset(self.utc_offset_minutes));
        }
        Ok(())
    }

    /// Parses `YYYY-MM-DDTHH:MM` (seconds, if present, are ignored).
    pub fn parse_local(text: &str, utc_offset_minutes: i32) -> Result<Self, String> {
        let text = text.trim();
        let (date, time) = text
            .split_once(['T', ' '])
            .ok_or_else(|| format!("expected YYYY-MM-DDTHH:MM, got {text:?}"))?;
        let mut d = date.splitn(3, '-');
        let mut t = time.split(':');
        let num = |s: Option<&str>, what: &str| -> Result<i64, String> {
            s.ok_or_else(|| format!("missing {what} in {text:?}"))?
                .parse::<i64>()
                .map_err(|_| format!("bad {what} in {text:?}"))
        };
        let year = num(d.next(), "year")?;
        let month = num(d.next(), "month")?;
        let day = num(d.next(), "day")?;
        let hour = num(t.next(), "hour")?;
        let minute = num(t.next(), "minute")?;
        if let Some(sec) = t.next() {
            sec.parse::<f64>()
                .map_err(|_| format!("bad seconds in {text:?}"))?;
        }
        let narrow =
            |v: i64| u8::try_from(v).map_err(|_| format!("field out of range in {text:?}"));
        let year = i32::try_from(year).map_err(|_| format!("year out of range in {text:?}"))?;
        Self::new(
            year,
            narrow(month)?,
            narrow(day)?,
            narrow(hour)?,
            narrow(minute)?,
            utc_offset_minutes,
        )
        .map_err(|e| e.to_string())
    }

    /// Same wall reading, shifted by whole days.
    pub fn plus_days(&self, days: i64) -> Self {
        let jdn = julian_day_number(self.year, self.month, self.day) + days;
        let (year, month, day) = civil_from_jdn(jdn);
        Self {
            year,
            month,
            day,
            ..*self
        }
    }

    pub fn in_window(&self) -> bool {
        (WINDOW_FIRST_YEAR..=WINDOW_LAST_YEAR).contains(&self.year)
    }
}

impl fmt::Display for CivilDateTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:04}-{:02}-{:02}T{:02}:{:02}",
            self.year, self.month, self.day, self.hour, self.minute
        )
    }
}

/// Birthplace coordinates. Latitude is carried for the record only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoLocation {
    pub longitude_deg_east: f64,
    pub latitude_deg_north: f64,
}

impl GeoLocation {
    pub fn new(longitude_deg_east: f64, latitude_deg_north: f64) -> Result<Self, CalendricsError> {
        let loc = Self {
            longitude_deg_east,
            latitude_deg_north,
        };
        loc.validate()?;
        Ok(loc)
    }

    pub fn validate(&self) -> Result<(), CalendricsError> {
        if !self.longitude_deg_east.is_finite()
            || !(-180.0..=180.0).contains(&self.longitude_deg_east)
        {
            return Err(CalendricsError::InvalidLocation(format!(
                "longitude {} not in [-180, 180]",
                self.longitude_deg_east
            )));
        }
        if !self.latitude_deg_north.is_finite()
            || !(-90.0..=90.0).contains(&self.latitude_deg_north)
        {
            return Err(CalendricsError::InvalidLocation(format!(
                "latitude {} not in [-90, 90]",
                self.latitude_deg_north
            )));
        }
        Ok(())
    }
}

/// An absolute instant plus the local (possibly solar-corrected) wall reading
/// used for day and hour pillars.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolarInstant {
    pub jd_utc: f64,
    pub local_true_solar: CivilDateTime,
}

impl SolarInstant {
    /// An instant whose local reading is plain civil time at `utc_offset_minutes`.
    pub fn from_jd(jd_utc: f64, utc_offset_minutes: i32) -> Self {
        Self {
            jd_utc,
            local_true_solar: from_julian_date(jd_utc, utc_offset_minutes),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolarTerm {
    pub index: usize,
    pub target_longitude_deg: f64,
    pub instant: SolarInstant,
}

/// Names of the 24 terms starting at 立春.
pub const TERM_NAMES: [&str; 24] = [
    "立春", "雨水", "惊蛰", "春分", "清明", "谷雨", "立夏", "小满", "芒种", "夏至", "小暑", "大暑",
    "立秋", "处暑", "白露", "秋分", "寒露", "霜降", "立冬", "小雪", "大雪", "冬至", "小寒", "大寒",
];

pub fn term_target_longitude(index: usize) -> f64 {
    ((315 + 15 * index) % 360) as f64
}

/// Whether the term opens a BaZi month (節). Even positions from 立春 are jie.
pub fn is_jie(index: usize) -> bool {
    index.is_multiple_of(2)
}

/// Integer Julian Day Number of a Gregorian date (the JD at noon of that day).
pub fn julian_day_number(year: i32, month: u8, day: u8) -> i64 {
    let (y, m, d) = (year as i64, month as i64, day as i64);
    let a = (14 - m) / 12;
    let y = y + 4800 - a;
    let m = m + 12 * a - 3;
    d + (153 * m + 2) / 5 + 365 * y + y.div_euclid(4) - y.div_euclid(100) + y.div_euclid(400)
        - 32045
}

pub fn civil_from_jdn(jdn: i64) -> (i32, u8, u8) {
    let a = jdn + 32044;
    let b = (4 * a + 3).div_euclid(146_097);
    let c = a - 146_097 * b / 4;
    let d = (4 * c + 3).div_euclid(1461);
    let e = c - 1461 * d / 4;
    let m = (5 * e + 2) / 153;
    let day = e - (153 * m + 2) / 5 + 1;
    let month = m + 3 - 12 * (m / 10);
    let year = 100 * b + d - 4800 + m / 10;
    (year as i32, month as u8, day as u8)
}

/// Astronomical Julian Date (UTC) of a civil reading.
pub fn to_julian_date(civil: &CivilDateTime) -> Result<f64, CalendricsError> {
    civil.validate()?;
    let jdn = julian_day_number(civil.year, civil.month, civil.day);
    let minutes = civil.hour as i64 * 60 + civil.minute as i64 - civil.utc_offset_minutes as i64;
    Ok(jdn as f64 - 0.5 + minutes as f64 / MINUTES_PER_DAY)
}

/// Civil reading at `utc_offset_minutes`, rounded to the nearest minute.
pub fn from_julian_date(jd_utc: f64, utc_offset_minutes: i32) -> CivilDateTime {
    let total = ((jd_utc + 0.5) * MINUTES_PER_DAY).round() as i64 + utc_offset_minutes as i64;
    civil_from_minutes(total, utc_offset_minutes)
}

/// Civil reading truncated (not rounded) to the minute. Used for local solar
/// readings so that a reading never rolls into the next hour early.
fn floor_civil(jd_utc: f64, extra_minutes: f64, utc_offset_minutes: i32) -> CivilDateTime {
    // Nudge by a microsecond so exact-minute inputs do not fall one minute short.
    let total = ((jd_utc + 0.5) * MINUTES_PER_DAY + extra_minutes + 1e-6).floor() as i64
        + utc_offset_minutes as i64;
    civil_from_minutes(total, utc_offset_minutes)
}

fn civil_from_minutes(total_minutes: i64, utc_offset_minutes: i32) -> CivilDateTime {
    let jdn = total_minutes.div_euclid(1440);
    let rem = total_minutes.rem_euclid(1440);
    let (year, month, day) = civil_from_jdn(jdn);
    CivilDateTime {
        year,
        month,
        day,
        hour: (rem / 60) as u8,
        minute: (rem % 60) as u8,
        utc_offset_minutes,
    }
}

/// ISO-8601 UTC rendering with seconds, e.g. `2000-03-20T07:35:15Z`.
pub fn format_utc_iso(jd_utc: f64) -> String {
    let total = ((jd_utc + 0.5) * 86_400.0).round() as i64;
    let jdn = total.div_euclid(86_400);
    let rem = total.rem_euclid(86_400);
    let (y, m, d) = civil_from_jdn(jdn);
    format!(
        "{y:04}-{m:02}-{d:02}T{:02}:{:02}:{:02}Z",
        rem / 3600,
        (rem / 60) % 60,
        rem % 60
    )
}

fn ephemeris_bounds() -> (f64, f64) {
    let lo = julian_day_number(WINDOW_FIRST_YEAR, 1, 1) as f64 - 0.5 - EPHEMERIS_PAD_DAYS;
    let hi = julian_day_number(WINDOW_LAST_YEAR + 1, 1, 1) as f64 - 0.5 + EPHEMERIS_PAD_DAYS;
    (lo, hi)
}

fn check_window(jd: f64) -> Result<(), CalendricsError> {
    let (lo, hi) = ephemeris_bounds();
    if jd.is_finite() && jd >= lo && jd <= hi {
        Ok(())
    } else {
        Err(CalendricsError::OutOfWindow {
            jd,
            first: WINDOW_FIRST_YEAR,
            last: WINDOW_LAST_YEAR,
        })
    }
}

/// TT − UT in seconds (Espenak & Meeus polynomial fits).
pub fn delta_t_seconds(jd_utc: f64) -> f64 {
    let y = 2000.0 + (jd_utc - J2000) / 365.25;
    if y < 1900.0 {
        let t = y - 1860.0;
        7.62 + 0.5737 * t - 0.251754 * t.powi(2) + 0.01680668 * t.powi(3) - 0.0004473624 * t.powi(4)
            + t.powi(5) / 233_174.0
    } else if y < 1920.0 {
        let t = y - 1900.0;
        -2.79 + 1.494119 * t - 0.0598939 * t.powi(2) + 0.0061966 * t.powi(3) - 0.000197 * t.powi(4)
    } else if y < 1941.0 {
        let t = y - 1920.0;
        21.20 + 0.84493 * t - 0.076100 * t.powi(2) + 0.0020936 * t.powi(3)
    } else if y < 1961.0 {
        let t = y - 1950.0;
        29.07 + 0.407 * t - t.powi(2) / 233.0 + t.powi(3) / 2547.0
    } else if y < 1986.0 {
        let t = y - 1975.0;
        45.45 + 1.067 * t - t.powi(2) / 260.0 - t.powi(3) / 718.0
    } else if y < 2005.0 {
        let t = y - 2000.0;
        63.86 + 0.3345 * t - 0.060374 * t.powi(2)
            + 0.0017275 * t.powi(3)
            + 0.000651814 * t.powi(4)
            + 0.00002373599 * t.powi(5)
    } else if y < 2050.0 {
        let t = y - 2000.0;
        62.92 + 0.32217 * t + 0.005589 * t.powi(2)
    } else {
        let u = (y - 1820.0) / 100.0;
        -20.0 + 32.0 * u * u - 0.5628 * (2150.0 - y)
    }
}

fn normalize_deg(x: f64) -> f64 {
    let r = x.rem_euclid(360.0);
    if r >= 360.0 {
        0.0
    } else {
        r
    }
}

/// Wraps an angle difference into (−180, 180].
fn wrap_signed(x: f64) -> f64 {
    let r = normalize_deg(x);
    if r > 180.0 {
        r - 360.0
    } else {
        r
    }
}

fn vsop_sum(series: &[&[(f64, f64, f64)]], tau: f64) -> f64 {
    let mut total = 0.0;
    let mut power = 1.0;
    for terms in series {
        let s: f64 = terms.iter().map(|&(a, b, c)| a * (b + c * tau).cos()).sum();
        total += s * power;
        power *= tau;
    }
    total * 1e-8
}

/// Nutation in longitude, degrees, for Julian centuries `t` (TT) from J2000.
fn nutation_longitude(t: f64) -> f64 {
    let d = 297.85036 + t * (445_267.111480 + t * (-0.0019142 + t / 189_474.0));
    let m = 357.52772 + t * (35_999.050340 + t * (-0.0001603 - t / 300_000.0));
    let mp = 134.96298 + t * (477_198.867398 + t * (0.0086972 + t / 56_250.0));
    let f = 93.27191 + t * (483_202.017538 + t * (-0.0036825 + t / 327_270.0));
    let om = 125.04452 + t * (-1934.136261 + t * (0.0020708 + t / 450_000.0));
    let args = [d, m, mp, f, om];
    let mut dpsi = 0.0;
    for (mult, c0, c1) in series::NUTATION_LONGITUDE.iter() {
        let arg: f64 = mult
            .iter()
            .zip(args.iter())
            .map(|(&k, &a)| k as f64 * a)
            .sum();
        dpsi += (c0 + c1 * t) * arg.to_radians().sin();
    }
    dpsi * 1e-4 * ARCSEC
}

fn mean_obliquity(t: f64) -> f64 {
    let u = t / 100.0;
    let arcsec = 84_381.448
        + u * (-4680.93
            + u * (-1.55
                + u * (1999.25
                    + u * (-51.38
                        + u * (-249.67
                            + u * (-39.05 + u * (7.12 + u * (27.87 + u * (5.79 + u * 2.45)))))))));
    arcsec * ARCSEC
}

fn nutation_obliquity(t: f64) -> f64 {
    let om = (125.04452 - 1934.136261 * t).to_radians();
    let l = (280.4665 + 36_000.769_8 * t).to_radians();
    let lp = (218.3165 + 481_267.881_3 * t).to_radians();
    (9.20 * om.cos() + 0.57 * (2.0 * l).cos() + 0.10 * (2.0 * lp).cos() - 0.09 * (2.0 * om).cos())
        * ARCSEC
}

struct SunState {
    apparent_longitude: f64,
    nutation_longitude: f64,
    /// Julian millennia (TT) from J2000.
    tau: f64,
}

fn sun_state(jd_utc: f64) -> SunState {
    let jde = jd_utc + delta_t_seconds(jd_utc) / 86_400.0;
    let tau = (jde - J2000) / 365_250.0;
    let t = tau * 10.0;
    let l_helio = vsop_sum(&series::EARTH_L, tau).to_degrees();
    let radius = vsop_sum(&series::EARTH_R, tau);
    let geometric = l_helio + 180.0;
    let fk5 = -0.09033 * ARCSEC;
    let dpsi = nutation_longitude(t);
    let aberration = -20.4898 * ARCSEC / radius;
    SunState {
        apparent_longitude: normalize_deg(geometric + fk5 + dpsi + aberration),
        nutation_longitude: dpsi,
        tau,
    }
}

/// Apparent geocentric ecliptic longitude of the Sun, degrees in [0, 360).
pub fn apparent_solar_longitude(jd_utc: f64) -> Result<f64, CalendricsError> {
    check_window(jd_utc)?;
    Ok(sun_state(jd_utc).apparent_longitude)
}

/// Instant at which the apparent solar longitude reaches the term's target.
///
/// Index 0 is the 立春 falling in February of `gregorian_year`; indices 22 and
/// 23 (小寒, 大寒) fall in January of the following year.
pub fn solar_term_instant(
    gregorian_year: i32,
    term_index: usize,
) -> Result<SolarTerm, CalendricsError> {
    if term_index >= 24 {
        return Err(CalendricsError::BadTermIndex(term_index));
    }
    if !(WINDOW_FIRST_YEAR - 1..=WINDOW_LAST_YEAR).contains(&gregorian_year) {
        return Err(CalendricsError::YearOutOfWindow(gregorian_year));
    }
    let target = term_target_longitude(term_index);
    // 立春 sits near Feb 4; terms are on average 15.218 days apart.
    let guess =
        julian_day_number(gregorian_year, 2, 4) as f64 - 0.5 + term_index as f64 * 15.218_425;
    let residual = |jd: f64| -> Result<f64, CalendricsError> {
        Ok(wrap_signed(apparent_solar_longitude(jd)? - target))
    };

    let no_conv = |detail: String| CalendricsError::NoConvergence {
        year: gregorian_year,
        index: term_index,
        detail,
    };
    let (mut lo, mut hi) = (guess - 10.0, guess + 10.0);
    let (mut f_lo, mut f_hi) = (residual(lo)?, residual(hi)?);
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(no_conv(format!(
            "root not bracketed: f(lo)={f_lo}, f(hi)={f_hi}"
        )));
    }

    // Illinois-modified regula falsi; the residual is smooth and monotone
    // inside the bracket so this converges in a handful of steps.
    let mut side = 0i8;
    for _ in 0..100 {
        let x = hi - f_hi * (hi - lo) / (f_hi - f_lo);
        let fx = residual(x)?;
        if (hi - lo).abs() < 1e-8 || fx.abs() < 1e-9 {
            let jd = x;
            return Ok(SolarTerm {
                index: term_index,
                target_longitude_deg: target,
                instant: SolarInstant::from_jd(jd, 0),
            });
        }
        if fx < 0.0 {
            lo = x;
            f_lo = fx;
            if side == -1 {
                f_hi /= 2.0;
            }
            side = -1;
        } else {
            hi = x;
            f_hi = fx;
            if side == 1 {
                f_lo /= 2.0;
            }
            side = 1;
        }
    }
    Err(no_conv(format!(
        "bracket [{lo}, {hi}] still open after 100 iterations"
    )))
}

/// Memoized Julian Date of a term instant. Term instants are pure functions
/// of (year, index), and chart construction asks for the same few repeatedly.
pub fn term_jd(gregorian_year: i32, term_index: usize) -> Result<f64, CalendricsError> {
    static MEMO: OnceLock<Mutex<HashMap<(i32, usize), f64>>> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    if let Some(&jd) = memo.lock().unwrap().get(&(gregorian_year, term_index)) {
        return Ok(jd);
    }
    let jd = solar_term_instant(gregorian_year, term_index)?
        .instant
        .jd_utc;
    memo.lock()
        .unwrap()
        .insert((gregorian_year, term_index), jd);
    Ok(jd)
}

/// All 24 terms from 立春 of `gregorian_year` through 大寒 the next January.
pub fn solar_terms_for_year(gregorian_year: i32) -> Result<Vec<SolarTerm>, CalendricsError> {
    (0..24)
        .map(|i| solar_term_instant(gregorian_year, i))
        .collect()
}

/// Apparent minus mean solar time, in minutes.
pub fn equation_of_time(jd_utc: f64) -> Result<f64, CalendricsError> {
    check_window(jd_utc)?;
    let s = sun_state(jd_utc);
    let tau = s.tau;
    let t = tau * 10.0;
    let mean_longitude = normalize_deg(
        280.466_456_7
            + 360_007.698_277_9 * tau
            + 0.030_320_28 * tau.powi(2)
            + tau.powi(3) / 49_931.0
            - tau.powi(4) / 15_300.0
            - tau.powi(5) / 2_000_000.0,
    );
    let eps = (mean_obliquity(t) + nutation_obliquity(t)).to_radians();
    let lambda = s.apparent_longitude.to_radians();
    let alpha = normalize_deg((eps.cos() * lambda.sin()).atan2(lambda.cos()).to_degrees());
    let e = wrap_signed(mean_longitude - 0.005_718_3 - alpha + s.nutation_longitude * eps.cos());
    Ok(e * 4.0)
}

/// Which parts of the local-solar correction are applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolarTimeMode {
    /// Zone clock time, no correction.
    Off,
    /// Longitude correction only (local mean solar time).
    MeanSolar,
    /// Longitude correction plus the equation of time.
    #[default]
    TrueSolar,
}

impl std::str::FromStr for SolarTimeMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "off" => Ok(Self::Off),
            "mean_solar" | "mean" => Ok(Self::MeanSolar),
            "true_solar" | "true" | "on" => Ok(Self::TrueSolar),
            other => Err(format!(
                "unknown solar time mode {other:?} (off|mean_solar|true_solar)"
            )),
        }
    }
}

impl fmt::Display for SolarTimeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Off => "off",
            Self::MeanSolar => "mean_solar",
            Self::TrueSolar => "true_solar",
        })
    }
}

/// Minutes added to zone time to get local mean solar time.
pub fn longitude_correction_minutes(loc: &GeoLocation, utc_offset_minutes: i32) -> f64 {
    let zone_meridian = utc_offset_minutes as f64 / 4.0;
    4.0 * (loc.longitude_deg_east - zone_meridian)
}

/// Corrects a zone-time birth reading to local solar time.
pub fn true_solar_time(
    civil: &CivilDateTime,
    loc: &GeoLocation,
) -> Result<SolarInstant, CalendricsError> {
    solar_time_with_mode(civil, loc, SolarTimeMode::TrueSolar)
}

pub fn solar_time_with_mode(
    civil: &CivilDateTime,
    loc: &GeoLocation,
    mode: SolarTimeMode,
) -> Result<SolarInstant, CalendricsError> {
    loc.validate()?;
    let jd = to_julian_date(civil)?;
    check_window(jd)?;
    if !civil.in_window() {
        return Err(CalendricsError::YearOutOfWindow(civil.year));
    }
    let shift = match mode {
        SolarTimeMode::Off => 0.0,
        SolarTimeMode::MeanSolar => longitude_correction_minutes(loc, civil.utc_offset_minutes),
        SolarTimeMode::TrueSolar => {
            longitude_correction_minutes(loc, civil.utc_offset_minutes) + equation_of_time(jd)?
        }
    };
    Ok(SolarInstant {
        jd_utc: jd,
        local_true_solar: floor_civil(jd, shift, civil.utc_offset_minutes),
    })
}
