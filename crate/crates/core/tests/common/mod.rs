//! Frozen reference tables shared by the integration tests.
//!
//! Solar terms: sxtwl (Shouxing almanac algorithm), Beijing time converted to
//! UTC, each row cross-checked against an independent PyEphem solution (the
//! per-row difference is in the trailing comment). Regenerate with
//! `python3 tests/oracle/gen_solar_terms.py`.
#![allow(dead_code)]

/// (year, term index from 立春, UTC instant)
pub const ALMANAC_TERMS: [(i32, usize, &str); 72] = [
    (1966, 0, "1966-02-04T06:37:48"),  // 立春 ephem diff -3s
    (1966, 1, "1966-02-19T02:37:47"),  // 雨水 ephem diff -3s
    (1966, 2, "1966-03-06T00:51:21"),  // 惊蛰 ephem diff -0s
    (1966, 3, "1966-03-21T01:52:54"),  // 春分 ephem diff +1s
    (1966, 4, "1966-04-05T05:56:29"),  // 清明 ephem diff +3s
    (1966, 5, "1966-04-20T13:11:30"),  // 谷雨 ephem diff +5s
    (1966, 6, "1966-05-05T23:30:26"),  // 立夏 ephem diff +8s
    (1966, 7, "1966-05-21T12:32:01"),  // 小满 ephem diff +9s
    (1966, 8, "1966-06-06T03:49:37"),  // 芒种 ephem diff +9s
    (1966, 9, "1966-06-21T20:33:21"),  // 夏至 ephem diff +11s
    (1966, 10, "1966-07-07T14:06:59"), // 小暑 ephem diff +12s
    (1966, 11, "1966-07-23T07:23:10"), // 大暑 ephem diff +12s
    (1966, 12, "1966-08-07T23:48:56"), // 立秋 ephem diff +12s
    (1966, 13, "1966-08-23T14:17:42"), // 处暑 ephem diff +7s
    (1966, 14, "1966-09-08T02:32:01"), // 白露 ephem diff +7s
    (1966, 15, "1966-09-23T11:43:08"), // 秋分 ephem diff +1s
    (1966, 16, "1966-10-08T17:56:43"), // 寒露 ephem diff +2s
    (1966, 17, "1966-10-23T20:50:45"), // 霜降 ephem diff -1s
    (1966, 18, "1966-11-07T20:55:15"), // 立冬 ephem diff -2s
    (1966, 19, "1966-11-22T18:14:05"), // 小雪 ephem diff -3s
    (1966, 20, "1966-12-07T13:37:45"), // 大雪 ephem diff -4s
    (1966, 21, "1966-12-22T07:28:08"), // 冬至 ephem diff -4s
    (1966, 22, "1967-01-06T00:48:19"), // 小寒 ephem diff -5s
    (1966, 23, "1967-01-20T18:07:30"), // 大寒 ephem diff -5s
    (2000, 0, "2000-02-04T12:40:24"),  // 立春 ephem diff -10s
    (2000, 1, "2000-02-19T08:33:18"),  // 雨水 ephem diff -7s
    (2000, 2, "2000-03-05T06:42:40"),  // 惊蛰 ephem diff -5s
    (2000, 3, "2000-03-20T07:35:15"),  // 春分 ephem diff -1s
    (2000, 4, "2000-04-04T11:31:58"),  // 清明 ephem diff +2s
    (2000, 5, "2000-04-19T18:39:30"),  // 谷雨 ephem diff +5s
    (2000, 6, "2000-05-05T04:50:10"),  // 立夏 ephem diff +6s
    (2000, 7, "2000-05-20T17:49:24"),  // 小满 ephem diff +9s
    (2000, 8, "2000-06-05T08:58:34"),  // 芒种 ephem diff +9s
    (2000, 9, "2000-06-21T01:47:43"),  // 夏至 ephem diff +8s
    (2000, 10, "2000-07-06T19:13:56"), // 小暑 ephem diff +9s
    (2000, 11, "2000-07-22T12:42:41"), // 大暑 ephem diff +8s
    (2000, 12, "2000-08-07T05:02:59"), // 立秋 ephem diff +7s
    (2000, 13, "2000-08-22T19:48:31"), // 处暑 ephem diff +6s
    (2000, 14, "2000-09-07T07:59:10"), // 白露 ephem diff +3s
    (2000, 15, "2000-09-22T17:27:35"), // 秋分 ephem diff +2s
    (2000, 16, "2000-10-07T23:38:13"), // 寒露 ephem diff -1s
    (2000, 17, "2000-10-23T02:47:28"), // 霜降 ephem diff -2s
    (2000, 18, "2000-11-07T02:48:04"), // 立冬 ephem diff -5s
    (2000, 19, "2000-11-22T00:19:20"), // 小雪 ephem diff -5s
    (2000, 20, "2000-12-06T19:37:02"), // 大雪 ephem diff -8s
    (2000, 21, "2000-12-21T13:37:26"), // 冬至 ephem diff -8s
    (2000, 22, "2001-01-05T06:49:16"), // 小寒 ephem diff -9s
    (2000, 23, "2001-01-20T00:16:18"), // 大寒 ephem diff -9s
    (2024, 0, "2024-02-04T08:26:53"),  // 立春 ephem diff +3s
    (2024, 1, "2024-02-19T04:12:58"),  // 雨水 ephem diff +2s
    (2024, 2, "2024-03-05T02:22:31"),  // 惊蛰 ephem diff +7s
    (2024, 3, "2024-03-20T03:06:12"),  // 春分 ephem diff +6s
    (2024, 4, "2024-04-04T07:02:03"),  // 清明 ephem diff +10s
    (2024, 5, "2024-04-19T13:59:33"),  // 谷雨 ephem diff +11s
    (2024, 6, "2024-05-05T00:09:51"),  // 立夏 ephem diff +14s
    (2024, 7, "2024-05-20T12:59:17"),  // 小满 ephem diff +16s
    (2024, 8, "2024-06-05T04:09:40"),  // 芒种 ephem diff +16s
    (2024, 9, "2024-06-20T20:50:46"),  // 夏至 ephem diff +17s
    (2024, 10, "2024-07-06T14:19:49"), // 小暑 ephem diff +18s
    (2024, 11, "2024-07-22T07:44:11"), // 大暑 ephem diff +18s
    (2024, 12, "2024-08-07T00:09:01"), // 立秋 ephem diff +18s
    (2024, 13, "2024-08-22T14:54:48"), // 处暑 ephem diff +15s
    (2024, 14, "2024-09-07T03:11:06"), // 白露 ephem diff +15s
    (2024, 15, "2024-09-22T12:43:27"), // 秋分 ephem diff +11s
    (2024, 16, "2024-10-07T18:59:43"), // 寒露 ephem diff +10s
    (2024, 17, "2024-10-22T22:14:32"), // 霜降 ephem diff +7s
    (2024, 18, "2024-11-06T22:19:49"), // 立冬 ephem diff +6s
    (2024, 19, "2024-11-21T19:56:16"), // 小雪 ephem diff +2s
    (2024, 20, "2024-12-06T15:16:47"), // 大雪 ephem diff +2s
    (2024, 21, "2024-12-21T09:20:20"), // 冬至 ephem diff +1s
    (2024, 22, "2025-01-05T02:32:31"), // 小寒 ephem diff +2s
    (2024, 23, "2025-01-19T19:59:52"), // 大寒 ephem diff +1s
];

/// Day pillars from two perpetual calendars (sxtwl and lunar_python agree on
/// every row): (year, month, day, day pillar, year pillar, month pillar) where
/// year/month pillars are those in force at 12:00 UTC+8 (lunar_python exact
/// values; sxtwl assigns months by calendar day, which differs on 1937-07-07
/// because 小暑 fell at 21:45 that evening).
pub const PERPETUAL_DAYS: [(i32, u8, u8, &str, &str, &str); 12] = [
    (1900, 1, 1, "甲戌", "己亥", "丙子"),
    (1911, 10, 10, "癸丑", "辛亥", "戊戌"),
    (1924, 2, 5, "甲寅", "甲子", "丙寅"),
    (1937, 7, 7, "乙未", "丁丑", "丙午"),
    (1949, 10, 1, "甲子", "己丑", "癸酉"),
    (1966, 10, 18, "庚戌", "丙午", "戊戌"),
    (1976, 7, 28, "辛巳", "丙辰", "乙未"),
    (1984, 6, 1, "丙寅", "甲子", "己巳"),
    (2000, 1, 1, "戊午", "己卯", "丙子"),
    (2008, 8, 8, "庚辰", "戊子", "庚申"),
    (2020, 2, 29, "壬寅", "庚子", "戊寅"),
    (2030, 12, 31, "庚子", "庚戌", "戊子"),
];

/// Parses `YYYY-MM-DDTHH:MM:SS` as a UTC Julian Date.
pub fn utc_jd(iso: &str) -> f64 {
    let (date, time) = iso.split_once('T').unwrap();
    let d: Vec<i64> = date.split('-').map(|x| x.parse().unwrap()).collect();
    let t: Vec<f64> = time.split(':').map(|x| x.parse().unwrap()).collect();
    let jdn = bazi_core::calendrics::julian_day_number(d[0] as i32, d[1] as u8, d[2] as u8);
    jdn as f64 - 0.5 + (t[0] * 3600.0 + t[1] * 60.0 + t[2]) / 86_400.0
}

/// Ten Gods by day master (rows) and other stem (columns 甲..癸), as printed
/// in lunar_python's SHI_SHEN table and checked row by row against the
/// classical mnemonic 比劫食伤才财杀官枭印.
pub const CLASSICAL_TEN_GODS: [&str; 10] = [
    "比肩 劫财 食神 伤官 偏财 正财 七杀 正官 偏印 正印",
    "劫财 比肩 伤官 食神 正财 偏财 正官 七杀 正印 偏印",
    "偏印 正印 比肩 劫财 食神 伤官 偏财 正财 七杀 正官",
    "正印 偏印 劫财 比肩 伤官 食神 正财 偏财 正官 七杀",
    "七杀 正官 偏印 正印 比肩 劫财 食神 伤官 偏财 正财",
    "正官 七杀 正印 偏印 劫财 比肩 伤官 食神 正财 偏财",
    "偏财 正财 七杀 正官 偏印 正印 比肩 劫财 食神 伤官",
    "正财 偏财 正官 七杀 正印 偏印 劫财 比肩 伤官 食神",
    "食神 伤官 偏财 正财 七杀 正官 偏印 正印 比肩 劫财",
    "伤官 食神 正财 偏财 正官 七杀 正印 偏印 劫财 比肩",
];
