"""Regenerates the frozen solar-term table used by the calendrics tests.

Primary values come from sxtwl (the Shouxing almanac algorithm behind most
published Chinese perpetual calendars), converted from Beijing time to UTC.
Each value is cross-checked against an independent PyEphem bisection on the
apparent geocentric solar longitude.
"""
import datetime as dt
import math

import ephem
import sxtwl

NAMES = ["立春", "雨水", "惊蛰", "春分", "清明", "谷雨", "立夏", "小满", "芒种", "夏至",
         "小暑", "大暑", "立秋", "处暑", "白露", "秋分", "寒露", "霜降", "立冬", "小雪",
         "大雪", "冬至", "小寒", "大寒"]


def sxtwl_terms(year):
    out = {}
    for y in (year, year + 1):
        for j in sxtwl.getJieQiByYear(y):
            t = sxtwl.JD2DD(j.jd)
            sec = round(t.h * 3600 + t.m * 60 + t.s)
            bj = dt.datetime(t.Y, t.M, t.D) + dt.timedelta(seconds=sec)
            # sxtwl indexes from 冬至 = 0; 立春 = 3
            out.setdefault((y, j.jqIndex), bj - dt.timedelta(hours=8))
    terms = []
    for i in range(24):
        k = (i + 3) % 24
        y = year if i < 21 else year + 1
        candidates = [v for (yy, kk), v in out.items() if kk == k]
        candidates.sort()
        lichun = [v for (yy, kk), v in out.items() if kk == 3 and v.year == year][0]
        pick = [c for c in candidates if c >= lichun][0]
        terms.append(pick)
    return terms


def ephem_lon(d):
    s = ephem.Sun(ephem.Date(d))
    ecl = ephem.Ecliptic(ephem.Equatorial(s.g_ra, s.g_dec, epoch=ephem.Date(d)), epoch=ephem.Date(d))
    return math.degrees(ecl.lon)


def ephem_refine(guess, target):
    def f(d):
        x = (ephem_lon(d) - target + 540.0) % 360.0 - 180.0
        return x
    lo, hi = guess - dt.timedelta(days=1), guess + dt.timedelta(days=1)
    for _ in range(60):
        mid = lo + (hi - lo) / 2
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return lo


if __name__ == "__main__":
    for year in (1966, 2000, 2024):
        for i, t in enumerate(sxtwl_terms(year)):
            target = (315 + 15 * i) % 360
            e = ephem_refine(t, target)
            diff = (e - t).total_seconds()
            assert abs(diff) < 60, (year, i, diff)
            print(f"({year}, {i:2}, \"{t:%Y-%m-%dT%H:%M:%S}\"),  // {NAMES[i]} ephem diff {diff:+.0f}s")
