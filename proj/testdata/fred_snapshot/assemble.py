#!/usr/bin/env python3
"""Assembles the bundled quarterly snapshot (1950Q1-2017Q1).

See PROVENANCE.md for what each column is built from. Requires the
`rdatasets` and `statsmodels` Python packages, which bundle offline copies of
FRED-derived US macro series. Output is deterministic.

    python3 assemble.py [OUTDIR]
"""

import datetime as dt
import math
import os
import sys

import numpy as np
import rdatasets
import statsmodels.api as sm

START_YEAR = 1950
N_QUARTERS = 269  # 1950Q1 .. 2017Q1
LINK = 36  # 1959Q1 offset; first quarter covered by statsmodels macrodata

# Published level values, 2015Q2 .. 2017Q1.
GDP_TAIL = [16461, 16528, 16548, 16572, 16664, 16778, 16851, 16903]
POP_TAIL = [320972, 321620, 322268, 322793, 323326, 323962, 324593, 325108]

# Real GDP growth, percent at annual rate, 2009Q4 .. 2015Q2.
GDP_GROWTH_BRIDGE = [3.9, 1.7, 3.9, 2.7, 2.5, -1.5, 2.9, 0.8, 4.6, 2.7, 1.9,
                     0.5, 0.1, 1.9, 1.1, 3.0, 3.8, -1.2, 4.0, 5.0, 2.3, 2.0,
                     2.6]
GDP_1950Q1 = 2084.6

# CPI-U, all items, SA, quarterly average of monthly values, 2009Q4 .. 2017Q1.
CPI_BRIDGE = [217.3, 217.4, 217.3, 217.9, 219.2, 221.9, 224.7, 225.9, 226.5,
              228.4, 228.8, 229.8, 231.0, 231.7, 231.8, 233.2, 234.1, 235.3,
              236.9, 237.5, 236.9, 234.8, 236.9, 237.8, 237.8, 237.8, 239.3,
              240.4, 241.9, 243.8]
POP_1950Q1 = 150852.0

# Federal Reserve Bank of New York discount rate (primary credit rate from
# 2003-01-09), as (effective date, new rate). Rate in force on 1950-01-01 is
# 1.50.
DISCOUNT_CHANGES = [
    ("1950-08-21", 1.75), ("1953-01-16", 2.00), ("1954-02-05", 1.75),
    ("1954-04-16", 1.50), ("1955-04-15", 1.75), ("1955-08-05", 2.00),
    ("1955-09-09", 2.25), ("1955-11-18", 2.50), ("1956-04-13", 2.75),
    ("1956-08-24", 3.00), ("1957-08-23", 3.50), ("1957-11-15", 3.00),
    ("1958-01-24", 2.75), ("1958-03-07", 2.25), ("1958-04-18", 1.75),
    ("1958-09-12", 2.00), ("1958-11-07", 2.50), ("1959-03-06", 3.00),
    ("1959-05-29", 3.50), ("1959-09-11", 4.00), ("1960-06-10", 3.50),
    ("1960-08-12", 3.00), ("1963-07-17", 3.50), ("1964-11-24", 4.00),
    ("1965-12-06", 4.50), ("1967-04-07", 4.00), ("1967-11-20", 4.50),
    ("1968-03-22", 5.00), ("1968-04-19", 5.50), ("1968-08-30", 5.25),
    ("1968-12-18", 5.50), ("1969-04-04", 6.00), ("1970-11-13", 5.75),
    ("1970-12-04", 5.50), ("1971-01-08", 5.25), ("1971-01-22", 5.00),
    ("1971-02-19", 4.75), ("1971-07-16", 5.00), ("1971-11-19", 4.75),
    ("1971-12-17", 4.50), ("1973-01-15", 5.00), ("1973-02-26", 5.50),
    ("1973-05-04", 5.75), ("1973-05-11", 6.00), ("1973-06-11", 6.50),
    ("1973-07-02", 7.00), ("1973-08-14", 7.50), ("1974-04-25", 8.00),
    ("1974-12-09", 7.75), ("1975-01-10", 7.25), ("1975-02-05", 6.75),
    ("1975-03-10", 6.25), ("1975-05-16", 6.00), ("1976-01-19", 5.50),
    ("1976-11-22", 5.25), ("1977-08-30", 5.75), ("1977-10-26", 6.00),
    ("1978-01-09", 6.50), ("1978-05-11", 7.00), ("1978-07-03", 7.25),
    ("1978-08-21", 7.75), ("1978-09-22", 8.00), ("1978-10-16", 8.50),
    ("1978-11-01", 9.50), ("1979-07-20", 10.00), ("1979-08-17", 10.50),
    ("1979-09-19", 11.00), ("1979-10-08", 12.00), ("1980-02-15", 13.00),
    ("1980-05-30", 12.00), ("1980-06-13", 11.00), ("1980-07-28", 10.00),
    ("1980-09-26", 11.00), ("1980-11-17", 12.00), ("1980-12-05", 13.00),
    ("1981-05-05", 14.00), ("1981-11-02", 13.00), ("1981-12-04", 12.00),
    ("1982-07-20", 11.50), ("1982-08-02", 11.00), ("1982-08-16", 10.50),
    ("1982-08-27", 10.00), ("1982-10-12", 9.50), ("1982-11-22", 9.00),
    ("1982-12-14", 8.50), ("1984-04-09", 9.00), ("1984-11-21", 8.50),
    ("1984-12-24", 8.00), ("1985-05-20", 7.50), ("1986-03-07", 7.00),
    ("1986-04-21", 6.50), ("1986-07-11", 6.00), ("1986-08-21", 5.50),
    ("1987-09-04", 6.00), ("1988-08-09", 6.50), ("1989-02-24", 7.00),
    ("1990-12-19", 6.50), ("1991-02-01", 6.00), ("1991-04-30", 5.50),
    ("1991-09-13", 5.00), ("1991-11-06", 4.50), ("1991-12-20", 3.50),
    ("1992-07-02", 3.00), ("1994-05-17", 3.50), ("1994-08-16", 4.00),
    ("1994-11-15", 4.75), ("1995-02-01", 5.25), ("1996-01-31", 5.00),
    ("1998-10-15", 4.75), ("1998-11-17", 4.50), ("1999-08-24", 4.75),
    ("1999-11-16", 5.00), ("2000-02-02", 5.25), ("2000-03-21", 5.50),
    ("2000-05-16", 6.00), ("2001-01-04", 5.50), ("2001-01-31", 5.00),
    ("2001-03-20", 4.50), ("2001-04-18", 4.00), ("2001-05-15", 3.50),
    ("2001-06-27", 3.25), ("2001-08-21", 3.00), ("2001-09-17", 2.50),
    ("2001-10-02", 2.00), ("2001-11-06", 1.50), ("2001-12-11", 1.25),
    ("2002-11-06", 0.75), ("2003-01-09", 2.25), ("2003-06-25", 2.00),
    ("2004-06-30", 2.25), ("2004-08-10", 2.50), ("2004-09-21", 2.75),
    ("2004-11-10", 3.00), ("2004-12-14", 3.25), ("2005-02-02", 3.50),
    ("2005-03-22", 3.75), ("2005-05-03", 4.00), ("2005-06-30", 4.25),
    ("2005-08-09", 4.50), ("2005-09-20", 4.75), ("2005-11-01", 5.00),
    ("2005-12-13", 5.25), ("2006-01-31", 5.50), ("2006-03-28", 5.75),
    ("2006-05-10", 6.00), ("2006-06-29", 6.25), ("2007-08-17", 5.75),
    ("2007-09-18", 5.25), ("2007-10-31", 5.00), ("2007-12-11", 4.75),
    ("2008-01-22", 4.00), ("2008-01-30", 3.50), ("2008-03-16", 3.25),
    ("2008-03-18", 2.50), ("2008-04-30", 2.25), ("2008-10-08", 1.75),
    ("2008-10-29", 1.25), ("2008-12-16", 0.50), ("2010-02-19", 0.75),
    ("2015-12-17", 1.00), ("2016-12-15", 1.25), ("2017-03-16", 1.50),
]


def quarter_dates():
    out = []
    for i in range(N_QUARTERS):
        y, q = START_YEAR + i // 4, i % 4 + 1
        out.append(dt.date(y, 3 * q - 2, 1))
    return out


def load_sources():
    g = rdatasets.data("AER", "USMacroG")
    m = sm.datasets.macrodata.load_pandas().data
    assert len(g) == 204 and len(m) == 203
    return g, m


def drift_to(levels, first_target):
    """Log-linear correction pinning the first value while keeping the last."""
    n = len(levels)
    gap = math.log(first_target / levels[0])
    w = np.linspace(1.0, 0.0, n)
    return levels * np.exp(gap * w)


def build_gdp(g, m):
    pre = g.gdp.values[: LINK + 1]
    lv = list(pre[:-1] / pre[-1] * m.realgdp.values[0]) + list(m.realgdp.values)
    for rate in GDP_GROWTH_BRIDGE:
        lv.append(lv[-1] * (1 + rate / 100) ** 0.25)
    lv = np.array(lv)
    lv *= GDP_TAIL[0] / lv[-1]
    lv = drift_to(lv, GDP_1950Q1)
    return np.concatenate([lv, GDP_TAIL[1:]])


def build_cpi(g, m):
    pre = g.cpi.values[: LINK + 1]
    lv = list(pre[:-1] / pre[-1] * m.cpi.values[0]) + list(m.cpi.values)
    return np.concatenate([lv, CPI_BRIDGE])


def build_pop(g, m):
    # 1950Q1..1959Q1: increments from USMacroG scaled to meet the anchors.
    pre = g.population.values[: LINK + 1] * 1000
    mp = m["pop"].values * 1000
    inc = np.diff(pre) * (mp[0] - POP_1950Q1) / (pre[-1] - pre[0])
    head = POP_1950Q1 + np.concatenate([[0.0], np.cumsum(inc)])[:-1]
    lv = list(head) + list(mp)
    # 2009Q4..2015Q2: quarter-of-year increment profile of the last ten
    # macrodata years, scaled to land on the first published tail value.
    last = m.tail(40)
    prof = np.diff(mp)[-40:]
    qmean = {q: prof[(last.quarter.values == q)].mean() for q in (1, 2, 3, 4)}
    steps, q = [], 4
    for _ in range(23):
        steps.append(qmean[q])
        q = q % 4 + 1
    steps = np.array(steps) * (POP_TAIL[0] - lv[-1]) / sum(steps)
    lv += list(lv[-1] + np.cumsum(steps))
    return np.concatenate([lv, POP_TAIL[1:]])


def rate_on(day):
    r = 1.50
    for d, v in DISCOUNT_CHANGES:
        if dt.date.fromisoformat(d) <= day:
            r = v
    return r


def build_discount(dates):
    out = []
    for d in dates:
        vals = []
        for k in range(3):
            mo = d.month + k
            nxt = dt.date(d.year + (mo == 12), mo % 12 + 1, 1)
            vals.append(rate_on(nxt - dt.timedelta(days=1)))
        out.append(sum(vals) / 3)
    return np.array(out)


def write(path, col, dates, vals, fmt):
    assert len(vals) == len(dates), (col, len(vals))
    with open(path, "w", newline="\n") as f:
        f.write(f"DATE,{col}\n")
        for d, v in zip(dates, vals):
            f.write(f"{d.isoformat()},{fmt.format(v)}\n")


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.dirname(__file__)
    dates = quarter_dates()
    g, m = load_sources()
    write(os.path.join(out, "GDPC1.csv"), "GDPC1", dates, build_gdp(g, m), "{:.3f}")
    write(os.path.join(out, "INTDSRUSM193N.csv"), "INTDSRUSM193N", dates,
          build_discount(dates), "{:.4f}")
    write(os.path.join(out, "CPIAUCSL.csv"), "CPIAUCSL", dates, build_cpi(g, m), "{:.3f}")
    write(os.path.join(out, "POP.csv"), "POP", dates, build_pop(g, m), "{:.3f}")


if __name__ == "__main__":
    main()
