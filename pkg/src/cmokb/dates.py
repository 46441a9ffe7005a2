"""Date and duration arithmetic (proleptic Gregorian, day precision).

Durations follow the date part of ISO-8601 (``P2Y6M1W3D``); negative
components are rejected.  Month addition clamps to the last day of the
target month (2025-01-31 + P1M = 2025-02-28).
"""

from __future__ import annotations

import calendar
import re
from dataclasses import dataclass
from datetime import date, timedelta

from .errors import DateParseError, DurationParseError

_DURATION_RE = re.compile(r"^P(?:(\d+)Y)?(?:(\d+)M)?(?:(\d+)W)?(?:(\d+)D)?$")
_FRENCH_RE = re.compile(r"^\s*(\d+)\s*(ans?|années?|mois|semaines?|jours?)\s*$", re.IGNORECASE)
_DAYFIRST_RE = re.compile(r"^(\d{1,2})/(\d{1,2})/(\d{4})$")


@dataclass(frozen=True, slots=True)
class Duration:
    years: int = 0
    months: int = 0
    weeks: int = 0
    days: int = 0

    def iso(self) -> str:
        parts = []
        if self.years:
            parts.append(f"{self.years}Y")
        if self.months:
            parts.append(f"{self.months}M")
        if self.weeks:
            parts.append(f"{self.weeks}W")
        if self.days:
            parts.append(f"{self.days}D")
        return "P" + ("".join(parts) if parts else "0D")


def parse_duration(lexical: str) -> Duration:
    m = _DURATION_RE.match(lexical.strip())
    if not m or lexical.strip() == "P":
        raise DurationParseError(f"cannot parse duration: {lexical!r}")
    years, months, weeks, days = (int(g) if g else 0 for g in m.groups())
    return Duration(years, months, weeks, days)


def parse_french_duration(lexical: str) -> Duration:
    """Durations written out in French, e.g. ``6 mois`` or ``2 ans``."""
    m = _FRENCH_RE.match(lexical)
    if not m:
        raise DurationParseError(f"cannot parse duration: {lexical!r}")
    count = int(m.group(1))
    unit = m.group(2).lower()
    if unit.startswith("an"):
        return Duration(years=count)
    if unit == "mois":
        return Duration(months=count)
    if unit.startswith("semaine"):
        return Duration(weeks=count)
    return Duration(days=count)


def parse_any_duration(lexical: str) -> Duration:
    try:
        return parse_duration(lexical)
    except DurationParseError:
        return parse_french_duration(lexical)


def parse_date(lexical: str) -> date:
    try:
        return date.fromisoformat(lexical.strip())
    except ValueError as exc:
        raise DateParseError(f"cannot parse date: {lexical!r}") from exc


def parse_dayfirst_date(lexical: str) -> date:
    """``10/01/2025`` read day/month/year, as written in French sources."""
    m = _DAYFIRST_RE.match(lexical.strip())
    if not m:
        raise DateParseError(f"cannot parse date: {lexical!r}")
    day, month, year = int(m.group(1)), int(m.group(2)), int(m.group(3))
    try:
        return date(year, month, day)
    except ValueError as exc:
        raise DateParseError(f"cannot parse date: {lexical!r}") from exc


def parse_any_date(lexical: str) -> date:
    try:
        return parse_date(lexical)
    except DateParseError:
        return parse_dayfirst_date(lexical)


def add_months(d: date, months: int) -> date:
    total = d.year * 12 + (d.month - 1) + months
    year, month0 = divmod(total, 12)
    month = month0 + 1
    day = min(d.day, calendar.monthrange(year, month)[1])
    return date(year, month, day)


def add_duration(d: date, duration: Duration) -> date:
    shifted = add_months(d, duration.years * 12 + duration.months)
    return shifted + timedelta(days=duration.weeks * 7 + duration.days)


def duration_days(duration: Duration) -> int:
    """Planning weight in days (flat 365/30-day convention, not calendar)."""
    return duration.years * 365 + duration.months * 30 + duration.weeks * 7 + duration.days
