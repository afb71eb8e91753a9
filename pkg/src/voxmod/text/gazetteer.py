"""Hierarchical place-name gazetteer (state > district > sub-district).

Loaded from a CSV of census-style rows plus an alias CSV for name
variations (East Champaran -> Purbi Champaran and the like). All lookups
go through normalized names; the same name may legitimately exist in
several parents, so index values are lists.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

from .transcript import normalize_text

LEVELS = ("state", "district", "subdistrict")
_LEVEL_SYNONYMS = {"state": "state", "district": "district", "subdistrict": "subdistrict",
                   "sub-district": "subdistrict", "sub_district": "subdistrict"}


class OrphanEntry(ValueError):
    """Row fills a child level while a parent level is empty."""


class BadAlias(ValueError):
    """Alias points at a canonical name the gazetteer does not hold."""


@dataclass(frozen=True)
class PlaceRecord:
    """One concrete place: its level plus the full parent chain."""

    level: str
    name: str
    state: str
    district: str | None = None


@dataclass
class Gazetteer:
    index: dict[str, dict[str, list[PlaceRecord]]] = field(
        default_factory=lambda: {level: {} for level in LEVELS}
    )

    def add(self, record: PlaceRecord, key: str | None = None):
        key = normalize_text(key if key is not None else record.name)
        if not key:
            return
        bucket = self.index[record.level].setdefault(key, [])
        if record not in bucket:
            bucket.append(record)

    def lookup(self, level: str, name: str) -> list[PlaceRecord]:
        return self.index[level].get(normalize_text(name), [])

    def names(self, level: str) -> list[tuple[str, list[PlaceRecord]]]:
        """(normalized name, records) pairs, sorted for deterministic scans."""
        return sorted(self.index[level].items())

    def size(self, level: str) -> int:
        return len({(r.level, r.name, r.state, r.district) for recs in self.index[level].values() for r in recs})

    def is_empty(self) -> bool:
        return all(not names for names in self.index.values())


def parse_gazetteer(gazetteer_csv: str, alias_csv: str | None = None) -> Gazetteer:
    g = Gazetteer()
    reader = csv.reader(io.StringIO(gazetteer_csv))
    header = next(reader, None)
    if header is not None and [h.strip().lower() for h in header[:1]] != ["state"]:
        # no header row: treat it as data
        reader = csv.reader(io.StringIO(gazetteer_csv))
    for row in reader:
        if not row or not any(cell.strip() for cell in row):
            continue
        state = row[0].strip()
        district = row[1].strip() if len(row) > 1 else ""
        subdistrict = row[2].strip() if len(row) > 2 else ""
        if district and not state:
            raise OrphanEntry(f"district {district!r} has no state")
        if subdistrict and not district:
            raise OrphanEntry(f"sub-district {subdistrict!r} has no district")
        if state:
            g.add(PlaceRecord(level="state", name=state, state=state))
        if district:
            g.add(PlaceRecord(level="district", name=district, state=state, district=district))
        if subdistrict:
            g.add(
                PlaceRecord(level="subdistrict", name=subdistrict, state=state, district=district)
            )
    if alias_csv:
        _apply_aliases(g, alias_csv)
    return g


def _apply_aliases(g: Gazetteer, alias_csv: str):
    reader = csv.reader(io.StringIO(alias_csv))
    header = next(reader, None)
    if header is not None and [h.strip().lower() for h in header[:1]] != ["alias"]:
        reader = csv.reader(io.StringIO(alias_csv))
    for row in reader:
        if not row or not any(cell.strip() for cell in row):
            continue
        if len(row) < 3:
            raise BadAlias(f"alias row needs alias,canonical,level: {row!r}")
        alias, canonical, level_raw = row[0].strip(), row[1].strip(), row[2].strip().lower()
        level = _LEVEL_SYNONYMS.get(level_raw)
        if level is None:
            raise BadAlias(f"unknown level {level_raw!r} for alias {alias!r}")
        records = g.lookup(level, canonical)
        if not records:
            raise BadAlias(f"alias {alias!r} points at unknown {level} {canonical!r}")
        for record in records:
            g.add(record, key=alias)


def load_gazetteer(gazetteer_path, alias_path=None) -> Gazetteer:
    gazetteer_csv = Path(gazetteer_path).read_text(encoding="utf-8")
    alias_csv = Path(alias_path).read_text(encoding="utf-8") if alias_path else None
    return parse_gazetteer(gazetteer_csv, alias_csv)
