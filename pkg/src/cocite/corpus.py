"""Reading the citation corpus: studies, publications, citation links, and
the field-of-research taxonomy.

Files are UTF-8 delimited text with a header row (``.csv``, ``.tsv``) or
JSON lines (``.jsonl``, ``.ndjson``); the format is picked by extension.
"""
from __future__ import annotations

import csv
import datetime as dt
import json
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator

from .errors import ParseError, UnknownNodeError, ValidationError

log = logging.getLogger(__name__)

PUB_TYPES = ("journal-article", "report", "proceedings", "thesis", "book", "chapter", "other")

_TYPE_ALIASES = {
    "article": "journal-article",
    "journal article": "journal-article",
    "journal_article": "journal-article",
    "conference proceedings": "proceedings",
    "proceeding": "proceedings",
    "dissertation": "thesis",
    "book chapter": "chapter",
    "book-chapter": "chapter",
}


@dataclass(frozen=True)
class StudyRecord:
    study_id: str
    title: str = ""
    series_id: str | None = None
    release_date: dt.date | None = None
    subject_terms: tuple[str, ...] = ()
    investigators: tuple[str, ...] = ()
    is_restricted: bool = False
    series_title: str | None = None


@dataclass(frozen=True)
class PublicationRecord:
    publication_id: str
    year: int | None = None
    pub_type: str = "other"
    for_codes: tuple[str, ...] = ()

    @property
    def has_fields(self) -> bool:
        # Empty code list means "no field metadata" (unmatched or untagged alike).
        return bool(self.for_codes)


@dataclass(frozen=True, order=True)
class CitationLink:
    publication_id: str
    study_id: str


@dataclass(frozen=True)
class DatasetNode:
    dataset_id: str
    kind: str  # "series" | "standalone-study"
    member_study_ids: frozenset[str]
    subject_terms: tuple[str, ...]
    display_name: str
    investigators: tuple[str, ...] = ()


@dataclass(frozen=True)
class FieldCode:
    code: str
    name: str
    parent_code: str
    parent_name: str

    @property
    def is_division(self) -> bool:
        return self.code == self.parent_code


@dataclass
class IngestReport:
    citation_rows: int = 0
    duplicate_links: int = 0
    dropped_rows: int = 0
    year_unknown: int = 0
    filtered_by_year: int = 0

    def as_dict(self) -> dict:
        return dict(vars(self))


@dataclass
class Corpus:
    studies: list[StudyRecord]
    publications: list[PublicationRecord]
    links: list[CitationLink]
    report: IngestReport = field(default_factory=IngestReport)

    def study_index(self) -> dict[str, StudyRecord]:
        return {s.study_id: s for s in self.studies}

    def publication_index(self) -> dict[str, PublicationRecord]:
        return {p.publication_id: p for p in self.publications}


# -- low-level row readers ---------------------------------------------------

def _split_list(text) -> tuple[str, ...]:
    if text is None:
        return ()
    if isinstance(text, (list, tuple)):
        items = [str(t).strip() for t in text]
    else:
        items = [t.strip() for t in str(text).split(";")]
    seen = []
    for item in items:
        if item and item not in seen:
            seen.append(item)
    return tuple(seen)


def iter_rows(path, required: Iterable[str]) -> Iterator[tuple[int, dict]]:
    """Yield ``(line_number, row)`` pairs from a delimited or JSON-lines file.

    Blank lines are skipped. A row missing any required column raises
    ParseError with the line number.
    """
    path = Path(path)
    required = list(required)
    suffix = path.suffix.lower()
    with open(path, encoding="utf-8", newline="") as fh:
        if suffix in (".jsonl", ".ndjson", ".json"):
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    row = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ParseError(f"invalid JSON ({exc.msg})", path, lineno) from None
                if not isinstance(row, dict):
                    raise ParseError("expected a JSON object", path, lineno)
                missing = [c for c in required if c not in row]
                if missing:
                    raise ParseError(f"missing field(s) {missing}", path, lineno)
                yield lineno, row
            return
        delimiter = "\t" if suffix in (".tsv", ".tab") else ","
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file (no header row)", path, 1) from None
        header = [h.strip().lstrip("﻿") for h in header]
        missing = [c for c in required if c not in header]
        if missing:
            raise ParseError(f"header lacks column(s) {missing}", path, 1)
        for values in reader:
            lineno = reader.line_num
            if not values or all(not v.strip() for v in values):
                continue
            if len(values) != len(header):
                raise ParseError(
                    f"expected {len(header)} columns, found {len(values)}", path, lineno
                )
            yield lineno, dict(zip(header, values))


def _text(row, key, default=""):
    value = row.get(key, default)
    if value is None:
        return default
    return str(value).strip()


# -- file parsers ------------------------------------------------------------

def read_studies(path) -> list[StudyRecord]:
    cols = ["study_id", "title", "series_id", "release_date", "subject_terms",
            "investigators", "restricted"]
    studies = []
    seen = {}
    for lineno, row in iter_rows(path, cols):
        sid = _text(row, "study_id")
        if not sid:
            raise ParseError("empty study_id", path, lineno)
        if sid in seen:
            raise ValidationError(
                f"{path}:{lineno}: duplicate study_id {sid!r} (first at line {seen[sid]})"
            )
        seen[sid] = lineno
        raw_date = _text(row, "release_date")
        release = None
        if raw_date:
            try:
                release = dt.date.fromisoformat(raw_date[:10])
            except ValueError:
                raise ParseError(f"bad release_date {raw_date!r}", path, lineno) from None
        restricted = _text(row, "restricted", "0").lower()
        if restricted not in ("0", "1", "true", "false", ""):
            raise ParseError(f"bad restricted flag {restricted!r}", path, lineno)
        studies.append(StudyRecord(
            study_id=sid,
            title=_text(row, "title"),
            series_id=_text(row, "series_id") or None,
            release_date=release,
            subject_terms=_split_list(row.get("subject_terms")),
            investigators=_split_list(row.get("investigators")),
            is_restricted=restricted in ("1", "true"),
            series_title=_text(row, "series_title") or None,
        ))
    return studies


def normalize_pub_type(raw: str) -> str:
    key = raw.strip().lower()
    if key in PUB_TYPES:
        return key
    return _TYPE_ALIASES.get(key, "other")


def read_publications(path) -> list[PublicationRecord]:
    pubs = []
    seen = {}
    for lineno, row in iter_rows(path, ["publication_id", "year", "type", "for_codes"]):
        pid = _text(row, "publication_id")
        if not pid:
            raise ParseError("empty publication_id", path, lineno)
        if pid in seen:
            raise ValidationError(
                f"{path}:{lineno}: duplicate publication_id {pid!r} (first at line {seen[pid]})"
            )
        seen[pid] = lineno
        raw_year = _text(row, "year")
        year = None
        if raw_year:
            try:
                year = int(float(raw_year)) if "." in raw_year else int(raw_year)
            except ValueError:
                raise ParseError(f"bad year {raw_year!r}", path, lineno) from None
        pubs.append(PublicationRecord(
            publication_id=pid,
            year=year,
            pub_type=normalize_pub_type(_text(row, "type")),
            for_codes=_split_list(row.get("for_codes")),
        ))
    return pubs


def read_citations(path) -> tuple[list[tuple[int, CitationLink]], int]:
    """Return ``(rows, dropped)``; rows keep their line numbers for error reports."""
    rows = []
    dropped = 0
    for lineno, row in iter_rows(path, ["publication_id", "study_id"]):
        pid, sid = _text(row, "publication_id"), _text(row, "study_id")
        if not pid or not sid:
            dropped += 1
            continue
        rows.append((lineno, CitationLink(pid, sid)))
    return rows, dropped


def parse_corpus(citations_file, studies_file, publications_file) -> Corpus:
    """Parse and cross-validate the three corpus files.

    Duplicate (publication, study) rows are collapsed. Rows with an empty id
    are dropped and counted. Any id that does not resolve raises
    ValidationError naming every offending row.
    """
    studies = read_studies(studies_file)
    pubs = read_publications(publications_file)
    rows, dropped = read_citations(citations_file)

    study_ids = {s.study_id for s in studies}
    pub_ids = {p.publication_id for p in pubs}
    problems = []
    for lineno, link in rows:
        if link.study_id not in study_ids:
            problems.append(f"line {lineno}: unknown study {link.study_id!r}")
        if link.publication_id not in pub_ids:
            problems.append(f"line {lineno}: unknown publication {link.publication_id!r}")
    if problems:
        shown = "; ".join(problems[:20])
        more = f" (+{len(problems) - 20} more)" if len(problems) > 20 else ""
        raise ValidationError(f"{citations_file}: unresolvable ids: {shown}{more}")

    links = []
    seen = set()
    for _, link in rows:
        if link in seen:
            continue
        seen.add(link)
        links.append(link)

    report = IngestReport(
        citation_rows=len(rows),
        duplicate_links=len(rows) - len(links),
        dropped_rows=dropped,
    )
    log.info("parsed %d studies, %d publications, %d links (%d duplicates)",
             len(studies), len(pubs), len(links), report.duplicate_links)
    return Corpus(studies, pubs, links, report)


# -- filtering and grouping --------------------------------------------------

def filter_by_year(links, publications, min_year: int) -> list[CitationLink]:
    """Keep links whose publication appeared in or after ``min_year``.

    Links to publications without a year are kept; see
    :func:`count_year_unknown` for the tally.
    """
    if min_year < 0:
        raise ValueError("min_year must be >= 0")
    years = {p.publication_id: p.year for p in publications}
    return [l for l in links
            if years.get(l.publication_id) is None or years[l.publication_id] >= min_year]


def count_year_unknown(links, publications) -> int:
    years = {p.publication_id: p.year for p in publications}
    return sum(1 for l in links if years.get(l.publication_id) is None)


def group_into_datasets(studies) -> tuple[list[DatasetNode], dict[str, str]]:
    """Collapse studies sharing a series id into one dataset node.

    Studies without a series stay standalone. Returns the datasets (sorted by
    id) and the study -> dataset mapping.
    """
    by_series = defaultdict(list)
    standalone = []
    for s in studies:
        if s.series_id:
            by_series[s.series_id].append(s)
        else:
            standalone.append(s)

    clash = sorted(set(by_series) & {s.study_id for s in standalone})
    if clash:
        raise ValidationError(f"series ids collide with standalone study ids: {clash[:10]}")

    datasets = []
    mapping = {}
    for sid, members in by_series.items():
        members = sorted(members, key=lambda s: s.study_id)
        terms = tuple(t for m in members for t in m.subject_terms)
        invs = _split_list([i for m in members for i in m.investigators])
        name = next((m.series_title for m in members if m.series_title), None) or sid
        datasets.append(DatasetNode(sid, "series", frozenset(m.study_id for m in members),
                                    terms, name, invs))
        for m in members:
            mapping[m.study_id] = sid
    for s in standalone:
        datasets.append(DatasetNode(s.study_id, "standalone-study", frozenset([s.study_id]),
                                    s.subject_terms, s.title or s.study_id, s.investigators))
        mapping[s.study_id] = s.study_id
    datasets.sort(key=lambda d: d.dataset_id)
    return datasets, mapping


# -- field-of-research taxonomy ---------------------------------------------

class Taxonomy:
    """Field codes indexed by code, with the division table derived from them."""

    def __init__(self, codes: Iterable[FieldCode]):
        self.codes: dict[str, FieldCode] = {}
        for fc in codes:
            if fc.code in self.codes:
                raise ValidationError(f"duplicate field code {fc.code!r}")
            if not fc.code.startswith(fc.parent_code):
                raise ValidationError(
                    f"parent code {fc.parent_code!r} is not a prefix of {fc.code!r}"
                )
            self.codes[fc.code] = fc
        self.divisions = {c: fc for c, fc in self.codes.items() if fc.is_division}
        for fc in self.codes.values():
            if fc.parent_code not in self.divisions:
                self.divisions[fc.parent_code] = FieldCode(
                    fc.parent_code, fc.parent_name, fc.parent_code, fc.parent_name)

    def __contains__(self, code) -> bool:
        return code in self.codes or code in self.divisions

    def __len__(self):
        return len(self.codes)

    def name(self, code: str) -> str:
        fc = self.codes.get(code) or self.divisions.get(code)
        if fc is None:
            raise UnknownNodeError(f"unknown field code {code!r}")
        return fc.name


def read_taxonomy(path=None) -> Taxonomy:
    """Load a taxonomy file; with no path, the bundled one."""
    if path is None:
        ref = resources.files("cocite") / "data" / "for_taxonomy.csv"
        with resources.as_file(ref) as p:
            return read_taxonomy(p)
    codes = []
    for lineno, row in iter_rows(path, ["code", "name", "parent_code", "parent_name"]):
        code = _text(row, "code")
        parent = _text(row, "parent_code") or code
        if not code.isdigit() or not parent.isdigit():
            raise ParseError(f"non-numeric field code {code!r}/{parent!r}", path, lineno)
        codes.append(FieldCode(code, _text(row, "name"), parent, _text(row, "parent_name")))
    return Taxonomy(codes)


def parent_division(code: str, taxonomy: Taxonomy) -> FieldCode:
    """Return the top-level division whose code prefixes ``code``."""
    if code not in taxonomy:
        raise UnknownNodeError(f"unknown field code {code!r}")
    matches = [d for c, d in taxonomy.divisions.items() if code.startswith(c)]
    if len(matches) != 1:
        raise UnknownNodeError(
            f"field code {code!r} matches {len(matches)} divisions; expected exactly one"
        )
    return matches[0]
