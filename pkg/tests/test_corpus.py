import json

import pytest
from hypothesis import given, strategies as st

from cocite.corpus import (CitationLink, PublicationRecord, StudyRecord, Taxonomy, FieldCode,
                           count_year_unknown, filter_by_year, group_into_datasets, parent_division,
                           parse_corpus, read_taxonomy)
from cocite.errors import ParseError, UnknownNodeError, ValidationError

STUDY_HDR = "study_id,title,series_id,release_date,subject_terms,investigators,restricted\n"
PUB_HDR = "publication_id,year,type,for_codes\n"


def write_corpus(tmp_path, citations, studies=None, pubs=None):
    studies = studies or STUDY_HDR + "D1,One,,2000-01-01,crime;youth,Smith,0\nD2,Two,,2001-01-01,,Jones,1\n"
    pubs = pubs or PUB_HDR + "P1,1999,journal-article,1302\nP2,2005,report,\n"
    (tmp_path / "c.csv").write_text(citations)
    (tmp_path / "s.csv").write_text(studies)
    (tmp_path / "p.csv").write_text(pubs)
    return tmp_path / "c.csv", tmp_path / "s.csv", tmp_path / "p.csv"


def test_duplicate_links_collapse(tmp_path):
    c = parse_corpus(*write_corpus(tmp_path, "publication_id,study_id\nP1,D1\nP1,D1\nP2,D2\n"))
    assert c.links == [CitationLink("P1", "D1"), CitationLink("P2", "D2")]
    assert c.report.duplicate_links == 1
    assert c.report.citation_rows == 3


def test_unknown_study_is_named(tmp_path):
    files = write_corpus(tmp_path, "publication_id,study_id\nP1,D1\nP1,S999\n")
    with pytest.raises(ValidationError, match="S999"):
        parse_corpus(*files)


def test_malformed_row_reports_line(tmp_path):
    files = write_corpus(tmp_path, "publication_id,study_id\nP1,D1\nP2,D2,extra\n")
    with pytest.raises(ParseError) as err:
        parse_corpus(*files)
    assert err.value.line == 3


def test_bad_year_reports_line(tmp_path):
    files = write_corpus(tmp_path, "publication_id,study_id\nP1,D1\n",
                         pubs=PUB_HDR + "P1,19x9,report,\n")
    with pytest.raises(ParseError, match="line|:2"):
        parse_corpus(*files)


def test_fields_parsed(tmp_path):
    c = parse_corpus(*write_corpus(tmp_path, "publication_id,study_id\nP1,D1\n"))
    s = c.study_index()
    assert s["D1"].subject_terms == ("crime", "youth")
    assert s["D2"].is_restricted and s["D2"].subject_terms == ()
    p = c.publication_index()
    assert p["P1"].for_codes == ("1302",) and p["P2"].for_codes == ()
    assert p["P2"].pub_type == "report"


def test_jsonl_equivalent_to_csv(tmp_path):
    csv_files = write_corpus(tmp_path, "publication_id,study_id\nP1,D1\nP2,D2\n")
    a = parse_corpus(*csv_files)
    cit = tmp_path / "c.jsonl"
    cit.write_text("\n".join(json.dumps({"publication_id": p, "study_id": s})
                             for p, s in [("P1", "D1"), ("P2", "D2")]) + "\n")
    b = parse_corpus(cit, csv_files[1], csv_files[2])
    assert a.links == b.links


def test_parse_is_deterministic(fixture_dir):
    files = [fixture_dir / n for n in ("citations.csv", "studies.csv", "publications.csv")]
    a, b = parse_corpus(*files), parse_corpus(*files)
    assert a.links == b.links and a.studies == b.studies and a.publications == b.publications


def _pubs(years):
    return [PublicationRecord(f"P{i}", y) for i, y in enumerate(years)]


def test_filter_by_year_boundary_inclusive():
    pubs = _pubs([1950, 1962, 2001])
    links = [CitationLink(p.publication_id, "S") for p in pubs]
    kept = filter_by_year(links, pubs, 1962)
    assert [l.publication_id for l in kept] == ["P1", "P2"]
    assert filter_by_year(links, pubs, 0) == links


def test_filter_keeps_missing_year_and_counts_it():
    pubs = _pubs([None, 1970])
    links = [CitationLink("P0", "S"), CitationLink("P1", "S")]
    kept = filter_by_year(links, pubs, 1962)
    assert kept == links
    assert count_year_unknown(kept, pubs) == 1


@given(st.lists(st.one_of(st.none(), st.integers(1900, 2030)), max_size=30),
       st.integers(0, 2100), st.integers(0, 2100))
def test_filter_idempotent_and_monotone(years, y1, y2):
    pubs = _pubs(years)
    links = [CitationLink(p.publication_id, "S") for p in pubs]
    once = filter_by_year(links, pubs, y1)
    assert filter_by_year(once, pubs, y1) == once
    lo, hi = sorted((y1, y2))
    assert set(filter_by_year(links, pubs, hi)) <= set(filter_by_year(links, pubs, lo))


def test_grouping_by_series():
    studies = [StudyRecord("S1", series_id="A", subject_terms=("x",)),
               StudyRecord("S2", series_id="A", subject_terms=("x", "y")),
               StudyRecord("S3")]
    ds, mapping = group_into_datasets(studies)
    assert [(d.dataset_id, d.kind, set(d.member_study_ids)) for d in ds] == [
        ("A", "series", {"S1", "S2"}), ("S3", "standalone-study", {"S3"})]
    assert ds[0].subject_terms == ("x", "x", "y")
    assert mapping == {"S1": "A", "S2": "A", "S3": "S3"}
    assert group_into_datasets([]) == ([], {})


def test_single_member_series_is_still_series():
    ds, _ = group_into_datasets([StudyRecord("S1", series_id="A")])
    assert ds[0].kind == "series"


@given(st.lists(st.tuples(st.integers(0, 40), st.one_of(st.none(), st.sampled_from("ABC"))),
                unique_by=lambda t: t[0], max_size=25))
def test_grouping_is_partition(pairs):
    studies = [StudyRecord(f"s{i}", series_id=ser) for i, ser in pairs]
    ds, mapping = group_into_datasets(studies)
    members = [m for d in ds for m in d.member_study_ids]
    assert sorted(members) == sorted(s.study_id for s in studies)
    assert set(mapping) == {s.study_id for s in studies}


def test_parent_division_bundled_taxonomy():
    tax = read_taxonomy()
    cp = next(fc for fc in tax.codes.values() if fc.name == "Curriculum and Pedagogy")
    assert parent_division(cp.code, tax).name == "Education"
    assert parent_division("1303", tax).code == "13"
    assert parent_division("13", tax).code == "13"
    assert len(tax.divisions) == 22
    with pytest.raises(UnknownNodeError):
        parent_division("9999", tax)


def test_bundled_taxonomy_prefix_rule_holds():
    tax = read_taxonomy()
    for code, fc in tax.codes.items():
        assert code.startswith(fc.parent_code)
        assert parent_division(code, tax).code == fc.parent_code


def test_taxonomy_rejects_non_prefix_parent():
    with pytest.raises(ValidationError):
        Taxonomy([FieldCode("1303", "x", "14", "Economics")])
