"""Write the small synthetic corpus under fixtures/synthetic/.

Planted structure in the thresholded dataset network (k=3):
  * community X = {SA, S01, S02, S03} (a K4) plus a pendant S06 on S01
  * community Y = {SA, S04, S05} (a triangle) sharing only SA with X
  * an isolated triangle Z = {SB, S08, S09}
  * weight-1 co-citations (SC-S10, S11-S12) that the threshold removes
  * a pre-1962 pair S10-S11 that the year filter removes
  * a year-unknown pair S12-S13 that survives the filter

Usage: python scripts/make_fixture.py [outdir]
"""
import csv
import sys
from pathlib import Path

OUT = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "fixtures" / "synthetic"

STUDIES = [
    # study_id, title, series_id, series_title, release, terms, investigators, restricted
    ("A1", "Crime Panel Wave 1", "SA", "Crime and Politics Panel Series", "1990-01-15",
     ["crime", "victimization", "elections"], ["Rivera, J."], 0),
    ("A2", "Crime Panel Wave 2", "SA", "Crime and Politics Panel Series", "1994-03-02",
     ["crime", "police", "voting"], ["Rivera, J."], 0),
    ("A3", "Crime Panel Wave 3", "SA", "Crime and Politics Panel Series", "1998-06-30",
     ["elections", "voting", "crime"], ["Rivera, J.", "Okafor, T."], 1),
    ("B1", "Plantation Records I", "SB", "Plantation Records Series", "1985-09-09",
     ["slavery", "antebellum south"], ["Hall, M."], 0),
    ("B2", "Plantation Records II", "SB", "Plantation Records Series", "1987-09-09",
     ["slavery", "slave labor"], ["Hall, M."], 0),
    ("C1", "Household Budget 1980", "SC", "Household Budget Series", "1982-02-01",
     ["income", "consumption"], ["Statistics Office"], 0),
    ("C2", "Household Budget 1990", "SC", "Household Budget Series", "1992-02-01",
     ["income", "employment"], ["Statistics Office"], 0),
    ("S01", "City Policing Survey", None, None, "1991-05-05", ["police", "crime"], ["Ng, L."], 0),
    ("S02", "Victim Interviews", None, None, "1993-05-05", ["victimization", "crime"], ["Ng, L."], 0),
    ("S03", "Court Dispositions", None, None, "1995-05-05", ["courts", "police"], ["Berg, K."], 1),
    ("S04", "Exit Poll 1996", None, None, "1997-11-11", ["elections", "public opinion"], ["Dale, P."], 0),
    ("S05", "Voter Attitudes", None, None, "1999-11-11", ["public opinion", "voting"], ["Dale, P."], 0),
    ("S06", "Patrol Logs", None, None, "2001-01-01", ["police"], ["Berg, K."], 0),
    ("S07", "Youth Leisure Diary", None, None, "2003-01-01", ["youth", "leisure"], ["Kim, S."], 0),
    ("S08", "Southern Farms Sample", None, None, "1980-04-04", ["antebellum south", "agriculture"], ["Wolf, A."], 0),
    ("S09", "Slave Sale Records", None, None, "1981-04-04", ["slavery", "slave labor"], ["Frey, U."], 0),
    ("S10", "Labor Force Extract", None, None, "1970-07-07", ["employment", "income"], ["Statistics Office"], 0),
    ("S11", "Wage Survey", None, None, "1972-07-07", ["income", "wages"], ["Statistics Office"], 0),
    ("S12", "Health Interview Extract", None, None, "2005-08-08", ["health"], ["Cho, R."], 0),
    ("S13", "Clinic Visits", None, None, "2006-08-08", ["health", "hospitals"], ["Cho, R."], 0),
]

CRIM, SOC, POL, PSY, HIST, ECON, PH, APPL = "1602", "1608", "1606", "1701", "2103", "1402", "1117", "1403"

# publication_id, year, type, for_codes, cited studies
PUBS = [
    ("P01", 1995, "journal-article", [CRIM, SOC], ["A1", "S01", "S02", "S03"]),
    ("P02", 1999, "journal-article", [CRIM, SOC], ["A2", "S01", "S02", "S03"]),
    ("P03", 2000, "journal-article", [POL, SOC], ["A3", "S04", "S05"]),
    ("P04", 2002, "report", [POL, PSY], ["A1", "S04", "S05"]),
    ("P05", 2003, "journal-article", [CRIM], ["S01", "S06"]),
    ("P06", 2004, "thesis", [CRIM, SOC], ["S01", "S06"]),
    ("P07", 1990, "journal-article", [HIST, ECON], ["B1", "S08", "S09"]),
    ("P08", 1992, "book", [HIST, ECON], ["B2", "S08", "S09"]),
    ("P09", 1996, "chapter", [HIST], ["B1", "S08", "S09"]),
    ("P10", 1985, "journal-article", [ECON], ["C1", "S10"]),
    ("P11", 2008, "journal-article", [ECON, APPL], ["S11", "S12"]),
    ("P12", 1955, "journal-article", [ECON], ["S10", "S11"]),
    ("P13", 1958, "report", [ECON], ["S10", "S11"]),
    ("P14", None, "report", [PH], ["S12", "S13"]),
    ("P15", None, "other", [PH, PSY], ["S12", "S13"]),
]
# Single-dataset citations: (study, number of publications, field codes)
SOLO = [
    ("A1", 11, [CRIM, SOC]), ("A2", 8, [CRIM, SOC]), ("A3", 6, [POL, SOC]),
    ("B1", 3, [HIST]), ("B2", 2, [HIST, ECON]),
    ("C1", 4, [ECON, APPL]), ("C2", 1, [ECON]),
    ("S07", 2, [PSY, SOC]), ("S13", 5, [PH, PSY]), ("S04", 2, [POL]),
]


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    pubs = list(PUBS)
    n = len(pubs)
    for sid, count, codes in SOLO:
        for i in range(count):
            n += 1
            pubs.append((f"P{n:02d}", 1965 + (n * 7) % 55, "journal-article", codes, [sid]))

    with open(OUT / "studies.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["study_id", "title", "series_id", "series_title", "release_date",
                    "subject_terms", "investigators", "restricted"])
        for sid, title, ser, stitle, rel, terms, invs, restr in STUDIES:
            w.writerow([sid, title, ser or "", stitle or "", rel, ";".join(terms), ";".join(invs), restr])

    with open(OUT / "publications.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["publication_id", "year", "type", "for_codes"])
        for pid, year, typ, codes, _ in pubs:
            w.writerow([pid, "" if year is None else year, typ, ";".join(codes)])

    with open(OUT / "citations.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["publication_id", "study_id"])
        for pid, _, _, _, cited in pubs:
            for sid in cited:
                w.writerow([pid, sid])
        w.writerow(["P01", "A1"])  # duplicate row, collapsed on ingest

    (OUT / "config.txt").write_text(
        "# synthetic fixture\n"
        "citations = citations.csv\n"
        "studies = studies.csv\n"
        "publications = publications.csv\n"
        "min_year = 1962\n"
        "s_min_weight = 2\n"
        "f_min_weight = 5\n"
        "k = 3\n"
        "louvain_seed = 0\n"
        "jenks_classes = 3\n"
        "layout_iterations = 200\n"
        "layout_seed = 0\n",
        encoding="utf-8",
    )
    print(f"wrote {len(pubs)} publications, {len(STUDIES)} studies to {OUT}")


if __name__ == "__main__":
    main()
