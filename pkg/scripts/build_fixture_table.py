"""Regenerate the bundled fixture table and the test corpus.

Names, DT codes, slice status and 4-genus values come from the KnotInfo
database (``pip install database_knotinfo``).  Every invariant column of the
fixture table is recomputed here with cforge's own code.  The test corpus
keeps KnotInfo's invariant values verbatim, so tests can use them as an
independent reference.
"""

from __future__ import annotations

import argparse
import csv
import re
from pathlib import Path

import database_knotinfo

from cforge.diagram import realize_dt
from cforge.invariants import fingerprint, jones
from cforge.poly import LaurentPoly
from cforge.tables import GenusRange, KnotRecord, write_table

ROOT = Path(__file__).resolve().parents[1]

NAMED = ["6_1", "8_8", "8_20", "10_75", "10_87", "10_137", "K11n74", "K12n256"]
SOURCES_DOWN = [
    "K11n80", "K12a187", "K12a230", "K12a317", "K12a450", "K12a570", "K12a624",
    "K12a636", "K12a905", "K12a1189", "K12a1208", "K12n52", "K12n63", "K12n225",
    "K12n555", "K12n558", "K12n665", "K12n886",
]
SOURCES_UP = ["K12a153", "K12n239", "K12n512"]
# 4-genus of the source knots before the genus-one concordance searches
OPEN_RANGE = "[1,2]"


def table_name(name: str) -> str:
    m = re.match(r"^(1[1-9])([an])_(\d+)$", name)
    return f"K{m.group(1)}{m.group(2)}{m.group(3)}" if m else name


def knotinfo_rows() -> dict[str, dict]:
    rows = database_knotinfo.link_list()[1:]
    return {table_name(r["name"]): r for r in rows if r.get("name")}


def first_braid(text: str) -> str:
    text = text.strip()
    if text.startswith("[["):
        return text[1:text.index("]") + 1]
    return text


def fixture_record(name: str, row: dict) -> KnotRecord:
    g4 = GenusRange.parse(row["smooth_four_genus"])
    g4_top = GenusRange.parse(row["topological_four_genus"])
    if name in SOURCES_DOWN or name in SOURCES_UP:
        g4 = GenusRange.parse(OPEN_RANGE)
    dt = row["dt_notation"].strip()
    if not dt:
        one = LaurentPoly([1])
        return KnotRecord(name, 0, None, one, 0, 1, one, True, GenusRange.exact(0), GenusRange.exact(0))
    d = realize_dt(dt)
    fp = fingerprint(d)
    return KnotRecord(
        name=name,
        crossing_number=int(row["crossing_number"]),
        dt_code=dt.replace(" ", ""),
        alexander=fp.alexander,
        signature=fp.signature,
        determinant=fp.determinant,
        jones=jones(d),
        is_slice=g4 is not None and g4.hi == 0,
        g4=g4,
        g4_top=g4_top,
    )


def build_fixture(rows: dict[str, dict]) -> list[KnotRecord]:
    names = [n for n, r in rows.items() if r["crossing_number"] and int(r["crossing_number"]) <= 8]
    for n in NAMED + SOURCES_DOWN + SOURCES_UP:
        if n not in names:
            names.append(n)
    return [fixture_record(n, rows[n]) for n in names]


def build_corpus(rows: dict[str, dict], max_crossings: int) -> list[dict]:
    out = []
    for name, r in rows.items():
        if not r["dt_notation"] or int(r["crossing_number"]) > max_crossings:
            continue
        out.append({
            "name": name,
            "crossings": r["crossing_number"],
            "alternating": r["alternating"],
            "dt": r["dt_notation"].replace(" ", ""),
            "braid": first_braid(r["braid_notation"]).replace(" ", ""),
            "signature": r["signature"],
            "determinant": r["determinant"],
            "alexander": r["alexander_polynomial"],
            "jones": r["jones_polynomial"],
            "g4": r["smooth_four_genus"],
        })
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--table", default=ROOT / "src/cforge/data/fixture_table.csv", type=Path)
    ap.add_argument("--corpus", default=ROOT / "tests/data/knotinfo_corpus.csv", type=Path)
    ap.add_argument("--corpus-crossings", default=10, type=int)
    args = ap.parse_args(argv)
    rows = knotinfo_rows()
    records = build_fixture(rows)
    write_table(records, args.table)
    corpus = build_corpus(rows, args.corpus_crossings)
    with open(args.corpus, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(corpus[0]))
        w.writeheader()
        w.writerows(corpus)
    print(f"{len(records)} fixture records, {len(corpus)} corpus knots")


if __name__ == "__main__":
    main()
