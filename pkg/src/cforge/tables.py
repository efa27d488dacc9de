"""Reference knot tables, the certified target list, and the findings store."""

from __future__ import annotations

import csv
import fcntl
import io
import json
import logging
import os
import re
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .invariants import InvariantFingerprint
from .poly import LaurentPoly, parse_poly

log = logging.getLogger(__name__)

TABLE_COLUMNS = ("name", "crossings", "dt", "alexander", "signature", "determinant", "slice", "g4", "g4_top")
DATA_DIR = Path(__file__).resolve().parent / "data"


class TableError(ValueError):
    """Invalid table, target list or findings file."""


# -- genus values ----------------------------------------------------------------

_RANGE_RE = re.compile(r"^\[\s*(\d+)\s*,\s*(\d*)\s*\]$")


@dataclass(frozen=True)
class GenusRange:
    """Known bounds lo <= g <= hi; ``hi`` is None when unbounded."""

    lo: int
    hi: int | None

    def __post_init__(self):
        if self.lo < 0 or (self.hi is not None and self.hi < self.lo):
            raise TableError(f"invalid genus range [{self.lo},{self.hi}]")

    @classmethod
    def exact(cls, g: int) -> GenusRange:
        return cls(g, g)

    @classmethod
    def parse(cls, text: str) -> GenusRange | None:
        text = text.strip()
        if not text:
            return None
        if text.isdigit():
            return cls.exact(int(text))
        m = _RANGE_RE.match(text)
        if not m:
            raise TableError(f"cannot parse genus value {text!r}")
        return cls(int(m.group(1)), int(m.group(2)) if m.group(2) else None)

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def __str__(self):
        if self.is_exact:
            return str(self.lo)
        return f"[{self.lo},{'' if self.hi is None else self.hi}]"


# -- records ---------------------------------------------------------------------


@dataclass(frozen=True)
class KnotRecord:
    name: str
    crossing_number: int
    dt_code: str | None
    alexander: LaurentPoly
    signature: int
    determinant: int
    jones: LaurentPoly | None
    is_slice: bool
    g4: GenusRange | None
    g4_top: GenusRange | None

    def __post_init__(self):
        if self.determinant != abs(self.alexander(-1)):
            raise TableError(f"{self.name}: determinant does not match the Alexander polynomial")
        half = abs(self.signature) // 2
        if self.g4 is not None:
            if self.g4.hi is not None and self.g4.hi < half:
                raise TableError(f"{self.name}: g4 {self.g4} is below |signature|/2 = {half}")
            if self.is_slice and self.g4.lo != 0:
                raise TableError(f"{self.name}: marked slice but g4 is {self.g4}")
        if self.g4 is not None and self.g4_top is not None:
            if self.g4.hi is not None and self.g4_top.lo > self.g4.hi:
                raise TableError(f"{self.name}: topological genus exceeds smooth genus")

    @property
    def fingerprint(self) -> InvariantFingerprint:
        return InvariantFingerprint(self.alexander, self.signature, self.determinant, self.jones)

    @property
    def g4_lower(self) -> int:
        """Best lower bound: the table value or |signature|/2."""
        lo = self.g4.lo if self.g4 is not None else 0
        return max(lo, abs(self.signature) // 2)

    @property
    def g4_upper(self) -> int | None:
        return None if self.g4 is None else self.g4.hi

    def to_row(self) -> dict:
        return {
            "name": self.name,
            "crossings": self.crossing_number,
            "dt": self.dt_code or "",
            "alexander": str(self.alexander),
            "signature": self.signature,
            "determinant": self.determinant,
            "slice": "true" if self.is_slice else "false",
            "g4": "" if self.g4 is None else str(self.g4),
            "g4_top": "" if self.g4_top is None else str(self.g4_top),
            "jones": "" if self.jones is None else str(self.jones),
        }


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("true", "yes", "1", "y"):
        return True
    if t in ("false", "no", "0", "n", ""):
        return False
    raise TableError(f"cannot parse boolean {text!r}")


def record_from_row(row: dict) -> KnotRecord:
    try:
        jones_text = (row.get("jones") or "").strip()
        return KnotRecord(
            name=row["name"].strip(),
            crossing_number=int(row["crossings"]),
            dt_code=(row.get("dt") or "").strip() or None,
            alexander=parse_poly(row["alexander"]),
            signature=int(row["signature"]),
            determinant=int(row["determinant"]),
            jones=parse_poly(jones_text) if jones_text else None,
            is_slice=_parse_bool(row.get("slice") or ""),
            g4=GenusRange.parse(row.get("g4") or ""),
            g4_top=GenusRange.parse(row.get("g4_top") or ""),
        )
    except (KeyError, TypeError) as exc:
        raise TableError(f"missing field {exc}") from exc
    except ValueError as exc:
        raise TableError(str(exc)) from exc


# -- the index -------------------------------------------------------------------


@dataclass(frozen=True)
class Match:
    record: KnotRecord
    mirrored: bool


@dataclass(frozen=True)
class LookupResult:
    matches: tuple[Match, ...]

    @property
    def status(self) -> str:
        names = {m.record.name for m in self.matches}
        if not names:
            return "none"
        return "unique" if len(names) == 1 else "collision"

    @property
    def unique(self) -> Match | None:
        return self.matches[0] if self.status == "unique" else None

    @property
    def names(self) -> list[str]:
        return sorted({m.record.name for m in self.matches})


@dataclass
class IngestReport:
    rows: int = 0
    skipped: list[tuple[int, str]] = field(default_factory=list)


class KnotTable:
    """Records indexed by name and by fingerprint key."""

    def __init__(self, records: Iterable[KnotRecord] = ()):
        self.records: list[KnotRecord] = []
        self.by_name: dict[str, KnotRecord] = {}
        self.by_key: dict[tuple, list[KnotRecord]] = {}
        for r in records:
            self.add(r)
        self.report = IngestReport(rows=len(self.records))

    def add(self, r: KnotRecord) -> None:
        if r.name in self.by_name:
            raise TableError(f"duplicate knot name {r.name!r}")
        self.records.append(r)
        self.by_name[r.name] = r
        self.by_key.setdefault(r.fingerprint.key, []).append(r)

    def __len__(self):
        return len(self.records)

    def __contains__(self, name: str):
        return name in self.by_name

    def __getitem__(self, name: str) -> KnotRecord:
        return self.by_name[name]

    @property
    def collision_classes(self) -> list[list[str]]:
        """Groups of records that share a fingerprint up to mirror image."""
        seen: set[tuple] = set()
        out = []
        for key, recs in self.by_key.items():
            if key in seen:
                continue
            alex, sig, det = key
            mkey = (alex, -sig, det)
            seen.update((key, mkey))
            names = {r.name for r in recs} | {r.name for r in self.by_key.get(mkey, [])}
            if len(names) > 1:
                out.append(sorted(names))
        return sorted(out)

    def lookup(self, fp: InvariantFingerprint) -> LookupResult:
        """Records matching ``fp`` or its mirror image.  When ``fp`` carries a
        Jones polynomial it is used to discard candidates."""
        out: list[Match] = []
        seen: set[tuple[str, bool]] = set()
        for mirrored, probe in ((False, fp), (True, fp.mirror())):
            for r in self.by_key.get(probe.key, []):
                if (r.name, False) in seen:
                    continue
                if probe.jones is not None and r.jones is not None and probe.jones != r.jones:
                    continue
                seen.add((r.name, mirrored))
                out.append(Match(r, mirrored))
        return LookupResult(tuple(out))


def ingest_table(path: str | os.PathLike | None, fmt: str = "csv") -> KnotTable:
    """Load a CSV table.  Malformed rows are skipped and reported with line
    numbers; duplicate names are an error."""
    if fmt != "csv":
        raise TableError(f"unsupported table format {fmt!r}")
    if path is None:
        path = DATA_DIR / "fixture_table.csv"
    text = Path(path).read_text()
    return ingest_table_text(text, str(path))


def ingest_table_text(text: str, source: str = "<string>") -> KnotTable:
    table = KnotTable()
    if not text.strip():
        return table
    reader = csv.DictReader(io.StringIO(text))
    missing = [c for c in TABLE_COLUMNS if c not in (reader.fieldnames or [])]
    if missing:
        raise TableError(f"{source}: missing columns {', '.join(missing)}")
    report = IngestReport()
    for row in reader:
        line = reader.line_num
        report.rows += 1
        try:
            rec = record_from_row(row)
        except TableError as exc:
            report.skipped.append((line, str(exc)))
            log.warning("%s:%d: skipped row: %s", source, line, exc)
            continue
        table.add(rec)
    table.report = report
    return table


def write_table(records: Iterable[KnotRecord], path: str | os.PathLike) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=[*TABLE_COLUMNS, "jones"])
        w.writeheader()
        for r in records:
            w.writerow(r.to_row())


# -- target list -----------------------------------------------------------------


@dataclass(frozen=True)
class TargetEntry:
    """A knot with certified smooth 4-genus at least |signature|/2 + 1."""

    name: str
    dt_code: str
    fingerprint: InvariantFingerprint
    gram: tuple[tuple[int, ...], ...]
    dim: int
    certificate: dict
    mirrored: bool = False
    g4_top: GenusRange | None = None

    @property
    def g4_lower(self) -> int:
        return abs(self.fingerprint.signature) // 2 + 1

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "dt": self.dt_code,
            "fingerprint": self.fingerprint.to_json(),
            "gram": [list(r) for r in self.gram],
            "dim": self.dim,
            "certificate": self.certificate,
            "mirrored": self.mirrored,
            "g4_top": None if self.g4_top is None else str(self.g4_top),
        }

    @classmethod
    def from_json(cls, obj: dict) -> TargetEntry:
        fp = obj["fingerprint"]
        return cls(
            name=obj["name"],
            dt_code=obj["dt"],
            fingerprint=InvariantFingerprint(
                parse_poly(fp["alexander"]), int(fp["signature"]), int(fp["determinant"]),
                parse_poly(fp["jones"]) if fp.get("jones") else None,
            ),
            gram=tuple(tuple(r) for r in obj["gram"]),
            dim=int(obj["dim"]),
            certificate=obj["certificate"],
            mirrored=bool(obj.get("mirrored", False)),
            g4_top=GenusRange.parse(obj["g4_top"]) if obj.get("g4_top") else None,
        )


@dataclass
class TargetList:
    entries: list[TargetEntry] = field(default_factory=list)
    failures: list[tuple[str, str]] = field(default_factory=list)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def names(self) -> list[str]:
        return [e.name for e in self.entries]

    def lookup(self, fp: InvariantFingerprint) -> list[tuple[TargetEntry, bool]]:
        """(entry, mirrored) pairs for entries matching ``fp`` up to mirror image."""
        out = []
        for e in self.entries:
            for mirrored, probe in ((False, fp), (True, fp.mirror())):
                if probe.key == e.fingerprint.key:
                    out.append((e, mirrored))
                    break
        return out

    def save(self, path: str | os.PathLike) -> None:
        with open(path, "w") as fh:
            for e in self.entries:
                fh.write(json.dumps(e.to_json(), sort_keys=True) + "\n")

    @classmethod
    def load(cls, path: str | os.PathLike) -> TargetList:
        out = cls()
        for lineno, obj in _read_jsonl(path):
            try:
                out.entries.append(TargetEntry.from_json(obj))
            except (KeyError, ValueError, TypeError) as exc:
                raise TableError(f"{path}:{lineno}: bad target entry: {exc}") from exc
        return out


def read_dt_list(path: str | os.PathLike) -> list[tuple[str, str]]:
    """Lines of ``name DT`` or bare DT codes (named by line number)."""
    out = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("["):
            out.append((f"line{lineno}", line))
            continue
        name, _, code = line.partition(" ")
        name = name.rstrip(":,")
        code = code.strip().lstrip(":").strip()
        if not code.startswith("["):
            raise TableError(f"{path}:{lineno}: expected a DT code")
        out.append((name, code))
    return out


def evaluate_target(name: str, dt: str, budget_nodes: int | None = None,
                    budget_seconds: float | None = None, required_abs_signature: int = 4):
    """Certify one candidate.  Returns (TargetEntry or None, reason)."""
    from .diagram import realize_dt
    from .goeritz import gl_signature, goeritz_matrix
    from .invariants import fingerprint
    from .lattice import INCONCLUSIVE, embeds

    d = realize_dt(dt)
    sig = gl_signature(d)
    if abs(sig) != required_abs_signature:
        return None, f"signature {sig}"
    mirrored = sig > 0
    if mirrored:
        # a DT code fixes the knot only up to mirror image; use the sigma < 0 chirality
        d = d.mirror()
        sig = -sig
    inconclusive = False
    for cid in (0, 1):
        form = goeritz_matrix(d, cid)
        if not form.size or not form.positive_definite():
            continue
        cert = embeds(form.matrix, form.size - sig, budget_nodes, budget_seconds)
        if cert.is_exhausted:
            fp = fingerprint(d)
            return TargetEntry(name, dt, fp, form.matrix, form.size - sig, cert.to_json(), mirrored), "certified"
        if cert.outcome == INCONCLUSIVE:
            inconclusive = True
    if inconclusive:
        return None, "inconclusive"
    return None, "embeds"


def build_target_list(candidates: Iterable[tuple[str, str]], budget_nodes: int | None = None,
                      budget_seconds: float | None = None, progress=None) -> TargetList:
    """Keep the signature -4 candidates whose positive-definite Goeritz form
    does not embed in the cubic lattice of dimension m + 4."""
    out = TargetList()
    for name, dt in candidates:
        t0 = time.monotonic()
        try:
            entry, reason = evaluate_target(name, dt, budget_nodes, budget_seconds)
        except Exception as exc:  # one bad candidate never stops the stream
            log.warning("target candidate %s failed: %s", name, exc)
            out.failures.append((name, str(exc)))
            entry, reason = None, f"error: {exc}"
        if entry is not None:
            out.entries.append(entry)
        elif reason == "inconclusive":
            out.failures.append((name, reason))
        if progress is not None:
            progress(name, reason, time.monotonic() - t0)
    return out


def bundled_targets() -> TargetList:
    return TargetList.load(DATA_DIR / "targets.jsonl")


# -- findings --------------------------------------------------------------------

INFER_DOWN = "g4=1 pulled down"
INFER_UP = "g4=2 pulled up"
INFER_NONE = "none"


@dataclass(frozen=True)
class ConcordanceFinding:
    source_knot: str
    source_representation: dict
    move: dict
    result_fingerprint: dict
    result_match: str
    result_mirrored: bool
    inference: str
    provenance: dict
    seed: int | None
    timestamp: float = field(default=0.0, compare=False)

    def to_json(self) -> dict:
        return {
            "source_knot": self.source_knot,
            "source_representation": self.source_representation,
            "move": self.move,
            "result_fingerprint": self.result_fingerprint,
            "result_match": self.result_match,
            "result_mirrored": self.result_mirrored,
            "inference": self.inference,
            "provenance": self.provenance,
            "seed": self.seed,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_json(cls, obj: dict) -> ConcordanceFinding:
        return cls(
            source_knot=obj["source_knot"],
            source_representation=obj["source_representation"],
            move=obj["move"],
            result_fingerprint=obj["result_fingerprint"],
            result_match=obj["result_match"],
            result_mirrored=bool(obj["result_mirrored"]),
            inference=obj["inference"],
            provenance=obj["provenance"],
            seed=obj.get("seed"),
            timestamp=float(obj.get("timestamp", 0.0)),
        )

    def canonical(self) -> str:
        """Serialization without the timestamp, used for sorting and comparison."""
        obj = self.to_json()
        del obj["timestamp"]
        return json.dumps(obj, sort_keys=True)


def canonical_order(findings: Iterable[ConcordanceFinding]) -> list[ConcordanceFinding]:
    return sorted(findings, key=lambda f: f.canonical())


def persist_findings(findings: Iterable[ConcordanceFinding], path: str | os.PathLike) -> int:
    """Append findings as JSON lines under an exclusive lock; returns the count."""
    lines = [json.dumps(f.to_json(), sort_keys=True) + "\n" for f in findings]
    with open(path, "a") as fh:
        fcntl.flock(fh, fcntl.LOCK_EX)
        try:
            fh.write("".join(lines))
            fh.flush()
        finally:
            fcntl.flock(fh, fcntl.LOCK_UN)
    return len(lines)


def _read_jsonl(path) -> Iterator[tuple[int, dict]]:
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise TableError(f"{path}:{lineno}: malformed JSON: {exc.msg}") from exc
            if not isinstance(obj, dict):
                raise TableError(f"{path}:{lineno}: expected a JSON object")
            yield lineno, obj


def load_findings(path: str | os.PathLike) -> list[ConcordanceFinding]:
    out = []
    for lineno, obj in _read_jsonl(path):
        try:
            out.append(ConcordanceFinding.from_json(obj))
        except (KeyError, ValueError, TypeError) as exc:
            raise TableError(f"{path}:{lineno}: bad finding: {exc}") from exc
    return out
