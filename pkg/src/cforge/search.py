"""Pull-down and pull-up searches, identification, and finding audits."""

from __future__ import annotations

import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .braid import BraidWord, diversify, parse_braid
from .diagram import Diagram, parse_dt, parse_pd, realize_dt
from .invariants import JONES_CROSSING_BUDGET, InvariantFingerprint, NotAKnotError, fingerprint, jones
from .invariants import alexander as alexander_of
from .invariants import signature as signature_of
from .invariants import determinant as determinant_of
from .moves import (
    ALL_KINDS,
    DEFAULT_DERES_SAMPLES,
    PD_KINDS,
    ConcordanceMove,
    EnumerationStats,
    MoveError,
    apply_move,
    enumerate_moves,
    enumerate_pd_moves,
    pd_apply_move,
)
from .tables import (
    INFER_DOWN,
    INFER_NONE,
    INFER_UP,
    ConcordanceFinding,
    KnotTable,
    LookupResult,
    TargetList,
    canonical_order,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchConfig:
    seed: int = 0
    workers: int = 1
    deres_samples: int = DEFAULT_DERES_SAMPLES
    diagrams: int = 1
    diversify_steps: tuple[int, int] = (2, 6)
    kinds: tuple[str, ...] = ALL_KINDS
    table_path: str | None = None
    targets_path: str | None = None
    budget_nodes: int | None = None
    budget_seconds: float | None = None
    chunk_size: int = 64

    def __post_init__(self):
        if self.seed is None:
            raise ValueError("a seed is required")
        for name in ("workers", "diagrams", "chunk_size"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.deres_samples < 0:
            raise ValueError("deres_samples must be nonnegative")
        lo, hi = self.diversify_steps
        if not 0 <= lo <= hi:
            raise ValueError("invalid diversify step range")


# -- representations -------------------------------------------------------------


@dataclass(frozen=True)
class Representation:
    """A braid word or a diagram standing for one knot."""

    kind: str  # "braid" | "dt" | "pd"
    code: str

    @classmethod
    def braid(cls, b: BraidWord | str) -> Representation:
        return cls("braid", str(b) if isinstance(b, BraidWord) else str(parse_braid(b)))

    @classmethod
    def dt(cls, text: str) -> Representation:
        return cls("dt", str(parse_dt(text)))

    @classmethod
    def pd(cls, text: str) -> Representation:
        return cls("pd", str(parse_pd(text)))

    def obj(self) -> BraidWord | Diagram:
        if self.kind == "braid":
            return parse_braid(self.code)
        if self.kind == "dt":
            return realize_dt(self.code)
        if self.kind == "pd":
            return Diagram.from_pd(self.code)
        raise ValueError(f"unknown representation kind {self.kind!r}")

    def to_json(self) -> dict:
        return {"type": self.kind, "code": self.code}


def parse_knot_input(text: str, kind: str = "auto") -> Representation:
    """Braid ``[e1,...]``, DT ``[..]`` or PD ``X[a,b,c,d]`` text."""
    text = text.strip()
    if kind == "auto":
        if "X" in text or "[[" in text:
            kind = "pd"
        else:
            body = text.strip("[] \n")
            vals = [int(t) for t in body.split(",") if t.strip()] if body else []
            n = len(vals)
            if n and all(v % 2 == 0 for v in vals) and sorted(abs(v) for v in vals) == list(range(2, 2 * n + 1, 2)):
                kind = "dt"
            else:
                kind = "braid"
    if kind == "braid":
        return Representation.braid(text)
    if kind == "dt":
        return Representation.dt(text)
    if kind == "pd":
        return Representation.pd(text)
    raise ValueError(f"unknown input kind {kind!r}")


# -- identification --------------------------------------------------------------


@dataclass(frozen=True)
class Identification:
    fingerprint: InvariantFingerprint
    result: LookupResult
    jones_used: bool = False

    @property
    def status(self) -> str:
        return self.result.status

    @property
    def label(self) -> str:
        if self.status == "unique":
            return self.result.matches[0].record.name
        if self.status == "collision":
            return "candidates:" + "|".join(self.result.names)
        return "unidentified"

    @property
    def mirrored(self) -> bool:
        return self.status == "unique" and self.result.matches[0].mirrored

    def to_json(self) -> dict:
        return {
            "fingerprint": self.fingerprint.to_json(),
            "status": self.status,
            "match": self.label,
            "matches": [{"name": m.record.name, "mirrored": m.mirrored} for m in self.result.matches],
            "jones_used": self.jones_used,
        }


def _crossings(x) -> int:
    return len(x) if isinstance(x, BraidWord) else x.n_crossings


def identify(x: BraidWord | Diagram, table: KnotTable, fp: InvariantFingerprint | None = None) -> Identification:
    """Fingerprint lookup; collisions are retried with the Jones polynomial
    when the input is small enough."""
    if fp is None:
        fp = fingerprint(x)
    res = table.lookup(fp)
    if res.status != "collision":
        return Identification(fp, res)
    if _crossings(x) > JONES_CROSSING_BUDGET:
        d = x if isinstance(x, Diagram) else None
        if d is None or d.reduced().n_crossings > JONES_CROSSING_BUDGET:
            return Identification(fp, res)
    fpj = fp.with_jones(jones(x))
    return Identification(fpj, table.lookup(fpj), jones_used=True)


def cmd_identify(text: str, table: KnotTable, kind: str = "auto") -> dict:
    rep = parse_knot_input(text, kind)
    ident = identify(rep.obj(), table)
    out = {"input": rep.to_json(), **ident.to_json()}
    if ident.status == "collision":
        out["collision_class"] = ident.result.names
    return out


# -- worker plumbing -------------------------------------------------------------

_STATE: dict = {}


def _init_worker(table: KnotTable, targets: TargetList | None):
    _STATE["table"] = table
    _STATE["targets"] = targets
    _STATE["table_alex"] = {r.alexander for r in table.records}
    _STATE["target_alex"] = {e.fingerprint.alexander for e in targets} if targets else set()


def _fingerprint_filtered(x, allowed: set) -> InvariantFingerprint | None:
    """Fingerprint, or None when the Alexander polynomial rules out every
    record of interest (saves the signature computation)."""
    try:
        alex = alexander_of(x)
    except NotAKnotError:
        return None
    if alex not in allowed:
        return None
    return InvariantFingerprint(alex, signature_of(x), determinant_of(alex))


@dataclass(frozen=True)
class _Item:
    rep_index: int
    rep: Representation
    move: ConcordanceMove
    result: str  # braid text or PD text of the result
    result_kind: str
    role: str = "source"  # or "partner"
    partner: str | None = None


def _evaluate_chunk(items: Sequence[_Item], mode: str) -> list[tuple[_Item, dict]]:
    table: KnotTable = _STATE["table"]
    targets: TargetList | None = _STATE["targets"]
    out = []
    for it in items:
        x = parse_braid(it.result) if it.result_kind == "braid" else Diagram.from_pd(it.result)
        if mode == "down":
            fp = _fingerprint_filtered(x, _STATE["table_alex"])
            if fp is None:
                continue
            ident = identify(x, table, fp)
            if ident.status == "none":
                continue
            out.append((it, {"fingerprint": ident.fingerprint.to_json(), "match": ident.label,
                             "mirrored": ident.mirrored}))
        elif mode == "up":
            if it.role == "partner":
                # resolving the partner diagram gives back the source: compare fingerprints
                fp = _fingerprint_filtered(x, {_STATE["source_fp"].alexander})
                if fp is None:
                    continue
                src = _STATE["source_fp"]
                if fp.key == src.key or fp.mirror().key == src.key:
                    out.append((it, {"fingerprint": fp.to_json(), "match": it.partner,
                                     "mirrored": fp.key != src.key}))
                continue
            fp = _fingerprint_filtered(x, _STATE["target_alex"])
            if fp is None or targets is None:
                continue
            for entry, mirrored in targets.lookup(fp):
                out.append((it, {"fingerprint": fp.to_json(), "match": entry.name, "mirrored": mirrored}))
    return out


def _run_items(items: list[_Item], mode: str, table: KnotTable, targets: TargetList | None,
               config: SearchConfig, extra_state: dict | None = None) -> list[tuple[_Item, dict]]:
    chunks = [items[k:k + config.chunk_size] for k in range(0, len(items), config.chunk_size)]
    if config.workers == 1 or len(chunks) <= 1:
        _init_worker(table, targets)
        _STATE.update(extra_state or {})
        results = [_evaluate_chunk(c, mode) for c in chunks]
    else:
        with ProcessPoolExecutor(
            max_workers=config.workers,
            initializer=_init_worker_with_extra,
            initargs=(table, targets, extra_state or {}),
        ) as pool:
            results = list(pool.map(_evaluate_chunk, chunks, [mode] * len(chunks)))
    return [r for chunk in results for r in chunk]


def _init_worker_with_extra(table, targets, extra):
    _init_worker(table, targets)
    _STATE.update(extra)


def _progress(event: str, **fields) -> None:
    print(json.dumps({"event": event, **fields}, sort_keys=True), file=sys.stderr)


# -- representations for a source knot -----------------------------------------------


def expand_representations(reps: Sequence[Representation], config: SearchConfig) -> list[Representation]:
    """The given representations plus seeded diversified copies of braid inputs,
    up to ``config.diagrams`` per braid."""
    import random

    out = list(reps)
    rng = random.Random(config.seed)
    for rep in reps:
        if rep.kind != "braid":
            continue
        b = parse_braid(rep.code)
        for k in range(1, config.diagrams):
            steps = rng.randint(*config.diversify_steps)
            out.append(Representation.braid(diversify(b, rng.randrange(2**32), steps)))
    return out


def _items_for(reps: Sequence[Representation], config: SearchConfig, stats: EnumerationStats,
               moves: Sequence[ConcordanceMove] | None = None) -> list[_Item]:
    """Work items for every enumerated move, or only for ``moves`` (applied to
    each representation) when given."""
    items = []
    for k, rep in enumerate(reps):
        x = rep.obj()
        if moves is not None:
            for m in moves:
                try:
                    res = apply_move(x, m) if isinstance(x, BraidWord) else pd_apply_move(x, m)
                except MoveError as exc:
                    log.warning("move %s skipped: %s", m, exc)
                    continue
                if isinstance(res, BraidWord):
                    items.append(_Item(k, rep, m, str(res), "braid"))
                else:
                    items.append(_Item(k, rep, m, str(res.to_pd()), "pd"))
            continue
        if isinstance(x, BraidWord):
            gen = enumerate_moves(x, config.kinds, config.deres_samples, seed=config.seed * 1_000_003 + k, stats=stats)
            for m, res in gen:
                items.append(_Item(k, rep, m, str(res), "braid"))
        else:
            kinds = tuple(kd for kd in config.kinds if kd in PD_KINDS)
            for m, res in enumerate_pd_moves(x, kinds, stats=stats):
                items.append(_Item(k, rep, m, str(res.to_pd()), "pd"))
    return items


def _now() -> float:
    return round(time.time(), 3)


# -- pull down -------------------------------------------------------------------


def source_lower_bound(knot: str, table: KnotTable, reps: Sequence[Representation]) -> tuple[int, str]:
    if knot in table:
        rec = table[knot]
        if rec.g4 is not None and rec.g4.lo >= abs(rec.signature) // 2:
            return rec.g4_lower, f"table g4 {rec.g4}"
        return rec.g4_lower, f"|signature|/2 with signature {rec.signature}"
    if reps:
        sig = signature_of(reps[0].obj())
        return abs(sig) // 2, f"|signature|/2 with signature {sig}"
    return 0, "none"


def cmd_pulldown(knot: str, reps: Sequence[Representation], table: KnotTable,
                 config: SearchConfig, moves: Sequence[ConcordanceMove] | None = None) -> list[ConcordanceFinding]:
    """Moves whose result is identified in the table; a slice result gives
    g4 = 1 whenever the source is known not to be slice.  ``moves`` restricts
    the search to the given moves."""
    reps = expand_representations(reps, config)
    stats = EnumerationStats()
    items = _items_for(reps, config, stats, moves)
    _progress("pulldown.enumerated", knot=knot, representations=len(reps), candidates=len(items),
              stats=stats.to_json())
    t0 = time.monotonic()
    hits = _run_items(items, "down", table, None, config)
    lower, lower_src = source_lower_bound(knot, table, reps)
    if knot not in table:
        lower_src += " (no table record)"
    findings = []
    for it, hit in hits:
        match = hit["match"]
        rec = table.by_name.get(match)
        inference = INFER_NONE
        prov = {"lower": {"value": lower, "source": lower_src}}
        if rec is not None and rec.is_slice:
            prov["upper"] = {"value": 1, "source": f"genus one concordance to slice knot {match}"}
            if lower >= 1:
                inference = INFER_DOWN
        findings.append(ConcordanceFinding(
            source_knot=knot,
            source_representation={**it.rep.to_json(), "index": it.rep_index},
            move=it.move.to_json(),
            result_fingerprint=hit["fingerprint"],
            result_match=match,
            result_mirrored=hit["mirrored"],
            inference=inference,
            provenance=prov,
            seed=config.seed,
            timestamp=_now(),
        ))
    _progress("pulldown.done", knot=knot, findings=len(findings),
              inferences=sum(f.inference != INFER_NONE for f in findings),
              seconds=round(time.monotonic() - t0, 3))
    return canonical_order(findings)


# -- pull up ---------------------------------------------------------------------


@dataclass(frozen=True)
class Partner:
    """Diagram of a target knot expected to be one resolution away from the source."""

    name: str
    rep: Representation


def _target_allowed(entry, source_rec) -> bool:
    # topological 4-genus changes by at most one along a genus one concordance
    if source_rec is None or source_rec.g4_top is None or entry.g4_top is None:
        return True
    hi = source_rec.g4_top.hi
    return hi is None or entry.g4_top.lo <= hi + 1


def cmd_pullup(knot: str, reps: Sequence[Representation], targets: TargetList, table: KnotTable,
               config: SearchConfig, partners: Sequence[Partner] = (),
               moves: Sequence[ConcordanceMove] | None = None) -> list[ConcordanceFinding]:
    """Moves joining the source to a certified target give g4 = 2 whenever
    the table bounds the source by 2.

    ``partners`` are diagrams of target knots; their resolutions are compared
    with the source, which finds de-resolutions of diagrams where insertions
    are not available.
    """
    rec = table.by_name.get(knot)
    upper = rec.g4_upper if rec is not None else None
    allowed = TargetList([e for e in targets if _target_allowed(e, rec)])
    reps = expand_representations(reps, config)
    stats = EnumerationStats()
    items = _items_for(reps, config, stats, moves)
    extra: dict = {}
    partner_entries = {}
    if partners:
        src = reps[0].obj() if reps else None
        if src is None:
            raise ValueError("partner search needs a source representation")
        extra["source_fp"] = fingerprint(src)
        for p in partners:
            d = p.rep.obj()
            pfp = fingerprint(d)
            ents = [e for e, _ in allowed.lookup(pfp) if e.name == p.name]
            if not ents:
                log.warning("partner %s does not match its target entry", p.name)
                continue
            partner_entries[p.name] = ents[0]
            k = len(reps) + len(partner_entries) - 1
            for m, res in enumerate_pd_moves(d, ("resolve",), stats=stats):
                items.append(_Item(k, p.rep, m, str(res.to_pd()), "pd", role="partner", partner=p.name))
    _progress("pullup.enumerated", knot=knot, candidates=len(items), targets=len(allowed),
              stats=stats.to_json())
    hits = _run_items(items, "up", table, allowed, config, extra)
    findings = []
    for it, hit in hits:
        target = hit["match"]
        entry = next(e for e in allowed if e.name == target)
        lower = entry.g4_lower - 1
        prov = {
            "lower": {"value": lower, "source": f"genus one concordance to {target} with g4 >= {entry.g4_lower}",
                      "certificate": entry.certificate, "gram_dim": entry.dim},
            "upper": {"value": upper, "source": f"table g4 {rec.g4}" if rec is not None else "none"},
        }
        inference = INFER_UP if upper is not None and upper == lower == 2 else INFER_NONE
        move = it.move.to_json()
        rep = {**it.rep.to_json(), "index": it.rep_index}
        if it.role == "partner":
            # a resolution of the partner is a de-resolution of the source
            move = {**move, "applied_to": "partner"}
            rep["role"] = "partner"
            rep["partner"] = it.partner
        findings.append(ConcordanceFinding(
            source_knot=knot,
            source_representation=rep,
            move=move,
            result_fingerprint=hit["fingerprint"],
            result_match=target,
            result_mirrored=hit["mirrored"],
            inference=inference,
            provenance=prov,
            seed=config.seed,
            timestamp=_now(),
        ))
    _progress("pullup.done", knot=knot, findings=len(findings))
    return canonical_order(findings)


# -- audit -----------------------------------------------------------------------


@dataclass
class AuditReport:
    checked: int = 0
    failures: list[tuple[int, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _replay(f: ConcordanceFinding):
    rep = Representation(f.source_representation["type"], f.source_representation["code"])
    x = rep.obj()
    mv = {k: v for k, v in f.move.items() if k != "applied_to"}
    m = ConcordanceMove.from_json(mv)
    if isinstance(x, BraidWord):
        return apply_move(x, m)
    return pd_apply_move(x, m)


def audit_findings(findings: Sequence[ConcordanceFinding], table: KnotTable,
                   targets: TargetList | None = None) -> AuditReport:
    """Re-derive every inference: replay the move, re-fingerprint the result,
    re-check the bounds and, for pull-ups, re-run the embedding search."""
    from .lattice import embeds

    report = AuditReport()
    for k, f in enumerate(findings):
        if f.inference == INFER_NONE:
            continue
        report.checked += 1
        try:
            res = _replay(f)
            fp = fingerprint(res)
            if fp.to_json()["alexander"] != f.result_fingerprint["alexander"]:
                raise ValueError("result fingerprint does not reproduce")
            if f.inference == INFER_DOWN:
                ident = identify(res, table, fp)
                if ident.label != f.result_match or not table[f.result_match].is_slice:
                    raise ValueError(f"result no longer matches slice knot {f.result_match}")
                lower = f.provenance["lower"]["value"]
                src = table.by_name.get(f.source_knot)
                if lower < 1 or (src is not None and src.g4_lower < 1):
                    raise ValueError("lower bound 1 is not supported")
            elif f.inference == INFER_UP:
                if targets is None:
                    raise ValueError("pull-up audit needs the target list")
                entry = next((e for e in targets if e.name == f.result_match), None)
                if entry is None:
                    raise ValueError(f"target {f.result_match} is not in the target list")
                if f.move.get("applied_to") == "partner":
                    src = table[f.source_knot]
                    if fp.key != src.fingerprint.key and fp.mirror().key != src.fingerprint.key:
                        raise ValueError("partner resolution does not give the source knot")
                elif not targets.lookup(fp):
                    raise ValueError("result does not match the target")
                cert = embeds(entry.gram, entry.dim)
                if not cert.is_exhausted:
                    raise ValueError(f"embedding certificate does not replay ({cert.outcome})")
                src = table[f.source_knot]
                if src.g4_upper != 2:
                    raise ValueError("source upper bound 2 is not in the table")
        except Exception as exc:  # any failure is reported, not raised
            report.failures.append((k, str(exc)))
    return report
