"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

from __future__ import annotations

import itertools
import json
import random
import time

from cforge import linalg
from cforge.braid import BraidWord, parse_braid, random_braid
from cforge.cli import main
from cforge.diagram import braid_to_diagram, realize_dt
from cforge.goeritz import gl_signature
from cforge.invariants import braid_signature, fingerprint
from cforge.lattice import brute_force_embeds, embeds, verify_witness
from cforge.moves import (
    ALL_KINDS,
    DERESOLVE,
    RESOLVE,
    ConcordanceMove,
    EnumerationStats,
    K12N512_DERESOLUTION,
    apply_deresolution_k12n512,
    apply_move,
    diff_words,
    enumerate_moves,
    inverse_move,
)
from cforge.search import Partner, Representation, SearchConfig, audit_findings, cmd_pulldown, cmd_pullup, identify
from cforge.tables import INFER_DOWN, INFER_UP, canonical_order

PULLUP_KNOTS = ("K12n512", "K12a153", "K12n239")


# -- 1 -----------------------------------------------------------------------------


def test_criterion_1_pulldown_reproductions(table, witnesses, acceptance_report):
    failures = []
    slowest = 0.0
    t_all = time.monotonic()
    for p in witnesses["pulldown"]:
        t0 = time.monotonic()
        src = parse_braid(p["source_braid"])
        moves = diff_words(src, parse_braid(p["slice_braid"]))
        if not moves:
            failures.append(f"{p['source']}: printed words differ by no single move")
            continue
        for m in moves:
            ident = identify(apply_move(src, m), table)
            if ident.status != "unique" or ident.label != p["slice_knot"]:
                failures.append(f"{p['source']} {m}: {ident.label}")
        found = cmd_pulldown(p["source"], [Representation.braid(p["source_braid"])], table, SearchConfig(),
                             moves=moves)
        if not found or any(f.inference != INFER_DOWN or f.result_match != p["slice_knot"] for f in found):
            failures.append(f"{p['source']}: pipeline did not infer g4 = 1")
        if not audit_findings(found, table).ok:
            failures.append(f"{p['source']}: audit failed")
        dt = time.monotonic() - t0
        slowest = max(slowest, dt)
        if dt >= 5:
            failures.append(f"{p['source']}: {dt:.1f} s")
    total = time.monotonic() - t_all
    if total >= 60:
        failures.append(f"total {total:.1f} s")
    ok = not failures and len(witnesses["pulldown"]) == 18
    acceptance_report(1, ok, f"18 pull-down diffs unique slice match with g4=1; slowest {slowest:.2f} s, "
                             f"total {total:.2f} s" + ("" if ok else f"; {failures}"))
    assert ok, failures


# -- 2 -----------------------------------------------------------------------------


def test_criterion_2_embedding_certificates(witnesses, tmp_path, capsys, acceptance_report):
    outcomes = []
    for t in witnesses["targets"]:
        p = tmp_path / f"{t['name']}.txt"
        p.write_text("\n".join(" & ".join(map(str, r)) + " \\\\" for r in t["goeritz"]) + "\n")
        code = main(["embed-check", "--gram", str(p), "--dim", str(t["dim"]), "--budget-nodes", "50000000"])
        res = json.loads(capsys.readouterr().out)
        outcomes.append((t["name"], t["dim"], code, res["outcome"], res["nodes"], res["wall_ms"]))
    dims_ok = [d for _, d, *_ in outcomes] == [13, 13, 15]
    cert_ok = dims_ok and all(code == 0 and out == "Exhausted" for _, _, code, out, _, _ in outcomes)

    rng = random.Random(2024)
    checked = attempts = 0
    bad = []
    while checked < 1000:
        attempts += 1
        m = rng.randint(1, 3)
        n = rng.randint(m, m + 2)
        G = [[0] * m for _ in range(m)]
        for i in range(m):
            G[i][i] = rng.randint(1, 5)
            for j in range(i):
                G[i][j] = G[j][i] = rng.randint(-2, 2)
        if not linalg.positive_definite(G) or brute_force_embeds(G, n) is None:
            continue
        checked += 1
        c = embeds(G, n)
        if not (c.is_witness and verify_witness(c.witness, G)):
            bad.append((G, n, c.outcome))
    ok = cert_ok and not bad
    summary = ", ".join(f"{name}/n={d}: {out} ({nodes} nodes, {ms:.0f} ms)" for name, d, _, out, nodes, ms in outcomes)
    acceptance_report(2, ok, f"{summary}; {checked} brute-force-embeddable G (m<=3) all gave verified "
                             f"witnesses ({attempts} drawn)" + ("" if not bad else f"; failures {bad[:3]}"))
    assert ok


# -- 3 -----------------------------------------------------------------------------


def test_criterion_3_pullup_reproductions(table, targets, witnesses, acceptance_report):
    notes = []
    ok = True
    w = witnesses["pullup"]["K12n512"]
    b1, b2 = parse_braid(w["braid"]), parse_braid(w["partner_braid"])
    verbatim = str(apply_deresolution_k12n512(b1)) == str(b2)
    t18 = next(t for t in witnesses["targets"] if t["name"] == "18ah_2335674")
    fp_braid, fp_dt = fingerprint(b2), fingerprint(realize_dt(t18["dt"]))
    same = fp_braid.key == fp_dt.key
    mirror = fp_braid.key == fp_dt.mirror().key
    f = cmd_pullup("K12n512", [Representation.braid(w["braid"])], targets, table, SearchConfig(),
                   moves=[K12N512_DERESOLUTION])
    g4_ok = len(f) == 1 and f[0].inference == INFER_UP and audit_findings(f, table, targets).ok
    part_i = verbatim and (same or mirror) and g4_ok
    ok &= part_i
    notes.append(f"(i) K12n512 verbatim={verbatim}, fingerprint {'equal' if same else 'mirror' if mirror else 'differs'}"
                 f" (braid sigma {fp_braid.signature}, DT sigma {fp_dt.signature}), g4=2 {g4_ok}")

    for knot in ("K12a153", "K12n239"):
        u = witnesses["pullup"][knot]
        d = realize_dt(u["dt"])
        ident = identify(d, table)
        tgt = next(t for t in witnesses["targets"] if t["name"] == u["partner"])
        sig = gl_signature(realize_dt(tgt["dt"]))
        cert = embeds(tgt["goeritz"], tgt["dim"])
        fig_fp = fingerprint(realize_dt(u["partner_dt"]))
        entry = next(e for e in targets if e.name == u["partner"])
        fig_is_target = fig_fp.key in (entry.fingerprint.key, entry.fingerprint.mirror().key)
        found = cmd_pullup(knot, [Representation.dt(u["dt"])], targets, table, SearchConfig(),
                           partners=[Partner(u["partner"], Representation.dt(u["partner_dt"]))], moves=[])
        g4_ok = bool(found) and all(x.inference == INFER_UP for x in found) and audit_findings(found, table, targets).ok
        part = (ident.label == knot and d.n_crossings == len(u["dt"].split(",")) and sig == -4
                and cert.is_exhausted and fig_is_target and g4_ok)
        ok &= part
        notes.append(f"{knot}: {d.n_crossings}-crossing DT -> {ident.label}; partner {u['partner']} sigma {sig}, "
                     f"{cert.outcome}; {len(found)} partner resolutions give g4=2")
    acceptance_report(3, ok, "; ".join(notes))
    assert ok


# -- 4 -----------------------------------------------------------------------------


def test_criterion_4_signature_oracles(table, corpus, acceptance_report):
    braids = {r["name"]: r["braid"] for r in corpus if r["braid"]}
    mismatches = []
    checked = 0
    for r in table.records:
        if r.crossing_number > 9 or not r.dt_code:
            continue
        gl = gl_signature(realize_dt(r.dt_code))
        seif = braid_signature(parse_braid(braids[r.name])) if r.name in braids else None
        if seif is None or gl != seif:
            mismatches.append((r.name, gl, seif))
        checked += 1
    right, left = BraidWord(2, (1, 1, 1)), BraidWord(2, (-1, -1, -1))
    trefoils = (gl_signature(braid_to_diagram(right)), braid_signature(right),
                gl_signature(braid_to_diagram(left)), braid_signature(left))
    ok = not mismatches and trefoils == (-2, -2, 2, 2) and checked > 0
    acceptance_report(4, ok, f"gl_signature = Seifert signature on {checked} fixture knots <= 9 crossings; "
                             f"right trefoil {trefoils[0]}, left trefoil {trefoils[2]}"
                             + ("" if not mismatches else f"; mismatches {mismatches}"))
    assert ok


# -- 5 -----------------------------------------------------------------------------


def _traced_components(letters, strands):
    # independent oracle: follow every strand position through the word
    nxt = []
    for start in range(strands):
        p = start
        for e in letters:
            i = abs(e) - 1
            if p == i:
                p += 1
            elif p == i + 1:
                p -= 1
        nxt.append(p)
    seen, comps = set(), 0
    for s in range(strands):
        if s not in seen:
            comps += 1
            while s not in seen:
                seen.add(s)
                s = nxt[s]
    return comps


def test_criterion_5_move_algebra(acceptance_report):
    rng = random.Random(55)
    problems = []
    oracle_checked = 0
    moves_checked = 0
    for k in range(10_000):
        b = random_braid(rng.randrange(2**32), (2, 6), (1, 12))
        w = b.letters
        L = len(w)
        i = rng.randrange(L)
        cc = ConcordanceMove.crossing_change(i)
        if apply_move(apply_move(b, cc), cc) != b:
            problems.append((k, "crossing change"))
        pairs = [(a, c) for a, c in itertools.combinations(range(L), 2) if (w[a] > 0) != (w[c] > 0)]
        if pairs:
            sw = ConcordanceMove.switch(*rng.choice(pairs))
            if apply_move(apply_move(b, sw), sw) != b:
                problems.append((k, "switch"))
        stats = EnumerationStats()
        kept = set()
        for m, out in enumerate_moves(b, ALL_KINDS, 4, seed=k, stats=stats):
            moves_checked += 1
            if _traced_components(out.letters, out.strands) != 1:
                problems.append((k, f"{m} gives a link"))
            if m.kind in (RESOLVE, DERESOLVE) and apply_move(out, inverse_move(b, m)) != b:
                problems.append((k, f"{m} inverse"))
            if m.kind == RESOLVE:
                kept.add((m.i, m.j))
        if stats.crossing_changes != L:
            problems.append((k, "crossing change count"))
        pos = sum(e > 0 for e in w)
        if stats.switches != pos * (L - pos):
            problems.append((k, "switch count"))
        if stats.resolutions_tried != L * (L - 1) // 2 or stats.deresolutions_tried != 4:
            problems.append((k, "resolution count"))
        if L <= 8:
            oracle_checked += 1
            expect = {(a, c) for a, c in itertools.combinations(range(L), 2)
                      if _traced_components([e for t, e in enumerate(w) if t not in (a, c)], b.strands) == 1}
            if kept != expect or stats.resolutions_kept != len(expect):
                problems.append((k, "deletion oracle"))
    ok = not problems
    acceptance_report(5, ok, f"10000 random braids, {moves_checked} enumerated moves, involutions, inverses, "
                             f"1-component results, closed-form counts; deletion oracle on {oracle_checked} words "
                             f"of length <= 8" + ("" if ok else f"; {problems[:5]}"))
    assert ok


# -- 6 -----------------------------------------------------------------------------


def test_criterion_6_signature_bound_gate(table, targets, witnesses, acceptance_report):
    violations = [r.name for r in table.records
                  if r.g4 is not None and r.g4.hi is not None and r.g4.hi < abs(r.signature) // 2]
    finals = {}
    w = witnesses["pullup"]
    runs = {
        "K12n512": cmd_pullup("K12n512", [Representation.braid(w["K12n512"]["braid"])], targets, table,
                              SearchConfig(), moves=[K12N512_DERESOLUTION]),
    }
    for knot in ("K12a153", "K12n239"):
        runs[knot] = cmd_pullup(knot, [Representation.dt(w[knot]["dt"])], targets, table, SearchConfig(),
                                partners=[Partner(w[knot]["partner"], Representation.dt(w[knot]["partner_dt"]))],
                                moves=[])
    for knot in PULLUP_KNOTS:
        half = abs(table[knot].signature) // 2
        fs = [f for f in runs[knot] if f.inference == INFER_UP]
        chains = {(f.provenance["lower"]["value"], f.provenance["upper"]["value"]) for f in fs}
        finals[knot] = (chains, half)
    chain_ok = all(ch == {(2, 2)} and half + 1 == 2 for ch, half in finals.values())
    ok = not violations and chain_ok
    acceptance_report(6, ok, f"{len(table)} fixture records satisfy g4 >= |sigma|/2; "
                             + ", ".join(f"{k}: g4=2=|{table[k].signature}|/2+1" for k in PULLUP_KNOTS)
                             + ("" if ok else f"; violations {violations}, chains {finals}"))
    assert ok


# -- 7 -----------------------------------------------------------------------------


def test_criterion_7_determinism(table, witnesses, acceptance_report):
    src = next(p for p in witnesses["pulldown"] if p["source"] == "K11n80")
    reps = [Representation.braid(src["source_braid"])]
    runs = {}
    for workers in (1, 8):
        t0 = time.monotonic()
        found = cmd_pulldown("K11n80", reps, table, SearchConfig(seed=7, workers=workers))
        runs[workers] = ([f.canonical() for f in canonical_order(found)], time.monotonic() - t0)
    same = runs[1][0] == runs[8][0]
    ok = same and bool(runs[1][0])
    acceptance_report(7, ok, f"K11n80 pulldown seed 7: {len(runs[1][0])} findings with 1 worker "
                             f"({runs[1][1]:.1f} s) and 8 workers ({runs[8][1]:.1f} s), identical={same}")
    assert ok
