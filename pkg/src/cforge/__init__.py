"""Genus-one concordance search for the smooth 4-genus of knots.

Braid words and planar diagrams are rewritten by crossing changes, switches,
resolutions and de-resolutions; results are identified by exact invariant
fingerprints against a knot table, and lower bounds beyond the signature come
from a lattice embedding obstruction on Goeritz forms.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .braid import BraidWord, parse_braid, random_braid
from .diagram import Diagram, DTCode, PDCode, parse_dt, parse_pd, realize_dt
from .invariants import InvariantFingerprint, alexander, fingerprint, jones, signature
from .lattice import EmbeddingCertificate, embeds, g4_lower_bound
from .moves import ConcordanceMove, apply_move, enumerate_moves, pd_apply_move
from .poly import LaurentPoly, parse_poly

__all__ = [
    "BraidWord",
    "ConcordanceMove",
    "DTCode",
    "Diagram",
    "EmbeddingCertificate",
    "InvariantFingerprint",
    "LaurentPoly",
    "PDCode",
    "alexander",
    "apply_move",
    "embeds",
    "enumerate_moves",
    "fingerprint",
    "g4_lower_bound",
    "jones",
    "parse_braid",
    "parse_dt",
    "parse_pd",
    "parse_poly",
    "pd_apply_move",
    "random_braid",
    "realize_dt",
    "signature",
]
