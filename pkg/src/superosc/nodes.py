"""Frequency nodes h_j(n) in [-1, 1] indexing a generalized Fourier sequence.

Nodes are stored as exact rationals: equispaced nodes are rational by
construction, Chebyshev nodes are snapshotted once at a fixed high precision
(an mpf is a dyadic rational), and custom nodes are parsed exactly. This
keeps every NodeSet immutable, deterministic across precision escalation,
and usable by the exact-arithmetic coefficient path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from mpmath import mp

from .errors import DegenerateNodes, OutOfRange
from .exact import mpf_to_fraction, parse_real

SCHEMES = ("equispaced", "chebyshev", "custom")

# Chebyshev points are irrational; snapshot them once at this precision.
CHEBYSHEV_SNAPSHOT_BITS = 256


@dataclass(frozen=True)
class NodeSet:
    """n+1 pairwise-distinct points h_0..h_n with |h_j| <= 1."""

    n: int
    points: Tuple[Fraction, ...]
    scheme_tag: str
    min_gap: Fraction

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


def _validate(points, scheme_tag: str, n: int, gap_threshold: Fraction) -> NodeSet:
    if len(points) != n + 1:
        raise DegenerateNodes(f"expected {n + 1} points, got {len(points)}")
    for h in points:
        if abs(h) > 1:
            raise OutOfRange(f"node {h} outside [-1, 1]")
    pts = sorted(points)
    min_gap = None
    for lo, hi in zip(pts, pts[1:]):
        gap = hi - lo
        if min_gap is None or gap < min_gap:
            min_gap = gap
    if n == 0:
        min_gap = Fraction(2)  # single node: no gap constraint
    if min_gap == 0:
        raise DegenerateNodes("nodes are not pairwise distinct")
    if min_gap < gap_threshold:
        raise DegenerateNodes(
            f"min gap {float(min_gap):.3g} below degeneracy threshold {float(gap_threshold):.3g}"
        )
    return NodeSet(n=n, points=tuple(points), scheme_tag=scheme_tag, min_gap=min_gap)


def gap_threshold_for_bits(bits: int) -> Fraction:
    """Coefficient denominators are products of node gaps; below 2^(-bits/4)
    they destroy the significand."""
    return Fraction(1, 2 ** (bits // 4))


def generate_nodes(scheme_tag: str, n: int, custom_points=None, bits: int = 128) -> NodeSet:
    """Build and validate a NodeSet.

    equispaced: h_j = 1 - 2j/n;  chebyshev: h_j = cos(j*pi/n) snapshotted to
    an exact dyadic rational;  custom: caller-supplied list, validated.
    """
    if scheme_tag not in SCHEMES:
        raise DegenerateNodes(f"unknown node scheme {scheme_tag!r}")
    threshold = gap_threshold_for_bits(bits)
    if scheme_tag == "custom":
        if not custom_points:
            raise DegenerateNodes("custom scheme requires custom_points")
        points = [parse_real(p) for p in custom_points]
        return _validate(points, "custom", len(points) - 1, threshold)
    if n < 1:
        raise DegenerateNodes(f"scheme {scheme_tag} requires n >= 1, got {n}")
    if scheme_tag == "equispaced":
        points = [Fraction(n - 2 * j, n) for j in range(n + 1)]
    else:
        with mp.workprec(CHEBYSHEV_SNAPSHOT_BITS):
            points = [mpf_to_fraction(mp.cos(mp.pi * j / n)) for j in range(n + 1)]
        # rounding may nudge |cos| past 1 near the endpoints
        points = [max(min(p, Fraction(1)), Fraction(-1)) for p in points]
    return _validate(points, scheme_tag, n, threshold)
