"""The unique interpolation coefficients Z_j(n, a).

Z_j is the product over k != j of (h_k - a)/(h_k - h_j). These are the
coefficients that make the sum of Z_j * h_j^p reproduce a^p for every
p = 0..n. Products are accumulated with the numerator and denominator kept
separate and one final division, so each path rounds once instead of n
times; the exact path uses Fraction throughout and never rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from mpmath import mp

from .exact import parse_real, to_mpf
from .nodes import NodeSet


@dataclass(frozen=True)
class CoefficientSet:
    """Solved coefficients attached to their NodeSet and target a."""

    nodes: NodeSet
    a: Fraction
    values: Tuple
    exactness_flag: bool

    @property
    def n(self) -> int:
        return self.nodes.n

    def max_magnitude(self):
        return max(abs(z) for z in self.values)


def solve_coefficients(nodes: NodeSet, a, exact: bool = True) -> CoefficientSet:
    """Solve for Z_j over the given nodes and target a.

    exact=True computes in rational arithmetic (nodes are stored as
    rationals; a is parsed exactly). exact=False evaluates the same products
    in mpf at the ambient precision, for large-n performance runs.

    When a coincides with a node the formula degenerates gracefully to the
    indicator of that node: one numerator factor is exactly zero for every
    other j, and every factor equals one for the matching j.
    """
    a = parse_real(a)
    pts = nodes.points
    if exact:
        values = []
        for j, hj in enumerate(pts):
            num = Fraction(1)
            den = Fraction(1)
            for k, hk in enumerate(pts):
                if k == j:
                    continue
                num *= hk - a
                den *= hk - hj
            values.append(num / den)
        return CoefficientSet(nodes=nodes, a=a, values=tuple(values), exactness_flag=True)
    a_f = to_mpf(a)
    pts_f = [to_mpf(h) for h in pts]
    values = []
    for j, hj in enumerate(pts_f):
        num = mp.mpf(1)
        den = mp.mpf(1)
        for k, hk in enumerate(pts_f):
            if k == j:
                continue
            num *= hk - a_f
            den *= hk - hj
        values.append(num / den)
    return CoefficientSet(nodes=nodes, a=a, values=tuple(values), exactness_flag=False)


def verify_interpolation(coeffs: CoefficientSet, p_max: int):
    """Residuals r_p = sum_j Z_j h_j^p - a^p for p = 0..p_max.

    All residuals vanish (exactly, on the exact path) for p <= n; the p = 0
    residual is sum Z_j - 1. Residuals beyond p = n are reported as-is and
    are nonzero in general.
    """
    pts = coeffs.nodes.points
    if coeffs.exactness_flag:
        a = Fraction(coeffs.a)
        residuals = []
        for p in range(p_max + 1):
            s = sum(z * h**p for z, h in zip(coeffs.values, pts))
            residuals.append(s - a**p)
        return residuals
    a = to_mpf(coeffs.a)
    pts_f = [to_mpf(h) for h in pts]
    residuals = []
    for p in range(p_max + 1):
        s = mp.fsum(z * h**p for z, h in zip(coeffs.values, pts_f))
        residuals.append(s - a**p)
    return residuals
