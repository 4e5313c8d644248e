"""Formal power series: truncated evaluation with tail bounds, Cauchy
products and powers, the series exponential, and radius-of-convergence
estimation.

A PowerSeries carries a pure coefficient accessor m -> g_m together with a
declared radius. Builtin accessors return exact scalars (int, Fraction,
ComplexFraction), so re-evaluating at a higher working precision refines the
result; series produced by the arithmetic here are materialized coefficient
prefixes bound to the precision they were computed at.

Tail bounds are empirical: the computed prefix is fitted with a geometric
envelope |g_m| <= C_hat * r^-m (2x safety margin) and the evaluation tail is
the dominated geometric remainder. There is no rigorous enclosure; the order
is auto-increased until the bound drops below the requested tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from mpmath import mp

from .errors import ConfigError, OutsideRadius, TailNotBounded
from .exact import INF, ComplexFraction, abs_scalar, is_exact, to_mpc, to_mpf

DEFAULT_TAIL_TOL = Fraction(1, 10**30)
DEFAULT_N_MAX = 20000
RADIUS_SAFETY = Fraction(99, 100)  # evaluation allowed up to 0.99 * radius


@dataclass(frozen=True)
class PowerSeries:
    """Coefficient stream with radius metadata.

    degree, when set, marks finite support: the series is a polynomial and
    truncated evaluation is complete (zero tail). truncation_order is a
    starting-order hint for adaptive evaluation. prefix_only marks a
    materialized truncation of some underlying function: coefficients beyond
    truncation_order are unknown (served as zero), so tail bounds are pinned
    at that order and cannot be improved by extending the sum.
    """

    coeff: Callable[[int], object]
    radius: object  # Fraction or INF
    tag: str = ""
    degree: Optional[int] = None
    truncation_order: Optional[int] = None
    prefix_only: bool = False

    def prefix(self, n: int) -> list:
        return [self.coeff(m) for m in range(n + 1)]

    def is_polynomial(self) -> bool:
        return self.degree is not None


# ---------------------------------------------------------------------------
# builtin catalog


def identity_series() -> PowerSeries:
    return PowerSeries(lambda m: 1 if m == 1 else 0, INF, tag="identity", degree=1)


def monomial_series(p: int) -> PowerSeries:
    if p < 0:
        raise ConfigError("monomial power must be nonnegative")
    return PowerSeries(lambda m: 1 if m == p else 0, INF, tag=f"monomial({p})", degree=p)


def constant_series(c) -> PowerSeries:
    return PowerSeries(lambda m: c if m == 0 else 0, INF, tag="constant", degree=0)


def exp_series() -> PowerSeries:
    return PowerSeries(lambda m: Fraction(1, math.factorial(m)), INF, tag="exp")


def sin_series() -> PowerSeries:
    def g(m: int):
        if m % 2 == 0:
            return 0
        k = (m - 1) // 2
        return Fraction((-1) ** k, math.factorial(m))

    return PowerSeries(g, INF, tag="sin")


def cos_series() -> PowerSeries:
    def g(m: int):
        if m % 2 == 1:
            return 0
        return Fraction((-1) ** (m // 2), math.factorial(m))

    return PowerSeries(g, INF, tag="cos")


def geometric_series(pole) -> PowerSeries:
    """G(x) = 1/(1 - x/pole): coefficients pole^-m, radius |pole|."""
    pole = Fraction(pole) if not isinstance(pole, Fraction) else pole
    if pole == 0:
        raise ConfigError("geometric pole must be nonzero")
    return PowerSeries(
        lambda m: Fraction(1, 1) / pole**m, abs(pole), tag=f"geometric({pole})"
    )


def from_coefficients(coeffs, radius, tag: str = "") -> PowerSeries:
    """Custom series from an explicit coefficient list.

    Coefficients beyond the list are zero. radius = INF declares a genuine
    polynomial (complete evaluation, zero tail); a finite radius declares a
    truncated view of an infinite series and is cross-checked against the
    limsup estimate once at least 32 coefficients are supplied.
    """
    coeffs = list(coeffs)
    if not coeffs:
        raise ConfigError("empty coefficient list")
    if len(coeffs) >= 32:
        est = radius_estimate(coeffs)
        if est == INF and radius != INF:
            raise ConfigError(
                f"declared radius {radius} inconsistent with entire-type coefficient decay"
            )
        if est != INF:
            if radius == INF:
                raise ConfigError(
                    f"declared infinite radius inconsistent with estimated radius {float(est):.3g}"
                )
            ratio = to_mpf(radius) / est
            if not (0.5 <= ratio <= 2.0):
                raise ConfigError(
                    f"declared radius {float(radius):.3g} vs estimate {float(est):.3g}: "
                    "outside factor-2 consistency band"
                )
    degree = len(coeffs) - 1 if radius == INF else None
    values = tuple(coeffs)

    def g(m: int):
        return values[m] if m < len(values) else 0

    return PowerSeries(g, radius, tag=tag or "custom", degree=degree)


def from_prefix(values, radius, tag: str = "", degree: Optional[int] = None) -> PowerSeries:
    """Materialized prefix produced by series arithmetic; no consistency check."""
    values = tuple(values)

    def g(m: int):
        return values[m] if m < len(values) else 0

    return PowerSeries(g, radius, tag=tag, degree=degree,
                       truncation_order=len(values) - 1,
                       prefix_only=degree is None)


# ---------------------------------------------------------------------------
# evaluation


def _min_radius(r1, r2):
    if r1 == INF:
        return r2
    if r2 == INF:
        return r1
    return min(r1, r2)


def envelope_constant(mods, r_eff):
    """C_hat = max |g_m| * r_eff^m over the computed prefix."""
    c_hat = mp.mpf(0)
    rpow = mp.mpf(1)
    for gm in mods:
        c_hat = max(c_hat, gm * rpow)
        rpow *= r_eff
    return c_hat


def truncated_eval(s: PowerSeries, lam, N: Optional[int] = None,
                   tail_tol=DEFAULT_TAIL_TOL, n_max: int = DEFAULT_N_MAX):
    """Evaluate s at lam: (value, tail_bound).

    Polynomials are evaluated completely (exactly when coefficients and lam
    are exact scalars) with zero tail. Otherwise the partial sum is extended,
    doubling the order, until the envelope-dominated geometric tail falls
    below tail_tol; TailNotBounded if n_max is reached first.
    """
    alam = abs_scalar(lam)
    if s.radius != INF:
        if alam >= s.radius or alam > RADIUS_SAFETY * Fraction(s.radius):
            raise OutsideRadius(
                f"|x| = {float(alam):.6g} not inside 0.99 * radius {float(s.radius):.6g} "
                f"of series {s.tag!r}"
            )

    if s.degree is not None:
        coeffs = s.prefix(s.degree)
        if all(is_exact(c) for c in coeffs) and is_exact(lam):
            acc = Fraction(0)
            for c in reversed(coeffs):  # Horner
                acc = acc * lam + c
            return acc, Fraction(0)
        lam_c = to_mpc(lam)
        acc = mp.mpc(0)
        for c in reversed(coeffs):
            acc = acc * lam_c + to_mpc(c)
        return acc, mp.mpf(0)

    lam_c = to_mpc(lam)
    alam_f = abs(lam_c)
    if alam_f == 0:
        return to_mpc(s.coeff(0)), mp.mpf(0)
    if s.radius == INF:
        r_eff = 2 * alam_f
        q = mp.mpf(0.5)
    else:
        r_eff = to_mpf(s.radius)
        q = alam_f / r_eff
    tol = to_mpf(tail_tol)

    if s.prefix_only:
        n = n_max = s.truncation_order
    else:
        n = max(16, s.truncation_order or 0, N or 0)
    value = mp.mpc(0)
    lam_pow = mp.mpc(1)
    c_hat = mp.mpf(0)
    r_pow = mp.mpf(1)
    m = 0
    while True:
        while m <= n:
            gm = to_mpc(s.coeff(m))
            value += gm * lam_pow
            c_hat = max(c_hat, abs(gm) * r_pow)
            lam_pow *= lam_c
            r_pow *= r_eff
            m += 1
        tail = 2 * c_hat * q ** (n + 1) / (1 - q)
        if tail < tol:
            return value, tail
        if n >= n_max:
            raise TailNotBounded(
                f"tail bound {mp.nstr(tail, 6)} above {mp.nstr(tol, 6)} at order {n} "
                f"for series {s.tag!r}"
            )
        n = min(2 * n, n_max)


# ---------------------------------------------------------------------------
# arithmetic


def _prefix_pair(s: PowerSeries, t: PowerSeries, N: int):
    sa, ta = s.prefix(N), t.prefix(N)
    if all(is_exact(c) for c in sa) and all(is_exact(c) for c in ta):
        return sa, ta, True
    return [to_mpc(c) for c in sa], [to_mpc(c) for c in ta], False


def cauchy_product(s: PowerSeries, t: PowerSeries, N: int) -> PowerSeries:
    """Coefficientwise convolution to order N."""
    sa, ta, exact = _prefix_pair(s, t, N)
    zero = Fraction(0) if exact else mp.mpc(0)
    out = []
    for k in range(N + 1):
        acc = zero
        for i in range(k + 1):
            si, tk = sa[i], ta[k - i]
            if is_exact(si) and si == 0:
                continue
            acc = acc + si * tk
        out.append(acc)
    degree = None
    if s.degree is not None and t.degree is not None and s.degree + t.degree <= N:
        degree = s.degree + t.degree
    return from_prefix(out, _min_radius(s.radius, t.radius),
                       tag=f"({s.tag})*({t.tag})", degree=degree)


def cauchy_power(s: PowerSeries, m: int, N: int) -> PowerSeries:
    """m-th power by repeated convolution; m = 0 is the constant series 1."""
    if m < 0:
        raise ValueError("power must be nonnegative")
    if m == 0:
        return constant_series(1)
    acc = s
    for _ in range(m - 1):
        acc = cauchy_product(acc, s, N)
    return acc


def series_exp(s: PowerSeries, N: int) -> PowerSeries:
    """exp(s) to order N via the recurrence k*E_k = sum_j j*s_j*E_{k-j}.

    Exact arithmetic is used when every input coefficient is exact and the
    constant term vanishes (so E_0 = 1 stays rational); otherwise the
    recurrence runs in mpc at ambient precision.
    """
    sa = s.prefix(N)
    exact = all(is_exact(c) for c in sa) and sa[0] == 0
    if exact and all(c == 0 for c in sa):
        return constant_series(1)
    if exact:
        coeffs = [c if isinstance(c, ComplexFraction) else ComplexFraction.from_scalar(c)
                  for c in sa]
        e = [ComplexFraction(Fraction(1), Fraction(0))]
        for k in range(1, N + 1):
            acc = ComplexFraction(Fraction(0), Fraction(0))
            for j in range(1, k + 1):
                if coeffs[j].is_zero():
                    continue
                acc = acc + (j * coeffs[j]) * e[k - j]
            e.append(acc / k)
    else:
        ca = [to_mpc(c) for c in sa]
        e = [mp.exp(ca[0])]
        for k in range(1, N + 1):
            acc = mp.mpc(0)
            for j in range(1, k + 1):
                acc += j * ca[j] * e[k - j]
            e.append(acc / k)
    return from_prefix(e, s.radius, tag=f"exp({s.tag})")


def scale_argument(s: PowerSeries, c) -> PowerSeries:
    """Series of x -> s(c*x): coefficients g_m * c^m, radius scaled by 1/|c|."""
    ac = abs_scalar(c)
    if ac == 0:
        return constant_series(s.coeff(0))
    radius = INF if s.radius == INF else Fraction(s.radius) / Fraction(ac)

    if is_exact(c):
        def g(m: int):
            gm = s.coeff(m)
            if is_exact(gm):
                return gm * c**m
            return gm * to_mpc(c) ** m
    else:
        def g(m: int):
            return to_mpc(s.coeff(m)) * to_mpc(c) ** m

    return PowerSeries(g, radius, tag=f"{s.tag}(cx)", degree=s.degree,
                       truncation_order=s.truncation_order,
                       prefix_only=s.prefix_only)


# ---------------------------------------------------------------------------
# radius estimation


def radius_estimate(coeffs, inf_threshold=1e9, growth_ratio=1.5):
    """limsup-based radius estimate from a finite coefficient list.

    Returns 1 / (max over the top quartile of |g_m|^(1/m)), or INF when the
    tail coefficients all vanish, the estimate exceeds inf_threshold, or the
    estimate keeps growing between the half and full prefixes (entire-type
    decay such as 1/m!).
    """
    coeffs = list(coeffs)
    M = len(coeffs)
    if M < 32:
        raise ValueError("radius_estimate needs at least 32 coefficients")

    def quartile_est(prefix):
        lo = (3 * len(prefix)) // 4
        best = None
        for m in range(max(lo, 1), len(prefix)):
            gm = abs_scalar(prefix[m])
            if gm == 0:
                continue
            rate = to_mpf(gm) ** (mp.mpf(1) / m)
            if best is None or rate > best:
                best = rate
        return best

    rate_full = quartile_est(coeffs)
    if rate_full is None:
        return INF
    r_full = 1 / rate_full
    if r_full > inf_threshold:
        return INF
    rate_half = quartile_est(coeffs[: M // 2])
    if rate_half is not None:
        r_half = 1 / rate_half
        if r_full >= growth_ratio * r_half:
            return INF
    return r_full
