"""Entire functions of exponential type, represented by Taylor coefficients
plus a growth certificate (C, b) meaning |a_j| <= C * b^j / j!.

A certificate makes two things possible: rigorous-relative-to-certificate
truncation tails for pointwise evaluation, and a justified radial cap when
estimating the weighted supremum norm sup |f(xi)| * exp(-B|xi|) by sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Tuple

from mpmath import mp

from .errors import NormNotCertifiable, NotExponentialType
from .exact import ComplexFraction, I_POW, abs_scalar, is_exact, to_mpc, to_mpf
from .coefficients import CoefficientSet

B_MIN = Fraction(1, 10**6)  # sentinel for polynomially bounded functions
CERT_MARGIN = Fraction(1, 100)


@dataclass(frozen=True)
class GrowthFunction:
    """Taylor coefficient stream with growth certificate.

    horizon, when set, is the largest index the accessor is materialized
    for; evaluation beyond it falls back to the certificate tail.
    """

    taylor: Callable[[int], object]
    certificate: Tuple
    label: str = ""
    horizon: Optional[int] = None

    @property
    def cert_c(self):
        return self.certificate[0]

    @property
    def cert_b(self):
        return self.certificate[1]


@dataclass(frozen=True)
class ExponentialWave(GrowthFunction):
    """xi -> exp(i * frequency * xi), with the exact certificate (1, |frequency|)."""

    frequency: Fraction = Fraction(0)


def exponential_wave(frequency) -> ExponentialWave:
    freq = Fraction(frequency) if not isinstance(frequency, Fraction) else frequency

    def a(j: int) -> ComplexFraction:
        mag = Fraction(freq**j, math.factorial(j))
        return I_POW[j % 4] * mag

    b = abs(freq) if freq != 0 else B_MIN
    return ExponentialWave(taylor=a, certificate=(Fraction(1), b),
                           label=f"wave({freq})", frequency=freq)


def wave_combination(coeffs: CoefficientSet, exact: bool = False) -> GrowthFunction:
    """sum_j Z_j * exp(i * h_j * xi) as a coefficient stream.

    Taylor coefficient q is sum_j Z_j (i h_j)^q / q!. The triangle-inequality
    certificate is (sum |Z_j|, max |h_j|); since all |h_j| <= 1 the pair
    (sum |Z_j|, 1) is also valid. With exact=True coefficients are exact
    rational-complex values; the default evaluates in mpc at ambient
    precision, which is cheaper for large orders.
    """
    zs = coeffs.values
    hs = coeffs.nodes.points
    c = sum(abs(z) for z in zs)
    b = max((abs(h) for h in hs), default=Fraction(0))
    b = b if b > 0 else B_MIN

    if exact and coeffs.exactness_flag:
        def a(q: int):
            acc = ComplexFraction(Fraction(0), Fraction(0))
            fq = math.factorial(q)
            for z, h in zip(zs, hs):
                acc = acc + I_POW[q % 4] * ComplexFraction(Fraction(z * h**q, fq), Fraction(0))
            return acc
    else:
        def a(q: int):
            ipow = to_mpc(I_POW[q % 4])
            fq = mp.mpf(math.factorial(q))
            return sum(to_mpc(z) * ipow * to_mpf(h) ** q / fq for z, h in zip(zs, hs))

    return GrowthFunction(taylor=a, certificate=(c, b),
                          label=f"combination(n={coeffs.n}, a={coeffs.a})")


def from_taylor_list(values, label: str = "", certificate=None) -> GrowthFunction:
    """GrowthFunction from an explicit coefficient list; certificate fitted
    on the list when not supplied."""
    values = tuple(values)

    def a(j: int):
        return values[j] if j < len(values) else 0

    if certificate is None:
        certificate = certificate_fit(a, max(8, len(values) - 1))
    return GrowthFunction(taylor=a, certificate=certificate, label=label or "taylor",
                          horizon=len(values) - 1)


def restrict_at_zero(f: GrowthFunction):
    """Value at xi = 0, i.e. the 0th Taylor coefficient."""
    return f.taylor(0)


# ---------------------------------------------------------------------------
# certificate fitting


def certificate_fit(taylor, horizon: int, b_min=B_MIN, growth_margin=0.25):
    """Fit (C, b) with |a_j| <= C b^j / j! on 0..horizon.

    b is the max over 1 <= j <= horizon of (|a_j| j! / C0)^(1/j) with
    C0 = max(|a_0|, 1); C is then minimal for the horizon. Estimates that
    keep growing between the two halves of the horizon mean the function is
    not of exponential type.
    """
    if horizon < 8:
        raise ValueError("certificate_fit needs horizon >= 8")
    c0 = max(to_mpf(abs_scalar(taylor(0))), mp.mpf(1))
    rates = []
    mods = [to_mpf(abs_scalar(taylor(j))) for j in range(horizon + 1)]
    for j in range(1, horizon + 1):
        if mods[j] == 0:
            rates.append(None)
            continue
        rates.append((mods[j] * mp.factorial(j) / c0) ** (mp.mpf(1) / j))
    half = horizon // 2
    lower_half = [r for r in rates[:half] if r is not None]
    upper_half = [r for r in rates[half:] if r is not None]
    if lower_half and upper_half:
        if max(upper_half) > max(lower_half) * (1 + growth_margin):
            raise NotExponentialType(
                f"b-estimate grows from {mp.nstr(max(lower_half), 6)} to "
                f"{mp.nstr(max(upper_half), 6)} across the horizon"
            )
    finite = [r for r in rates if r is not None]
    b = max(finite) if finite else mp.mpf(0)
    if b < to_mpf(b_min):
        b = to_mpf(b_min)
    c = to_mpf(abs_scalar(taylor(0)))
    bpow = mp.mpf(1)
    for j in range(1, horizon + 1):
        bpow *= b
        if mods[j] == 0:
            continue
        c = max(c, mods[j] * mp.factorial(j) / bpow)
    if c == 0:
        c = mp.mpf(1)  # identically zero function: any certificate works
    return c, b


# ---------------------------------------------------------------------------
# B-norm estimation


@dataclass(frozen=True)
class SamplingGrid:
    """Radial-angular sampling: geometric radii rho0 * 2^(k/4) and a fixed
    number of angles per circle. max_radius pins the cap explicitly; when
    None the cap is chosen where the certificate envelope C*exp((b-B)*rho)
    drops below the running sampled maximum (no larger value can lie
    beyond)."""

    rho0: Fraction = Fraction(1, 16)
    quarter_steps_per_octave: int = 4
    angles: int = 64
    max_radius: Optional[Fraction] = None
    max_circles: int = 200

    def refine(self) -> "SamplingGrid":
        """Twice as many circles per octave and twice as many angles; the
        refined point set contains the original one."""
        return SamplingGrid(
            rho0=self.rho0,
            quarter_steps_per_octave=2 * self.quarter_steps_per_octave,
            angles=2 * self.angles,
            max_radius=self.max_radius,
            max_circles=2 * self.max_circles,
        )


@dataclass(frozen=True)
class NormEstimate:
    lower: object
    upper: object
    cap_radius: object
    circles_sampled: int


def _taylor_prefix(f: GrowthFunction, order: int):
    order = min(order, f.horizon) if f.horizon is not None else order
    return [to_mpc(f.taylor(j)) for j in range(order + 1)], order


def _eval_with_tail(prefix, order, c, b, xi):
    """(|partial sum|, certificate tail bound) at xi, using a materialized
    Taylor prefix."""
    acc = mp.mpc(0)
    for aj in reversed(prefix):
        acc = acc * xi + aj
    rho = abs(xi)
    brho = b * rho
    # geometric-ratio domination of sum_{j>order} C (b rho)^j / j!
    j1 = order + 1
    term = c * brho ** j1 / mp.factorial(j1)
    ratio = brho / (order + 2)
    tail = term / (1 - ratio) if ratio < 1 else mp.inf
    return abs(acc), tail


def bnorm_estimate(f: GrowthFunction, B, grid: SamplingGrid = SamplingGrid(),
                   margin=CERT_MARGIN) -> NormEstimate:
    """Sampled lower and certificate-capped upper estimate of
    sup |f(xi)| exp(-B |xi|).

    Requires B > b * (1 + margin): only then does the envelope
    C * exp((b - B) rho) decay, making the radial cap justified.
    """
    c, b = to_mpf(f.cert_c), to_mpf(f.cert_b)
    b_val = to_mpf(B)
    if b_val <= b * (1 + to_mpf(margin)):
        raise NormNotCertifiable(
            f"B = {mp.nstr(b_val, 6)} does not dominate certified growth b = {mp.nstr(b, 6)}"
        )

    # order for pointwise Taylor evaluation: enough to clear the (b*rho) hump
    # at the largest radius we may visit, then driven by the tail ratio
    lower = to_mpf(abs_scalar(f.taylor(0)))  # xi = 0 sample
    decay = b - b_val  # negative
    rho = to_mpf(grid.rho0)
    step = mp.mpf(2) ** (mp.mpf(1) / grid.quarter_steps_per_octave)
    cap = rho
    circles = 0
    explicit_cap = to_mpf(grid.max_radius) if grid.max_radius is not None else None
    while circles < grid.max_circles:
        if explicit_cap is not None and rho > explicit_cap:
            break
        envelope = c * mp.exp(decay * rho)
        if explicit_cap is None and envelope <= lower and lower > 0:
            cap = rho
            break
        order = max(24, int(mp.ceil(2 * b * rho)) + 8)
        while True:
            prefix, order = _taylor_prefix(f, order)
            _, tail = _eval_with_tail(prefix, order, c, b, mp.mpc(rho))
            if tail <= c * mp.exp(b * rho) * mp.mpf(2) ** (-52) or \
                    (f.horizon is not None and order >= f.horizon):
                break
            order *= 2
        weight = mp.exp(-b_val * rho)
        for t in range(grid.angles):
            theta = 2 * mp.pi * t / grid.angles
            xi = rho * mp.exp(1j * theta)
            mod, tail = _eval_with_tail(prefix, order, c, b, xi)
            val = (mod - tail) * weight
            if val > lower:
                lower = val
        cap = rho
        circles += 1
        rho *= step
    upper = max(lower, c * mp.exp(decay * cap))
    return NormEstimate(lower=lower, upper=upper, cap_radius=cap, circles_sampled=circles)
