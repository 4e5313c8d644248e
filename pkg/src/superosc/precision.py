"""Arbitrary-precision arithmetic contract: the escalation-until-agreement
protocol every numeric module obeys.

A computation is any deterministic callable of the working precision in bits.
It is run at two precisions; when the results agree relatively within the
policy tolerance, the higher-precision value is returned together with the
observed discrepancy. Otherwise the precision pair is escalated until
agreement or the configured cap. Silent precision loss is forbidden: callers
always receive both value and achieved error estimate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .errors import NoConvergenceAtMaxBits

DEFAULT_BITS = 128
DEFAULT_MAX_BITS = 8192
DEFAULT_AGREEMENT_TOL = Fraction(1, 10**12)


@dataclass(frozen=True)
class PrecisionPolicy:
    """Immutable description of the working-precision regime.

    bits: starting significand precision; escalation_factor: multiplier per
    escalation step; agreement_tol: relative two-precision agreement target;
    max_bits: hard precision cap.
    """

    bits: int = DEFAULT_BITS
    escalation_factor: int = 2
    agreement_tol: Fraction = DEFAULT_AGREEMENT_TOL
    max_bits: int = DEFAULT_MAX_BITS

    def __post_init__(self):
        if self.bits < 64:
            raise ValueError("bits must be >= 64")
        if self.max_bits < self.bits:
            raise ValueError("max_bits must be >= bits")
        if self.escalation_factor < 2:
            raise ValueError("escalation_factor must be >= 2")
        if not (0 < self.agreement_tol < 1):
            raise ValueError("agreement_tol must lie in (0, 1)")

    @staticmethod
    def for_order(n: int, **kwargs) -> "PrecisionPolicy":
        """Default policy for sequence order n: coefficient magnitude grows
        roughly like the Lebesgue-scaled |a|^n, costing O(n) bits of
        cancellation, so start at max(128, 8n)."""
        return PrecisionPolicy(bits=max(DEFAULT_BITS, 8 * n), **kwargs)

    def replace_bits(self, bits: int) -> "PrecisionPolicy":
        return PrecisionPolicy(
            bits=bits,
            escalation_factor=self.escalation_factor,
            agreement_tol=self.agreement_tol,
            max_bits=max(self.max_bits, bits),
        )


def relative_discrepancy(lo, hi):
    """Relative distance between two results, computed at ambient precision.

    Results may be scalars or flat sequences of scalars (compared
    elementwise, worst case reported). A zero reference falls back to the
    absolute difference.
    """
    if isinstance(lo, (list, tuple)):
        if len(lo) != len(hi):
            raise ValueError("result shapes differ between precisions")
        worst = mp.mpf(0)
        for a, b in zip(lo, hi):
            worst = max(worst, relative_discrepancy(a, b))
        return worst
    lo = mp.mpc(lo) if (isinstance(lo, complex) or isinstance(lo, mp.mpc)) else mp.mpf(lo)
    hi = mp.mpc(hi) if (isinstance(hi, complex) or isinstance(hi, mp.mpc)) else mp.mpf(hi)
    diff = abs(lo - hi)
    scale = abs(hi)
    if scale == 0:
        return diff
    return diff / scale


def with_escalation(computation, policy: PrecisionPolicy = PrecisionPolicy()):
    """Run computation(bits) at increasing precision until two consecutive
    precisions agree within policy.agreement_tol relatively.

    Returns (value, achieved_relative_error_estimate, bits_used) where value
    is the higher-precision result of the agreeing pair. Raises
    NoConvergenceAtMaxBits when agreement is never reached, which signals
    ill-conditioned input (e.g. near-coincident nodes).
    """
    lo_bits = policy.bits
    with mp.workprec(lo_bits):
        v_lo = computation(lo_bits)
    while True:
        hi_bits = min(lo_bits * policy.escalation_factor, policy.max_bits)
        if hi_bits == lo_bits:
            # cap equals the current precision: nothing left to compare against
            raise NoConvergenceAtMaxBits(
                f"no agreement within {float(policy.agreement_tol):.3g} at cap {policy.max_bits} bits"
            )
        with mp.workprec(hi_bits):
            v_hi = computation(hi_bits)
            disc = relative_discrepancy(v_lo, v_hi)
            if disc <= policy.agreement_tol:
                return v_hi, disc, hi_bits
        if hi_bits >= policy.max_bits:
            raise NoConvergenceAtMaxBits(
                f"discrepancy {mp.nstr(disc, 6)} above tolerance at cap {policy.max_bits} bits"
            )
        lo_bits, v_lo = hi_bits, v_hi
