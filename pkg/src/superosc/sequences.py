"""Direct evaluators: the one-variable sequence, the multivariate
superoscillating sequence, the supershift sequence, and their limit targets.

Every evaluator returns an EvalResult carrying the value together with an
error bound accumulated from the series truncation tails, so precision loss
is never silent. When all inputs are exact and every series is a polynomial
the arithmetic stays rational and the error bound is exactly zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Tuple

from mpmath import mp

from .coefficients import CoefficientSet
from .errors import ConfigError
from .exact import EScaled, INF, abs_scalar, is_exact, parse_real, to_mpc, to_mpf
from .series import PowerSeries, truncated_eval, DEFAULT_TAIL_TOL


class EvalResult(NamedTuple):
    value: object
    err_bound: object


MODES = ("superoscillation", "supershift")


@dataclass(frozen=True)
class MultivarProblem:
    """A coefficient set, d series G_1..G_d, a mode, and the growth
    parameter B of the premise."""

    coeffs: CoefficientSet
    G: Tuple[PowerSeries, ...]
    mode: str
    B: EScaled

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        if not self.G:
            raise ConfigError("at least one series G is required")
        if not self.B.is_positive():
            raise ConfigError("growth parameter B must be positive")
        if self.mode == "superoscillation":
            for g in self.G:
                if g.radius != INF and g.radius < 1:
                    raise ConfigError(
                        f"superoscillation mode needs radius >= 1 for every series; "
                        f"{g.tag!r} has radius {float(g.radius):.6g}"
                    )
            r = self.min_radius
            if r != INF and abs(Fraction(self.coeffs.a)) >= r:
                raise ConfigError(
                    f"superoscillation mode requires |a| < min series radius: "
                    f"|a| = {float(abs(self.coeffs.a)):.6g}, min radius = {float(r):.6g}"
                )
            if not self._b_below_quarter_radius():
                raise ConfigError(
                    "growth parameter B must satisfy B < R/(4e) with R the min series radius"
                )

    @property
    def d(self) -> int:
        return len(self.G)

    @property
    def min_radius(self):
        r = INF
        for g in self.G:
            if g.radius != INF and (r == INF or g.radius < r):
                r = g.radius
        return r

    def _b_below_quarter_radius(self) -> bool:
        r = self.min_radius
        if r == INF:
            return True
        if self.B.e_exp == -1:
            # B = q/e: B < R/(4e) iff 4q < R, exactly
            return 4 * self.B.coef < Fraction(r)
        with mp.workprec(128):
            return self.B.to_mpf() < to_mpf(r) / (4 * mp.e)

    def admissible_halfwidth(self):
        """Per-axis half-width of the box on which the supershift limit is
        guaranteed."""
        radii = [g.radius for g in self.G]
        return admissible_halfwidth(self.coeffs.a, self.B, radii)


def eval_f1d(coeffs: CoefficientSet, xi):
    """sum_j Z_j exp(i h_j xi) at ambient precision (entire in xi)."""
    xi_c = to_mpc(xi)
    return sum(to_mpc(z) * mp.exp(1j * to_mpf(h) * xi_c)
               for z, h in zip(coeffs.values, coeffs.nodes.points))


def _phase_result(phase, phase_err) -> EvalResult:
    """exp(i * phase) with |exp(i u) - exp(i v)| <= |u - v| * amp, where amp
    accounts for a possibly nonreal phase."""
    value = mp.exp(1j * to_mpc(phase))
    amp = mp.exp(abs(mp.im(to_mpc(phase))) + to_mpf(phase_err))
    return EvalResult(value, to_mpf(phase_err) * amp)


def eval_multivar(problem: MultivarProblem, x, tol=DEFAULT_TAIL_TOL) -> EvalResult:
    """sum_j Z_j prod_l exp(i x_l G_l(h_j)) for superoscillation mode."""
    x = _check_point(problem, x)
    coeffs = problem.coeffs
    value = mp.mpc(0)
    err = mp.mpf(0)
    for z, h in zip(coeffs.values, coeffs.nodes.points):
        phase = mp.mpc(0)
        delta = mp.mpf(0)
        for xl, g in zip(x, problem.G):
            gv, gt = truncated_eval(g, h, tail_tol=tol)
            phase += to_mpc(xl) * to_mpc(gv)
            delta += abs(to_mpf(abs_scalar(xl))) * to_mpf(gt)
        term, term_err = _phase_result(phase, delta)
        az = to_mpf(abs_scalar(z))
        value += to_mpc(z) * term
        err += az * term_err
    return EvalResult(value, err)


def target_multivar(problem: MultivarProblem, x, tol=DEFAULT_TAIL_TOL) -> EvalResult:
    """exp(i sum_l x_l G_l(a)): the uniform limit on compacts."""
    x = _check_point(problem, x)
    a = problem.coeffs.a
    phase = mp.mpc(0)
    delta = mp.mpf(0)
    for xl, g in zip(x, problem.G):
        gv, gt = truncated_eval(g, a, tail_tol=tol)
        phase += to_mpc(xl) * to_mpc(gv)
        delta += abs(to_mpf(abs_scalar(xl))) * to_mpf(gt)
    return _phase_result(phase, delta)


def eval_supershift(problem: MultivarProblem, x, tol=DEFAULT_TAIL_TOL) -> EvalResult:
    """sum_j Z_j prod_l G_l(x_l h_j); exact (zero error) when every G is a
    polynomial and all scalars are rational."""
    x = _check_point(problem, x)
    coeffs = problem.coeffs
    value = 0
    err = 0
    for z, h in zip(coeffs.values, coeffs.nodes.points):
        vals, tails = [], []
        for xl, g in zip(x, problem.G):
            arg = xl * h if (is_exact(xl) and is_exact(h)) else to_mpc(xl) * to_mpc(h)
            gv, gt = truncated_eval(g, arg, tail_tol=tol)
            vals.append(gv)
            tails.append(gt)
        prod = 1
        for v in vals:
            prod = prod * v
        delta = _product_error(vals, tails)
        value = value + z * prod
        err = err + abs_scalar(z) * delta
    return EvalResult(value, err)


def target_supershift(problem: MultivarProblem, x, tol=DEFAULT_TAIL_TOL) -> EvalResult:
    """prod_l G_l(a x_l): the supershift limit."""
    x = _check_point(problem, x)
    a = problem.coeffs.a
    vals, tails = [], []
    for xl, g in zip(x, problem.G):
        arg = a * xl if is_exact(xl) else to_mpc(a) * to_mpc(xl)
        gv, gt = truncated_eval(g, arg, tail_tol=tol)
        vals.append(gv)
        tails.append(gt)
    prod = 1
    for v in vals:
        prod = prod * v
    return EvalResult(prod, _product_error(vals, tails))


def _product_error(vals, tails):
    """First-order product error: sum_l t_l * prod_{m != l} (|v_m| + t_m)."""
    if all(t == 0 for t in tails):
        return Fraction(0) if all(is_exact(v) for v in vals) else mp.mpf(0)
    mags = [to_mpf(abs_scalar(v)) for v in vals]
    tl = [to_mpf(t) for t in tails]
    total = mp.mpf(0)
    for l in range(len(vals)):
        factor = tl[l]
        for m in range(len(vals)):
            if m != l:
                factor *= mags[m] + tl[m]
        total += factor
    return total


def _check_point(problem: MultivarProblem, x):
    x = tuple(x)
    if len(x) != problem.d:
        raise ConfigError(f"point has {len(x)} coordinates, problem has d = {problem.d}")
    return x


def admissible_halfwidth(a, B, radii):
    """min(R/|a|, R/(4eB), R) with R the min of the radii.

    Exact rational arithmetic whenever a is rational and B is a rational
    multiple of 1/e (so 4eB is rational); INF when every radius is infinite.
    """
    r = INF
    for rl in radii:
        if rl != INF and (r == INF or Fraction(rl) < r):
            r = Fraction(rl)
    if r == INF:
        return INF
    B = EScaled.from_value(B) if not isinstance(B, EScaled) else B
    if not B.is_positive():
        raise ConfigError("B must be positive")
    a_abs = abs(parse_real(a))
    four_e_b = B.scale(4, extra_e=1)
    if four_e_b.e_exp == 0:
        return min(r / a_abs, r / four_e_b.coef, r)
    with mp.workprec(max(mp.prec, 128)):
        return min(to_mpf(r) / to_mpf(a_abs), to_mpf(r) / four_e_b.to_mpf(), to_mpf(r))
