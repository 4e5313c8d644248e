"""Infinite-order differential operators acting on Taylor-coefficient
streams of entire functions with growth certificates.

Both operators are truncated power series in the differentiation symbol: the
coefficient at degree k multiplies D^k / i^k, and the action on a
coefficient stream a_j is the contraction

    c_j = sum_k sigma_k * i^(-k) * a_{j+k} * (j+k)! / j!.

For the superoscillation operator the symbol is the exponential of the
y-series y_p = i * sum_l x_l g_{l,p}; for the supershift operator it is the
d-fold Cauchy product of the argument-scaled series G_l(x_l * lambda),
collapsing the d-dimensional index sum to one total degree. The input's
certificate |a_q| <= C b^q / q! makes the k-tail of the contraction
geometrically dominated whenever the symbol's radius exceeds b; the symbol
order is increased adaptively until the c_0 tail falls below tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import List, Optional, Tuple

from mpmath import mp

from .coefficients import CoefficientSet
from .errors import OutsideRadius, TailNotBounded
from .exact import (EScaled, INF, NEG_I_POW, ComplexFraction, abs_scalar,
                    is_exact, to_mpc, to_mpf)
from .growth import GrowthFunction, SamplingGrid, bnorm_estimate, certificate_fit, \
    exponential_wave, restrict_at_zero, wave_combination
from .sequences import EvalResult, MultivarProblem
from .series import (DEFAULT_TAIL_TOL, PowerSeries, as_numeric, cauchy_product,
                     envelope_constant, scale_argument, series_exp)

SYMBOL_ORDER_CAP = 512
SYMBOL_ORDER_START = 32


@dataclass(frozen=True)
class OperatorSymbol:
    """Truncated operator symbol: kind, materialized sigma, and the data
    needed to rebuild it at a higher order."""

    kind: str  # "U" or "V"
    sigma: PowerSeries
    order: int
    x: Tuple
    g_list: Tuple[PowerSeries, ...]
    b_premise: Optional[EScaled] = None

    def with_order(self, n: int) -> "OperatorSymbol":
        if self.kind == "U":
            return build_U(self.x, self.g_list, n, B=self.b_premise)
        return build_V(self.x, self.g_list, n)


def build_y_series(x, g_list) -> PowerSeries:
    """Coefficient p -> i * sum_l x_l g_{l,p}, exact when inputs are exact."""
    x = tuple(x)
    g_list = tuple(g_list)
    radius = INF
    degree = 0
    for g in g_list:
        if g.radius != INF and (radius == INF or g.radius < radius):
            radius = g.radius
        if degree is not None:
            degree = max(degree, g.degree) if g.degree is not None else None

    def yp(p: int):
        acc = 0
        for xl, g in zip(x, g_list):
            glp = g.coeff(p)
            if is_exact(glp) and glp == 0:
                continue
            acc = acc + xl * glp
        if is_exact(acc):
            base = ComplexFraction.from_scalar(acc)
            return ComplexFraction(-base.im, base.re)  # multiply by i
        return mp.mpc(0, 1) * to_mpc(acc)

    return PowerSeries(yp, radius, tag="y", degree=degree)


def build_U(x, g_list, order: int, B: Optional[EScaled] = None) -> OperatorSymbol:
    """Superoscillation symbol: exp of the y-series, truncated.

    The p = 0 term of the y-series is included, so the symbol carries the
    constant-phase factor exp(y_0) and the operator route matches the direct
    multivariate sum when some G_l(0) != 0. The premise B < R/(4e) is
    recorded for norm bookkeeping, not enforced here.
    """
    y = build_y_series(x, g_list)
    sigma = series_exp(y, order)
    return OperatorSymbol(kind="U", sigma=sigma, order=order, x=tuple(x),
                          g_list=tuple(g_list), b_premise=B)


def build_V(x, g_list, order: int) -> OperatorSymbol:
    """Supershift symbol: total-degree collapse of the product-form
    coefficient array, i.e. the d-fold Cauchy product of G_l(x_l * lambda).

    The lambda^k coefficient is the sum over m_1 + ... + m_d = k of
    prod_l g_{l,m_l} x_l^{m_l}; collapsing to one convolution is what makes
    the engine one-dimensional regardless of d. Exact rational convolution is
    kept only when every factor is a polynomial (the degree-exactness cases);
    otherwise big-denominator growth makes mpc the right arithmetic.
    """
    x = tuple(x)
    g_list = tuple(g_list)
    keep_exact = all(g.degree is not None for g in g_list) and all(is_exact(xl) for xl in x)
    scaled = [scale_argument(g, xl) for xl, g in zip(x, g_list)]
    if not keep_exact:
        scaled = [as_numeric(s) for s in scaled]
    sigma = scaled[0]
    for s in scaled[1:]:
        sigma = cauchy_product(sigma, s, order)
    return OperatorSymbol(kind="V", sigma=sigma, order=order, x=x, g_list=g_list)


@dataclass(frozen=True)
class ApplyResult:
    function: GrowthFunction
    coeff_tails: Tuple
    symbol_order: int


def _symbol_tail_factor(sigma: PowerSeries, order: int, b):
    """Bound on sum_{k > order} |sigma_k| b^k from the fitted envelope.

    Zero for polynomial symbols (the sum is complete). Requires the symbol
    radius to exceed b; otherwise the contraction tail cannot converge.
    """
    if sigma.degree is not None and order >= sigma.degree:
        return mp.mpf(0)
    b = to_mpf(b)
    if sigma.radius == INF:
        r_eff = 2 * b if b > 0 else mp.mpf(1)
    else:
        r_eff = to_mpf(sigma.radius)
        if r_eff <= b:
            raise TailNotBounded(
                f"symbol radius {mp.nstr(r_eff, 6)} does not exceed certified growth "
                f"b = {mp.nstr(b, 6)}; contraction tail diverges"
            )
    q = b / r_eff
    mods = [to_mpf(abs_scalar(sigma.coeff(k))) for k in range(order + 1)]
    c_hat = envelope_constant(mods, r_eff)
    return 2 * c_hat * q ** (order + 1) / (1 - q)


def apply_operator(op: OperatorSymbol, f: GrowthFunction, M: int = 0,
                   tol=DEFAULT_TAIL_TOL, order_cap: int = SYMBOL_ORDER_CAP) -> ApplyResult:
    """Contract the symbol against f's coefficient stream.

    The symbol order is doubled (rebuilding sigma) until the certificate
    k-tail of the output's 0th coefficient is below tol, up to order_cap.
    Output coefficients c_0..c_M are materialized; the output certificate
    maps the growth parameter b to 8e*b with C fitted on the computed
    horizon. Exact arithmetic is preserved when the symbol is an exact
    polynomial and f's coefficients are exact.
    """
    c_cert, b_cert = f.cert_c, f.cert_b
    n = op.order
    while True:
        tail_factor = _symbol_tail_factor(op.sigma, n, b_cert)
        c0_tail = to_mpf(c_cert) * tail_factor
        if c0_tail <= to_mpf(tol):
            break
        if n >= order_cap:
            raise TailNotBounded(
                f"c_0 tail bound {mp.nstr(c0_tail, 6)} above tolerance at symbol "
                f"order cap {order_cap}"
            )
        n = min(2 * n, order_cap)
        op = op.with_order(n)

    svals = op.sigma.prefix(n)
    avals = [f.taylor(q) for q in range(M + n + 1)]
    exact = all(is_exact(s) for s in svals) and all(is_exact(a) for a in avals) \
        and op.sigma.degree is not None
    coeffs = []
    tails = []
    b_f = to_mpf(b_cert)
    for j in range(M + 1):
        if exact:
            acc = ComplexFraction(Fraction(0), Fraction(0))
            for k, sk in enumerate(svals):
                if is_exact(sk) and sk == 0:
                    continue
                ratio = factorial(j + k) // factorial(j)
                acc = acc + sk * NEG_I_POW[k % 4] * avals[j + k] * ratio
            coeffs.append(acc)
        else:
            acc = mp.mpc(0)
            for k, sk in enumerate(svals):
                sk_c = to_mpc(sk)
                if sk_c == 0:
                    continue
                ratio = factorial(j + k) // factorial(j)
                acc += sk_c * to_mpc(NEG_I_POW[k % 4]) * to_mpc(avals[j + k]) * ratio
            coeffs.append(acc)
        tails.append(to_mpf(c_cert) * tail_factor * b_f ** j / mp.factorial(j))

    b_out = 8 * mp.e * b_f
    c_out = to_mpf(abs_scalar(coeffs[0]))
    bpow = mp.mpf(1)
    for j in range(1, M + 1):
        bpow *= b_out
        c_out = max(c_out, to_mpf(abs_scalar(coeffs[j])) * mp.factorial(j) / bpow)
    if c_out == 0:
        c_out = mp.mpf(1)
    out_vals = tuple(coeffs)

    def taylor(j: int):
        return out_vals[j] if j < len(out_vals) else 0

    gf = GrowthFunction(taylor=taylor, certificate=(c_out, b_out),
                        label=f"{op.kind}(x={op.x})[{f.label}]", horizon=M)
    return ApplyResult(function=gf, coeff_tails=tuple(tails), symbol_order=n)


def _build_for_problem(problem: MultivarProblem, x, order: int) -> OperatorSymbol:
    if problem.mode == "superoscillation":
        return build_U(x, problem.G, order, B=problem.B)
    return build_V(x, problem.G, order)


def _check_v_domain(problem: MultivarProblem, x):
    """Continuity domain for the supershift operator: |x_l| < R/(4eB)."""
    r = problem.min_radius
    if r == INF:
        return
    four_e_b = problem.B.scale(4, extra_e=1)
    if four_e_b.e_exp == 0:
        bound = Fraction(r) / four_e_b.coef
    else:
        with mp.workprec(max(mp.prec, 128)):
            bound = to_mpf(r) / four_e_b.to_mpf()
    for xl in x:
        axl = abs_scalar(xl)
        too_big = axl >= bound if isinstance(axl, Fraction) and isinstance(bound, Fraction) \
            else to_mpf(axl) >= to_mpf(bound)
        if too_big:
            raise OutsideRadius(
                f"|x_l| = {float(axl):.6g} outside the continuity domain "
                f"half-width R/(4eB) = {float(bound):.6g}"
            )


def operator_route_Fn(problem: MultivarProblem, x, tol=DEFAULT_TAIL_TOL,
                      order: int = SYMBOL_ORDER_START,
                      order_cap: int = SYMBOL_ORDER_CAP) -> EvalResult:
    """F_n via the operator route: apply the symbol to
    sum_j Z_j exp(i xi h_j) and restrict to xi = 0."""
    x = tuple(x)
    if problem.mode == "supershift":
        _check_v_domain(problem, x)
    f = wave_combination(problem.coeffs)
    op = _build_for_problem(problem, x, order)
    res = apply_operator(op, f, M=0, tol=tol, order_cap=order_cap)
    return EvalResult(to_mpc(restrict_at_zero(res.function)), res.coeff_tails[0])


def limit_route_target(problem: MultivarProblem, x, tol=DEFAULT_TAIL_TOL,
                       order: int = SYMBOL_ORDER_START,
                       order_cap: int = SYMBOL_ORDER_CAP) -> EvalResult:
    """The limit target via the operator route: apply the symbol to
    exp(i a xi) and restrict to xi = 0."""
    x = tuple(x)
    a = problem.coeffs.a
    r = problem.min_radius
    if problem.mode == "superoscillation":
        if r != INF and abs(Fraction(a)) >= r:
            raise OutsideRadius(f"|a| = {float(abs(a)):.6g} not inside min radius {float(r):.6g}")
    else:
        if r != INF:
            bound = Fraction(r) / abs(Fraction(a))
            for xl in x:
                axl = abs_scalar(xl)
                too_big = axl >= bound if isinstance(axl, Fraction) \
                    else to_mpf(axl) >= to_mpf(bound)
                if too_big:
                    raise OutsideRadius(
                        f"|x_l| = {float(axl):.6g} not inside R/|a| = {float(bound):.6g}"
                    )
    f = exponential_wave(a)
    op = _build_for_problem(problem, x, order)
    res = apply_operator(op, f, M=0, tol=tol, order_cap=order_cap)
    return EvalResult(to_mpc(restrict_at_zero(res.function)), res.coeff_tails[0])


@dataclass(frozen=True)
class ProbeRecord:
    label: str
    norm_in: object
    norm_out: object
    ratio: object


@dataclass(frozen=True)
class ProbeReport:
    records: Tuple[ProbeRecord, ...]
    max_ratio: object


def continuity_probe(kind: str, x, g_list, B, family, grid: SamplingGrid = SamplingGrid(),
                     M: int = 48, tol=DEFAULT_TAIL_TOL) -> ProbeReport:
    """Sampled operator-norm probe: max over the family of
    ||op f||_{8eB} / ||f||_B, with both norms from bnorm_estimate's sampled
    lower bounds."""
    B = EScaled.from_value(B)
    b_out = B.scale(8, extra_e=1)
    if kind == "U":
        op = build_U(x, g_list, SYMBOL_ORDER_START, B=B)
    elif kind == "V":
        op = build_V(x, g_list, SYMBOL_ORDER_START)
    else:
        raise ValueError("kind must be 'U' or 'V'")
    records = []
    max_ratio = mp.mpf(0)
    for f in family:
        n_in = bnorm_estimate(f, B.to_mpf(), grid)
        res = apply_operator(op, f, M=M, tol=tol)
        n_out = bnorm_estimate(res.function, b_out.to_mpf(), grid)
        ratio = n_out.lower / n_in.lower if n_in.lower > 0 else mp.inf
        records.append(ProbeRecord(label=f.label, norm_in=n_in, norm_out=n_out, ratio=ratio))
        if ratio > max_ratio:
            max_ratio = ratio
    return ProbeReport(records=tuple(records), max_ratio=max_ratio)
