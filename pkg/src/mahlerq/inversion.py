"""Change of variables between z, q and Q, and the integer tables behind it.

The logarithmic derivative q d/dq log Q expands as 1 + sum u_m q^m; its
Moebius inversion

    b_m     = -(1/m^2) sum_{d|m} mu(m/d) u_d
    bhat_m  = -(1/m^2) sum_{d|m} mu(m/d) (-1)^d u_d

turns the expansion into the product forms

    Q = q prod_{m>=1} (1 - q^m)^{m b_m}
      = q prod_{m>=1} (1 - (-q)^m)^{m bhat_m},

and symmetrically Q d/dQ log q = 1 + sum v_m Q^m yields c_m, chat_m with
q = Q prod (1 - Q^m)^{m c_m}.  Everything here is exact; u and v are
computed along two independent routes (direct composition versus the
closed rational expression in z) and any disagreement halts with a
diagnostic rather than returning data.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .series import Series, lagrange_coeffs
from .mirror import MirrorData
from .weights import Model


class ConsistencyError(RuntimeError):
    """Two independent computation routes disagreed; results are not trusted."""


def mobius(m: int) -> int:
    """Moebius function by trial-division factorization."""
    if m < 1:
        raise ValueError("mobius is defined on positive integers")
    result = 1
    p = 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1 if p == 2 else 2
    if m > 1:
        result = -result
    return result


def divisors(m: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= m:
        if m % d == 0:
            small.append(d)
            if d * d != m:
                large.append(m // d)
        d += 1
    return small + large[::-1]


# ---------------------------------------------------------------------------
# u and v expansions (dual-route)
# ---------------------------------------------------------------------------

def _dlog_numer_denom(md: MirrorData) -> tuple[Series, Series]:
    # q d/dq log Q = g0 / (1 + theta(h/g0)) = g0^3 / (g0^2 + g0*theta(h) - h*theta(g0))
    g0, h = md.g0, md.h
    denom = g0 * g0 + g0 * h.theta() - h * g0.theta()
    return g0 * g0 * g0, denom


def _compose_route(outer: Series, inner_var: Series) -> list[Fraction]:
    # coefficients m=1.. of theta log(outer(inner)/t) where t is the new variable
    composed = outer.compose(inner_var)
    unit = composed.shift_down(1)
    tail = unit.log().theta()
    return [tail.coeff(m) for m in range(1, tail.order + 1)]


def _rational_route(expr: Series, inner_var: Series) -> list[Fraction]:
    composed = expr.compose(inner_var)
    if composed.coeff(0) != 1:
        raise ConsistencyError("logarithmic derivative lost its unit constant term")
    return [composed.coeff(m) for m in range(1, composed.order + 1)]


def _dual_route(direct: list[Fraction], rational: list[Fraction],
                count: int, label: str, model_name: str) -> list[Fraction]:
    if len(rational) < count:
        raise ValueError(
            f"mirror data order too small for {count} {label}-coefficients"
        )
    for m, (x, y) in enumerate(zip(direct, rational), start=1):
        if x != y:
            raise ConsistencyError(
                f"{label}-series routes disagree for model {model_name} at "
                f"m={m}: composition gives {x}, rational expression gives {y}"
            )
    return rational[:count]


def u_series(md: MirrorData, count: int) -> list[Fraction]:
    """Coefficients u_1..u_count of q d/dq log Q(q) - 1.

    Both routes are exact; with md.order == count the direct route pins
    all but the last coefficient (its top term needs one extra order of
    Q(q)), so build the mirror data one order deep for a full check.
    """
    expr_num, expr_den = _dlog_numer_denom(md)
    direct = _compose_route(md.Q, md.zq)
    rational = _rational_route(expr_num / expr_den, md.zq)
    return _dual_route(direct, rational, count, "u", md.model.name)


def v_series(md: MirrorData, count: int) -> list[Fraction]:
    """Coefficients v_1..v_count of Q d/dQ log q(Q) - 1 (mirror image of u)."""
    expr_num, expr_den = _dlog_numer_denom(md)
    direct = _compose_route(md.q, md.zQ)
    rational = _rational_route(expr_den / expr_num, md.zQ)
    return _dual_route(direct, rational, count, "v", md.model.name)


# ---------------------------------------------------------------------------
# Moebius / Lambert inversion
# ---------------------------------------------------------------------------

def lambert_invert(u: list[Fraction], alternating: bool = False) -> list[Fraction]:
    """Invert 1 + sum u_m t^m into Lambert-series coefficients.

    Plain:        b_m = -(1/m^2) sum_{d|m} mu(m/d) u_d
    Alternating:  bhat_m = -(1/m^2) sum_{d|m} mu(m/d) (-1)^d u_d
    """
    out = []
    for m in range(1, len(u) + 1):
        acc = Fraction(0)
        for d in divisors(m):
            mu = mobius(m // d)
            if mu:
                term = u[d - 1]
                if alternating and d % 2:
                    term = -term
                acc += mu * term
        out.append(-acc / (m * m))
    return out


def lambert_series(b: list[Fraction], order: int, alternating: bool = False) -> Series:
    """Expand 1 - sum_m b_m m^2 t^m/(1-t^m) (or its (-t)^m variant) to ``order``.

    Brute-force summation of each geometric block, independent of the
    Moebius route, so it doubles as the round-trip oracle.
    """
    coeffs = [Fraction(1)] + [Fraction(0)] * order
    for m, bm in enumerate(b, start=1):
        if not bm:
            continue
        weight = bm * m * m
        for i in range(m, order + 1, m):
            sign = (-1) ** i if alternating else 1
            coeffs[i] -= weight * sign
    return Series(coeffs)


def product_check(target: Series, b: list[Fraction], alternating: bool = False) -> bool:
    """Verify target = t * prod_{m<=M} (1 - (+-t)^m)^(m*b_m) mod t^(M+1).

    Also replays the equivalent Lambert-series identity against the
    logarithmic derivative of the target (one order lower, since the
    derivative of the top coefficient is not observable).
    """
    M = len(b)
    if target.order < M:
        raise ValueError("target order too small for the product test")
    prod = Series.one(M)
    for m in range(1, M + 1):
        sign = (-1) ** m if alternating else 1
        base = Series.one(M) - Series.monomial(sign, m, M)
        prod = prod * base ** (m * b[m - 1])
    if prod.zshift(1).truncate(M) != target.truncate(M):
        return False
    unit = target.truncate(M).shift_down(1)
    dlog = unit.log().theta() + 1
    lam = lambert_series(b, M - 1, alternating) if M > 1 else Series.one(0)
    return dlog.truncate(M - 1) == lam


def g0_expansions(md: MirrorData, count: int) -> tuple[list[Fraction], list[Fraction]]:
    """Tail coefficients (m=1..count) of g0 rewritten in q and in Q."""
    if md.order < count:
        raise ValueError("mirror data order too small")
    in_q = md.g0.compose(md.zq)
    in_Q = md.g0.compose(md.zQ)
    return (
        [in_q.coeff(m) for m in range(1, count + 1)],
        [in_Q.coeff(m) for m in range(1, count + 1)],
    )


# ---------------------------------------------------------------------------
# integrality report
# ---------------------------------------------------------------------------

def format_rational(x: Fraction) -> str:
    """Decimal string for integers, "p/q" otherwise; never via floating point."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class LambertTable:
    """u, v and their four Moebius inversions, m = 1..order."""

    order: int
    u: tuple[Fraction, ...]
    v: tuple[Fraction, ...]
    b: tuple[Fraction, ...]
    bhat: tuple[Fraction, ...]
    c: tuple[Fraction, ...]
    chat: tuple[Fraction, ...]

    def __post_init__(self):
        rows = (self.u, self.v, self.b, self.bhat, self.c, self.chat)
        if any(len(r) != self.order for r in rows):
            raise ValueError("all columns must have length equal to order")
        u, v = list(self.u), list(self.v)
        if (
            tuple(lambert_invert(u)) != self.b
            or tuple(lambert_invert(u, alternating=True)) != self.bhat
            or tuple(lambert_invert(v)) != self.c
            or tuple(lambert_invert(v, alternating=True)) != self.chat
        ):
            raise ValueError("columns do not satisfy their defining Moebius sums")


@dataclass(frozen=True)
class IntegralityReport:
    """Computed table plus cross-checks for one model at one order.

    Per-row verdicts (integrality, divisibility) are always derived from
    the stored exact values on demand, never stored separately.
    """

    model: Model
    order: int
    table: LambertTable
    g0_in_q: tuple[Fraction, ...]
    g0_in_Q: tuple[Fraction, ...]
    z_in_q: tuple[Fraction, ...]
    z_in_Q: tuple[Fraction, ...]
    checks: dict

    def rows(self) -> list[dict]:
        t = self.table
        out = []
        diagonal = self.model.is_diagonal()
        n = self.model.n
        for m in range(1, self.order + 1):
            vals = {
                "b": t.b[m - 1],
                "bhat": t.bhat[m - 1],
                "c": t.c[m - 1],
                "chat": t.chat[m - 1],
            }
            row: dict = {"m": m}
            row.update({key: format_rational(x) for key, x in vals.items()})
            for key, x in vals.items():
                row[f"{key}_over_m"] = format_rational(x / m)
            for key, x in vals.items():
                row[f"{key}_integer"] = x.denominator == 1
            for key, x in vals.items():
                row[f"{key}_div_m"] = x.denominator == 1 and x.numerator % m == 0
            if diagonal:
                row["div_n"] = all(
                    x.denominator == 1 and x.numerator % n == 0
                    for x in vals.values()
                )
            out.append(row)
        return out

    def to_json_dict(self) -> dict:
        return {
            "model": self.model.to_json_dict(),
            "order": self.order,
            "rows": self.rows(),
            "u": [format_rational(x) for x in self.table.u],
            "v": [format_rational(x) for x in self.table.v],
            "g0_in_q": [format_rational(x) for x in self.g0_in_q],
            "g0_in_Q": [format_rational(x) for x in self.g0_in_Q],
            "z_in_q": [format_rational(x) for x in self.z_in_q],
            "z_in_Q": [format_rational(x) for x in self.z_in_Q],
            "checks": dict(self.checks),
        }


def _all_integer(values) -> bool:
    return all(x.denominator == 1 for x in values)


def integrality_report(model: Model, order: int) -> IntegralityReport:
    """Full pipeline: mirror data, u/v, Moebius tables, product and
    integrality checks.  Deterministic for a given (model, order).

    The mirror data is built one order deeper than requested so that the
    direct and rational routes both cover every reported coefficient.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    md = MirrorData.build(model, order + 1)
    u = u_series(md, order)
    v = v_series(md, order)
    table = LambertTable(
        order=order,
        u=tuple(u),
        v=tuple(v),
        b=tuple(lambert_invert(u)),
        bhat=tuple(lambert_invert(u, alternating=True)),
        c=tuple(lambert_invert(v)),
        chat=tuple(lambert_invert(v, alternating=True)),
    )

    # z as a series in q and in Q: reversion cross-checked against the
    # closed Lagrange form before anything is reported.
    phi_q = md.h / md.g0
    a_m = lagrange_coeffs(phi_q, order)
    A_m = lagrange_coeffs(md.f, order)
    for m in range(1, order + 1):
        if a_m[m - 1] != md.zq.coeff(m) or A_m[m - 1] != md.zQ.coeff(m):
            raise ConsistencyError(
                f"Lagrange and Newton reversions disagree for model "
                f"{model.name} at m={m}"
            )

    g0_in_q, g0_in_Q = g0_expansions(md, order)

    Q_of_q = md.Q.compose(md.zq).truncate(order)
    q_of_Q = md.q.compose(md.zQ).truncate(order)
    k = model.k
    root_q = md.q.shift_down(1) ** Fraction(1, k)
    root_Q = md.Q.shift_down(1) ** Fraction(1, k)

    checks = {
        "product_plain": (
            product_check(Q_of_q, list(table.b))
            and product_check(q_of_Q, list(table.c))
        ),
        "product_alt": (
            product_check(Q_of_q, list(table.bhat), alternating=True)
            and product_check(q_of_Q, list(table.chat), alternating=True)
        ),
        "lagrange_integral": _all_integer(a_m) and _all_integer(A_m),
        "g0_in_q_integral": _all_integer(g0_in_q),
        "g0_in_Q_integral": _all_integer(g0_in_Q),
        "proposition_qQ_integral": (
            md.q.coeff(1) == 1
            and md.Q.coeff(1) == 1
            and _all_integer(md.q.coeffs)
            and _all_integer(md.Q.coeffs)
        ),
        "conjecture1_root_integral": (
            _all_integer(root_q.coeffs) and _all_integer(root_Q.coeffs)
        ),
    }
    return IntegralityReport(
        model=model,
        order=order,
        table=table,
        g0_in_q=tuple(g0_in_q),
        g0_in_Q=tuple(g0_in_Q),
        z_in_q=tuple(a_m),
        z_in_Q=tuple(A_m),
        checks=checks,
    )
