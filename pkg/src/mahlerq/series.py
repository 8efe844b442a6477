"""Exact truncated formal power series over arbitrary-precision rationals.

A :class:`Series` of order ``N`` holds the coefficients of ``z^0 .. z^N``
as :class:`fractions.Fraction` values and is exact modulo ``z^(N+1)``.
The kernel never extends precision on its own: binary operations on
mismatched orders truncate to the smaller order, so the working order is
chosen once at pipeline entry.  Every value is immutable after
construction and all operations are pure, which makes sharing across
threads safe by construction.

:class:`LogSeries` carries a logarithmic solution ``R(z) + L(z)*log z``
as a pair of plain series.  The Euler operator ``theta = z*d/dz`` acts on
the pair by ``theta(R) + L + theta(L)*log z``, so no symbolic ``log z``
object is ever needed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

Rational = Fraction
Scalar = Union[int, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def as_rational(value: Scalar) -> Fraction:
    """Coerce an exact scalar.  Floats are rejected: no inexact mode exists."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"exact scalar required, got {type(value).__name__}")


class Series:
    """Truncated power series ``c_0 + c_1 z + ... + c_N z^N`` (exact mod z^(N+1))."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[Scalar], order: int | None = None):
        cs = [as_rational(c) for c in coeffs]
        if order is not None:
            if order < 0:
                raise ValueError("order must be nonnegative")
            del cs[order + 1 :]
            cs.extend([_ZERO] * (order + 1 - len(cs)))
        if not cs:
            raise ValueError("a series needs at least its constant coefficient")
        self._coeffs = tuple(cs)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, order: int) -> "Series":
        return cls([_ZERO], order)

    @classmethod
    def one(cls, order: int) -> "Series":
        return cls([_ONE], order)

    @classmethod
    def constant(cls, value: Scalar, order: int) -> "Series":
        return cls([value], order)

    @classmethod
    def identity(cls, order: int) -> "Series":
        """The series ``z``."""
        if order < 1:
            raise ValueError("identity needs order >= 1")
        return cls([_ZERO, _ONE], order)

    @classmethod
    def monomial(cls, value: Scalar, degree: int, order: int) -> "Series":
        if not 0 <= degree <= order:
            raise ValueError("monomial degree beyond order")
        return cls([_ZERO] * degree + [value], order)

    # -- basic accessors ----------------------------------------------

    @property
    def order(self) -> int:
        return len(self._coeffs) - 1

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    def coeff(self, m: int) -> Fraction:
        """Coefficient of ``z^m``; asking beyond the truncation order is an error."""
        if not 0 <= m <= self.order:
            raise IndexError(
                f"coefficient z^{m} beyond truncation order {self.order}"
            )
        return self._coeffs[m]

    __getitem__ = coeff

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, or None for the zero series."""
        for m, c in enumerate(self._coeffs):
            if c:
                return m
        return None

    def is_zero(self) -> bool:
        return all(c == 0 for c in self._coeffs)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Series) and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __repr__(self) -> str:
        return f"Series({[str(c) for c in self._coeffs]})"

    def __str__(self) -> str:
        terms = []
        for m, c in enumerate(self._coeffs):
            if c == 0:
                continue
            if m == 0:
                terms.append(str(c))
            elif m == 1:
                terms.append(f"{c}*z")
            else:
                terms.append(f"{c}*z^{m}")
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O(z^{self.order + 1})"

    # -- order management ---------------------------------------------

    def truncate(self, order: int) -> "Series":
        """Drop coefficients above ``order`` (never extends)."""
        if order > self.order:
            raise ValueError("truncate cannot extend a series")
        if order == self.order:
            return self
        return Series(self._coeffs[: order + 1])

    def zshift(self, n: int = 1) -> "Series":
        """Multiply by ``z^n``, raising the order by ``n`` (no information lost)."""
        if n < 0:
            raise ValueError("zshift amount must be nonnegative")
        return Series((_ZERO,) * n + self._coeffs)

    def shift_down(self, n: int) -> "Series":
        """Divide by ``z^n``; the first ``n`` coefficients must vanish."""
        if n < 0 or n > self.order:
            raise ValueError("shift_down amount out of range")
        if any(self._coeffs[:n]):
            raise ValueError("shift_down needs a zero of that order")
        return Series(self._coeffs[n:])

    # -- ring operations ----------------------------------------------

    def _common(self, other: "Series") -> tuple[int, tuple, tuple]:
        n = min(self.order, other.order)
        return n, self._coeffs[: n + 1], other._coeffs[: n + 1]

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Series.constant(other, self.order)
        elif not isinstance(other, Series):
            return NotImplemented
        _, a, b = self._common(other)
        return Series([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Series([-c for c in self._coeffs])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Series.constant(other, self.order)
        elif not isinstance(other, Series):
            return NotImplemented
        _, a, b = self._common(other)
        return Series([x - y for x, y in zip(a, b)])

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = as_rational(other)
            return Series([c * x for x in self._coeffs])
        if not isinstance(other, Series):
            return NotImplemented
        n, a, b = self._common(other)
        out = [_ZERO] * (n + 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j in range(n + 1 - i):
                bj = b[j]
                if bj:
                    out[i + j] += ai * bj
        return Series(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            c = as_rational(other)
            if c == 0:
                raise ZeroDivisionError("division of a series by zero")
            return self * (1 / c)
        if isinstance(other, Series):
            return self * other.invert()
        return NotImplemented

    def invert(self) -> "Series":
        """Multiplicative inverse; needs a nonzero constant term."""
        a = self._coeffs
        if a[0] == 0:
            raise ValueError("series with zero constant term is not invertible")
        inv0 = 1 / a[0]
        out = [inv0]
        for m in range(1, self.order + 1):
            acc = _ZERO
            for j in range(1, m + 1):
                if a[j]:
                    acc += a[j] * out[m - j]
            out.append(-inv0 * acc)
        return Series(out)

    # -- transcendental operations ------------------------------------

    def exp(self) -> "Series":
        """Exponential of a constant-term-free series: sum a^k / k!.

        Uses the recurrence m*E_m = sum_{j=1..m} j*a_j*E_{m-j} coming
        from theta(E) = theta(a)*E.
        """
        a = self._coeffs
        if a[0] != 0:
            raise ValueError("exp needs a zero constant term")
        out = [_ONE]
        for m in range(1, self.order + 1):
            acc = _ZERO
            for j in range(1, m + 1):
                if a[j]:
                    acc += j * a[j] * out[m - j]
            out.append(acc / m)
        return Series(out)

    def log(self) -> "Series":
        """Logarithm of a series with constant term 1; result has constant term 0.

        Recurrence: L_m = a_m - (1/m) * sum_{j=1..m-1} j*L_j*a_{m-j}.
        """
        a = self._coeffs
        if a[0] != 1:
            raise ValueError("log needs constant term 1")
        out = [_ZERO]
        for m in range(1, self.order + 1):
            acc = _ZERO
            for j in range(1, m):
                if out[j] and a[m - j]:
                    acc += j * out[j] * a[m - j]
            out.append(a[m] - acc / m)
        return Series(out)

    def __pow__(self, exponent):
        """Integer powers by repeated squaring; fractional powers as exp(e*log).

        A genuinely fractional exponent requires constant term 1 (the
        branch fixed by value 1 at z=0); integer exponents work for any
        invertible base and agree with repeated multiplication.
        """
        e = as_rational(exponent) if not isinstance(exponent, int) else exponent
        if isinstance(e, Fraction):
            if e.denominator == 1:
                e = e.numerator
            else:
                if self._coeffs[0] != 1:
                    raise ValueError("fractional power needs constant term 1")
                return (e * self.log()).exp()
        if e < 0:
            return self.invert() ** (-e)
        result = Series.one(self.order)
        base = self
        while e > 0:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    # -- calculus ------------------------------------------------------

    def theta(self) -> "Series":
        """Euler operator z*d/dz: multiplies coefficient m by m."""
        return Series([m * c for m, c in enumerate(self._coeffs)])

    def derivative(self) -> "Series":
        """Ordinary derivative d/dz; the order drops by one."""
        if self.order == 0:
            return Series.zero(0)
        return Series([m * self._coeffs[m] for m in range(1, self.order + 1)])

    # -- composition and reversion -------------------------------------

    def compose(self, inner: "Series") -> "Series":
        """Substitute ``inner`` (constant term 0) into self, by Horner evaluation."""
        if inner.coeff(0) != 0:
            raise ValueError("composition needs inner constant term 0")
        n = min(self.order, inner.order)
        g = inner.truncate(n)
        acc = Series.constant(self._coeffs[n], n)
        for m in range(n - 1, -1, -1):
            acc = acc * g + self._coeffs[m]
        return acc

    def revert(self) -> "Series":
        """Compositional inverse of a series with f(0)=0, f'(0)!=0.

        Newton iteration with order doubling: with g correct mod
        z^(p+1), one step of g -= (f(g) - z)/f'(g) is correct mod
        z^(2p+2).  The quotient is formed after stripping the valuation
        of the numerator, so the derivative is only ever needed below
        full order.
        """
        N = self.order
        if N < 1 or self._coeffs[0] != 0:
            raise ValueError("reversion needs f(0) = 0 and order >= 1")
        if self._coeffs[1] == 0:
            raise ValueError("reversion needs f'(0) != 0")
        g = Series([_ZERO, 1 / self._coeffs[1]])
        if N == 1:
            return g
        fprime = self.derivative()
        prec = 1
        while prec < N:
            prec = min(2 * prec, N)
            gt = Series(g._coeffs, prec)  # zero-extend; the step repairs the tail
            err = self.truncate(prec).compose(gt) - Series.identity(prec)
            val = err.valuation()
            if val is None:
                g = gt
                continue
            d = fprime.truncate(prec - 1).compose(gt.truncate(prec - 1))
            quot = err.shift_down(val) * d.truncate(prec - val).invert()
            g = gt - quot.zshift(val).truncate(prec)
        return g


def lagrange_coeffs(phi: Series, count: int) -> list[Fraction]:
    """Reversion coefficients of w = z*exp(phi(z)) via Lagrange inversion.

    Returns ``a_1..a_count`` with z = sum a_m w^m, where a_m is the
    coefficient of z^(m-1) in (1 + theta(phi)) * exp(-m*phi).  Needs
    phi(0) = 0 and phi.order >= count - 1.  Serves as the independent
    cross-check of :meth:`Series.revert`.
    """
    if count < 1:
        raise ValueError("count must be positive")
    if phi.coeff(0) != 0:
        raise ValueError("lagrange_coeffs needs phi(0) = 0")
    if phi.order < count - 1:
        raise ValueError(
            f"phi order {phi.order} too small for {count} coefficients"
        )
    kernel = phi.theta() + 1
    out = []
    for m in range(1, count + 1):
        factor = (phi * (-m)).exp()
        out.append((kernel * factor).coeff(m - 1))
    return out


class LogSeries:
    """A logarithmic solution ``regular(z) + logpart(z) * log z``.

    Both components share one truncation order (the smaller of the two
    inputs).  Only the operations needed by differential-operator
    bookkeeping are provided: linear combinations, theta, and
    multiplication by z at fixed order.
    """

    __slots__ = ("regular", "logpart")

    def __init__(self, regular: Series, logpart: Series):
        n = min(regular.order, logpart.order)
        self.regular = regular.truncate(n)
        self.logpart = logpart.truncate(n)

    @classmethod
    def plain(cls, series: Series) -> "LogSeries":
        return cls(series, Series.zero(series.order))

    @property
    def order(self) -> int:
        return self.regular.order

    def theta(self) -> "LogSeries":
        # theta(R + L*log z) = theta(R) + L + theta(L)*log z
        return LogSeries(self.regular.theta() + self.logpart, self.logpart.theta())

    def zmul(self) -> "LogSeries":
        """Multiply by z, keeping the truncation order."""
        n = self.order
        return LogSeries(
            self.regular.zshift(1).truncate(n), self.logpart.zshift(1).truncate(n)
        )

    def __add__(self, other: "LogSeries") -> "LogSeries":
        return LogSeries(self.regular + other.regular, self.logpart + other.logpart)

    def __sub__(self, other: "LogSeries") -> "LogSeries":
        return LogSeries(self.regular - other.regular, self.logpart - other.logpart)

    def __mul__(self, scalar: Scalar) -> "LogSeries":
        c = as_rational(scalar)
        return LogSeries(self.regular * c, self.logpart * c)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.regular.is_zero() and self.logpart.is_zero()

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, LogSeries)
            and self.regular == other.regular
            and self.logpart == other.logpart
        )

    def __hash__(self) -> int:
        return hash((self.regular, self.logpart))

    def __repr__(self) -> str:
        return f"LogSeries(regular={self.regular!r}, logpart={self.logpart!r})"
