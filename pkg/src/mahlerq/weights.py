"""Weight systems: tuples (k_1 <= ... <= k_n) with sum 1/k_i = 1.

Every such tuple determines a degree k = lcm(k_i) and weights
w_i = k/k_i with sum w_i = k.  Enumeration runs a bounded depth-first
search with exact rational residuals; a model can also be built from a
direct (k; w_1..w_n) pair with sum w_i = k, which covers weighted
hypersurfaces whose exponent vector is supplied by hand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable


@dataclass(frozen=True)
class KVector:
    """Non-decreasing tuple of integers >= 2 whose reciprocals sum to 1."""

    parts: tuple[int, ...]

    def __init__(self, parts: Iterable[int]):
        object.__setattr__(self, "parts", tuple(int(p) for p in parts))
        p = self.parts
        if len(p) < 2:
            raise ValueError("a weight system needs at least two parts")
        if p[0] < 2:
            raise ValueError("parts must be at least 2")
        if any(a > b for a, b in zip(p, p[1:])):
            raise ValueError("parts must be non-decreasing")
        if sum(Fraction(1, k) for k in p) != 1:
            raise ValueError(f"reciprocals of {p} do not sum to 1")

    @property
    def n(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __str__(self) -> str:
        return ",".join(str(p) for p in self.parts)


@dataclass(frozen=True)
class Model:
    """A degree k with weights (w_1..w_n), sum w_i = k; optionally from a KVector."""

    k: int
    w: tuple[int, ...]
    kvec: KVector | None = None
    name: str = ""

    def __post_init__(self):
        if self.k < 1 or any(wi < 1 for wi in self.w):
            raise ValueError("degree and weights must be positive")
        if sum(self.w) != self.k:
            raise ValueError(f"weights {self.w} do not sum to degree {self.k}")
        if not self.name:
            object.__setattr__(self, "name", self._default_name())

    def _default_name(self) -> str:
        if self.kvec is not None:
            return str(self.kvec)
        return f"{self.k}:" + ",".join(str(wi) for wi in self.w)

    @classmethod
    def from_kvector(cls, kv: KVector | Iterable[int], name: str = "") -> "Model":
        if not isinstance(kv, KVector):
            kv = KVector(kv)
        k = math.lcm(*kv.parts)
        w = tuple(k // ki for ki in kv.parts)
        return cls(k=k, w=w, kvec=kv, name=name)

    @classmethod
    def from_weights(cls, k: int, w: Iterable[int], name: str = "") -> "Model":
        return cls(k=int(k), w=tuple(int(x) for x in w), kvec=None, name=name)

    @property
    def n(self) -> int:
        return len(self.w)

    def is_diagonal(self) -> bool:
        """True for the family x_1^n + ... + x_n^n (all k_i equal)."""
        kv = self.kvec
        return kv is not None and len(set(kv.parts)) == 1

    def to_json_dict(self) -> dict:
        return {
            "k": list(self.kvec.parts) if self.kvec is not None else None,
            "lcm": self.k,
            "w": list(self.w),
            "name": self.name,
        }


def enumerate_solutions(n: int) -> list[KVector]:
    """All solutions of 1/k_1 + ... + 1/k_n = 1 with k_1 <= ... <= k_n.

    Bounded depth-first search on exact rational residuals: with
    residual r and s slots left, the next part ranges over
    [max(prev, ceil(1/r)), floor(s/r)]; the last slot closes only when
    the residual is a unit fraction.  Output is in ascending
    lexicographic order.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    out: list[KVector] = []

    def search(prefix: tuple[int, ...], residual: Fraction, slots: int) -> None:
        if slots == 1:
            if residual.numerator == 1 and residual.denominator >= prefix[-1]:
                out.append(KVector(prefix + (residual.denominator,)))
            return
        low = max(prefix[-1] if prefix else 2, math.ceil(1 / residual))
        high = math.floor(slots / residual)
        for k in range(low, high + 1):
            rest = residual - Fraction(1, k)
            if rest > 0:
                search(prefix + (k,), rest, slots - 1)

    search((), Fraction(1), n)
    out.sort(key=lambda kv: kv.parts)
    return out


def aut_order(kv: KVector) -> int:
    """Order of the symmetry group: product of multiplicity factorials."""
    mult: dict[int, int] = {}
    for p in kv.parts:
        mult[p] = mult.get(p, 0) + 1
    return math.prod(math.factorial(c) for c in mult.values())


def counts(n: int) -> tuple[int, Fraction]:
    """(simple, weighted) solution counts; weighted counts each as 1/|Aut|."""
    sols = enumerate_solutions(n)
    weighted = sum((Fraction(1, aut_order(kv)) for kv in sols), Fraction(0))
    return len(sols), weighted


def to_model(kv: KVector) -> Model:
    return Model.from_kvector(kv)


def floor_gap_check(model: Model) -> bool:
    """Whether [k*x] - sum_i [w_i*x] >= 1 holds on [1/k, 1).

    The difference is right continuous and jumps only at x = j/k, so it
    suffices to check j - sum_i floor(w_i*j/k) >= 1 for j = 1..k-1.
    """
    k, w = model.k, model.w
    for j in range(1, k):
        if j - sum((wi * j) // k for wi in w) < 1:
            return False
    return True


def floor_gaps(model: Model) -> list[int]:
    """The jump-point values j - sum_i floor(w_i*j/k) for j = 1..k-1."""
    k, w = model.k, model.w
    return [j - sum((wi * j) // k for wi in w) for j in range(1, k)]
