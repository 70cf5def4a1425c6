"""Pluggable semifield arithmetic for coefficient dynamics.

Three semifields are supported at runtime, selected by value-level dispatch
so one schedule driver serves all evaluations:

* tropical  -- Laurent monomials in the initial coefficients, with
               ``a (+) b`` taking the componentwise minimum of exponents;
* numeric   -- strictly positive floats with ordinary arithmetic;
* trivial   -- the one-element semifield (coefficient-free runs).
"""

from __future__ import annotations

import enum
from typing import Dict, Iterable, Mapping, Tuple


class Sign(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    UNIT = "unit"
    MIXED = "mixed"


class TropicalMonomial:
    """A Laurent monomial in the initial coefficients.

    Exponents are kept in a canonical sorted tuple; zero exponents are never
    stored, so structural equality is semantic equality.  Exponents are plain
    Python ints (arbitrary size).
    """

    __slots__ = ("_items",)

    def __init__(self, exponents: Mapping = ()):  # mapping var -> exponent
        items = exponents.items() if isinstance(exponents, Mapping) else exponents
        self._items = tuple(sorted((v, e) for v, e in items if e != 0))

    @property
    def exponents(self) -> Dict:
        return dict(self._items)

    def is_one(self) -> bool:
        return not self._items

    def mul(self, other: "TropicalMonomial") -> "TropicalMonomial":
        exps = dict(self._items)
        for v, e in other._items:
            exps[v] = exps.get(v, 0) + e
        return TropicalMonomial(exps)

    def inv(self) -> "TropicalMonomial":
        return TropicalMonomial({v: -e for v, e in self._items})

    def pow(self, k: int) -> "TropicalMonomial":
        if k == 0:
            return TropicalMonomial()
        return TropicalMonomial({v: k * e for v, e in self._items})

    def oplus(self, other: "TropicalMonomial") -> "TropicalMonomial":
        """Tropical addition: componentwise minimum, absent exponents count as 0."""
        exps = {}
        mine = dict(self._items)
        theirs = dict(other._items)
        for v in set(mine) | set(theirs):
            exps[v] = min(mine.get(v, 0), theirs.get(v, 0))
        return TropicalMonomial(exps)

    def sign(self) -> Sign:
        if not self._items:
            return Sign.UNIT
        if all(e > 0 for _, e in self._items):
            return Sign.POSITIVE
        if all(e < 0 for _, e in self._items):
            return Sign.NEGATIVE
        return Sign.MIXED

    def __eq__(self, other) -> bool:
        return isinstance(other, TropicalMonomial) and self._items == other._items

    def __hash__(self) -> int:
        return hash(self._items)

    def __repr__(self) -> str:
        if not self._items:
            return "TropicalMonomial(1)"
        body = " ".join(f"y{v}^{e}" for v, e in self._items)
        return f"TropicalMonomial({body})"

    def to_json(self) -> Dict[str, int]:
        return {f"({v[0]},{v[1]})": e for v, e in self._items}


def trop_mul(a: TropicalMonomial, b: TropicalMonomial) -> TropicalMonomial:
    return a.mul(b)


def trop_add(a: TropicalMonomial, b: TropicalMonomial) -> TropicalMonomial:
    return a.oplus(b)


def classify_sign(m: TropicalMonomial) -> Sign:
    return m.sign()


class NonPositiveValue(ValueError):
    """A numeric coefficient left the positive reals; the semifield has no zero."""


class Semifield:
    """Dispatch base; instances implement the operations used by seed mutation."""

    name = "abstract"

    def one(self):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def pow(self, a, k: int):
        raise NotImplementedError

    def one_plus(self, a):
        """1 (+) a in the semifield."""
        raise NotImplementedError

    def generator(self, var):
        """Initial coefficient attached to a vertex, where the notion exists."""
        raise NotImplementedError

    def __repr__(self):
        return f"<semifield {self.name}>"


class _Tropical(Semifield):
    name = "tropical"

    def one(self):
        return TropicalMonomial()

    def mul(self, a, b):
        return a.mul(b)

    def inv(self, a):
        return a.inv()

    def pow(self, a, k):
        return a.pow(k)

    def one_plus(self, a):
        return TropicalMonomial().oplus(a)

    def generator(self, var):
        return TropicalMonomial({var: 1})


class _Numeric(Semifield):
    name = "numeric"

    def one(self):
        return 1.0

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return 1.0 / a

    def pow(self, a, k):
        return a ** k

    def one_plus(self, a):
        return 1.0 + a

    def check(self, a: float) -> float:
        if not (a > 0.0):
            raise NonPositiveValue(f"numeric coefficient {a!r} is not strictly positive")
        return a


class _Trivial(Semifield):
    name = "trivial"

    def one(self):
        return 1

    def mul(self, a, b):
        return 1

    def inv(self, a):
        return 1

    def pow(self, a, k):
        return 1

    def one_plus(self, a):
        return 1

    def generator(self, var):
        return 1


TROPICAL = _Tropical()
NUMERIC = _Numeric()
TRIVIAL = _Trivial()

SEMIFIELDS = {"tropical": TROPICAL, "numeric": NUMERIC, "trivial": TRIVIAL}


def product(semifield: Semifield, values: Iterable):
    acc = semifield.one()
    for v in values:
        acc = semifield.mul(acc, v)
    return acc
