"""Sparse exact multivariate Laurent polynomials over the integers.

Cluster variables and F-polynomials live here.  A polynomial carries a fixed
variable tuple shared by every value in a run; terms map integer exponent
vectors to nonzero arbitrary-size integer coefficients, so equality is
structural equality of canonical forms.

Exact division is multivariate long division against a single divisor in
graded-lexicographic order.  On valid scheduled runs the Laurent phenomenon
guarantees exactness; a nonzero remainder therefore signals a bug upstream
and raises :class:`NonExactDivision`.
"""

from __future__ import annotations

from typing import Dict, Iterable, Sequence, Tuple

Exponents = Tuple[int, ...]


class DivisionByZero(ZeroDivisionError):
    pass


class NonExactDivision(ArithmeticError):
    """Division left a remainder; the Laurent phenomenon forbids this on valid runs."""


class LaurentPoly:
    __slots__ = ("vars", "terms")

    def __init__(self, vars: Tuple[str, ...], terms: Dict[Exponents, int]):
        self.vars = vars
        self.terms = {e: c for e, c in terms.items() if c != 0}

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, vars: Tuple[str, ...]) -> "LaurentPoly":
        return cls(vars, {})

    @classmethod
    def const(cls, vars: Tuple[str, ...], c: int) -> "LaurentPoly":
        return cls(vars, {(0,) * len(vars): c} if c else {})

    @classmethod
    def one(cls, vars: Tuple[str, ...]) -> "LaurentPoly":
        return cls.const(vars, 1)

    @classmethod
    def monomial(cls, vars: Tuple[str, ...], exps: Exponents, c: int = 1) -> "LaurentPoly":
        return cls(vars, {tuple(exps): c} if c else {})

    @classmethod
    def variable(cls, vars: Tuple[str, ...], name: str) -> "LaurentPoly":
        exps = [0] * len(vars)
        exps[vars.index(name)] = 1
        return cls(vars, {tuple(exps): 1})

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {(0,) * len(self.vars): 1}

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LaurentPoly)
            and self.vars == other.vars
            and self.terms == other.terms
        )

    __hash__ = None

    def __repr__(self) -> str:
        if not self.terms:
            return "LaurentPoly(0)"
        bits = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(
                f"{v}^{k}" for v, k in zip(self.vars, e) if k != 0
            )
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return "LaurentPoly(" + " + ".join(bits) + ")"

    # -- ring operations ----------------------------------------------------

    def add(self, other: "LaurentPoly") -> "LaurentPoly":
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return LaurentPoly(self.vars, terms)

    def neg(self) -> "LaurentPoly":
        return LaurentPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def sub(self, other: "LaurentPoly") -> "LaurentPoly":
        return self.add(other.neg())

    def mul(self, other: "LaurentPoly") -> "LaurentPoly":
        terms: Dict[Exponents, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return LaurentPoly(self.vars, terms)

    def mul_monomial(self, exps: Exponents, c: int = 1) -> "LaurentPoly":
        return LaurentPoly(
            self.vars,
            {tuple(a + b for a, b in zip(e, exps)): cc * c for e, cc in self.terms.items()},
        )

    def pow(self, k: int) -> "LaurentPoly":
        if k < 0:
            raise ValueError("negative powers of polynomials are not defined here")
        acc = LaurentPoly.one(self.vars)
        for _ in range(k):
            acc = acc.mul(self)
        return acc

    # -- specialization ------------------------------------------------------

    def specialize_ones(self, subset: Iterable[str]) -> "LaurentPoly":
        """Substitute 1 for every variable in ``subset`` (F-polynomial extraction)."""
        idx = [i for i, v in enumerate(self.vars) if v in set(subset)]
        terms: Dict[Exponents, int] = {}
        for e, c in self.terms.items():
            e2 = list(e)
            for i in idx:
                e2[i] = 0
            key = tuple(e2)
            terms[key] = terms.get(key, 0) + c
        return LaurentPoly(self.vars, terms)

    # -- exact division ------------------------------------------------------

    def exact_div(self, den: "LaurentPoly") -> "LaurentPoly":
        """Quotient q with q*den == self, re-verified before returning."""
        if den.is_zero():
            raise DivisionByZero("division by the zero polynomial")
        if self.is_zero():
            return LaurentPoly.zero(self.vars)

        nvars = len(self.vars)
        # Shift both operands into ordinary polynomials; the quotient picks up
        # the compensating monomial at the end.
        num_shift = tuple(min(e[i] for e in self.terms) for i in range(nvars))
        den_shift = tuple(min(e[i] for e in den.terms) for i in range(nvars))
        rem = {
            tuple(a - b for a, b in zip(e, num_shift)): c for e, c in self.terms.items()
        }
        dterms = {
            tuple(a - b for a, b in zip(e, den_shift)): c for e, c in den.terms.items()
        }

        def grlex(e: Exponents):
            return (sum(e), e)

        dlead = max(dterms, key=grlex)
        dcoef = dterms[dlead]
        quot: Dict[Exponents, int] = {}
        # Exact division cancels the leading term at every step; any failure to
        # do so already certifies a nonzero remainder.
        while rem:
            rlead = max(rem, key=grlex)
            rcoef = rem[rlead]
            if any(a < b for a, b in zip(rlead, dlead)) or rcoef % dcoef != 0:
                raise NonExactDivision("remainder is nonzero")
            qe = tuple(a - b for a, b in zip(rlead, dlead))
            qc = rcoef // dcoef
            quot[qe] = quot.get(qe, 0) + qc
            for e, c in dterms.items():
                key = tuple(a + b for a, b in zip(qe, e))
                nc = rem.get(key, 0) - qc * c
                if nc:
                    rem[key] = nc
                else:
                    rem.pop(key, None)

        back = tuple(a - b for a, b in zip(num_shift, den_shift))
        q = LaurentPoly(self.vars, quot).mul_monomial(back)
        if q.mul(den) != self:
            raise NonExactDivision("post-division verification failed")
        return q

    # -- serialization -------------------------------------------------------

    def to_json(self):
        records = []
        for e, c in sorted(self.terms.items()):
            exps = {v: k for v, k in zip(self.vars, e) if k != 0}
            records.append({"exponents": exps, "coefficient": c})
        return records


def lp_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a.mul(b)


def lp_exact_div(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    return num.exact_div(den)


def lp_specialize_ones(p: LaurentPoly, subset: Sequence[str]) -> LaurentPoly:
    return p.specialize_ones(subset)
