"""Theorem-level checks: Y/T-relation residuals, periodicity, the tropical
sign census, and Rogers-dilogarithm identity sums.

The relation templates for both families are hand-coded for general (m, n)
and reduce to the m = 1 systems; as a double-entry guard the same relations
are re-derived structurally from each trajectory (diffing which neighbors of
a vertex were mutated, with which arrow sign, between its two consecutive
mutations) and the two sources are compared factor by factor.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .quiver import DomainError, VertexId
from .seed_engine import (
    PermutationMaps,
    Trajectory,
    duration,
    layer_count,
    scheduled_run,
)
from .semifield import NUMERIC, Sign, TROPICAL, TropicalMonomial, classify_sign


class InsufficientLength(ValueError):
    """The trajectory is too short for the requested check."""


@dataclass
class VerificationReport:
    check: str
    family: Optional[str]
    m: Optional[int]
    n: Optional[int]
    passed: bool
    residual: Optional[float] = None
    counts: Dict[str, int] = field(default_factory=dict)
    witnesses: List = field(default_factory=list)
    details: Dict = field(default_factory=dict)
    elapsed_ms: float = 0.0

    def to_json(self) -> Dict:
        return {
            "check": self.check,
            "family": self.family,
            "m": self.m,
            "n": self.n,
            "pass": self.passed,
            "residual": self.residual,
            "counts": self.counts,
            "witnesses": self.witnesses[:20],
            "details": self.details,
            "elapsed_ms": self.elapsed_ms,
        }


class _Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = (time.perf_counter() - self.t0) * 1000.0


# -- relation templates ---------------------------------------------------------


class YSystemFamily:
    """Relation templates for the family (SG or RSG) at parameters (m, n).

    ``y_relation(i, u)`` returns (lhs, num, den) where lhs is the label pair
    [(i, u-d_i), (i, u+d_i)] and num/den list the (j, v) labels entering as
    (1+Y_j(v)) upstairs resp. (1+Y_j(v)^{-1}) downstairs.  ``t_relation``
    returns (lhs, prod1, prod2) with the right side prod1 + prod2 (empty
    product = 1).  The second relation degenerates at n = 4, where the last
    shared layer coincides with the first.
    """

    def __init__(self, family: str, m: int, n: int):
        if family not in ("sg", "rsg"):
            raise DomainError(f"unknown family {family!r}")
        if m < 1 or n < 4:
            raise DomainError(f"need m >= 1 and n >= 4, got ({m}, {n})")
        self.family = family
        self.m = m
        self.n = n
        self.layers = layer_count(family, m, n)

    def d(self, i: int) -> int:
        return duration(self.m, self.n, i)

    def y_relation(self, i: int, u: int):
        m, n, L = self.m, self.n, self.layers
        lhs = [(i, u - self.d(i)), (i, u + self.d(i))]
        if i <= m - 1:
            num = ([(i - 1, u)] if i >= 2 else []) + [(i + 1, u)]
            return lhs, num, []
        if i == m:
            num = [(m - 1, u)] if m >= 2 else []
            hi = m + n - 2 if self.family == "sg" else L
            for j in range(m + 1, hi + 1):
                num.append((j, u - m - n + 1 + j))
                num.append((j, u + m + n - 1 - j))
            if self.family == "sg":
                num += [(m + n - 1, u), (m + n, u)]
                return lhs, num, []
            return lhs, num, [(L, u)]
        if i == m + 1:
            if self.family == "rsg" and n == 4:
                return lhs, [(m, u)], []
            return lhs, [(m, u)], [(m + 2, u)]
        if self.family == "sg":
            if i <= m + n - 3:
                return lhs, [], [(i - 1, u), (i + 1, u)]
            if i == m + n - 2:
                return lhs, [], [(i - 1, u), (m + n - 1, u), (m + n, u)]
            return lhs, [], [(m + n - 2, u)]  # fork tips
        den = [(i - 1, u)] + ([(i + 1, u)] if i + 1 <= L else [])
        return lhs, [], den

    def t_relation(self, i: int, u: int):
        m, n, L = self.m, self.n, self.layers
        lhs = [(i, u - self.d(i)), (i, u + self.d(i))]
        if i <= m:
            prod1 = ([(i - 1, u)] if i >= 2 else []) + [(i + 1, u)]
            return lhs, prod1, []
        if i == m + 1 and self.family == "rsg" and n == 4:
            return lhs, [(m, u - 2), (m, u + 2)], [(m, u)]
        split = [(m, u - m - n + 1 + i), (m, u + m + n - 1 - i)]
        if i == m + 1:
            return lhs, split, [(m + 2, u)]
        if self.family == "sg":
            if i <= m + n - 3:
                return lhs, split, [(i - 1, u), (i + 1, u)]
            if i == m + n - 2:
                return lhs, split, [(i - 1, u), (m + n - 1, u), (m + n, u)]
            return lhs, [(m, u)], [(m + n - 2, u)]  # fork tips
        if i <= L - 1:
            return lhs, split, [(i - 1, u), (i + 1, u)]
        return lhs, split, [(m, u), (L - 1, u)]  # i == L, split is (m, u-2)(m, u+2)


def _instance_centers(fam: YSystemFamily, labels: Dict) -> List[Tuple[int, int]]:
    """Centers (i, u) whose lhs label pair is available in ``labels``."""
    per_layer: Dict[int, List[int]] = {}
    for (i, u) in labels:
        per_layer.setdefault(i, []).append(u)
    centers = []
    for i in range(1, fam.layers + 1):
        d = fam.d(i)
        have = set(per_layer.get(i, ()))
        for t0 in sorted(have):
            if t0 + 2 * d in have:
                centers.append((i, t0 + d))
    return centers


def check_y_relations(traj: Trajectory, tol: float = 1e-9) -> VerificationReport:
    """Evaluate every instantiated Y-relation on a numeric trajectory.

    Also re-derives the relation structure from the trajectory itself and
    compares it with the templates (double-entry check of builder and
    transcription).
    """
    if traj.semifield is not NUMERIC:
        raise DomainError("check_y_relations needs a numeric trajectory")
    with _Timer() as t:
        fam = YSystemFamily(traj.family, traj.m, traj.n)
        labels = traj.y_labels()
        worst = 0.0
        witness = None
        evaluated = 0
        per_layer = {i: 0 for i in range(1, fam.layers + 1)}
        for i, u in _instance_centers(fam, labels):
            lhs, num, den = fam.y_relation(i, u)
            if any(k not in labels for k in num) or any(k not in labels for k in den):
                continue
            left = labels[lhs[0]] * labels[lhs[1]]
            right = 1.0
            for k in num:
                right *= 1.0 + labels[k]
            for k in den:
                right /= 1.0 + 1.0 / labels[k]
            r = abs(left / right - 1.0)
            evaluated += 1
            per_layer[i] += 1
            if r > worst:
                worst, witness = r, {"i": i, "u": u, "lhs": left, "rhs": right}
        if evaluated == 0 or any(c == 0 for c in per_layer.values()):
            raise InsufficientLength("trajectory too short to instantiate every layer")
        structure = _relations_from_trajectory(traj, fam)
    report = VerificationReport(
        check="y-relations",
        family=traj.family,
        m=traj.m,
        n=traj.n,
        passed=worst < tol and structure["match"],
        residual=worst,
        counts={"instances": evaluated},
        witnesses=[witness] if witness and worst >= tol else [],
        details={"templates_match": structure["match"], "structure_instances": structure["count"]},
        elapsed_ms=t.ms if False else 0.0,
    )
    report.elapsed_ms = t.ms
    return report


def _relations_from_trajectory(traj: Trajectory, fam: YSystemFamily) -> Dict:
    """Instantiate Y-relations by diffing mutation events and compare with templates.

    For each vertex and each pair of consecutive mutations (t0, t1), every
    intermediate mutation of a neighbor k contributes (1+Y_k(s)) per incoming
    unit arrow k <- v, or (1+Y_k(s)^{-1})^{-1} per outgoing unit arrow k -> v,
    read off the exchange matrix at time s.  The multiset of contributions
    must equal the hand-coded template's.
    """
    sched = traj.schedule
    times: Dict[VertexId, List[int]] = {}
    for u in range(traj.u_max):
        for v in sched.step(u):
            times.setdefault(v, []).append(u)
    mismatches = []
    count = 0
    for v, ts in times.items():
        i = v.ip
        d = fam.d(i)
        for t0, t1 in zip(ts, ts[1:]):
            if t1 - t0 != 2 * d:
                mismatches.append({"vertex": list(v), "t0": t0, "t1": t1, "why": "duration"})
                continue
            num, den = [], []
            for s in range(t0, t1):
                q = traj.quivers[s]
                for k in sched.step(s):
                    if k == v:
                        continue
                    bkv = q.b_entry(k, v)
                    if bkv < 0:
                        num += [(k.ip, s)] * (-bkv)
                    elif bkv > 0:
                        den += [(k.ip, s)] * bkv
            _, tnum, tden = fam.y_relation(i, t0 + d)
            if sorted(num) != sorted(tnum) or sorted(den) != sorted(tden):
                mismatches.append(
                    {
                        "vertex": list(v),
                        "center": t0 + d,
                        "derived": {"num": sorted(num), "den": sorted(den)},
                        "template": {"num": sorted(tnum), "den": sorted(tden)},
                    }
                )
            count += 1
    return {"match": not mismatches, "count": count, "mismatches": mismatches[:5]}


def check_t_relations(traj: Trajectory) -> VerificationReport:
    """Every T-relation holds as an exact Laurent-polynomial identity."""
    if traj.xs is None:
        raise DomainError("check_t_relations needs a symbolic trajectory")
    with _Timer() as t:
        fam = YSystemFamily(traj.family, traj.m, traj.n)
        labels = traj.x_labels()
        evaluated = 0
        per_layer = {i: 0 for i in range(1, fam.layers + 1)}
        witnesses = []
        for i, u in _instance_centers(fam, labels):
            lhs, prod1, prod2 = fam.t_relation(i, u)
            if any(k not in labels for k in prod1) or any(k not in labels for k in prod2):
                continue
            left = labels[lhs[0]].mul(labels[lhs[1]])
            vars = left.vars
            from .laurent import LaurentPoly

            p1 = LaurentPoly.one(vars)
            for k in prod1:
                p1 = p1.mul(labels[k])
            p2 = LaurentPoly.one(vars)
            for k in prod2:
                p2 = p2.mul(labels[k])
            if left != p1.add(p2):
                witnesses.append({"i": i, "u": u})
            evaluated += 1
            per_layer[i] += 1
        if evaluated == 0 or any(c == 0 for c in per_layer.values()):
            raise InsufficientLength("trajectory too short to instantiate every layer")
    report = VerificationReport(
        check="t-relations",
        family=traj.family,
        m=traj.m,
        n=traj.n,
        passed=not witnesses,
        counts={"instances": evaluated},
        witnesses=witnesses,
    )
    report.elapsed_ms = t.ms
    return report


# -- periodicity ----------------------------------------------------------------


def _value_close(a, b, tol: float) -> Tuple[bool, float]:
    if isinstance(a, float):
        r = abs(a / b - 1.0)
        return r < tol, r
    return a == b, 0.0


def check_periodicity(traj: Trajectory, tol: float = 1e-9) -> VerificationReport:
    """Periodicity of the relabelled trajectory.

    SG with N = mn-m+n odd: half periodicity at u+2N onto the fork-swapped
    layers, full periodicity at u+4N when the run is long enough.  SG with N
    even: plain periodicity at u+2N and a witness that u+N is not already a
    period.  RSG: plain periodicity at u+2N.
    """
    with _Timer() as t:
        m, n = traj.m, traj.n
        big_n = m * n - m + n
        period = 2 * big_n
        maps = traj.maps
        half_map = maps.omega if maps.swaps_tips() else (lambda i: i)

        tables = [("y", traj.y_labels())]
        if traj.xs is not None:
            tables.append(("x", traj.x_labels()))

        compared = 0
        worst = 0.0
        witnesses = []
        full_compared = 0
        for kind, labels in tables:
            for (i, u), val in labels.items():
                other = labels.get((half_map(i), u + period))
                if other is not None:
                    ok, r = _value_close(other, val, tol)
                    compared += 1
                    worst = max(worst, r)
                    if not ok:
                        witnesses.append({"kind": kind, "i": i, "u": u, "shift": period})
                full = labels.get((i, u + 2 * period))
                if maps.swaps_tips() and full is not None:
                    ok, r = _value_close(full, val, tol)
                    full_compared += 1
                    worst = max(worst, r)
                    if not ok:
                        witnesses.append({"kind": kind, "i": i, "u": u, "shift": 2 * period})
        if compared == 0:
            raise InsufficientLength(f"need labels {period} apart; run longer")

        no_half = None
        if traj.family == "sg" and not maps.swaps_tips():
            diffs = 0
            for (i, u), val in traj.y_labels().items():
                other = traj.y_labels().get((i, u + big_n))
                if other is not None and not _value_close(other, val, tol)[0]:
                    diffs += 1
            no_half = diffs > 0
    report = VerificationReport(
        check="periodicity",
        family=traj.family,
        m=m,
        n=n,
        passed=not witnesses and (no_half is not False),
        residual=worst if traj.semifield is NUMERIC else None,
        counts={"compared": compared, "full_period_compared": full_compared},
        witnesses=witnesses,
        details={
            "period": period,
            "half_map": "omega" if maps.swaps_tips() else "identity",
            "no_half_periodicity": no_half,
        },
    )
    report.elapsed_ms = t.ms
    return report


def quiver_period_report(family: str, m: int, n: int) -> VerificationReport:
    """Lemma-level oracle: Q(2p) equals the p-fold column rotation of Q(0)."""
    with _Timer() as t:
        traj = scheduled_run(family, m, n, "bmatrix", 2 * n - 2)
        maps = PermutationMaps(family, m, n)
        q0 = traj.quivers[0]
        witnesses = []
        for p in range(1, n):
            perm = {}
            for v in q0.vertices:
                w = v
                for _ in range(p):
                    w = maps.sigma_tilde(w)
                perm[v] = w
            if not q0.permuted_equals(traj.quivers[2 * p], perm):
                witnesses.append({"p": p})
        closed = traj.quivers[2 * n - 2] == q0
        if not closed:
            witnesses.append({"p": n - 1, "why": "Q(2n-2) != Q(0)"})
    report = VerificationReport(
        check="quiver-period",
        family=family,
        m=m,
        n=n,
        passed=not witnesses,
        counts={"steps": 2 * n - 2},
        witnesses=witnesses,
        details={"coxeter_bookkeeping": coxeter_bookkeeping(family, m, n)},
    )
    report.elapsed_ms = t.ms
    return report


def coxeter_bookkeeping(family: str, m: int, n: int) -> bool:
    """Arithmetic consistency of the period with Coxeter numbers.

    SG: 2(mn-m+n) = h(D_n)+2 + m(h(D_{n-1})+2) with h(D_N) = 2N-2;
    RSG: 2(mn-m+n) = 2{h(A_{n-3})+2 + m(h(A_{n-4})+2)} with h(A_N) = N+1.
    """
    period = 2 * (m * n - m + n)
    if family == "sg":
        return period == (2 * n - 2 + 2) + m * (2 * (n - 1) - 2 + 2)
    return period == 2 * ((n - 3 + 1 + 2) + m * (n - 4 + 1 + 2))


# -- tropical census --------------------------------------------------------------


def negative_window(family: str, m: int, n: int, v: VertexId, u: int) -> bool:
    """Whether the tropical coefficient at mutation point (v, u) is negative,
    per the families' sign propositions, for 0 <= u < 2(mn-m+n)."""
    big_n = m * n - m + n
    if family == "sg":
        if v.i != n or v.ip == m + 1:
            return 2 * n - 2 <= u < 2 * big_n
        return any(u in (2 * k * (n - 1), 2 * k * (n - 1) + 1) for k in range(1, m + 2))
    if v.i != n:
        return 2 * n - 2 <= u < 2 * big_n
    if v.ip == m + 1:
        return u in (n - 2, n - 1) or 2 * n - 2 <= u < 2 * big_n
    if u in (n - 2, n - 1):
        return True
    return any(u in (k * (n - 1), k * (n - 1) + 1) for k in range(2, 2 * m + 3))


def negative_count_formula(family: str, m: int, n: int) -> int:
    if family == "sg":
        return (m + 1) * (m * n - m + n)
    return n * m * m - m * m + 3 * m * n - 8 * m + 2 * n - 6


def tropical_report(family: str, m: int, n: int) -> VerificationReport:
    """Sign census of a tropical run over one full period.

    Checks sign coherence (never mixed, never unit at a mutation point), the
    negative-window pattern, the column-rotation periodicity of the
    coefficient tuple at u = 2(mn-m+n), and the closed-form negative count.
    """
    with _Timer() as t:
        big_n = m * n - m + n
        traj = scheduled_run(family, m, n, "tropical", 2 * big_n)
        witnesses = []
        n_neg = 0
        points = 0
        for v, u in traj.mutation_points():
            points += 1
            sign = classify_sign(traj.y_at(v, u))
            if sign in (Sign.MIXED, Sign.UNIT):
                witnesses.append({"why": "incoherent-sign", "vertex": list(v), "u": u})
                continue
            expected = negative_window(family, m, n, v, u)
            if (sign is Sign.NEGATIVE) != expected:
                witnesses.append(
                    {"why": "window", "vertex": list(v), "u": u, "sign": sign.value}
                )
            if sign is Sign.NEGATIVE:
                n_neg += 1

        maps = traj.maps
        q0 = traj.quivers[0]
        for v in q0.vertices:
            want = TropicalMonomial({maps.tau_inverse(v): 1})
            if traj.ys[2 * big_n][q0.index(v)] != want:
                witnesses.append({"why": "tau-periodicity", "vertex": list(v)})

        formula = negative_count_formula(family, m, n)
        if n_neg != formula:
            witnesses.append({"why": "count", "n_neg": n_neg, "formula": formula})
    report = VerificationReport(
        check="tropical",
        family=family,
        m=m,
        n=n,
        passed=not witnesses,
        counts={"mutation_points": points, "n_negative": n_neg, "formula": formula},
        witnesses=witnesses,
    )
    report.elapsed_ms = t.ms
    return report


# -- Rogers dilogarithm ------------------------------------------------------------


_PI2_6 = math.pi * math.pi / 6.0


def _li2(x: float) -> float:
    # power series on [0, 1/2]; terms decay by at least 2^-k
    acc = 0.0
    term = 1.0
    for k in range(1, 80):
        term *= x
        acc += term / (k * k)
        if term < 1e-18:
            break
    return acc


def rogers_L(x: float) -> float:
    """Rogers dilogarithm on [0, 1], L(x) = Li2(x) + log(x)log(1-x)/2.

    Endpoints are exact: L(0) = 0, L(1) = pi^2/6.  Arguments above 1/2 are
    reflected through L(x) + L(1-x) = pi^2/6 so the series only runs on
    [0, 1/2].
    """
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"rogers_L domain is [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return _PI2_6
    if x > 0.5:
        return _PI2_6 - rogers_L(1.0 - x)
    return _li2(x) + 0.5 * math.log(x) * math.log(1.0 - x)


def dilog_sums(traj: Trajectory, tol: float = 1e-8) -> Tuple[float, float, VerificationReport]:
    """Dilogarithm identity sums of a numeric trajectory.

    The engine realizes one parity class of the system, whose sum over the
    mutation points of 0 <= u < 2(mn-m+n) carries the identity; the values
    reported here are scaled to the stated full windows (factor 4 for SG over
    0 <= u < 4(mn-m+n) covering both parity classes, factor 2 for RSG over
    0 <= u < 2(mn-m+n)).
    """
    if traj.semifield is not NUMERIC:
        raise DomainError("dilog_sums needs a numeric trajectory")
    with _Timer() as t:
        m, n = traj.m, traj.n
        big_n = m * n - m + n
        if traj.u_max < 2 * big_n:
            raise InsufficientLength(f"need u_max >= {2 * big_n}")
        s1p = 0.0
        s2p = 0.0
        points = 0
        for v, u in traj.mutation_points():
            if u >= 2 * big_n:
                break
            y = traj.y_at(v, u)
            s1p += rogers_L(y / (1.0 + y))
            s2p += rogers_L(1.0 / (1.0 + y))
            points += 1
        s1p *= 6.0 / math.pi ** 2
        s2p *= 6.0 / math.pi ** 2

        if traj.family == "sg":
            factor = 4
            expect1 = 4 * (m + 1) * big_n
            expect2 = 4 * (n - 1) * big_n
            window = 4 * big_n
            term_count = (m + n) * window
            expected_points = (m + n) * big_n
        else:
            factor = 2
            expect1 = 2 * (n * m * m - m * m + 3 * m * n - 8 * m + 2 * n - 6)
            expect2 = 2 * (n * n * m - 6 * n * m + 11 * m + n * n - 5 * n + 6)
            window = 2 * big_n
            term_count = (m + n - 3) * window
            expected_points = (m + n - 3) * big_n
        s1 = factor * s1p
        s2 = factor * s2p

        residual = max(
            abs(s1 / expect1 - 1.0),
            abs(s2 / expect2 - 1.0),
            abs((s1 + s2) / term_count - 1.0),
        )
        witnesses = []
        if points != expected_points:
            witnesses.append({"why": "point-count", "points": points, "expected": expected_points})
        if residual >= tol:
            witnesses.append({"why": "value", "s1": s1, "s2": s2})
        details = {
            "s1": s1,
            "s2": s2,
            "expected_s1": expect1,
            "expected_s2": expect2,
            "window": window,
            "term_count": term_count,
        }
        if traj.family == "sg" and big_n % 2 == 0:
            # even-period case: half-window sums reported, not asserted
            details["half_window_s1"] = 2 * s1p
            details["half_window_s2"] = 2 * s2p
    report = VerificationReport(
        check="dilog",
        family=traj.family,
        m=m,
        n=n,
        passed=not witnesses,
        residual=residual,
        counts={"summed_points": points},
        witnesses=witnesses,
        details=details,
    )
    report.elapsed_ms = t.ms
    return s1, s2, report


def evaluate_y_template(
    fam: YSystemFamily, values, centers: Sequence[Tuple[int, int]]
) -> float:
    """Max relative residual of the Y-relations over explicit (i, u) centers,
    with ``values(i, u)`` supplying the family values (for closed-form or
    constant solutions)."""
    worst = 0.0
    for i, u in centers:
        lhs, num, den = fam.y_relation(i, u)
        left = values(*lhs[0]) * values(*lhs[1])
        right = 1.0
        for j, v in num:
            right *= 1.0 + values(j, v)
        for j, v in den:
            right /= 1.0 + 1.0 / values(j, v)
        worst = max(worst, abs(left / right - 1.0))
    return worst
