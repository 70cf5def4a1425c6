"""Seed mutation over a pluggable semifield, the SG/RSG schedules, and the
relabelling of engine output into (layer, time) coordinates.

A seed is (exchange matrix, cluster tuple, coefficient tuple); the cluster is
optional so long tropical/numeric runs stay cheap.  The driver verifies
rather than trusts its schedule: every composite step asserts that the
vertices mutated together are pairwise non-adjacent in the current quiver, so
a mis-encoded builder fails immediately instead of silently reordering.

Relabelling: a forward mutation point (vertex, u) carries the coefficient
label (ip, u) and the cluster label (ip, u - d), where ip is the vertex's
layer index and d is n-1 on the horizontal open layers and 1 elsewhere.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .laurent import LaurentPoly
from .quiver import (
    DomainError,
    LabeledQuiver,
    VertexId,
    build_rsg_quiver,
    build_sg_quiver,
)
from .semifield import NUMERIC, Semifield, SEMIFIELDS, TRIVIAL, TROPICAL, TropicalMonomial


class AdjacencyViolation(RuntimeError):
    """A composite step tried to mutate two adjacent vertices at once."""


class ParityError(ValueError):
    """A (layer, time) pair violates its parity precondition."""


class MissingSymbolicRun(ValueError):
    """The requested data needs a run that recorded a symbolic cluster."""


def xvar(v: VertexId) -> str:
    return f"x({v.i},{v.ip})"


def yvar(v: VertexId) -> str:
    return f"y({v.i},{v.ip})"


@dataclass(frozen=True)
class Seed:
    quiver: LabeledQuiver
    semifield: Semifield
    y: Tuple            # coefficient tuple, aligned with quiver.vertices
    x: Optional[Tuple]  # cluster tuple of LaurentPoly, or None

    def coeff_poly(self, c) -> LaurentPoly:
        """Embed a semifield coefficient into the cluster's Laurent ring."""
        vars = self.x[0].vars
        if self.semifield is TRIVIAL:
            return LaurentPoly.one(vars)
        if self.semifield is TROPICAL:
            exps = [0] * len(vars)
            for v, e in c.exponents.items():
                exps[vars.index(yvar(v))] = e
            return LaurentPoly.monomial(vars, tuple(exps))
        raise MissingSymbolicRun("symbolic clusters run over trivial or tropical coefficients")


def mutate_seed(seed: Seed, k: VertexId) -> Seed:
    """One seed mutation: coefficient and cluster exchange plus matrix mutation."""
    q = seed.quiver
    ki = q.index(k)
    sf = seed.semifield
    b = q.b

    yk = seed.y[ki]
    one_plus_yk = sf.one_plus(yk)
    hat = sf.mul(yk, sf.inv(one_plus_yk))  # y_k / (1 (+) y_k)
    new_y = list(seed.y)
    new_y[ki] = sf.inv(yk)
    for i in range(len(seed.y)):
        if i == ki:
            continue
        bki = b[ki][i]
        if bki > 0:
            new_y[i] = sf.mul(seed.y[i], sf.pow(hat, bki))
        elif bki < 0:
            new_y[i] = sf.mul(seed.y[i], sf.pow(one_plus_yk, -bki))
    if sf is NUMERIC:
        for v in new_y:
            NUMERIC.check(v)

    new_x = seed.x
    if seed.x is not None:
        vars = seed.x[0].vars
        plus = seed.coeff_poly(yk)
        minus = LaurentPoly.one(vars)
        for j in range(len(seed.x)):
            bjk = b[j][ki]
            if bjk > 0:
                plus = plus.mul(seed.x[j].pow(bjk))
            elif bjk < 0:
                minus = minus.mul(seed.x[j].pow(-bjk))
        den = seed.x[ki].mul(seed.coeff_poly(one_plus_yk))
        new_x = list(seed.x)
        new_x[ki] = plus.add(minus).exact_div(den)
        new_x = tuple(new_x)

    return Seed(q.mutate(k), sf, tuple(new_y), new_x)


# -- schedules ----------------------------------------------------------------


@dataclass(frozen=True)
class MutationSchedule:
    family: str
    m: int
    n: int
    steps: Tuple[FrozenSet[VertexId], ...]

    @property
    def period_u(self) -> int:
        return 2 * self.n - 2

    def step(self, u: int) -> FrozenSet[VertexId]:
        return self.steps[u % self.period_u]


def make_schedule(family: str, m: int, n: int) -> MutationSchedule:
    """The 2n-2 composite steps driving one quiver period.

    Even steps mutate the "+" shared vertices, column j+1's "+" tail (step
    u = 2j) and, for odd n, the "-" tail of the column half a turn ahead;
    odd steps mutate the "-" shared vertices and, for even n, the matching
    "-" tail.  Every column's "-" tail thus runs n-1 steps after its "+" one.
    """
    if family not in ("sg", "rsg"):
        raise DomainError(f"unknown family {family!r}")
    if m < 1 or n < 4:
        raise DomainError(f"need m >= 1 and n >= 4, got ({m}, {n})")
    q = build_sg_quiver(m, n) if family == "sg" else build_rsg_quiver(m, n)
    bullets_plus = [
        v for v, s, p in zip(q.vertices, q.shape, q.parity) if s == "b" and p == "+"
    ]
    bullets_minus = [
        v for v, s, p in zip(q.vertices, q.shape, q.parity) if s == "b" and p == "-"
    ]
    tail_plus = [ip for ip in range(1, m + 1) if (m - ip) % 2 == 0]
    tail_minus = [ip for ip in range(1, m + 1) if (m - ip) % 2 == 1]

    steps = []
    for u in range(2 * n - 2):
        if u % 2 == 0:
            j = u // 2
            cell = set(bullets_plus)
            cell.update(VertexId(j + 1, ip) for ip in tail_plus)
            if n % 2 == 1:
                cm = ((j + (n - 1) // 2) % (n - 1)) + 1
                cell.update(VertexId(cm, ip) for ip in tail_minus)
        else:
            cell = set(bullets_minus)
            if n % 2 == 0:
                cm = (((u - (n - 1)) // 2) % (n - 1)) + 1
                cell.update(VertexId(cm, ip) for ip in tail_minus)
        steps.append(frozenset(cell))
    return MutationSchedule(family, m, n, tuple(steps))


# -- permutations -------------------------------------------------------------


@dataclass(frozen=True)
class PermutationMaps:
    """sigma (column cycle), tau (tropical periodicity map), omega (fork swap)."""

    family: str
    m: int
    n: int

    def sigma(self, c: int) -> int:
        return c % (self.n - 1) + 1

    def sigma_tilde(self, v: VertexId) -> VertexId:
        if v.i == self.n:
            return v
        return VertexId(self.sigma(v.i), v.ip)

    def tau(self, v: VertexId) -> VertexId:
        if v.i != self.n:
            return VertexId(self.sigma(v.i), v.ip)
        if self.family == "sg" and self.swaps_tips():
            m, n = self.m, self.n
            if v.ip == m + n - 1:
                return VertexId(n, m + n)
            if v.ip == m + n:
                return VertexId(n, m + n - 1)
        return v

    def tau_inverse(self, v: VertexId) -> VertexId:
        if v.i != self.n:
            return VertexId((v.i - 2) % (self.n - 1) + 1, v.ip)
        return self.tau(v)  # the shared part of tau is an involution

    def swaps_tips(self) -> bool:
        big_n = self.m * self.n - self.m + self.n
        return self.family == "sg" and big_n % 2 == 1

    def omega(self, i: int) -> int:
        if self.family == "sg":
            m, n = self.m, self.n
            if i == m + n - 1:
                return m + n
            if i == m + n:
                return m + n - 1
        return i

    def to_json(self) -> Dict:
        layers = self.m + self.n if self.family == "sg" else self.m + self.n - 3
        return {
            "sigma": {c: self.sigma(c) for c in range(1, self.n)},
            "tau_swaps_tips": self.swaps_tips(),
            "omega": {i: self.omega(i) for i in range(1, layers + 1)},
        }


# -- labelling ---------------------------------------------------------------


def layer_count(family: str, m: int, n: int) -> int:
    return m + n if family == "sg" else m + n - 3


def duration(m: int, n: int, i: int) -> int:
    return n - 1 if i <= m else 1


def label_g(family: str, m: int, n: int, i: int, u: int) -> VertexId:
    """Vertex carrying the coefficient label (i, u); ParityError when invalid.

    For the cluster label (i, v) call with u = v + duration(m, n, i).
    """
    layers = layer_count(family, m, n)
    if not 1 <= i <= layers:
        raise ParityError(f"layer {i} out of range 1..{layers}")
    if i <= m:
        if (m - i) % 2 == 0:
            if u % 2 != 0:
                raise ParityError(f"layer {i} carries data at even u only, got {u}")
            c = (u // 2) % (n - 1) + 1
        else:
            if (u - (n - 1)) % 2 != 0:
                raise ParityError(f"layer {i} parity fails at u={u}")
            c = ((u - (n - 1)) // 2) % (n - 1) + 1
        return VertexId(c, i)
    pos = i - m
    npos = n - 2 if family == "sg" else n - 3
    if pos <= npos:
        if u % 2 != pos % 2:
            raise ParityError(f"shared layer {i} parity fails at u={u}")
    else:
        if u % 2 != (n - 1) % 2:
            raise ParityError(f"fork layer {i} parity fails at u={u}")
    return VertexId(n, i)


# -- trajectories -------------------------------------------------------------


class Trajectory:
    """Per-u record of seeds along a schedule, with relabelled views."""

    def __init__(self, family, m, n, schedule, semifield, quivers, ys, xs):
        self.family = family
        self.m = m
        self.n = n
        self.schedule = schedule
        self.semifield = semifield
        self.quivers: List[LabeledQuiver] = quivers
        self.ys: List[Tuple] = ys
        self.xs: Optional[List[Tuple]] = xs
        self.maps = PermutationMaps(family, m, n)
        self._y_labels: Optional[Dict] = None
        self._x_labels: Optional[Dict] = None

    @property
    def u_max(self) -> int:
        return len(self.ys) - 1

    def mutation_points(self):
        """Forward mutation points (vertex, u) for 0 <= u < u_max."""
        for u in range(self.u_max):
            for v in sorted(self.schedule.step(u)):
                yield v, u

    def y_at(self, v: VertexId, u: int):
        return self.ys[u][self.quivers[0].index(v)]

    def y_labels(self) -> Dict[Tuple[int, int], object]:
        if self._y_labels is None:
            self._y_labels = {
                (v.ip, u): self.y_at(v, u) for v, u in self.mutation_points()
            }
        return self._y_labels

    def x_labels(self) -> Dict[Tuple[int, int], LaurentPoly]:
        if self.xs is None:
            raise MissingSymbolicRun("this trajectory did not record a cluster")
        if self._x_labels is None:
            idx = self.quivers[0].index
            self._x_labels = {
                (v.ip, u - duration(self.m, self.n, v.ip)): self.xs[u][idx(v)]
                for v, u in self.mutation_points()
            }
        return self._x_labels

    def f_polynomial(self, i: int, u: int) -> LaurentPoly:
        """F-polynomial of the cluster label (i, u) in a principal run."""
        if self.xs is None or self.semifield is not TROPICAL:
            raise MissingSymbolicRun("f-polynomials need a principal-coefficient symbolic run")
        try:
            poly = self.x_labels()[(i, u)]
        except KeyError:
            raise ParityError(f"({i},{u}) is not a cluster label of this run") from None
        xnames = [xvar(v) for v in self.quivers[0].vertices]
        return poly.specialize_ones(xnames)


def run(seed: Seed, schedule: MutationSchedule, u_max: int) -> Trajectory:
    """Apply the schedule through u = 0..u_max, recording snapshots at each u."""
    if u_max < 0:
        raise DomainError("u_max must be >= 0")
    quivers = [seed.quiver]
    ys = [seed.y]
    xs = [seed.x] if seed.x is not None else None
    current = seed
    for u in range(u_max):
        cell = sorted(schedule.step(u))
        for a in range(len(cell)):
            for b in range(a + 1, len(cell)):
                if current.quiver.adjacent(cell[a], cell[b]):
                    raise AdjacencyViolation(
                        f"step u={u} mutates adjacent vertices {cell[a]} and {cell[b]}"
                    )
        for v in cell:
            current = mutate_seed(current, v)
        quivers.append(current.quiver)
        ys.append(current.y)
        if xs is not None:
            xs.append(current.x)
    return Trajectory(
        schedule.family, schedule.m, schedule.n, schedule, seed.semifield, quivers, ys, xs
    )


# -- run construction ---------------------------------------------------------


def build_quiver(family: str, m: int, n: int) -> LabeledQuiver:
    return build_sg_quiver(m, n) if family == "sg" else build_rsg_quiver(m, n)


def initial_seed(
    family: str,
    m: int,
    n: int,
    mode: str,
    rng: Optional[random.Random] = None,
    y0: Optional[Sequence[float]] = None,
) -> Seed:
    """Seed for one of the run modes.

    tropical   -- coefficients are the tropical generators, no cluster;
    numeric    -- positive floats (given, or uniform in [0.5, 2.0] from rng);
    symbolic   -- trivial coefficients with a symbolic cluster (T-system);
    principal  -- tropical coefficients with a symbolic cluster (F-polynomials);
    bmatrix    -- trivial coefficients, no cluster (matrix dynamics only).
    """
    q = build_quiver(family, m, n)
    if mode == "tropical":
        y = tuple(TROPICAL.generator(v) for v in q.vertices)
        return Seed(q, TROPICAL, y, None)
    if mode == "numeric":
        if y0 is not None:
            values = tuple(float(t) for t in y0)
            if len(values) != len(q.vertices):
                raise DomainError("initial coefficient tuple has the wrong length")
        else:
            rng = rng or random.Random(0)
            values = tuple(rng.uniform(0.5, 2.0) for _ in q.vertices)
        for t in values:
            NUMERIC.check(t)
        return Seed(q, NUMERIC, values, None)
    if mode == "bmatrix":
        return Seed(q, TRIVIAL, tuple(1 for _ in q.vertices), None)
    if mode in ("symbolic", "principal"):
        if mode == "symbolic":
            vars = tuple(xvar(v) for v in q.vertices)
            y = tuple(1 for _ in q.vertices)
            sf = TRIVIAL
        else:
            vars = tuple(xvar(v) for v in q.vertices) + tuple(yvar(v) for v in q.vertices)
            y = tuple(TROPICAL.generator(v) for v in q.vertices)
            sf = TROPICAL
        x = tuple(LaurentPoly.variable(vars, xvar(v)) for v in q.vertices)
        return Seed(q, sf, y, x)
    raise DomainError(f"unknown run mode {mode!r}")


def scheduled_run(
    family: str,
    m: int,
    n: int,
    mode: str,
    u_max: int,
    rng: Optional[random.Random] = None,
    y0: Optional[Sequence[float]] = None,
) -> Trajectory:
    seed = initial_seed(family, m, n, mode, rng=rng, y0=y0)
    return run(seed, make_schedule(family, m, n), u_max)
