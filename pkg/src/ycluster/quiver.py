"""Quivers for the sine-Gordon (SG) and reduced sine-Gordon (RSG) families.

A quiver is a skew-symmetric integer matrix over a labelled vertex set.
Vertices carry a shape (``o`` for the per-column open vertices, ``b`` for the
shared filled vertices) and a ``+``/``-`` property driving the composite
mutation schedule.

Vertex conventions for family (m, n), columns c = 1..n-1:

* open vertices ``(c, ip)`` for ip = 1..m form the horizontal tail of column
  c; ``(c, m)`` is the one attached to the shared part;
* filled vertices ``(n, ip)`` for ip = m+1..m+n (SG) or ip = m+1..m+n-3 (RSG)
  are shared by all columns; path position k means ip = m+k.

The SG filled part is a D-shaped tree (path of n-2 plus two fork tips); the
RSG filled part is the bare path of n-3.  Open vertex (c, m) is attached to
the shared part in a column-dependent "phase", the state a travelling
attachment wave has reached 2(c-1) steps before its column is mutated; the
RSG wave, whose path is shorter, reflects early and passes through a
transient arrow between the two columns at the reflection point (the family's
extra arrow).  The scheduled quiver-period oracle and the tropical sign
census downstream validate this encoding exactly.
"""

from __future__ import annotations

import json
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple


class DomainError(ValueError):
    pass


class InvalidVertex(KeyError):
    pass


class VertexId(NamedTuple):
    i: int
    ip: int


class DynkinType(NamedTuple):
    family: str  # "A" or "D"
    rank: int

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"


def mutate_matrix(b: Tuple[Tuple[int, ...], ...], k: int) -> Tuple[Tuple[int, ...], ...]:
    """Exchange-matrix mutation at index k; result stays skew-symmetric."""
    size = len(b)
    if not 0 <= k < size:
        raise InvalidVertex(k)
    out = []
    for i in range(size):
        row = []
        for j in range(size):
            if i == k or j == k:
                row.append(-b[i][j])
            else:
                bik, bkj = b[i][k], b[k][j]
                row.append(b[i][j] + (abs(bik) * bkj + bik * abs(bkj)) // 2)
        out.append(tuple(row))
    return tuple(out)


class LabeledQuiver:
    """Immutable quiver; mutation returns a new value sharing the labels."""

    __slots__ = ("vertices", "shape", "parity", "b", "_index")

    def __init__(self, vertices, shape, parity, b):
        self.vertices: Tuple[VertexId, ...] = tuple(vertices)
        self.shape: Tuple[str, ...] = tuple(shape)
        self.parity: Tuple[str, ...] = tuple(parity)
        self.b: Tuple[Tuple[int, ...], ...] = tuple(tuple(r) for r in b)
        self._index = {v: i for i, v in enumerate(self.vertices)}
        for i in range(len(self.b)):
            for j in range(len(self.b)):
                if self.b[i][j] != -self.b[j][i]:
                    raise ValueError("exchange matrix is not skew-symmetric")

    def index(self, v: VertexId) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise InvalidVertex(v) from None

    def b_entry(self, v: VertexId, w: VertexId) -> int:
        return self.b[self.index(v)][self.index(w)]

    def mutate(self, k: VertexId) -> "LabeledQuiver":
        return LabeledQuiver(self.vertices, self.shape, self.parity, mutate_matrix(self.b, self.index(k)))

    def adjacent(self, v: VertexId, w: VertexId) -> bool:
        return self.b_entry(v, w) != 0

    def neighbors(self, v: VertexId) -> List[VertexId]:
        i = self.index(v)
        return [w for j, w in enumerate(self.vertices) if self.b[i][j] != 0]

    def arrows(self) -> Iterator[Tuple[VertexId, VertexId, int]]:
        for i, v in enumerate(self.vertices):
            for j, w in enumerate(self.vertices):
                if self.b[i][j] > 0:
                    yield (v, w, self.b[i][j])

    def permuted_equals(self, other: "LabeledQuiver", perm: Dict[VertexId, VertexId]) -> bool:
        """True iff relabelling self by ``perm`` gives other's matrix exactly."""
        for v in self.vertices:
            for w in self.vertices:
                if self.b_entry(v, w) != other.b_entry(perm[v], perm[w]):
                    return False
        return True

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LabeledQuiver)
            and self.vertices == other.vertices
            and self.b == other.b
        )

    __hash__ = None

    # -- serialization -------------------------------------------------------

    def to_json(self) -> Dict:
        verts = [
            {"i": v.i, "ip": v.ip, "shape": s, "parity": p}
            for v, s, p in zip(self.vertices, self.shape, self.parity)
        ]
        arrows = [
            {"from": [v.i, v.ip], "to": [w.i, w.ip], "mult": mult}
            for v, w, mult in sorted(self.arrows())
        ]
        return {"vertices": verts, "arrows": arrows}

    @classmethod
    def from_json(cls, data: Dict) -> "LabeledQuiver":
        vertices = [VertexId(rec["i"], rec["ip"]) for rec in data["vertices"]]
        shape = [rec["shape"] for rec in data["vertices"]]
        parity = [rec["parity"] for rec in data["vertices"]]
        index = {v: i for i, v in enumerate(vertices)}
        size = len(vertices)
        b = [[0] * size for _ in range(size)]
        for arc in data["arrows"]:
            i = index[VertexId(*arc["from"])]
            j = index[VertexId(*arc["to"])]
            b[i][j] += arc["mult"]
            b[j][i] -= arc["mult"]
        return cls(vertices, shape, parity, b)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


# -- SG / RSG builders --------------------------------------------------------


def _check_domain(m: int, n: int) -> None:
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    if n < 4:
        raise DomainError(f"n must be >= 4, got {n}")


def _tail_parity(m: int, ip: int) -> str:
    # The tail alternates so that (c, m) always carries "+"; the leftmost
    # vertex (c, 1) is then "+" for odd m and "-" for even m.
    return "+" if (m - ip) % 2 == 0 else "-"


def _minus_is_tail_source(n: int, c: int) -> bool:
    # Columns up to the flip point have every "-" open vertex a tail source.
    half = n // 2 if n % 2 == 0 else (n - 1) // 2
    return c <= half


def sg_wave(n: int, p: int):
    """SG attachment state of (c, m) at wave phase p.

    Returns (in_positions, out_positions, in_tips, out_tips) over path
    positions 1..n-2; the tips flags cover both fork tips at once.
    """
    period = 2 * n - 2
    p %= period
    if p == 0:
        return ([1], [], False, False)
    if p == 1:
        return ([], [1], False, False)
    if 2 <= p <= n - 2:
        return ([p - 1], [p], False, False)
    if p == n - 1:
        return ([n - 2], [], False, True)
    if p == n:
        return ([], [n - 2], True, False)
    return ([2 * n - 1 - p], [2 * n - 2 - p], False, False)


def rsg_wave(n: int, p: int):
    """RSG attachment state at phase p over path positions 1..n-3.

    Returns (in_positions, out_positions, circ_out, circ_in); ``circ_out``
    marks the source end of the transient open-open arrow (target two phases
    ahead), ``circ_in`` its target end.
    """
    period = 2 * n - 2
    p %= period
    if p == 0:
        return ([1], [], False, False)
    if p == 1:
        return ([], [1], False, False)
    if 2 <= p <= n - 3:
        return ([p - 1], [p], False, False)
    if p in (n - 2, n - 1):
        return ([n - 3], [], True, False)
    if p in (n, n + 1):
        return ([], [n - 3], False, True)
    return ([2 * n - 1 - p], [2 * n - 2 - p], False, False)


def _build_family(family: str, m: int, n: int) -> LabeledQuiver:
    _check_domain(m, n)
    npos = n - 2 if family == "sg" else n - 3  # shared path length
    has_tips = family == "sg"

    vertices: List[VertexId] = []
    shape: List[str] = []
    parity: List[str] = []
    for c in range(1, n):
        for ip in range(1, m + 1):
            vertices.append(VertexId(c, ip))
            shape.append("o")
            parity.append(_tail_parity(m, ip))
    for k in range(1, npos + 1):
        vertices.append(VertexId(n, m + k))
        shape.append("b")
        parity.append("+" if k % 2 == 0 else "-")
    if has_tips:
        tip_parity = "+" if n % 2 == 1 else "-"
        for ip in (m + n - 1, m + n):
            vertices.append(VertexId(n, ip))
            shape.append("b")
            parity.append(tip_parity)

    index = {v: i for i, v in enumerate(vertices)}
    size = len(vertices)
    b = [[0] * size for _ in range(size)]

    def arrow(src: VertexId, dst: VertexId) -> None:
        b[index[src]][index[dst]] += 1
        b[index[dst]][index[src]] -= 1

    def pos(k: int) -> VertexId:
        return VertexId(n, m + k)

    tips = [VertexId(n, m + n - 1), VertexId(n, m + n)] if has_tips else []

    # shared-part arrows: every edge runs from its "+" endpoint to its "-" one
    for k in range(1, npos):
        if k % 2 == 0:
            arrow(pos(k), pos(k + 1))
        else:
            arrow(pos(k + 1), pos(k))
    if has_tips:
        for t in tips:
            if n % 2 == 0:
                arrow(pos(n - 2), t)
            else:
                arrow(t, pos(n - 2))

    # per-column tail arrows and the wave attachment of (c, m)
    wave = sg_wave if family == "sg" else rsg_wave
    phase = {c: (2 * n - 2 - 2 * (c - 1)) % (2 * n - 2) for c in range(1, n)}
    for c in range(1, n):
        minus_source = _minus_is_tail_source(n, c)
        for ip in range(1, m):
            lo, hi = VertexId(c, ip), VertexId(c, ip + 1)
            if _tail_parity(m, ip) == "-":
                arrow(lo, hi) if minus_source else arrow(hi, lo)
            else:
                arrow(hi, lo) if minus_source else arrow(lo, hi)
        attach = VertexId(c, m)
        if family == "sg":
            ins, outs, in_tips, out_tips = sg_wave(n, phase[c])
            for k in ins:
                arrow(pos(k), attach)
            for k in outs:
                arrow(attach, pos(k))
            if in_tips:
                for t in tips:
                    arrow(t, attach)
            if out_tips:
                for t in tips:
                    arrow(attach, t)
        else:
            ins, outs, circ_out, circ_in = rsg_wave(n, phase[c])
            for k in ins:
                arrow(pos(k), attach)
            for k in outs:
                arrow(attach, pos(k))
            if circ_out:
                # transient open-open arrow toward the column two phases ahead
                target = next(c2 for c2 in phase if phase[c2] == phase[c] + 2)
                arrow(attach, VertexId(target, m))

    return LabeledQuiver(vertices, shape, parity, b)


def build_sg_quiver(m: int, n: int) -> LabeledQuiver:
    """The SG quiver for (m, n): m(n-1) open vertices plus n shared ones."""
    return _build_family("sg", m, n)


def build_rsg_quiver(m: int, n: int) -> LabeledQuiver:
    """The RSG quiver for (m, n): the SG quiver cut after shared position n-3,
    plus the family's extra open-open arrow."""
    return _build_family("rsg", m, n)


# -- canonical forms ----------------------------------------------------------


def canonical_form(q: LabeledQuiver) -> bytes:
    """Canonical byte string of the underlying directed multigraph.

    Invariant under vertex relabelling: iterative degree refinement plus
    backtracking over the remaining color cells, taking the lexicographically
    least matrix encoding over all discrete refinements.  Shape/parity labels
    are ignored; mutation equivalence is a statement about the matrix alone.
    """
    size = len(q.vertices)
    b = q.b
    if size == 0:
        return b"()"

    def refine(colors: Tuple[int, ...]) -> Tuple[int, ...]:
        while True:
            sigs = []
            for i in range(size):
                row = sorted(
                    (colors[j], b[i][j]) for j in range(size) if b[i][j] != 0
                )
                sigs.append((colors[i], tuple(row)))
            ranking = {s: r for r, s in enumerate(sorted(set(sigs)))}
            new = tuple(ranking[s] for s in sigs)
            if new == colors:
                return colors
            colors = new

    best: List[Optional[bytes]] = [None]

    def encode(order: Tuple[int, ...]) -> bytes:
        rows = tuple(tuple(b[i][j] for j in order) for i in order)
        return repr(rows).encode()

    def search(colors: Tuple[int, ...]) -> None:
        cells: Dict[int, List[int]] = {}
        for i, col in enumerate(colors):
            cells.setdefault(col, []).append(i)
        nonsingleton = [cell for cell in cells.values() if len(cell) > 1]
        if not nonsingleton:
            order = tuple(sorted(range(size), key=lambda i: colors[i]))
            cand = encode(order)
            if best[0] is None or cand < best[0]:
                best[0] = cand
            return
        cell = min(nonsingleton, key=len)
        for v in cell:
            boosted = tuple(c + size if i == v else c for i, c in enumerate(colors))
            search(refine(boosted))

    search(refine((0,) * size))
    assert best[0] is not None
    return best[0]


def dynkin_type(q: LabeledQuiver) -> Optional[DynkinType]:
    """A or D type when the underlying simple graph is exactly that diagram."""
    size = len(q.vertices)
    if size == 0:
        return None
    edges = []
    for i in range(size):
        for j in range(i + 1, size):
            if q.b[i][j] != 0:
                if abs(q.b[i][j]) != 1:
                    return None
                edges.append((i, j))
    if len(edges) != size - 1:
        return None
    adj: Dict[int, List[int]] = {i: [] for i in range(size)}
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    seen = {0}
    stack = [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != size:
        return None
    degrees = sorted(len(adj[i]) for i in range(size))
    if degrees[-1] <= 2:
        return DynkinType("A", size)
    if degrees[-1] == 3 and degrees.count(3) == 1 and size >= 4:
        branch = next(i for i in range(size) if len(adj[i]) == 3)
        leaves_at_branch = sum(1 for w in adj[branch] if len(adj[w]) == 1)
        if leaves_at_branch >= 2:
            return DynkinType("D", size)
    return None
