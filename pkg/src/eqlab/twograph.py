"""Two-graphs: construction, regularity, complements, switching and designs.

A two-graph is stored through one representative graph of its switching
class (bitmask adjacency).  A triple is coherent iff it spans an odd number
of edges, which makes membership O(1) and keeps memory linear in n^2 bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import TYPE_CHECKING, Iterable, Sequence

if TYPE_CHECKING:
    from .linesys.system import LineSystem

__all__ = [
    "SimpleGraph",
    "TwoGraph",
    "RegularityParams",
    "NotRegular",
    "TwoGraphError",
    "from_graph",
    "from_lines",
    "from_gram_signs",
    "regularity",
    "complement",
    "switch",
    "coherent4_designs",
    "s_set",
    "s_design_check",
    "check_axiom",
]


class TwoGraphError(ValueError):
    pass


@dataclass(frozen=True)
class SimpleGraph:
    n: int
    adj: tuple[int, ...]  # bitmask neighbourhoods

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> SimpleGraph:
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise TwoGraphError("loops are not allowed")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in range(u + 1, self.n) if self.has_edge(u, v)]


@dataclass(frozen=True)
class TwoGraph:
    """Two-graph on ``n`` points given by a representative switching graph."""

    n: int
    rep: SimpleGraph

    def is_coherent(self, a: int, b: int, c: int) -> bool:
        adj = self.rep.adj
        return bool(((adj[a] >> b) ^ (adj[a] >> c) ^ (adj[b] >> c)) & 1)

    def s_mask(self, a: int, b: int) -> int:
        """Bitmask of S_ab = points completing {a, b} to a coherent triple."""
        adj = self.rep.adj
        diff = adj[a] ^ adj[b]
        if (adj[a] >> b) & 1:
            diff = ~diff & ((1 << self.n) - 1)
        return diff & ~((1 << a) | (1 << b))

    def coherent_triples(self) -> Iterable[tuple[int, int, int]]:
        for a, b in combinations(range(self.n), 2):
            m = self.s_mask(a, b) >> (b + 1)
            c = b + 1
            while m:
                if m & 1:
                    yield (a, b, c)
                m >>= 1
                c += 1

    def triple_count(self) -> int:
        return sum(1 for _ in self.coherent_triples())

    def same_as(self, other: TwoGraph) -> bool:
        if self.n != other.n:
            return False
        return all(
            self.s_mask(a, b) == other.s_mask(a, b) for a, b in combinations(range(self.n), 2)
        )

    def induced(self, points: Sequence[int]) -> TwoGraph:
        idx = list(points)
        g = self.rep
        edges = [
            (i, j)
            for i, j in combinations(range(len(idx)), 2)
            if g.has_edge(idx[i], idx[j])
        ]
        return TwoGraph(len(idx), SimpleGraph.from_edges(len(idx), edges))


@dataclass(frozen=True)
class RegularityParams:
    n: int
    a: int
    b: int

    @property
    def a_star(self) -> int:
        return self.n - self.a - 2

    @property
    def b_star(self) -> Fraction:
        return Fraction(self.n, 2) - self.b - 3

    def taylor_relation(self) -> bool:
        return self.n == 3 * self.a - 2 * self.b


@dataclass(frozen=True)
class NotRegular:
    """Returned (not raised) when a or b is not constant."""

    kind: str  # "pair" or "triple"
    witness: tuple[int, ...]
    value: int
    expected: int


def from_graph(g: SimpleGraph) -> TwoGraph:
    return TwoGraph(g.n, g)


def from_gram_signs(signs: Sequence[Sequence[int]]) -> TwoGraph:
    """Two-graph whose coherent triples have a negative sign product.

    ``signs[i][j]`` is the sign of the (i, j) inner product.  Negative
    entries become edges, so the edge parity of a triple is odd exactly when
    the product of its three signs is negative.
    """
    n = len(signs)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if signs[i][j] < 0]
    return TwoGraph(n, SimpleGraph.from_edges(n, edges))


def from_lines(lines: LineSystem) -> TwoGraph:
    lines.certify()
    return from_gram_signs(lines.sign_matrix())


def switch(g: SimpleGraph, x: Iterable[int]) -> SimpleGraph:
    """Complement all edges between ``x`` and its complement."""
    xm = 0
    for v in x:
        if not 0 <= v < g.n:
            raise TwoGraphError(f"vertex {v} out of range")
        xm |= 1 << v
    full = (1 << g.n) - 1
    adj = []
    for v in range(g.n):
        side = xm if (xm >> v) & 1 else full & ~xm
        other = full & ~side
        adj.append(g.adj[v] ^ other)
    return SimpleGraph(g.n, tuple(adj))


def complement(t: TwoGraph) -> TwoGraph:
    full = (1 << t.n) - 1
    adj = tuple(full & ~t.rep.adj[v] & ~(1 << v) for v in range(t.n))
    return TwoGraph(t.n, SimpleGraph(t.n, adj))


def regularity(t: TwoGraph) -> RegularityParams | NotRegular:
    n = t.n
    if n < 3:
        return NotRegular("pair", (), 0, 0)
    a = None
    masks = {}
    for i, j in combinations(range(n), 2):
        m = t.s_mask(i, j)
        masks[i, j] = m
        c = m.bit_count()
        if a is None:
            a = c
        elif c != a:
            return NotRegular("pair", (i, j), c, a)
    assert a is not None
    b = None
    for i, j in combinations(range(n), 2):
        mij = masks[i, j]
        rest = mij >> (j + 1)
        k = j + 1
        while rest:
            if rest & 1:
                c = (mij & masks[i, k]).bit_count()
                if b is None:
                    b = c
                elif c != b:
                    return NotRegular("triple", (i, j, k), c, b)
            rest >>= 1
            k += 1
    return RegularityParams(n, a, b if b is not None else 0)


def check_axiom(t: TwoGraph, quads: Iterable[tuple[int, int, int, int]] | None = None) -> bool:
    """Every 4-set contains an even number of coherent triples.

    Without ``quads`` all 4-sets are checked, bit-parallel in the last point.
    """
    if quads is None:
        n = t.n
        full = (1 << n) - 1
        for a, b in combinations(range(n), 2):
            sab = t.s_mask(a, b)
            for c in range(b + 1, n):
                tail = full & ~((1 << (c + 1)) - 1)
                # parity of abc + abd + acd + bcd for every d > c
                odd = sab ^ t.s_mask(a, c) ^ t.s_mask(b, c)
                if (sab >> c) & 1:
                    odd = ~odd
                if odd & tail:
                    return False
        return True
    for q in quads:
        count = sum(t.is_coherent(*tri) for tri in combinations(q, 3))
        if count % 2:
            return False
    return True


def coherent4_designs(t: TwoGraph) -> tuple[int, int, int]:
    """Counts of coherent / mixed / incoherent 4-sets through each pair.

    Raises TwoGraphError if a count is not constant (so some C_i is not a
    2-design) or if ``t`` is not regular.
    """
    reg = regularity(t)
    if isinstance(reg, NotRegular):
        raise TwoGraphError(f"not regular: {reg}")
    n = t.n
    full = (1 << n) - 1
    result = None
    for a, b in combinations(range(n), 2):
        s = t.s_mask(a, b)
        c0 = c1 = c2 = 0
        # 4-set {a,b,c,d} with c < d: its coherent triples are abc plus
        # abd, acd, bcd, read off as bits of S_ab, S_ac, S_bc at d
        for c in range(n):
            if c in (a, b):
                continue
            tail = full & ~((1 << (c + 1)) - 1) & ~((1 << a) | (1 << b))
            cab = (s >> c) & 1
            x = s & tail
            y = t.s_mask(a, c) & tail
            z = t.s_mask(b, c) & tail
            all3 = x & y & z
            n3 = all3.bit_count()
            n1 = ((x ^ y ^ z) & ~all3).bit_count()
            n2 = ((x & y | x & z | y & z) & ~all3).bit_count()
            n0 = (tail & ~(x | y | z)).bit_count()
            if cab:
                if n0 or n2:
                    raise TwoGraphError("two-graph axiom violated")
                c1 += n1
                c0 += n3
            else:
                if n1 or n3:
                    raise TwoGraphError("two-graph axiom violated")
                c2 += n0
                c1 += n2
        triple = (c0, c1, c2)
        if result is None:
            result = triple
        elif triple != result:
            raise TwoGraphError(f"4-set counts not constant at pair {(a, b)}")
    assert result is not None
    return result


def s_set(t: TwoGraph, a: int, b: int) -> frozenset[int]:
    if a == b:
        raise TwoGraphError("S_ab needs distinct points")
    m = t.s_mask(a, b)
    return frozenset(i for i in range(t.n) if (m >> i) & 1)


def s_design_check(t: TwoGraph) -> bool:
    """The sets S_ab form a 2-(n, a, a(a-1)/2) design with the stated
    intersections: |S_ab & S_ac| = b if {a,b,c} coherent, a/2 otherwise."""
    reg = regularity(t)
    if isinstance(reg, NotRegular):
        return False
    n, a, b = reg.n, reg.a, reg.b
    masks = {}
    for i, j in combinations(range(n), 2):
        masks[i, j] = masks[j, i] = t.s_mask(i, j)
    # pair coverage
    cover: dict[tuple[int, int], int] = {}
    for (i, j), m in masks.items():
        if i > j:
            continue
        pts = [p for p in range(n) if (m >> p) & 1]
        for p, q in combinations(pts, 2):
            cover[p, q] = cover.get((p, q), 0) + 1
    lam = a * (a - 1) // 2
    if len(cover) != n * (n - 1) // 2 or set(cover.values()) != {lam}:
        return False
    if a % 2:
        return False
    for x in range(n):
        others = [y for y in range(n) if y != x]
        for y, z in combinations(others, 2):
            inter = (masks[x, y] & masks[x, z]).bit_count()
            want = b if t.is_coherent(x, y, z) else a // 2
            if inter != want:
                return False
    return True
