"""Block sets and t-designs.

Constructions (Golay heptads, PG(3,2) lines, all pairs), certification of
design strength and intersection numbers, derived/residual designs, the
block-graph strongly regular parameters, and Calderbank's conditions.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

__all__ = [
    "DesignError",
    "NotADesign",
    "NotQuasiSymmetric",
    "PointOutOfRange",
    "NotApplicable",
    "BlockSet",
    "DesignCertificate",
    "SRGReport",
    "golay_heptads",
    "pair_blockset",
    "pg32_sts15",
    "qs_6_3_2",
    "intersection_numbers",
    "t_counts",
    "certify_design",
    "derived_design",
    "residual_design",
    "complement_blockset",
    "block_graph_srg",
    "calderbank_f",
    "calderbank_modA",
    "read_blockset",
    "write_blockset",
    "format_blockset",
    "parse_blockset",
]


class DesignError(ValueError):
    pass


class NotADesign(DesignError):
    def __init__(self, t: int, witness: tuple[int, ...] | None = None):
        self.t = t
        self.witness = witness
        super().__init__(f"not a {t}-design (witness {witness})")


class NotQuasiSymmetric(DesignError):
    pass


class PointOutOfRange(DesignError):
    pass


class NotApplicable(DesignError):
    pass


@dataclass(frozen=True)
class BlockSet:
    """A simple family of k-subsets of {0..d-1}, stored sorted."""

    d: int
    k: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        blocks = tuple(sorted(tuple(sorted(b)) for b in self.blocks))
        for b in blocks:
            if len(b) != self.k:
                raise DesignError(f"block {b} does not have size {self.k}")
            if len(set(b)) != len(b):
                raise DesignError(f"block {b} repeats a point")
            if b and (b[0] < 0 or b[-1] >= self.d):
                raise PointOutOfRange(f"block {b} leaves 0..{self.d - 1}")
        for x, y in zip(blocks, blocks[1:]):
            if x == y:
                raise DesignError(f"repeated block {x}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_blocks(cls, d: int, blocks: Iterable[Iterable[int]]) -> BlockSet:
        blocks = [tuple(b) for b in blocks]
        k = len(blocks[0]) if blocks else 0
        return cls(d, k, tuple(blocks))

    @property
    def b(self) -> int:
        return len(self.blocks)

    def masks(self) -> list[int]:
        return [sum(1 << p for p in blk) for blk in self.blocks]

    def __len__(self) -> int:
        return len(self.blocks)


@dataclass(frozen=True)
class DesignCertificate:
    t: int
    lam: int
    b: int
    r: int
    lambdas: tuple[int, ...]
    intersection_numbers: tuple[int, ...]

    @property
    def quasi_symmetric(self) -> bool:
        return len(self.intersection_numbers) == 2

    @property
    def s1(self) -> int:
        return self.intersection_numbers[0]

    @property
    def s2(self) -> int:
        return self.intersection_numbers[-1]


# ---------------------------------------------------------------------------
# constructions


def _gf2m_tables(m: int, poly: int) -> tuple[list[int], list[int]]:
    size = 1 << m
    exp = [0] * (2 * size)
    log = [0] * size
    x = 1
    for i in range(size - 1):
        exp[i] = x
        log[x] = i
        x <<= 1
        if x & size:
            x ^= poly
    for i in range(size - 1, 2 * size):
        exp[i] = exp[i - (size - 1)]
    return exp, log


def _golay_generator() -> list[int]:
    """Coefficients (low degree first) of the QR generator of the [23,12] code.

    Computed as prod (x - beta^r) over quadratic residues r mod 23, with beta a
    primitive 23rd root of unity in GF(2^11) = GF(2)[x]/(x^11 + x^2 + 1).
    """
    exp, log = _gf2m_tables(11, (1 << 11) | 0b101)
    order = (1 << 11) - 1
    beta_log = order // 23
    residues = sorted({(r * r) % 23 for r in range(1, 23)})

    def mul(a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return exp[(log[a] + log[b]) % order]

    g = [1]
    for r in residues:
        root = exp[(beta_log * r) % order]
        new = [0] * (len(g) + 1)
        for i, c in enumerate(g):
            new[i + 1] ^= c
            new[i] ^= mul(c, root)
        g = new
    if any(c not in (0, 1) for c in g):
        raise AssertionError("generator polynomial is not binary")
    return g


def golay_codewords() -> list[int]:
    """All 4096 words of the cyclic binary Golay [23,12,7] code, as bitmasks."""
    g = _golay_generator()
    gmask = sum(1 << i for i, c in enumerate(g) if c)
    rows = [gmask << i for i in range(12)]
    words = [0]
    for row in rows:
        words += [w ^ row for w in words]
    return words


def golay_heptads() -> BlockSet:
    """The S(4,7,23) Steiner system: supports of the weight-7 Golay words."""
    blocks = [
        tuple(i for i in range(23) if (w >> i) & 1)
        for w in golay_codewords()
        if w.bit_count() == 7
    ]
    return BlockSet(23, 7, tuple(blocks))


def pair_blockset(d: int) -> BlockSet:
    if d < 2:
        raise DesignError("need d >= 2")
    return BlockSet(d, 2, tuple(combinations(range(d), 2)))


def pg32_sts15() -> BlockSet:
    """Lines {u, v, u^v} of PG(3,2); point u in 1..15 becomes index u-1."""
    lines = {
        tuple(sorted((u - 1, v - 1, (u ^ v) - 1)))
        for u in range(1, 16)
        for v in range(u + 1, 16)
    }
    return BlockSet(15, 3, tuple(lines))


def qs_6_3_2() -> BlockSet:
    """The 2-(6,3,2) design with intersection numbers {2,1}.

    Exactly one triple from each complementary pair of 3-subsets of 6 points
    is kept; the lexicographically first valid choice is returned.
    """
    triples = list(combinations(range(6), 3))
    pairs = [t for t in triples if 0 in t]
    comp = {t: tuple(sorted(set(range(6)) - set(t))) for t in pairs}
    for choice in product((0, 1), repeat=len(pairs)):
        blocks = [t if c == 0 else comp[t] for t, c in zip(pairs, choice)]
        bs = BlockSet(6, 3, tuple(blocks))
        if t_counts(bs, 2) == {2} and set(intersection_numbers(bs)) == {1, 2}:
            return bs
    raise AssertionError("no 2-(6,3,2) design found")


def complement_blockset(bs: BlockSet) -> BlockSet:
    full = set(range(bs.d))
    return BlockSet(bs.d, bs.d - bs.k, tuple(tuple(sorted(full - set(b))) for b in bs.blocks))


# ---------------------------------------------------------------------------
# certification


def intersection_numbers(bs: BlockSet) -> tuple[int, ...]:
    """Distinct sizes of pairwise block intersections, largest first."""
    masks = bs.masks()
    seen: set[int] = set()
    for i, a in enumerate(masks):
        for b in masks[i + 1:]:
            seen.add((a & b).bit_count())
    return tuple(sorted(seen, reverse=True))


def t_counts(bs: BlockSet, t: int) -> set[int]:
    """Set of block counts over all t-subsets of points."""
    if t == 0:
        return {bs.b}
    counter: Counter[tuple[int, ...]] = Counter()
    for blk in bs.blocks:
        counter.update(combinations(blk, t))
    total = comb(bs.d, t)
    values = set(counter.values())
    if len(counter) < total:
        values.add(0)
    return values


def _lambda_t(bs: BlockSet, t: int) -> tuple[int, tuple[int, ...] | None]:
    """Common count of blocks through each t-set, or -1 with a witness."""
    if t == 0:
        return bs.b, None
    if t > bs.k:
        return 0, None
    counter: Counter[tuple[int, ...]] = Counter()
    for blk in bs.blocks:
        counter.update(combinations(blk, t))
    if len(counter) < comb(bs.d, t):
        for s in combinations(range(bs.d), t):
            if s not in counter:
                if counter:
                    return -1, s
                return 0, None
    vals = set(counter.values())
    if len(vals) == 1:
        return vals.pop(), None
    first = next(iter(counter.values()))
    for s in sorted(counter):
        if counter[s] != first:
            return -1, s
    return -1, None


def certify_design(bs: BlockSet, t: int) -> DesignCertificate:
    """Verify ``bs`` is a t-design and report the maximal strength <= k.

    Blocks of size below t are handled by the convention that such a family is
    trivially a t-design with lambda_t = 0.
    """
    lambdas: list[int] = []
    strength = -1
    for j in range(0, max(t, bs.k) + 1):
        lam, witness = _lambda_t(bs, j)
        if lam < 0:
            if j <= t:
                raise NotADesign(t, witness)
            break
        lambdas.append(lam)
        strength = j
    b = lambdas[0]
    r = lambdas[1] if len(lambdas) > 1 else 0
    return DesignCertificate(
        t=strength,
        lam=lambdas[strength],
        b=b,
        r=r,
        lambdas=tuple(lambdas),
        intersection_numbers=intersection_numbers(bs),
    )


def derived_design(bs: BlockSet, p: int) -> BlockSet:
    """Blocks through ``p`` with ``p`` removed, points relabelled to 0..d-2."""
    if not 0 <= p < bs.d:
        raise PointOutOfRange(p)
    relabel = lambda q: q if q < p else q - 1  # noqa: E731
    blocks = [tuple(relabel(q) for q in blk if q != p) for blk in bs.blocks if p in blk]
    return BlockSet(bs.d - 1, bs.k - 1, tuple(blocks))


def residual_design(bs: BlockSet, p: int) -> BlockSet:
    """Blocks avoiding ``p``, points relabelled to 0..d-2."""
    if not 0 <= p < bs.d:
        raise PointOutOfRange(p)
    relabel = lambda q: q if q < p else q - 1  # noqa: E731
    blocks = [tuple(relabel(q) for q in blk) for blk in bs.blocks if p not in blk]
    return BlockSet(bs.d - 1, bs.k, tuple(blocks))


@dataclass(frozen=True)
class SRGReport:
    v: int
    degree: int
    p: int
    q: int
    eigenvalues: tuple[Fraction, Fraction, Fraction]
    matches_graph: bool
    connected: bool


def block_graph_srg(bs: BlockSet) -> SRGReport:
    """SRG parameters of the block graph (adjacent iff meeting in s1 points).

    Parameters from the eigenvalue formulas are compared to the common
    neighbour counts of the graph actually built from the blocks.
    """
    cert = certify_design(bs, 2)
    if not cert.quasi_symmetric:
        raise NotQuasiSymmetric(f"intersection numbers {cert.intersection_numbers}")
    s1, s2 = cert.s1, cert.s2
    k, b, r, lam = bs.k, cert.b, cert.r, cert.lambdas[2]
    den = s1 - s2
    th0 = Fraction(k * (r - 1) - (b - 1) * s2, den)
    th1 = Fraction((r - lam) - (k - s2), den)
    th2 = Fraction(-(k - s2), den)
    p = th0 + th1 + th2 + th1 * th2
    q = th0 + th1 * th2

    masks = bs.masks()
    adj = [0] * b
    for i in range(b):
        for j in range(i + 1, b):
            if (masks[i] & masks[j]).bit_count() == s1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    degrees = {a.bit_count() for a in adj}
    ok = degrees == {th0}
    for i in range(b):
        for j in range(i + 1, b):
            common = (adj[i] & adj[j]).bit_count()
            expect = p if (adj[i] >> j) & 1 else q
            if common != expect:
                ok = False
                break
        if not ok:
            break
    # connectivity by BFS
    seen, frontier = 1, 1
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= adj[low.bit_length() - 1]
            f ^= low
        frontier = nxt & ~seen
        seen |= nxt
    connected = seen == (1 << b) - 1
    if not all(x.denominator == 1 for x in (th0, p, q)):
        ok = False
    return SRGReport(
        v=b,
        degree=int(th0) if th0.denominator == 1 else -1,
        p=int(p) if p.denominator == 1 else -1,
        q=int(q) if q.denominator == 1 else -1,
        eigenvalues=(th0, th1, th2),
        matches_graph=ok,
        connected=connected,
    )


def calderbank_f(n: int, k: int, x: int | Fraction, y: int | Fraction) -> int | Fraction:
    return (n - 1) * (n - 2) * x * y - k * (n - k) * (n - 2) * (x + y) + k * (n - k) * (k * (n - k) - 1)


def calderbank_modA(v: int, k: int, lam: int, r: int, intersections: Sequence[int]) -> bool:
    """Calderbank's Theorem A (p = 2) necessary condition.

    Raises NotApplicable when the intersection numbers differ in parity.
    """
    parities = {s % 2 for s in intersections}
    if len(parities) != 1:
        raise NotApplicable("intersection numbers are not all congruent mod 2")
    s = parities.pop()
    if (r - lam) % 4 == 0:
        return True
    v_ok = v % 8 in (1, 7)
    if s == 0 and k % 4 == 0 and v_ok:
        return True
    if s == 1 and (k - v) % 4 == 0 and v_ok:
        return True
    return False


# ---------------------------------------------------------------------------
# text format


def format_blockset(bs: BlockSet) -> str:
    lines = [f"{bs.d} {bs.k}"]
    lines += [" ".join(map(str, blk)) for blk in bs.blocks]
    return "\n".join(lines) + "\n"


def parse_blockset(text: str) -> BlockSet:
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not rows or len(rows[0]) != 2:
        raise DesignError("header must be 'd k'")
    d, k = int(rows[0][0]), int(rows[0][1])
    return BlockSet(d, k, tuple(tuple(int(x) for x in r) for r in rows[1:]))


def write_blockset(bs: BlockSet, path: str | Path) -> None:
    Path(path).write_text(format_blockset(bs))


def read_blockset(path: str | Path) -> BlockSet:
    return parse_blockset(Path(path).read_text())
