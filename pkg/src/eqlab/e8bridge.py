"""From the 276 lines in R^23 to the E8 root system and back down to R^4.

Everything happens in coordinates over the incoherent basis {alpha_i} of 23
unit vectors with Gram matrix G = (4I + J)/5, so all coordinates are rational.
For speed the hot loops work with integer-scaled coordinates: a vector c is
stored as 12*c, and the integer form 4I + J stands in for 5*G.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .designkit import BlockSet, golay_heptads
from .exactarith import rank
from .linesys.bounds import bounds_report
from .linesys.incoherent import find_max_incoherent, gamma_partition, is_incoherent
from .linesys.system import LineSystem
from .twograph import NotRegular, from_lines, regularity

__all__ = [
    "E8Error",
    "SearchExhausted",
    "NotMoved",
    "CensusMismatch",
    "NotReflectionClosed",
    "RankMismatch",
    "NoIncoherentWitness",
    "BasisCoordSystem",
    "InvolutionAction",
    "E8Certificate",
    "DescentStage",
    "gram_form",
    "build_basis_coords",
    "find_involution",
    "heptad_census",
    "eigenspace_split",
    "project_to_w",
    "g_inner",
    "g_norm",
    "certify_e8",
    "descend_28",
    "descend_chain",
    "e8_report",
]

DIM = 23
SCALE = 12  # common denominator of every coordinate used below


class E8Error(ValueError):
    pass


class SearchExhausted(E8Error):
    pass


class NotMoved(E8Error):
    pass


class CensusMismatch(E8Error):
    pass


class NotReflectionClosed(E8Error):
    pass


class RankMismatch(E8Error):
    pass


class NoIncoherentWitness(E8Error):
    pass


def gram_form(dim: int = DIM) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(
        tuple(Fraction(1) if i == j else Fraction(1, 5) for j in range(dim)) for i in range(dim)
    )


def _ip(u: Sequence[int], v: Sequence[int]) -> int:
    """5 * SCALE^2 * (u, v)_G for integer-scaled coordinates."""
    return 4 * sum(a * b for a, b in zip(u, v)) + sum(u) * sum(v)


def _frac(v: Sequence[int]) -> tuple[Fraction, ...]:
    return tuple(Fraction(x, SCALE) for x in v)


@dataclass(frozen=True)
class BasisCoordSystem:
    """The 276 unit vectors: 23 basis vectors, then one per heptad."""

    heptads: BlockSet
    coords: tuple[tuple[int, ...], ...]  # SCALE * coordinates

    @property
    def n(self) -> int:
        return len(self.coords)

    def vector(self, i: int) -> tuple[Fraction, ...]:
        return _frac(self.coords[i])

    def line_system(self, indices: Sequence[int] | None = None) -> LineSystem:
        idx = range(self.n) if indices is None else indices
        return LineSystem(DIM, tuple(self.vector(i) for i in idx), gram_form(), {"source": "basis-276"})


def build_basis_coords(bs: BlockSet | None = None) -> BasisCoordSystem:
    """1/3 on the heptad, -1/6 off it, for each of the 253 heptads."""
    bs = golay_heptads() if bs is None else bs
    if bs.d != DIM:
        raise E8Error("need the 23-point Steiner system")
    coords = [tuple(SCALE if j == i else 0 for j in range(DIM)) for i in range(DIM)]
    for blk in bs.blocks:
        members = set(blk)
        coords.append(tuple(SCALE // 3 if j in members else -SCALE // 6 for j in range(DIM)))
    return BasisCoordSystem(bs, tuple(coords))


# ---------------------------------------------------------------------------
# involutions


@dataclass(frozen=True)
class InvolutionAction:
    perm: tuple[int, ...]
    fixed_heptad: tuple[int, ...]
    line_perm: tuple[int, ...]

    @property
    def cycle_type(self) -> dict[int, int]:
        fixed = sum(1 for i, p in enumerate(self.perm) if i == p)
        return {1: fixed, 2: (len(self.perm) - fixed) // 2}

    def transpositions(self) -> list[tuple[int, int]]:
        return [(i, p) for i, p in enumerate(self.perm) if i < p]


def _quad_index(bs: BlockSet) -> dict[int, int]:
    """Bitmask of each 4-subset -> index of the unique block containing it."""
    out = {}
    for b, blk in enumerate(bs.blocks):
        for q in combinations(blk, 4):
            out[sum(1 << p for p in q)] = b
    return out


def find_involution(bs: BlockSet | None = None, heptad: int = 0, index: int = 0) -> InvolutionAction:
    """The ``index``-th (lexicographic) automorphism of order 2 fixing block
    number ``heptad`` pointwise.

    Complement points are paired smallest-first by backtracking; a partial
    pairing is pruned as soon as some block has four or more determined
    points whose images do not lie in one block.
    """
    bs = golay_heptads() if bs is None else bs
    quads = _quad_index(bs)
    masks = bs.masks()
    fixed = bs.blocks[heptad]
    sigma: dict[int, int] = {p: p for p in fixed}
    rest = [p for p in range(bs.d) if p not in sigma]
    blocks_of = [[b for b, blk in enumerate(bs.blocks) if p in blk] for p in range(bs.d)]

    def consistent(points: Sequence[int]) -> bool:
        for p in points:
            for b in blocks_of[p]:
                det = [sigma[q] for q in bs.blocks[b] if q in sigma]
                if len(det) < 4:
                    continue
                target = masks[quads[sum(1 << q for q in det[:4])]]
                if any(not (target >> q) & 1 for q in det[4:]):
                    return False
        return True

    found: list[tuple[int, ...]] = []

    def extend() -> bool:
        free = [p for p in rest if p not in sigma]
        if not free:
            found.append(tuple(sigma[p] for p in range(bs.d)))
            return len(found) > index
        p = free[0]
        for q in free[1:]:
            sigma[p], sigma[q] = q, p
            if consistent((p, q)) and extend():
                return True
            del sigma[p], sigma[q]
        return False

    if not extend():
        raise SearchExhausted(f"only {len(found)} involutions fix block {heptad}")
    perm = found[index]
    block_pos = {m: b for b, m in enumerate(masks)}
    line_perm = list(perm)
    for m in masks:
        img = sum(1 << perm[p] for p in range(bs.d) if (m >> p) & 1)
        if img not in block_pos:
            raise E8Error("permutation does not preserve the blocks")
        line_perm.append(DIM + block_pos[img])
    return InvolutionAction(perm, fixed, tuple(line_perm))


def heptad_census(bs: BlockSet, x: InvolutionAction) -> dict:
    """Counts of heptad types 0..3 and the |B & B^x| values for types 2, 3."""
    supp = {i for i, p in enumerate(x.perm) if i != p}
    fix = frozenset(i for i, p in enumerate(x.perm) if i == p)
    counts = [0, 0, 0, 0]
    other = 0
    meets = set()
    for blk in bs.blocks:
        image = frozenset(x.perm[p] for p in blk)
        moved = len(supp.intersection(blk))
        if frozenset(blk) == fix:
            counts[0] += 1
        elif moved == 4:
            counts[1 if image == frozenset(blk) else 2] += 1
            if image != frozenset(blk):
                meets.add(len(image & set(blk)))
        elif moved == 6:
            counts[3] += 1
            meets.add(len(image & set(blk)))
        else:
            other += 1
    return {"types": tuple(counts), "other": other, "moved_meets": sorted(meets)}


def eigenspace_split(sys: BasisCoordSystem, x: InvolutionAction) -> tuple[list[int], list[int]]:
    """Lines fixed by x (as vectors, not just as lines) and the moved ones."""
    fixed, moved = [], []
    for i, c in enumerate(sys.coords):
        img = sys.coords[x.line_perm[i]]
        # x permutes coordinates; the image vector is the vector of the image line
        if tuple(c[x.perm.index(j)] for j in range(DIM)) != img:
            raise E8Error(f"line {i} is not mapped onto a line of the system")
        (fixed if x.line_perm[i] == i else moved).append(i)
    return fixed, moved


def _project(sys: BasisCoordSystem, x: InvolutionAction, i: int) -> tuple[int, ...]:
    """SCALE * (delta - delta^x)/2; exact because SCALE is even."""
    j = x.line_perm[i]
    if j == i:
        raise NotMoved(f"line {i} is fixed by the involution")
    return tuple((a - b) // 2 for a, b in zip(sys.coords[i], sys.coords[j]))


def project_to_w(sys: BasisCoordSystem, x: InvolutionAction, i: int) -> tuple[Fraction, ...]:
    return _frac(_project(sys, x, i))


def g_inner(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    """(u, v) under the G-form: 4/5 u.v + 1/5 sum(u) sum(v)."""
    return Fraction(4, 5) * sum(a * b for a, b in zip(u, v)) + Fraction(1, 5) * sum(u, Fraction(0)) * sum(v, Fraction(0))


def g_norm(v: Sequence[Fraction]) -> Fraction:
    return g_inner(v, v)


# ---------------------------------------------------------------------------
# E8


@dataclass(frozen=True)
class E8Certificate:
    size: int
    norm: Fraction
    rank: int
    census: tuple[int, int, int, int, int]  # cos = 1, 1/2, 0, -1/2, -1
    reflection_closed: bool

    def as_dict(self) -> dict:
        return {
            "size": self.size,
            "norm": str(self.norm),
            "rank": self.rank,
            "census": list(self.census),
            "reflection_closed": self.reflection_closed,
        }


_COS = (Fraction(1), Fraction(1, 2), Fraction(0), Fraction(-1, 2), Fraction(-1))


def certify_e8(roots: Sequence[Sequence[Fraction]]) -> E8Certificate:
    """Distinctness, per-root cosine census, rank 8 and reflection closure.

    ``roots`` are coordinate vectors over the incoherent basis (G-form).
    """
    vecs = [tuple(int(x * SCALE) for x in r) for r in roots]
    if any(Fraction(a, SCALE) != x for r, v in zip(roots, vecs) for a, x in zip(v, r)):
        raise E8Error("coordinates outside (1/12)Z")
    index = {v: i for i, v in enumerate(vecs)}
    if len(index) != len(vecs):
        raise CensusMismatch("repeated vectors")
    norms = {_ip(v, v) for v in vecs}
    if len(norms) != 1:
        raise CensusMismatch("vectors of different norms")
    nn = norms.pop()
    gram = [[_ip(u, v) for v in vecs] for u in vecs]
    census = None
    for i, row in enumerate(gram):
        counts = [0] * 5
        for x in row:
            c = Fraction(x, nn)
            if c not in _COS:
                raise CensusMismatch(f"root {i}: cosine {c}")
            counts[_COS.index(c)] += 1
        counts = tuple(counts)
        if census is None:
            census = counts
        elif counts != census:
            raise CensusMismatch(f"root {i}: census {counts} != {census}")
    if census != (1, 56, 126, 56, 1):
        raise CensusMismatch(f"census {census}")
    r = rank(gram)
    if r != 8:
        raise RankMismatch(f"rank {r}")
    for i, u in enumerate(vecs):
        for j, v in enumerate(vecs):
            coef = Fraction(2 * gram[i][j], nn)
            if coef.denominator != 1:
                raise NotReflectionClosed(f"non-integral coefficient at ({i},{j})")
            c = int(coef)
            if c and tuple(b - c * a for a, b in zip(u, v)) not in index:
                raise NotReflectionClosed(f"reflection of {j} in {i} leaves the set")
    return E8Certificate(len(vecs), Fraction(nn, 5 * SCALE * SCALE), r, census, True)


def descend_28(roots: Sequence[Sequence[Fraction]], alpha: int = 0) -> LineSystem:
    """Project the 112 roots at cosine +-1/2 to ``roots[alpha]`` onto its
    orthogonal complement.  The projections form a set S of 56 vectors closed
    under negation; one representative per antipodal pair is kept."""
    vecs = [tuple(int(x * SCALE) for x in r) for r in roots]
    a = vecs[alpha]
    aa = _ip(a, a)
    images = []
    for v in vecs:
        av = _ip(a, v)
        if 2 * abs(av) != aa:
            continue
        # w = v - ((a, v)/(a, a)) a = v -+ a/2, stored doubled to stay integral
        images.append(tuple(2 * y - (1 if av > 0 else -1) * x for x, y in zip(a, v)))
    if len(images) != 112:
        raise CensusMismatch(f"{len(images)} roots at cosine 1/2")
    images = set(images)
    if len(images) != 56 or any(tuple(-x for x in w) not in images for w in images):
        raise CensusMismatch(f"{len(images)} projected vectors, expected 56 closed under negation")
    seen = set()
    lines = []
    for w in sorted(images, reverse=True):
        neg = tuple(-x for x in w)
        if neg in seen:
            continue
        seen.add(w)
        lines.append(tuple(Fraction(x, 2 * SCALE) for x in w))
    return LineSystem(DIM, tuple(lines), gram_form(), {"source": "e8-descent"})


# ---------------------------------------------------------------------------
# lower dimensions


@dataclass(frozen=True)
class DescentStage:
    name: str
    system: LineSystem
    rank: int
    kappa: Fraction
    inc: int | None
    witness: tuple[int, ...] = ()
    regular: tuple[int, int, int] | None = None
    complete: bool = True
    notes: tuple[str, ...] = field(default=())

    @property
    def size(self) -> int:
        return self.system.n

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "size": self.size,
            "rank": self.rank,
            "kappa": str(self.kappa),
            "inc": self.inc,
            "witness": list(self.witness),
            "regular": None if self.regular is None else list(self.regular),
            "complete": self.complete,
            "notes": list(self.notes),
        }


def _stage(name: str, ls: LineSystem, budget: int, notes: tuple[str, ...] = ()) -> DescentStage:
    ls.certify()
    wit = find_max_incoherent(ls, budget=budget)
    reg = regularity(from_lines(ls))
    params = None if isinstance(reg, NotRegular) else (reg.n, reg.a, reg.b)
    return DescentStage(
        name, ls, ls.span_dim, ls.kappa.to_fraction(), wit.size if wit.complete else None,
        wit.lines, params, wit.complete, notes,
    )


def descend_chain(
    start: LineSystem, witness: Sequence[int] | None = None, budget: int = 10**7
) -> list[DescentStage]:
    """28 -> 16 -> 10 -> 6.

    The 16 lines are Gamma minus two points i, j plus every line whose
    Gamma_1 avoids {i, j} or equals it; i, j are the first two witness lines.
    Each later stage removes the lexicographically least maximum incoherent
    set of the previous one.
    """
    top = _stage("omega7", start, budget)
    if witness is None:
        if top.inc is None or top.inc != top.rank:
            raise NoIncoherentWitness(f"no incoherent set of size {top.rank}")
        witness = top.witness
    gamma = tuple(witness)
    if not is_incoherent(start, gamma):
        raise NoIncoherentWitness("witness is not incoherent")
    i, j = gamma[0], gamma[1]
    pair = {i, j}
    keep = [g for g in gamma if g not in pair]
    members = set(gamma)
    for c in range(start.n):
        if c in members:
            continue
        part = set(gamma_partition(start, gamma, c).part1)
        if not (part & pair) or part == pair:
            keep.append(c)
    keep.sort()
    stages = [top]
    cur = start.subsystem(keep)
    stages.append(_stage("omega6", cur, budget))
    for name in ("omega5", "omega4"):
        prev = stages[-1]
        if prev.inc is None:
            raise NoIncoherentWitness(f"{prev.name}: incoherent search incomplete")
        drop = set(prev.witness)
        cur = prev.system.subsystem([k for k in range(prev.size) if k not in drop])
        stages.append(_stage(name, cur, budget))
    return stages


# ---------------------------------------------------------------------------
# full pipeline


def e8_report(second_involution: bool = True, budget: int = 10**7) -> dict:
    """Run the whole pipeline and return a JSON-ready summary.

    Raises on any failed certificate; ``report["ok"]`` is True otherwise.
    """
    sys = build_basis_coords()
    bs = sys.heptads
    ls276 = sys.line_system().certify()
    if ls276.kappa.to_fraction() != Fraction(1, 5):
        raise E8Error("basis coordinates are not at angle 1/5")
    x = find_involution(bs)
    census = heptad_census(bs, x)
    fixed, moved = eigenspace_split(sys, x)
    fixed_ls = sys.line_system(fixed).certify()
    fixed_reg = regularity(from_lines(fixed_ls))
    fixed_bounds = bounds_report(fixed_ls)
    roots = [project_to_w(sys, x, i) for i in moved]
    norms = sorted({g_norm(r) for r in roots})
    cert = certify_e8(roots)
    ls28 = descend_28(roots).certify()
    b28 = bounds_report(ls28)
    inc28 = find_max_incoherent(ls28, budget=budget)
    chain = descend_chain(ls28, budget=budget)
    report = {
        "involution": {
            "cycle_type": {str(k): v for k, v in x.cycle_type.items()},
            "fixed_heptad": list(x.fixed_heptad),
            "transpositions": [list(t) for t in x.transpositions()],
        },
        "heptad_census": list(census["types"]),
        "moved_heptad_meets": census["moved_meets"],
        "fixed_lines": len(fixed),
        "fixed_rank": fixed_ls.span_dim,
        "fixed_regular": None if isinstance(fixed_reg, NotRegular) else [fixed_reg.n, fixed_reg.a, fixed_reg.b],
        "fixed_relative_saturated": fixed_bounds.relative_saturated,
        "moved_lines": len(moved),
        "projection_norms": [str(n) for n in norms],
        "e8": cert.as_dict(),
        "descent_28": {
            "size": ls28.n,
            "rank": ls28.span_dim,
            "kappa": str(ls28.kappa.to_fraction()),
            "absolute_saturated": b28.absolute_saturated,
            "inc": inc28.size if inc28.complete else None,
        },
        "descent_chain": [s.as_dict() for s in chain],
    }
    if second_involution:
        y = find_involution(bs, index=1)
        fixed_y, moved_y = eigenspace_split(sys, y)
        cert_y = certify_e8([project_to_w(sys, y, i) for i in moved_y])
        report["second_involution"] = {
            "transpositions": [list(t) for t in y.transpositions()],
            "heptad_census": list(heptad_census(bs, y)["types"]),
            "fixed_lines": len(fixed_y),
            "e8": cert_y.as_dict(),
        }
    report["ok"] = bool(
        census["types"] == (1, 28, 112, 112)
        and len(fixed) == 36
        and fixed_ls.span_dim == 15
        and not isinstance(fixed_reg, NotRegular)
        and len(moved) == 240
        and norms == [Fraction(2, 5)]
        and cert.rank == 8
        and ls28.n == 28
        and ls28.span_dim == 7
    )
    return report
