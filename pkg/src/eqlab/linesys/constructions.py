"""Explicit equiangular line systems built from block sets and polytopes."""

from __future__ import annotations

from fractions import Fraction

from ..designkit import BlockSet, intersection_numbers, pg32_sts15
from ..exactarith import ExactArithmeticError, QuadScalar, quad_sqrt
from .system import LineSystem, LineSystemError

__all__ = [
    "ConstructionError",
    "NegativeDelta1",
    "DegenerateAngle",
    "ParameterMismatch",
    "block_intersections",
    "delta1",
    "construct_omega",
    "construct_augmented",
    "augment_all_ones",
    "sts15_plus_one",
    "icosahedron_lines",
    "hexagon_lines",
    "d_of_s",
    "k_of_s",
]


class ConstructionError(LineSystemError):
    pass


class NegativeDelta1(ConstructionError):
    pass


class DegenerateAngle(ConstructionError):
    pass


class ParameterMismatch(ConstructionError):
    pass


def block_intersections(bs: BlockSet) -> tuple[int, int]:
    nums = intersection_numbers(bs)
    if len(nums) != 2:
        raise ConstructionError(f"need exactly two intersection numbers, got {nums}")
    return nums[0], nums[1]


def delta1(d: int, k: int, s1: int, s2: int) -> Fraction:
    return Fraction(k * k) - Fraction(d * (s1 + s2), 2)


def d_of_s(s1: int, s2: int) -> Fraction:
    m = s1 - s2
    return Fraction((m * m + m + s1) ** 2, s1) - 2 * m


def k_of_s(s1: int, s2: int) -> int:
    return (s1 - s2) ** 2 + s1


def _block_vector(d: int, blk: tuple[int, ...], on: QuadScalar, off: QuadScalar) -> tuple[QuadScalar, ...]:
    members = set(blk)
    return tuple(on if j in members else off for j in range(d))


def construct_omega(bs: BlockSet, epsilon: int = 0) -> LineSystem:
    """One vector v(B) per block: d-k +/- sqrt(D1) on B, -k +/- sqrt(D1) off B."""
    s1, s2 = block_intersections(bs)
    d, k = bs.d, bs.k
    if 2 * k == s1 + s2:
        raise DegenerateAngle("2k = s1 + s2")
    dl = delta1(d, k, s1, s2)
    if dl < 0:
        raise NegativeDelta1(f"Delta1 = {dl} < 0")
    root = quad_sqrt(dl)
    if epsilon % 2:
        root = -root
    on, off = QuadScalar(Fraction(d - k)) + root, QuadScalar(Fraction(-k)) + root
    vecs = tuple(_block_vector(d, blk, on, off) for blk in bs.blocks)
    return LineSystem(d, vecs, meta={"source": "omega", "s": (s1, s2)})


def construct_augmented(bs: BlockSet) -> tuple[LineSystem, tuple[int, ...]]:
    """Block vectors plus d point vectors v(i); the point vectors come first.

    Returns the system and the indices of the incoherent witness {v(i)}.
    """
    s1, s2 = block_intersections(bs)
    d, k = bs.d, bs.k
    m = s1 - s2
    if d_of_s(s1, s2) != d or k_of_s(s1, s2) != k:
        raise ParameterMismatch(f"(d,k)=({d},{k}) does not fit s=({s1},{s2})")
    big = (m * m - s2) * quad_sqrt(Fraction(m, 2 * s1))
    root2 = quad_sqrt(Fraction(m * (2 * m + d), 2))
    diag = QuadScalar(Fraction(m * (d - 1))) - root2
    rest = QuadScalar(Fraction(-m)) - root2
    points = tuple(tuple(diag if j == i else rest for j in range(d)) for i in range(d))
    on, off = QuadScalar(Fraction(d - k)) + big, QuadScalar(Fraction(-k)) + big
    blocks = tuple(_block_vector(d, blk, on, off) for blk in bs.blocks)
    ls = LineSystem(d, points + blocks, meta={"source": "augmented", "s": (s1, s2)})
    return ls, tuple(range(d))


def augment_all_ones(ls: LineSystem) -> LineSystem:
    """Append c*(1,...,1), with c chosen so its squared norm matches the rest."""
    ls.certify()
    norm = ls.norm_sq
    if not norm.is_rational:
        raise ConstructionError("irrational norm")
    c = quad_sqrt(norm.rat / ls.dim)
    try:
        return ls.extended([tuple(c for _ in range(ls.dim))]).certify()
    except (ExactArithmeticError, LineSystemError) as exc:
        raise ConstructionError(f"the all-ones line is not at the common angle: {exc}") from None


def sts15_plus_one() -> LineSystem:
    return augment_all_ones(construct_omega(pg32_sts15()))


def icosahedron_lines() -> LineSystem:
    """Axes through opposite vertices of the icosahedron, in Q(sqrt 5)."""
    phi = QuadScalar(Fraction(1, 2), Fraction(1, 2), 5)
    z, one = QuadScalar(Fraction(0)), QuadScalar(Fraction(1))
    vecs = [
        (z, one, phi), (z, -one, phi),
        (one, phi, z), (-one, phi, z),
        (phi, z, one), (phi, z, -one),
    ]
    return LineSystem(3, tuple(vecs), meta={"source": "icosahedron"})


def hexagon_lines() -> LineSystem:
    """Diagonals of a regular hexagon: three lines at 60 degrees."""
    r3 = quad_sqrt(3)
    two, one, z = QuadScalar(Fraction(2)), QuadScalar(Fraction(1)), QuadScalar(Fraction(0))
    vecs = [(two, z), (one, r3), (-one, r3)]
    return LineSystem(2, tuple(vecs), meta={"source": "hexagon"})
