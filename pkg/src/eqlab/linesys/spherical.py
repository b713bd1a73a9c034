"""Spherical t-design test for the antipodal set X = {+v, -v} of a line system."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from ..exactarith import QuadScalar, as_quad
from .system import LineSystem

__all__ = ["SphericalReport", "spherical_design_check", "moment_target"]


@dataclass(frozen=True)
class SphericalReport:
    size: int  # |X| = 2n
    dim: int
    strength: int  # largest t' <= t that holds
    moments: tuple[tuple[int, QuadScalar, QuadScalar], ...]  # (k, sum, target)
    tight: bool

    def as_dict(self) -> dict:
        return {
            "size": self.size,
            "dim": self.dim,
            "strength": self.strength,
            "tight": self.tight,
            "moments": [{"k": k, "sum": str(s), "target": str(t)} for k, s, t in self.moments],
        }


def moment_target(size: int, d: int, k: int) -> Fraction:
    """|X|^2 (k-1)!! / (d (d+2) ... (d+k-2)) for even k, 0 for odd k."""
    if k % 2:
        return Fraction(0)
    num, den = 1, 1
    for j in range(1, k, 2):
        num *= j
    for j in range(0, k, 2):
        den *= d + j
    return Fraction(size * size * num, den)


def _tight_size(d: int, t: int) -> int | None:
    if t % 2 == 0:
        return None
    e = (t - 1) // 2
    return 2 * comb(d + e - 1, d - 1)


def spherical_design_check(ls: LineSystem, t: int) -> SphericalReport:
    """Test sum_{x,y in X} (x,y)^k against the design value for k = 1..t.

    Inner products are normalised by the common squared norm, so the
    representatives' scale does not matter.  d is the spanned dimension.
    """
    ls.certify()
    n, d = ls.n, ls.span_dim
    norm = ls.norm_sq
    size = 2 * n
    # equiangular Gram entries take only a few values; count them once
    counts = Counter(ls.gram[i][j] for i in range(n) for j in range(n))
    unit = [(x / norm, c) for x, c in counts.items()]
    moments = []
    strength = 0
    failed = False
    for k in range(1, t + 1):
        total = as_quad(0)
        for x, c in unit:
            p = x ** k
            # sign pairs (+,+), (+,-), (-,+), (-,-)
            total = total + (p * (4 * c) if k % 2 == 0 else (p + (-x) ** k) * (2 * c))
        target = as_quad(moment_target(size, d, k))
        moments.append((k, total, target))
        if not failed and total == target:
            strength = k
        else:
            failed = True
    tight = strength == t and _tight_size(d, t) == size
    return SphericalReport(size, d, strength, tuple(moments), tight)
