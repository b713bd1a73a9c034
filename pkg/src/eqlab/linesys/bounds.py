"""Absolute, relative, Neumann and incoherence bound certificates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .system import LineSystem

__all__ = ["BoundsReport", "bounds_report"]


@dataclass(frozen=True)
class BoundsReport:
    n: int
    d: int
    rho_sq: Fraction
    absolute_bound: int
    absolute_saturated: bool
    relative_bound: Fraction | None
    relative_saturated: bool
    neumann_applicable: bool
    rho_odd_integer: bool | None
    neumann_ok: bool
    inc: int | None
    inc_saturated: bool | None
    notes: tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "rho_sq": str(self.rho_sq),
            "absolute_bound": self.absolute_bound,
            "absolute_saturated": self.absolute_saturated,
            "relative_bound": None if self.relative_bound is None else str(self.relative_bound),
            "relative_saturated": self.relative_saturated,
            "neumann_applicable": self.neumann_applicable,
            "rho_odd_integer": self.rho_odd_integer,
            "neumann_ok": self.neumann_ok,
            "inc": self.inc,
            "inc_saturated": self.inc_saturated,
            "notes": list(self.notes),
        }


def bounds_report(ls: LineSystem, inc: int | None = None) -> BoundsReport:
    """All bound checks, using the dimension actually spanned by the lines."""
    ls.certify()
    n, d = ls.n, ls.span_dim
    rho_sq = ls.rho_sq.to_fraction()
    notes = []
    absolute = d * (d + 1) // 2
    if rho_sq > d:
        relative = Fraction(d) * (rho_sq - 1) / (rho_sq - d)
        rel_sat = relative == n
    else:
        relative, rel_sat = None, False
        notes.append("relative bound needs rho^2 > d")
    rho_int = ls.rho_int
    odd = (rho_int is not None and rho_int % 2 == 1) if ls.rho.is_rational else None
    applicable = n > 2 * d
    if not applicable:
        notes.append("Neumann parity not applicable: n <= 2d")
    neumann_ok = (not applicable) or bool(odd)
    if inc is not None and inc > d:
        notes.append("incoherent set larger than d")
    return BoundsReport(
        n=n,
        d=d,
        rho_sq=rho_sq,
        absolute_bound=absolute,
        absolute_saturated=n == absolute,
        relative_bound=relative,
        relative_saturated=rel_sat,
        neumann_applicable=applicable,
        rho_odd_integer=odd,
        neumann_ok=neumann_ok,
        inc=inc,
        inc_saturated=None if inc is None else inc == d,
        notes=tuple(notes),
    )
