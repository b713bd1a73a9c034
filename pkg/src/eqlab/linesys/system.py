"""The LineSystem container, its exact equiangularity certificate and JSON."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Any, Sequence

from ..exactarith import (
    QuadScalar,
    Scalar,
    as_quad,
    common_radicand,
    gram_matrix,
    quad_sqrt,
    rank,
)

__all__ = [
    "LineSystemError",
    "NotEquiangular",
    "LineSystemFormatError",
    "LineSystem",
    "to_json",
    "from_json",
    "dump",
    "load",
]


class LineSystemError(ValueError):
    pass


class NotEquiangular(LineSystemError):
    pass


class LineSystemFormatError(LineSystemError):
    pass


@dataclass(frozen=True, eq=False)
class LineSystem:
    """Nonzero vectors spanning lines, with an optional rational bilinear form.

    Representatives keep whatever scale the construction gives them; every
    certificate is scale free.  ``form`` (a symmetric rational matrix) lets a
    system live in non-orthonormal coordinates.
    """

    dim: int
    vectors: tuple[tuple[QuadScalar, ...], ...]
    form: tuple[tuple[Fraction, ...], ...] | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        vecs = tuple(tuple(as_quad(x) for x in v) for v in self.vectors)
        for v in vecs:
            if len(v) != self.dim:
                raise LineSystemError(f"vector of length {len(v)} in dimension {self.dim}")
        object.__setattr__(self, "vectors", vecs)
        if self.form is not None:
            form = tuple(tuple(Fraction(x) for x in row) for row in self.form)
            if len(form) != self.dim or any(len(r) != self.dim for r in form):
                raise LineSystemError("form must be dim x dim")
            object.__setattr__(self, "form", form)

    @classmethod
    def of(cls, vectors: Sequence[Sequence[Scalar]], form=None, **meta: Any) -> LineSystem:
        dim = len(vectors[0]) if vectors else 0
        return cls(dim, tuple(tuple(v) for v in vectors), form, dict(meta))

    def __len__(self) -> int:
        return len(self.vectors)

    @property
    def n(self) -> int:
        return len(self.vectors)

    # exact invariants -----------------------------------------------------
    @cached_property
    def radicand(self) -> int:
        return common_radicand(x for v in self.vectors for x in v)

    @cached_property
    def gram(self) -> list[list[QuadScalar]]:
        return gram_matrix(self.vectors, self.form)

    @cached_property
    def span_dim(self) -> int:
        return rank(self.gram)

    @cached_property
    def _certificate(self) -> tuple[QuadScalar, QuadScalar]:
        """(norm_sq, rho_sq); raises NotEquiangular with a witness."""
        g = self.gram
        n = len(g)
        if n == 0:
            raise NotEquiangular("empty system")
        norm = g[0][0]
        if norm.sign() <= 0:
            raise NotEquiangular("zero or negative norm")
        for i in range(n):
            if g[i][i] != norm:
                raise NotEquiangular(f"vector {i} has norm {g[i][i]}, expected {norm}")
        if n == 1:
            return norm, as_quad(0)
        c = g[0][1] * g[0][1]
        good: set[QuadScalar] = set()
        for i in range(n):
            row = g[i]
            for j in range(i + 1, n):
                x = row[j]
                if x in good:
                    continue
                if x * x != c:
                    raise NotEquiangular(f"pair ({i},{j}) breaks the common angle")
                good.add(x)
        if c == 0:
            raise NotEquiangular("orthogonal lines are not equiangular")
        if c == norm * norm:
            raise NotEquiangular("repeated line")
        return norm, (norm * norm) / c

    def certify(self) -> LineSystem:
        self._certificate
        return self

    @property
    def norm_sq(self) -> QuadScalar:
        return self._certificate[0]

    @property
    def rho_sq(self) -> QuadScalar:
        return self._certificate[1]

    @cached_property
    def rho(self) -> QuadScalar:
        r2 = self.rho_sq
        if not r2.is_rational:
            raise NotEquiangular("rho^2 is irrational")
        return quad_sqrt(r2.rat)

    @property
    def kappa(self) -> QuadScalar:
        return as_quad(1) / self.rho

    @property
    def rho_int(self) -> int | None:
        r = self.rho
        if r.is_rational and r.rat.denominator == 1:
            return int(r.rat)
        return None

    @cached_property
    def _signs(self) -> tuple[tuple[int, ...], ...]:
        # few distinct Gram values, so sign each one once
        cache: dict[QuadScalar, int] = {}
        out = []
        for row in self.gram:
            r = []
            for x in row:
                s = cache.get(x)
                if s is None:
                    s = cache[x] = x.sign()
                r.append(s)
            out.append(tuple(r))
        return tuple(out)

    def sign_matrix(self) -> tuple[tuple[int, ...], ...]:
        """Signs of the Gram entries (read-only, cached)."""
        return self._signs

    # derived systems --------------------------------------------------------
    def subsystem(self, indices: Sequence[int]) -> LineSystem:
        return LineSystem(self.dim, tuple(self.vectors[i] for i in indices), self.form, dict(self.meta))

    def extended(self, extra: Sequence[Sequence[Scalar]]) -> LineSystem:
        return LineSystem(self.dim, self.vectors + tuple(tuple(v) for v in extra), self.form, dict(self.meta))


# ---------------------------------------------------------------------------
# JSON


def _q(x: Fraction) -> str:
    return str(Fraction(x))


def _entry(x: QuadScalar) -> list[str]:
    return [_q(x.rat), _q(x.coeff)]


def to_json(ls: LineSystem) -> str:
    """Canonical JSON: dim, radicand, norm_sq, rho, vectors, then form."""
    ls.certify()
    rad = ls.radicand
    doc: dict[str, Any] = {
        "dim": ls.dim,
        "radicand": _q(Fraction(rad)),
        "norm_sq": _entry(ls.norm_sq),
        "rho": _entry(ls.rho),
        "vectors": [[_entry(x) for x in v] for v in ls.vectors],
    }
    if ls.form is not None:
        doc["form"] = [[_q(x) for x in row] for row in ls.form]
    return json.dumps(doc, separators=(",", ":")) + "\n"


def _parse_frac(s: Any) -> Fraction:
    if not isinstance(s, str):
        raise LineSystemFormatError(f"expected a rational string, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise LineSystemFormatError(f"bad rational {s!r}") from exc


def _parse_entry(e: Any, rad: int) -> QuadScalar:
    if not (isinstance(e, list) and len(e) == 2):
        raise LineSystemFormatError(f"bad entry {e!r}")
    return QuadScalar(_parse_frac(e[0]), _parse_frac(e[1]), rad)


def from_json(text: str) -> LineSystem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LineSystemFormatError(str(exc)) from exc
    if not isinstance(doc, dict):
        raise LineSystemFormatError("top level must be an object")
    for key in ("dim", "radicand", "norm_sq", "rho", "vectors"):
        if key not in doc:
            raise LineSystemFormatError(f"missing field {key!r}")
    dim = doc["dim"]
    if not isinstance(dim, int) or dim < 0:
        raise LineSystemFormatError("dim must be a nonnegative integer")
    radf = _parse_frac(doc["radicand"])
    if radf.denominator != 1 or radf < 1:
        raise LineSystemFormatError("radicand must be a positive integer")
    rad = int(radf)
    vecs = doc["vectors"]
    if not isinstance(vecs, list):
        raise LineSystemFormatError("vectors must be a list")
    vectors = []
    for v in vecs:
        if not isinstance(v, list) or len(v) != dim:
            raise LineSystemFormatError("vector length does not match dim")
        vectors.append(tuple(_parse_entry(e, rad) for e in v))
    form = None
    if "form" in doc:
        form = tuple(tuple(_parse_frac(x) for x in row) for row in doc["form"])
    try:
        ls = LineSystem(dim, tuple(vectors), form)
        ls.certify()
    except LineSystemError as exc:
        raise LineSystemFormatError(f"inconsistent system: {exc}") from exc
    if ls.norm_sq != _parse_entry(doc["norm_sq"], rad) or ls.rho != _parse_entry(doc["rho"], rad):
        raise LineSystemFormatError("stored norm_sq/rho disagree with the vectors")
    return ls


def dump(ls: LineSystem, path: str | Path) -> None:
    Path(path).write_text(to_json(ls))


def load(path: str | Path) -> LineSystem:
    return from_json(Path(path).read_text())
