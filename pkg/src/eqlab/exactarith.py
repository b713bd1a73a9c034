"""Exact scalars in Q(sqrt(D)), exact vectors and fraction-free rank.

Rationals are :class:`fractions.Fraction`.  A :class:`QuadScalar` is
``rat + coeff * sqrt(radicand)`` where the radicand is kept as a squarefree
positive integer, so ``sqrt(27)`` and ``sqrt(1/3)`` both live in Q(sqrt(3)).
No floating point is used anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence, Union

__all__ = [
    "ExactArithmeticError",
    "RadicandMismatch",
    "LengthMismatch",
    "QuadScalar",
    "Scalar",
    "as_quad",
    "squarefree_decompose",
    "is_square",
    "rational_sqrt",
    "quad_sqrt",
    "quad_mul",
    "inner_product",
    "gram_matrix",
    "rank",
    "determinant",
    "common_radicand",
]


class ExactArithmeticError(ValueError):
    pass


class RadicandMismatch(ExactArithmeticError):
    pass


class LengthMismatch(ExactArithmeticError):
    pass


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Return ``(s, f)`` with ``n == s * f * f`` and ``s`` squarefree."""
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return 0, 1
    square, free = 1, 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            square *= p ** (e // 2)
            if e % 2:
                free *= p
        p += 1 if p == 2 else 2
    free *= n
    return free, square


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def rational_sqrt(q: Fraction | int) -> Fraction | None:
    """Exact square root of a rational, or None when it is irrational."""
    q = Fraction(q)
    if q < 0:
        return None
    a, b = q.numerator, q.denominator
    ra, rb = isqrt(a), isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


@dataclass(frozen=True, slots=True)
class QuadScalar:
    """The exact real number ``rat + coeff * sqrt(radicand)``.

    ``radicand`` is a squarefree integer >= 1.  Values with ``coeff == 0`` are
    plain rationals and combine with any radicand.
    """

    rat: Fraction
    coeff: Fraction = Fraction(0)
    radicand: int = 1

    def __post_init__(self) -> None:
        rat, coeff, rad = Fraction(self.rat), Fraction(self.coeff), self.radicand
        if isinstance(rad, Fraction):
            if rad.denominator != 1:
                raise ValueError("use quad_sqrt for rational radicands")
            rad = rad.numerator
        if rad < 0:
            raise ValueError("radicand must be nonnegative")
        free, sq = squarefree_decompose(rad)
        if free in (0, 1):
            rat, coeff, free = rat + coeff * sq * free, Fraction(0), 1
        else:
            coeff = coeff * sq
        if coeff == 0:
            free = 1
        object.__setattr__(self, "rat", rat)
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "radicand", free)

    # construction helpers -------------------------------------------------
    @classmethod
    def of(cls, value: Scalar) -> QuadScalar:
        return as_quad(value)

    @classmethod
    def _raw(cls, rat: Fraction, coeff: Fraction, radicand: int) -> QuadScalar:
        """Skip normalization; ``radicand`` must already be squarefree."""
        obj = object.__new__(cls)
        if coeff == 0:
            radicand = 1
        object.__setattr__(obj, "rat", rat)
        object.__setattr__(obj, "coeff", coeff)
        object.__setattr__(obj, "radicand", radicand)
        return obj

    @property
    def is_rational(self) -> bool:
        return self.coeff == 0

    def to_fraction(self) -> Fraction:
        if self.coeff != 0:
            raise ValueError(f"{self} is irrational")
        return self.rat

    def _join(self, other: QuadScalar) -> int:
        if self.coeff == 0:
            return other.radicand
        if other.coeff == 0 or self.radicand == other.radicand:
            return self.radicand
        raise RadicandMismatch(f"sqrt({self.radicand}) vs sqrt({other.radicand})")

    # arithmetic -------------------------------------------------------------
    def __add__(self, other: Scalar) -> QuadScalar:
        other = as_quad(other)
        d = self._join(other)
        return QuadScalar(self.rat + other.rat, self.coeff + other.coeff, d)

    __radd__ = __add__

    def __neg__(self) -> QuadScalar:
        return QuadScalar(-self.rat, -self.coeff, self.radicand)

    def __sub__(self, other: Scalar) -> QuadScalar:
        return self + (-as_quad(other))

    def __rsub__(self, other: Scalar) -> QuadScalar:
        return as_quad(other) - self

    def __mul__(self, other: Scalar) -> QuadScalar:
        other = as_quad(other)
        d = self._join(other)
        a, b, c, e = self.rat, self.coeff, other.rat, other.coeff
        return QuadScalar(a * c + b * e * d, a * e + b * c, d)

    __rmul__ = __mul__

    def conjugate(self) -> QuadScalar:
        return QuadScalar(self.rat, -self.coeff, self.radicand)

    def norm(self) -> Fraction:
        """Field norm ``rat^2 - radicand * coeff^2``."""
        return self.rat * self.rat - self.radicand * self.coeff * self.coeff

    def __truediv__(self, other: Scalar) -> QuadScalar:
        other = as_quad(other)
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(D))")
        num = self * other.conjugate()
        return QuadScalar(num.rat / n, num.coeff / n, num.radicand)

    def __rtruediv__(self, other: Scalar) -> QuadScalar:
        return as_quad(other) / self

    def __pow__(self, e: int) -> QuadScalar:
        if e < 0:
            return as_quad(1) / (self ** (-e))
        result, base = as_quad(1), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # comparison -------------------------------------------------------------
    def sign(self) -> int:
        """Exact sign of the real number, via squared comparison."""
        a, b = self.rat, self.coeff
        if b == 0:
            return (a > 0) - (a < 0)
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 * D
        diff = a * a - b * b * self.radicand
        return sa if diff > 0 else sb

    def __bool__(self) -> bool:
        return self.rat != 0 or self.coeff != 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.coeff == 0 and self.rat == other
        if not isinstance(other, QuadScalar):
            return NotImplemented
        if self.coeff == 0 and other.coeff == 0:
            return self.rat == other.rat
        return (self.rat, self.coeff, self.radicand) == (other.rat, other.coeff, other.radicand)

    def __hash__(self) -> int:
        if self.coeff == 0:
            return hash(self.rat)
        return hash((self.rat, self.coeff, self.radicand))

    def __lt__(self, other: Scalar) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other: Scalar) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other: Scalar) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other: Scalar) -> bool:
        return (self - other).sign() >= 0

    def __abs__(self) -> QuadScalar:
        return -self if self.sign() < 0 else self

    def __repr__(self) -> str:
        if self.coeff == 0:
            return f"QuadScalar({self.rat})"
        return f"QuadScalar({self.rat} + {self.coeff}*sqrt({self.radicand}))"

    def __str__(self) -> str:
        if self.coeff == 0:
            return str(self.rat)
        return f"{self.rat}+{self.coeff}*sqrt({self.radicand})"


Scalar = Union[int, Fraction, QuadScalar]
_ZERO = Fraction(0)


def as_quad(value: Scalar) -> QuadScalar:
    if isinstance(value, QuadScalar):
        return value
    if isinstance(value, (int, Fraction)):
        return QuadScalar(Fraction(value))
    raise TypeError(f"cannot convert {type(value).__name__} to QuadScalar")


def quad_sqrt(q: Fraction | int) -> QuadScalar:
    """``sqrt(q)`` for a nonnegative rational, in normalized form."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("square root of a negative rational")
    # sqrt(a/b) = sqrt(a*b) / b
    return QuadScalar(Fraction(0), Fraction(1, q.denominator), q.numerator * q.denominator)


def quad_mul(x: QuadScalar, y: QuadScalar) -> QuadScalar:
    return as_quad(x) * as_quad(y)


def common_radicand(values: Iterable[Scalar]) -> int:
    """The single radicand shared by ``values`` (1 if all are rational)."""
    d = 1
    for v in values:
        if isinstance(v, QuadScalar) and v.coeff != 0:
            if d == 1:
                d = v.radicand
            elif v.radicand != d:
                raise RadicandMismatch(f"sqrt({d}) vs sqrt({v.radicand})")
    return d


def _split(vec: Sequence[Scalar]) -> tuple[int, list[int], list[int], int]:
    """Write ``vec`` as ``(A + B sqrt(D)) / den`` with integer lists A, B."""
    qs = [as_quad(x) for x in vec]
    d = common_radicand(qs)
    den = 1
    for q in qs:
        for f in (q.rat, q.coeff):
            den = den * f.denominator // gcd(den, f.denominator)
    a = [int(q.rat * den) for q in qs]
    b = [int(q.coeff * den) for q in qs]
    return den, a, b, d


def _dot(u: list[int], v: list[int]) -> int:
    return sum(x * y for x, y in zip(u, v))


def inner_product(u: Sequence[Scalar], v: Sequence[Scalar]) -> QuadScalar:
    """Exact Euclidean inner product of two vectors."""
    if len(u) != len(v):
        raise LengthMismatch(f"lengths {len(u)} and {len(v)}")
    du, au, bu, ru = _split(u)
    dv, av, bv, rv = _split(v)
    if ru != 1 and rv != 1 and ru != rv:
        raise RadicandMismatch(f"sqrt({ru}) vs sqrt({rv})")
    d = max(ru, rv)
    den = du * dv
    rat = _dot(au, av) + d * _dot(bu, bv)
    coeff = _dot(au, bv) + _dot(bu, av)
    return QuadScalar(Fraction(rat, den), Fraction(coeff, den), d)


def gram_matrix(
    vectors: Sequence[Sequence[Scalar]],
    form: Sequence[Sequence[Fraction]] | None = None,
) -> list[list[QuadScalar]]:
    """Gram matrix ``[(v_i, v_j)]``, optionally under a rational bilinear form.

    Vectors are split once into integer parts so each entry costs four
    integer dot products.
    """
    sr = [_split(v) for v in vectors]
    sl = sr if form is None else [_split(_apply_form(form, v)) for v in vectors]
    d = 1
    for s in sl + sr:
        if s[3] != 1:
            if d != 1 and s[3] != d:
                raise RadicandMismatch(f"sqrt({d}) vs sqrt({s[3]})")
            d = s[3]
    n = len(sl)
    g: list[list[QuadScalar]] = [[QuadScalar(Fraction(0))] * n for _ in range(n)]
    for i in range(n):
        di, ai, bi, _ = sl[i]
        for j in range(i, n):
            dj, aj, bj, _ = sr[j]
            den = di * dj
            val = QuadScalar._raw(
                Fraction(_dot(ai, aj) + d * _dot(bi, bj), den),
                Fraction(_dot(ai, bj) + _dot(bi, aj), den) if d != 1 else _ZERO,
                d,
            )
            g[i][j] = val
            g[j][i] = val
    return g


def _apply_form(form: Sequence[Sequence[Fraction]], v: Sequence[Scalar]) -> list[QuadScalar]:
    qs = [as_quad(x) for x in v]
    out = []
    for row in form:
        acc = QuadScalar(Fraction(0))
        for f, x in zip(row, qs):
            if f:
                acc = acc + x * f
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# fraction-free elimination


def _integer_rows(matrix: Sequence[Sequence[Fraction | int]]) -> list[list[int]]:
    rows = []
    for row in matrix:
        den = 1
        for x in row:
            q = x.denominator
            if den % q:
                den = den * q // gcd(den, q)
        rows.append([x.numerator * (den // x.denominator) for x in row])
    return rows


def _bareiss_int(rows: list[list[int]], want_det: bool = False) -> tuple[int, int]:
    """Bareiss elimination on an integer matrix.

    Returns ``(rank, det)``; ``det`` is only meaningful for square input with
    ``want_det``.  Row-scaling of the input changes det, so callers that need
    det must not pre-scale rows.
    """
    m = [r[:] for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    prev = 1
    r = 0
    sign = 1
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            if want_det:
                return r, 0
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            sign = -sign
        p = m[r][c]
        row_r = m[r]
        for i in range(r + 1, nrows):
            row_i = m[i]
            f = row_i[c]
            if f == 0:
                if prev != 1 or p != 1:
                    row_i[c + 1:] = [(x * p) // prev for x in row_i[c + 1:]]
            else:
                row_i[c + 1:] = [
                    (x * p - f * y) // prev for x, y in zip(row_i[c + 1:], row_r[c + 1:])
                ]
            row_i[c] = 0
        prev = p
        r += 1
    det = sign * prev if (want_det and r == nrows == ncols) else 0
    return r, det


def _bareiss_field(rows: list[list[QuadScalar]], want_det: bool = False) -> tuple[int, QuadScalar]:
    m = [r[:] for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    prev = QuadScalar(Fraction(1))
    zero = QuadScalar(Fraction(0))
    r = 0
    sign = 1
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            if want_det:
                return r, zero
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            sign = -sign
        p = m[r][c]
        for i in range(r + 1, nrows):
            f = m[i][c]
            for j in range(c + 1, ncols):
                m[i][j] = (m[i][j] * p - f * m[r][j]) / prev
            m[i][c] = zero
        prev = p
        r += 1
    det = prev * sign if (want_det and r == nrows == ncols) else zero
    return r, det


def rank(matrix: Sequence[Sequence[Scalar]]) -> int:
    """Exact rank via fraction-free (Bareiss) elimination over Q(sqrt(D))."""
    if not matrix or not matrix[0]:
        return 0
    if all(isinstance(x, QuadScalar) and x.coeff == 0 for row in matrix for x in row):
        return _bareiss_int(_integer_rows([[x.rat for x in row] for row in matrix]))[0]
    qs = [[as_quad(x) for x in row] for row in matrix]
    common_radicand(x for row in qs for x in row)
    if all(x.coeff == 0 for row in qs for x in row):
        return _bareiss_int(_integer_rows([[x.rat for x in row] for row in qs]))[0]
    return _bareiss_field(qs)[0]


def determinant(matrix: Sequence[Sequence[Scalar]]) -> QuadScalar:
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise LengthMismatch("determinant of a non-square matrix")
    if n == 0:
        return QuadScalar(Fraction(1))
    qs = [[as_quad(x) for x in row] for row in matrix]
    common_radicand(x for row in qs for x in row)
    if all(x.coeff == 0 for row in qs for x in row):
        den = 1
        for row in qs:
            for x in row:
                den = den * x.rat.denominator // gcd(den, x.rat.denominator)
        ints = [[int(x.rat * den) for x in row] for row in qs]
        _, det = _bareiss_int(ints, want_det=True)
        return QuadScalar(Fraction(det, den**n))
    return _bareiss_field(qs, want_det=True)[1]
