"""Incoherent subsets: exact search, Gamma_1/Gamma_2 partitions and the
design structure a maximal incoherent set of size d carries.

Lines are referred to by their index in the LineSystem.  Inside a fixed
incoherent set Gamma, points are also referred to by their *position* in
Gamma (0..g-1), which is how the induced block designs are labelled.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from ..designkit import (
    BlockSet,
    DesignCertificate,
    NotADesign,
    certify_design,
    derived_design,
    residual_design,
)
from ..exactarith import QuadScalar, as_quad
from ..twograph import NotRegular, RegularityParams, from_lines, regularity
from .system import LineSystem, LineSystemError

__all__ = [
    "IncoherenceError",
    "NotMaximal",
    "NoWitness",
    "IncoherentWitness",
    "GammaPartition",
    "Verdict",
    "IncoherentDesign",
    "is_incoherent",
    "find_max_incoherent",
    "gamma_partition",
    "taylor_size_check",
    "taylor_vector_check",
    "taylor_intersection_check",
    "incoherent_design",
    "setsum_checks",
    "foursum_check",
]

DEFAULT_BUDGET = 10**7


class IncoherenceError(LineSystemError):
    pass


class NotMaximal(IncoherenceError):
    pass


class NoWitness(IncoherenceError):
    pass


@dataclass(frozen=True)
class IncoherentWitness:
    lines: tuple[int, ...]
    complete: bool = True
    nodes: int = 0

    @property
    def size(self) -> int:
        return len(self.lines)


@dataclass(frozen=True)
class GammaPartition:
    gamma: int
    part1: tuple[int, ...]
    part2: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.part1)


@dataclass(frozen=True)
class Verdict:
    name: str
    ok: bool
    witness: object = None
    values: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok, "witness": _plain(self.witness), "values": _plain(self.values)}


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [_plain(v) for v in x]
    if isinstance(x, (Fraction, QuadScalar)):
        return str(x)
    return x


# ---------------------------------------------------------------------------
# search


def is_incoherent(ls: LineSystem, idx: Sequence[int]) -> bool:
    s = ls.sign_matrix()
    return all(s[a][b] * s[a][c] * s[b][c] > 0 for a, b, c in combinations(idx, 3))


class _Stop(Exception):
    pass


def _neg_masks(ls: LineSystem) -> list[int]:
    s = ls.sign_matrix()
    n = len(s)
    return [sum(1 << j for j in range(n) if j != i and s[i][j] < 0) for i in range(n)]


def find_max_incoherent(
    ls: LineSystem, cap: int | None = None, budget: int = DEFAULT_BUDGET
) -> IncoherentWitness:
    """Lexicographically least maximum incoherent set, up to size ``cap``.

    For each anchor v0 (ascending) the other lines are re-signed to make their
    inner product with v0 positive; sets with minimum v0 are then exactly the
    cliques of the positive graph on j > v0.  The clique search is a
    lexicographic DFS bounded by greedy colouring.
    """
    ls.certify()
    n = ls.n
    d = ls.span_dim
    if cap is None:
        cap = d
    if cap > d:
        raise IncoherenceError(f"cap {cap} exceeds the dimension {d}")
    if n <= 2:
        return IncoherentWitness(tuple(range(n)), True, 0)
    neg = _neg_masks(ls)
    full = (1 << n) - 1
    best: list[int] = [0, 1][: min(cap, 2)]
    nodes = 0

    def colour_bound(p: int, nbr: list[int]) -> int:
        colours = 0
        q = p
        while q:
            colours += 1
            avail = q
            while avail:
                low = avail & -avail
                v = low.bit_length() - 1
                q &= ~low
                avail &= ~low & ~nbr[v]
        return colours

    def expand(r: list[int], p: int, nbr: list[int]) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes > budget:
            raise _Stop("budget")
        if not p:
            if len(r) > len(best):
                best = r[:]
                if len(best) >= cap:
                    raise _Stop("cap")
            return
        if len(r) + colour_bound(p, nbr) <= len(best):
            return
        while p:
            if len(r) + p.bit_count() <= len(best):
                return
            low = p & -p
            v = low.bit_length() - 1
            p &= ~low
            r.append(v)
            expand(r, p & nbr[v], nbr)
            r.pop()

    complete = True
    try:
        for v0 in range(n):
            if n - v0 <= len(best):
                break
            flip = neg[v0]
            cand = full & ~((1 << (v0 + 1)) - 1)
            nbr = [0] * n
            for i in range(v0 + 1, n):
                other = (full & ~flip) if (flip >> i) & 1 else flip
                nbr[i] = cand & ~(neg[i] ^ other) & ~(1 << i)
            expand([v0], cand, nbr)
    except _Stop as stop:
        complete = stop.args[0] == "cap"
    return IncoherentWitness(tuple(best), complete, nodes)


# ---------------------------------------------------------------------------
# partitions


class _Frame:
    """Signs of external lines against a re-signed incoherent set Gamma."""

    def __init__(self, ls: LineSystem, gamma: Sequence[int]):
        ls.certify()
        self.ls = ls
        self.gamma = tuple(gamma)
        self.g = len(self.gamma)
        s = ls.sign_matrix()
        g0 = self.gamma[0]
        self.sigma = [1 if i == g0 else s[g0][i] for i in self.gamma]
        for (pa, a), (pb, b) in combinations(enumerate(self.gamma), 2):
            if self.sigma[pa] * self.sigma[pb] * s[a][b] < 0:
                raise IncoherenceError(f"lines {a},{b} break incoherence of Gamma")
        members = set(self.gamma)
        self.external = tuple(i for i in range(ls.n) if i not in members)
        self.pos_mask: dict[int, int] = {}
        full = (1 << self.g) - 1
        for c in self.external:
            m = 0
            for p, a in enumerate(self.gamma):
                if self.sigma[p] * s[c][a] > 0:
                    m |= 1 << p
            if m == 0 or m == full:
                raise NotMaximal(f"line {c} extends Gamma")
            self.pos_mask[c] = m

    def sides(self, c: int) -> tuple[int, int]:
        """(part1, part2) as position masks, part1 the smaller side.

        On a tie the side containing position 0 is reported second, a fixed
        but arbitrary choice.
        """
        m = self.pos_mask[c]
        other = ((1 << self.g) - 1) & ~m
        a, b = m.bit_count(), other.bit_count()
        if a < b:
            return m, other
        if b < a:
            return other, m
        return (other, m) if m & 1 else (m, other)

    def positions(self, mask: int) -> tuple[int, ...]:
        return tuple(p for p in range(self.g) if (mask >> p) & 1)

    def lines(self, mask: int) -> tuple[int, ...]:
        return tuple(self.gamma[p] for p in self.positions(mask))


def gamma_partition(
    ls: LineSystem,
    gamma: Sequence[int],
    c: int,
    pair: tuple[int, int] | None = None,
) -> GammaPartition:
    """Gamma_1(c), Gamma_2(c) with |Gamma_1| <= |Gamma_2|.

    With ``pair = (a1, a2)`` the sets are built literally from the definition
    Gamma_i = {x in Gamma : {c, a_i, x} coherent}; the result must not depend
    on which coherent pair is used.
    """
    if c in gamma:
        raise IncoherenceError("gamma line lies in Gamma")
    frame = _Frame(ls, gamma)
    if pair is None:
        p1, p2 = frame.sides(c)
        return GammaPartition(c, frame.lines(p1), frame.lines(p2))
    s = ls.sign_matrix()
    a1, a2 = pair
    if s[c][a1] * s[c][a2] * s[a1][a2] > 0:
        raise IncoherenceError("pair is not a coherent completion")
    sets = []
    for a in (a1, a2):
        sets.append(tuple(x for x in gamma if x != a and s[c][a] * s[c][x] * s[a][x] < 0))
    g1, g2 = sets
    if set(g1) | set(g2) != set(gamma) or set(g1) & set(g2):
        raise IncoherenceError("definition does not partition Gamma")
    if len(g1) > len(g2) or (len(g1) == len(g2) and gamma[0] in g1):
        g1, g2 = g2, g1
    return GammaPartition(c, g1, g2)


def _taylor_poly(x: int, d: int, rho: QuadScalar) -> QuadScalar:
    return 4 * x * x - 4 * d * x + (rho - 1) * (rho - 1) * (rho + d)


def taylor_size_check(ls: LineSystem, gamma: Sequence[int]) -> Verdict:
    frame = _Frame(ls, gamma)
    d, rho = frame.g, ls.rho
    sizes = set()
    for c in frame.external:
        p1, p2 = frame.sides(c)
        for x in (p1.bit_count(), p2.bit_count()):
            if _taylor_poly(x, d, rho):
                return Verdict("taylor_size", False, c, {"size": x})
        sizes.add((p1.bit_count(), p2.bit_count()))
    return Verdict("taylor_size", True, None, {"sizes": sorted(sizes)})


def taylor_vector_check(ls: LineSystem, gamma: Sequence[int], c: int) -> Verdict:
    """Check that c is spanned by c1*sum(Gamma_1) - c2*sum(Gamma_2) in the
    unit, positively re-signed basis Gamma; either global sign is accepted."""
    frame = _Frame(ls, gamma)
    if frame.g != ls.span_dim:
        return Verdict("taylor_vector", False, c, {"reason": "Gamma does not span"})
    d = frame.g
    rho = ls.rho
    kappa = as_quad(1) / rho
    p1, _ = frame.sides(c)
    k = p1.bit_count()
    den = (rho - 1) * (rho + d - 1)
    c1 = (rho + 2 * d - 2 * k - 1) / den
    c2 = (rho + 2 * k - 1) / den
    coef = [c1 if (p1 >> p) & 1 else -c2 for p in range(d)]
    total = sum(coef, as_quad(0))
    s = ls.sign_matrix()
    # (u, a_j) with unit basis Gram (1 - kappa) I + kappa J
    u_dot = [coef[j] * (1 - kappa) + total * kappa for j in range(d)]
    target = [kappa * (frame.sigma[j] * s[c][a]) for j, a in enumerate(frame.gamma)]
    eps = None
    for j in range(d):
        if u_dot[j] == target[j]:
            e = 1
        elif u_dot[j] == -target[j]:
            e = -1
        else:
            return Verdict("taylor_vector", False, c, {"position": j})
        if eps is None:
            eps = e
        elif e != eps:
            return Verdict("taylor_vector", False, c, {"position": j})
    unit = sum((coef[j] * u_dot[j] for j in range(d)), as_quad(0))
    ok = unit == 1
    return Verdict("taylor_vector", ok, None if ok else c, {"coefficients": (c1, -c2), "sign": eps, "k": k})


def taylor_intersection_check(ls: LineSystem, gamma: Sequence[int]) -> Verdict:
    frame = _Frame(ls, gamma)
    rho = ls.rho
    r2 = ls.rho_sq
    drop = {(rho - 1) * (rho - 1) / 4, (r2 - 1) / 4}
    seen = set()
    ext = frame.external
    parts = {c: frame.sides(c) for c in ext}
    for i, c in enumerate(ext):
        a1, a2 = parts[c]
        k = a1.bit_count()
        allowed = {as_quad(k) - x for x in drop}
        tie = a1.bit_count() == a2.bit_count()
        for e in ext[i + 1:]:
            b1, b2 = parts[e]
            combos = [(a1, b1)] if not tie else [(a1, b1), (a1, b2), (a2, b1), (a2, b2)]
            for x, y in combos:
                val = (x & y).bit_count()
                if as_quad(val) not in allowed:
                    return Verdict("taylor_intersection", False, (c, e), {"value": val})
                seen.add(val)
    return Verdict("taylor_intersection", True, None, {"intersections": sorted(seen, reverse=True)})


# ---------------------------------------------------------------------------
# designs on Gamma


def _regular(ls: LineSystem, params: RegularityParams | None) -> RegularityParams:
    if params is not None:
        return params
    reg = regularity(from_lines(ls))
    if isinstance(reg, NotRegular):
        raise IncoherenceError(f"two-graph is not regular: {reg}")
    return reg


@dataclass(frozen=True)
class IncoherentDesign:
    balanced: bool  # g1 == g2
    blocks: BlockSet
    certificate: DesignCertificate
    expected: dict
    three_design: bool
    derived: DesignCertificate | None = None
    residual: DesignCertificate | None = None

    def as_dict(self) -> dict:
        def cert(c: DesignCertificate | None):
            if c is None:
                return None
            return {
                "t": c.t, "lambda": c.lam, "b": c.b, "r": c.r,
                "lambdas": list(c.lambdas), "intersections": list(c.intersection_numbers),
            }

        return {
            "balanced": self.balanced,
            "d": self.blocks.d,
            "k": self.blocks.k,
            "certificate": cert(self.certificate),
            "expected": _plain(self.expected),
            "three_design": self.three_design,
            "derived": cert(self.derived),
            "residual": cert(self.residual),
        }


def _is_3design(bs: BlockSet) -> bool:
    try:
        certify_design(bs, 3)
    except NotADesign:
        return False
    return True


def incoherent_design(
    ls: LineSystem, gamma: Sequence[int], params: RegularityParams | None = None
) -> IncoherentDesign:
    """The block design {Gamma_1(c)} (or {Gamma_i(c)} when |Gamma_1| = d/2)."""
    reg = _regular(ls, params)
    frame = _Frame(ls, gamma)
    d = frame.g
    if d != ls.span_dim:
        raise NoWitness("Gamma does not have d lines")
    rho, r2 = ls.rho, ls.rho_sq
    firsts = []
    seconds = []
    for c in frame.external:
        p1, p2 = frame.sides(c)
        firsts.append(frame.positions(p1))
        seconds.append(frame.positions(p2))
    ks = {len(b) for b in firsts}
    if len(ks) != 1:
        raise IncoherenceError(f"|Gamma_1| is not constant: {sorted(ks)}")
    k = ks.pop()
    if 2 * k < d:
        bs = BlockSet(d, k, tuple(firsts))
        cert = certify_design(bs, 2)
        lam = Fraction(k * (k - 1)) / (r2.to_fraction() - d)
        expected = {
            "lambda": lam,
            "s1": as_quad(k) - (rho - 1) * (rho - 1) / 4,
            "s2": as_quad(k) - (r2 - 1) / 4,
            "lambda_thm": Fraction(reg.a * (k - 1), 2 * (d - k)),
        }
        return IncoherentDesign(False, bs, cert, expected, _is_3design(bs))
    bs = BlockSet(d, k, tuple(firsts + seconds))
    cert = certify_design(bs, 2)
    n, a = reg.n, reg.a
    s1 = (r2 - 1) / 4
    s2 = (rho - 1) * (rho - 1) / 4
    expected = {
        "lambda3": Fraction(2 * (n - d) - 3 * a, 2),
        "lambda2": n - d - a,
        "derived": (d - 1, d // 2 - 1, Fraction(2 * (n - d) - 3 * a, 2), s1 - 1, s2 - 1),
        "residual": (d - 1, d // 2, Fraction(a, 2), s1, s2),
    }
    der = certify_design(derived_design(bs, 0), 2)
    res = certify_design(residual_design(bs, 0), 2)
    return IncoherentDesign(True, bs, cert, expected, _is_3design(bs), der, res)


# ---------------------------------------------------------------------------
# counting identities


def _externals_by_position(frame: _Frame) -> list[int]:
    """For each position p, bitmask (over external order) of lines whose
    positive side contains p."""
    out = [0] * frame.g
    for e, c in enumerate(frame.external):
        m = frame.pos_mask[c]
        for p in range(frame.g):
            if (m >> p) & 1:
                out[p] |= 1 << e
    return out


def setsum_checks(
    ls: LineSystem, gamma: Sequence[int], params: RegularityParams | None = None
) -> list[Verdict]:
    """The six set-sum identities for a maximal incoherent set, plus
    sum |Gamma_1||Gamma_2| = a g (g-1) / 2."""
    reg = _regular(ls, params)
    frame = _Frame(ls, gamma)
    n, a, g = reg.n, reg.a, frame.g
    ext = frame.external
    size_pos = [frame.pos_mask[c].bit_count() for c in ext]
    xs = _externals_by_position(frame)

    def in_size(e: int, p: int) -> int:
        return size_pos[e] if (xs[p] >> e) & 1 else g - size_pos[e]

    out = []
    target = {
        1: Fraction((n - g - a) * g + a),
        2: Fraction(a * (g - 1)),
        3: (n - g - Fraction(3 * a, 2)) * g * g + Fraction(3 * a, 2) * g,
        4: Fraction(a * g * (g - 1), 2),
    }
    sums = {1: [], 2: [], 3: [], 4: []}
    bad = {}
    for p in range(g):
        s1 = sum(in_size(e, p) for e in range(len(ext)))
        s2 = sum(g - in_size(e, p) for e in range(len(ext)))
        s3 = sum(in_size(e, p) ** 2 for e in range(len(ext)))
        s4 = sum((g - in_size(e, p)) ** 2 for e in range(len(ext)))
        for key, val in zip((1, 2, 3, 4), (s1, s2, s3, s4)):
            sums[key].append(val)
            if val != target[key] and key not in bad:
                bad[key] = gamma[p]
    names = {1: "setsum_in", 2: "setsum_notin", 3: "setsum_in_sq", 4: "setsum_notin_sq"}
    for key in (1, 2, 3, 4):
        out.append(Verdict(names[key], key not in bad, bad.get(key), {"target": target[key], "sum": sums[key][0]}))

    t5 = Fraction(a * g, 2)
    t6 = (n - g - Fraction(3 * a, 2)) * g + a
    t7 = Fraction(a * (g - 2), 2)
    bad5 = bad6 = bad7 = None
    full = (1 << len(ext)) - 1
    for p, q in ((p, q) for p in range(g) for q in range(g) if p != q):
        s_pq = xs[p] ^ xs[q]
        rest = full & ~s_pq
        in_s = [e for e in range(len(ext)) if (s_pq >> e) & 1]
        in_r = [e for e in range(len(ext)) if (rest >> e) & 1]
        a_in = sum(in_size(e, p) for e in in_s)
        a_out = sum(g - in_size(e, p) for e in in_s)
        if (a_in != t5 or a_out != t5) and bad5 is None:
            bad5 = (gamma[p], gamma[q])
        if sum(in_size(e, p) for e in in_r) != t6 and bad6 is None:
            bad6 = (gamma[p], gamma[q])
        if sum(g - in_size(e, p) for e in in_r) != t7 and bad7 is None:
            bad7 = (gamma[p], gamma[q])
    out.append(Verdict("setsum_S", bad5 is None, bad5, {"target": t5}))
    out.append(Verdict("setsum_rest_in", bad6 is None, bad6, {"target": t6}))
    out.append(Verdict("setsum_rest_notin", bad7 is None, bad7, {"target": t7}))

    prod = sum(sz * (g - sz) for sz in size_pos)
    tt = Fraction(a * g * (g - 1), 2)
    out.append(Verdict("taylor_product_sum", prod == tt, None if prod == tt else prod, {"target": tt, "sum": prod}))
    return out


def foursum_check(
    ls: LineSystem, gamma: Sequence[int], params: RegularityParams | None = None
) -> Verdict:
    """Sum over pairs {e, f} disjoint from {a, b} of |S_ab & S_ef|.

    Also reports whether |S_ab & S_ef| is constant over all 4-subsets of
    Gamma, and the constant when it is.
    """
    reg = _regular(ls, params)
    frame = _Frame(ls, gamma)
    a, d = reg.a, frame.g
    ks = {frame.sides(c)[0].bit_count() for c in frame.external}
    if len(ks) != 1:
        return Verdict("foursum", False, None, {"reason": "|Gamma_1| not constant"})
    k = ks.pop()
    xs = _externals_by_position(frame)
    smask = {(p, q): xs[p] ^ xs[q] for p, q in combinations(range(d), 2)}
    target = a * (d - k - 1) * (k - 1)
    values = set()
    witness = None
    for (p, q), m in smask.items():
        total = 0
        for (r, t), m2 in smask.items():
            if r in (p, q) or t in (p, q):
                continue
            v = (m & m2).bit_count()
            total += v
            values.add(v)
        if total != target and witness is None:
            witness = (gamma[p], gamma[q], total)
    constant = len(values) == 1
    info = {"target": target, "constant": constant, "values": sorted(values)}
    if constant and d >= 4:
        info["c"] = values.pop()
        info["c_formula"] = Fraction(2 * a * (d - k - 1) * (k - 1), (d - 2) * (d - 3))
    return Verdict("foursum", witness is None, witness, info)
