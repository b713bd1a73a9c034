"""Acceptance criteria, one test per criterion.

Each test rebuilds its inputs from scratch so the wall-clock limit covers the
whole computation.  All comparisons are exact; the only tolerances are the
time limits below.
"""

import csv
import io
import random
import time
from contextlib import contextmanager
from fractions import Fraction
from math import comb

import pytest

from eqlab.cli import main
from eqlab.designkit import golay_heptads, pair_blockset, pg32_sts15, qs_6_3_2
from eqlab.e8bridge import (
    build_basis_coords,
    certify_e8,
    descend_28,
    descend_chain,
    eigenspace_split,
    find_involution,
    g_norm,
    heptad_census,
    project_to_w,
)
from eqlab.linesys import (
    bounds_report,
    construct_augmented,
    construct_omega,
    find_max_incoherent,
    foursum_check,
    incoherent_design,
    setsum_checks,
    spherical_design_check,
    sts15_plus_one,
)
from eqlab.paramscan import TRANSCRIBED_NO, elliptic_point_search, rho29_rejection
from eqlab.twograph import NotRegular, check_axiom, from_graph, from_lines, regularity

from reference_tables import ELLIPTIC_POINTS, FAMILY_TABLE, QS_TABLE
from test_twograph import _complement_matches, _resign, random_graph

LIMIT_TABLE3 = 5.0
LIMIT_TABLE4 = 5.0
LIMIT_276 = 60.0
LIMIT_SPHERICAL = 120.0
LIMIT_E8 = 60.0
LIMIT_DESCENT = 30.0
LIMIT_ELLIPTIC = 10.0
LIMIT_RHO29 = 1.0


@contextmanager
def within(seconds):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"took {elapsed:.2f}s, limit {seconds}s"


def _verdict_ok(got, want):
    return got in ("No", TRANSCRIBED_NO) if want == "No" else got == want


def _csv_rows(capsys, argv):
    assert main(argv) == 0
    return list(csv.reader(io.StringIO(capsys.readouterr().out)))[1:]


def test_criterion_1_table3(capsys):
    with within(LIMIT_TABLE3):
        rows = _csv_rows(capsys, ["scan", "--m-max", "10"])
    assert len(rows) == 25
    for row, want in zip(rows, QS_TABLE):
        assert tuple(int(x) for x in row[:8]) == want[:8]
        assert _verdict_ok(row[8], want[8])


def test_criterion_2_table4(capsys):
    with within(LIMIT_TABLE4):
        rows = _csv_rows(capsys, ["families", "--i-max", "10"])
    assert len(rows) == 30
    for row in rows:
        key = (int(row[0]), int(row[1]))
        want = FAMILY_TABLE[key]
        assert tuple(int(x) for x in row[2:10]) == want[:8]
        assert _verdict_ok(row[10], want[8])
    computed_no = {(int(r[0]), int(r[1])) for r in rows if r[10] == "No"}
    assert computed_no == {(1, 4), (2, 2), (2, 6), (2, 10)}


def test_criterion_3_276_lines():
    with within(LIMIT_276):
        ls, _ = construct_augmented(golay_heptads())
        ls.certify()
        wit = find_max_incoherent(ls)
        rep = bounds_report(ls, wit.size)
        reg = regularity(from_lines(ls))
        des = incoherent_design(ls, list(wit.lines), reg)
    assert ls.n == 276 and ls.kappa.to_fraction() == Fraction(1, 5)
    assert rep.absolute_bound == 276 == 23 * 24 // 2 and rep.absolute_saturated
    assert rep.relative_saturated
    assert (reg.n, reg.a, reg.b) == (276, 112, 30)
    assert wit.complete and wit.size == 23
    cert = des.certificate
    assert (des.blocks.d, des.blocks.k, cert.lambdas[2]) == (23, 7, 21)
    assert cert.intersection_numbers == (3, 1)
    assert des.three_design


def test_criterion_4_spherical_design():
    with within(LIMIT_SPHERICAL):
        ls, _ = construct_augmented(golay_heptads())
        rep = spherical_design_check(ls.certify(), 5)
    assert rep.size == 552 == 2 * comb(24, 22)
    assert rep.strength == 5 and rep.tight
    assert all(total == target for _, total, target in rep.moments)


def test_criterion_5_e8():
    with within(LIMIT_E8):
        sys = build_basis_coords()
        x = find_involution(sys.heptads)
        census = heptad_census(sys.heptads, x)
        fixed, moved = eigenspace_split(sys, x)
        fixed_ls = sys.line_system(fixed).certify()
        reg = regularity(from_lines(fixed_ls))
        roots = [project_to_w(sys, x, i) for i in moved]
        norms = {g_norm(r) for r in roots}
        cert = certify_e8(roots)
    assert census["types"] == (1, 28, 112, 112)
    assert len(fixed) == 36 and fixed_ls.span_dim == 15
    assert not isinstance(reg, NotRegular)
    assert len(roots) == 240 and norms == {Fraction(2, 5)}
    assert cert.census == (1, 56, 126, 56, 1)
    assert cert.rank == 8 and cert.reflection_closed


def _descent():
    sys = build_basis_coords()
    x = find_involution(sys.heptads)
    _, moved = eigenspace_split(sys, x)
    roots = [project_to_w(sys, x, i) for i in moved]
    return descend_chain(descend_28(roots).certify())


@pytest.fixture(scope="module")
def descent():
    start = time.perf_counter()
    chain = _descent()
    return chain, time.perf_counter() - start


def _check_descent(chain, elapsed, ranks):
    assert elapsed < LIMIT_DESCENT
    assert [s.size for s in chain] == [28, 16, 10, 6]
    assert all(s.kappa == Fraction(1, 3) for s in chain)
    assert chain[0].inc == 7 and chain[1].inc == 6
    assert [s.rank for s in chain] == ranks


@pytest.mark.xfail(strict=True, reason="R^3 holds at most 4 equiangular lines at "
                   "angle 1/3, so the 6-line stage has rank 4, not 3")
def test_criterion_6_descent_as_stated(descent):
    _check_descent(*descent, ranks=[7, 6, 5, 3])


def test_criterion_6_descent_observed(descent):
    _check_descent(*descent, ranks=[7, 6, 5, 4])


def test_criterion_7_elliptic():
    with within(LIMIT_ELLIPTIC):
        pts = elliptic_point_search(10**6)
    assert pts == ELLIPTIC_POINTS and len(pts) == 13


def test_criterion_8_rho29():
    with within(LIMIT_RHO29):
        rej = rho29_rejection()
    assert rej.lambda3 == Fraction(71687, 3)
    assert (rej.lambda3.numerator, rej.lambda3.denominator) == (71687, 3)
    assert rej.rejected


def test_criterion_9_property_suites():
    # two-graph axiom fuzz
    rnd = random.Random(2024)
    for _ in range(1000):
        n = rnd.randint(4, 40)
        assert check_axiom(from_graph(random_graph(n, rnd, rnd.uniform(0.05, 0.95))))

    systems = {}
    for bs in (qs_6_3_2(), pair_blockset(7), golay_heptads()):
        ls, _ = construct_augmented(bs)
        systems[ls.span_dim] = ls.certify()

    # switching invariance of from_lines
    for ls in systems.values():
        flips = [rnd.random() < 0.5 for _ in range(ls.n)]
        assert from_lines(_resign(ls, flips)).same_as(from_lines(ls))

    # set-sum identities and the four-set sum on d = 6, 7, 23
    for d, ls in systems.items():
        gamma = list(find_max_incoherent(ls).lines)
        assert len(gamma) == d
        reg = regularity(from_lines(ls))
        assert all(v.ok for v in setsum_checks(ls, gamma, reg))
        assert foursum_check(ls, gamma, reg).ok

    # relative bound saturated <=> regular two-graph, both directions
    controls = list(systems.values()) + [
        construct_omega(golay_heptads()).certify(),
        construct_omega(pg32_sts15()).certify(),
        sts15_plus_one(),
    ]
    seen = set()
    for ls in controls:
        rep = bounds_report(ls)
        regular = not isinstance(regularity(from_lines(ls)), NotRegular)
        assert rep.relative_saturated == regular
        seen.add(regular)
    assert seen == {True, False}

    # complement construction gives the same two-graph
    for bs in (qs_6_3_2(), pair_blockset(7), pg32_sts15(), golay_heptads()):
        for eps in (0, 1):
            assert _complement_matches(bs, eps)
