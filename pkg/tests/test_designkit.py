from itertools import combinations
from math import comb

import pytest

from eqlab.designkit import (
    BlockSet,
    DesignError,
    NotADesign,
    NotApplicable,
    NotQuasiSymmetric,
    PointOutOfRange,
    block_graph_srg,
    calderbank_f,
    calderbank_modA,
    certify_design,
    complement_blockset,
    derived_design,
    format_blockset,
    intersection_numbers,
    pair_blockset,
    parse_blockset,
    qs_6_3_2,
    read_blockset,
    residual_design,
    t_counts,
    write_blockset,
)


def test_heptads_form_s4723(heptads):
    assert (heptads.d, heptads.k, heptads.b) == (23, 7, 253)
    cert = certify_design(heptads, 4)
    assert cert.t == 4 and cert.lam == 1
    # lambda_j = C(23-j, 4-j) / C(7-j, 4-j)
    assert cert.lambdas == tuple(comb(23 - j, 4 - j) // comb(7 - j, 4 - j) for j in range(5))
    assert cert.intersection_numbers == (3, 1)
    assert cert.quasi_symmetric and (cert.s1, cert.s2) == (3, 1)


def test_heptads_not_five_design(heptads):
    with pytest.raises(NotADesign):
        certify_design(heptads, 5)


def test_sts15(sts15):
    assert (sts15.d, sts15.k, sts15.b) == (15, 3, 35)
    cert = certify_design(sts15, 2)
    assert cert.lambdas == (35, 7, 1)
    assert cert.intersection_numbers == (1, 0)
    assert t_counts(sts15, 2) == {1}
    assert t_counts(sts15, 3) == {0, 1}


def test_qs_6_3_2():
    bs = qs_6_3_2()
    cert = certify_design(bs, 2)
    assert (bs.b, cert.r, cert.lam) == (10, 5, 2)
    assert cert.intersection_numbers == (2, 1)
    # lambda_3 would be 1/2
    with pytest.raises(NotADesign):
        certify_design(bs, 3)


def test_pair_blockset():
    bs = pair_blockset(7)
    assert bs.b == 21
    assert certify_design(bs, 2).lam == 1
    assert intersection_numbers(bs) == (1, 0)


def test_derived_and_residual(heptads):
    der = derived_design(heptads, 0)
    res = residual_design(heptads, 0)
    assert der.b + res.b == heptads.b
    # derived: 3-(22, 6, 1); residual: 3-(22, 7, lambda_3 - lambda_4)
    dc = certify_design(der, 3)
    assert (der.d, der.k, dc.lam, dc.b) == (22, 6, 1, 77)
    rc = certify_design(res, 3)
    assert (res.d, res.k, rc.lam, rc.b) == (22, 7, 4, 176)
    with pytest.raises(PointOutOfRange):
        derived_design(heptads, 23)


def test_block_graph(heptads):
    srg = block_graph_srg(heptads)
    # 140 heptads meet a given one in 3 points, 112 in 1
    assert (srg.v, srg.degree) == (253, 140)
    assert srg.matches_graph and srg.connected
    assert (srg.v - 1 - srg.degree) == 112


def test_block_graph_needs_two_intersections():
    # all triples of 6 points meet in 0, 1 or 2 points
    with pytest.raises(NotQuasiSymmetric):
        block_graph_srg(BlockSet.from_blocks(6, list(combinations(range(6), 3))))


def test_block_graph_small_designs(sts15):
    for bs in (qs_6_3_2(), sts15, pair_blockset(7)):
        assert block_graph_srg(bs).matches_graph


def _f(bs):
    c = certify_design(bs, 2)
    return calderbank_f(bs.d, bs.k, bs.k - c.s1, bs.k - c.s2)


def test_calderbank_f_zero_on_three_designs(heptads):
    # f vanishes exactly on 3-designs
    assert _f(heptads) == 0
    assert calderbank_f(23, 7, 4, 6) == 0
    # pairs are a 3-design with lambda_3 = 0
    pairs = pair_blockset(7)
    assert certify_design(pairs, 3).lam == 0
    assert _f(pairs) == 0


def test_calderbank_f_positive_otherwise(sts15):
    for bs in (qs_6_3_2(), sts15):
        with pytest.raises(NotADesign):
            certify_design(bs, 3)
        assert _f(bs) > 0


def test_calderbank_mod_a():
    # d=21 row: k=8, lambda=14, r=40, intersections 4, 2
    assert calderbank_modA(21, 8, 14, 40, (4, 2)) is False
    assert calderbank_modA(23, 7, 21, 77, (3, 1)) is True
    with pytest.raises(NotApplicable):
        calderbank_modA(118, 43, 602, 1677, (18, 13))


def test_complement_blockset():
    bs = qs_6_3_2()
    comp = complement_blockset(bs)
    assert comp.k == 3 and comp.b == bs.b
    assert complement_blockset(comp).blocks == bs.blocks


def test_blockset_validation():
    with pytest.raises(DesignError):
        BlockSet.from_blocks(5, [(0, 1), (1, 0)])
    with pytest.raises(PointOutOfRange):
        BlockSet.from_blocks(3, [(0, 3)])
    with pytest.raises(DesignError):
        BlockSet.from_blocks(5, [(0, 1), (1, 2, 3)])


def test_text_round_trip(heptads, tmp_path):
    text = format_blockset(heptads)
    assert text.splitlines()[0] == "23 7"
    assert parse_blockset(text) == heptads
    assert format_blockset(parse_blockset(text)) == text
    path = tmp_path / "h.txt"
    write_blockset(heptads, path)
    assert path.read_text() == text
    assert read_blockset(path) == heptads


def test_blocks_sorted(heptads):
    assert list(heptads.blocks) == sorted(heptads.blocks)
    assert all(list(b) == sorted(b) for b in heptads.blocks)
