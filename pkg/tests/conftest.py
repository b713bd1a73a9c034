from __future__ import annotations

import pytest

from eqlab.designkit import golay_heptads, pair_blockset, pg32_sts15, qs_6_3_2
from eqlab.e8bridge import build_basis_coords, eigenspace_split, find_involution, project_to_w
from eqlab.linesys import construct_augmented, find_max_incoherent
from eqlab.twograph import from_lines, regularity


@pytest.fixture(scope="session")
def heptads():
    return golay_heptads()


@pytest.fixture(scope="session")
def lines276(heptads):
    ls, gamma = construct_augmented(heptads)
    return ls.certify(), gamma


@pytest.fixture(scope="session")
def lines28():
    ls, gamma = construct_augmented(pair_blockset(7))
    return ls.certify(), gamma


@pytest.fixture(scope="session")
def lines16():
    ls, gamma = construct_augmented(qs_6_3_2())
    return ls.certify(), gamma


@pytest.fixture(scope="session")
def saturated(lines16, lines28, lines276):
    """The three systems meeting the incoherence bound, keyed by d."""
    out = {}
    for ls, _ in (lines16, lines28, lines276):
        wit = find_max_incoherent(ls)
        out[ls.span_dim] = (ls, list(wit.lines), regularity(from_lines(ls)))
    return out


@pytest.fixture(scope="session")
def sts15():
    return pg32_sts15()


@pytest.fixture(scope="session")
def e8_setup(heptads):
    sys = build_basis_coords(heptads)
    x = find_involution(heptads)
    fixed, moved = eigenspace_split(sys, x)
    roots = [project_to_w(sys, x, i) for i in moved]
    return sys, x, fixed, moved, roots
