import itertools

import pytest

from skeinlab import diagram as dg
from skeinlab.ring import as_ratfunc, const, var

d = var("d")


def _double_factorial(n):
    out = 1
    for k in range(n, 0, -2):
        out *= k
    return out


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_box_basis_counts_all_matchings(k):
    assert len(dg.box_basis(k)) == _double_factorial(2 * k - 1)


def test_circle_and_identity_composition():
    E = dg.cupcap()
    sq = dg.compose(E, E, d)
    assert sq == dg.DiagramVector.of(E, d)
    I2 = dg.identity(2)
    assert dg.compose(I2, E, d) == dg.DiagramVector.of(E)


def test_virtual_is_an_involution():
    V = dg.virtual()
    assert dg.compose(V, V, d) == dg.DiagramVector.of(dg.identity(2))


def test_gram_matches_loop_count_oracle():
    # <x, y> = d^(loops of x glued to reflected y); check the 4-point case by hand
    basis = dg.box_basis(2)
    G = dg.gram_matrix(basis, d)
    diag = [G[i][i] for i in range(3)]
    assert all(g == d ** 2 for g in diag)
    off = {G[i][j] for i in range(3) for j in range(3) if i != j}
    assert off == {d}


def test_gram_rank_drops_at_special_values():
    basis = dg.box_basis(2)
    assert dg.rank(dg.gram_matrix(basis, d)) == 3
    # det = (d-1)(d+2)d^3 -> rank drops at d = 1, -2
    assert dg.rank(dg.gram_matrix(basis, 1)) == 1
    assert dg.rank(dg.gram_matrix(basis, -2)) == 2
    null = dg.negligible_vectors(basis, -2)
    assert len(null) == 1 and len(null[0].terms) == 3


def test_antisymmetrizer_is_idempotent():
    w = dg.antisymmetrizer(3)
    assert dg.compose(w, w, d) == w


def test_rotation_has_full_order():
    for n in (4, 6):
        assert dg.eigen_check(n)


def test_cap_and_trace():
    assert dg.close_trace(dg.DiagramVector.of(dg.identity(2)), d) == d ** 2
    capped = dg.cap(dg.DiagramVector.of(dg.cupcap()), "top", 1, d)
    assert list(capped.terms.values()) == [d]


def test_boundary_mismatch():
    with pytest.raises(dg.BoundaryMismatch):
        dg.compose(dg.identity(2), dg.identity(3), d)


def test_json_round_trip():
    v = dg.antisymmetrizer(2)
    assert dg.DiagramVector.from_json(v.to_json()) == v


@pytest.mark.parametrize("k", [2, 3])
def test_right_and_left_closures_agree(k):
    for x in dg.box_basis(k):
        for y in dg.box_basis(k):
            prod = dg.compose(x, y, d)
            assert dg.close_trace(prod, d) == dg.close_trace_left(prod, d)
