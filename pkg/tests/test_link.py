import random

import pytest

from skeinlab import link as L
from skeinlab.ring import parse, var

A, a = var("A"), var("a")

RIGHT_TREFOIL = "O1+U2+O3+U1+O2+U3+"
VIRTUAL_TREFOIL = "O1-O2-U1-U2-"


def test_unknot_and_free_loops():
    assert L.bracket(L.parse_gauss("")).normalized == 1
    two = L.parse_gauss(";")
    assert L.bracket(two).normalized == -(A ** 2) - A ** -2


def test_trefoil_mirror_pair():
    # mirror convention: all-positive trefoil carries the positive exponents
    right = L.bracket(L.parse_gauss(RIGHT_TREFOIL)).normalized
    left = L.bracket(L.parse_gauss(RIGHT_TREFOIL.replace("+", "-"))).normalized
    assert right == parse("-A^16 + A^12 + A^4")
    assert left == parse("-A^-16 + A^-12 + A^-4")


def test_virtual_trefoil():
    res = L.bracket(L.parse_gauss(VIRTUAL_TREFOIL))
    assert res.writhe == -2
    assert res.normalized == parse("A^-4 + A^-6 - A^-10")


def test_pd_trefoil_matches_gauss_up_to_mirror():
    pd = L.parse_pd("X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]")
    assert abs(L.writhe(pd)) == 3
    val = L.bracket(pd).normalized
    assert val in (parse("-A^16 + A^12 + A^4"), parse("-A^-16 + A^-12 + A^-4"))


def test_kink_factors():
    base = L.parse_gauss("")
    raw0 = L.bracket(base).raw
    for s in (1, -1):
        site = next(x for x in L.move_sites(base, "R1+") if x[2] == s)
        kinked = L.apply_move(base, site)
        assert L.writhe(kinked) == s
        assert L.bracket(kinked).raw == raw0 * -(A ** (-3 * s))
        assert L.o2_invariant(kinked).raw == L.o2_invariant(base).raw * a ** s


def test_o2_raw_is_twice_a_to_the_writhe():
    rng = random.Random(3)
    for _ in range(8):
        res = L.o2_invariant(L.parse_gauss(L.random_gauss_code(rng.randint(1, 5), rng)))
        assert res.raw == 2 * a ** res.writhe
        assert res.normalized == 1


def test_random_moves_keep_normalized_bracket():
    rng = random.Random(11)
    D = L.parse_gauss(L.random_gauss_code(3, rng))
    ref = L.bracket(D).normalized
    for _ in range(15):
        D = L.apply_move(D, L.random_move(D, rng))
        assert L.bracket(D).normalized == ref


@pytest.mark.parametrize("bad", ["O1+", "O1+U1-", "X1+U1+", "O1+O1+"])
def test_bad_gauss_codes(bad):
    with pytest.raises((L.ParseError, L.InconsistentCode)):
        L.parse_gauss(bad)


def test_bad_pd_codes():
    with pytest.raises(L.ParseError):
        L.parse_pd("hello")
    with pytest.raises(L.InconsistentCode):
        L.parse_pd("X[1,2,3,4]")


def test_inapplicable_move():
    with pytest.raises(L.InapplicableMove):
        L.apply_move(L.parse_gauss(""), ("R1-", 0, 0))
