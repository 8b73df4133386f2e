import pytest

from skeinlab import spin as S
from skeinlab.ring import as_ratfunc

N = 4
LIB = S.tangles()


def _random_matrix(seed):
    import random

    r = random.Random(seed)
    return [[r.randint(-3, 3) for _ in range(N)] for _ in range(N)]


def _as_func(M):
    return S.from_matrix([[as_ratfunc(v) for v in row] for row in M])


def test_worked_tangle():
    out = S.action1(LIB["worked"], [S.LoopFunctional.delta(N, (0, 2))])
    assert out.values == {(0, 2, k): as_ratfunc(1) for k in range(N)}


def test_circles():
    assert S.action1(LIB["circle_shaded_outside"], [], n=N).values == {(): as_ratfunc(N)}
    assert all(v == 1 for v in S.action1(LIB["circle_unshaded_outside"], [], n=N).values.values())


def test_matrix_tangles():
    I = S.twobox_matrix(S.action1(LIB["cupcap"], [], n=N))
    J = S.twobox_matrix(S.action1(LIB["identity"], [], n=N))
    assert I == [[as_ratfunc(int(i == j)) for j in range(N)] for i in range(N)]
    assert J == [[as_ratfunc(1)] * N for _ in range(N)]


def test_stack_hadamard_transpose_against_numpy_style_oracle():
    A, B = _random_matrix(1), _random_matrix(2)
    fa, fb = _as_func(A), _as_func(B)
    ra = [[as_ratfunc(v) for v in row] for row in A]
    rb = [[as_ratfunc(v) for v in row] for row in B]
    assert S.twobox_matrix(S.action1(LIB["stack"], [fa, fb])) == S.matrix_product(ra, rb)
    assert S.twobox_matrix(S.action1(LIB["hadamard"], [fa, fb])) == S.hadamard_product(ra, rb)
    assert S.twobox_matrix(S.action1(LIB["transpose"], [fa])) == S.transpose(ra)


def test_circle_insertions():
    f = _as_func(_random_matrix(3))
    assert S.action1(LIB["insert_circle"], [f]).values == {k: v * N for k, v in f.values.items()}
    assert S.action1(LIB["insert_shaded_circle"], [f]).values == f.values


def test_composition_matches_sequential_action():
    A, B = _as_func(_random_matrix(4)), _as_func(_random_matrix(5))
    inner = LIB["transpose"]
    composed = S.compose_tangles(LIB["stack"], 0, inner)
    direct = S.action1(composed, [A, B])
    staged = S.action1(LIB["stack"], [S.action1(inner, [A]), B])
    assert direct.values == staged.values


def test_perron():
    for n in range(1, 9):
        p = S.perron(n)
        assert p.eigenvalue ** 2 == n
        assert p.vector[1:] == (1,) * n
    assert S.perron(4).is_rational() and not S.perron(5).is_rational()
    assert sum(S.star_adjacency(5).row(0)) == 5


def test_errors_and_json():
    with pytest.raises(S.ArityMismatch):
        S.action1(LIB["worked"], [S.LoopFunctional.delta(N, (0,))])
    with pytest.raises(S.ArityMismatch):
        S.LoopFunctional(2, 2, {(0, 5): 1})
    with pytest.raises(S.ShadingInconsistent):
        S.ShadedTangleSpec({"u": False, "v": False}, (("u", "v"),), (), ("u",))
    f = S.LoopFunctional.delta(3, (1, 2))
    assert S.LoopFunctional.from_json(f.to_json()) == f
