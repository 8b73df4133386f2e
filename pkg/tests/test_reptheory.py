from math import factorial, prod

import pytest

from skeinlab import reptheory as R


def _hook_dim(lam):
    n = sum(lam)
    conj = [sum(1 for p in lam if p > j) for j in range(lam[0])]
    hooks = prod(lam[i] - j + conj[j] - i - 1 for i in range(len(lam)) for j in range(lam[i]))
    return factorial(n) // hooks


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_degree_matches_hook_length(n):
    for lam in R.partitions(n):
        assert R.mn_character(lam, (1,) * n) == _hook_dim(lam)


def test_known_s4_column():
    # chi on a 4-cycle
    vals = {lam: R.mn_character(lam, (4,)) for lam in R.partitions(4)}
    assert vals == {(4,): 1, (3, 1): -1, (2, 2): 0, (2, 1, 1): 1, (1, 1, 1, 1): -1}


def test_class_sizes_by_enumeration():
    assert sum(R.class_size(mu) for mu in R.partitions(6)) == 720
    assert R.brute_force_class_sizes((5,))


def test_traces_and_decomposition():
    assert R.matching_action_trace((1,) * 6) == 15
    assert R.matching_action_trace((2, 1, 1, 1, 1)) == 3
    assert R.matching_action_trace((6,)) == 1
    assert R.matching_action_trace((6,), shift=2) == 1
    mult = R.decompose_matching_rep(6)
    assert {p: m for p, m in mult.items() if m} == {(6,): 1, (4, 2): 1, (2, 2, 2): 1}
    assert len(mult) == 11


def test_orthogonality():
    assert R.orthogonality_holds(6)
    assert R.orthogonality_holds(4)


def test_size_mismatch():
    with pytest.raises(R.SizeMismatch):
        R.mn_character((3,), (2,))
