import random
from fractions import Fraction

import networkx as nx
import pytest

from skeinlab import diagram as dg
from skeinlab import trivalent as T
from skeinlab.ring import PoleEncountered, substitute, var

t = var("t")
P = T.TrivalentParams()
THETA = T.TrivalentGraph(0, 0, 2, ((0, 1), (0, 1), (0, 1)))


def test_small_graphs():
    assert T.evaluate_closed(THETA) == t - 1
    assert T.evaluate_closed(T.graph_from_nx(nx.complete_graph(4))) == (t - 1) * (t - 3) / (t - 2)


def test_oracle_scalars_confirm_triangle():
    for n in (4, 5, 6, 7):
        s = T.oracle_scalars(n)
        assert s["theta"] == n - 1
        assert s["triangle"] == Fraction(n - 3, n - 2)


@pytest.mark.parametrize("name", sorted(T.corpus(0)))
def test_corpus_against_oracle(name):
    g = T.corpus(0)[name]
    val = T.evaluate_closed(g)
    for n in (4, 5, 6):
        assert substitute(val, {"t": n}).constant_value() == T.tensor_oracle(n, g)


def test_petersen_schedules_agree():
    g = T.corpus(0)["petersen"]
    ref = T.evaluate_closed(g)
    for s in range(10):
        assert T.evaluate_closed(g, rng=random.Random(s)) == ref


def test_canonical_form_is_label_free():
    G = nx.petersen_graph()
    perm = dict(zip(G.nodes(), random.Random(1).sample(list(G.nodes()), 10)))
    H = nx.relabel_nodes(G, perm)
    assert T.graph_from_nx(G).canonical() == T.graph_from_nx(H).canonical()


def test_spanning_set_sizes():
    assert [len(T.spanning_set(k, 0)) for k in range(7)] == [1, 0, 1, 1, 4, 11, 41]


def test_IH_relation():
    rep = T.verify_IH_equivalence()
    assert rep["minus_relation_holds"]
    assert not rep["plus_relation_holds"]
    assert rep["stack_with_H_is_exact"] and rep["square_rotation_invariant"]
    assert rep["difference_with_rotation_vanishes"]
    assert T.verify_IH_equivalence(2)["status"] == "Undefined"


def test_four_box_basis_is_independent():
    b = list(T.four_box_basis().values())
    G = [[T.pair(x, y, P) for y in b] for x in b]
    assert dg.rank(G) == 4


def test_braiding_with_H_tree():
    rep = T.verify_braiding(T.so3q_crossing(tree="H"))
    assert rep["ok"]
    assert rep["twist"] == "q^-4" and rep["twist_left"] == "q^4"


def test_braiding_with_I_tree_fails():
    assert not T.verify_braiding(T.so3q_crossing(tree="I"))["ok"]


def test_perturbed_crossing_fails():
    assert not T.verify_braiding(T.so3q_crossing(eps="1/1000", tree="H"))["ok"]


def test_errors():
    with pytest.raises(PoleEncountered):
        T.TrivalentParams(2)
    with pytest.raises(T.NonCubicGraph):
        T.TrivalentGraph(0, 0, 2, ((0, 1),))
    with pytest.raises(T.NonClosedGraph):
        T.evaluate_closed(T.i_graph())
    with pytest.raises(T.BoundaryTooLarge):
        T.spanning_set(4, 4)


def test_json_round_trip():
    g = T.graph_from_nx(nx.complete_graph(4))
    assert T.TrivalentGraph.from_json(g.to_json()) == g
