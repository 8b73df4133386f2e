import pytest

from skeinlab import classify as C
from skeinlab.ring import var

x, y, z, d, a = (var(s) for s in "xyzda")


def test_r2_system():
    got = C.generate_constraints(["R2"], C.unoriented_ansatz()).all()
    want = {C.normalize_poly(p) for p in (x * y + z ** 2 - 1, x * z + y * z, x ** 2 + y ** 2 + d * x * y + y * z + x * z)}
    assert got == want


def test_normalize_keeps_positive_monomial_factors():
    # a z = 0 branch must survive normalisation
    assert C.normalize_poly(z * x) == C.normalize_poly(x * z)
    assert C.normalize_poly(x ** -2 * (x + 1)) == C.normalize_poly(x + 1)
    assert C.normalize_poly(3 * x * z).terms == C.normalize_poly(x * z).terms
    assert C.normalize_poly(0) is None


def test_oriented_products():
    x1, z1, x2, z2 = (var(s) for s in ("x1", "z1", "x2", "z2"))
    got = C.generate_constraints(C.ORIENTED_SUITE, C.oriented_ansatz()).all()
    assert C.normalize_poly(x1 * x2 + z1 * z2 - 1) in got
    assert C.normalize_poly(x1 * z2 + x2 * z1) in got


@pytest.mark.parametrize("name", sorted(C.families()))
def test_families_have_zero_residuals(name):
    rep = C.verify_family(C.families()[name])
    assert rep.ok, rep.residuals


def test_a_wrong_family_is_caught():
    bad = C.SolutionFamily("bad", {"x": var("A"), "y": var("A"), "z": 0, "d": -(var("A") ** 2) - var("A") ** -2, "a": 1})
    assert not C.verify_family(bad).ok


def test_kauffman_capping():
    plus, minus = C.kauffman_capping_constraints()
    assert (plus - (z * (1 + d) - a ** -1 - a)).is_zero()
    assert (minus - (z * (1 - d) - a ** -1 + a)).is_zero()


def test_oriented_branch_needs_d_pm1():
    split = C.oriented_case_split()
    assert not split["x1_nonzero_generic_d"].ok
    assert split["x1_nonzero_d=1"].ok and split["x1_nonzero_d=-1"].ok


def test_dependence_lemmas():
    rep = C.check_dependence_lemmas()
    assert rep["a_fully_flat"] and rep["b_forces"] and rep["b_w_minus_one"]


def test_wedge3():
    w = C.wedge3_checks()
    assert (w["rank_symbolic"], w["rank_d2"], w["null_dim_d2"]) == (15, 10, 5)
    assert w["wedge3_pairings_zero"]
    assert not w["rotation_eigenvalue_minus_one"]
    assert w["rotation_eigenvalue_minus_one_mod_null"]


def test_six_box_caps():
    s6 = C.s6_quotient_argument()
    assert s6["trivial_vector_fixed"] and s6["dim6_cap_matches"]
    # every matching of the 4-box appears with coefficient d + 4
    assert set(s6["cap_of_trivial_vector"].terms.values()) == {d + 4}


def test_forbidden_move():
    fams = C.families()
    assert C.forbidden_move_status(fams["virtual_TLJ"]) == "violated"
    assert C.forbidden_move_status(fams["Rep_O2"]) == "satisfied"
    assert C.forbidden_move_status(fams["fully_flat_plus"]) == "satisfied"


def test_report_shape():
    rep = C.report("unoriented")
    assert rep["relations"] == list(C.UNORIENTED_SUITE)
    assert all(f["ok"] for f in rep["families"].values())
    with pytest.raises(C.UnsupportedRelation):
        C.report("sideways")
