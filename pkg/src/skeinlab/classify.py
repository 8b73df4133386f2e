"""Constraint systems for small quotients of virtual tangle planar algebras.

A crossing is written in the flat 4-box basis as
``over = x*identity + y*cupcap + z*virtual`` and the under-crossing is its
one-click rotation.  Relations are expanded inside the exact box spaces of
:mod:`skeinlab.diagram` and their coefficients become polynomial constraints.

Twist convention: capping the over-crossing on the top gives ``a`` times the
capped identity; capping it on the left gives ``a^-1`` times a strand.

Relations that live in the six-box space are tested in the non-degenerate
quotient: their constraints are the Gram pairings of the difference vector
with all fifteen matchings, which is equivalent to exact vanishing whenever
the Gram matrix is invertible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import diagram as dg
from .diagram import DiagramVector, Matching, box_basis, compose, cupcap, identity, rotate, tensor, virtual
from .ring import LaurentPoly, PoleEncountered, RatFunc, as_ratfunc, const, substitute, var

__all__ = [
    "UnsupportedRelation",
    "CrossingAnsatz",
    "ConstraintSystem",
    "SolutionFamily",
    "UNORIENTED_SUITE",
    "ORIENTED_SUITE",
    "unoriented_ansatz",
    "oriented_ansatz",
    "expand_relation",
    "generate_constraints",
    "normalize_poly",
    "verify_family",
    "families",
    "check_dependence_lemmas",
    "wedge3_checks",
    "forbidden_move_status",
    "s6_quotient_argument",
    "kauffman_capping_constraints",
    "sixbox_system",
    "oriented_case_split",
]


class UnsupportedRelation(ValueError):
    pass


D = var("d")
A_TW = var("a")


@dataclass(frozen=True)
class CrossingAnsatz:
    """Over- and under-crossing as vectors in the flat 4-box space."""

    over: DiagramVector
    under: DiagramVector
    d: RatFunc = D
    a: RatFunc = A_TW
    oriented: bool = False
    extra: tuple = ()  # (name, DiagramVector) pairs for additional relations


def _cross(x, y, z) -> DiagramVector:
    return (
        DiagramVector.of(identity(2), x)
        + DiagramVector.of(cupcap(), y)
        + DiagramVector.of(virtual(), z)
    )


def unoriented_ansatz(x="x", y="y", z="z", d="d", a="a") -> CrossingAnsatz:
    over = _cross(as_ratfunc(x), as_ratfunc(y), as_ratfunc(z))
    return CrossingAnsatz(over, rotate(over), as_ratfunc(d), as_ratfunc(a))


def oriented_ansatz(x1="x1", z1="z1", x2="x2", z2="z2", d="d", a="a") -> CrossingAnsatz:
    """Both strands oriented upward: only identity and virtual are admissible."""
    over = _cross(as_ratfunc(x1), const(0), as_ratfunc(z1))
    under = _cross(as_ratfunc(x2), const(0), as_ratfunc(z2))
    return CrossingAnsatz(over, under, as_ratfunc(d), as_ratfunc(a), oriented=True)


def _chain(d, *vs) -> DiagramVector:
    out = vs[0]
    for v in vs[1:]:
        out = compose(out, v, d)
    return out


def _s1(c):
    return tensor(c, identity(1))


def _s2(c):
    return tensor(identity(1), c)


V = DiagramVector.of(virtual())
ID2 = DiagramVector.of(identity(2))
E = DiagramVector.of(cupcap())


def expand_relation(relation_id: str, ans: CrossingAnsatz, **params) -> DiagramVector:
    """Difference of the two sides of a relation, as an exact box-space vector."""
    d = ans.d
    over, under = ans.over, ans.under
    if relation_id == "R2":
        return compose(over, under, d) - ID2
    if relation_id == "R2b":
        return compose(under, over, d) - ID2
    if relation_id == "R3":
        return _chain(d, _s1(over), _s2(over), _s1(over)) - _chain(d, _s2(over), _s1(over), _s2(over))
    if relation_id == "capTop":
        return dg.cap(over, "top", 1, d) - dg.cap(ID2, "top", 1, d).scale(ans.a)
    # oriented kinks: over caps to a, under to a^-1
    if relation_id == "capLeft":
        tw = ans.a if ans.oriented else ans.a ** -1
        return dg.cap(over, "left", d=d) - DiagramVector.of(identity(1), tw)
    if relation_id == "capLeftUnder":
        tw = ans.a ** -1 if ans.oriented else ans.a
        return dg.cap(under, "left", d=d) - DiagramVector.of(identity(1), tw)
    if relation_id == "vR1":
        return dg.cap(V, "top", 1, d) - dg.cap(ID2, "top", 1, d)
    if relation_id == "vR2":
        return compose(V, V, d) - ID2
    if relation_id == "vR3":
        return _chain(d, _s1(V), _s2(V), _s1(V)) - _chain(d, _s2(V), _s1(V), _s2(V))
    if relation_id == "mixedR3":
        return _chain(d, _s1(V), _s2(over), _s1(V)) - _chain(d, _s2(V), _s1(over), _s2(V))
    if relation_id == "forbidden":
        return _chain(d, _s1(V), _s2(over), _s1(over)) - _chain(d, _s2(over), _s1(over), _s2(V))
    if relation_id == "KauffmanSum":
        eps = params.get("eps", 1)
        zk = as_ratfunc(params.get("zk", "w"))
        return over + under.scale(eps) - (ID2 + E.scale(eps)).scale(zk)
    if relation_id == "virtualDependence":
        w = as_ratfunc(params.get("w", "w"))
        return V - (ID2 + E).scale(w)
    raise UnsupportedRelation(relation_id)


UNORIENTED_SUITE = ("R2", "R2b", "capTop", "capLeft", "R3", "vR1", "vR2", "vR3", "mixedR3")
ORIENTED_SUITE = ("R2", "R2b", "capLeft", "capLeftUnder", "R3", "vR2", "vR3", "mixedR3")
SIX_BOX = ("R3", "vR3", "mixedR3", "forbidden")
# these hold only modulo negligibles in the Kauffman case at d = -2
_V4_QUOTIENT = ("KauffmanSum", "virtualDependence")


def normalize_poly(f) -> LaurentPoly | None:
    """Numerator cleared of negative exponents, content removed, leading coefficient 1."""
    f = as_ratfunc(f)
    if f.is_zero():
        return None
    p = f.num
    p = p.shift(tuple(-min(k, 0) for k in p.min_exponents()))
    _, lc = p.leading()
    return LaurentPoly._make(p.variables, {e: c / lc for e, c in p.terms.items()})


@dataclass
class ConstraintSystem:
    relation_ids: tuple
    polynomials: dict = field(default_factory=dict)  # relation id -> list of LaurentPoly

    def all(self) -> set:
        return {p for ps in self.polynomials.values() for p in ps}

    def as_strings(self) -> dict:
        return {k: sorted(str(p) for p in v) for k, v in self.polynomials.items()}


def _pairings(vec: DiagramVector, d) -> list:
    basis = box_basis(vec.bottom, vec.top) if vec.bottom == vec.top else None
    if basis is None:
        raise UnsupportedRelation("pairings need a square box")
    out = []
    for b in basis:
        total = const(0)
        for mt, c in vec.terms.items():
            total = total + c * dg.inner_product(b, mt, d)
        out.append(total)
    return out


def relation_constraints(relation_id: str, ans: CrossingAnsatz, quotient: bool = False, **params) -> list:
    """Raw coefficients, or Gram pairings with every matching when ``quotient``."""
    vec = expand_relation(relation_id, ans, **params)
    coeffs = _pairings(vec, ans.d) if quotient else list(vec.terms.values())
    out = []
    for c in coeffs:
        p = normalize_poly(c)
        if p is not None and p not in out:
            out.append(p)
    return out


def generate_constraints(relation_ids: Iterable[str], ans: CrossingAnsatz, **params) -> ConstraintSystem:
    ids = tuple(relation_ids)
    sys = ConstraintSystem(ids)
    for rid in ids:
        sys.polynomials[rid] = relation_constraints(rid, ans, **params)
    return sys


@dataclass(frozen=True)
class SolutionFamily:
    name: str
    bindings: Mapping  # variable -> value (anything as_ratfunc accepts)
    suite: tuple = UNORIENTED_SUITE
    oriented: bool = False
    params: tuple = ()  # extra relation parameters, e.g. (("zk", ...),)
    extra_relations: tuple = ()

    def ansatz(self) -> CrossingAnsatz:
        b = {k: as_ratfunc(v) for k, v in self.bindings.items()}
        if self.oriented:
            return oriented_ansatz(b["x1"], b["z1"], b["x2"], b["z2"], b["d"], b["a"])
        return unoriented_ansatz(b["x"], b["y"], b["z"], b["d"], b["a"])


@dataclass
class FamilyReport:
    name: str
    ok: bool
    residuals: dict  # relation id -> list of nonzero residual strings

    def as_dict(self):
        return {"family": self.name, "ok": self.ok, "residuals": self.residuals}


def verify_family(family: SolutionFamily, relation_ids: Iterable[str] | None = None) -> FamilyReport:
    """Expand every relation at the family's parameters; report nonzero residuals.

    Six-box relations (and the Kauffman-case relations) are judged in the
    non-degenerate quotient, since e.g. R3 for Rep(O(2)) only holds once the
    d = 2 negligibles are killed.
    """
    ans = family.ansatz()
    ids = tuple(relation_ids) if relation_ids is not None else family.suite + family.extra_relations
    params = dict(family.params)
    residuals = {}
    for rid in ids:
        try:
            polys = relation_constraints(rid, ans, quotient=rid in SIX_BOX or rid in _V4_QUOTIENT, **params)
        except PoleEncountered as exc:
            residuals[rid] = [f"pole: {exc}"]
            continue
        if polys:
            residuals[rid] = [str(p) for p in polys]
    return FamilyReport(family.name, not residuals, residuals)


def verify_family_symbolic(family: SolutionFamily, system: ConstraintSystem) -> FamilyReport:
    """Substitute the family into an already generated symbolic system."""
    residuals = {}
    for rid, polys in system.polynomials.items():
        bad = []
        for p in polys:
            r = substitute(RatFunc(p), family.bindings)
            if not r.is_zero():
                bad.append(str(r))
        if bad:
            residuals[rid] = bad
    return FamilyReport(family.name, not residuals, residuals)


def families() -> dict:
    A = var("A")
    a = var("a")
    t = var("t")
    x_o2 = (a ** -1 - a) / 2
    out = {
        "virtual_TLJ": SolutionFamily(
            "virtual_TLJ", {"x": A, "y": A ** -1, "z": 0, "d": -(A ** 2) - A ** -2, "a": -(A ** -3)}
        ),
        "Rep_O2": SolutionFamily("Rep_O2", {"x": x_o2, "y": -x_o2, "z": (a ** -1 + a) / 2, "d": 2, "a": a}),
        "fully_flat_plus": SolutionFamily("fully_flat_plus", {"x": 0, "y": 0, "z": 1, "d": "d", "a": 1}),
        "fully_flat_minus": SolutionFamily("fully_flat_minus", {"x": 0, "y": 0, "z": -1, "d": "d", "a": -1}),
        "GL_t_a": SolutionFamily(
            "GL_t_a", {"x1": 0, "z1": a, "x2": 0, "z2": a ** -1, "d": t, "a": a},
            suite=ORIENTED_SUITE, oriented=True,
        ),
    }
    for eps in (1, -1):
        # over = eps*virtual with virtual = -(id + cupcap) in the quotient at d = -2
        name = f"Kauffman_d-2_a{'+' if eps > 0 else '-'}1"
        out[name] = SolutionFamily(
            name,
            {"x": 0, "y": 0, "z": eps, "d": -2, "a": eps},
            params=(("eps", 1), ("zk", -2 * eps), ("w", -1)),
            extra_relations=("KauffmanSum", "virtualDependence"),
        )
    return out


def _quotient_holds(vec: DiagramVector, d) -> bool:
    return all(p.is_zero() for p in _pairings(vec, d))


def kauffman_capping_constraints(over_twist="a^-1", under_twist="a") -> list:
    """Cap ``over +- under = z(identity +- cupcap)`` on the bottom.

    ``over_twist``/``under_twist`` are the scalars produced by capping each
    crossing; the identity caps to one strand and the cupcap to ``d`` strands.
    Returns the two constraints ``[+ case, - case]``.
    """
    ot, ut = as_ratfunc(over_twist), as_ratfunc(under_twist)
    z = var("z")
    out = []
    for eps in (1, -1):
        rhs = dg.cap(ID2 + E.scale(eps), "bottom", 1, D).scale(z)
        cup = Matching(0, 2, ((1, 2),))
        lhs_scalar = ot + ut * eps
        out.append(rhs.coefficient(cup) - lhs_scalar)
    return out


def sixbox_system() -> ConstraintSystem:
    """R2 for ``over = x*id - x*cupcap + z*virtual``."""
    return generate_constraints(["R2"], unoriented_ansatz("x", "-x", "z"))


def oriented_case_split() -> dict:
    """Substitute both branches of the oriented case analysis."""
    a, d = var("a"), var("d")
    branch = {"x1": a / d, "z1": 0, "x2": a ** -1 / d, "z2": 0, "d": d, "a": a}
    sys = generate_constraints(ORIENTED_SUITE, oriented_ansatz())
    out = {}
    generic = verify_family_symbolic(SolutionFamily("x1!=0", branch, ORIENTED_SUITE, True), sys)
    out["x1_nonzero_generic_d"] = generic
    for dv in (1, -1):
        b = dict(branch, d=dv)
        b["x1"] = a / dv
        b["x2"] = a ** -1 / dv
        out[f"x1_nonzero_d={dv}"] = verify_family_symbolic(SolutionFamily(f"d={dv}", b, ORIENTED_SUITE, True), sys)
    return out


def check_dependence_lemmas() -> dict:
    z, w = var("z"), var("w")
    d = D
    report = {}
    # (a) identity = w*cupcap; stack the relation under each crossing
    rel = ID2 - E.scale(w)
    ans = unoriented_ansatz()
    v_side = compose(rel, V, d)
    o_side = compose(rel, ans.over, d)
    report["a_virtual"] = v_side
    report["a_over"] = o_side
    # each side is "crossing - scalar*cupcap": both crossings are multiples of cupcap
    report["a_fully_flat"] = all(
        set((side - crossing).terms) <= {cupcap()}
        for side, crossing in ((v_side, V), (o_side, ans.over))
    )
    # (b) virtual = w*(id + cupcap)
    lhs = compose(V, V, d)
    rhs = compose((ID2 + E).scale(w), (ID2 + E).scale(w), d)
    diff = lhs - rhs
    report["b_square"] = diff
    id_c, e_c = diff.coefficient(identity(2)), diff.coefficient(cupcap())
    report["b_constraints"] = [normalize_poly(id_c), normalize_poly(e_c)]
    at = {"w": 1, "d": -2}
    atm = {"w": -1, "d": -2}
    report["b_forces"] = (
        substitute(id_c, at).is_zero() and substitute(e_c, at).is_zero()
        and substitute(id_c, atm).is_zero() and substitute(e_c, atm).is_zero()
    )
    capped = dg.cap(V - (ID2 + E).scale(w), "top", 1, d)
    cup = Matching(2, 0, ((1, 2),))
    cap_c = substitute(capped.coefficient(cup), {"d": -2})
    report["b_cap"] = cap_c  # 1 + w, so w = -1
    report["b_w_minus_one"] = substitute(cap_c, {"w": -1}).is_zero() and not substitute(cap_c, {"w": 1}).is_zero()
    return report


def wedge3_checks() -> dict:
    basis = box_basis(3)
    G2 = dg.gram_matrix(basis, 2)
    Gd = dg.gram_matrix(basis, D)
    w3 = dg.antisymmetrizer(3)
    pair = [sum((c * G2[i][basis.index(m)] for m, c in w3.terms.items()), const(0)) for i in range(len(basis))]
    null = dg.negligible_vectors(basis, 2, G2)
    rho_w3 = rotate(w3)
    anti = rho_w3 + w3
    return {
        "rank_d2": dg.rank(G2),
        "rank_symbolic": dg.rank(Gd),
        "wedge3_pairings_zero": all(p.is_zero() for p in pair),
        "null_dim_d2": len(null),
        "rotation_eigenvalue_minus_one": anti.is_zero(),
        "rotation_eigenvalue_minus_one_mod_null": _quotient_holds(anti, 2),
    }


def forbidden_move_status(family: SolutionFamily) -> str:
    ans = family.ansatz()
    vec = expand_relation("forbidden", ans)
    return "satisfied" if _quotient_holds(vec, ans.d) else "violated"


def s6_quotient_argument() -> dict:
    d = D
    basis = box_basis(3)
    total = DiagramVector(3, 3, {m: 1 for m in basis})
    capped = dg.cap(total, "left", d=d)
    displayed = E.scale(4) + ID2.scale(d + 3) + V.scale(d + 2)
    # dim 6 elimination: X = sum a_i D_i capped on the left
    X = dg.tensor(identity(1), virtual())
    Ds = [
        Matching(3, 3, ((1, 6), (2, 5), (3, 4))),
        Matching(3, 3, ((1, 6), (2, 3), (4, 5))),
        Matching(3, 3, ((1, 2), (3, 4), (5, 6))),
        Matching(3, 3, ((1, 2), (3, 6), (4, 5))),
        Matching(3, 3, ((1, 4), (2, 3), (5, 6))),
        Matching(3, 3, ((1, 5), (2, 6), (3, 4))),
    ]
    a = [var(f"a{i}") for i in range(1, 7)]
    rel = X - sum((DiagramVector.of(m, c) for m, c in zip(Ds, a)), DiagramVector.zero(3, 3))
    capped6 = dg.cap(rel, "left", d=d)
    expected6 = V.scale(d) - ID2.scale(d * a[0] + a[2] + a[5]) - E.scale(d * a[1] + a[3] + a[4])
    # trivial isotypic vector: fixed by every transposition of boundary points
    fixed = all(_permute_points(total, (i, i + 1)) == total for i in range(1, 6))
    return {
        "trivial_vector_fixed": fixed,
        "cap_of_trivial_vector": capped,
        "displayed_cap": displayed,
        "displayed_cap_matches": capped == displayed,
        "dim6_cap": capped6,
        "dim6_cap_matches": capped6 == expected6,
    }


def _permute_points(vec: DiagramVector, swap: tuple) -> DiagramVector:
    i, j = swap

    def f(p):
        return j if p == i else i if p == j else p

    return DiagramVector(
        vec.bottom, vec.top,
        {Matching(m.bottom, m.top, tuple((f(x), f(y)) for x, y in m.pairs)): c for m, c in vec.terms.items()},
    )


def report(case: str = "unoriented") -> dict:
    """JSON-ready summary: relations, constraint sets, per-family residuals."""
    if case == "unoriented":
        ans, suite = unoriented_ansatz(), UNORIENTED_SUITE
    elif case == "oriented":
        ans, suite = oriented_ansatz(), ORIENTED_SUITE
    else:
        raise UnsupportedRelation(case)
    sys = generate_constraints(suite, ans)
    fams = {
        name: verify_family(f).as_dict()
        for name, f in families().items()
        if f.oriented == (case == "oriented")
    }
    out = {"case": case, "relations": list(suite), "constraints": sys.as_strings(), "families": fams}
    if case == "unoriented":
        out["forbidden_move"] = {name: forbidden_move_status(families()[name]) for name in ("virtual_TLJ", "Rep_O2")}
        out["kauffman_capping"] = [str(p) for p in kauffman_capping_constraints()]
    else:
        out["case_split"] = {k: v.as_dict() for k, v in oriented_case_split().items()}
    return out
