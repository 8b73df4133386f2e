"""Deligne's S_t: closed-graph evaluation, open reduction, and the SO(3)_q crossing.

Graphs are abstract (no embedding), so the symmetric crossing costs nothing:
edges may pass through each other.  Legs use the same boundary numbering as
:mod:`skeinlab.diagram` (bottom 1..m left to right, then top right to left).

Rules, with k = 1/(t-2):

* circle -> t - 1
* lollipop -> 0
* bigon -> edge (c1 = 1)
* triangle -> vertex, times c2 = 1 - k = (t-3)/(t-2)
* I - H = k (P_H - P_I), where P_I is the pairing with the same grouping as I

The triangle constant is forced by the I=H relation and pinned by the
tensor oracle below.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import networkx as nx
import numpy as np
from sympy.utilities.iterables import multiset_partitions

from . import diagram as dg
from .diagram import Matching
from .ring import PoleEncountered, RatFunc, as_ratfunc, const, substitute, var

__all__ = [
    "NonClosedGraph",
    "NonCubicGraph",
    "BoundaryTooLarge",
    "TerminationViolation",
    "TrivalentGraph",
    "GraphVector",
    "TrivalentParams",
    "evaluate_closed",
    "simplify",
    "pair",
    "spanning_set",
    "reduce_open",
    "tensor_oracle",
    "verify_braiding",
    "so3q_crossing",
    "verify_IH_equivalence",
    "corpus",
]


class NonClosedGraph(ValueError):
    pass


class NonCubicGraph(ValueError):
    pass


class BoundaryTooLarge(ValueError):
    pass


class TerminationViolation(RuntimeError):
    pass


# ---------------------------------------------------------------- graphs


@dataclass(frozen=True, order=True)
class TrivalentGraph:
    """Internal vertices are 0..n_vertices-1; boundary point p is node -p."""

    bottom: int
    top: int
    n_vertices: int
    edges: tuple

    def __post_init__(self):
        edges = tuple(sorted(tuple(sorted(e)) for e in self.edges))
        object.__setattr__(self, "edges", edges)
        deg = {}
        for a, b in edges:
            deg[a] = deg.get(a, 0) + 1
            deg[b] = deg.get(b, 0) + 1
        for v in range(self.n_vertices):
            if deg.get(v, 0) != 3:
                raise NonCubicGraph(f"vertex {v} has degree {deg.get(v, 0)}")
        for p in range(1, self.legs + 1):
            if deg.get(-p, 0) != 1:
                raise NonCubicGraph(f"leg {p} has degree {deg.get(-p, 0)}")
        extra = set(deg) - set(range(self.n_vertices)) - {-p for p in range(1, self.legs + 1)}
        if extra:
            raise NonCubicGraph(f"unknown nodes {sorted(extra)}")

    @property
    def legs(self) -> int:
        return self.bottom + self.top

    def adjacency(self) -> dict:
        adj = {v: [] for v in range(self.n_vertices)}
        adj.update({-p: [] for p in range(1, self.legs + 1)})
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def canonical(self) -> "TrivalentGraph":
        return _canonical(self)

    def to_json(self) -> dict:
        legs = [[e[0], e[1]] for e in self.edges]
        return {"vertices": self.n_vertices, "bottom": self.bottom, "top": self.top, "edges": legs}

    @classmethod
    def from_json(cls, data) -> "TrivalentGraph":
        if isinstance(data, str):
            data = json.loads(data)
        legs = data.get("legs", [])
        bottom = data.get("bottom", len(legs))
        top = data.get("top", 0)
        edges = [tuple(e) for e in data["edges"]]
        # "legs": [[p, v], ...] attaches boundary point p to vertex v
        edges += [(-int(p), int(v)) for p, v in legs]
        return cls(bottom, top, int(data["vertices"]), tuple(edges))


def graph_from_nx(G: nx.Graph) -> TrivalentGraph:
    idx = {v: i for i, v in enumerate(sorted(G.nodes()))}
    return TrivalentGraph(0, 0, len(idx), tuple((idx[a], idx[b]) for a, b in G.edges()))


def _refine(nodes, adj, colors):
    while True:
        sig = {v: (colors[v], tuple(sorted(colors[w] for w in adj[v]))) for v in nodes}
        rank = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        new = {v: rank[sig[v]] for v in nodes}
        if len(set(new.values())) == len(set(colors.values())):
            return new
        colors = new


def _canonical(g: TrivalentGraph) -> TrivalentGraph:
    adj = g.adjacency()
    nodes = list(adj)
    internal = list(range(g.n_vertices))
    # legs are fixed points: colour -p below every internal colour
    start = {v: (0 if v >= 0 else v) for v in nodes}
    best = None

    def search(colors):
        nonlocal best
        colors = _refine(nodes, adj, colors)
        cells = {}
        for v in internal:
            cells.setdefault(colors[v], []).append(v)
        target = next((c for c in sorted(cells) if len(cells[c]) > 1), None)
        if target is None:
            order = sorted(internal, key=lambda v: colors[v])
            relabel = {v: i for i, v in enumerate(order)}
            relabel.update({-p: -p for p in range(1, g.legs + 1)})
            cert = tuple(sorted(tuple(sorted((relabel[a], relabel[b]))) for a, b in g.edges))
            if best is None or cert < best:
                best = cert
            return
        top = max(colors.values()) + 1
        for v in cells[target]:
            nxt = dict(colors)
            nxt[v] = top
            search(nxt)

    search(start)
    return TrivalentGraph(g.bottom, g.top, g.n_vertices, best)


def _build(bottom, top, vertices, legs, wires, edges):
    """Assemble a graph from raw parts, smoothing degree-2 wire nodes.

    Returns (canonical graph, number of free circles).
    """
    edges = list(edges)
    live = dict(enumerate(edges))
    inc = {}
    for i, (a, b) in live.items():
        inc.setdefault(a, []).append(i)
        inc.setdefault(b, []).append(i)
    next_id = len(edges)
    circles = 0
    for w in wires:
        ids = inc.pop(w, [])
        if len(ids) != 2:
            raise NonCubicGraph(f"wire {w} has degree {len(ids)}")
        i, j = ids
        if i == j:  # closed loop of wires
            del live[i]
            circles += 1
            continue
        (a1, b1), (a2, b2) = live.pop(i), live.pop(j)
        x = b1 if a1 == w else a1
        y = b2 if a2 == w else a2
        for node, eid in ((x, i), (y, j)):
            inc[node].remove(eid)
        live[next_id] = (x, y)
        inc[x].append(next_id)
        inc[y].append(next_id)
        next_id += 1
    label = {v: i for i, v in enumerate(vertices)}
    label.update({node: -p for node, p in legs.items()})
    out = tuple((label[a], label[b]) for a, b in live.values())
    return TrivalentGraph(bottom, top, len(vertices), out).canonical(), circles


# --------------------------------------------------------------- vectors


class GraphVector:
    def __init__(self, bottom: int, top: int, terms: Mapping | None = None):
        self.bottom, self.top = bottom, top
        clean = {}
        for g, c in (terms or {}).items():
            c = as_ratfunc(c)
            if (g.bottom, g.top) != (bottom, top):
                raise dg.BoundaryMismatch(f"term {g} does not fit ({bottom},{top})")
            g = g.canonical()
            clean[g] = clean[g] + c if g in clean else c
        self.terms = {g: c for g, c in clean.items() if not c.is_zero()}

    @classmethod
    def of(cls, g: TrivalentGraph, c=1):
        return cls(g.bottom, g.top, {g: c})

    @classmethod
    def zero(cls, bottom, top):
        return cls(bottom, top, {})

    def __add__(self, other):
        if (self.bottom, self.top) != (other.bottom, other.top):
            raise dg.BoundaryMismatch("shape mismatch")
        out = dict(self.terms)
        for g, c in other.terms.items():
            out[g] = out[g] + c if g in out else c
        return GraphVector(self.bottom, self.top, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = as_ratfunc(c)
        return GraphVector(self.bottom, self.top, {g: v * c for g, v in self.terms.items()})

    def is_zero(self):
        return not self.terms

    def coefficient(self, g):
        return self.terms.get(g.canonical(), const(0))

    def __repr__(self):
        inner = " + ".join(f"({c})*{g.edges}" for g, c in sorted(self.terms.items()))
        return f"GraphVector({self.bottom},{self.top}: {inner or '0'})"


def _vec(x) -> GraphVector:
    if isinstance(x, GraphVector):
        return x
    if isinstance(x, Matching):
        x = from_matching(x)
    return GraphVector.of(x)


def from_matching(mt: Matching) -> TrivalentGraph:
    return TrivalentGraph(mt.bottom, mt.top, 0, tuple((-a, -b) for a, b in mt.pairs))


def i_graph() -> TrivalentGraph:
    """Vertical I: bottom legs 1,2 meet, top legs 3,4 meet."""
    return TrivalentGraph(2, 2, 2, ((-1, 0), (-2, 0), (0, 1), (1, -3), (1, -4)))


def h_graph() -> TrivalentGraph:
    """Horizontal H: left legs 1,4 meet, right legs 2,3 meet."""
    return TrivalentGraph(2, 2, 2, ((-1, 0), (-4, 0), (0, 1), (1, -2), (1, -3)))


def y_graph() -> TrivalentGraph:
    """One vertex, one leg below, two above."""
    return TrivalentGraph(1, 2, 1, ((-1, 0), (-2, 0), (-3, 0)))


class TrivalentParams:
    def __init__(self, t="t"):
        self.t = as_ratfunc(t)
        self.circle = self.t - 1
        self.k = (self.t - 2) ** -1 if not (self.t - 2).is_zero() else None
        if self.k is None:
            raise PoleEncountered("I=H coefficient 1/(t-2) is undefined at t = 2")
        self.bigon = const(1)
        self.triangle = 1 - self.k

    def as_dict(self):
        return {"circle": str(self.circle), "bigon": "1", "triangle": str(self.triangle), "IH": str(self.k)}


# ------------------------------------------------------- box operations


def _merge(a: TrivalentGraph, b: TrivalentGraph, a_legs, b_legs, bottom, top):
    """Disjoint union; a_legs/b_legs map old leg p -> ('ext', label) | ('wire', key)."""
    vertices = [("A", v) for v in range(a.n_vertices)] + [("B", v) for v in range(b.n_vertices)]
    legs, wires = {}, []
    node = {}
    for tag, g, lmap in (("A", a, a_legs), ("B", b, b_legs)):
        for p in range(1, g.legs + 1):
            kind, key = lmap(p)
            if kind == "ext":
                node[(tag, -p)] = (tag, "leg", p)
                legs[(tag, "leg", p)] = key
            else:
                node[(tag, -p)] = ("W", key)
        for v in range(g.n_vertices):
            node[(tag, v)] = (tag, v)
    wires = sorted({n for n in node.values() if n[0] == "W"})
    edges = [(node[("A", x)], node[("A", y)]) for x, y in a.edges]
    edges += [(node[("B", x)], node[("B", y)]) for x, y in b.edges]
    return _build(bottom, top, vertices, legs, wires, edges)


def _bilinear(x, y, op, params, bottom, top):
    x, y = _vec(x), _vec(y)
    out = {}
    circ = params.circle if params else var("t") - 1
    for ga, ca in x.terms.items():
        for gb, cb in y.terms.items():
            g, circles = op(ga, gb)
            c = ca * cb * circ ** circles
            out[g] = out[g] + c if g in out else c
    return GraphVector(bottom, top, out)


def compose(lower, upper, params=None) -> GraphVector:
    lower, upper = _vec(lower), _vec(upper)
    if lower.top != upper.bottom:
        raise dg.BoundaryMismatch(f"cannot stack: lower top {lower.top} vs upper bottom {upper.bottom}")
    m, k, n = lower.bottom, lower.top, upper.top

    def lmap(p):
        if p <= m:
            return ("ext", p)
        return ("wire", m + k + 1 - p)  # j-th from the left on top

    def umap(q):
        if q <= k:
            return ("wire", q)
        return ("ext", m + (q - k))

    return _bilinear(lower, upper, lambda a, b: _merge(a, b, lmap, umap, m, n), params, m, n)


def tensor(x, y) -> GraphVector:
    x, y = _vec(x), _vec(y)
    m, n = x.bottom + y.bottom, x.top + y.top
    total = m + n

    def amap(p):
        if p <= x.bottom:
            return ("ext", p)
        j = x.bottom + x.top + 1 - p
        return ("ext", total + 1 - j)

    def bmap(p):
        if p <= y.bottom:
            return ("ext", x.bottom + p)
        j = y.bottom + y.top + 1 - p
        return ("ext", total + 1 - (x.top + j))

    return _bilinear(x, y, lambda a, b: _merge(a, b, amap, bmap, m, n), None, m, n)


def rotate(x, clicks: int = 1) -> GraphVector:
    x = _vec(x)
    N = x.bottom + x.top
    out = {}
    for g, c in x.terms.items():
        def r(v):
            return v if v >= 0 else -((-v - 1 + clicks) % N + 1)

        out[TrivalentGraph(g.bottom, g.top, g.n_vertices, tuple((r(a), r(b)) for a, b in g.edges))] = c
    return GraphVector(x.bottom, x.top, out)


def cap(x, site="top", index=1, params=None) -> GraphVector:
    x = _vec(x)
    m, n = x.bottom, x.top
    if site == "top":
        return compose(x, from_matching(Matching(n, n - 2, dg._cup_pairs(n, index, True))), params)
    if site == "bottom":
        return compose(from_matching(Matching(m - 2, m, dg._cup_pairs(m, index, False))), x, params)
    if site in ("left", "right"):
        a, b = (1, m + n) if site == "left" else (m, m + 1)
        keep = [p for p in range(1, m + n + 1) if p not in (a, b)]
        new = {p: i + 1 for i, p in enumerate(keep)}
        circ = params.circle if params else var("t") - 1
        out = {}
        for g, c in x.terms.items():
            vertices = list(range(g.n_vertices))
            legs = {-p: new[p] for p in keep}
            edges = [tuple("W" if v in (-a, -b) else v for v in e) for e in g.edges]
            h, circles = _build(m - 1, n - 1, vertices, legs, ["W"], edges)
            out[h] = out[h] + c * circ ** circles if h in out else c * circ ** circles
        return GraphVector(m - 1, n - 1, out)
    raise ValueError(f"unknown cap site {site!r}")


def pair(x, y, params=None) -> RatFunc:
    """Glue boundary point p of x to boundary point p of y and evaluate."""
    x, y = _vec(x), _vec(y)
    if (x.bottom, x.top) != (y.bottom, y.top):
        raise dg.BoundaryMismatch("pairing needs equal shapes")
    params = params or TrivalentParams()
    closed = _bilinear(
        x, y,
        lambda a, b: _merge(a, b, lambda p: ("wire", p), lambda p: ("wire", p), 0, 0),
        params, 0, 0,
    )
    return sum((c * evaluate_closed(g, params) for g, c in closed.terms.items()), const(0))


# ------------------------------------------------------------- rewriting


def _girth_edges(g: TrivalentGraph):
    """Shortest cycle length through internal vertices and the edges realising it."""
    adj = g.adjacency()
    best, sites = None, []
    for idx, (u, v) in enumerate(g.edges):
        if u < 0 or v < 0:
            continue
        if u == v:
            L = 1
            path = [u]
        else:
            # BFS from u to v avoiding this single edge copy
            dist = {u: 0}
            prev = {u: None}
            frontier = [u]
            skipped = False
            found = None
            while frontier and found is None:
                nxt = []
                for a in frontier:
                    skip_once = a == u
                    for b in adj[a]:
                        if b < 0:
                            continue
                        if a == u and b == v and not skipped:
                            skipped = True
                            continue
                        if b not in dist:
                            dist[b] = dist[a] + 1
                            prev[b] = a
                            if b == v:
                                found = b
                                break
                            nxt.append(b)
                    if found is not None:
                        break
                frontier = nxt
            if found is None:
                continue
            L = dist[v] + 1
            path = [v]
            while prev[path[-1]] is not None:
                path.append(prev[path[-1]])
            path = path[::-1]  # u ... v
        if best is None or L < best:
            best, sites = L, []
        if L == best:
            sites.append((idx, path))
    return best, sites


def _measure(g):
    girth, _ = _girth_edges(g)
    return (g.n_vertices, girth if girth is not None else 10 ** 9)


def _rebuild(g, drop_vertices, add_vertices, drop_edge_idx, add_edges):
    verts = [v for v in range(g.n_vertices) if v not in drop_vertices] + list(add_vertices)
    edges = [e for i, e in enumerate(g.edges) if i not in drop_edge_idx] + list(add_edges)
    legs = {-p: p for p in range(1, g.legs + 1)}
    return _build(g.bottom, g.top, verts, legs, [], edges)


def _incident(g, v):
    return [i for i, e in enumerate(g.edges) if v in e]


def _other(e, v):
    return e[1] if e[0] == v else e[0]


def _sites(g):
    """All applicable rewrite sites, in a deterministic order."""
    adj = g.adjacency()
    out = []
    for v in range(g.n_vertices):
        if v in adj[v]:
            out.append(("lollipop", v))
    if out:
        return out
    for u in range(g.n_vertices):
        for v in set(adj[u]):
            if v > u and adj[u].count(v) >= 2:
                out.append(("bigon", u, v))
    if out:
        return out
    for u, v, w in itertools.combinations(range(g.n_vertices), 3):
        if v in adj[u] and w in adj[u] and w in adj[v]:
            out.append(("triangle", u, v, w))
    if out:
        return out
    girth, cyc = _girth_edges(g)
    if girth is not None:
        for idx, path in cyc:
            out.append(("IH", idx, tuple(path)))
    return out


def _apply(g, site, params):
    """Apply one rewrite; returns a list of (coefficient, graph, circles)."""
    kind = site[0]
    if kind == "lollipop":
        return []
    if kind == "bigon":
        _, u, v = site
        inc_u = _incident(g, u)
        par = [i for i in inc_u if set(g.edges[i]) == {u, v}]
        if len(par) == 3:  # theta component
            h, circles = _rebuild(g, {u, v}, [], set(par), [])
            return [(params.bigon, h, circles + 1)]
        iu = next(i for i in inc_u if i not in par)
        iv = next(i for i in _incident(g, v) if i not in par)
        a, b = _other(g.edges[iu], u), _other(g.edges[iv], v)
        h, circles = _rebuild(g, {u, v}, [], set(par[:2]) | {iu, iv}, [(a, b)])
        return [(params.bigon, h, circles)]
    if kind == "triangle":
        _, u, v, w = site
        tri = {u, v, w}
        drop, new_edges = set(), []
        x = ("new", 0)
        for s in (u, v, w):
            for i in _incident(g, s):
                e = g.edges[i]
                o = _other(e, s)
                if o in tri:
                    drop.add(i)
                else:
                    drop.add(i)
                    new_edges.append((x, o))
        h, circles = _rebuild(g, tri, [x], drop, new_edges)
        return [(params.triangle, h, circles)]
    if kind == "IH":
        _, idx, path = site
        u, v = g.edges[idx]
        if path[0] != u:
            u, v = v, u
        # path runs u -> ... -> v around the cycle; a is u's cycle neighbour, c is v's
        a_node = path[1]
        c_node = path[-2]
        inc_u = [i for i in _incident(g, u) if i != idx]
        inc_v = [i for i in _incident(g, v) if i != idx]
        ia = next(i for i in inc_u if _other(g.edges[i], u) == a_node)
        ib = next(i for i in inc_u if i != ia)
        ic = next(i for i in inc_v if _other(g.edges[i], v) == c_node)
        idd = next(i for i in inc_v if i != ic)
        a, b = a_node, _other(g.edges[ib], u)
        c, d = c_node, _other(g.edges[idd], v)
        drop = {idx, ia, ib, ic, idd}
        x, y = ("new", 0), ("new", 1)
        # tree{ab|cd} = tree{ac|bd} + k (P{ac|bd} - P{ab|cd})
        h_tree, c1 = _rebuild(g, {u, v}, [x, y], drop, [(x, a), (x, c), (x, y), (y, b), (y, d)])
        p_new, c2 = _rebuild(g, {u, v}, [], drop, [(a, c), (b, d)])
        p_old, c3 = _rebuild(g, {u, v}, [], drop, [(a, b), (c, d)])
        return [(const(1), h_tree, c1), (params.k, p_new, c2), (-params.k, p_old, c3)]
    raise ValueError(kind)


_MEMO: dict = {}


def simplify(x, params: TrivalentParams | None = None, rng: random.Random | None = None) -> GraphVector:
    """Remove every internal cycle; the result is a combination of forests."""
    params = params or TrivalentParams()
    x = _vec(x)
    out = GraphVector.zero(x.bottom, x.top)
    for g, c in x.terms.items():
        out = out + _simplify_graph(g, params, rng).scale(c)
    return out


def _simplify_graph(g, params, rng):
    key = (str(params.t), g)
    if rng is None and key in _MEMO:
        return _MEMO[key]
    sites = _sites(g)
    if not sites:
        res = GraphVector.of(g)
    else:
        site = rng.choice(sites) if rng is not None else sites[0]
        before = _measure(g)
        res = GraphVector.zero(g.bottom, g.top)
        for coeff, h, circles in _apply(g, site, params):
            if not _measure(h) < before:
                raise TerminationViolation(f"{site[0]} did not decrease {before} -> {_measure(h)}")
            res = res + _simplify_graph(h, params, rng).scale(coeff * params.circle ** circles)
    if rng is None:
        _MEMO[key] = res
    return res


def evaluate_closed(g: TrivalentGraph, params: TrivalentParams | None = None, rng=None) -> RatFunc:
    if g.legs:
        raise NonClosedGraph(f"graph has {g.legs} legs")
    res = simplify(g.canonical(), params, rng)
    empty = TrivalentGraph(0, 0, 0, ())
    if set(res.terms) - {empty}:
        raise TerminationViolation("closed graph did not reduce to a scalar")
    return res.coefficient(empty)


# ------------------------------------------------------------ open boxes


def _caterpillar(block, start):
    """Tree joining the legs in ``block``; internal ids start at ``start``."""
    block = sorted(block)
    m = len(block)
    if m == 2:
        return 0, [(-block[0], -block[1])]
    nv = m - 2
    vs = list(range(start, start + nv))
    edges = [(-block[0], vs[0]), (-block[1], vs[0])]
    for i in range(1, nv):
        edges.append((vs[i - 1], vs[i]))
        edges.append((-block[i + 1], vs[i]))
    edges.append((-block[-1], vs[-1]))
    return nv, edges


def spanning_set(bottom: int, top: int) -> list[TrivalentGraph]:
    """One tree per set partition of the legs with no singleton blocks."""
    k = bottom + top
    if k > 6:
        raise BoundaryTooLarge(f"{k} legs")
    if k == 0:
        return [TrivalentGraph(0, 0, 0, ())]
    out = []
    for part in multiset_partitions(list(range(1, k + 1))):
        if any(len(b) < 2 for b in part):
            continue
        nv, edges = 0, []
        for block in part:
            dv, de = _caterpillar(block, nv)
            nv += dv
            edges += de
        out.append(TrivalentGraph(bottom, top, nv, tuple(edges)))
    return out


def four_box_basis() -> dict:
    return {
        "identity": from_matching(dg.identity(2)),
        "cupcap": from_matching(dg.cupcap()),
        "virtual": from_matching(dg.virtual()),
        "I": i_graph(),
    }


def reduce_open(x, params: TrivalentParams | None = None, basis: Sequence[TrivalentGraph] | None = None):
    """Coordinates of x in a basis of its box space, solved through the pairing."""
    params = params or TrivalentParams()
    x = _vec(x)
    if x.bottom + x.top > 6:
        raise BoundaryTooLarge(f"{x.bottom + x.top} legs")
    if basis is None:
        basis = list(four_box_basis().values()) if (x.bottom, x.top) == (2, 2) else spanning_set(x.bottom, x.top)
    G = [[pair(a, b, params) for b in basis] for a in basis]
    rhs = [pair(b, x, params) for b in basis]
    aug = [row + [r] for row, r in zip(G, rhs)]
    R, piv = dg.rref(aug)
    if len(piv) < len(basis) or len(basis) in piv:
        raise ArithmeticError("pairing is degenerate on the chosen basis")
    return [R[i][len(basis)] for i in range(len(basis))]


def vanishes(x, params: TrivalentParams | None = None) -> bool:
    """Zero in the non-degenerate quotient: pairs to zero with a spanning set."""
    params = params or TrivalentParams()
    x = _vec(x)
    if x.is_zero():
        return True
    return all(pair(b, x, params).is_zero() for b in spanning_set(x.bottom, x.top))


# --------------------------------------------------------------- oracle


def tensor_oracle(n: int, g: TrivalentGraph) -> Fraction:
    """Contract g with the invariant 3-tensor of the standard S_n module."""
    if g.legs:
        raise NonClosedGraph("oracle needs a closed graph")
    if n < 2:
        raise ValueError("n must be at least 2")
    nP = np.array([[n * (i == j) - 1 for j in range(n)] for i in range(n)], dtype=object)
    T = np.einsum("im,jm,km->ijk", nP, nP, nP)
    bigon = np.einsum("ajk,bjk->ab", T, T)
    # bigon = lam * P with P = nP / n the projector onto zero-sum vectors
    lam = Fraction(int(bigon[0, 0]) * n, int(nP[0, 0]))
    if g.n_vertices == 0:
        return Fraction(0) if g.edges else Fraction(1)
    # one tensor per vertex, axes labelled by edge ids
    tensors = []
    slots = {v: [] for v in range(g.n_vertices)}
    for eid, (a, b) in enumerate(g.edges):
        slots[a].append(eid)
        slots[b].append(eid)
    for v in range(g.n_vertices):
        labels = slots[v]
        arr = T
        if len(set(labels)) < 3:  # self-loop: trace out the repeated label
            rep = next(l for l in labels if labels.count(l) == 2)
            i, j = [p for p, l in enumerate(labels) if l == rep]
            arr = np.trace(T, axis1=i, axis2=j)
            labels = [l for l in labels if l != rep]
        tensors.append((arr, list(labels)))
    while len(tensors) > 1:
        best = None
        for i, j in itertools.combinations(range(len(tensors)), 2):
            shared = set(tensors[i][1]) & set(tensors[j][1])
            if not shared:
                continue
            size = len(set(tensors[i][1]) ^ set(tensors[j][1]))
            if best is None or size < best[0]:
                best = (size, i, j)
        if best is None:  # disconnected: multiply scalars / outer products
            i, j = 0, 1
            (A, la), (B, lb) = tensors[i], tensors[j]
            C, lc = np.multiply.outer(A, B), la + lb
        else:
            _, i, j = best
            (A, la), (B, lb) = tensors[i], tensors[j]
            shared = [l for l in la if l in lb]
            C = np.tensordot(A, B, axes=([la.index(l) for l in shared], [lb.index(l) for l in shared]))
            lc = [l for l in la if l not in shared] + [l for l in lb if l not in shared]
        tensors = [t for k, t in enumerate(tensors) if k not in (i, j)] + [(C, lc)]
    value = tensors[0][0]
    value = Fraction(int(value)) if np.ndim(value) == 0 else Fraction(int(value.item()))
    return value / lam ** (g.n_vertices // 2)


def oracle_scalars(n: int) -> dict:
    """Circle, bigon-normalised theta and triangle constant from the tensor model."""
    theta = tensor_oracle(n, TrivalentGraph(0, 0, 2, ((0, 1), (0, 1), (0, 1))))
    k4 = tensor_oracle(n, graph_from_nx(nx.complete_graph(4)))
    return {"circle": Fraction(n - 1), "theta": theta, "K4": k4, "triangle": k4 / theta}


# -------------------------------------------------------------- braiding


def so3q_crossing(eps=0, tree: str = "I") -> GraphVector:
    """(q^2-1) id + q^-2 cupcap - (q^2+q^-2) T, optionally perturbed by eps.

    ``tree="I"`` uses the vertical I; ``tree="H"`` the tree whose grouping
    matches the identity term.  Only the H version satisfies the moves under
    I - H = (id - cupcap)/(t-2).
    """
    q = var("q")
    b = four_box_basis()
    T = b["I"] if tree == "I" else h_graph()
    return (
        GraphVector.of(b["identity"], q ** 2 - 1 + as_ratfunc(eps))
        + GraphVector.of(b["cupcap"], q ** -2)
        - GraphVector.of(T, q ** 2 + q ** -2)
    )


def _id(n):
    return from_matching(dg.identity(n))


def braiding_relations(X: GraphVector, params) -> dict:
    under = rotate(X)
    s1, s2 = tensor(X, _id(1)), tensor(_id(1), X)
    c = lambda *vs: _chain(params, *vs)
    Y = GraphVector.of(y_graph())
    cup = from_matching(Matching(0, 2, ((1, 2),)))
    rels = {
        "R2": c(X, under) - GraphVector.of(_id(2)),
        "R2b": c(under, X) - GraphVector.of(_id(2)),
        "R3": c(s1, s2, s1) - c(s2, s1, s2),
        # a strand slides over a vertex, and over a cup
        "R2.5_vertex": c(tensor(_id(1), Y), s1, s2) - c(X, tensor(Y, _id(1))),
        "R2.5_cap": c(tensor(_id(1), cup), s1, s2) - tensor(cup, _id(1)),
    }
    return rels


def _chain(params, *vs):
    out = _vec(vs[0])
    for v in vs[1:]:
        out = compose(out, v, params)
    return out


def verify_braiding(X: GraphVector | None = None, t=None) -> dict:
    """Expand twist, R2, R3 and both naturality moves; zero means pairs to zero."""
    q = var("q")
    X = X if X is not None else so3q_crossing()
    t = as_ratfunc(t) if t is not None else q ** 2 + 2 + q ** -2
    params = TrivalentParams(t)
    report = {"t": str(t), "mode": "verification, not search"}
    capped = cap(X, "top", 1, params)
    cupcap_ref = cap(GraphVector.of(_id(2)), "top", 1, params)
    twist = reduce_open(capped, params, [next(iter(cupcap_ref.terms))])[0]
    left = cap(X, "left", params=params)
    twist_left = reduce_open(left, params, [_id(1)])[0]
    report["twist"] = str(twist)
    report["twist_left"] = str(twist_left)
    results = {}
    for name, rel in braiding_relations(X, params).items():
        results[name] = vanishes(rel, params)
    results["twist"] = not twist.is_zero()
    report["relations"] = results
    report["ok"] = all(results.values())
    return report


def verify_IH_equivalence(t="t") -> dict:
    """Replay the I=H lemma: multiply by H on top, compare with the rotation."""
    t = as_ratfunc(t)
    if (t - 2).is_zero():
        return {"status": "Undefined", "reason": "1/(t-2) has a pole at t = 2"}
    if t.is_zero():
        return {"status": "Undefined", "reason": "1/t has a pole at t = 0"}
    params = TrivalentParams(t)
    b = four_box_basis()
    I, H = GraphVector.of(b["I"]), GraphVector.of(h_graph())
    ID, E = GraphVector.of(b["identity"]), GraphVector.of(b["cupcap"])
    minus = I - H - (ID - E).scale(params.k)
    plus = I + H - (ID + E).scale(t ** -1)
    stacked = compose(minus, H, params)
    square = compose(H, H, params)
    expected = I.scale(params.triangle) - square - H.scale(params.k) + E.scale(params.k)
    rotated = rotate(stacked)
    diff = stacked - rotated
    return {
        "status": "ok",
        "minus_relation_holds": vanishes(minus, params),
        "plus_relation_holds": vanishes(plus, params),
        "stack_with_H_is_exact": simplify(stacked - expected, params).is_zero(),
        "square_rotation_invariant": vanishes(square - rotate(square), params),
        "difference_with_rotation_vanishes": vanishes(diff, params),
        "triangle": str(params.triangle),
    }


# ---------------------------------------------------------------- corpus


def corpus(seed: int = 0) -> dict:
    """Connected cubic graphs with at most 10 vertices."""
    rng = random.Random(seed)
    out = {
        "theta": TrivalentGraph(0, 0, 2, ((0, 1), (0, 1), (0, 1))),
        "K4": graph_from_nx(nx.complete_graph(4)),
        "K33": graph_from_nx(nx.complete_bipartite_graph(3, 3)),
        "prism": graph_from_nx(nx.circular_ladder_graph(3)),
        "cube": graph_from_nx(nx.hypercube_graph(3)),
        "wagner": graph_from_nx(nx.circulant_graph(8, [1, 4])),
        "petersen": graph_from_nx(nx.petersen_graph()),
    }
    for n in (6, 8, 10):
        while True:
            G = nx.random_regular_graph(3, n, seed=rng.randrange(10 ** 6))
            if nx.is_connected(G):
                break
        out[f"random{n}"] = graph_from_nx(G)
    return out
