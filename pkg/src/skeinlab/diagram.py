"""Flat diagrams: perfect matchings of boundary points and their linear span.

Boundary numbering (used everywhere in this package): a box with ``m`` bottom
and ``n`` top points is numbered clockwise from the left edge, so bottom points
are ``1..m`` read left to right and top points are ``m+1..m+n`` read right to
left.  The top point that is ``j``-th from the left is therefore ``m+n+1-j``.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .ring import RatFunc, as_ratfunc, const, star_involution

__all__ = [
    "BoundaryMismatch",
    "EmptyBoundary",
    "IndexOutOfRange",
    "Matching",
    "OrientedMatching",
    "DiagramVector",
    "box_basis",
    "identity",
    "cupcap",
    "virtual",
    "compose",
    "tensor",
    "rotate",
    "involute",
    "cap",
    "close_trace",
    "close_trace_left",
    "inner_product",
    "gram_matrix",
    "rref",
    "rank",
    "null_space",
    "negligible_vectors",
    "permutation_diagram",
    "antisymmetrizer",
    "rotation_matrix",
    "eigen_check",
    "is_planar",
]


class BoundaryMismatch(ValueError):
    pass


class EmptyBoundary(ValueError):
    pass


class IndexOutOfRange(IndexError):
    pass


@dataclass(frozen=True, order=True)
class Matching:
    bottom: int
    top: int
    pairs: tuple

    def __post_init__(self):
        npts = self.bottom + self.top
        if npts % 2:
            raise ValueError("odd number of boundary points")
        canon = tuple(sorted(tuple(sorted(p)) for p in self.pairs))
        seen = [q for p in canon for q in p]
        if sorted(seen) != list(range(1, npts + 1)):
            raise ValueError(f"pairs {self.pairs} are not a perfect matching of 1..{npts}")
        object.__setattr__(self, "pairs", canon)

    @property
    def size(self) -> int:
        return self.bottom + self.top

    def partner(self) -> dict:
        out = {}
        for a, b in self.pairs:
            out[a] = b
            out[b] = a
        return out

    def top_point(self, j: int) -> int:
        """Label of the top point that is ``j``-th from the left (1-based)."""
        return self.bottom + self.top + 1 - j

    def __str__(self):
        return "{" + ",".join(f"{a}-{b}" for a, b in self.pairs) + "}"


@dataclass(frozen=True)
class OrientedMatching:
    """A matching with an orientation at every boundary point.

    Sign convention: ``+1`` means the strand enters the box at that point and
    ``-1`` means it leaves.  Every strand therefore joins a ``+1`` point to a
    ``-1`` point, and gluing requires opposite signs on the two sides.
    """

    matching: Matching
    signs: tuple

    def __post_init__(self):
        if len(self.signs) != self.matching.size:
            raise ValueError("one sign per boundary point is required")
        for a, b in self.matching.pairs:
            if self.signs[a - 1] + self.signs[b - 1] != 0:
                raise ValueError(f"strand {a}-{b} does not carry a consistent orientation")

    def compose(self, upper: "OrientedMatching") -> tuple["OrientedMatching", int]:
        lo, up = self.matching, upper.matching
        if lo.top != up.bottom:
            raise BoundaryMismatch("top of lower differs from bottom of upper")
        for j in range(1, lo.top + 1):
            if self.signs[lo.top_point(j) - 1] + upper.signs[j - 1] != 0:
                raise BoundaryMismatch(f"orientations clash at glued point {j}")
        m, loops = _compose_matchings(lo, up)
        signs = self.signs[: lo.bottom] + upper.signs[up.bottom:]
        return OrientedMatching(m, signs), loops


def _compose_matchings(lower: Matching, upper: Matching) -> tuple[Matching, int]:
    if lower.top != upper.bottom:
        raise BoundaryMismatch(f"cannot stack: lower top {lower.top} vs upper bottom {upper.bottom}")
    k = lower.top
    pl, pu = lower.partner(), upper.partner()
    m, n = lower.bottom, upper.top
    # external labels in the result
    ext = {}
    for i in range(1, m + 1):
        ext[("L", i)] = i
    for q in range(upper.bottom + 1, upper.bottom + n + 1):
        ext[("U", q)] = m + (q - upper.bottom)
    # glued middle points: lower top j-th from left <-> upper bottom j
    glue = {}
    for j in range(1, k + 1):
        a, b = ("L", lower.top_point(j)), ("U", j)
        glue[a] = b
        glue[b] = a

    def step(node):
        side, p = node
        return (side, pl[p]) if side == "L" else (side, pu[p])

    pairs = []
    visited = set()
    for start in ext:
        if start in visited:
            continue
        node = step(start)
        visited.add(start)
        while node not in ext:
            visited.add(node)
            node = glue[node]
            visited.add(node)
            node = step(node)
        visited.add(node)
        pairs.append((ext[start], ext[node]))
    loops = 0
    for node in glue:
        if node in visited:
            continue
        loops += 1
        cur = node
        while cur not in visited:
            visited.add(cur)
            nxt = glue[cur]
            visited.add(nxt)
            cur = step(nxt)
    return Matching(m, n, tuple(pairs)), loops


def _tensor_matchings(a: Matching, b: Matching) -> Matching:
    m, n = a.bottom + b.bottom, a.top + b.top
    total = m + n

    def place_a(p):
        if p <= a.bottom:
            return p
        j = a.bottom + a.top + 1 - p  # j-th from left on top
        return total + 1 - j

    def place_b(p):
        if p <= b.bottom:
            return a.bottom + p
        j = b.bottom + b.top + 1 - p
        return total + 1 - (a.top + j)

    pairs = [(place_a(x), place_a(y)) for x, y in a.pairs]
    pairs += [(place_b(x), place_b(y)) for x, y in b.pairs]
    return Matching(m, n, tuple(pairs))


def _rotate_matching(mt: Matching, clicks: int = 1) -> Matching:
    N = mt.size
    if N == 0:
        raise EmptyBoundary("cannot rotate the empty diagram")

    def r(p):
        return (p - 1 + clicks) % N + 1

    return Matching(mt.bottom, mt.top, tuple((r(a), r(b)) for a, b in mt.pairs))


def _involute_matching(mt: Matching) -> Matching:
    m, n = mt.bottom, mt.top

    def f(p):
        if p <= m:
            return n + p  # bottom i -> new top, i-th from the right
        return p - m  # top j-th from right -> new bottom j

    return Matching(n, m, tuple((f(a), f(b)) for a, b in mt.pairs))


def is_planar(mt: Matching) -> bool:
    for (a, b), (c, d) in itertools.combinations(mt.pairs, 2):
        if a < c < b < d or c < a < d < b:
            return False
    return True


def _all_matchings(points: list) -> Iterator[list]:
    if not points:
        yield []
        return
    first = points[0]
    for i in range(1, len(points)):
        rest = points[1:i] + points[i + 1:]
        for tail in _all_matchings(rest):
            yield [(first, points[i])] + tail


def box_basis(bottom: int, top: int | None = None) -> list[Matching]:
    """All matchings with the given boundary, in canonical enumeration order."""
    if top is None:
        top = bottom
    n = bottom + top
    if n % 2:
        raise ValueError("odd number of boundary points")
    return [Matching(bottom, top, tuple(p)) for p in _all_matchings(list(range(1, n + 1)))]


# ---------------------------------------------------------------- vectors


class DiagramVector:
    """Formal linear combination of matchings sharing one boundary."""

    __slots__ = ("bottom", "top", "terms")

    def __init__(self, bottom: int, top: int, terms: Mapping | None = None):
        self.bottom = bottom
        self.top = top
        clean = {}
        for mt, c in (terms or {}).items():
            if (mt.bottom, mt.top) != (bottom, top):
                raise BoundaryMismatch(f"term {mt} does not have boundary ({bottom},{top})")
            c = as_ratfunc(c)
            if not c.is_zero():
                clean[mt] = c
        self.terms = clean

    @classmethod
    def of(cls, mt: Matching, coeff=1) -> "DiagramVector":
        return cls(mt.bottom, mt.top, {mt: coeff})

    @classmethod
    def zero(cls, bottom: int, top: int) -> "DiagramVector":
        return cls(bottom, top, {})

    def _check(self, other: "DiagramVector"):
        if (self.bottom, self.top) != (other.bottom, other.top):
            raise BoundaryMismatch("boundary signatures differ")

    def __add__(self, other: "DiagramVector") -> "DiagramVector":
        self._check(other)
        out = dict(self.terms)
        for mt, c in other.terms.items():
            out[mt] = out[mt] + c if mt in out else c
        return DiagramVector(self.bottom, self.top, out)

    def __neg__(self):
        return DiagramVector(self.bottom, self.top, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "DiagramVector":
        c = as_ratfunc(c)
        return DiagramVector(self.bottom, self.top, {m: c * v for m, v in self.terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, c):
        return self.scale(c)

    def map_coefficients(self, fn) -> "DiagramVector":
        return DiagramVector(self.bottom, self.top, {m: fn(c) for m, c in self.terms.items()})

    def coefficient(self, mt: Matching) -> RatFunc:
        return self.terms.get(mt, const(0))

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, DiagramVector):
            return NotImplemented
        return (self.bottom, self.top) == (other.bottom, other.top) and self.terms == other.terms

    def __hash__(self):
        return hash((self.bottom, self.top, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return f"DiagramVector({self.bottom},{self.top}: 0)"
        body = " + ".join(f"({c})*{m}" for m, c in sorted(self.terms.items()))
        return f"DiagramVector({self.bottom},{self.top}: {body})"

    def to_json(self) -> str:
        terms = [
            {"pairs": [list(p) for p in mt.pairs], "coeff": str(c)}
            for mt, c in sorted(self.terms.items())
        ]
        return json.dumps({"bottom": self.bottom, "top": self.top, "terms": terms})

    @classmethod
    def from_json(cls, text: str | dict) -> "DiagramVector":
        data = json.loads(text) if isinstance(text, str) else text
        m, n = int(data["bottom"]), int(data["top"])
        out = cls.zero(m, n)
        for t in data["terms"]:
            mt = Matching(m, n, tuple(tuple(p) for p in t["pairs"]))
            out = out + cls.of(mt, as_ratfunc(t.get("coeff", "1")))
        return out


def _vec(x) -> DiagramVector:
    return DiagramVector.of(x) if isinstance(x, Matching) else x


def identity(n: int) -> Matching:
    """Identity on ``n`` strands (``n`` bottom and ``n`` top points)."""
    return Matching(n, n, tuple((i, 2 * n + 1 - i) for i in range(1, n + 1)))


def cupcap() -> Matching:
    return Matching(2, 2, ((1, 2), (3, 4)))


def virtual() -> Matching:
    return Matching(2, 2, ((1, 3), (2, 4)))


def compose(lower, upper, d) -> DiagramVector:
    """Stack ``upper`` on top of ``lower``; each closed loop contributes ``d``."""
    lower, upper = _vec(lower), _vec(upper)
    if lower.top != upper.bottom:
        raise BoundaryMismatch(f"cannot stack: lower top {lower.top} vs upper bottom {upper.bottom}")
    d = as_ratfunc(d)
    out: dict = {}
    powers: dict = {}
    for m1, c1 in lower.terms.items():
        for m2, c2 in upper.terms.items():
            mt, loops = _compose_matchings(m1, m2)
            if loops not in powers:
                powers[loops] = d ** loops
            c = c1 * c2 * powers[loops]
            out[mt] = out[mt] + c if mt in out else c
    return DiagramVector(lower.bottom, upper.top, out)


def tensor(a, b) -> DiagramVector:
    a, b = _vec(a), _vec(b)
    out: dict = {}
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            mt = _tensor_matchings(m1, m2)
            c = c1 * c2
            out[mt] = out[mt] + c if mt in out else c
    return DiagramVector(a.bottom + b.bottom, a.top + b.top, out)


def rotate(x, clicks: int = 1) -> DiagramVector:
    x = _vec(x)
    if x.bottom + x.top == 0:
        raise EmptyBoundary("cannot rotate the empty diagram")
    return DiagramVector(x.bottom, x.top, {_rotate_matching(m, clicks): c for m, c in x.terms.items()})


def involute(x, unitary_vars: Iterable[str] = ()) -> DiagramVector:
    x = _vec(x)
    uv = tuple(unitary_vars)
    return DiagramVector(
        x.top, x.bottom, {_involute_matching(m): star_involution(c, uv) for m, c in x.terms.items()}
    )


def _cap_matching(mt: Matching, site: str, index: int) -> tuple[Matching, int]:
    m, n = mt.bottom, mt.top
    if site == "top":
        if not 1 <= index < n:
            raise IndexOutOfRange(f"top cap at {index} needs top positions {index},{index + 1} of {n}")
        capper = Matching(n, n - 2, _cup_pairs(n, index, top_side=True))
        return _compose_matchings(mt, capper)
    if site == "bottom":
        if not 1 <= index < m:
            raise IndexOutOfRange(f"bottom cap at {index} needs bottom positions {index},{index + 1} of {m}")
        capper = Matching(m - 2, m, _cup_pairs(m, index, top_side=False))
        return _compose_matchings(capper, mt)
    if site in ("left", "right"):
        if m < 1 or n < 1:
            raise IndexOutOfRange("side caps need a point on both bottom and top")
        partner = mt.partner()
        if site == "left":
            a, b = 1, m + n  # bottom-left and top-left are adjacent across the left edge
        else:
            a, b = m, m + 1
        if partner[a] == b:
            loops = 1
            rest = [p for p in mt.pairs if p != tuple(sorted((a, b)))]
            joined = rest
        else:
            loops = 0
            pa, pb = partner[a], partner[b]
            joined = [p for p in mt.pairs if a not in p and b not in p] + [(pa, pb)]
        # relabel the surviving points
        keep = [p for p in range(1, m + n + 1) if p not in (a, b)]
        new = {p: i + 1 for i, p in enumerate(keep)}
        return Matching(m - 1, n - 1, tuple((new[x], new[y]) for x, y in joined)), loops
    raise ValueError(f"unknown cap site {site!r}")


def _cup_pairs(k: int, index: int, top_side: bool) -> tuple:
    """Matching on a (k, k-2) or (k-2, k) box joining positions index, index+1 of the k side."""
    other = k - 2
    total = k + other
    pairs = []
    if top_side:
        # bottom has k points, top has k-2
        pairs.append((index, index + 1))
        others = [i for i in range(1, k + 1) if i not in (index, index + 1)]
        for j, b in enumerate(others, start=1):
            pairs.append((b, total + 1 - j))
    else:
        # bottom has k-2 points, top has k
        def top_label(j):
            return total + 1 - j

        pairs.append((top_label(index), top_label(index + 1)))
        others = [j for j in range(1, k + 1) if j not in (index, index + 1)]
        for i, j in enumerate(others, start=1):
            pairs.append((i, top_label(j)))
    return tuple(pairs)


def cap(x, site: str = "top", index: int = 1, d=None) -> DiagramVector:
    """Join two adjacent boundary points at ``site`` (top, bottom, left or right)."""
    x = _vec(x)
    d = as_ratfunc(d if d is not None else "d")
    out: dict = {}
    shape = None
    for mt, c in x.terms.items():
        new, loops = _cap_matching(mt, site, index)
        shape = (new.bottom, new.top)
        c = c * d ** loops
        out[new] = out[new] + c if new in out else c
    if shape is None:
        m, n = x.bottom, x.top
        shape = {"top": (m, n - 2), "bottom": (m - 2, n)}.get(site, (m - 1, n - 1))
    return DiagramVector(shape[0], shape[1], out)


def close_trace(x, d) -> RatFunc:
    """Close a square diagram by joining top to bottom around the right side."""
    x = _vec(x)
    if x.bottom != x.top:
        raise BoundaryMismatch("trace needs equal bottom and top counts")
    y = x
    while y.bottom:
        y = cap(y, "right", d=d)
    return y.coefficient(Matching(0, 0, ()))


def close_trace_left(x, d) -> RatFunc:
    """Closure around the left side; agrees with :func:`close_trace` for spherical data."""
    x = _vec(x)
    if x.bottom != x.top:
        raise BoundaryMismatch("trace needs equal bottom and top counts")
    y = x
    while y.bottom:
        y = cap(y, "left", d=d)
    return y.coefficient(Matching(0, 0, ()))


def inner_product(x, y, d) -> RatFunc:
    return close_trace(compose(x, y, d), d)


def gram_matrix(basis: Sequence[Matching], d) -> list[list[RatFunc]]:
    d = as_ratfunc(d)
    out = []
    for a in basis:
        row = []
        for b in basis:
            mt, loops = _compose_matchings(a, b)
            row.append(close_trace(DiagramVector.of(mt), d) * d ** loops)
        out.append(row)
    return out


def rref(matrix: Sequence[Sequence]) -> tuple[list[list[RatFunc]], list[int]]:
    """Exact reduced row echelon form over the fraction field."""
    A = [[as_ratfunc(x) for x in row] for row in matrix]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        p = next((i for i in range(r, rows) if not A[i][c].is_zero()), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = A[r][c].inverse()
        A[r] = [x * inv for x in A[r]]
        for i in range(rows):
            if i != r and not A[i][c].is_zero():
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A, pivots


def rank(matrix) -> int:
    return len(rref(matrix)[1])


def null_space(matrix) -> list[list[RatFunc]]:
    """Basis of the right null space, one coefficient list per vector."""
    R, pivots = rref(matrix)
    cols = len(matrix[0]) if matrix else 0
    free = [c for c in range(cols) if c not in pivots]
    out = []
    for f in free:
        v = [const(0)] * cols
        v[f] = const(1)
        for i, pc in enumerate(pivots):
            v[pc] = -R[i][f]
        out.append(v)
    return out


def negligible_vectors(basis: Sequence[Matching], d, gram=None) -> list[DiagramVector]:
    G = gram if gram is not None else gram_matrix(basis, d)
    m, n = basis[0].bottom, basis[0].top
    return [
        DiagramVector(m, n, {b: c for b, c in zip(basis, v)})
        for v in null_space(G)
    ]


def permutation_diagram(sigma: Sequence[int]) -> Matching:
    """Bottom point ``i`` joined to the top point ``sigma[i-1]``-th from the left."""
    n = len(sigma)
    if sorted(sigma) != list(range(1, n + 1)):
        raise ValueError(f"{sigma} is not a permutation of 1..{n}")
    return Matching(n, n, tuple((i, 2 * n + 1 - s) for i, s in enumerate(sigma, start=1)))


def _sign(perm: Sequence[int]) -> int:
    s = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                s = -s
    return s


def antisymmetrizer(m: int) -> DiagramVector:
    if m < 1:
        raise ValueError("antisymmetrizer needs at least one strand")
    w = Fraction(1, math.factorial(m))
    terms = {}
    for p in itertools.permutations(range(1, m + 1)):
        terms[permutation_diagram(p)] = const(w * _sign(p))
    return DiagramVector(m, m, terms)


def rotation_matrix(basis: Sequence[Matching]) -> list[list[int]]:
    """Column j holds the coordinates of rotate(basis[j])."""
    index = {b: i for i, b in enumerate(basis)}
    n = len(basis)
    R = [[0] * n for _ in range(n)]
    for j, b in enumerate(basis):
        R[index[_rotate_matching(b)]][j] = 1
    return R


def _matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def eigen_check(n_points: int) -> bool:
    """True when rotating ``n_points`` clicks is the identity on the square box basis."""
    if n_points % 2:
        raise ValueError("box spaces have an even number of points")
    basis = box_basis(n_points // 2)
    R = rotation_matrix(basis)
    P = [[int(i == j) for j in range(len(basis))] for i in range(len(basis))]
    for _ in range(n_points):
        P = _matmul(R, P)
    return P == [[int(i == j) for j in range(len(basis))] for i in range(len(basis))]
