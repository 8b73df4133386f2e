"""Spin models: GPA(*_n) loop functionals under the unnormalised state sum.

For the star graph *_n every shaded region is labelled by the single odd
vertex, so a state is just a labelling of the unshaded regions by S = {0..n-1}
and adjacency is automatic.  Loops are written with the odd vertex omitted.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import sympy

from .ring import RatFunc, as_ratfunc, const

__all__ = [
    "ArityMismatch",
    "ShadingInconsistent",
    "LoopFunctional",
    "ShadedTangleSpec",
    "action1",
    "compose_tangles",
    "twobox_matrix",
    "matrix_product",
    "hadamard_product",
    "transpose",
    "perron",
    "PerronData",
    "tangles",
]


class ArityMismatch(ValueError):
    pass


class ShadingInconsistent(ValueError):
    pass


@dataclass(frozen=True)
class LoopFunctional:
    n: int
    arity: int
    values: Mapping = field(default_factory=dict)  # tuple of labels -> RatFunc
    shading: str = "-"  # shading of the based region; "-" means the star vertex

    def __post_init__(self):
        clean = {}
        for k, v in dict(self.values).items():
            k = tuple(k)
            if len(k) != self.arity or any(not 0 <= x < self.n for x in k):
                raise ArityMismatch(f"loop {k} does not fit arity {self.arity} over {self.n} labels")
            v = as_ratfunc(v)
            if not v.is_zero():
                clean[k] = v
        object.__setattr__(self, "values", clean)

    def __call__(self, loop) -> RatFunc:
        return self.values.get(tuple(loop), const(0))

    @classmethod
    def delta(cls, n, loop, shading="-"):
        return cls(n, len(loop), {tuple(loop): 1}, shading)

    def __eq__(self, other):
        return (
            isinstance(other, LoopFunctional)
            and (self.n, self.arity, self.shading) == (other.n, other.arity, other.shading)
            and self.values == other.values
        )

    def __hash__(self):
        return hash((self.n, self.arity, tuple(sorted(self.values))))

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n, "arity": self.arity, "shading": self.shading,
                "values": [[list(k), str(v)] for k, v in sorted(self.values.items())],
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text) -> "LoopFunctional":
        data = json.loads(text) if isinstance(text, str) else text
        vals = {tuple(k): as_ratfunc(v) for k, v in data["values"]}
        return cls(int(data["n"]), int(data["arity"]), vals, data.get("shading", "-"))


@dataclass(frozen=True)
class ShadedTangleSpec:
    """Planar tangle in region form.

    ``regions`` maps region id -> shaded flag.  ``strings`` lists pairs of
    regions separated by a string.  ``inputs`` and ``output`` are boundary
    region sequences, read from the starred region.
    """

    regions: Mapping
    strings: tuple
    inputs: tuple
    output: tuple

    def __post_init__(self):
        for a, b in self.strings:
            if bool(self.regions[a]) == bool(self.regions[b]):
                raise ShadingInconsistent(f"string between {a} and {b} separates equal shadings")
        for seq in tuple(self.inputs) + (tuple(self.output),):
            if len(seq) % 2 and len(seq) > 1:
                raise ShadingInconsistent(f"odd boundary {seq}")
            for x, y in zip(seq, seq[1:]):
                if bool(self.regions[x]) == bool(self.regions[y]):
                    raise ShadingInconsistent(f"boundary {seq} does not alternate")

    def unshaded(self) -> list:
        return sorted(r for r, s in self.regions.items() if not s)

    def read(self, seq, state) -> tuple:
        return tuple(state[r] for r in seq if not self.regions[r])

    def arity(self, seq) -> int:
        return sum(1 for r in seq if not self.regions[r])

    @classmethod
    def from_json(cls, text) -> "ShadedTangleSpec":
        data = json.loads(text) if isinstance(text, str) else text
        return cls(
            {k: bool(v) for k, v in data["regions"].items()},
            tuple(tuple(s) for s in data.get("strings", [])),
            tuple(tuple(s) for s in data["inputs"]),
            tuple(data["output"]),
        )


def action1(tangle: ShadedTangleSpec, inputs: Sequence[LoopFunctional], n: int | None = None) -> LoopFunctional:
    """Sum over labellings of unshaded regions of the product of input values."""
    if len(inputs) != len(tangle.inputs):
        raise ArityMismatch(f"{len(tangle.inputs)} discs but {len(inputs)} inputs")
    if n is None:
        if not inputs:
            raise ArityMismatch("n is required when the tangle has no inputs")
        n = inputs[0].n
    for f, seq in zip(inputs, tangle.inputs):
        if f.n != n or f.arity != tangle.arity(seq):
            raise ArityMismatch(f"functional of arity {f.arity} on a disc of arity {tangle.arity(seq)}")
    free = tangle.unshaded()
    out: dict = {}
    for labels in itertools.product(range(n), repeat=len(free)):
        state = dict(zip(free, labels))
        val = const(1)
        for f, seq in zip(inputs, tangle.inputs):
            val = val * f(tangle.read(seq, state))
            if val.is_zero():
                break
        if val.is_zero():
            continue
        key = tangle.read(tangle.output, state)
        out[key] = out[key] + val if key in out else val
    based = tangle.output[0] if tangle.output else None
    shading = "-" if based is None or tangle.regions[based] else "+"
    return LoopFunctional(n, tangle.arity(tangle.output), out, shading)


def compose_tangles(outer: ShadedTangleSpec, index: int, inner: ShadedTangleSpec) -> ShadedTangleSpec:
    """Insert ``inner`` into input disc ``index`` of ``outer``."""
    seq_out = outer.inputs[index]
    if len(seq_out) != len(inner.output):
        raise ArityMismatch("boundary lengths differ")
    parent = {("o", r): ("o", r) for r in outer.regions}
    parent.update({("i", r): ("i", r) for r in inner.regions})

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in zip(seq_out, inner.output):
        if outer.regions[a] != inner.regions[b]:
            raise ShadingInconsistent("shadings disagree along the glued boundary")
        ra, rb = find(("o", a)), find(("i", b))
        if ra != rb:
            parent[rb] = ra

    def name(tag, r):
        root = find((tag, r))
        return f"{root[0]}.{root[1]}"

    regions = {}
    for r, s in outer.regions.items():
        regions[name("o", r)] = s
    for r, s in inner.regions.items():
        regions[name("i", r)] = s
    strings = tuple((name("o", a), name("o", b)) for a, b in outer.strings)
    strings += tuple((name("i", a), name("i", b)) for a, b in inner.strings)
    inputs = [tuple(name("o", r) for r in s) for s in outer.inputs]
    inputs[index : index + 1] = [tuple(name("i", r) for r in s) for s in inner.inputs]
    output = tuple(name("o", r) for r in outer.output)
    return ShadedTangleSpec(regions, strings, tuple(inputs), output)


def twobox_matrix(f: LoopFunctional) -> list[list[RatFunc]]:
    if f.arity != 2:
        raise ArityMismatch(f"2-box expected, got arity {f.arity}")
    return [[f((a, b)) for b in range(f.n)] for a in range(f.n)]


def from_matrix(M) -> LoopFunctional:
    n = len(M)
    return LoopFunctional(n, 2, {(a, b): M[a][b] for a in range(n) for b in range(n)})


def matrix_product(A, B):
    n = len(A)
    return [[sum((A[i][k] * B[k][j] for k in range(n)), const(0)) for j in range(n)] for i in range(n)]


def hadamard_product(A, B):
    return [[A[i][j] * B[i][j] for j in range(len(A))] for i in range(len(A))]


def transpose(A):
    return [list(r) for r in zip(*A)]


# a small library of tangles; "s*" regions are shaded


def tangles() -> dict:
    lib = {}
    # input 2-box (i, j) inside a 3-box (i, j, k)
    lib["worked"] = ShadedTangleSpec(
        {"s": True, "i": False, "j": False, "k": False},
        (("s", "i"), ("s", "j"), ("s", "k")),
        (("s", "i", "s", "j"),),
        ("s", "i", "s", "j", "s", "k"),
    )
    lib["cupcap"] = ShadedTangleSpec(
        {"s1": True, "s2": True, "u": False}, (("s1", "u"), ("s2", "u")), (), ("s1", "u", "s2", "u")
    )
    lib["identity"] = ShadedTangleSpec(
        {"s": True, "u1": False, "u2": False}, (("s", "u1"), ("s", "u2")), (), ("s", "u1", "s", "u2")
    )
    # closed string around an unshaded disc, outer region shaded
    lib["circle_shaded_outside"] = ShadedTangleSpec({"s": True, "u": False}, (("s", "u"),), (), ("s",))
    lib["circle_unshaded_outside"] = ShadedTangleSpec({"u": False, "s": True}, (("u", "s"),), (), ("u",))
    # vertical stacking and pointwise product of two 2-boxes
    lib["stack"] = ShadedTangleSpec(
        {"s": True, "a": False, "c": False, "b": False},
        (("s", "a"), ("s", "c"), ("s", "b")),
        (("s", "a", "s", "c"), ("s", "c", "s", "b")),
        ("s", "a", "s", "b"),
    )
    lib["hadamard"] = ShadedTangleSpec(
        {"s": True, "a": False, "b": False},
        (("s", "a"), ("s", "b")),
        (("s", "a", "s", "b"), ("s", "a", "s", "b")),
        ("s", "a", "s", "b"),
    )
    lib["transpose"] = ShadedTangleSpec(
        {"s": True, "a": False, "b": False}, (("s", "a"), ("s", "b")), (("s", "b", "s", "a"),), ("s", "a", "s", "b")
    )
    # close a 2-box on one side: result is a 1-box in the surviving region
    lib["partial_trace"] = ShadedTangleSpec(
        {"s": True, "a": False, "b": False}, (("s", "a"), ("s", "b")), (("s", "a", "s", "b"),), ("s", "a")
    )
    lib["insert_circle"] = ShadedTangleSpec(
        {"s": True, "a": False, "b": False, "c": False},
        (("s", "a"), ("s", "b"), ("s", "c")),
        (("s", "a", "s", "b"),),
        ("s", "a", "s", "b"),
    )
    lib["insert_shaded_circle"] = ShadedTangleSpec(
        {"s": True, "a": False, "b": False, "t": True},
        (("s", "a"), ("s", "b"), ("a", "t")),
        (("s", "a", "s", "b"),),
        ("s", "a", "s", "b"),
    )
    return lib


@dataclass(frozen=True)
class PerronData:
    n: int
    eigenvalue: sympy.Expr
    vector: tuple  # odd vertex first

    @property
    def eigenvalue_squared(self):
        return sympy.nsimplify(self.eigenvalue ** 2)

    def is_rational(self) -> bool:
        return self.eigenvalue.is_Rational

    def as_dict(self):
        return {"n": self.n, "eigenvalue": str(self.eigenvalue), "vector": [str(x) for x in self.vector]}


def star_adjacency(n: int) -> sympy.Matrix:
    A = sympy.zeros(n + 1, n + 1)
    for i in range(1, n + 1):
        A[0, i] = A[i, 0] = 1
    return A


def perron(n: int) -> PerronData:
    if n < 1:
        raise ValueError("n must be positive")
    lam = sympy.sqrt(n)
    omega = (lam,) + (sympy.Integer(1),) * n
    A = star_adjacency(n)
    lhs = A * sympy.Matrix(omega)
    rhs = lam * sympy.Matrix(omega)
    # compare squares so the check stays in the integers
    for a, b in zip(lhs, rhs):
        if sympy.expand(a ** 2 - b ** 2) != 0 or sympy.simplify(a - b) != 0:
            raise ArithmeticError("Perron vector check failed")
    return PerronData(n, lam, omega)
