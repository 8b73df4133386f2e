"""Virtual link diagrams and skein state sums.

A diagram is stored as its signed Gauss words, one per component.  Virtual
crossings are never recorded: a state sum only needs, for every classical
crossing, which of its four ends are reconnected to which.

Each classical crossing has four slots ``ui, oi, uo, oo`` (under/over, in/out).
The three reconnections are

* ``PARALLEL``:   ui-oi and uo-oo
* ``TURNBACK``:   ui-oo and oi-uo
* ``TRANSVERSE``: ui-uo and oi-oo  (the strands pass straight through)

A rule's coefficients apply at positive crossings; negative crossings use the
star-involuted coefficients.  With these choices a positive kink multiplies
the bracket by ``-A^-3`` and the orthogonal-group invariant by ``a``.
"""

from __future__ import annotations

import random
import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .ring import RatFunc, as_ratfunc, const, parse, star_involution, var

__all__ = [
    "ParseError",
    "InconsistentCode",
    "InapplicableMove",
    "Reconnection",
    "ResolutionRule",
    "StateSumResult",
    "VirtualLinkDiagram",
    "parse_gauss",
    "parse_pd",
    "writhe",
    "state_sum",
    "bracket",
    "bracket_rule",
    "o2_rule",
    "o2_invariant",
    "o2_closed_form",
    "apply_move",
    "move_sites",
    "random_gauss_code",
    "random_move",
]


class ParseError(ValueError):
    pass


class InconsistentCode(ValueError):
    pass


class InapplicableMove(ValueError):
    pass


class Reconnection(Enum):
    PARALLEL = "Parallel"
    TURNBACK = "Turnback"
    TRANSVERSE = "Transverse"


# slot indices inside a crossing
UI, OI, UO, OO = range(4)

_PAIRS = {
    Reconnection.PARALLEL: ((UI, OI), (UO, OO)),
    Reconnection.TURNBACK: ((UI, OO), (OI, UO)),
    Reconnection.TRANSVERSE: ((UI, UO), (OI, OO)),
}


@dataclass(frozen=True)
class Crossing:
    id: int
    sign: int


@dataclass(frozen=True)
class VirtualLinkDiagram:
    """Signed Gauss words; an empty word is a crossingless circle."""

    words: tuple  # tuple of tuples of (kind, label, sign) with kind in "OU"

    def __post_init__(self):
        seen: dict = {}
        for w in self.words:
            for kind, label, sign in w:
                seen.setdefault(label, []).append((kind, sign))
        for label, occ in seen.items():
            kinds = sorted(k for k, _ in occ)
            if kinds != ["O", "U"]:
                raise InconsistentCode(f"crossing {label} must appear once as O and once as U, got {kinds}")
            if occ[0][1] != occ[1][1]:
                raise InconsistentCode(f"crossing {label} has mismatched signs")

    @classmethod
    def unknot(cls) -> "VirtualLinkDiagram":
        return cls(((),))

    @property
    def crossings(self) -> list[Crossing]:
        out = {}
        for w in self.words:
            for _, label, sign in w:
                out[label] = sign
        return [Crossing(k, s) for k, s in sorted(out.items())]

    @property
    def num_crossings(self) -> int:
        return sum(len(w) for w in self.words) // 2

    @property
    def num_components(self) -> int:
        return len(self.words)

    def signs(self) -> dict:
        return {c.id: c.sign for c in self.crossings}

    def successor(self) -> dict:
        """Map from each out-slot ``(label, UO|OO)`` to the in-slot it feeds."""
        succ = {}
        for w in self.words:
            n = len(w)
            for i, (kind, label, _) in enumerate(w):
                nk, nl, _ = w[(i + 1) % n]
                out_slot = (label, OO if kind == "O" else UO)
                in_slot = (nl, OI if nk == "O" else UI)
                succ[out_slot] = in_slot
        return succ

    def free_loops(self) -> int:
        return sum(1 for w in self.words if not w)

    def gauss_code(self) -> str:
        return ";".join("".join(f"{k}{lab}{'+' if s > 0 else '-'}" for k, lab, s in w) for w in self.words)

    def __str__(self):
        return self.gauss_code()


_TOKEN = re.compile(r"([OU])(\d+)([+-])")


def parse_gauss(code: str) -> VirtualLinkDiagram:
    """Parse ``O1+U2-...`` words separated by ``;``.

    An empty string is the crossingless unknot, and an empty component is an
    extra crossingless circle.
    """
    text = code.strip()
    words = []
    for comp in text.split(";"):
        comp = re.sub(r"\s+", "", comp)
        pos = 0
        word = []
        while pos < len(comp):
            m = _TOKEN.match(comp, pos)
            if not m:
                raise ParseError(f"malformed token at {comp[pos:]!r}")
            word.append((m.group(1), int(m.group(2)), 1 if m.group(3) == "+" else -1))
            pos = m.end()
        words.append(tuple(word))
    return VirtualLinkDiagram(tuple(words))


_PD_X = re.compile(r"X\[\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\]")


def parse_pd(code: str) -> VirtualLinkDiagram:
    """Parse a planar-diagram code ``X[a,b,c,d] X[...]...``.

    Slot order: ``a`` is the incoming under edge, then ``b, c, d``
    counterclockwise, so ``c`` is the outgoing under edge and the over strand
    joins ``b`` and ``d``.  The crossing is positive when the over strand runs
    from ``d`` to ``b``.  Edge directions on the over strand are inferred from
    the under strands where possible and otherwise from consecutive labels.
    """
    xs = [tuple(int(v) for v in m.groups()) for m in _PD_X.finditer(code)]
    stripped = _PD_X.sub("", code)
    if re.sub(r"[\s,;\[\]PD()]", "", stripped):
        raise ParseError(f"unrecognised content in PD code: {stripped.strip()!r}")
    if not xs:
        raise ParseError("no crossings found")
    occurrences: dict = {}
    for ci, x in enumerate(xs):
        for pos, e in enumerate(x):
            occurrences.setdefault(e, []).append((ci, pos))
    for e, occ in occurrences.items():
        if len(occ) != 2:
            raise InconsistentCode(f"edge {e} occurs {len(occ)} times")
    # role[ci][pos] in {"in", "out"}
    role = [{0: "in", 2: "out"} for _ in xs]
    changed = True
    while changed:
        changed = False
        for ci, x in enumerate(xs):
            for pos in (1, 3):
                if pos in role[ci]:
                    continue
                e = x[pos]
                (c1, p1), (c2, p2) = occurrences[e]
                other = (c2, p2) if (c1, p1) == (ci, pos) else (c1, p1)
                if other[1] in role[other[0]]:
                    role[ci][pos] = "out" if role[other[0]][other[1]] == "in" else "in"
                    role[ci][4 - pos] = "in" if role[ci][pos] == "out" else "out"
                    changed = True
    maxe = max(occurrences)
    for ci, x in enumerate(xs):
        if 1 not in role[ci]:
            b, d = x[1], x[3]
            d_in = b == d + 1 or (d == maxe and b == min(occurrences))
            role[ci][3] = "in" if d_in else "out"
            role[ci][1] = "out" if d_in else "in"
    # build slot graph
    slot_of = {}
    signs = {}
    for ci, x in enumerate(xs):
        label = ci + 1
        signs[label] = 1 if role[ci][3] == "in" else -1
        slot_of[(ci, 0)] = (label, UI)
        slot_of[(ci, 2)] = (label, UO)
        slot_of[(ci, 1)] = (label, OI if role[ci][1] == "in" else OO)
        slot_of[(ci, 3)] = (label, OI if role[ci][3] == "in" else OO)
    succ = {}
    for e, occ in occurrences.items():
        s1, s2 = slot_of[occ[0]], slot_of[occ[1]]
        if s1[1] in (UO, OO) and s2[1] in (UI, OI):
            succ[s1] = s2
        elif s2[1] in (UO, OO) and s1[1] in (UI, OI):
            succ[s2] = s1
        else:
            raise InconsistentCode(f"edge {e} is not oriented consistently")
    # traverse into Gauss words
    words = []
    done = set()
    for start in sorted(succ):
        if start in done:
            continue
        word = []
        cur = start
        while cur not in done:
            done.add(cur)
            nxt = succ[cur]
            label, slot = nxt
            word.append(("O" if slot == OI else "U", label, signs[label]))
            cur = (label, OO if slot == OI else UO)
        words.append(tuple(word[-1:] + word[:-1]))
    return VirtualLinkDiagram(tuple(words))


def writhe(diag: VirtualLinkDiagram) -> int:
    return sum(c.sign for c in diag.crossings)


# ---------------------------------------------------------------- state sums


@dataclass(frozen=True)
class ResolutionRule:
    terms: tuple  # ((Reconnection, RatFunc), ...)
    d: RatFunc
    twist_factor: RatFunc
    unitary_vars: tuple = ()

    def negative_terms(self) -> tuple:
        return tuple((r, star_involution(c, self.unitary_vars)) for r, c in self.terms)


@dataclass(frozen=True)
class StateSumResult:
    raw: RatFunc
    writhe: int
    normalized: RatFunc

    def as_dict(self) -> dict:
        return {"raw": str(self.raw), "writhe": self.writhe, "normalized": str(self.normalized)}


def _count_loops(n: int, labels: list, succ_idx: list, choice_pairs: list) -> int:
    # slots are numbered 4*i + s; succ_idx[k] links out-slot -> in-slot
    parent = list(range(4 * n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = 4 * n
    for a, b in succ_idx:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            comps -= 1
    for a, b in choice_pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            comps -= 1
    return comps


def _state_histogram(diag: VirtualLinkDiagram, n_terms: int, pairings: Sequence) -> Counter:
    """Count states by (per-sign term usage, number of loops)."""
    labels = [c.id for c in diag.crossings]
    signs = [c.sign for c in diag.crossings]
    index = {lab: i for i, lab in enumerate(labels)}
    n = len(labels)
    succ_idx = [(4 * index[a] + sa, 4 * index[b] + sb) for (a, sa), (b, sb) in diag.successor().items()]
    hist: Counter = Counter()
    free = diag.free_loops()
    # iterate over all assignments with an odometer
    choice = [0] * n
    local = [[[(4 * i + p, 4 * i + q) for p, q in pairings[t]] for t in range(n_terms)] for i in range(n)]
    while True:
        pairs = []
        usage = [0] * (2 * n_terms)
        for i in range(n):
            t = choice[i]
            pairs.extend(local[i][t])
            usage[t + (0 if signs[i] > 0 else n_terms)] += 1
        loops = (_count_loops(n, labels, succ_idx, pairs) if n else 0) + free
        hist[(tuple(usage), loops)] += 1
        k = 0
        while k < n:
            choice[k] += 1
            if choice[k] < n_terms:
                break
            choice[k] = 0
            k += 1
        if k == n:
            break
    return hist


def state_sum(diag: VirtualLinkDiagram, rule: ResolutionRule) -> StateSumResult:
    """Sum over states of (product of coefficients) times d^(number of loops).

    ``normalized = twist_factor^(-writhe) * raw / d``.
    """
    recon = [r for r, _ in rule.terms]
    pos = [c for _, c in rule.terms]
    neg = [c for _, c in rule.negative_terms()]
    k = len(recon)
    hist = _state_histogram(diag, k, [_PAIRS[r] for r in recon])
    raw = const(0)
    dpow: dict = {}
    for (usage, loops), mult in sorted(hist.items()):
        term = const(mult)
        for t in range(k):
            if usage[t]:
                term = term * pos[t] ** usage[t]
            if usage[k + t]:
                term = term * neg[t] ** usage[k + t]
        if loops not in dpow:
            dpow[loops] = rule.d ** loops
        raw = raw + term * dpow[loops]
    w = writhe(diag)
    normalized = rule.twist_factor ** (-w) * raw / rule.d
    return StateSumResult(raw, w, normalized)


def bracket_rule(A: str = "A") -> ResolutionRule:
    a = var(A)
    return ResolutionRule(
        terms=((Reconnection.PARALLEL, a), (Reconnection.TURNBACK, a ** -1)),
        d=-(a ** 2) - a ** -2,
        twist_factor=-(a ** -3),
        unitary_vars=(A,),
    )


def bracket(diag: VirtualLinkDiagram, A: str = "A") -> StateSumResult:
    return state_sum(diag, bracket_rule(A))


def o2_rule(a: str = "a") -> ResolutionRule:
    av = var(a)
    x = (av ** -1 - av) / 2
    z = (av ** -1 + av) / 2
    return ResolutionRule(
        terms=((Reconnection.PARALLEL, x), (Reconnection.TURNBACK, -x), (Reconnection.TRANSVERSE, z)),
        d=const(2),
        twist_factor=av,
        unitary_vars=(a,),
    )


def o2_invariant(diag: VirtualLinkDiagram, a: str = "a") -> StateSumResult:
    return state_sum(diag, o2_rule(a))


def o2_closed_form(wr: int, a: str = "a") -> RatFunc:
    av = var(a)
    return av ** wr + av ** (-wr)


# ---------------------------------------------------------------- moves

# A site is a tuple whose first entry names the move; positions index gaps in
# the Gauss words: gap (c, p) sits just before entry p of component c.


def _next_label(diag: VirtualLinkDiagram) -> int:
    labels = [c.id for c in diag.crossings]
    return max(labels, default=0) + 1


def _cyclic_pairs(word: tuple):
    n = len(word)
    if n < 2:
        return
    for i in range(n):
        yield i, (i + 1) % n


def move_sites(diag: VirtualLinkDiagram, move: str) -> list:
    words = diag.words
    gaps = [(c, p) for c, w in enumerate(words) for p in range(max(len(w), 1))]
    if move == "R1+":
        return [("R1+", g, s, first) for g in gaps for s in (1, -1) for first in "OU"]
    if move == "R1-":
        out = []
        for c, w in enumerate(words):
            for i, j in _cyclic_pairs(w):
                if w[i][1] == w[j][1] and len(w) >= 2 and i != j:
                    out.append(("R1-", c, i))
        return out
    if move == "R2+":
        out = []
        for g1 in gaps:
            for g2 in gaps:
                for s in (1, -1):
                    for same in (True, False):
                        out.append(("R2+", g1, g2, s, same))
        return out
    if move == "R2-":
        return _r2_removal_sites(diag)
    if move == "R3":
        return _r3_sites(diag)
    if move in ("vR1", "vR2", "vR3", "mixedR3"):
        return [(move,)]
    raise ValueError(f"unknown move {move!r}")


def _occurrences(diag: VirtualLinkDiagram) -> dict:
    occ: dict = {}
    for c, w in enumerate(diag.words):
        for p, (kind, label, sign) in enumerate(w):
            occ[(label, kind)] = (c, p)
    return occ


def _adjacent(diag, a, b) -> tuple | None:
    """If positions a and b are cyclically consecutive in one word, return (c, first, second)."""
    (ca, pa), (cb, pb) = a, b
    if ca != cb:
        return None
    n = len(diag.words[ca])
    if n < 2:
        return None
    if (pa + 1) % n == pb:
        return (ca, pa, pb)
    if (pb + 1) % n == pa:
        return (ca, pb, pa)
    return None


def _r2_removal_sites(diag: VirtualLinkDiagram) -> list:
    occ = _occurrences(diag)
    signs = diag.signs()
    out = []
    labels = sorted(signs)
    for i in labels:
        for j in labels:
            if i >= j or signs[i] != -signs[j]:
                continue
            if _adjacent(diag, occ[(i, "O")], occ[(j, "O")]) and _adjacent(diag, occ[(i, "U")], occ[(j, "U")]):
                out.append(("R2-", i, j))
    return out


def _r3_sites(diag: VirtualLinkDiagram) -> list:
    occ = _occurrences(diag)
    signs = diag.signs()
    labels = sorted(signs)
    out = []
    for x in labels:
        for y in labels:
            for z in labels:
                if len({x, y, z}) < 3:
                    continue
                # x = top/middle, y = top/bottom, z = middle/bottom
                top = (occ[(x, "O")], occ[(y, "O")])
                mid = (occ[(x, "U")], occ[(z, "O")])
                bot = (occ[(y, "U")], occ[(z, "U")])
                if not all(_adjacent(diag, *pair) for pair in (top, mid, bot)):
                    continue
                if _r3_valid(diag, top, mid, bot, signs[x], signs[y], signs[z]):
                    out.append(("R3", x, y, z))
    return out


def _r3_valid(diag, top, mid, bot, sx, sy, sz) -> bool:
    # reference order on each strand: top (x, y), middle (x, z), bottom (y, z)
    def reversed_(pair):
        c, first, _ = _adjacent(diag, *pair)
        return first != pair[0][1]

    rt, rm, rb = reversed_(top), reversed_(mid), reversed_(bot)
    nx = sx * (-1) ** (rt + rm)
    ny = sy * (-1) ** (rt + rb)
    nz = sz * (-1) ** (rm + rb)
    return nx == ny == nz


def _insert(words: list, gap: tuple, items: list) -> None:
    c, p = gap
    w = list(words[c])
    words[c] = tuple(w[:p] + items + w[p:])


def apply_move(diag: VirtualLinkDiagram, site: tuple) -> VirtualLinkDiagram:
    """Apply one Reidemeister move described by ``site`` (see :func:`move_sites`)."""
    move = site[0]
    words = [tuple(w) for w in diag.words]
    if move in ("vR1", "vR2", "vR3", "mixedR3"):
        # virtual crossings are not stored, so these moves do not change the data
        return diag
    if move == "R1+":
        _, gap, s, first = site
        c, p = gap
        if c >= len(words) or p > len(words[c]):
            raise InapplicableMove(f"no gap {gap}")
        k = _next_label(diag)
        pair = [("O", k, s), ("U", k, s)] if first == "O" else [("U", k, s), ("O", k, s)]
        _insert(words, gap, pair)
        return VirtualLinkDiagram(tuple(words))
    if move == "R1-":
        _, c, i = site
        w = words[c] if c < len(words) else ()
        if len(w) < 2 or not 0 <= i < len(w) or w[i][1] != w[(i + 1) % len(w)][1]:
            raise InapplicableMove(f"no kink at {site}")
        j = (i + 1) % len(w)
        words[c] = tuple(e for t, e in enumerate(w) if t not in (i, j))
        return VirtualLinkDiagram(tuple(words))
    if move == "R2+":
        _, g1, g2, s, same = site
        i, j = _next_label(diag), _next_label(diag) + 1
        over = [("O", i, s), ("O", j, -s)]
        under = [("U", i, s), ("U", j, -s)] if same else [("U", j, -s), ("U", i, s)]
        if g1[0] >= len(words) or g2[0] >= len(words):
            raise InapplicableMove(f"bad gaps {g1}, {g2}")
        if g1 == g2:
            _insert(words, g1, over + under)
        elif g1[0] == g2[0] and g1[1] > g2[1]:
            _insert(words, g1, over)
            _insert(words, g2, under)
        else:
            _insert(words, g2, under)
            _insert(words, g1, over)
        return VirtualLinkDiagram(tuple(words))
    if move == "R2-":
        _, i, j = site
        if site not in _r2_removal_sites(diag):
            raise InapplicableMove(f"no bigon at {site}")
        words = [tuple(e for e in w if e[1] not in (i, j)) for w in words]
        return VirtualLinkDiagram(tuple(words))
    if move == "R3":
        if site not in _r3_sites(diag):
            raise InapplicableMove(f"no valid triangle at {site}")
        _, x, y, z = site
        occ = _occurrences(diag)
        for pair in (((x, "O"), (y, "O")), ((x, "U"), (z, "O")), ((y, "U"), (z, "U"))):
            c, p1, p2 = _adjacent(diag, occ[pair[0]], occ[pair[1]])
            w = list(words[c])
            w[p1], w[p2] = w[p2], w[p1]
            words[c] = tuple(w)
        return VirtualLinkDiagram(tuple(words))
    raise ValueError(f"unknown move {move!r}")


def random_gauss_code(n: int, rng: random.Random) -> str:
    """A uniformly shuffled one-component signed Gauss code on ``n`` crossings."""
    tokens = []
    for label in range(1, n + 1):
        s = rng.choice("+-")
        tokens += [f"O{label}{s}", f"U{label}{s}"]
    rng.shuffle(tokens)
    return "".join(tokens)


def random_move(diag: VirtualLinkDiagram, rng: random.Random, max_crossings: int = 12) -> tuple:
    """Pick a random applicable R1/R2/R3 site, preferring simplifications on large diagrams."""
    kinds = ["R3", "R1-", "R2-"]
    if diag.num_crossings + 2 <= max_crossings:
        kinds += ["R1+", "R2+"]
    rng.shuffle(kinds)
    for kind in kinds:
        sites = move_sites(diag, kind)
        if sites:
            return rng.choice(sites)
    raise InapplicableMove("no move applies")
