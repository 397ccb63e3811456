"""Reduced words over generators with formal inverses, and growth counts
of word classes under relation families closed by left multiplication.

Letters are nonzero ints: ``i + 1`` is generator ``i`` and ``-(i + 1)`` its
inverse, so inversion is negation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import BoundTooSmall, InputError

GENERICITY_NOTE = (
    "class counts equal transcendence degrees only for elements whose sole "
    "algebraic relations are those induced by the declared pairs"
)


@dataclass(frozen=True)
class FreeAlphabet:
    names: tuple

    @classmethod
    def standard(cls, k: int) -> FreeAlphabet:
        return cls(tuple(f"s{i}" for i in range(1, k + 1)))

    @property
    def letters(self) -> tuple:
        """Inverse letters first, then generators; index order inside each."""
        k = len(self.names)
        return tuple(-i for i in range(1, k + 1)) + tuple(range(1, k + 1))

    def inverse(self, letter: int) -> int:
        return -letter

    def format(self, word) -> str:
        if not word:
            return "Id"
        return " ".join(
            self.names[abs(l) - 1] + ("^-1" if l < 0 else "") for l in word
        )

    def index(self, name: str) -> int:
        try:
            return self.names.index(name) + 1
        except ValueError:
            raise InputError(f"unknown generator {name!r}") from None


def free_reduce(word) -> tuple:
    out = []
    for l in word:
        if out and out[-1] == -l:
            out.pop()
        else:
            out.append(l)
    return tuple(out)


def left_mul(letter: int, word: tuple) -> tuple:
    if word and word[0] == -letter:
        return word[1:]
    return (letter,) + word


def enumerate_reduced(alpha: FreeAlphabet, radius: int) -> list[tuple]:
    """All freely reduced words of length <= radius, by length then letter order."""
    order = {l: i for i, l in enumerate(alpha.letters)}
    level = [()]
    out = [()]
    for _ in range(radius):
        nxt = []
        for w in level:
            for l in alpha.letters:
                if w and w[-1] == -l:
                    continue
                nxt.append(w + (l,))
        nxt.sort(key=lambda w: [order[x] for x in w])
        out.extend(nxt)
        level = nxt
    return out


_TOKEN = re.compile(r"([A-Za-z_]\w*)(?:\^(-?)(\d+|l))?$")


@dataclass(frozen=True)
class RelationFamily:
    """Word pairs ``(u, v)`` meaning ``u(x) = v(x)``.

    ``templates`` hold parametric pairs whose exponents are ``a + b*l``,
    instantiated for ``|l| <= bound``.
    """

    pairs: tuple = ()
    templates: tuple = ()  # ((lhs, rhs), ...) with factors (letter, a, b)

    @property
    def parametric(self) -> bool:
        return bool(self.templates)

    @classmethod
    def parse(cls, specs, alpha: FreeAlphabet) -> RelationFamily:
        """``"s1 s2^l = s2^l"``, ``"s1 = 1"``; ``l`` is the family parameter."""
        pairs, templates = [], []
        for spec in specs:
            if spec.count("=") != 1:
                raise InputError(f"relation {spec!r} needs exactly one '='")
            sides = []
            param = False
            for side in spec.split("="):
                factors = []
                for tok in side.split():
                    if tok in ("1", "Id"):
                        continue
                    m = _TOKEN.match(tok)
                    if not m:
                        raise InputError(f"cannot read {tok!r} in relation {spec!r}")
                    gen = alpha.index(m.group(1))
                    sign = -1 if m.group(2) else 1
                    exp = m.group(3) or "1"
                    if exp == "l":
                        param = True
                        factors.append((gen, 0, sign))
                    else:
                        factors.append((gen, sign * int(exp), 0))
                sides.append(tuple(factors))
            if param:
                templates.append(tuple(sides))
            else:
                pairs.append(tuple(_instantiate(s, 0) for s in sides))
        return cls(tuple(pairs), tuple(templates))

    @classmethod
    def fixed_along_powers(cls, fixed: int = 1, along: int = 2) -> RelationFamily:
        """``s_fixed s_along^l = s_along^l`` for every ``l``."""
        return cls((), ((((fixed, 1, 0), (along, 0, 1)), ((along, 0, 1),)),))

    def instantiate(self, bound: int | None) -> list[tuple]:
        out = list(self.pairs)
        if self.templates:
            for l in range(-bound, bound + 1):
                for lhs, rhs in self.templates:
                    out.append((_instantiate(lhs, l), _instantiate(rhs, l)))
        return [(u, v) for u, v in out if u != v]


def _instantiate(factors, l: int) -> tuple:
    word = []
    for gen, a, b in factors:
        e = a + b * l
        word.extend([gen if e > 0 else -gen] * abs(e))
    return free_reduce(word)


@dataclass(frozen=True)
class GrowthReport:
    sizes: tuple  # |Theta_r| for r = 0..R
    shells: tuple  # |Theta_r \ Theta_{r-1}| for r = 1..R
    classes: tuple  # f(r) for r = 0..R
    working_radius: int
    note: str = GENERICITY_NOTE
    partition: dict = field(default=None, compare=False, repr=False)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x: int, y: int):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            if rx > ry:
                rx, ry = ry, rx
            self.parent[ry] = rx


def word_classes(alpha: FreeAlphabet, pairs, radius: int):
    """Partition of the reduced words of length <= radius.

    Returns ``(words, index, find)``; equivalence is generated by every
    left translate ``(w u, w v)`` reachable letter by letter inside the radius.
    """
    words = enumerate_reduced(alpha, radius)
    index = {w: i for i, w in enumerate(words)}
    uf = _UnionFind(len(words))
    seen = set()
    queue = []
    for u, v in pairs:
        u, v = free_reduce(u), free_reduce(v)
        if u != v and len(u) <= radius and len(v) <= radius:
            key = (u, v) if (len(u), u) <= (len(v), v) else (v, u)
            if key not in seen:
                seen.add(key)
                queue.append(key)
    letters = alpha.letters
    while queue:
        u, v = queue.pop()
        uf.union(index[u], index[v])
        for l in letters:
            lu, lv = left_mul(l, u), left_mul(l, v)
            if lu == lv or len(lu) > radius or len(lv) > radius:
                continue
            key = (lu, lv) if (len(lu), lu) <= (len(lv), lv) else (lv, lu)
            if key not in seen:
                seen.add(key)
                queue.append(key)
    # transitivity can join words whose translates were never queued; close
    # under translation until nothing changes (roots are shortest in class)
    changed = True
    while changed:
        changed = False
        for i, w in enumerate(words):
            if len(w) >= radius:
                break
            r = uf.find(i)
            if r == i:
                continue
            root = words[r]
            for l in letters:
                a, b = index[left_mul(l, w)], index[left_mul(l, root)]
                if uf.find(a) != uf.find(b):
                    uf.union(a, b)
                    changed = True
    return words, index, uf.find


def _counts(words, find, r: int) -> list[int]:
    counts = []
    roots = set()
    i = 0
    for rho in range(r + 1):
        while i < len(words) and len(words[i]) <= rho:
            roots.add(find(i))
            i += 1
        counts.append(len(roots))
    return counts


def growth_function(
    alpha: FreeAlphabet, relations: RelationFamily, r: int, bound: int | None = None
) -> GrowthReport:
    """Class counts ``f(0..r)`` under the left-closed equivalence of ``relations``.

    The working radius grows from ``r + 1`` until two consecutive radii give
    the same counts; ``BoundTooSmall`` if that does not happen by ``r + bound``.
    """
    if r < 0:
        raise InputError("radius must be >= 0")
    if relations.parametric and (bound is None or bound < r):
        raise BoundTooSmall(f"parametric relations need bound >= radius ({bound} < {r})")
    pairs = relations.instantiate(bound)
    words = enumerate_reduced(alpha, r)
    sizes = [sum(1 for w in words if len(w) <= rho) for rho in range(r + 1)]
    shells = [sizes[i] - sizes[i - 1] for i in range(1, r + 1)]
    if not pairs:
        return GrowthReport(tuple(sizes), tuple(shells), tuple(sizes), r, partition=None)

    max_extra = max(bound if bound is not None else r + 1, 1)
    prev = None
    for extra in range(1, max_extra + 2):
        R = r + extra
        ws, index, find = word_classes(alpha, pairs, R)
        counts = _counts(ws, find, r)
        if prev is not None and counts == prev[0]:
            words_p, index_p, find_p = prev[1]
            part = {w: find_p(index_p[w]) for w in words_p if len(w) <= r}
            return GrowthReport(tuple(sizes), tuple(shells), tuple(counts), R - 1, partition=part)
        prev = (counts, (ws, index, find))
    raise BoundTooSmall(f"class counts still changing at working radius {r + max_extra + 1}")
