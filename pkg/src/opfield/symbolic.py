"""Free symbolic operator field.

A generator is a pair ``(variable, word)`` standing for ``word(variable)``.
Expressions are polynomials in generators; operators act on them through
the structure constants of a presentation whose slot 0 is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import Field, Mod
from .errors import Unsupported, UnknownLetter
from .words import FROB, INV, OP, Letter, format_word, word_key


def _gen_key(gen):
    var, word = gen
    return (var, word_key(word))


def _mono_key(mono):
    return (sum(e for _, e in mono), tuple((_gen_key(g), e) for g, e in mono))


def _mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for g, e in m2:
        d[g] = d.get(g, 0) + e
    return tuple(sorted(d.items(), key=lambda ge: _gen_key(ge[0])))


class SymExpr:
    """Polynomial in generators with exact coefficients; canonical by construction."""

    __slots__ = ("field", "terms", "_hash")

    def __init__(self, field: Field, terms=None):
        self.field = field
        self.terms = {m: c for m, c in (terms or {}).items() if c}
        self._hash = None

    @classmethod
    def gen(cls, field: Field, var: str, word=()) -> SymExpr:
        return cls(field, {(((var, tuple(word)), 1),): field.one})

    @classmethod
    def const(cls, field: Field, c) -> SymExpr:
        return cls(field, {(): field(c)})

    def _lift(self, other) -> SymExpr:
        if isinstance(other, SymExpr):
            return other
        if isinstance(other, (int, Fraction, Mod)):
            return SymExpr.const(self.field, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return SymExpr(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return SymExpr(self.field, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                c = c1 * c2
                out[m] = out[m] + c if m in out else c
        return SymExpr(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = SymExpr.const(self.field, 1)
        for _ in range(e):
            out = out * self
        return out

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return False
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def normal_form(self) -> tuple:
        """Terms sorted by (total degree, generator order)."""
        return tuple((m, self.terms[m]) for m in sorted(self.terms, key=_mono_key))

    @classmethod
    def from_normal_form(cls, field: Field, nf) -> SymExpr:
        return cls(field, dict(nf))

    def variables(self) -> set:
        return {g[0] for m in self.terms for g, _ in m}

    def generators(self) -> set:
        return {g for m in self.terms for g, _ in m}

    def evaluate(self, values: dict):
        """Substitute field values for generators."""
        acc = self.field.zero
        for m, c in self.terms.items():
            t = c
            for g, e in m:
                t = t * values[g] ** e
            acc = acc + t
        return acc

    def __repr__(self):
        return f"SymExpr({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.normal_form():
            factors = []
            for (var, word), e in m:
                g = var if not word else f"{format_word(word)}({var})"
                factors.append(g if e == 1 else f"{g}^{e}")
            body = "*".join(factors)
            if self.field.characteristic == 0:
                neg = c < 0
                mag = -c if neg else c
            else:
                neg, mag = False, c
            if not body:
                s = str(mag)
            elif mag == 1:
                s = body
            else:
                s = f"{mag}*{body}"
            if parts:
                parts.append(("- " if neg else "+ ") + s)
            else:
                parts.append(("-" if neg else "") + s)
        return " ".join(parts)


class SymRatio:
    """Quotient of two expressions; equality by cross-multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num: SymExpr, den: SymExpr):
        if not den:
            raise ZeroDivisionError("zero denominator")
        lead = den.normal_form()[-1][1]
        inv = 1 / lead
        self.num = num * inv
        self.den = den * inv

    def __eq__(self, other):
        if isinstance(other, SymExpr):
            other = SymRatio(other, SymExpr.const(other.field, 1))
        if not isinstance(other, SymRatio):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def __mul__(self, other):
        return SymRatio(self.num * other.num, self.den * other.den)

    def __add__(self, other):
        return SymRatio(self.num * other.den + other.num * self.den, self.den * other.den)

    def __str__(self):
        return f"({self.num}) / ({self.den})"


@dataclass(frozen=True)
class IdentityCheck:
    holds: bool
    witness: tuple | None = None  # (monomial, lhs coefficient, rhs coefficient)

    def __bool__(self):
        return self.holds


def check_identity(lhs, rhs) -> IdentityCheck:
    if isinstance(lhs, SymRatio) or isinstance(rhs, SymRatio):
        if not isinstance(lhs, SymRatio):
            lhs = SymRatio(lhs, SymExpr.const(lhs.field, 1))
        if not isinstance(rhs, SymRatio):
            rhs = SymRatio(rhs, SymExpr.const(rhs.field, 1))
        return check_identity(lhs.num * rhs.den, rhs.num * lhs.den)
    diff = lhs - rhs
    if not diff:
        return IdentityCheck(True)
    mono, _ = diff.normal_form()[0]
    z = lhs.field.zero
    return IdentityCheck(False, (mono, lhs.terms.get(mono, z), rhs.terms.get(mono, z)))


class OperatorEngine:
    """Applies letters to expressions using a presentation ``F_k(xy) = sum a[i][j][k] F_i(x) F_j(y)``.

    Slot 0 of the presentation must be the identity operator.
    """

    def __init__(self, algebra, n_inverses: int | None = None):
        self.field = algebra.field
        self.dimension = algebra.dimension
        self.unit = algebra.unit
        self.n_inverses = n_inverses
        d = algebra.dimension
        a = algebra.constants
        self._rule = [
            [(i, j, a[i][j][k]) for i in range(d) for j in range(d) if a[i][j][k]] for k in range(d)
        ]
        self._phi_cache = {}

    def _phi_gen(self, gen) -> tuple:
        var, word = gen
        f = self.field
        return tuple(
            SymExpr(f, {(((var, word if k == 0 else (Letter.op(k),) + word), 1),): f.one})
            for k in range(self.dimension)
        )

    def phi_monomial(self, mono) -> tuple:
        """All slot images ``(F_0(m), ..., F_n(m))`` of a monomial."""
        hit = self._phi_cache.get(mono)
        if hit is not None:
            return hit
        if not mono:
            res = tuple(SymExpr.const(self.field, u) for u in self.unit)
        else:
            (gen, e), rest = mono[0], mono[1:]
            if e > 1:
                rest = ((gen, e - 1),) + rest
            res = self._vec_mul(self._phi_gen(gen), self.phi_monomial(rest))
        self._phi_cache[mono] = res
        return res

    def _vec_mul(self, p, q) -> tuple:
        out = []
        for k in range(self.dimension):
            acc = SymExpr(self.field)
            for i, j, c in self._rule[k]:
                if p[i] and q[j]:
                    acc = acc + (p[i] * q[j]) * c
            out.append(acc)
        return tuple(out)

    def apply_slot(self, k: int, expr: SymExpr) -> SymExpr:
        if k == 0:
            return expr
        out = {}
        for mono, c in expr.terms.items():
            for m, v in self.phi_monomial(mono)[k].terms.items():
                out[m] = out[m] + c * v if m in out else c * v
        return SymExpr(self.field, out)

    def _multiplicative(self, letter: Letter, expr: SymExpr) -> SymExpr:
        out = {}
        for mono, c in expr.terms.items():
            m = tuple(sorted((((var, (letter,) + w), e) for (var, w), e in mono), key=lambda ge: _gen_key(ge[0])))
            out[m] = out[m] + c if m in out else c
        return SymExpr(self.field, out)

    def _check(self, letter: Letter):
        if letter.kind == OP and not 1 <= letter.index < self.dimension:
            raise UnknownLetter(f"{letter}: operator slots are 1..{self.dimension - 1}")
        if letter.kind == INV and (
            letter.index < 1 or (self.n_inverses is not None and letter.index > self.n_inverses)
        ):
            raise UnknownLetter(f"{letter}: no such associated automorphism")

    def is_multiplicative(self, k: int) -> bool:
        return self._rule[k] == [(k, k, self.field.one)] and self.unit[k] == 1

    def is_derivation(self, k: int) -> bool:
        one = self.field.one
        return sorted(self._rule[k]) == sorted([(0, k, one), (k, 0, one)]) and not self.unit[k]

    def apply_letter(self, letter: Letter, expr):
        self._check(letter)
        if isinstance(expr, SymRatio):
            return self._apply_ratio(letter, expr)
        if letter.kind == OP:
            return self.apply_slot(letter.index, expr)
        if letter.kind == FROB and self.field.characteristic == 0:
            return expr
        # inverse automorphisms and Frobenius are ring endomorphisms fixing F_p
        return self._multiplicative(letter, expr)

    def _apply_ratio(self, letter: Letter, r: SymRatio) -> SymRatio:
        if letter.kind != OP or self.is_multiplicative(letter.index):
            return SymRatio(self.apply_letter(letter, r.num), self.apply_letter(letter, r.den))
        if self.is_derivation(letter.index):
            dn = self.apply_slot(letter.index, r.num)
            dd = self.apply_slot(letter.index, r.den)
            return SymRatio(dn * r.den - r.num * dd, r.den * r.den)
        raise Unsupported(f"{letter} is neither multiplicative nor a derivation on quotients")

    def apply_word(self, word, expr):
        for letter in reversed(tuple(word)):
            expr = self.apply_letter(letter, expr)
        return expr


def apply_letter(letter: Letter, expr, tri):
    return engine_for(tri).apply_letter(letter, expr)


def apply_word(word, expr, tri):
    return engine_for(tri).apply_word(word, expr)


def engine_for(system) -> OperatorEngine:
    """Cached engine for a TriangularSystem (its basis) or an OperatorSystem (original basis)."""
    eng = system.__dict__.get("_engine")
    if eng is None:
        n_inv = len(system.endomorphisms) - 1 if hasattr(system, "endomorphisms") else None
        eng = OperatorEngine(system.algebra, n_inv)
        object.__setattr__(system, "_engine", eng)
    return eng


def verify_triangular(tri, max_degree: int = 3) -> list:
    """Check the triangular rules against the original operators.

    For monomials ``x, x*y, x*y*z`` (up to ``max_degree`` factors) every new
    slot ``F''_j = sum_k inverse[j][k] F_k`` is computed twice: through the
    original presentation, and through the triangular rules with the new
    generators substituted back.  Returns the failing ``(slot, degree, check)``.
    """
    f = tri.field
    orig = engine_for(tri.system)
    new = engine_for(tri)
    qi = tri.inverse
    d = tri.dimension
    names = ["x", "y", "z", "w"][:max_degree]

    def back(expr: SymExpr) -> SymExpr:
        # generators of the new presentation carry one-letter words at most here
        out = SymExpr(f)
        for mono, c in expr.terms.items():
            term = SymExpr.const(f, c)
            for (var, word), e in mono:
                if not word:
                    g = SymExpr.gen(f, var)
                else:
                    (letter,) = word
                    g = SymExpr(f)
                    for k in range(d):
                        if qi[letter.index, k]:
                            g = g + orig.apply_slot(k, SymExpr.gen(f, var)) * qi[letter.index, k]
                term = term * g**e
            out = out + term
        return out

    failures = []
    for deg in range(1, max_degree + 1):
        mono = SymExpr.const(f, 1)
        for v in names[:deg]:
            mono = mono * SymExpr.gen(f, v)
        for j in range(d):
            lhs = SymExpr(f)
            for k in range(d):
                if qi[j, k]:
                    lhs = lhs + orig.apply_slot(k, mono) * qi[j, k]
            rhs = back(new.apply_slot(j, mono))
            chk = check_identity(lhs, rhs)
            if not chk:
                failures.append((j, deg, chk))
    return failures
