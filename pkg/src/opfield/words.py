"""Words in the operator letters, their order, degrees, and the scaling
expansion ``S(g x) = lambda sigma_theta(g) theta(x) + lower terms``."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NamedTuple

from .errors import InputError, UnknownLetter, ZeroCombination

INV, OP, FROB = 0, 1, 2


class Letter(NamedTuple):
    """Tuple order gives ``s_i^-1 < s_j^-1 < F_i < F_j < Frob`` for ``i < j``."""

    kind: int
    index: int

    @classmethod
    def op(cls, i: int) -> Letter:
        return cls(OP, i)

    @classmethod
    def inv(cls, j: int) -> Letter:
        return cls(INV, j)

    def __str__(self):
        if self.kind == OP:
            return f"F{self.index}"
        if self.kind == INV:
            return f"s{self.index}^-1"
        return "Frob"


FROBENIUS = Letter(FROB, 0)

_LETTER_RE = re.compile(r"\s*(?:F(\d+)|s(\d+)\^-1|(Frob))")


def parse_word(text: str) -> tuple:
    """``"F2F1"``, ``"s1^-1 F2"``, ``"Frob"``; ``""`` or ``"Id"`` is the empty word."""
    text = text.strip()
    if text in ("", "Id", "1"):
        return ()
    letters = []
    pos = 0
    while pos < len(text):
        m = _LETTER_RE.match(text, pos)
        if not m:
            raise InputError(f"cannot read a letter at {text[pos:]!r}")
        if m.group(1):
            letters.append(Letter.op(int(m.group(1))))
        elif m.group(2):
            letters.append(Letter.inv(int(m.group(2))))
        else:
            letters.append(FROBENIUS)
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return tuple(letters)


def format_word(word) -> str:
    return "".join(str(l) for l in word) if word else "Id"


def normalize_word(word, characteristic: int) -> tuple:
    """Drop Frobenius letters in characteristic 0, where Frob is the identity."""
    if characteristic == 0:
        return tuple(l for l in word if l.kind != FROB)
    return tuple(word)


def word_key(word):
    return (len(word), tuple(word))


def compare_words(w1, w2) -> int:
    """Graded lexicographic comparison: -1, 0 or 1."""
    k1, k2 = word_key(w1), word_key(w2)
    return (k1 > k2) - (k1 < k2)


class WordPoly:
    """Finite linear combination of words; zero coefficients are dropped.

    Coefficients are field scalars or :class:`~opfield.symbolic.SymExpr`.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for w, c in dict(terms or {}).items():
            w = tuple(w)
            if c:
                clean[w] = c
        self.terms = clean

    def __bool__(self):
        return bool(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms, key=word_key))

    def items(self):
        return [(w, self.terms[w]) for w in self]

    def words(self):
        return list(self)

    def __getitem__(self, w):
        return self.terms.get(tuple(w), 0)

    def __add__(self, other: WordPoly) -> WordPoly:
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out[w] + c if w in out else c
        return WordPoly(out)

    def __neg__(self):
        return WordPoly({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> WordPoly:
        return WordPoly({w: c * v for w, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, WordPoly):
            return NotImplemented
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[w] == other.terms[w] for w in self.terms)

    def __repr__(self):
        return f"WordPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w in reversed(self.words()):
            c = self.terms[w]
            cs = str(c)
            if " " in cs.strip():
                cs = f"({cs})"
            parts.append(f"{cs}*{format_word(w)}(x)" if w else f"{cs}*x")
        return " + ".join(parts)


def degree(poly: WordPoly):
    """Largest word with nonzero coefficient, and that coefficient."""
    if not poly:
        raise ZeroCombination("the zero combination has no degree")
    top = max(poly.terms, key=word_key)
    return top, poly.terms[top]


def normalize_poly(poly: WordPoly, characteristic: int) -> WordPoly:
    out = WordPoly()
    for w, c in poly.items():
        out = out + WordPoly({normalize_word(w, characteristic): c})
    return out


def parse_wordpoly(text: str, field) -> WordPoly:
    """Parse e.g. ``"3*F1 + 2"`` or ``"F2F1 - F1F2"``; a bare number is a multiple of Id."""
    out = WordPoly()
    src = text.strip()
    if not src:
        raise InputError("empty combination")
    tokens = re.split(r"(?<!\^)(?=[+-])", src)
    for tok in tokens:
        tok = tok.strip()
        if not tok:
            continue
        sign = -1 if tok.startswith("-") else 1
        tok = tok.lstrip("+-").strip()
        m = re.fullmatch(r"(\d+(?:/\d+)?)?\s*\*?\s*(.*)", tok)
        coeff, rest = m.group(1), m.group(2).strip()
        if coeff is None and not rest:
            raise InputError(f"empty term in {text!r}")
        c = field(coeff) if coeff else field.one
        word = parse_word(rest) if rest else ()
        out = out + WordPoly({word: c * sign})
    return out


# ---------------------------------------------------------------------------
# associated endomorphism words


@dataclass(frozen=True)
class EndoWord:
    """``Frob^frob`` composed with the product of ``sigma_i^power`` in order."""

    frob: int = 0
    factors: tuple = ()  # ((endo index, nonzero power), ...), no equal neighbours

    @classmethod
    def identity(cls) -> EndoWord:
        return cls()

    def compose(self, other: EndoWord) -> EndoWord:
        """``self . other`` (apply ``other`` first)."""
        stack = list(self.factors)
        for idx, pw in other.factors:
            if stack and stack[-1][0] == idx:
                total = stack[-1][1] + pw
                stack.pop()
                if total:
                    stack.append((idx, total))
            else:
                stack.append((idx, pw))
        return EndoWord(self.frob + other.frob, tuple(stack))

    @property
    def is_identity(self) -> bool:
        return self.frob == 0 and not self.factors

    def __str__(self):
        parts = []
        if self.frob:
            parts.append("Frob" if self.frob == 1 else f"Frob^{self.frob}")
        for idx, pw in self.factors:
            parts.append(f"s{idx}" if pw == 1 else f"s{idx}^{pw}")
        return "".join(parts) if parts else "Id"


def _check_letter(letter: Letter, tri):
    n_endos = len(tri.endomorphisms)
    if letter.kind == OP and not 1 <= letter.index < tri.dimension:
        raise UnknownLetter(f"{letter}: operator slots are 1..{tri.dimension - 1}")
    if letter.kind == INV and not 1 <= letter.index < n_endos:
        raise UnknownLetter(f"{letter}: endomorphisms are s1..s{n_endos - 1}")


def sigma_of_word(word, tri) -> EndoWord:
    """``sigma_theta``: compose the endomorphism attached to each letter."""
    out = EndoWord.identity()
    char = tri.field.characteristic
    for letter in word:
        _check_letter(letter, tri)
        if letter.kind == OP:
            e = tri.sigma_index(letter.index)
            step = EndoWord(0, ((e, 1),)) if e else EndoWord()
        elif letter.kind == INV:
            step = EndoWord(0, ((letter.index, -1),))
        else:
            step = EndoWord(1 if char else 0)
        out = out.compose(step)
    return out


def sigma_letters(word, tri) -> tuple:
    """Letter-wise image of ``word`` under ``F_j -> sigma_{i_j}`` (no cancellation)."""
    out = []
    for letter in word:
        _check_letter(letter, tri)
        if letter.kind == OP:
            s = tri.slots[letter.index].sigma
            if s:
                out.append(Letter.op(s))
        elif letter.kind == INV:
            out.append(letter)
        elif tri.field.characteristic:
            out.append(letter)
    return tuple(out)


# ---------------------------------------------------------------------------
# scaling


@dataclass(frozen=True)
class ScaleExpansion:
    degree: tuple  # theta
    dominant: object  # lambda_theta
    sigma: EndoWord  # sigma_theta
    leading: object  # SymExpr coefficient of theta(x): lambda * sigma_theta(g)
    remainder: WordPoly  # words strictly below theta, SymExpr coefficients

    def full(self) -> WordPoly:
        return WordPoly({self.degree: self.leading}) + self.remainder


def scale(poly: WordPoly, g, tri, var: str = "x") -> WordPoly:
    """``S(g x)`` regrouped by the word applied to ``x``."""
    from .symbolic import SymExpr, engine_for

    eng = engine_for(tri)
    field = tri.field
    poly = normalize_poly(poly, field.characteristic)
    if isinstance(g, str):
        if g == var:
            raise InputError(f"scaling symbol {g!r} clashes with the variable")
        g = SymExpr.gen(field, g)
    gx = g * SymExpr.gen(field, var)
    grouped = {}
    for word, coeff in poly.items():
        expanded = eng.apply_word(word, gx)
        if not isinstance(coeff, SymExpr):
            coeff = SymExpr.const(field, coeff)
        for xword, part in split_linear(expanded, var).items():
            term = coeff * part
            grouped[xword] = grouped[xword] + term if xword in grouped else term
    return WordPoly(grouped)


def split_linear(expr, var: str) -> dict:
    """Group an expression linear in ``var``-generators by their word."""
    from .symbolic import SymExpr

    out = {}
    for mono, c in expr.terms.items():
        xs = [(gen, e) for gen, e in mono if gen[0] == var]
        if len(xs) != 1 or xs[0][1] != 1:
            raise ValueError(f"term {mono} is not linear in {var}")
        (gen, _), = xs
        rest = tuple((gg, e) for gg, e in mono if gg[0] != var)
        piece = SymExpr(expr.field, {rest: c})
        out[gen[1]] = out[gen[1]] + piece if gen[1] in out else piece
    return out


def expand_scale(poly: WordPoly, g, tri, var: str = "x") -> ScaleExpansion:
    """Split ``S(g x)`` into the dominant term and the strictly smaller rest."""
    from .symbolic import SymExpr, engine_for

    field = tri.field
    poly = normalize_poly(poly, field.characteristic)
    theta, lam = degree(poly)
    full = scale(poly, g, tri, var)
    if isinstance(g, str):
        g = SymExpr.gen(field, g)
    sig = engine_for(tri).apply_word(sigma_letters(theta, tri), g)
    lead = full[theta]
    lam_expr = lam if isinstance(lam, SymExpr) else SymExpr.const(field, lam)
    expected = lam_expr * sig
    if lead != expected:
        raise AssertionError(f"leading coefficient {lead} differs from {expected}")
    rest = WordPoly({w: c for w, c in full.terms.items() if w != theta})
    return ScaleExpansion(theta, lam, sigma_of_word(theta, tri), lead, rest)
