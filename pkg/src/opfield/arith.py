"""Exact scalars, univariate polynomials and dense matrices over Q and F_p.

Rationals are plain :class:`fractions.Fraction` values.  Prime-field
residues are :class:`Mod` values that carry their modulus, so mixing two
different fields raises :class:`FieldMismatch` instead of coercing.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt, lcm

from .errors import (
    DimensionMismatch,
    DivisionByZero,
    FieldMismatch,
    InputError,
    NonSquare,
    ZeroPolynomial,
)

MAX_PRIME = 2**31


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


class Mod:
    """Residue class ``v mod p`` with ``0 <= v < p``."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Mod):
            if other.p != self.p:
                raise FieldMismatch(f"F{self.p} and F{other.p} elements mixed")
            return other.v
        if isinstance(other, int) and not isinstance(other, bool):
            return other
        if isinstance(other, Fraction):
            raise FieldMismatch(f"F{self.p} element mixed with a rational")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v * o, self.p)

    __rmul__ = __mul__

    def inverse(self) -> Mod:
        if self.v == 0:
            raise DivisionByZero(f"0 has no inverse in F{self.p}")
        return Mod(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * Mod(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.inverse() * o

    def __neg__(self):
        return Mod(-self.v, self.p)

    def __pos__(self):
        return self

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return Mod(pow(self.v, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Mod):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.p
        return False

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"Mod({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


class Field:
    """Descriptor for Q (characteristic 0) or F_p.

    Calling a field coerces an int, Fraction or ``"a/b"`` string into it.
    """

    __slots__ = ("characteristic",)

    def __init__(self, characteristic: int = 0):
        if characteristic != 0:
            if not is_prime(characteristic) or characteristic > MAX_PRIME:
                raise InputError(f"F{characteristic}: modulus must be a prime <= 2^31")
        self.characteristic = characteristic

    @property
    def is_finite(self) -> bool:
        return self.characteristic != 0

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def __call__(self, x):
        p = self.characteristic
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, bool):
            raise TypeError("bool is not a scalar")
        if p == 0:
            if isinstance(x, Mod):
                raise FieldMismatch(f"F{x.p} element coerced into Q")
            if isinstance(x, (int, Fraction)):
                return Fraction(x)
            raise TypeError(f"cannot coerce {x!r} into Q")
        if isinstance(x, Mod):
            if x.p != p:
                raise FieldMismatch(f"F{x.p} element coerced into F{p}")
            return x
        if isinstance(x, int):
            return Mod(x, p)
        if isinstance(x, Fraction):
            if x.denominator % p == 0:
                raise DivisionByZero(f"{x} has no image in F{p}")
            return Mod(x.numerator, p) / x.denominator
        raise TypeError(f"cannot coerce {x!r} into F{p}")

    def contains(self, x) -> bool:
        if self.characteristic == 0:
            return isinstance(x, Fraction)
        return isinstance(x, Mod) and x.p == self.characteristic

    def add(self, a, b):
        return self._check(a) + self._check(b)

    def sub(self, a, b):
        return self._check(a) - self._check(b)

    def mul(self, a, b):
        return self._check(a) * self._check(b)

    def inv(self, a):
        a = self._check(a)
        if not a:
            raise DivisionByZero("inverse of 0")
        return 1 / a

    def div(self, a, b):
        return self._check(a) * self.inv(b)

    def _check(self, x):
        if isinstance(x, int) and not isinstance(x, bool):
            return self(x)
        if not self.contains(x):
            raise FieldMismatch(f"{x!r} is not an element of {self}")
        return x

    def sort_key(self, x):
        """Total order used for canonical output (not a field order)."""
        if self.characteristic == 0:
            return (abs(x.numerator), x.denominator, x.numerator < 0)
        return (x.v,)

    def elements(self):
        if self.characteristic == 0:
            raise ValueError("Q is infinite")
        return [Mod(v, self.characteristic) for v in range(self.characteristic)]

    def random_element(self, rng: random.Random, height: int = 5):
        if self.characteristic:
            return Mod(rng.randrange(self.characteristic), self.characteristic)
        den = rng.randint(1, height)
        return Fraction(rng.randint(-height * den, height * den), den)

    def format(self, x) -> str:
        return str(x)

    def to_json(self, x):
        if self.characteristic:
            return x.v
        return x.numerator if x.denominator == 1 else str(x)

    def __eq__(self, other):
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("Field", self.characteristic))

    def __repr__(self):
        return "Q" if self.characteristic == 0 else f"F{self.characteristic}"


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


def field_of(x) -> Field | None:
    if isinstance(x, Fraction):
        return QQ
    if isinstance(x, Mod):
        return Field(x.p)
    return None


# ---------------------------------------------------------------------------
# polynomials


class Poly:
    """Univariate polynomial, coefficients lowest degree first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs=()):
        cs = [field(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls, field: Field) -> Poly:
        return cls(field, (0, 1))

    @classmethod
    def constant(cls, field: Field, c) -> Poly:
        return cls(field, (c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def _lift(self, other) -> Poly:
        if isinstance(other, Poly):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} and {other.field} polynomials mixed")
            return other
        return Poly(self.field, (other,))

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        z = self.field.zero
        a = self.coeffs + (z,) * (n - len(self.coeffs))
        b = other.coeffs + (z,) * (n - len(other.coeffs))
        return Poly(self.field, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        if not self.coeffs or not other.coeffs:
            return Poly(self.field)
        out = [self.field.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = Poly.constant(self.field, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other):
        other = self._lift(other)
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs) + 1
        if dq <= 0:
            return Poly(self.field), self
        quo = [self.field.zero] * dq
        inv_lc = 1 / other.lc
        for k in range(dq - 1, -1, -1):
            c = rem[k + other.degree] * inv_lc
            quo[k] = c
            if c:
                for i, b in enumerate(other.coeffs):
                    rem[k + i] -= c * b
        return Poly(self.field, quo), Poly(self.field, rem[: other.degree])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.coeffs == other.coeffs
        try:
            return self == self._lift(other)
        except (TypeError, FieldMismatch):
            return False

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __call__(self, x):
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self) -> Poly:
        if self.is_zero():
            return self
        inv = 1 / self.lc
        return Poly(self.field, [c * inv for c in self.coeffs])

    def derivative(self) -> Poly:
        return Poly(self.field, [c * i for i, c in enumerate(self.coeffs)][1:])

    def gcd(self, other: Poly) -> Poly:
        a, b = self, self._lift(other)
        while b:
            a, b = b, a % b
        return a.monic()

    def squarefree_part(self) -> Poly:
        """``self / gcd(self, self')``, monic; exact when ``degree < char``."""
        if self.degree <= 0:
            return self.monic()
        g = self.gcd(self.derivative())
        return (self // g).monic()

    def powmod(self, e: int, modulus: Poly) -> Poly:
        result = Poly.constant(self.field, 1) % modulus
        base = self % modulus
        while e:
            if e & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            e >>= 1
        return result

    def eval_matrix(self, m: Matrix) -> Matrix:
        n = m.rows
        acc = Matrix.zeros(self.field, n, n)
        ident = Matrix.identity(self.field, n)
        for c in reversed(self.coeffs):
            acc = acc * m + ident.scale(c)
        return acc

    def __repr__(self):
        return f"Poly({self.field!r}, {str(self)!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            if self.field.characteristic == 0:
                neg = c < 0
                mag = -c if neg else c
            else:
                neg, mag = False, c
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)


def _int_divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


def _primitive_integer(p: Poly) -> list[int]:
    den = lcm(*(c.denominator for c in p.coeffs))
    ints = [int(c * den) for c in p.coeffs]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return [c // g for c in ints]


def _rational_root_candidates(p: Poly) -> list:
    ints = _primitive_integer(p)
    cands = set()
    for num in _int_divisors(ints[0]):
        for den in _int_divisors(ints[-1]):
            cands.add(Fraction(num, den))
            cands.add(Fraction(-num, den))
    return [c for c in cands if p(c) == 0]


_SCAN_LIMIT = 1 << 16


def _prime_field_roots(p: Poly) -> list:
    """Distinct roots of ``p`` in F_q (no multiplicities)."""
    field = p.field
    q = field.characteristic
    if q <= _SCAN_LIMIT:
        return [a for a in field.elements() if p(a) == 0]
    # gcd with x^q - x isolates the split part, then equal-degree splitting.
    x = Poly.x(field)
    split = p.gcd(x.powmod(q, p) - x)
    rng = random.Random(q)
    roots = []
    stack = [split]
    while stack:
        f = stack.pop()
        if f.degree == 0:
            continue
        if f.degree == 1:
            roots.append(-f.coeffs[0] / f.coeffs[1])
            continue
        while True:
            a = field(rng.randrange(q))
            h = (x + a).powmod((q - 1) // 2, f) - 1
            g = f.gcd(h)
            if 0 < g.degree < f.degree:
                stack.extend([g, f // g])
                break
    return roots


def linear_roots(p: Poly):
    """Split off the F-rational linear factors of ``p``.

    Returns ``(roots, residual)`` where ``roots`` is a list of
    ``(root, multiplicity)`` pairs and ``p == residual * prod (x - r)^m``
    with ``residual`` free of roots in the base field.
    """
    if p.is_zero():
        raise ZeroPolynomial("linear_roots of the zero polynomial")
    field = p.field
    residual = p
    roots = []
    zero_mult = 0
    while residual.coeffs[0] == 0 and residual.degree > 0:
        residual = Poly(field, residual.coeffs[1:])
        zero_mult += 1
    if zero_mult:
        roots.append((field.zero, zero_mult))
    if residual.degree > 0:
        if field.characteristic == 0:
            candidates = _rational_root_candidates(residual)
        else:
            candidates = _prime_field_roots(residual)
        for r in candidates:
            lin = Poly(field, (-r, 1))
            mult = 0
            while True:
                q, rem = divmod(residual, lin)
                if rem:
                    break
                residual = q
                mult += 1
            roots.append((r, mult))
    roots.sort(key=lambda rm: field.sort_key(rm[0]))
    return roots, residual


# ---------------------------------------------------------------------------
# matrices


class Matrix:
    """Dense immutable matrix; ``entries`` is a tuple of row tuples."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: Field, entries):
        rows = tuple(tuple(field(x) for x in row) for row in entries)
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionMismatch("ragged matrix rows")
        self.field = field
        self.rows = len(rows)
        self.cols = ncols
        self.entries = rows

    @classmethod
    def _raw(cls, field, rows, cols, entries):
        m = object.__new__(cls)
        m.field, m.rows, m.cols, m.entries = field, rows, cols, entries
        return m

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> Matrix:
        z = field.zero
        return cls._raw(field, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field: Field, n: int) -> Matrix:
        z, o = field.zero, field.one
        return cls._raw(
            field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n))
        )

    @classmethod
    def from_columns(cls, field: Field, columns, nrows: int | None = None) -> Matrix:
        columns = [tuple(c) for c in columns]
        if not columns:
            return cls._raw(field, nrows or 0, 0, tuple(() for _ in range(nrows or 0)))
        return cls(field, list(zip(*columns)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i) -> tuple:
        return self.entries[i]

    def column(self, j) -> tuple:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(not x for r in self.entries for x in r)

    def transpose(self) -> Matrix:
        return Matrix._raw(self.field, self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else ())

    def scale(self, c) -> Matrix:
        return Matrix._raw(
            self.field, self.rows, self.cols, tuple(tuple(c * x for x in r) for r in self.entries)
        )

    def __add__(self, other: Matrix) -> Matrix:
        self._same_shape(other)
        return Matrix._raw(
            self.field,
            self.rows,
            self.cols,
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)),
        )

    def __sub__(self, other: Matrix) -> Matrix:
        return self + other.scale(-self.field.one)

    def __neg__(self):
        return self.scale(-self.field.one)

    def _same_shape(self, other):
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} and {other.field} matrices mixed")
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch(f"{self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return self.scale(other)
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} and {other.field} matrices mixed")
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} times {other.rows}x{other.cols}")
        z = self.field.zero
        cols = other.columns()
        out = []
        for r in self.entries:
            row = []
            for c in cols:
                acc = z
                for a, b in zip(r, c):
                    if a and b:
                        acc += a * b
                row.append(acc)
            out.append(tuple(row))
        return Matrix._raw(self.field, self.rows, other.cols, tuple(out))

    __matmul__ = __mul__

    def apply(self, v) -> tuple:
        """Matrix times column vector."""
        if len(v) != self.cols:
            raise DimensionMismatch(f"vector of length {len(v)} for {self.cols} columns")
        z = self.field.zero
        out = []
        for r in self.entries:
            acc = z
            for a, b in zip(r, v):
                if a and b:
                    acc += a * b
            out.append(acc)
        return tuple(out)

    def __pow__(self, e: int) -> Matrix:
        if not self.is_square:
            raise NonSquare("power of a non-square matrix")
        result = Matrix.identity(self.field, self.rows)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def trace(self):
        if not self.is_square:
            raise NonSquare("trace of a non-square matrix")
        acc = self.field.zero
        for i in range(self.rows):
            acc += self.entries[i][i]
        return acc

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.entries == other.entries
            and self.cols == other.cols
        )

    def __hash__(self):
        return hash((self.field, self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.entries)
        return f"Matrix({self.field!r}, [{body}])"

    def rref(self):
        """Reduced row echelon form and pivot columns.

        Pivots are taken on the first nonzero column, scanning rows in order.
        """
        m = [list(r) for r in self.entries]
        pivots = []
        r = 0
        for c in range(self.cols):
            if r == self.rows:
                break
            piv = next((i for i in range(r, self.rows) if m[i][c]), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            inv = 1 / m[r][c]
            m[r] = [x * inv for x in m[r]]
            for i in range(self.rows):
                if i != r and m[i][c]:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
        return Matrix._raw(self.field, self.rows, self.cols, tuple(tuple(x) for x in m)), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> list[tuple]:
        return kernel_basis(self)

    def inverse(self) -> Matrix:
        if not self.is_square:
            raise NonSquare("inverse of a non-square matrix")
        n = self.rows
        ident = Matrix.identity(self.field, n)
        aug = Matrix._raw(
            self.field, n, 2 * n, tuple(r + s for r, s in zip(self.entries, ident.entries))
        )
        red, pivots = aug.rref()
        if pivots[:n] != list(range(n)) or len(pivots) < n:
            raise DivisionByZero("singular matrix")
        return Matrix._raw(self.field, n, n, tuple(r[n:] for r in red.entries))

    def solve(self, b):
        """One solution of ``self @ v = b`` or ``None``; free variables set to 0."""
        aug = Matrix._raw(
            self.field,
            self.rows,
            self.cols + 1,
            tuple(r + (self.field(x),) for r, x in zip(self.entries, b)),
        )
        red, pivots = aug.rref()
        if pivots and pivots[-1] == self.cols:
            return None
        v = [self.field.zero] * self.cols
        for i, c in enumerate(pivots):
            v[c] = red.entries[i][self.cols]
        return tuple(v)


def kernel_basis(m: Matrix) -> list[tuple]:
    """Exact null-space basis; each vector's first nonzero entry is 1."""
    red, pivots = m.rref()
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    z, o = m.field.zero, m.field.one
    for f in free:
        v = [z] * m.cols
        v[f] = o
        for i, c in enumerate(pivots):
            v[c] = -red.entries[i][f]
        lead = next(x for x in v if x)
        inv = 1 / lead
        basis.append(tuple(x * inv for x in v))
    return basis


def minimal_polynomial(m: Matrix) -> Poly:
    """Monic annihilating polynomial of least degree (Krylov on matrix powers)."""
    if not m.is_square:
        raise NonSquare(f"{m.rows}x{m.cols} matrix has no minimal polynomial")
    field = m.field
    n = m.rows
    flat = lambda a: tuple(x for r in a.entries for x in r)  # noqa: E731
    power = Matrix.identity(field, n)
    vecs = [flat(power)]
    for k in range(1, n + 1):
        power = power * m
        target = flat(power)
        sol = Matrix.from_columns(field, vecs, n * n).solve(target)
        if sol is not None:
            return Poly(field, [-c for c in sol] + [1])
        vecs.append(target)
    raise AssertionError("Cayley-Hamilton violated")  # pragma: no cover


def span_basis(field: Field, vectors, length: int) -> list[tuple]:
    """Canonical (RREF row) basis of the span of ``vectors``."""
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return []
    red, pivots = Matrix(field, vectors).rref()
    return [red.entries[i] for i in range(len(pivots))]


def extend_basis(field: Field, base, candidates) -> list[tuple]:
    """Candidates (in order) that extend ``base`` to a basis of their joint span."""
    current = [tuple(v) for v in base]
    rank = Matrix(field, current).rank() if current else 0
    added = []
    for c in candidates:
        trial = current + [tuple(c)]
        r = Matrix(field, trial).rank()
        if r > rank:
            current, rank = trial, r
            added.append(tuple(c))
    return added
