"""Finite-dimensional commutative algebras given by structure constants.

An :class:`Algebra` stores ``a[i][j][k]`` with ``e_i e_j = sum_k a[i][j][k] e_k``.
:func:`local_decompose` splits it into local factors using only eigenvalues
that lie in the base field, and reports (rather than raises) when a factor
has a residue field strictly larger than the base field.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .arith import Field, Matrix, kernel_basis, linear_roots, minimal_polynomial, span_basis
from .errors import (
    DimensionMismatch,
    NoUnit,
    NotAssociative,
    NotCommutative,
    ResidueNotBase,
    UnitMismatch,
    UnsupportedCharacteristic,
)


class Algebra:
    __slots__ = ("field", "dimension", "constants", "unit", "_mult_cache")

    def __init__(self, field: Field, dimension: int, constants, unit):
        self.field = field
        self.dimension = dimension
        self.constants = constants
        self.unit = unit
        self._mult_cache = {}

    def basis_vector(self, i: int) -> tuple:
        z, o = self.field.zero, self.field.one
        return tuple(o if k == i else z for k in range(self.dimension))

    def vector(self, coords) -> tuple:
        v = tuple(self.field(c) for c in coords)
        if len(v) != self.dimension:
            raise DimensionMismatch(f"vector of length {len(v)} in a {self.dimension}-dimensional algebra")
        return v

    def multiply(self, x, y) -> tuple:
        d = self.dimension
        if len(x) != d or len(y) != d:
            raise DimensionMismatch(f"vectors of length {len(x)}, {len(y)} in dimension {d}")
        x = self.vector(x)
        y = self.vector(y)
        out = [self.field.zero] * d
        a = self.constants
        for i in range(d):
            if not x[i]:
                continue
            for j in range(d):
                if not y[j]:
                    continue
                c = x[i] * y[j]
                row = a[i][j]
                for k in range(d):
                    if row[k]:
                        out[k] += c * row[k]
        return tuple(out)

    def mult_matrix(self, x) -> Matrix:
        """Matrix of ``y -> x*y`` in the standard basis (column j = x e_j)."""
        x = self.vector(x)
        cached = self._mult_cache.get(x)
        if cached is None:
            cols = [self.multiply(x, self.basis_vector(j)) for j in range(self.dimension)]
            cached = self._mult_cache[x] = Matrix.from_columns(self.field, cols)
        return cached

    def is_nilpotent(self, x) -> bool:
        return (self.mult_matrix(x) ** self.dimension).is_zero()

    def __eq__(self, other):
        return (
            isinstance(other, Algebra)
            and self.field == other.field
            and self.constants == other.constants
            and self.unit == other.unit
        )

    def __hash__(self):
        return hash((self.field, self.constants, self.unit))

    def __repr__(self):
        return f"Algebra({self.field!r}, dim={self.dimension})"


def build_algebra(field: Field, dimension: int, constants, unit=None) -> Algebra:
    """Validate structure constants and return an :class:`Algebra`.

    The unit is solved for when omitted.  Raises NotCommutative or
    NotAssociative with the first failing index triple as witness.
    """
    d = dimension
    try:
        a = tuple(
            tuple(tuple(field(constants[i][j][k]) for k in range(d)) for j in range(d))
            for i in range(d)
        )
    except (IndexError, TypeError) as exc:
        raise DimensionMismatch(f"structure constants must be {d}x{d}x{d}") from exc
    for i in range(d):
        for j in range(i + 1, d):
            for k in range(d):
                if a[i][j][k] != a[j][i][k]:
                    raise NotCommutative(i, j, k)
    alg = Algebra(field, d, a, None)
    basis = [alg.basis_vector(i) for i in range(d)]
    for i in range(d):
        for j in range(d):
            eij = a[i][j]
            for k in range(d):
                if alg.multiply(eij, basis[k]) != alg.multiply(basis[i], a[j][k]):
                    raise NotAssociative(i, j, k)
    if unit is None:
        # u e_i = e_i  <=>  sum_m u_m a[m][i][k] = delta_ik
        rows, rhs = [], []
        for i in range(d):
            for k in range(d):
                rows.append([a[m][i][k] for m in range(d)])
                rhs.append(field.one if i == k else field.zero)
        sol = Matrix(field, rows).solve(rhs) if d else ()
        if sol is None:
            raise NoUnit("no two-sided unit solves u e_i = e_i")
        unit = sol
    else:
        unit = alg.vector(unit)
        for i in range(d):
            if alg.multiply(unit, basis[i]) != basis[i]:
                raise UnitMismatch(f"declared unit does not fix e{i}")
    return Algebra(field, d, a, tuple(unit))


def _check_characteristic(alg: Algebra):
    p = alg.field.characteristic
    if p and p <= alg.dimension:
        raise UnsupportedCharacteristic(
            f"characteristic {p} <= dimension {alg.dimension}: trace-form radical not valid"
        )


def trace_form(alg: Algebra) -> Matrix:
    d = alg.dimension
    return Matrix(
        alg.field,
        [[alg.mult_matrix(alg.constants[i][j]).trace() for j in range(d)] for i in range(d)],
    )


def radical(alg: Algebra) -> list[tuple]:
    """Basis of the nilradical as the kernel of the trace form."""
    _check_characteristic(alg)
    basis = kernel_basis(trace_form(alg))
    for r in basis:
        if not alg.is_nilpotent(r):
            raise AssertionError(f"trace-form kernel element {r} is not nilpotent")
    return basis


# ---------------------------------------------------------------------------
# local decomposition


@dataclass(frozen=True)
class LocalBlock:
    """One local factor.  Block coordinates are coordinates in ``basis``."""

    index: int
    basis: tuple  # vectors of the ambient algebra (RREF rows)
    projection: Matrix  # ambient coords -> block coords
    algebra: Algebra  # the factor in block coordinates
    unit: tuple  # block coords
    residue_ok: bool
    eigenvalues: tuple | None  # eigenvalue of each ambient e_k on the block
    ideal_basis: tuple  # maximal ideal / radical, block coords
    residue_functional: tuple | None
    witnesses: tuple = ()

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def project(self, x) -> tuple:
        return self.projection.apply(x)


@dataclass(frozen=True)
class ResidueReport:
    ok: bool
    failures: tuple = ()  # (block index, witness polynomials)

    def __bool__(self):
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "residue fields equal the base field"
        parts = []
        for idx, ws in self.failures:
            parts.append(f"block {idx}: residual " + ", ".join(str(w) for w in ws))
        return "residue check FAILED (" + "; ".join(parts) + ")"


@dataclass(frozen=True)
class Decomposition:
    algebra: Algebra
    blocks: tuple
    change_of_basis: Matrix  # columns = block bases concatenated
    reconstruction: Matrix  # inverse of change_of_basis
    residue: ResidueReport = dc_field(default_factory=lambda: ResidueReport(True))

    def project(self, x) -> list[tuple]:
        return [b.project(x) for b in self.blocks]

    def lift(self, parts) -> tuple:
        flat = [c for part in parts for c in part]
        return self.change_of_basis.apply(flat)


def _restricted(alg: Algebra, b, basis, pivots) -> Matrix:
    cols = []
    for v in basis:
        w = alg.multiply(b, v)
        cols.append(tuple(w[p] for p in pivots))
    return Matrix.from_columns(alg.field, cols, len(basis))


def _pivots(basis) -> list[int]:
    return [next(i for i, x in enumerate(v) if x) for v in basis]


def _lift_coords(field, coords_list, basis, dim) -> list[tuple]:
    out = []
    for c in coords_list:
        v = [field.zero] * dim
        for coef, bv in zip(c, basis):
            if coef:
                for k in range(dim):
                    v[k] += coef * bv[k]
        out.append(tuple(v))
    return out


def _primary_components(alg: Algebra, b, basis):
    """Split ``span(basis)`` along the primary components of mult-by-b."""
    field = alg.field
    pivots = _pivots(basis)
    m = _restricted(alg, b, basis, pivots)
    mp = minimal_polynomial(m)
    roots, residual = linear_roots(mp)
    n = len(basis)
    ident = Matrix.identity(field, n)
    comps = []
    for lam, mult in roots:
        ker = kernel_basis((m - ident.scale(lam)) ** mult)
        comps.append(_lift_coords(field, ker, basis, alg.dimension))
    if residual.degree > 0:
        ker = kernel_basis(residual.eval_matrix(m))
        comps.append(_lift_coords(field, ker, basis, alg.dimension))
    return comps, roots, residual


def _lex_key(field, v):
    return tuple(x if field.characteristic == 0 else x.v for x in v)


def local_decompose(alg: Algebra) -> Decomposition:
    """Refine generalized eigenspaces of every basis multiplication map."""
    _check_characteristic(alg)
    field = alg.field
    d = alg.dimension
    basis_vectors = [alg.basis_vector(i) for i in range(d)]
    blocks = [span_basis(field, basis_vectors, d)]
    changed = True
    while changed:
        changed = False
        refined = []
        for blk in blocks:
            pieces = [blk]
            for b in basis_vectors:
                nxt = []
                for piece in pieces:
                    comps, _, _ = _primary_components(alg, b, piece)
                    nxt.extend(span_basis(field, c, d) for c in comps if c)
                pieces = nxt
            if len(pieces) > 1:
                changed = True
            refined.extend(pieces)
        blocks = refined
    blocks.sort(key=lambda blk: (-len(blk), min(_lex_key(field, v) for v in blk)))

    cob = Matrix.from_columns(field, [v for blk in blocks for v in blk], d)
    recon = cob.inverse()
    out = []
    failures = []
    offset = 0
    for idx, blk in enumerate(blocks):
        n = len(blk)
        proj = Matrix._raw(field, n, d, recon.entries[offset : offset + n])
        offset += n
        pivots = _pivots(blk)
        consts = [[[None] * n for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(n):
                prod = alg.multiply(blk[i], blk[j])
                row = tuple(prod[p] for p in pivots)
                consts[i][j] = row
        unit = proj.apply(alg.unit)
        balg = build_algebra(field, n, consts, unit)

        eigen = []
        witnesses = []
        ok = True
        for b in basis_vectors:
            m = _restricted(alg, b, blk, pivots)
            roots, residual = linear_roots(minimal_polynomial(m))
            if residual.degree > 0 or len(roots) != 1:
                ok = False
                w = residual.squarefree_part()
                if w.degree > 0 and w not in witnesses:
                    witnesses.append(w)
                eigen.append(None)
            else:
                eigen.append(roots[0][0])
        if ok:
            images = [proj.apply(b) for b in basis_vectors]
            m_gens = [
                tuple(x - lam * u for x, u in zip(img, unit)) for img, lam in zip(images, eigen)
            ]
            ideal = span_basis(field, [g for g in m_gens if any(g)], n)
            rho = Matrix(field, images).solve(eigen)
            block = LocalBlock(
                idx, tuple(blk), proj, balg, unit, True, tuple(eigen), tuple(ideal), rho
            )
        else:
            ideal = radical(balg)
            block = LocalBlock(
                idx, tuple(blk), proj, balg, unit, False, None, tuple(ideal), None, tuple(witnesses)
            )
            failures.append((idx, tuple(witnesses)))
        out.append(block)
    report = ResidueReport(not failures, tuple(failures))
    return Decomposition(alg, tuple(out), cob, recon, report)


def check_residue_assumption(dec: Decomposition) -> ResidueReport:
    return dec.residue


def residue_functional(block: LocalBlock) -> tuple:
    """Linear functional on block coordinates: kernel = maximal ideal, 1 -> 1."""
    if not block.residue_ok:
        raise ResidueNotBase(f"block {block.index} has residue field larger than the base field")
    return block.residue_functional
