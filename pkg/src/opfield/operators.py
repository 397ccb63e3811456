"""Operator systems bound to an algebra: associated endomorphisms,
the single-operator classification, and triangularization."""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import Algebra, Decomposition, build_algebra
from .arith import QQ, Field, Matrix, extend_basis, span_basis
from .errors import (
    ArityMismatch,
    BadSlot,
    ConstraintViolated,
    DegenerateDerivation,
    DuplicateName,
    InputError,
    MathFailure,
    ResidueAssumptionFailed,
)


@dataclass(frozen=True)
class OperatorSystem:
    algebra: Algebra
    names: tuple
    first_coordinate: bool
    invertible: frozenset = frozenset()

    @property
    def field(self) -> Field:
        return self.algebra.field

    @property
    def dimension(self) -> int:
        return self.algebra.dimension


def build_system(alg: Algebra, names, invertibility=()) -> OperatorSystem:
    names = tuple(names)
    if len(names) != alg.dimension:
        raise ArityMismatch(f"{len(names)} names for a {alg.dimension}-dimensional algebra")
    seen = set()
    for n in names:
        if n in seen:
            raise DuplicateName(f"operator name {n!r} used twice")
        seen.add(n)
    inv = frozenset(invertibility)
    unknown = inv - seen
    if unknown:
        raise InputError(f"invertible declaration for unknown operator(s) {sorted(unknown)}")
    return OperatorSystem(alg, names, alg.unit[0] == 1, inv)


@dataclass(frozen=True)
class EndoDescriptor:
    """``sigma = sum_k coefficients[k] * F_k``."""

    coefficients: tuple
    block: int
    invertible: bool

    @property
    def is_identity(self) -> bool:
        return self.coefficients[0] == 1 and not any(self.coefficients[1:])

    def leading_operator(self) -> int:
        return max(k for k, c in enumerate(self.coefficients) if c)

    def describe(self, names) -> str:
        return linear_combination(self.coefficients, names)


def linear_combination(coeffs, names) -> str:
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        neg = (c < 0) if hasattr(c, "numerator") else False
        mag = -c if neg else c
        body = names[k] if mag == 1 else f"{mag}*{names[k]}"
        if parts:
            parts.append(("- " if neg else "+ ") + body)
        else:
            parts.append(("-" if neg else "") + body)
    return " ".join(parts) if parts else "0"


def associated_endomorphisms(sys: OperatorSystem, dec: Decomposition) -> list[EndoDescriptor]:
    """One descriptor ``rho_i . theta_i . phi`` per local block."""
    if not dec.residue.ok:
        raise ResidueAssumptionFailed(dec.residue.describe())
    out = []
    for blk in dec.blocks:
        d = EndoDescriptor(tuple(blk.eigenvalues), blk.index, False)
        inv = d.is_identity or sys.names[d.leading_operator()] in sys.invertible
        out.append(EndoDescriptor(d.coefficients, blk.index, inv))
    return out


# ---------------------------------------------------------------------------
# one operator


@dataclass(frozen=True)
class SingleOpClassification:
    case: str  # "trivial" | "derivation" | "endomorphism"
    a: object
    b: object
    c: object
    map_coefficients: tuple  # (coeff of Id, coeff of F)
    basis: tuple | None = None  # (e'_0, e'_1) for the endomorphism case

    def describe(self) -> str:
        names = ("Id", "F")
        if self.case == "derivation":
            return f"derivation: d = {linear_combination(self.map_coefficients, names)}"
        if self.case == "endomorphism":
            return f"endomorphism: s = {linear_combination(self.map_coefficients, names)}"
        return f"trivial: F = {linear_combination((self.a, 0), names)}"


def classify_single_operator(a, b, c, field: Field = QQ) -> SingleOpClassification:
    """Classify ``F(xy) = a xy + b (x F(y) + y F(x)) + c F(x) F(y)``."""
    a, b, c = field(a), field(b), field(c)
    if not c and b != 0 and b != 1:
        raise DegenerateDerivation(f"c = 0 forces b in {{0, 1}}, got b = {b}")
    if b * b - b != a * c:
        raise ConstraintViolated(f"b^2 - b = {b * b - b} but ac = {a * c}")
    if c:
        e1 = (field.zero, 1 / c)
        e0 = (field.one, -b / c)
        return SingleOpClassification("endomorphism", a, b, c, (b, c), (e0, e1))
    if b == 1:
        return SingleOpClassification("derivation", a, b, c, (a, field.one))
    return SingleOpClassification("trivial", a, b, c, (a, field.zero))


def single_operator_algebra(a, b, c, field: Field = QQ) -> Algebra:
    """``D(F)`` for one operator with constants ``(a, b, c)``.

    For ``F = lambda Id`` (b = c = 0) the presentation with
    ``e_1^2 = e_1`` and unit ``e_0 + lambda e_1`` is used, which is F^2.
    """
    cl = classify_single_operator(a, b, c, field)
    a, b, c = cl.a, cl.b, cl.c
    if cl.case == "trivial":
        lam = a
        a, b, c = lam * lam - lam, 1 - lam, field.one
    z = field.zero
    consts = [
        [[field.one, a], [z, b]],
        [[z, b], [z, c]],
    ]
    return build_algebra(field, 2, consts)


# ---------------------------------------------------------------------------
# triangularization


@dataclass(frozen=True)
class ProductRule:
    """``F_j(xy) = F_s(x) F_j(y) + sum_l R_{j,l}(x) F_l(y)``, s the sigma slot.

    ``remainder`` maps ``l`` to the linear form ``R_{j,l}`` given as
    ``((k, coeff), ...)`` over slots ``k <= j``.
    """

    slot: int
    sigma: int
    remainder: tuple  # ((l, ((k, coeff), ...)), ...)

    def terms(self):
        """All ``(coeff, k, l)`` with ``F_j(xy) = sum coeff F_k(x) F_l(y)``."""
        out = [(1, self.sigma, self.slot)]
        for l, form in self.remainder:
            for k, c in form:
                out.append((c, k, l))
        return out

    def render(self, slot_name=None) -> str:
        name = slot_name or (lambda s, v: v if s == 0 else f"F{s}({v})")
        lhs = name(self.slot, "xy")
        if self.slot == self.sigma:
            return f"{lhs} = {name(self.sigma, 'x')}{name(self.sigma, 'y')}"
        parts = [f"{name(self.sigma, 'x')}{name(self.slot, 'y')}"]
        for l, form in self.remainder:
            for k, c in form:
                coef = "" if c == 1 else ("-" if c == -1 else f"{c}*")
                parts.append(f"{coef}{name(k, 'x')}{name(l, 'y')}")
        return f"{lhs} = " + " + ".join(parts)


@dataclass(frozen=True)
class SlotInfo:
    block: int  # position in triangular block order (= endomorphism index)
    sigma: int  # global slot of the block's sigma
    level: int  # 0 for the sigma slot, else radical-filtration level
    local: int  # 0 for sigma, k for eta_k


@dataclass(frozen=True)
class TriangularSystem:
    system: OperatorSystem
    decomposition: Decomposition
    change_of_basis: Matrix  # columns: new basis in original coordinates
    inverse: Matrix  # rows: new operators as combinations of the old
    algebra: Algebra  # structure constants in the new basis
    slots: tuple  # SlotInfo per slot
    block_order: tuple  # decomposition block index per endomorphism index
    endomorphisms: tuple  # EndoDescriptor per endomorphism index
    constants: tuple  # per block: ((k, l, j, value), ...) nonzero b_{k,l}(j)
    rules: tuple

    @property
    def field(self) -> Field:
        return self.algebra.field

    @property
    def dimension(self) -> int:
        return self.algebra.dimension

    def sigma_index(self, slot: int) -> int:
        """Endomorphism index ``i_j`` attached to slot ``j``."""
        return self.slots[slot].block

    def sigma_slot(self, endo: int) -> int:
        """Global slot carrying endomorphism ``endo``."""
        return next(s for s, info in enumerate(self.slots) if info.block == endo and info.level == 0)

    def operator(self, slot: int) -> tuple:
        """New operator ``F''_slot`` as coefficients over the original operators."""
        return self.inverse.row(slot)

    def b(self, block: int, k: int, l: int, j: int):
        for kk, ll, jj, v in self.constants[block]:
            if (kk, ll, jj) == (k, l, j):
                return v
        return self.field.zero

    def conjugate_back(self) -> tuple:
        """Structure constants recovered in the original basis."""
        q, qi = self.change_of_basis, self.inverse
        d = self.dimension
        new_coords = [qi.column(i) for i in range(d)]
        return tuple(
            tuple(q.apply(self.algebra.multiply(new_coords[i], new_coords[j])) for j in range(d))
            for i in range(d)
        )


def _filtration_basis(balg: Algebra, ideal):
    """Basis of the maximal ideal adapted to m > m^2 > m^3 > ... with levels."""
    field, n = balg.field, balg.dimension
    powers = [span_basis(field, ideal, n)]
    while powers[-1]:
        prods = [balg.multiply(x, y) for x in powers[-1] for y in powers[0]]
        powers.append(span_basis(field, [p for p in prods if any(p)], n))
    etas = []
    for level in range(len(powers) - 1):
        for v in extend_basis(field, powers[level + 1], powers[level]):
            etas.append((level + 1, v))
    return etas


def triangularize(sys: OperatorSystem, dec: Decomposition) -> TriangularSystem:
    """Basis change making every operator triangular.

    Per block the new basis is the block unit followed by a basis of the
    maximal ideal adapted to its power filtration, so products of ideal
    elements only involve strictly later slots.
    """
    endos = associated_endomorphisms(sys, dec)
    ident = [i for i, e in enumerate(endos) if e.is_identity]
    if not ident:
        raise MathFailure("no associated endomorphism is the identity")
    order = ident[:1] + [i for i in range(len(endos)) if i != ident[0]]
    field = sys.field
    d = sys.dimension

    new_basis = []
    slots = []
    for pos, bi in enumerate(order):
        blk = dec.blocks[bi]
        etas = _filtration_basis(blk.algebra, blk.ideal_basis)
        sigma_slot = len(new_basis)
        local = [(0, blk.unit)] + etas
        for li, (level, v) in enumerate(local):
            amb = [field.zero] * d
            for coef, bv in zip(v, blk.basis):
                if coef:
                    for k in range(d):
                        amb[k] += coef * bv[k]
            new_basis.append(tuple(amb))
            slots.append(SlotInfo(pos, sigma_slot, level, li))
    q = Matrix.from_columns(field, new_basis, d)
    qi = q.inverse()
    alg = sys.algebra
    consts = [
        [qi.apply(alg.multiply(new_basis[s], new_basis[t])) for t in range(d)] for s in range(d)
    ]
    new_alg = build_algebra(field, d, consts, qi.apply(alg.unit))

    for pos, bi in enumerate(order):
        s = next(i for i, info in enumerate(slots) if info.block == pos and info.level == 0)
        if qi.row(s) != endos[bi].coefficients:
            raise AssertionError("sigma slot does not carry the associated endomorphism")

    block_consts = []
    for pos in range(len(order)):
        eta_slots = [s for s, info in enumerate(slots) if info.block == pos and info.level > 0]
        entries = []
        for k, sk in enumerate(eta_slots, 1):
            for l, sl in enumerate(eta_slots, 1):
                prod = new_alg.constants[sk][sl]
                for j, sj in enumerate(eta_slots, 1):
                    if prod[sj]:
                        entries.append((k, l, j, prod[sj]))
        block_consts.append(tuple(entries))

    rules = tuple(_derive_rule(new_alg, slots, j) for j in range(d))
    ordered_endos = tuple(endos[bi] for bi in order)
    return TriangularSystem(
        sys, dec, q, qi, new_alg, tuple(slots), tuple(order), ordered_endos, tuple(block_consts), rules
    )


def _derive_rule(alg: Algebra, slots, j: int) -> ProductRule:
    d = alg.dimension
    s = slots[j].sigma
    a = alg.constants
    forms = {}
    for k in range(d):
        for l in range(d):
            c = a[k][l][j]
            if not c:
                continue
            if l > j or k > j:
                raise AssertionError(f"slot {j} rule references later slot ({k}, {l})")
            if l == j:
                if k != s or c != 1:
                    raise AssertionError(f"slot {j}: F_{l}(y) term is not sigma(x)")
                continue
            forms.setdefault(l, []).append((k, c))
    if j == s and forms:
        raise AssertionError(f"sigma slot {j} is not multiplicative")
    remainder = tuple((l, tuple(sorted(forms[l]))) for l in sorted(forms))
    return ProductRule(j, s, remainder)


def product_rule(tri: TriangularSystem, j: int) -> ProductRule:
    if not 0 <= j < len(tri.rules):
        raise BadSlot(f"slot {j} outside 0..{len(tri.rules) - 1}")
    return tri.rules[j]
