"""Line-oriented declaration format and the preset catalog.

::

    field Q            # or: field F 7
    dim 3
    ops id d s
    unit 1 0 1         # optional; solved for when absent
    sparse             # optional; missing mul pairs default to 0
    mul 0 0 = 1 0 0    # e_i e_j for i <= j
    invertible s
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .algebra import build_algebra
from .arith import QQ, Field
from .errors import DeclarationError, DivisionByZero, InputError
from .operators import OperatorSystem, build_system, single_operator_algebra

_SCALAR = re.compile(r"-?\d+(?:/\d+)?$")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*$")


@dataclass(frozen=True)
class SystemDecl:
    field: Field
    dimension: int
    ops: tuple
    unit: tuple | None
    mul: dict = dc_field(compare=True)
    invertible: tuple = ()
    sparse: bool = False

    def constants(self) -> list:
        d = self.dimension
        z = self.field.zero
        a = [[[z] * d for _ in range(d)] for _ in range(d)]
        for (i, j), row in self.mul.items():
            a[i][j] = list(row)
            a[j][i] = list(row)
        return a

    def to_system(self) -> OperatorSystem:
        alg = build_algebra(self.field, self.dimension, self.constants(), self.unit)
        return build_system(alg, self.ops, self.invertible)


def _tokens(line: str):
    """(text, column) pairs, 1-based columns."""
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]


def _scalar(field: Field, tok, lineno):
    text, col = tok
    if not _SCALAR.match(text):
        raise DeclarationError(f"expected a scalar, got {text!r}", lineno, col)
    try:
        return field(Fraction(text))
    except (ZeroDivisionError, DivisionByZero):
        raise DeclarationError(f"scalar {text!r} has a zero denominator in {field}", lineno, col)


def _int(tok, lineno, what="an integer"):
    text, col = tok
    if not re.fullmatch(r"\d+", text):
        raise DeclarationError(f"expected {what}, got {text!r}", lineno, col)
    return int(text)


def parse_declaration(text: str) -> SystemDecl:
    field = dim = ops = unit = None
    mul = {}
    inv = []
    sparse = False
    stage = 0  # 0 field, 1 dim, 2 ops, 3 unit/sparse/mul, 4 invertible
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        last_line = lineno
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        kw, kcol = toks[0]
        args = toks[1:]
        expected = ("field", "dim", "ops")
        if stage < 3 and kw != expected[stage]:
            raise DeclarationError(f"expected '{expected[stage]}', got {kw!r}", lineno, kcol)
        if kw == "field":
            if not args:
                raise DeclarationError("field needs 'Q' or 'F <prime>'", lineno, kcol + len(kw) + 1)
            if args[0][0] == "Q" and len(args) == 1:
                field = QQ
            elif args[0][0] == "F" and len(args) == 2:
                p = _int(args[1], lineno, "a prime")
                try:
                    field = Field(p)
                except InputError as exc:
                    raise DeclarationError(str(exc), lineno, args[1][1]) from None
            else:
                raise DeclarationError("field needs 'Q' or 'F <prime>'", lineno, args[0][1])
            stage = 1
        elif kw == "dim":
            if len(args) != 1:
                raise DeclarationError("dim takes one integer", lineno, kcol)
            dim = _int(args[0], lineno)
            if dim < 1:
                raise DeclarationError("dimension must be positive", lineno, args[0][1])
            stage = 2
        elif kw == "ops":
            names = [a for a, _ in args]
            if len(names) != dim:
                raise DeclarationError(f"ops lists {len(names)} names for dim {dim}", lineno, kcol)
            if names[0] != "id":
                raise DeclarationError("the first operator must be 'id'", lineno, args[0][1])
            for n, c in args:
                if not _NAME.match(n):
                    raise DeclarationError(f"bad operator name {n!r}", lineno, c)
            if len(set(names)) != len(names):
                raise DeclarationError("duplicate operator name", lineno, kcol)
            ops = tuple(names)
            stage = 3
        elif kw == "unit":
            if stage != 3 or unit is not None or mul or sparse:
                raise DeclarationError("'unit' must directly follow 'ops'", lineno, kcol)
            if len(args) != dim:
                raise DeclarationError(f"unit needs {dim} scalars", lineno, kcol)
            unit = tuple(_scalar(field, a, lineno) for a in args)
        elif kw == "sparse":
            if stage != 3 or mul or args:
                raise DeclarationError("'sparse' must precede all 'mul' lines", lineno, kcol)
            sparse = True
        elif kw == "mul":
            if stage != 3:
                raise DeclarationError("'mul' after 'invertible'", lineno, kcol)
            if len(args) != dim + 3 or args[2][0] != "=":
                raise DeclarationError(f"expected 'mul i j = ' and {dim} scalars", lineno, kcol)
            i = _int(args[0], lineno, "an index")
            j = _int(args[1], lineno, "an index")
            for idx, tok in ((i, args[0]), (j, args[1])):
                if idx >= dim:
                    raise DeclarationError(f"index {idx} out of range 0..{dim - 1}", lineno, tok[1])
            if i > j:
                raise DeclarationError(f"mul indices must satisfy i <= j, got {i} > {j}", lineno, args[0][1])
            if (i, j) in mul:
                raise DeclarationError(f"duplicate mul entry ({i}, {j})", lineno, kcol)
            mul[(i, j)] = tuple(_scalar(field, a, lineno) for a in args[3:])
        elif kw == "invertible":
            if len(args) != 1:
                raise DeclarationError("invertible takes one operator name", lineno, kcol)
            name, col = args[0]
            if ops is None or name not in ops:
                raise DeclarationError(f"unknown operator {name!r}", lineno, col)
            if name in inv:
                raise DeclarationError(f"{name!r} declared invertible twice", lineno, col)
            inv.append(name)
            stage = 4
        else:
            raise DeclarationError(f"unknown keyword {kw!r}", lineno, kcol)
    if stage < 3:
        raise DeclarationError(
            f"missing '{('field', 'dim', 'ops')[stage]}' declaration", last_line + 1, 1
        )
    if not sparse:
        missing = [(i, j) for i in range(dim) for j in range(i, dim) if (i, j) not in mul]
        if missing:
            i, j = missing[0]
            raise DeclarationError(
                f"missing mul entry ({i}, {j}); add it or declare 'sparse'", last_line + 1, 1
            )
    return SystemDecl(field, dim, ops, unit, dict(sorted(mul.items())), tuple(inv), sparse)


def _fmt(field: Field, x) -> str:
    return str(x) if field.characteristic == 0 else str(x.v)


def serialize_declaration(decl: SystemDecl) -> str:
    f = decl.field
    lines = ["field Q" if f.characteristic == 0 else f"field F {f.characteristic}"]
    lines.append(f"dim {decl.dimension}")
    lines.append("ops " + " ".join(decl.ops))
    if decl.unit is not None:
        lines.append("unit " + " ".join(_fmt(f, x) for x in decl.unit))
    if decl.sparse:
        lines.append("sparse")
    for (i, j), row in sorted(decl.mul.items()):
        lines.append(f"mul {i} {j} = " + " ".join(_fmt(f, x) for x in row))
    for n in decl.invertible:
        lines.append(f"invertible {n}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# presets


def _table_decl(field, ops, consts, unit, invertible=()) -> SystemDecl:
    d = len(ops)
    mul = {(i, j): tuple(field(x) for x in consts[i][j]) for i in range(d) for j in range(i, d)}
    return SystemDecl(
        field, d, tuple(ops), None if unit is None else tuple(field(u) for u in unit), mul, tuple(invertible)
    )


def _unit_table(d):
    return [[[0] * d for _ in range(d)] for _ in range(d)]


def _nderiv(n: int, field: Field) -> SystemDecl:
    d = n + 1
    a = _unit_table(d)
    for i in range(d):
        a[0][i][i] = 1
        a[i][0][i] = 1
    ops = ["id"] + [f"d{i}" for i in range(1, d)]
    return _table_decl(field, ops, a, [1] + [0] * n)


def _dsigma(field: Field) -> SystemDecl:
    a = _unit_table(3)
    a[0][0][0] = 1
    a[2][2][2] = 1
    a[0][1][1] = a[1][0][1] = 1
    return _table_decl(field, ["id", "d", "s"], a, [1, 0, 1], ["s"])


def _trunc3(field: Field) -> SystemDecl:
    a = _unit_table(3)
    for i in range(3):
        a[0][i][i] = a[i][0][i] = 1
    a[1][1][2] = 1
    return _table_decl(field, ["id", "t1", "t2"], a, [1, 0, 0])


def _sqrt2(field: Field) -> SystemDecl:
    a = _unit_table(2)
    a[0][0][0] = 1
    a[0][1][1] = a[1][0][1] = 1
    a[1][1][0] = 2
    return _table_decl(field, ["id", "f"], a, [1, 0])


def _single(params: str, field: Field) -> SystemDecl:
    try:
        a, b, c = (field(Fraction(x)) for x in params.split(","))
    except ValueError:
        raise InputError(f"single:<a>,<b>,<c> expects three scalars, got {params!r}") from None
    alg = single_operator_algebra(a, b, c, field)
    inv = ["f"] if c else []
    return _table_decl(field, ["id", "f"], alg.constants, alg.unit, inv)


PRESETS = ("nderiv:<n>", "dsigma", "single:<a>,<b>,<c>", "trunc3", "sqrt2")


def load_preset(name: str, field: Field = QQ) -> SystemDecl:
    """Preset declaration, round-tripped through the text format."""
    if name.startswith("nderiv:"):
        try:
            n = int(name.split(":", 1)[1])
        except ValueError:
            raise InputError(f"bad preset {name!r}") from None
        if n < 1:
            raise InputError("nderiv:<n> needs n >= 1")
        decl = _nderiv(n, field)
    elif name.startswith("single:"):
        decl = _single(name.split(":", 1)[1], field)
    elif name == "dsigma":
        decl = _dsigma(field)
    elif name == "trunc3":
        decl = _trunc3(field)
    elif name == "sqrt2":
        decl = _sqrt2(field)
    else:
        raise InputError(f"unknown preset {name!r}; known: {', '.join(PRESETS)}")
    return parse_declaration(serialize_declaration(decl))
