"""Exception hierarchy shared by every opfield module."""


class OpfieldError(Exception):
    """Base class for all library errors."""


class InputError(OpfieldError):
    """Malformed input: bad declaration, unknown preset, wrong arity."""


class MathFailure(OpfieldError):
    """The input is well formed but the requested construction does not exist."""


# exact-arith

class DivisionByZero(OpfieldError, ZeroDivisionError):
    pass


class FieldMismatch(OpfieldError, TypeError):
    pass


class NonSquare(InputError):
    pass


class ZeroPolynomial(OpfieldError, ValueError):
    pass


class DimensionMismatch(InputError):
    pass


# algebra-core

class NotCommutative(InputError):
    def __init__(self, i, j, k):
        super().__init__(f"a[{i}][{j}][{k}] != a[{j}][{i}][{k}]")
        self.witness = (i, j, k)


class NotAssociative(InputError):
    def __init__(self, i, j, k):
        super().__init__(f"(e{i} e{j}) e{k} != e{i} (e{j} e{k})")
        self.witness = (i, j, k)


class NoUnit(InputError):
    pass


class UnitMismatch(InputError):
    pass


class UnsupportedCharacteristic(MathFailure):
    pass


class ResidueNotBase(MathFailure):
    pass


# operator-system

class ArityMismatch(InputError):
    pass


class DuplicateName(InputError):
    pass


class ResidueAssumptionFailed(MathFailure):
    pass


class ConstraintViolated(InputError):
    pass


class DegenerateDerivation(ConstraintViolated):
    pass


class BadSlot(InputError):
    pass


# word-calculus / symbolic-engine

class ZeroCombination(OpfieldError, ValueError):
    pass


class UnknownLetter(InputError):
    pass


class UnsupportedFrobenius(OpfieldError):
    pass


class Unsupported(OpfieldError):
    pass


# growth

class BoundTooSmall(MathFailure):
    pass


# cli-frontend

class DeclarationError(InputError):
    def __init__(self, message, line=None, column=None):
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
        self.column = column
