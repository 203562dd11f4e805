"""Symbolic expressions, paired old/new expressions and shadow-aware arithmetic.

Expressions are immutable trees over named integer inputs. Smart
constructors (:func:`neg`, :func:`binary`) apply the only two rewrites the
toolkit performs: constant folding and double-negation elimination, so that
structural equality stays meaningful when deciding whether the old and new
version of a value still share one expression.

Rendering is infix, fully parenthesising nested binary operands, e.g.
``-x``, ``2 * x``, ``(x + 1) * y``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Mapping, Union

INT_MIN = -(2**31)
INT_MAX = 2**31 - 1


def wrap(value: int) -> int:
    """Reduce ``value`` to 32-bit two's-complement."""
    return ((value - INT_MIN) & 0xFFFFFFFF) + INT_MIN


def div32(a: int, b: int) -> int:
    """Truncating division with 32-bit wraparound (``INT_MIN / -1 == INT_MIN``)."""
    q = abs(a) // abs(b)
    if (a < 0) != (b < 0):
        q = -q
    return wrap(q)


def rem32(a: int, b: int) -> int:
    q = abs(a) // abs(b)
    if (a < 0) != (b < 0):
        q = -q
    return wrap(a - b * q)


class Rel(enum.Enum):
    EQ = "=="
    NE = "!="
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="

    @property
    def symbol(self) -> str:
        return self.value

    def negate(self) -> Rel:
        return _REL_NEGATION[self]

    def swap(self) -> Rel:
        """Relation with operands exchanged (``a < b`` iff ``b > a``)."""
        return _REL_SWAP[self]

    def holds(self, a: int, b: int) -> bool:
        if self is Rel.EQ:
            return a == b
        if self is Rel.NE:
            return a != b
        if self is Rel.LT:
            return a < b
        if self is Rel.LE:
            return a <= b
        if self is Rel.GT:
            return a > b
        return a >= b

    @classmethod
    def from_symbol(cls, symbol: str) -> Rel:
        return cls(symbol)


_REL_NEGATION = {
    Rel.EQ: Rel.NE, Rel.NE: Rel.EQ,
    Rel.LT: Rel.GE, Rel.GE: Rel.LT,
    Rel.GT: Rel.LE, Rel.LE: Rel.GT,
}
_REL_SWAP = {
    Rel.EQ: Rel.EQ, Rel.NE: Rel.NE,
    Rel.LT: Rel.GT, Rel.GT: Rel.LT,
    Rel.LE: Rel.GE, Rel.GE: Rel.LE,
}

ARITH_OPS = ("+", "-", "*", "/", "%")
REL_SYMBOLS = tuple(r.value for r in Rel)


# ---------------------------------------------------------------------------
# Symbolic expressions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: int

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Input:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Neg:
    operand: SymExpr

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Binary:
    """Arithmetic (``+ - * / %``) or comparison (0/1 valued) node."""

    op: str
    left: SymExpr
    right: SymExpr

    def __str__(self) -> str:
        return render(self)

    @property
    def is_comparison(self) -> bool:
        return self.op in REL_SYMBOLS


SymExpr = Union[Const, Input, Neg, Binary]


def const(value: int) -> Const:
    return Const(wrap(value))


def neg(e: SymExpr) -> SymExpr:
    if isinstance(e, Const):
        return Const(wrap(-e.value))
    if isinstance(e, Neg):
        return e.operand
    return Neg(e)


def _fold(op: str, a: int, b: int) -> int | None:
    if op == "+":
        return wrap(a + b)
    if op == "-":
        return wrap(a - b)
    if op == "*":
        return wrap(a * b)
    if op == "/":
        return None if b == 0 else div32(a, b)
    if op == "%":
        return None if b == 0 else rem32(a, b)
    return int(Rel(op).holds(a, b))


def binary(op: str, left: SymExpr, right: SymExpr) -> SymExpr:
    if op not in ARITH_OPS and op not in REL_SYMBOLS:
        raise ValueError(f"unknown operator {op!r}")
    if isinstance(left, Const) and isinstance(right, Const):
        folded = _fold(op, left.value, right.value)
        if folded is not None:
            return Const(folded)
    return Binary(op, left, right)


def inputs_of(e: SymExpr) -> frozenset[str]:
    if isinstance(e, Input):
        return frozenset((e.name,))
    if isinstance(e, Const):
        return frozenset()
    if isinstance(e, Neg):
        return inputs_of(e.operand)
    return inputs_of(e.left) | inputs_of(e.right)


class EvaluationError(ArithmeticError):
    """Division or remainder by zero while evaluating ``expr``."""

    def __init__(self, expr: SymExpr):
        super().__init__(f"division by zero in {render(expr)}")
        self.expr = expr


def eval_concrete(e: SymExpr, binding: Mapping[str, int]) -> int:
    """Evaluate ``e`` with 32-bit wrapping semantics."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Input):
        return wrap(binding[e.name])
    if isinstance(e, Neg):
        return wrap(-eval_concrete(e.operand, binding))
    a = eval_concrete(e.left, binding)
    b = eval_concrete(e.right, binding)
    result = _fold(e.op, a, b)
    if result is None:
        raise EvaluationError(e)
    return result


def _render_operand(e: SymExpr) -> str:
    if isinstance(e, Binary):
        return f"({render(e)})"
    return render(e)


def render(e: SymExpr) -> str:
    if isinstance(e, Const):
        return str(e.value)
    if isinstance(e, Input):
        return e.name
    if isinstance(e, Neg):
        inner = e.operand
        if isinstance(inner, Input):
            return f"-{inner.name}"
        return f"-({render(inner)})"
    return f"{_render_operand(e.left)} {e.op} {_render_operand(e.right)}"


# ---------------------------------------------------------------------------
# Paired expressions and shadow values
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiffExpr:
    """Old (``shadow``) and new (``symbolic``) expressions of a diverged value."""

    shadow: SymExpr
    symbolic: SymExpr

    def __post_init__(self):
        if self.shadow == self.symbolic:
            raise ValueError("DiffExpr components must differ; use the shared expression")

    def __str__(self) -> str:
        return f"diff({render(self.shadow)}, {render(self.symbolic)})"


SymContent = Union[Const, Input, Neg, Binary, DiffExpr]


def shadow_of(attr: SymContent) -> SymExpr:
    return attr.shadow if isinstance(attr, DiffExpr) else attr


def symbolic_of(attr: SymContent) -> SymExpr:
    return attr.symbolic if isinstance(attr, DiffExpr) else attr


def diff_or_plain(shadow: SymExpr, symbolic: SymExpr) -> SymContent:
    return shadow if shadow == symbolic else DiffExpr(shadow, symbolic)


def make_diff(attr_old: SymContent, attr_new: SymContent) -> SymContent:
    """Combine the attributes of the two ``change`` operands.

    The old version keeps only the old operand's shadow side and the new
    version only the new operand's symbolic side; equal results collapse to
    the shared expression.
    """
    return diff_or_plain(shadow_of(attr_old), symbolic_of(attr_new))


@dataclass(frozen=True)
class ShadowValue:
    """A stack or frame slot: concrete and symbolic content for both versions.

    ``sym is None`` means the value is concrete only (and identical in both
    versions).
    """

    conc_old: int
    conc_new: int
    sym: SymContent | None = None

    def __post_init__(self):
        if self.sym is None and self.conc_old != self.conc_new:
            raise ValueError("a concrete-only value must agree in both versions")

    @classmethod
    def concrete(cls, value: int) -> ShadowValue:
        v = wrap(value)
        return cls(v, v, None)

    @classmethod
    def of(cls, conc_old: int, conc_new: int, sym: SymContent | None) -> ShadowValue:
        """Build a value, demoting a shared constant expression to concrete-only."""
        if isinstance(sym, Const) and conc_old == conc_new == sym.value:
            sym = None
        return cls(conc_old, conc_new, sym)

    @property
    def is_concrete(self) -> bool:
        return self.sym is None

    @property
    def is_diff(self) -> bool:
        return isinstance(self.sym, DiffExpr)

    @property
    def old_expr(self) -> SymExpr:
        if self.sym is None:
            return Const(self.conc_old)
        return shadow_of(self.sym)

    @property
    def new_expr(self) -> SymExpr:
        if self.sym is None:
            return Const(self.conc_new)
        return symbolic_of(self.sym)

    def content(self) -> SymContent:
        """Symbolic content with concrete-only values lifted to constants."""
        return Const(self.conc_old) if self.sym is None else self.sym

    def version(self, version: str) -> tuple[int, SymExpr]:
        if version == "old":
            return self.conc_old, self.old_expr
        return self.conc_new, self.new_expr

    def __str__(self) -> str:
        if self.sym is None:
            return str(self.conc_old)
        return f"{self.sym} <{self.conc_old}, {self.conc_new}>"


class ShadowDivisionError(ArithmeticError):
    """Concrete division by zero in one or both versions."""

    def __init__(self, versions: frozenset[str]):
        super().__init__(f"division by zero in {', '.join(sorted(versions))}")
        self.versions = versions


def shadow_change(old: ShadowValue, new: ShadowValue) -> ShadowValue:
    sym = make_diff(old.content(), new.content())
    return ShadowValue.of(old.conc_old, new.conc_new, sym)


def shadow_binop(
    op: str, v1: ShadowValue, v2: ShadowValue, ignore: frozenset[str] = frozenset()
) -> ShadowValue:
    """Apply ``op`` to both versions.

    A zero divisor raises :class:`ShadowDivisionError` unless its version is
    listed in ``ignore``; that version's concrete result is then 0 (used for
    divisions that only belong to the other version).
    """
    if op in ("/", "%"):
        zero = frozenset(
            name for name, d in (("old", v2.conc_old), ("new", v2.conc_new)) if d == 0
        )
        if zero - ignore:
            raise ShadowDivisionError(zero - ignore)
    c_old = _fold(op, v1.conc_old, v2.conc_old)
    c_new = _fold(op, v1.conc_new, v2.conc_new)
    c_old = 0 if c_old is None else c_old
    c_new = 0 if c_new is None else c_new
    if v1.is_concrete and v2.is_concrete:
        return ShadowValue(c_old, c_new, None)
    sym_r = binary(op, v1.new_expr, v2.new_expr)
    if not (v1.is_diff or v2.is_diff):
        return ShadowValue.of(c_old, c_new, sym_r)
    shadow_r = binary(op, v1.old_expr, v2.old_expr)
    return ShadowValue.of(c_old, c_new, diff_or_plain(shadow_r, sym_r))


def shadow_neg(v: ShadowValue) -> ShadowValue:
    c_old, c_new = wrap(-v.conc_old), wrap(-v.conc_new)
    if v.is_concrete:
        return ShadowValue(c_old, c_new, None)
    if not v.is_diff:
        return ShadowValue.of(c_old, c_new, neg(v.new_expr))
    return ShadowValue.of(c_old, c_new, diff_or_plain(neg(v.old_expr), neg(v.new_expr)))


def shadow_cmp(rel: Rel, v1: ShadowValue, v2: ShadowValue) -> ShadowValue:
    """Comparison producing a 0/1 value (boolean ``change`` operands)."""
    return shadow_binop(rel.value, v1, v2)


# ---------------------------------------------------------------------------
# Constraints
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Constraint:
    rel: Rel
    lhs: SymExpr
    rhs: SymExpr
    polarity: bool = True

    @property
    def effective_rel(self) -> Rel:
        return self.rel if self.polarity else self.rel.negate()

    def negate(self) -> Constraint:
        return replace(self, polarity=not self.polarity)

    def normalized(self) -> Constraint:
        return Constraint(self.effective_rel, self.lhs, self.rhs, True)

    def inputs(self) -> frozenset[str]:
        return inputs_of(self.lhs) | inputs_of(self.rhs)

    def holds(self, binding: Mapping[str, int]) -> bool:
        return self.effective_rel.holds(
            eval_concrete(self.lhs, binding), eval_concrete(self.rhs, binding)
        )

    def render(self) -> str:
        return f"{render(self.lhs)} {self.effective_rel.symbol} {render(self.rhs)}"

    def __str__(self) -> str:
        return self.render()


def condition_of(e: SymExpr, truth: bool = True) -> Constraint | bool:
    """Constraint stating that the 0/1 value ``e`` is ``truth``.

    Ground expressions yield a plain bool instead of a constraint.
    """
    if isinstance(e, Const):
        return (e.value != 0) == truth
    if isinstance(e, Binary) and e.is_comparison:
        c = Constraint(Rel(e.op), e.left, e.right)
    else:
        c = Constraint(Rel.NE, e, Const(0))
    return c if truth else c.negate()


def compare(rel: Rel, a: SymExpr, b: SymExpr) -> Constraint | bool:
    """``a rel b`` as a constraint, or a bool when both sides are constants."""
    if isinstance(a, Const) and isinstance(b, Const):
        return rel.holds(a.value, b.value)
    return Constraint(rel, a, b)


def render_condition(c: Constraint | bool) -> str:
    if isinstance(c, bool):
        return "true" if c else "false"
    return c.render()


def negate_condition(c: Constraint | bool) -> Constraint | bool:
    if isinstance(c, bool):
        return not c
    return c.negate()
