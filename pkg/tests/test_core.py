import pytest
from hypothesis import given
from hypothesis import strategies as st

from shadowdiff.core import (
    INT_MAX,
    INT_MIN,
    Const,
    Constraint,
    DiffExpr,
    Input,
    Rel,
    ShadowDivisionError,
    ShadowValue,
    binary,
    condition_of,
    eval_concrete,
    make_diff,
    negate_condition,
    shadow_binop,
    shadow_change,
    shadow_neg,
    wrap,
)

X, Y = Input("x"), Input("y")
i32 = st.integers(INT_MIN, INT_MAX)


def test_wrap():
    assert wrap(INT_MAX + 1) == INT_MIN
    assert wrap(INT_MIN - 1) == INT_MAX
    assert wrap(-5) == -5


def test_truncating_division():
    assert eval_concrete(binary("/", X, Const(2)), {"x": -7}) == -3
    assert eval_concrete(binary("%", X, Const(2)), {"x": -7}) == -1
    assert eval_concrete(binary("/", X, Const(-1)), {"x": INT_MIN}) == INT_MIN


def test_make_diff_of_plain_operands():
    assert make_diff(X, Y) == DiffExpr(X, Y)
    assert make_diff(X, X) == X


def test_make_diff_takes_old_shadow_and_new_symbolic():
    old = DiffExpr(X, Const(1))
    new = DiffExpr(Const(2), Y)
    assert make_diff(old, new) == DiffExpr(X, Y)
    assert make_diff(DiffExpr(X, Y), DiffExpr(Y, X)) == X


def test_diff_expr_components_must_differ():
    with pytest.raises(ValueError):
        DiffExpr(X, X)


def test_change_of_y_and_minus_y():
    y = ShadowValue(3, 3, X)
    result = shadow_change(y, shadow_neg(y))
    assert (result.conc_old, result.conc_new) == (3, -3)
    assert result.sym == DiffExpr(X, binary("-", Const(0), X)) or result.sym == DiffExpr(X, shadow_neg(y).sym)


def test_binop_without_diff_shares_expression():
    a = ShadowValue(2, 2, X)
    b = ShadowValue.concrete(5)
    r = shadow_binop("+", a, b)
    assert r.sym == binary("+", X, Const(5))
    assert not r.is_diff
    assert (r.conc_old, r.conc_new) == (7, 7)


def test_binop_with_diff_operand():
    a = ShadowValue(2, -2, DiffExpr(X, Y))
    r = shadow_binop("*", a, ShadowValue.concrete(3))
    assert r.sym == DiffExpr(binary("*", X, Const(3)), binary("*", Y, Const(3)))
    assert (r.conc_old, r.conc_new) == (6, -6)


def test_binop_keeps_diff_when_only_concretes_agree():
    # No algebraic simplification: x*0 and y*0 stay distinct expressions.
    a = ShadowValue(2, 3, DiffExpr(X, Y))
    r = shadow_binop("*", a, ShadowValue.concrete(0))
    assert r.is_diff and r.conc_old == r.conc_new == 0


def test_constant_diff_folds_away():
    a = ShadowValue(1, 1, DiffExpr(Const(1), X))
    r = shadow_change(a, ShadowValue.concrete(1))
    assert r.is_concrete and r.conc_new == 1


def test_concrete_only_binop():
    r = shadow_binop("-", ShadowValue.concrete(4), ShadowValue.concrete(9))
    assert r.is_concrete and r.conc_new == -5


def test_division_by_zero_reports_versions():
    d = ShadowValue(0, 1, DiffExpr(X, Y))
    with pytest.raises(ShadowDivisionError) as info:
        shadow_binop("/", ShadowValue.concrete(8), d)
    assert info.value.versions == frozenset({"old"})
    r = shadow_binop("/", ShadowValue.concrete(8), d, ignore=frozenset({"old"}))
    assert (r.conc_old, r.conc_new) == (0, 8)


def test_concrete_only_values_must_agree():
    with pytest.raises(ValueError):
        ShadowValue(1, 2, None)


def test_condition_negation():
    c = condition_of(binary("<", X, Const(0)))
    assert isinstance(c, Constraint)
    assert c.holds({"x": -1}) and not c.holds({"x": 0})
    n = negate_condition(c)
    assert n.holds({"x": 0}) and n.render() == "x >= 0"
    assert condition_of(Const(1)) is True and condition_of(Const(0), False) is True


def test_rel_negate_and_swap():
    for rel in Rel:
        for a in range(-2, 3):
            for b in range(-2, 3):
                assert rel.negate().holds(a, b) == (not rel.holds(a, b))
                assert rel.swap().holds(b, a) == rel.holds(a, b)


@given(i32, i32, i32, i32, st.sampled_from(["+", "-", "*", "/", "%"]))
def test_shadow_binop_matches_concrete_versions(xo, xn, k, b, op):
    """Each version of the result evaluates like plain arithmetic on that version."""
    a = ShadowValue.of(wrap(xo), wrap(xn), DiffExpr(X, Y) if xo != xn else X)
    c = ShadowValue.of(b, b, Input("z"))
    binding_old = {"x": xo, "y": xn, "z": b}
    if op in "/%" and b == 0:
        with pytest.raises(ShadowDivisionError):
            shadow_binop(op, a, c)
        return
    r = shadow_binop(op, a, c)
    expect_old = eval_concrete(binary(op, Const(xo), Const(b)), {})
    expect_new = eval_concrete(binary(op, Const(xn), Const(b)), {})
    assert (r.conc_old, r.conc_new) == (expect_old, expect_new)
    assert eval_concrete(r.old_expr, binding_old) == expect_old
    assert eval_concrete(r.new_expr, binding_old) == expect_new


@given(i32, i32)
def test_shadow_neg_matches_concrete(xo, xn):
    a = ShadowValue.of(xo, xn, DiffExpr(X, Y) if xo != xn else X)
    r = shadow_neg(a)
    assert (r.conc_old, r.conc_new) == (wrap(-xo), wrap(-xn))
    assert eval_concrete(r.new_expr, {"x": xo, "y": xn}) == wrap(-xn)
