import random

import pytest

from linear import random_conjunction
from shadowdiff.core import Const, Constraint, Input, Rel, binary, neg
from shadowdiff.solver import (
    Conjunction,
    Status,
    WindowTooLarge,
    brute_force_check,
    check_sat,
    conjunction_key,
    get_model,
    to_smtlib,
)

X, Y = Input("x"), Input("y")


def c(rel, lhs, rhs, polarity=True):
    return Constraint(Rel(rel), lhs, rhs, polarity)


def test_simple_sat_and_unsat():
    assert check_sat(Conjunction.of([c("<", X, Const(0)), c(">", X, Const(-5))])).is_sat
    assert check_sat(Conjunction.of([c("<", X, Const(0)), c(">", X, Const(1))])).is_unsat


def test_foo_line10_diff_false_models():
    pc = [c("<", X, Const(0)), c(">", neg(X), Const(1)), c("<=", X, Const(1))]
    model = get_model(Conjunction.of(pc))
    assert model == {"x": -2}


def test_model_policy_prefers_small_magnitude():
    assert get_model(Conjunction.of([c(">=", X, Const(-3))])) == {"x": 0}
    assert get_model(Conjunction.of([c("!=", X, Const(0))])) == {"x": 1}
    assert get_model(Conjunction.of([c("<", X, Const(0))])) == {"x": -1}


def test_equality_with_parity():
    two_x = binary("*", Const(2), X)
    assert check_sat(Conjunction.of([c("==", two_x, Const(7))])).is_unsat
    assert get_model(Conjunction.of([c("==", two_x, Const(8))])) == {"x": 4}


def test_nonlinear_is_unknown():
    r = check_sat(Conjunction.of([c("==", binary("*", X, Y), Const(6))]))
    assert r.status is Status.UNKNOWN
    r = check_sat(Conjunction.of([c("==", binary("/", X, Const(2)), Const(3))]))
    assert r.status is Status.UNKNOWN


def test_overflowing_models_are_excluded():
    big = binary("+", X, Const(2**31 - 1))
    model = get_model(Conjunction.of([c(">", big, Const(2**31 - 3))]))
    assert -1 <= model["x"] <= 0


def test_brute_force_window_cap():
    wide = Conjunction.of([c("<", X, Y)], bounds={"x": (-2**20, 2**20), "y": (-2**20, 2**20)})
    with pytest.raises(WindowTooLarge):
        brute_force_check(wide, window=(-2**20, 2**20))


def test_smtlib_text():
    text = to_smtlib(Conjunction.of([c("<", X, Const(-2)), c("==", X, Y, False)]))
    assert "(set-logic QF_LIA)" in text
    assert "(declare-const x Int)" in text
    assert "(assert (< x (- 2)))" in text
    assert "(assert (not (not (= x y))))" in text or "(assert (not (= x y)))" in text or "(= x y)" in text


def test_conjunction_key_is_stable():
    a = Conjunction.of([c("<", X, Const(0))], ["x"])
    b = Conjunction.of([c("<", X, Const(0))], ["x"])
    assert conjunction_key(a) == conjunction_key(b)


@pytest.mark.parametrize("seed", range(20))
def test_agrees_with_enumeration(seed):
    rng = random.Random(seed)
    for _ in range(20):
        conj = random_conjunction(rng)
        ours = check_sat(conj)
        oracle = brute_force_check(conj)
        assert ours.status == oracle.status
        if ours.is_sat:
            assert all(k.holds(ours.model) for k in conj.constraints)
            assert get_model(conj) == oracle.model
