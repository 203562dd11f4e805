"""Satisfiability of conjunctions of linear integer constraints.

Each constraint is normalised to ``sum(a_i * x_i) + b  (<= | == | !=)  0``.
Satisfiability is decided by interval propagation to a fixpoint followed by
branch-and-bound, bisecting the input with the narrowest remaining interval.
An exact rational simplex prunes nodes where propagation stalls.

Constraints are read over mathematical integers. Every compound subterm of a
constraint is additionally required to stay inside the 32-bit range, so any
model found here evaluates identically under the programs' wrapping
arithmetic.
"""

from __future__ import annotations

import enum
import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .core import (
    INT_MAX,
    INT_MIN,
    Binary,
    Const,
    Constraint,
    Input,
    Neg,
    Rel,
    SymExpr,
    render,
)

DEFAULT_BOUNDS = (INT_MIN, INT_MAX)
DEFAULT_NODE_LIMIT = 200_000
BRUTE_FORCE_CAP = 1 << 22
_PROPAGATION_ROUNDS = 64


class NonLinearError(ValueError):
    pass


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class Conjunction:
    constraints: tuple[Constraint, ...]
    inputs: tuple[str, ...]
    bounds: tuple[tuple[str, int, int], ...] = ()

    @classmethod
    def of(
        cls,
        constraints: Iterable[Constraint],
        inputs: Iterable[str] = (),
        bounds: Mapping[str, tuple[int, int]] | None = None,
    ) -> Conjunction:
        constraints = tuple(constraints)
        names = set(inputs)
        for c in constraints:
            names |= c.inputs()
        bounds = bounds or {}
        extra = set(bounds) - names
        if extra:
            names |= extra
        return cls(
            constraints,
            tuple(sorted(names)),
            tuple((n, lo, hi) for n, (lo, hi) in sorted(bounds.items())),
        )

    def bound(self, name: str) -> tuple[int, int]:
        for n, lo, hi in self.bounds:
            if n == name:
                return lo, hi
        return DEFAULT_BOUNDS

    def with_bounds(self, bounds: Mapping[str, tuple[int, int]]) -> Conjunction:
        merged = {n: (lo, hi) for n, lo, hi in self.bounds}
        merged.update(bounds)
        return Conjunction.of(self.constraints, self.inputs, merged)

    def render(self) -> str:
        if not self.constraints:
            return "true"
        return " && ".join(f"({c.render()})" for c in self.constraints)


class Status(enum.Enum):
    SAT = "sat"
    UNSAT = "unsat"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SolverResult:
    status: Status
    model: dict[str, int] | None = None
    reason: str | None = None

    @property
    def is_sat(self) -> bool:
        return self.status is Status.SAT

    @property
    def is_unsat(self) -> bool:
        return self.status is Status.UNSAT

    def to_json(self) -> str:
        return json.dumps(
            {"status": self.status.value, "model": self.model, "reason": self.reason},
            sort_keys=True,
        )


SAT = Status.SAT
UNSAT_RESULT = SolverResult(Status.UNSAT)


# ---------------------------------------------------------------------------
# Linear normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Linear:
    terms: tuple[tuple[str, int], ...]
    const: int

    @classmethod
    def build(cls, coeffs: Mapping[str, int], const: int) -> Linear:
        return cls(tuple(sorted((v, a) for v, a in coeffs.items() if a)), const)

    def value(self, model: Mapping[str, int]) -> int:
        return sum(a * model[v] for v, a in self.terms) + self.const


def _lin(e: SymExpr, guards: dict[Linear, None]) -> tuple[dict[str, int], int]:
    if isinstance(e, Const):
        return {}, e.value
    if isinstance(e, Input):
        return {e.name: 1}, 0
    if isinstance(e, Neg):
        coeffs, c = _lin(e.operand, guards)
        coeffs, c = {v: -a for v, a in coeffs.items()}, -c
    elif isinstance(e, Binary):
        if e.op not in ("+", "-", "*"):
            raise NonLinearError(f"non-linear operator {e.op!r} in {render(e)}")
        lc, lk = _lin(e.left, guards)
        rc, rk = _lin(e.right, guards)
        if e.op == "*":
            if lc and rc:
                raise NonLinearError(f"product of symbolic terms in {render(e)}")
            if lc:
                lc, lk, rc, rk = rc, rk, lc, lk
            coeffs, c = {v: a * lk for v, a in rc.items()}, rk * lk
        else:
            sign = 1 if e.op == "+" else -1
            coeffs = dict(lc)
            for v, a in rc.items():
                coeffs[v] = coeffs.get(v, 0) + sign * a
            c = lk + sign * rk
    else:
        raise TypeError(f"not a symbolic expression: {e!r}")
    coeffs = {v: a for v, a in coeffs.items() if a}
    if coeffs:
        guards[Linear.build(coeffs, c)] = None
    return coeffs, c


def linearize(e: SymExpr) -> Linear:
    """Linear form of ``e``; raises :class:`NonLinearError` otherwise."""
    coeffs, c = _lin(e, {})
    return Linear.build(coeffs, c)


class Kind(enum.Enum):
    LE = "<="
    EQ = "=="
    NE = "!="


@dataclass(frozen=True)
class Atom:
    """``sum(a_i * x_i) + const  kind  0``."""

    kind: Kind
    terms: tuple[tuple[str, int], ...]
    const: int

    def holds(self, model: Mapping[str, int]) -> bool:
        v = sum(a * model[x] for x, a in self.terms) + self.const
        if self.kind is Kind.LE:
            return v <= 0
        if self.kind is Kind.EQ:
            return v == 0
        return v != 0


def _atoms_for(c: Constraint, guards: dict[Linear, None]) -> list[Atom]:
    lc, lk = _lin(c.lhs, guards)
    rc, rk = _lin(c.rhs, guards)
    coeffs = dict(lc)
    for v, a in rc.items():
        coeffs[v] = coeffs.get(v, 0) - a
    d = Linear.build(coeffs, lk - rk)
    neg_terms = tuple((v, -a) for v, a in d.terms)
    rel = c.effective_rel
    if rel is Rel.EQ:
        return [Atom(Kind.EQ, d.terms, d.const)]
    if rel is Rel.NE:
        return [Atom(Kind.NE, d.terms, d.const)]
    if rel is Rel.LT:
        return [Atom(Kind.LE, d.terms, d.const + 1)]
    if rel is Rel.LE:
        return [Atom(Kind.LE, d.terms, d.const)]
    if rel is Rel.GT:
        return [Atom(Kind.LE, neg_terms, -d.const + 1)]
    return [Atom(Kind.LE, neg_terms, -d.const)]


def _linear_range(lin: Linear, box: Mapping[str, tuple[int, int]]) -> tuple[int, int]:
    lo = hi = lin.const
    for v, a in lin.terms:
        blo, bhi = box[v]
        lo += min(a * blo, a * bhi)
        hi += max(a * blo, a * bhi)
    return lo, hi


class _Unsat(Exception):
    pass


def _preprocess(atoms: list[Atom]) -> list[Atom]:
    """GCD-tighten atoms and merge those sharing a direction into intervals.

    Raises :class:`_Unsat` on a contradiction found without search.
    """
    intervals: dict[tuple, list] = {}
    excluded: dict[tuple, set[int]] = {}
    order: list[tuple] = []
    for atom in atoms:
        if not atom.terms:
            if not Atom(atom.kind, (), atom.const).holds({}):
                raise _Unsat
            continue
        g = 0
        for _, a in atom.terms:
            g = math.gcd(g, a)
        sign = 1 if atom.terms[0][1] > 0 else -1
        direction = tuple((v, sign * a // g) for v, a in atom.terms)
        if direction not in intervals:
            intervals[direction] = [None, None]
            excluded[direction] = set()
            order.append(direction)
        iv = intervals[direction]
        # sign * sum(direction) * g + const  kind  0
        if atom.kind is Kind.EQ:
            if atom.const % g:
                raise _Unsat
            value = -sign * (atom.const // g)
            lo = hi = value
        elif atom.kind is Kind.NE:
            if atom.const % g == 0:
                excluded[direction].add(-sign * (atom.const // g))
            continue
        elif sign > 0:
            # g*D + const <= 0  ->  D <= floor(-const / g)
            lo, hi = None, (-atom.const) // g
        else:
            # -g*D + const <= 0  ->  D >= ceil(const / g)
            lo, hi = -((-atom.const) // g), None
        if lo is not None and (iv[0] is None or lo > iv[0]):
            iv[0] = lo
        if hi is not None and (iv[1] is None or hi < iv[1]):
            iv[1] = hi

    out: list[Atom] = []
    for direction in order:
        lo, hi = intervals[direction]
        holes = excluded[direction]
        changed = True
        while changed:
            changed = False
            if lo is not None and lo in holes:
                lo += 1
                changed = True
            if hi is not None and hi in holes:
                hi -= 1
                changed = True
        if lo is not None and hi is not None and lo > hi:
            raise _Unsat
        neg_dir = tuple((v, -a) for v, a in direction)
        if lo is not None and lo == hi:
            out.append(Atom(Kind.EQ, direction, -lo))
            continue
        if hi is not None:
            out.append(Atom(Kind.LE, direction, -hi))
        if lo is not None:
            out.append(Atom(Kind.LE, neg_dir, lo))
        for value in sorted(holes):
            if (lo is None or value > lo) and (hi is None or value < hi):
                out.append(Atom(Kind.NE, direction, -value))
    return out


# ---------------------------------------------------------------------------
# Interval propagation
# ---------------------------------------------------------------------------


def _tighten_le(terms, const, box) -> bool:
    """Propagate ``sum(terms) + const <= 0``; return whether ``box`` changed."""
    mins = []
    total = const
    for v, a in terms:
        lo, hi = box[v]
        m = a * lo if a > 0 else a * hi
        mins.append(m)
        total += m
    if total > 0:
        raise _Unsat
    changed = False
    for (v, a), m in zip(terms, mins):
        r = -(total - m)
        lo, hi = box[v]
        if a > 0:
            nhi = r // a
            if nhi < hi:
                if nhi < lo:
                    raise _Unsat
                box[v] = (lo, nhi)
                changed = True
        else:
            nlo = -((-r) // a)
            if nlo > lo:
                if nlo > hi:
                    raise _Unsat
                box[v] = (nlo, hi)
                changed = True
    return changed


def _tighten_ne(terms, const, box) -> bool:
    free = None
    s = const
    for v, a in terms:
        lo, hi = box[v]
        if lo == hi:
            s += a * lo
        elif free is None:
            free = (v, a)
        else:
            return False
    if free is None:
        if s == 0:
            raise _Unsat
        return False
    v, a = free
    if (-s) % a:
        return False
    value = (-s) // a
    lo, hi = box[v]
    if value == lo:
        box[v] = (lo + 1, hi)
        return True
    if value == hi:
        box[v] = (lo, hi - 1)
        return True
    return False


def _propagate(atoms: Sequence[Atom], box: dict[str, tuple[int, int]]) -> bool:
    """Tighten ``box`` in place; return True when a fixpoint was reached."""
    for _ in range(_PROPAGATION_ROUNDS):
        changed = False
        for atom in atoms:
            if atom.kind is Kind.LE:
                changed |= _tighten_le(atom.terms, atom.const, box)
            elif atom.kind is Kind.EQ:
                changed |= _tighten_le(atom.terms, atom.const, box)
                neg_terms = tuple((v, -a) for v, a in atom.terms)
                changed |= _tighten_le(neg_terms, -atom.const, box)
            else:
                changed |= _tighten_ne(atom.terms, atom.const, box)
        if not changed:
            return True
    return False


# ---------------------------------------------------------------------------
# Exact rational relaxation
# ---------------------------------------------------------------------------


def _relaxation_feasible(atoms: Sequence[Atom], box: Mapping[str, tuple[int, int]]) -> bool:
    """Phase-one simplex over the rationals (Bland's rule), ignoring ``!=``."""
    names = sorted(box)
    index = {v: i for i, v in enumerate(names)}
    n = len(names)
    rows: list[tuple[list[int], int]] = []

    def add_le(terms, const):
        a = [0] * n
        b = -const
        for v, c in terms:
            a[index[v]] += c
            b -= c * box[v][0]
        rows.append((a, b))

    for atom in atoms:
        if atom.kind is Kind.NE:
            continue
        add_le(atom.terms, atom.const)
        if atom.kind is Kind.EQ:
            add_le(tuple((v, -a) for v, a in atom.terms), -atom.const)
    for v in names:
        a = [0] * n
        a[index[v]] = 1
        rows.append((a, box[v][1] - box[v][0]))

    m = len(rows)
    n_art = sum(1 for _, b in rows if b < 0)
    ncols = n + m + n_art
    first_art = n + m
    tab: list[list[Fraction]] = []
    basis: list[int] = []
    art = first_art
    for i, (a, b) in enumerate(rows):
        sign = -1 if b < 0 else 1
        row = [Fraction(0)] * (ncols + 1)
        for j, c in enumerate(a):
            if c:
                row[j] = Fraction(sign * c)
        row[n + i] = Fraction(sign)
        row[-1] = Fraction(sign * b)
        if b < 0:
            row[art] = Fraction(1)
            basis.append(art)
            art += 1
        else:
            basis.append(n + i)
        tab.append(row)
    if n_art == 0:
        return True

    obj = [Fraction(0)] * (ncols + 1)
    for i, row in enumerate(tab):
        if basis[i] >= first_art:
            for j in range(ncols + 1):
                obj[j] += row[j]
    for j in range(first_art, ncols):
        obj[j] = Fraction(0)

    while True:
        entering = next((j for j in range(first_art) if obj[j] > 0), None)
        if entering is None:
            break
        leave = None
        best = None
        for i, row in enumerate(tab):
            if row[entering] > 0:
                ratio = row[-1] / row[entering]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            # Unbounded direction cannot occur for a bounded phase-one objective.
            break
        prow = tab[leave]
        p = prow[entering]
        prow = [x / p for x in prow]
        tab[leave] = prow
        for i, row in enumerate(tab):
            if i != leave and row[entering]:
                f = row[entering]
                tab[i] = [x - f * y for x, y in zip(row, prow)]
        if obj[entering]:
            f = obj[entering]
            obj = [x - f * y for x, y in zip(obj, prow)]
        basis[leave] = entering
    return obj[-1] == 0


# ---------------------------------------------------------------------------
# Search
# ---------------------------------------------------------------------------


class _NodeLimit(Exception):
    pass


@dataclass
class _Problem:
    names: tuple[str, ...]
    atoms: list[Atom]
    box: dict[str, tuple[int, int]]
    checks: list[tuple[Constraint, list[Atom]]] = field(default_factory=list)


def _compile(c: Conjunction) -> _Problem:
    guards: dict[Linear, None] = {}
    atoms: list[Atom] = []
    checks = []
    for constraint in c.constraints:
        own = _atoms_for(constraint, guards)
        checks.append((constraint, own))
        atoms.extend(own)
    box = {name: c.bound(name) for name in c.inputs}
    for lin in guards:
        lo, hi = _linear_range(lin, box)
        if lo < INT_MIN:
            atoms.append(Atom(Kind.LE, tuple((v, -a) for v, a in lin.terms), INT_MIN - lin.const))
        if hi > INT_MAX:
            atoms.append(Atom(Kind.LE, lin.terms, lin.const - INT_MAX))
    return _Problem(c.inputs, atoms, box, checks)


def _search(atoms: list[Atom], names: Sequence[str], box, node_limit: int) -> dict[str, int] | None:
    try:
        atoms = _preprocess(atoms)
    except _Unsat:
        return None
    box = dict(box)
    for lo, hi in box.values():
        if lo > hi:
            return None
    multi = any(len(a.terms) > 1 for a in atoms)
    stack = [(box, True)]
    nodes = 0
    while stack:
        box, root = stack.pop()
        nodes += 1
        if nodes > node_limit:
            raise _NodeLimit
        try:
            converged = _propagate(atoms, box)
        except _Unsat:
            continue
        if multi and (root or not converged) and not _relaxation_feasible(atoms, box):
            continue
        free = [v for v in names if box[v][0] < box[v][1]]
        if not free:
            model = {v: box[v][0] for v in names}
            if all(a.holds(model) for a in atoms):
                return model
            continue
        v = min(free, key=lambda name: box[name][1] - box[name][0])
        lo, hi = box[v]
        mid = (lo + hi) // 2
        upper = dict(box)
        upper[v] = (mid + 1, hi)
        lower = dict(box)
        lower[v] = (lo, mid)
        stack.append((upper, False))
        stack.append((lower, False))
    return None


def _verify(problem: _Problem, model: Mapping[str, int]) -> None:
    for constraint, own in problem.checks:
        if not all(a.holds(model) for a in own) or not constraint.holds(model):
            raise SolverError(f"model {model} violates {constraint.render()}")
    for name, (lo, hi) in problem.box.items():
        if not lo <= model[name] <= hi:
            raise SolverError(f"model value {name}={model[name]} outside [{lo}, {hi}]")


def check_sat(c: Conjunction, node_limit: int = DEFAULT_NODE_LIMIT) -> SolverResult:
    try:
        problem = _compile(c)
    except NonLinearError as exc:
        return SolverResult(Status.UNKNOWN, reason=f"nonlinear: {exc}")
    try:
        model = _search(problem.atoms, problem.names, problem.box, node_limit)
    except _NodeLimit:
        return SolverResult(Status.UNKNOWN, reason="node limit reached")
    if model is None:
        return UNSAT_RESULT
    _verify(problem, model)
    return SolverResult(Status.SAT, model)


def _policy_key(value: int) -> int:
    """Order values by magnitude, positive first: 0, 1, -1, 2, -2, ..."""
    return 2 * abs(value) + (1 if value < 0 else 0)


def get_model(c: Conjunction, node_limit: int = DEFAULT_NODE_LIMIT) -> dict[str, int]:
    """Deterministic model: inputs in sorted order each take the smallest
    magnitude (ties toward positive) compatible with the earlier choices.
    """
    try:
        problem = _compile(c)
    except NonLinearError as exc:
        raise SolverError(f"no model: nonlinear: {exc}") from exc
    atoms, names = problem.atoms, problem.names

    def feasible(box) -> bool:
        try:
            return _search(atoms, names, box, node_limit) is not None
        except _NodeLimit:
            raise SolverError("no model: node limit reached") from None

    box = dict(problem.box)
    if not feasible(box):
        raise SolverError("no model: conjunction is unsatisfiable")
    for name in names:
        lo, hi = box[name]

        def within(k: int) -> bool:
            trial = dict(box)
            trial[name] = (max(lo, -k), min(hi, k))
            return trial[name][0] <= trial[name][1] and feasible(trial)

        if within(0):
            box[name] = (0, 0)
            continue
        k = 1
        while not within(k):
            k *= 2
        low, high = k // 2, k
        while high - low > 1:
            mid = (low + high) // 2
            if within(mid):
                high = mid
            else:
                low = mid
        k = high
        for value in (k, -k):
            trial = dict(box)
            trial[name] = (value, value)
            if lo <= value <= hi and feasible(trial):
                box[name] = (value, value)
                break
        else:
            raise SolverError(f"no model: lost feasibility fixing {name}")
    model = {name: box[name][0] for name in names}
    _verify(problem, model)
    return model


# ---------------------------------------------------------------------------
# Enumeration oracle
# ---------------------------------------------------------------------------


def _np_wrap(a: np.ndarray, lo: int, hi: int):
    if INT_MIN <= lo and hi <= INT_MAX:
        return a, lo, hi
    return ((a - INT_MIN) & 0xFFFFFFFF) + INT_MIN, INT_MIN, INT_MAX


def _np_eval(e: SymExpr, env: Mapping[str, tuple]):
    """Evaluate ``e`` over broadcastable arrays.

    Returns ``(values, defined, lo, hi)`` where ``lo``/``hi`` bound the values
    and let wrapping be skipped when no overflow is possible.
    """
    if isinstance(e, Const):
        return np.int64(e.value), True, e.value, e.value
    if isinstance(e, Input):
        return env[e.name]
    if isinstance(e, Neg):
        v, ok, lo, hi = _np_eval(e.operand, env)
        v, lo, hi = _np_wrap(-v, -hi, -lo)
        return v, ok, lo, hi
    a, oka, alo, ahi = _np_eval(e.left, env)
    b, okb, blo, bhi = _np_eval(e.right, env)
    ok = oka & okb
    op = e.op
    if op in ("+", "-", "*"):
        if op == "+":
            v, lo, hi = a + b, alo + blo, ahi + bhi
        elif op == "-":
            v, lo, hi = a - b, alo - bhi, ahi - blo
        else:
            corners = (alo * blo, alo * bhi, ahi * blo, ahi * bhi)
            v, lo, hi = a * b, min(corners), max(corners)
        v, lo, hi = _np_wrap(v, lo, hi)
        return v, ok, lo, hi
    if op in ("/", "%"):
        nz = b != 0
        safe = np.where(nz, b, 1)
        q = np.abs(a) // np.abs(safe)
        q = np.where((a < 0) != (safe < 0), -q, q)
        r = a - safe * q
        v, _, _ = _np_wrap(q if op == "/" else r, INT_MIN - 1, INT_MAX)
        return v, ok & nz, INT_MIN, INT_MAX
    return _np_rel(Rel(op), a, b).astype(np.int64), ok, 0, 1


def _np_rel(rel: Rel, a, b):
    if rel is Rel.EQ:
        return a == b
    if rel is Rel.NE:
        return a != b
    if rel is Rel.LT:
        return a < b
    if rel is Rel.LE:
        return a <= b
    if rel is Rel.GT:
        return a > b
    return a >= b


class WindowTooLarge(ValueError):
    pass


def brute_force_check(c: Conjunction, window: tuple[int, int] = (-64, 64)) -> SolverResult:
    """Exhaustive enumeration of ``window`` (intersected with the bounds).

    Uses the programs' wrapping semantics. The model follows the same
    selection policy as :func:`get_model`.
    """
    ranges = []
    for name in c.inputs:
        lo, hi = c.bound(name)
        ranges.append((max(lo, window[0]), min(hi, window[1])))
    total = 1
    for lo, hi in ranges:
        total *= max(0, hi - lo + 1)
    if total > BRUTE_FORCE_CAP:
        raise WindowTooLarge(f"{total} assignments exceed the cap of {BRUTE_FORCE_CAP}")
    if total == 0:
        return UNSAT_RESULT
    shape = tuple(hi - lo + 1 for lo, hi in ranges)
    env = {}
    for axis, (name, (lo, hi)) in enumerate(zip(c.inputs, ranges)):
        view = [1] * len(ranges)
        view[axis] = hi - lo + 1
        env[name] = (np.arange(lo, hi + 1, dtype=np.int64).reshape(view), True, lo, hi)
    mask = np.ones(shape, dtype=bool)
    for constraint in c.constraints:
        lhs, okl, _, _ = _np_eval(constraint.lhs, env)
        rhs, okr, _, _ = _np_eval(constraint.rhs, env)
        mask &= okl & okr & _np_rel(constraint.effective_rel, lhs, rhs)
    if not mask.any():
        return UNSAT_RESULT
    model = {}
    for axis, (name, (lo, _)) in enumerate(zip(c.inputs, ranges)):
        other = tuple(i for i in range(len(ranges)) if i != axis)
        present = mask.any(axis=other) if other else mask
        values = np.nonzero(present)[0] + lo
        keys = 2 * np.abs(values) + (values < 0)
        best = int(values[np.argmin(keys)])
        model[name] = best
        index = [slice(None)] * len(ranges)
        index[axis] = slice(best - lo, best - lo + 1)
        keep = np.zeros_like(mask)
        keep[tuple(index)] = mask[tuple(index)]
        mask = keep
    return SolverResult(Status.SAT, model)


# ---------------------------------------------------------------------------
# SMT-LIB export
# ---------------------------------------------------------------------------


def _smt_int(value: int) -> str:
    return str(value) if value >= 0 else f"(- {-value})"


def _smt_term(e: SymExpr) -> str:
    if isinstance(e, Const):
        return _smt_int(e.value)
    if isinstance(e, Input):
        return e.name
    if isinstance(e, Neg):
        return f"(- {_smt_term(e.operand)})"
    a, b = _smt_term(e.left), _smt_term(e.right)
    if e.op in ("+", "-", "*"):
        return f"({e.op} {a} {b})"
    if e.op in ("/", "%"):
        # Truncating division expressed through SMT-LIB's euclidean div.
        q = f"(ite (>= {a} 0) (div {a} {b}) (- (div (- {a}) {b})))"
        return q if e.op == "/" else f"(- {a} (* {b} {q}))"
    return f"(ite {_smt_rel(Rel(e.op), a, b)} 1 0)"


def _smt_rel(rel: Rel, a: str, b: str) -> str:
    if rel is Rel.EQ:
        return f"(= {a} {b})"
    if rel is Rel.NE:
        return f"(not (= {a} {b}))"
    return f"({rel.symbol} {a} {b})"


def to_smtlib(c: Conjunction) -> str:
    lines = ["(set-logic QF_NIA)" if _nonlinear(c) else "(set-logic QF_LIA)"]
    for name in c.inputs:
        lines.append(f"(declare-const {name} Int)")
    for constraint in c.constraints:
        rel = constraint.effective_rel
        lines.append(f"(assert {_smt_rel(rel, _smt_term(constraint.lhs), _smt_term(constraint.rhs))})")
    for name, lo, hi in c.bounds:
        if (lo, hi) != DEFAULT_BOUNDS:
            lines.append(f"(assert (and (<= {_smt_int(lo)} {name}) (<= {name} {_smt_int(hi)})))")
    lines.append("(check-sat)")
    if c.inputs:
        lines.append("(get-model)")
    return "\n".join(lines) + "\n"


def _nonlinear(c: Conjunction) -> bool:
    for constraint in c.constraints:
        try:
            _atoms_for(constraint, {})
        except NonLinearError:
            return True
    return False


def conjunction_key(c: Conjunction) -> str:
    """Canonical text used for caching and deduplication."""
    parts = [x.render() for x in c.constraints]
    parts += [f"{n} in [{lo}, {hi}]" for n, lo, hi in c.bounds]
    return " ; ".join(itertools.chain(c.inputs, ["|"], parts))
