"""Small-step semantics for the target language under a method substitution,
fuel-bounded.

Axiom rules (beta, case selection, method unfolding, primitive operators)
cost one step each; context descent is free.  A method variable in function
position unfolds immediately (`Y E -> mu(Y) E`), before its argument is
reduced, which keeps the strategy deterministic.
"""

from __future__ import annotations

import sys

from dataclasses import dataclass

from . import tl_ast as tl

sys.setrecursionlimit(max(sys.getrecursionlimit(), 8000))
from .tl_ast import App, Case, Clause, CtorApp, Lam, MethodVar, TLBool, TLInt, TLPrim, TLVar

MAX_TERM_DEPTH = 1000

MATCH_FAILURE = "match-failure"
UNBOUND_METHOD = "unbound-method"
NON_FUNCTION = "non-function-application"
BAD_PRIM = "bad-prim"
UNBOUND_VAR = "unbound-variable"


@dataclass(frozen=True)
class Stepped:
    expr: object
    rule: str


@dataclass(frozen=True)
class AlreadyValue:
    pass


@dataclass(frozen=True)
class Stuck:
    reason: str
    detail: str


class _Stuck(Exception):
    def __init__(self, reason, detail):
        self.reason = reason
        self.detail = detail
        super().__init__(f"{reason}: {detail}")


class _TooDeep(Exception):
    pass


@dataclass(frozen=True)
class DepthExceeded:
    pass


def subst(e, x, v):
    """Substitute value v for variable x; binders shadow."""
    if isinstance(e, TLVar):
        return v if e.name == x else e
    if isinstance(e, (MethodVar, TLInt, TLBool)):
        return e
    if isinstance(e, CtorApp):
        return CtorApp(e.ctor, tuple(subst(a, x, v) for a in e.args))
    if isinstance(e, Lam):
        if e.var == x:
            return e
        return Lam(e.var, subst(e.body, x, v))
    if isinstance(e, App):
        return App(subst(e.fn, x, v), subst(e.arg, x, v))
    if isinstance(e, Case):
        clauses = tuple(
            c if x in c.pat.vars else Clause(c.pat, subst(c.body, x, v))
            for c in e.clauses)
        return Case(subst(e.scrut, x, v), clauses)
    if isinstance(e, TLPrim):
        return TLPrim(e.op, subst(e.left, x, v), subst(e.right, x, v))
    raise TypeError(f"not a TL expression: {e!r}")


def tl_step(mu, e):
    """One reduction step under method substitution mu."""
    try:
        r = _step(mu, e)
    except _Stuck as s:
        return Stuck(s.reason, s.detail)
    except _TooDeep:
        return DepthExceeded()
    if r is None:
        return AlreadyValue()
    return Stepped(*r)


def _step(mu, e, depth=0):
    if depth > MAX_TERM_DEPTH:
        raise _TooDeep()
    if isinstance(e, (TLVar, MethodVar, TLInt, TLBool, Lam)):
        return None

    if isinstance(e, CtorApp):
        for i, a in enumerate(e.args):
            if not tl.is_value(a):
                r = _step(mu, a, depth + 1)
                assert r is not None
                e2, rule = r
                return CtorApp(e.ctor, e.args[:i] + (e2,) + e.args[i + 1:]), rule
        return None

    if isinstance(e, App):
        if isinstance(e.fn, MethodVar):
            lam = mu.get(e.fn.name)
            if lam is None:
                raise _Stuck(UNBOUND_METHOD, f"unbound method variable {e.fn.name}")
            return App(lam, e.arg), "tl-method"
        if not tl.is_value(e.fn):
            r = _step(mu, e.fn, depth + 1)
            assert r is not None
            e2, rule = r
            return App(e2, e.arg), rule
        if not tl.is_value(e.arg):
            r = _step(mu, e.arg, depth + 1)
            assert r is not None
            e2, rule = r
            return App(e.fn, e2), rule
        if isinstance(e.fn, Lam):
            return subst(e.fn.body, e.fn.var, e.arg), "tl-lambda"
        raise _Stuck(NON_FUNCTION, f"applying non-function {tl.print_expr(e.fn)}")

    if isinstance(e, Case):
        if not tl.is_value(e.scrut):
            r = _step(mu, e.scrut, depth + 1)
            assert r is not None
            e2, rule = r
            return Case(e2, e.clauses), rule
        v = e.scrut
        if not isinstance(v, CtorApp):
            raise _Stuck(MATCH_FAILURE, f"case on non-constructor value {tl.print_expr(v)}")
        for c in e.clauses:
            if c.pat.ctor == v.ctor:
                if len(c.pat.vars) != len(v.args):
                    raise _Stuck(MATCH_FAILURE,
                                 f"pattern arity mismatch for {v.ctor}")
                body = c.body
                for x, a in zip(c.pat.vars, v.args):
                    body = subst(body, x, a)
                return body, "tl-case"
        raise _Stuck(MATCH_FAILURE, f"no clause matches {v.ctor}")

    if isinstance(e, TLPrim):
        if not tl.is_value(e.left):
            r = _step(mu, e.left, depth + 1)
            assert r is not None
            e2, rule = r
            return TLPrim(e.op, e2, e.right), rule
        if not tl.is_value(e.right):
            r = _step(mu, e.right, depth + 1)
            assert r is not None
            e2, rule = r
            return TLPrim(e.op, e.left, e2), rule
        return _prim(e), "tl-prim"

    raise TypeError(f"not a TL expression: {e!r}")


def _prim(e):
    a, b = e.left, e.right
    if e.op in ("==", "<"):
        if not (isinstance(a, TLInt) and isinstance(b, TLInt)):
            raise _Stuck(BAD_PRIM, f"{e.op} applied to non-int operands")
        return TLBool(a.value == b.value if e.op == "==" else a.value < b.value)
    if not (isinstance(a, TLBool) and isinstance(b, TLBool)):
        raise _Stuck(BAD_PRIM, f"{e.op} applied to non-bool operands")
    return TLBool(a.value and b.value if e.op == "&&" else a.value or b.value)


@dataclass(frozen=True)
class Value:
    value: object
    steps: int


@dataclass(frozen=True)
class StuckOutcome:
    reason: str
    detail: str
    steps: int


@dataclass(frozen=True)
class OutOfFuel:
    steps: int


def tl_eval(mu, e, fuel: int, trace=None):
    """Iterate tl_step up to `fuel` axiom steps."""
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    steps = 0
    while True:
        r = tl_step(mu, e)
        if isinstance(r, AlreadyValue):
            return Value(e, steps)
        if isinstance(r, Stuck):
            return StuckOutcome(r.reason, r.detail, steps)
        if isinstance(r, DepthExceeded):
            return OutOfFuel(steps)
        if steps >= fuel:
            return OutOfFuel(steps)
        e = r.expr
        steps += 1
        if trace is not None:
            trace(steps, r.rule, tl.print_expr(e))


def run_program(prog: tl.TLProgram, fuel: int, trace=None):
    """Build the method substitution from the let bindings and evaluate main."""
    return tl_eval(prog.method_subst(), prog.main, fuel, trace=trace)
