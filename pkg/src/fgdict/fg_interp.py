"""Small-step reference semantics for FG, fuel-bounded.

Only the axiom rules (field projection, method call, assertion, and the
extension's primitive operators) cost a step; descending through an
evaluation context is free.  Evaluation order follows the context grammar:
struct arguments left to right, then receiver, then call arguments left to
right.
"""

from __future__ import annotations

from dataclasses import dataclass

import sys

from . import fg_ast as fg
from .fg_parser import print_expr, subst_expr

sys.setrecursionlimit(max(sys.getrecursionlimit(), 8000))

# Expressions nested deeper than this are treated as exceeding the step
# budget: rebuilding them each step is quadratic and the recursive context
# descent would otherwise exhaust the Python stack.
MAX_TERM_DEPTH = 1000

# Stuck reasons
ASSERT_FAILURE = "assert-failure"
NO_METHOD = "no-method"
BAD_FIELD = "bad-field"
BAD_PRIM = "bad-prim"
FREE_VAR = "free-var"


def is_value(e) -> bool:
    if isinstance(e, (fg.IntLit, fg.BoolLit)):
        return True
    return isinstance(e, fg.StructLit) and all(is_value(a) for a in e.args)


def value_type(decls, v) -> str:
    """Dynamic type name of a value."""
    if isinstance(v, fg.IntLit):
        return fg.INT
    if isinstance(v, fg.BoolLit):
        return fg.BOOL
    return v.type_name


class _Stuck(Exception):
    def __init__(self, reason, detail):
        self.reason = reason
        self.detail = detail
        super().__init__(f"{reason}: {detail}")


class _TooDeep(Exception):
    pass


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


@dataclass(frozen=True)
class DepthExceeded:
    pass


def fg_step(decls: fg.Decls, e):
    """One reduction step: Stepped(e', rule), AlreadyValue() or Stuck."""
    try:
        r = _step(decls, e)
    except _Stuck as s:
        return Stuck(s.reason, s.detail)
    except _TooDeep:
        return DepthExceeded()
    if r is None:
        return AlreadyValue()
    return Stepped(*r)


def _step_args(decls, args, depth):
    """Step the leftmost non-value in a tuple, or None if all are values."""
    for i, a in enumerate(args):
        if not is_value(a):
            r = _step(decls, a, depth + 1)
            assert r is not None
            e2, rule = r
            return tuple(args[:i]) + (e2,) + tuple(args[i + 1:]), rule
    return None


def _step(decls, e, depth=0):
    if depth > MAX_TERM_DEPTH:
        raise _TooDeep()
    if is_value(e):
        return None

    if isinstance(e, fg.Var):
        raise _Stuck(FREE_VAR, f"free variable {e.name}")

    if isinstance(e, fg.StructLit):
        r = _step_args(decls, e.args, depth)
        assert r is not None
        args, rule = r
        return fg.StructLit(e.type_name, args, span=e.span), rule

    if isinstance(e, fg.Select):
        if not is_value(e.recv):
            e2, rule = _step(decls, e.recv, depth + 1)
            return fg.Select(e2, e.fld, span=e.span), rule
        v = e.recv
        if not isinstance(v, fg.StructLit):
            raise _Stuck(BAD_FIELD, f"selecting {e.fld} from non-struct value")
        fields = dict_fields(decls, v.type_name)
        if e.fld not in fields:
            raise _Stuck(BAD_FIELD, f"no field {e.fld} on {v.type_name}")
        return v.args[fields[e.fld]], "fg-field"

    if isinstance(e, fg.Assert):
        if not is_value(e.expr):
            e2, rule = _step(decls, e.expr, depth + 1)
            return fg.Assert(e2, e.type_name, span=e.span), rule
        v = e.expr
        t_dyn = value_type(decls, v)
        if fg.is_subtype(decls, t_dyn, e.type_name):
            return v, "fg-assert"
        raise _Stuck(ASSERT_FAILURE, f"{t_dyn} does not conform to {e.type_name}")

    if isinstance(e, fg.Call):
        if not is_value(e.recv):
            e2, rule = _step(decls, e.recv, depth + 1)
            return fg.Call(e2, e.method, e.args, span=e.span), rule
        r = _step_args(decls, e.args, depth)
        if r is not None:
            args, rule = r
            return fg.Call(e.recv, e.method, args, span=e.span), rule
        v = e.recv
        if not isinstance(v, fg.StructLit):
            raise _Stuck(NO_METHOD, f"calling {e.method} on non-struct value")
        d = decls.method_decls.get((v.type_name, e.method))
        if d is None:
            raise _Stuck(NO_METHOD, f"no method {e.method} on {v.type_name}")
        if len(d.sig.params) != len(e.args):
            raise _Stuck(NO_METHOD, f"arity mismatch calling {e.method} on {v.type_name}")
        body = subst_expr(d.body, d.recv_var, v)
        for (x, _t), arg in zip(d.sig.params, e.args):
            body = subst_expr(body, x, arg)
        return body, "fg-call"

    if isinstance(e, fg.BinOp):
        if not is_value(e.left):
            e2, rule = _step(decls, e.left, depth + 1)
            return fg.BinOp(e.op, e2, e.right, span=e.span), rule
        if not is_value(e.right):
            e2, rule = _step(decls, e.right, depth + 1)
            return fg.BinOp(e.op, e.left, e2, span=e.span), rule
        return _prim(e), "fg-prim"

    raise _Stuck(BAD_PRIM, f"cannot reduce {e!r}")


def _prim(e):
    op, a, b = e.op, e.left, e.right
    if op in ("==", "<"):
        if not (isinstance(a, fg.IntLit) and isinstance(b, fg.IntLit)):
            raise _Stuck(BAD_PRIM, f"{op} applied to non-int operands")
        return fg.BoolLit(a.value == b.value if op == "==" else a.value < b.value)
    if not (isinstance(a, fg.BoolLit) and isinstance(b, fg.BoolLit)):
        raise _Stuck(BAD_PRIM, f"{op} applied to non-bool operands")
    return fg.BoolLit(a.value and b.value if op == "&&" else a.value or b.value)


def dict_fields(decls, t_s):
    return {f: i for i, (f, _t) in enumerate(decls.struct_fields(t_s))}


# ---------------------------------------------------------------------------
# Iterated evaluation


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


def fg_eval(decls: fg.Decls, e, fuel: int, trace=None):
    """Iterate fg_step up to `fuel` axiom steps.  `trace`, if given, is
    called as trace(step_number, rule, expr) after each step."""
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    steps = 0
    while True:
        r = fg_step(decls, e)
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
            trace(steps, r.rule, print_expr(e))
