"""Named advancing algorithms, boolean algorithms and constraint sets.

Rules hold references (name + arguments); a frozen :class:`Registry` turns
those references into behaviour. Every constraint-set implementation provides
a membership test, and enumeration over a finite domain is derived from it so
the two always agree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, Sequence

from .model import (
    AdvancingAlgorithmRef,
    BooleanAlgorithmRef,
    ConstraintSetRef,
    Position,
    normalize_value,
    value_key,
)

DEFAULT_MAX_DENOMINATOR = 10**6


class RegistryError(Exception):
    """Unknown algorithm name or malformed arguments."""


class ContractError(Exception):
    """An algorithm broke the discrete-time contract."""


@dataclass(frozen=True)
class Context:
    delta_t: Fraction
    max_denominator: int


@dataclass(frozen=True)
class Advancing:
    fn: Callable[[Context, tuple, Sequence[Position]], Iterable[Position]]
    check: Callable[[tuple], None] | None = None


@dataclass(frozen=True)
class Boolean:
    fn: Callable[[Context, tuple, Sequence[Position]], bool]
    check: Callable[[tuple], None] | None = None


@dataclass(frozen=True)
class ConstraintSet:
    """``contains`` sees only tuples whose steps already strictly increase."""

    arity: Callable[[tuple], int]
    contains: Callable[[tuple, Sequence[Position]], bool]
    check: Callable[[tuple], None] | None = None


def _number(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def _expect(*kinds):
    """Argument-shape checker; kinds are 'name', 'num', 'int', 'value', 'set'."""

    def check(args):
        if len(args) != len(kinds):
            raise RegistryError(f"expected {len(kinds)} argument(s), got {len(args)}")
        for a, k in zip(args, kinds):
            ok = {
                "name": isinstance(a, str),
                "num": _number(a),
                "int": isinstance(a, int) and not isinstance(a, bool),
                "value": not isinstance(a, frozenset),
                "set": isinstance(a, frozenset) and len(a) > 0,
            }[k]
            if not ok:
                raise RegistryError(f"argument {a!r} is not a {k}")

    return check


def _nonneg_ints(args):
    if not args:
        raise RegistryError("expected at least one step")
    for a in args:
        if not (isinstance(a, int) and not isinstance(a, bool) and a >= 0):
            raise RegistryError(f"step argument {a!r} must be a non-negative integer")


# advancing built-ins ------------------------------------------------------


def _tick(ctx, args, tup):
    return [tup[-1].replace(step=tup[-1].step + 1)]


def _set_param(ctx, args, tup):
    name, value = args
    return [tup[-1].replace(step=tup[-1].step + 1, **{name: value})]


def _euler(ctx, args, tup):
    rate, var = args
    last = tup[-1]
    x = last.get(var)
    if not _number(x):
        return []
    nxt = Fraction(x) + ctx.delta_t * Fraction(rate) * Fraction(x)
    nxt = nxt.limit_denominator(ctx.max_denominator)
    return [last.replace(step=last.step + 1, **{var: normalize_value(nxt)})]


def _fanout(ctx, args, tup):
    name, values = args
    last = tup[-1]
    return [last.replace(step=last.step + 1, **{name: v}) for v in sorted(values, key=value_key)]


# boolean built-ins --------------------------------------------------------


def _compare(op):
    def fn(ctx, args, tup):
        name, c = args
        x = tup[-1].get(name)
        if x is None:
            return False
        if op == "eq":
            return x == c
        if not (_number(x) and _number(c)):
            return False
        return x >= c if op == "ge" else x <= c

    return fn


# constraint-set built-ins -------------------------------------------------


def _time_eq(args, tup):
    return tup[0].step == args[0]


def _window(args, tup):
    return tuple(p.step for p in tup) == tuple(args)


def _consecutive(args, tup):
    return all(b.step == a.step + 1 for a, b in zip(tup, tup[1:]))


BUILTIN_ADVANCING = {
    "tick": Advancing(_tick, _expect()),
    "set_param": Advancing(_set_param, _expect("name", "value")),
    "euler": Advancing(_euler, _expect("num", "name")),
    "fanout": Advancing(_fanout, _expect("name", "set")),
}

BUILTIN_BOOLEAN = {
    "true": Boolean(lambda ctx, args, tup: True, _expect()),
    "false": Boolean(lambda ctx, args, tup: False, _expect()),
    "param_ge": Boolean(_compare("ge"), _expect("name", "num")),
    "param_le": Boolean(_compare("le"), _expect("name", "num")),
    "param_eq": Boolean(_compare("eq"), _expect("name", "value")),
    "step_eq": Boolean(lambda ctx, args, tup: tup[-1].step == args[0], _expect("int")),
}

BUILTIN_CONSTRAINTS = {
    "time_eq": ConstraintSet(lambda args: 1, _time_eq, _expect("int")),
    "window": ConstraintSet(lambda args: len(args), _window, _nonneg_ints),
}

# name families carrying their arity as a suffix: any2, consecutive3, ...
CONSTRAINT_FAMILIES = {
    "any": lambda args, tup: True,
    "consecutive": lambda args, tup: _consecutive(args, tup),
}
_FAMILY_RE = re.compile(r"(any|consecutive)([1-9][0-9]*)\Z")


def strictly_increasing(tup: Sequence[Position]) -> bool:
    return all(a.step < b.step for a, b in zip(tup, tup[1:]))


class Registry:
    """Frozen lookup of the three kinds of outside sources.

    Evaluations are pure, so results are memoized per reference and input.
    """

    def __init__(
        self,
        delta_t=1,
        max_denominator: int = DEFAULT_MAX_DENOMINATOR,
        advancing: Mapping[str, Advancing] | None = None,
        boolean: Mapping[str, Boolean] | None = None,
        constraints: Mapping[str, ConstraintSet] | None = None,
    ):
        delta_t = Fraction(delta_t)
        if delta_t <= 0:
            raise ValueError("delta_t must be positive")
        self.context = Context(delta_t, max_denominator)
        self.advancing = MappingProxyType({**BUILTIN_ADVANCING, **(advancing or {})})
        self.boolean = MappingProxyType({**BUILTIN_BOOLEAN, **(boolean or {})})
        self.constraints = MappingProxyType({**BUILTIN_CONSTRAINTS, **(constraints or {})})
        self._adv_cache: dict = {}
        self._bool_cache: dict = {}
        self._enum_cache: dict = {}

    @property
    def delta_t(self) -> Fraction:
        return self.context.delta_t

    # resolution ----------------------------------------------------------

    def _constraint(self, ref: ConstraintSetRef) -> ConstraintSet:
        if ref.name in self.constraints:
            return self.constraints[ref.name]
        m = _FAMILY_RE.match(ref.name)
        if m:
            n = int(m.group(2))
            return ConstraintSet(lambda args, n=n: n, CONSTRAINT_FAMILIES[m.group(1)], _expect())
        raise RegistryError(f"unknown constraint set {ref.name!r}")

    def _lookup(self, table, ref, kind):
        try:
            return table[ref.name]
        except KeyError:
            raise RegistryError(f"unknown {kind} algorithm {ref.name!r}") from None

    def validate(self, ref) -> None:
        """Raise RegistryError if ``ref`` does not resolve or has bad arguments."""
        if isinstance(ref, ConstraintSetRef):
            impl = self._constraint(ref)
        elif isinstance(ref, AdvancingAlgorithmRef):
            impl = self._lookup(self.advancing, ref, "advancing")
        elif isinstance(ref, BooleanAlgorithmRef):
            impl = self._lookup(self.boolean, ref, "boolean")
        else:
            raise RegistryError(f"not an algorithm reference: {ref!r}")
        if impl.check is not None:
            try:
                impl.check(ref.args)
            except RegistryError as e:
                raise RegistryError(f"{ref.name}: {e}") from None

    def arity(self, ref: ConstraintSetRef) -> int:
        return self._constraint(ref).arity(ref.args)

    # evaluation ----------------------------------------------------------

    def eval_advancing(self, ref: AdvancingAlgorithmRef, tup: Sequence[Position]) -> frozenset[Position]:
        tup = tuple(tup)
        key = (ref, tup)
        hit = self._adv_cache.get(key)
        if hit is not None:
            return hit
        if not tup or not strictly_increasing(tup):
            raise ContractError(f"{ref}: input steps must strictly increase")
        impl = self._lookup(self.advancing, ref, "advancing")
        out = frozenset(impl.fn(self.context, ref.args, tup))
        want = tup[-1].step + 1
        for q in out:
            if q.step != want:
                raise ContractError(f"advancing algorithm {ref} produced step {q.step}, expected {want}")
        self._adv_cache[key] = out
        return out

    def eval_boolean(self, ref: BooleanAlgorithmRef, tup: Sequence[Position]) -> bool:
        tup = tuple(tup)
        key = (ref, tup)
        hit = self._bool_cache.get(key)
        if hit is not None:
            return hit
        if not tup:
            raise RegistryError(f"{ref}: empty position tuple")
        impl = self._lookup(self.boolean, ref, "boolean")
        out = bool(impl.fn(self.context, ref.args, tup))
        self._bool_cache[key] = out
        return out

    def cs_contains(self, ref: ConstraintSetRef, tup: Sequence[Position]) -> bool:
        impl = self._constraint(ref)
        tup = tuple(tup)
        if len(tup) != impl.arity(ref.args):
            raise RegistryError(f"{ref}: expected a {impl.arity(ref.args)}-tuple, got {len(tup)}")
        return strictly_increasing(tup) and bool(impl.contains(ref.args, tup))

    def cs_enumerate(self, ref: ConstraintSetRef, domain: Iterable[Position]) -> tuple[tuple[Position, ...], ...]:
        """All tuples over ``domain`` in the constraint set, in lexicographic order."""
        domain = frozenset(domain)
        key = (ref, domain)
        hit = self._enum_cache.get(key)
        if hit is not None:
            return hit
        impl = self._constraint(ref)
        n = impl.arity(ref.args)
        ordered = sorted(domain)
        out = []

        def extend(prefix):
            if len(prefix) == n:
                if impl.contains(ref.args, prefix):
                    out.append(prefix)
                return
            for p in ordered:
                if not prefix or p.step > prefix[-1].step:
                    extend(prefix + (p,))

        extend(())
        result = tuple(out)
        self._enum_cache[key] = result
        return result


_DEFAULT = {}


def default_registry(delta_t=1) -> Registry:
    delta_t = Fraction(delta_t)
    if delta_t not in _DEFAULT:
        _DEFAULT[delta_t] = Registry(delta_t)
    return _DEFAULT[delta_t]
