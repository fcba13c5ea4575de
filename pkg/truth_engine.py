"""Truth of formulas.

``eval_delta0`` decides Δ₀ sentences by working on codes: atoms go through
the set-codec algorithms and bounded quantifiers search the bounding set's
code. ``eval_bruteforce`` is the classical evaluation relativised to a finite
universe and serves as the independent oracle in tests.
"""
import itertools
import logging
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

from config import config
from error_handler import ErrorType, fail
from formula import (Bottom, Conj, Const, Context, Disj, Eq, Exists, Forall, Formula, Implies, Mem,
                     SeqMem, Term, Var, bounded_exists_parts, bounded_forall_parts,
                     family_distinct_parts, free_vars, is_delta0, substitute, substitute_map)
from hfset import HFSet, level, parse_set, seq_values, with_sequences
from set_codec import build_code, build_iso, decode_match, decode_node

logger = logging.getLogger(__name__)


def _check_assignment(phi: Formula, assignment: Mapping[int, HFSet]) -> Formula:
    missing = sorted(free_vars(phi) - set(assignment))
    if missing:
        raise fail(ErrorType.UNBOUND_VARIABLE, f"no value for free variables {['x%d' % v for v in missing]}",
                   missing=missing)
    return substitute_map(phi, dict(assignment))


def _constant(t: Term) -> HFSet:
    if isinstance(t, Var):
        raise fail(ErrorType.UNBOUND_VARIABLE, f"variable {t} is unbound during evaluation")
    return t.value


def bounded_instances(context: Context, bound: HFSet) -> Iterator[Tuple[HFSet, ...]]:
    """Value tuples for the context drawn from the bounding set, through its code."""
    code = build_code(bound)
    for node in code.members():
        element = decode_node(code.pre, node)
        if context.length == 1:
            yield (element,)
            continue
        values = seq_values(element)
        if values is not None and len(values) == context.length:
            yield values


@lru_cache(maxsize=65536)
def _mem_via_codes(x: HFSet, y: HFSet) -> int:
    a, b = build_code(x), build_code(y)
    beta = decode_match(a, b, a.rho)
    return 1 if beta is not None and beta in b.members() else 0


@lru_cache(maxsize=65536)
def _eq_via_codes(x: HFSet, y: HFSet) -> int:
    return 1 if build_iso(build_code(x), build_code(y)) is not None else 0


def _eval_code_level(phi: Formula) -> int:
    if isinstance(phi, Bottom):
        return 0
    if isinstance(phi, Mem):
        return _mem_via_codes(_constant(phi.left), _constant(phi.right))
    if isinstance(phi, Eq):
        return _eq_via_codes(_constant(phi.left), _constant(phi.right))
    if isinstance(phi, Implies):
        return 0 if _eval_code_level(phi.ant) and not _eval_code_level(phi.cons) else 1
    if isinstance(phi, Conj):
        return int(all(_eval_code_level(p) for p in family_distinct_parts(phi.parts)))
    if isinstance(phi, Disj):
        return int(any(_eval_code_level(p) for p in family_distinct_parts(phi.parts)))
    parts = bounded_forall_parts(phi)
    if parts is not None:
        context, bound, body = parts
        return int(all(_eval_code_level(substitute(body, context, values))
                       for values in bounded_instances(context, _constant(bound))))
    parts = bounded_exists_parts(phi)
    if parts is not None:
        context, bound, body = parts
        return int(any(_eval_code_level(substitute(body, context, values))
                       for values in bounded_instances(context, _constant(bound))))
    raise fail(ErrorType.NOT_DELTA0, f"unbounded quantifier or abbreviation outside a guard: {type(phi).__name__}")


def eval_delta0(phi: Formula, assignment: Optional[Mapping[int, HFSet]] = None) -> int:
    if not is_delta0(phi):
        raise fail(ErrorType.NOT_DELTA0, "formula is not Δ₀")
    return _eval_code_level(_check_assignment(phi, assignment or {}))


# -- brute force ---------------------------------------------------------

def truth_universe(rank: Optional[int] = None, seq_length: int = 2) -> Tuple[HFSet, ...]:
    """V_rank closed under sequence functions of length <= seq_length over V_(rank-2)."""
    rank = config.TRUTH_UNIVERSE_RANK if rank is None else rank
    return with_sequences(level(rank), level(max(rank - 2, 0)), seq_length)


class _Model:
    def __init__(self, universe: Iterable[HFSet]):
        self.universe = tuple(universe)
        self.members: FrozenSet[HFSet] = frozenset(self.universe)

    def values(self, context: Context, guard_bound: Optional[HFSet]) -> Iterator[Tuple[HFSet, ...]]:
        if guard_bound is None:
            return itertools.product(self.universe, repeat=context.length)
        if context.length == 1:
            return ((x,) for x in guard_bound.elements if x in self.members)
        found = []
        for f in guard_bound.elements:
            values = seq_values(f) if f in self.members else None
            if values is not None and len(values) == context.length:
                found.append(values)
        return iter(found)

    def holds(self, phi: Formula) -> bool:
        if isinstance(phi, Bottom):
            return False
        if isinstance(phi, Mem):
            return _constant(phi.left) in _constant(phi.right)
        if isinstance(phi, Eq):
            return _constant(phi.left) == _constant(phi.right)
        if isinstance(phi, Implies):
            return not self.holds(phi.ant) or self.holds(phi.cons)
        if isinstance(phi, Conj):
            return all(self.holds(p) for p in family_distinct_parts(phi.parts))
        if isinstance(phi, Disj):
            return any(self.holds(p) for p in family_distinct_parts(phi.parts))
        if isinstance(phi, SeqMem):
            return self.holds(phi.expand())
        if isinstance(phi, (Exists, Forall)):
            parts = bounded_forall_parts(phi) if isinstance(phi, Forall) else bounded_exists_parts(phi)
            # quantifiers relativised to a transitive universe: a guarded one only needs the bound's elements
            if parts is not None and isinstance(parts[1], Const):
                context, bound, body = parts
                instances = (substitute(body, context, v) for v in self.values(context, bound.value))
            else:
                instances = (substitute(phi.body, phi.ctx, v) for v in self.values(phi.ctx, None))
            if isinstance(phi, Forall):
                return all(self.holds(p) for p in instances)
            return any(self.holds(p) for p in instances)
        raise TypeError(f"not a formula: {phi!r}")


def eval_bruteforce(phi: Formula, universe: Optional[Sequence[HFSet]] = None,
                    assignment: Optional[Mapping[int, HFSet]] = None) -> int:
    universe = truth_universe() if universe is None else universe
    sentence = _check_assignment(phi, assignment or {})
    return int(_Model(universe).holds(sentence))


def parse_assignment(text: str) -> Dict[int, HFSet]:
    """``x0={};x1={{}}``"""
    assignment = {}
    for item in filter(None, (part.strip() for part in text.split(';'))):
        name, _, value = item.partition('=')
        name = name.strip()
        if not name.startswith('x') or not name[1:].isdigit() or not value:
            raise fail(ErrorType.PARSE_ERROR, f"bad assignment entry {item!r}", position=0, text=text)
        assignment[int(name[1:])] = parse_set(value)
    return assignment
