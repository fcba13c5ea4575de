"""Formulas of the infinitary language of set theory.

Conjunctions and disjunctions take either a finite tuple of parts or an
``OmegaFamily`` of length ω. Quantifiers bind a context, a tuple of distinct
variable indices. ``SeqMem`` is the abbreviation "x̄ ∈ y" kept folded;
``expand_seq_membership`` unfolds it into the full infinitary formula.

S-expression syntax::

    (bot) (mem t u) (eq t u) (imp p q) (and p ...) (or p ...)
    (and* p ...) (or* p ...)           ; the parts repeated ω times
    (ex (x0 x1) p) (all (x0) p) (seqmem (x0 x1) t)

Terms are variables ``x<n>`` or set literals such as ``{}`` and ``{{}}``.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from error_handler import ErrorSeverity, ErrorType, fail
from hfset import HFSet, format_set, parse_set
from ordinal import OMEGA, Ordinal

logger = logging.getLogger(__name__)


# -- terms ---------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    index: int

    def __str__(self) -> str:
        return f"x{self.index}"


@dataclass(frozen=True)
class Const:
    value: HFSet

    def __str__(self) -> str:
        return format_set(self.value)


Term = Union[Var, Const]


def const(value: Union[HFSet, str]) -> Const:
    return Const(parse_set(value) if isinstance(value, str) else value)


# -- formulas ------------------------------------------------------------

@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Mem:
    left: Term
    right: Term


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Implies:
    ant: 'Formula'
    cons: 'Formula'


@dataclass(frozen=True)
class OmegaFamily:
    """Parts indexed by ω: ``pattern`` repeated, or an arbitrary ``generator``."""
    pattern: Tuple['Formula', ...] = ()
    generator: Optional[Callable[[int], 'Formula']] = field(default=None, compare=False)

    def __post_init__(self):
        if not self.pattern and self.generator is None:
            raise fail(ErrorType.PARSE_ERROR, "an ω-family needs a pattern or a generator")

    def part(self, index: int) -> 'Formula':
        if self.pattern:
            return self.pattern[index % len(self.pattern)]
        return self.generator(index)

    @property
    def periodic(self) -> bool:
        return bool(self.pattern)


Family = Union[Tuple['Formula', ...], OmegaFamily]


@dataclass(frozen=True)
class Conj:
    parts: Family = ()


@dataclass(frozen=True)
class Disj:
    parts: Family = ()


@dataclass(frozen=True)
class Context:
    vars: Tuple[int, ...]

    def __post_init__(self):
        if len(set(self.vars)) != len(self.vars):
            raise fail(ErrorType.PARSE_ERROR, f"context variables are not distinct: {self.vars}")

    @property
    def length(self) -> int:
        return len(self.vars)

    def __str__(self) -> str:
        return '(' + ' '.join(f"x{v}" for v in self.vars) + ')'


def ctx(*indices: int) -> Context:
    return Context(tuple(indices))


@dataclass(frozen=True)
class Exists:
    ctx: Context
    body: 'Formula'


@dataclass(frozen=True)
class Forall:
    ctx: Context
    body: 'Formula'


@dataclass(frozen=True)
class SeqMem:
    """The abbreviation "x̄ ∈ y": the sequence of ``items`` lies in ``bound``."""
    items: Tuple[Term, ...]
    bound: Term

    def expand(self) -> 'Formula':
        return expand_seq_membership(self.items, self.bound)


Formula = Union[Bottom, Mem, Eq, Implies, Conj, Disj, Exists, Forall, SeqMem]


def family_length(parts: Family) -> Ordinal:
    return OMEGA if isinstance(parts, OmegaFamily) else Ordinal.of(len(parts))


def family_part(parts: Family, index: int) -> 'Formula':
    if isinstance(parts, OmegaFamily):
        return parts.part(index)
    if not 0 <= index < len(parts):
        raise fail(ErrorType.INDEX_OUT_OF_RANGE, f"part {index} of a family of length {len(parts)}")
    return parts[index]


def family_distinct_parts(parts: Family) -> Tuple['Formula', ...]:
    """Every part that occurs in the family, when that can be listed."""
    if isinstance(parts, OmegaFamily):
        if not parts.periodic:
            raise fail(ErrorType.NOT_DECIDABLE, "ω-family given by a non-periodic generator")
        return parts.pattern
    return parts


def map_family(parts: Family, fn: Callable[['Formula'], 'Formula']) -> Family:
    if isinstance(parts, OmegaFamily):
        if parts.periodic:
            return OmegaFamily(tuple(fn(p) for p in parts.pattern))
        generator = parts.generator
        return OmegaFamily(generator=lambda i: fn(generator(i)))
    return tuple(fn(p) for p in parts)


# -- sugar ---------------------------------------------------------------

def neg(phi: Formula) -> Formula:
    """¬φ is φ → ⊥."""
    return Implies(phi, Bottom())


def top() -> Formula:
    return Conj(())


def conj(*parts: Formula) -> Conj:
    return Conj(tuple(parts))


def disj(*parts: Formula) -> Disj:
    return Disj(tuple(parts))


def iff(p: Formula, q: Formula) -> Conj:
    return conj(Implies(p, q), Implies(q, p))


# -- free variables and substitution ---------------------------------------

def term_vars(t: Term) -> FrozenSet[int]:
    return frozenset({t.index}) if isinstance(t, Var) else frozenset()


def free_vars(phi: Formula) -> FrozenSet[int]:
    if isinstance(phi, Bottom):
        return frozenset()
    if isinstance(phi, (Mem, Eq)):
        return term_vars(phi.left) | term_vars(phi.right)
    if isinstance(phi, Implies):
        return free_vars(phi.ant) | free_vars(phi.cons)
    if isinstance(phi, (Conj, Disj)):
        found = frozenset()
        for part in family_distinct_parts(phi.parts):
            found |= free_vars(part)
        return found
    if isinstance(phi, (Exists, Forall)):
        return free_vars(phi.body) - frozenset(phi.ctx.vars)
    if isinstance(phi, SeqMem):
        found = term_vars(phi.bound)
        for item in phi.items:
            found |= term_vars(item)
        return found
    raise TypeError(f"not a formula: {phi!r}")


def _subst_term(t: Term, mapping: Dict[int, HFSet]) -> Term:
    if isinstance(t, Var) and t.index in mapping:
        return Const(mapping[t.index])
    return t


def substitute_map(phi: Formula, mapping: Dict[int, HFSet]) -> Formula:
    if not mapping or isinstance(phi, Bottom):
        return phi
    if isinstance(phi, Mem):
        return Mem(_subst_term(phi.left, mapping), _subst_term(phi.right, mapping))
    if isinstance(phi, Eq):
        return Eq(_subst_term(phi.left, mapping), _subst_term(phi.right, mapping))
    if isinstance(phi, Implies):
        return Implies(substitute_map(phi.ant, mapping), substitute_map(phi.cons, mapping))
    if isinstance(phi, (Conj, Disj)):
        return type(phi)(map_family(phi.parts, lambda p: substitute_map(p, mapping)))
    if isinstance(phi, (Exists, Forall)):
        inner = {v: x for v, x in mapping.items() if v not in phi.ctx.vars}
        return type(phi)(phi.ctx, substitute_map(phi.body, inner))
    if isinstance(phi, SeqMem):
        return SeqMem(tuple(_subst_term(t, mapping) for t in phi.items), _subst_term(phi.bound, mapping))
    raise TypeError(f"not a formula: {phi!r}")


def substitute(phi: Formula, context: Context, values: Sequence[HFSet]) -> Formula:
    """φ[X̄/x̄]: constants replace the free occurrences of the context variables."""
    if len(values) != context.length:
        raise fail(ErrorType.LENGTH_MISMATCH,
                   f"context of length {context.length} given {len(values)} values",
                   context=str(context), values=len(values))
    return substitute_map(phi, dict(zip(context.vars, values)))


def rename_var(phi: Formula, old: int, new: int) -> Formula:
    """φ with the free occurrences of x_old renamed to x_new (x_new assumed fresh)."""
    def term(t: Term) -> Term:
        return Var(new) if isinstance(t, Var) and t.index == old else t

    if isinstance(phi, Bottom):
        return phi
    if isinstance(phi, (Mem, Eq)):
        return type(phi)(term(phi.left), term(phi.right))
    if isinstance(phi, Implies):
        return Implies(rename_var(phi.ant, old, new), rename_var(phi.cons, old, new))
    if isinstance(phi, (Conj, Disj)):
        return type(phi)(map_family(phi.parts, lambda p: rename_var(p, old, new)))
    if isinstance(phi, (Exists, Forall)):
        if old in phi.ctx.vars:
            return phi
        return type(phi)(phi.ctx, rename_var(phi.body, old, new))
    if isinstance(phi, SeqMem):
        return SeqMem(tuple(term(t) for t in phi.items), term(phi.bound))
    raise TypeError(f"not a formula: {phi!r}")


def constants(phi: Formula) -> FrozenSet[HFSet]:
    """The set constants occurring in φ."""
    if isinstance(phi, Bottom):
        return frozenset()
    if isinstance(phi, (Mem, Eq)):
        return frozenset(t.value for t in (phi.left, phi.right) if isinstance(t, Const))
    if isinstance(phi, Implies):
        return constants(phi.ant) | constants(phi.cons)
    if isinstance(phi, (Conj, Disj)):
        found = frozenset()
        for part in family_distinct_parts(phi.parts):
            found |= constants(part)
        return found
    if isinstance(phi, (Exists, Forall)):
        return constants(phi.body)
    if isinstance(phi, SeqMem):
        return frozenset(t.value for t in phi.items + (phi.bound,) if isinstance(t, Const))
    raise TypeError(f"not a formula: {phi!r}")


def max_var(phi: Formula) -> int:
    """Largest variable index occurring anywhere in φ, bound or free; -1 if none."""
    if isinstance(phi, Bottom):
        return -1
    if isinstance(phi, (Mem, Eq)):
        return max([-1] + [t.index for t in (phi.left, phi.right) if isinstance(t, Var)])
    if isinstance(phi, Implies):
        return max(max_var(phi.ant), max_var(phi.cons))
    if isinstance(phi, (Conj, Disj)):
        return max([-1] + [max_var(p) for p in family_distinct_parts(phi.parts)])
    if isinstance(phi, (Exists, Forall)):
        return max([max_var(phi.body)] + list(phi.ctx.vars))
    if isinstance(phi, SeqMem):
        return max([-1] + [t.index for t in phi.items + (phi.bound,) if isinstance(t, Var)])
    raise TypeError(f"not a formula: {phi!r}")


# -- library formulas over Kuratowski pairs --------------------------------

class Fresh:
    """Hands out variable indices above a floor."""

    def __init__(self, floor: int):
        self.next = floor + 1

    def __call__(self) -> int:
        index = self.next
        self.next += 1
        return index


def bounded_forall1(x: int, bound: Term, body: Formula) -> Forall:
    return Forall(Context((x,)), Implies(Mem(Var(x), bound), body))


def bounded_exists1(x: int, bound: Term, body: Formula) -> Exists:
    return Exists(Context((x,)), conj(Mem(Var(x), bound), body))


def is_singleton_of(u: Term, a: Term, fresh: Fresh) -> Formula:
    v = fresh()
    return conj(bounded_forall1(v, u, Eq(Var(v), a)), Mem(a, u))


def is_doubleton_of(u: Term, a: Term, b: Term, fresh: Fresh) -> Formula:
    v = fresh()
    return conj(bounded_forall1(v, u, disj(Eq(Var(v), a), Eq(Var(v), b))), Mem(a, u), Mem(b, u))


def pair_is(p: Term, a: Term, b: Term, fresh: Fresh) -> Formula:
    """p = ⟨a, b⟩ = {{a}, {a, b}}."""
    u, s, d = fresh(), fresh(), fresh()
    return conj(
        bounded_forall1(u, p, disj(is_singleton_of(Var(u), a, fresh), is_doubleton_of(Var(u), a, b, fresh))),
        bounded_exists1(s, p, is_singleton_of(Var(s), a, fresh)),
        bounded_exists1(d, p, is_doubleton_of(Var(d), a, b, fresh)))


def is_ordinal(d: Term, fresh: Fresh) -> Formula:
    """Transitive and linearly ordered by ∈."""
    u, v, w, t = fresh(), fresh(), fresh(), fresh()
    transitive = bounded_forall1(u, d, bounded_forall1(v, Var(u), Mem(Var(v), d)))
    linear = bounded_forall1(w, d, bounded_forall1(t, d, disj(
        Mem(Var(w), Var(t)), Eq(Var(w), Var(t)), Mem(Var(t), Var(w)))))
    return conj(transitive, linear)


def applies(f: Term, z: Term, x: Term, fresh: Fresh) -> Formula:
    """f(z) = x."""
    p = fresh()
    return bounded_exists1(p, f, pair_is(Var(p), z, x, fresh))


def is_function_on_ordinal(f: Term, d: Term, fresh: Fresh) -> Formula:
    """f is a function whose domain is the ordinal d."""
    p, q, u, q2, w = fresh(), fresh(), fresh(), fresh(), fresh()
    pairs_in_domain = bounded_forall1(p, f, bounded_exists1(q, Var(p), bounded_exists1(u, Var(q),
        bounded_exists1(q2, Var(p), bounded_exists1(w, Var(q2), conj(
            Mem(Var(u), d), pair_is(Var(p), Var(u), Var(w), fresh)))))))
    e, p1, q1, w1 = fresh(), fresh(), fresh(), fresh()
    total = bounded_forall1(e, d, bounded_exists1(p1, f, bounded_exists1(q1, Var(p1), bounded_exists1(
        w1, Var(q1), pair_is(Var(p1), Var(e), Var(w1), fresh)))))
    a, b, qa, ua, qa2, wa, qb, wb = (fresh() for _ in range(8))
    single_valued = bounded_forall1(a, f, bounded_forall1(b, f, bounded_forall1(qa, Var(a), bounded_forall1(
        ua, Var(qa), bounded_forall1(qa2, Var(a), bounded_forall1(wa, Var(qa2), bounded_forall1(
            qb, Var(b), bounded_forall1(wb, Var(qb), Implies(
                conj(pair_is(Var(a), Var(ua), Var(wa), fresh), pair_is(Var(b), Var(ua), Var(wb), fresh)),
                Eq(Var(wa), Var(wb)))))))))))
    return conj(is_ordinal(d, fresh), pairs_in_domain, total, single_valued)


def expand_seq_membership(items: Union[Context, Sequence[Term]], y: Term) -> Formula:
    """The full formula abbreviated by "x̄ ∈ y".

    ∃f ∃d ∃z̄ [f is a function on the ordinal d ∧ (⋀_{j<μ}(⋀_{j'<j} z_{j'} ∈ z_j ∧ z_j ∈ d ∧ f(z_j) = x_j)
    ∧ ∀x (x ∈ d → ⋁_{j<μ} z_j = x)) ∧ f ∈ y]. Fresh variables are numbered above
    every index in the input.
    """
    if isinstance(items, Context):
        items = tuple(Var(v) for v in items.vars)
    items = tuple(items)
    mu = len(items)
    floor = max([-1] + [t.index for t in items + (y,) if isinstance(t, Var)])
    fresh = Fresh(floor)
    f, d = fresh(), fresh()
    zs = tuple(fresh() for _ in range(mu))
    ordering = Conj(tuple(
        conj(Conj(tuple(Mem(Var(zs[jp]), Var(zs[j])) for jp in range(j))),
             Mem(Var(zs[j]), Var(d)),
             applies(Var(f), Var(zs[j]), items[j], fresh))
        for j in range(mu)))
    x = fresh()
    covering = bounded_forall1(x, Var(d), Disj(tuple(Eq(Var(z), Var(x)) for z in zs)))
    matrix = conj(is_function_on_ordinal(Var(f), Var(d), fresh), conj(ordering, covering), Mem(Var(f), y))
    return Exists(Context((f,)), Exists(Context((d,)), Exists(Context(zs), matrix)))


def make_bounded_forall(context: Context, y: Term, body: Formula) -> Forall:
    if context.length == 1:
        return Forall(context, Implies(Mem(Var(context.vars[0]), y), body))
    return Forall(context, Implies(SeqMem(tuple(Var(v) for v in context.vars), y), body))


def make_bounded_exists(context: Context, y: Term, body: Formula) -> Exists:
    if context.length == 1:
        return Exists(context, conj(Mem(Var(context.vars[0]), y), body))
    return Exists(context, conj(SeqMem(tuple(Var(v) for v in context.vars), y), body))


def non_absolute_bounded_exists(context: Context, y: Term, body: Formula) -> Exists:
    """The rejected alternative: each x_j ∈ y separately instead of x̄ ∈ y.

    Only a negative-test fixture: ``classify`` does not count it as bounded.
    """
    guard = Conj(tuple(Mem(Var(v), y) for v in context.vars))
    return Exists(context, conj(guard, body))


# -- bounded quantifier recognition ------------------------------------------

def _guard_bound(guard: Formula, context: Context) -> Optional[Term]:
    names = tuple(Var(v) for v in context.vars)
    if context.length == 1 and isinstance(guard, Mem) and guard.left == names[0]:
        bound = guard.right
    elif isinstance(guard, SeqMem) and guard.items == names:
        bound = guard.bound
    else:
        return None
    if term_vars(bound) & set(context.vars):
        return None
    return bound


def bounded_forall_parts(phi: Formula) -> Optional[Tuple[Context, Term, Formula]]:
    if isinstance(phi, Forall) and isinstance(phi.body, Implies):
        bound = _guard_bound(phi.body.ant, phi.ctx)
        if bound is not None:
            return phi.ctx, bound, phi.body.cons
    return None


def bounded_exists_parts(phi: Formula) -> Optional[Tuple[Context, Term, Formula]]:
    if isinstance(phi, Exists) and isinstance(phi.body, Conj) and isinstance(phi.body.parts, tuple) \
            and len(phi.body.parts) == 2:
        bound = _guard_bound(phi.body.parts[0], phi.ctx)
        if bound is not None:
            return phi.ctx, bound, phi.body.parts[1]
    return None


# -- classification ------------------------------------------------------

class FormulaClass(Enum):
    DELTA0_OMEGA = "Δω₀"
    DELTA0_INF = "Δ∞₀"
    SIGMA1_OMEGA = "Σω₁"
    SIGMA1_INF = "Σ∞₁"
    GENERAL = "general"

    @property
    def is_delta0(self) -> bool:
        return self in (FormulaClass.DELTA0_OMEGA, FormulaClass.DELTA0_INF)

    @property
    def in_fragment(self) -> bool:
        return self is not FormulaClass.GENERAL


def is_delta0(phi: Formula) -> bool:
    if isinstance(phi, (Bottom, Mem, Eq)):
        return True
    if isinstance(phi, Implies):
        return is_delta0(phi.ant) and is_delta0(phi.cons)
    if isinstance(phi, (Conj, Disj)):
        if isinstance(phi.parts, OmegaFamily) and not phi.parts.periodic:
            return False
        return all(is_delta0(p) for p in family_distinct_parts(phi.parts))
    parts = bounded_forall_parts(phi) or bounded_exists_parts(phi)
    if parts is not None:
        return is_delta0(parts[2])
    return False


def is_infinitary(phi: Formula) -> bool:
    if isinstance(phi, (Bottom, Mem, Eq)):
        return False
    if isinstance(phi, SeqMem):
        return len(phi.items) != 1
    if isinstance(phi, Implies):
        return is_infinitary(phi.ant) or is_infinitary(phi.cons)
    if isinstance(phi, (Conj, Disj)):
        if isinstance(phi.parts, OmegaFamily):
            return True
        return any(is_infinitary(p) for p in phi.parts)
    if isinstance(phi, (Exists, Forall)):
        return phi.ctx.length != 1 or is_infinitary(phi.body)
    raise TypeError(f"not a formula: {phi!r}")


def classify(phi: Formula) -> FormulaClass:
    infinitary = is_infinitary(phi)
    if is_delta0(phi):
        return FormulaClass.DELTA0_INF if infinitary else FormulaClass.DELTA0_OMEGA
    if isinstance(phi, Exists) and is_delta0(phi.body):
        return FormulaClass.SIGMA1_INF if infinitary else FormulaClass.SIGMA1_OMEGA
    if isinstance(phi, SeqMem):
        return FormulaClass.SIGMA1_INF
    return FormulaClass.GENERAL


# -- s-expressions -------------------------------------------------------

def _tokenize(text: str) -> List[Tuple[str, int]]:
    tokens, pos = [], 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
        elif ch in '()':
            tokens.append((ch, pos))
            pos += 1
        elif ch == '{':
            depth, start = 0, pos
            while pos < len(text):
                depth += {'{': 1, '}': -1}.get(text[pos], 0)
                pos += 1
                if depth == 0:
                    break
            if depth != 0:
                raise fail(ErrorType.PARSE_ERROR, f"unbalanced set literal at position {start}",
                           ErrorSeverity.HIGH, position=start, text=text)
            tokens.append((text[start:pos], start))
        else:
            start = pos
            while pos < len(text) and not text[pos].isspace() and text[pos] not in '(){}':
                pos += 1
            tokens.append((text[start:pos], start))
    return tokens


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0

    def error(self, message: str):
        position = self.tokens[self.index][1] if self.index < len(self.tokens) else len(self.text)
        return fail(ErrorType.PARSE_ERROR, f"{message} at position {position}",
                    ErrorSeverity.HIGH, position=position, text=self.text)

    def peek(self) -> Optional[str]:
        return self.tokens[self.index][0] if self.index < len(self.tokens) else None

    def take(self, expected: Optional[str] = None) -> str:
        token = self.peek()
        if token is None or (expected is not None and token != expected):
            raise self.error(f"expected {expected or 'a token'}")
        self.index += 1
        return token

    def term(self) -> Term:
        token = self.take()
        if token.startswith('{') or token.isdigit():
            return Const(parse_set(token))
        if token.startswith('x') and token[1:].isdigit():
            return Var(int(token[1:]))
        self.index -= 1
        raise self.error(f"expected a term, got {token!r}")

    def context(self) -> Context:
        self.take('(')
        names = []
        while self.peek() != ')':
            term = self.term()
            if not isinstance(term, Var):
                raise self.error("context entries must be variables")
            names.append(term.index)
        self.take(')')
        return Context(tuple(names))

    def formula(self) -> Formula:
        self.take('(')
        head = self.take()
        if head == 'bot':
            result = Bottom()
        elif head in ('mem', 'eq'):
            left, right = self.term(), self.term()
            result = Mem(left, right) if head == 'mem' else Eq(left, right)
        elif head == 'imp':
            result = Implies(self.formula(), self.formula())
        elif head in ('and', 'or', 'and*', 'or*'):
            parts = []
            while self.peek() == '(':
                parts.append(self.formula())
            family = OmegaFamily(tuple(parts)) if head.endswith('*') else tuple(parts)
            result = Conj(family) if head.startswith('and') else Disj(family)
        elif head in ('ex', 'all'):
            context = self.context()
            body = self.formula()
            result = Exists(context, body) if head == 'ex' else Forall(context, body)
        elif head == 'seqmem':
            self.take('(')
            items = []
            while self.peek() != ')':
                items.append(self.term())
            self.take(')')
            result = SeqMem(tuple(items), self.term())
        else:
            self.index -= 1
            raise self.error(f"unknown connective {head!r}")
        self.take(')')
        return result


def parse_formula(text: str) -> Formula:
    reader = _Reader(text)
    result = reader.formula()
    if reader.peek() is not None:
        raise reader.error("trailing input after formula")
    return result


def format_formula(phi: Formula) -> str:
    if isinstance(phi, Bottom):
        return '(bot)'
    if isinstance(phi, Mem):
        return f"(mem {phi.left} {phi.right})"
    if isinstance(phi, Eq):
        return f"(eq {phi.left} {phi.right})"
    if isinstance(phi, Implies):
        return f"(imp {format_formula(phi.ant)} {format_formula(phi.cons)})"
    if isinstance(phi, (Conj, Disj)):
        head = 'and' if isinstance(phi, Conj) else 'or'
        if isinstance(phi.parts, OmegaFamily):
            head += '*'
        parts = family_distinct_parts(phi.parts)
        return '(' + ' '.join([head] + [format_formula(p) for p in parts]) + ')'
    if isinstance(phi, (Exists, Forall)):
        head = 'ex' if isinstance(phi, Exists) else 'all'
        return f"({head} {phi.ctx} {format_formula(phi.body)})"
    if isinstance(phi, SeqMem):
        return f"(seqmem ({' '.join(str(t) for t in phi.items)}) {phi.bound})"
    raise TypeError(f"not a formula: {phi!r}")
