"""Realisers for the rules of infinitary first-order logic.

A realiser of the sequent φ ⊢_x̄ ψ is a realiser of ∀x̄(φ → ψ); with the empty
context it is a realiser of the bare implication. ``sequent_combinator``
builds conclusion realisers from premise realisers, one small program per
rule. ``walking`` and ``transfinite_transitivity`` run the tree searches for
the dual distributivity and transfinite transitivity rules.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Mapping, Optional, Sequence, Tuple

from error_handler import ErrorSeverity, ErrorType, fail
from formula import Context, Forall, Formula, Implies
from hfset import HFSet
from realizability import EQ_REALIZER, code_of_values, values_of_code
from rterm import Interpreter, Realizer, VPair, constant_realizer, interpret, parse_term, register_primitive, stuck

logger = logging.getLogger(__name__)

Node = Tuple[int, ...]


@dataclass(frozen=True)
class Sequent:
    ctx: Context
    antecedent: Formula
    succedent: Formula

    def formula(self) -> Formula:
        body = Implies(self.antecedent, self.succedent)
        return Forall(self.ctx, body) if self.ctx.length else body


def length_context(n: int) -> Context:
    return Context(tuple(range(n)))


def _values(n: int, code: Any) -> Tuple[HFSet, ...]:
    return () if n == 0 else values_of_code(length_context(n), code)


def _code(values: Sequence[HFSet]) -> Optional[Any]:
    return code_of_values(length_context(len(values)), tuple(values)) if values else None


@register_primitive('join', 3)
def _prim_join(lengths, a, b):
    """Code of the concatenated context X̄Ȳ from codes of X̄ and Ȳ."""
    m, n = lengths.left, lengths.right
    return _code(_values(m, a) + _values(n, b))


@register_primitive('split', 2)
def _prim_split(lengths, c):
    m, n = lengths.left, lengths.right
    values = _values(m + n, c)
    return VPair(_code(values[:m]), _code(values[m:]))


@register_primitive('reorder', 2)
def _prim_reorder(spec, b):
    """Code of the substituted context: entries are indices into Ȳ or set constants."""
    n, items = spec
    ys = _values(n, b)
    xs = []
    for item in items:
        if isinstance(item, HFSet):
            xs.append(item)
        elif isinstance(item, int) and 0 <= item < len(ys):
            xs.append(ys[item])
        else:
            raise stuck(f"substitution entry {item!r} does not name a context position")
    return _code(xs)


# -- the rules -----------------------------------------------------------

def _wrap(n: int, body: str) -> str:
    return f"(lam a {body})" if n else body


def _length(side: Mapping[str, Any], key: str = 'context') -> int:
    value = side.get(key, 0)
    return value.length if isinstance(value, Context) else int(value)


def _identity(premises, side):
    return _wrap(_length(side), "(lam s s)"), None


def _substitution(premises, side):
    m, n = _length(side, 'source'), _length(side, 'context')
    terms = tuple(side.get('terms', ()))
    if len(terms) != m:
        raise fail(ErrorType.ARITY_MISMATCH, f"substitution gives {len(terms)} terms for a context of length {m}")
    if m == 0:
        return _wrap(n, "(fst P)"), VPair(premises[0], (n, terms))
    if n == 0:
        return "(app (fst P) (prim reorder (snd P) nil))", VPair(premises[0], (n, terms))
    return "(lam b (app (fst P) (prim reorder (snd P) b)))", VPair(premises[0], (n, terms))


def _cut(premises, side):
    r, s = premises
    if _length(side):
        return "(lam a (lam u ((snd P) a ((fst P) a u))))", VPair(r, s)
    return "(lam u ((snd P) ((fst P) u)))", VPair(r, s)


def _eq_refl(premises, side):
    return _wrap(_length(side), "(lam t P)"), EQ_REALIZER


def _eq_subst(premises, side):
    return _wrap(_length(side), "(lam u (u 1))"), None


def _conj_elim(premises, side):
    return _wrap(_length(side), "(lam w (w P))"), int(side['index'])


def _conj_intro(premises, side):
    if _length(side):
        return "(lam a (lam u (lam i ((prim nth P i) a u))))", tuple(premises)
    return "(lam u (lam i ((prim nth P i) u)))", tuple(premises)


def _disj_intro(premises, side):
    return _wrap(_length(side), "(lam u (lam z (pair P u)))"), int(side['index'])


def _disj_elim(premises, side):
    if _length(side):
        return "(lam a (lam s (let w (s 0) ((prim nth P (fst w)) a (snd w)))))", tuple(premises)
    return "(lam s (let w (s 0) ((prim nth P (fst w)) (snd w))))", tuple(premises)


def _imp_curry(premises, side):
    if _length(side):
        return "(lam a (lam u (lam v ((P a) (lam i (if (prim eq i 0) u v))))))", premises[0]
    return "(lam u (lam v (P (lam i (if (prim eq i 0) u v)))))", premises[0]


def _imp_uncurry(premises, side):
    if _length(side):
        return "(lam a (lam w (P a (w 0) (w 1))))", premises[0]
    return "(lam w (P (w 0) (w 1)))", premises[0]


def _split_lengths(side) -> Tuple[int, int]:
    m, n = side['split']
    return int(m), int(n)


def _exists_lift(premises, side):
    """∀x̄ȳ(φ → ψ) gives ∀x̄((∃ȳ φ) → ψ)."""
    m, n = _split_lengths(side)
    param = VPair(premises[0], VPair(m, n))
    if m:
        return "(lam a (lam e (let w (e 0) ((fst P) (prim join (snd P) a (fst w)) (snd w)))))", param
    return "(lam e (let w (e 0) ((fst P) (prim join (snd P) nil (fst w)) (snd w))))", param


def _exists_lower(premises, side):
    """∀x̄((∃ȳ φ) → ψ) gives ∀x̄ȳ(φ → ψ)."""
    m, n = _split_lengths(side)
    param = VPair(premises[0], VPair(m, n))
    if m:
        return "(lam c (lam s (let p (prim split (snd P) c) ((fst P) (fst p) (lam z (pair (snd p) s))))))", param
    return "(lam c (lam s (let p (prim split (snd P) c) ((fst P) (lam z (pair (snd p) s))))))", param


def _forall_lift(premises, side):
    """∀x̄ȳ(φ → ψ) gives ∀x̄(φ → ∀ȳ ψ)."""
    m, n = _split_lengths(side)
    param = VPair(premises[0], VPair(m, n))
    if m:
        return "(lam a (lam u (lam b ((fst P) (prim join (snd P) a b) u))))", param
    return "(lam u (lam b ((fst P) (prim join (snd P) nil b) u)))", param


def _forall_lower(premises, side):
    """∀x̄(φ → ∀ȳ ψ) gives ∀x̄ȳ(φ → ψ)."""
    m, n = _split_lengths(side)
    param = VPair(premises[0], VPair(m, n))
    if m:
        return "(lam c (lam u (let p (prim split (snd P) c) ((fst P) (fst p) u (snd p)))))", param
    return "(lam c (lam u (let p (prim split (snd P) c) ((fst P) u (snd p)))))", param


def _small_distributivity(premises, side):
    """⋀_i(φ ∨ ψ_i) ⊢ φ ∨ ⋀_i ψ_i: look for an index whose realiser picks φ."""
    body = ("(lam w (app (fix loop i (if (prim lt i P)"
            " (let v ((w i) 0) (if (prim eq (fst v) 0) (lam z (pair 0 (snd v))) (loop (prim add i 1))))"
            " (lam z (pair 1 (lam j (snd ((w j) 0))))))) 0))")
    return _wrap(_length(side), body), int(side['count'])


def _weaken(premises, side):
    return _wrap(_length(side), "(lam u P)"), premises[0]


RuleBuilder = Callable[[Sequence[Any], Mapping[str, Any]], Tuple[str, Any]]

# name -> (number of premises, None for one or more; builder)
RULES: Dict[str, Tuple[Optional[int], RuleBuilder]] = {
    'identity': (0, _identity),
    'substitution': (1, _substitution),
    'cut': (2, _cut),
    'eq_refl': (0, _eq_refl),
    'eq_subst': (0, _eq_subst),
    'conj_elim': (0, _conj_elim),
    'conj_intro': (None, _conj_intro),
    'disj_intro': (0, _disj_intro),
    'disj_elim': (None, _disj_elim),
    'imp_curry': (1, _imp_curry),
    'imp_uncurry': (1, _imp_uncurry),
    'exists_lift': (1, _exists_lift),
    'exists_lower': (1, _exists_lower),
    'forall_lift': (1, _forall_lift),
    'forall_lower': (1, _forall_lower),
    'small_distributivity': (0, _small_distributivity),
    'weaken': (1, _weaken),
}


def sequent_combinator(rule: str, premises: Sequence[Any] = (), side: Optional[Mapping[str, Any]] = None) -> Realizer:
    if rule not in RULES:
        raise fail(ErrorType.UNKNOWN_RULE, f"unknown rule {rule!r}", ErrorSeverity.HIGH,
                   known=sorted(RULES))
    arity, builder = RULES[rule]
    premises = tuple(premises)
    if (arity is None and not premises) or (arity is not None and len(premises) != arity):
        expected = 'at least one' if arity is None else str(arity)
        raise fail(ErrorType.ARITY_MISMATCH, f"rule {rule} takes {expected} premises, got {len(premises)}",
                   rule=rule)
    program, parameter = builder(premises, side or {})
    logger.debug(f"{rule}: {program}")
    return Realizer(parse_term(program), parameter)


# -- trees ---------------------------------------------------------------

NTH_PROGRAM = parse_term('(lam i (prim nth P i))')


def tuple_realizer(realizers: Sequence[Any]) -> Realizer:
    """The conjunction realiser returning the i-th entry on input i."""
    return Realizer(NTH_PROGRAM, tuple(realizers))


def _never(node: Node) -> bool:
    return False


def _no_witness(node: Node) -> int:
    return 0


@dataclass(frozen=True)
class TreeSpec:
    """The tree γ^{<depth} with the minimal elements of a bar.

    ``is_limit`` marks nodes treated as limit-length; ``witness_length`` gives
    the length of the context x_g introduced at node g (transitivity only).
    """
    gamma: int
    depth: int
    bar: Tuple[Node, ...]
    is_limit: Callable[[Node], bool] = field(default=_never, compare=False)
    witness_length: Callable[[Node], int] = field(default=_no_witness, compare=False)

    def successors(self, node: Node) -> Tuple[Node, ...]:
        return tuple(node + (c,) for c in range(self.gamma))

    @property
    def sorted_bar(self) -> Tuple[Node, ...]:
        return tuple(sorted(self.bar, key=lambda f: (len(f), f)))


def full_bar(gamma: int, depth: int) -> Tuple[Node, ...]:
    nodes: Tuple[Node, ...] = ((),)
    for _ in range(depth):
        nodes = tuple(f + (c,) for f in nodes for c in range(gamma))
    return nodes


@dataclass(frozen=True, eq=False)
class TreePlan:
    tree: TreeSpec
    successor: Mapping[Node, Any] = field(compare=False)
    limit: Mapping[Node, Any] = field(default_factory=dict, compare=False)

    def premise(self, table: Mapping[Node, Any], node: Node, kind: str) -> Any:
        if node not in table:
            raise stuck(f"no {kind} premise realiser for node {node}")
        return table[node]


def _not_covering(node: Node, depth: int):
    return fail(ErrorType.BAR_NOT_COVERING, f"branch through {node} reaches depth {depth} without meeting the bar",
                ErrorSeverity.HIGH, node=list(node))


@register_primitive('walk', 2, needs_interpreter=True)
def _prim_walk(interp: Interpreter, plan: TreePlan, r: Any) -> Any:
    """Walk the tree from a realiser of ⋀_{f∈B} ⋁_{β<δ_f} φ_{f|β+1} to a realiser of φ_∅."""
    tree = plan.tree
    known: Dict[Node, Any] = {}
    for i, f in enumerate(tree.sorted_bar):
        out = interp.apply(interp.apply(r, i), 0)
        if not isinstance(out, VPair) or not isinstance(out.left, int) or not 0 <= out.left < len(f):
            raise stuck(f"bar entry {i} did not select a level below {len(f)}")
        known.setdefault(f[:out.left + 1], out.right)
    node: Node = ()
    while () not in known:
        interp.tick()
        if node in known:
            if tree.is_limit(node):
                out = interp.apply(plan.premise(plan.limit, node, 'limit'), known[node])
                if not isinstance(out, VPair) or not isinstance(out.left, int) or not 0 <= out.left < len(node):
                    raise stuck(f"limit premise at {node} did not retract to a shorter node")
                known.setdefault(node[:out.left], out.right)
                node = node[:out.left]
            else:
                node = node[:-1]
            continue
        children = tree.successors(node)
        if all(g in known for g in children):
            combined = tuple_realizer([known[g] for g in children])
            known[node] = interp.apply(plan.premise(plan.successor, node, 'successor'), combined)
            logger.debug(f"walking: realised node {node}")
        elif len(node) >= tree.depth:
            raise _not_covering(node, tree.depth)
        else:
            node = next(g for g in children if g not in known)
    return known[()]


@register_primitive('transit', 2, needs_interpreter=True)
def _prim_transit(interp: Interpreter, plan: TreePlan, r0: Any) -> Any:
    """Walk forward from a realiser of φ_∅ to the bar, collecting witnesses and realisers."""
    tree = plan.tree
    bar = tree.sorted_bar
    if bar == ((),):
        return r0
    node: Node = ()
    chain = [r0]
    values: Tuple[HFSet, ...] = ()
    while node not in bar:
        interp.tick()
        if len(node) >= tree.depth:
            raise _not_covering(node, tree.depth)
        step = plan.premise(plan.successor, node, 'successor')
        if values:
            step = interp.apply(step, _code(values))
        out = interp.apply(interp.apply(step, chain[-1]), 0)
        if not isinstance(out, VPair) or not isinstance(out.left, int) or not 0 <= out.left < tree.gamma:
            raise stuck(f"successor premise at {node} did not select a child")
        child = node + (out.left,)
        witness = interp.apply(out.right, 0)
        if not isinstance(witness, VPair):
            raise stuck(f"no witness for node {child}")
        values = values + _values(tree.witness_length(child), witness.left)
        realised = witness.right
        if tree.is_limit(child):
            realised = interp.apply(plan.premise(plan.limit, child, 'limit'), tuple_realizer(chain[:len(child)]))
        chain.append(realised)
        node = child
    witness_code = _code(values) if values else code_of_values(length_context(0), ())
    inner = constant_realizer(VPair(witness_code, tuple_realizer(chain[1:])))
    return constant_realizer(VPair(bar.index(node), inner))


WALK_PROGRAM = parse_term('(lam r (prim walk P r))')
TRANSIT_PROGRAM = parse_term('(lam r (prim transit P r))')


def walking_realizer(tree: TreeSpec, successor: Mapping[Node, Any],
                     limit: Optional[Mapping[Node, Any]] = None) -> Realizer:
    """Realiser of ⋀_{f∈B} ⋁_{β<δ_f} φ_{f|β+1} ⊢ φ_∅ from the rule's premises."""
    return Realizer(WALK_PROGRAM, TreePlan(tree, dict(successor), dict(limit or {})))


def walking(r: Any, tree: TreeSpec, successor: Mapping[Node, Any],
            limit: Optional[Mapping[Node, Any]] = None, fuel: Optional[int] = None) -> Any:
    return interpret(walking_realizer(tree, successor, limit), r, fuel)


def transitivity_realizer(tree: TreeSpec, successor: Mapping[Node, Any],
                          limit: Optional[Mapping[Node, Any]] = None) -> Realizer:
    return Realizer(TRANSIT_PROGRAM, TreePlan(tree, dict(successor), dict(limit or {})))


def transfinite_transitivity(r0: Any, tree: TreeSpec, successor: Mapping[Node, Any],
                             limit: Optional[Mapping[Node, Any]] = None, fuel: Optional[int] = None) -> Any:
    """From a realiser of φ_∅, a realiser of ⋁_{f∈B} ∃x̄_f ⋀_{β<δ_f} φ_{f|β+1}.

    With the bar at the root the premise realiser comes back unchanged.
    """
    return interpret(transitivity_realizer(tree, successor, limit), r0, fuel)
