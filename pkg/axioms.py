"""Realisers for the axioms of infinitary Kripke-Platek set theory and choice principles.

Each axiom has a formula builder and a realiser. The realisers peel the
sentence with the ``open`` primitive as they receive codes, so the inner
realisers are universal-program realisers of exactly the instance being
realised. Functions are coded as sets of 2-sequences: "f(y) = z" is the
sequence membership (y, z) ∈ f.
"""
import logging
from typing import Callable, Dict, Optional, Sequence, Tuple

from error_handler import ErrorSeverity, ErrorType, fail
from formula import (Const, Context, Eq, Exists, Forall, Formula, Fresh, Implies, Mem, SeqMem, Var,
                     bounded_exists1, bounded_forall1, conj, disj, free_vars, iff, is_delta0, is_ordinal, max_var,
                     neg, rename_var)
from hfset import EMPTY, HFSet, seq_function, sort_key, von_neumann
from realizability import EQ_REALIZER, MEM_REALIZER, phi_realizer
from rterm import Interpreter, Realizer, VPair, parse_term, register_primitive, stuck
from set_codec import (Code, build_code, decode_node, decode_set, essdom, first_element, least_element, merge_codes,
                       separate)
from truth_engine import eval_delta0

logger = logging.getLogger(__name__)

AXIOMS = ('extensionality', 'empty-set', 'pairing', 'union', 'induction', 'delta0-separation',
          'delta0-collection', 'infinity', 'weak-choice', 'regularity', 'choice', 'well-ordering')
SCHEMAS = ('induction', 'delta0-separation', 'delta0-collection')
NON_UNIFORM = ('regularity', 'choice', 'well-ordering')


def _v(i: int) -> Var:
    return Var(i)


def _one(i: int) -> Context:
    return Context((i,))


def _sentence_of(phi: Formula, allowed: Sequence[int], name: str) -> None:
    extra = free_vars(phi) - set(allowed)
    if extra:
        raise fail(ErrorType.UNBOUND_VARIABLE,
                   f"{name} instance has free variables {sorted(extra)} besides {list(allowed)}")


# -- formulas ------------------------------------------------------------

def extensionality_formula() -> Formula:
    x, y, z = 0, 1, 2
    subset = lambda a, b: bounded_forall1(z, _v(a), Mem(_v(z), _v(b)))
    return Forall(_one(x), Forall(_one(y), Implies(conj(subset(x, y), subset(y, x)), Eq(_v(x), _v(y)))))


def empty_set_formula() -> Formula:
    x, y = 0, 1
    return Exists(_one(x), Forall(_one(y), neg(Mem(_v(y), _v(x)))))


def pairing_formula() -> Formula:
    x, y, z = 0, 1, 2
    return Forall(_one(x), Forall(_one(y), Exists(_one(z), conj(Mem(_v(x), _v(z)), Mem(_v(y), _v(z))))))


def union_formula() -> Formula:
    x, u, y, z = 0, 1, 2, 3
    member_of_member = bounded_exists1(z, _v(x), Mem(_v(y), _v(z)))
    return Forall(_one(x), Exists(_one(u), Forall(_one(y), iff(Mem(_v(y), _v(u)), member_of_member))))


def induction_formula(phi: Formula, var: int = 0) -> Formula:
    """(∀x ((∀y ∈ x φ(y)) → φ(x))) → ∀x φ(x)"""
    _sentence_of(phi, (var,), 'induction')
    y = max_var(phi) + 1
    step = Forall(_one(var), Implies(bounded_forall1(y, _v(var), rename_var(phi, var, y)), phi))
    return Implies(step, Forall(_one(var), phi))


def separation_formula(phi: Formula, var: int = 0) -> Formula:
    """∀a ∃b ∀x (x ∈ b ↔ (x ∈ a ∧ φ(x)))"""
    if not is_delta0(phi):
        raise fail(ErrorType.NOT_DELTA0, "separation instance is not Δ₀", ErrorSeverity.HIGH)
    _sentence_of(phi, (var,), 'delta0-separation')
    a, b = max_var(phi) + 1, max_var(phi) + 2
    return Forall(_one(a), Exists(_one(b), Forall(_one(var), iff(
        Mem(_v(var), _v(b)), conj(Mem(_v(var), _v(a)), phi)))))


def collection_formula(phi: Formula, x: int = 0, y: int = 1) -> Formula:
    """∀a ((∀x ∈ a ∃y φ(x, y)) → ∃b ∀x ∈ a ∃y ∈ b φ(x, y))"""
    if not is_delta0(phi):
        raise fail(ErrorType.NOT_DELTA0, "collection instance is not Δ₀", ErrorSeverity.HIGH)
    _sentence_of(phi, (x, y), 'delta0-collection')
    a, b = max_var(phi) + 1, max_var(phi) + 2
    premise = bounded_forall1(x, _v(a), Exists(_one(y), phi))
    conclusion = Exists(_one(b), bounded_forall1(x, _v(a), bounded_exists1(y, _v(b), phi)))
    return Forall(_one(a), Implies(premise, conclusion))


def _is_successor(y: int, z: int, fresh: Fresh) -> Formula:
    """z = y ∪ {y}"""
    u, w = fresh(), fresh()
    return conj(Mem(_v(y), _v(z)),
                bounded_forall1(u, _v(y), Mem(_v(u), _v(z))),
                bounded_forall1(w, _v(z), disj(Mem(_v(w), _v(y)), Eq(_v(w), _v(y)))))


def infinity_formula() -> Formula:
    """∃w (∅ ∈ w ∧ every element has its successor in w ∧ every non-empty element has a predecessor in w)"""
    w = 0
    fresh = Fresh(w)
    y1, z1, y2, z2 = fresh(), fresh(), fresh(), fresh()
    closed = bounded_forall1(y1, _v(w), bounded_exists1(z1, _v(w), _is_successor(y1, z1, fresh)))
    founded = bounded_forall1(y2, _v(w), disj(Eq(_v(y2), Const(EMPTY)),
                                              bounded_exists1(z2, _v(w), _is_successor(z2, y2, fresh))))
    return Exists(_one(w), conj(Mem(Const(EMPTY), _v(w)), closed, founded))


def _inhabited(y: int, z: int) -> Formula:
    return Exists(_one(z), Mem(_v(z), _v(y)))


def _chosen(y: int, z: int, f: int) -> Formula:
    return bounded_exists1(z, _v(y), SeqMem((_v(y), _v(z)), _v(f)))


def weak_choice_formula() -> Formula:
    """∀x ∃f ∀y ∈ x ((∃z z ∈ y) → ∃z ∈ y f(y) = z)"""
    x, f, y, z = 0, 1, 2, 3
    return Forall(_one(x), Exists(_one(f), bounded_forall1(y, _v(x), Implies(_inhabited(y, z), _chosen(y, z, f)))))


def choice_formula() -> Formula:
    """∀x ((∀y ∈ x ∃z z ∈ y) → ∃f ∀y ∈ x ∃z ∈ y f(y) = z)"""
    x, f, y, z = 0, 1, 2, 3
    premise = bounded_forall1(y, _v(x), _inhabited(y, z))
    return Forall(_one(x), Implies(premise, Exists(_one(f), bounded_forall1(y, _v(x), _chosen(y, z, f)))))


def regularity_formula() -> Formula:
    """∀x ((∃y y ∈ x) → ∃y ∈ x ∀z ∈ y ¬(z ∈ x))"""
    x, y, z = 0, 1, 2
    minimal = bounded_exists1(y, _v(x), bounded_forall1(z, _v(y), neg(Mem(_v(z), _v(x)))))
    return Forall(_one(x), Implies(_inhabited(x, y), minimal))


def well_ordering_formula() -> Formula:
    """∀x ∃f ∃d (d is an ordinal and f is a bijection between d and x)."""
    x, f, d = 0, 1, 2
    fresh = Fresh(d)
    j, y, j2, y2, j3, y3, y4, j5, j6, y6 = (fresh() for _ in range(10))
    pairs = lambda a, b: SeqMem((_v(a), _v(b)), _v(f))
    onto = bounded_forall1(y, _v(x), bounded_exists1(j, _v(d), pairs(j, y)))
    total = bounded_forall1(j2, _v(d), bounded_exists1(y2, _v(x), pairs(j2, y2)))
    functional = bounded_forall1(j3, _v(d), bounded_forall1(y3, _v(x), bounded_forall1(y4, _v(x), Implies(
        conj(pairs(j3, y3), pairs(j3, y4)), Eq(_v(y3), _v(y4))))))
    injective = bounded_forall1(j5, _v(d), bounded_forall1(j6, _v(d), bounded_forall1(y6, _v(x), Implies(
        conj(pairs(j5, y6), pairs(j6, y6)), Eq(_v(j5), _v(j6))))))
    body = conj(is_ordinal(_v(d), fresh), onto, total, functional, injective)
    return Forall(_one(x), Exists(Context((f, d)), body))


# -- primitives ----------------------------------------------------------

def _code(value) -> Code:
    if not isinstance(value, Code):
        raise stuck(f"expected a code, got {type(value).__name__}")
    return value


@register_primitive('merge', 2)
def _prim_merge(a, b):
    return merge_codes([_code(a), _code(b)])


@register_primitive('union', 1)
def _prim_union(a):
    return merge_codes([e for x in _code(a).element_codes() for e in x.element_codes()])


@register_primitive('separate', 3)
def _prim_separate(phi, var, a):
    return separate(_code(a), lambda e: eval_delta0(phi, {var: decode_set(e)}))


@register_primitive('collect', 2, needs_interpreter=True)
def _prim_collect(interp: Interpreter, r, a):
    """Merge the witnesses a realiser of ∀x ∈ a ∃y φ gives on each element code of a."""
    witnesses = []
    for element in _code(a).element_codes():
        out = interp.apply(interp.apply(interp.apply(r, element), MEM_REALIZER), 0)
        if not isinstance(out, VPair) or not isinstance(out.left, Code):
            raise stuck("collection premise did not return a witness")
        witnesses.append(out.left)
    return merge_codes(witnesses)


LOOKUP_PROGRAM = parse_term('(lam c (lam m (prim lookup P c)))')


@register_primitive('lookup', 2)
def _prim_lookup(entries, c):
    target = decode_set(_code(c))
    for entry in entries:
        if decode_set(entry.left) == target:
            return entry.right
    raise stuck("no realiser recorded for this set")


@register_primitive('induction', 2, needs_interpreter=True)
def _prim_induction(interp: Interpreter, r, b):
    """Done/Realisers traversal of essdom(b) in rank order."""
    b = _code(b)
    order = sorted(essdom(b), key=lambda node: sort_key(decode_node(b.pre, node)))
    done: Dict[int, object] = {}
    for node in order:
        interp.tick()
        below = tuple(VPair(b.at(m), done[m]) for m in b.members(node))
        done[node] = interp.apply(interp.apply(r, b.at(node)), Realizer(LOOKUP_PROGRAM, below))
    logger.debug(f"induction realised {len(done)} nodes")
    return done[b.rho]


def _choice_function(a: Code, pick: Callable[[Code], HFSet]) -> Code:
    pairs = [seq_function((decode_set(y), pick(y))) for y in a.element_codes() if y.members()]
    return build_code(HFSet(pairs))


@register_primitive('choose', 2)
def _prim_choose(canonical, a):
    """A choice function on the family coded by a; canonical picks the least element, otherwise node order."""
    if canonical:
        return _choice_function(_code(a), least_element)
    return _choice_function(_code(a), lambda y: decode_set(first_element(y)))


@register_primitive('minimal', 1)
def _prim_minimal(a):
    """The first ∈-minimal element of the coded set in node order."""
    a = _code(a)
    x = decode_set(a)
    for y in a.element_codes():
        if not any(z in x for z in decode_set(y).elements):
            return y
    raise stuck("no ∈-minimal element in an empty set")


@register_primitive('well_order', 1)
def _prim_well_order(a):
    """Code of (f, d): the enumeration of the coded set in node order, with its ordinal length."""
    elements = [decode_set(y) for y in _code(a).element_codes()]
    f = HFSet(seq_function((von_neumann(j), y)) for j, y in enumerate(elements))
    return build_code(seq_function((f, von_neumann(len(elements)))))


# -- realisers -----------------------------------------------------------

_PROGRAMS = {
    'extensionality': '(lam a (lam b (lam s P)))',
    'empty-set': '(lam k (pair P (lam c (lam t 0))))',
    'pairing': '(lam a (lam b (lam k (pair (prim merge a b) (lam i P)))))',
    'union': '(lam a (lam k (let u (prim union a) (pair u (prim phi_realizer (prim open (prim open P a) u))))))',
    'induction': '(lam r (lam b (prim induction r b)))',
    'delta0-separation': ('(lam a (lam k (let b (prim separate (prim nth P 1) (prim nth P 2) a)'
                          ' (pair b (prim phi_realizer (prim open (prim open (prim nth P 0) a) b))))))'),
    'delta0-collection': ('(lam a (lam r (let b (prim collect r a)'
                          ' (lam k (pair b (prim phi_realizer (prim open (prim open (prim open P a) nil) b)))))))'),
    'weak-choice': ('(lam a (lam k (let f (prim choose 1 a)'
                    ' (pair f (prim phi_realizer (prim open (prim open P a) f))))))'),
    'choice': ('(lam a (lam t (lam k (let f (prim choose 0 a)'
               ' (pair f (prim phi_realizer (prim open (prim open (prim open P a) nil) f)))))))'),
    'regularity': ('(lam a (lam t (lam k (let m (prim minimal a)'
                   ' (pair m (prim phi_realizer (prim open (prim open (prim open P a) nil) m)))))))'),
    'well-ordering': ('(lam a (lam k (let w (prim well_order a)'
                      ' (pair w (prim phi_realizer (prim open (prim open P a) w))))))'),
}


def axiom_formula(name: str, formula: Optional[Formula] = None, variables: Sequence[int] = ()) -> Formula:
    """The axiom sentence; schemas take the instance formula and its distinguished variables."""
    if name not in AXIOMS:
        raise fail(ErrorType.UNKNOWN_AXIOM, f"unknown axiom {name!r}", ErrorSeverity.HIGH, known=list(AXIOMS))
    if name in SCHEMAS:
        if formula is None:
            raise fail(ErrorType.ARITY_MISMATCH, f"schema {name} needs an instance formula")
        builder = {'induction': induction_formula, 'delta0-separation': separation_formula,
                   'delta0-collection': collection_formula}[name]
        return builder(formula, *variables)
    return {
        'extensionality': extensionality_formula,
        'empty-set': empty_set_formula,
        'pairing': pairing_formula,
        'union': union_formula,
        'infinity': infinity_formula,
        'weak-choice': weak_choice_formula,
        'choice': choice_formula,
        'regularity': regularity_formula,
        'well-ordering': well_ordering_formula,
    }[name]()


def realize_axiom(name: str, formula: Optional[Formula] = None, variables: Sequence[int] = ()) -> Realizer:
    sentence = axiom_formula(name, formula, variables)
    logger.info(f"realising axiom {name}")
    if name == 'infinity':
        # no inductive set below V_ω: the search realiser is all there is
        return phi_realizer(sentence)
    parameter = {
        'extensionality': EQ_REALIZER,
        'empty-set': build_code(EMPTY),
        'pairing': MEM_REALIZER,
        'induction': None,
    }.get(name, sentence)
    if name == 'delta0-separation':
        parameter = (sentence, formula, (tuple(variables) or (0,))[0])
    return Realizer(parse_term(_PROGRAMS[name]), parameter)


def instance_arity(name: str) -> Tuple[int, ...]:
    """Default distinguished variables of a schema's instance formula."""
    return {'induction': (0,), 'delta0-separation': (0,), 'delta0-collection': (0, 1)}.get(name, ())
