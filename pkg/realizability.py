"""OTM-style realisability at desk scale.

``verify`` decides "r realises φ" clause by clause, with every "for every code"
clause relativised to a ``CodeUniverse`` and the implication clause quantified
over a candidate pool (the universal program's output, scrambled-witness
variants and a small library, each kept only if it verifies itself).
``phi_universal`` is the universal realisability program: a single program
``(lam x (prim phi P x))`` whose parameter is the sentence, dispatching on the
sentence's shape.
"""
import itertools
import logging
from functools import cached_property
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from config import config
from error_handler import ErrorType, RealizabilityError, fail
from formula import (Bottom, Conj, Const, Context, Disj, Eq, Exists, Forall, Formula, FormulaClass, Implies, Mem,
                     OmegaFamily, SeqMem, bounded_exists_parts, bounded_forall_parts, classify, constants,
                     family_distinct_parts, family_part, free_vars, is_delta0, substitute, substitute_map)
from hfset import HFSet, hf, level, seq_function, seq_values, transitive_closure, von_neumann
from rterm import (IDENTITY, Lam, Lit, MkPair, Prim, Realizer, Ref, VPair, constant_realizer, interpret, parse_term,
                   register_primitive, stuck)
from set_codec import Code, build_code, build_code_scrambled, build_iso, decode_match, decode_set, is_code_iso
from truth_engine import bounded_instances, eval_delta0

logger = logging.getLogger(__name__)

# A realiser that goes wrong on its input has simply failed to realise; running
# out of fuel is reported to the caller instead.
_REFUTING = frozenset({
    ErrorType.STUCK_TERM, ErrorType.ARITY_MISMATCH, ErrorType.INDEX_OUT_OF_RANGE,
    ErrorType.LENGTH_MISMATCH, ErrorType.NOT_DECIDABLE, ErrorType.NOT_IN_FRAGMENT,
    ErrorType.PRED_FAILURE, ErrorType.INVALID_CODE, ErrorType.UNBOUND_VARIABLE,
})

EQ_REALIZER = Realizer(parse_term('(lam p (prim iso (fst p) (snd p)))'))
MEM_REALIZER = Realizer(Lam('p', MkPair(parse_term('(prim match (fst p) (snd p) (prim rho (fst p)))'),
                                        Lit(EQ_REALIZER))))
PHI_PROGRAM = Lam('x', Prim('phi', (Ref('P'), Ref('x'))))
RESCRAMBLED_PROGRAM = parse_term('(lam x (prim rescramble (fst P) (prim phi (snd P) x)))')


# -- contexts and codes --------------------------------------------------

def code_of_values(context: Context, values: Sequence[HFSet]) -> Code:
    """A length-1 context is coded by its element; other lengths by the sequence function."""
    if context.length == 1:
        return build_code(values[0])
    return build_code(seq_function(values))


def values_of_code(context: Context, code: Any) -> Tuple[HFSet, ...]:
    if not isinstance(code, Code):
        raise stuck(f"expected a code for a context of length {context.length}")
    decoded = decode_set(code)
    if context.length == 1:
        return (decoded,)
    values = seq_values(decoded)
    if values is None or len(values) != context.length:
        raise stuck(f"code does not decode to a sequence of length {context.length}")
    return values


# -- truth in the fragment -----------------------------------------------

def _witness_candidates(phi: Formula) -> List[HFSet]:
    found = {x: None for x in level(config.WITNESS_RANK)}
    for c in constants(phi):
        found.setdefault(c, None)
        for x in transitive_closure(c):
            found.setdefault(x, None)
    return list(found)


def witness_search(phi: Exists) -> Optional[Tuple[HFSet, ...]]:
    """The first witness tuple for an unbounded ∃, searching V_WITNESS_RANK and the constants' closures."""
    candidates = _witness_candidates(phi)
    for values in itertools.product(candidates, repeat=phi.ctx.length):
        if holds(substitute(phi.body, phi.ctx, values)):
            return values
    logger.debug(f"no witness among {len(candidates)} candidates")
    return None


def seq_membership_holds(phi: SeqMem) -> bool:
    values = tuple(_constant(t) for t in phi.items)
    return seq_function(values) in _constant(phi.bound)


def _constant(t) -> HFSet:
    if not isinstance(t, Const):
        raise fail(ErrorType.UNBOUND_VARIABLE, f"variable {t} is unbound")
    return t.value


def holds(phi: Formula) -> bool:
    """Truth of a sentence built from Δ₀ pieces, bounded quantifiers and unbounded ∃."""
    if is_delta0(phi):
        return bool(eval_delta0(phi))
    if isinstance(phi, SeqMem):
        return seq_membership_holds(phi)
    if isinstance(phi, Implies):
        return not holds(phi.ant) or holds(phi.cons)
    if isinstance(phi, Conj):
        return all(holds(p) for p in family_distinct_parts(phi.parts))
    if isinstance(phi, Disj):
        return any(holds(p) for p in family_distinct_parts(phi.parts))
    parts = bounded_forall_parts(phi)
    if parts is not None and isinstance(parts[1], Const):
        context, bound, body = parts
        return all(holds(substitute(body, context, v)) for v in bounded_instances(context, bound.value))
    parts = bounded_exists_parts(phi)
    if parts is not None and isinstance(parts[1], Const):
        context, bound, body = parts
        return any(holds(substitute(body, context, v)) for v in bounded_instances(context, bound.value))
    if isinstance(phi, Exists):
        return witness_search(phi) is not None
    raise fail(ErrorType.NOT_DECIDABLE, "truth of an unbounded universal is not decidable here")


# -- the universal program -----------------------------------------------

def phi_realizer(sentence: Formula, chain: Tuple[Tuple[HFSet, ...], ...] = ()) -> Realizer:
    """The universal program with ``sentence`` as its parameter; ``chain`` fixes leading ∃ witnesses."""
    return Realizer(PHI_PROGRAM, (sentence, chain) if chain else sentence)


def _unplan(param) -> Tuple[Formula, Tuple]:
    if isinstance(param, tuple) and len(param) == 2 and isinstance(param[1], tuple):
        return param[0], param[1]
    return param, ()


def seq_membership_chain(phi: SeqMem) -> Tuple[Tuple[HFSet, ...], ...]:
    """Witnesses for the expansion of x̄ ∈ y: the function, its ordinal domain and the ordinals below it."""
    values = tuple(_constant(t) for t in phi.items)
    mu = len(values)
    return (seq_function(values),), (von_neumann(mu),), tuple(von_neumann(j) for j in range(mu))


def _first_true_part(parts) -> int:
    if isinstance(parts, OmegaFamily) and not parts.periodic:
        candidates = range(config.OMEGA_PROBE)
        for i in candidates:
            if holds(parts.part(i)):
                return i
        raise stuck("no true disjunct among the probed indices")
    for i, part in enumerate(family_distinct_parts(parts)):
        if holds(part):
            return i
    raise stuck("no disjunct is true")


def _exists_step(phi: Exists, chain: Tuple) -> VPair:
    if chain:
        values, rest = tuple(chain[0]), tuple(chain[1:])
    else:
        rest = ()
        parts = bounded_exists_parts(phi)
        if parts is not None and isinstance(parts[1], Const):
            context, bound, body = parts
            values = next((v for v in bounded_instances(context, bound.value)
                           if holds(substitute(body, context, v))), None)
        else:
            values = witness_search(phi)
        if values is None:
            raise stuck("witness search found nothing")
    return VPair(code_of_values(phi.ctx, values), phi_realizer(substitute(phi.body, phi.ctx, values), rest))


@register_primitive('phi', 2)
def _prim_phi(param, arg):
    sentence, chain = _unplan(param)
    if isinstance(sentence, Bottom):
        raise stuck("⊥ has no realiser")
    if isinstance(sentence, (Eq, Mem)):
        if not isinstance(arg, VPair) or not isinstance(arg.left, Code) or not isinstance(arg.right, Code):
            raise stuck("atomic realiser expects a pair of codes")
        a, b = arg.left, arg.right
        if isinstance(sentence, Eq):
            iso = build_iso(a, b)
            return iso if iso is not None else 0
        return VPair(decode_match(a, b, a.rho), EQ_REALIZER)
    if isinstance(sentence, Implies):
        return phi_realizer(sentence.cons)
    if isinstance(sentence, Conj):
        if not isinstance(arg, int):
            raise stuck("conjunction realiser expects an index")
        return phi_realizer(family_part(sentence.parts, arg))
    if isinstance(sentence, Disj):
        index = _first_true_part(sentence.parts)
        return VPair(index, phi_realizer(family_part(sentence.parts, index)))
    if isinstance(sentence, SeqMem):
        return _exists_step(sentence.expand(), seq_membership_chain(sentence))
    if isinstance(sentence, Exists):
        return _exists_step(sentence, chain)
    if isinstance(sentence, Forall):
        values = values_of_code(sentence.ctx, arg)
        return phi_realizer(substitute(sentence.body, sentence.ctx, values))
    raise stuck(f"not a formula: {sentence!r}")


@register_primitive('phi_realizer', 1)
def _prim_phi_realizer(sentence):
    return phi_realizer(sentence)


@register_primitive('open', 2)
def _prim_open(phi, code):
    """Peel one layer off a sentence: a quantifier's body at the decoded values, or an implication's consequent."""
    if isinstance(phi, Implies):
        return phi.cons
    if isinstance(phi, (Exists, Forall)):
        return substitute(phi.body, phi.ctx, values_of_code(phi.ctx, code))
    raise stuck("open expects a quantifier or an implication")


@register_primitive('rescramble', 2)
def _prim_rescramble(seed, value):
    """Re-code the witness of an ∃-realiser output with a scrambled code of the same set."""
    if isinstance(value, VPair) and isinstance(value.left, Code):
        return VPair(build_code_scrambled(decode_set(value.left), seed), value.right)
    return value


def realize_eq(x: HFSet, y: HFSet) -> Optional[Realizer]:
    return EQ_REALIZER if x == y else None


def realize_mem(x: HFSet, y: HFSet) -> Optional[Realizer]:
    return MEM_REALIZER if x in y else None


def phi_universal(phi: Formula, assignment: Optional[Mapping[int, HFSet]] = None) -> Optional[Realizer]:
    """A realiser of the sentence φ[assignment] when it is true; None when it is false."""
    sentence = substitute_map(phi, dict(assignment or {}))
    missing = free_vars(sentence)
    if missing:
        raise fail(ErrorType.UNBOUND_VARIABLE, f"no value for free variables {sorted(missing)}")
    kind = classify(sentence)
    if not kind.in_fragment:
        raise fail(ErrorType.NOT_IN_FRAGMENT, f"formula is {kind.value}, outside Δ₀ and Σ₁")
    if kind in (FormulaClass.SIGMA1_OMEGA, FormulaClass.SIGMA1_INF) and isinstance(sentence, Exists):
        values = witness_search(sentence)
        if values is None:
            logger.info("phi_universal: witness search found nothing, refusing")
            return None
        return phi_realizer(sentence, (values,))
    if not holds(sentence):
        return None
    return phi_realizer(sentence)


# -- code universes ------------------------------------------------------

class CodeUniverse:
    """The codes quantified over by the "for every code" clauses.

    Every set of V_rank (plus the transitive closures of ``extra``) comes with
    its canonical code and one scrambled code per seed. Codes of other sets are
    produced on demand, so element codes always have company.
    """

    def __init__(self, rank: Optional[int] = None, seeds: Optional[Sequence[int]] = None,
                 fuel: Optional[int] = None, extra: Sequence[HFSet] = ()):
        self.rank = config.UNIVERSE_RANK if rank is None else rank
        self.seeds = tuple(config.SCRAMBLE_SEEDS if seeds is None else seeds)
        self.fuel = config.DEFAULT_FUEL if fuel is None else fuel
        self.extra = tuple(extra)
        self._codes: Dict[HFSet, Tuple[Code, ...]] = {}
        self._candidates: Dict[Formula, List[Any]] = {}

    @cached_property
    def sets(self) -> Tuple[HFSet, ...]:
        found = {x: None for x in level(self.rank)}
        for x in self.extra:
            for y in transitive_closure(hf(x)):
                found.setdefault(y, None)
        return tuple(found)

    def codes_for(self, x: HFSet) -> Tuple[Code, ...]:
        if x not in self._codes:
            codes = [build_code(x)] + [build_code_scrambled(x, seed) for seed in self.seeds]
            unique = {code: None for code in codes}
            self._codes[x] = tuple(unique)
        return self._codes[x]

    @property
    def codes(self) -> List[Code]:
        return [code for x in self.sets for code in self.codes_for(x)]

    def is_element_closed(self) -> bool:
        members = set(self.sets)
        return all(decode_set(e) in members for code in self.codes for e in code.element_codes())

    def apply(self, r: Any, arg: Any) -> Any:
        return interpret(r, arg, self.fuel)

    def add_candidate(self, phi: Formula, r: Any) -> None:
        """Offer r to the implication clause's pool for φ (kept only if it verifies)."""
        self._candidates.setdefault(phi, []).append(r)

    def candidates(self, phi: Formula) -> List[Any]:
        return list(self._candidates.get(phi, ()))

    def instances(self, phi: Forall) -> Iterator[Tuple[Tuple[HFSet, ...], Code]]:
        """(values, code) pairs for the ∀ clause: the universe's sets plus the relevant constants."""
        context = phi.ctx
        domain = {x: None for x in self.sets}
        parts = bounded_forall_parts(phi)
        if parts is not None and isinstance(parts[1], Const):
            for x in parts[1].value.elements:
                domain.setdefault(x, None)
        else:
            for c in constants(phi.body):
                for x in transitive_closure(hf(c)):
                    domain.setdefault(x, None)
        if context.length == 1:
            tuples = [(x,) for x in domain]
        else:
            tuples = list(itertools.product(self.sets, repeat=context.length))
            if parts is not None and isinstance(parts[1], Const):
                for f in parts[1].value.elements:
                    values = seq_values(f)
                    if values is not None and len(values) == context.length and values not in tuples:
                        tuples.append(values)
        for values in tuples:
            carrier = values[0] if context.length == 1 else seq_function(values)
            for code in self.codes_for(carrier):
                yield values, code

    def __repr__(self) -> str:
        return f"CodeUniverse(rank={self.rank}, seeds={self.seeds}, sets={len(self.sets)})"


# -- verification --------------------------------------------------------

class _Refuted(Exception):
    pass


Observation = Any


class Verifier:
    """Checks r ⊩ φ; with ``uniform`` it also compares decoded outputs across codes of the same sets.

    ``check`` returns an observation (a hashable summary of what the realiser
    emits, seen through decoding) or raises ``_Refuted``.
    """

    def __init__(self, universe: CodeUniverse, uniform: bool = False):
        self.universe = universe
        self.uniform = uniform
        self._pools: Dict[Formula, List[Any]] = {}
        self._cache: Dict[Tuple, Observation] = {}

    def realizes(self, r: Any, phi: Formula) -> bool:
        try:
            self.check(r, phi)
            return True
        except _Refuted:
            return False

    def call(self, r: Any, arg: Any) -> Any:
        try:
            return self.universe.apply(r, arg)
        except RealizabilityError as e:
            if e.error_type in _REFUTING:
                raise _Refuted(str(e))
            raise

    def check(self, r: Any, phi: Formula) -> Observation:
        key = None
        if isinstance(r, Realizer):
            try:
                key = (r.program, r.parameter, phi)
                hash(key)
            except TypeError:
                key = None
        if key is not None and key in self._cache:
            result = self._cache[key]
            if result is _Refuted:
                raise _Refuted("cached")
            return result
        try:
            result = self._check(r, phi)
        except _Refuted:
            if key is not None:
                self._cache[key] = _Refuted
            raise
        if key is not None:
            self._cache[key] = result
        return result

    def _check(self, r: Any, phi: Formula) -> Observation:
        if isinstance(phi, Bottom):
            raise _Refuted("⊥ is never realised")
        if isinstance(phi, Eq):
            return self._check_eq(r, phi)
        if isinstance(phi, Mem):
            return self._check_mem(r, phi)
        if isinstance(phi, Implies):
            return self._check_implies(r, phi)
        if isinstance(phi, Disj):
            return self._check_disj(r, phi)
        if isinstance(phi, Conj):
            return self._check_conj(r, phi)
        if isinstance(phi, Exists):
            return self._check_exists(r, phi)
        if isinstance(phi, Forall):
            return self._check_forall(r, phi)
        if isinstance(phi, SeqMem):
            return self.check(r, phi.expand())
        raise TypeError(f"not a formula: {phi!r}")

    def _check_eq(self, r, phi: Eq) -> Observation:
        x, y = _constant(phi.left), _constant(phi.right)
        for a in self.universe.codes_for(x):
            for b in self.universe.codes_for(y):
                if not is_code_iso(self.call(r, VPair(a, b)), a, b):
                    raise _Refuted("output is not a code isomorphism")
        return ()

    def _check_mem(self, r, phi: Mem) -> Observation:
        x, y = _constant(phi.left), _constant(phi.right)
        for a in self.universe.codes_for(x):
            for b in self.universe.codes_for(y):
                out = self.call(r, VPair(a, b))
                if not isinstance(out, VPair) or not isinstance(out.left, int) or out.left not in b.members():
                    raise _Refuted("output does not name a member node")
                self.check(out.right, Eq(Const(x), Const(decode_set(b.at(out.left)))))
        return ()

    def _check_implies(self, r, phi: Implies) -> Observation:
        return tuple(self.check(self.call(r, s), phi.cons) for s in self.pool(phi.ant))

    def _check_disj(self, r, phi: Disj) -> Observation:
        out = self.call(r, 0)
        if not isinstance(out, VPair) or not isinstance(out.left, int) or out.left < 0:
            raise _Refuted("disjunction realiser must return (index, realiser)")
        if isinstance(phi.parts, tuple) and out.left >= len(phi.parts):
            raise _Refuted(f"disjunct {out.left} out of range")
        return out.left, self.check(out.right, family_part(phi.parts, out.left))

    def _check_conj(self, r, phi: Conj) -> Observation:
        if isinstance(phi.parts, OmegaFamily):
            span = max(config.OMEGA_PROBE, len(phi.parts.pattern))
        else:
            span = len(phi.parts)
        return tuple(self.check(self.call(r, i), family_part(phi.parts, i)) for i in range(span))

    def _check_exists(self, r, phi: Exists) -> Observation:
        out = self.call(r, 0)
        if not isinstance(out, VPair) or not isinstance(out.left, Code):
            raise _Refuted("∃-realiser must return (code, realiser)")
        try:
            values = values_of_code(phi.ctx, out.left)
        except RealizabilityError:
            raise _Refuted("witness code has the wrong shape")
        return values, self.check(out.right, substitute(phi.body, phi.ctx, values))

    def _check_forall(self, r, phi: Forall) -> Observation:
        seen: Dict[Tuple[HFSet, ...], Observation] = {}
        for values, code in self.universe.instances(phi):
            observed = self.check(self.call(r, code), substitute(phi.body, phi.ctx, values))
            if values not in seen:
                seen[values] = observed
            elif self.uniform and seen[values] != observed:
                logger.debug(f"not uniform: codes of {values} give different outputs")
                raise _Refuted("output depends on the code")
        return tuple(seen.items())

    # -- the implication clause's pool ----------------------------------

    def pool(self, phi: Formula) -> List[Any]:
        """Verified realisers of φ drawn from the candidate generators."""
        if phi not in self._pools:
            self._pools[phi] = [s for s in self._pool_candidates(phi) if self.realizes(s, phi)]
        return self._pools[phi]

    def _pool_candidates(self, phi: Formula) -> List[Any]:
        found: List[Any] = []
        try:
            if isinstance(phi, Exists) and not bounded_exists_parts(phi):
                values = witness_search(phi)
                base = phi_realizer(phi, (values,)) if values is not None else None
            else:
                base = phi_realizer(phi) if not isinstance(phi, Bottom) else None
        except RealizabilityError as e:
            if e.error_type not in _REFUTING:
                raise
            base = None
        if base is not None:
            found.append(base)
            if isinstance(phi, (Exists, SeqMem)):
                for seed in self.universe.seeds[:config.POOL_WIDTH]:
                    found.append(Realizer(RESCRAMBLED_PROGRAM, VPair(seed, base.parameter)))
        found.extend(self.universe.candidates(phi))
        found.extend([IDENTITY, constant_realizer(0)])
        return found


def _sentence(phi: Formula) -> Formula:
    missing = free_vars(phi)
    if missing:
        raise fail(ErrorType.UNBOUND_VARIABLE, f"verify needs a sentence; free variables {sorted(missing)}")
    return phi


def verify(r: Any, phi: Formula, universe: Optional[CodeUniverse] = None) -> int:
    universe = universe or CodeUniverse()
    return int(Verifier(universe).realizes(r, _sentence(phi)))


def verify_uniform(r: Any, phi: Formula, universe: Optional[CodeUniverse] = None) -> int:
    universe = universe or CodeUniverse()
    return int(Verifier(universe, uniform=True).realizes(r, _sentence(phi)))


# -- extraction ----------------------------------------------------------

def extract_disjunct(r: Any, phi: Formula, fuel: Optional[int] = None) -> Tuple[int, Any]:
    """The branch index and inner realiser of a realised disjunction."""
    if not isinstance(phi, Disj):
        raise fail(ErrorType.NOT_IN_FRAGMENT, "extract_disjunct needs a disjunction")
    out = interpret(r, 0, fuel)
    if not isinstance(out, VPair) or not isinstance(out.left, int):
        raise stuck("realiser did not return (index, realiser) on 0")
    if isinstance(phi.parts, tuple) and not 0 <= out.left < len(phi.parts):
        raise stuck(f"branch {out.left} outside the disjunction")
    return out.left, out.right


def extract_witness(r: Any, phi: Formula, fuel: Optional[int] = None) -> Tuple[Code, Tuple[HFSet, ...], Any]:
    """The witness code, its decoded values and the inner realiser of a realised ∃."""
    if not isinstance(phi, Exists):
        raise fail(ErrorType.NOT_IN_FRAGMENT, "extract_witness needs an existential")
    out = interpret(r, 0, fuel)
    if not isinstance(out, VPair) or not isinstance(out.left, Code):
        raise stuck("realiser did not return (code, realiser) on 0")
    return out.left, values_of_code(phi.ctx, out.left), out.right
