"""Acceptance suite: the nine property checks, run at desk scale.

Each criterion returns a ``CriterionResult``; ``AcceptanceSuite.run`` collects
them into a ``SuiteReport``. Instance counts are scaled by ``scale`` so that a
quick run and the full run share one code path.
"""
import logging
import random
import time
from typing import Any, Callable, Dict, List, Optional, Tuple

from axioms import axiom_formula, collection_formula, realize_axiom
from combinators import Sequent, TreeSpec, full_bar, sequent_combinator, transfinite_transitivity, tuple_realizer, walking
from config import config
from corpus import FormulaGenerator, truth_of
from error_handler import RealizabilityError
from formula import (Conj, Const, Context, Disj, Eq, Exists, Forall, Formula, Mem, Var, conj, ctx, disj, format_formula,
                     is_delta0, is_infinitary, neg, substitute)
from glued import ProvabilityOracle, Verdict, dp_extract, verify_glued
from hfset import EMPTY, HFSet, hf, level
from otm import otm_reference_suite
from realizability import (EQ_REALIZER, CodeUniverse, code_of_values, extract_disjunct, extract_witness,
                           phi_realizer, phi_universal, verify, verify_uniform)
from reports import CriterionResult, SuiteReport
from rterm import IDENTITY, VPair, constant_realizer, interpret
from set_codec import build_code, build_code_scrambled, build_iso, decode_set, is_code_iso
from tape_codec import OrdSet, bits, concat, decode_ordset, encode_ordset, parse_tape
from truth_engine import eval_bruteforce, eval_delta0

logger = logging.getLogger(__name__)

# instance counts at scale 1.0, per criterion
SIZES = {1: 1000, 3: 500, 4: 1000, 5: 500, 6: 20, 8: 100, 9: 200}

# two members with two elements each: node order and canonical order disagree on some scramble
CHOICE_FAMILY = hf(hf(EMPTY), hf(EMPTY, hf(EMPTY)))

Var0, Var1 = Var(0), Var(1)


class _Failures:
    def __init__(self):
        self.items: List[str] = []
        self.checked = 0

    def check(self, ok: bool, description: str) -> None:
        self.checked += 1
        if not ok:
            self.items.append(description)


class AcceptanceSuite:
    """Runs the acceptance criteria with a fixed seed; identical arguments give identical reports."""

    def __init__(self, rank: Optional[int] = None, seed: int = 0, scale: float = 1.0):
        self.rank = config.UNIVERSE_RANK if rank is None else rank
        self.seed = seed
        self.scale = scale
        self.universe = CodeUniverse(self.rank)

    def size(self, number: int) -> int:
        return max(1, int(SIZES[number] * self.scale))

    def rng(self, number: int) -> random.Random:
        return random.Random(self.seed * 100 + number)

    def criteria(self) -> Dict[int, Tuple[str, Callable[[_Failures], None]]]:
        return {
            1: ("low-level coding fidelity", self.check_tape_coding),
            2: ("machine-level membership and append", self.check_machines),
            3: ("high-level coding", self.check_set_codes),
            4: ("Δ₀ truth engine", self.check_truth_engine),
            5: ("universal program", self.check_universal_program),
            6: ("sequent combinators", self.check_combinators),
            7: ("axioms", self.check_axioms),
            8: ("extraction", self.check_extraction),
            9: ("glued coherence", self.check_glued),
        }

    def run(self, only: Optional[List[int]] = None, stable: Optional[bool] = None) -> SuiteReport:
        stable = config.STABLE_REPORTS if stable is None else stable
        report = SuiteReport(rank=self.rank)
        for number, (title, check) in self.criteria().items():
            if only and number not in only:
                continue
            logger.info(f"criterion {number}: {title}")
            failures = _Failures()
            started = time.time()
            try:
                check(failures)
            except RealizabilityError as e:
                failures.items.append(f"aborted: {e}")
            result = CriterionResult(number=number, title=title, passed=not failures.items,
                                     checked=failures.checked, failures=failures.items)
            if not stable:
                result.seconds = round(time.time() - started, 3)
            logger.info(f"criterion {number}: {'passed' if result.passed else 'FAILED'} "
                        f"({failures.checked} checks)")
            report.criteria.append(result)
        return report

    # -- 1: tape codes ---------------------------------------------------

    def check_tape_coding(self, out: _Failures) -> None:
        expected = [
            ('the empty set', OrdSet.of([]), bits('011')),
            ('{0}', OrdSet.of([0]), bits('01011')),
            ('ω', OrdSet.omega(), parse_tape('(01)^w011')),
        ]
        for name, ordset, tape in expected:
            out.check(encode_ordset(ordset) == tape, f"code of {name} is not bit-exact")
        rng = self.rng(1)
        for _ in range(self.size(1)):
            if rng.random() < 0.1:
                ordset = OrdSet.omega()
            else:
                ordset = OrdSet.of(rng.sample(range(10), rng.randint(0, 4)))
            tail = bits(''.join(rng.choice('01') for _ in range(rng.randint(0, 12))))
            out.check(decode_ordset(concat(encode_ordset(ordset), tail)) == ordset,
                      f"tail extension changed the decoding of {ordset}")

    # -- 2: machines -----------------------------------------------------

    def check_machines(self, out: _Failures) -> None:
        report = otm_reference_suite(member_size=8)
        for operation, cases in report.disagreements.items():
            for case in cases:
                out.items.append(f"{operation} on {case.input}: host {case.expected}, machine {case.got}")
        out.checked += sum(report.checked.values())
        logger.info(f"machine agreement: {report.summary()}")

    # -- 3: set codes ----------------------------------------------------

    def check_set_codes(self, out: _Failures) -> None:
        small = level(4)
        for x in small:
            out.check(decode_set(build_code(x)) == x, f"round trip failed on {x}")
            for seed in config.SCRAMBLE_SEEDS:
                out.check(decode_set(build_code_scrambled(x, seed)) == x, f"scrambled round trip failed on {x}")
        rng = self.rng(3)
        sample = [HFSet(s for s in small if rng.random() < 0.5) for _ in range(self.size(3))]
        for x in sample:
            out.check(decode_set(build_code_scrambled(x, rng.randint(0, 7))) == x, f"round trip failed on {x}")
        for _ in range(self.size(3)):
            x = rng.choice(sample)
            y = x if rng.random() < 0.5 else rng.choice(sample)
            a = build_code_scrambled(x, rng.randint(0, 7))
            b = build_code_scrambled(y, rng.randint(0, 7))
            iso = build_iso(a, b)
            out.check((iso is not None) == (x == y), f"build_iso disagrees with equality on {x}, {y}")
            if iso is not None:
                out.check(is_code_iso(iso, a, b), f"build_iso returned a non-isomorphism on {x}")

    # -- 4: truth --------------------------------------------------------

    def check_truth_engine(self, out: _Failures) -> None:
        generator = FormulaGenerator(self.seed, 2, 2)
        for _ in range(self.size(4)):
            phi = generator.delta0_sentence()
            out.check(eval_delta0(phi) == eval_bruteforce(phi),
                      f"code-level and brute-force truth differ on {format_formula(phi)}")

    # -- 5: the universal program ----------------------------------------

    def check_universal_program(self, out: _Failures) -> None:
        generator = FormulaGenerator(self.seed + 5, 2, 2)
        for _ in range(self.size(5)):
            phi = generator.sentence()
            r = phi_universal(phi)
            text = format_formula(phi)
            out.check((r is not None) == bool(truth_of(phi)), f"phi_universal disagrees with truth on {text}")
            if r is None:
                continue
            out.check(verify(r, phi, self.universe) == 1, f"universal realiser does not verify on {text}")
            if is_delta0(phi):
                out.check(verify_uniform(r, phi, self.universe) == 1, f"Δ₀ realiser is not uniform on {text}")

    # -- 6: combinators --------------------------------------------------

    def _true_sentences(self, rng: random.Random, count: int) -> List[Formula]:
        generator = FormulaGenerator(rng.randint(0, 1 << 30), 1, 2)
        found: List[Formula] = []
        while len(found) < count:
            phi = generator.delta0_sentence()
            if eval_delta0(phi):
                found.append(phi)
        return found

    def _sentences(self, rng: random.Random, count: int) -> List[Formula]:
        generator = FormulaGenerator(rng.randint(0, 1 << 30), 1, 2)
        return [generator.delta0_sentence() for _ in range(count)]

    def check_combinators(self, out: _Failures) -> None:
        rng = self.rng(6)
        sets = level(3)
        for _ in range(self.size(6)):
            phi, psi, theta = self._sentences(rng, 3)
            t0, t1, t2 = self._true_sentences(rng, 3)
            r0, r1, r2 = (phi_realizer(t) for t in (t0, t1, t2))
            c, s = rng.choice(sets), rng.choice(sets)
            body = Mem(Var0, Const(c))
            one = ctx(0)
            weak = lambda r, n=0: sequent_combinator('weaken', [r], {'context': n})
            j = rng.randint(0, 1)
            instances = [
                ('identity', sequent_combinator('identity'), Sequent(Context(()), phi, phi)),
                ('identity', sequent_combinator('identity', side={'context': 1}), Sequent(one, body, body)),
                ('substitution',
                 sequent_combinator('substitution', [sequent_combinator('identity', side={'context': 1})],
                                    {'source': 1, 'context': 0, 'terms': (s,)}),
                 Sequent(Context(()), Mem(Const(s), Const(c)), Mem(Const(s), Const(c)))),
                ('cut', sequent_combinator('cut', [weak(r1), weak(r2)]), Sequent(Context(()), phi, t2)),
                ('eq_refl', sequent_combinator('eq_refl', side={'context': 1}),
                 Sequent(one, phi, Eq(Var0, Var0))),
                ('eq_subst', sequent_combinator('eq_subst', side={'context': 2}),
                 Sequent(ctx(0, 1), conj(Eq(Var0, Var1), body), Mem(Var1, Const(c)))),
                ('conj_elim', sequent_combinator('conj_elim', side={'index': j}),
                 Sequent(Context(()), conj(phi, psi), (phi, psi)[j])),
                ('conj_intro', sequent_combinator('conj_intro', [weak(r0), weak(r1)]),
                 Sequent(Context(()), phi, conj(t0, t1))),
                ('disj_intro', sequent_combinator('disj_intro', side={'index': j}),
                 Sequent(Context(()), (phi, psi)[j], disj(phi, psi))),
                ('disj_elim', sequent_combinator('disj_elim', [weak(r2), weak(r2)]),
                 Sequent(Context(()), disj(phi, psi), t2)),
                ('imp_curry', sequent_combinator('imp_curry', [weak(r2)]),
                 Sequent(Context(()), phi, Sequent(Context(()), psi, t2).formula())),
                ('imp_uncurry', sequent_combinator('imp_uncurry', [weak(weak(r2))]),
                 Sequent(Context(()), conj(phi, psi), t2)),
                ('exists_lift', sequent_combinator('exists_lift', [weak(r0, 1)], {'split': (0, 1)}),
                 Sequent(Context(()), Exists(one, body), t0)),
                ('exists_lower', sequent_combinator('exists_lower', [weak(r0)], {'split': (0, 1)}),
                 Sequent(one, body, t0)),
                ('forall_lift',
                 sequent_combinator('forall_lift', [sequent_combinator('eq_refl', side={'context': 1})],
                                    {'split': (0, 1)}),
                 Sequent(Context(()), phi, Forall(one, Eq(Var0, Var0)))),
                ('forall_lower',
                 sequent_combinator('forall_lower', [weak(phi_realizer(Forall(one, Eq(Var0, Var0))))],
                                    {'split': (0, 1)}),
                 Sequent(one, phi, Eq(Var0, Var0))),
                ('small_distributivity', sequent_combinator('small_distributivity', side={'count': 2}),
                 Sequent(Context(()), conj(disj(phi, psi), disj(phi, theta)), disj(phi, conj(psi, theta)))),
            ]
            for rule, r, sequent in instances:
                goal = sequent.formula()
                out.check(verify(r, goal, self.universe) == 1,
                          f"{rule} conclusion does not verify: {format_formula(goal)}")
        self._check_trees(rng, out)

    def _check_trees(self, rng: random.Random, out: _Failures) -> None:
        gamma, depth = 2, 2
        bar = full_bar(gamma, depth)
        nodes = [()] + [f[:k] for f in bar for k in (1, 2)]
        truths = self._true_sentences(rng, len(nodes))
        phis = {node: truths[i] for i, node in enumerate(dict.fromkeys(nodes))}
        tree = TreeSpec(gamma, depth, bar)
        internal = [node for node in phis if len(node) < depth]

        successor = {f: sequent_combinator('weaken', [phi_realizer(phis[f])]) for f in internal}
        entries, parts = [], []
        for f in tree.sorted_bar:
            beta = rng.randrange(len(f))
            entries.append(constant_realizer(VPair(beta, phi_realizer(phis[f[:beta + 1]]))))
            parts.append(Disj(tuple(phis[f[:b + 1]] for b in range(len(f)))))
        r = tuple_realizer(entries)
        out.check(verify(r, Conj(tuple(parts)), self.universe) == 1, "walking input does not verify")
        out.check(verify(walking(r, tree, successor), phis[()], self.universe) == 1,
                  "walking result does not verify at the root")

        empty = code_of_values(Context(()), ())
        steps = {}
        for f in internal:
            c = rng.randrange(gamma)
            inner = constant_realizer(VPair(empty, phi_realizer(phis[f + (c,)])))
            steps[f] = sequent_combinator('weaken', [constant_realizer(VPair(c, inner))])
        goal = Disj(tuple(Exists(Context(()), Conj(tuple(phis[f[:b + 1]] for b in range(len(f)))))
                          for f in tree.sorted_bar))
        result = transfinite_transitivity(phi_realizer(phis[()]), tree, steps)
        out.check(verify(result, goal, self.universe) == 1, "transfinite transitivity result does not verify")

    # -- 7: axioms -------------------------------------------------------

    def check_axioms(self, out: _Failures) -> None:
        universe = CodeUniverse(max(self.rank, 3), extra=(CHOICE_FAMILY,))
        instances = {
            'induction': (neg(Mem(Var0, Var0)), ()),
            'delta0-separation': (Mem(Const(EMPTY), Var0), ()),
            'delta0-collection': (Mem(Var0, Var1), ()),
        }
        for name in ('extensionality', 'empty-set', 'pairing', 'union', 'induction', 'delta0-separation',
                     'delta0-collection', 'weak-choice', 'regularity', 'choice', 'well-ordering'):
            formula, variables = instances.get(name, (None, ()))
            phi = axiom_formula(name, formula, variables)
            r = realize_axiom(name, formula, variables)
            out.check(verify(r, phi, universe) == 1, f"{name} realiser does not verify")
        out.check(verify_uniform(realize_axiom('weak-choice'), axiom_formula('weak-choice'), universe) == 1,
                  "weak choice realiser is not uniform")
        out.check(verify(realize_axiom('choice'), axiom_formula('choice'), universe) == 1
                  and verify_uniform(realize_axiom('choice'), axiom_formula('choice'), universe) == 0,
                  "choice realiser passed the uniform check on a scrambled family")

        a, b = build_code(EMPTY), build_code(hf(EMPTY))
        pair = interpret(interpret(interpret(realize_axiom('pairing'), a), b), 0)
        out.check(decode_set(pair.left) == hf(EMPTY, hf(EMPTY)), "pairing on ∅, {∅} decodes wrongly")
        nested = build_code(hf(hf(EMPTY), hf(hf(EMPTY))))
        union = interpret(interpret(realize_axiom('union'), nested), 0)
        out.check(decode_set(union.left) == hf(EMPTY, hf(EMPTY)), "union of {{∅},{{∅}}} decodes wrongly")
        separated = interpret(interpret(realize_axiom('delta0-separation', Mem(Const(EMPTY), Var0)),
                                        build_code(hf(EMPTY, hf(EMPTY), hf(hf(EMPTY))))), 0)
        out.check(decode_set(separated.left) == hf(hf(EMPTY)), "separation by ∅ ∈ x decodes wrongly")
        premise_set = hf(EMPTY, hf(EMPTY))
        phi = collection_formula(Mem(Var0, Var1))
        premise = substitute(phi.body, phi.ctx, (premise_set,)).ant
        collected = interpret(interpret(interpret(realize_axiom('delta0-collection', Mem(Var0, Var1)),
                                                  build_code(premise_set)), phi_realizer(premise)), 0)
        bound = decode_set(collected.left)
        out.check(all(any(x in y for y in bound.elements) for x in premise_set.elements),
                  "collection bound misses an element's witness")

    # -- 8: extraction ---------------------------------------------------

    def check_extraction(self, out: _Failures) -> None:
        rng = self.rng(8)
        for _ in range(self.size(8)):
            parts = tuple(self._sentences(rng, 2))
            if not any(eval_delta0(p) for p in parts):
                parts = parts[:1] + tuple(self._true_sentences(rng, 1))
            phi = Disj(parts)
            r = phi_universal(phi)
            index, inner = extract_disjunct(r, phi)
            out.check(verify(inner, parts[index], self.universe) == 1,
                      f"extracted branch does not verify on {format_formula(phi)}")
            if is_infinitary(phi):
                continue
            oracle = ProvabilityOracle([phi])
            if verify_glued(r, phi, oracle, self.universe) == 1:
                index, inner = dp_extract(r, phi, oracle, universe=self.universe)
                out.check(verify_glued(inner, parts[index], oracle, self.universe) == 1,
                          f"glued branch does not re-verify on {format_formula(phi)}")
        generator = FormulaGenerator(self.seed + 8, 1, 2)
        found = 0
        while found < self.size(8):
            phi = generator.sigma1_sentence()
            r = phi_universal(phi)
            if r is None:
                continue
            found += 1
            _, values, _ = extract_witness(r, phi)
            out.check(eval_bruteforce(substitute(phi.body, phi.ctx, values)) == 1,
                      f"extracted witness does not satisfy {format_formula(phi)}")

    # -- 9: glued --------------------------------------------------------

    def check_glued(self, out: _Failures) -> None:
        generator = FormulaGenerator(self.seed + 9, 1, 2)
        pairs: List[Tuple[Any, Formula]] = []
        while len(pairs) < self.size(9):
            phi = generator.sentence()
            if is_infinitary(phi):
                continue
            r = phi_universal(phi)
            pairs.append((r if r is not None else IDENTITY, phi))
            pairs.append((EQ_REALIZER if len(pairs) // 2 % 2 else constant_realizer(0), phi))
        stages = [pairs[i::3] for i in range(3)]
        oracle = ProvabilityOracle()
        accepted: Dict[int, int] = {}
        proved = set()
        for stage, batch in enumerate(stages):
            oracle.add(*[phi for _, phi in batch if truth_of(phi)])
            for phi in list(proved):
                out.check(oracle.proves(phi) is Verdict.YES, f"stage {stage} lost a theorem")
            for i, (r, phi) in enumerate(pairs):
                glued = verify_glued(r, phi, oracle, self.universe)
                if glued == 1:
                    out.check(verify(r, phi, self.universe) == 1,
                              f"glued-accepted pair is not plainly realised: {format_formula(phi)}")
                    if oracle.proves(phi) is Verdict.YES:
                        proved.add(phi)
                if accepted.get(i) == 1:
                    out.check(glued == 1, f"stage {stage} dropped an accepted pair: {format_formula(phi)}")
                accepted[i] = glued
