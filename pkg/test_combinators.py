import pytest

from combinators import (RULES, Sequent, TreeSpec, full_bar, sequent_combinator, transfinite_transitivity,
                         tuple_realizer, walking)
from error_handler import ErrorType, RealizabilityError
from formula import Conj, Const, Context, Disj, Eq, Exists, Forall, Implies, Mem, Var, conj, ctx, disj, parse_formula
from hfset import EMPTY, hf
from realizability import code_of_values, phi_realizer, verify
from rterm import IDENTITY, Interpreter, VPair, constant_realizer
from set_codec import decode_set

PHI = parse_formula('(mem {} {{}})')
PSI = parse_formula('(eq {} {{}})')
TRUE = parse_formula('(eq {{}} {{}})')
NONE = Context(())
ONE = ctx(0)
BODY = Mem(Var(0), Const(hf(EMPTY, hf(EMPTY))))


def weak(r, n=0):
    return sequent_combinator('weaken', [r], {'context': n})


def instances():
    rp, rt = phi_realizer(PHI), phi_realizer(TRUE)
    return [
        ('identity', sequent_combinator('identity'), Sequent(NONE, PSI, PSI)),
        ('identity', sequent_combinator('identity', side={'context': 1}), Sequent(ONE, BODY, BODY)),
        ('substitution',
         sequent_combinator('substitution', [sequent_combinator('identity', side={'context': 1})],
                            {'source': 1, 'context': 0, 'terms': (EMPTY,)}),
         Sequent(NONE, Mem(Const(EMPTY), Const(hf(EMPTY))), Mem(Const(EMPTY), Const(hf(EMPTY))))),
        ('cut', sequent_combinator('cut', [weak(rp), weak(rt)]), Sequent(NONE, PHI, TRUE)),
        ('eq_refl', sequent_combinator('eq_refl', side={'context': 1}), Sequent(ONE, PHI, Eq(Var(0), Var(0)))),
        ('eq_subst', sequent_combinator('eq_subst', side={'context': 2}),
         Sequent(ctx(0, 1), conj(Eq(Var(0), Var(1)), BODY), Mem(Var(1), BODY.right))),
        ('conj_elim', sequent_combinator('conj_elim', side={'index': 1}), Sequent(NONE, conj(TRUE, PHI), PHI)),
        ('conj_intro', sequent_combinator('conj_intro', [weak(rp), weak(rt)]), Sequent(NONE, PHI, conj(PHI, TRUE))),
        ('disj_intro', sequent_combinator('disj_intro', side={'index': 0}), Sequent(NONE, PHI, disj(PHI, PSI))),
        ('disj_elim', sequent_combinator('disj_elim', [weak(rt), weak(rt)]), Sequent(NONE, disj(PSI, PHI), TRUE)),
        ('imp_curry', sequent_combinator('imp_curry', [weak(rt)]),
         Sequent(NONE, PHI, Sequent(NONE, TRUE, TRUE).formula())),
        ('imp_uncurry', sequent_combinator('imp_uncurry', [weak(weak(rt))]), Sequent(NONE, conj(PHI, TRUE), TRUE)),
        ('exists_lift', sequent_combinator('exists_lift', [weak(rt, 1)], {'split': (0, 1)}),
         Sequent(NONE, Exists(ONE, BODY), TRUE)),
        ('exists_lower', sequent_combinator('exists_lower', [weak(rt)], {'split': (0, 1)}),
         Sequent(ONE, BODY, TRUE)),
        ('forall_lift', sequent_combinator('forall_lift', [sequent_combinator('eq_refl', side={'context': 1})],
                                           {'split': (0, 1)}),
         Sequent(NONE, PHI, Forall(ONE, Eq(Var(0), Var(0))))),
        ('forall_lower', sequent_combinator('forall_lower', [weak(phi_realizer(Forall(ONE, Eq(Var(0), Var(0)))))],
                                            {'split': (0, 1)}),
         Sequent(ONE, PHI, Eq(Var(0), Var(0)))),
        ('small_distributivity', sequent_combinator('small_distributivity', side={'count': 2}),
         Sequent(NONE, conj(disj(PHI, PSI), disj(PHI, TRUE)), disj(PHI, conj(PSI, TRUE)))),
        ('small_distributivity', sequent_combinator('small_distributivity', side={'count': 2}),
         Sequent(NONE, conj(disj(PSI, PHI), disj(PSI, TRUE)), disj(PSI, conj(PHI, TRUE)))),
        ('weaken', weak(rt), Sequent(NONE, PHI, TRUE)),
    ]


class TestRules:
    @pytest.mark.parametrize('index', range(len(instances())))
    def test_conclusion_verifies(self, universe, index):
        rule, r, sequent = instances()[index]
        assert verify(r, sequent.formula(), universe) == 1, rule

    def test_every_rule_is_exercised(self):
        assert {rule for rule, _, _ in instances()} == set(RULES)

    def test_sequent_formula(self):
        assert Sequent(NONE, PHI, PSI).formula() == Implies(PHI, PSI)
        assert Sequent(ONE, PHI, PSI).formula() == Forall(ONE, Implies(PHI, PSI))

    def test_identity_does_not_prove_falsehoods(self, universe):
        assert verify(sequent_combinator('identity'), Implies(PHI, PSI), universe) == 0

    def test_unknown_rule(self):
        with pytest.raises(RealizabilityError) as info:
            sequent_combinator('modus_tollens')
        assert info.value.error_type == ErrorType.UNKNOWN_RULE

    @pytest.mark.parametrize('rule,premises,side', [
        ('cut', [IDENTITY], {}),
        ('conj_intro', [], {}),
        ('substitution', [IDENTITY], {'source': 2, 'terms': (EMPTY,)}),
    ])
    def test_arity(self, rule, premises, side):
        with pytest.raises(RealizabilityError) as info:
            sequent_combinator(rule, premises, side)
        assert info.value.error_type == ErrorType.ARITY_MISMATCH

    def test_context_split_and_join(self):
        a, b = EMPTY, hf(EMPTY)
        interp = Interpreter()
        halves = interp.call_primitive('split', [VPair(1, 1), code_of_values(ctx(0, 1), (a, b))])
        assert decode_set(halves.left) == a and decode_set(halves.right) == b
        joined = interp.call_primitive('join', [VPair(1, 1), halves.left, halves.right])
        assert joined == code_of_values(ctx(0, 1), (a, b))


class TestTrees:
    def test_full_bar(self):
        assert full_bar(2, 2) == ((0, 0), (0, 1), (1, 0), (1, 1))
        assert full_bar(3, 0) == ((),)

    def test_walking(self, universe):
        tree = TreeSpec(2, 1, full_bar(2, 1))
        leaves = {(0,): PHI, (1,): TRUE}
        entries = [constant_realizer(VPair(0, phi_realizer(leaves[f]))) for f in tree.sorted_bar]
        r = tuple_realizer(entries)
        assert verify(r, Conj(tuple(Disj((leaves[f],)) for f in tree.sorted_bar)), universe) == 1
        root = walking(r, tree, {(): weak(phi_realizer(TRUE))})
        assert verify(root, TRUE, universe) == 1

    def test_walking_through_a_limit_node(self, universe):
        tree = TreeSpec(1, 2, ((0, 0),), is_limit=lambda node: node == (0,))
        r = tuple_realizer([constant_realizer(VPair(1, phi_realizer(PHI)))])
        successor = {(0,): weak(phi_realizer(TRUE))}
        limit = {(0,): constant_realizer(VPair(0, phi_realizer(PHI)))}
        root = walking(r, tree, successor, limit)
        assert verify(root, PHI, universe) == 1

    def test_bar_must_cover(self):
        tree = TreeSpec(2, 1, ((0,),))
        r = tuple_realizer([constant_realizer(VPair(0, phi_realizer(PHI)))])
        with pytest.raises(RealizabilityError) as info:
            walking(r, tree, {(): weak(phi_realizer(PHI))})
        assert info.value.error_type == ErrorType.BAR_NOT_COVERING

    def test_missing_premise_is_stuck(self):
        tree = TreeSpec(2, 1, full_bar(2, 1))
        r = tuple_realizer([constant_realizer(VPair(0, phi_realizer(PHI)))] * 2)
        with pytest.raises(RealizabilityError) as info:
            walking(r, tree, {})
        assert info.value.error_type == ErrorType.STUCK_TERM

    def test_transfinite_transitivity(self, universe):
        tree = TreeSpec(2, 1, full_bar(2, 1))
        empty = code_of_values(NONE, ())
        inner = constant_realizer(VPair(empty, phi_realizer(TRUE)))
        steps = {(): weak(constant_realizer(VPair(1, inner)))}
        result = transfinite_transitivity(phi_realizer(PHI), tree, steps)
        goal = Disj((Exists(NONE, Conj((PSI,))), Exists(NONE, Conj((TRUE,)))))
        assert verify(result, goal, universe) == 1

    def test_transitivity_with_the_bar_at_the_root(self):
        r0 = phi_realizer(PHI)
        assert transfinite_transitivity(r0, TreeSpec(2, 1, ((),)), {}) == r0
