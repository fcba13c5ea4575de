"""Deterministic corpora of Δ₀ and Σ₁ sentences with their classification labels."""
import logging
import os
import random
from typing import List, Optional, Sequence

from config import config
from error_handler import ErrorSeverity, ErrorType, fail
from formula import (Bottom, Conj, Const, Context, Disj, Eq, Exists, Formula, Implies, Mem, OmegaFamily, Term, Var,
                     bounded_exists1, bounded_forall1, classify, format_formula, is_delta0, parse_formula)
from hfset import level
from reports import CorpusEntry
from truth_engine import eval_bruteforce, eval_delta0

logger = logging.getLogger(__name__)

# one sentence per connective, ahead of the random part
TEMPLATES = (
    '(bot)',
    '(mem {} {{}})',
    '(eq {} {})',
    '(imp (mem {} {}) (bot))',
    '(and (eq {} {}) (mem {} {{}}))',
    '(or (bot) (eq {} {}))',
    '(and* (eq {} {}))',
    '(or* (bot) (eq {{}} {{}}))',
    '(all (x0) (imp (mem x0 {{}}) (eq x0 {})))',
    '(ex (x0) (and (mem x0 {{}}) (eq x0 {})))',
    '(ex (x0) (eq x0 {{}}))',
    '(ex (x0 x1) (and (mem x0 x1) (eq x1 {{}})))',
    '(seqmem ({} {}) {})',
)


class FormulaGenerator:
    """Random sentences over the sets of V_rank; every quantifier is bounded except a leading ∃."""

    def __init__(self, seed: int, depth: int, rank: int):
        self.random = random.Random(seed)
        self.depth = depth
        self.sets = level(rank)
        self._next = 0

    def fresh(self) -> int:
        index = self._next
        self._next += 1
        return index

    def term(self, scope: Sequence[int]) -> Term:
        if scope and self.random.random() < 0.6:
            return Var(self.random.choice(list(scope)))
        return Const(self.random.choice(self.sets))

    def atom(self, scope: Sequence[int]) -> Formula:
        roll = self.random.random()
        if roll < 0.05:
            return Bottom()
        if roll < 0.6:
            return Mem(self.term(scope), self.term(scope))
        return Eq(self.term(scope), self.term(scope))

    def delta0(self, depth: int, scope: Sequence[int] = ()) -> Formula:
        if depth <= 0:
            return self.atom(scope)
        kind = self.random.choice(('atom', 'imp', 'and', 'or', 'all', 'ex', 'omega'))
        if kind == 'atom':
            return self.atom(scope)
        if kind == 'imp':
            return Implies(self.delta0(depth - 1, scope), self.delta0(depth - 1, scope))
        if kind in ('and', 'or'):
            parts = tuple(self.delta0(depth - 1, scope) for _ in range(self.random.randint(0, 3)))
            return Conj(parts) if kind == 'and' else Disj(parts)
        if kind == 'omega':
            pattern = tuple(self.delta0(depth - 1, scope) for _ in range(self.random.randint(1, 2)))
            return Conj(OmegaFamily(pattern)) if self.random.random() < 0.5 else Disj(OmegaFamily(pattern))
        bound = self.term(scope)
        x = self.fresh()
        body = self.delta0(depth - 1, tuple(scope) + (x,))
        return bounded_forall1(x, bound, body) if kind == 'all' else bounded_exists1(x, bound, body)

    def sigma1(self, depth: int) -> Formula:
        length = 1 if self.random.random() < 0.8 else 2
        context = Context(tuple(self.fresh() for _ in range(length)))
        return Exists(context, self.delta0(depth, context.vars))

    def delta0_sentence(self) -> Formula:
        self._next = 0
        return self.delta0(self.depth)

    def sigma1_sentence(self) -> Formula:
        self._next = 0
        return self.sigma1(self.depth)

    def sentence(self) -> Formula:
        if self.random.random() < 0.6:
            return self.delta0_sentence()
        return self.sigma1_sentence()


def truth_of(phi: Formula) -> int:
    """Δ₀ truth is absolute; anything else is evaluated over V_WITNESS_RANK, where witness search looks."""
    if is_delta0(phi):
        return eval_delta0(phi)
    return eval_bruteforce(phi, level(config.WITNESS_RANK))


def corpus_generate(seed: int = 0, depth: int = 2, rank: int = 2, count: int = 50,
                    with_templates: bool = True) -> List[CorpusEntry]:
    if depth < 0 or rank < 1 or count < 0:
        raise fail(ErrorType.USAGE, "corpus needs depth >= 0, rank >= 1 and count >= 0", ErrorSeverity.LOW)
    generator = FormulaGenerator(seed, depth, rank)
    formulas = [parse_formula(t) for t in TEMPLATES] if with_templates else []
    formulas += [generator.sentence() for _ in range(count)]
    entries = [CorpusEntry(formula=format_formula(phi), label=classify(phi).value, truth=truth_of(phi))
               for phi in formulas]
    logger.info(f"generated {len(entries)} corpus sentences (seed {seed}, depth {depth}, rank {rank})")
    return entries


def write_corpus(entries: Sequence[CorpusEntry], path: Optional[str] = None) -> str:
    """``label<TAB>truth<TAB>formula`` per line."""
    path = path or os.path.join(config.OUTPUT_DIR, 'corpus.tsv')
    os.makedirs(os.path.dirname(path) or '.', exist_ok=True)
    with open(path, 'w') as f:
        for entry in entries:
            f.write(f"{entry.label}\t{entry.truth}\t{entry.formula}\n")
    return path


def read_corpus(path: str) -> List[CorpusEntry]:
    entries = []
    with open(path, 'r') as f:
        for line in f:
            if not line.strip():
                continue
            label, truth, formula = line.rstrip('\n').split('\t', 2)
            entries.append(CorpusEntry(formula=formula, label=label, truth=int(truth)))
    return entries
