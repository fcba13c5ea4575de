"""Glued realisability relative to a background theory.

The glued relation changes two clauses of plain realisability: an implication
φ → ψ and a universal ∀x̄ φ are realised only if the theory also proves them.
The theory is a ``ProvabilityOracle``: a finite database of sentences closed
under a few rounds of conjunction elimination, modus ponens, cut and
instantiation at constants, with true Δ₀ sentences answered from the
elementary diagram.
"""
import logging
import os
from enum import Enum
from typing import Any, Iterable, List, Optional, Set, Tuple

from config import config
from error_handler import ErrorSeverity, ErrorType, fail
from formula import (Conj, Eq, Forall, Formula, Implies, constants, free_vars, is_delta0, is_infinitary,
                     parse_formula, substitute)
from hfset import EMPTY, HFSet
from realizability import CodeUniverse, Verifier, _Refuted, _sentence, extract_disjunct
from truth_engine import eval_delta0

logger = logging.getLogger(__name__)


class Verdict(Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


class ProvabilityOracle:
    """Answers "T ⊢ φ" with yes, no or unknown; the database only grows."""

    def __init__(self, formulas: Iterable[Formula] = (), rounds: Optional[int] = None):
        self.rounds = config.ORACLE_ROUNDS if rounds is None else rounds
        self.axioms: List[Formula] = []
        self.closure: Set[Formula] = set()
        self.add(*formulas)

    @classmethod
    def from_file(cls, path: Optional[str] = None, rounds: Optional[int] = None) -> 'ProvabilityOracle':
        """One formula per line; blank lines and lines starting with ``;`` are skipped."""
        path = path or config.ORACLE_FILE
        if not os.path.exists(path):
            raise fail(ErrorType.FILE_SYSTEM, f"oracle database not found: {path}", ErrorSeverity.HIGH,
                       path=path)
        with open(path, 'r') as f:
            lines = [line.strip() for line in f]
        formulas = [parse_formula(line) for line in lines if line and not line.startswith(';')]
        logger.info(f"loaded {len(formulas)} oracle axioms from {path}")
        return cls(formulas, rounds)

    def add(self, *formulas: Formula) -> None:
        for phi in formulas:
            if free_vars(phi):
                raise fail(ErrorType.UNBOUND_VARIABLE, "oracle axioms must be sentences")
            self.axioms.append(phi)
        self.closure |= set(formulas)
        self._saturate()

    def _witnesses(self) -> Set[HFSet]:
        found = {EMPTY}
        for phi in self.closure:
            found |= constants(phi)
        return found

    def _saturate(self) -> None:
        for round_number in range(self.rounds):
            new: Set[Formula] = set()
            implications = [phi for phi in self.closure if isinstance(phi, Implies)]
            witnesses = self._witnesses()
            for phi in self.closure:
                if isinstance(phi, Conj) and isinstance(phi.parts, tuple):
                    new.update(phi.parts)
                elif isinstance(phi, Implies) and phi.ant in self.closure:
                    new.add(phi.cons)
                elif isinstance(phi, Forall) and phi.ctx.length == 1:
                    new.update(substitute(phi.body, phi.ctx, (c,)) for c in witnesses)
            for first in implications:
                for second in implications:
                    if first.cons == second.ant:
                        new.add(Implies(first.ant, second.cons))
            new -= self.closure
            if not new:
                break
            self.closure |= new
            logger.debug(f"saturation round {round_number}: {len(new)} new theorems")

    def proves(self, phi: Formula) -> Verdict:
        if phi in self.closure:
            return Verdict.YES
        if isinstance(phi, Implies) and (phi.ant == phi.cons or phi.cons in self.closure):
            return Verdict.YES
        if isinstance(phi, Eq) and phi.left == phi.right:
            return Verdict.YES
        if isinstance(phi, Conj) and isinstance(phi.parts, tuple):
            verdicts = [self.proves(p) for p in phi.parts]
            if all(v is Verdict.YES for v in verdicts):
                return Verdict.YES
        if not free_vars(phi) and is_delta0(phi):
            # the elementary diagram: true Δ₀ sentences are theorems, false ones are refuted
            return Verdict.YES if eval_delta0(phi) else Verdict.NO
        return Verdict.UNKNOWN


class _GluedVerifier(Verifier):
    """Plain verification plus the provability conjuncts of the implication and universal clauses.

    The implication clause ranges over the plain pool.
    """

    def __init__(self, universe: CodeUniverse, oracle: ProvabilityOracle):
        super().__init__(universe)
        self.oracle = oracle
        self.plain = Verifier(universe)
        self.unknown = False

    def pool(self, phi: Formula) -> List[Any]:
        return self.plain.pool(phi)

    def _require(self, phi: Formula) -> None:
        verdict = self.oracle.proves(phi)
        if verdict is Verdict.YES:
            return
        if verdict is Verdict.UNKNOWN:
            self.unknown = True
            logger.debug("oracle cannot decide a glued side condition")
        raise _Refuted(f"theory does not prove the {type(phi).__name__.lower()}")

    def _check_implies(self, r, phi: Implies):
        self._require(phi)
        return super()._check_implies(r, phi)

    def _check_forall(self, r, phi: Forall):
        self._require(phi)
        return super()._check_forall(r, phi)


def verify_glued(r: Any, phi: Formula, oracle: ProvabilityOracle,
                 universe: Optional[CodeUniverse] = None) -> Optional[int]:
    """1 or 0, or None when an unanswered oracle query blocked acceptance."""
    sentence = _sentence(phi)
    if is_infinitary(sentence):
        raise fail(ErrorType.NOT_IN_FRAGMENT, "glued realisability is defined for finitary formulas only")
    verifier = _GluedVerifier(universe or CodeUniverse(), oracle)
    if verifier.realizes(r, sentence):
        return 1
    return None if verifier.unknown else 0


def dp_extract(r: Any, phi: Formula, oracle: ProvabilityOracle, fuel: Optional[int] = None,
               universe: Optional[CodeUniverse] = None) -> Tuple[int, Any]:
    """The disjunct a glued realiser of φ ∨ ψ selects, with its realiser.

    ``r`` must be accepted by :func:`verify_glued` against ``oracle`` first; a realiser it refutes or
    leaves undecided is refused with PRED_FAILURE.
    """
    verdict = verify_glued(r, phi, oracle, universe)
    if verdict != 1:
        raise fail(ErrorType.PRED_FAILURE, "the realiser is not a glued realiser of the disjunction",
                   ErrorSeverity.LOW, verdict=verdict)
    index, inner = extract_disjunct(r, phi, fuel)
    logger.info(f"disjunction property: branch {index} selected")
    return index, inner

