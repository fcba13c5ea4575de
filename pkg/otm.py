"""Ordinal Turing machine simulator.

Four tapes (input, parameter, scratch, output), one head per tape, natural
number states. Successor stages follow an ordinary Turing program. At a limit
stage every cell takes the liminf of its values, every head the liminf of its
positions and the state the liminf of the state indices. Limits are only taken
when the behaviour inside an ω-block is recognised: either an exact repeat of a
configuration (a cycle) or a sweep, where the moving heads run off to the right
over blank tape writing the same pattern every period.
"""
import itertools
import logging
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from config import config
from error_handler import ErrorSeverity, ErrorType, fail
from ordinal import OMEGA, ZERO, Ordinal, OrdinalLike, ord_add, ord_left_sub
from reports import AgreementCase, OtmAgreementReport
from tape_codec import (BitTape, LowPair, OmegaBlock, OrdSet, encode_lowpair, encode_ordset, encode_seq,
                        seq_append, tape_member)

logger = logging.getLogger(__name__)

TAPES = 4
INPUT, PARAM, SCRATCH, OUTPUT = range(TAPES)
MACHINE_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'specs', 'machines')


class Move(Enum):
    LEFT = 'L'
    RIGHT = 'R'
    STAY = 'S'


@dataclass(frozen=True)
class Transition:
    write: Tuple[Optional[int], ...]   # None keeps the cell
    moves: Tuple[Move, ...]
    next_state: int


@dataclass(frozen=True)
class OtmProgram:
    transitions: Dict[Tuple[int, Tuple[int, ...]], Transition] = field(hash=False)
    initial: int = 0
    halting: FrozenSet[int] = frozenset()
    name: str = 'program'

    @property
    def states(self) -> FrozenSet[int]:
        found = {self.initial} | set(self.halting)
        for (state, _), transition in self.transitions.items():
            found |= {state, transition.next_state}
        return frozenset(found)


class MachineTape:
    """A base tape with point writes and limit blocks layered on top."""

    def __init__(self, base: BitTape = BitTape(), written: Optional[Dict[Ordinal, int]] = None,
                 blocks: Tuple[OmegaBlock, ...] = ()):
        self.base = base
        self.written = dict(written or {})
        self.blocks = blocks

    def bit(self, pos: Ordinal) -> int:
        pos = Ordinal.of(pos)
        if pos in self.written:
            return self.written[pos]
        for block in self.blocks:
            if block.covers(pos):
                return block.bit_at(pos)
        return self.base.bit(pos)

    def write(self, pos: Ordinal, value: int) -> 'MachineTape':
        pos = Ordinal.of(pos)
        if self.bit(pos) == value:
            return self
        written = dict(self.written)
        written[pos] = value
        return MachineTape(self.base, written, self.blocks)

    def blank_from(self, pos: Ordinal) -> bool:
        """No 1 at any position >= pos."""
        if any(v == 1 and not p < pos for p, v in self.written.items()):
            return False
        for block in self.blocks + self.base.blocks:
            if pos < block.end and '1' in block.pattern:
                return False
        return all(p < pos or self.written.get(p) == 0 for p in self.base.ones)

    def ones(self) -> List[Ordinal]:
        found = {p for p in self.base.ones if self.written.get(p, 1) == 1}
        found |= {p for p, v in self.written.items() if v == 1}
        return sorted(p for p in found if self.bit(p) == 1)

    def snapshot(self) -> Tuple:
        return (self.base, tuple(sorted(self.written.items())), self.blocks)

    def to_bittape(self) -> BitTape:
        if self.blocks or self.base.blocks:
            raise fail(ErrorType.NOT_DECIDABLE, "output tape carries an ω-block")
        ones = self.ones()
        length = ord_add(ones[-1], 1) if ones else ZERO
        return BitTape(frozenset(ones), length)


@dataclass(frozen=True)
class MachineConfig:
    tapes: Tuple[MachineTape, ...]
    heads: Tuple[Ordinal, ...]
    state: int
    stage: Ordinal = ZERO

    def read(self) -> Tuple[int, ...]:
        return tuple(tape.bit(head) for tape, head in zip(self.tapes, self.heads))

    def snapshot(self) -> Tuple:
        return (tuple(t.snapshot() for t in self.tapes), self.heads, self.state)

    def dump(self) -> str:
        heads = ','.join(str(h) for h in self.heads)
        cells = ''.join(str(b) for b in self.read())
        return f"[{self.stage}] state={self.state} heads=({heads}) read={cells}"


@dataclass(frozen=True)
class Halted:
    config: MachineConfig

    @property
    def output(self) -> BitTape:
        return self.config.tapes[OUTPUT].to_bittape()


@dataclass(frozen=True)
class OutOfBudget:
    config: MachineConfig
    reason: str


@dataclass(frozen=True)
class Crashed:
    config: MachineConfig
    reason: str


RunResult = Union[Halted, OutOfBudget, Crashed]


def initial_config(prog: OtmProgram, input_tape: BitTape, param: BitTape = BitTape()) -> MachineConfig:
    tapes = (MachineTape(input_tape), MachineTape(param), MachineTape(), MachineTape())
    return MachineConfig(tapes, (ZERO,) * TAPES, prog.initial, ZERO)


def _move(head: Ordinal, move: Move) -> Ordinal:
    if move is Move.RIGHT:
        return ord_add(head, 1)
    if move is Move.LEFT:
        # leaving position 0 or a limit position resets the head to 0
        return head.predecessor() if head.is_successor() else ZERO
    return head


def otm_step(cfg: MachineConfig, prog: OtmProgram) -> Union[MachineConfig, Halted]:
    if cfg.state in prog.halting:
        return Halted(cfg)
    read = cfg.read()
    transition = prog.transitions.get((cfg.state, read))
    if transition is None:
        raise fail(ErrorType.MISSING_TRANSITION,
                   f"no transition for state {cfg.state} reading {''.join(map(str, read))}",
                   state=cfg.state, read=read, stage=str(cfg.stage))
    tapes = tuple(tape if value is None else tape.write(head, value)
                  for tape, head, value in zip(cfg.tapes, cfg.heads, transition.write))
    heads = tuple(_move(head, move) for head, move in zip(cfg.heads, transition.moves))
    nxt = MachineConfig(tapes, heads, transition.next_state, ord_add(cfg.stage, 1))
    if nxt.state in prog.halting:
        return Halted(nxt)
    return nxt


class LimitKind(Enum):
    CYCLE = "cycle"
    SWEEP = "sweep"


@dataclass
class LimitHistory:
    """Cofinal behaviour below a limit stage: one period of the repeating window.

    For a cycle the window is the list of configurations of one period. For a
    sweep it runs from the period start up to and including the configuration
    one period later, whose moving heads sit further right.
    """
    window: Sequence[MachineConfig]
    kind: LimitKind
    stage: Ordinal


def _liminf_cells(tape: MachineTape, index: int, window: Sequence[MachineConfig]) -> MachineTape:
    positions = set()
    for cfg in window:
        positions |= set(cfg.tapes[index].written)
    for pos in positions:
        tape = tape.write(pos, min(cfg.tapes[index].bit(pos) for cfg in window))
    return tape


def otm_limit(history: LimitHistory) -> MachineConfig:
    window = list(history.window)
    state = min(cfg.state for cfg in window)
    if history.kind is LimitKind.CYCLE:
        tapes = tuple(_liminf_cells(tape, index, window) for index, tape in enumerate(window[0].tapes))
        heads = tuple(min(cfg.heads[i] for cfg in window) for i in range(TAPES))
        return MachineConfig(tapes, heads, state, history.stage)

    start, end = window[0], window[-1]
    tapes, heads = [], []
    for index in range(TAPES):
        h0, h1 = start.heads[index], end.heads[index]
        tape = end.tapes[index]
        if h0 == h1:
            # a stationary head can still toggle cells inside the period
            tapes.append(_liminf_cells(tape, index, window))
            heads.append(h0)
            continue
        period = ord_left_sub(h1, h0).to_int()
        pattern = ''.join(str(tape.bit(ord_add(h0, k))) for k in range(period))
        written = {p: v for p, v in tape.written.items() if p < h0}
        tapes.append(MachineTape(tape.base, written, tape.blocks + (OmegaBlock(h0, pattern),)))
        heads.append(ord_add(h0, OMEGA))
    return MachineConfig(tuple(tapes), tuple(heads), state, history.stage)


def _sweep(trace: List[MachineConfig], lowest: List[Tuple[Ordinal, ...]]) -> Optional[int]:
    """Index i such that trace[i] .. trace[-1] is one period of a sweep."""
    last = trace[-1]
    for i in range(len(trace) - 1):
        first = trace[i]
        if first.state != last.state:
            continue
        moving = False
        ok = True
        for k in range(TAPES):
            h0, h1 = first.heads[k], last.heads[k]
            if h0 == h1:
                if first.tapes[k].snapshot() != last.tapes[k].snapshot():
                    ok = False
                    break
                continue
            period = ord_left_sub(h1, h0).to_int() if h0 < h1 else None
            if (period is None or any(low[k] < h0 for low in lowest[i:])
                    or not first.tapes[k].blank_from(h0) or not last.tapes[k].blank_from(h1)):
                ok = False
                break
            moving = True
        if ok and moving:
            return i
    return None


def otm_run(prog: OtmProgram, input_tape: BitTape, param: BitTape = BitTape(),
            budget: OrdinalLike = OMEGA, trace: Optional[Callable[[MachineConfig], None]] = None,
            block_steps: Optional[int] = None) -> RunResult:
    budget = Ordinal.of(budget)
    block_steps = block_steps or config.OTM_BLOCK_STEPS
    cfg = initial_config(prog, input_tape, param)
    while True:
        seen: Dict[Tuple, int] = {}
        window: List[MachineConfig] = []
        lowest: List[Tuple[Ordinal, ...]] = []
        limit: Optional[MachineConfig] = None
        block_end = ord_add(cfg.stage, OMEGA)
        for _ in range(block_steps):
            if not cfg.stage < budget:
                return OutOfBudget(cfg, f"budget {budget} exhausted")
            if trace:
                trace(cfg)
            snap = cfg.snapshot()
            if snap in seen:
                cycle = window[seen[snap]:]
                limit = otm_limit(LimitHistory(cycle, LimitKind.CYCLE, block_end))
                break
            seen[snap] = len(window)
            window.append(cfg)
            lowest.append(cfg.heads)
            start = _sweep(window, lowest)
            if start is not None:
                limit = otm_limit(LimitHistory(window[start:], LimitKind.SWEEP, block_end))
                break
            try:
                result = otm_step(cfg, prog)
            except Exception as e:
                if getattr(e, 'error_type', None) is ErrorType.MISSING_TRANSITION:
                    return Crashed(cfg, str(e))
                raise
            if isinstance(result, Halted):
                if trace:
                    trace(result.config)
                return result
            cfg = result
            lowest[-1] = tuple(min(a, b) for a, b in zip(lowest[-1], cfg.heads))
        if limit is None:
            return OutOfBudget(cfg, "behaviour inside the ω-block was not recognised")
        logger.debug(f"{prog.name}: limit stage {block_end} reached after {len(window)} recorded steps")
        cfg = limit
        if not cfg.stage < budget:
            return OutOfBudget(cfg, f"budget {budget} exhausted at a limit stage")
        if cfg.state in prog.halting:
            return Halted(cfg)


# -- program text --------------------------------------------------------

def _expand(pattern: str) -> Iterable[Tuple[int, ...]]:
    choices = [(0, 1) if ch == '*' else (int(ch),) for ch in pattern]
    return itertools.product(*choices)


def parse_program(text: str, name: str = 'program') -> OtmProgram:
    transitions: Dict[Tuple[int, Tuple[int, ...]], Transition] = {}
    initial, halting = 0, set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        words = line.split()
        try:
            if words[0] == 'start':
                initial = int(words[1])
                continue
            if words[0] == 'halt':
                halting.update(int(w) for w in words[1:])
                continue
            state, read, arrow, write, moves, nxt = words
            if arrow != '->' or not (len(read) == len(write) == len(moves) == TAPES):
                raise ValueError(line)
            transition = Transition(
                tuple(None if ch == '*' else int(ch) for ch in write),
                tuple(Move(ch) for ch in moves),
                int(nxt))
        except (ValueError, IndexError):
            raise fail(ErrorType.PARSE_ERROR, f"{name}:{lineno}: bad transition line {raw!r}",
                       ErrorSeverity.HIGH, position=lineno, text=raw)
        for key in _expand(read):
            if (int(state), key) in transitions:
                raise fail(ErrorType.PARSE_ERROR, f"{name}:{lineno}: nondeterministic transition",
                           ErrorSeverity.HIGH, position=lineno, text=raw)
            transitions[(int(state), key)] = transition
    return OtmProgram(transitions, initial, frozenset(halting), name)


def format_program(prog: OtmProgram) -> str:
    lines = [f"start {prog.initial}", "halt " + ' '.join(str(s) for s in sorted(prog.halting))]
    for (state, read), t in sorted(prog.transitions.items()):
        write = ''.join('*' if w is None else str(w) for w in t.write)
        moves = ''.join(m.value for m in t.moves)
        lines.append(f"{state} {''.join(map(str, read))} -> {write} {moves} {t.next_state}")
    return '\n'.join(lines) + '\n'


def load_program(name: str) -> OtmProgram:
    path = name if os.path.exists(name) else os.path.join(MACHINE_DIR, f"{name}.otm")
    with open(path, 'r') as f:
        return parse_program(f.read(), os.path.basename(path))


# -- machine/host agreement ----------------------------------------------

def member_param(alpha: OrdinalLike) -> BitTape:
    alpha = Ordinal.of(alpha)
    return BitTape(frozenset({alpha}), ord_add(alpha, 1))


def run_member(prog: OtmProgram, alpha: OrdinalLike, set_code: BitTape, budget: OrdinalLike = OMEGA) -> Optional[int]:
    result = otm_run(prog, set_code, member_param(alpha), budget)
    return result.output.bit(0) if isinstance(result, Halted) else None


def run_seq_append(prog: OtmProgram, seq_code: BitTape, pair: LowPair, budget: OrdinalLike = OMEGA) -> Optional[BitTape]:
    result = otm_run(prog, seq_code, encode_lowpair(pair), budget)
    return result.output if isinstance(result, Halted) else None


def _member_corpus(size: int) -> Iterable[Tuple[int, OrdSet]]:
    for mask in range(1 << size):
        members = OrdSet.of(i for i in range(size) if mask >> i & 1)
        for alpha in range(size + 1):
            yield alpha, members


def _append_corpus() -> Iterable[Tuple[List[LowPair], LowPair]]:
    pairs = [LowPair.of(alpha, members) for alpha in range(3)
             for members in ((), (0,), (1,), (0, 2))]
    for pair in pairs:
        yield [], pair
    for head in pairs[:4]:
        for pair in pairs[:4]:
            yield [head], pair


def otm_reference_suite(member_prog: Optional[OtmProgram] = None,
                        append_prog: Optional[OtmProgram] = None,
                        member_size: int = 8) -> OtmAgreementReport:
    member_prog = member_prog or load_program('member')
    append_prog = append_prog or load_program('seq_append')
    report = OtmAgreementReport()

    for alpha, members in _member_corpus(member_size):
        code = encode_ordset(members)
        expected = tape_member(alpha, code)
        got = run_member(member_prog, alpha, code)
        report.record('tape_member', AgreementCase(
            input=f"alpha={alpha} set={members}", expected=str(expected), got=str(got)))

    for sequence, pair in _append_corpus():
        code = encode_seq(sequence)
        expected = seq_append(code, pair)
        got = run_seq_append(append_prog, code, pair)
        report.record('seq_append', AgreementCase(
            input=f"seq={[str(p.ordset) + '@' + str(p.ord) for p in sequence]} pair={pair.ordset}@{pair.ord}",
            expected=str(expected), got=str(got)))

    logger.info(f"OTM reference suite: {report.summary()}")
    return report
