"""Low-level coding of ordinals, sets of ordinals, pairs and sequences as bit tapes.

A set X of ordinals is written with its members on the odd positions 2α+1 and
closed by ``11`` at β+1, β+2 where β = sup{2α+2 | α ∈ X}. A pair ⟨α, X⟩ follows
the set code with α zeros and a single 1. Sequences of pairs are concatenated
pair codes closed by ``1111``. Decoding only looks at a valid prefix; bits after
the terminator never matter.
"""
import logging
import re
from dataclasses import dataclass
from typing import Callable, FrozenSet, Iterable, Iterator, List, Optional, Tuple

from error_handler import ErrorSeverity, ErrorType, fail
from ordinal import (OMEGA, ZERO, Ordinal, OrdinalLike, double, ord_add,
                     ord_left_sub, ord_sup, parse_ordinal)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OmegaBlock:
    """``pattern`` repeated ω times from ``start``: positions [start, start+ω)."""
    start: Ordinal
    pattern: str

    def __post_init__(self):
        if not self.pattern or set(self.pattern) - {'0', '1'}:
            raise fail(ErrorType.MALFORMED_CODE, f"bad block pattern {self.pattern!r}")

    @property
    def end(self) -> Ordinal:
        return ord_add(self.start, OMEGA)

    def covers(self, pos: Ordinal) -> bool:
        return not pos < self.start and pos < self.end

    def bit_at(self, pos: Ordinal) -> int:
        offset = ord_left_sub(pos, self.start).to_int()
        return int(self.pattern[offset % len(self.pattern)])


@dataclass(frozen=True)
class BitTape:
    ones: FrozenSet[Ordinal] = frozenset()
    length: Ordinal = ZERO
    blocks: Tuple[OmegaBlock, ...] = ()

    def __post_init__(self):
        for pos in self.ones:
            if not pos < self.length:
                raise fail(ErrorType.MALFORMED_CODE, f"1-position {pos} not below length {self.length}")
        for block in self.blocks:
            if self.length < block.end:
                raise fail(ErrorType.MALFORMED_CODE, f"block at {block.start} runs past length {self.length}")
            if any(block.covers(pos) for pos in self.ones):
                raise fail(ErrorType.MALFORMED_CODE, f"explicit 1 inside the block at {block.start}")

    @staticmethod
    def of_bits(bits: str) -> 'BitTape':
        return parse_tape(bits)

    def bit(self, pos: OrdinalLike) -> int:
        pos = Ordinal.of(pos)
        if not pos < self.length:
            return 0
        if pos in self.ones:
            return 1
        for block in self.blocks:
            if block.covers(pos):
                return block.bit_at(pos)
        return 0

    def shifted(self, origin: OrdinalLike) -> 'BitTape':
        """The tape as seen from ``origin``: position p here is origin+p there."""
        origin = Ordinal.of(origin)
        if origin.is_zero():
            return self
        if not origin < self.length:
            return BitTape()
        ones = frozenset(ord_left_sub(pos, origin) for pos in self.ones if not pos < origin)
        blocks = []
        for block in self.blocks:
            if not block.start < origin:
                blocks.append(OmegaBlock(ord_left_sub(block.start, origin), block.pattern))
            elif block.covers(origin):
                offset = ord_left_sub(origin, block.start).to_int() % len(block.pattern)
                rotated = block.pattern[offset:] + block.pattern[:offset]
                blocks.append(OmegaBlock(ZERO, rotated))
        return BitTape(ones, ord_left_sub(self.length, origin), tuple(blocks))

    def one_positions(self, limit: int = 4) -> Iterator[Ordinal]:
        """Explicit 1s plus the 1s among the first ``limit`` periods of each block."""
        yield from self.ones
        for block in self.blocks:
            for k in range(limit * len(block.pattern) + 2):
                if block.pattern[k % len(block.pattern)] == '1':
                    yield ord_add(block.start, k)

    def __str__(self) -> str:
        return format_tape(self)


def concat(left: BitTape, right: BitTape) -> BitTape:
    shift = left.length
    ones = left.ones | frozenset(ord_add(shift, pos) for pos in right.ones)
    blocks = left.blocks + tuple(OmegaBlock(ord_add(shift, b.start), b.pattern) for b in right.blocks)
    return BitTape(ones, ord_add(shift, right.length), blocks)


def bits(text: str) -> BitTape:
    """A finite tape from a plain 0/1 string."""
    return BitTape(frozenset(Ordinal.of(i) for i, ch in enumerate(text) if ch == '1'),
                   Ordinal.of(len(text)))


# -- tape literals -------------------------------------------------------

_SEGMENT = re.compile(r'\(([01]+)\)\^w|([01]+)')


def parse_tape(text: str) -> BitTape:
    text = text.replace(' ', '')
    pos, ones, blocks = ZERO, set(), []
    index = 0
    while index < len(text):
        match = _SEGMENT.match(text, index)
        if not match:
            raise fail(ErrorType.PARSE_ERROR, f"bad tape literal at position {index}: {text!r}",
                       ErrorSeverity.HIGH, position=index, text=text)
        if match.group(1) is not None:
            blocks.append(OmegaBlock(pos, match.group(1)))
            pos = ord_add(pos, OMEGA)
        else:
            for ch in match.group(2):
                if ch == '1':
                    ones.add(pos)
                pos = ord_add(pos, 1)
        index = match.end()
    return BitTape(frozenset(ones), pos, tuple(blocks))


def format_tape(tape: BitTape) -> str:
    """Canonical literal; zero gaps of length ω or more print as ``(0)^w`` blocks."""
    pieces: List[str] = []
    pos = ZERO
    starts = {b.start: b for b in tape.blocks}
    marks = sorted(set(tape.ones) | set(starts) | {tape.length})
    while pos < tape.length:
        if pos in starts:
            pieces.append(f"({starts[pos].pattern})^w")
            pos = starts[pos].end
        elif pos in tape.ones:
            pieces.append('1')
            pos = ord_add(pos, 1)
        else:
            target = next(m for m in marks if pos < m)
            gap = ord_left_sub(target, pos).to_int()
            if gap is None:
                pieces.append('(0)^w')
                pos = ord_add(pos, OMEGA)
            else:
                pieces.append('0' * gap)
                pos = target
    return ''.join(pieces)


# -- sets of ordinals ----------------------------------------------------

@dataclass(frozen=True)
class OrdSet:
    """Finitely many members plus ω-runs: a run at s holds every s+k, k < ω."""
    members: FrozenSet[Ordinal] = frozenset()
    runs: FrozenSet[Ordinal] = frozenset()

    def __post_init__(self):
        stray = frozenset(m for m in self.members
                          if any(not m < s and m < ord_add(s, OMEGA) for s in self.runs))
        if stray:
            object.__setattr__(self, 'members', self.members - stray)

    @staticmethod
    def of(values: Iterable[OrdinalLike] = ()) -> 'OrdSet':
        return OrdSet(frozenset(Ordinal.of(v) for v in values))

    @staticmethod
    def omega() -> 'OrdSet':
        return OrdSet(runs=frozenset({ZERO}))

    def __contains__(self, value: OrdinalLike) -> bool:
        value = Ordinal.of(value)
        return value in self.members or any(
            not value < s and value < ord_add(s, OMEGA) for s in self.runs)

    def is_finite(self) -> bool:
        return not self.runs

    def sorted_members(self) -> List[Ordinal]:
        if self.runs:
            raise fail(ErrorType.NOT_DECIDABLE, "cannot list the members of an ω-run")
        return sorted(self.members)

    def __str__(self) -> str:
        parts = [str(m) for m in sorted(self.members)]
        parts += [f"[{s},{ord_add(s, OMEGA)})" for s in sorted(self.runs)]
        return '{' + ','.join(parts) + '}'


_ORDSET_ITEM = re.compile(r'\[([^,\]]+),[^)]*\)|[^,]+')


def parse_ordset(text: str) -> OrdSet:
    """Inverse of ``str(OrdSet)``: ``{0,3,[w,w*2)}``; a run is written by its start and start+ω."""
    body = text.strip()
    if not (body.startswith('{') and body.endswith('}')):
        raise fail(ErrorType.PARSE_ERROR, f"ordinal set literal must be braced: {text!r}", ErrorSeverity.HIGH,
                   text=text)
    members, runs = set(), set()
    for match in _ORDSET_ITEM.finditer(body[1:-1].replace(' ', '')):
        if match.group(1) is not None:
            runs.add(parse_ordinal(match.group(1)))
        else:
            members.add(parse_ordinal(match.group(0)))
    return OrdSet(frozenset(members), frozenset(runs))


@dataclass(frozen=True)
class LowPair:
    ord: Ordinal
    ordset: OrdSet

    @staticmethod
    def of(alpha: OrdinalLike, members: Iterable[OrdinalLike] = ()) -> 'LowPair':
        return LowPair(Ordinal.of(alpha), OrdSet.of(members))


def _half(pos: Ordinal) -> Ordinal:
    """The α with 2α+1 = pos (pos odd) or 2α = pos (pos even)."""
    limit = pos.limit_part()
    return ord_add(limit, pos.finite_part() // 2)


def set_code_end(ordset: OrdSet) -> Ordinal:
    """β = sup{2α+2 | α ∈ X}."""
    tops = [ord_add(double(m), 2) for m in ordset.members]
    tops += [ord_add(double(s), OMEGA) for s in ordset.runs]
    return ord_sup(tops)


def encode_ordset(ordset: OrdSet) -> BitTape:
    if not isinstance(ordset, OrdSet):
        ordset = OrdSet.of(ordset)
    beta = set_code_end(ordset)
    ones = {ord_add(double(m), 1) for m in ordset.members}
    ones |= {ord_add(beta, 1), ord_add(beta, 2)}
    blocks = tuple(OmegaBlock(double(s), '01') for s in sorted(ordset.runs))
    return BitTape(frozenset(ones), ord_add(beta, 3), blocks)


def _find_terminator(tape: BitTape) -> Ordinal:
    """Least even β with bits 0,1,1 at β, β+1, β+2."""
    best: Optional[Ordinal] = None
    for q in tape.one_positions():
        if not q.is_successor():
            continue
        p = q.predecessor()
        if not p.is_even() or (best is not None and not p < best):
            continue
        if tape.bit(p) == 0 and tape.bit(ord_add(p, 2)) == 1:
            best = p
    if best is None:
        raise fail(ErrorType.MALFORMED_CODE, "no set terminator 11 found within the tape",
                   tape=format_tape(tape))
    return best


def _decode_ordset_prefix(tape: BitTape) -> Tuple[OrdSet, Ordinal]:
    """Decode the set code at position 0; returns the set and β."""
    if tape.bit(0) == 1:
        raise fail(ErrorType.MALFORMED_CODE, "position 0 of a set code must be 0")
    beta = _find_terminator(tape)
    members, runs = set(), set()
    for pos in tape.ones:
        if pos < beta:
            if pos.is_even():
                raise fail(ErrorType.MALFORMED_CODE, f"even position {pos} below the terminator holds 1")
            members.add(_half(pos))
    for block in tape.blocks:
        if not block.start < beta:
            continue
        span = ord_left_sub(beta, block.start).to_int()
        if span is None:
            # the whole block lies below β
            if set(block.pattern) == {'0'}:
                continue
            if not block.start.is_even() or block.pattern.replace('01', '') != '':
                raise fail(ErrorType.MALFORMED_CODE,
                           f"block {block.pattern!r} at {block.start} is not a run of members")
            runs.add(_half(block.start))
            continue
        for k in range(span):
            pos = ord_add(block.start, k)
            if block.bit_at(pos) == 1:
                if pos.is_even():
                    raise fail(ErrorType.MALFORMED_CODE, f"even position {pos} below the terminator holds 1")
                members.add(_half(pos))
    return OrdSet(frozenset(members), frozenset(runs)), beta


def decode_ordset(tape: BitTape) -> OrdSet:
    return _decode_ordset_prefix(tape)[0]


def validate_set_code(tape: BitTape) -> bool:
    """Structural validator: every even position below β is 0 and 11 closes the code."""
    try:
        _decode_ordset_prefix(tape)
        return True
    except Exception:
        return False


def _next_one(tape: BitTape, start: Ordinal) -> Optional[Ordinal]:
    candidates = [pos for pos in tape.ones if not pos < start]
    for block in tape.blocks:
        if not block.end < start and block.end != start:
            origin = start if block.covers(start) else block.start
            for k in range(len(block.pattern)):
                pos = ord_add(origin, k)
                if block.covers(pos) and block.bit_at(pos) == 1:
                    candidates.append(pos)
                    break
    return min(candidates) if candidates else None


def encode_lowpair(pair: LowPair) -> BitTape:
    set_code = encode_ordset(pair.ordset)
    mark = ord_add(set_code.length, pair.ord)
    return BitTape(set_code.ones | {mark}, ord_add(mark, 1), set_code.blocks)


def _decode_lowpair_prefix(tape: BitTape) -> Tuple[LowPair, Ordinal]:
    ordset, beta = _decode_ordset_prefix(tape)
    gap_start = ord_add(beta, 3)
    mark = _next_one(tape, gap_start)
    if mark is None:
        raise fail(ErrorType.MALFORMED_CODE, "pair code has no terminal 1")
    return LowPair(ord_left_sub(mark, gap_start), ordset), ord_add(mark, 1)


def decode_lowpair(tape: BitTape) -> LowPair:
    return _decode_lowpair_prefix(tape)[0]


# -- sequences of pairs --------------------------------------------------

SEQ_TERMINATOR = '1111'


def encode_seq(pairs: Iterable[LowPair]) -> BitTape:
    tape = BitTape()
    for pair in pairs:
        tape = concat(tape, encode_lowpair(pair))
    return concat(tape, bits(SEQ_TERMINATOR))


def decode_seq(tape: BitTape) -> List[LowPair]:
    pairs = []
    origin = ZERO
    while True:
        view = tape.shifted(origin)
        if all(view.bit(i) == 1 for i in range(4)):
            return pairs
        if view.length.is_zero():
            raise fail(ErrorType.MALFORMED_CODE, "sequence code has no 1111 terminator")
        pair, consumed = _decode_lowpair_prefix(view)
        pairs.append(pair)
        origin = ord_add(origin, consumed)


def _seq_position(pairs: List[LowPair], index: OrdinalLike) -> int:
    position = Ordinal.of(index).to_int()
    if position is None or position >= len(pairs):
        raise fail(ErrorType.INDEX_OUT_OF_RANGE, f"index {index} outside a sequence of length {len(pairs)}",
                   index=str(index), length=len(pairs))
    return position


def seq_index(tape: BitTape, index: OrdinalLike) -> LowPair:
    pairs = decode_seq(tape)
    return pairs[_seq_position(pairs, index)]


def seq_remove(tape: BitTape, index: OrdinalLike) -> BitTape:
    pairs = decode_seq(tape)
    del pairs[_seq_position(pairs, index)]
    return encode_seq(pairs)


def seq_append(tape: BitTape, pair: LowPair) -> BitTape:
    return encode_seq(decode_seq(tape) + [pair])


# -- machine-level operations ------------------------------------------

def tape_member(alpha: OrdinalLike, tape: BitTape) -> int:
    beta = _find_terminator(tape)
    if tape.bit(0) == 1:
        raise fail(ErrorType.MALFORMED_CODE, "position 0 of a set code must be 0")
    pos = ord_add(double(alpha), 1)
    return 1 if pos < beta and tape.bit(pos) == 1 else 0


def _as_ordinal_function(f) -> Callable[[Ordinal], object]:
    if callable(f) and not hasattr(f, 'program'):
        return f
    from rterm import ordinal_function
    return ordinal_function(f)


def tape_image(f, tape: BitTape) -> BitTape:
    ordset = decode_ordset(tape)
    fn = _as_ordinal_function(f)
    image = {Ordinal.of(fn(member)) for member in ordset.sorted_members()}
    return encode_ordset(OrdSet(frozenset(image)))


def tape_bounded_search(tape: BitTape, pred, probe: Optional[int] = None) -> Optional[Ordinal]:
    """Least member satisfying ``pred``, or None when no member does."""
    from config import config
    probe = probe if probe is not None else config.OMEGA_PROBE
    ordset = decode_ordset(tape)
    fn = _as_ordinal_function(pred)
    # Each run contributes a finite prefix; nothing at or above the end of a prefix is tried.
    candidates = sorted(set(ordset.members) | {ord_add(s, k) for s in ordset.runs for k in range(probe)})
    prefix_ends = [ord_add(s, probe) for s in ordset.runs]
    for member in candidates:
        if any(not member < end for end in prefix_ends):
            break
        if fn(member) == 1:
            return member
    if ordset.runs:
        raise fail(ErrorType.NOT_DECIDABLE, "search through an ω-run found no match in its searched prefix")
    return None
