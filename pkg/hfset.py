"""Hereditarily finite sets.

Elements are kept sorted by ``sort_key`` (rank first, then size, then the
element keys), so structural equality is extensional equality and every
enumeration in the package is reproducible.
"""
import itertools
import re
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from error_handler import ErrorSeverity, ErrorType, fail


class HFSet:
    __slots__ = ('elements', '_hash', '_key')

    def __init__(self, elements: Iterable['HFSet'] = ()):
        unique = {e: None for e in elements}
        self.elements: Tuple['HFSet', ...] = tuple(sorted(unique, key=sort_key))
        self._hash = hash(self.elements)
        self._key = None

    def __eq__(self, other) -> bool:
        return isinstance(other, HFSet) and (self is other or self.elements == other.elements)

    def __hash__(self) -> int:
        return self._hash

    def __contains__(self, item: 'HFSet') -> bool:
        return item in self.elements

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"HFSet({format_set(self)})"

    def __str__(self) -> str:
        return format_set(self)

    @property
    def rank(self) -> int:
        return sort_key(self)[0]

    def issubset(self, other: 'HFSet') -> bool:
        return all(e in other for e in self.elements)

    def union(self) -> 'HFSet':
        return HFSet(z for y in self.elements for z in y.elements)

    def with_element(self, item: 'HFSet') -> 'HFSet':
        return HFSet(self.elements + (item,))


def sort_key(s: HFSet) -> Tuple:
    if s._key is None:
        keys = tuple(sort_key(e) for e in s.elements)
        rank = 1 + max((k[0] for k in keys), default=-1)
        s._key = (rank, len(keys), keys)
    return s._key


EMPTY = HFSet()


def hf(*elements: HFSet) -> HFSet:
    return HFSet(elements)


@lru_cache(maxsize=None)
def von_neumann(n: int) -> HFSet:
    """The finite ordinal n = {0, ..., n-1}."""
    return HFSet(von_neumann(i) for i in range(n))


def ordinal_value(s: HFSet) -> Optional[int]:
    """n when s is the von Neumann ordinal n."""
    n = len(s)
    return n if s == von_neumann(n) else None


def kpair(a: HFSet, b: HFSet) -> HFSet:
    """Kuratowski pair {{a}, {a, b}}."""
    return hf(hf(a), hf(a, b))


def unpair(p: HFSet) -> Optional[Tuple[HFSet, HFSet]]:
    if len(p) == 1:
        (single,) = p.elements
        if len(single) == 1:
            return single.elements[0], single.elements[0]
        return None
    if len(p) != 2:
        return None
    small, big = sorted(p.elements, key=len)
    if len(small) != 1 or len(big) != 2 or small.elements[0] not in big:
        return None
    first = small.elements[0]
    second = next(e for e in big.elements if e != first)
    return first, second


def seq_function(values: Sequence[HFSet]) -> HFSet:
    """The sequence X̄ as the function {⟨j, X_j⟩ | j < len}."""
    return HFSet(kpair(von_neumann(j), x) for j, x in enumerate(values))


def seq_values(f: HFSet) -> Optional[Tuple[HFSet, ...]]:
    """Inverse of ``seq_function``; None when f is not a function on an ordinal."""
    mapping: Dict[int, HFSet] = {}
    for p in f.elements:
        pair = unpair(p)
        if pair is None:
            return None
        j = ordinal_value(pair[0])
        if j is None or j in mapping:
            return None
        mapping[j] = pair[1]
    if sorted(mapping) != list(range(len(mapping))):
        return None
    return tuple(mapping[j] for j in range(len(mapping)))


def transitive_closure(s: HFSet) -> List[HFSet]:
    """tc(s) in canonical order."""
    seen, stack = set(), list(s.elements)
    while stack:
        x = stack.pop()
        if x not in seen:
            seen.add(x)
            stack.extend(x.elements)
    return sorted(seen, key=sort_key)


@lru_cache(maxsize=8)
def level(n: int) -> Tuple[HFSet, ...]:
    """V_n in canonical order; V_0 is empty."""
    if n < 0:
        raise fail(ErrorType.CONFIGURATION, f"negative universe rank {n}", ErrorSeverity.HIGH)
    if n == 0:
        return ()
    below = level(n - 1)
    subsets = (HFSet(combo) for size in range(len(below) + 1)
               for combo in itertools.combinations(below, size))
    return tuple(sorted(subsets, key=sort_key))


def with_sequences(universe: Iterable[HFSet], values: Iterable[HFSet], max_length: int) -> Tuple[HFSet, ...]:
    """Close a universe under sequence functions of length <= max_length over ``values``, transitively."""
    found = {s: None for s in universe}
    values = list(values)
    for length in range(1, max_length + 1):
        for combo in itertools.product(values, repeat=length):
            f = seq_function(combo)
            found.setdefault(f, None)
            for x in transitive_closure(f):
                found.setdefault(x, None)
    return tuple(sorted(found, key=sort_key))


# -- literals ------------------------------------------------------------

_TOKEN = re.compile(r'\s*([{},]|\d+)')


def parse_set(text: str) -> HFSet:
    """``{}``, ``{{}}``, ``{{},{{}}}``; a bare natural n stands for the von Neumann ordinal."""
    tokens, pos = [], 0
    text = text.strip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match:
            raise fail(ErrorType.PARSE_ERROR, f"bad set literal at position {pos}: {text!r}",
                       ErrorSeverity.HIGH, position=pos, text=text)
        tokens.append((match.group(1), match.start(1)))
        pos = match.end()
    value, index = _parse_set_tokens(tokens, 0, text)
    if index != len(tokens):
        raise fail(ErrorType.PARSE_ERROR, f"trailing input in set literal {text!r}",
                   ErrorSeverity.HIGH, position=tokens[index][1], text=text)
    return value


def _parse_set_tokens(tokens, index, text) -> Tuple[HFSet, int]:
    if index >= len(tokens):
        raise fail(ErrorType.PARSE_ERROR, f"unexpected end of set literal {text!r}",
                   ErrorSeverity.HIGH, position=len(text), text=text)
    token, where = tokens[index]
    if token.isdigit():
        return von_neumann(int(token)), index + 1
    if token != '{':
        raise fail(ErrorType.PARSE_ERROR, f"expected '{{' at position {where} in {text!r}",
                   ErrorSeverity.HIGH, position=where, text=text)
    index += 1
    elements = []
    if index < len(tokens) and tokens[index][0] == '}':
        return EMPTY, index + 1
    while True:
        element, index = _parse_set_tokens(tokens, index, text)
        elements.append(element)
        if index < len(tokens) and tokens[index][0] == ',':
            index += 1
            continue
        if index < len(tokens) and tokens[index][0] == '}':
            return HFSet(elements), index + 1
        position = tokens[index][1] if index < len(tokens) else len(text)
        raise fail(ErrorType.PARSE_ERROR, f"expected ',' or '}}' at position {position} in {text!r}",
                   ErrorSeverity.HIGH, position=position, text=text)


def format_set(s: HFSet) -> str:
    return '{' + ','.join(format_set(e) for e in s.elements) + '}'
