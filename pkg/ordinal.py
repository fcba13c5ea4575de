"""Ordinals below a configurable bound, in Cantor normal form.

An ordinal is a tuple of ``(exponent, coefficient)`` terms with strictly
decreasing exponents and positive coefficients; the empty tuple is 0.
Exponents are ordinals themselves. Finite ordinals are the single term
``(0, n)`` and are cached.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache, total_ordering
from math import isqrt
from typing import Iterable, Optional, Tuple, Union

from error_handler import ErrorSeverity, ErrorType, fail

logger = logging.getLogger(__name__)

OrdinalLike = Union['Ordinal', int]


class Ordering(Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    terms: Tuple[Tuple['Ordinal', int], ...] = ()

    @staticmethod
    def of(value: OrdinalLike) -> 'Ordinal':
        if isinstance(value, Ordinal):
            return value
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError(f"cannot build an ordinal from {value!r}")
        if value < 0:
            raise fail(ErrorType.BOUND_OVERFLOW, f"negative ordinal {value}")
        return _finite(value)

    @staticmethod
    def omega_power(exponent: OrdinalLike, coefficient: int = 1) -> 'Ordinal':
        if coefficient == 0:
            return ZERO
        return Ordinal(((Ordinal.of(exponent), coefficient),))

    # -- queries ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0].is_zero())

    def to_int(self) -> Optional[int]:
        """The natural number this ordinal denotes, or None when infinite."""
        if not self.terms:
            return 0
        if self.is_finite():
            return self.terms[0][1]
        return None

    def is_limit(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].is_zero()

    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0].is_zero()

    def finite_part(self) -> int:
        if self.terms and self.terms[-1][0].is_zero():
            return self.terms[-1][1]
        return 0

    def limit_part(self) -> 'Ordinal':
        if self.is_successor():
            return Ordinal(self.terms[:-1])
        return self

    def lead_exponent(self) -> 'Ordinal':
        return self.terms[0][0] if self.terms else ZERO

    def is_even(self) -> bool:
        return self.finite_part() % 2 == 0

    def predecessor(self) -> 'Ordinal':
        if not self.is_successor():
            raise fail(ErrorType.BOUND_OVERFLOW, f"{self} has no predecessor")
        *head, (exp, coeff) = self.terms
        if coeff == 1:
            return Ordinal(tuple(head))
        return Ordinal(tuple(head) + ((exp, coeff - 1),))

    # -- order and arithmetic ----------------------------------------------
    def __lt__(self, other: OrdinalLike) -> bool:
        return ord_cmp(self, Ordinal.of(other)) is Ordering.LESS

    def __add__(self, other: OrdinalLike) -> 'Ordinal':
        return ord_add(self, other)

    def __radd__(self, other: int) -> 'Ordinal':
        return ord_add(other, self)

    def __mul__(self, other: OrdinalLike) -> 'Ordinal':
        return ord_mul(self, other)

    def __rmul__(self, other: int) -> 'Ordinal':
        return ord_mul(other, self)

    def __sub__(self, other: OrdinalLike) -> 'Ordinal':
        return ord_left_sub(self, other)

    def __str__(self) -> str:
        return format_ordinal(self)

    def __repr__(self) -> str:
        return f"Ordinal({format_ordinal(self)})"


@lru_cache(maxsize=4096)
def _finite(value: int) -> Ordinal:
    if value == 0:
        return Ordinal(())
    return Ordinal(((Ordinal(()), value),))


ZERO = Ordinal(())
ONE = Ordinal.of(1)
OMEGA = Ordinal.omega_power(1)


def ord_cmp(a: OrdinalLike, b: OrdinalLike) -> Ordering:
    a, b = Ordinal.of(a), Ordinal.of(b)
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        exp_order = ord_cmp(ea, eb)
        if exp_order is not Ordering.EQUAL:
            return exp_order
        if ca != cb:
            return Ordering.LESS if ca < cb else Ordering.GREATER
    if len(a.terms) == len(b.terms):
        return Ordering.EQUAL
    return Ordering.LESS if len(a.terms) < len(b.terms) else Ordering.GREATER


@lru_cache(maxsize=None)
def _bound_for(text: str) -> Ordinal:
    return parse_ordinal(text, bounded=False)


def current_bound() -> Ordinal:
    from config import config
    return _bound_for(config.ORDINAL_BOUND)


def check_bound(value: Ordinal, bound: Optional[Ordinal] = None) -> Ordinal:
    bound = bound if bound is not None else current_bound()
    if not value < bound:
        raise fail(ErrorType.BOUND_OVERFLOW, f"ordinal {value} is not below the bound {bound}",
                   ErrorSeverity.HIGH, value=str(value), bound=str(bound))
    return value


def _add_unchecked(a: Ordinal, b: Ordinal) -> Ordinal:
    if b.is_zero():
        return a
    if a.is_zero():
        return b
    lead_b, coeff_b = b.terms[0]
    kept = []
    for exp, coeff in a.terms:
        order = ord_cmp(exp, lead_b)
        if order is Ordering.GREATER:
            kept.append((exp, coeff))
        elif order is Ordering.EQUAL:
            kept.append((exp, coeff + coeff_b))
            return Ordinal(tuple(kept) + b.terms[1:])
        else:
            break
    return Ordinal(tuple(kept) + b.terms)


def ord_add(a: OrdinalLike, b: OrdinalLike) -> Ordinal:
    a, b = Ordinal.of(a), Ordinal.of(b)
    if a.is_finite() and b.is_finite():
        return check_bound(Ordinal.of(a.to_int() + b.to_int()))
    return check_bound(_add_unchecked(a, b))


def _mul_unchecked(a: Ordinal, b: Ordinal) -> Ordinal:
    if a.is_zero() or b.is_zero():
        return ZERO
    lead_a, coeff_a = a.terms[0]
    result = ZERO
    for exp, coeff in b.terms:
        if exp.is_zero():
            piece = Ordinal(((lead_a, coeff_a * coeff),) + a.terms[1:])
        else:
            piece = Ordinal(((_add_unchecked(lead_a, exp), coeff),))
        result = _add_unchecked(result, piece)
    return result


def ord_mul(a: OrdinalLike, b: OrdinalLike) -> Ordinal:
    a, b = Ordinal.of(a), Ordinal.of(b)
    if a.is_finite() and b.is_finite():
        return check_bound(Ordinal.of(a.to_int() * b.to_int()))
    return check_bound(_mul_unchecked(a, b))


def ord_left_sub(a: OrdinalLike, b: OrdinalLike) -> Ordinal:
    """The unique r with b + r = a; requires b <= a."""
    a, b = Ordinal.of(a), Ordinal.of(b)
    if a < b:
        raise fail(ErrorType.BOUND_OVERFLOW, f"cannot subtract {b} from smaller {a}")
    for i, (ea, ca) in enumerate(a.terms):
        if i >= len(b.terms):
            return Ordinal(a.terms[i:])
        eb, cb = b.terms[i]
        if (ea, ca) == (eb, cb):
            continue
        if ea == eb and cb < ca:
            return Ordinal(((ea, ca - cb),) + a.terms[i + 1:])
        return Ordinal(a.terms[i:])
    return ZERO


def double(a: OrdinalLike) -> Ordinal:
    """Left multiplication by two, as used for tape positions 2α."""
    return ord_mul(2, a)


def ord_sup(values: Iterable[OrdinalLike]) -> Ordinal:
    best = ZERO
    for value in values:
        value = Ordinal.of(value)
        if best < value:
            best = value
    return best


def ord_max(a: OrdinalLike, b: OrdinalLike) -> Ordinal:
    return ord_sup((a, b))


# -- Gödel pairing -------------------------------------------------------

def _finite_exponent(exp: Ordinal) -> int:
    value = exp.to_int()
    if value is None:
        raise fail(ErrorType.BOUND_OVERFLOW,
                   f"pairing is implemented for exponents below w, got w^{exp}")
    return value


def _pairs_below(m: Ordinal) -> Ordinal:
    """Order type of {(a, b) | max(a, b) < m} under the canonical ordering."""
    if m.is_finite():
        n = m.to_int()
        return Ordinal.of(n * n)
    acc = ZERO
    total = ZERO
    for exp, coeff in m.terms:
        e = _finite_exponent(exp)
        for _ in range(coeff):
            if e == 0:
                step = _add_unchecked(_mul_unchecked(acc, Ordinal.of(2)), ONE)
            elif acc.is_zero():
                step = Ordinal.omega_power(2 * e - 1)
            else:
                step = Ordinal.omega_power(_finite_exponent(acc.lead_exponent()) + e)
            total = _add_unchecked(total, step)
            acc = _add_unchecked(acc, Ordinal.omega_power(e))
    return total


@dataclass(frozen=True)
class OrdPair:
    first: Ordinal
    second: Ordinal

    @staticmethod
    def of(first: OrdinalLike, second: OrdinalLike) -> 'OrdPair':
        return OrdPair(Ordinal.of(first), Ordinal.of(second))


def godel_pair(p: OrdPair) -> Ordinal:
    a, b = p.first, p.second
    if a.is_finite() and b.is_finite():
        x, y = a.to_int(), b.to_int()
        m = max(x, y)
        return check_bound(Ordinal.of(m * m + (x if x < m else m + y)))
    m = ord_max(a, b)
    base = _pairs_below(m)
    if a < m:
        return check_bound(_add_unchecked(base, a))
    return check_bound(_add_unchecked(_add_unchecked(base, m), b))


def godel_pair_int(x: int, y: int) -> int:
    """Finite fast path used by pre-codes."""
    m = max(x, y)
    return m * m + (x if x < m else m + y)


def godel_unpair_int(o: int) -> Tuple[int, int]:
    m = isqrt(o)
    r = o - m * m
    if r < m:
        return r, m
    return m, r - m


def godel_unpair(o: OrdinalLike) -> OrdPair:
    o = Ordinal.of(o)
    if o.is_finite():
        x, y = godel_unpair_int(o.to_int())
        return OrdPair.of(x, y)
    # Greedy CNF search for the largest m with _pairs_below(m) <= o.
    m = ZERO
    for e in range(_finite_exponent(o.lead_exponent()), -1, -1):
        coeff = 0
        while True:
            candidate = _add_unchecked(m, Ordinal.omega_power(e, coeff + 1))
            if o < _pairs_below(candidate):
                break
            coeff += 1
        m = _add_unchecked(m, Ordinal.omega_power(e, coeff))
    rest = ord_left_sub(o, _pairs_below(m))
    if rest < m:
        return OrdPair(rest, m)
    return OrdPair(m, ord_left_sub(rest, m))


# -- notation ------------------------------------------------------------

def format_ordinal(o: Ordinal) -> str:
    if o.is_zero():
        return '0'
    parts = []
    for exp, coeff in o.terms:
        if exp.is_zero():
            parts.append(str(coeff))
            continue
        if exp == ONE:
            base = 'w'
        else:
            text = format_ordinal(exp)
            base = f"w^{text}" if exp.is_finite() or text == 'w' else f"w^({text})"
        parts.append(base if coeff == 1 else f"{base}*{coeff}")
    return '+'.join(parts)


class _OrdinalParser:
    def __init__(self, text: str):
        self.text = text.replace(' ', '')
        self.pos = 0

    def error(self, message: str):
        return fail(ErrorType.PARSE_ERROR, f"{message} at position {self.pos} in {self.text!r}",
                    ErrorSeverity.HIGH, position=self.pos, text=self.text)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ''

    def natural(self) -> int:
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected a natural number")
        return int(self.text[start:self.pos])

    def sum(self) -> Ordinal:
        value = self.term()
        while self.peek() == '+':
            self.pos += 1
            value = _add_unchecked(value, self.term())
        return value

    def term(self) -> Ordinal:
        if self.peek().isdigit():
            return Ordinal.of(self.natural())
        if self.peek() != 'w':
            raise self.error("expected 'w' or a natural number")
        self.pos += 1
        exponent = ONE
        if self.peek() == '^':
            self.pos += 1
            if self.peek() == '(':
                self.pos += 1
                exponent = self.sum()
                if self.peek() != ')':
                    raise self.error("expected ')'")
                self.pos += 1
            elif self.peek() == 'w':
                self.pos += 1
                exponent = OMEGA
            else:
                exponent = Ordinal.of(self.natural())
        coeff = 1
        if self.peek() == '*':
            self.pos += 1
            coeff = self.natural()
        return Ordinal.omega_power(exponent, coeff)

    def parse(self) -> Ordinal:
        if not self.text:
            raise self.error("empty ordinal")
        value = self.sum()
        if self.pos != len(self.text):
            raise self.error("unexpected trailing input")
        return value


def parse_ordinal(text: str, bounded: bool = True) -> Ordinal:
    value = _OrdinalParser(text).parse()
    return check_bound(value) if bounded else value
