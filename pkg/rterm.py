"""Realiser terms and their interpreter.

A realiser is a closed program term together with a parameter value. The
program is evaluated with the parameter bound to ``P`` and must produce a
function, which is then applied to the input. Evaluation is big-step with a
fuel budget; every evaluation step costs one unit. Tail positions (``app``,
``if``, ``let``) loop instead of recursing, so a diverging recursion runs out
of fuel rather than out of stack.

Term syntax::

    17  {}  x                       literal naturals, set literals, names
    (lam x body) (fix f x body)     functions; fix binds f to itself
    (app f a) (f a b ...)           application, curried
    (pair a b) (fst t) (snd t)      pairs
    (if c t e) (let x v body)       c is tested against 0
    (prim name arg ...)             primitive operation
    (code rho (p ...) domain)       code literal
    (quote FORMULA)                 formula literal
    (realizer PROGRAM PARAM)        realiser literal
    (iso (a b) ...) (tuple v ...) nil
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple, Union

from config import config
from error_handler import ErrorSeverity, ErrorType, RealizabilityError, fail
from formula import format_formula, parse_formula
from hfset import HFSet, format_set, parse_set
from ordinal import Ordinal
from set_codec import Code, CodeIso, PreCode, build_code, build_iso, decode_match, decode_set, essdom

logger = logging.getLogger(__name__)


# -- terms ---------------------------------------------------------------

@dataclass(frozen=True)
class Lit:
    value: Any = field(hash=False)

    def __hash__(self):
        return hash(format_value(self.value))


@dataclass(frozen=True)
class Ref:
    name: str


@dataclass(frozen=True)
class Lam:
    param: str
    body: 'RTerm'


@dataclass(frozen=True)
class Fix:
    name: str
    param: str
    body: 'RTerm'


@dataclass(frozen=True)
class App:
    fn: 'RTerm'
    arg: 'RTerm'


@dataclass(frozen=True)
class MkPair:
    left: 'RTerm'
    right: 'RTerm'


@dataclass(frozen=True)
class Fst:
    term: 'RTerm'


@dataclass(frozen=True)
class Snd:
    term: 'RTerm'


@dataclass(frozen=True)
class If:
    cond: 'RTerm'
    then: 'RTerm'
    other: 'RTerm'


@dataclass(frozen=True)
class Let:
    name: str
    value: 'RTerm'
    body: 'RTerm'


@dataclass(frozen=True)
class Prim:
    name: str
    args: Tuple['RTerm', ...] = ()


RTerm = Union[Lit, Ref, Lam, Fix, App, MkPair, Fst, Snd, If, Let, Prim]


def apps(fn: RTerm, *args: RTerm) -> RTerm:
    for arg in args:
        fn = App(fn, arg)
    return fn


def prim(name: str, *args: RTerm) -> Prim:
    return Prim(name, tuple(args))


# -- values --------------------------------------------------------------

@dataclass(frozen=True)
class VPair:
    left: Any
    right: Any


@dataclass
class Closure:
    param: str
    body: RTerm
    env: Dict[str, Any]
    self_name: Optional[str] = None


@dataclass(frozen=True)
class Realizer:
    program: RTerm
    parameter: Any = field(default=None, hash=False)

    def __str__(self) -> str:
        return format_realizer(self)


def realizer(program: Union[RTerm, str], parameter: Any = None) -> Realizer:
    if isinstance(program, str):
        program = parse_term(program)
    return Realizer(program, parameter)


# -- primitives ----------------------------------------------------------

@dataclass(frozen=True)
class PrimSpec:
    arity: int
    fn: Callable[..., Any]
    needs_interpreter: bool = False


PRIMITIVES: Dict[str, PrimSpec] = {}


def register_primitive(name: str, arity: int, needs_interpreter: bool = False):
    def decorator(fn):
        PRIMITIVES[name] = PrimSpec(arity, fn, needs_interpreter)
        return fn
    return decorator


def stuck(message: str, **context) -> RealizabilityError:
    return fail(ErrorType.STUCK_TERM, message, **context)


@register_primitive('eq', 2)
def _prim_eq(x, y):
    return 1 if x == y else 0


@register_primitive('lt', 2)
def _prim_lt(x, y):
    return 1 if x < y else 0


@register_primitive('add', 2)
def _prim_add(x, y):
    return x + y


@register_primitive('len', 1)
def _prim_len(xs):
    if not isinstance(xs, tuple):
        raise stuck(f"len of a non-tuple {type(xs).__name__}")
    return len(xs)


@register_primitive('nth', 2)
def _prim_nth(xs, i):
    if not isinstance(xs, tuple) or not isinstance(i, int) or not 0 <= i < len(xs):
        raise stuck(f"nth {i} outside the tuple")
    return xs[i]


@register_primitive('find', 2, needs_interpreter=True)
def _prim_find(interp, xs, fn):
    """First element x with fn(x) != 0, or nil."""
    for x in _as_tuple(xs):
        if interp.apply(fn, x) != 0:
            return x
    return None


@register_primitive('map', 2, needs_interpreter=True)
def _prim_map(interp, xs, fn):
    return tuple(interp.apply(fn, x) for x in _as_tuple(xs))


@register_primitive('is_nil', 1)
def _prim_is_nil(x):
    return 1 if x is None else 0


def _as_tuple(xs) -> tuple:
    if not isinstance(xs, tuple):
        raise stuck(f"expected a tuple, got {type(xs).__name__}")
    return xs


def _as_code(c) -> Code:
    if not isinstance(c, Code):
        raise stuck(f"expected a code, got {type(c).__name__}")
    return c


@register_primitive('members', 1)
def _prim_members(c):
    return tuple(_as_code(c).members())


@register_primitive('essdom', 1)
def _prim_essdom(c):
    return tuple(sorted(essdom(_as_code(c))))


@register_primitive('at', 2)
def _prim_at(c, node):
    return _as_code(c).at(node)


@register_primitive('rho', 1)
def _prim_rho(c):
    return _as_code(c).rho


@register_primitive('decode', 1)
def _prim_decode(c):
    return decode_set(_as_code(c))


@register_primitive('encode', 1)
def _prim_encode(x):
    if not isinstance(x, HFSet):
        raise stuck(f"encode expects a set, got {type(x).__name__}")
    return build_code(x)


@register_primitive('iso', 2)
def _prim_iso(a, b):
    """The code isomorphism a → b, or 0 when the codes decode differently."""
    iso = build_iso(_as_code(a), _as_code(b))
    return iso if iso is not None else 0


@register_primitive('match', 3)
def _prim_match(a, b, alpha):
    return decode_match(_as_code(a), _as_code(b), alpha)


# -- interpreter ---------------------------------------------------------

class Interpreter:
    def __init__(self, fuel: Optional[int] = None):
        self.initial_fuel = fuel if fuel is not None else config.DEFAULT_FUEL
        self.fuel = self.initial_fuel

    def tick(self, amount: int = 1) -> None:
        self.fuel -= amount
        if self.fuel < 0:
            raise fail(ErrorType.OUT_OF_FUEL, f"interpreter ran out of fuel ({self.initial_fuel} steps)",
                       fuel=self.initial_fuel)

    def eval(self, term: RTerm, env: Mapping[str, Any]) -> Any:
        while True:
            self.tick()
            if isinstance(term, Lit):
                return term.value
            if isinstance(term, Ref):
                if term.name not in env:
                    raise stuck(f"unbound name {term.name!r}", name=term.name)
                return env[term.name]
            if isinstance(term, Lam):
                return Closure(term.param, term.body, dict(env))
            if isinstance(term, Fix):
                return Closure(term.param, term.body, dict(env), self_name=term.name)
            if isinstance(term, MkPair):
                return VPair(self.eval(term.left, env), self.eval(term.right, env))
            if isinstance(term, (Fst, Snd)):
                value = self.eval(term.term, env)
                if not isinstance(value, VPair):
                    raise stuck(f"projection from a non-pair {type(value).__name__}")
                return value.left if isinstance(term, Fst) else value.right
            if isinstance(term, Prim):
                return self.call_primitive(term.name, [self.eval(a, env) for a in term.args])
            if isinstance(term, If):
                cond = self.eval(term.cond, env)
                term = term.other if cond == 0 or cond is None else term.then
                continue
            if isinstance(term, Let):
                env = dict(env)
                env[term.name] = self.eval(term.value, env)
                term = term.body
                continue
            if isinstance(term, App):
                fn = self.eval(term.fn, env)
                arg = self.eval(term.arg, env)
                if isinstance(fn, Closure):
                    env = self._enter(fn, arg)
                    term = fn.body
                    continue
                return self.apply(fn, arg)
            raise stuck(f"not a term: {term!r}")

    def _enter(self, fn: Closure, arg: Any) -> Dict[str, Any]:
        env = dict(fn.env)
        if fn.self_name is not None:
            env[fn.self_name] = fn
        env[fn.param] = arg
        return env

    def apply(self, fn: Any, arg: Any) -> Any:
        self.tick()
        if isinstance(fn, Closure):
            return self.eval(fn.body, self._enter(fn, arg))
        if isinstance(fn, Realizer):
            program = self.eval(fn.program, {'P': fn.parameter})
            if not isinstance(program, (Closure, Realizer)):
                raise stuck("realiser program does not evaluate to a function")
            return self.apply(program, arg)
        raise stuck(f"cannot apply a {type(fn).__name__}", value=format_value(fn))

    def call_primitive(self, name: str, args: List[Any]) -> Any:
        spec = PRIMITIVES.get(name)
        if spec is None:
            raise stuck(f"unknown primitive {name!r}", name=name)
        if len(args) != spec.arity:
            raise fail(ErrorType.ARITY_MISMATCH, f"primitive {name} takes {spec.arity} arguments, got {len(args)}",
                       name=name)
        if spec.needs_interpreter:
            return spec.fn(self, *args)
        return spec.fn(*args)


def interpret(r: Any, arg: Any, fuel: Optional[int] = None) -> Any:
    """r(arg) with a fresh fuel budget."""
    interp = Interpreter(fuel)
    return interp.apply(r, arg)


def as_function(r: Any, fuel: Optional[int] = None) -> Callable[[Any], Any]:
    return lambda value: interpret(r, value, fuel)


def ordinal_function(r: Any, fuel: Optional[int] = None) -> Callable[[Ordinal], Any]:
    """A realiser on naturals seen as a function on finite ordinals; results come back unwrapped, so a
    predicate yields its 0/1 bit."""
    def fn(alpha: Ordinal):
        n = alpha.to_int() if isinstance(alpha, Ordinal) else alpha
        if n is None:
            raise fail(ErrorType.NOT_DECIDABLE, f"realiser applied to the infinite ordinal {alpha}")
        return interpret(r, n, fuel)
    return fn


# -- syntax --------------------------------------------------------------

def _read_sexpr(text: str):
    tokens, pos = [], 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
        elif ch in '()':
            tokens.append((ch, pos))
            pos += 1
        elif ch == '{':
            depth, start = 0, pos
            while pos < len(text):
                depth += {'{': 1, '}': -1}.get(text[pos], 0)
                pos += 1
                if depth == 0:
                    break
            tokens.append((text[start:pos], start))
        else:
            start = pos
            while pos < len(text) and not text[pos].isspace() and text[pos] not in '(){}':
                pos += 1
            tokens.append((text[start:pos], start))

    def error(message: str, position: int):
        return fail(ErrorType.PARSE_ERROR, f"{message} at position {position}", ErrorSeverity.HIGH,
                    position=position, text=text)

    def read(index: int):
        if index >= len(tokens):
            raise error("unexpected end of term", len(text))
        token, where = tokens[index]
        if token == ')':
            raise error("unexpected ')'", where)
        if token != '(':
            return token, index + 1
        items, index = [], index + 1
        while index < len(tokens) and tokens[index][0] != ')':
            item, index = read(index)
            items.append(item)
        if index >= len(tokens):
            raise error("missing ')'", len(text))
        return items, index + 1

    tree, index = read(0)
    if index != len(tokens):
        raise error("trailing input", tokens[index][1])
    return tree


def _unread(tree) -> str:
    if isinstance(tree, list):
        return '(' + ' '.join(_unread(t) for t in tree) + ')'
    return tree


def _value_from_tree(tree) -> Any:
    if isinstance(tree, str):
        if tree == 'nil':
            return None
        if tree.isdigit():
            return int(tree)
        if tree.startswith('{'):
            return parse_set(tree)
        raise fail(ErrorType.PARSE_ERROR, f"not a value literal: {tree!r}", position=0, text=tree)
    head = tree[0] if tree else None
    if head == 'code':
        rho, pairs, domain = tree[1], tree[2], tree[3]
        return Code(int(rho), PreCode(frozenset(int(p) for p in pairs), int(domain)))
    if head == 'quote':
        return parse_formula(_unread(tree[1]))
    if head == 'realizer':
        return Realizer(_term_from_tree(tree[1]), _value_from_tree(tree[2]))
    if head == 'iso':
        return CodeIso(tuple((int(a), int(b)) for a, b in tree[1:]))
    if head == 'tuple':
        return tuple(_value_from_tree(t) for t in tree[1:])
    if head == 'vpair':
        return VPair(_value_from_tree(tree[1]), _value_from_tree(tree[2]))
    raise fail(ErrorType.PARSE_ERROR, f"not a value literal: {_unread(tree)}", position=0, text=_unread(tree))


_VALUE_HEADS = {'code', 'quote', 'realizer', 'iso', 'tuple', 'vpair'}


def _term_from_tree(tree) -> RTerm:
    if isinstance(tree, str):
        if tree == 'nil' or tree.isdigit() or tree.startswith('{'):
            return Lit(_value_from_tree(tree))
        return Ref(tree)
    if not tree:
        raise fail(ErrorType.PARSE_ERROR, "empty application ()", position=0, text='()')
    head = tree[0]
    if isinstance(head, str) and head in _VALUE_HEADS:
        return Lit(_value_from_tree(tree))
    if head == 'lam':
        return Lam(tree[1], _term_from_tree(tree[2]))
    if head == 'fix':
        return Fix(tree[1], tree[2], _term_from_tree(tree[3]))
    if head == 'pair':
        return MkPair(_term_from_tree(tree[1]), _term_from_tree(tree[2]))
    if head == 'fst':
        return Fst(_term_from_tree(tree[1]))
    if head == 'snd':
        return Snd(_term_from_tree(tree[1]))
    if head == 'if':
        return If(*(_term_from_tree(t) for t in tree[1:4]))
    if head == 'let':
        return Let(tree[1], _term_from_tree(tree[2]), _term_from_tree(tree[3]))
    if head == 'prim':
        return Prim(tree[1], tuple(_term_from_tree(t) for t in tree[2:]))
    if head == 'app':
        return apps(*(_term_from_tree(t) for t in tree[1:]))
    return apps(*(_term_from_tree(t) for t in tree))


def parse_term(text: str) -> RTerm:
    return _term_from_tree(_read_sexpr(text))


def parse_value(text: str) -> Any:
    return _value_from_tree(_read_sexpr(text))


def parse_realizer(text: str) -> Realizer:
    value = parse_value(text)
    if not isinstance(value, Realizer):
        raise fail(ErrorType.PARSE_ERROR, "expected (realizer PROGRAM PARAM)", ErrorSeverity.HIGH,
                   position=0, text=text)
    return value


def format_value(value: Any) -> str:
    if value is None:
        return 'nil'
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    if isinstance(value, HFSet):
        return format_set(value)
    if isinstance(value, Code):
        pairs = ' '.join(str(p) for p in sorted(value.pre.pairs))
        return f"(code {value.rho} ({pairs}) {value.pre.domain})"
    if isinstance(value, CodeIso):
        return '(iso' + ''.join(f" ({a} {b})" for a, b in value.mapping) + ')'
    if isinstance(value, Realizer):
        return format_realizer(value)
    if isinstance(value, VPair):
        return f"(vpair {format_value(value.left)} {format_value(value.right)})"
    if isinstance(value, tuple):
        return '(tuple' + ''.join(' ' + format_value(v) for v in value) + ')'
    if isinstance(value, Closure):
        return f"<closure {value.param}>"
    try:
        return f"(quote {format_formula(value)})"
    except TypeError:
        return repr(value)


def format_term(term: RTerm) -> str:
    if isinstance(term, Lit):
        return format_value(term.value)
    if isinstance(term, Ref):
        return term.name
    if isinstance(term, Lam):
        return f"(lam {term.param} {format_term(term.body)})"
    if isinstance(term, Fix):
        return f"(fix {term.name} {term.param} {format_term(term.body)})"
    if isinstance(term, App):
        return f"(app {format_term(term.fn)} {format_term(term.arg)})"
    if isinstance(term, MkPair):
        return f"(pair {format_term(term.left)} {format_term(term.right)})"
    if isinstance(term, Fst):
        return f"(fst {format_term(term.term)})"
    if isinstance(term, Snd):
        return f"(snd {format_term(term.term)})"
    if isinstance(term, If):
        return f"(if {format_term(term.cond)} {format_term(term.then)} {format_term(term.other)})"
    if isinstance(term, Let):
        return f"(let {term.name} {format_term(term.value)} {format_term(term.body)})"
    if isinstance(term, Prim):
        return '(' + ' '.join(['prim', term.name] + [format_term(a) for a in term.args]) + ')'
    raise TypeError(f"not a term: {term!r}")


def format_realizer(r: Realizer) -> str:
    return f"(realizer {format_term(r.program)} {format_value(r.parameter)})"


# -- small library ---------------------------------------------------------

IDENTITY = Realizer(Lam('x', Ref('x')))


def constant_realizer(value: Any) -> Realizer:
    """Ignores its input and returns ``value``."""
    return Realizer(Lam('_', Ref('P')), value)
