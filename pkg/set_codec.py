"""High-level codes of sets.

A pre-code is a finite set of Gödel-pair values g(β, γ), one for each
membership d(β) ∈ d(γ) among the nodes 0..domain-1; a code picks one node
``rho``. Nodes are natural numbers here, so the finite Gödel pairing of
``ordinal.godel_pair_int`` is used throughout.
"""
import logging
import random
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from error_handler import ErrorSeverity, ErrorType, RealizabilityError, fail
from hfset import EMPTY, HFSet, hf, sort_key, transitive_closure
from ordinal import godel_pair_int, godel_unpair_int

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PreCode:
    pairs: FrozenSet[int]
    domain: int

    def __post_init__(self):
        for value in self.pairs:
            beta, gamma = godel_unpair_int(value)
            if beta >= self.domain or gamma >= self.domain:
                raise fail(ErrorType.INVALID_CODE,
                           f"pair g({beta},{gamma}) = {value} mentions a node outside domain {self.domain}",
                           ErrorSeverity.HIGH, pair=value, domain=self.domain)
        self._validate()

    @cached_property
    def graph(self) -> nx.DiGraph:
        """Edge β → γ for every membership d(β) ∈ d(γ)."""
        g = nx.DiGraph()
        g.add_nodes_from(range(self.domain))
        g.add_edges_from(godel_unpair_int(value) for value in self.pairs)
        return g

    @cached_property
    def members(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(sorted(self.graph.predecessors(node))) for node in range(self.domain))

    @cached_property
    def ranks(self) -> Tuple[int, ...]:
        """Height of each node in the membership graph; members come first in topological order."""
        height = [0] * self.domain
        for node in nx.topological_sort(self.graph):
            for member in self.graph.predecessors(node):
                height[node] = max(height[node], height[member] + 1)
        return tuple(height)

    def _validate(self) -> None:
        if self.domain < 1:
            raise fail(ErrorType.INVALID_CODE, "a pre-code needs at least one node", ErrorSeverity.HIGH)
        if not nx.is_directed_acyclic_graph(self.graph):
            raise fail(ErrorType.INVALID_CODE, "membership graph is not well-founded", ErrorSeverity.HIGH,
                       cycle=list(nx.find_cycle(self.graph)))
        seen: Dict[Tuple[int, ...], int] = {}
        for node, node_members in enumerate(self.members):
            if node_members in seen:
                raise fail(ErrorType.INVALID_CODE,
                           f"nodes {seen[node_members]} and {node} have the same members (extensionality)",
                           ErrorSeverity.HIGH)
            seen[node_members] = node
        tops = [node for node in range(self.domain) if self.graph.out_degree(node) == 0]
        if len(tops) != 1:
            raise fail(ErrorType.INVALID_CODE, f"pre-code has {len(tops)} top nodes, expected one",
                       ErrorSeverity.HIGH, tops=tops)
        below = nx.ancestors(self.graph, tops[0]) | {tops[0]}
        if len(below) != self.domain:
            raise fail(ErrorType.INVALID_CODE, "some node lies outside the transitive closure of the top",
                       ErrorSeverity.HIGH)

    @property
    def top(self) -> int:
        return next(node for node in range(self.domain) if self.graph.out_degree(node) == 0)


@dataclass(frozen=True)
class Code:
    rho: int
    pre: PreCode

    def __post_init__(self):
        if not 0 <= self.rho < self.pre.domain:
            raise fail(ErrorType.INVALID_CODE, f"rho {self.rho} outside domain {self.pre.domain}",
                       ErrorSeverity.HIGH)

    def members(self, node: Optional[int] = None) -> Tuple[int, ...]:
        return self.pre.members[self.rho if node is None else node]

    def at(self, node: int) -> 'Code':
        """The code of d(node) on the same pre-code."""
        return Code(node, self.pre)

    def element_codes(self) -> List['Code']:
        return [self.at(node) for node in self.members()]

    def __str__(self) -> str:
        return format_code(self)


@dataclass(frozen=True)
class CodeIso:
    mapping: Tuple[Tuple[int, int], ...]

    def as_dict(self) -> Dict[int, int]:
        return dict(self.mapping)

    def __str__(self) -> str:
        return 'iso(' + ' '.join(f"{a}->{b}" for a, b in self.mapping) + ')'


def make_precode(edges: Iterable[Tuple[int, int]], domain: int) -> PreCode:
    return PreCode(frozenset(godel_pair_int(b, g) for b, g in edges), domain)


def _code_from_order(x: HFSet, nodes: Sequence[HFSet]) -> Code:
    index = {node: i for i, node in enumerate(nodes)}
    edges = [(index[y], index[z]) for z in nodes for y in z.elements]
    return Code(index[x], make_precode(edges, len(nodes)))


@lru_cache(maxsize=4096)
def build_code(x: HFSet) -> Code:
    """Canonical code: tc({x}) numbered in rank-then-order order."""
    nodes = transitive_closure(hf(x))
    return _code_from_order(x, nodes)


@lru_cache(maxsize=4096)
def build_code_scrambled(x: HFSet, seed: int) -> Code:
    """Seed 0 reverses the canonical numbering; other seeds shuffle it, odd seeds
    add {x} as a junk top node outside the essential domain."""
    ambient = hf(hf(x)) if seed % 2 == 1 else hf(x)
    nodes = transitive_closure(ambient)
    if seed == 0:
        nodes = list(reversed(nodes))
    else:
        random.Random(seed).shuffle(nodes)
    return _code_from_order(x, nodes)


@lru_cache(maxsize=None)
def decode_node(pre: PreCode, node: int) -> HFSet:
    return HFSet(decode_node(pre, m) for m in pre.members[node])


def decode_set(c: Code) -> HFSet:
    """Mostowski collapse of the membership graph at rho."""
    return decode_node(c.pre, c.rho)


def essdom(c: Code) -> FrozenSet[int]:
    return frozenset(nx.dfs_preorder_nodes(c.pre.graph.reverse(copy=False), c.rho))


@lru_cache(maxsize=None)
def nodes_equal(a: Code, b: Code, alpha: int, beta: int) -> bool:
    """d_a(alpha) = d_b(beta), by recursion on members; both sides drop in rank at every call."""
    if a.pre.ranks[alpha] != b.pre.ranks[beta] or len(a.members(alpha)) != len(b.members(beta)):
        return False
    return all(any(nodes_equal(a, b, m, n) for n in b.members(beta)) for m in a.members(alpha))


@lru_cache(maxsize=None)
def subset_check(a: Code, b: Code, alpha: int, beta: int) -> int:
    """1 iff d_a(alpha) ⊆ d_b(beta)."""
    return int(all(any(nodes_equal(a, b, m, n) for n in b.members(beta)) for m in a.members(alpha)))


@lru_cache(maxsize=None)
def decode_match(a: Code, b: Code, alpha: int) -> Optional[int]:
    """The β with d_b(β) = d_a(alpha), or None when there is none."""
    for beta in range(b.pre.domain):
        if nodes_equal(a, b, alpha, beta):
            return beta
    return None


def merge_codes(codes: Sequence[Code]) -> Code:
    """A code of {decode_set(a) | a in codes}.

    The essential parts of the input codes are laid side by side; a node that
    decodes like one already placed is identified with it, and a new top node
    collects the rho nodes.
    """
    placed: List[Tuple[Code, int]] = []
    lookup: Dict[Tuple[int, int], int] = {}
    tops = set()
    for index, code in enumerate(codes):
        for node in sorted(essdom(code)):
            target = next((position for position, (other, other_node) in enumerate(placed)
                           if decode_match(code, other, node) == other_node), None)
            if target is None:
                target = len(placed)
                placed.append((code, node))
            lookup[(index, node)] = target
        tops.add(lookup[(index, code.rho)])
    edges = {(lookup[(index, member)], target)
             for (index, node), target in lookup.items()
             for member in codes[index].members(node)}
    new_top = len(placed)
    edges |= {(t, new_top) for t in tops}
    logger.debug(f"merged {len(codes)} codes into a pre-code of domain {new_top + 1}")
    return Code(new_top, make_precode(edges, new_top + 1))


def _as_predicate(pred) -> Callable[[Code], object]:
    if callable(pred) and not hasattr(pred, 'program'):
        return pred
    from rterm import as_function
    return as_function(pred)


def separate(c: Code, pred) -> Code:
    """A code of the elements of decode_set(c) whose element codes satisfy ``pred``."""
    fn = _as_predicate(pred)
    stack = []
    for element in c.element_codes():
        try:
            verdict = fn(element)
        except RealizabilityError as e:
            raise fail(ErrorType.PRED_FAILURE, f"predicate failed on element node {element.rho}: {e}",
                       node=element.rho, cause=e.error_type.value)
        if verdict not in (0, 1, True, False):
            raise fail(ErrorType.PRED_FAILURE, f"predicate returned {verdict!r}, not a bit", node=element.rho)
        if verdict:
            stack.append(element)
    return merge_codes(stack)


def build_iso(a: Code, b: Code) -> Optional[CodeIso]:
    """The code isomorphism essdom(a) → essdom(b), or None when the codes decode differently."""
    mapping = []
    for alpha in sorted(essdom(a)):
        beta = decode_match(a, b, alpha)
        if beta is None:
            return None
        mapping.append((alpha, beta))
    iso = CodeIso(tuple(mapping))
    if iso.as_dict().get(a.rho) != b.rho:
        return None
    return iso


def is_code_iso(iso, a: Code, b: Code) -> bool:
    """Root-preserving, membership-preserving bijection essdom(a) → essdom(b)."""
    if not isinstance(iso, CodeIso):
        return False
    f = iso.as_dict()
    if set(f) != essdom(a) or set(f.values()) != essdom(b) or len(set(f.values())) != len(f):
        return False
    if f[a.rho] != b.rho:
        return False
    return all(set(f[m] for m in a.members(node)) == set(b.members(f[node])) for node in f)


def restrict_to_essdom(c: Code) -> Code:
    """Drop non-essential nodes and renumber the rest in increasing order."""
    keep = sorted(essdom(c))
    index = {node: i for i, node in enumerate(keep)}
    edges = [(index[m], index[n]) for n in keep for m in c.members(n)]
    return Code(index[c.rho], make_precode(edges, len(keep)))


def element_node(c: Code, x: HFSet) -> Optional[int]:
    """The member node of rho that decodes to x."""
    for node in c.members():
        if decode_node(c.pre, node) == x:
            return node
    return None


def first_element(c: Code) -> Optional[Code]:
    """The element of least node number: depends on the code, not only the set."""
    members = c.members()
    return c.at(members[0]) if members else None


def least_element(c: Code) -> Optional[HFSet]:
    """The canonically least element of the decoded set."""
    decoded = decode_set(c)
    return min(decoded.elements, key=sort_key) if len(decoded) else None


def empty_code() -> Code:
    return build_code(EMPTY)


# -- code literals -------------------------------------------------------

_CODE = re.compile(r'^\s*code\(\s*(\d+)\s*;\s*([\d,\s]*)\s*;\s*(\d+)\s*\)\s*$')


def parse_code(text: str) -> Code:
    """``code(rho; p1,p2,...; domain)``"""
    match = _CODE.match(text)
    if not match:
        raise fail(ErrorType.PARSE_ERROR, f"bad code literal {text!r}", ErrorSeverity.HIGH,
                   position=0, text=text)
    pairs = frozenset(int(p) for p in match.group(2).replace(' ', '').split(',') if p)
    return Code(int(match.group(1)), PreCode(pairs, int(match.group(3))))


def format_code(c: Code) -> str:
    pairs = ','.join(str(p) for p in sorted(c.pre.pairs))
    return f"code({c.rho}; {pairs}; {c.pre.domain})"
