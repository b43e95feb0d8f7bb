"""
Sign calculus for oriented hypergraphs.

The orientation of a hypergraph is the order of its odd constituents. This
module computes permutation parities and provides Draft, the mutable working
copy every composition and differential builds its terms on. Each constituent
of a Draft carries a token that survives reattachment, so the sign of a
generated term is the parity of the reordering from the word the term was
produced with to the word of the finished graph.
"""

import logging
from dataclasses import dataclass, field
from itertools import count
from typing import Any, Dict, Hashable, Iterator, List, Optional, Sequence, Tuple

from .exceptions import InternalConsistencyError
from .models import BLACK, WHITE, Flavor, Hypergraph, TokenParity, VertexRef, white


logger = logging.getLogger(__name__)

Token = Tuple[Any, ...]
Node = Tuple[Any, ...]


def permutation_sign(perm: Sequence[int]) -> int:
    """
    Sign of a permutation given in one-line notation.

    Args:
        perm: Images of 0..n-1

    Returns:
        +1 for even permutations, -1 for odd ones
    """
    n = len(perm)
    seen = [False] * n
    cycles = 0
    for start in range(n):
        if seen[start]:
            continue
        cycles += 1
        pos = start
        while not seen[pos]:
            seen[pos] = True
            pos = perm[pos]
    return -1 if (n - cycles) % 2 else 1


def sort_with_sign(items: Sequence[Any]) -> Tuple[List[Any], int, bool]:
    """
    Sort items and report the parity of the sorting permutation.

    Returns:
        Sorted list, sign of the reordering, and whether two items are equal
    """
    order = sorted(range(len(items)), key=lambda k: items[k])
    ordered = [items[k] for k in order]
    duplicate = any(ordered[k] == ordered[k + 1] for k in range(len(ordered) - 1))
    return ordered, permutation_sign(order), duplicate


def reorder_sign(source: Sequence[Hashable], target: Sequence[Hashable]) -> int:
    """
    Parity of the permutation turning one word of distinct tokens into another.

    Raises:
        InternalConsistencyError: If the words are not rearrangements of each other
    """
    if len(source) != len(target):
        raise InternalConsistencyError(
            f"orientation words differ in length: {len(source)} != {len(target)}"
        )
    position = {token: k for k, token in enumerate(source)}
    try:
        perm = [position[token] for token in target]
    except KeyError as e:
        raise InternalConsistencyError(f"token {e} missing from the source word") from e
    if len(position) != len(source):
        raise InternalConsistencyError("orientation word has repeated tokens")
    return permutation_sign(perm)


def is_odd(token: Token, parity: TokenParity) -> bool:
    kind = token[0]
    if kind == "e":
        return parity.edges_odd
    if kind == "f":
        return parity.flags_odd
    if kind == "s":
        return parity.stars_odd
    if kind == "b":
        return parity.blacks_odd
    return False


def is_black_node(node: Node) -> bool:
    return len(node) == 3 and node[0] == BLACK


_FRESH = count()


def fresh(kind: str) -> Token:
    """A token that cannot collide with any token read from a graph."""
    return (kind, "new", next(_FRESH))


@dataclass
class Draft:
    """
    Working copy of a hypergraph with tokenised constituents.

    Edges are (token, u, v), hyperedges are (star token, [(flag token, node)]),
    blacks are their own tokens. White nodes are VertexRef("w", i); black nodes
    are the black tokens ("b", side, j).
    """

    flavor: Flavor
    arity: int
    edges: List[Tuple[Token, Node, Node]] = field(default_factory=list)
    hyperedges: List[Tuple[Token, List[Tuple[Token, Node]]]] = field(default_factory=list)
    blacks: List[Token] = field(default_factory=list)

    @classmethod
    def from_graph(
        cls,
        g: Hypergraph,
        side: Hashable = 0,
        white_map: Optional[Dict[int, Node]] = None,
        arity: Optional[int] = None,
    ) -> "Draft":
        """
        Tokenise a graph.

        Args:
            g: Graph to copy
            side: Tag distinguishing the operands of a composition
            white_map: Optional map from white labels to nodes of the draft
            arity: Arity of the draft when white_map changes it
        """

        def node(v: VertexRef) -> Node:
            if v.kind == BLACK:
                return (BLACK, side, v.index)
            if white_map is not None:
                return white_map[v.index]
            return v

        edges = [(("e", side, k), node(u), node(v)) for k, (u, v) in enumerate(g.edges)]
        hyperedges = [
            (("s", side, h), [(("f", side, h, p), node(v)) for p, v in enumerate(he)])
            for h, he in enumerate(g.hyperedges)
        ]
        blacks = [(BLACK, side, j) for j in range(g.blacks)]
        return cls(
            flavor=g.flavor,
            arity=g.arity if arity is None else arity,
            edges=edges,
            hyperedges=hyperedges,
            blacks=blacks,
        )

    def copy(self) -> "Draft":
        return Draft(
            flavor=self.flavor,
            arity=self.arity,
            edges=list(self.edges),
            hyperedges=[(star, list(flags)) for star, flags in self.hyperedges],
            blacks=list(self.blacks),
        )

    def tokens(self) -> List[Token]:
        """All tokens in orientation order, odd or not."""
        word: List[Token] = [token for token, _, _ in self.edges]
        for star, flags in self.hyperedges:
            word.extend(token for token, _ in flags)
            word.append(star)
        word.extend(self.blacks)
        return word

    def odd(self, tokens: Sequence[Token]) -> List[Token]:
        parity = self.flavor.parity
        return [token for token in tokens if is_odd(token, parity)]

    def word(self) -> List[Token]:
        return self.odd(self.tokens())

    def nodes(self) -> List[Node]:
        return [white(i) for i in range(self.arity)] + list(self.blacks)

    def items_at(self, node: Node) -> List[Tuple[str, int, int]]:
        """Attachment points at a node: ("edge", k, end) and ("flag", h, p)."""
        items = []
        for k, (_, u, v) in enumerate(self.edges):
            if u == node:
                items.append(("edge", k, 0))
            if v == node:
                items.append(("edge", k, 1))
        for h, (_, flags) in enumerate(self.hyperedges):
            for p, (_, x) in enumerate(flags):
                if x == node:
                    items.append(("flag", h, p))
        return items

    def attach(self, item: Tuple[str, int, int], node: Node) -> None:
        kind, a, b = item
        if kind == "edge":
            token, u, v = self.edges[a]
            self.edges[a] = (token, node, v) if b == 0 else (token, u, node)
        else:
            star, flags = self.hyperedges[a]
            flags[b] = (flags[b][0], node)

    def remove_black(self, node: Node) -> int:
        """Drop a black node and return the number of odd tokens preceding it."""
        word = self.word()
        position = word.index(node) if node in word else 0
        self.blacks.remove(node)
        return position

    def is_degenerate(self) -> bool:
        """True if an edge is a tadpole or a hyperedge meets a vertex twice."""
        if any(u == v for _, u, v in self.edges):
            return True
        for _, flags in self.hyperedges:
            targets = [x for _, x in flags]
            if len(set(targets)) != len(targets):
                return True
        return False

    def to_graph(self) -> Hypergraph:
        index = {b: VertexRef(BLACK, j) for j, b in enumerate(self.blacks)}

        def ref(node: Node) -> VertexRef:
            if node[0] == WHITE and len(node) == 2:
                return VertexRef(WHITE, node[1])
            return index[node]

        return Hypergraph.model_construct(
            flavor=self.flavor,
            arity=self.arity,
            blacks=len(self.blacks),
            edges=tuple((ref(u), ref(v)) for _, u, v in self.edges),
            hyperedges=tuple(tuple(ref(x) for _, x in flags) for _, flags in self.hyperedges),
        )


def ordered_splits(items: Sequence[Any]) -> Iterator[Tuple[List[Any], List[Any]]]:
    """All ways to distribute items over two labelled sides."""
    n = len(items)
    for mask in range(1 << n):
        left = [items[k] for k in range(n) if not mask >> k & 1]
        right = [items[k] for k in range(n) if mask >> k & 1]
        yield left, right
