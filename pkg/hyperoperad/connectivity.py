"""
Internal connectivity of hypergraphs.

White vertices are deleted, and what remains of a hypergraph (black vertices,
star vertices and the edges and flags between them) is split into connected
components with networkx. Shared white vertices never connect components.
"""

import logging
from typing import Dict, List, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field

from .models import BLACK, Hypergraph


logger = logging.getLogger(__name__)


class InternalComponent(BaseModel):
    """One internally connected piece of a hypergraph."""

    model_config = ConfigDict(frozen=True)

    blacks: Tuple[int, ...] = Field(default=(), description="Black vertices of the ambient graph")
    edges: Tuple[int, ...] = Field(default=(), description="Positions of edges in the ambient edge list")
    hyperedges: Tuple[int, ...] = Field(default=(), description="Positions of hyperedges in the ambient list")
    genus: int = Field(default=0, ge=0, description="First Betti number with whites split off")
    graph: Hypergraph = Field(..., description="The piece as a hypergraph on the same white vertices")


def internal_structure(g: Hypergraph) -> nx.MultiGraph:
    """
    Incidence multigraph of g with white vertices erased.

    Nodes are ("b", j) for black vertices, ("s", h) for stars and ("e", k) for
    edges with no black endpoint. Black-to-black edges become graph edges;
    flags at black vertices become star-to-black edges.
    """
    structure = nx.MultiGraph()
    structure.add_nodes_from((BLACK, j) for j in range(g.blacks))
    for h, he in enumerate(g.hyperedges):
        structure.add_node(("s", h))
        for v in he:
            if v.is_black:
                structure.add_edge(("s", h), (BLACK, v.index))
    for k, (u, v) in enumerate(g.edges):
        if u.is_black and v.is_black:
            structure.add_edge((BLACK, u.index), (BLACK, v.index), key=("e", k))
        elif not u.is_black and not v.is_black:
            structure.add_node(("e", k))
    return structure


def _cyclomatic(structure: nx.MultiGraph, nodes) -> int:
    sub = structure.subgraph(nodes)
    return sub.number_of_edges() - sub.number_of_nodes() + 1


def internal_components(g: Hypergraph) -> List[InternalComponent]:
    """
    Split g into internally connected pieces.

    The pieces are ordered by their smallest constituent so the result is
    deterministic for a canonical graph. The empty graph has no pieces.
    """
    structure = internal_structure(g)
    edge_owner: Dict[int, Tuple[str, int]] = {}
    for k, (u, v) in enumerate(g.edges):
        if u.is_black:
            edge_owner[k] = (BLACK, u.index)
        elif v.is_black:
            edge_owner[k] = (BLACK, v.index)
        else:
            edge_owner[k] = ("e", k)

    pieces = []
    for nodes in nx.connected_components(structure):
        blacks = tuple(sorted(j for kind, j in nodes if kind == BLACK))
        hyperedges = tuple(sorted(h for kind, h in nodes if kind == "s"))
        edges = tuple(sorted(k for k, owner in edge_owner.items() if owner in nodes))
        pieces.append((blacks, edges, hyperedges, _cyclomatic(structure, nodes)))

    pieces.sort(key=lambda p: (p[0][:1] or (-1,), p[1][:1] or (-1,), p[2][:1] or (-1,)))
    return [_component(g, blacks, edges, hyperedges, genus) for blacks, edges, hyperedges, genus in pieces]


def _component(g: Hypergraph, blacks, edges, hyperedges, genus: int) -> InternalComponent:
    renumber = {j: k for k, j in enumerate(blacks)}

    def ref(v):
        return type(v)(BLACK, renumber[v.index]) if v.is_black else v

    piece = Hypergraph.model_construct(
        flavor=g.flavor,
        arity=g.arity,
        blacks=len(blacks),
        edges=tuple((ref(g.edges[k][0]), ref(g.edges[k][1])) for k in edges),
        hyperedges=tuple(tuple(ref(v) for v in g.hyperedges[h]) for h in hyperedges),
    )
    return InternalComponent(blacks=blacks, edges=edges, hyperedges=hyperedges, genus=genus, graph=piece)


def internal_genus(g: Hypergraph) -> int:
    """Total first Betti number of the internal structure."""
    structure = internal_structure(g)
    return sum(_cyclomatic(structure, nodes) for nodes in nx.connected_components(structure))


def is_forest(g: Hypergraph) -> bool:
    return internal_genus(g) == 0


def is_internally_connected(g: Hypergraph) -> bool:
    return len(internal_components(g)) == 1


def reachable_whites(g: Hypergraph) -> Dict[int, set]:
    """
    White vertices reachable from each black vertex.

    Paths run through black and star vertices and stop at white vertices.
    """
    structure = nx.Graph()
    structure.add_nodes_from((BLACK, j) for j in range(g.blacks))
    whites_at: Dict[Tuple[str, int], set] = {}
    for h, he in enumerate(g.hyperedges):
        star = ("s", h)
        structure.add_node(star)
        for v in he:
            if v.is_black:
                structure.add_edge(star, (BLACK, v.index))
            else:
                whites_at.setdefault(star, set()).add(v.index)
    for u, v in g.edges:
        if u.is_black and v.is_black:
            structure.add_edge((BLACK, u.index), (BLACK, v.index))
        elif u.is_black:
            whites_at.setdefault((BLACK, u.index), set()).add(v.index)
        elif v.is_black:
            whites_at.setdefault((BLACK, v.index), set()).add(u.index)

    reach: Dict[int, set] = {}
    for nodes in nx.connected_components(structure):
        found = set()
        for node in nodes:
            found |= whites_at.get(node, set())
        for kind, j in nodes:
            if kind == BLACK:
                reach[j] = found
    return reach


def is_connected(g: Hypergraph) -> bool:
    """Ordinary connectivity with every vertex kept, used for black-only complexes."""
    structure = nx.Graph()
    structure.add_nodes_from(g.vertices)
    for u, v in g.edges:
        structure.add_edge(u, v)
    for h, he in enumerate(g.hyperedges):
        for v in he:
            structure.add_edge(("s", h), v)
    if structure.number_of_nodes() == 0:
        return True
    return nx.is_connected(structure)
