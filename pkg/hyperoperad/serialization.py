"""
Text format for hypergraphs and formal sums.

One JSON object per graph:

    {"arity":2,"blacks":0,"coefficient":"1","edges":[["w0","w1"]],"flavor":"fbvh","hyperedges":[]}

Endpoints are "w<i>" or "b<j>"; list order is the orientation. The canonical
text of a graph is its canonical form dumped with sorted keys and no
whitespace. A formal sum is one such object per line.
"""

import json
import logging
from fractions import Fraction
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, ValidationError

from .exceptions import GraphParseError
from .formal_sum import FormalSum
from .hypergraph import canonicalize
from .models import Flavor, Hypergraph, VertexRef


logger = logging.getLogger(__name__)


class GraphRecord(BaseModel):
    """Wire form of one hypergraph."""

    flavor: str = Field(..., description="Flavor tag such as fbvh or hgra(3)")
    arity: int = Field(..., ge=0)
    blacks: int = Field(default=0, ge=0)
    edges: List[List[str]] = Field(default_factory=list)
    hyperedges: List[List[str]] = Field(default_factory=list)
    coefficient: Optional[str] = Field(default=None, description="Rational coefficient p/q")


def _endpoint_text(v: VertexRef) -> str:
    return f"{v.kind}{v.index}"


def to_record(g: Hypergraph, coefficient: Optional[Fraction] = None) -> GraphRecord:
    return GraphRecord(
        flavor=g.flavor.tag,
        arity=g.arity,
        blacks=g.blacks,
        edges=[[_endpoint_text(u), _endpoint_text(v)] for u, v in g.edges],
        hyperedges=[[_endpoint_text(v) for v in he] for he in g.hyperedges],
        coefficient=None if coefficient is None else str(coefficient),
    )


def serialize(g: Hypergraph, coefficient: Optional[Fraction] = None) -> str:
    """Compact JSON text of g in its listed orientation."""
    record = to_record(g, coefficient)
    return json.dumps(record.model_dump(exclude_none=True), sort_keys=True, separators=(",", ":"))


def canonical_text(g: Hypergraph) -> Optional[str]:
    """Bit-exact text of the canonical form, or None for a zero graph."""
    signed = canonicalize(g)
    if signed is None:
        return None
    return serialize(signed.graph)


def _parse_endpoint(text: str, arity: int, blacks: int, field: str, line: Optional[int]) -> VertexRef:
    body = text.strip()
    if len(body) < 2 or body[0] not in ("w", "b") or not body[1:].isdigit():
        raise GraphParseError(f"malformed endpoint '{text}'", line=line, field=field)
    ref = VertexRef(body[0], int(body[1:]))
    bound = arity if ref.kind == "w" else blacks
    if ref.index >= bound:
        raise GraphParseError(
            f"endpoint '{text}' out of range ({bound} {'white' if ref.kind == 'w' else 'black'} vertices)",
            line=line,
            field=field,
        )
    return ref


def from_record(record: GraphRecord, line: Optional[int] = None) -> Tuple[Hypergraph, Fraction]:
    """Turn a record into a graph and its coefficient."""
    try:
        flavor = Flavor.from_tag(record.flavor)
    except ValueError as e:
        raise GraphParseError(str(e), line=line, field="flavor") from e

    edges = []
    for k, pair in enumerate(record.edges):
        if len(pair) != 2:
            raise GraphParseError("edge needs two endpoints", line=line, field=f"edges[{k}]")
        edges.append(
            tuple(_parse_endpoint(t, record.arity, record.blacks, f"edges[{k}]", line) for t in pair)
        )
    hyperedges = []
    for h, flags in enumerate(record.hyperedges):
        if len(flags) != 3:
            raise GraphParseError("hyperedge not trivalent", line=line, field=f"hyperedges[{h}]")
        hyperedges.append(
            tuple(_parse_endpoint(t, record.arity, record.blacks, f"hyperedges[{h}]", line) for t in flags)
        )

    coefficient = Fraction(1)
    if record.coefficient is not None:
        try:
            coefficient = Fraction(record.coefficient)
        except (ValueError, ZeroDivisionError) as e:
            raise GraphParseError(
                f"bad coefficient '{record.coefficient}'", line=line, field="coefficient"
            ) from e

    graph = Hypergraph(
        flavor=flavor,
        arity=record.arity,
        blacks=record.blacks,
        edges=tuple(edges),
        hyperedges=tuple(hyperedges),
    )
    return graph, coefficient


def _load_record(text: str, line: Optional[int]) -> GraphRecord:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise GraphParseError(f"invalid JSON: {e.msg}", line=line) from e
    try:
        return GraphRecord.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(part) for part in first.get("loc", ()))
        raise GraphParseError(first.get("msg", "invalid record"), line=line, field=field or None) from e


def deserialize(text: str) -> Hypergraph:
    """Parse one graph; a coefficient, if present, is ignored."""
    graph, _ = from_record(_load_record(text, None))
    return graph


def dump_sum(total: FormalSum) -> str:
    """JSON lines, one canonical graph with its coefficient per line."""
    return "\n".join(serialize(g, coefficient) for coefficient, g in total.graphs())


def load_sum(text: str) -> FormalSum:
    """Parse JSON lines; blank lines are skipped, graphs are canonicalized."""
    result = FormalSum()
    for number, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        graph, coefficient = from_record(_load_record(raw, number), line=number)
        result.add_graph(graph, coefficient)
    logger.debug("Loaded formal sum with %d terms", len(result))
    return result
