"""
Data models for the hypergraph operad engine.

This module defines the core data structures: vertex references, flavors,
hypergraphs with their orientation data, signed canonical graphs, validation
violations and the graded reports produced by the homology engine.
"""

import re
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, NamedTuple, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator


WHITE = "w"
BLACK = "b"


class VertexKind(str, Enum):
    """Enumeration for vertex kinds."""
    WHITE = "w"
    BLACK = "b"
    STAR = "s"


class VertexRef(NamedTuple):
    """A white (labelled) or black (unlabelled) vertex."""
    kind: str
    index: int

    def __str__(self) -> str:
        return f"{self.kind}{self.index}"

    @property
    def is_white(self) -> bool:
        return self.kind == WHITE

    @property
    def is_black(self) -> bool:
        return self.kind == BLACK


def white(i: int) -> VertexRef:
    return VertexRef(WHITE, i)


def black(j: int) -> VertexRef:
    return VertexRef(BLACK, j)


Edge = Tuple[VertexRef, VertexRef]
Hyperedge = Tuple[VertexRef, VertexRef, VertexRef]
CanonicalKey = Tuple[str, int, int, Tuple[Edge, ...], Tuple[Hyperedge, ...]]


class FlavorKind(str, Enum):
    """Enumeration for the operads and complexes the engine knows."""
    GRA_EVEN = "gra_even"
    GRA_ODD = "gra_odd"
    HGRA = "hgra"
    BVHGRA = "bvhgra"
    FBVH = "fbvh"
    FOREST = "forest"
    FHGC = "fhgc"
    HGRAPHS = "hgraphs"
    GC = "gc"


class TokenParity(NamedTuple):
    """Which constituents of a graph are odd, i.e. enter the orientation word."""
    edges_odd: bool
    flags_odd: bool
    stars_odd: bool
    blacks_odd: bool
    edges_directed: bool


_PARITIES: Dict[FlavorKind, TokenParity] = {
    FlavorKind.GRA_EVEN: TokenParity(True, False, False, False, False),
    FlavorKind.GRA_ODD: TokenParity(False, False, False, False, True),
    FlavorKind.HGRA: TokenParity(False, True, True, False, False),
    FlavorKind.BVHGRA: TokenParity(True, True, True, False, False),
    FlavorKind.FBVH: TokenParity(True, True, True, True, False),
    FlavorKind.FOREST: TokenParity(True, True, True, True, False),
    FlavorKind.FHGC: TokenParity(False, True, True, True, False),
    FlavorKind.HGRAPHS: TokenParity(False, True, True, True, False),
    FlavorKind.GC: TokenParity(False, False, False, True, True),
}

_NEEDS_ODD_D = {FlavorKind.GRA_ODD, FlavorKind.HGRA, FlavorKind.FHGC, FlavorKind.HGRAPHS, FlavorKind.GC}
_NO_D = {FlavorKind.BVHGRA, FlavorKind.FBVH, FlavorKind.FOREST}
_TAG_PATTERN = re.compile(r"^([a-z_]+)(?:\((-?\d+)\))?$")


class Flavor(BaseModel):
    """An operad or complex together with its dimension parameter."""

    model_config = ConfigDict(frozen=True)

    kind: FlavorKind = Field(..., description="Operad family")
    d: Optional[int] = Field(default=None, description="Dimension parameter where the family has one")

    @model_validator(mode="after")
    def check_dimension(self) -> "Flavor":
        if self.kind in _NO_D:
            if self.d is not None:
                raise ValueError(f"{self.kind.value} takes no dimension parameter")
        elif self.d is None:
            raise ValueError(f"{self.kind.value} needs a dimension parameter")
        elif self.kind is FlavorKind.GRA_EVEN and self.d % 2 != 0:
            raise ValueError("gra_even needs an even d")
        elif self.kind in _NEEDS_ODD_D and self.d % 2 == 0:
            raise ValueError(f"{self.kind.value} needs an odd d")
        return self

    @property
    def tag(self) -> str:
        if self.d is None:
            return self.kind.value
        return f"{self.kind.value}({self.d})"

    @property
    def parity(self) -> TokenParity:
        return _PARITIES[self.kind]

    @property
    def allows_blacks(self) -> bool:
        return self.kind in (
            FlavorKind.FBVH, FlavorKind.FOREST, FlavorKind.FHGC, FlavorKind.HGRAPHS, FlavorKind.GC
        )

    @property
    def allows_edges(self) -> bool:
        return self.kind not in (FlavorKind.HGRA, FlavorKind.FHGC, FlavorKind.HGRAPHS)

    @property
    def allows_hyperedges(self) -> bool:
        return self.kind not in (FlavorKind.GRA_EVEN, FlavorKind.GRA_ODD, FlavorKind.GC)

    @property
    def has_whites(self) -> bool:
        return self.kind not in (FlavorKind.FHGC, FlavorKind.GC)

    @property
    def is_fbvh_like(self) -> bool:
        return self.kind in (FlavorKind.FBVH, FlavorKind.FOREST)

    def __str__(self) -> str:
        return self.tag

    @classmethod
    def from_tag(cls, tag: str) -> "Flavor":
        return _flavor_from_tag(tag)

    @classmethod
    def gra(cls, d: int) -> "Flavor":
        kind = FlavorKind.GRA_EVEN if d % 2 == 0 else FlavorKind.GRA_ODD
        return cls(kind=kind, d=d)

    @classmethod
    def hgra(cls, d: int) -> "Flavor":
        return cls(kind=FlavorKind.HGRA, d=d)

    @classmethod
    def bvhgra(cls) -> "Flavor":
        return cls(kind=FlavorKind.BVHGRA)

    @classmethod
    def fbvh(cls) -> "Flavor":
        return cls(kind=FlavorKind.FBVH)

    @classmethod
    def forest(cls) -> "Flavor":
        return cls(kind=FlavorKind.FOREST)

    @classmethod
    def fhgc(cls, d: int) -> "Flavor":
        return cls(kind=FlavorKind.FHGC, d=d)

    @classmethod
    def hgraphs(cls, d: int) -> "Flavor":
        return cls(kind=FlavorKind.HGRAPHS, d=d)

    @classmethod
    def gc(cls, d: int) -> "Flavor":
        return cls(kind=FlavorKind.GC, d=d)


@lru_cache(maxsize=None)
def _flavor_from_tag(tag: str) -> Flavor:
    match = _TAG_PATTERN.match(tag.strip())
    if not match:
        raise ValueError(f"unrecognised flavor tag '{tag}'")
    kind = FlavorKind(match.group(1))
    d = int(match.group(2)) if match.group(2) is not None else None
    return Flavor(kind=kind, d=d)


class Hypergraph(BaseModel):
    """
    A hypergraph with labelled white vertices, unlabelled black vertices,
    solid edges and trivalent hyperedges.

    The listed order of edges, of hyperedges, of flags within each hyperedge
    and of black vertices is the orientation.
    """

    model_config = ConfigDict(frozen=True)

    flavor: Flavor = Field(..., description="Operad the graph lives in")
    arity: int = Field(..., ge=0, description="Number of white vertices")
    blacks: int = Field(default=0, ge=0, description="Number of black vertices")
    edges: Tuple[Edge, ...] = Field(default=(), description="Solid edges as endpoint pairs")
    hyperedges: Tuple[Hyperedge, ...] = Field(default=(), description="Hyperedges as flag triples")

    @model_validator(mode="after")
    def check_structure(self) -> "Hypergraph":
        for v in self.vertex_refs_used():
            if v.kind == WHITE:
                if not 0 <= v.index < self.arity:
                    raise ValueError(f"white vertex {v} out of range for arity {self.arity}")
            elif v.kind == BLACK:
                if not 0 <= v.index < self.blacks:
                    raise ValueError(f"black vertex {v} out of range for {self.blacks} blacks")
            else:
                raise ValueError(f"endpoint {v} is not a white or black vertex")
        return self

    def vertex_refs_used(self) -> List[VertexRef]:
        refs = [v for edge in self.edges for v in edge]
        refs.extend(v for he in self.hyperedges for v in he)
        return refs

    @property
    def whites(self) -> List[VertexRef]:
        return [white(i) for i in range(self.arity)]

    @property
    def black_vertices(self) -> List[VertexRef]:
        return [black(j) for j in range(self.blacks)]

    @property
    def vertices(self) -> List[VertexRef]:
        return self.whites + self.black_vertices

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_hyperedges(self) -> int:
        return len(self.hyperedges)

    def valence(self, v: VertexRef) -> int:
        count = sum(1 for edge in self.edges for u in edge if u == v)
        count += sum(1 for he in self.hyperedges for u in he if u == v)
        return count

    def raw_key(self) -> CanonicalKey:
        return (self.flavor.tag, self.arity, self.blacks, self.edges, self.hyperedges)

    @classmethod
    def build(
        cls,
        flavor: Flavor,
        arity: int,
        blacks: int = 0,
        edges=(),
        hyperedges=(),
    ) -> "Hypergraph":
        """Validated constructor accepting endpoint text such as "w0" or "b1"."""
        return cls(
            flavor=flavor,
            arity=arity,
            blacks=blacks,
            edges=tuple(tuple(parse_endpoint(v) for v in e) for e in edges),
            hyperedges=tuple(tuple(parse_endpoint(v) for v in h) for h in hyperedges),
        )

    @classmethod
    def from_key(cls, key: CanonicalKey) -> "Hypergraph":
        tag, arity, blacks, edges, hyperedges = key
        return cls.model_construct(
            flavor=Flavor.from_tag(tag), arity=arity, blacks=blacks, edges=edges, hyperedges=hyperedges
        )

    def __str__(self) -> str:
        edges = " ".join(f"{a}-{b}" for a, b in self.edges)
        hyper = " ".join("H(" + ",".join(str(v) for v in he) + ")" for he in self.hyperedges)
        body = " ".join(part for part in (edges, hyper) if part) or "empty"
        return f"[{self.flavor.tag} arity={self.arity} blacks={self.blacks}: {body}]"


def parse_endpoint(value) -> VertexRef:
    """Turn "w3"/"b0", a (kind, index) pair or a VertexRef into a VertexRef."""
    if isinstance(value, VertexRef):
        return value
    if isinstance(value, str):
        text = value.strip()
        if len(text) >= 2 and text[0] in (WHITE, BLACK) and text[1:].isdigit():
            return VertexRef(text[0], int(text[1:]))
        raise ValueError(f"malformed endpoint '{value}'")
    kind, index = value
    return VertexRef(str(kind), int(index))


class SignedGraph(BaseModel):
    """A canonical hypergraph together with the sign relating it to its source."""

    model_config = ConfigDict(frozen=True)

    graph: Hypergraph
    sign: int = Field(..., description="+1 or -1")

    @property
    def key(self) -> CanonicalKey:
        return self.graph.raw_key()


class Violation(BaseModel):
    """A single broken validity rule."""

    model_config = ConfigDict(frozen=True)

    clause: str = Field(..., description="Short name of the violated rule")
    target: str = Field(..., description="Offending vertex, edge or hyperedge")
    message: str = Field(default="", description="Human readable detail")

    def __str__(self) -> str:
        detail = f" ({self.message})" if self.message else ""
        return f"{self.clause} at {self.target}{detail}"


class DifferentialPart(str, Enum):
    """Enumeration for the separately exposed pieces of the differentials."""
    BLACK_SPLIT = "black_split"
    WHITE_STAR_SPLIT = "white_star_split"
    WHITE_ONE_EDGE = "white_one_edge"
    WHITE_TWO_EDGE = "white_two_edge"
    DBB = "dbb"
    DBW = "dbw"
    D1 = "d1"
    D2 = "d2"


OPERAD_PARTS = (
    DifferentialPart.BLACK_SPLIT,
    DifferentialPart.WHITE_STAR_SPLIT,
    DifferentialPart.WHITE_ONE_EDGE,
    DifferentialPart.WHITE_TWO_EDGE,
)

DUAL_PARTS = {
    DifferentialPart.DBB: DifferentialPart.BLACK_SPLIT,
    DifferentialPart.DBW: DifferentialPart.WHITE_STAR_SPLIT,
    DifferentialPart.D1: DifferentialPart.WHITE_ONE_EDGE,
    DifferentialPart.D2: DifferentialPart.WHITE_TWO_EDGE,
}


class HyperedgeType(str, Enum):
    """Enumeration for hyperedge types by number of white flags."""
    TYPE0 = "type0"
    TYPE1 = "type1"
    TYPE2 = "type2"


class GradedBasis(BaseModel):
    """An enumerated basis of one graded piece; degree is None when it spans several degrees."""

    model_config = ConfigDict(frozen=True)

    flavor: Flavor
    arity: int
    weight: Optional[int] = None
    degree: Optional[int] = None
    elements: Tuple[CanonicalKey, ...] = ()

    def __len__(self) -> int:
        return len(self.elements)

    def index(self) -> Dict[CanonicalKey, int]:
        return {key: i for i, key in enumerate(self.elements)}

    def graphs(self) -> List[Hypergraph]:
        return [Hypergraph.from_key(key) for key in self.elements]


class SparseMatrix(BaseModel):
    """Exact sparse matrix of a differential between two graded bases."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    rows: int = Field(..., ge=0)
    cols: int = Field(..., ge=0)
    entries: Dict[Tuple[int, int], Fraction] = Field(default_factory=dict)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return not any(self.entries.values())

    def to_scipy(self, pattern: bool = False):
        """
        Integer CSR matrix; raises if an entry is not integral.

        With `pattern` every nonzero entry becomes 1, whatever its value.
        """
        import numpy as np
        from scipy.sparse import coo_matrix

        rows, cols, data = [], [], []
        for (r, c), value in sorted(self.entries.items()):
            if not value:
                continue
            if not pattern and value.denominator != 1:
                raise ValueError(f"entry ({r},{c}) = {value} is not integral")
            rows.append(r)
            cols.append(c)
            data.append(1 if pattern else int(value.numerator))
        return coo_matrix(
            (np.array(data, dtype=np.int64), (np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64))),
            shape=(self.rows, self.cols),
        ).tocsr()

    def multiply(self, other: "SparseMatrix") -> "SparseMatrix":
        """Exact product self @ other."""
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        by_row: Dict[int, List[Tuple[int, Fraction]]] = {}
        for (r, c), value in other.entries.items():
            by_row.setdefault(r, []).append((c, value))
        product: Dict[Tuple[int, int], Fraction] = {}
        for (r, k), left in self.entries.items():
            for c, right in by_row.get(k, ()):
                product[(r, c)] = product.get((r, c), Fraction(0)) + left * right
        return SparseMatrix(
            rows=self.rows, cols=other.cols, entries={k: v for k, v in product.items() if v != 0}
        )


class GradedDims(BaseModel):
    """Cohomology dimensions per degree for a fixed flavor, arity and weight."""

    model_config = ConfigDict(frozen=True)

    flavor: str
    arity: int
    weight: Optional[int] = None
    dims: Dict[int, int] = Field(default_factory=dict)
    basis_sizes: Dict[int, int] = Field(default_factory=dict)
    ranks: Dict[int, int] = Field(default_factory=dict)

    def total(self) -> int:
        return sum(self.dims.values())


class ComparisonRow(BaseModel):
    """One line of a report comparing a computed dimension with an oracle."""

    n: int
    weight: int
    degree: int
    dim_computed: int
    dim_oracle: Optional[int] = None
    conventions: Dict[str, int] = Field(default_factory=dict)

    @property
    def match(self) -> Optional[bool]:
        if self.dim_oracle is None:
            return None
        return self.dim_computed == self.dim_oracle


class CheckResult(BaseModel):
    """Outcome of one named verification."""

    name: str
    passed: bool
    detail: str = ""
    expected: Optional[str] = None
    computed: Optional[str] = None
