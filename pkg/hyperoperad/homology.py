"""
Matrices of differentials between graded bases and their cohomology.

The engine enumerates the bases of a graded piece, assembles the matrix of
the differential column by column (column j is the differential of basis
element j expanded in the target basis) and reads off cohomology dimensions
from exact ranks. Bases and matrices go through the content-addressed cache.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .cache import PieceCache
from .config import EngineSettings, get_settings
from .differentials import delta_fbvh, delta_fhgc, delta_gc, delta_hgraphs, dual_d
from .enumeration import enumerate_basis, enumerate_slice, piece_degrees
from .exceptions import BasisIncompleteError, FlavorMismatchError, HyperoperadError, UnboundedPieceError
from .hypergraph import degree_from_counts
from .linalg import matrix_product_is_zero, rank as exact_rank
from .models import (
    CanonicalKey,
    Flavor,
    FlavorKind,
    GradedBasis,
    GradedDims,
    Hypergraph,
    SparseMatrix,
)
from .observability import ComputationTracker


logger = logging.getLogger(__name__)

DELTA = "delta"
DUAL = "dual"


def apply_differential(key: CanonicalKey, mode: str = DELTA) -> List[Tuple[CanonicalKey, Fraction]]:
    """Terms of the differential of one basis element; top level so worker processes can run it."""
    g = Hypergraph.from_key(key)
    kind = g.flavor.kind
    if mode == DUAL:
        image = dual_d(g)
    elif g.flavor.is_fbvh_like:
        image = delta_fbvh(g, check=False)
    elif kind is FlavorKind.HGRAPHS:
        image = delta_hgraphs(g)
    elif kind is FlavorKind.FHGC:
        image = delta_fhgc(g)
    elif kind is FlavorKind.GC:
        image = delta_gc(g)
    else:
        raise FlavorMismatchError(f"no differential on flavor {g.flavor}")
    return image.items()


class HomologyEngine:
    """
    Enumerates, assembles and ranks graded pieces.

    Results do not depend on the worker count: columns are collected in
    basis order whichever process computed them.
    """

    def __init__(
        self,
        settings: Optional[EngineSettings] = None,
        tracker: Optional[ComputationTracker] = None,
    ):
        """
        Initialize the homology engine.

        Args:
            settings: Engine settings; read from the environment when omitted
            tracker: Shared computation tracker
        """
        self.settings = settings or get_settings()
        self.tracker = tracker or ComputationTracker()
        self.cache = PieceCache(
            self.settings.cache, self.settings.code_version, enabled=self.settings.use_cache
        )

    # Bases

    def _check_blacks(self, blacks: int) -> None:
        if blacks > self.settings.max_blacks:
            raise UnboundedPieceError(
                f"{blacks} black vertices exceed the canonicalization ceiling of {self.settings.max_blacks}"
            )

    def basis(self, flavor: Flavor, arity: int, weight: int, degree: int) -> GradedBasis:
        """Weight-graded FBVH or forest basis, through the cache."""
        self._check_blacks(degree - weight)
        digest = self.cache.key("basis", flavor=flavor.tag, arity=arity, weight=weight, degree=degree)
        cached = self.cache.load_basis(digest, flavor, arity, weight, degree)
        if cached is not None:
            return cached
        with self.tracker.stage("enumerate"):
            basis = enumerate_basis(flavor, arity, weight, degree)
        self.tracker.record_basis(f"{flavor.tag}/{arity}/{weight}/{degree}", len(basis))
        self.cache.store_basis(digest, basis)
        return basis

    def slice_basis(
        self, flavor: Flavor, arity: int, blacks: int, stars: int, min_valence: int = 3
    ) -> GradedBasis:
        """Fixed-bidegree basis of Hgraphs, fhGC or GC."""
        self._check_blacks(blacks)
        digest = self.cache.key(
            "slice", flavor=flavor.tag, arity=arity, blacks=blacks, stars=stars, min_valence=min_valence
        )
        counts = (blacks, 0, stars) if flavor.kind is FlavorKind.GC else (blacks, stars, 0)
        cached = self.cache.load_basis(digest, flavor, arity, None, degree_from_counts(flavor, *counts))
        if cached is not None:
            return cached
        with self.tracker.stage("enumerate"):
            basis = enumerate_slice(flavor, arity, blacks, stars, min_valence)
        self.tracker.record_basis(f"{flavor.tag}/{arity}/{blacks}/{stars}", len(basis))
        self.cache.store_basis(digest, basis)
        return basis

    # Matrices

    def _columns(self, keys: Sequence[CanonicalKey], mode: str) -> List[List[Tuple[CanonicalKey, Fraction]]]:
        if self.settings.workers > 1 and len(keys) > 1:
            with ProcessPoolExecutor(max_workers=self.settings.workers) as pool:
                return list(pool.map(apply_differential, keys, [mode] * len(keys), chunksize=8))
        return [apply_differential(key, mode) for key in keys]

    def assemble_between(self, source: GradedBasis, target: GradedBasis, mode: str = DELTA) -> SparseMatrix:
        """
        Matrix of the differential from source to target.

        Raises:
            BasisIncompleteError: If a term of a column is not in the target basis
        """
        index = target.index()
        entries: Dict[Tuple[int, int], Fraction] = {}
        with self.tracker.stage("assemble"):
            for col, terms in enumerate(self._columns(source.elements, mode)):
                for key, coefficient in terms:
                    row = index.get(key)
                    if row is None:
                        raise BasisIncompleteError(
                            f"term {Hypergraph.from_key(key)} of d{Hypergraph.from_key(source.elements[col])} "
                            f"is missing from the degree {target.degree} basis"
                        )
                    entries[(row, col)] = coefficient
        matrix = SparseMatrix(rows=len(target), cols=len(source), entries=entries)
        self.tracker.record_matrix(f"{source.flavor.tag}/{source.arity}/{source.weight}/{source.degree}", *matrix.shape)
        return matrix

    def assemble(self, flavor: Flavor, arity: int, weight: int, degree: int) -> SparseMatrix:
        """δ from the degree piece to the degree+1 piece at fixed (arity, weight)."""
        return self._assemble_cached(flavor, arity, weight, degree, DELTA)

    def assemble_dual(self, flavor: Flavor, arity: int, weight: int, degree: int) -> SparseMatrix:
        """The dual differential from the degree piece to the degree-1 piece."""
        return self._assemble_cached(flavor, arity, weight, degree, DUAL)

    def _assemble_cached(self, flavor: Flavor, arity: int, weight: int, degree: int, mode: str) -> SparseMatrix:
        digest = self.cache.key(
            "matrix", mode=mode, flavor=flavor.tag, arity=arity, weight=weight, degree=degree
        )
        cached = self.cache.load_matrix(digest)
        if cached is not None:
            return cached
        source = self.basis(flavor, arity, weight, degree)
        step = 1 if mode == DELTA else -1
        degrees = piece_degrees(weight)
        if degree + step in degrees:
            target = self.basis(flavor, arity, weight, degree + step)
        else:
            target = GradedBasis(flavor=flavor, arity=arity, weight=weight, degree=degree + step)
        try:
            matrix = self.assemble_between(source, target, mode)
        except HyperoperadError as e:
            logger.error("Failed to assemble %s matrix at %s: %s", mode, digest[:12], e)
            raise
        self.cache.store_matrix(digest, matrix)
        return matrix

    def rank(self, matrix: SparseMatrix) -> int:
        with self.tracker.stage("rank"):
            value = exact_rank(
                matrix, self.settings.primes, crosscheck_limit=self.settings.rank_crosscheck_limit
            )
        self.tracker.record_rank(value)
        return value

    # Cohomology

    def cohomology_dims(self, flavor: Flavor, arity: int, weight: int) -> GradedDims:
        """
        Cohomology dimensions of the (arity, weight) piece, degree by degree.

        Returns:
            dims[k] = |B_k| - rank(d_k) - rank(d_{k-1})
        """
        degrees = list(piece_degrees(weight))
        sizes = {k: len(self.basis(flavor, arity, weight, k)) for k in degrees}
        ranks = {k: self.rank(self.assemble(flavor, arity, weight, k)) for k in degrees}
        dims = {k: sizes[k] - ranks[k] - ranks.get(k - 1, 0) for k in degrees}
        logger.info("Cohomology of %s at arity %d, weight %d: %s", flavor.tag, arity, weight, dims)
        return GradedDims(
            flavor=flavor.tag, arity=arity, weight=weight, dims=dims, basis_sizes=sizes, ranks=ranks
        )

    def cohomology_window(
        self, flavor: Flavor, arity: int, weight_min: int, weight_max: int = 0
    ) -> List[GradedDims]:
        return [self.cohomology_dims(flavor, arity, w) for w in range(min(weight_max, 0), weight_min - 1, -1)]

    def d_squared(self, flavor: Flavor, arity: int, weight: int, dual: bool = False) -> Dict[int, bool]:
        """Whether consecutive matrices compose to zero, keyed by the source degree."""
        degrees = list(piece_degrees(weight))
        result = {}
        for k in degrees:
            if dual:
                if k - 1 not in degrees:
                    continue
                first = self.assemble_dual(flavor, arity, weight, k)
                second = self.assemble_dual(flavor, arity, weight, k - 1)
            else:
                if k + 1 not in degrees:
                    continue
                first = self.assemble(flavor, arity, weight, k)
                second = self.assemble(flavor, arity, weight, k + 1)
            result[k] = matrix_product_is_zero(second, first)
        return result

    def in_image(self, matrix: SparseMatrix, vector: Dict[int, Fraction]) -> bool:
        """Whether a vector in the target basis is a combination of the matrix columns."""
        if matrix.cols == 0:
            return not any(vector.values())
        extended = dict(matrix.entries)
        extended.update({(r, matrix.cols): Fraction(v) for r, v in vector.items() if v})
        augmented = SparseMatrix(rows=matrix.rows, cols=matrix.cols + 1, entries=extended)
        return self.rank(augmented) == self.rank(matrix)


def _default_engine() -> HomologyEngine:
    return HomologyEngine(get_settings(use_cache=False))


def assemble(flavor: Flavor, arity: int, weight: int, degree: int) -> SparseMatrix:
    return _default_engine().assemble(flavor, arity, weight, degree)


def rank(matrix: SparseMatrix) -> int:
    return _default_engine().rank(matrix)


def cohomology_dims(flavor: Flavor, arity: int, weight: int) -> GradedDims:
    return _default_engine().cohomology_dims(flavor, arity, weight)
