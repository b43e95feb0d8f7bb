"""
Content-addressed on-disk cache for graded bases and differential matrices.

Keys are SHA-256 digests of a JSON description of the piece together with the
code version tag. Bases are stored one canonical serialization per line,
matrices as "rows cols" followed by "row col value" triplets.
"""

import hashlib
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional

from .exceptions import CacheError, GraphParseError
from .models import Flavor, GradedBasis, SparseMatrix
from .serialization import deserialize, serialize


logger = logging.getLogger(__name__)


class PieceCache:
    """
    Persistent store for enumerated bases and assembled matrices.

    A disabled cache answers every lookup with a miss and drops every write.
    """

    def __init__(self, root: Path, code_version: str, enabled: bool = True):
        self.root = Path(root)
        self.code_version = code_version
        self.enabled = enabled
        self.hits = 0
        self.misses = 0

    def key(self, kind: str, **fields: Any) -> str:
        description = {"kind": kind, "code_version": self.code_version, **fields}
        text = json.dumps(description, sort_keys=True, separators=(",", ":"), default=str)
        return hashlib.sha256(text.encode("utf-8")).hexdigest()

    def _path(self, folder: str, digest: str, suffix: str) -> Path:
        return self.root / folder / digest[:2] / f"{digest}{suffix}"

    def _write(self, path: Path, text: str) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(text, encoding="utf-8")
        tmp.replace(path)

    def load_basis(self, digest: str, flavor: Flavor, arity: int, weight: Optional[int], degree: int) -> Optional[GradedBasis]:
        if not self.enabled:
            return None
        path = self._path("bases", digest, ".jsonl")
        if not path.exists():
            self.misses += 1
            return None
        try:
            lines = [line for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]
            elements = tuple(deserialize(line).raw_key() for line in lines)
        except (OSError, GraphParseError) as e:
            logger.error("Failed to read cached basis %s: %s", path, e)
            raise CacheError(f"unreadable cached basis {path}: {e}") from e
        self.hits += 1
        logger.debug("Cache hit for basis %s", digest[:12])
        return GradedBasis(flavor=flavor, arity=arity, weight=weight, degree=degree, elements=elements)

    def store_basis(self, digest: str, basis: GradedBasis) -> None:
        if not self.enabled:
            return
        text = "\n".join(serialize(g) for g in basis.graphs())
        self._write(self._path("bases", digest, ".jsonl"), text + "\n" if text else "")

    def load_matrix(self, digest: str) -> Optional[SparseMatrix]:
        if not self.enabled:
            return None
        path = self._path("matrices", digest, ".txt")
        if not path.exists():
            self.misses += 1
            return None
        try:
            lines = path.read_text(encoding="utf-8").splitlines()
            rows, cols = (int(x) for x in lines[0].split())
            entries: Dict = {}
            for line in lines[1:]:
                if not line.strip():
                    continue
                r, c, value = line.split()
                entries[(int(r), int(c))] = Fraction(value)
        except (OSError, IndexError, ValueError, ZeroDivisionError) as e:
            logger.error("Failed to read cached matrix %s: %s", path, e)
            raise CacheError(f"unreadable cached matrix {path}: {e}") from e
        self.hits += 1
        logger.debug("Cache hit for matrix %s", digest[:12])
        return SparseMatrix(rows=rows, cols=cols, entries=entries)

    def store_matrix(self, digest: str, matrix: SparseMatrix) -> None:
        if not self.enabled:
            return
        lines = [f"{matrix.rows} {matrix.cols}"]
        lines.extend(f"{r} {c} {value}" for (r, c), value in sorted(matrix.entries.items()))
        self._write(self._path("matrices", digest, ".txt"), "\n".join(lines) + "\n")

    def stats(self) -> Dict[str, int]:
        return {"cache_hits": self.hits, "cache_misses": self.misses}
