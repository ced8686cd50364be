"""Vertex partitions, index vectors and the ``.part`` text format."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .hypergraph import FormatError, HypergraphError, mask_of

IndexVector = tuple[int, ...]


@dataclass(frozen=True)
class Partition:
    """Ordered partition ``V_1, ..., V_r`` of ``range(n)``; part ``i`` is ``parts[i]``."""

    n: int
    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        parts = tuple(tuple(sorted(int(v) for v in p)) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts:
            raise HypergraphError("a partition needs at least one part")
        seen = [v for p in parts for v in p]
        if sorted(seen) != list(range(self.n)):
            raise HypergraphError("parts must be disjoint and cover range(n)")

    @classmethod
    def of(cls, n: int, parts: Iterable[Iterable[int]]) -> Partition:
        return cls(n, tuple(tuple(p) for p in parts))

    @classmethod
    def trivial(cls, n: int) -> Partition:
        return cls(n, (tuple(range(n)),))

    @property
    def r(self) -> int:
        return len(self.parts)

    @cached_property
    def labels(self) -> np.ndarray:
        lab = np.empty(self.n, dtype=np.int64)
        for i, p in enumerate(self.parts):
            lab[list(p)] = i
        lab.setflags(write=False)
        return lab

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(mask_of(p) for p in self.parts)

    def part_of(self, v: int) -> int:
        return int(self.labels[v])

    def index_vector(self, S: Iterable[int]) -> IndexVector:
        return index_vector(self, S)

    def merge(self, i: int, j: int) -> Partition:
        """Partition with parts ``i`` and ``j`` replaced by their union (at ``min(i, j)``)."""
        if i == j:
            raise HypergraphError("cannot merge a part with itself")
        lo, hi = sorted((i, j))
        parts = list(self.parts)
        parts[lo] = parts[lo] + parts[hi]
        del parts[hi]
        return Partition(self.n, tuple(parts))

    def to_text(self) -> str:
        lines = [f"part {self.n} {self.r}"]
        lines.extend(" ".join(map(str, p)) for p in self.parts)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Partition:
        header: tuple[int, int] | None = None
        parts: list[list[int]] = []
        lineno = 0
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if line.startswith("#"):
                continue
            if header is None:
                if not line:
                    continue
                tok = line.split()
                if len(tok) != 3 or tok[0] != "part":
                    raise FormatError("expected header 'part <n> <r>'", lineno)
                try:
                    header = (int(tok[1]), int(tok[2]))
                except ValueError:
                    raise FormatError("non-integer in header", lineno) from None
                continue
            if len(parts) == header[1]:
                if line:
                    raise FormatError("more parts than declared", lineno)
                continue
            try:
                part = [int(x) for x in line.split()]
            except ValueError:
                raise FormatError("non-integer vertex id", lineno) from None
            for v in part:
                if not 0 <= v < header[0]:
                    raise FormatError(f"vertex {v} out of range [0, {header[0]})", lineno)
            parts.append(part)
        if header is None:
            raise FormatError("missing header", 1)
        if len(parts) != header[1]:
            raise FormatError(f"header declares {header[1]} parts, found {len(parts)}", lineno)
        try:
            return cls.of(header[0], parts)
        except HypergraphError as exc:
            raise FormatError(str(exc), lineno) from None

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path: str | Path) -> Partition:
        return cls.from_text(Path(path).read_text())


def index_vector(P: Partition, S: Iterable[int]) -> IndexVector:
    """``i_P(S)``: per-part intersection sizes of ``S``."""
    out = [0] * P.r
    lab = P.labels
    for v in S:
        if not 0 <= v < P.n:
            raise HypergraphError(f"vertex {v} out of range [0, {P.n})")
        out[lab[v]] += 1
    return tuple(out)


def index_vector_of_mask(P: Partition, mask: int) -> IndexVector:
    return tuple((mask & pm).bit_count() for pm in P.masks)


def unit(r: int, i: int) -> IndexVector:
    return tuple(1 if k == i else 0 for k in range(r))


def add(v: Sequence[int], w: Sequence[int]) -> IndexVector:
    return tuple(a + b for a, b in zip(v, w, strict=True))


def sub(v: Sequence[int], w: Sequence[int]) -> IndexVector:
    return tuple(a - b for a, b in zip(v, w, strict=True))


def s_vectors(r: int, s: int) -> list[IndexVector]:
    """All non-negative integer r-vectors with coordinate sum s, lexicographic."""
    if r == 1:
        return [(s,)]
    return [(a, *rest) for a in range(s + 1) for rest in s_vectors(r - 1, s - a)]


def even_6_vectors(r: int) -> list[IndexVector]:
    return [v for v in s_vectors(r, 6) if all(c % 2 == 0 for c in v)]
