"""Immutable 3-uniform hypergraphs and the ``.h3`` text format."""

from __future__ import annotations

import math
from itertools import chain, combinations
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from . import _kernels as K

Triple = tuple[int, int, int]


class HypergraphError(ValueError):
    """Invalid hypergraph data or query."""


class FormatError(HypergraphError):
    """Malformed ``.h3`` / ``.part`` text; carries the 1-based line number."""

    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class DegreeReport:
    value: int
    witness: tuple[int, ...]


def bits_of(mask: int) -> list[int]:
    """Indices of the set bits of a Python-int bitset, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << int(v)
    return m


class Hypergraph3:
    """A 3-uniform hypergraph on vertices ``0..n-1``.

    The pair index is stored as packed ``uint64`` bitsets, ``pair_bits[u, v]``
    holding the link neighbourhood ``N(uv)``.  A Python-int view of the same
    bitsets (``link(u, v)``) is built on first use; the search code works on
    those.  Instances are immutable: arrays are flagged read-only.
    """

    def __init__(self, n: int, edges: Iterable[Sequence[int]] | np.ndarray = ()) -> None:
        if n < 0:
            raise HypergraphError(f"vertex count must be non-negative, got {n}")
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        arr = arr.reshape(-1, 3)
        if len(arr):
            arr = np.sort(arr, axis=1)
            if arr.min() < 0 or arr.max() >= n:
                raise HypergraphError(f"edge vertex out of range [0, {n})")
            if np.any(arr[:, 0] == arr[:, 1]) or np.any(arr[:, 1] == arr[:, 2]):
                raise HypergraphError("edge with repeated vertex")
            order = np.lexsort((arr[:, 2], arr[:, 1], arr[:, 0]))
            arr = arr[order]
            if len(arr) > 1 and np.any(np.all(arr[1:] == arr[:-1], axis=1)):
                raise HypergraphError("duplicate edge")
        arr.setflags(write=False)
        self.n = int(n)
        self.edges = arr

    # -- construction helpers ------------------------------------------------

    @classmethod
    def complete(cls, n: int) -> Hypergraph3:
        return cls(n, _all_triples(n))

    @classmethod
    def empty(cls, n: int) -> Hypergraph3:
        return cls(n)

    # -- basic views -----------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.edges)

    def __len__(self) -> int:
        return self.m

    def __repr__(self) -> str:
        return f"Hypergraph3(n={self.n}, m={self.m})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hypergraph3):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    def __hash__(self) -> int:
        return hash((self.n, self.edges.tobytes()))

    @cached_property
    def edge_set(self) -> frozenset[Triple]:
        return frozenset(map(tuple, self.edges.tolist()))

    def has_edge(self, a: int, b: int, c: int) -> bool:
        return bool(self.link(a, b) >> c & 1) if a != b else False

    @cached_property
    def pair_bits(self) -> np.ndarray:
        bits = K.pack_pair_bits(self.edges, self.n)
        bits.setflags(write=False)
        return bits

    @cached_property
    def _links(self) -> list[list[int]]:
        n = self.n
        rows: list[list[int]] = [[0] * n for _ in range(n)]
        for a, b, c in self.edges.tolist():
            rows[a][b] |= 1 << c
            rows[b][a] |= 1 << c
            rows[a][c] |= 1 << b
            rows[c][a] |= 1 << b
            rows[b][c] |= 1 << a
            rows[c][b] |= 1 << a
        return rows

    def link(self, u: int, v: int) -> int:
        """Bitset of ``w`` with ``{u, v, w}`` an edge."""
        return self._links[u][v]

    def link_set(self, u: int, v: int) -> set[int]:
        return set(bits_of(self.link(u, v)))

    @cached_property
    def codegrees(self) -> np.ndarray:
        c = K.codegree_matrix(self.edges, self.n)
        c.setflags(write=False)
        return c

    @cached_property
    def degrees(self) -> np.ndarray:
        d = K.vertex_degrees(self.edges, self.n)
        d.setflags(write=False)
        return d

    def vertex_mask(self, vertices: Iterable[int]) -> np.ndarray:
        mask = np.zeros(self.n, dtype=bool)
        idx = np.fromiter(vertices, dtype=np.int64)
        if len(idx):
            self._check_vertices(idx)
            mask[idx] = True
        return mask

    def _check_vertices(self, vs: Iterable[int]) -> None:
        for v in np.asarray(list(vs) if not isinstance(vs, np.ndarray) else vs).ravel():
            if not 0 <= int(v) < self.n:
                raise HypergraphError(f"vertex {int(v)} out of range [0, {self.n})")

    # -- degree queries --------------------------------------------------------

    def degree(self, S: Iterable[int]) -> int:
        """Number of edges containing ``S`` (``|S|`` is 1 or 2)."""
        s = sorted(set(S))
        self._check_vertices(s)
        if len(s) == 1:
            return int(self.degrees[s[0]])
        if len(s) == 2:
            return int(self.codegrees[s[0], s[1]])
        raise HypergraphError(f"degree needs |S| in {{1, 2}}, got {len(s)}")

    def min_codegree(self) -> DegreeReport:
        if self.n < 3:
            raise HypergraphError("min_codegree needs n >= 3")
        c = np.array(self.codegrees, dtype=np.int64)
        np.fill_diagonal(c, np.iinfo(np.int64).max)
        flat = int(np.argmin(c))
        u, v = divmod(flat, self.n)
        return DegreeReport(int(c[u, v]), (min(u, v), max(u, v)))

    def min_vertex_degree(self) -> DegreeReport:
        if self.n < 1:
            raise HypergraphError("min_vertex_degree needs n >= 1")
        v = int(np.argmin(self.degrees))
        return DegreeReport(int(self.degrees[v]), (v,))

    def degree_into(self, S: Iterable[int], T: Iterable[int]) -> int:
        """``deg(S, T)``: edges ``S ∪ ext`` with the extension inside ``T``.

        For ``|S| = 2`` the extension is one vertex, for ``|S| = 1`` a pair.
        """
        s = sorted(set(S))
        self._check_vertices(s)
        t = set(T) - set(s)
        self._check_vertices(t)
        if len(s) == 2:
            return (self.link(*s) & mask_of(t)).bit_count()
        if len(s) == 1:
            v = s[0]
            tm = mask_of(t)
            return sum((self.link(v, a) & tm).bit_count() for a in t) // 2
        raise HypergraphError(f"degree_into needs |S| in {{1, 2}}, got {len(s)}")

    def complement_degree(self, S: Iterable[int], T: Iterable[int]) -> int:
        """Missing extensions of ``S`` inside ``T``.

        ``|S| = 2``: ``|T \\ S| - deg(S, T)``;
        ``|S| = 1``: ``C(|T \\ S|, 2) - deg(S, T)``.
        """
        s = set(S)
        rest = len(set(T) - s)
        if len(s) == 2:
            return rest - self.degree_into(s, T)
        if len(s) == 1:
            return math.comb(rest, 2) - self.degree_into(s, T)
        raise HypergraphError(f"complement_degree needs |S| in {{1, 2}}, got {len(s)}")

    def edge_counts(self, parts: Sequence[Iterable[int]]) -> int:
        """``e(A_1, ..., A_k)`` for 1 to 3 vertex sets.

        One set gives the induced count ``e(H[A])``.  Two sets ``[A, B]`` mean
        ``e(A, B, B)``.  Three sets count edges admitting an assignment of
        their vertices to the sets, one vertex each.
        """
        parts = [list(p) for p in parts]
        if not 1 <= len(parts) <= 3:
            raise HypergraphError("edge_counts takes 1 to 3 vertex sets")
        if len(parts) == 1:
            return K.induced_count(self.edges, self.vertex_mask(parts[0]))
        if len(parts) == 2:
            parts = [parts[0], parts[1], parts[1]]
        member = np.stack([self.vertex_mask(p) for p in parts], axis=1)
        return K.assignable_count(self.edges, member)

    def induced_edges(self, vertices: Iterable[int]) -> np.ndarray:
        mask = self.vertex_mask(vertices)
        if not len(self.edges):
            return self.edges
        return self.edges[mask[self.edges].all(axis=1)]

    # -- derived hypergraphs -----------------------------------------------------

    def with_edges(self, extra: Iterable[Sequence[int]]) -> Hypergraph3:
        new = {tuple(sorted(e)) for e in extra} - self.edge_set
        if not new:
            return self
        return Hypergraph3(self.n, np.concatenate([self.edges, np.array(sorted(new), dtype=np.int64).reshape(-1, 3)]))

    # -- text format ---------------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"h3 {self.n} {self.m}"]
        lines.extend(f"{a} {b} {c}" for a, b, c in self.edges.tolist())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Hypergraph3:
        header: tuple[int, int] | None = None
        edges: list[Triple] = []
        seen: set[Triple] = set()
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tok = line.split()
            if header is None:
                if len(tok) != 3 or tok[0] != "h3":
                    raise FormatError("expected header 'h3 <n> <m>'", lineno)
                try:
                    header = (int(tok[1]), int(tok[2]))
                except ValueError:
                    raise FormatError("non-integer in header", lineno) from None
                if header[0] < 0 or header[1] < 0:
                    raise FormatError("negative count in header", lineno)
                continue
            if len(tok) != 3:
                raise FormatError("expected three vertex ids", lineno)
            try:
                a, b, c = (int(x) for x in tok)
            except ValueError:
                raise FormatError("non-integer vertex id", lineno) from None
            n = header[0]
            for x in (a, b, c):
                if not 0 <= x < n:
                    raise FormatError(f"vertex {x} out of range [0, {n})", lineno)
            if not a < b < c:
                raise FormatError("vertices must satisfy a < b < c", lineno)
            if (a, b, c) in seen:
                raise FormatError(f"duplicate edge {a} {b} {c}", lineno)
            seen.add((a, b, c))
            edges.append((a, b, c))
        if header is None:
            raise FormatError("missing header", 1)
        if len(edges) != header[1]:
            raise FormatError(f"header declares {header[1]} edges, found {len(edges)}", lineno if text else 1)
        return cls(header[0], edges)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path: str | Path) -> Hypergraph3:
        return cls.from_text(Path(path).read_text())


def _all_triples(n: int) -> np.ndarray:
    if n < 3:
        return np.zeros((0, 3), dtype=np.int64)
    flat = np.fromiter(chain.from_iterable(combinations(range(n), 3)), dtype=np.int64)
    return flat.reshape(-1, 3)


def all_triples(n: int) -> np.ndarray:
    """All ``C(n, 3)`` sorted triples, lexicographic."""
    return _all_triples(n)


def parse(text: str) -> Hypergraph3:
    return Hypergraph3.from_text(text)


def serialize(H: Hypergraph3) -> str:
    return H.to_text()
