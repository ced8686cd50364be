"""Edge-scan kernels with a numba path and a pure-numpy path.

Every kernel takes the edge array ``edges`` of shape ``(m, 3)`` (sorted
triples, ``int64``) and returns plain numpy data.  The numba variants are
explicit loops; the numpy variants are vectorised scatter/gather.  Which one
is used by the public names is decided once at import time:

* ``LOOSETILE_DISABLE_NUMBA=1`` forces the numpy path;
* otherwise numba is used when importable.

Both variants stay importable as ``<name>_numpy`` / ``<name>_numba`` so the
test-suite and ``benchmarks/bench_kernels.py`` can compare them directly.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

_FLAG = os.environ.get("LOOSETILE_DISABLE_NUMBA", "").strip().lower()
USE_NUMBA = HAVE_NUMBA and _FLAG not in {"1", "true", "yes", "on"}

_PAIRS = ((0, 1, 2), (0, 2, 1), (1, 2, 0))


def _njit(fn):
    if not HAVE_NUMBA:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


# --------------------------------------------------------------------------
# numpy implementations
# --------------------------------------------------------------------------


def codegree_matrix_numpy(edges: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros((n, n), dtype=np.int32)
    for i, j, _ in _PAIRS:
        np.add.at(out, (edges[:, i], edges[:, j]), 1)
    return out + out.T


def vertex_degrees_numpy(edges: np.ndarray, n: int) -> np.ndarray:
    return np.bincount(edges.ravel(), minlength=n).astype(np.int64)


def degree_into_numpy(edges: np.ndarray, n: int, mask: np.ndarray) -> np.ndarray:
    inside = mask[edges]
    out = np.zeros(n, dtype=np.int64)
    for i, j, k in _PAIRS:
        hit = inside[:, i] & inside[:, j]
        out += np.bincount(edges[hit, k], minlength=n)
    return out


def pair_degree_into_numpy(edges: np.ndarray, n: int, mask: np.ndarray) -> np.ndarray:
    inside = mask[edges]
    out = np.zeros((n, n), dtype=np.int32)
    for i, j, k in _PAIRS:
        hit = inside[:, k]
        np.add.at(out, (edges[hit, i], edges[hit, j]), 1)
    return out + out.T


def induced_count_numpy(edges: np.ndarray, mask: np.ndarray) -> int:
    if len(edges) == 0:
        return 0
    return int(np.count_nonzero(mask[edges].all(axis=1)))


def assignable_count_numpy(edges: np.ndarray, member: np.ndarray) -> int:
    """Edges {a,b,c} admitting an ordering with a in part 0, b in 1, c in 2.

    ``member`` is a boolean array of shape ``(n, 3)``.
    """
    if len(edges) == 0:
        return 0
    a, b, c = edges[:, 0], edges[:, 1], edges[:, 2]
    ok = np.zeros(len(edges), dtype=bool)
    for p, q, r in ((a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)):
        ok |= member[p, 0] & member[q, 1] & member[r, 2]
    return int(np.count_nonzero(ok))


def index_histogram_numpy(edges: np.ndarray, labels: np.ndarray, r: int) -> np.ndarray:
    """Counts of edges per sorted part-label triple, flattened to length r**3."""
    if len(edges) == 0:
        return np.zeros(r**3, dtype=np.int64)
    lab = np.sort(labels[edges], axis=1)
    code = (lab[:, 0] * r + lab[:, 1]) * r + lab[:, 2]
    return np.bincount(code, minlength=r**3).astype(np.int64)


def pack_pair_bits_numpy(edges: np.ndarray, n: int) -> np.ndarray:
    words = max(1, (n + 63) // 64)
    bits = np.zeros((n, n, words), dtype=np.uint64)
    for i, j, k in _PAIRS:
        third = edges[:, k]
        word = third // 64
        val = np.left_shift(np.uint64(1), (third % 64).astype(np.uint64))
        np.bitwise_or.at(bits, (edges[:, i], edges[:, j], word), val)
        np.bitwise_or.at(bits, (edges[:, j], edges[:, i], word), val)
    return bits


def triangle_count_numpy(adj: np.ndarray) -> int:
    a = adj.astype(np.int64)
    return int(np.trace(a @ a @ a) // 6)


# --------------------------------------------------------------------------
# numba implementations
# --------------------------------------------------------------------------


@_njit
def codegree_matrix_numba(edges, n):
    out = np.zeros((n, n), dtype=np.int32)
    for e in range(edges.shape[0]):
        a = edges[e, 0]
        b = edges[e, 1]
        c = edges[e, 2]
        out[a, b] += 1
        out[b, a] += 1
        out[a, c] += 1
        out[c, a] += 1
        out[b, c] += 1
        out[c, b] += 1
    return out


@_njit
def vertex_degrees_numba(edges, n):
    out = np.zeros(n, dtype=np.int64)
    for e in range(edges.shape[0]):
        for t in range(3):
            out[edges[e, t]] += 1
    return out


@_njit
def degree_into_numba(edges, n, mask):
    out = np.zeros(n, dtype=np.int64)
    for e in range(edges.shape[0]):
        a = edges[e, 0]
        b = edges[e, 1]
        c = edges[e, 2]
        ia = mask[a]
        ib = mask[b]
        ic = mask[c]
        if ib and ic:
            out[a] += 1
        if ia and ic:
            out[b] += 1
        if ia and ib:
            out[c] += 1
    return out


@_njit
def pair_degree_into_numba(edges, n, mask):
    out = np.zeros((n, n), dtype=np.int32)
    for e in range(edges.shape[0]):
        a = edges[e, 0]
        b = edges[e, 1]
        c = edges[e, 2]
        if mask[c]:
            out[a, b] += 1
            out[b, a] += 1
        if mask[b]:
            out[a, c] += 1
            out[c, a] += 1
        if mask[a]:
            out[b, c] += 1
            out[c, b] += 1
    return out


@_njit
def induced_count_numba(edges, mask):
    total = 0
    for e in range(edges.shape[0]):
        if mask[edges[e, 0]] and mask[edges[e, 1]] and mask[edges[e, 2]]:
            total += 1
    return total


@_njit
def assignable_count_numba(edges, member):
    total = 0
    for e in range(edges.shape[0]):
        v0 = edges[e, 0]
        v1 = edges[e, 1]
        v2 = edges[e, 2]
        if (
            (member[v0, 0] and member[v1, 1] and member[v2, 2])
            or (member[v0, 0] and member[v2, 1] and member[v1, 2])
            or (member[v1, 0] and member[v0, 1] and member[v2, 2])
            or (member[v1, 0] and member[v2, 1] and member[v0, 2])
            or (member[v2, 0] and member[v0, 1] and member[v1, 2])
            or (member[v2, 0] and member[v1, 1] and member[v0, 2])
        ):
            total += 1
    return total


@_njit
def index_histogram_numba(edges, labels, r):
    out = np.zeros(r * r * r, dtype=np.int64)
    for e in range(edges.shape[0]):
        x = labels[edges[e, 0]]
        y = labels[edges[e, 1]]
        z = labels[edges[e, 2]]
        if x > y:
            x, y = y, x
        if y > z:
            y, z = z, y
        if x > y:
            x, y = y, x
        out[(x * r + y) * r + z] += 1
    return out


@_njit
def pack_pair_bits_numba(edges, n):
    words = max(1, (n + 63) // 64)
    bits = np.zeros((n, n, words), dtype=np.uint64)
    one = np.uint64(1)
    for e in range(edges.shape[0]):
        v = (edges[e, 0], edges[e, 1], edges[e, 2])
        for t in range(3):
            i = v[t]
            j = v[(t + 1) % 3]
            k = v[(t + 2) % 3]
            val = one << np.uint64(k % 64)
            bits[i, j, k // 64] |= val
            bits[j, i, k // 64] |= val
    return bits


@_njit
def triangle_count_numba(adj):
    v = adj.shape[0]
    total = 0
    for a in range(v):
        for b in range(a + 1, v):
            if not adj[a, b]:
                continue
            for c in range(b + 1, v):
                if adj[a, c] and adj[b, c]:
                    total += 1
    return total


# --------------------------------------------------------------------------
# dispatch
# --------------------------------------------------------------------------


def _pick(name: str):
    return globals()[f"{name}_numba" if USE_NUMBA else f"{name}_numpy"]


def _as_edges(edges: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(edges, dtype=np.int64).reshape(-1, 3)


def _as_mask(mask: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(mask, dtype=np.bool_)


def codegree_matrix(edges: np.ndarray, n: int) -> np.ndarray:
    """``out[u, v]`` = number of edges containing both ``u`` and ``v``."""
    return _pick("codegree_matrix")(_as_edges(edges), n)


def vertex_degrees(edges: np.ndarray, n: int) -> np.ndarray:
    return _pick("vertex_degrees")(_as_edges(edges), n)


def degree_into(edges: np.ndarray, n: int, mask: np.ndarray) -> np.ndarray:
    """``out[v]`` = edges ``{v, a, b}`` with ``a, b`` both in ``mask``."""
    return _pick("degree_into")(_as_edges(edges), n, _as_mask(mask))


def pair_degree_into(edges: np.ndarray, n: int, mask: np.ndarray) -> np.ndarray:
    """``out[u, v]`` = edges ``{u, v, w}`` with ``w`` in ``mask``."""
    return _pick("pair_degree_into")(_as_edges(edges), n, _as_mask(mask))


def induced_count(edges: np.ndarray, mask: np.ndarray) -> int:
    return int(_pick("induced_count")(_as_edges(edges), _as_mask(mask)))


def assignable_count(edges: np.ndarray, member: np.ndarray) -> int:
    return int(_pick("assignable_count")(_as_edges(edges), _as_mask(member)))


def index_histogram(edges: np.ndarray, labels: np.ndarray, r: int) -> np.ndarray:
    labels = np.ascontiguousarray(labels, dtype=np.int64)
    return _pick("index_histogram")(_as_edges(edges), labels, r)


def pack_pair_bits(edges: np.ndarray, n: int) -> np.ndarray:
    return _pick("pack_pair_bits")(_as_edges(edges), n)


def triangle_count(adj: np.ndarray) -> int:
    return int(_pick("triangle_count")(_as_mask(adj)))


KERNELS = (
    "codegree_matrix",
    "vertex_degrees",
    "degree_into",
    "pair_degree_into",
    "induced_count",
    "assignable_count",
    "index_histogram",
    "pack_pair_bits",
    "triangle_count",
)
