"""Maximum bipartite matching by augmenting paths (Hopcroft-Karp)."""

from __future__ import annotations

from collections import deque
from collections.abc import Sequence

_INF = float("inf")


def hopcroft_karp(adj: Sequence[Sequence[int]], n_right: int) -> list[int]:
    """Maximum matching of a bipartite graph.

    ``adj[u]`` lists the right-vertices adjacent to left-vertex ``u``; the
    order of each list is the order in which augmenting paths try them, so
    callers can randomise the result by shuffling.  Returns ``match_left``
    with ``match_left[u]`` the partner of ``u`` or ``-1``.
    """
    n_left = len(adj)
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    dist = [0.0] * n_left

    def bfs() -> bool:
        q: deque[int] = deque()
        for u in range(n_left):
            if match_l[u] == -1:
                dist[u] = 0
                q.append(u)
            else:
                dist[u] = _INF
        found = False
        while q:
            u = q.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w == -1:
                    found = True
                elif dist[w] == _INF:
                    dist[w] = dist[u] + 1
                    q.append(w)
        return found

    def dfs(u: int) -> bool:
        # iterative to stay clear of the recursion limit on long paths
        stack = [(u, iter(adj[u]))]
        path: list[tuple[int, int]] = []
        while stack:
            x, it = stack[-1]
            advanced = False
            for v in it:
                w = match_r[v]
                if w == -1:
                    path.append((x, v))
                    for a, b in path:
                        match_l[a] = b
                        match_r[b] = a
                    return True
                if dist[w] == dist[x] + 1:
                    path.append((x, v))
                    stack.append((w, iter(adj[w])))
                    advanced = True
                    break
            if not advanced:
                dist[x] = _INF
                stack.pop()
                if path:
                    path.pop()
        return False

    while bfs():
        for u in range(n_left):
            if match_l[u] == -1:
                dfs(u)
    return match_l


def matching_size(match_left: Sequence[int]) -> int:
    return sum(1 for v in match_left if v != -1)


def hall_violator(adj: Sequence[Sequence[int]], match_left: Sequence[int], n_right: int) -> tuple[list[int], list[int]] | None:
    """For a maximum matching that is not left-perfect, a set ``S`` of left
    vertices with ``|N(S)| < |S|`` (returned as ``(S, N(S))``); else ``None``.

    ``S`` is everything reachable from an unmatched left vertex along
    alternating paths (Konig's construction).
    """
    match_r = [-1] * n_right
    for u, v in enumerate(match_left):
        if v != -1:
            match_r[v] = u
    free = [u for u, v in enumerate(match_left) if v == -1]
    if not free:
        return None
    seen_l = set(free)
    seen_r: set[int] = set()
    q = deque(free)
    while q:
        u = q.popleft()
        for v in adj[u]:
            if v in seen_r:
                continue
            seen_r.add(v)
            w = match_r[v]
            if w != -1 and w not in seen_l:
                seen_l.add(w)
                q.append(w)
    return sorted(seen_l), sorted(seen_r)
