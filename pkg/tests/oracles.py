"""Brute-force reference computations that share no code with the package."""

from __future__ import annotations

from itertools import combinations, permutations


def edge_set(edges) -> set[tuple[int, int, int]]:
    return {tuple(sorted(int(x) for x in e)) for e in edges}


def is_loose_triangle(e1, e2, e3) -> bool:
    """Three triples, pairwise meeting in exactly one vertex, the three meeting points distinct."""
    a, b, c = set(e1), set(e2), set(e3)
    ab, bc, ca = a & b, b & c, c & a
    if not (len(ab) == len(bc) == len(ca) == 1):
        return False
    return len(ab | bc | ca) == 3 and len(a | b | c) == 6


def c6_census(edges) -> int:
    """Number of loose 6-cycle edge sets, by trying every 3-subset of edges."""
    es = sorted(edge_set(edges))
    return sum(1 for t in combinations(es, 3) if is_loose_triangle(*t))


def spans_c6(E: set, six) -> bool:
    """Some choice of 3 links and an assignment of the other 3 vertices closes a loose cycle."""
    six = list(six)
    for links in combinations(six, 3):
        rest = [v for v in six if v not in links]
        l1, l2, l3 = links
        for i12, i23, i31 in permutations(rest):
            if (
                tuple(sorted((l1, i12, l2))) in E
                and tuple(sorted((l2, i23, l3))) in E
                and tuple(sorted((l3, i31, l1))) in E
            ):
                return True
    return False


def factor_oracle_12(n: int, edges) -> bool:
    """For n = 12: try all 462 splits into two 6-sets (vertex 0 on the first side)."""
    assert n == 12
    E = edge_set(edges)
    for rest in combinations(range(1, 12), 5):
        side = (0, *rest)
        other = [v for v in range(12) if v not in side]
        if spans_c6(E, side) and spans_c6(E, other):
            return True
    return False


def triangles(adj) -> int:
    n = len(adj)
    return sum(1 for a, b, c in combinations(range(n), 3) if adj[a][b] and adj[a][c] and adj[b][c])


def triangles_two_one(adj, V1, V2) -> int:
    return sum(1 for x, y in combinations(V1, 2) if adj[x][y] for z in V2 if adj[x][z] and adj[y][z])


def triangles_tripartite(adj, A, B, C) -> int:
    return sum(1 for x in A for y in B if adj[x][y] for z in C if adj[x][z] and adj[y][z])
