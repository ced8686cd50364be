"""Loose 6-cycles ``C_6^3`` and complete 3-partite blocks ``K_3^3(2)``.

A copy is identified by its edge set.  ``CycleCopy`` canonicalises on
construction (links ascending, inners re-attached to their link pairs), so
two copies compare equal exactly when they have the same three edges.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from itertools import combinations

from .hypergraph import Hypergraph3, Triple, bits_of, mask_of
from .partition import IndexVector, Partition


@dataclass(frozen=True, order=True)
class CycleCopy:
    """Links ``(l1, l2, l3)`` and inners ``(i12, i23, i31)``.

    Edges are ``{l1, i12, l2}``, ``{l2, i23, l3}`` and ``{l3, i31, l1}``.
    """

    links: tuple[int, int, int]
    inners: tuple[int, int, int]

    def __post_init__(self) -> None:
        l1, l2, l3 = (int(v) for v in self.links)
        i12, i23, i31 = (int(v) for v in self.inners)
        inner = {frozenset((l1, l2)): i12, frozenset((l2, l3)): i23, frozenset((l3, l1)): i31}
        a, b, c = sorted((l1, l2, l3))
        object.__setattr__(self, "links", (a, b, c))
        object.__setattr__(
            self,
            "inners",
            (
                inner.get(frozenset((a, b)), i12),
                inner.get(frozenset((b, c)), i23),
                inner.get(frozenset((c, a)), i31),
            ),
        )

    @property
    def edges(self) -> tuple[Triple, Triple, Triple]:
        l1, l2, l3 = self.links
        i12, i23, i31 = self.inners
        return (
            tuple(sorted((l1, i12, l2))),
            tuple(sorted((l2, i23, l3))),
            tuple(sorted((l3, i31, l1))),
        )

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.links + self.inners))

    @property
    def mask(self) -> int:
        return mask_of(self.links + self.inners)

    def to_json(self) -> dict:
        return {"links": list(self.links), "inners": list(self.inners)}

    @classmethod
    def from_json(cls, data: dict) -> CycleCopy:
        return cls(tuple(data["links"]), tuple(data["inners"]))


def is_cycle_copy(H: Hypergraph3, c: CycleCopy) -> bool:
    vs = c.links + c.inners
    if len(set(vs)) != 6 or any(not 0 <= v < H.n for v in vs):
        return False
    return all(e in H.edge_set for e in c.edges)


@dataclass
class CopyEnumeration:
    copies: list[CycleCopy]
    complete: bool

    def __len__(self) -> int:
        return len(self.copies)


def iter_copies(
    H: Hypergraph3,
    within: int | None = None,
    target: tuple[Partition, IndexVector] | None = None,
) -> Iterator[CycleCopy]:
    """Every copy inside the vertex bitset ``within``, each edge set once.

    Links are taken ascending (``l1 < l2 < l3``); inners come from the three
    pairwise link neighbourhoods.  With ``target`` only copies whose vertex
    set has that index vector are produced, pruned part by part.
    """
    R = (1 << H.n) - 1 if within is None else within
    verts = bits_of(R)
    if target is not None:
        P, vec = target
        pmasks = P.masks
        lab = P.labels
        if sum(vec) != 6 or len(vec) != P.r:
            return
    for x, l1 in enumerate(verts):
        for y in range(x + 1, len(verts)):
            l2 = verts[y]
            m12 = H.link(l1, l2) & R
            if not m12:
                continue
            for l3 in verts[y + 1 :]:
                m23 = H.link(l2, l3) & R
                m31 = H.link(l3, l1) & R
                if not (m23 and m31):
                    continue
                excl = ~((1 << l1) | (1 << l2) | (1 << l3))
                if target is None:
                    allowed = -1
                    need = None
                else:
                    need = list(vec)
                    for v in (l1, l2, l3):
                        need[lab[v]] -= 1
                    if min(need) < 0:
                        continue
                    allowed = 0
                    for i, k in enumerate(need):
                        if k:
                            allowed |= pmasks[i]
                a_mask = m12 & excl & allowed
                for a in bits_of(a_mask):
                    if need is not None:
                        need[lab[a]] -= 1
                        allowed_b = 0
                        for i, k in enumerate(need):
                            if k:
                                allowed_b |= pmasks[i]
                    else:
                        allowed_b = -1
                    for b in bits_of(m23 & excl & ~(1 << a) & allowed_b):
                        if need is not None:
                            need[lab[b]] -= 1
                            allowed_c = 0
                            for i, k in enumerate(need):
                                if k:
                                    allowed_c |= pmasks[i]
                        else:
                            allowed_c = -1
                        for c in bits_of(m31 & excl & ~(1 << a) & ~(1 << b) & allowed_c):
                            yield CycleCopy((l1, l2, l3), (a, b, c))
                        if need is not None:
                            need[lab[b]] += 1
                    if need is not None:
                        need[lab[a]] += 1


def enumerate_copies(
    H: Hypergraph3,
    filter: tuple[Partition, IndexVector] | None = None,
    cap: int | None = None,
    within: int | None = None,
) -> CopyEnumeration:
    """Collect up to ``cap`` copies; ``complete`` tells whether all were seen."""
    if cap is not None and cap < 1:
        raise ValueError("cap must be >= 1")
    out: list[CycleCopy] = []
    it = iter_copies(H, within=within, target=filter)
    for c in it:
        if cap is not None and len(out) >= cap:
            return CopyEnumeration(out, complete=False)
        out.append(c)
    return CopyEnumeration(out, complete=True)


def copies_on(H: Hypergraph3, vertices: Sequence[int] | int) -> Iterator[CycleCopy]:
    """Copies spanning exactly the given 6 vertices (a list or a bitset)."""
    mask = vertices if isinstance(vertices, int) else mask_of(vertices)
    vs = bits_of(mask)
    if len(vs) != 6:
        return
    for links in combinations(vs, 3):
        l1, l2, l3 = links
        rest = mask & ~((1 << l1) | (1 << l2) | (1 << l3))
        m12 = H.link(l1, l2) & rest
        m23 = H.link(l2, l3) & rest
        m31 = H.link(l3, l1) & rest
        if not (m12 and m23 and m31):
            continue
        for a in bits_of(m12):
            for b in bits_of(m23 & ~(1 << a)):
                for c in bits_of(m31 & ~(1 << a) & ~(1 << b)):
                    yield CycleCopy(links, (a, b, c))


def spanning_copy(H: Hypergraph3, vertices: Sequence[int] | int) -> CycleCopy | None:
    """Some copy on exactly these 6 vertices, or ``None``."""
    return next(copies_on(H, vertices), None)


def count_copies_on(H: Hypergraph3, vertices: Sequence[int] | int) -> int:
    return sum(1 for _ in copies_on(H, vertices))


# -- K_3^3(2) -------------------------------------------------------------------


@dataclass(frozen=True)
class K332Copy:
    parts: tuple[tuple[int, int], tuple[int, int], tuple[int, int]]

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(v for p in self.parts for v in p))

    @property
    def edges(self) -> list[Triple]:
        (a1, a2), (b1, b2), (c1, c2) = self.parts
        return [tuple(sorted((a, b, c))) for a in (a1, a2) for b in (b1, b2) for c in (c1, c2)]

    def spanning_cycle(self) -> CycleCopy:
        """The loose cycle with links ``a1, b1, c1`` and inners ``c2, a2, b2``."""
        (a1, a2), (b1, b2), (c1, c2) = self.parts
        return CycleCopy((a1, b1, c1), (c2, a2, b2))


def is_k332(H: Hypergraph3, k: K332Copy) -> bool:
    if len(set(k.vertices)) != 6:
        return False
    return all(e in H.edge_set for e in k.edges)


@dataclass
class K332Search:
    copy: K332Copy | None
    exhaustive: bool
    examined: int

    @property
    def found(self) -> bool:
        return self.copy is not None


def find_k332(H: Hypergraph3, budget: int = 1_000_000) -> K332Search:
    """Search for a ``K_3^3(2)``; pairs of high codegree are tried first.

    For a first part ``{a1, a2}`` the common link graph ``b ~ c`` iff both
    ``a1 b c`` and ``a2 b c`` are edges must contain a 4-cycle ``b1 c1 b2 c2``.
    ``examined`` counts ``(a1, a2, b1, b2)`` candidates.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    n = H.n
    cod = H.codegrees
    pairs = [(int(cod[a, b]), a, b) for a in range(n) for b in range(a + 1, n) if cod[a, b] >= 4]
    pairs.sort(key=lambda t: (-t[0], t[1], t[2]))
    examined = 0
    for _, a1, a2 in pairs:
        amask = (1 << a1) | (1 << a2)
        common: dict[int, int] = {}
        for b in range(n):
            if amask >> b & 1:
                continue
            nb = H.link(a1, b) & H.link(a2, b) & ~amask
            if nb.bit_count() >= 2:
                common[b] = nb
        bs = sorted(common)
        for i, b1 in enumerate(bs):
            for b2 in bs[i + 1 :]:
                examined += 1
                if examined > budget:
                    return K332Search(None, False, examined - 1)
                cs = common[b1] & common[b2] & ~((1 << b1) | (1 << b2))
                if cs.bit_count() >= 2:
                    c1, c2 = bits_of(cs)[:2]
                    return K332Search(K332Copy(((a1, a2), (b1, b2), (c1, c2))), True, examined)
    return K332Search(None, True, examined)


# -- brute-force pattern test (independent of the link-based code above) ---------


def is_loose_triangle(edges: Sequence[Sequence[int]]) -> bool:
    """Three triples forming a loose 6-cycle: each pair meets in one vertex,
    the three meeting vertices are distinct, six vertices overall."""
    if len(edges) != 3:
        return False
    sets = [frozenset(e) for e in edges]
    if any(len(s) != 3 for s in sets) or len(frozenset().union(*sets)) != 6:
        return False
    meets = []
    for s, t in combinations(sets, 2):
        inter = s & t
        if len(inter) != 1:
            return False
        meets.append(next(iter(inter)))
    return len(set(meets)) == 3


def cycle_from_edges(edges: Sequence[Sequence[int]]) -> CycleCopy:
    e1, e2, e3 = (frozenset(e) for e in edges)
    l12 = next(iter(e1 & e2))
    l23 = next(iter(e2 & e3))
    l31 = next(iter(e3 & e1))
    return CycleCopy(
        (l31, l12, l23),
        (next(iter(e1 - {l12, l31})), next(iter(e2 - {l12, l23})), next(iter(e3 - {l23, l31}))),
    )

