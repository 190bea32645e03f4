"""Proper colorings of plane graphs and the boundary strings they induce."""

from __future__ import annotations

from typing import Iterator, Mapping, Sequence

from .core import LETTERS, DerivationScript, LSet, ReplayError, encode, replay, start_state
from .triangulation import PlaneTriangulation, ShellingOrder, boundary_path, build_from_derivation


def _letter(x: int | str) -> int:
    return LETTERS.index(x) if isinstance(x, str) else int(x)


def enumerate_colorings(
    G: PlaneTriangulation,
    seed: Mapping[int, int | str] | None = None,
    k: int = 4,
    order: Sequence[int] | None = None,
) -> Iterator[dict[int, int]]:
    """Yield every proper ``k``-coloring of ``G`` that extends ``seed``.

    Vertices are assigned in ``order`` (index order by default), letters in
    alphabet order, so the stream is deterministic. Each coloring is a fresh
    dict from vertex to letter index.
    """
    seed = {int(v): _letter(c) for v, c in (seed or {}).items()}
    for v, c in seed.items():
        if v not in G.rotation:
            raise ValueError(f"seeded vertex {v} is not in the graph")
        if not 0 <= c < k:
            raise ValueError(f"seeded letter {c} for vertex {v} is outside an alphabet of size {k}")
        for u in G.rotation[v]:
            if seed.get(u) == c:
                raise ValueError(f"seed is improper: adjacent vertices {v} and {u} share letter {LETTERS[c]}")
    if order is None:
        order = G.vertices
    elif sorted(order) != G.vertices:
        raise ValueError("order is not a permutation of the vertices")
    free = [v for v in order if v not in seed]
    color = dict(seed)
    nbrs = {v: G.rotation[v] for v in free}

    def extend(t: int) -> Iterator[dict[int, int]]:
        if t == len(free):
            yield dict(color)
            return
        v = free[t]
        used = {color[u] for u in nbrs[v] if u in color}
        for c in range(k):
            if c in used:
                continue
            color[v] = c
            yield from extend(t + 1)
        color.pop(v, None)

    yield from extend(0)


def count_colorings(G: PlaneTriangulation, seed: Mapping[int, int | str] | None = None, k: int = 4,
                    order: Sequence[int] | None = None) -> int:
    return sum(1 for _ in enumerate_colorings(G, seed, k, order))


def boundary_string_set(G: PlaneTriangulation, order: ShellingOrder | Sequence[int], i: int | None = None,
                        k: int = 4) -> LSet:
    """Boundary words of ``G_i`` over all proper colorings with ``v1, v2, v3`` fixed to a, b, c.

    ``G_i`` is induced by the first ``i`` vertices of ``order`` (all of them
    when ``i`` is None). Its outer boundary is read from ``v1`` to ``v2``.
    """
    verts = tuple(order.order if isinstance(order, ShellingOrder) else order)
    i = len(verts) if i is None else i
    if not 3 <= i <= len(verts):
        raise ValueError(f"prefix size {i} outside 3..{len(verts)}")
    v1, v2, v3 = verts[:3]
    H = G.induced(verts[:i])
    walk = boundary_path(H, v1, v2)
    seen = set()
    for g in enumerate_colorings(H, {v1: 0, v2: 1, v3: 2}, k, verts[:i]):
        seen.add(encode([g[w] for w in walk], k))
    return LSet(len(walk), seen, k)


def roundtrip_mismatch(script: DerivationScript | Sequence[tuple[int, int]], k: int = 4) -> int | None:
    """First prefix length whose boundary set differs from the replayed state, or None."""
    if not isinstance(script, DerivationScript):
        script = DerivationScript(start_state(k), tuple(script))
    try:
        states = replay(script)
    except ReplayError as exc:
        return exc.step
    G, order = build_from_derivation(script)
    for t, state in enumerate(states):
        if boundary_string_set(G, order, 3 + t, k) != state:
            return t
    return None


def roundtrip_check(script: DerivationScript | Sequence[tuple[int, int]], k: int = 4) -> bool:
    """True iff the string engine and the coloring oracle agree on every prefix."""
    return roundtrip_mismatch(script, k) is None
