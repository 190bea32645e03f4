"""Plane near-triangulations stored as rotation systems.

Each vertex lists its neighbours in counterclockwise order. Faces are traced
with the face on the left of each dart: arriving at ``v`` from ``u`` the walk
continues to the neighbour immediately clockwise of ``u`` around ``v``.

The shelling order for 4-connected triangulations lives here too, together
with the translation between vertex orders and transition scripts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .core import DerivationScript, TransitionLabel, start_state


class RotationError(ValueError):
    """Malformed rotation input."""


class ShellingError(ValueError):
    """The input graph does not admit the requested shelling."""


class EmbeddingError(ValueError):
    """A vertex order is inconsistent with the embedding."""


@dataclass(frozen=True)
class PlaneTriangulation:
    rotation: Mapping[int, tuple[int, ...]]
    outer: tuple[int, ...]

    def __post_init__(self) -> None:
        rot = {int(v): tuple(int(u) for u in nbrs) for v, nbrs in self.rotation.items()}
        for v, nbrs in rot.items():
            for u in nbrs:
                if u not in rot:
                    raise RotationError(f"vertex {v}: neighbour {u} is not a vertex")
        for v in self.outer:
            if v not in rot:
                raise RotationError(f"outer face vertex {v} is not a vertex")
        object.__setattr__(self, "rotation", rot)
        object.__setattr__(self, "outer", tuple(int(v) for v in self.outer))

    @property
    def n(self) -> int:
        return len(self.rotation)

    @property
    def vertices(self) -> list[int]:
        return sorted(self.rotation)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.rotation[v]

    def adjacent(self, u: int, v: int) -> bool:
        return v in self.rotation[u]

    def edges(self) -> list[tuple[int, int]]:
        return sorted({(min(u, v), max(u, v)) for u, nbrs in self.rotation.items() for v in nbrs})

    def _next_dart(self, u: int, v: int) -> tuple[int, int]:
        nbrs = self.rotation[v]
        return v, nbrs[(nbrs.index(u) - 1) % len(nbrs)]

    def faces(self) -> list[tuple[int, ...]]:
        """Vertex cycles of all faces; each face starts at its first dart in sorted order."""
        seen: set[tuple[int, int]] = set()
        out = []
        for u in self.vertices:
            for v in self.rotation[u]:
                if (u, v) in seen:
                    continue
                cycle = []
                dart = (u, v)
                while dart not in seen:
                    seen.add(dart)
                    cycle.append(dart[0])
                    dart = self._next_dart(*dart)
                out.append(tuple(cycle))
        return out

    def induced(self, keep: Iterable[int]) -> PlaneTriangulation:
        """Induced subgraph with the inherited embedding.

        The outer face of the result is the face holding every removed vertex
        (and the old outer face). Raises :class:`EmbeddingError` if removed
        vertices are spread over several faces.
        """
        keep = set(keep)
        missing = keep - set(self.rotation)
        if missing:
            raise RotationError(f"vertex {min(missing)} is not a vertex")
        if keep == set(self.rotation):
            return self
        sub = {v: tuple(u for u in self.rotation[v] if u in keep) for v in sorted(keep)}
        H = PlaneTriangulation(sub, ())
        marked: set[frozenset] = set()
        faces_by_dart = {}
        for face in H.faces():
            for t in range(len(face)):
                faces_by_dart[(face[t], face[(t + 1) % len(face)])] = face
        for u in keep:
            full = self.rotation[u]
            if not sub[u]:
                raise EmbeddingError(f"vertex {u} is isolated in the induced subgraph")
            for t, x in enumerate(full):
                if x in keep:
                    continue
                # first kept neighbour counterclockwise of x; x sits in the face of dart (w, u)
                w = next(full[(t + s) % len(full)] for s in range(1, len(full)) if full[(t + s) % len(full)] in keep)
                marked.add(frozenset(_face_darts(faces_by_dart[(w, u)])))
        if self.outer and set(self.outer) <= keep:
            traced = next((f for f in self.faces() if _same_cycle(f, self.outer)), None)
            if traced is None:
                raise EmbeddingError(f"declared outer face {self.outer} is not a face")
            marked.add(frozenset(_face_darts(faces_by_dart[(traced[0], traced[1])])))
        if len(marked) != 1:
            raise EmbeddingError(f"removed vertices lie in {len(marked)} faces of the induced subgraph")
        darts = next(iter(marked))
        outer = faces_by_dart[min(darts)]
        return PlaneTriangulation(sub, outer)


def _face_darts(face: tuple[int, ...]) -> list[tuple[int, int]]:
    return [(face[t], face[(t + 1) % len(face)]) for t in range(len(face))]


def _same_cycle(a: Sequence[int], b: Sequence[int]) -> bool:
    if len(a) != len(b) or set(a) != set(b):
        return False
    if not a:
        return True
    start = b.index(a[0])
    rot = tuple(b[start:]) + tuple(b[:start])
    if rot == tuple(a):
        return True
    back = (rot[0],) + rot[1:][::-1]
    return back == tuple(a)


@dataclass
class ValidationReport:
    simple: bool = True
    symmetric: bool = True
    connected: bool = True
    biconnected: bool = True
    euler: bool = True
    outer_is_face: bool = True
    inner_faces_triangles: bool = True
    all_faces_triangles: bool = True
    vertices: int = 0
    edges: int = 0
    faces: list[tuple[int, ...]] = field(default_factory=list)
    outer_face: tuple[int, ...] | None = None
    problems: list[str] = field(default_factory=list)

    @property
    def is_near_triangulation(self) -> bool:
        return all((self.simple, self.symmetric, self.biconnected, self.euler,
                    self.outer_is_face, self.inner_faces_triangles))

    @property
    def is_triangulation(self) -> bool:
        return self.is_near_triangulation and self.all_faces_triangles

    def __bool__(self) -> bool:
        return self.is_near_triangulation


def validate(G: PlaneTriangulation) -> ValidationReport:
    rep = ValidationReport(vertices=G.n)
    rot = G.rotation
    for v, nbrs in rot.items():
        if v in nbrs:
            rep.simple = False
            rep.problems.append(f"vertex {v}: loop")
        if len(set(nbrs)) != len(nbrs):
            rep.simple = False
            rep.problems.append(f"vertex {v}: repeated neighbour")
        for u in nbrs:
            if v not in rot[u]:
                rep.symmetric = False
                rep.problems.append(f"vertex {v}: lists {u} but {u} does not list {v}")
    if not (rep.simple and rep.symmetric):
        rep.euler = rep.outer_is_face = rep.inner_faces_triangles = rep.all_faces_triangles = False
        rep.connected = rep.biconnected = False
        return rep

    rep.edges = len(G.edges())
    rep.connected = _connected(rot, set())
    rep.biconnected = G.n >= 3 and rep.connected and all(_connected(rot, {v}) for v in rot)
    if not rep.biconnected:
        rep.problems.append("graph is not 2-connected")
    faces = G.faces()
    rep.faces = faces
    rep.euler = rep.connected and G.n - rep.edges + len(faces) == 2
    if not rep.euler:
        rep.problems.append(f"Euler check failed: V={G.n} E={rep.edges} F={len(faces)}")
    outer_idx = next((t for t, f in enumerate(faces) if _same_cycle(f, G.outer)), None)
    if outer_idx is None:
        rep.outer_is_face = False
        rep.problems.append(f"declared outer face {G.outer} is not a face")
    else:
        rep.outer_face = faces[outer_idx]
    rep.all_faces_triangles = all(len(f) == 3 for f in faces)
    bad = [f for t, f in enumerate(faces) if t != outer_idx and len(f) != 3]
    if bad:
        rep.inner_faces_triangles = False
        rep.problems.append(f"inner face {bad[0]} is not a triangle")
    return rep


def _connected(rot: Mapping[int, Sequence[int]], removed: set[int]) -> bool:
    verts = [v for v in rot if v not in removed]
    if not verts:
        return True
    seen = {verts[0]}
    stack = [verts[0]]
    while stack:
        v = stack.pop()
        for u in rot[v]:
            if u not in removed and u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(verts)


def separating_triangles(G: PlaneTriangulation) -> list[tuple[int, int, int]]:
    """All 3-cycles of ``G`` that do not bound a face, sorted."""
    faces = {frozenset(f) for f in G.faces() if len(f) == 3}
    out = []
    for u in G.vertices:
        higher = sorted(w for w in G.rotation[u] if w > u)
        for v, w in itertools.combinations(higher, 2):
            if G.adjacent(v, w) and frozenset((u, v, w)) not in faces:
                out.append((u, v, w))
    return out


def boundary_path(H: PlaneTriangulation, v1: int, v2: int) -> list[int]:
    """Outer boundary of ``H`` read from ``v1`` to ``v2`` without the edge ``v1 v2``."""
    cycle = list(H.outer)
    if v1 not in cycle or v2 not in cycle:
        raise EmbeddingError(f"vertices {v1} and {v2} are not both on the outer face")
    t = cycle.index(v1)
    seq = cycle[t:] + cycle[:t]
    if len(seq) > 1 and seq[1] == v2:
        seq = [seq[0]] + seq[1:][::-1]
    if seq[-1] != v2:
        raise EmbeddingError(f"{v1} {v2} is not an edge of the outer face")
    return seq


@dataclass(frozen=True)
class ShellingOrder:
    order: tuple[int, ...]
    # (j, k) per added vertex v_4..v_n: boundary positions of its first/last neighbour
    labels: tuple[TransitionLabel, ...] = ()

    @property
    def v1(self) -> int:
        return self.order[0]

    @property
    def v2(self) -> int:
        return self.order[1]

    @property
    def v3(self) -> int:
        return self.order[2]

    def prefix(self, i: int) -> tuple[int, ...]:
        return self.order[:i]

    def suffix(self, i: int) -> tuple[int, ...]:
        return self.order[i:]


def _outer_edge_check(G: PlaneTriangulation, v1: int, v2: int) -> int:
    outer = G.outer
    if len(outer) != 3 or v1 not in outer or v2 not in outer or v1 == v2:
        raise ShellingError(f"{v1} {v2} is not an edge of the outer face {outer}")
    return next(v for v in outer if v not in (v1, v2))


def compute_shelling_order(G: PlaneTriangulation, v1: int | None = None, v2: int | None = None) -> ShellingOrder:
    """Order the vertices of a 4-connected triangulation so that every prefix and
    every suffix (from the fourth vertex up to three from the end) induces a
    near-triangulation.

    ``v1`` and ``v2`` default to the first two outer-face vertices.
    """
    rep = validate(G)
    if not rep.is_triangulation:
        raise ShellingError(f"input is not a plane triangulation: {'; '.join(rep.problems)}")
    seps = separating_triangles(G)
    if seps:
        raise ShellingError(f"input is not 4-connected: separating triangle {seps[0]}")
    if G.n < 6:
        raise ShellingError(f"need at least 6 vertices, got {G.n}")
    if v1 is None or v2 is None:
        v1, v2 = G.outer[0], G.outer[1]
    vn = _outer_edge_check(G, v1, v2)
    v3 = next(w for w in G.rotation[v1] if w not in (v2, vn) and G.adjacent(w, v2)
              and any(set(f) == {v1, v2, w} for f in rep.faces))

    order = [v1, v2, v3]
    placed = set(order)
    n = G.n
    while len(order) < n - 3:
        rest = G.induced(set(G.rotation) - placed)
        ring = list(rest.outer)
        t = ring.index(vn)
        ring = ring[t:] + ring[:t]
        pos = {w: p for p, w in enumerate(ring, start=1)}
        size = len(ring)
        chords = []
        for x in ring:
            for y in rest.rotation[x]:
                a, b = pos.get(x), pos.get(y)
                if a is None or b is None or a >= b:
                    continue
                if b - a >= 2 and not (a == 1 and b == size):
                    chords.append((b - a, a, b))

        def attached(w: int) -> bool:
            return sum(u in placed for u in G.rotation[w]) >= 2

        if chords:
            _, a, b = min(chords)
            pick = next((ring[p - 1] for p in range(a + 1, b) if attached(ring[p - 1])), None)
            if pick is None:
                raise ShellingError(f"no attachable vertex strictly inside chord {ring[a - 1]}-{ring[b - 1]}")
        else:
            pick = next((w for w in ring[1:] if attached(w)), None)
            if pick is None:
                raise ShellingError(f"no boundary vertex with two placed neighbours after {len(order)} steps")
        order.append(pick)
        placed.add(pick)
    order += sorted(v for v in G.rotation if v not in placed and v != vn)
    order.append(vn)
    script = derivation_from_order(G, order)
    return ShellingOrder(tuple(order), script.steps)


def derivation_from_order(G: PlaneTriangulation, order: ShellingOrder | Sequence[int]) -> DerivationScript:
    """Transition script tracking the outer boundary of ``G_3, G_4, ..., G_n``.

    Each added vertex must see a run of at least two consecutive boundary
    vertices of the graph built so far; the label is that run's first and last
    position counted from ``v_1``.
    """
    verts = tuple(order.order if isinstance(order, ShellingOrder) else order)
    if sorted(verts) != G.vertices:
        raise EmbeddingError("order is not a permutation of the vertices")
    v1, v2, v3 = verts[:3]
    if not (G.adjacent(v1, v2) and G.adjacent(v1, v3) and G.adjacent(v2, v3)):
        raise EmbeddingError(f"first three vertices {v1}, {v2}, {v3} do not form a triangle")
    boundary = [v1, v3, v2]
    placed = {v1, v2, v3}
    steps = []
    for step, x in enumerate(verts[3:], start=1):
        nbrs = [u for u in G.rotation[x] if u in placed]
        where = {w: p for p, w in enumerate(boundary, start=1)}
        inner = [u for u in nbrs if u not in where]
        if inner:
            raise EmbeddingError(f"step {step}: vertex {x} is adjacent to interior vertex {inner[0]}")
        positions = sorted(where[u] for u in nbrs)
        if len(positions) < 2:
            raise EmbeddingError(f"step {step}: vertex {x} has {len(positions)} placed neighbours")
        j, k = positions[0], positions[-1]
        if positions != list(range(j, k + 1)):
            raise EmbeddingError(f"step {step}: neighbours of {x} are not consecutive on the boundary")
        steps.append(TransitionLabel(j, k))
        boundary = boundary[:j] + [x] + boundary[k - 1:]
        placed.add(x)
    return DerivationScript(start_state(), tuple(steps))


def build_from_derivation(script: DerivationScript | Sequence[tuple[int, int]]) -> tuple[PlaneTriangulation, ShellingOrder]:
    """Grow a near-triangulation from the triangle ``v1 v3 v2``, one vertex per label.

    Vertices are numbered in creation order: ``v1 = 1``, ``v2 = 2``,
    ``v3 = 3``, then ``4, 5, ...``. A label ``(i, j)`` joins the new vertex to
    boundary positions ``i..j``.
    """
    steps = script.steps if isinstance(script, DerivationScript) else tuple(TransitionLabel(*s) for s in script)
    if isinstance(script, DerivationScript) and script.start != start_state(script.start.k):
        raise ValueError("graph construction needs a script that starts at {'acb'}")
    # counterclockwise: 1 at the lower left, 2 at the lower right, 3 on top
    rot: dict[int, list[int]] = {1: [2, 3], 2: [3, 1], 3: [1, 2]}
    boundary = [1, 3, 2]
    for step, (i, j) in enumerate(steps, start=1):
        size = len(boundary)
        if not (1 <= i < j <= size):
            raise ValueError(f"step {step}: label ({i}, {j}) is invalid for boundary length {size}")
        x = len(rot) + 1
        run = boundary[i - 1:j]
        for t, w in enumerate(run[:-1]):
            nxt = run[t + 1]
            r = rot[w]
            r.insert(r.index(nxt) + 1, x)
        last, prev = run[-1], run[-2]
        r = rot[last]
        r.insert(r.index(prev), x)
        rot[x] = list(run)
        boundary = boundary[:i] + [x] + boundary[j - 1:]
    G = PlaneTriangulation({v: tuple(r) for v, r in rot.items()}, tuple(boundary))
    return G, ShellingOrder(tuple(range(1, len(rot) + 1)), tuple(steps))
