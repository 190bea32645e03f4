"""Small plane triangulations shipped as ``.rot`` files.

``octahedron`` and ``icosahedron`` are 4-connected. ``tetrahedron`` is K4 and
``bipyramid`` is two tetrahedra glued along a face, so it has a separating
triangle.
"""

from __future__ import annotations

from importlib import resources

from ..formats import parse_rot
from ..triangulation import PlaneTriangulation

NAMES = ("tetrahedron", "bipyramid", "octahedron", "icosahedron")


def load(name: str) -> PlaneTriangulation:
    if name not in NAMES:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(NAMES)}")
    text = resources.files(__package__).joinpath(f"{name}.rot").read_text()
    return parse_rot(text, f"catalog/{name}.rot")
