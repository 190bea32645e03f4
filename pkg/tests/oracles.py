"""Slow reference implementations, written against plain Python strings.

Nothing here imports the package's transition or search code.
"""

from __future__ import annotations

import itertools

import numpy as np


def naive_apply(strings, i, j, alphabet="abcd"):
    out = set()
    for s in strings:
        window = s[i - 1:j]
        for c in alphabet:
            if c not in window:
                out.add(s[:i] + c + s[j - 1:])
    return out


def relabel(strings, mapping):
    return {"".join(mapping.get(ch, ch) for ch in s) for s in strings}


def naive_canonical(strings, images):
    """Least sorted member tuple among the images of a set."""
    return min(tuple(sorted(img(strings))) for img in images)


def cd_images(alphabet="abcd"):
    swap = {"c": "d", "d": "c"}
    return [lambda S: set(S), lambda S: relabel(S, swap)]


def naive_bfs(start, max_depth, max_length, alphabet="abcd", images=None):
    """Per-depth counts of distinct canonical sets, and whether the empty set shows up."""
    images = images or [lambda S: set(S)]
    root = naive_canonical(start, images)
    seen = {root}
    frontier = [root]
    counts = [1]
    for _ in range(max_depth):
        nxt = []
        for state in frontier:
            length = len(state[0])
            for i, j in itertools.combinations(range(1, length + 1), 2):
                succ = naive_apply(state, i, j, alphabet)
                if not succ:
                    return counts + [len(nxt) + 1], True
                if len(next(iter(succ))) > max_length:
                    continue
                key = naive_canonical(succ, images)
                if key not in seen:
                    seen.add(key)
                    nxt.append(key)
        counts.append(len(nxt))
        frontier = nxt
    return counts, False


def brute_force_colorings(edges, vertices, k, seed=None):
    """Count proper colorings by checking every assignment (vectorized)."""
    seed = seed or {}
    free = [v for v in vertices if v not in seed]
    grid = np.array(list(itertools.product(range(k), repeat=len(free))), dtype=np.int8).reshape(-1, len(free))
    col = {v: grid[:, t] for t, v in enumerate(free)}
    rows = grid.shape[0]
    for v, c in seed.items():
        col[v] = np.full(rows, c, dtype=np.int8)
    ok = np.ones(rows, dtype=bool)
    for u, v in edges:
        ok &= col[u] != col[v]
    return int(ok.sum())


def all_triangles(edges):
    adj = {}
    for u, v in edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    return sorted(
        (a, b, c)
        for a, b, c in itertools.combinations(sorted(adj), 3)
        if b in adj[a] and c in adj[a] and c in adj[b]
    )
