"""Canonical labelling of small vertex-coloured multigraphs.

Colour refinement followed by individualisation/backtracking; the canonical
form is the lexicographically smallest encoding over all leaves of the
search tree. Exponential in the worst case, which is fine for graphs with a
dozen edges.
"""

from __future__ import annotations

from collections import Counter
from typing import Hashable, Sequence


def _refine(colours: list[int], adj: list[dict[int, int]]) -> list[int]:
    n_classes = len(set(colours))
    while True:
        sigs = [
            (colours[v], tuple(sorted((colours[u], m) for u, m in adj[v].items())))
            for v in range(len(colours))
        ]
        ranking = {s: i for i, s in enumerate(sorted(set(sigs)))}
        colours = [ranking[s] for s in sigs]
        if len(ranking) == n_classes:
            return colours
        n_classes = len(ranking)


def canonical_order(
    n: int,
    edges: Sequence[tuple[int, int]],
    initial: Sequence[Hashable],
) -> tuple[tuple, list[int]]:
    """Return ``(encoding, order)`` for a multigraph on vertices ``0..n-1``.

    ``initial`` holds an orderable invariant colour per vertex. ``order[i]`` is
    the vertex placed at canonical position ``i``. Two inputs are isomorphic
    (colour-preserving) iff their encodings are equal.
    """
    adj: list[dict[int, int]] = [dict() for _ in range(n)]
    for u, v in edges:
        adj[u][v] = adj[u].get(v, 0) + 1
        if u != v:
            adj[v][u] = adj[v].get(u, 0) + 1
    rank = {c: i for i, c in enumerate(sorted(set(initial)))}
    start = [rank[c] for c in initial]
    edge_mult = Counter((min(u, v), max(u, v)) for u, v in edges)

    best: list = [None, None]

    def encode(colours: list[int]) -> tuple[tuple, list[int]]:
        order = sorted(range(n), key=lambda v: colours[v])
        pos = {v: i for i, v in enumerate(order)}
        enc_edges = tuple(sorted(
            (min(pos[u], pos[v]), max(pos[u], pos[v]), m) for (u, v), m in edge_mult.items()
        ))
        return (tuple(initial[v] for v in order), enc_edges), order

    def search(colours: list[int]) -> None:
        colours = _refine(colours, adj)
        cells: dict[int, list[int]] = {}
        for v, c in enumerate(colours):
            cells.setdefault(c, []).append(v)
        target = next((c for c in sorted(cells) if len(cells[c]) > 1), None)
        if target is None:
            enc, order = encode(colours)
            if best[0] is None or enc < best[0]:
                best[0], best[1] = enc, order
            return
        for v in cells[target]:
            split = [2 * c for c in colours]
            split[v] -= 1
            search(split)

    if n == 0:
        return ((), ()), []
    search(start)
    return best[0], best[1]
