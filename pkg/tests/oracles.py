"""Independent brute-force oracles used to freeze and cross-check expected values."""

import numpy as np

from arrowlab.graph import Graph, brute_force_copies


def _masks(F: Graph, G: Graph) -> list[int]:
    idx = F.edge_index
    return [sum(1 << idx[e] for e in copy) for copy in brute_force_copies(F, G)]


def good_blue_masks(F: Graph, G: Graph, H: Graph) -> np.ndarray:
    """Blue masks of every good coloring, by filtering all 2^m colorings."""
    colors = np.arange(1 << F.m, dtype=np.int64)
    for g in _masks(F, G):
        colors = colors[(colors & g) != 0]  # a G-copy needs a blue edge
    for h in _masks(F, H):
        colors = colors[(colors & h) != h]  # an H-copy needs a red edge
    return colors


def count_good(F: Graph, G: Graph, H: Graph) -> int:
    return int(good_blue_masks(F, G, H).size)


def arrows_exhaustive(F: Graph, G: Graph, H: Graph) -> bool:
    return count_good(F, G, H) == 0


def to_graph(nxg) -> Graph:
    nodes = sorted(nxg.nodes())
    pos = {v: i for i, v in enumerate(nodes)}
    return Graph(len(nodes), [(pos[u], pos[v]) for u, v in nxg.edges()])
