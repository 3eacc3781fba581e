"""Shared fixtures and independent oracles for the test suite."""

import itertools

import numpy as np
import pytest

from simine import (AttributeColumn, AttributedGraph, Description, ScoreConstants,
                    extension, score_bi, score_single)

# 11-vertex example: one numeric attribute plus three binary ones.  The edge
# set is an arbitrary 18-edge layout; tests only rely on the attribute table.
FIG_A = [3.5, 2.6, 3.8, 3.2, 1.8, 1.2, 5.4, 0.9, 6.7, 2.3, 3.1]
FIG_B = [1, 1, 1, 1, 1, 0, 0, 1, 0, 0, 0]
FIG_C = [0, 0, 1, 0, 0, 0, 1, 1, 1, 1, 1]
FIG_D = [1, 0, 1, 1, 1, 0, 0, 0, 0, 1, 0]
FIG_EDGES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4), (4, 5),
             (5, 6), (6, 7), (7, 8), (8, 9), (9, 10), (10, 0), (4, 9), (5, 10),
             (6, 8), (2, 7)]


@pytest.fixture
def fig_graph():
    cols = [
        AttributeColumn("a", "numeric", FIG_A),
        AttributeColumn("b", "nominal", [str(x) for x in FIG_B]),
        AttributeColumn("c", "nominal", [str(x) for x in FIG_C]),
        AttributeColumn("d", "nominal", [str(x) for x in FIG_D]),
    ]
    return AttributedGraph(11, FIG_EDGES, columns=cols)


@pytest.fixture
def triangle():
    return AttributedGraph(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def path4():
    return AttributedGraph(4, [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def star5():
    return AttributedGraph(5, [(0, 1), (0, 2), (0, 3), (0, 4)])


def random_graph(seed, n=None, p=None, attrs=(("a", 2), ("b", 2), ("c", 2), ("d", 2))):
    """Random G(n, p) with random nominal attributes; always has an edge."""
    rng = np.random.default_rng(seed)
    n = n or int(rng.integers(12, 41))
    p = p or float(rng.uniform(0.1, 0.4))
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    if not edges:
        edges = [(0, 1)]
    cols = [AttributeColumn(name, "nominal", [f"v{x}" for x in rng.integers(0, k, size=n)])
            for name, k in attrs]
    return AttributedGraph(n, edges, columns=cols)


def enumerate_descriptions(g, selectors, max_len, min_size):
    """All canonical descriptions up to max_len selectors, one per attribute."""
    out = []
    for r in range(1, max_len + 1):
        for combo in itertools.combinations(selectors, r):
            if len({s.attribute for s in combo}) < r:
                continue
            d = Description(tuple(combo))
            m = extension(d, g)
            if int(m.sum()) >= min_size:
                out.append((d, m))
    return out


def exhaustive_best_single(g, model, selectors, depth, constants=None):
    """Brute-force SI argmax over all single-subgroup candidates."""
    c = constants or ScoreConstants()
    best = None
    for d, m in enumerate_descriptions(g, selectors, depth, 2):
        pat = score_single(g, model, d, m, c)
        if pat is not None and (best is None or pat.sort_key() < best.sort_key()):
            best = pat
    return best


def exhaustive_best_bi(g, model, selectors, depth, constants=None):
    """Brute-force SI argmax over all bi-subgroup candidate pairs."""
    c = constants or ScoreConstants()
    descs = enumerate_descriptions(g, selectors, depth, 1)
    best = None
    for d1, m1 in descs:
        for d2, m2 in descs:
            pat = score_bi(g, model, d1, m1, d2, m2, c)
            if pat is not None and (best is None or pat.sort_key() < best.sort_key()):
                best = pat
    return best


def brute_force_tail(probs, k, side):
    """Tail probability by explicit enumeration of all 2^n outcomes."""
    total = 0.0
    n = len(probs)
    for bits in itertools.product((0, 1), repeat=n):
        cnt = sum(bits)
        if (side == "at_least" and cnt >= k) or (side == "at_most" and cnt <= k):
            pr = 1.0
            for b, p in zip(bits, probs):
                pr *= p if b else (1.0 - p)
            total += pr
    return total


def write_dataset(tmp_path, edge_lines, attr_lines, prefix="data"):
    edge_path = tmp_path / f"{prefix}.edges"
    attr_path = tmp_path / f"{prefix}.csv"
    edge_path.write_text("\n".join(edge_lines) + "\n", encoding="utf-8")
    attr_path.write_text("\n".join(attr_lines) + "\n", encoding="utf-8")
    return str(edge_path), str(attr_path)
