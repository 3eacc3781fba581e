"""Synthetic attributed graphs with planted dense (or sparse) blocks.

The generator writes an Erdos-Renyi style background and overrides the
pair probability inside each planted block: between two attribute-labelled
vertex groups (a cross block), or within one group when both sides of the
block read the same.  Everything is deterministic per seed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .graph import AttributeColumn, AttributedGraph, NOMINAL, NUMERIC

__all__ = ["PlantedBlock", "SynthConfig", "generate_synthetic"]


@dataclass(frozen=True)
class PlantedBlock:
    """One planted block: an attribute=value group per side plus a density.

    Identical sides plant a within-group block; distinct sides plant a
    cross block between two disjoint groups.
    """

    attr1: str
    val1: str
    size1: int
    attr2: str
    val2: str
    size2: int
    density: float

    @property
    def is_within(self) -> bool:
        return (self.attr1, self.val1) == (self.attr2, self.val2)


@dataclass
class SynthConfig:
    n: int = 400
    background_density: float = 0.02
    blocks: list = field(default_factory=list)
    noise_attrs: int = 2
    noise_values: int = 3
    numeric_attrs: int = 0
    pair_tags: int = 0
    seed: int = 0


def generate_synthetic(cfg: SynthConfig):
    """Build the graph and a ground-truth manifest.

    Returns ``(graph, manifest)``; the manifest records the planted group
    memberships, ready to be written next to the data files.
    """
    n = cfg.n
    if n < 2:
        raise ValueError("need at least 2 vertices")
    if not 0.0 <= cfg.background_density < 1.0:
        raise ValueError("background density must lie in [0, 1)")
    rng = np.random.default_rng(cfg.seed)

    cursor = 0
    group_ids: dict[tuple, np.ndarray] = {}

    def claim(attr, val, size):
        nonlocal cursor
        key = (attr, val)
        if key in group_ids:
            if len(group_ids[key]) != size:
                raise ValueError(f"group {attr}={val} redefined with a different size")
            return group_ids[key]
        if cursor + size > n:
            raise ValueError("planted groups need more vertices than n provides")
        ids = np.arange(cursor, cursor + size)
        cursor += size
        group_ids[key] = ids
        return ids

    sides = []
    for blk in cfg.blocks:
        if not 0.0 <= blk.density <= 1.0:
            raise ValueError("block density must lie in [0, 1]")
        ids1 = claim(blk.attr1, blk.val1, blk.size1)
        ids2 = ids1 if blk.is_within else claim(blk.attr2, blk.val2, blk.size2)
        sides.append((ids1, ids2))

    # pair probabilities: background everywhere, planted blocks override
    prob = np.full((n, n), cfg.background_density)
    for blk, (ids1, ids2) in zip(cfg.blocks, sides):
        prob[np.ix_(ids1, ids2)] = blk.density
        prob[np.ix_(ids2, ids1)] = blk.density
    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    draws = rng.random((n, n))
    adj = upper & (draws < prob)
    e0, e1 = np.nonzero(adj)
    edges = list(zip(e0.tolist(), e1.tolist()))

    columns = []
    attr_values: dict[str, list] = {}
    for (attr, val), ids in group_ids.items():
        col = attr_values.setdefault(attr, [None] * n)
        for i in ids:
            col[i] = val
    for attr in sorted(attr_values):
        vals = ["none" if v is None else v for v in attr_values[attr]]
        columns.append(AttributeColumn(attr, NOMINAL, vals))
    for j in range(cfg.noise_attrs):
        vals = rng.integers(0, cfg.noise_values, size=n)
        columns.append(AttributeColumn(f"noise{j}", NOMINAL, [f"v{v}" for v in vals]))
    for j in range(cfg.numeric_attrs):
        columns.append(AttributeColumn(f"x{j}", NUMERIC, rng.random(n)))

    tagged = []
    if cfg.pair_tags:
        # tag the endpoint pairs of disjoint edges with rare labels
        tags = [None] * n
        order = rng.permutation(len(edges))
        used = np.zeros(n, dtype=bool)
        count = 0
        for idx in order:
            u, v = edges[idx]
            if used[u] or used[v]:
                continue
            tags[u] = tags[v] = f"t{count}"
            used[u] = used[v] = True
            tagged.append((int(u), int(v)))
            count += 1
            if count >= cfg.pair_tags:
                break
        columns.append(AttributeColumn("tag", NOMINAL,
                                       ["none" if t is None else t for t in tags]))

    g = AttributedGraph(n, edges, directed=False, columns=columns)
    manifest = {
        "n": n,
        "m": g.m,
        "background_density": cfg.background_density,
        "seed": cfg.seed,
        "blocks": [{
            "attr1": blk.attr1, "val1": blk.val1, "size1": blk.size1,
            "attr2": blk.attr2, "val2": blk.val2, "size2": blk.size2,
            "density": blk.density,
            "side1_ids": [int(i) for i in ids1],
            "side2_ids": [int(i) for i in ids2],
        } for blk, (ids1, ids2) in zip(cfg.blocks, sides)],
        "pair_tags": tagged,
    }
    return g, manifest


def write_manifest(manifest: dict, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
