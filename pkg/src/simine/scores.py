"""Pattern scoring: pair counting, Bernoulli KL, information content,
description length, subjective interestingness, the exact-tail oracle and
the eight objective baseline measures.

All information quantities are in natural-log units.  The information
content of a pattern is the Chernoff/Hoeffding lower bound

    IC = n_w * KL(k_w / n_w || p_w)

where ``n_w`` counts the pattern's pair universe, ``k_w`` the observed
count and ``p_w`` the mean background probability over those pairs; the
same value serves both the dense and the sparse direction because
KL(q || p) = KL(1-q || 1-p).  Subjective interestingness is IC divided by
the description length alpha * (#selectors) + beta.

Pair-counting conventions: directed graphs always count ordered pairs.
For undirected graphs the default ("auto") scores single-subgroup patterns
over ordered pairs, s*(s-1) with the count doubled to match, and
bi-subgroup patterns over distinct unordered pairs,
|e1|*|e2| - o*(o+1)/2 with o the extension overlap.  Both can be forced
via ``ScoreConstants.pair_counting``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .background import BackgroundModel, PROB_EPS
from .descriptions import Description
from .graph import AttributedGraph

__all__ = [
    "ScoreConstants",
    "Pattern",
    "resolve_pair_counting",
    "n_w_single",
    "n_w_bi",
    "n_w_bi_ordered",
    "kl_bernoulli",
    "information_content",
    "description_length",
    "si_value",
    "score_single_counts",
    "score_single",
    "score_bi",
    "rescore",
    "subjective_interestingness",
    "exact_tail_probability",
    "baseline_scores",
    "MEASURE_NAMES",
]

MEASURE_NAMES = ["edge_density", "avg_degree", "pool", "edge_surplus",
                 "segregation", "modularity1", "inv_avg_odf", "inv_conductance"]


@dataclass(frozen=True)
class ScoreConstants:
    """Description-length constants and the pair-counting convention."""

    alpha: float = 0.3
    beta: float = 0.5
    pair_counting: str = "auto"  # auto | ordered | unordered

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be positive")
        if self.pair_counting not in ("auto", "ordered", "unordered"):
            raise ValueError(f"unknown pair counting {self.pair_counting!r}")


def resolve_pair_counting(c: ScoreConstants, single: bool, directed: bool) -> str:
    if directed:
        return "ordered"
    if c.pair_counting == "auto":
        return "ordered" if single else "unordered"
    return c.pair_counting


@dataclass(eq=False)
class Pattern:
    """A scored (bi-)subgroup pattern.

    ``k_w``/``n_w``/``p_w`` are in the scoring convention's units (so
    ``si == ic / dl`` holds as stated); ``edges``/``pair_slots``/
    ``expected_edges`` are in observed-edge units, matching the counts a
    report prints.  ``w2 is None`` marks a single-subgroup pattern.
    """

    w1: Description
    w2: Description | None
    direction: int
    k_w: int
    n_w: int
    p_w: float
    ic: float
    dl: float
    si: float
    size1: int
    size2: int
    overlap: int
    edges: int
    pair_slots: int
    expected_edges: float
    convention: str
    ext1_ids: np.ndarray = field(repr=False, default=None)
    ext2_ids: np.ndarray = field(repr=False, default=None)
    inter_edges: int | None = None

    @property
    def is_single(self) -> bool:
        return self.w2 is None

    def total_length(self) -> int:
        return len(self.w1) + (len(self.w2) if self.w2 is not None else 0)

    def render(self) -> str:
        if self.w2 is None:
            return str(self.w1)
        return f"{self.w1} || {self.w2}"

    def sort_key(self):
        """Ranking order: SI descending, then shorter, then lexicographic."""
        return (-self.si, self.total_length(), self.render())


# -- elementary quantities -----------------------------------------------------


def n_w_single(size: int, convention: str = "unordered") -> int:
    """Maximum pair count inside one subgroup of the given size."""
    if size < 2:
        raise ValueError("single-subgroup patterns need at least 2 vertices")
    if convention == "ordered":
        return size * (size - 1)
    if convention == "unordered":
        return size * (size - 1) // 2
    raise ValueError(f"unknown convention {convention!r}")


def n_w_bi(a: int, b: int, overlap: int) -> int:
    """Maximum number of distinct unordered pairs between two subgroups."""
    if overlap > min(a, b) or min(a, b) < 0:
        raise ValueError("overlap cannot exceed either subgroup size")
    value = a * b - overlap * (overlap + 1) // 2
    if value < 0:
        raise AssertionError("negative pair count")
    return value


def n_w_bi_ordered(a: int, b: int, overlap: int) -> int:
    """Maximum number of distinct ordered pairs between two subgroups."""
    if overlap > min(a, b) or min(a, b) < 0:
        raise ValueError("overlap cannot exceed either subgroup size")
    return a * b - overlap


def kl_bernoulli(q: float, p: float) -> float:
    """KL divergence between Bernoulli(q) and Bernoulli(p), natural log.

    ``p`` is clamped away from {0, 1}; ``0 * log 0`` is taken as 0, so the
    identity KL(q||p) == KL(1-q||1-p) holds exactly.
    """
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must lie in [0, 1]")
    p = min(max(p, PROB_EPS), 1.0 - PROB_EPS)
    out = 0.0
    if q > 0.0:
        out += q * math.log(q / p)
    if q < 1.0:
        out += (1.0 - q) * math.log((1.0 - q) / (1.0 - p))
    return out


def information_content(n_w: int, k_w: float, p_w: float) -> float:
    """Chernoff-bound information content, direction-agnostic."""
    if n_w <= 0:
        raise ValueError("n_w must be positive")
    return n_w * kl_bernoulli(k_w / n_w, p_w)


def description_length(len1: int, len2: int | None, c: ScoreConstants) -> float:
    """Communication cost: single-subgroup descriptions are counted once."""
    if len1 < 1 or (len2 is not None and len2 < 1):
        raise ValueError("description lengths must be >= 1")
    if len2 is None:
        return c.alpha * len1 + c.beta
    return c.alpha * (len1 + len2) + c.beta


def si_value(ic: float, dl: float) -> float:
    return ic / dl


def score_single_counts(size: int, edges: int, expected_edges: float,
                        c: ScoreConstants | None = None, description_size: int = 1,
                        directed: bool = False) -> dict:
    """Score a single-subgroup pattern from its printed counts alone.

    ``expected_edges`` is the background expectation in the same units as
    ``edges`` (distinct edge slots).  Returns the full score breakdown.
    """
    c = c or ScoreConstants()
    slots = n_w_single(size, "ordered" if directed else "unordered")
    q = edges / slots
    p = expected_edges / slots
    conv = resolve_pair_counting(c, single=True, directed=directed)
    mult = 2 if (conv == "ordered" and not directed) else 1
    ic = information_content(mult * slots, mult * edges, p)
    dl = description_length(description_size, None, c)
    return {"n_w": mult * slots, "k_w": mult * edges, "p_w": p, "ic": ic,
            "dl": dl, "si": si_value(ic, dl), "i": 0 if q >= p else 1,
            "convention": conv}


# -- pattern construction --------------------------------------------------------


def score_single(g: AttributedGraph, model: BackgroundModel, desc: Description,
                 mask: np.ndarray, c: ScoreConstants,
                 with_inter: bool = True) -> Pattern | None:
    """Score the single-subgroup pattern of a description's extension.

    Returns None when the extension has fewer than 2 vertices.
    """
    ids = np.flatnonzero(mask)
    s = ids.size
    if s < 2:
        return None
    ordered_sum, overlap_sum = model.pair_sums(ids, ids)
    edges = g.count_edges_between(mask, mask)
    if g.directed:
        slots = s * (s - 1)
        sum_distinct = ordered_sum
    else:
        slots = s * (s - 1) // 2
        sum_distinct = ordered_sum - overlap_sum / 2.0
    p_w = sum_distinct / slots
    conv = resolve_pair_counting(c, single=True, directed=g.directed)
    mult = 2 if (conv == "ordered" and not g.directed) else 1
    n_w = mult * slots
    k_w = mult * edges
    q = k_w / n_w
    ic = information_content(n_w, k_w, p_w)
    dl = description_length(len(desc), None, c)
    return Pattern(w1=desc, w2=None, direction=0 if q >= p_w else 1,
                   k_w=k_w, n_w=n_w, p_w=p_w, ic=ic, dl=dl, si=si_value(ic, dl),
                   size1=s, size2=s, overlap=s, edges=edges, pair_slots=slots,
                   expected_edges=p_w * slots, convention=conv, ext1_ids=ids,
                   ext2_ids=None,
                   inter_edges=g.inter_edge_count(mask) if with_inter else None)


def score_bi(g: AttributedGraph, model: BackgroundModel, w1: Description,
             mask1: np.ndarray, w2: Description, mask2: np.ndarray,
             c: ScoreConstants) -> Pattern | None:
    """Score a bi-subgroup pattern; returns None when the pair universe is empty."""
    ids1 = np.flatnonzero(mask1)
    ids2 = np.flatnonzero(mask2)
    a, b = ids1.size, ids2.size
    if a < 1 or b < 1:
        return None
    o = int(np.count_nonzero(mask1 & mask2))
    conv = resolve_pair_counting(c, single=False, directed=g.directed)
    if g.directed:
        slots = n_w_bi_ordered(a, b, o)
        if slots == 0:
            return None
        ordered_sum, _ = model.pair_sums(ids1, ids2)
        n_w, k_w = slots, g.count_edges_between(mask1, mask2)
        p_w = ordered_sum / slots
        edges = k_w
        expected = p_w * slots
    else:
        slots = n_w_bi(a, b, o)
        if slots == 0:
            return None
        ordered_sum, overlap_sum = model.pair_sums(ids1, ids2)
        edges = g.count_edges_between(mask1, mask2)
        if conv == "ordered":
            n_w = n_w_bi_ordered(a, b, o)
            k_w = g.count_edge_orientations(mask1, mask2)
            p_w = ordered_sum / n_w
        else:
            n_w = slots
            k_w = edges
            p_w = (ordered_sum - overlap_sum / 2.0) / slots
        expected = ordered_sum - overlap_sum / 2.0
    q = k_w / n_w
    ic = information_content(n_w, k_w, p_w)
    dl = description_length(len(w1), len(w2), c)
    return Pattern(w1=w1, w2=w2, direction=0 if q >= p_w else 1,
                   k_w=k_w, n_w=n_w, p_w=p_w, ic=ic, dl=dl, si=si_value(ic, dl),
                   size1=a, size2=b, overlap=o, edges=edges, pair_slots=slots,
                   expected_edges=expected, convention=conv,
                   ext1_ids=ids1, ext2_ids=ids2)


def rescore(g: AttributedGraph, model: BackgroundModel, w1: Description,
            w2: Description | None, c: ScoreConstants) -> Pattern | None:
    """Score a pattern from its descriptions against a (possibly updated) model."""
    from .descriptions import extension

    m1 = extension(w1, g)
    if w2 is None:
        return score_single(g, model, w1, m1, c)
    return score_bi(g, model, w1, m1, w2, extension(w2, g), c)


def subjective_interestingness(g: AttributedGraph, model: BackgroundModel,
                               w1: Description, w2: Description | None = None,
                               c: ScoreConstants | None = None) -> float:
    """SI of the pattern induced by the given description(s) under a model."""
    pat = rescore(g, model, w1, w2, c or ScoreConstants())
    if pat is None:
        raise ValueError("pattern has an empty pair universe")
    return pat.si


# -- exact tail oracle ------------------------------------------------------------


def exact_tail_probability(pair_probs, k: int, side: str = "at_least") -> float:
    """Exact Poisson-binomial tail by dynamic programming (desk-scale oracle).

    ``side`` is "at_least" for P[X >= k] or "at_most" for P[X <= k].
    Limited to 25 trials; for production scoring use the Chernoff bound.
    """
    probs = np.asarray(pair_probs, dtype=np.float64)
    if probs.size > 25:
        raise ValueError("exact tail oracle is limited to 25 pair probabilities")
    if np.any((probs < 0) | (probs > 1)):
        raise ValueError("probabilities must lie in [0, 1]")
    pmf = np.array([1.0])
    for p in probs:
        nxt = np.zeros(pmf.size + 1)
        nxt[:-1] = pmf * (1.0 - p)
        nxt[1:] += pmf * p
        pmf = nxt
    if side == "at_least":
        return float(pmf[max(k, 0):].sum())
    if side == "at_most":
        return float(pmf[:k + 1].sum()) if k >= 0 else 0.0
    raise ValueError(f"unknown side {side!r}")


# -- objective baselines -----------------------------------------------------------


def baseline_scores(g: AttributedGraph, a, edge_surplus_alpha: float = 1.0 / 3.0) -> dict:
    """The eight objective community-quality measures of one vertex set.

    Matches the usual printed definitions: edge surplus without the 1/2
    factor on the possible-pair term, and Pool's measure in its simplified
    -C(s,2) + 3k form.  ``inv_conductance`` is +inf when no edge leaves the
    set.  Undirected graphs only.
    """
    if g.directed:
        raise ValueError("baseline measures are defined for undirected graphs")
    mask = g.as_mask(a)
    s = int(np.count_nonzero(mask))
    if s < 2:
        raise ValueError("baseline measures need at least 2 vertices")
    n, m = g.n, g.m
    k = g.count_edges_between(mask, mask)
    inter = g.inter_edge_count(mask)
    deg = g.degrees()
    deg_sum = float(deg[mask].sum())

    if inter == 0:
        segregation = 1.0
    else:
        segregation = 1.0 - inter * n * (n - 1) / (2.0 * m * s * (n - s))
    if m == 0:
        modularity1 = 0.0
    else:
        modularity1 = k / m - (deg_sum / (2.0 * m)) ** 2
    edges = g.edges
    e0, e1 = edges[:, 0], edges[:, 1]
    inter_deg = (np.bincount(e0[mask[e0] & ~mask[e1]], minlength=n)
                 + np.bincount(e1[mask[e1] & ~mask[e0]], minlength=n))
    in_ids = np.flatnonzero(mask)
    frac = np.where(deg[in_ids] > 0,
                    inter_deg[in_ids] / np.maximum(deg[in_ids], 1), 0.0)
    inv_avg_odf = 1.0 - float(frac.mean())

    return {
        "edge_density": 2.0 * k / (s * (s - 1)),
        "avg_degree": 2.0 * k / s,
        "pool": -s * (s - 1) / 2.0 + 3.0 * k,
        "edge_surplus": k - edge_surplus_alpha * s * (s - 1),
        "segregation": segregation,
        "modularity1": modularity1,
        "inv_avg_odf": inv_avg_odf,
        "inv_conductance": math.inf if inter == 0 else k / inter,
    }
