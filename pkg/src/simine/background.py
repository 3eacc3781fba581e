"""Maximum-entropy Bernoulli edge models and their belief updates.

The background distribution is an independent Bernoulli per vertex pair with

    p(u, v) = sigmoid(offset + lam_row[u] + lam_col[v]
                      + sum_j gamma_j[block_j(u, v)] + sum_k lam_k * 1[(u, v) in pair set k])

which covers the three supported prior types (uniform density, per-vertex
degrees, per-block densities for one or more vertex partitions) plus any
number of absorbed-pattern updates applied in insertion order.  All
multipliers live in logit space, so each absorbed pattern is a single
additive shift on its pair block and leaves every other pair bit-identical.

Fitting maximizes the Lagrangian dual by cyclic coordinate-wise Newton with
step damping; pattern multipliers come from bracketed bisection on the
monotone calibration residual.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np

from .graph import NOMINAL, AttributedGraph

log = logging.getLogger(__name__)

LOGIT_CLAMP = 30.0
PROB_EPS = 1e-12
_CHUNK = 2_000_000  # max pair-grid cells materialized at once

__all__ = [
    "FitError",
    "PartitionGammas",
    "PatternUpdate",
    "BackgroundModel",
    "fit_density_prior",
    "fit_degree_prior",
    "fit_block_prior",
    "update_with_pattern",
    "block_mean_probability",
]


class FitError(RuntimeError):
    """Dual fit failed to reach the requested tolerance."""


def _sigmoid(x):
    out = np.empty_like(x, dtype=np.float64)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _softplus(x):
    return np.logaddexp(0.0, x)


def _logit(p):
    p = np.clip(p, PROB_EPS, 1.0 - PROB_EPS)
    return np.log(p) - np.log1p(-p)


@dataclass
class PartitionGammas:
    """Block multipliers for one vertex partition (one nominal attribute).

    ``bins[u]`` is the bin index of vertex u; ``gammas`` is a dense
    (n_bins, n_bins) matrix, kept symmetric for undirected graphs.
    """

    attribute: str
    bins: np.ndarray
    bin_values: list
    gammas: np.ndarray

    @property
    def n_bins(self) -> int:
        return len(self.bin_values)


@dataclass
class PatternUpdate:
    """One absorbed pattern: a pair block (rows x cols) and its multiplier."""

    rows: np.ndarray
    cols: np.ndarray
    lam: float
    observed: int
    n_pairs: int
    row_mask: np.ndarray = field(repr=False, default=None)
    col_mask: np.ndarray = field(repr=False, default=None)

    def masks(self, n):
        if self.row_mask is None:
            rm = np.zeros(n, dtype=bool)
            rm[self.rows] = True
            cm = np.zeros(n, dtype=bool)
            cm[self.cols] = True
            self.row_mask, self.col_mask = rm, cm
        return self.row_mask, self.col_mask


class BackgroundModel:
    """Immutable product-of-Bernoulli edge model over all vertex pairs.

    ``update_with_pattern`` returns a new model sharing the base multipliers;
    probability reads are safe for concurrent use.
    """

    def __init__(self, n, directed, offset=0.0, lam_row=None, lam_col=None,
                 partitions=(), updates=(), prior="density", fit_info=None):
        self.n = int(n)
        self.directed = bool(directed)
        self.offset = float(offset)
        self.lam_row = np.zeros(n) if lam_row is None else np.asarray(lam_row, dtype=np.float64)
        if lam_col is None:
            self.lam_col = self.lam_row if not directed else np.zeros(n)
        else:
            self.lam_col = np.asarray(lam_col, dtype=np.float64)
        self.partitions = list(partitions)
        self.updates = list(updates)
        self.prior = prior
        self.fit_info = dict(fit_info or {})

    # -- probability queries -------------------------------------------------

    def _pair_logits(self, rows, cols):
        """Raw logit matrix for the rows x cols grid (diagonal NOT excluded)."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        L = self.offset + self.lam_row[rows][:, None] + self.lam_col[cols][None, :]
        for part in self.partitions:
            L = L + part.gammas[part.bins[rows][:, None], part.bins[cols][None, :]]
        for upd in self.updates:
            rm, cm = upd.masks(self.n)
            if self.directed:
                member = rm[rows][:, None] & cm[cols][None, :]
            else:
                member = (rm[rows][:, None] & cm[cols][None, :]) \
                    | (cm[rows][:, None] & rm[cols][None, :])
            L = L + upd.lam * member
        return L

    def probabilities(self, rows, cols) -> np.ndarray:
        """Clamped edge probabilities for the rows x cols grid."""
        return np.clip(_sigmoid(self._pair_logits(rows, cols)), PROB_EPS, 1.0 - PROB_EPS)

    def edge_probability(self, u: int, v: int) -> float:
        if u == v:
            raise ValueError("edge probability is undefined for u == v")
        return float(self.probabilities(np.array([u]), np.array([v]))[0, 0])

    def pair_sums(self, rows, cols):
        """Probability mass over the rows x cols grid, diagonal excluded.

        Returns ``(ordered_sum, overlap_sum)`` where ``ordered_sum`` ranges
        over all ordered grid pairs u != v and ``overlap_sum`` over ordered
        pairs inside the row/column intersection.  The distinct (unordered)
        pair total is ``ordered_sum - overlap_sum / 2``.
        """
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        ordered = self._masked_grid_sum(rows, cols)
        if self.directed:
            return ordered, 0.0
        common = np.intersect1d(rows, cols)
        overlap = self._masked_grid_sum(common, common) if common.size > 1 else 0.0
        return ordered, overlap

    def _masked_grid_sum(self, rows, cols):
        if rows.size == 0 or cols.size == 0:
            return 0.0
        total = 0.0
        step = max(1, _CHUNK // max(1, cols.size))
        for i in range(0, rows.size, step):
            chunk = rows[i:i + step]
            P = np.clip(_sigmoid(self._pair_logits(chunk, cols)), PROB_EPS, 1.0 - PROB_EPS)
            diag = chunk[:, None] == cols[None, :]
            if diag.any():
                P = np.where(diag, 0.0, P)
            total += float(P.sum())
        return total

    def copy_with_update(self, upd: PatternUpdate) -> "BackgroundModel":
        return BackgroundModel(self.n, self.directed, self.offset, self.lam_row,
                               None if (self.lam_col is self.lam_row) else self.lam_col,
                               self.partitions, self.updates + [upd],
                               prior=self.prior, fit_info=self.fit_info)

    # -- serialization ---------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "format": "simine-model",
            "version": 1,
            "n": self.n,
            "directed": self.directed,
            "prior": self.prior,
            "offset": self.offset,
            "lam_row": [float(x) for x in self.lam_row],
            "lam_col": ("tied" if self.lam_col is self.lam_row
                        else [float(x) for x in self.lam_col]),
            "partitions": [{
                "attribute": p.attribute,
                "bin_values": list(p.bin_values),
                "bins": [int(b) for b in p.bins],
                "gammas": [[float(x) for x in row] for row in p.gammas],
            } for p in self.partitions],
            "updates": [{
                "rows": [int(r) for r in u.rows],
                "cols": [int(c) for c in u.cols],
                "lam": float(u.lam),
                "observed": int(u.observed),
                "n_pairs": int(u.n_pairs),
            } for u in self.updates],
            "fit_info": self.fit_info,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BackgroundModel":
        if d.get("format") != "simine-model" or d.get("version") != 1:
            raise ValueError("not a recognized model file")
        parts = [PartitionGammas(p["attribute"],
                                 np.asarray(p["bins"], dtype=np.int64),
                                 list(p["bin_values"]),
                                 np.asarray(p["gammas"], dtype=np.float64))
                 for p in d["partitions"]]
        upds = [PatternUpdate(np.asarray(u["rows"], dtype=np.int64),
                              np.asarray(u["cols"], dtype=np.int64),
                              float(u["lam"]), int(u["observed"]), int(u["n_pairs"]))
                for u in d["updates"]]
        lam_col = None if d["lam_col"] == "tied" else d["lam_col"]
        return cls(d["n"], d["directed"], d["offset"], d["lam_row"], lam_col,
                   parts, upds, prior=d["prior"], fit_info=d.get("fit_info"))

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "BackgroundModel":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


# -- priors -------------------------------------------------------------------


def fit_density_prior(g: AttributedGraph, density: float) -> BackgroundModel:
    """Uniform model: every pair probability equals the assumed density."""
    if not (0.0 < density < 1.0):
        raise ValueError("density must lie strictly between 0 and 1")
    return BackgroundModel(g.n, g.directed, offset=float(_logit(np.float64(density))),
                           prior=f"density:{density!r}",
                           fit_info={"prior": "density", "density": density,
                                     "iterations": 0, "max_residual": 0.0})


def fit_degree_prior(g: AttributedGraph, tol: float = 1e-4,
                     max_iter: int = 500) -> BackgroundModel:
    """Max-entropy model matching every vertex's expected degree."""
    return _fit_max_ent(g, partitions=[], with_degrees=True, tol=tol,
                        max_iter=max_iter, prior="degree")


def fit_block_prior(g: AttributedGraph, partitions, with_degrees: bool = True,
                    tol: float = 1e-4, max_iter: int = 500) -> BackgroundModel:
    """Max-entropy model matching per-block expected edge counts.

    ``partitions`` names nominal attributes; each induces its own set of
    block constraints (one per unordered bin pair for undirected graphs).
    All declared constraints are fitted jointly; with ``with_degrees`` the
    per-vertex degree constraints hold simultaneously.
    """
    if not partitions:
        raise ValueError("fit_block_prior needs at least one partition attribute")
    label = "blocks:" + ",".join(partitions) + ("+degree" if with_degrees else "")
    return _fit_max_ent(g, partitions=list(partitions), with_degrees=with_degrees,
                        tol=tol, max_iter=max_iter, prior=label)


def _partition_bins(g, attr):
    col = g.column(attr)
    if col.kind != NOMINAL:
        raise ValueError(f"partition attribute {attr!r} must be nominal")
    values = col.distinct()
    if col.missing_mask().any():
        values = values + ["∅missing"]
    index = {v: i for i, v in enumerate(values)}
    bins = np.array([index["∅missing"] if v is None else index[v]
                     for v in col.values], dtype=np.int64)
    return bins, values


def _coordinate_step(ell, target, t0):
    """One damped Newton step of min_t sum(softplus(ell + t)) - target * t."""
    p = _sigmoid(ell + t0)
    grad = float(p.sum()) - target
    hess = max(float((p * (1.0 - p)).sum()), 1e-12)
    step = -grad / hess
    f0 = float(_softplus(ell + t0).sum()) - target * t0
    for _ in range(60):
        t1 = float(np.clip(t0 + step, -LOGIT_CLAMP, LOGIT_CLAMP))
        f1 = float(_softplus(ell + t1).sum()) - target * t1
        if f1 <= f0 + 1e-12 * max(1.0, abs(f0)):
            return t1
        step *= 0.5
    return t0


class _MaxEntProblem:
    """Joint degree/block dual for one graph; owns the working multipliers."""

    def __init__(self, g, partition_attrs, with_degrees):
        self.g = g
        self.n = g.n
        self.directed = g.directed
        self.with_degrees = with_degrees
        self.parts = []
        for attr in partition_attrs:
            bins, values = _partition_bins(g, attr)
            self.parts.append(PartitionGammas(attr, bins, values,
                                              np.zeros((len(values), len(values)))))
        if with_degrees:
            if self.directed:
                self.lam_row = 0.5 * _logit(g.out_degrees() / (self.n - 1))
                self.lam_col = 0.5 * _logit(g.in_degrees() / (self.n - 1))
            else:
                self.lam_row = np.clip(_logit(g.degrees() / (self.n - 1)),
                                       -LOGIT_CLAMP, LOGIT_CLAMP)
                self.lam_col = self.lam_row
        else:
            self.lam_row = np.zeros(self.n)
            self.lam_col = self.lam_row if not self.directed else np.zeros(self.n)
        self._block_targets()

    def _block_targets(self):
        """Observed edge counts and pair counts per block of each partition."""
        g = self.g
        self.block_info = []
        e0, e1 = g.edges[:, 0], g.edges[:, 1]
        for part in self.parts:
            nb = part.n_bins
            ids = [np.flatnonzero(part.bins == b) for b in range(nb)]
            sizes = [len(x) for x in ids]
            blocks = []
            pairs_iter = ([(b1, b2) for b1 in range(nb) for b2 in range(nb)]
                          if self.directed else
                          [(b1, b2) for b1 in range(nb) for b2 in range(b1, nb)])
            b_e0 = part.bins[e0] if len(e0) else np.empty(0, np.int64)
            b_e1 = part.bins[e1] if len(e1) else np.empty(0, np.int64)
            for b1, b2 in pairs_iter:
                if self.directed:
                    n_pairs = sizes[b1] * sizes[b2] - (sizes[b1] if b1 == b2 else 0)
                    observed = int(np.count_nonzero((b_e0 == b1) & (b_e1 == b2)))
                elif b1 == b2:
                    n_pairs = sizes[b1] * (sizes[b1] - 1) // 2
                    observed = int(np.count_nonzero((b_e0 == b1) & (b_e1 == b1)))
                else:
                    n_pairs = sizes[b1] * sizes[b2]
                    observed = int(np.count_nonzero(((b_e0 == b1) & (b_e1 == b2))
                                                    | ((b_e0 == b2) & (b_e1 == b1))))
                blocks.append({"b1": b1, "b2": b2, "ids1": ids[b1], "ids2": ids[b2],
                               "pairs": n_pairs, "observed": observed})
            self.block_info.append(blocks)

    def _row_ell(self, u, use_row):
        """Pair logits of u's n-1 partners, minus the coordinate's own multiplier.

        ``use_row`` selects the row coordinate (pairs (u, v)); otherwise the
        column coordinate (pairs (v, u)).
        """
        idx = np.concatenate([np.arange(u), np.arange(u + 1, self.n)])
        if use_row:
            ell = self.lam_col[idx].copy()
            for part in self.parts:
                ell += part.gammas[part.bins[u], part.bins[idx]]
        else:
            ell = self.lam_row[idx].copy()
            for part in self.parts:
                ell += part.gammas[part.bins[idx], part.bins[u]]
        return ell

    def _block_ell(self, part_i, block):
        """Pair logits of one block, excluding that block's own gamma."""
        ids1, ids2 = block["ids1"], block["ids2"]
        if block["pairs"] == 0:
            return np.empty(0)
        L = self.lam_row[ids1][:, None] + self.lam_col[ids2][None, :]
        for j, part in enumerate(self.parts):
            if j == part_i:
                continue
            L = L + part.gammas[part.bins[ids1][:, None], part.bins[ids2][None, :]]
        if self.directed:
            keep = ids1[:, None] != ids2[None, :]
        elif block["b1"] == block["b2"]:
            keep = ids1[:, None] < ids2[None, :]
        else:
            keep = np.ones(L.shape, dtype=bool)
        return L[keep]

    def sweep(self):
        if self.with_degrees:
            if self.directed:
                dout, din = self.g.out_degrees(), self.g.in_degrees()
                for u in range(self.n):
                    ell = self._row_ell(u, use_row=True)
                    self.lam_row[u] = _coordinate_step(ell, float(dout[u]), self.lam_row[u])
                for v in range(self.n):
                    ell = self._row_ell(v, use_row=False)
                    self.lam_col[v] = _coordinate_step(ell, float(din[v]), self.lam_col[v])
            else:
                deg = self.g.degrees()
                for u in range(self.n):
                    ell = self._row_ell(u, use_row=True)
                    self.lam_row[u] = _coordinate_step(ell, float(deg[u]), self.lam_row[u])
        for part_i, (part, blocks) in enumerate(zip(self.parts, self.block_info)):
            for block in blocks:
                if block["pairs"] == 0:
                    continue  # empty block: gamma pinned at 0
                ell = self._block_ell(part_i, block)
                g0 = part.gammas[block["b1"], block["b2"]]
                g1 = _coordinate_step(ell, float(block["observed"]), float(g0))
                part.gammas[block["b1"], block["b2"]] = g1
                if not self.directed:
                    part.gammas[block["b2"], block["b1"]] = g1

    @staticmethod
    def _saturated(residual, mult):
        """KKT waiver: the multiplier is pinned at a clamp bound and the
        gradient points further outward, so the residual is irreducible."""
        eps = 1e-9
        return ((residual > 0 and mult <= -LOGIT_CLAMP + eps)
                or (residual < 0 and mult >= LOGIT_CLAMP - eps))

    def residuals(self):
        """Worst unwaived constraint plus the worst saturated residual.

        Returns ``(worst_name, worst, waived_worst)``; ``worst`` drives
        convergence, ``waived_worst`` is reported for saturated constraints
        (degree 0 / degree n-1 vertices, zero-edge blocks).
        """
        worst_name, worst, waived = "", 0.0, 0.0
        if self.with_degrees:
            if self.directed:
                pairs = [("out-degree", self.g.out_degrees(), True),
                         ("in-degree", self.g.in_degrees(), False)]
            else:
                pairs = [("degree", self.g.degrees(), True)]
            for name, target, use_row in pairs:
                for u in range(self.n):
                    ell = self._row_ell(u, use_row=use_row)
                    mult = self.lam_row[u] if use_row else self.lam_col[u]
                    r = float(_sigmoid(ell + mult).sum()) - target[u]
                    if self._saturated(r, mult):
                        waived = max(waived, abs(r))
                    elif abs(r) > worst:
                        worst = abs(r)
                        worst_name = f"{name} of vertex {self.g.vertex_label(u)!r}"
        for part_i, (part, blocks) in enumerate(zip(self.parts, self.block_info)):
            for block in blocks:
                if block["pairs"] == 0:
                    continue
                ell = self._block_ell(part_i, block)
                mult = part.gammas[block["b1"], block["b2"]]
                r = float(_sigmoid(ell + mult).sum()) - block["observed"]
                if self._saturated(r, mult):
                    waived = max(waived, abs(r))
                elif abs(r) > worst:
                    worst = abs(r)
                    worst_name = (f"block ({part.attribute}: "
                                  f"{part.bin_values[block['b1']]} x "
                                  f"{part.bin_values[block['b2']]})")
        return worst_name, worst, waived


def _fit_max_ent(g, partitions, with_degrees, tol, max_iter, prior):
    if g.n < 2:
        raise ValueError("need at least two vertices to fit a model")
    if g.m == 0:
        raise ValueError("cannot fit a max-entropy prior on a graph with no edges")
    prob = _MaxEntProblem(g, partitions, with_degrees)
    worst_name, worst, waived = prob.residuals()
    sweeps = 0
    while worst > tol:
        if sweeps >= max_iter:
            raise FitError(
                f"no convergence after {max_iter} sweeps; worst constraint: "
                f"{worst_name} (residual {worst:.3g} > tol {tol:g})")
        prob.sweep()
        sweeps += 1
        worst_name, worst, waived = prob.residuals()

    clamped = [g.vertex_label(u) for u in range(g.n)
               if abs(prob.lam_row[u]) >= LOGIT_CLAMP
               or abs(prob.lam_col[u]) >= LOGIT_CLAMP]
    if clamped and with_degrees:
        log.warning("multipliers clamped at +/-%g for %d extremal-degree vertex(es): %s",
                    LOGIT_CLAMP, len(clamped), ", ".join(clamped[:5]))
    if waived > tol:
        log.warning("saturated constraints left an irreducible residual of %.3g", waived)
    info = {"prior": prior, "iterations": sweeps, "max_residual": worst,
            "saturated_residual": waived, "worst_constraint": worst_name,
            "tol": tol, "clamped": clamped}
    tied = prob.lam_col is prob.lam_row
    return BackgroundModel(g.n, g.directed, 0.0, prob.lam_row,
                           None if tied else prob.lam_col,
                           prob.parts, prior=prior, fit_info=info)


# -- pattern absorption ----------------------------------------------------------


def _pattern_pair_logits(model, rows, cols):
    """Logits of every distinct pair in the pattern's scope (no diagonal)."""
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    in_r = np.zeros(model.n, dtype=bool)
    in_r[rows] = True
    in_c = np.zeros(model.n, dtype=bool)
    in_c[cols] = True
    out = []
    step = max(1, _CHUNK // max(1, cols.size))
    for i in range(0, rows.size, step):
        chunk = rows[i:i + step]
        L = model._pair_logits(chunk, cols)
        U = chunk[:, None]
        V = cols[None, :]
        if model.directed:
            keep = U != V
        else:
            # list each unordered pair once: keep (u, v) with u < v, plus
            # u > v when the mirrored orientation is not in the grid
            keep = (U < V) | ((U > V) & ~(in_r[cols][None, :] & in_c[chunk][:, None]))
        out.append(L[keep])
    return np.concatenate(out) if out else np.empty(0)


def update_with_pattern(model: BackgroundModel, pattern) -> BackgroundModel:
    """Absorb a presented pattern: calibrate one multiplier on its pair block.

    ``pattern`` must expose ``ext1_ids``, ``ext2_ids`` (vertex id arrays;
    equal for single-subgroup patterns) and the observed count ``edges``.
    The returned model's expected count over the pattern's pairs equals the
    observed count; every other pair keeps its exact probability.
    """
    rows = np.asarray(pattern.ext1_ids, dtype=np.int64)
    cols = np.asarray(pattern.ext2_ids if pattern.ext2_ids is not None
                      else pattern.ext1_ids, dtype=np.int64)
    observed = int(pattern.edges)
    if rows.size == 0 or cols.size == 0:
        raise ValueError("pattern update needs non-empty extensions")
    ell = _pattern_pair_logits(model, rows, cols)
    n_pairs = int(ell.size)
    if n_pairs == 0:
        raise ValueError("pattern update has an empty pair set")

    cal_tol = 1e-9 * max(1, n_pairs)

    def resid(lam):
        return float(_sigmoid(ell + lam).sum()) - observed

    lam = 0.0
    if abs(resid(0.0)) > cal_tol:
        if observed <= 0:
            lam = -LOGIT_CLAMP
            log.warning("pattern count 0: multiplier clamped at %g", lam)
        elif observed >= n_pairs:
            lam = LOGIT_CLAMP
            log.warning("pattern count saturates its pair set: multiplier clamped at %g", lam)
        else:
            lo, hi = -1.0, 1.0
            while resid(lo) > 0 and lo > -LOGIT_CLAMP:
                lo = max(lo * 2, -LOGIT_CLAMP)
            while resid(hi) < 0 and hi < LOGIT_CLAMP:
                hi = min(hi * 2, LOGIT_CLAMP)
            if resid(lo) > 0 or resid(hi) < 0:
                lam = lo if resid(lo) > 0 else hi
                log.warning("pattern multiplier clamped at %g", lam)
            else:
                for _ in range(200):
                    mid = 0.5 * (lo + hi)
                    if resid(mid) > 0:
                        hi = mid
                    else:
                        lo = mid
                    if hi - lo < 1e-13:
                        break
                lam = 0.5 * (lo + hi)

    if abs(lam) < LOGIT_CLAMP and abs(resid(lam)) > 1e-6 * max(1, n_pairs):
        raise FitError(f"pattern multiplier failed to calibrate (residual {resid(lam):.3g})")
    upd = PatternUpdate(np.sort(rows), np.sort(cols), float(lam), observed, n_pairs)
    return model.copy_with_update(upd)


def block_mean_probability(model: BackgroundModel, a, b, n_vertices=None):
    """Mean probability over the distinct pairs spanned by vertex sets a, b.

    Returns ``(p_w, n_w)`` where ``n_w`` counts each unordered pair once for
    undirected models and each ordered pair once for directed models.
    """
    rows = np.asarray(a, dtype=np.int64)
    cols = np.asarray(b, dtype=np.int64)
    overlap = int(np.intersect1d(rows, cols).size)
    if model.directed:
        n_w = rows.size * cols.size - overlap
    else:
        n_w = rows.size * cols.size - overlap * (overlap + 1) // 2
    if n_w <= 0:
        raise ValueError("pair universe is empty for the given sets")
    ordered, over = model.pair_sums(rows, cols)
    total = ordered - over / 2.0
    return total / n_w, int(n_w)
