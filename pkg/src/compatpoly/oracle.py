"""Brute-force evidence: sample convex combinations, scan edges.

Nothing here is used to *decide* compatibility; the deciders in
:mod:`compatpoly.compat` are cross-checked against these samples.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .poly import DEFAULT_TOL, Family, Poly, Tolerances
from .roots import batch_spectra, complex_margin, real_roots

BLOCK = 2048


@dataclass
class OracleReport:
    samples: int
    violations: list = field(default_factory=list)   # (sample index, weights, margin)
    min_real_margin: float = math.inf
    max_margin: float = 0.0
    min_gap_observed: float = math.inf
    seed: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        def num(x):
            return None if not math.isfinite(x) else float(x)
        return {
            "samples": self.samples,
            "seed": self.seed,
            "violations": [{"index": int(k), "weights": [float(w) for w in ws], "margin": float(m)}
                           for k, ws, m in self.violations],
            "min_real_margin": num(self.min_real_margin),
            "max_margin": float(self.max_margin),
            "min_gap_observed": num(self.min_gap_observed),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def fixed_weights(n: int) -> np.ndarray:
    """Vertices, edge midpoints, centroid (in that order)."""
    rows = [np.eye(n)]
    if n >= 2:
        mids = np.zeros((n * (n - 1) // 2, n))
        for k, (i, j) in enumerate(combinations(range(n), 2)):
            mids[k, [i, j]] = 0.5
        rows.append(mids)
        if n >= 3:
            rows.append(np.full((1, n), 1.0 / n))
    return np.vstack(rows)


def random_weights(n: int, start: int, count: int, seed: int) -> np.ndarray:
    """Random weights for sample indices start..start+count-1.

    Each block of BLOCK indices has its own Philox key, so any index range
    is reproducible on its own. Within a block, indices cycle through a
    random edge, a random triangle and the full simplex (uniform Dirichlet).
    """
    out = np.zeros((count, n))
    k = start
    while k < start + count:
        b = k // BLOCK
        lo = b * BLOCK
        rng = np.random.Generator(np.random.Philox(key=[seed, b]))
        full = rng.dirichlet(np.ones(n), BLOCK) if n > 1 else np.ones((BLOCK, 1))
        pick = np.argsort(rng.random((BLOCK, n)), axis=1)
        u = rng.random(BLOCK)
        tri = rng.dirichlet(np.ones(3), BLOCK)
        block = full.copy()
        pos = np.arange(BLOCK) % 3
        rows = np.arange(BLOCK)
        if n > 2:
            e = rows[pos == 0]
            block[e] = 0.0
            block[e, pick[e, 0]] = u[e]
            block[e, pick[e, 1]] = 1 - u[e]
        if n > 3:
            t = rows[pos == 1]
            block[t] = 0.0
            for c in range(3):
                block[t, pick[t, c]] = tri[t, c]
        hi = min(start + count, lo + BLOCK)
        out[k - start: hi - start] = block[k - lo: hi - lo]
        k = hi
    return out


def sample_weights(n: int, n_samples: int, seed: int) -> np.ndarray:
    fixed = fixed_weights(n)
    if n_samples <= fixed.shape[0]:
        return fixed[:n_samples]
    extra = random_weights(n, 0, n_samples - fixed.shape[0], seed)
    return np.vstack([fixed, extra])


def sample_convex_combinations(family: Family, n_samples: int, seed: int = 0,
                               tol: Tolerances = DEFAULT_TOL,
                               stop_early: bool = False) -> OracleReport:
    """Evaluate real-rootedness of ``n_samples`` convex combinations.

    With ``stop_early`` the scan ends at the first chunk containing a
    violation; ``samples`` then counts what was actually evaluated.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    n = len(family)
    M = family.matrix()
    ref = max(m.scale for m in family) or 1.0
    W = sample_weights(n, n_samples, seed)
    rep = OracleReport(samples=0, seed=seed)
    chunk = BLOCK if stop_early else W.shape[0]
    for lo in range(0, W.shape[0], chunk):
        Wc = W[lo: lo + chunk]
        bs = batch_spectra(Wc @ M.T, tol, ref_scale=ref)
        rep.samples += Wc.shape[0]
        live = ~bs.zero
        if live.any():
            rep.max_margin = max(rep.max_margin, float(bs.margin[live].max()))
            ok = live & (bs.margin <= tol.tau_root)
            if ok.any():
                rep.min_gap_observed = min(rep.min_gap_observed, float(bs.min_gap[ok].min()))
        for r in np.flatnonzero(live & (bs.margin > tol.tau_root)):
            rep.violations.append((lo + int(r), Wc[r].tolist(), float(bs.margin[r])))
        if stop_early and rep.violations:
            break
    rep.min_real_margin = tol.tau_root - rep.max_margin
    return rep


@dataclass
class ScanRow:
    s: float
    roots: list | None      # descending; inf for roots at infinity
    margin: float | None    # None for the zero polynomial

    @property
    def is_zero(self) -> bool:
        return self.margin is None


def edge_scan(f: Poly, g: Poly, k: int, tol: Tolerances = DEFAULT_TOL) -> list[ScanRow]:
    """Spectra of (1-s) f + s g at k equispaced s in [0, 1]."""
    if k < 2:
        raise ValueError("k must be >= 2")
    ref = max(f.scale, g.scale) or 1.0
    rows = []
    for s in np.linspace(0.0, 1.0, k):
        p = (1 - s) * f + s * g
        if p.scale <= tol.tau_zero * ref:
            rows.append(ScanRow(float(s), None, None))
            continue
        m = complex_margin(p, tol)
        if m > tol.tau_root:
            rows.append(ScanRow(float(s), None, m))
            continue
        spec = real_roots(p, tol)
        vals = [math.inf] * spec.roots_at_infinity + spec.expanded().tolist()
        rows.append(ScanRow(float(s), vals, m))
    return rows


def scan_to_csv(rows: list[ScanRow], d: int, out=None) -> str:
    buf = io.StringIO() if out is None else out
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["s"] + [f"root_{j + 1}" for j in range(d)] + ["complex_margin"])
    for row in rows:
        if row.is_zero:
            w.writerow([repr(row.s)] + [""] * d + ["zero"])
        elif row.roots is None:
            w.writerow([repr(row.s)] + [""] * d + [repr(row.margin)])
        else:
            cells = ["inf" if math.isinf(v) else repr(float(v)) for v in row.roots]
            w.writerow([repr(row.s)] + cells + [repr(float(row.margin))])
    return buf.getvalue() if out is None else ""
