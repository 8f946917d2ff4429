"""Independent brute-force reference implementations used as test oracles.

Everything here recomputes metrics straight from their definitions, one
element at a time (vectorized elementwise where speed matters, plus plain
Python loops for small sets), with no sorting or cumulative-count shortcuts
shared with the implementation under test.
"""

import numpy as np

from irispad.mlp import HeadGradients, MlpHead, batch_loss
from irispad.scores import ScoreSet


def res(score: float, tau: float) -> int:
    """Decision per element: 1 = classified attack."""
    return 1 if score >= tau else 0


def apcer_recount(score_set: ScoreSet, tau: float, species: str) -> float:
    vals = [
        s for s, lab, sp in zip(score_set.scores, score_set.labels, score_set.species)
        if lab == 1 and sp == species
    ]
    return sum(1 for v in vals if res(v, tau) == 0) / len(vals)


def bpcer_recount(score_set: ScoreSet, tau: float) -> float:
    vals = [s for s, lab in zip(score_set.scores, score_set.labels) if lab == 0]
    return sum(res(v, tau) for v in vals) / len(vals)


def worst_case_recount(score_set: ScoreSet, tau: float):
    best = None
    for sp in sorted({sp for lab, sp in zip(score_set.labels, score_set.species) if lab == 1}):
        value = apcer_recount(score_set, tau, sp)
        if best is None or value > best[0]:
            best = (value, sp)
    return best


def sweep_taus(score_set: ScoreSet) -> np.ndarray:
    return np.concatenate(([np.inf], np.unique(score_set.scores)[::-1], [-np.inf]))


def _pools(score_set: ScoreSet, scope_kind: str, species: str | None = None):
    att = {}
    for s, lab, sp in zip(score_set.scores, score_set.labels, score_set.species):
        if lab == 1:
            att.setdefault(sp, []).append(s)
    if scope_kind == "pooled":
        return [np.array([v for vs in att.values() for v in vs])]
    if scope_kind == "single":
        return [np.array(att[species])]
    return [np.array(att[sp]) for sp in sorted(att)]


def sweep_recount(score_set: ScoreSet, scope_kind: str = "pooled", species: str | None = None):
    """(taus, apcer, bpcer) by elementwise recount at every sweep threshold."""
    taus = sweep_taus(score_set)
    bf = score_set.scores[score_set.labels == 0]
    pools = _pools(score_set, scope_kind, species)
    per_pool = []
    for pool in pools:
        detected = (pool[None, :] >= taus[:, None]).sum(axis=1)
        per_pool.append((len(pool) - detected) / len(pool))
    apcer_vals = np.max(per_pool, axis=0)
    bpcer_vals = (bf[None, :] >= taus[:, None]).sum(axis=1) / len(bf)
    return taus, apcer_vals, bpcer_vals


def eer_recount(score_set: ScoreSet, scope_kind: str = "pooled", species: str | None = None):
    """Crossing of APCER and BPCER on the recounted sweep.

    Exact ties at a sweep point are returned as-is; otherwise the two points
    bracketing the sign change are linearly interpolated.
    """
    taus, a, b = sweep_recount(score_set, scope_kind, species)
    d = a - b
    for i in range(len(taus)):
        if d[i] == 0.0:
            return float(a[i]), float(taus[i])
        if d[i] < 0.0:
            t = d[i - 1] / (d[i - 1] - d[i])
            value = (1.0 - t) * a[i - 1] + t * a[i]
            if np.isfinite(taus[i - 1]) and np.isfinite(taus[i]):
                tau = (1.0 - t) * taus[i - 1] + t * taus[i]
            else:
                tau = taus[i] if np.isfinite(taus[i]) else taus[i - 1]
            return float(value), float(tau)
    raise AssertionError("no crossing found")


def bpcer_at_apcer_recount(score_set: ScoreSet, target: float, scope_kind: str = "pooled"):
    """Scan every sweep threshold, keep the largest tau with APCER <= target."""
    taus, a, b = sweep_recount(score_set, scope_kind)
    feasible = [i for i in range(len(taus)) if a[i] <= target]
    if feasible:
        i = min(feasible, key=lambda j: -taus[j])
        return float(a[i]), float(b[i]), float(taus[i]), True
    i = int(np.argmin(a))
    return float(a[i]), float(b[i]), float(taus[i]), False


def fd_gradients(head: MlpHead, X, y, sample_weight=None, step: float = 1e-5) -> HeadGradients:
    """Central finite differences of the mean BCE, one coordinate at a time."""
    out = {}
    for name, param in head.params().items():
        grad = np.zeros_like(param)
        flat_p = param.reshape(-1)
        flat_g = grad.reshape(-1)
        for k in range(flat_p.size):
            orig = flat_p[k]
            flat_p[k] = orig + step
            up = batch_loss(head, X, y, sample_weight)
            flat_p[k] = orig - step
            down = batch_loss(head, X, y, sample_weight)
            flat_p[k] = orig
            flat_g[k] = (up - down) / (2.0 * step)
        out[name] = grad
    return HeadGradients(**out)


def gradient_max_rel_error(analytic: HeadGradients, numeric: HeadGradients, skip_below: float = 1e-8) -> float:
    worst = 0.0
    for name in ("w1", "b1", "w2", "b2"):
        a = analytic.params()[name].reshape(-1)
        f = numeric.params()[name].reshape(-1)
        for av, fv in zip(a, f):
            if abs(av) < skip_below and abs(fv) < skip_below:
                continue
            worst = max(worst, abs(av - fv) / max(abs(av), abs(fv)))
    return worst
