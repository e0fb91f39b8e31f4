"""Role mining: k-means++ clustering and the robustness battery around it."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .features import Standardizer


@dataclass
class ClusterAssignment:
    account_ids: list[str]
    labels: np.ndarray
    inertia: float = 0.0
    inertia_trace: list[float] = field(default_factory=list)

    def as_dict(self) -> dict[str, int]:
        return {a: int(c) for a, c in zip(self.account_ids, self.labels)}

    def members(self) -> dict[int, set[str]]:
        out: dict[int, set[str]] = {}
        for a, c in zip(self.account_ids, self.labels):
            out.setdefault(int(c), set()).add(a)
        return out


@dataclass
class RoleModel:
    k: int
    centroids: np.ndarray
    seed: int
    standardizer: Standardizer | None = None
    labels: dict[int, str] | None = None

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "seed": self.seed,
            "centroids": self.centroids.tolist(),
            "standardizer": self.standardizer.to_json() if self.standardizer else None,
            "labels": {str(i): n for i, n in self.labels.items()} if self.labels else None,
        }

    @classmethod
    def from_json(cls, d) -> "RoleModel":
        st = Standardizer.from_json(d["standardizer"]) if d.get("standardizer") else None
        labels = {int(i): n for i, n in d["labels"].items()} if d.get("labels") else None
        return cls(int(d["k"]), np.asarray(d["centroids"], dtype=float), int(d["seed"]), st, labels)

    def role_name(self, idx: int) -> str:
        if self.labels and idx in self.labels:
            return self.labels[idx]
        return f"role{idx}"


def _ids(n: int, ids: Sequence[str] | None) -> list[str]:
    if ids is None:
        return [str(i) for i in range(n)]
    if len(ids) != n:
        raise ValueError("account id count does not match vector count")
    return list(ids)


def _sq_dists(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    d = (X * X).sum(1)[:, None] - 2 * X @ C.T + (C * C).sum(1)[None, :]
    return np.maximum(d, 0.0)


def _kmeans_pp(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centers = [X[rng.integers(n)]]
    d2 = ((X - centers[0]) ** 2).sum(1)
    for _ in range(1, k):
        total = d2.sum()
        if total <= 0:
            idx = rng.integers(n)
        else:
            idx = int(np.searchsorted(np.cumsum(d2), rng.random() * total, side="right"))
            idx = min(idx, n - 1)
        centers.append(X[idx])
        d2 = np.minimum(d2, ((X - X[idx]) ** 2).sum(1))
    return np.array(centers)


def _lloyd(X, C, max_iters, tol):
    trace = []
    labels = None
    for _ in range(max_iters):
        d = _sq_dists(X, C)
        labels = d.argmin(1)
        trace.append(float(d[np.arange(len(X)), labels].sum()))
        newC = C.copy()
        counts = np.bincount(labels, minlength=len(C))
        for j in np.nonzero(counts == 0)[0]:
            # repair an empty cluster with the farthest point of a cluster that can spare one
            own = np.where(counts[labels] > 1, d[np.arange(len(X)), labels], -np.inf)
            far = int(own.argmax())
            counts[labels[far]] -= 1
            labels[far] = j
            counts[j] = 1
        for j in range(len(C)):
            newC[j] = X[labels == j].mean(0)
        shift = float(np.sqrt(((newC - C) ** 2).sum(1)).max())
        C = newC
        if shift < tol:
            break
    d = _sq_dists(X, C)
    labels = d.argmin(1)
    inertia = float(d[np.arange(len(X)), labels].sum())
    trace.append(inertia)
    return C, labels, inertia, trace


def _canonical_order(labels: np.ndarray, k: int) -> np.ndarray:
    """Permutation old -> new ranking clusters by descending size, then first member."""
    sizes = np.bincount(labels, minlength=k)
    first = np.array([np.argmax(labels == j) if sizes[j] else len(labels) for j in range(k)])
    order = sorted(range(k), key=lambda j: (-sizes[j], first[j]))
    remap = np.empty(k, dtype=int)
    remap[order] = np.arange(k)
    return remap


def kmeans_fit(vectors, k: int, seed: int = 0, max_iters: int = 300, tol: float = 1e-6,
               n_init: int = 10, ids: Sequence[str] | None = None) -> tuple[RoleModel, ClusterAssignment]:
    """K-means with kmeans++ seeding; best of ``n_init`` seeded restarts by inertia.

    Clusters are renumbered by descending size so labels are stable.
    """
    X = np.asarray(vectors, dtype=float)
    n = X.shape[0]
    if k < 1 or n < k:
        raise ValueError(f"need at least k={k} vectors, got {n}")
    best = None
    for child in np.random.SeedSequence(seed).spawn(n_init):
        rng = np.random.default_rng(child)
        C, labels, inertia, trace = _lloyd(X, _kmeans_pp(X, k, rng), max_iters, tol)
        if best is None or inertia < best[2]:
            best = (C, labels, inertia, trace)
    C, labels, inertia, trace = best
    remap = _canonical_order(labels, k)
    C = C[np.argsort(remap)]
    labels = remap[labels]
    model = RoleModel(k, C, seed)
    return model, ClusterAssignment(_ids(n, ids), labels, inertia, trace)


def assign_to_model(vectors, model: RoleModel, ids: Sequence[str] | None = None) -> ClusterAssignment:
    """Nearest centroid by Euclidean distance; ties go to the lowest index."""
    X = np.atleast_2d(np.asarray(vectors, dtype=float))
    if X.shape[1] != model.centroids.shape[1]:
        raise ValueError(f"dimension mismatch: {X.shape[1]} vs {model.centroids.shape[1]}")
    d = ((X[:, None, :] - model.centroids[None, :, :]) ** 2).sum(-1)
    labels = d.argmin(1)
    return ClusterAssignment(_ids(len(X), ids), labels, float(d[np.arange(len(X)), labels].sum()))


@dataclass
class ElbowCurve:
    points: list[tuple[int, float, float]]
    suggested_k: int


def elbow_scan(vectors, k_range: Sequence[int] = range(2, 21), seed: int = 0) -> ElbowCurve:
    """Distortion (mean squared distance) and inertia per k.

    The suggested k maximizes the discrete second difference of distortion;
    it is a hint, not a decision.
    """
    X = np.asarray(vectors, dtype=float)
    ks = [k for k in k_range if k <= len(X)]
    points = []
    for k in ks:
        _, a = kmeans_fit(X, k, seed)
        points.append((k, a.inertia / len(X), a.inertia))
    dist = [p[1] for p in points]
    best_k, best = ks[0] if ks else 0, -math.inf
    for i in range(1, len(ks) - 1):
        d2 = dist[i - 1] - 2 * dist[i] + dist[i + 1]
        if d2 > best:
            best_k, best = ks[i], d2
    return ElbowCurve(points, best_k)


def silhouette_score(vectors, labels) -> float:
    X = np.asarray(vectors, dtype=float)
    labels = np.asarray(labels)
    uniq = np.unique(labels)
    if len(X) < 2 or len(uniq) < 2:
        raise ValueError("silhouette needs at least two points in two clusters")
    D = np.sqrt(_sq_dists(X, X))
    idx = np.searchsorted(uniq, labels)
    onehot = np.zeros((len(X), len(uniq)))
    onehot[np.arange(len(X)), idx] = 1
    sums = D @ onehot
    sizes = onehot.sum(0)
    own = sizes[idx]
    a = np.divide(sums[np.arange(len(X)), idx], own - 1, out=np.zeros(len(X)), where=own > 1)
    means = sums / sizes
    means[np.arange(len(X)), idx] = np.inf
    b = means.min(1)
    denom = np.maximum(a, b)
    s = np.divide(b - a, denom, out=np.zeros(len(X)), where=denom > 0)
    s[own == 1] = 0.0
    return float(s.mean())


def ward_linkage(vectors) -> np.ndarray:
    """Ward merge list ``(a, b, cost, size)`` via nearest-neighbour chains.

    Works on squared Euclidean distances with the Lance-Williams update.
    Merges come back sorted by cost; ties keep discovery order.
    """
    X = np.asarray(vectors, dtype=float)
    n = len(X)
    D = _sq_dists(X, X)
    np.fill_diagonal(D, np.inf)
    size = np.ones(n)
    active = np.ones(n, dtype=bool)
    merges = []
    chain: list[int] = []
    while len(merges) < n - 1:
        if not chain:
            chain.append(int(np.argmax(active)))
        a = chain[-1]
        row = np.where(active, D[a], np.inf)
        row[a] = np.inf
        b = int(row.argmin())
        if len(chain) > 1 and row[chain[-2]] <= row[b]:
            b = chain[-2]
        if len(chain) > 1 and b == chain[-2]:
            chain.pop()
            chain.pop()
            i, j = min(a, b), max(a, b)
            dij = D[i, j]
            ni, nj = size[i], size[j]
            nk = size
            upd = ((ni + nk) * D[i] + (nj + nk) * D[j] - nk * dij) / (ni + nj + nk)
            D[i, :] = upd
            D[:, i] = upd
            D[i, i] = np.inf
            D[j, :] = np.inf
            D[:, j] = np.inf
            active[j] = False
            size[i] = ni + nj
            merges.append((i, j, float(dij), size[i]))
        else:
            chain.append(b)
    order = sorted(range(len(merges)), key=lambda m: merges[m][2])
    return np.array([merges[m] for m in order]).reshape(-1, 4)


def agglomerative_fit(vectors, k: int, ids: Sequence[str] | None = None) -> ClusterAssignment:
    """Ward agglomerative clustering cut at ``k`` clusters."""
    X = np.asarray(vectors, dtype=float)
    n = len(X)
    if k < 1 or n < k:
        raise ValueError(f"need at least k={k} vectors, got {n}")
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b, _, _ in ward_linkage(X)[: n - k]:
        ra, rb = find(int(a)), find(int(b))
        parent[max(ra, rb)] = min(ra, rb)
    roots = np.array([find(i) for i in range(n)])
    _, labels = np.unique(roots, return_inverse=True)
    labels = _canonical_order(labels, k)[labels]
    return ClusterAssignment(_ids(n, ids), labels)


def jaccard_overlap(a: ClusterAssignment, b: ClusterAssignment) -> dict[int, float]:
    """Match clusters of ``b`` to clusters of ``a`` maximizing total Jaccard.

    Returns the matched Jaccard score per cluster of ``a`` (0 if unmatched).
    """
    if set(a.account_ids) != set(b.account_ids) or len(a.account_ids) != len(b.account_ids):
        raise ValueError("assignments cover different account sets")
    ma, mb = a.members(), b.members()
    ka, kb = sorted(ma), sorted(mb)
    J = np.zeros((len(ka), len(kb)))
    for i, ci in enumerate(ka):
        for j, cj in enumerate(kb):
            inter = len(ma[ci] & mb[cj])
            J[i, j] = inter / len(ma[ci] | mb[cj])
    rows, cols = linear_sum_assignment(J, maximize=True)
    out = {c: 0.0 for c in ka}
    for r, c in zip(rows, cols):
        out[ka[r]] = float(J[r, c])
    return out


def adjusted_rand_index(a, b) -> float:
    a, b = np.asarray(a), np.asarray(b)
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    table = np.zeros((ai.max() + 1, bi.max() + 1))
    np.add.at(table, (ai, bi), 1)

    def comb2(x):
        return (x * (x - 1) / 2).sum()

    n = len(a)
    index = comb2(table)
    ra, rb = comb2(table.sum(1)), comb2(table.sum(0))
    expected = ra * rb / comb2(np.array([n]))
    max_index = (ra + rb) / 2
    if max_index == expected:
        return 1.0
    return float((index - expected) / (max_index - expected))


class ConstantDimensionError(ValueError):
    pass


def vif(vectors, names: Sequence[str] | None = None, perfect_tol: float = 1e-10) -> np.ndarray:
    """Variance inflation factor per dimension, ``inf`` under exact collinearity.

    Each column is regressed by least squares on all others plus an
    intercept; ``1 - R^2`` below ``perfect_tol`` is reported as infinity.
    """
    X = np.asarray(vectors, dtype=float)
    n, p = X.shape
    names = list(names) if names is not None else [f"dim{j}" for j in range(p)]
    if n < p + 2:
        raise ValueError(f"VIF needs at least {p + 2} vectors, got {n}")
    for j in range(p):
        if np.all(X[:, j] == X[0, j]):
            raise ConstantDimensionError(f"dimension {names[j]!r} is constant")
    out = np.empty(p)
    for j in range(p):
        y = X[:, j]
        A = np.column_stack([np.ones(n), np.delete(X, j, axis=1)])
        coef, *_ = np.linalg.lstsq(A, y, rcond=None)
        resid = y - A @ coef
        ss_tot = float(((y - y.mean()) ** 2).sum())
        unexplained = float(resid @ resid) / ss_tot
        out[j] = math.inf if unexplained < perfect_tol else 1.0 / min(unexplained, 1.0)
    return out


def write_assignments(path, rows, header_comment: str | None = None) -> None:
    """Rows of (account_id, window_index, cluster, active)."""
    with open(path, "w", encoding="utf-8") as fh:
        if header_comment:
            fh.write(f"# {header_comment}\n")
        fh.write("account_id,window_index,cluster,active\n")
        for acc, win, c, active in rows:
            fh.write(f"{acc},{win},{c},{int(bool(active))}\n")


def read_assignments(path) -> list[tuple[str, int, int, bool]]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        lines = [l for l in fh if not l.startswith("#")]
    for line in lines[1:]:
        acc, win, c, active = line.rstrip("\n").split(",")
        rows.append((acc, int(win), int(c), active == "1"))
    return rows


def dump_model(model: RoleModel, path, **meta) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({**meta, **model.to_json()}, fh, indent=2, sort_keys=True)


def load_model(path) -> RoleModel:
    with open(path, encoding="utf-8") as fh:
        return RoleModel.from_json(json.load(fh))
