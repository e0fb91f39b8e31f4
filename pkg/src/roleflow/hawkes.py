"""Discrete-time multivariate Hawkes processes over roles.

Each link's sharing history becomes an event count matrix ``s[t, k]`` over
time bins ``t`` and roles ``k``. The per-bin rate is

    rate[t, k] = background[k] + sum_{k', tau} s[t - tau, k'] * W[k', k] * G[tau]

with ``tau`` running over lags ``1..L``. Counts are Poisson given the rate.
Parameters are fitted by EM over the latent parent structure: every unit
event is either background or the offspring of one earlier event.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.special import gammaln

from .corpus import ANALYZED_TYPES, DomainRegistry, PostRecord, SourceType, classify_link, link_domain, percentile_cutoff

log = logging.getLogger(__name__)

DEFAULT_LAG_HORIZON = 2880


class HawkesError(RuntimeError):
    """Numerical failure during simulation or fitting."""


# -- data types ------------------------------------------------------------

@dataclass
class EventSeries:
    """Sparse event counts for one link.

    ``bins``, ``procs`` and ``counts`` list the non-empty cells ``(t, k)``
    sorted by bin then process.
    """

    link_url: str
    source_type: SourceType
    bin_width_seconds: int
    horizon_bins: int
    k: int
    bins: np.ndarray
    procs: np.ndarray
    counts: np.ndarray

    def __post_init__(self):
        self.bins = np.asarray(self.bins, dtype=np.int64)
        self.procs = np.asarray(self.procs, dtype=np.int64)
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if not (len(self.bins) == len(self.procs) == len(self.counts)):
            raise ValueError("bins, procs and counts differ in length")
        if len(self.bins):
            if self.bins.min() < 0 or self.bins.max() >= self.horizon_bins:
                raise ValueError("bin index outside [0, horizon)")
            if self.procs.min() < 0 or self.procs.max() >= self.k:
                raise ValueError("process index outside [0, K)")
            if self.counts.min() < 1:
                raise ValueError("stored counts must be positive")
            key = self.bins * self.k + self.procs
            if np.any(np.diff(key) <= 0):
                order = np.argsort(key, kind="stable")
                key = key[order]
                if np.any(np.diff(key) == 0):
                    raise ValueError("duplicate (bin, process) cell")
                self.bins, self.procs, self.counts = self.bins[order], self.procs[order], self.counts[order]

    @classmethod
    def from_dense(cls, s: np.ndarray, link_url: str = "", source_type=SourceType.OTHER,
                   bin_width_seconds: int = 1) -> "EventSeries":
        s = np.asarray(s)
        t, k = np.nonzero(s)
        return cls(link_url, source_type, bin_width_seconds, s.shape[0], s.shape[1], t, k, s[t, k])

    @property
    def n_events(self) -> int:
        return int(self.counts.sum())

    def events_per_process(self) -> np.ndarray:
        return np.bincount(self.procs, weights=self.counts, minlength=self.k).astype(np.int64)

    def as_dict(self) -> dict[tuple[int, int], int]:
        return {(int(t), int(k)): int(c) for t, k, c in zip(self.bins, self.procs, self.counts)}

    def dense(self) -> np.ndarray:
        s = np.zeros((self.horizon_bins, self.k), dtype=np.int64)
        s[self.bins, self.procs] = self.counts
        return s

    def to_json(self) -> dict:
        return {
            "link_url": self.link_url,
            "source_type": self.source_type.value,
            "bin_width_seconds": self.bin_width_seconds,
            "horizon_bins": self.horizon_bins,
            "k": self.k,
            "cells": [[int(t), int(k), int(c)] for t, k, c in zip(self.bins, self.procs, self.counts)],
        }

    @classmethod
    def from_json(cls, d: Mapping) -> "EventSeries":
        cells = np.asarray(d["cells"], dtype=np.int64).reshape(-1, 3)
        return cls(d.get("link_url", ""), SourceType.parse(d.get("source_type", "other")),
                   int(d.get("bin_width_seconds", 1)), int(d["horizon_bins"]), int(d["k"]),
                   cells[:, 0], cells[:, 1], cells[:, 2])


@dataclass
class HawkesParams:
    """Background rates, weight matrix and lag mass function.

    ``lag_pmf[tau - 1]`` is the mass at lag ``tau``. A shared lag function
    has shape ``(L,)``; a per-pair one has shape ``(K, K, L)``.
    """

    background_rates: np.ndarray
    weights: np.ndarray
    lag_pmf: np.ndarray

    def __post_init__(self):
        self.background_rates = np.asarray(self.background_rates, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        self.lag_pmf = np.asarray(self.lag_pmf, dtype=float)
        k = self.background_rates.shape[0]
        if self.weights.shape != (k, k):
            raise ValueError(f"weights shape {self.weights.shape} != ({k}, {k})")
        if self.lag_pmf.ndim == 3 and self.lag_pmf.shape[:2] != (k, k):
            raise ValueError("per-pair lag_pmf must have shape (K, K, L)")
        if self.lag_pmf.ndim not in (1, 3) or self.lag_pmf.shape[-1] < 1:
            raise ValueError("lag_pmf must have shape (L,) or (K, K, L)")
        for name in ("background_rates", "weights", "lag_pmf"):
            arr = getattr(self, name)
            if not np.all(np.isfinite(arr)) or np.any(arr < 0):
                raise ValueError(f"{name} must be finite and non-negative")
        sums = self.lag_pmf.sum(axis=-1)
        if np.any(np.abs(sums - 1.0) > 1e-9):
            raise ValueError("lag_pmf must sum to 1")

    @property
    def k(self) -> int:
        return self.background_rates.shape[0]

    @property
    def lag_horizon(self) -> int:
        return self.lag_pmf.shape[-1]

    @property
    def per_pair(self) -> bool:
        return self.lag_pmf.ndim == 3

    def spectral_radius(self) -> float:
        return float(np.max(np.abs(np.linalg.eigvals(self.weights)))) if self.k else 0.0

    def pair_lag_pmf(self) -> np.ndarray:
        if self.per_pair:
            return self.lag_pmf
        return np.broadcast_to(self.lag_pmf, (self.k, self.k, self.lag_horizon))

    def to_json(self) -> dict:
        return {
            "background_rates": self.background_rates.tolist(),
            "weights": self.weights.tolist(),
            "lag_pmf": self.lag_pmf.tolist(),
        }

    @classmethod
    def from_json(cls, d: Mapping) -> "HawkesParams":
        return cls(d["background_rates"], d["weights"], d["lag_pmf"])


def geometric_lag_pmf(p: float, horizon: int) -> np.ndarray:
    """Geometric mass ``p (1-p)^(tau-1)`` on lags 1..horizon, renormalized."""
    g = p * (1 - p) ** np.arange(horizon)
    return g / g.sum()


# -- rates and likelihood ----------------------------------------------------

def compute_rates(series: EventSeries, params: HawkesParams) -> np.ndarray:
    """Dense ``(T, K)`` rate matrix; bin ``t`` depends only on bins before ``t``."""
    if params.k != series.k:
        raise ValueError(f"params have K={params.k}, series has K={series.k}")
    s = series.dense().astype(float)
    T, K, L = series.horizon_bins, series.k, params.lag_horizon
    rates = np.tile(params.background_rates, (T, 1))
    g = params.pair_lag_pmf()
    for kp in range(K):
        if not s[:, kp].any():
            continue
        for k in range(K):
            if params.weights[kp, k] == 0:
                continue
            kernel = np.concatenate(([0.0], g[kp, k]))
            rates[:, k] += params.weights[kp, k] * np.convolve(s[:, kp], kernel)[:T]
    return rates


@dataclass
class _Pairs:
    """All (parent cell, child cell) pairs with lag in 1..L."""

    child: np.ndarray
    parent: np.ndarray
    lag: np.ndarray


def _pairs(bins: np.ndarray, L: int) -> _Pairs:
    # cells are sorted by bin, so parents of cell i occupy a contiguous slice
    lo = np.searchsorted(bins, bins - L, side="left")
    hi = np.searchsorted(bins, bins, side="left")
    n = hi - lo
    child = np.repeat(np.arange(len(bins)), n)
    start = np.repeat(lo - np.concatenate(([0], np.cumsum(n)[:-1])), n)
    parent = np.arange(n.sum()) + start
    return _Pairs(child, parent, bins[child] - bins[parent])


class _Model:
    """Sparse evaluation of rates, likelihood and EM statistics for one series."""

    def __init__(self, series: EventSeries, L: int, horizon: int):
        self.s = series
        self.L = L
        self.T = horizon
        self.K = series.k
        self.pairs = _pairs(series.bins, L)
        self.N = series.events_per_process().astype(float)
        self.log_fact = float(gammaln(series.counts + 1.0).sum())
        # lag mass that stays inside the horizon, per cell
        self.room = np.minimum(self.T - 1 - series.bins, L)

    def contributions(self, p: HawkesParams) -> np.ndarray:
        pr = self.pairs
        kp, kc = self.s.procs[pr.parent], self.s.procs[pr.child]
        if p.per_pair:
            g = p.lag_pmf[kp, kc, pr.lag - 1]
        else:
            g = p.lag_pmf[pr.lag - 1]
        return self.s.counts[pr.parent] * p.weights[kp, kc] * g

    def cell_rates(self, p: HawkesParams, contrib: np.ndarray) -> np.ndarray:
        base = p.background_rates[self.s.procs]
        return base + np.bincount(self.pairs.child, weights=contrib, minlength=len(self.s.bins))

    def compensator(self, p: HawkesParams) -> float:
        total = self.T * p.background_rates.sum()
        cum = np.concatenate((np.zeros(p.pair_lag_pmf().shape[:2] + (1,)),
                              np.cumsum(p.pair_lag_pmf(), axis=-1)), axis=-1)
        kp = self.s.procs
        # mass[cell, k] = W[kp, k] * sum of G over lags that land inside the horizon
        mass = p.weights[kp] * cum[kp, :, self.room]
        return total + float((self.s.counts[:, None] * mass).sum())

    def log_likelihood(self, p: HawkesParams, rates: np.ndarray) -> float:
        if np.any(rates <= 0):
            return -math.inf
        ll = math.fsum(self.s.counts * np.log(rates))
        return ll - self.compensator(p) - self.log_fact


def log_likelihood(series: EventSeries, params: HawkesParams, horizon: int | None = None) -> float:
    """Poisson log-likelihood of ``series`` over ``horizon`` bins (default: its own)."""
    m = _Model(series, params.lag_horizon, horizon or series.horizon_bins)
    c = m.contributions(params)
    return m.log_likelihood(params, m.cell_rates(params, c))


@dataclass
class Responsibilities:
    """Per-cell posterior split of each unit event between background and parents.

    ``background[i]`` is the background share of an event in cell ``i``;
    ``parent[p]`` is the share attributed to pair ``p`` (parent cell
    ``parents[p]`` at ``lags[p]``). For every cell the shares sum to one.
    """

    background: np.ndarray
    parent: np.ndarray
    children: np.ndarray
    parents: np.ndarray
    lags: np.ndarray

    def totals(self) -> np.ndarray:
        return self.background + np.bincount(self.children, weights=self.parent,
                                             minlength=len(self.background))


def responsibilities(series: EventSeries, params: HawkesParams) -> Responsibilities:
    m = _Model(series, params.lag_horizon, series.horizon_bins)
    c = m.contributions(params)
    rates = m.cell_rates(params, c)
    bg = params.background_rates[series.procs] / rates
    return Responsibilities(bg, c / rates[m.pairs.child], m.pairs.child, m.pairs.parent, m.pairs.lag)


# -- simulation --------------------------------------------------------------

@dataclass
class Simulation:
    series: EventSeries
    offspring: np.ndarray  # offspring[i, j]: events in j attributed to parents in i
    background_events: np.ndarray

    def offspring_per_parent(self) -> np.ndarray:
        n = self.series.events_per_process().astype(float)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = self.offspring / n[:, None]
        return np.where(n[:, None] > 0, out, 0.0)


def simulate_branching(params: HawkesParams, horizon_bins: int, seed=None,
                       link_url: str = "simulated", bin_width_seconds: int = 1) -> Simulation:
    """Simulate bin by bin and record which process each event descends from.

    Counts are drawn from Poisson(rate[t, k]); each bin's events are then
    split multinomially between the background and the parent cells in
    proportion to their rate contributions, which leaves the count
    distribution unchanged.
    """
    if params.spectral_radius() >= 1:
        raise HawkesError(f"spectral radius {params.spectral_radius():.4f} >= 1: explosive process")
    rng = np.random.default_rng(seed)
    K, L, T = params.k, params.lag_horizon, horizon_bins
    g = params.pair_lag_pmf()[:, :, ::-1]  # g[kp, k, j] is the mass at lag L - j
    W = params.weights
    s = np.zeros((T + L, K), dtype=np.int64)  # padded with L leading empty bins
    offspring = np.zeros((K, K), dtype=np.int64)
    background = np.zeros(K, dtype=np.int64)
    for t in range(T):
        hist = s[t:t + L]  # bins t-L .. t-1 of the real series
        if hist.any():
            # contrib[j, kp, k] = s[lag, kp] * W[kp, k] * G[kp, k, lag]
            contrib = hist[:, :, None] * W[None, :, :] * np.moveaxis(g, 2, 0)
            rate = params.background_rates + contrib.sum(axis=(0, 1))
        else:
            contrib = None
            rate = params.background_rates
        n = rng.poisson(rate)
        if not n.any():
            continue
        s[t + L] = n
        for k in np.nonzero(n)[0]:
            if contrib is None:
                background[k] += n[k]
                continue
            w = np.concatenate(([params.background_rates[k]], contrib[:, :, k].ravel()))
            alloc = rng.multinomial(n[k], w / w.sum())
            background[k] += alloc[0]
            offspring[:, k] += alloc[1:].reshape(L, K).sum(axis=0)
    series = EventSeries.from_dense(s[L:], link_url, SourceType.OTHER, bin_width_seconds)
    return Simulation(series, offspring, background)


def simulate(params: HawkesParams, horizon_bins: int, seed=None) -> EventSeries:
    return simulate_branching(params, horizon_bins, seed).series


# -- EM ------------------------------------------------------------------------

@dataclass
class HawkesFit:
    params: HawkesParams
    log_likelihood: float
    history: list[float]
    iterations: int
    converged: bool
    n_events: int
    horizon_bins: int
    link_url: str = ""
    source_type: SourceType = SourceType.OTHER
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "link_url": self.link_url,
            "source_type": self.source_type.value,
            **self.params.to_json(),
            "iterations": self.iterations,
            "log_likelihood": self.log_likelihood,
            "converged": self.converged,
            "n_events": self.n_events,
            "horizon_bins": self.horizon_bins,
            **self.extra,
        }


def fit_em(series: EventSeries, lag_horizon: int = DEFAULT_LAG_HORIZON, max_iters: int = 500,
           tol: float = 1e-6, seed=None, per_pair_lag: bool = False,
           check_monotone: bool = False) -> HawkesFit:
    """Fit background rates, weights and lag mass by EM.

    The fitting horizon is extended to ``last event bin + L + 1`` when the
    series is shorter, so every event's full lag window lies inside it and
    the M-step is exact. Iteration stops when the per-event log-likelihood
    changes by less than ``tol``.
    """
    n_events = series.n_events
    if n_events < 2:
        raise ValueError(f"need at least 2 events to fit, got {n_events}")
    L, K = lag_horizon, series.k
    last = int(series.bins.max())
    T = max(series.horizon_bins, last + L + 1)
    m = _Model(series, L, T)
    rng = np.random.default_rng(seed)

    def jitter(shape):
        return 1.0 + 0.01 * rng.uniform(-1, 1, size=shape)

    lam0 = m.N / (2 * T) * jitter(K)
    W = 0.1 * np.ones((K, K)) * jitter((K, K))
    g_shape = (K, K, L) if per_pair_lag else (L,)
    G = np.ones(g_shape) * jitter(g_shape)
    G /= G.sum(axis=-1, keepdims=True)
    params = HawkesParams(lam0, W, G)

    pr = m.pairs
    kp, kc = series.procs[pr.parent], series.procs[pr.child]
    pair_cell = kp * K + kc
    child_counts = series.counts[pr.child]
    history: list[float] = []
    converged = False

    c = m.contributions(params)
    rates = m.cell_rates(params, c)
    ll = m.log_likelihood(params, rates)
    history.append(ll)
    it = 0
    for it in range(1, max_iters + 1):
        # E-step, aggregated to sufficient statistics
        bg_mass = np.bincount(series.procs, weights=series.counts * params.background_rates[series.procs] / rates,
                              minlength=K)
        resp = child_counts * c / rates[pr.child]
        R = np.bincount(pair_cell, weights=resp, minlength=K * K).reshape(K, K)
        # M-step
        lam0 = bg_mass / T
        with np.errstate(invalid="ignore", divide="ignore"):
            W = np.where(m.N[:, None] > 0, R / m.N[:, None], 0.0)
        if per_pair_lag:
            Rg = np.bincount(pair_cell * L + pr.lag - 1, weights=resp, minlength=K * K * L).reshape(K, K, L)
            tot = Rg.sum(axis=-1, keepdims=True)
            G = np.where(tot > 0, Rg / np.where(tot > 0, tot, 1.0), params.lag_pmf)
        else:
            Rg = np.bincount(pr.lag - 1, weights=resp, minlength=L)
            G = Rg / Rg.sum() if Rg.sum() > 0 else params.lag_pmf
        params = HawkesParams(lam0, W, G)
        c = m.contributions(params)
        rates = m.cell_rates(params, c)
        new_ll = m.log_likelihood(params, rates)
        if not math.isfinite(new_ll):
            raise HawkesError(f"non-finite log-likelihood at iteration {it} "
                              f"(previous {ll:.6g}, min background {lam0.min():.3g})")
        if check_monotone and new_ll < ll - 1e-9 * max(1.0, abs(ll)):
            raise HawkesError(f"log-likelihood decreased at iteration {it}: {ll!r} -> {new_ll!r}")
        history.append(new_ll)
        delta = (new_ll - ll) / n_events
        ll = new_ll
        if abs(delta) < tol:
            converged = True
            break
    return HawkesFit(params, ll, history, it, converged, n_events, T,
                     link_url=series.link_url, source_type=series.source_type,
                     extra={"lag_horizon": L, "per_pair_lag": per_pair_lag})


# -- link selection and influence ------------------------------------------------

def row_normalize(weights) -> np.ndarray:
    """Divide each row by its sum; all-zero rows stay zero."""
    W = np.asarray(weights, dtype=float)
    if np.any(W < 0):
        raise ValueError("row_normalize needs non-negative entries")
    sums = W.sum(axis=1, keepdims=True)
    return np.divide(W, sums, out=np.zeros_like(W), where=sums > 0)


def select_links(posts: Sequence[PostRecord], roles: Mapping[str, int], registry: DomainRegistry,
                 min_accounts: int = 10, min_roles: int = 3) -> list[str]:
    """Links shared by enough distinct role-assigned accounts spanning enough roles."""
    accounts: dict[str, set[str]] = defaultdict(set)
    for p in posts:
        if p.account_id not in roles:
            continue
        for url in set(u.strip() for u in p.links):
            accounts[url].add(p.account_id)
    out = []
    for url, accs in accounts.items():
        if len(accs) < min_accounts or len({roles[a] for a in accs}) < min_roles:
            continue
        if classify_link(url, registry) is SourceType.OTHER:
            continue
        out.append(url)
    return sorted(out)


def link_timestamps(posts: Sequence[PostRecord], links: Sequence[str],
                    roles: Mapping[str, int]) -> dict[str, list[tuple[int, int]]]:
    """Per link, the sorted (timestamp, role) pairs of qualifying posts."""
    wanted = set(links)
    out: dict[str, list[tuple[int, int]]] = {u: [] for u in links}
    for p in posts:
        if p.account_id not in roles:
            continue
        for url in set(u.strip() for u in p.links):
            if url in wanted:
                out[url].append((p.timestamp, roles[p.account_id]))
    for v in out.values():
        v.sort()
    return out


def inter_arrival_times(timestamps: Mapping[str, Sequence[tuple[int, int]]]) -> list[int]:
    gaps: list[int] = []
    for events in timestamps.values():
        ts = [t for t, _ in events]
        gaps.extend(b - a for a, b in zip(ts, ts[1:]))
    return gaps


def choose_bin_width(inter_arrival_seconds: Sequence[float], percentile: float = 10) -> int:
    if len(inter_arrival_seconds) == 0:
        raise ValueError("no inter-arrival times")
    v = percentile_cutoff(inter_arrival_seconds, percentile)
    return max(1, int(math.floor(v + 1e-9)))


def build_event_series(link: str, events: Sequence[tuple[int, int]], k: int, bin_width: int,
                       source_type: SourceType = SourceType.OTHER) -> EventSeries:
    """Bin ``(timestamp, role)`` events relative to the first timestamp."""
    if not events:
        raise ValueError(f"link {link!r} has no qualifying posts")
    if bin_width < 1:
        raise ValueError("bin width must be a positive integer")
    ts = np.array([t for t, _ in events], dtype=np.int64)
    ks = np.array([r for _, r in events], dtype=np.int64)
    if ks.min() < 0 or ks.max() >= k:
        raise ValueError("role index outside [0, K)")
    b = (ts - ts.min()) // bin_width
    cells, counts = np.unique(b * k + ks, return_counts=True)
    return EventSeries(link, source_type, bin_width, int(b.max()) + 1, k, cells // k, cells % k, counts)


def link_seed(seed: int, link: str) -> np.random.SeedSequence:
    h = int.from_bytes(hashlib.sha256(link.encode("utf-8")).digest()[:8], "big")
    return np.random.SeedSequence([int(seed), h])


def _fit_job(args):
    series, seed, kw = args
    return fit_em(series, seed=link_seed(seed, series.link_url), **kw)


def fit_links(series_list: Sequence[EventSeries], seed: int = 0, workers: int = 1, **fit_kw) -> list[HawkesFit]:
    """Fit every series; results come back in input order whatever the worker count."""
    jobs = [(s, seed, fit_kw) for s in series_list]
    if workers <= 1 or len(jobs) <= 1:
        return [_fit_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_fit_job, jobs))


@dataclass
class InfluenceReport:
    source_type: SourceType
    mean_normalized_weights: np.ndarray
    links_fitted: int
    events_total: int


def aggregate_influence(fits: Sequence[tuple[str, HawkesFit | HawkesParams]],
                        registry: DomainRegistry | None = None) -> list[InfluenceReport]:
    """Entry-wise mean of row-normalized weight matrices per source type.

    The source type comes from ``registry`` when given, otherwise from the
    fit itself.
    """
    groups: dict[SourceType, list] = defaultdict(list)
    for link, fit in fits:
        if registry is not None:
            st = classify_link(link, registry)
        else:
            st = getattr(fit, "source_type", SourceType.OTHER)
        if st is SourceType.OTHER:
            continue
        groups[st].append(fit)
    reports = []
    for st in ANALYZED_TYPES:
        if st not in groups:
            continue
        fs = groups[st]
        mats = [row_normalize(f.params.weights if isinstance(f, HawkesFit) else f.weights) for f in fs]
        events = sum(f.n_events for f in fs if isinstance(f, HawkesFit))
        reports.append(InfluenceReport(st, np.mean(mats, axis=0), len(fs), events))
    return reports


def event_accounting(series_list: Sequence[EventSeries], registry: DomainRegistry,
                     k: int) -> list[dict]:
    """Per source type: labeled domains, domains present, unique links, events, role shares."""
    labeled = registry.count_by_type()
    present: dict[SourceType, set] = defaultdict(set)
    links: dict[SourceType, int] = defaultdict(int)
    role_events: dict[SourceType, np.ndarray] = defaultdict(lambda: np.zeros(k, dtype=np.int64))
    for s in series_list:
        st = s.source_type
        key = registry.match(s.link_url) if s.link_url else None
        present[st].add(key or link_domain(s.link_url))
        links[st] += 1
        role_events[st] += s.events_per_process()
    rows = []
    for st in ANALYZED_TYPES:
        ev = role_events[st]
        total = int(ev.sum())
        rows.append({
            "source_type": st.value,
            "domains_labeled": labeled[st],
            "domains_present": len(present[st]),
            "unique_links": links[st],
            "events": total,
            "role_percent": [100.0 * e / total if total else 0.0 for e in ev],
        })
    return rows


def dump_fit(fit: HawkesFit, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(fit.to_json(), fh, indent=2, sort_keys=True)
