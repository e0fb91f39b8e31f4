"""Command-line pipeline: ingest -> featurize -> cluster/elbow -> assign -> dynamics, hawkes, report.

Each stage reads its declared inputs (config paths and earlier stage outputs
under ``--out``) and writes into its own subdirectory. Every artifact carries
the config hash and seed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import clustering, corpus, dynamics, features, hawkes, lexicon
from .corpus import DomainRegistry, SourceType, WindowSpec

log = logging.getLogger("roleflow")

DEFAULTS: dict[str, str] = {
    "corpus": "",
    "registry": "",
    "lexicon": "",
    "patterns": "",
    "out": "roleflow-out",
    "seed": "0",
    "threads": "1",
    "window_start": "2018-01-01",
    "window_length": "6",
    "window_count": "4",
    "min_unique_links": "10",
    "per_window_threshold": "false",
    "threshold_checks": "8,6,4",
    "popularity_eps": "1.0",
    "popularity_denominator": "rest",
    "k": "5",
    "role_labels": "",
    "elbow_k_min": "2",
    "elbow_k_max": "20",
    "reuse_t1_stats": "false",
    "inactive_state": "false",
    "assign_inactive": "false",
    "bin_width": "",
    "bin_percentile": "10",
    "lag_horizon": "2880",
    "em_tol": "1e-6",
    "em_max_iters": "500",
    "per_pair_lag": "false",
    "min_accounts": "10",
    "min_roles": "3",
    "series": "",
    "sim_background": "0.01,0.02,0.005",
    "sim_weights": "0.38,0.4,0.4;0.4,0.38,0.4;0,0,0.4",
    "sim_lag_p": "0.3",
    "sim_lag_horizon": "20",
    "sim_bins": "50000",
}
# keys that never change artifact contents
NON_SEMANTIC = {"out", "threads"}


class InputError(Exception):
    """Bad or missing input; exit code 1."""


class NumericalError(Exception):
    """Numerical failure; exit code 2."""


@dataclass
class Config:
    values: dict[str, str]

    def __getitem__(self, key: str) -> str:
        return self.values[key]

    def int(self, key: str) -> int:
        try:
            return int(self.values[key])
        except ValueError:
            raise InputError(f"config {key}={self.values[key]!r} is not an integer") from None

    def float(self, key: str) -> float:
        try:
            return float(self.values[key])
        except ValueError:
            raise InputError(f"config {key}={self.values[key]!r} is not a number") from None

    def bool(self, key: str) -> bool:
        v = self.values[key].strip().lower()
        if v in ("1", "true", "yes", "on"):
            return True
        if v in ("0", "false", "no", "off", ""):
            return False
        raise InputError(f"config {key}={self.values[key]!r} is not a boolean")

    def path(self, key: str, required: bool = True) -> Path | None:
        v = self.values[key]
        if not v:
            if required:
                raise InputError(f"config key {key!r} is not set")
            return None
        p = Path(v)
        if not p.exists():
            raise InputError(f"{key}: file not found: {p}")
        return p

    @property
    def out(self) -> Path:
        return Path(self.values["out"])

    @property
    def seed(self) -> int:
        return self.int("seed")

    def hash(self) -> str:
        items = sorted((k, v) for k, v in self.values.items() if k not in NON_SEMANTIC)
        return hashlib.sha256(json.dumps(items).encode()).hexdigest()[:16]

    def stamp(self) -> str:
        return f"config_hash={self.hash()} seed={self.seed}"

    def meta(self) -> dict:
        return {"config_hash": self.hash(), "seed": self.seed}

    def window_spec(self) -> WindowSpec:
        try:
            return WindowSpec.from_date(self["window_start"], self.int("window_length"), self.int("window_count"))
        except ValueError as exc:
            raise InputError(f"bad window spec: {exc}") from None


def read_config_file(path) -> dict[str, str]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            key = key.strip().replace("-", "_")
            if not sep:
                raise InputError(f"{path}:{lineno}: expected key = value")
            if key not in DEFAULTS:
                raise InputError(f"{path}:{lineno}: unknown config key {key!r}")
            out[key] = value.strip()
    return out


def resolve_config(args: argparse.Namespace) -> Config:
    values = dict(DEFAULTS)
    if args.config:
        if not Path(args.config).exists():
            raise InputError(f"config file not found: {args.config}")
        values.update(read_config_file(args.config))
    for key in DEFAULTS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = str(v)
    return Config(values)


# -- helpers ---------------------------------------------------------------------

def _write_json(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _read_json(path: Path):
    if not path.exists():
        raise InputError(f"missing upstream artifact: {path}")
    with path.open(encoding="utf-8") as fh:
        return json.load(fh)


def _need(path: Path) -> Path:
    if not path.exists():
        raise InputError(f"missing upstream artifact: {path}")
    return path


def _stage_dir(cfg: Config, name: str) -> Path:
    d = cfg.out / name
    d.mkdir(parents=True, exist_ok=True)
    return d


def _load_posts(cfg: Config):
    path = cfg.path("corpus")
    report = corpus.LoadReport(str(path))
    try:
        posts = corpus.load_corpus(path, report)
    except OSError as exc:
        raise InputError(f"cannot read corpus: {exc}") from None
    return posts, report


def _load_registry(cfg: Config) -> DomainRegistry:
    try:
        return DomainRegistry.load(cfg.path("registry"))
    except (OSError, ValueError) as exc:
        raise InputError(str(exc)) from None


def _load_text_resources(cfg: Config):
    lex_paths = [p.strip() for p in cfg["lexicon"].split(",") if p.strip()]
    try:
        if lex_paths:
            for p in lex_paths:
                if not Path(p).exists():
                    raise InputError(f"lexicon: file not found: {p}")
            lex = lexicon.load_lexicons(lex_paths)
        else:
            lex = lexicon.default_lexicon()
        rules = lexicon.load_rules(cfg.path("patterns")) if cfg["patterns"] else lexicon.default_rules()
    except (OSError, ValueError) as exc:
        raise InputError(str(exc)) from None
    missing = [c for c in features.DRIVE_CATEGORIES.values() if not lex.has(c)]
    if missing:
        raise InputError(f"lexicon lacks categories: {', '.join(missing)}")
    return lex, rules


def _read_accounts(cfg: Config) -> list[str]:
    path = _need(cfg.out / "ingest" / "accounts.txt")
    return [l.strip() for l in path.read_text(encoding="utf-8").splitlines() if l.strip() and not l.startswith("#")]


def _role_labels(cfg: Config, k: int) -> dict[int, str]:
    names = [n.strip() for n in cfg["role_labels"].split(",") if n.strip()]
    if names and len(names) != k:
        raise InputError(f"role_labels lists {len(names)} names for k={k}")
    return {i: names[i] if names else f"role{i}" for i in range(k)}


def _window_features(cfg: Config, posts, registry, accounts, lex, rules, spec):
    sliced = corpus.slice_windows(posts, spec, registry)
    eps = cfg.float("popularity_eps")
    denom = cfg["popularity_denominator"]
    if denom not in ("rest", "all"):
        raise InputError(f"popularity_denominator must be 'rest' or 'all', got {denom!r}")
    per_window = []
    for w in range(spec.window_count):
        rows = []
        for acc in accounts:
            act = sliced.activities.get((acc, w)) or corpus.AccountWindowActivity(acc, w)
            vec = features.build_feature_vector(act, lex, rules, spec, eps, denom)
            rows.append((acc, w, vec.as_array(), int(act.active)))
        per_window.append(rows)
    return per_window


# -- commands --------------------------------------------------------------------------

def cmd_ingest(cfg: Config) -> dict:
    posts, report = _load_posts(cfg)
    registry = _load_registry(cfg)
    spec = cfg.window_spec()
    sliced = corpus.slice_windows(posts, spec, registry)
    per_window = cfg.bool("per_window_threshold")
    counts = corpus.unique_extremist_link_counts(sliced.activities, per_window)
    threshold = cfg.int("min_unique_links")
    kept = sorted(corpus.apply_account_threshold(sliced.activities, threshold, per_window)) if posts else []
    window_stats = []
    for w in range(spec.window_count):
        acts = [a for (acc, win), a in sliced.activities.items() if win == w]
        window_stats.append({
            "window_index": w,
            "start": spec.boundaries()[w],
            "posts": sum(len(a.posts) for a in acts),
            "link_posts": sum(len(a.link_posts) for a in acts),
            "extremist_link_posts": sum(len(a.extremist_link_posts) for a in acts),
            "accounts": len(acts),
        })
    vals = list(counts.values())
    summary = {
        **cfg.meta(),
        "load": report.to_dict(),
        "assigned_posts": sliced.assigned,
        "dropped_posts": sliced.dropped,
        "windows": window_stats,
        "accounts_seen": len(counts),
        "accounts_with_extremist_links": sum(1 for v in vals if v > 0),
        "threshold": threshold,
        "per_window_threshold": per_window,
        "accounts_retained": len(kept),
        "unique_link_p95": corpus.percentile_cutoff([v for v in vals if v > 0], 95) if any(vals) else None,
    }
    d = _stage_dir(cfg, "ingest")
    _write_json(d / "summary.json", summary)
    with (d / "accounts.txt").open("w", encoding="utf-8") as fh:
        fh.write(f"# {cfg.stamp()}\n")
        fh.writelines(f"{a}\n" for a in kept)
    with (d / "link_counts.csv").open("w", encoding="utf-8") as fh:
        fh.write(f"# {cfg.stamp()}\naccount_id,unique_extremist_links\n")
        fh.writelines(f"{a},{counts[a]}\n" for a in sorted(counts))
    return summary


def cmd_featurize(cfg: Config) -> dict:
    lex, rules = _load_text_resources(cfg)
    accounts = _read_accounts(cfg)
    posts, _ = _load_posts(cfg)
    registry = _load_registry(cfg)
    spec = cfg.window_spec()
    d = _stage_dir(cfg, "features")
    per_window = _window_features(cfg, posts, registry, accounts, lex, rules, spec)
    out = {"windows": []}
    for w, rows in enumerate(per_window):
        features.write_feature_csv(d / f"raw_w{w}.csv", [(a, w, v, act) for a, w, v, act in rows],
                                   cfg.stamp(), extra=["active"])
        active = [v for _, _, v, act in rows if act]
        if len(active) >= 2:
            st = features.fit_standardizer(np.array(active))
        else:
            st = features.Standardizer(np.zeros(len(features.FEATURE_NAMES)), np.zeros(len(features.FEATURE_NAMES)))
        Z = st.apply(np.array([v for _, _, v, _ in rows]).reshape(-1, len(features.FEATURE_NAMES)))
        features.write_feature_csv(d / f"std_w{w}.csv",
                                   [(a, w, z, act) for (a, _, _, act), z in zip(rows, Z)],
                                   cfg.stamp(), extra=["active"])
        features.dump_standardizer(st, d / f"standardizer_w{w}.json", window_index=w, **cfg.meta())
        out["windows"].append({"window_index": w, "rows": len(rows), "active": len(active)})
    _write_json(d / "summary.json", {**cfg.meta(), **out})
    return out


def _load_window_matrix(cfg: Config, w: int, raw: bool = False):
    name = f"raw_w{w}.csv" if raw else f"std_w{w}.csv"
    ids, _, X, extra = features.read_feature_csv(_need(cfg.out / "features" / name))
    active = np.array([e.get("active", "1") == "1" for e in extra], dtype=bool)
    return ids, X, active


def cmd_cluster(cfg: Config) -> dict:
    ids, X, active = _load_window_matrix(cfg, 0)
    st = features.Standardizer.from_json(_read_json(cfg.out / "features" / "standardizer_w0.json"))
    k = cfg.int("k")
    ids = [a for a, on in zip(ids, active) if on]
    X = X[active]
    if len(X) < k:
        raise InputError(f"only {len(X)} active accounts in the first window, need k={k}")
    model, assign = clustering.kmeans_fit(X, k, seed=cfg.seed, ids=ids)
    model.standardizer = st
    model.labels = _role_labels(cfg, k)
    d = _stage_dir(cfg, "cluster")
    clustering.dump_model(model, d / "role_model.json", **cfg.meta())
    clustering.write_assignments(d / "assignments_w0.csv",
                                 [(a, 0, int(c), True) for a, c in zip(assign.account_ids, assign.labels)], cfg.stamp())
    sizes = np.bincount(assign.labels, minlength=k)
    out = {**cfg.meta(), "k": k, "accounts": len(ids), "inertia": assign.inertia,
           "role_sizes": {model.role_name(i): int(n) for i, n in enumerate(sizes)}}
    _write_json(d / "summary.json", out)
    return out


def cmd_elbow(cfg: Config) -> dict:
    ids, X, active = _load_window_matrix(cfg, 0)
    X = X[active]
    ks = range(cfg.int("elbow_k_min"), cfg.int("elbow_k_max") + 1)
    curve = clustering.elbow_scan(X, ks, seed=cfg.seed)
    d = _stage_dir(cfg, "elbow")
    with (d / "elbow.csv").open("w", encoding="utf-8") as fh:
        fh.write(f"# {cfg.stamp()}\nk,distortion,inertia\n")
        fh.writelines(f"{k},{dist!r},{inert!r}\n" for k, dist, inert in curve.points)
    out = {**cfg.meta(), "suggested_k": curve.suggested_k}
    _write_json(d / "summary.json", out)
    return out


def cmd_assign(cfg: Config) -> dict:
    model = clustering.load_model(_need(cfg.out / "cluster" / "role_model.json"))
    reuse = cfg.bool("reuse_t1_stats")
    first = {a: c for a, _, c, _ in clustering.read_assignments(_need(cfg.out / "cluster" / "assignments_w0.csv"))}
    rows = [(a, 0, c, True) for a, c in sorted(first.items())]
    spec = cfg.window_spec()
    for w in range(1, spec.window_count):
        if reuse:
            ids, X, active = _load_window_matrix(cfg, w, raw=True)
            X = model.standardizer.apply(X)
        else:
            ids, X, active = _load_window_matrix(cfg, w)
        assign = clustering.assign_to_model(X, model, ids)
        rows += [(a, w, int(c), bool(on)) for a, c, on in zip(ids, assign.labels, active) if a in first]
    d = _stage_dir(cfg, "assign")
    clustering.write_assignments(d / "assignments.csv", rows, cfg.stamp())
    out = {**cfg.meta(), "rows": len(rows), "reuse_t1_stats": reuse}
    _write_json(d / "summary.json", out)
    return out


def _load_sequences(cfg: Config, window_count: int):
    rows = clustering.read_assignments(_need(cfg.out / "assign" / "assignments.csv"))
    keep_inactive = cfg.bool("assign_inactive")
    per_window: list[dict[str, int]] = [dict() for _ in range(window_count)]
    for a, w, c, active in rows:
        if active or keep_inactive:
            per_window[w][a] = c
    return dynamics.build_sequences(per_window, window_count)


def cmd_dynamics(cfg: Config) -> dict:
    model = clustering.load_model(_need(cfg.out / "cluster" / "role_model.json"))
    spec = cfg.window_spec()
    seqs = _load_sequences(cfg, spec.window_count)
    k = model.k
    inactive_state = cfg.bool("inactive_state")
    labels = [model.role_name(i) for i in range(k)] + (["inactive"] if inactive_state else [])
    tm = dynamics.transition_matrix(seqs, k, inactive_state)
    ret = dynamics.retention_distribution(seqs, spec.window_count)
    d = _stage_dir(cfg, "dynamics")
    dynamics.write_matrix_csv(d / "transition_probabilities.csv", tm.probabilities, labels, cfg.stamp())
    dynamics.write_matrix_csv(d / "transition_counts.csv", tm.counts, labels, cfg.stamp())
    for i, step in enumerate(dynamics.transition_matrices_by_step(seqs, k, inactive_state)):
        dynamics.write_matrix_csv(d / f"transition_step{i}.csv", step.probabilities, labels, cfg.stamp())
    dynamics.write_retention_csv(d / "retention.csv", ret, dict(enumerate(labels)), cfg.stamp())
    out = {**cfg.meta(), "accounts": len(seqs), "excluded_inactive_start": ret.excluded,
           "zero_rows": [labels[i] for i in tm.zero_rows], "pairs": int(tm.counts.sum())}
    _write_json(d / "summary.json", out)
    return out


def _hawkes_kwargs(cfg: Config) -> dict:
    return {"lag_horizon": cfg.int("lag_horizon"), "max_iters": cfg.int("em_max_iters"),
            "tol": cfg.float("em_tol"), "per_pair_lag": cfg.bool("per_pair_lag")}


def cmd_hawkes(cfg: Config) -> dict:
    d = _stage_dir(cfg, "hawkes")
    kw = _hawkes_kwargs(cfg)
    series_path = cfg.path("series", required=False)
    if series_path is not None:
        series = hawkes.EventSeries.from_json(_read_json(series_path)["series"])
        try:
            fit = hawkes.fit_links([series], seed=cfg.seed, **kw)[0]
        except hawkes.HawkesError as exc:
            raise NumericalError(str(exc)) from None
        _write_json(d / "fit.json", {**cfg.meta(), **fit.to_json()})
        if not fit.converged:
            raise NumericalError(f"EM did not converge in {fit.iterations} iterations; diagnostics in {d / 'fit.json'}")
        return {**cfg.meta(), "iterations": fit.iterations, "converged": fit.converged}

    model = clustering.load_model(_need(cfg.out / "cluster" / "role_model.json"))
    roles = {a: c for a, _, c, _ in clustering.read_assignments(_need(cfg.out / "cluster" / "assignments_w0.csv"))}
    posts, _ = _load_posts(cfg)
    registry = _load_registry(cfg)
    spec = cfg.window_spec()
    edges = spec.boundaries()
    t1 = [p for p in posts if edges[0] <= p.timestamp < edges[1]]
    links = hawkes.select_links(t1, roles, registry, cfg.int("min_accounts"), cfg.int("min_roles"))
    events = hawkes.link_timestamps(t1, links, roles)
    if cfg["bin_width"]:
        bin_width = cfg.int("bin_width")
    elif links:
        gaps = hawkes.inter_arrival_times(events)
        bin_width = hawkes.choose_bin_width(gaps, cfg.float("bin_percentile")) if gaps else 1
    else:
        bin_width = 1
    series_list = [hawkes.build_event_series(u, events[u], model.k, bin_width, corpus.classify_link(u, registry))
                   for u in links]
    series_list = [s for s in series_list if s.n_events >= 2]
    try:
        fits = hawkes.fit_links(series_list, seed=cfg.seed, workers=cfg.int("threads"), **kw)
    except hawkes.HawkesError as exc:
        raise NumericalError(str(exc)) from None
    fit_dir = d / "fits"
    fit_dir.mkdir(exist_ok=True)
    for old in fit_dir.glob("*.json"):
        old.unlink()
    for f in fits:
        name = hashlib.sha256(f.link_url.encode()).hexdigest()[:16]
        _write_json(fit_dir / f"{name}.json", {**cfg.meta(), "bin_width_seconds": bin_width, **f.to_json()})
    labels = [model.role_name(i) for i in range(model.k)]
    reports = hawkes.aggregate_influence([(f.link_url, f) for f in fits], registry)
    for old in d.glob("influence_*.csv"):
        old.unlink()
    for r in reports:
        dynamics.write_matrix_csv(d / f"influence_{r.source_type.value}.csv", r.mean_normalized_weights,
                                  labels, f"{cfg.stamp()} links={r.links_fitted} events={r.events_total}")
    acct = hawkes.event_accounting(series_list, registry, model.k)
    with (d / "accounting.csv").open("w", encoding="utf-8") as fh:
        fh.write(f"# {cfg.stamp()}\n")
        fh.write("source_type,domains_labeled,domains_present,unique_links,events,"
                 + ",".join(f"pct_{l}" for l in labels) + "\n")
        for row in acct:
            fh.write(f"{row['source_type']},{row['domains_labeled']},{row['domains_present']},"
                     f"{row['unique_links']},{row['events']},"
                     + ",".join(f"{p:.2f}" for p in row["role_percent"]) + "\n")
    out = {**cfg.meta(), "bin_width_seconds": bin_width, "links_selected": len(links),
           "links_fitted": len(fits), "converged": sum(f.converged for f in fits),
           "lag_horizon": kw["lag_horizon"],
           "reports": [{"source_type": r.source_type.value, "links": r.links_fitted, "events": r.events_total}
                       for r in reports]}
    _write_json(d / "summary.json", out)
    stuck = [f.link_url for f in fits if not f.converged]
    if stuck:
        raise NumericalError(f"{len(stuck)} of {len(fits)} link fits did not converge (first: {stuck[0]}); "
                             f"per-link diagnostics in {fit_dir}")
    return out


def _parse_matrix(text: str) -> np.ndarray:
    try:
        return np.array([[float(x) for x in row.split(",")] for row in text.split(";")])
    except ValueError:
        raise InputError(f"cannot parse matrix {text!r}") from None


def cmd_simulate(cfg: Config) -> dict:
    lam = _parse_matrix(cfg["sim_background"]).ravel()
    W = _parse_matrix(cfg["sim_weights"])
    try:
        params = hawkes.HawkesParams(lam, W, hawkes.geometric_lag_pmf(cfg.float("sim_lag_p"), cfg.int("sim_lag_horizon")))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    try:
        sim = hawkes.simulate_branching(params, cfg.int("sim_bins"), cfg.seed)
    except hawkes.HawkesError as exc:
        raise NumericalError(str(exc)) from None
    d = _stage_dir(cfg, "simulate")
    _write_json(d / "series.json", {**cfg.meta(), "series": sim.series.to_json()})
    _write_json(d / "truth.json", {**cfg.meta(), **params.to_json(), "horizon_bins": cfg.int("sim_bins"),
                                   "offspring_counts": sim.offspring.tolist(),
                                   "background_events": sim.background_events.tolist()})
    return {**cfg.meta(), "events": sim.series.n_events}


def cmd_vif(cfg: Config) -> dict:
    ids, X, active = _load_window_matrix(cfg, 0, raw=True)
    X = X[active]
    try:
        v = clustering.vif(X, features.FEATURE_NAMES)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    d = _stage_dir(cfg, "vif")
    with (d / "vif.csv").open("w", encoding="utf-8") as fh:
        fh.write(f"# {cfg.stamp()}\nfeature,vif\n")
        fh.writelines(f"{n},{val!r}\n" for n, val in zip(features.FEATURE_NAMES, v))
    out = {**cfg.meta(), "max_vif": float(np.max(v))}
    _write_json(d / "summary.json", out)
    return out


def cmd_report(cfg: Config) -> dict:
    model = clustering.load_model(_need(cfg.out / "cluster" / "role_model.json"))
    ids, X, active = _load_window_matrix(cfg, 0)
    ids = [a for a, on in zip(ids, active) if on]
    X = X[active]
    first = {a: c for a, _, c, _ in clustering.read_assignments(_need(cfg.out / "cluster" / "assignments_w0.csv"))}
    km = clustering.ClusterAssignment(ids, np.array([first[a] for a in ids]))
    k = model.k
    agg = clustering.agglomerative_fit(X, k, ids)
    jac = clustering.jaccard_overlap(km, agg)
    sizes = np.bincount(km.labels, minlength=k)
    report: dict = {
        **cfg.meta(),
        "k": k,
        "role_frequencies": {model.role_name(i): float(n / len(ids)) for i, n in enumerate(sizes)},
        "silhouette": clustering.silhouette_score(X, km.labels) if len(set(km.labels.tolist())) > 1 else None,
        "agglomerative_jaccard": {model.role_name(i): s for i, s in jac.items()},
        "agglomerative_jaccard_mean": float(np.mean(list(jac.values()))),
        "agglomerative_ari": clustering.adjusted_rand_index(km.labels, agg.labels),
    }
    _, R, ract = _load_window_matrix(cfg, 0, raw=True)
    R = R[ract]
    try:
        report["vif"] = dict(zip(features.FEATURE_NAMES, clustering.vif(R, features.FEATURE_NAMES).tolist()))
    except ValueError as exc:
        report["vif"] = {"error": str(exc)}
    report["correlation"] = features.pearson_correlation(R).tolist()

    # threshold sensitivity: roles of accounts a lower threshold would add
    checks = [int(t) for t in cfg["threshold_checks"].split(",") if t.strip()]
    if checks and model.standardizer is not None:
        posts, _ = _load_posts(cfg)
        registry = _load_registry(cfg)
        lex, rules = _load_text_resources(cfg)
        spec = cfg.window_spec()
        sliced = corpus.slice_windows(posts, spec, registry)
        base = cfg.int("min_unique_links")
        added = corpus.threshold_additions(sliced.activities, base, [t for t in checks if t < base],
                                           cfg.bool("per_window_threshold"))
        sens = []
        for t, accs in sorted(added.items(), reverse=True):
            rows = []
            for acc in sorted(accs):
                act = sliced.activities.get((acc, 0))
                if act is None or not act.active:
                    continue
                v = features.build_feature_vector(act, lex, rules, spec, cfg.float("popularity_eps"),
                                                  cfg["popularity_denominator"])
                rows.append(v.as_array())
            entry = {"threshold": t, "accounts_added": len(accs), "assigned_in_first_window": len(rows)}
            if rows:
                a = clustering.assign_to_model(model.standardizer.apply(np.array(rows)), model)
                counts = np.bincount(a.labels, minlength=k)
                entry["role_share"] = {model.role_name(i): float(c / len(rows)) for i, c in enumerate(counts)}
            sens.append(entry)
        report["threshold_sensitivity"] = sens
    d = _stage_dir(cfg, "report")
    _write_json(d / "report.json", report)
    return report


COMMANDS = {
    "ingest": cmd_ingest,
    "featurize": cmd_featurize,
    "cluster": cmd_cluster,
    "elbow": cmd_elbow,
    "assign": cmd_assign,
    "dynamics": cmd_dynamics,
    "hawkes": cmd_hawkes,
    "simulate": cmd_simulate,
    "report": cmd_report,
    "vif": cmd_vif,
}
PIPELINE = ["ingest", "featurize", "cluster", "elbow", "assign", "dynamics", "hawkes", "vif", "report"]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value config file; flags override it")
    common.add_argument("-v", "--verbose", action="store_true")
    for key in DEFAULTS:
        common.add_argument("--" + key.replace("_", "-"), dest=key, default=None, metavar="VALUE")
    ap = argparse.ArgumentParser(prog="roleflow", description=__doc__.splitlines()[0], parents=[common])
    sub = ap.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=(fn.__doc__ or name).splitlines()[0])
    sub.add_parser("pipeline", parents=[common], help="run every stage in order")
    fx = sub.add_parser("make-fixture", parents=[common], help="write the synthetic fixture corpus")
    fx.add_argument("dest")
    fx.add_argument("--accounts", type=int, default=200)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        if args.command == "make-fixture":
            from .fixture import generate
            fx = generate(args.dest, args.accounts, cfg.seed if args.seed is not None else 7)
            print(json.dumps({"corpus": str(fx.corpus), "registry": str(fx.registry)}))
            return 0
        names = PIPELINE if args.command == "pipeline" else [args.command]
        for name in names:
            result = COMMANDS[name](cfg)
            if args.command != "pipeline":
                print(json.dumps(result, indent=2, sort_keys=True, default=str))
        return 0
    except InputError as exc:
        print(f"roleflow: error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"roleflow: numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
