"""The 13-dimensional account feature vector and its standardization."""

from __future__ import annotations

import csv
import json
from dataclasses import astuple, dataclass, fields
from typing import Sequence

import numpy as np

from .corpus import AccountWindowActivity, WindowSpec
from .lexicon import Lexicon, PatternRule, category_counts, strategy_flags

FEATURE_NAMES = (
    "injustice", "achievement", "group_identity", "anger", "risk", "reward",
    "extremist_link_proportion", "likes_ratio", "shares_ratio", "comments_ratio",
    "trend", "opinions", "solicitation",
)

# feature name -> lexicon category
DRIVE_CATEGORIES = {
    "injustice": "fairness",
    "achievement": "achieve",
    "group_identity": "we",
    "anger": "anger",
    "risk": "risk",
    "reward": "reward",
}


@dataclass(frozen=True)
class FeatureVector:
    injustice: float
    achievement: float
    group_identity: float
    anger: float
    risk: float
    reward: float
    extremist_link_proportion: float
    likes_ratio: float
    shares_ratio: float
    comments_ratio: float
    trend: float
    opinions: float
    solicitation: float

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)

    @classmethod
    def from_array(cls, values) -> "FeatureVector":
        values = [float(v) for v in values]
        if len(values) != len(FEATURE_NAMES):
            raise ValueError(f"expected {len(FEATURE_NAMES)} values, got {len(values)}")
        return cls(*values)


assert tuple(f.name for f in fields(FeatureVector)) == FEATURE_NAMES


def drive_features(activity: AccountWindowActivity, lexicon: Lexicon,
                   categories: dict[str, str] = DRIVE_CATEGORIES) -> list[float]:
    """Lexicon proportions pooled over all extremist link posts in the window."""
    cats = list(categories.values())
    hits, total = np.zeros(len(cats)), 0
    for post in activity.extremist_link_posts:
        c, n = category_counts(post.text, lexicon, cats)
        hits += c
        total += n
    if total == 0:
        return [0.0] * len(cats)
    return list(hits / total)


def extremist_link_proportion(activity: AccountWindowActivity) -> float:
    if not activity.link_posts:
        return 0.0
    return len(activity.extremist_link_posts) / len(activity.link_posts)


def popularity_ratios(activity: AccountWindowActivity, eps: float = 1.0,
                      denominator: str = "rest") -> list[float]:
    """Smoothed ratio of mean likes, shares, comments on extremist vs other link posts.

    ``denominator="all"`` compares against every link post instead of the
    non-extremist rest. Returns 1.0 per reaction when either side is empty.
    """
    if denominator not in ("rest", "all"):
        raise ValueError(f"unknown denominator {denominator!r}")
    ext = activity.extremist_link_posts
    ids = {p.post_id for p in ext}
    other = activity.link_posts if denominator == "all" else [p for p in activity.link_posts if p.post_id not in ids]
    if not ext or not other:
        return [1.0, 1.0, 1.0]
    out = []
    for attr in ("likes", "shares", "comments"):
        num = np.mean([getattr(p, attr) for p in ext]) + eps
        den = np.mean([getattr(p, attr) for p in other]) + eps
        out.append(float(num / den) if den > 0 else 1.0)
    return out


def ols_slope(counts: Sequence[float]) -> float:
    """Least-squares slope of ``counts`` against 1..m."""
    y = np.asarray(counts, dtype=float)
    m = len(y)
    if m < 2:
        raise ValueError("trend needs at least two months")
    x = np.arange(1, m + 1, dtype=float)
    xc = x - x.mean()
    return float(np.dot(xc, y - y.mean()) / np.dot(xc, xc))


def monthly_counts(activity: AccountWindowActivity, spec: WindowSpec) -> list[int]:
    edges = spec.month_edges(activity.window_index)
    ts = [p.timestamp for p in activity.extremist_link_posts]
    counts, _ = np.histogram(ts, bins=edges) if ts else (np.zeros(len(edges) - 1, dtype=int), None)
    return [int(c) for c in counts]


def monthly_trend(activity: AccountWindowActivity, spec: WindowSpec) -> float:
    if spec.window_length < 2:
        raise ValueError("trend needs a window of at least two calendar months")
    return ols_slope(monthly_counts(activity, spec))


def strategy_proportions(activity: AccountWindowActivity, rules: Sequence[PatternRule],
                         lexicon: Lexicon | None = None) -> list[float]:
    posts = activity.extremist_link_posts
    if not posts:
        return [0.0, 0.0]
    flags = np.array([strategy_flags(p.text, rules, lexicon) for p in posts], dtype=float)
    return list(flags.mean(axis=0))


def build_feature_vector(activity: AccountWindowActivity, lexicon: Lexicon,
                         rules: Sequence[PatternRule], spec: WindowSpec,
                         eps: float = 1.0, denominator: str = "rest") -> FeatureVector:
    return FeatureVector(
        *drive_features(activity, lexicon),
        extremist_link_proportion(activity),
        *popularity_ratios(activity, eps, denominator),
        monthly_trend(activity, spec),
        *strategy_proportions(activity, rules, lexicon),
    )


@dataclass
class Standardizer:
    means: np.ndarray
    stds: np.ndarray

    def apply(self, vectors) -> np.ndarray:
        return apply_standardizer(vectors, self)

    def to_json(self) -> dict:
        return {"features": list(FEATURE_NAMES[:len(self.means)]),
                "means": [float(v) for v in self.means], "stds": [float(v) for v in self.stds]}

    @classmethod
    def from_json(cls, d) -> "Standardizer":
        return cls(np.asarray(d["means"], dtype=float), np.asarray(d["stds"], dtype=float))


def _matrix(vectors) -> np.ndarray:
    if len(vectors) and isinstance(vectors[0], FeatureVector):
        return np.array([v.as_array() for v in vectors])
    return np.atleast_2d(np.asarray(vectors, dtype=float))


def fit_standardizer(vectors) -> Standardizer:
    """Population mean and standard deviation per dimension.

    Zero-variance dimensions keep ``std = 0`` and standardize to 0.
    """
    X = _matrix(vectors)
    if X.shape[0] < 2:
        raise ValueError("standardizer needs at least two vectors")
    return Standardizer(X.mean(axis=0), X.std(axis=0))


def apply_standardizer(vectors, s: Standardizer) -> np.ndarray:
    X = _matrix(vectors)
    if X.shape[1] != len(s.means):
        raise ValueError(f"dimension mismatch: {X.shape[1]} vs {len(s.means)}")
    centered = X - s.means
    return np.divide(centered, s.stds, out=np.zeros_like(centered), where=s.stds > 0)


def pearson_correlation(X) -> np.ndarray:
    """Pairwise Pearson correlations; constant dimensions correlate 0 with the rest."""
    X = np.asarray(X, dtype=float)
    Z = apply_standardizer(X, fit_standardizer(X))
    C = Z.T @ Z / X.shape[0]
    C = np.clip((C + C.T) / 2, -1.0, 1.0)
    const = X.std(axis=0) == 0
    np.fill_diagonal(C, np.where(const, 0.0, 1.0))
    return C


# -- CSV / JSON plumbing ------------------------------------------------------------

def write_feature_csv(path, rows: Sequence[tuple[str, int, Sequence[float]]], header_comment: str | None = None,
                      extra: Sequence[str] = ()) -> None:
    """Rows are (account_id, window_index, values[, *extra_values])."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if header_comment:
            fh.write(f"# {header_comment}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["account_id", "window_index", *FEATURE_NAMES, *extra])
        for acc, win, values, *rest in rows:
            w.writerow([acc, win, *(repr(float(v)) for v in values), *rest])


def read_feature_csv(path) -> tuple[list[str], list[int], np.ndarray, list[dict]]:
    ids, wins, X, extras = [], [], [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(line for line in fh if not line.startswith("#"))
        for row in reader:
            ids.append(row["account_id"])
            wins.append(int(row["window_index"]))
            X.append([float(row[n]) for n in FEATURE_NAMES])
            extras.append({k: v for k, v in row.items() if k not in FEATURE_NAMES
                           and k not in ("account_id", "window_index")})
    return ids, wins, np.array(X, dtype=float).reshape(-1, len(FEATURE_NAMES)), extras


def dump_standardizer(s: Standardizer, path, **meta) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({**meta, **s.to_json()}, fh, indent=2, sort_keys=True)
