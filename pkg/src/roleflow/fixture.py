"""Deterministic synthetic corpus for pipeline tests and demos.

Accounts follow one of five behavioural profiles (loosely: educator,
solicitor, flamer, motivator, sympathizer), may drift between profiles from
one window to the next, and in the first window share a set of cascade
links that spread across accounts within minutes.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import PostRecord, WindowSpec, write_corpus

START = "2018-01-01"

EXTREMIST = ["vdare.com", "adflegal.org", "sites.google.com/site/newblackliberationinstitute",
             "hatewatchfront.org", "whitepride-news.net", "nationalfront-usa.org", "anti-islam-watch.com",
             "familyvaluesfirst.org", "borderguardians.net", "heritagefront.com", "purity-league.org",
             "truthnation-alliance.org"]
BIASED = ["rightwingdaily.com", "partisanpost.net", "spinreport.org", "slantednews.com"]
FAKE = ["totallyrealnews.com", "breaking-truths.net", "fakestream.info"]
CONSPIRACY = ["hiddenhand.org", "chemtrailwatch.net", "deepstate-exposed.com"]
OTHER = ["example-news.com", "weather.example.org", "sportsdaily.example.com", "recipes.example.net"]

PROFILES = ["educator", "solicitor", "flamer", "motivator", "sympathizer"]

SENTENCES = {
    "educator": ["Read this report on the history of the movement.", "New research on the crisis facing the nation.",
                 "A detailed guide explaining the facts.", "Learn about the failure of current policy.",
                 "Important background on the threat to our heritage."],
    "solicitor": ["Please donate to keep this work going.", "Sign the petition before Friday.",
                  "Will you sign this petition today?", "Contact us to volunteer at the rally.",
                  "Your wonderful donation makes a difference.", "You should call your senator now."],
    "flamer": ["This makes me so angry.", "They resent everything we stand for and argue endlessly.",
               "Outrageous and angry news from today.", "Absolute disgrace, angry people everywhere.",
               "The danger is real and nobody listens."],
    "motivator": ["I believe we can change this policy.", "We don't think the courts are fair.",
                  "They should restore justice and equality.", "My strong opinion is that we will win.",
                  "We are hopeful about the reward for our ability to attain change.",
                  "Trump should fix this now."],
    "sympathizer": ["Interesting article.", "Worth a look.", "Sharing this for later.", "Saw this earlier today.",
                    "Some news from the week."],
}
NEUTRAL = ["Happy birthday to our friend.", "Nice weather at the lake today.", "Photos from the weekend.",
           "Great game last night.", "Recipe of the day."]

# per profile: extremist share of link posts, posts per window, extremist-likes multiplier, trend
BEHAVIOUR = {
    "educator": (0.75, 22, 1.0, 0.0),
    "solicitor": (0.45, 16, 1.5, 0.0),
    "flamer": (0.35, 16, 4.0, 1.0),
    "motivator": (0.40, 14, 1.0, -1.0),
    "sympathizer": (0.22, 18, 0.6, 0.0),
}
# weights over the initial profile of each account
PROFILE_WEIGHTS = [0.20, 0.12, 0.18, 0.20, 0.30]
STAY = {"educator": 0.8, "solicitor": 0.85, "flamer": 0.55, "motivator": 0.6, "sympathizer": 0.75}


@dataclass
class Fixture:
    corpus: Path
    registry: Path
    profiles: dict[str, list[str]]


def _url(rng, domain, pool=400):
    return f"https://www.{domain}/article/{int(rng.integers(pool))}" if "/" not in domain else \
        f"https://{domain}/page{int(rng.integers(pool))}"


def generate(out_dir, n_accounts: int = 200, seed: int = 7, n_cascades: int = 40) -> Fixture:
    rng = np.random.default_rng(seed)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    spec = WindowSpec.from_date(START)
    edges = spec.boundaries()

    with (out / "registry.tsv").open("w", encoding="utf-8") as fh:
        for doms, st in ((EXTREMIST, "extremist"), (BIASED, "biased"), (FAKE, "fake"), (CONSPIRACY, "conspiracy")):
            for d in doms:
                fh.write(f"{d}\t{st}\n")

    accounts = [f"acct{i:03d}" for i in range(n_accounts)]
    profiles: dict[str, list[str]] = {}
    posts: list[PostRecord] = []
    pid = 0

    def add(acc, ts, text, links, likes, shares, comments):
        nonlocal pid
        posts.append(PostRecord(f"p{pid:06d}", acc, int(ts), text, tuple(links), int(likes), int(shares), int(comments)))
        pid += 1

    for i, acc in enumerate(accounts):
        prof = PROFILES[int(rng.choice(5, p=PROFILE_WEIGHTS))]
        seq = []
        # a few low-activity accounts fall below the selection threshold
        sparse = i % 25 == 24
        for w in range(spec.window_count):
            if w > 0 and rng.random() > STAY[prof]:
                prof = PROFILES[int(rng.choice(5, p=PROFILE_WEIGHTS))]
            seq.append(prof)
            share, n_posts, like_mult, trend = BEHAVIOUR[prof]
            if sparse:
                n_posts = 3
            months = spec.month_edges(w)
            weights = np.maximum(0.2, 1 + trend * (np.arange(6) - 2.5) / 2.5)
            month_of = rng.choice(6, size=n_posts, p=weights / weights.sum())
            base_likes = rng.uniform(5, 40)
            for m in month_of:
                ts = rng.integers(months[m], months[m + 1])
                if rng.random() < 0.15:
                    add(acc, ts, str(rng.choice(NEUTRAL)), [], rng.poisson(base_likes), rng.poisson(2), rng.poisson(3))
                    continue
                is_ext = rng.random() < share
                if is_ext:
                    link = _url(rng, str(rng.choice(EXTREMIST)))
                    text = " ".join(rng.choice(SENTENCES[prof], size=int(rng.integers(1, 3)), replace=False))
                    mult = like_mult
                else:
                    pool = BIASED + FAKE + CONSPIRACY + OTHER * 3
                    link = _url(rng, str(rng.choice(pool)))
                    text = str(rng.choice(NEUTRAL + SENTENCES["sympathizer"]))
                    mult = 1.0
                add(acc, ts, text, [link], rng.poisson(base_likes * mult), rng.poisson(3 * mult),
                    rng.poisson(4 * mult))
        profiles[acc] = seq

    # cascades in the first window: one link spreading over many accounts
    t1_start, t1_end = edges[0], edges[1]
    active = [a for i, a in enumerate(accounts) if i % 25 != 24]
    for c in range(n_cascades):
        doms = [EXTREMIST, BIASED, FAKE, CONSPIRACY][c % 4]
        url = f"https://{doms[c % len(doms)]}/cascade/{c}"
        n_share = int(rng.integers(12, 26))
        who = rng.choice(active, size=n_share, replace=False)
        t = int(rng.integers(t1_start, t1_end - 10 * 86400))
        for j, acc in enumerate(who):
            if j:
                t += int(rng.choice([rng.integers(5, 90), rng.exponential(1800) + 1], p=[0.4, 0.6]))
            prof = profiles[acc][0]
            add(acc, t, str(rng.choice(SENTENCES[prof])), [url], rng.poisson(20), rng.poisson(3), rng.poisson(4))

    posts.sort(key=lambda p: (p.timestamp, p.post_id))
    write_corpus(posts, out / "corpus.jsonl")
    return Fixture(out / "corpus.jsonl", out / "registry.tsv", profiles)


def main(argv=None):
    ap = argparse.ArgumentParser(description="write the synthetic fixture corpus and registry")
    ap.add_argument("out")
    ap.add_argument("--accounts", type=int, default=200)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args(argv)
    fx = generate(args.out, args.accounts, args.seed)
    print(fx.corpus)
    print(fx.registry)


if __name__ == "__main__":
    main()
