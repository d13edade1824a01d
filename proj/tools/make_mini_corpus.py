#!/usr/bin/env python3
"""Regenerate data/mini_corpus.jsonl and data/keywords.txt.

Two synthetic topics (sports = +1, finance = -1) sharing a pool of generic
words.  Output is fully determined by the seed.
"""

import argparse
import json
import pathlib
import random

SPORTS = """goal match striker keeper league coach referee penalty season stadium
team score tournament final player midfield defender transfer fans trophy
win draw kick pitch captain injury squad""".split()

FINANCE = """market stock bond price investor bank rate inflation profit
earnings dividend shares trading fund credit debt revenue quarter growth
currency equity loan economy audit tax""".split()

COMMON = """the a of and to in on for with by this that was is after before
report today week said new year people time group city local plan early
late strong high low big long report news""".split()

KEYWORDS = ["goal", "match", "striker", "league", "coach", "referee",
            "penalty", "stadium", "tournament", "trophy"]


def document(rng, label):
    own, other = (SPORTS, FINANCE) if label > 0 else (FINANCE, SPORTS)
    n = rng.randint(18, 34)
    topical = rng.uniform(0.15, 0.45)
    crossover = rng.uniform(0.0, 0.12)
    words = []
    for _ in range(n):
        u = rng.random()
        if u < topical:
            words.append(rng.choice(own))
        elif u < topical + crossover:
            words.append(rng.choice(other))
        else:
            words.append(rng.choice(COMMON))
    return " ".join(words)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=2020)
    ap.add_argument("--out", type=pathlib.Path,
                    default=pathlib.Path(__file__).resolve().parent.parent / "data")
    ap.add_argument("--prior", type=float, default=0.3)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    sizes = {"train": 240, "validation": 80, "test": 80}
    rows = []
    for split, n in sizes.items():
        n_pos = round(args.prior * n)
        labels = [1] * n_pos + [-1] * (n - n_pos)
        rng.shuffle(labels)
        for i, y in enumerate(labels):
            rows.append({"id": f"{split}-{i:03d}", "text": document(rng, y),
                         "label": y, "split": split})

    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "mini_corpus.jsonl", "w", encoding="utf-8") as f:
        for r in rows:
            f.write(json.dumps(r) + "\n")
    with open(args.out / "keywords.txt", "w", encoding="utf-8") as f:
        f.write("# relevant keywords for the positive (sports) topic\n")
        f.write("\n".join(KEYWORDS) + "\n")


if __name__ == "__main__":
    main()
