#!/usr/bin/env python3
"""Regenerate the bundled synthetic corpus used by the quickstart and tests.

The two classes draw from disjoint vocabularies, so any reasonable model
separates them perfectly; that makes the fixture a strong end-to-end sanity
check with a known expected accuracy of 1.0.
"""

import argparse
import csv
import random
from pathlib import Path

LEGIT_WORDS = [
    "meeting", "agenda", "quarterly", "report", "timeline", "budget",
    "review", "schedule", "minutes", "presentation", "deadline", "team",
]
PHISH_WORDS = [
    "winner", "prize", "claim", "urgent", "verify", "suspended",
    "lottery", "bitcoin", "refund", "unlock", "expires", "bonus",
]


def make_rows(n_per_class: int, seed: int) -> list[tuple[str, int]]:
    rng = random.Random(seed)
    rows = []
    for label, words in ((0, LEGIT_WORDS), (1, PHISH_WORDS)):
        for _ in range(n_per_class):
            body = " ".join(rng.choice(words) for _ in range(rng.randint(6, 14)))
            rows.append((body, label))
    rng.shuffle(rows)
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("data/synthetic_emails.csv"))
    ap.add_argument("--per-class", type=int, default=100)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    args.out.parent.mkdir(parents=True, exist_ok=True)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["text", "label"])
        writer.writerows(make_rows(args.per_class, args.seed))
    print(f"wrote {2 * args.per_class} rows to {args.out}")


if __name__ == "__main__":
    main()
