#!/usr/bin/env python3
"""Regenerate the bundled lemmatizer data files from a WordNet 3.0 dict directory.

Reads index.noun, index.verb, noun.exc and verb.exc and writes the three
TSV assets shipped with the package:

    lemma_index.tsv             word<TAB>pos   (pos is "noun" or "verb")
    lemma_exceptions_noun.tsv   inflected<TAB>lemma
    lemma_exceptions_verb.tsv   inflected<TAB>lemma

Only purely alphabetic lowercase entries are kept: the normalization
pipeline can never produce a token containing digits, underscores or
punctuation, so collocation entries ("take_off") and numeric entries
(".22") are unreachable and would only bloat the package.
"""

import argparse
import re
from pathlib import Path

WORD = re.compile(r"^[a-z]+$")


def read_index_words(path: Path) -> list[str]:
    words = []
    with open(path, encoding="ascii") as fh:
        for line in fh:
            if line.startswith(" "):  # license preamble
                continue
            lemma = line.split(" ", 1)[0]
            if WORD.match(lemma):
                words.append(lemma)
    return words


def read_exceptions(path: Path) -> list[tuple[str, str]]:
    pairs = []
    with open(path, encoding="ascii") as fh:
        for line in fh:
            fields = line.split()
            if len(fields) < 2 or not WORD.match(fields[0]):
                continue
            for lemma in fields[1:]:
                if WORD.match(lemma):
                    pairs.append((fields[0], lemma))
    return pairs


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dict-dir", required=True, type=Path,
                    help="WordNet 3.0 'dict' directory")
    ap.add_argument("--out-dir", required=True, type=Path,
                    help="package assets directory")
    args = ap.parse_args()

    index_lines = []
    for pos, filename in (("noun", "index.noun"), ("verb", "index.verb")):
        for word in read_index_words(args.dict_dir / filename):
            index_lines.append(f"{word}\t{pos}\n")
    index_lines.sort()

    args.out_dir.mkdir(parents=True, exist_ok=True)
    (args.out_dir / "lemma_index.tsv").write_text("".join(index_lines))

    for pos in ("noun", "verb"):
        pairs = read_exceptions(args.dict_dir / f"{pos}.exc")
        out = "".join(f"{form}\t{lemma}\n" for form, lemma in pairs)
        (args.out_dir / f"lemma_exceptions_{pos}.tsv").write_text(out)

    print(f"index entries: {len(index_lines)}")


if __name__ == "__main__":
    main()
