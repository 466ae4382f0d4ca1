#!/usr/bin/env python3
"""Rebuild data/pos_lexicon.tsv and data/polarity.tsv.

Sources (MIT licensed, fetched with `pip download --no-deps textblob vaderSentiment wordfreq`
and unpacked into SRC):
  textblob/en/en-lexicon.txt        Brill tagger lexicon, most-frequent Penn tag first
  vaderSentiment/vader_lexicon.txt  mean valence per token
  wordfreq/data/small_en.msgpack.gz frequency-bucketed English word list

usage: make_lexicons.py SRC OUT_DIR
"""
import gzip
import re
import sys

import msgpack

POS_SIZE = 5000
WORD = re.compile(r"[a-z][a-z']*")

# Penn Treebank tag -> coarse tag
COARSE = {
    "NN": "NOUN", "NNS": "NOUN", "NNP": "NOUN", "NNPS": "NOUN",
    "VB": "VERB", "VBD": "VERB", "VBG": "VERB", "VBN": "VERB", "VBP": "VERB", "VBZ": "VERB",
    "JJ": "ADJ", "JJR": "ADJ", "JJS": "ADJ",
    "RB": "ADV", "RBR": "ADV", "RBS": "ADV",
}

# Brill's majority tag is wrong for tweet text on these.
OVERRIDES = {"drives": "VERB", "rides": "VERB", "crashes": "VERB", "tweets": "NOUN"}


def main(src, out):
    buckets = msgpack.load(gzip.open(f"{src}/wordfreq/data/small_en.msgpack.gz"), raw=False)
    ranked = [w for b in buckets[1:] for w in b if WORD.fullmatch(w)]

    brill = {}
    for line in open(f"{src}/textblob/en/en-lexicon.txt", encoding="utf-8"):
        if line.startswith(";;;"):
            continue
        parts = line.split()
        if len(parts) < 2:
            continue
        word, tag = parts[0], parts[1]
        low = word.lower()
        # lowercase spelling wins over a capitalised one
        if low not in brill or word == low:
            brill[low] = tag

    pos = []
    for w in ranked:
        if w in brill:
            pos.append((w, OVERRIDES.get(w, COARSE.get(brill[w], "OTHER"))))
        if len(pos) == POS_SIZE:
            break
    with open(f"{out}/pos_lexicon.tsv", "w", encoding="utf-8") as f:
        f.write("# word<TAB>tag, tag in {NOUN,VERB,ADJ,ADV,OTHER}\n")
        f.write("# Brill lexicon majority tags, 5000 most frequent English words\n")
        for w, t in sorted(pos):
            f.write(f"{w}\t{t}\n")

    common = set(ranked)
    polar = []
    for line in open(f"{src}/vaderSentiment/vader_lexicon.txt", encoding="utf-8"):
        parts = line.rstrip("\n").split("\t")
        word, valence = parts[0], float(parts[1])
        if WORD.fullmatch(word) and word in common and abs(valence) >= 1.0:
            polar.append((word, "+1" if valence > 0 else "-1"))
    with open(f"{out}/polarity.tsv", "w", encoding="utf-8") as f:
        f.write("# word<TAB>polarity, polarity in {+1,0,-1}\n")
        f.write("# VADER mean valence |v| >= 1.0, restricted to common English words\n")
        for w, p in sorted(polar):
            f.write(f"{w}\t{p}\n")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
