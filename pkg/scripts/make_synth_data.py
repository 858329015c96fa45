#!/usr/bin/env python3
"""Generate the bundled synthetic demo/test data under data/synth/.

A small canonical vocabulary, 20 deterministic noisy->canonical replacement
pairs (two of them one-to-many), 200 training utterances in which every pair
occurs at least 5 times, a held-out set drawn from the same distribution,
random embeddings in which each noisy form sits near its canonical form, and
raw text files for the two n-gram models. Fully deterministic.
"""

import os
import random
import sys

VOCAB = [
    "about", "after", "again", "away", "back", "because", "been", "before",
    "being", "best", "better", "call", "come", "could", "down", "every",
    "first", "friend", "from", "going", "good", "great", "have", "home",
    "just", "know", "later", "laughing", "like", "little", "look", "loud",
    "love", "make", "more", "much", "never", "night", "only", "other",
    "out", "over", "people", "really", "right", "school", "some", "something",
    "take", "than", "that", "them", "then", "there", "they", "think", "time",
    "to", "today", "tomorrow", "trouble", "very", "want", "week", "well",
    "were", "what", "when", "will", "with", "work", "would", "you", "your",
]

PAIRS = {
    "abt": "about",
    "agn": "again",
    "bc": "because",
    "b4": "before",
    "bein": "being",
    "cld": "could",
    "evry": "every",
    "frnd": "friend",
    "gd": "good",
    "gr8": "great",
    "hv": "have",
    "lil": "little",
    "lol": "laughing out loud",
    "ppl": "people",
    "rly": "really",
    "sumthn": "something",
    "thnk": "think",
    "2mr": "tomorrow",
    "gonna": "going to",
    "u": "you",
}


def make_utterances(rng, count, min_pair_occurrences=0):
    """Utterances of 5-8 tokens; ~30% of slots carry a noisy pair token."""
    pair_keys = sorted(PAIRS)
    quota = {k: min_pair_occurrences for k in pair_keys}
    utterances = []
    for _ in range(count):
        length = rng.randint(5, 8)
        tokens = []
        for _ in range(length):
            pending = [k for k, q in quota.items() if q > 0]
            if pending and rng.random() < 0.5:
                raw = rng.choice(pending)
                quota[raw] -= 1
                tokens.append((raw, PAIRS[raw]))
            elif rng.random() < 0.3:
                raw = rng.choice(pair_keys)
                tokens.append((raw, PAIRS[raw]))
            else:
                w = rng.choice(VOCAB)
                tokens.append((w, w))
        utterances.append(tokens)
    assert all(q <= 0 for q in quota.values()), "pair quota not met; increase count"
    return utterances


def write_vertical(utterances, path):
    with open(path, "w", encoding="utf-8") as fh:
        for i, utt in enumerate(utterances):
            if i:
                fh.write("\n")
            for raw, gold in utt:
                fh.write(f"{raw}\t{gold}\n")


def write_embeddings(path, rng, dim=8):
    words = sorted(set(VOCAB))
    vecs = {w: [rng.gauss(0, 1) for _ in range(dim)] for w in words}
    for noisy, gold in sorted(PAIRS.items()):
        base = vecs[gold.split(" ")[0]]
        vecs[noisy] = [v + rng.gauss(0, 0.1) for v in base]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(vecs)} {dim}\n")
        for w in sorted(vecs):
            fh.write(w + " " + " ".join(f"{v:.6f}" for v in vecs[w]) + "\n")


def write_raw(path, rng, count, noisy):
    pair_keys = sorted(PAIRS)
    with open(path, "w", encoding="utf-8") as fh:
        for _ in range(count):
            length = rng.randint(4, 10)
            tokens = []
            for _ in range(length):
                if noisy and rng.random() < 0.3:
                    tokens.append(rng.choice(pair_keys))
                else:
                    tokens.append(rng.choice(VOCAB))
            fh.write(" ".join(tokens) + "\n")


def main(out_dir):
    os.makedirs(out_dir, exist_ok=True)
    write_vertical(make_utterances(random.Random(42), 200, min_pair_occurrences=5),
                   os.path.join(out_dir, "train.norm"))
    write_vertical(make_utterances(random.Random(7), 60),
                   os.path.join(out_dir, "heldout.norm"))
    with open(os.path.join(out_dir, "dictionary.txt"), "w", encoding="utf-8") as fh:
        fh.write("\n".join(sorted(VOCAB)) + "\n")
    write_embeddings(os.path.join(out_dir, "embeddings.vec"), random.Random(13))
    write_raw(os.path.join(out_dir, "noisy.txt"), random.Random(21), 400, noisy=True)
    write_raw(os.path.join(out_dir, "canonical.txt"), random.Random(22), 400, noisy=False)
    print(f"wrote synthetic data to {out_dir}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data", "synth"))
