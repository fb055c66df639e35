"""Derive emoji valences from the bundled emoji descriptions.

Each emoji's valence is the sum of the word valences of its description
(e.g. "smiling face with heart-eyes"), clipped to [-4, 4]. Emojis whose
description carries no lexicon word are left out.

    python scripts/build_emoji_lexicon.py > src/maskshift/data/emoji_lexicon.tsv
"""
import re
import sys
from pathlib import Path

# descriptions of these carry no lexicon word but the emoji is clearly valenced
MANUAL = {
    "\U0001F44D": 1.5,   # thumbs up
    "\U0001F44E": -1.5,  # thumbs down
    "\U0001F621": -2.5,  # pouting face
    "\U0001F620": -2.3,  # angry face
    "\U0001F92C": -3.0,  # face with symbols on mouth
    "\U0001F644": -1.0,  # face with rolling eyes
    "\U0001F92E": -2.5,  # face vomiting
    "\U0001F64F": 1.0,   # folded hands
}

DATA = Path(__file__).resolve().parents[1] / "src" / "maskshift" / "data"


def main():
    words = {}
    for line in (DATA / "vader_lexicon.tsv").read_text(encoding="utf-8").splitlines():
        cols = line.split("\t")
        if len(cols) >= 2:
            words[cols[0].lower()] = float(cols[1])
    out = sys.stdout
    for line in (DATA / "emoji_descriptions.tsv").read_text(encoding="utf-8").splitlines():
        emoji, _, desc = line.partition("\t")
        if len(emoji) != 1:
            continue
        hits = [words[w] for w in re.findall(r"[a-z]+", desc.lower()) if w in words]
        if emoji in MANUAL:
            hits = [MANUAL[emoji]]
        if hits:
            val = max(-4.0, min(4.0, sum(hits)))
            out.write(f"{emoji}\t{val:.3f}\t{desc}\n")


if __name__ == "__main__":
    main()
