#!/usr/bin/env python3
"""Recomputes the golden files under tests/golden from the bundled data.

This is a deliberately separate implementation of the word -> IPA -> viseme
pipeline so the C++ tests have something independent to compare against.
"""
import json
import re
import sys
from pathlib import Path

root = Path(__file__).resolve().parents[2]
data = root / "data"
out = root / "tests" / "golden"


def records(path):
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            yield line.split()


tables = {"en": {}, "cmn": {}}
for lang, phoneme, viseme in records(data / "viseme_tables.txt"):
    tables[lang][phoneme] = viseme
used = {lang: set(t.values()) for lang, t in tables.items()}


def render(base):
    if base in used["en"] and base in used["cmn"]:
        return base
    return base + ("_E" if base in used["en"] else "_M")


def lexicon(path):
    return {f[0].upper(): f[1:] for f in records(path)}


def mandarin_key(word):
    return re.sub(r"[1-5]", "", word).upper().replace("Ü", "V").replace("U:", "V")


lex = {"en": lexicon(data / "english_lexicon.txt"), "cmn": lexicon(data / "mandarin_lexicon.txt")}
lists = {"en": data / "lrw_words.txt", "cmn": data / "lrw1000_words.txt"}

summary = {}
for lang, path in lists.items():
    lines = []
    counts = {}
    half = 0
    for word, count in records(path):
        key = word.upper() if lang == "en" else mandarin_key(word)
        labels = [render(tables[lang][p]) for p in lex[lang][key]]
        lines.append(word + "\t" + " ".join(labels))
        for label in labels:
            counts[label] = counts.get(label, 0) + int(count)
        half += max(1, int(count) // 2)
    (out / f"{lang}_visemes.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    classes = {"Common": 0, "EnglishOnly": 0, "MandarinOnly": 0}
    for label, n in counts.items():
        cls = "EnglishOnly" if label.endswith("_E") else "MandarinOnly" if label.endswith("_M") else "Common"
        classes[cls] += n
    summary[lang] = {
        "words": len(lines),
        "inventory_size": len({render(v) for v in used[lang]}),
        "class_totals": classes,
        "half_split_samples": half,
    }

summary["merged_inventory_size"] = len({render(v) for v in used["en"] | used["cmn"]})
(out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
json.dump(summary, sys.stdout, indent=2, sort_keys=True)
print()
