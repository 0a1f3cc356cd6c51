#!/usr/bin/env python3
"""Regenerates the frozen word lists and lexicons under data/.

Run once offline; the C++ build only consumes the generated text files.

  pip install cmudict pypinyin jieba
  python3 tools/datagen/generate_bundled_data.py --out data

English pronunciations come from CMUdict (ARPAbet), rewritten to a
non-rhotic British-style IPA inventory. Mandarin word classes are the most
frequent two-character words in the jieba dictionary, romanised with
pypinyin and expanded to IPA by a syllable table.
"""

import argparse
import os
import re

import cmudict
import jieba
from pypinyin import Style, lazy_pinyin

HERE = os.path.dirname(os.path.abspath(__file__))

ENGLISH_SAMPLES_PER_WORD = 8
MANDARIN_SAMPLES_PER_WORD = 4
MANDARIN_CLASSES = 1000

ARPA_CONSONANTS = {
    "B": "b", "CH": "t͡ʃ", "D": "d", "DH": "ð", "F": "f", "G": "ɡ", "HH": "h",
    "JH": "d͡ʒ", "K": "k", "L": "l", "M": "m", "N": "n", "NG": "ŋ", "P": "p",
    "R": "ɹ", "S": "s", "SH": "ʃ", "T": "t", "TH": "θ", "V": "v", "W": "w",
    "Y": "j", "Z": "z", "ZH": "ʒ",
}

ARPA_VOWELS = {
    "AE": "æ", "AW": "aʊ", "AY": "aɪ", "EH": "e", "EY": "eɪ", "IH": "ɪ",
    "IY": "iː", "OW": "əʊ", "OY": "ɔɪ", "UH": "ʊ", "UW": "uː", "AO": "ɔː",
}


def arpabet_to_british(phones):
    out = []
    for i, ph in enumerate(phones):
        base = ph.rstrip("012")
        stress = ph[len(base):]
        nxt = phones[i + 1].rstrip("012") if i + 1 < len(phones) else None
        next_is_vowel = nxt is not None and (nxt in ARPA_VOWELS or nxt in ("AA", "AH", "ER"))
        if base == "R":
            # non-rhotic: /r/ only before a vowel
            if next_is_vowel:
                out.append("ɹ")
            continue
        if base in ARPA_CONSONANTS:
            out.append(ARPA_CONSONANTS[base])
        elif base == "AA":
            out.append("ɑː" if nxt == "R" else "ɒ")
        elif base == "AH":
            out.append("ə" if stress == "0" else "ʌ")
        elif base == "ER":
            out.append("ə" if stress == "0" else "ɜː")
        elif base in ARPA_VOWELS:
            out.append(ARPA_VOWELS[base])
        else:
            raise ValueError(f"unknown ARPAbet symbol {ph}")
    return out


INITIALS = [
    ("zh", ["ʈʂ"]), ("ch", ["ʈʂʰ"]), ("sh", ["ʂ"]),
    ("b", ["p"]), ("p", ["pʰ"]), ("m", ["m"]), ("f", ["f"]),
    ("d", ["t"]), ("t", ["tʰ"]), ("n", ["n"]), ("l", ["l"]),
    ("g", ["k"]), ("k", ["kʰ"]), ("h", ["x"]),
    ("j", ["tɕ"]), ("q", ["tɕʰ"]), ("x", ["ɕ"]),
    ("r", ["ɻ"]), ("z", ["ts"]), ("c", ["tsʰ"]), ("s", ["s"]),
]

FINALS = {
    "a": ["a"], "o": ["o"], "e": ["ɤ"], "i": ["i"], "u": ["u"], "v": ["y"],
    "ai": ["a", "i"], "ei": ["e", "i"], "ao": ["a", "u"], "ou": ["o", "u"],
    "an": ["a", "n"], "en": ["ə", "n"], "ang": ["a", "ŋ"], "eng": ["ə", "ŋ"],
    "ong": ["u", "ŋ"], "er": ["ɚ"],
    "ia": ["j", "a"], "ie": ["j", "e"], "iao": ["j", "a", "u"],
    "iu": ["j", "o", "u"], "ian": ["j", "ɛ", "n"], "in": ["i", "n"],
    "iang": ["j", "a", "ŋ"], "ing": ["i", "ŋ"], "iong": ["j", "u", "ŋ"],
    "ua": ["w", "a"], "uo": ["w", "o"], "uai": ["w", "a", "i"],
    "ui": ["w", "e", "i"], "uan": ["w", "a", "n"], "un": ["w", "ə", "n"],
    "uang": ["w", "a", "ŋ"], "ve": ["ɥ", "e"], "van": ["ɥ", "ɛ", "n"],
    "vn": ["y", "n"],
}

ZERO_INITIAL = {
    "yi": ["i"], "ya": ["j", "a"], "ye": ["j", "e"], "yao": ["j", "a", "u"],
    "you": ["j", "o", "u"], "yan": ["j", "ɛ", "n"], "yin": ["i", "n"],
    "yang": ["j", "a", "ŋ"], "ying": ["i", "ŋ"], "yong": ["j", "u", "ŋ"],
    "yu": ["y"], "yue": ["ɥ", "e"], "yuan": ["ɥ", "ɛ", "n"], "yun": ["y", "n"],
    "wu": ["u"], "wa": ["w", "a"], "wo": ["w", "o"], "wai": ["w", "a", "i"],
    "wei": ["w", "e", "i"], "wan": ["w", "a", "n"], "wen": ["w", "ə", "n"],
    "wang": ["w", "a", "ŋ"], "weng": ["w", "ə", "ŋ"],
}


def syllable_to_ipa(syl):
    syl = syl.replace("ü", "v")
    if syl in ZERO_INITIAL:
        return list(ZERO_INITIAL[syl])
    if syl in FINALS:
        return list(FINALS[syl])
    for ini, ipa in INITIALS:
        if syl.startswith(ini):
            fin = syl[len(ini):]
            if fin == "i" and ini in ("zh", "ch", "sh", "r", "z", "c", "s"):
                return ipa + ["ɨ"]
            if ini in ("j", "q", "x") and fin.startswith("u"):
                fin = "v" + fin[1:]
            if fin in FINALS:
                return ipa + FINALS[fin]
            raise ValueError(f"unknown final in {syl}")
    raise ValueError(f"cannot parse syllable {syl}")


def english(out_dir):
    words = [w.strip() for w in open(os.path.join(HERE, "lrw_words.txt")) if w.strip()]
    d = cmudict.dict()
    with open(os.path.join(out_dir, "lrw_words.txt"), "w", encoding="utf-8") as wl, \
         open(os.path.join(out_dir, "english_lexicon.txt"), "w", encoding="utf-8") as lx:
        wl.write("# LRW word classes (500), uniform per-class sample counts\n")
        lx.write("# word -> British English IPA, generated from CMUdict\n")
        for w in words:
            wl.write(f"{w} {ENGLISH_SAMPLES_PER_WORD}\n")
            lx.write(w + " " + " ".join(arpabet_to_british(d[w.lower()][0])) + "\n")


def mandarin(out_dir):
    path = os.path.join(os.path.dirname(jieba.__file__), "dict.txt")
    rows = []
    for line in open(path, encoding="utf-8"):
        word, freq = line.split()[:2]
        if len(word) == 2 and all("一" <= ch <= "鿿" for ch in word):
            rows.append((word, int(freq)))
    rows.sort(key=lambda r: (-r[1], r[0]))
    seen = set()
    chosen = []
    for word, _ in rows:
        toned = lazy_pinyin(word, style=Style.TONE3, neutral_tone_with_five=True)
        plain = lazy_pinyin(word, style=Style.NORMAL, v_to_u=False)
        if not all(re.fullmatch(r"[a-zü]+[1-5]", s) for s in toned):
            continue
        key = "".join(plain).replace("ü", "v").upper()
        if key in seen:
            continue
        try:
            ipa = [p for s in plain for p in syllable_to_ipa(s)]
        except ValueError:
            continue
        seen.add(key)
        chosen.append(("".join(toned).replace("ü", "v"), key, ipa, word))
        if len(chosen) == MANDARIN_CLASSES:
            break
    with open(os.path.join(out_dir, "lrw1000_words.txt"), "w", encoding="utf-8") as wl, \
         open(os.path.join(out_dir, "mandarin_lexicon.txt"), "w", encoding="utf-8") as lx:
        wl.write("# LRW-1000-style pinyin classes (1000), tone numbers kept\n")
        lx.write("# toneless pinyin -> Mandarin IPA\n")
        for toned, key, ipa, hanzi in chosen:
            wl.write(f"{toned} {MANDARIN_SAMPLES_PER_WORD}\n")
        for toned, key, ipa, hanzi in sorted(chosen, key=lambda c: c[1]):
            lx.write(key + " " + " ".join(ipa) + "\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.join(HERE, "..", "..", "data"))
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    english(args.out)
    mandarin(args.out)


if __name__ == "__main__":
    main()
