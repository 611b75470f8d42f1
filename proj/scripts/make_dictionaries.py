#!/usr/bin/env python3
# Copyright 2026 The pygec Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates data/pinyin.tsv and data/lexicon.txt.

Character readings come from pypinyin (tone-number style, neutral tone as 5),
word frequencies from the jieba dictionary. Requires `pip install pypinyin jieba`.
"""

import argparse
import os

import jieba
from pypinyin import Style, lazy_pinyin, pinyin


def gb2312_level1():
    chars = []
    for hi in range(0xB0, 0xD8):
        for lo in range(0xA1, 0xFF):
            try:
                ch = bytes([hi, lo]).decode("gb2312")
            except UnicodeDecodeError:
                continue
            chars.append(ch)
    return chars


def readings_of(ch):
    out = []
    for r in pinyin(ch, style=Style.TONE3, heteronym=True,
                    neutral_tone_with_five=True)[0]:
        r = r.strip()
        if r and r[:-1].isascii() and r[:-1].isalpha() and r[-1] in "12345":
            if r not in out:
                out.append(r)
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data"))
    ap.add_argument("--lexicon-size", type=int, default=30000)
    args = ap.parse_args()

    char_readings = {}
    for ch in gb2312_level1():
        rs = readings_of(ch)
        if rs:
            char_readings[ch] = rs

    dict_path = os.path.join(os.path.dirname(jieba.__file__), "dict.txt")
    words = []
    with open(dict_path, encoding="utf-8") as f:
        for line in f:
            parts = line.split()
            if len(parts) < 2:
                continue
            w, freq = parts[0], int(parts[1])
            if 2 <= len(w) <= 4 and all(c in char_readings for c in w):
                words.append((freq, w))
    words.sort(key=lambda x: (-x[0], x[1]))
    lexicon = [w for _, w in words[: args.lexicon_size]]

    overrides = []
    for w in lexicon:
        if not any(len(char_readings[c]) > 1 for c in w):
            continue
        phrase = lazy_pinyin(w, style=Style.TONE3, neutral_tone_with_five=True)
        primary = [char_readings[c][0] for c in w]
        if len(phrase) == len(w) and phrase != primary and \
                all(p in char_readings[c] for p, c in zip(phrase, w)):
            overrides.append((w, phrase))

    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "pinyin.tsv"), "w", encoding="utf-8") as f:
        f.write("# character/word readings, tone-number form, most frequent first\n")
        f.write("# generated by scripts/make_dictionaries.py from pypinyin data\n")
        for ch, rs in char_readings.items():
            f.write(f"{ch}\t{','.join(rs)}\n")
        for w, rs in overrides:
            f.write(f"{w}\t{','.join(rs)}\n")
    with open(os.path.join(args.out, "lexicon.txt"), "w", encoding="utf-8") as f:
        for w in lexicon:
            f.write(w + "\n")
    print(f"{len(char_readings)} characters, {len(overrides)} word overrides, "
          f"{len(lexicon)} lexicon words")


if __name__ == "__main__":
    main()
