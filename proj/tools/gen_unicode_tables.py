#!/usr/bin/env python3
"""Regenerates src/unicode_tables.inc from Python's unicodedata.

Usage: python3 tools/gen_unicode_tables.py > src/unicode_tables.inc
"""
import sys
import unicodedata


def ranges(pred):
    out = []
    start = None
    for cp in range(0x110000):
        if 0xD800 <= cp <= 0xDFFF:
            ok = False
        else:
            ok = pred(cp)
        if ok and start is None:
            start = cp
        elif not ok and start is not None:
            out.append((start, cp - 1))
            start = None
    if start is not None:
        out.append((start, 0x10FFFF))
    return out


def simple_map(fn):
    pairs = []
    for cp in range(0x110000):
        if 0xD800 <= cp <= 0xDFFF:
            continue
        s = chr(cp)
        m = fn(s)
        if len(m) == 1 and m != s:
            pairs.append((cp, ord(m)))
    return pairs


def emit_ranges(name, rs):
    print(f"constexpr CodepointRange {name}[] = {{")
    for a, b in rs:
        print(f"    {{0x{a:04X}, 0x{b:04X}}},")
    print("};")


def emit_pairs(name, ps):
    print(f"constexpr CodepointPair {name}[] = {{")
    for a, b in ps:
        print(f"    {{0x{a:04X}, 0x{b:04X}}},")
    print("};")


cat = lambda cp: unicodedata.category(chr(cp))
print(f"// Generated by tools/gen_unicode_tables.py (Unicode {unicodedata.unidata_version}). Do not edit.")
emit_ranges("kLetterRanges", ranges(lambda cp: cat(cp).startswith("L")))
emit_ranges("kUpperRanges", ranges(lambda cp: cat(cp) in ("Lu", "Lt")))
emit_ranges("kLowerRanges", ranges(lambda cp: cat(cp) == "Ll"))
emit_pairs("kToLower", simple_map(str.lower))
emit_pairs("kToUpper", simple_map(str.upper))
