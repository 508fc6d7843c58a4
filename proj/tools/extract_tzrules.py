#!/usr/bin/env python3
"""Extracts UTC-offset transitions for every place in places.tsv.

Uses Python's zoneinfo (system tzdata) as an independent reader of the
IANA database. Offsets are probed daily and each change is bisected to
the second, over 1969-01-01..2022-01-01, which covers the study window.

Usage: python3 tools/extract_tzrules.py refdata/places.tsv > refdata/tzrules.tsv
"""
import sys
from datetime import datetime, timezone
from zoneinfo import ZoneInfo

BEGIN = int(datetime(1969, 1, 1, tzinfo=timezone.utc).timestamp())
END = int(datetime(2022, 1, 1, tzinfo=timezone.utc).timestamp())


def offset(zone, t):
    return int(datetime.fromtimestamp(t, tz=zone).utcoffset().total_seconds())


def transitions(zone):
    out = []
    prev_t, prev_o = BEGIN, offset(zone, BEGIN)
    t = BEGIN + 86400
    while t <= END:
        o = offset(zone, t)
        if o != prev_o:
            lo, hi = prev_t, t
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if offset(zone, mid) == prev_o:
                    lo = mid
                else:
                    hi = mid
            out.append((hi, o))
            prev_o = o
        prev_t = t
        t += 86400
    return offset(zone, BEGIN), out


def main():
    places = []
    with open(sys.argv[1], encoding="utf-8") as f:
        for line in f:
            if not line.strip() or line.startswith("#") or line.startswith("place_id\t"):
                continue
            places.append(line.split("\t")[0])
    print("# UTC offset transitions extracted from the system IANA tz database")
    print("# by tools/extract_tzrules.py; covers 1969-2021. utc_start '-' = initial offset.")
    print("place_id\tutc_start\toffset_seconds")
    for pid in sorted(places):
        zone = ZoneInfo(pid)
        initial, trans = transitions(zone)
        print(f"{pid}\t-\t{initial}")
        for t, o in trans:
            print(f"{pid}\t{t}\t{o}")


if __name__ == "__main__":
    main()
