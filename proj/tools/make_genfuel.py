#!/usr/bin/env python3
# Copyright 2026 The gridshift Authors
# SPDX-License-Identifier: Apache-2.0
"""Writes the gen,fuel table for the MATPOWER RTS-GMLC case.

The MATPOWER file carries no fuel column. Units are classified by their
position in mpc.gen and, for the thermal block, by their capacity class.
"""

import argparse
import csv
import re
import sys


def gen_pmax(case_text):
    block = re.search(r"mpc\.gen\s*=\s*\[(.*?)\];", case_text, re.S)
    if not block:
        sys.exit("no mpc.gen matrix")
    rows = []
    for line in block.group(1).splitlines():
        line = line.split("%", 1)[0].strip().rstrip(";")
        if line:
            rows.append(float(line.split()[8]))
    return rows


def fuel(index, pmax):
    if index <= 72:
        if pmax in (12.0, 20.0):
            return "oil"
        if pmax in (76.0, 155.0, 350.0):
            return "coal"
        return "gas"
    if index in (73, 82, 92, 158):  # synchronous condensers and the battery
        return "storage"
    if index == 74:
        return "nuclear"
    if index <= 96:
        return "hydro"
    if index <= 153:
        return "solar"
    return "wind"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("case")
    ap.add_argument("out")
    args = ap.parse_args()
    with open(args.case, encoding="utf-8") as f:
        pmax = gen_pmax(f.read())
    if len(pmax) != 158:
        sys.exit(f"expected 158 generators, found {len(pmax)}")
    with open(args.out, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["gen", "fuel"])
        for i, p in enumerate(pmax, start=1):
            w.writerow([i, fuel(i, p)])


if __name__ == "__main__":
    main()
