#!/usr/bin/env python3
# Copyright 2026 The planar-ising Authors
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

"""Writes a synthetic roll-call CSV: two voting blocs with a few swing
voters, random absences, and some chronically absent members."""

import argparse
import csv
import random
import sys


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--voters", type=int, default=30)
    ap.add_argument("--votes", type=int, default=400)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("-o", "--out", default="-")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    names, bloc, loyalty, presence = [], [], [], []
    for i in range(args.voters):
        side = "A" if i < args.voters // 2 else "B"
        names.append(f"{side}{i:02d}")
        bloc.append(1 if side == "A" else -1)
        loyalty.append(0.55 if i % 7 == 3 else rng.uniform(0.8, 0.97))
        presence.append(0.5 if i % 11 == 5 else rng.uniform(0.9, 1.0))

    rows = [["name"] + [f"vote{v:03d}" for v in range(args.votes)]]
    table = [[name] for name in names]
    for _ in range(args.votes):
        agenda = rng.choice([1, -1])
        bipartisan = rng.random() < 0.25
        for i in range(args.voters):
            if rng.random() > presence[i]:
                table[i].append(rng.choice(["", "Not Voting", "Present"]))
                continue
            want = agenda if bipartisan else agenda * bloc[i]
            vote = want if rng.random() < loyalty[i] else -want
            table[i].append("Yea" if vote > 0 else "Nay")
    rows.extend(table)

    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    csv.writer(out, lineterminator="\n").writerows(rows)
    if out is not sys.stdout:
        out.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
