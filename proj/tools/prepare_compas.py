#!/usr/bin/env python3
# Copyright 2026 The FairDNF Authors.
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
"""Builds data/compas/compas.csv from ProPublica's compas-scores-two-years.csv.

Applies the usual ProPublica screening filters and keeps the seven columns of
the widely used "fairml" cleaned variant. Race is kept as a string so that
`fairdnf` can apply its own African-American / Caucasian restriction.

    python3 tools/prepare_compas.py compas-scores-two-years.csv data/compas/compas.csv
"""
import csv
import sys


def main(src, dst):
    with open(src, newline="") as f:
        rows = list(csv.DictReader(f))
    out = []
    for r in rows:
        if not r["days_b_screening_arrest"]:
            continue
        days = int(float(r["days_b_screening_arrest"]))
        if days > 30 or days < -30:
            continue
        if r["is_recid"] == "-1" or r["c_charge_degree"] == "O":
            continue
        if r["score_text"] == "N/A":
            continue
        age = int(r["age"])
        out.append({
            "two_year_recid": r["two_year_recid"],
            "priors_count": r["priors_count"],
            "score_factor": "True" if r["score_text"] in ("Medium", "High") else "False",
            "age_above_45": "True" if age > 45 else "False",
            "age_below_25": "True" if age < 25 else "False",
            "race": r["race"],
            "female": "True" if r["sex"] == "Female" else "False",
            "misdemeanor": "True" if r["c_charge_degree"] == "M" else "False",
        })
    with open(dst, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=list(out[0].keys()), lineterminator="\n")
        w.writeheader()
        w.writerows(out)
    print(f"wrote {len(out)} rows to {dst}")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
