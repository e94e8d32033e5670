#!/usr/bin/env python3
# Copyright 2026 The LRD Authors. All rights reserved.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Convert MovieLens-100k into the tab-separated inputs read by `lrd prepare`.

Accepts either the RecBole atomic files (ml-100k.inter / ml-100k.item) or the
original GroupLens layout (u.data / u.item) and writes:

  interactions.tsv   user<TAB>item<TAB>timestamp
  item_text.tsv      item<TAB>"<title> (<year>) <genre> <genre> ..."
  metadata.tsv       item<TAB>release_year|genre<TAB>value   (one row per value)
"""

import argparse
import csv
import sys
from pathlib import Path

GROUPLENS_GENRES = [
    "unknown", "Action", "Adventure", "Animation", "Children's", "Comedy", "Crime",
    "Documentary", "Drama", "Fantasy", "Film-Noir", "Horror", "Musical", "Mystery",
    "Romance", "Sci-Fi", "Thriller", "War", "Western",
]


def read_recbole(src: Path):
    interactions = []
    with open(src / "ml-100k.inter", newline="", encoding="utf-8") as f:
        reader = csv.reader(f, delimiter="\t")
        header = [c.split(":")[0] for c in next(reader)]
        u, i, t = header.index("user_id"), header.index("item_id"), header.index("timestamp")
        for row in reader:
            if row:
                interactions.append((row[u], row[i], str(int(float(row[t])))))
    items = {}
    with open(src / "ml-100k.item", newline="", encoding="utf-8") as f:
        reader = csv.reader(f, delimiter="\t", quoting=csv.QUOTE_NONE)
        header = [c.split(":")[0] for c in next(reader)]
        cols = {name: header.index(name) for name in ("item_id", "movie_title", "release_year", "class")}
        for row in reader:
            if not row:
                continue
            row += [""] * (len(header) - len(row))
            genres = row[cols["class"]].split()
            items[row[cols["item_id"]]] = (row[cols["movie_title"]], row[cols["release_year"]], genres)
    return interactions, items


def read_grouplens(src: Path):
    interactions = []
    with open(src / "u.data", encoding="latin-1") as f:
        for line in f:
            parts = line.split()
            if parts:
                interactions.append((parts[0], parts[1], parts[3]))
    items = {}
    with open(src / "u.item", encoding="latin-1") as f:
        for line in f:
            parts = line.rstrip("\n").split("|")
            if len(parts) < 5 + len(GROUPLENS_GENRES):
                continue
            title = parts[1]
            year = ""
            if title.endswith(")") and "(" in title:
                title, _, tail = title.rpartition("(")
                year, title = tail.rstrip(")").strip(), title.strip()
            if not year.isdigit():
                year = parts[2][-4:] if parts[2][-4:].isdigit() else ""
            flags = parts[5:5 + len(GROUPLENS_GENRES)]
            genres = [g for g, flag in zip(GROUPLENS_GENRES, flags) if flag == "1" and g != "unknown"]
            items[parts[0]] = (title, year, genres)
    return interactions, items


def clean(text: str) -> str:
    return " ".join(text.replace("\t", " ").split())


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--source", type=Path, default=Path("/root/data/ml-100k"),
                        help="directory holding RecBole ml-100k.* files or GroupLens u.data/u.item")
    parser.add_argument("--out", type=Path, default=Path("data/ml-100k"), help="output directory")
    args = parser.parse_args()

    if (args.source / "ml-100k.inter").exists():
        interactions, items = read_recbole(args.source)
    elif (args.source / "u.data").exists():
        interactions, items = read_grouplens(args.source)
    else:
        print(f"error: no MovieLens-100k files in {args.source}", file=sys.stderr)
        return 1

    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "interactions.tsv", "w", encoding="utf-8") as f:
        for user, item, ts in interactions:
            f.write(f"{user}\t{item}\t{ts}\n")
    with open(args.out / "item_text.tsv", "w", encoding="utf-8") as f, \
         open(args.out / "metadata.tsv", "w", encoding="utf-8") as meta:
        for item in sorted(items, key=lambda s: (len(s), s)):
            title, year, genres = items[item]
            text = clean(title)
            if year:
                text += f" ({year})"
            if genres:
                text += " " + " ".join(genres)
            f.write(f"{item}\t{text}\n")
            if year:
                meta.write(f"{item}\trelease_year\t{year}\n")
            for genre in genres:
                meta.write(f"{item}\tgenre\t{genre}\n")
    print(f"wrote {len(interactions)} interactions and {len(items)} items to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
