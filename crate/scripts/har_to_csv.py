#!/usr/bin/env python3
"""Convert the UCI HAR dataset to the CSV layout read by schemas/har.json.

Usage: har_to_csv.py <UCI HAR Dataset dir> <output dir>

Writes har_train.csv and har_test.csv with columns f0..f560, activity,
subject.
"""

import csv
import sys
from pathlib import Path


def read_lines(path):
    return path.read_text().split("\n")


def convert(root, split, out):
    activities = {}
    for line in read_lines(root / "activity_labels.txt"):
        if line.strip():
            idx, name = line.split()
            activities[idx] = name
    xs = [l.split() for l in read_lines(root / split / f"X_{split}.txt") if l.strip()]
    ys = [l.strip() for l in read_lines(root / split / f"y_{split}.txt") if l.strip()]
    subjects = [l.strip() for l in read_lines(root / split / f"subject_{split}.txt") if l.strip()]
    if not (len(xs) == len(ys) == len(subjects)):
        sys.exit(f"{split}: row counts differ ({len(xs)}, {len(ys)}, {len(subjects)})")
    width = len(xs[0])
    with open(out, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow([f"f{i}" for i in range(width)] + ["activity", "subject"])
        for x, y, s in zip(xs, ys, subjects):
            if len(x) != width:
                sys.exit(f"{split}: ragged feature row")
            w.writerow(x + [activities[y], s])
    print(f"{out}: {len(xs)} rows, {width} features")


def main():
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    root, out_dir = Path(sys.argv[1]), Path(sys.argv[2])
    out_dir.mkdir(parents=True, exist_ok=True)
    for split in ("train", "test"):
        convert(root, split, out_dir / f"har_{split}.csv")


if __name__ == "__main__":
    main()
