#!/usr/bin/env python3
"""Convert Planetoid citation data (ind.<name>.* pickles) into an hgnn dataset directory.

Usage:
    planetoid_to_tsv.py RAW_DIR NAME OUT_DIR [--no-row-normalize]

RAW_DIR holds ind.NAME.{x,tx,allx,y,ty,ally,graph,test.index}. The split is the
standard one: the labelled training rows, the next 500 nodes for validation and
the listed test nodes.
"""

import argparse
import json
import pickle
import sys
from pathlib import Path

import numpy as np
import scipy.sparse as sp


def load_part(raw: Path, name: str, part: str):
    with open(raw / f"ind.{name}.{part}", "rb") as fh:
        return pickle.load(fh, encoding="latin1")


def load_planetoid(raw: Path, name: str):
    x, y, tx, ty, allx, ally, graph = (load_part(raw, name, p) for p in ("x", "y", "tx", "ty", "allx", "ally", "graph"))
    test_index = [int(line) for line in (raw / f"ind.{name}.test.index").read_text().split()]
    test_sorted = np.sort(test_index)

    if name == "citeseer":
        # some test ids have no features; pad them with zero rows
        full = range(test_sorted.min(), test_sorted.max() + 1)
        tx_ext = sp.lil_matrix((len(full), tx.shape[1]))
        tx_ext[test_sorted - test_sorted.min(), :] = tx
        tx = tx_ext
        ty_ext = np.zeros((len(full), ty.shape[1]))
        ty_ext[test_sorted - test_sorted.min(), :] = ty
        ty = ty_ext

    features = sp.vstack((allx, tx)).tolil()
    features[test_index, :] = features[test_sorted, :]
    labels = np.vstack((ally, ty))
    labels[test_index, :] = labels[test_sorted, :]

    n = features.shape[0]
    edges = set()
    for u, neighbours in graph.items():
        for v in neighbours:
            if u != v and u < n and v < n:
                edges.add((min(u, v), max(u, v)))

    split = {
        "train": list(range(len(y))),
        "validation": list(range(len(y), len(y) + 500)),
        "test": [int(i) for i in test_sorted],
    }
    return sp.csr_matrix(features), labels, sorted(edges), split


def write_dataset(out: Path, features, labels, edges, split, row_normalize: bool):
    out.mkdir(parents=True, exist_ok=True)
    dense = np.asarray(features.todense(), dtype=np.float64)
    if row_normalize:
        sums = dense.sum(axis=1, keepdims=True)
        sums[sums == 0.0] = 1.0
        dense = dense / sums
    with open(out / "features.tsv", "w") as fh:
        for i, row in enumerate(dense):
            fh.write(str(i) + "\t" + "\t".join(repr(float(v)) if v != 0.0 else "0" for v in row) + "\n")

    width = len(str(labels.shape[1] - 1))
    with open(out / "labels.tsv", "w") as fh:
        for i, row in enumerate(labels):
            name = f"class_{int(np.argmax(row)):0{width}d}" if row.any() else "unlabeled"
            fh.write(f"{i}\t{name}\n")

    with open(out / "edges.tsv", "w") as fh:
        for u, v in edges:
            fh.write(f"{u}\t{v}\n")

    (out / "split.json").write_text(json.dumps(split) + "\n")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("raw_dir", type=Path)
    parser.add_argument("name", choices=["cora", "citeseer", "pubmed"])
    parser.add_argument("out_dir", type=Path)
    parser.add_argument("--no-row-normalize", action="store_true", help="keep raw feature values")
    args = parser.parse_args(argv)

    features, labels, edges, split = load_planetoid(args.raw_dir, args.name)
    write_dataset(args.out_dir, features, labels, edges, split, not args.no_row_normalize)
    print(
        f"{args.name}: {features.shape[0]} nodes, {features.shape[1]} features, {labels.shape[1]} classes, "
        f"{len(edges)} edges, split {len(split['train'])}/{len(split['validation'])}/{len(split['test'])}",
        file=sys.stderr,
    )


if __name__ == "__main__":
    main()
