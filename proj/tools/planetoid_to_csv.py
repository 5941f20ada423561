#!/usr/bin/env python3
"""Convert a Planetoid citation dataset (ind.<name>.* files) to nodes.csv + edges.csv."""

import argparse
import pathlib
import pickle
import sys

import numpy as np
import scipy.sparse as sp


def load(raw: pathlib.Path, name: str, part: str):
    with open(raw / f"ind.{name}.{part}", "rb") as f:
        return pickle.load(f, encoding="latin1")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("raw_dir", type=pathlib.Path, help="directory holding ind.<name>.* files")
    ap.add_argument("name", choices=["cora", "citeseer", "pubmed"])
    ap.add_argument("out_dir", type=pathlib.Path)
    args = ap.parse_args()

    x, y, tx, ty, allx, ally, graph = (load(args.raw_dir, args.name, p)
                                       for p in ("x", "y", "tx", "ty", "allx", "ally", "graph"))
    test_idx = [int(line) for line in open(args.raw_dir / f"ind.{args.name}.test.index")]
    test_sorted = np.sort(test_idx)

    if args.name == "citeseer":
        # Some test ids are isolated and missing from tx/ty; pad with empty rows.
        full = range(test_sorted.min(), test_sorted.max() + 1)
        tx_ext = sp.lil_matrix((len(full), tx.shape[1]))
        tx_ext[test_sorted - test_sorted.min(), :] = tx
        ty_ext = np.zeros((len(full), ty.shape[1]))
        ty_ext[test_sorted - test_sorted.min(), :] = ty
        tx, ty = tx_ext, ty_ext

    features = sp.vstack((allx, tx)).tolil()
    features[test_idx, :] = features[test_sorted, :]
    onehot = np.vstack((ally, ty))
    onehot[test_idx, :] = onehot[test_sorted, :]
    features = features.toarray()

    labelled = onehot.sum(axis=1) > 0
    keep = np.flatnonzero(labelled)
    dropped = len(onehot) - len(keep)

    args.out_dir.mkdir(parents=True, exist_ok=True)
    with open(args.out_dir / "nodes.csv", "w") as f:
        f.write("id,label," + ",".join(f"f{j}" for j in range(features.shape[1])) + "\n")
        for i in keep:
            row = ",".join(f"{v:.8g}" for v in features[i])
            f.write(f"{i},c{int(onehot[i].argmax())},{row}\n")

    kept = set(keep.tolist())
    edges = set()
    for u, nbrs in graph.items():
        for v in nbrs:
            if u != v and u in kept and v in kept:
                edges.add((min(u, v), max(u, v)))
    with open(args.out_dir / "edges.csv", "w") as f:
        f.write("source,target\n")
        for u, v in sorted(edges):
            f.write(f"{u},{v}\n")

    print(f"{args.name}: {len(keep)} nodes, {len(edges)} edges, {features.shape[1]} features, "
          f"{onehot.shape[1]} classes, {dropped} unlabelled nodes dropped", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
