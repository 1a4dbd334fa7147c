"""Balanced anti-colorings of a small complex, checked against the random-coupling oracle."""
import argparse
import json

from simplicial_flows.coloring import (AntiColoring, canonical_colorings, enumerate_balanced,
                                       invariance_oracle, is_balanced)
from simplicial_flows.io import load_complex, load_partition


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--complex", default="diamond", help="catalog name or JSON file")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--direction", choices=("up", "down"), default="down")
    p.add_argument("--partition", help="JSON list of classes")
    p.add_argument("--max-colors", type=int)
    args = p.parse_args()

    X, _ = load_complex(args.complex)
    part = load_partition(args.partition) if args.partition else None
    found = enumerate_balanced(X, args.dim, part, args.direction, max_colors=args.max_colors)
    for K in found:
        print(f"{K.space_description():30s} {json.dumps(K.to_dict(X))}")
    disagree = sum(bool(is_balanced(X, K, part, args.direction)) != invariance_oracle(X, K, part, args.direction)
                   for K in (AntiColoring.from_codes(args.dim, c)
                             for c in canonical_colorings(X.n(args.dim), args.max_colors)))
    print(f"{len(found)} balanced classes; oracle disagreements: {disagree}")


if __name__ == "__main__":
    main()
