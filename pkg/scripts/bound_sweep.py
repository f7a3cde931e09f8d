#!/usr/bin/env python3
"""Operator-norm lower-bound sweep across dyadic cutoffs.

Runs a seeded probe ensemble through T_sigma at increasing cutoffs and prints
the max norm ratio per (r, p, q).  Stable ratios are boundedness evidence;
growing ratios flag symbols whose conditions fail.

Examples:
    python3 scripts/bound_sweep.py --symbol power_it --t 5 --lams 64 128 256
    python3 scripts/bound_sweep.py --symbol wave --ensemble adjoint-dirichlet
"""

import argparse

from liefourier import EnsembleConfig, NormSpec, boundedness_sweep, build_partition, make_group
from liefourier.symbols import symbol_from_config


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--group", choices=("torus", "su2"), default="torus")
    parser.add_argument("--dim", type=int, default=1)
    parser.add_argument("--symbol", default="power_it")
    parser.add_argument("--t", type=float, default=5.0)
    parser.add_argument("--lams", type=float, nargs="+", default=[64.0, 128.0, 256.0])
    parser.add_argument("--spec", type=float, nargs=3, default=(0.0, 4.0, 2.0), metavar=("R", "P", "Q"))
    parser.add_argument("--ensemble", default="gaussian-coefficients")
    parser.add_argument("--count", type=int, default=8)
    parser.add_argument("--seed", type=int, default=11)
    args = parser.parse_args()

    group = make_group(args.group, args.dim)
    partition = build_partition()
    scfg = {"type": args.symbol}
    if args.symbol == "power_it":
        scfg["t"] = args.t
    builder = lambda dual: symbol_from_config(scfg, dual, partition)
    spec = NormSpec(*args.spec)
    sweep = boundedness_sweep(
        group, builder, spec, list(args.lams), EnsembleConfig(args.ensemble, args.count),
        args.seed, partition, args.symbol,
    )[0]
    print(f"symbol={sweep.symbol_id} spec=({spec.r},{spec.p},{spec.q}) ensemble={args.ensemble}")
    for lam, ratio, member in zip(sweep.cutoffs, sweep.max_ratios, sweep.argmax_members):
        print(f"  lam {lam:8.2f}: max ratio {ratio:.6f} (member {member})")


if __name__ == "__main__":
    main()
