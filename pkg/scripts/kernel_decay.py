#!/usr/bin/env python3
"""Far-field kernel-difference decay experiment.

Builds a scalar multiplier symbol, forms its dyadic window kernels, and
measures the integral of |kappa_ell(z^-1 x) - kappa_ell(x)| over the region
|x| > 4c|z| for a range of window indices, printing the fitted log2 slope.

Examples:
    python3 scripts/kernel_decay.py --group torus --lam 512 --windows 2 3 4 5 6
    python3 scripts/kernel_decay.py --group su2 --ell-max 32 --windows 2 3 4
"""

import argparse
import math

import numpy as np

from liefourier import build_partition, build_spectral_symbol, enumerate_dual, make_group
from liefourier.dual import spin_cutoff
from liefourier.groups import su2_point_from_distance
from liefourier.multipliers import decay_slope, kernel_difference_integral, window_kernel
from liefourier.symbols import cached_grid


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--group", choices=("torus", "su2"), default="torus")
    parser.add_argument("--dim", type=int, default=1, help="torus dimension")
    parser.add_argument("--lam", type=float, default=None, help="dual cutoff")
    parser.add_argument("--ell-max", type=float, default=None, help="su2 top spin")
    parser.add_argument("--windows", type=int, nargs="+", default=[2, 3, 4, 5, 6])
    parser.add_argument("--t", type=float, default=1.0, help="symbol <xi>^(i t)")
    parser.add_argument("--c", type=float, default=1.0)
    parser.add_argument("--z-distance", type=float, default=0.05 * 2 * math.pi)
    args = parser.parse_args()

    group = make_group(args.group, args.dim)
    if args.lam is not None:
        lam = args.lam
    elif args.ell_max is not None:
        lam = spin_cutoff(args.ell_max)
    else:
        lam = 512.0 if group.kind == "torus" else spin_cutoff(32)
    dual = enumerate_dual(group, lam)
    grid = cached_grid(group, dual.max_band)
    partition = build_partition()
    symbol = build_spectral_symbol(lambda l: l ** (1j * args.t), dual)
    if group.kind == "torus":
        z = np.zeros(group.dim)
        z[0] = args.z_distance / (2 * math.pi)
    else:
        z = su2_point_from_distance(args.z_distance)

    integrals = []
    for ell in args.windows:
        value = kernel_difference_integral(window_kernel(symbol, partition, ell), z, args.c, grid)
        integrals.append(value)
        print(f"window {ell:2d}: integral = {value:.6e}  log2 = {math.log2(max(value, 1e-300)):8.3f}")
    print(f"least-squares slope: {decay_slope(args.windows, integrals):+.4f}")


if __name__ == "__main__":
    main()
