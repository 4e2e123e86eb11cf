#!/usr/bin/env python3
"""Where do the Desargues self-stress and mechanism go under perturbation?

The Desargues truss carries a self-stress and a mechanism only while its
three connector bars stay concurrent.  Perturbing the vertices destroys
both on the truss side, yet the anchored-frame stress count 2|E|-|V| is
combinatorial: the stress does not vanish, it migrates into the frame
self-stresses (the rank of pi* rises exactly as the rank of phi* drops).

Usage: python scripts/desargues_migration.py [magnitude] [num_seeds]
"""

import sys
from fractions import Fraction

from framehom import make_desargues, perturbation_scan


def main():
    magnitude = Fraction(sys.argv[1]) if len(sys.argv) > 1 else Fraction(1, 100)
    num_seeds = int(sys.argv[2]) if len(sys.argv) > 2 else 10
    f = make_desargues(Fraction(1, 2))
    rows = perturbation_scan(f, [Fraction(0), magnitude], range(1, num_seeds + 1))

    header = (f"{'magnitude':>10s} {'seed':>4s} | {'H1F':>3s} {'H0F':>3s} "
              f"{'H1M':>3s} {'H0M':>3s} {'H1N':>3s} {'H0N':>3s} | "
              f"{'phi*':>4s} {'pi*':>4s} {'theta':>5s}")
    print(header)
    print("-" * len(header))
    shown_baseline = False
    for r in rows:
        if r.magnitude == 0:
            if shown_baseline:
                continue
            shown_baseline = True
        if not r.valid:
            print(f"{str(r.magnitude):>10s} {r.seed:>4d} | perturbation rejected: {r.error}")
            continue
        print(f"{str(r.magnitude):>10s} {r.seed:>4d} | "
              f"{r.dims_force[0]:>3d} {r.dims_force[1]:>3d} "
              f"{r.dims_moment[0]:>3d} {r.dims_moment[1]:>3d} "
              f"{r.dims_anchored[0]:>3d} {r.dims_anchored[1]:>3d} | "
              f"{r.rank_phi1:>4d} {r.rank_pi1:>4d} {r.rank_theta:>5d}")

    print()
    print("the anchored dimensions never move; the truss self-stress (H1F) and")
    print("mechanism (H0F minus 3 rigid DOF) disappear while rank pi* absorbs them")


if __name__ == "__main__":
    main()
