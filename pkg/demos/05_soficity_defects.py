#!/usr/bin/env python3
"""Measuring how close a permutation family is to a group action.

A sofic approximation assigns a permutation of {0..d-1} to each group
element.  Two exact counts quantify its quality:

* multiplicative defect of (s, t): fraction of sites where the stored
  permutation of s*t disagrees with the composition of those of s and t;
* freeness defect of distinct (s, t): fraction of sites where the two
  permutations agree.

Left translation on a finite quotient is a genuine homomorphism, so its
multiplicative defects vanish identically, and translations by distinct
cosets disagree everywhere (defect 0) while congruent elements collide
completely (defect 1).  Perturbing one permutation shows graded values.
"""

import numpy as np

from sofic import (
    SoficMap,
    freeness_defect,
    multiplicative_defect,
    sofic_map_from_quotient,
    torus_quotient,
)


def main():
    q = torus_quotient([12])
    elems = [1, 2, 3, 5, 13]
    needed = set(elems) | {s + t for s in elems for t in elems}
    sigma = sofic_map_from_quotient(q, needed)

    print(f"quotient {q.label}: left-translation permutations")
    print(f"{'s':>4} {'t':>4} {'mult defect':>12} {'free defect':>12}")
    for s, t in [(1, 2), (2, 3), (3, 5), (1, 13), (5, 13)]:
        mult = multiplicative_defect(sigma, s, t)
        free = freeness_defect(sigma, s, t)
        note = "   <- 13 = 1 mod 12" if (s - t) % 12 == 0 else ""
        print(f"{s:>4} {t:>4} {mult:>12.4f} {free:>12.4f}{note}")

    print()
    print("hand-built family with one corrupted permutation:")
    d = 12
    rng = np.random.default_rng(0)
    shift1 = np.roll(np.arange(d), -1)
    shift2 = np.roll(np.arange(d), -2)
    corrupted = shift2.copy()
    swap = rng.choice(d, size=4, replace=False)
    corrupted[swap] = corrupted[np.roll(swap, 1)]
    broken = SoficMap(
        d=d,
        perms={1: shift1, 2: corrupted, 3: np.roll(np.arange(d), -3)},
        rank=1,
        label="perturbed",
    )
    print(f"  mult defect (1, 1): {multiplicative_defect(broken, 1, 1):.4f}")
    print(f"  mult defect (1, 2): {multiplicative_defect(broken, 1, 2):.4f}")
    print(f"  free defect (1, 2): {freeness_defect(broken, 1, 2):.4f}")
    print("nonzero values pinpoint exactly which relations the family breaks.")


if __name__ == "__main__":
    main()
