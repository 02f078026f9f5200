#!/usr/bin/env python3
"""Entropy traces of rank-1 principal algebraic actions.

For f in the integer group ring of Z, the action on the dual of Z[x,1/x]/(f)
has entropy log of the Mahler measure of f.  The finite-quotient side of
that identity is computable exactly: over Z/n the fixed points of the
action form a finite group of order |det M_n| for the n x n circulant
matrix M_n of f, and

    h_n = log |Fix| / n  --->  m(f)   as n -> infinity.

This demo runs two classical examples and compares against the Jensen
(root-based) evaluation of m(f).
"""

import math

from sofic import entropy_trace, mahler_jensen, parse_laurent, torus_quotient


def sweep(poly_text, n_max):
    f = parse_laurent(poly_text, 1)
    reference = mahler_jensen(f).value
    quotients = [torus_quotient([n]) for n in range(1, n_max + 1)]
    trace = entropy_trace(f, quotients, reference=reference)

    print(f"f = {f.render()}")
    print(f"Jensen reference: m(f) = {reference:.12f}")
    print(f"{'n':>4}  {'|Fix| bits':>10}  {'h_n':>16}  {'h_n - m(f)':>12}")
    for record in trace.records:
        if record.d in (1, 2, 3, 5, 10, 20, 30, 40, 50, 60) or record.d == n_max:
            gap = record.h_n - reference
            bits = record.log_fix_count / math.log(2)
            print(f"{record.d:>4}  {bits:>10.1f}  {record.h_n:>16.12f}  {gap:>12.2e}")
    print(f"residual at n = {n_max}: {trace.residual:.3e}")
    print()


def main():
    print("=" * 64)
    print("expanding case: f = x - 2, fixed points 2^n - 1, limit log 2")
    print("=" * 64)
    sweep("x - 2", 40)

    print("=" * 64)
    print("two-sided case: f = 3 - x - x^-1, limit log((3 + sqrt 5)/2)")
    print("=" * 64)
    sweep("3 - x - x^-1", 60)

    print("note: h_n converges from below; the expanding case converges")
    print("geometrically because |Fix| = 2^n - 1 tracks 2^n so closely.")


if __name__ == "__main__":
    main()
