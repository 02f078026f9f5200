#!/usr/bin/env python3
"""Mahler measures two ways, and torus invertibility certificates.

The Jensen route factors the rank-1 Laurent polynomial and adds the log
moduli of roots outside the unit circle; the quadrature route averages
log|F| over a uniform torus grid.  They must agree within their combined
error bounds whenever F has no zero on the torus, and the certificate
decides that hypothesis with a grid minimum plus a Lipschitz bound.
"""

from sofic import (
    certify_invertible_torus,
    mahler_jensen,
    mahler_quadrature,
    parse_laurent,
)

EXAMPLES_RANK1 = [
    "x - 2",
    "3 - x - x^-1",
    "1 + x + x^2",
    "5 + 2*x - x^3",
    "x - 1",            # vanishes at 1: not invertible
    "2 - x - x^-1",     # vanishes at 1: not invertible
]


def main():
    print(f"{'f':<16} {'certificate':<26} {'jensen':>14} {'quadrature':>14}")
    for text in EXAMPLES_RANK1:
        f = parse_laurent(text, 1)
        cert = certify_invertible_torus(f, 4096)
        jensen = mahler_jensen(f)
        if cert.is_certified:
            quad = mahler_quadrature(f, 8192)
            agree = abs(jensen.value - quad.value) <= (
                jensen.error_bound + quad.error_bound
            )
            flag = "" if agree else "  <-- DISAGREE"
            print(
                f"{text:<16} {cert.verdict:<26} {jensen.value:>14.9f} "
                f"{quad.value:>14.9f}{flag}"
            )
        else:
            witness = "" if cert.witness is None else f" at {cert.witness}"
            print(
                f"{text:<16} {cert.verdict + witness:<26} {jensen.value:>14.9f} "
                f"{'(skipped)':>14}"
            )

    print()
    print("rank 2: the certificate catches the zero of 4 - x - x^-1 - y - y^-1")
    g = parse_laurent("4 - x - x^-1 - y - y^-1", 2)
    cert = certify_invertible_torus(g, 256)
    print(f"  verdict: {cert.verdict}, witness {cert.witness}, |F| = {cert.witness_abs:.2e}")

    g5 = parse_laurent("5 - x - x^-1 - y - y^-1", 2)
    cert5 = certify_invertible_torus(g5, 256)
    print(f"  5 - ... instead: {cert5.verdict}, |F| >= {cert5.min_abs_lower_bound:.4f}")

    print()
    print("note: the Jensen value is still defined for non-invertible f")
    print("(x - 1 has measure 0) but no entropy identity is claimed there.")


if __name__ == "__main__":
    main()
