#!/usr/bin/env python3
"""Regenerate data/av_classes/q<q>.json: isogeny classes of abelian surfaces over F_q.

Each Weil-valid x^4 + a1 x^3 + a2 x^2 + q a1 x + q^2 is kept iff every
irreducible factor P^k satisfies e(P) | k, where e(P) is the lcm of the
denominators of the local invariants of Q(pi):  ord_v(pi)/ord_v(q) * [K_v:Q_p]
at places above p (from PARI's factorpadic) and 1/2 at real places.

Usage: gen_av_classes.py OUTDIR q [q ...]
"""
import json
import math
import os
import sys
from fractions import Fraction

import cypari2

pari = cypari2.Pari()

PADIC_PRECISION = 40


def prime_power(q):
    for p in range(2, q + 1):
        if q % p == 0:
            n = 0
            while q % p == 0:
                q //= p
                n += 1
            assert q == 1
            return p, n
    raise ValueError(q)


def letters(n):
    if n == 0:
        return "a"
    out = []
    m = abs(n)
    while m:
        out.append(chr(ord("a") + m % 26))
        m //= 26
    body = "".join(reversed(out))
    return "a" + body if n < 0 else body


def weil_valid(q, a1, a2):
    if a1 * a1 > 16 * q or 4 * a2 - 8 * q > a1 * a1:
        return False
    s = 2 * q + a2
    return s >= 0 and s * s >= 4 * q * a1 * a1


def e_of(poly, p, n):
    denominators = [1]
    if int(pari.polsturm(poly)) > 0:
        denominators.append(2)
    local = pari.factorpadic(poly, p, PADIC_PRECISION)
    for row in range(int(pari.matsize(local)[0])):
        factor = local[0][row]
        d = int(pari.poldegree(factor))
        # valuation of a root = v(constant term)/d
        v_const = int(pari.valuation(pari.polcoef(factor, 0), p))
        inv = Fraction(v_const, d * n) * d
        denominators.append(inv.denominator)
    return math.lcm(*denominators)


def admissible(q, a1, a2):
    p, n = prime_power(q)
    f = pari(f"x^4 + ({a1})*x^3 + ({a2})*x^2 + ({q * a1})*x + {q * q}")
    fac = pari.factor(f)
    for row in range(int(pari.matsize(fac)[0])):
        poly = fac[0][row]
        mult = int(fac[1][row])
        if mult % e_of(poly, p, n) != 0:
            return False
    return True


def main():
    outdir = sys.argv[1]
    os.makedirs(outdir, exist_ok=True)
    for q in map(int, sys.argv[2:]):
        rows = []
        bound = 4 * math.isqrt(q) + 4
        for a1 in range(-bound, bound + 1):
            for a2 in range(-4 * q - 4, 6 * q + a1 * a1 + 4):
                if weil_valid(q, a1, a2) and admissible(q, a1, a2):
                    rows.append({"label": f"2.{q}.{letters(a1)}_{letters(a2)}", "a1": a1, "a2": a2})
        path = os.path.join(outdir, f"q{q}.json")
        with open(path, "w") as fh:
            fh.write("[\n")
            fh.write(",\n".join(json.dumps(r) for r in rows))
            fh.write("\n]\n")
        print(path, len(rows))


if __name__ == "__main__":
    main()
