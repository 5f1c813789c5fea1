#!/usr/bin/env python3
"""Regenerate data/newforms/*.json from PARI/GP (cypari2).

Newform orbits at a level are labelled the LMFDB way: sorted by dimension,
then lexicographically by the trace vector (tr a_1, tr a_2, ...), with
suffixes a, b, ..., z, ba, bb, ...  Only orbits with a quadratic coefficient
field are written.  Coefficients a_p are stored in the basis (1, sqrt(m)) as
[u_num, u_den, v_num, v_den].

Usage: gen_newforms.py OUTDIR LEVEL:suffix[,suffix...] ...
"""
import json
import os
import sys
from fractions import Fraction

import cypari2

pari = cypari2.Pari()
pari.allocatemem(4 * 10**9)

PMAX = 300
TRACE_LEN = 1000


def suffix(index):
    digits = []
    while True:
        digits.append(chr(ord("a") + index % 26))
        index //= 26
        if index == 0:
            break
    return "".join(reversed(digits))


def squarefree_part(n):
    sign = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    p = 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
        if n % p == 0:
            out *= p
            n //= p
        p += 1
    return sign * out * n


def orbit_data(level):
    pari(f"mf=mfinit([{level},2],0); L=mfeigenbasis(mf); F=mffields(mf);")
    count = int(pari("#L"))
    orbits = []
    for k in range(1, count + 1):
        field = pari(f"F[{k}]")
        dim = int(pari(f"poldegree(F[{k}])"))
        traces = [int(t) for t in pari(
            f"v=mfcoefs(L[{k}],{TRACE_LEN}); "
            f"vector(#v,n,if(type(v[n])==\"t_POLMOD\",trace(v[n]),{dim}*v[n]))")]
        orbits.append((dim, traces[1:], k, field))
    orbits.sort(key=lambda o: (o[0], o[1]))
    return orbits


def quadratic_coeffs(k, field):
    # field is y^2 + c*y + e; y = (-c + s*sqrt(m))/2 with c^2 - 4e = s^2 m.
    c = int(pari(f"polcoef(F[{k}],1)"))
    e = int(pari(f"polcoef(F[{k}],0)"))
    disc = c * c - 4 * e
    m = squarefree_part(disc)
    s2 = disc // m
    s = int(round(s2 ** 0.5))
    assert s * s == s2
    ap = {}
    for p in pari(f"primes([2,{PMAX}])"):
        p = int(p)
        pair = pari(f"c=liftpol(mfcoef(L[{k}],{p})); [polcoef(c,0,y), polcoef(c,1,y)]")
        a, b = Fraction(str(pair[0])), Fraction(str(pair[1]))
        # a + b*y = a + b*(-c + s sqrt m)/2
        u = a - b * c / 2
        v = b * s / 2
        ap[str(p)] = [u.numerator, u.denominator, v.numerator, v.denominator]
    return m, ap


def self_twist(k):
    return bool(pari(f"mfisCM(L[{k}])") != 0)


# psi column of the published twist-class table, keyed by label
TABLE_TWISTS = {
    "243.2.a.d": [-3], "972.2.a.e": [-3],
    "2592.2.a.l": [-4], "2592.2.a.p": [-4], "2592.2.a.m": [-4], "2592.2.a.r": [-4],
    "3888.2.a.b": [-3], "3888.2.a.t": [-3],
    "5184.2.a.bl": [-4], "5184.2.a.bx": [-4], "5184.2.a.bk": [-4], "5184.2.a.bv": [-4],
}


def main():
    outdir = sys.argv[1]
    os.makedirs(outdir, exist_ok=True)
    for arg in sys.argv[2:]:
        level, wanted = arg.split(":")
        level = int(level)
        orbits = orbit_data(level)
        labels = {suffix(i): o for i, o in enumerate(orbits)}
        for suf in wanted.split(","):
            dim, _, k, field = labels[suf]
            if dim != 2:
                raise SystemExit(f"{level}.2.a.{suf} has dimension {dim}")
            m, ap = quadratic_coeffs(k, field)
            record = {
                "label": f"{level}.2.a.{suf}",
                "level": level,
                "weight": 2,
                "m": m,
                "ap": ap,
                "inner_twists": TABLE_TWISTS.get(f"{level}.2.a.{suf}", []),
                "self_twist": self_twist(k),
            }
            path = os.path.join(outdir, f"{level}.2.a.{suf}.json")
            with open(path, "w") as fh:
                json.dump(record, fh, indent=1, sort_keys=False)
                fh.write("\n")
            print(path)


if __name__ == "__main__":
    main()
