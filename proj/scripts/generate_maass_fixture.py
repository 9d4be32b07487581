#!/usr/bin/env python3
"""Regenerate the level-1 Maass form fixtures under tests/data/.

Offline fixture generator: solves the collocation system for a level-1 Maass
cusp form near a known spectral parameter at two heights, refines the
parameter by secant iteration on the disagreement of the two solutions, and
writes the coefficients in the `#maass v1` format. The library itself only
ingests such files.

    python3 scripts/generate_maass_fixture.py --parity odd \
        --r 9.5336952613535575543 -o tests/data/maass_level1_odd_9.53369.txt
"""
import argparse
import sys

import mpmath as mp



def pullback(x, y):
    while True:
        x = x - mp.floor(x + mp.mpf(1) / 2)
        r2 = x * x + y * y
        if r2 >= 1:
            return x, y
        x, y = -x / r2, y / r2


def solve(R, M0, Q, Y, parity="odd"):
    trig = mp.sin if parity == "odd" else mp.cos
    kbes = lambda t: mp.re(mp.besselk(1j * R, t))
    xs = [(m - mp.mpf(1) / 2) / (2 * Q) for m in range(1, Q + 1)]
    pulled = [pullback(x, Y) for x in xs]
    W = [[mp.sqrt(ys) * kbes(2 * mp.pi * k * ys) * trig(2 * mp.pi * k * xs_)
          for (xs_, ys) in pulled] for k in range(1, M0 + 1)]
    V = mp.matrix(M0, M0)
    for n in range(1, M0 + 1):
        cs = [trig(2 * mp.pi * n * x) for x in xs]
        for k in range(1, M0 + 1):
            V[n - 1, k - 1] = 2 * mp.fsum(W[k - 1][m] * cs[m] for m in range(Q)) / Q
        V[n - 1, n - 1] -= mp.sqrt(Y) * kbes(2 * mp.pi * n * Y)
    A = mp.matrix(M0 - 1, M0 - 1)
    b = mp.matrix(M0 - 1, 1)
    for i in range(1, M0):
        for j in range(1, M0):
            A[i - 1, j - 1] = V[i, j]
        b[i - 1] = -V[i, 0]
    c = mp.lu_solve(A, b)
    return [mp.mpf(1)] + [c[i] for i in range(M0 - 1)]


def refine(R, M0, parity, Y1, Y2, steps):
    def gap(r):
        a = solve(r, M0, M0 + 12, Y1, parity)
        b = solve(r, M0, M0 + 12, Y2, parity)
        return a[1] - b[1], a, b
    r0, r1 = R, R + mp.mpf("1e-9")
    g0, a, b = gap(r0)
    for _ in range(steps):
        g1, a, b = gap(r1)
        if g1 == g0:
            break
        r0, r1, g0 = r1, r1 - g1 * (r1 - r0) / (g1 - g0), g1
        print("R=%s gap=%.3e" % (mp.nstr(r0, 25), float(abs(g0))), file=sys.stderr)
        if abs(g0) < mp.mpf(10) ** (-mp.mp.dps // 2):
            break
    return r0, a, b


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--r", required=True, help="starting spectral parameter")
    ap.add_argument("--parity", choices=("even", "odd"), required=True)
    ap.add_argument("--terms", type=int, default=48)
    ap.add_argument("--keep", type=int, default=40)
    ap.add_argument("--dps", type=int, default=60)
    ap.add_argument("--steps", type=int, default=6)
    ap.add_argument("-o", "--output", default="-")
    args = ap.parse_args()
    mp.mp.dps = args.dps
    R, c1, c2 = refine(mp.mpf(args.r), args.terms, args.parity,
                       mp.mpf("0.5"), mp.mpf("0.43"), args.steps)
    diff = max(abs(c1[n] - c2[n]) for n in range(args.keep))
    precision = max(float(diff), 1e-15)
    out = sys.stdout if args.output == "-" else open(args.output, "w")
    out.write("#maass v1\n")
    out.write("t_phi=%s\n" % mp.nstr(R, 20))
    out.write("parity=%s\n" % args.parity)
    out.write("precision=%.3e\n" % precision)
    for n in range(args.keep):
        out.write("%d %s\n" % (n + 1, mp.nstr(c1[n], 17, min_fixed=-mp.inf, max_fixed=mp.inf)))
    if out is not sys.stdout:
        out.close()
    print("max two-height discrepancy: %.3e" % float(diff), file=sys.stderr)


if __name__ == "__main__":
    main()
