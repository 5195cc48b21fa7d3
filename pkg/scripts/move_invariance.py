"""Apply R1 and R2 at every edge of a builtin knot and confirm the
derivation invariants do not change."""
import argparse
import time

from qderiv.cli import resolve_quandle
from qderiv.derivations import derivation_data, derivation_multiset, multisets_equal
from qderiv.diagram import builtin, r1_add, r2_add, r2_candidates


def invariants(D, X):
    data = derivation_data(D, X)
    return (str(data.polynomial()), len(data.homs), data.total_size()), derivation_multiset(D, X)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--knot", default="5_2")
    ap.add_argument("--quandle", action="append", help="repeatable; default d3, x4, d11")
    args = ap.parse_args()
    D = builtin(args.knot)
    moves = [(f"R1 edge {e} sign {s:+d} {side}", r1_add(D, e, s, side))
             for e in D.edges for s in (1, -1) for side in ("left", "right")]
    moves += [(f"R2 edges {a},{b}", r2_add(D, a, b)) for a, b in r2_candidates(D)]
    failures = 0
    for spec in args.quandle or ["d3", "x4", "d11"]:
        X = resolve_quandle(spec)
        t = time.perf_counter()
        base, ms = invariants(D, X)
        bad = []
        for label, E in moves:
            got, gms = invariants(E, X)
            if got != base or not multisets_equal(gms, ms):
                bad.append(label)
        failures += len(bad)
        print(f"{args.knot} over {spec}: {base[0]}, homs {base[1]}, total {base[2]}; "
              f"{len(moves) - len(bad)}/{len(moves)} moves agree ({time.perf_counter() - t:.1f}s)")
        for label in bad:
            print(f"  changed after {label}")
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
