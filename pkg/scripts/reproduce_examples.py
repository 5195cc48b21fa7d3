"""Print the worked knot examples: coloring counts, action counts,
derivation polynomials, total sizes and the constant-action matrix."""
import argparse
import time

from qderiv.autgroup import parse_cycles
from qderiv.coloring import enumerate_homs
from qderiv.derivations import (constant_action, derivation_data, derivation_quandle,
                                enumerate_actions, enumerate_derivations)
from qderiv.diagram import builtin
from qderiv.quandle import abelian4, dihedral

CASES = [("3_1", "x4", abelian4()), ("4_1", "d3", dihedral(3)), ("3_1", "d15", dihedral(15)),
         ("3_1", "d11", dihedral(11)), ("4_1", "d11", dihedral(11)), ("5_2", "d11", dihedral(11))]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    print(f"{'knot':5} {'X':4} {'homs':>5} {'actions':>8} {'total':>6}  polynomial")
    for name, label, X in CASES:
        t = time.perf_counter()
        D = builtin(name)
        data = derivation_data(D, X, workers=args.workers)
        print(f"{name:5} {label:4} {len(data.homs):5d} {len(data.actions):8d} {data.total_size():6d}  "
              f"{data.polynomial()}   ({time.perf_counter() - t:.2f}s)")
    D, X = builtin("3_1"), dihedral(15)
    act = constant_action(D, X, parse_cycles("(2,12)(3,8)(5,15)(6,11)(9,14)", 15))
    ders = enumerate_derivations(D, X, act)
    print("\nconstant action (2,12)(3,8)(5,15)(6,11)(9,14) on 3_1 over d15:")
    for i, f in enumerate(ders):
        print(f"  f{i + 1} = {f[0] + 1} on every arc")
    for row in derivation_quandle(ders, X).to_one_based():
        print("  " + " ".join(map(str, row)))
    print(f"\n|Hom(3_1, d15)| = {len(enumerate_homs(D, X))}, "
          f"|Hom(3_1, Conj(Aut d15))| = {len(enumerate_actions(D, X))}")


if __name__ == "__main__":
    main()
