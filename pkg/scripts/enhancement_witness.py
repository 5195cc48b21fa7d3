"""4_1 and 5_2 agree on colorings and hom quandles over d11 but not on
derivation invariants."""
from qderiv.coloring import hom_quandle
from qderiv.derivations import derivation_data
from qderiv.diagram import builtin
from qderiv.quandle import are_isomorphic, dihedral


def main():
    X = dihedral(11)
    homs = {}
    for name in ("4_1", "5_2"):
        D = builtin(name)
        data = derivation_data(D, X)
        H, _ = hom_quandle(D, X)
        homs[name] = H
        nonconst = sum(1 for a, d in zip(data.actions, data.derivations) if len(set(a.values)) > 1 and d)
        print(f"{name}: homs {len(data.homs)}, actions {len(data.actions)}, polynomial {data.polynomial()}, "
              f"total size {data.total_size()}, nonempty Der for non-constant actions {nonconst}")
    iso = are_isomorphic(homs["4_1"], homs["5_2"]) is not None
    print(f"hom quandles isomorphic: {iso}")


if __name__ == "__main__":
    main()
