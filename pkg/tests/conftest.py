from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from qderiv.quandle import (abelian4, affine, all_quandles, dihedral, is_abelian, relabel, swap3,
                            takasaki, trivial)

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# every quandle of order <= 4 up to isomorphism, plus a spread of order-5 ones
SMALL = [q for n in range(1, 5) for q in all_quandles(n)]
ORDER5 = [dihedral(5), affine(5, 2), affine(5, 3), trivial(5)]
TARGETS = SMALL + ORDER5
ABELIAN_TARGETS = [q for q in TARGETS if is_abelian(q)]
NAMED = {"d3": dihedral(3), "x4": abelian4(), "swap3": swap3(), "t2": trivial(2),
         "k22": takasaki([2, 2]), "d5": dihedral(5)}


def quandles(pool=None):
    pool = TARGETS if pool is None else pool
    return st.sampled_from(pool)


@st.composite
def relabeled(draw, pool=None):
    q = draw(quandles(pool))
    g = draw(st.permutations(range(q.n)))
    return q, tuple(g), relabel(q, g)


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def small_diagrams():
    """Classical diagrams with at most four crossings."""
    from qderiv.diagram import builtin, parse_gauss, r1_add, r2_add

    U, T = builtin("unknot"), builtin("3_1")
    return {"unknot": U, "kink": parse_gauss("O1+ U1+"), "unknot_r2": r2_add(U, 1, 2),
            "3_1": T, "4_1": builtin("4_1"), "3_1_r1": r1_add(T, 2, -1, "right")}
