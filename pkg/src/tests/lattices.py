"""Hypothesis strategies for small lattices over small groups."""

from functools import lru_cache

from hypothesis import strategies as st

from latnoether import IntMatrix, dual_lattice, induced_lattice, standard_group, subgroup_reps
from latnoether.exact_linalg import kernel
from latnoether.lattice_core import conjugate, direct_sum, sublattice

SMALL_GROUPS = ("C2", "C3", "C4", "C2xC2", "S3", "D4", "Q8")


@lru_cache(maxsize=None)
def pieces(name, max_rank):
    """Permutation lattices, augmentation ideals and their duals of rank at most max_rank."""
    G = standard_group(name)
    found = []
    for H in subgroup_reps(G):
        P = induced_lattice(G, H)
        if P.rank <= max_rank:
            found.append(P)
        if 1 < P.rank <= max_rank + 1:
            ideal, _ = sublattice(P, kernel(IntMatrix.from_rows([[1] * P.rank])))
            found.extend([ideal, dual_lattice(ideal)])
    return tuple(found)


@st.composite
def unimodular_matrices(draw, n):
    T = IntMatrix.identity(n)
    if n < 2:
        return T.scale(draw(st.sampled_from([1, -1])))
    for _ in range(draw(st.integers(0, 6))):
        i = draw(st.integers(0, n - 1))
        j = draw(st.integers(0, n - 2))
        j = j if j < i else j + 1
        rows = T.to_list()
        k = draw(st.integers(-2, 2))
        rows[i] = [a + k * b for a, b in zip(rows[i], rows[j])]
        T = IntMatrix.from_rows(rows)
    return T


@st.composite
def lattices(draw, groups=SMALL_GROUPS, max_rank=4, scramble=True):
    """A direct sum of pieces over one group, optionally in a random basis."""
    name = draw(st.sampled_from(groups))
    available = pieces(name, max_rank)
    chosen = [draw(st.sampled_from(available))]
    for _ in range(draw(st.integers(0, 2))):
        room = max_rank - sum(L.rank for L in chosen)
        fitting = [L for L in available if L.rank <= room]
        if not fitting:
            break
        chosen.append(draw(st.sampled_from(fitting)))
    L = direct_sum(*chosen) if len(chosen) > 1 else chosen[0]
    if scramble and L.rank:
        L = conjugate(L, draw(unimodular_matrices(L.rank)))
    return L
