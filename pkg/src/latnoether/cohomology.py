"""
Tate cohomology of lattices: H^0-hat, H^-1-hat and H^1.

The fast paths use generators of H where that is enough ((gh - 1) = g(h - 1) + (g - 1)).
bar_oracle recomputes the same groups from full cochain complexes over every element and
every pair, and exists to check the fast paths.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple
import logging

from .config import get_caps
from .errors import CapExceeded, GroupMismatch, ValidationError
from .exact_linalg import (
    FinAbGroup,
    IntMatrix,
    coordinates,
    cokernel,
    hstack,
    smith_form,
    subquotient,
    vstack,
)
from .group_core import Subgroup, subgroup_reps
from .lattice_core import Lattice, fixed_basis
from .utils import sweep_sync

logger = logging.getLogger(__name__)


def _norm(H: Subgroup, M: Lattice) -> IntMatrix:
    total = IntMatrix.zeros(M.rank, M.rank)
    for h in H.elements:
        total = total + M.act(h)
    return total


def _pure_kernel(A: IntMatrix) -> IntMatrix:
    form = smith_form(A)
    return form.V.select_columns(range(form.rank, A.cols))


def tate_hat0(H: Subgroup, M: Lattice) -> FinAbGroup:
    """M^H / N_H M."""
    fixed = fixed_basis(M, H.generators)
    if fixed.cols == 0:
        return FinAbGroup()
    return cokernel(coordinates(fixed, _norm(H, M)))


def _augmentation_span(M: Lattice, elements) -> IntMatrix:
    identity = IntMatrix.identity(M.rank)
    return hstack([M.act(s) - identity for s in elements], rows=M.rank)


def tate_hat_minus1(H: Subgroup, M: Lattice) -> FinAbGroup:
    """ker(N_H) / I_H M with I_H M spanned by (s - 1) M over generators s of H."""
    kernel_basis = _pure_kernel(_norm(H, M))
    if kernel_basis.cols == 0:
        return FinAbGroup()
    return subquotient(kernel_basis, _augmentation_span(M, H.generators))


def h1_cocycles(H: Subgroup, M: Lattice) -> FinAbGroup:
    """
    H^1(H, M) as Z^1 / B^1 on cochains f: H -> M.

    Unknowns are f(h) for every h in H. The rows impose f(sh) = f(s) + s f(h) for
    generators s and all h, which implies the cocycle identity for every pair.

    Raises:
        CapExceeded: |H| * rank(M) exceeds the configured work cap
    """
    caps = get_caps()
    work = H.order * M.rank
    if work > caps.h1_work:
        raise CapExceeded(f"H^1 needs {work} unknowns, cap is {caps.h1_work}")
    if M.rank == 0 or H.order == 1:
        return FinAbGroup()
    G = M.group
    r = M.rank
    position = {h: i for i, h in enumerate(H.elements)}
    n = H.order * r
    rows: List[List[int]] = []
    for s in H.generators:
        rho_s = M.act(s)
        for h in H.elements:
            sh = G.mul[s][h]
            for i in range(r):
                row = [0] * n
                row[position[sh] * r + i] += 1
                row[position[s] * r + i] -= 1
                for j in range(r):
                    row[position[h] * r + j] -= rho_s[i, j]
                rows.append(row)
    cocycles = _pure_kernel(IntMatrix.from_rows(rows, cols=n))
    identity = IntMatrix.identity(r)
    coboundaries = vstack([M.act(h) - identity for h in H.elements], cols=r)
    return subquotient(cocycles, coboundaries)


def bar_oracle(H: Subgroup, M: Lattice, degree: int) -> FinAbGroup:
    """
    Degree -1, 0 or 1 from the full standard complex with no generator shortcuts.

    Raises:
        CapExceeded: |H| > 8 or rank > 6
        ValidationError: unsupported degree
    """
    if H.order > 8 or M.rank > 6:
        raise CapExceeded(f"bar oracle is limited to |H| <= 8 and rank <= 6, got {H.order} and {M.rank}")
    r = M.rank
    identity = IntMatrix.identity(r)
    if degree == 0:
        if r == 0:
            return FinAbGroup()
        fixed = _pure_kernel(vstack([M.act(h) - identity for h in H.elements], cols=r))
        if fixed.cols == 0:
            return FinAbGroup()
        return cokernel(coordinates(fixed, _norm(H, M)))
    if degree == -1:
        kernel_basis = _pure_kernel(_norm(H, M))
        if kernel_basis.cols == 0:
            return FinAbGroup()
        return subquotient(kernel_basis, _augmentation_span(M, H.elements))
    if degree == 1:
        if r == 0:
            return FinAbGroup()
        G = M.group
        elements = H.elements
        position = {h: i for i, h in enumerate(elements)}
        n = len(elements) * r
        rows = []
        # d f (g, h) = g f(h) - f(gh) + f(g)
        for g in elements:
            rho_g = M.act(g)
            for h in elements:
                gh = G.mul[g][h]
                for i in range(r):
                    row = [0] * n
                    for j in range(r):
                        row[position[h] * r + j] += rho_g[i, j]
                    row[position[gh] * r + i] -= 1
                    row[position[g] * r + i] += 1
                    rows.append(row)
        cocycles = _pure_kernel(IntMatrix.from_rows(rows, cols=n))
        coboundaries = vstack([M.act(h) - identity for h in elements], cols=r)
        return subquotient(cocycles, coboundaries)
    raise ValidationError(f"bar oracle supports degrees -1, 0 and 1, not {degree}")


@dataclass(frozen=True)
class CohomologyEntry:
    key: str
    subgroup: Subgroup
    hat_minus1: FinAbGroup
    hat0: FinAbGroup
    h1: FinAbGroup


@dataclass(frozen=True)
class CohomologyReport:
    lattice: Lattice
    entries: Tuple[CohomologyEntry, ...]

    @property
    def flabby(self) -> bool:
        return all(e.hat_minus1.is_trivial for e in self.entries)

    @property
    def coflabby(self) -> bool:
        return all(e.h1.is_trivial for e in self.entries)

    def entry(self, key: str) -> CohomologyEntry:
        for e in self.entries:
            if e.key == key:
                return e
        raise KeyError(key)

    def table(self) -> Dict[str, Tuple[FinAbGroup, FinAbGroup, FinAbGroup]]:
        return {e.key: (e.hat_minus1, e.hat0, e.h1) for e in self.entries}


def subgroup_keys(reps: List[Subgroup]) -> List[str]:
    """'order.index' keys, index counted from 1 within each order."""
    counts: Dict[int, int] = {}
    keys = []
    for H in reps:
        counts[H.order] = counts.get(H.order, 0) + 1
        keys.append(f"{H.order}.{counts[H.order]}")
    return keys


def classify(M: Lattice, jobs: Optional[int] = None) -> CohomologyReport:
    """All three groups on every conjugacy class representative of subgroups."""
    reps = subgroup_reps(M.group)
    keys = subgroup_keys(reps)
    _ = M.action_map  # filled once, before any worker thread reads it

    def evaluate(item: Tuple[str, Subgroup]) -> CohomologyEntry:
        key, H = item
        return CohomologyEntry(key, H, tate_hat_minus1(H, M), tate_hat0(H, M), h1_cocycles(H, M))

    entries = sweep_sync(evaluate, list(zip(keys, reps)), jobs)
    logger.info("classified %s over %d subgroup classes", M, len(entries))
    return CohomologyReport(M, tuple(entries))


def flabby_obstruction(M: Lattice) -> Optional[Tuple[Subgroup, FinAbGroup]]:
    for H in subgroup_reps(M.group):
        value = tate_hat_minus1(H, M)
        if not value.is_trivial:
            return H, value
    return None


def coflabby_obstruction(M: Lattice) -> Optional[Tuple[Subgroup, FinAbGroup]]:
    for H in subgroup_reps(M.group):
        value = h1_cocycles(H, M)
        if not value.is_trivial:
            return H, value
    return None


def is_flabby(M: Lattice) -> bool:
    return flabby_obstruction(M) is None


def is_coflabby(M: Lattice) -> bool:
    return coflabby_obstruction(M) is None


def cohomology_table_equal(E1: Lattice, E2: Lattice, jobs: Optional[int] = None) -> bool:
    """Compare the classify tables of two lattices over the same group."""
    if E1.group != E2.group:
        raise GroupMismatch("lattices live over different groups")
    return classify(E1, jobs).table() == classify(E2, jobs).table()
