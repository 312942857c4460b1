"""
Flabby resolutions, the flabby class map and invertibility decisions.

A resolution 0 -> M -> P -> E -> 0 is built by dualising a permutation cover
P -> dual(M) that is surjective on H-fixed vectors for every subgroup H. The kernel
of such a cover is coflabby, so its dual E is flabby.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union
import logging

from sympy import Poly, cyclotomic_poly, symbols, totient
from sympy.ntheory import mobius

from .cohomology import coflabby_obstruction, flabby_obstruction, is_coflabby, is_flabby
from .config import get_caps
from .errors import CapExceeded, InternalFlabbyCheckFailed
from .exact_linalg import (
    IntMatrix,
    coordinates,
    cokernel,
    kernel,
    smith_form,
    small_vectors,
    solve,
)
from .group_core import FiniteGroup, Subgroup, subgroup_reps, sylow_all_cyclic
from .lattice_core import (
    Lattice,
    LatticeMap,
    Unknown,
    deflate,
    direct_sum,
    dual_lattice,
    fixed_basis,
    induced_lattice,
    inflate,
    is_permutation_matrix,
    left_cosets,
    sublattice,
    trivial_kernel,
    zero_lattice,
)

logger = logging.getLogger(__name__)

T = symbols("T")


@dataclass(frozen=True)
class Resolution:
    """
    0 -> M -> P -> E -> 0 with P = sum of Z[G/H] over cover, in that order.
    """

    M: Lattice
    P: Lattice
    E: Lattice
    inject: LatticeMap
    project: LatticeMap
    cover: Tuple[Subgroup, ...]


@dataclass(frozen=True)
class Yes:
    reason: str
    certificate: Optional[IntMatrix] = None
    verdict: str = "yes"


@dataclass(frozen=True)
class No:
    witness: str
    verdict: str = "no"


@dataclass(frozen=True)
class RhoVerdict:
    resolution: Resolution
    invertible: Union[Yes, No, Unknown]
    acting_group: FiniteGroup
    conclusion: Optional[str] = None


@dataclass(frozen=True)
class Basis:
    matrix: IntMatrix
    orbit_types: Tuple[int, ...]
    verdict: str = "basis"


@dataclass(frozen=True)
class NotPermutation:
    witness: str
    verdict: str = "not-permutation"


def _covers(P: Lattice, phi: IntMatrix, X: Lattice, H: Subgroup) -> bool:
    target = fixed_basis(X, H.generators)
    if target.cols == 0:
        return True
    if P.rank == 0:
        return False
    image = phi @ fixed_basis(P, H.generators)
    return cokernel(coordinates(target, image)).is_trivial


def _assemble(X: Lattice, blocks: Sequence[Tuple[Subgroup, Tuple[int, ...]]]) -> Tuple[Lattice, IntMatrix]:
    G = X.group
    if not blocks:
        return zero_lattice(G), IntMatrix.zeros(X.rank, 0)
    P = direct_sum(*[induced_lattice(G, H) for H, _ in blocks])
    columns = []
    for H, v in blocks:
        reps, _ = left_cosets(G, H)
        columns.extend(X.act(g).apply(v) for g in reps)
    return P, IntMatrix.from_columns(columns, rows=X.rank)


def permutation_cover(X: Lattice, compact: bool = False) -> Tuple[Lattice, IntMatrix, Tuple[Subgroup, ...]]:
    """
    A permutation lattice P with phi: P -> X surjective on H-fixed vectors for every H.

    Subgroup representatives are visited from largest to smallest. The full cover adds
    Z[G/H] for every basis vector of X^H; the compact cover only adds blocks while the
    image of P^H falls short of X^H.

    Returns:
        (P, phi, cover) where cover lists the H of each Z[G/H] block in order
    """
    blocks: List[Tuple[Subgroup, Tuple[int, ...]]] = []
    for H in reversed(subgroup_reps(X.group)):
        basis = fixed_basis(X, H.generators)
        for v in basis.columns():
            if compact:
                P, phi = _assemble(X, blocks)
                if _covers(P, phi, X, H):
                    break
            blocks.append((H, v))
    P, phi = _assemble(X, blocks)
    logger.debug("permutation cover of %s has rank %d in %d blocks", X, P.rank, len(blocks))
    return P, phi, tuple(H for H, _ in blocks)


def _is_surjective(A: IntMatrix) -> bool:
    form = smith_form(A)
    return form.rank == A.rows and all(d == 1 for d in form.diagonal)


def flabby_resolution(M: Lattice, compact: bool = False) -> Resolution:
    """
    Flabby resolution 0 -> M -> P -> E -> 0.

    Args:
        M: Lattice to resolve
        compact: Use the compact permutation cover (smaller P, same flabby class)

    Raises:
        InternalFlabbyCheckFailed: exactness, equivariance or flabbiness fails
    """
    X = dual_lattice(M)
    P, phi, cover = permutation_cover(X, compact=compact)
    K_basis = kernel(phi) if P.rank else IntMatrix.zeros(0, 0)
    K, _ = sublattice(P, K_basis)
    E = dual_lattice(K).with_label(f"E({M.label})" if M.label else "E")
    inject = LatticeMap(M, P, phi.T)
    project = LatticeMap(P, E, K_basis.T)

    if not (inject.is_intertwiner() and project.is_intertwiner()):
        raise InternalFlabbyCheckFailed("resolution maps are not equivariant", location=str(M))
    if not (project.matrix @ inject.matrix).is_zero():
        raise InternalFlabbyCheckFailed("project after inject is not zero", location=str(M))
    if M.rank + E.rank != P.rank:
        raise InternalFlabbyCheckFailed("ranks do not add up", location=str(M))
    if M.rank and not _is_surjective(inject.matrix.T):
        raise InternalFlabbyCheckFailed("image of M is not pure", location=str(M))
    if E.rank and not _is_surjective(project.matrix):
        raise InternalFlabbyCheckFailed("projection is not surjective", location=str(M))
    obstruction = flabby_obstruction(E)
    if obstruction is not None:
        H, value = obstruction
        raise InternalFlabbyCheckFailed(f"E has H^-1 = {value} at subgroup of order {H.order}", location=str(M))
    logger.info("resolved %s: rank P = %d, rank E = %d", M, P.rank, E.rank)
    return Resolution(M, P, E, inject, project, cover)


def split_section(E: Lattice) -> Optional[IntMatrix]:
    """
    An equivariant section of the compact permutation cover of E, or None.

    The cover Q -> E is surjective on fixed vectors, so its kernel is coflabby and E is
    invertible exactly when the cover splits. Equivariant maps E -> Z[G/H] correspond to
    H-invariant functionals psi, the coset coordinate c being psi rho(g_c^-1). The section
    equation sum_b sum_c rho(g_c) t_b psi_b rho(g_c^-1) = I is solved over Z.

    Raises:
        CapExceeded: rank of E exceeds the configured rank cap
    """
    caps = get_caps()
    if E.rank > caps.rank:
        raise CapExceeded(f"rank {E.rank} exceeds the cap {caps.rank}", location=str(E))
    G = E.group
    r = E.rank
    if r == 0:
        return IntMatrix.zeros(0, 0)
    Q, phi, cover = permutation_cover(E, compact=True)
    dual = dual_lattice(E)
    unknowns: List[Tuple[int, Tuple[int, ...]]] = []
    columns: List[List[int]] = []
    offset = 0
    for b, H in enumerate(cover):
        reps, _ = left_cosets(G, H)
        t_b = phi.column(offset)
        for psi in fixed_basis(dual, H.generators).columns():
            total = IntMatrix.zeros(r, r)
            for g in reps:
                left = IntMatrix.column_vector(E.act(g).apply(t_b))
                right = IntMatrix.from_rows([psi]) @ E.act(G.inverse(g))
                total = total + left @ right
            unknowns.append((b, psi))
            columns.append([x for row in total.data for x in row])
        offset += len(reps)
    target = [1 if i == j else 0 for i in range(r) for j in range(r)]
    if not columns:
        return None
    solution = solve(IntMatrix.from_columns(columns, rows=r * r), target)
    if solution is None:
        return None
    rows: List[List[int]] = []
    for b, H in enumerate(cover):
        reps, _ = left_cosets(G, H)
        psi_b = [0] * r
        for (block, psi), weight in zip(unknowns, solution):
            if block == b and weight:
                psi_b = [a + weight * x for a, x in zip(psi_b, psi)]
        functional = IntMatrix.from_rows([psi_b])
        for g in reps:
            rows.append(list((functional @ E.act(G.inverse(g))).row(0)))
    section = IntMatrix.from_rows(rows, cols=r)
    if phi @ section != IntMatrix.identity(r) or not LatticeMap(E, Q, section).is_intertwiner():
        raise InternalFlabbyCheckFailed("computed section does not split the cover", location=str(E))
    return section


def permutation_projective_witnesses(E: Lattice) -> List[str]:
    """
    Reasons E is not invertible: H^-1 or H^1 nonzero somewhere, or no splitting of its
    permutation cover. An empty list means E is invertible.
    """
    witnesses = []
    obstruction = flabby_obstruction(E)
    if obstruction is not None:
        H, value = obstruction
        witnesses.append(f"H^-1 at subgroup of order {H.order} {list(H.elements)} is {value}")
    try:
        obstruction = coflabby_obstruction(E)
    except CapExceeded:
        obstruction = None
    if obstruction is not None:
        H, value = obstruction
        witnesses.append(f"H^1 at subgroup of order {H.order} {list(H.elements)} is {value}")
    if not witnesses and split_section(E) is None:
        witnesses.append("no-section: the permutation cover does not split")
    return witnesses


def invertible_verdict(E: Lattice) -> Union[Yes, No, Unknown]:
    """Exact invertibility of E, with a bounded permutation search past the rank cap."""
    obstruction = flabby_obstruction(E)
    if obstruction is not None:
        H, value = obstruction
        return No(f"H^-1 at subgroup of order {H.order} {list(H.elements)} is {value}")
    try:
        obstruction = coflabby_obstruction(E)
        if obstruction is not None:
            H, value = obstruction
            return No(f"H^1 at subgroup of order {H.order} {list(H.elements)} is {value}")
        section = split_section(E)
    except CapExceeded as exc:
        logger.info("split test skipped (%s); searching for a permutation basis", exc)
        found = permutation_certificate(E)
        if isinstance(found, Basis):
            return Yes("certificate", found.matrix)
        return Unknown(f"split test over caps and no permutation basis found ({exc})")
    if section is None:
        return No("no-section")
    return Yes("certificate", section)


def rho_invertible(M: Lattice, deflate_kernel: bool = True) -> RhoVerdict:
    """
    Decide whether the flabby class of M is invertible.

    The trivially acting normal subgroup is divided out first. A group whose Sylow
    subgroups are all cyclic makes every flabby lattice invertible; otherwise E is
    checked for obstructions and then by the split test.
    """
    lattice = M
    if deflate_kernel:
        pi0 = trivial_kernel(M)
        if pi0.order > 1:
            lattice, _ = deflate(M, pi0)
            logger.info("acting group reduced from order %d to %d", M.group.order, lattice.group.order)
    resolution = flabby_resolution(lattice, compact=True)
    group = lattice.group
    if sylow_all_cyclic(group):
        verdict: Union[Yes, No, Unknown] = Yes("endo-miyata")
    else:
        verdict = invertible_verdict(resolution.E)
    conclusion = None
    if isinstance(verdict, Yes):
        conclusion = f"rho(M) is invertible ({verdict.reason}); the invariant field of M is retract rational by Saltman's criterion"
    elif isinstance(verdict, No):
        conclusion = "rho(M) is not invertible; the invariant field of M is not retract rational by Saltman's criterion"
    return RhoVerdict(resolution, verdict, group, conclusion)


def _orbit_counts(G: FiniteGroup, reps: Sequence[Subgroup]) -> IntMatrix:
    """Entry (K, H) is the number of K-orbits on G/H."""
    rows = []
    for K in reps:
        row = []
        for H in reps:
            _, index = left_cosets(G, H)
            orbits = {frozenset(index[G.mul[k][x]] for k in K.elements) for x in range(G.order)}
            row.append(len(orbits))
        rows.append(row)
    return IntMatrix.from_rows(rows, cols=len(reps))


def _is_permutation_charpoly(coefficients: Sequence[int]) -> bool:
    """True when the polynomial is a product of factors T^l - 1."""
    poly = Poly(list(coefficients), T)
    _, factors = poly.factor_list()
    multiplicity: Dict[int, int] = {}
    for factor, power in factors:
        degree = factor.degree()
        match = None
        for d in range(1, 2 * degree * degree + 3):
            if totient(d) == degree and Poly(cyclotomic_poly(d, T), T) == factor.monic():
                match = d
                break
        if match is None or factor.LC() not in (1, -1):
            return False
        multiplicity[match] = multiplicity.get(match, 0) + power
    if not multiplicity:
        return True
    top = max(multiplicity)
    for length in range(1, top + 1):
        cycles = sum(mobius(k) * multiplicity.get(length * k, 0) for k in range(1, top // length + 1))
        if cycles < 0:
            return False
    return True


def _permutation_witness(M: Lattice, reps: Sequence[Subgroup]) -> Tuple[Optional[str], Optional[Tuple[int, ...]]]:
    obstruction = flabby_obstruction(M)
    if obstruction is not None:
        H, value = obstruction
        return f"H^-1 at subgroup of order {H.order} is {value}", None
    try:
        obstruction = coflabby_obstruction(M)
    except CapExceeded:
        obstruction = None
    if obstruction is not None:
        H, value = obstruction
        return f"H^1 at subgroup of order {H.order} is {value}", None
    for g in range(M.group.order):
        if M.act(g).trace() < 0:
            return f"element {g} has negative trace", None
        if not _is_permutation_charpoly(M.act(g).charpoly()):
            return f"characteristic polynomial of element {g} is not that of a permutation", None
    counts_matrix = _orbit_counts(M.group, reps)
    ranks = [fixed_basis(M, K.generators).cols for K in reps]
    solution = solve(counts_matrix, ranks)
    if solution is None:
        return "fixed-sublattice ranks match no sum of Z[G/H]", None
    if counts_matrix.det() != 0:
        if any(n < 0 for n in solution):
            return "fixed-sublattice ranks force a negative multiplicity", None
        return None, tuple(solution)
    return None, None


def permutation_certificate(
    M: Lattice, height: Optional[int] = None, budget: Optional[int] = None
) -> Union[Basis, NotPermutation, Unknown]:
    """
    Search for a Z-basis of M permuted by the group.

    Invariant witnesses are tried first. The search then builds the basis orbit by orbit:
    an orbit of type G/H starts at a vector of M^H of bounded height, and partial bases
    must stay pure.

    Returns:
        Basis with the verified change of basis, NotPermutation with a witness, or Unknown
    """
    caps = get_caps()
    height = height or caps.height
    limit = budget or caps.budget
    G = M.group
    ordered = subgroup_reps(G)
    witness, multiplicities = _permutation_witness(M, ordered)
    if witness is not None:
        return NotPermutation(witness)
    # small orbits first
    reps = list(reversed(ordered))
    wanted = list(reversed(multiplicities)) if multiplicities is not None else None
    fixed = [fixed_basis(M, H.generators) for H in reps]
    cosets = [left_cosets(G, H)[0] for H in reps]
    nodes = 0
    columns: List[Tuple[int, ...]] = []
    types: List[int] = []

    def pure(vectors: List[Tuple[int, ...]]) -> bool:
        form = smith_form(IntMatrix.from_columns(vectors, rows=M.rank))
        return form.rank == len(vectors) and all(d == 1 for d in form.diagonal)

    def descend(start: int, remaining: Optional[List[int]]) -> bool:
        nonlocal nodes
        if len(columns) == M.rank:
            return remaining is None or not any(remaining)
        for i in range(start, len(reps)):
            size = len(cosets[i])
            if size > M.rank - len(columns) or fixed[i].cols == 0:
                continue
            if remaining is not None and remaining[i] == 0:
                continue
            for coefficients in small_vectors(fixed[i].cols, height):
                nodes += 1
                if nodes > limit:
                    return False
                v = fixed[i].apply(coefficients)
                orbit = [M.act(g).apply(v) for g in cosets[i]]
                if len(set(orbit)) != size or not pure(columns + orbit):
                    continue
                columns.extend(orbit)
                types.append(reps[i].order)
                if remaining is not None:
                    remaining[i] -= 1
                if descend(i, remaining):
                    return True
                if remaining is not None:
                    remaining[i] += 1
                del columns[-size:]
                types.pop()
            if remaining is not None and remaining[i] > 0:
                return False
        return False

    if M.rank == 0:
        return Basis(IntMatrix.zeros(0, 0), ())
    if descend(0, wanted):
        B = IntMatrix.from_columns(columns, rows=M.rank)
        B_inv = B.inverse()
        if all(is_permutation_matrix(B_inv @ m @ B) for m in M.matrices):
            return Basis(B, tuple(types))
        raise InternalFlabbyCheckFailed("permutation basis failed verification", location=str(M))
    return Unknown(f"no permutation basis up to height {height}", nodes=nodes)


def deflation_consistency(M: Lattice, N: Subgroup) -> Dict[str, bool]:
    """
    Compare properties of M over G and over G/N, for N acting trivially.

    Keys: permutation, flabby, coflabby, invertible, resolution (a resolution over G/N
    inflates to one with flabby E over G) and rho (same Yes/No verdict).
    """
    low, q = deflate(M, N)

    def kind(verdict) -> str:
        return verdict.verdict

    result = {
        "permutation": kind(permutation_certificate(M)) == kind(permutation_certificate(low)),
        "flabby": is_flabby(M) == is_flabby(low),
        "coflabby": is_coflabby(M) == is_coflabby(low),
        "invertible": kind(invertible_verdict(M)) == kind(invertible_verdict(low)),
    }
    resolution = flabby_resolution(low, compact=True)
    result["resolution"] = is_flabby(inflate(resolution.E, q))
    result["rho"] = kind(rho_invertible(M, deflate_kernel=False).invertible) == kind(
        rho_invertible(low, deflate_kernel=False).invertible)
    return result
