"""
pi-lattices and their calculus.

Vectors are columns. A lattice stores one integer matrix per group generator and
an element g acts through rho(g), with rho(gh) = rho(g) rho(h).
"""

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union
import logging

from .config import get_caps
from .errors import (
    ActionNotTrivialOnKernel,
    GroupMismatch,
    KernelNotStable,
    NotNormal,
    NotUnimodular,
    RelationViolated,
    ValidationError,
)
from .exact_linalg import (
    IntMatrix,
    block_diag,
    canonical_basis,
    hstack,
    kernel,
    right_inverse,
    small_vectors,
    smith_form,
    solve_matrix,
    vstack,
)
from .group_core import (
    FiniteGroup,
    Quotient,
    Subgroup,
    direct_product,
    normalizer,
    quotient_group,
    subgroup_as_group,
    subgroup_reps,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Lattice:
    """
    A Z-free module of finite rank with an integer matrix per group generator.

    Args:
        group: Acting group
        rank: Z-rank
        matrices: rank x rank matrices aligned with group.generators
        label: Optional name used in reports
    """

    group: FiniteGroup
    rank: int
    matrices: Tuple[IntMatrix, ...]
    label: Optional[str] = field(default=None, compare=False)
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @staticmethod
    def from_generators(
        group: FiniteGroup,
        action: Union[Mapping[str, Sequence[Sequence[int]]], Sequence[IntMatrix]],
        rank: Optional[int] = None,
        label: Optional[str] = None,
        validate: bool = True,
    ) -> "Lattice":
        """
        Build a lattice from generator matrices, given as a name -> rows mapping or as a list.

        Raises:
            ValidationError: a generator is missing or a matrix has the wrong shape
            NotUnimodular, RelationViolated: see validate_lattice
        """
        if isinstance(action, Mapping):
            missing = [name for name in group.generator_names if name not in action]
            if missing:
                raise ValidationError(f"no matrix for generator {missing[0]!r}", location=f"action.{missing[0]}")
            extra = [name for name in action if name not in group.generator_names]
            if extra:
                raise ValidationError(f"unknown generator {extra[0]!r}", location=f"action.{extra[0]}")
            matrices = [action[name] for name in group.generator_names]
        else:
            matrices = list(action)
            if len(matrices) != len(group.generators):
                raise ValidationError("one matrix per generator is required")
        matrices = tuple(m if isinstance(m, IntMatrix) else IntMatrix.from_rows(m) for m in matrices)
        if rank is None:
            rank = matrices[0].rows if matrices else 0
        for name, m in zip(group.generator_names, matrices):
            if m.rows != rank or m.cols != rank:
                raise ValidationError(f"matrix for {name} is {m.rows}x{m.cols}, expected {rank}x{rank}",
                                      location=f"action.{name}")
        lattice = Lattice(group, rank, matrices, label=label)
        if validate:
            validate_lattice(lattice)
        return lattice

    @property
    def action_map(self) -> Tuple[IntMatrix, ...]:
        """rho(g) for every element g."""
        cached = self._cache.get("action_map")
        if cached is None:
            cached = validate_lattice(self)
        return cached

    def act(self, g: int) -> IntMatrix:
        return self.action_map[g]

    def generator_matrix(self, name: str) -> IntMatrix:
        return self.matrices[self.group.generator_index(name)]

    def with_label(self, label: str) -> "Lattice":
        lattice = Lattice(self.group, self.rank, self.matrices, label=label)
        if "action_map" in self._cache:
            lattice._cache["action_map"] = self._cache["action_map"]
        return lattice

    def is_permutation(self) -> bool:
        """Every generator matrix is a 0/1 permutation matrix."""
        return all(is_permutation_matrix(m) for m in self.matrices)

    def __str__(self) -> str:
        return self.label or f"lattice of rank {self.rank} over {self.group}"


@dataclass(frozen=True)
class LatticeMap:
    source: Lattice
    target: Lattice
    matrix: IntMatrix

    def is_intertwiner(self) -> bool:
        if self.source.group != self.target.group:
            return False
        return all(
            t @ self.matrix == self.matrix @ s
            for s, t in zip(self.source.matrices, self.target.matrices)
        )

    def check(self) -> "LatticeMap":
        if (self.matrix.rows, self.matrix.cols) != (self.target.rank, self.source.rank):
            raise ValidationError("map matrix has the wrong shape")
        if not self.is_intertwiner():
            raise ValidationError("map does not intertwine the actions")
        return self

    def compose(self, other: "LatticeMap") -> "LatticeMap":
        """self after other."""
        return LatticeMap(other.source, self.target, self.matrix @ other.matrix)


def is_permutation_matrix(m: IntMatrix) -> bool:
    if not m.is_square:
        return False
    for row in m.data:
        if sorted(row) != [0] * (m.cols - 1) + [1]:
            return False
    return all(sum(col) == 1 for col in m.columns())


def permutation_matrix(perm: Sequence[int]) -> IntMatrix:
    """Column i carries a 1 in row perm[i]."""
    n = len(perm)
    rows = [[0] * n for _ in range(n)]
    for i, j in enumerate(perm):
        rows[j][i] = 1
    return IntMatrix.from_rows(rows, cols=n)


def validate_lattice(L: Lattice) -> Tuple[IntMatrix, ...]:
    """
    Check that the generator matrices define a homomorphism and return rho(g) for every element.

    Every edge x -> x*g of the Cayley graph is checked, which forces rho(xy) = rho(x) rho(y).

    Raises:
        NotUnimodular: a generator matrix has determinant other than +-1
        RelationViolated: two products of generators that agree in the group disagree as matrices
    """
    G = L.group
    for name, m in zip(G.generator_names, L.matrices):
        if abs(m.det()) != 1:
            raise NotUnimodular(f"matrix for {name} has determinant {m.det()}", location=name)
    images: List[Optional[IntMatrix]] = [None] * G.order
    images[G.identity] = IntMatrix.identity(L.rank)
    queue = deque([G.identity])
    while queue:
        x = queue.popleft()
        for position, (g, m) in enumerate(zip(G.generators, L.matrices)):
            y = G.mul[x][g]
            product = images[x] @ m
            if images[y] is None:
                images[y] = product
                queue.append(y)
            elif images[y] != product:
                word = " ".join(G.generator_names[i] for i in G.words[x] + (position,)) or "1"
                raise RelationViolated("generator matrices do not satisfy the group law", location=word)
    if any(image is None for image in images):
        raise ValidationError("generators do not reach every element")
    result = tuple(images)
    L._cache["action_map"] = result
    return result


def trivial_lattice(G: FiniteGroup, rank: int = 1) -> Lattice:
    identity = IntMatrix.identity(rank)
    return Lattice(G, rank, tuple(identity for _ in G.generators), label="Z" if rank == 1 else f"Z^{rank}")


def left_cosets(G: FiniteGroup, H: Subgroup) -> Tuple[List[int], Tuple[int, ...]]:
    """Representatives of gH ordered by least element, and the coset index of every element."""
    index = [-1] * G.order
    reps: List[int] = []
    for x in range(G.order):
        if index[x] < 0:
            for h in H.elements:
                index[G.mul[x][h]] = len(reps)
            reps.append(x)
    return reps, tuple(index)


def induced_lattice(G: FiniteGroup, H: Subgroup) -> Lattice:
    """The permutation lattice Z[G/H] on left cosets ordered by least element."""
    reps, index = left_cosets(G, H)
    matrices = tuple(permutation_matrix([index[G.mul[g][r]] for r in reps]) for g in G.generators)
    label = "Z[G]" if H.order == 1 else ("Z" if H.order == G.order else f"Z[G/H{H.order}]")
    return Lattice(G, len(reps), matrices, label=label)


def regular_lattice(G: FiniteGroup) -> Lattice:
    return induced_lattice(G, G.trivial_subgroup())


def dual_lattice(L: Lattice) -> Lattice:
    """g acts by the transpose of rho(g^-1)."""
    G = L.group
    matrices = tuple(L.act(G.inverse(g)).T for g in G.generators)
    label = f"dual({L.label})" if L.label else None
    return Lattice(G, L.rank, matrices, label=label)


def _same_group(A: Lattice, B: Lattice) -> None:
    if A.group != B.group:
        raise GroupMismatch(f"lattices live over different groups ({A.group} and {B.group})")


def direct_sum(*lattices: Lattice) -> Lattice:
    if not lattices:
        raise ValidationError("direct sum of nothing")
    first = lattices[0]
    for other in lattices[1:]:
        _same_group(first, other)
    matrices = tuple(block_diag([L.matrices[i] for L in lattices]) for i in range(len(first.group.generators)))
    labels = [L.label for L in lattices]
    label = " + ".join(labels) if all(labels) else None
    return Lattice(first.group, sum(L.rank for L in lattices), matrices, label=label)


def zero_lattice(G: FiniteGroup) -> Lattice:
    return Lattice(G, 0, tuple(IntMatrix.zeros(0, 0) for _ in G.generators), label="0")


def tensor_product(A: Lattice, B: Lattice) -> Lattice:
    """Diagonal action on A (x) B, basis a_i (x) b_j at index i*rank(B) + j."""
    _same_group(A, B)
    matrices = tuple(a.kron(b) for a, b in zip(A.matrices, B.matrices))
    return Lattice(A.group, A.rank * B.rank, matrices)


def tensor_outer(A: Lattice, B: Lattice, group: Optional[FiniteGroup] = None) -> Lattice:
    """
    A (x) B over A.group x B.group, generators of A's group first.

    Raises:
        GroupMismatch: a supplied group differs from the direct product table
    """
    product = direct_product(A.group, B.group)
    if group is not None:
        if group != product:
            raise GroupMismatch("supplied group is not the direct product of the two groups")
        product = group
    ia, ib = IntMatrix.identity(A.rank), IntMatrix.identity(B.rank)
    matrices = tuple(m.kron(ib) for m in A.matrices) + tuple(ia.kron(m) for m in B.matrices)
    return Lattice(product, A.rank * B.rank, matrices)


def conjugate(L: Lattice, T: IntMatrix) -> Lattice:
    """The same lattice in the basis given by the columns of the unimodular T."""
    if not T.is_unimodular():
        raise NotUnimodular("change of basis is not unimodular")
    T_inv = T.inverse()
    return Lattice(L.group, L.rank, tuple(T_inv @ m @ T for m in L.matrices), label=L.label)


def sublattice(L: Lattice, basis: IntMatrix, label: Optional[str] = None) -> Tuple[Lattice, LatticeMap]:
    """
    The G-stable sublattice spanned by the independent columns of basis.

    Raises:
        KernelNotStable: some generator moves the span off itself
    """
    if basis.rows != L.rank:
        raise ValidationError("basis vectors have the wrong length")
    matrices = []
    for name, m in zip(L.group.generator_names, L.matrices):
        x = solve_matrix(basis, m @ basis)
        if x is None:
            raise KernelNotStable(f"sublattice is not stable under {name}", location=name)
        matrices.append(x)
    sub = Lattice.from_generators(L.group, matrices, rank=basis.cols, label=label)
    return sub, LatticeMap(sub, L, basis)


def fixed_basis(L: Lattice, elements: Sequence[int]) -> IntMatrix:
    """Saturated basis of the vectors fixed by the given elements."""
    identity = IntMatrix.identity(L.rank)
    blocks = [L.act(h) - identity for h in elements]
    if not blocks:
        return identity
    return kernel(vstack(blocks, cols=L.rank))


def restrict(L: Lattice, H: Subgroup) -> Lattice:
    sub, embedding = subgroup_as_group(L.group, H)
    matrices = tuple(L.act(embedding[g]) for g in sub.generators)
    return Lattice(sub, L.rank, matrices, label=L.label)


def fixed_sublattice(L: Lattice, H: Subgroup, quotient: bool = False) -> Tuple[Lattice, LatticeMap]:
    """
    M^H with the action of the largest group that preserves it.

    For normal H the result is a G-lattice, or a G/H-lattice when quotient is set; the
    inclusion then starts from the G-lattice version. For a non-normal H the result lives
    over the normaliser of H and the inclusion lands in L restricted to it.

    Raises:
        NotNormal: quotient requested for a non-normal subgroup
    """
    basis = fixed_basis(L, H.generators)
    label = f"{L.label}^H{H.order}" if L.label else None
    if H.is_normal:
        fixed, inclusion = sublattice(L, basis, label=label)
        if quotient:
            q = quotient_group(L.group, H)
            return Lattice.from_generators(q.group, fixed.matrices, rank=fixed.rank, label=label), inclusion
        return fixed, inclusion
    if quotient:
        raise NotNormal(f"subgroup {list(H.elements)} is not normal", location=str(L.group))
    N = normalizer(L.group, H)
    ambient = restrict(L, N)
    return sublattice(ambient, basis, label=label)


def inflate(L: Lattice, q: Quotient) -> Lattice:
    """Pull a G/N-lattice back along the projection G -> G/N."""
    if L.group != q.group:
        raise GroupMismatch("lattice does not live over the quotient group")
    G = q.parent
    matrices = tuple(L.act(q.projection[g]) for g in G.generators)
    return Lattice(G, L.rank, matrices, label=L.label)


def deflate(L: Lattice, N: Subgroup) -> Tuple[Lattice, Quotient]:
    """
    Push a G-lattice on which N acts trivially down to G/N.

    Raises:
        ActionNotTrivialOnKernel: some element of N acts non-trivially
    """
    identity = IntMatrix.identity(L.rank)
    for n in N.elements:
        if L.act(n) != identity:
            raise ActionNotTrivialOnKernel(f"element {n} of the kernel acts non-trivially", location=str(L))
    q = quotient_group(L.group, N)
    matrices = tuple(L.act(g) for g in L.group.generators)
    return Lattice(q.group, L.rank, matrices, label=L.label), q


def restrict_or_inflate(L: Lattice, along: Union[Subgroup, Quotient]) -> Lattice:
    """
    Move L along a subgroup inclusion (restriction) or a quotient projection.

    A quotient whose group is L's group inflates to the parent; a quotient whose parent
    is L's group deflates and requires N to act trivially.
    """
    if isinstance(along, Subgroup):
        return restrict(L, along)
    if L.group == along.group:
        return inflate(L, along)
    if L.group == along.parent:
        return deflate(L, along.kernel)[0]
    raise GroupMismatch("quotient is unrelated to the lattice's group")


def trivial_kernel(L: Lattice) -> Subgroup:
    """pi_0 = {g : rho(g) = I}."""
    identity = IntMatrix.identity(L.rank)
    elements = tuple(g for g in range(L.group.order) if L.act(g) == identity)
    return Subgroup(L.group, elements, True)


def character_kernel_sublattice(
    P: Lattice, characters: Sequence[Tuple[int, Sequence[int]]], label: Optional[str] = None
) -> Tuple[Lattice, LatticeMap]:
    """
    M = {x in P : row_i . x = 0 mod n_i for every character (n_i, row_i)}.

    Args:
        P: Ambient lattice
        characters: Pairs of modulus and row vector
        label: Optional label of the result

    Returns:
        The sublattice with its induced action and the inclusion; [P : M] is |det| of the inclusion

    Raises:
        KernelNotStable: M is not G-stable
    """
    r = P.rank
    k = len(characters)
    if k == 0:
        return P, LatticeMap(P, P, IntMatrix.identity(r))
    rows = []
    for position, (n, row) in enumerate(characters):
        if len(row) != r:
            raise ValidationError("character row has the wrong length", location=f"characters[{position}]")
        rows.append([int(x) % n for x in row] + [n if j == position else 0 for j in range(k)])
    system = IntMatrix.from_rows(rows, cols=r + k)
    solutions = kernel(system)
    basis = canonical_basis(solutions.select_rows(range(r)))
    return sublattice(P, basis, label=label)


@dataclass(frozen=True)
class Isomorphic:
    matrix: IntMatrix
    verdict: str = "isomorphic"


@dataclass(frozen=True)
class NotIsomorphic:
    witness: str
    verdict: str = "not-isomorphic"


@dataclass(frozen=True)
class Unknown:
    reason: str
    nodes: int = 0
    verdict: str = "unknown"


IsoVerdict = Union[Isomorphic, NotIsomorphic, Unknown]


def _invariant_witness(A: Lattice, B: Lattice) -> Optional[str]:
    from .cohomology import tate_hat0, tate_hat_minus1

    if A.rank != B.rank:
        return f"rank {A.rank} != {B.rank}"
    G = A.group
    for g in range(G.order):
        if A.act(g).charpoly() != B.act(g).charpoly():
            return f"characteristic polynomial of element {g} differs"
    identity = IntMatrix.identity(A.rank)
    for name, ma, mb in zip(G.generator_names, A.matrices, B.matrices):
        if smith_form(ma - identity).diagonal != smith_form(mb - identity).diagonal:
            return f"elementary divisors of {name} - 1 differ"
    for H in subgroup_reps(G):
        for degree, fn in (("H^0", tate_hat0), ("H^-1", tate_hat_minus1)):
            a, b = fn(H, A), fn(H, B)
            if a != b:
                return f"{degree} at subgroup of order {H.order} {list(H.elements)}: {a} != {b}"
    return None


def orbit_matrix(L: Lattice, v: Sequence[int]) -> IntMatrix:
    """Columns rho(g) v for every element g."""
    return IntMatrix.from_columns([L.act(g).apply(v) for g in range(L.group.order)], rows=L.rank)


def _spans_everything(W: IntMatrix) -> bool:
    form = smith_form(W)
    return form.rank == W.rows and all(d == 1 for d in form.diagonal)


def module_generators(L: Lattice, height: int = 1, tries: int = 2000) -> List[Tuple[int, ...]]:
    """
    A short list of vectors whose orbits span L over Z.

    A single cyclic generator is tried first among small vectors; otherwise standard basis
    vectors are added greedily.
    """
    if L.rank == 0:
        return []
    for count, v in enumerate(small_vectors(L.rank, height, max_support=3)):
        if count >= tries:
            break
        if _spans_everything(orbit_matrix(L, v)):
            return [v]
    gens: List[Tuple[int, ...]] = []
    blocks: List[IntMatrix] = []
    for i in range(L.rank):
        e = tuple(1 if j == i else 0 for j in range(L.rank))
        if blocks and solve_matrix(hstack(blocks), IntMatrix.column_vector(e)) is not None:
            continue
        gens.append(e)
        blocks.append(orbit_matrix(L, e))
        if _spans_everything(hstack(blocks)):
            break
    return gens


def coordinate_blocks(L: Lattice) -> List[List[int]]:
    """Finest partition of coordinates that every generator matrix respects."""
    parent = list(range(L.rank))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for m in L.matrices:
        for i in range(m.rows):
            for j in range(m.cols):
                if m[i, j]:
                    parent[find(i)] = find(j)
    groups: Dict[int, List[int]] = {}
    for i in range(L.rank):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def _block(L: Lattice, coords: List[int]) -> Lattice:
    return Lattice(L.group, len(coords), tuple(m.select_rows(coords).select_columns(coords) for m in L.matrices))


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.nodes = 0

    def spend(self) -> bool:
        self.nodes += 1
        return self.nodes <= self.limit


def _match_blocks(A: Lattice, B: Lattice, height: int, budget: _Budget) -> Optional[IntMatrix]:
    blocks_a = coordinate_blocks(A)
    blocks_b = coordinate_blocks(B)
    if len(blocks_a) < 2 and len(blocks_b) < 2:
        return None
    if sorted(map(len, blocks_a)) != sorted(map(len, blocks_b)):
        return None
    sub_a = [_block(A, c) for c in blocks_a]
    sub_b = [_block(B, c) for c in blocks_b]
    memo: Dict[Tuple[int, int], Optional[IntMatrix]] = {}

    def pair(i: int, j: int) -> Optional[IntMatrix]:
        if (i, j) not in memo:
            if len(blocks_a[i]) != len(blocks_b[j]):
                memo[(i, j)] = None
            elif any(a.charpoly() != b.charpoly() for a, b in zip(sub_a[i].action_map, sub_b[j].action_map)):
                memo[(i, j)] = None
            elif sub_a[i] == sub_b[j]:
                memo[(i, j)] = IntMatrix.identity(len(blocks_a[i]))
            else:
                memo[(i, j)] = _search(sub_a[i], sub_b[j], height, budget)
        return memo[(i, j)]

    assignment: Dict[int, int] = {}

    def assign(i: int, used: frozenset) -> bool:
        if i == len(sub_a):
            return True
        for j in range(len(sub_b)):
            if j not in used and pair(i, j) is not None and assign_next(i, j, used):
                return True
        return False

    def assign_next(i: int, j: int, used: frozenset) -> bool:
        assignment[i] = j
        if assign(i + 1, used | {j}):
            return True
        del assignment[i]
        return False

    if not assign(0, frozenset()):
        return None
    rows = [[0] * A.rank for _ in range(B.rank)]
    for i, j in assignment.items():
        x = memo[(i, j)]
        for a, ca in enumerate(blocks_a[i]):
            for b, cb in enumerate(blocks_b[j]):
                rows[cb][ca] = x[b, a]
    return IntMatrix.from_rows(rows, cols=A.rank)


def _candidates(B: Lattice, relations: Optional[IntMatrix], height: int):
    """Small vectors of B satisfying the homogeneous relations of one generator."""
    if relations is None or relations.cols == 0:
        basis = IntMatrix.identity(B.rank)
    else:
        stacked = []
        for j in range(relations.cols):
            combo = IntMatrix.zeros(B.rank, B.rank)
            for g in range(B.group.order):
                c = relations[g, j]
                if c:
                    combo = combo + B.act(g).scale(c)
            stacked.append(combo)
        basis = kernel(vstack(stacked, cols=B.rank))
    if basis.cols == 0:
        return
    for coefficients in small_vectors(basis.cols, height):
        yield basis.apply(coefficients)


def _search(A: Lattice, B: Lattice, height: int, budget: _Budget) -> Optional[IntMatrix]:
    blocked = _match_blocks(A, B, height, budget)
    if blocked is not None:
        return blocked
    gens = module_generators(A)
    orbits_a = [orbit_matrix(A, a) for a in gens]
    W_A = hstack(orbits_a, rows=A.rank)
    R = right_inverse(W_A)
    partial_relations = [kernel(hstack(orbits_a[: t + 1])) for t in range(len(gens))]
    own_relations = [kernel(o) for o in orbits_a]
    partial_divisors = [smith_form(hstack(orbits_a[: t + 1])).diagonal for t in range(len(gens))]
    chosen: List[IntMatrix] = []

    def descend(t: int) -> Optional[IntMatrix]:
        if t == len(gens):
            X = hstack(chosen) @ R
            if abs(X.det()) == 1 and LatticeMap(A, B, X).is_intertwiner():
                return X
            return None
        for b in _candidates(B, own_relations[t], height):
            if not budget.spend():
                return None
            orbit = orbit_matrix(B, b)
            W_B = hstack(chosen + [orbit])
            if not (W_B @ partial_relations[t]).is_zero():
                continue
            if smith_form(W_B).diagonal != partial_divisors[t]:
                continue
            chosen.append(orbit)
            found = descend(t + 1)
            if found is not None:
                return found
            chosen.pop()
            if budget.nodes > budget.limit:
                return None
        return None

    return descend(0)


def iso_search(A: Lattice, B: Lattice, height: Optional[int] = None, budget: Optional[int] = None) -> IsoVerdict:
    """
    Decide A ~= B by invariants, then by bounded backtracking over generator images.

    Invariants compared: rank, characteristic polynomials of every element, elementary
    divisors of rho(g) - 1 for the generators, and H^0 / H^-1 over subgroup representatives.
    The search picks module generators of A and tries small images in B, ordered by
    support, height and position; a complete assignment gives X with X W_A = W_B.

    Args:
        A, B: Lattices over the same group
        height: Entry bound for candidate images, defaults to the configured height
        budget: Node budget, defaults to the configured budget

    Returns:
        Isomorphic with a verified unimodular intertwiner, NotIsomorphic with a witness,
        or Unknown when the budget or height is exhausted
    """
    _same_group(A, B)
    caps = get_caps()
    height = height or caps.height
    limit = _Budget(budget or caps.budget)
    if A == B:
        return Isomorphic(IntMatrix.identity(A.rank))
    witness = _invariant_witness(A, B)
    if witness is not None:
        logger.debug("iso_search: invariant witness %s", witness)
        return NotIsomorphic(witness)
    X = _search(A, B, height, limit)
    logger.debug("iso_search used %d nodes", limit.nodes)
    if X is None:
        return Unknown(f"no intertwiner with entries up to height {height}", nodes=limit.nodes)
    return Isomorphic(X)
