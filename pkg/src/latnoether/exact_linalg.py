"""
Exact integer linear algebra.

Everything here works on Python integers, so intermediate entries may grow
without bound. Smith forms pick the nonzero entry of least absolute value as
pivot (ties: lowest row, then lowest column), which makes every transform
matrix reproducible across runs.
"""

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, List, Optional, Sequence, Tuple
import logging

from sympy import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form as sympy_hnf

from .errors import NotUnimodular, ValidationError

logger = logging.getLogger(__name__)

Rows = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class IntMatrix:
    """Integer matrix stored row-major as nested tuples."""

    rows: int
    cols: int
    data: Rows

    def __post_init__(self):
        if len(self.data) != self.rows or any(len(row) != self.cols for row in self.data):
            raise ValidationError(f"matrix entries do not match shape {self.rows}x{self.cols}")

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        data = tuple(tuple(int(x) for x in row) for row in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return IntMatrix(len(data), cols, data)

    @staticmethod
    def from_columns(columns: Sequence[Sequence[int]], rows: Optional[int] = None) -> "IntMatrix":
        columns = [tuple(int(x) for x in column) for column in columns]
        if rows is None:
            rows = len(columns[0]) if columns else 0
        data = tuple(tuple(column[i] for column in columns) for i in range(rows))
        return IntMatrix(rows, len(columns), data)

    @staticmethod
    def zeros(rows: int, cols: int) -> "IntMatrix":
        return IntMatrix(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @staticmethod
    def diagonal(entries: Sequence[int]) -> "IntMatrix":
        n = len(entries)
        return IntMatrix(n, n, tuple(tuple(int(entries[i]) if i == j else 0 for j in range(n)) for i in range(n)))

    @staticmethod
    def column_vector(vector: Sequence[int]) -> "IntMatrix":
        return IntMatrix(len(vector), 1, tuple((int(x),) for x in vector))

    def __getitem__(self, key: Tuple[int, int]) -> int:
        i, j = key
        return self.data[i][j]

    def row(self, i: int) -> Tuple[int, ...]:
        return self.data[i]

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(row[j] for row in self.data)

    def columns(self) -> List[Tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(tuple(row[j] for row in self.data) for j in range(self.cols)))

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.data for x in row)

    def is_identity(self) -> bool:
        return self == IntMatrix.identity(self.rows) if self.is_square else False

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValidationError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        if other.rows == 0:
            return IntMatrix.zeros(self.rows, other.cols)
        other_columns = list(zip(*other.data))
        data = tuple(
            tuple(sum(a * b for a, b in zip(row, column) if a) for column in other_columns)
            for row in self.data
        )
        return IntMatrix(self.rows, other.cols, data)

    def apply(self, vector: Sequence[int]) -> Tuple[int, ...]:
        """Matrix times column vector."""
        return tuple(sum(a * b for a, b in zip(row, vector) if a) for row in self.data)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(
            tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __neg__(self) -> "IntMatrix":
        return self.scale(-1)

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(tuple(k * a for a in row) for row in self.data))

    def mod(self, e: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(tuple(a % e for a in row) for row in self.data))

    def _check_same_shape(self, other: "IntMatrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValidationError(f"shape mismatch {self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def select_columns(self, indices: Sequence[int]) -> "IntMatrix":
        return IntMatrix(self.rows, len(indices), tuple(tuple(row[j] for j in indices) for row in self.data))

    def select_rows(self, indices: Sequence[int]) -> "IntMatrix":
        return IntMatrix(len(indices), self.cols, tuple(self.data[i] for i in indices))

    def hstack(self, *others: "IntMatrix") -> "IntMatrix":
        return hstack([self, *others])

    def vstack(self, *others: "IntMatrix") -> "IntMatrix":
        return vstack([self, *others])

    def kron(self, other: "IntMatrix") -> "IntMatrix":
        data = []
        for row in self.data:
            for other_row in other.data:
                data.append(tuple(a * b for a in row for b in other_row))
        return IntMatrix(self.rows * other.rows, self.cols * other.cols, tuple(data))

    def power(self, k: int) -> "IntMatrix":
        if not self.is_square:
            raise ValidationError("only square matrices have powers")
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = IntMatrix.identity(self.rows)
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def _domain(self) -> DomainMatrix:
        return DomainMatrix([[ZZ(x) for x in row] for row in self.data], (self.rows, self.cols), ZZ)

    def det(self) -> int:
        if not self.is_square:
            raise ValidationError("determinant of a non-square matrix")
        if self.rows == 0:
            return 1
        return int(self._domain().det())

    def charpoly(self) -> Tuple[int, ...]:
        """Characteristic polynomial coefficients, leading coefficient first."""
        if not self.is_square:
            raise ValidationError("characteristic polynomial of a non-square matrix")
        if self.rows == 0:
            return (1,)
        return tuple(int(c) for c in self._domain().charpoly())

    def trace(self) -> int:
        return sum(self.data[i][i] for i in range(min(self.rows, self.cols)))

    def is_unimodular(self) -> bool:
        return self.is_square and abs(self.det()) == 1

    def inverse(self) -> "IntMatrix":
        """Inverse of a unimodular matrix."""
        if not self.is_square:
            raise NotUnimodular("non-square matrix has no inverse")
        form = smith_form(self)
        if form.rank != self.rows or any(d != 1 for d in form.diagonal):
            raise NotUnimodular(f"matrix is not invertible over Z (invariants {list(form.diagonal)})")
        return form.V @ form.U

    def to_list(self) -> List[List[int]]:
        return [list(row) for row in self.data]

    def __str__(self) -> str:
        return "\n".join(" ".join(f"{x:>3}" for x in row) for row in self.data)


def hstack(matrices: Sequence[IntMatrix], rows: Optional[int] = None) -> IntMatrix:
    if not matrices:
        return IntMatrix.zeros(rows or 0, 0)
    height = matrices[0].rows
    if any(m.rows != height for m in matrices):
        raise ValidationError("hstack needs equal row counts")
    data = tuple(tuple(x for m in matrices for x in m.data[i]) for i in range(height))
    return IntMatrix(height, sum(m.cols for m in matrices), data)


def vstack(matrices: Sequence[IntMatrix], cols: Optional[int] = None) -> IntMatrix:
    if not matrices:
        return IntMatrix.zeros(0, cols or 0)
    width = matrices[0].cols
    if any(m.cols != width for m in matrices):
        raise ValidationError("vstack needs equal column counts")
    return IntMatrix(sum(m.rows for m in matrices), width, tuple(row for m in matrices for row in m.data))


def block_diag(matrices: Sequence[IntMatrix]) -> IntMatrix:
    rows = sum(m.rows for m in matrices)
    cols = sum(m.cols for m in matrices)
    data = []
    offset = 0
    for m in matrices:
        for row in m.data:
            data.append((0,) * offset + row + (0,) * (cols - offset - m.cols))
        offset += m.cols
    return IntMatrix(rows, cols, tuple(data))


def evaluate_polynomial(coefficients: Sequence[int], matrix: IntMatrix) -> IntMatrix:
    """Evaluate sum(c_k * M^k) with coefficients given lowest degree first."""
    result = IntMatrix.zeros(matrix.rows, matrix.cols)
    for c in reversed(coefficients):
        result = result @ matrix + IntMatrix.identity(matrix.rows).scale(c)
    return result


@dataclass(frozen=True)
class SmithForm:
    """U @ A @ V == D with U, V unimodular; U_inv and V_inv are their inverses."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix
    rank: int
    diagonal: Tuple[int, ...]


def _identity_lists(n: int) -> List[List[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _add_row(m: List[List[int]], target: int, source: int, factor: int) -> None:
    m[target] = [a + factor * b for a, b in zip(m[target], m[source])]


def _add_col(m: List[List[int]], target: int, source: int, factor: int) -> None:
    for row in m:
        row[target] += factor * row[source]


def _swap_cols(m: List[List[int]], a: int, b: int) -> None:
    for row in m:
        row[a], row[b] = row[b], row[a]


def _min_entry(d: List[List[int]], t: int, m: int, n: int) -> Optional[Tuple[int, int]]:
    best = None
    best_value = 0
    for i in range(t, m):
        row = d[i]
        for j in range(t, n):
            x = row[j]
            if x and (best is None or abs(x) < best_value):
                best, best_value = (i, j), abs(x)
                if best_value == 1:
                    return best
    return best


def _first_non_divisible(d: List[List[int]], t: int, m: int, n: int, p: int) -> Optional[int]:
    for i in range(t + 1, m):
        for j in range(t + 1, n):
            if d[i][j] % p:
                return i
    return None


def _to_matrix(m: List[List[int]], rows: int, cols: int) -> IntMatrix:
    return IntMatrix(rows, cols, tuple(tuple(row) for row in m))


def smith_form(A: IntMatrix) -> SmithForm:
    """Smith normal form with both transforms and their inverses."""
    m, n = A.rows, A.cols
    d = [list(row) for row in A.data]
    u, u_inv = _identity_lists(m), _identity_lists(m)
    v, v_inv = _identity_lists(n), _identity_lists(n)
    t = 0
    while t < min(m, n):
        pivot = _min_entry(d, t, m, n)
        if pivot is None:
            break
        pi, pj = pivot
        if pi != t:
            d[t], d[pi] = d[pi], d[t]
            u[t], u[pi] = u[pi], u[t]
            _swap_cols(u_inv, t, pi)
        if pj != t:
            _swap_cols(d, t, pj)
            _swap_cols(v, t, pj)
            v_inv[t], v_inv[pj] = v_inv[pj], v_inv[t]

        p = d[t][t]
        dirty = False
        for i in range(t + 1, m):
            if d[i][t]:
                q = d[i][t] // p
                if q:
                    _add_row(d, i, t, -q)
                    _add_row(u, i, t, -q)
                    _add_col(u_inv, t, i, q)
                dirty = dirty or d[i][t] != 0
        for j in range(t + 1, n):
            if d[t][j]:
                q = d[t][j] // p
                if q:
                    _add_col(d, j, t, -q)
                    _add_col(v, j, t, -q)
                    _add_row(v_inv, t, j, q)
                dirty = dirty or d[t][j] != 0
        if dirty:
            continue

        bad_row = _first_non_divisible(d, t, m, n, p)
        if bad_row is not None:
            _add_row(d, t, bad_row, 1)
            _add_row(u, t, bad_row, 1)
            _add_col(u_inv, bad_row, t, -1)
            continue

        if p < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
            for row in u_inv:
                row[t] = -row[t]
        t += 1

    diagonal = tuple(d[i][i] for i in range(t))
    return SmithForm(
        U=_to_matrix(u, m, m),
        D=_to_matrix(d, m, n),
        V=_to_matrix(v, n, n),
        U_inv=_to_matrix(u_inv, m, m),
        V_inv=_to_matrix(v_inv, n, n),
        rank=t,
        diagonal=diagonal,
    )


def smith_normal_form(A: IntMatrix) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with U @ A @ V == D."""
    form = smith_form(A)
    return form.U, form.D, form.V


def hermite_normal_form(A: IntMatrix) -> IntMatrix:
    """
    Row-style Hermite normal form of the row lattice of A.

    Zero rows are dropped, pivots are positive and entries above a pivot lie
    in [0, pivot). sympy returns the column-style form with pivots rising from
    the bottom row, so the input is flipped before and the result after.
    Zero generators pad the input so that every coordinate row is visited.
    """
    if not A.rows or not A.cols or not any(any(row) for row in A.data):
        return IntMatrix(0, A.cols, ())
    width = max(A.rows, A.cols)
    flipped = [list(row) + [0] * (width - A.rows) for row in A.T.data[::-1]]
    H = sympy_hnf(DomainMatrix([[ZZ(x) for x in row] for row in flipped], (A.cols, width), ZZ)).to_list()
    r = len(H[0]) if H else 0
    return IntMatrix(r, A.cols, tuple(tuple(int(H[A.cols - 1 - c][r - 1 - k]) for c in range(A.cols)) for k in range(r)))


def canonical_basis(S: IntMatrix) -> IntMatrix:
    """Basis of the column span of S in column Hermite form."""
    return hermite_normal_form(S.T).T if S.cols else IntMatrix.zeros(S.rows, 0)


@dataclass(frozen=True)
class FinAbGroup:
    """Finitely generated abelian group Z/d1 + ... + Z/dk + Z^free_rank with d1 | d2 | ..."""

    invariant_factors: Tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        factors = self.invariant_factors
        if any(d < 2 for d in factors):
            raise ValidationError(f"invariant factors must be at least 2, got {list(factors)}")
        if any(b % a for a, b in zip(factors, factors[1:])):
            raise ValidationError(f"invariant factors must form a divisibility chain, got {list(factors)}")
        if self.free_rank < 0:
            raise ValidationError("free rank must be non-negative")

    @staticmethod
    def from_diagonal(entries: Sequence[int], free_rank: int = 0) -> "FinAbGroup":
        """Normalise an arbitrary list of cyclic orders (0 meaning Z)."""
        entries = [abs(int(e)) for e in entries]
        free_rank += sum(1 for e in entries if e == 0)
        torsion = [e for e in entries if e > 1]
        if not torsion:
            return FinAbGroup((), free_rank)
        form = smith_form(IntMatrix.diagonal(torsion))
        return FinAbGroup(tuple(x for x in form.diagonal if x > 1), free_rank)

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors and self.free_rank == 0

    @property
    def order(self) -> int:
        if self.free_rank:
            raise ValidationError("group with free part has infinite order")
        result = 1
        for d in self.invariant_factors:
            result *= d
        return result

    def rank_mod(self, p: int) -> int:
        """Dimension of G/pG over F_p."""
        return self.free_rank + sum(1 for d in self.invariant_factors if d % p == 0)

    def direct_sum(self, other: "FinAbGroup") -> "FinAbGroup":
        return FinAbGroup.from_diagonal(
            list(self.invariant_factors) + list(other.invariant_factors),
            self.free_rank + other.free_rank,
        )

    def to_dict(self) -> dict:
        return {"invariant_factors": list(self.invariant_factors), "free_rank": self.free_rank}

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.invariant_factors]
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


def kernel_image_cokernel(A: IntMatrix) -> Tuple[IntMatrix, IntMatrix, FinAbGroup]:
    """
    Kernel basis (saturated), image basis and cokernel of A: Z^cols -> Z^rows.
    """
    form = smith_form(A)
    r = form.rank
    kernel = form.V.select_columns(range(r, A.cols))
    image = IntMatrix.from_columns(
        [[form.diagonal[i] * x for x in form.U_inv.column(i)] for i in range(r)], rows=A.rows)
    cokernel = FinAbGroup.from_diagonal(form.diagonal, free_rank=A.rows - r)
    return kernel, image, cokernel


def kernel(A: IntMatrix) -> IntMatrix:
    """Saturated kernel basis in column Hermite form."""
    form = smith_form(A)
    return canonical_basis(form.V.select_columns(range(form.rank, A.cols)))


def cokernel(A: IntMatrix) -> FinAbGroup:
    form = smith_form(A)
    return FinAbGroup.from_diagonal(form.diagonal, free_rank=A.rows - form.rank)


def rank(A: IntMatrix) -> int:
    return smith_form(A).rank


def saturate(S: IntMatrix) -> IntMatrix:
    """Basis of span_Q(S) intersected with Z^n, in column Hermite form."""
    form = smith_form(S)
    return canonical_basis(form.U_inv.select_columns(range(form.rank)))


def saturation_index(S: IntMatrix) -> int:
    """Index of the column span of S inside its saturation."""
    result = 1
    for d in smith_form(S).diagonal:
        result *= d
    return result


def is_pure(B: IntMatrix) -> bool:
    """True when the columns of B are independent and span a saturated sublattice."""
    form = smith_form(B)
    return form.rank == B.cols and all(d == 1 for d in form.diagonal)


def left_inverse(B: IntMatrix) -> IntMatrix:
    """Integer L with L @ B == I for a basis B of a pure sublattice."""
    form = smith_form(B)
    k = B.cols
    if form.rank != k or any(d != 1 for d in form.diagonal):
        raise ValidationError("columns do not form a basis of a pure sublattice")
    return form.V @ form.U.select_rows(range(k))


def right_inverse(W: IntMatrix) -> IntMatrix:
    """Integer R with W @ R == I for a surjective W."""
    form = smith_form(W)
    m = W.rows
    if form.rank != m or any(d != 1 for d in form.diagonal):
        raise ValidationError("matrix is not surjective over Z")
    return form.V.select_columns(range(m)) @ form.U


def coordinates(B: IntMatrix, X: IntMatrix, inverse: Optional[IntMatrix] = None) -> IntMatrix:
    """Coordinates C with B @ C == X, for B a pure basis and X inside its span."""
    L = inverse if inverse is not None else left_inverse(B)
    C = L @ X
    if B @ C != X:
        raise ValidationError("vectors do not lie in the span of the basis")
    return C


def solve(A: IntMatrix, b: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """An integer solution x of A x = b, or None."""
    form = smith_form(A)
    c = form.U.apply(b)
    y = [0] * A.cols
    for i, value in enumerate(c):
        if i < form.rank:
            if value % form.diagonal[i]:
                return None
            y[i] = value // form.diagonal[i]
        elif value:
            return None
    return form.V.apply(y)


def solve_matrix(A: IntMatrix, B: IntMatrix) -> Optional[IntMatrix]:
    """An integer X with A X = B, or None; one Smith form serves every column."""
    form = smith_form(A)
    columns = []
    for b in B.columns():
        c = form.U.apply(b)
        y = [0] * A.cols
        for i, value in enumerate(c):
            if i < form.rank:
                if value % form.diagonal[i]:
                    return None
                y[i] = value // form.diagonal[i]
            elif value:
                return None
        columns.append(form.V.apply(y))
    return IntMatrix.from_columns(columns, rows=A.cols)


def subquotient(K: IntMatrix, G: IntMatrix) -> FinAbGroup:
    """span(K) / span(G) for a pure basis K and generators G inside span(K)."""
    coords = coordinates(K, G) if G.cols else IntMatrix.zeros(K.cols, 0)
    return cokernel(coords)


def small_vectors(n: int, height: int, max_support: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """
    Nonzero integer vectors ordered by support size, then height, then
    position and value.
    """
    max_support = n if max_support is None else min(n, max_support)
    for support in range(1, max_support + 1):
        for h in range(1, height + 1):
            values = [v for k in range(1, h + 1) for v in (k, -k)]
            for positions in combinations(range(n), support):
                for chosen in product(values, repeat=support):
                    if max(abs(v) for v in chosen) != h:
                        continue
                    vector = [0] * n
                    for position, value in zip(positions, chosen):
                        vector[position] = value
                    yield tuple(vector)
