"""
Monomial actions sigma(x_j) = zeta^c_j(sigma) * prod_i x_i^A(i, j), with sigma(zeta) = zeta^t(sigma).

Column j of A is the exponent vector of sigma(x_j). Coefficients live in Z/e.
Composition, for gh meaning "apply h, then g":

    A_gh = A_g A_h
    c_gh = t_g c_h + A_h^T c_g   (mod e)
    t_gh = t_g t_h               (mod e)
"""

from dataclasses import dataclass, field
from math import gcd
from typing import List, Optional, Sequence, Tuple
import logging
import re

from .errors import ParseError, UnverifiedAction, ValidationError
from .exact_linalg import IntMatrix
from .group_core import FiniteGroup, group_from_closure
from .lattice_core import Lattice, LatticeMap, character_kernel_sublattice

logger = logging.getLogger(__name__)

Triple = Tuple[IntMatrix, Tuple[int, ...], int]


@dataclass(frozen=True)
class MonomialGenerator:
    name: str
    A: IntMatrix
    c: Tuple[int, ...]
    t: int = 1


@dataclass(frozen=True)
class MonomialAction:
    """
    Generators of a monomial action on nvars variables over the roots of unity of order e.

    Args:
        nvars: Number of variables
        e: Order of zeta
        generators: Generator data in presentation order
        var_names: Variable labels
        relations: Word pairs the action must satisfy
        group: Optional acting group whose generator names match
        label: Optional name
    """

    nvars: int
    e: int
    generators: Tuple[MonomialGenerator, ...]
    var_names: Tuple[str, ...]
    relations: Tuple[Tuple[str, str], ...] = ()
    group: Optional[FiniteGroup] = field(default=None, compare=False)
    label: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if self.e < 1:
            raise ValidationError("root order e must be positive")
        if len(self.var_names) != self.nvars:
            raise ValidationError(f"expected {self.nvars} variable names, got {len(self.var_names)}")
        for gen in self.generators:
            if gen.A.rows != self.nvars or gen.A.cols != self.nvars or len(gen.c) != self.nvars:
                raise ValidationError(f"generator {gen.name} has the wrong size", location=gen.name)

    @property
    def generator_names(self) -> Tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def triple(self, name: str) -> Triple:
        for gen in self.generators:
            if gen.name == name:
                return gen.A, tuple(x % self.e for x in gen.c), gen.t % self.e
        raise ParseError(f"unknown generator {name!r}", location=name)

    def is_purely_monomial(self) -> bool:
        return all(x % self.e == 0 for gen in self.generators for x in gen.c)


def identity_triple(action: MonomialAction) -> Triple:
    return IntMatrix.identity(action.nvars), (0,) * action.nvars, 1 % action.e


def compose_triples(g: Triple, h: Triple, e: int) -> Triple:
    """The triple of g*h (h applied first)."""
    A_g, c_g, t_g = g
    A_h, c_h, t_h = h
    transported = A_h.T.apply(c_g)
    c = tuple((t_g * a + b) % e for a, b in zip(c_h, transported))
    return A_g @ A_h, c, (t_g * t_h) % e


def inverse_triple(g: Triple, e: int) -> Triple:
    A, c, t = g
    try:
        t_inv = pow(t, -1, e) if e > 1 else 0
    except ValueError:
        raise ValidationError(f"twist {t} is not a unit modulo {e}")
    A_inv = A.inverse()
    c_inv = tuple((-t_inv * x) % e for x in A_inv.T.apply(c))
    return A_inv, c_inv, t_inv


def _tokens(word) -> List[Tuple[str, int]]:
    if not isinstance(word, str):
        return [(name, 1) for name in word]
    result = []
    for token in re.split(r"[\s*]+", word.strip()):
        if token in ("", "1"):
            continue
        name, _, exponent = token.partition("^")
        try:
            result.append((name, int(exponent) if exponent else 1))
        except ValueError:
            raise ParseError(f"bad exponent in {token!r}", location=word)
    return result


def compose_monomial(action: MonomialAction, word) -> Triple:
    """
    Fold the composition law along a word ("tau sigma1^-1" or a list of names).

    The empty word gives (I, 0, 1).
    """
    result = identity_triple(action)
    for name, k in _tokens(word):
        base = action.triple(name)
        if k < 0:
            base, k = inverse_triple(base, action.e), -k
        for _ in range(k):
            result = compose_triples(result, base, action.e)
    return result


def _describe_difference(left: Triple, right: Triple, names: Sequence[str]) -> str:
    if left[0] != right[0]:
        for j in range(left[0].cols):
            if left[0].column(j) != right[0].column(j):
                return f"exponents of {names[j]} differ: {list(left[0].column(j))} vs {list(right[0].column(j))}"
    if left[1] != right[1]:
        for j, (a, b) in enumerate(zip(left[1], right[1])):
            if a != b:
                return f"coefficient of {names[j]} differs: zeta^{a} vs zeta^{b}"
    return f"twist differs: {left[2]} vs {right[2]}"


def verify_action(
    action: MonomialAction, relations: Optional[Sequence[Tuple[str, str]]] = None
) -> Tuple[bool, Optional[str]]:
    """
    Check generators and relations.

    Args:
        action: The action
        relations: Word pairs; defaults to the action's own relations

    Returns:
        (True, None) or (False, witness) for the first failure
    """
    for gen in action.generators:
        if abs(gen.A.det()) != 1:
            return False, f"{gen.name}: exponent matrix has determinant {gen.A.det()}"
        if gcd(gen.t, action.e) != 1:
            return False, f"{gen.name}: twist {gen.t} is not a unit modulo {action.e}"
    relations = action.relations if relations is None else relations
    for lhs, rhs in relations:
        try:
            left, right = compose_monomial(action, lhs), compose_monomial(action, rhs)
        except ParseError as exc:
            return False, f"{lhs} = {rhs}: {exc}"
        if left != right:
            return False, f"{lhs} = {rhs}: {_describe_difference(left, right, action.var_names)}"
    return True, None


def _key(triple: Triple) -> Tuple:
    return triple[0].data, triple[1], triple[2]


def acting_group(action: MonomialAction, cap: Optional[int] = None) -> FiniteGroup:
    """The group generated by the generator triples, with the action's generator names."""
    e = action.e
    gens = [_key(action.triple(name)) for name in action.generator_names]
    n = action.nvars

    def multiply(a, b):
        left = (IntMatrix(n, n, a[0]), a[1], a[2])
        right = (IntMatrix(n, n, b[0]), b[1], b[2])
        return _key(compose_triples(left, right, e))

    group, _ = group_from_closure(gens, multiply, _key(identity_triple(action)), action.generator_names, cap,
                                  label=action.label)
    return group


def exponent_lattice(action: MonomialAction, group: Optional[FiniteGroup] = None) -> Lattice:
    """
    Forget coefficients and twists: the lattice of exponent vectors.

    Without a group the action's own group is used, or else the group generated by the
    exponent matrices.

    Raises:
        UnverifiedAction: verify_action fails
    """
    ok, witness = verify_action(action)
    if not ok:
        raise UnverifiedAction(f"action fails verification: {witness}", location=action.label)
    matrices = [gen.A for gen in action.generators]
    group = group or action.group
    if group is None:
        n = action.nvars
        group, _ = group_from_closure(
            [m.data for m in matrices],
            lambda a, b: (IntMatrix(n, n, a) @ IntMatrix(n, n, b)).data,
            IntMatrix.identity(n).data,
            action.generator_names,
            label=action.label,
        )
    if group.generator_names != action.generator_names:
        raise ValidationError("group generator names do not match the action")
    return Lattice.from_generators(group, matrices, rank=action.nvars, label=action.label)


@dataclass(frozen=True)
class ChangeOfVariables:
    """New variable k is prod_i x_i^B(i, k)."""

    B: IntMatrix
    names: Tuple[str, ...] = ()

    @property
    def nvars(self) -> int:
        return self.B.cols


def certify_change(action: MonomialAction, change: ChangeOfVariables) -> Tuple[bool, Optional[MonomialAction]]:
    """
    Rewrite the action in new variables when B is unimodular.

    A' = B^-1 A B, c' = B^T c (mod e), t' = t.

    Returns:
        (True, transformed action) or (False, None) when |det B| != 1
    """
    B = change.B
    if B.rows != action.nvars or not B.is_square:
        raise ValidationError("change of variables has the wrong size")
    if abs(B.det()) != 1:
        return False, None
    B_inv = B.inverse()
    generators = tuple(
        MonomialGenerator(gen.name, B_inv @ gen.A @ B, tuple(x % action.e for x in B.T.apply(gen.c)), gen.t)
        for gen in action.generators
    )
    names = change.names or tuple(f"y{k}" for k in range(B.cols))
    transformed = MonomialAction(action.nvars, action.e, generators, tuple(names), action.relations,
                                 action.group, action.label)
    return True, transformed


def monomial_kernel_lattice(
    action: MonomialAction,
    characters: Sequence[Tuple[int, Sequence[int]]],
    group: Optional[FiniteGroup] = None,
) -> Tuple[Lattice, LatticeMap]:
    """Exponent vectors v with row . v = 0 mod n for every character (n, row)."""
    return character_kernel_sublattice(exponent_lattice(action, group), characters)


def exponent_vector(action: MonomialAction, monomial: dict) -> Tuple[int, ...]:
    """Exponent vector of a monomial given as {variable name: exponent}."""
    vector = [0] * action.nvars
    for name, k in monomial.items():
        if name not in action.var_names:
            raise ParseError(f"unknown variable {name!r}", location=name)
        vector[action.var_names.index(name)] += k
    return tuple(vector)

