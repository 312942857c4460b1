"""
Finite groups as explicit multiplication tables.

Elements are the integers 0..order-1 and 0 is always the identity. Products
follow function composition: for permutation images, (a*b)(x) = a(b(x)).
Words are written left to right, so "a b" evaluates to a*b.
"""

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, reduce
from math import gcd
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple, TypeVar
import logging
import re

from sympy import factorint

from .config import get_caps
from .errors import (
    CapExceeded,
    ClosureExceedsCap,
    NonAssociative,
    NotNormal,
    ParseError,
    RelationViolated,
    UnknownName,
    ValidationError,
)

logger = logging.getLogger(__name__)

X = TypeVar("X", bound=Hashable)

Table = Tuple[Tuple[int, ...], ...]
Word = List[Tuple[int, int]]


@dataclass(frozen=True)
class FiniteGroup:
    """
    A finite group given by its full multiplication table.

    Args:
        order: Number of elements
        mul: mul[a][b] is the index of a*b
        generators: Element indices of the distinguished generators
        generator_names: Labels aligned with generators
        identity: Index of the identity, always 0
        images: Optional faithful permutation images of the generators
        label: Optional human readable name
    """

    order: int
    mul: Table
    generators: Tuple[int, ...]
    generator_names: Tuple[str, ...]
    identity: int = 0
    images: Optional[Tuple[Tuple[int, ...], ...]] = field(default=None, compare=False, repr=False)
    label: Optional[str] = field(default=None, compare=False)
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def multiply(self, a: int, b: int) -> int:
        return self.mul[a][b]

    @cached_property
    def inverses(self) -> Tuple[int, ...]:
        result = [0] * self.order
        for a in range(self.order):
            row = self.mul[a]
            result[a] = row.index(self.identity)
        return tuple(result)

    def inverse(self, a: int) -> int:
        return self.inverses[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverse(a), -k
        result = self.identity
        base = a
        while k:
            if k & 1:
                result = self.mul[result][base]
            base = self.mul[base][base]
            k >>= 1
        return result

    def conjugate(self, g: int, h: int) -> int:
        """g h g^-1"""
        return self.mul[self.mul[g][h]][self.inverse(g)]

    @cached_property
    def element_orders(self) -> Tuple[int, ...]:
        orders = []
        for a in range(self.order):
            k, x = 1, a
            while x != self.identity:
                x = self.mul[x][a]
                k += 1
            orders.append(k)
        return tuple(orders)

    def element_order(self, a: int) -> int:
        return self.element_orders[a]

    @cached_property
    def words(self) -> Tuple[Tuple[int, ...], ...]:
        """Shortest word over generator positions for every element (breadth first)."""
        found: Dict[int, Tuple[int, ...]] = {self.identity: ()}
        queue = deque([self.identity])
        while queue:
            x = queue.popleft()
            for position, g in enumerate(self.generators):
                y = self.mul[x][g]
                if y not in found:
                    found[y] = found[x] + (position,)
                    queue.append(y)
        if len(found) != self.order:
            raise ValidationError("generators do not generate the group")
        return tuple(found[a] for a in range(self.order))

    def generator_index(self, name: str) -> int:
        try:
            return self.generator_names.index(name)
        except ValueError:
            raise UnknownName(f"unknown generator {name!r}", location=name)

    def parse_word(self, text: str) -> Word:
        """
        Parse a word such as "sigma2 sigma3^-1 tau" into (generator position, exponent) pairs.

        Tokens are separated by whitespace or '*'; "1" and the empty string denote the identity.
        """
        word: Word = []
        for token in re.split(r"[\s*]+", text.strip()):
            if token in ("", "1"):
                continue
            name, _, exponent = token.partition("^")
            try:
                k = int(exponent) if exponent else 1
            except ValueError:
                raise ParseError(f"bad exponent in {token!r}", location=text)
            if name not in self.generator_names:
                raise ParseError(f"unknown generator {name!r}", location=text)
            word.append((self.generator_names.index(name), k))
        return word

    def evaluate(self, word) -> int:
        if isinstance(word, str):
            word = self.parse_word(word)
        result = self.identity
        for position, k in word:
            result = self.mul[result][self.power(self.generators[position], k)]
        return result

    @cached_property
    def is_abelian(self) -> bool:
        gens = self.generators
        return all(self.mul[a][b] == self.mul[b][a] for a in gens for b in gens)

    @cached_property
    def is_cyclic(self) -> bool:
        return self.order in self.element_orders

    @cached_property
    def exponent(self) -> int:
        return reduce(lambda a, b: a * b // gcd(a, b), self.element_orders, 1)

    def generated(self, elements: Sequence[int]) -> Tuple[int, ...]:
        """Sorted elements of the subgroup generated by the given elements."""
        found = {self.identity}
        frontier = [self.identity]
        gens = [g for g in dict.fromkeys(elements) if g != self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul[x][g]
                    if y not in found:
                        found.add(y)
                        nxt.append(y)
            frontier = nxt
        return tuple(sorted(found))

    def subgroup(self, elements: Sequence[int]) -> "Subgroup":
        return make_subgroup(self, self.generated(elements))

    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)), True)

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, (self.identity,), True)

    def permutation_images(self) -> Tuple[Tuple[int, ...], ...]:
        """Generator images, falling back to the left regular representation."""
        if self.images is not None:
            return self.images
        return tuple(tuple(self.mul[g][x] for x in range(self.order)) for g in self.generators)

    def __str__(self) -> str:
        return self.label or f"group of order {self.order}"


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup = field(compare=False, repr=False)
    elements: Tuple[int, ...]
    is_normal: bool

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    def __contains__(self, g: int) -> bool:
        return g in self.element_set

    @cached_property
    def element_set(self) -> frozenset:
        return frozenset(self.elements)

    @cached_property
    def generators(self) -> Tuple[int, ...]:
        """Greedy generating set: scan elements in order, keep those not yet generated."""
        gens: List[int] = []
        span = {self.parent.identity}
        for x in self.elements:
            if x not in span:
                gens.append(x)
                span = set(self.parent.generated(gens))
        return tuple(gens)

    def label(self) -> str:
        return f"order {self.order} {list(self.elements)}"


def make_subgroup(G: FiniteGroup, elements: Sequence[int]) -> Subgroup:
    elements = tuple(sorted(elements))
    members = set(elements)
    normal = all(G.conjugate(g, h) in members for g in G.generators for h in elements)
    return Subgroup(G, elements, normal)


def closure(
    generators: Sequence[X],
    multiply: Callable[[X, X], X],
    identity: X,
    cap: Optional[int] = None,
    location: Optional[str] = None,
) -> List[X]:
    """
    Enumerate the monoid generated by the given objects, identity first, breadth first.

    Raises:
        ClosureExceedsCap: when more than cap elements appear
    """
    cap = cap or get_caps().group_order
    elements = [identity]
    seen = {identity}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in generators:
            y = multiply(g, x)
            if y not in seen:
                seen.add(y)
                elements.append(y)
                queue.append(y)
                if len(elements) > cap:
                    raise ClosureExceedsCap(f"closure exceeds the order cap {cap}", location=location)
    return elements


def group_from_closure(
    generators: Sequence[X],
    multiply: Callable[[X, X], X],
    identity: X,
    names: Sequence[str],
    cap: Optional[int] = None,
    label: Optional[str] = None,
) -> Tuple[FiniteGroup, List[X]]:
    """Table of the group generated by concrete objects, plus the objects in element order."""
    elements = closure(generators, multiply, identity, cap, location=label)
    index = {x: i for i, x in enumerate(elements)}
    try:
        mul = tuple(tuple(index[multiply(a, b)] for b in elements) for a in elements)
    except KeyError:
        raise ValidationError("generators do not close to a group", location=label)
    for row in mul:
        if 0 not in row:
            raise ValidationError("closure contains a non-invertible element", location=label)
    group = FiniteGroup(
        order=len(elements),
        mul=mul,
        generators=tuple(index[g] for g in generators),
        generator_names=tuple(names),
        label=label,
    )
    return group, elements


def _compose(a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, ...]:
    return tuple(a[x] for x in b)


def check_relations(G: FiniteGroup, relations: Sequence[Tuple[str, str]]) -> None:
    for lhs, rhs in relations:
        if G.evaluate(lhs) != G.evaluate(rhs):
            raise RelationViolated(f"relation {lhs} = {rhs} fails", location=f"{lhs} = {rhs}")


def build_group(
    images: Sequence[Sequence[int]],
    names: Optional[Sequence[str]] = None,
    relations: Sequence[Tuple[str, str]] = (),
    cap: Optional[int] = None,
    label: Optional[str] = None,
) -> FiniteGroup:
    """
    Build a group from permutation images of its generators.

    Args:
        images: One-line notation of each generator on points 0..n-1
        names: Generator labels; defaults to g0, g1, ...
        relations: Word pairs that must evaluate equal
        cap: Order cap, defaults to the configured cap
        label: Optional name of the group

    Returns:
        A validated FiniteGroup with generators in input order

    Raises:
        ValidationError: images are not permutations of a common degree
        ClosureExceedsCap: the group is larger than the cap
        RelationViolated: a relation fails
    """
    perms = [tuple(int(x) for x in image) for image in images]
    degree = len(perms[0]) if perms else 0
    for position, perm in enumerate(perms):
        if len(perm) != degree or sorted(perm) != list(range(degree)):
            raise ValidationError("generator image is not a permutation of 0..n-1", location=f"generators[{position}]")
    names = tuple(names) if names is not None else tuple(f"g{i}" for i in range(len(perms)))
    if len(names) != len(perms) or len(set(names)) != len(names):
        raise ValidationError("generator names must be distinct and match the images")
    G, _ = group_from_closure(perms, _compose, tuple(range(degree)), names, cap, label)
    G = FiniteGroup(G.order, G.mul, G.generators, G.generator_names, images=tuple(perms), label=label)
    check_relations(G, relations)
    logger.debug("built group %s of order %d", label or names, G.order)
    return G


def from_table(
    mul: Sequence[Sequence[int]],
    generators: Sequence[int],
    names: Optional[Sequence[str]] = None,
    check: bool = True,
    label: Optional[str] = None,
) -> FiniteGroup:
    """
    Build a group from a multiplication table with identity 0.

    Raises:
        ValidationError: the table is not a Latin square with identity 0, or the generators fall short
        NonAssociative: some triple fails associativity
    """
    table = tuple(tuple(int(x) for x in row) for row in mul)
    n = len(table)
    names = tuple(names) if names is not None else tuple(f"g{i}" for i in range(len(generators)))
    if check:
        if n == 0 or any(len(row) != n for row in table):
            raise ValidationError("multiplication table must be square and non-empty")
        full = set(range(n))
        for a, row in enumerate(table):
            if set(row) != full:
                raise ValidationError("multiplication table row is not a permutation", location=f"mul[{a}]")
            if row[0] != a or table[0][a] != a:
                raise ValidationError("element 0 is not the identity", location=f"mul[{a}]")
        if any(set(table[a][b] for a in range(n)) != full for b in range(n)):
            raise ValidationError("multiplication table column is not a permutation")
        for a in range(n):
            for b in range(n):
                ab = table[a][b]
                for c in range(n):
                    if table[ab][c] != table[a][table[b][c]]:
                        raise NonAssociative(f"({a}*{b})*{c} != {a}*({b}*{c})", location=f"mul[{a}][{b}]")
    G = FiniteGroup(n, table, tuple(int(g) for g in generators), names, label=label)
    if check and len(G.generated(G.generators)) != n:
        raise ValidationError("generators do not generate the group")
    return G


def cyclic_group(n: int, name: str = "g") -> FiniteGroup:
    mul = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    image = tuple((x + 1) % n for x in range(n))
    return FiniteGroup(n, mul, (1 % n,), (name,), images=(image,), label=f"C{n}")


def direct_product(G1: FiniteGroup, G2: FiniteGroup, label: Optional[str] = None) -> FiniteGroup:
    """G1 x G2 with element (a, b) stored at a*|G2| + b; generators of G1 first."""
    n1, n2 = G1.order, G2.order
    mul = tuple(
        tuple(G1.mul[a // n2][b // n2] * n2 + G2.mul[a % n2][b % n2] for b in range(n1 * n2))
        for a in range(n1 * n2)
    )
    generators = tuple(g * n2 for g in G1.generators) + tuple(g for g in G2.generators)
    names = G1.generator_names + G2.generator_names
    if len(set(names)) != len(names):
        names = tuple(f"{name}_1" for name in G1.generator_names) + tuple(f"{name}_2" for name in G2.generator_names)
    images = None
    if G1.images is not None and G2.images is not None:
        d1 = len(G1.images[0]) if G1.images else 0
        d2 = len(G2.images[0]) if G2.images else 0
        images = tuple(image + tuple(range(d1, d1 + d2)) for image in G1.images) + tuple(
            tuple(range(d1)) + tuple(d1 + x for x in image) for image in G2.images)
    return FiniteGroup(n1 * n2, mul, generators, names, images=images, label=label or f"{G1}x{G2}")


def heisenberg_group(p: int) -> FiniteGroup:
    """
    Order p^3 group on sigma1, sigma2, sigma3 with sigma1 central and
    sigma2 sigma3 = sigma3 sigma1 sigma2, realised by affine maps of (Z/p)^2.
    """
    points = [(a, b) for a in range(p) for b in range(p)]
    index = {pt: i for i, pt in enumerate(points)}
    sigma1 = tuple(index[((a + 1) % p, b)] for a, b in points)
    sigma2 = tuple(index[((a + b) % p, b)] for a, b in points)
    sigma3 = tuple(index[(a, (b + 1) % p)] for a, b in points)
    relations = [
        (f"sigma1^{p}", "1"),
        (f"sigma2^{p}", "1"),
        (f"sigma3^{p}", "1"),
        ("sigma1 sigma2", "sigma2 sigma1"),
        ("sigma1 sigma3", "sigma3 sigma1"),
        ("sigma2 sigma3", "sigma3 sigma1 sigma2"),
    ]
    return build_group([sigma1, sigma2, sigma3], ["sigma1", "sigma2", "sigma3"], relations, label=f"Heis({p})")


def case1_group(p: int, rotation: str = "sigma3") -> FiniteGroup:
    """pi = <rotation> x <tau>, cyclic of order 2p."""
    G = direct_product(cyclic_group(p, rotation), cyclic_group(2, "tau"))
    return FiniteGroup(G.order, G.mul, G.generators, G.generator_names, images=G.images, label=f"case1({p})")


def _quaternion_images() -> List[Tuple[int, ...]]:
    # units 1, i, j, k; element s*4 + u is (-1)^s * unit u
    table = {
        (0, 0): (0, 0), (0, 1): (0, 1), (0, 2): (0, 2), (0, 3): (0, 3),
        (1, 0): (0, 1), (1, 1): (1, 0), (1, 2): (0, 3), (1, 3): (1, 2),
        (2, 0): (0, 2), (2, 1): (1, 3), (2, 2): (1, 0), (2, 3): (0, 1),
        (3, 0): (0, 3), (3, 1): (0, 2), (3, 2): (1, 1), (3, 3): (1, 0),
    }

    def left(unit: int) -> Tuple[int, ...]:
        image = []
        for x in range(8):
            s, u = divmod(x, 4)
            sign, w = table[(unit, u)]
            image.append(((s + sign) % 2) * 4 + w)
        return tuple(image)

    return [left(1), left(2)]


def standard_group(name: str) -> FiniteGroup:
    """
    Named groups: C<n>, products such as C2xC2 or C3xC4, S3, S4, A4, D<n> (order 2n),
    Q8, heis:<p> and case1:<p>.

    Raises:
        UnknownName: the name is not recognised
    """
    text = name.strip()
    if text.startswith("case1:") or text.startswith("heis:"):
        kind, _, value = text.partition(":")
        try:
            p = int(value)
        except ValueError:
            raise UnknownName(f"bad prime in group name {name!r}", location=name)
        return case1_group(p) if kind == "case1" else heisenberg_group(p)
    if re.fullmatch(r"C\d+(xC\d+)*", text):
        factors = [int(part[1:]) for part in text.split("x")]
        if len(factors) == 1:
            return cyclic_group(factors[0])
        groups = [cyclic_group(n, f"g{i}") for i, n in enumerate(factors)]
        G = reduce(lambda a, b: direct_product(a, b), groups)
        return FiniteGroup(G.order, G.mul, G.generators, G.generator_names, images=G.images, label=text)
    if text == "S3":
        return build_group([(1, 0, 2), (1, 2, 0)], ["s", "r"], [("s^2", "1"), ("r^3", "1")], label="S3")
    if text == "S4":
        return build_group([(1, 0, 2, 3), (1, 2, 3, 0)], ["s", "r"], label="S4")
    if text == "A4":
        return build_group([(1, 2, 0, 3), (1, 0, 3, 2)], ["r", "v"], label="A4")
    if text == "Q8":
        return build_group(_quaternion_images(), ["i", "j"], [("i^4", "1"), ("i^2", "j^2")], label="Q8")
    match = re.fullmatch(r"D(\d+)", text)
    if match and int(match.group(1)) >= 3:
        n = int(match.group(1))
        rotation = tuple((x + 1) % n for x in range(n))
        reflection = tuple((-x) % n for x in range(n))
        return build_group([rotation, reflection], ["r", "s"], label=text)
    raise UnknownName(f"unknown group {name!r}", location=name)


def _all_subgroup_elements(G: FiniteGroup) -> List[Tuple[int, ...]]:
    cached = G._cache.get("subgroups")
    if cached is not None:
        return cached
    cyclic: Dict[frozenset, int] = {}
    for a in range(G.order):
        members = frozenset(G.generated([a]))
        cyclic.setdefault(members, a)
    found: Dict[frozenset, Tuple[int, ...]] = {members: (a,) for members, a in cyclic.items()}
    queue = deque(found.items())
    while queue:
        members, gens = queue.popleft()
        for other, a in cyclic.items():
            if other <= members:
                continue
            joined = frozenset(G.generated(gens + (a,)))
            if joined not in found:
                found[joined] = gens + (a,)
                queue.append((joined, gens + (a,)))
    result = sorted((tuple(sorted(members)) for members in found), key=lambda s: (len(s), s))
    G._cache["subgroups"] = result
    logger.debug("group %s has %d subgroups", G, len(result))
    return result


def _check_cap(G: FiniteGroup) -> None:
    cap = get_caps().group_order
    if G.order > cap:
        raise CapExceeded(f"group order {G.order} exceeds the cap {cap}", location=str(G))


def all_subgroups(G: FiniteGroup) -> List[Subgroup]:
    """Every subgroup, sorted by order then element list."""
    _check_cap(G)
    return [make_subgroup(G, elements) for elements in _all_subgroup_elements(G)]


def subgroup_reps(G: FiniteGroup) -> List[Subgroup]:
    """
    One subgroup per conjugacy class, the least member of each class by (order, elements),
    sorted the same way.

    Raises:
        CapExceeded: |G| exceeds the configured group order cap
    """
    _check_cap(G)
    cached = G._cache.get("subgroup_reps")
    if cached is not None:
        return cached
    seen = set()
    reps = []
    for elements in _all_subgroup_elements(G):
        if elements in seen:
            continue
        klass = {tuple(sorted(G.conjugate(g, h) for h in elements)) for g in range(G.order)}
        seen |= klass
        reps.append(make_subgroup(G, elements))
    G._cache["subgroup_reps"] = reps
    return reps


def sylow_all_cyclic(G: FiniteGroup) -> bool:
    """True iff every Sylow subgroup is cyclic, i.e. some element has order p^k for each p^k || |G|."""
    orders = set(G.element_orders)
    return all(p ** k in orders for p, k in factorint(G.order).items())


@dataclass(frozen=True)
class Quotient:
    parent: FiniteGroup = field(repr=False)
    group: FiniteGroup
    projection: Tuple[int, ...]
    kernel: Subgroup


def quotient_group(G: FiniteGroup, N: Subgroup) -> Quotient:
    """
    G/N with cosets ordered by their least element.

    The quotient keeps one generator per generator of G (its image), so lattices
    can be moved between G and G/N generator by generator.

    Raises:
        NotNormal: N is not normal in G
    """
    if not N.is_normal:
        raise NotNormal(f"subgroup {list(N.elements)} is not normal", location=str(G))
    projection = [-1] * G.order
    reps: List[int] = []
    for x in range(G.order):
        if projection[x] >= 0:
            continue
        index = len(reps)
        reps.append(x)
        for n in N.elements:
            projection[G.mul[x][n]] = index
    mul = tuple(tuple(projection[G.mul[a][b]] for b in reps) for a in reps)
    label = f"{G}/N{N.order}"
    Q = FiniteGroup(
        len(reps), mul, tuple(projection[g] for g in G.generators), G.generator_names, label=label)
    return Quotient(G, Q, tuple(projection), N)


def center(G: FiniteGroup) -> Subgroup:
    elements = [z for z in range(G.order) if all(G.mul[z][g] == G.mul[g][z] for g in G.generators)]
    return Subgroup(G, tuple(elements), True)


def normalizer(G: FiniteGroup, H: Subgroup) -> Subgroup:
    members = H.element_set
    elements = [g for g in range(G.order) if all(G.conjugate(g, h) in members for h in H.generators)]
    return make_subgroup(G, elements)


def subgroup_as_group(G: FiniteGroup, H: Subgroup) -> Tuple[FiniteGroup, Tuple[int, ...]]:
    """
    H as a standalone group with its own indices, plus the embedding into G.

    Generators are the greedy generators of H; they keep G's generator names when they
    coincide with generators of G.
    """
    embedding = H.elements
    local = {g: i for i, g in enumerate(embedding)}
    mul = tuple(tuple(local[G.mul[a][b]] for b in embedding) for a in embedding)
    names = []
    for position, g in enumerate(H.generators):
        names.append(G.generator_names[G.generators.index(g)] if g in G.generators else f"h{position}")
    if len(set(names)) != len(names):
        names = [f"h{i}" for i in range(len(names))]
    sub = FiniteGroup(H.order, mul, tuple(local[g] for g in H.generators), tuple(names), label=f"{G}:H{H.order}")
    return sub, embedding
