"""
Finite reflection groups enumerated as exact matrix groups.

Every element carries its shortlex-minimal word in the generator labels, so
word lengths are Coxeter lengths whenever the generators are the simple
reflections of a Coxeter system.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BudgetExceeded, InvalidInput
from .linalg import Matrix, Vector, identity, inverse, mat_mul, mat_sub, mat_vec, normalize, nullspace
from .root_systems import roots_from_cartan, symmetric_form, validate_cartan

DEFAULT_BUDGET = 10**6


def default_budget() -> int:
    env = os.environ.get("WEYLFOLD_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InvalidInput(f"WEYLFOLD_BUDGET must be an integer, got {env!r}") from None
    return DEFAULT_BUDGET


def simple_reflection(c: Matrix, i: int) -> Matrix:
    """``s_i`` acting on simple-root coordinates: ``v -> v - <a_i^vee, v> a_i``."""
    n = len(c)
    return tuple(
        tuple((1 if r == k else 0) - (c[i][k] if r == i else 0) for k in range(n)) for r in range(n)
    )


def _row_update(g: Matrix):
    """If ``g`` differs from the identity in a single row, return a fast left multiplier."""
    n = len(g)
    rows = [r for r in range(n) if any(g[r][k] != (1 if r == k else 0) for k in range(n))]
    if len(rows) != 1:
        return None
    r = rows[0]
    coeffs = [(k, g[r][k]) for k in range(n) if g[r][k] != 0]

    def left(m: Matrix) -> Matrix:
        new = tuple(sum(a * m[k][j] for k, a in coeffs) for j in range(n))
        return m[:r] + (new,) + m[r + 1:]

    return left


@dataclass(frozen=True)
class GroupElement:
    matrix: Matrix
    word: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.word)


class WeylGroup:
    """Closure of a finite set of exact matrices under multiplication.

    ``labels`` name the generators in words (default ``1..k``); elements are
    listed in shortlex order of their words.
    """

    def __init__(
        self,
        generators: Sequence[Matrix],
        labels: Sequence[int] | None = None,
        cartan: Matrix | None = None,
        budget: int | None = None,
    ):
        self.generators = tuple(tuple(tuple(row) for row in g) for g in generators)
        self.labels = tuple(labels) if labels is not None else tuple(range(1, len(self.generators) + 1))
        if len(self.labels) != len(self.generators):
            raise InvalidInput("one label per generator required")
        if list(self.labels) != sorted(self.labels):
            raise InvalidInput("generator labels must be increasing")
        self.cartan = cartan
        self.budget = default_budget() if budget is None else budget
        if not self.generators and cartan is None:
            raise InvalidInput("dimension unknown for a group without generators")
        self.dim = len(self.generators[0]) if self.generators else len(cartan)
        self._enumerate()

    @classmethod
    def from_cartan(cls, c: Matrix, budget: int | None = None) -> WeylGroup:
        validate_cartan(c)
        gens = [simple_reflection(c, i) for i in range(len(c))]
        return cls(gens, cartan=c, budget=budget)

    def _enumerate(self) -> None:
        n = self.dim
        lefts = []
        for g in self.generators:
            fast = _row_update(g)
            lefts.append(fast if fast is not None else (lambda m, g=g: mat_mul(g, m)))
        e = identity(n)
        mats = [e]
        index = {e: 0}
        lengths = [0]
        first: list[int | None] = [None]
        parent: list[int | None] = [None]
        frontier = [0]
        depth = 0
        while frontier:
            depth += 1
            nxt = []
            for x in frontier:
                m = mats[x]
                for gi, left in enumerate(lefts):
                    y = left(m)
                    j = index.get(y)
                    if j is None:
                        j = len(mats)
                        if j + 1 > self.budget:
                            raise BudgetExceeded(f"enumeration budget exceeded ({self.budget} elements)")
                        index[y] = j
                        mats.append(y)
                        lengths.append(depth)
                        first.append(gi)
                        parent.append(x)
                        nxt.append(j)
                    elif lengths[j] == depth and gi < first[j]:
                        first[j] = gi
                        parent[j] = x
            frontier = nxt
        words: list[tuple[int, ...]] = [()]
        for j in range(1, len(mats)):
            words.append((self.labels[first[j]],) + words[parent[j]])
        order = sorted(range(len(mats)), key=lambda j: (lengths[j], words[j]))
        self.elements = [GroupElement(mats[j], words[j]) for j in order]
        self.index = {el.matrix: k for k, el in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, m) -> bool:
        if isinstance(m, GroupElement):
            m = m.matrix
        return m in self.index

    def element(self, m: Matrix) -> GroupElement:
        try:
            return self.elements[self.index[m]]
        except KeyError:
            raise InvalidInput("matrix is not an element of this group") from None

    def multiply(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return self.element(mat_mul(a.matrix, b.matrix))

    def inverse(self, a: GroupElement) -> GroupElement:
        return self.element(inverse(a.matrix))

    def from_word(self, word: Iterable[int]) -> GroupElement:
        m = identity(self.dim)
        pos = {lab: k for k, lab in enumerate(self.labels)}
        for lab in word:
            m = mat_mul(m, self.generators[pos[lab]])
        return self.element(m)

    def parabolic(self, subset: Iterable[int]) -> ParabolicSubgroup:
        return parabolic(self, subset)

    def longest_element(self) -> GroupElement:
        return longest_element(self)


@dataclass
class ParabolicSubgroup:
    """Subgroup of ``parent`` generated by the generators labelled ``subset``."""

    parent: WeylGroup
    subset: tuple[int, ...]
    group: WeylGroup = field(repr=False)

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def elements(self) -> list[GroupElement]:
        return self.group.elements

    @property
    def matrices(self) -> frozenset:
        return frozenset(self.group.index)

    def __contains__(self, m) -> bool:
        return m in self.group

    def issubgroup(self, other: ParabolicSubgroup) -> bool:
        return all(m in other.group.index for m in self.group.index)


def parabolic(w: WeylGroup, subset: Iterable[int]) -> ParabolicSubgroup:
    """``<s_j : j in subset>`` as an enumerated subgroup of ``w``.

    >>> from weylfold.root_systems import cartan_matrix
    >>> parabolic(WeylGroup.from_cartan(cartan_matrix("A3")), [1, 3]).order
    4
    """
    subset = tuple(sorted(set(subset)))
    pos = {lab: k for k, lab in enumerate(w.labels)}
    unknown = [s for s in subset if s not in pos]
    if unknown:
        raise InvalidInput(f"unknown generator(s) {unknown}")
    gens = [w.generators[pos[s]] for s in subset]
    sub = WeylGroup(gens, labels=subset, budget=w.budget) if gens else _trivial(w)
    return ParabolicSubgroup(w, subset, sub)


def _trivial(w: WeylGroup) -> WeylGroup:
    g = WeylGroup.__new__(WeylGroup)
    g.generators, g.labels, g.cartan, g.budget, g.dim = (), (), None, w.budget, w.dim
    g.elements = [GroupElement(identity(w.dim), ())]
    g.index = {g.elements[0].matrix: 0}
    return g


def longest_element(w: WeylGroup | ParabolicSubgroup) -> GroupElement:
    """The unique element of maximal length (last in shortlex order)."""
    g = w.group if isinstance(w, ParabolicSubgroup) else w
    top = g.elements[-1]
    if sum(1 for el in g.elements if el.length == top.length) != 1:
        raise InvalidInput("no unique longest element")
    return top


def generators_of(g: WeylGroup | ParabolicSubgroup) -> tuple[Matrix, ...]:
    return g.group.generators if isinstance(g, ParabolicSubgroup) else g.generators


def fixed_space(g: WeylGroup | ParabolicSubgroup) -> list[tuple[Fraction, ...]]:
    """Basis of the common fixed space: kernel of the stacked ``(g - Id)`` over generators."""
    grp = g.group if isinstance(g, ParabolicSubgroup) else g
    n = grp.dim
    e = identity(n)
    rows = [row for m in grp.generators for row in mat_sub(m, e)]
    return nullspace(rows, n)


def fixed_space_dim(g: WeylGroup | ParabolicSubgroup) -> int:
    return len(fixed_space(g))


def orbit(g: WeylGroup | ParabolicSubgroup, v: Sequence) -> set[Vector]:
    grp = g.group if isinstance(g, ParabolicSubgroup) else g
    v = tuple(v)
    seen = {v}
    stack = [v]
    while stack:
        u = stack.pop()
        for m in grp.generators:
            x = mat_vec(m, u)
            if x not in seen:
                seen.add(x)
                stack.append(x)
    return seen


def stabilizer_order(g: WeylGroup | ParabolicSubgroup, v: Sequence) -> int:
    grp = g.group if isinstance(g, ParabolicSubgroup) else g
    v = tuple(v)
    return sum(1 for el in grp.elements if mat_vec(el.matrix, v) == v)


def canonical_orbit_rep(g: WeylGroup | ParabolicSubgroup, v: Sequence) -> Vector:
    """Lexicographically minimal point of the orbit of ``v``.

    Serves as a normal form for points of the quotient ``V / g``.
    """
    grp = g.group if isinstance(g, ParabolicSubgroup) else g
    return min(tuple(normalize(x) for x in mat_vec(el.matrix, v)) for el in grp.elements)


@dataclass
class DoubleCosetDecomposition:
    group: WeylGroup
    subgroup: ParabolicSubgroup
    cosets: list[list[int]]  # element indices into group.elements
    representatives: list[GroupElement]

    def __len__(self):
        return len(self.cosets)

    def coset_of(self) -> dict[int, int]:
        return {x: a for a, coset in enumerate(self.cosets) for x in coset}


def double_cosets(w: WeylGroup, sub: ParabolicSubgroup) -> DoubleCosetDecomposition:
    """Partition ``w`` into ``W' x W'``; representatives are shortlex minimal.

    >>> from weylfold.root_systems import cartan_matrix
    >>> w = WeylGroup.from_cartan(cartan_matrix("A2"))
    >>> len(double_cosets(w, w.parabolic([1])))
    2
    """
    gens = sub.group.generators
    assigned: dict[int, int] = {}
    cosets: list[list[int]] = []
    # elements are already in shortlex order, so the first unassigned one is minimal
    for x in range(w.order):
        if x in assigned:
            continue
        a = len(cosets)
        assigned[x] = a
        members = [x]
        stack = [x]
        while stack:
            m = w.elements[stack.pop()].matrix
            for g in gens:
                for y in (mat_mul(g, m), mat_mul(m, g)):
                    j = w.index[y]
                    if j not in assigned:
                        assigned[j] = a
                        members.append(j)
                        stack.append(j)
        cosets.append(sorted(members))
    return DoubleCosetDecomposition(w, sub, cosets, [w.elements[c[0]] for c in cosets])


def left_cosets_count(w: WeylGroup, sub: ParabolicSubgroup) -> int:
    """Number of cosets ``x W'``, counted by explicit partition."""
    gens = sub.group.generators
    seen: set[int] = set()
    count = 0
    for x in range(w.order):
        if x in seen:
            continue
        count += 1
        seen.add(x)
        stack = [x]
        while stack:
            m = w.elements[stack.pop()].matrix
            for g in gens:
                j = w.index[mat_mul(m, g)]
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
    return count


def coxeter_exponent(cij: int, cji: int) -> int:
    return {0: 2, 1: 3, 2: 4, 3: 6}[cij * cji]


def check_coxeter_relations(w: WeylGroup) -> bool:
    """``(s_i s_j)^m_ij = Id`` exactly, with ``m_ij`` the smallest such exponent."""
    if w.cartan is None:
        raise InvalidInput("Coxeter relations need the Cartan matrix")
    c = w.cartan
    n = len(c)
    e = identity(n)
    for i, j in itertools.product(range(n), repeat=2):
        p = mat_mul(w.generators[i], w.generators[j])
        m = 1 if i == j else coxeter_exponent(c[i][j], c[j][i])
        acc = e
        for k in range(1, m + 1):
            acc = mat_mul(acc, p)
            if acc == e and k < m:
                return False
        if acc != e:
            return False
    return True


def reflection_matrix(form: Matrix, r: Vector) -> Matrix:
    """``v -> v - 2<r, v>/<r, r> r`` for the bilinear ``form`` in simple-root coordinates."""
    n = len(r)
    fr = mat_vec(form, r)
    rr = sum(a * b for a, b in zip(r, fr))
    return tuple(
        tuple(normalize(Fraction(1 if a == b else 0) - Fraction(2 * r[a] * fr[b]) / rr) for b in range(n))
        for a in range(n)
    )


def involutions_orthogonal_check(w: WeylGroup) -> bool:
    """Every involution is a product of reflections in mutually orthogonal roots.

    Searches, for each involution ``x``, over orthogonal sets of positive roots
    negated by ``x`` until their reflections multiply to ``x``.
    """
    if w.cartan is None:
        raise InvalidInput("root system needed: build the group from a Cartan matrix")
    c = w.cartan
    form = symmetric_form(c)
    pos = [r for r in roots_from_cartan(c) if all(x >= 0 for x in r)]
    refl = {r: reflection_matrix(form, r) for r in pos}
    n = len(c)
    e = identity(n)

    def bil(a, b):
        return sum(a[i] * form[i][j] * b[j] for i in range(n) for j in range(n))

    for el in w.elements:
        x = el.matrix
        if x == e or mat_mul(x, x) != e:
            continue
        neg = [r for r in pos if mat_vec(x, r) == tuple(-t for t in r)]
        target = n - len(nullspace(mat_sub(x, e), n))

        def search(chosen: list, start: int, acc: Matrix) -> bool:
            if len(chosen) == target:
                return acc == x
            for k in range(start, len(neg)):
                r = neg[k]
                if all(bil(r, q) == 0 for q in chosen):
                    if search(chosen + [r], k + 1, mat_mul(acc, refl[r])):
                        return True
            return False

        if not search([], 0, e):
            return False
    return True


def root_permutation_order(c: Matrix, budget: int | None = None) -> int:
    """``|W|`` from the permutation action of the simple reflections on the roots.

    Independent of the matrix enumeration: elements are permutations of the
    root list, closed under composition.
    """
    from .root_systems import reflect

    budget = default_budget() if budget is None else budget
    rts = roots_from_cartan(c)
    pos = {r: k for k, r in enumerate(rts)}
    gens = [tuple(pos[reflect(c, i, r)] for r in rts) for i in range(len(c))]
    e = tuple(range(len(rts)))
    seen = {e}
    stack = [e]
    while stack:
        p = stack.pop()
        for g in gens:
            q = tuple(g[k] for k in p)
            if q not in seen:
                seen.add(q)
                if len(seen) > budget:
                    raise BudgetExceeded(f"enumeration budget exceeded ({budget} elements)")
                stack.append(q)
    return len(seen)
